//! Output entries: the ten report templates, their parser and structural matching.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::app::{DbChangeEvent, DbChangeKind, OutputEvent, Record, Widget, WidgetKind, WidgetState, WidgetValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    Gui,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntryKind {
    Menu,
    Button,
    TextField,
    ListField,
    ComboBox,
    Grid,
    Window,
    DbInsert,
    DbDelete,
    DbUpdate,
}

/// One report line. Input-field states are kept in the widget vocabulary;
/// the rendered text says "enabled" for editable/selectable fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputEntry {
    Menu { label: String, state: WidgetState },
    Button { label: String, state: WidgetState },
    TextField { label: String, value: Option<String>, state: WidgetState },
    ListField { label: String, values: Vec<String>, value: Option<String>, state: WidgetState },
    ComboBox { label: String, values: Vec<String>, marked: Vec<String>, state: WidgetState },
    Grid { columns: Vec<String>, items: usize },
    Window { title: String, state: WidgetState },
    DbInsert { table: String, record: Record },
    DbDelete { table: String, record: Record },
    DbUpdate { table: String, prior: Record, record: Record },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EntryError {
    #[error("no template matches {0:?}")]
    NoTemplate(String),
    #[error("malformed {what} at byte {at} of {text:?}")]
    Malformed { what: &'static str, at: usize, text: String },
    #[error("state {state:?} is not valid for {kind:?}")]
    BadState { kind: WidgetKind, state: WidgetState },
}

impl OutputEntry {
    pub fn channel(&self) -> Channel {
        match self {
            OutputEntry::DbInsert { .. } | OutputEntry::DbDelete { .. } | OutputEntry::DbUpdate { .. } => Channel::Db,
            _ => Channel::Gui,
        }
    }

    pub fn kind(&self) -> EntryKind {
        match self {
            OutputEntry::Menu { .. } => EntryKind::Menu,
            OutputEntry::Button { .. } => EntryKind::Button,
            OutputEntry::TextField { .. } => EntryKind::TextField,
            OutputEntry::ListField { .. } => EntryKind::ListField,
            OutputEntry::ComboBox { .. } => EntryKind::ComboBox,
            OutputEntry::Grid { .. } => EntryKind::Grid,
            OutputEntry::Window { .. } => EntryKind::Window,
            OutputEntry::DbInsert { .. } => EntryKind::DbInsert,
            OutputEntry::DbDelete { .. } => EntryKind::DbDelete,
            OutputEntry::DbUpdate { .. } => EntryKind::DbUpdate,
        }
    }

    pub fn from_widget(w: &Widget) -> Result<Self, EntryError> {
        if !w.kind.allowed_states().contains(&w.state) {
            return Err(EntryError::BadState { kind: w.kind, state: w.state });
        }
        let label = w.title_label.clone();
        let state = w.state;
        let text = || match &w.value {
            Some(WidgetValue::Text(s)) if !s.is_empty() => Some(s.clone()),
            _ => None,
        };
        Ok(match w.kind {
            WidgetKind::GraphicalMenu => OutputEntry::Menu { label, state },
            WidgetKind::Button => OutputEntry::Button { label, state },
            WidgetKind::TextField => OutputEntry::TextField { label, value: text(), state },
            WidgetKind::ListField => {
                OutputEntry::ListField { label, values: w.possible_values.clone(), value: text(), state }
            }
            WidgetKind::ComboBoxField => OutputEntry::ComboBox {
                label,
                values: w.possible_values.clone(),
                marked: match &w.value {
                    Some(WidgetValue::Marked(m)) => m.clone(),
                    _ => Vec::new(),
                },
                state,
            },
            WidgetKind::DataGrid => OutputEntry::Grid {
                columns: w.column_labels.clone(),
                items: match w.value {
                    Some(WidgetValue::Items(n)) => n,
                    _ => 0,
                },
            },
            WidgetKind::Window => OutputEntry::Window { title: label, state },
        })
    }

    pub fn from_db(e: &DbChangeEvent) -> Self {
        let table = e.table_name.clone();
        let record = e.record.clone();
        match e.kind {
            DbChangeKind::Insert => OutputEntry::DbInsert { table, record },
            DbChangeKind::Delete => OutputEntry::DbDelete { table, record },
            DbChangeKind::Update => OutputEntry::DbUpdate {
                table,
                prior: e.prior_record.clone().unwrap_or_default(),
                record,
            },
        }
    }
}

/// Formats a GUI or database event with its template.
pub fn format_output_entry(event: &OutputEvent) -> Result<OutputEntry, EntryError> {
    match event {
        OutputEvent::Gui(g) => OutputEntry::from_widget(&g.widget),
        OutputEvent::Db(d) => Ok(OutputEntry::from_db(d)),
    }
}

fn push_quoted(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

fn push_list(out: &mut String, items: &[String]) {
    out.push('(');
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        push_quoted(out, v);
    }
    out.push(')');
}

const RECORD_SPECIAL: [char; 5] = [',', '=', '⟨', '⟩', '\\'];

fn push_record_part(out: &mut String, s: &str) {
    for c in s.chars() {
        if RECORD_SPECIAL.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
}

fn push_record(out: &mut String, r: &Record) {
    out.push('⟨');
    for (i, (k, v)) in r.0.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        push_record_part(out, k);
        out.push('=');
        push_record_part(out, v);
    }
    out.push('⟩');
}

fn state_word(state: WidgetState) -> &'static str {
    match state {
        WidgetState::Editable | WidgetState::Selectable => "enabled",
        s => s.as_str(),
    }
}

impl fmt::Display for OutputEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self {
            OutputEntry::Menu { label, state } => {
                s.push_str("GUI: Menu ");
                push_quoted(&mut s, label);
                write!(s, " {}", state_word(*state))?;
            }
            OutputEntry::Button { label, state } => {
                s.push_str("GUI: Button ");
                push_quoted(&mut s, label);
                write!(s, " {}", state_word(*state))?;
            }
            OutputEntry::TextField { label, value, state } => {
                s.push_str("GUI: Text field ");
                push_quoted(&mut s, label);
                s.push_str(" as ");
                match value {
                    Some(v) => push_quoted(&mut s, v),
                    None => s.push_str("⟨empty⟩"),
                }
                write!(s, " {}", state_word(*state))?;
            }
            OutputEntry::ListField { label, values, value, state } => {
                s.push_str("GUI: List field ");
                push_quoted(&mut s, label);
                s.push(' ');
                push_list(&mut s, values);
                s.push_str(" as ");
                match value {
                    Some(v) => push_quoted(&mut s, v),
                    None => s.push_str("⟨empty⟩"),
                }
                write!(s, " {}", state_word(*state))?;
            }
            OutputEntry::ComboBox { label, values, marked, state } => {
                s.push_str("GUI: Combo-box field ");
                push_quoted(&mut s, label);
                s.push(' ');
                push_list(&mut s, values);
                s.push_str(" marked at ");
                if marked.is_empty() {
                    s.push_str("⟨empty⟩");
                } else {
                    push_list(&mut s, marked);
                }
                write!(s, " {}", state_word(*state))?;
            }
            OutputEntry::Grid { columns, items } => {
                s.push_str("GUI: Grid with columns");
                for (i, c) in columns.iter().enumerate() {
                    s.push_str(if i == 0 { " " } else { ", " });
                    push_quoted(&mut s, c);
                }
                write!(s, " as {items} items")?;
            }
            OutputEntry::Window { title, state } => {
                s.push_str("GUI: Window ");
                push_quoted(&mut s, title);
                write!(s, " in {}", state.as_str())?;
            }
            OutputEntry::DbInsert { table, record } => {
                write!(s, "DB: new record in Table {table} ")?;
                push_record(&mut s, record);
            }
            OutputEntry::DbDelete { table, record } => {
                write!(s, "DB: deleted record in Table {table} was ")?;
                push_record(&mut s, record);
            }
            OutputEntry::DbUpdate { table, prior, record } => {
                write!(s, "DB: update in Table {table} as ")?;
                push_record(&mut s, prior);
                s.push_str(" → ");
                push_record(&mut s, record);
            }
        }
        f.write_str(&s)
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn err(&self, what: &'static str) -> EntryError {
        EntryError::Malformed { what, at: self.pos, text: self.text.to_string() }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str, what: &'static str) -> Result<(), EntryError> {
        if self.eat(lit) { Ok(()) } else { Err(self.err(what)) }
    }

    fn quoted(&mut self) -> Result<String, EntryError> {
        self.expect("\"", "opening quote")?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some((_, n)) => out.push(n),
                    None => return Err(self.err("escape")),
                },
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                c => out.push(c),
            }
        }
        Err(self.err("closing quote"))
    }

    fn list(&mut self) -> Result<Vec<String>, EntryError> {
        self.expect("(", "value list")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.quoted()?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(", ", "list separator")?;
        }
    }

    fn optional_quoted(&mut self) -> Result<Option<String>, EntryError> {
        if self.eat("⟨empty⟩") { Ok(None) } else { self.quoted().map(Some) }
    }

    /// Record text; `⟨*⟩` parses to the wildcard record.
    fn record(&mut self) -> Result<Record, EntryError> {
        self.expect("⟨", "record")?;
        if self.eat("*⟩") {
            return Ok(wildcard_record());
        }
        let mut pairs = Vec::new();
        if self.eat("⟩") {
            return Ok(Record(pairs));
        }
        loop {
            let key = self.record_part('=')?;
            self.expect("=", "record '='")?;
            let value = self.record_part(',')?;
            pairs.push((key, value));
            if self.eat("⟩") {
                return Ok(Record(pairs));
            }
            self.expect(", ", "record separator")?;
        }
    }

    fn record_part(&mut self, stop: char) -> Result<String, EntryError> {
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            if c == '\\' {
                match chars.next() {
                    Some((_, n)) => out.push(n),
                    None => return Err(self.err("record escape")),
                }
            } else if c == stop || c == '⟩' || (stop == '=' && c == ',') {
                self.pos += i;
                return Ok(out);
            } else {
                out.push(c);
            }
        }
        Err(self.err("record end"))
    }

    fn until_space(&mut self) -> String {
        let rest = self.rest();
        let end = rest.find(' ').unwrap_or(rest.len());
        self.pos += end;
        rest[..end].to_string()
    }

    fn state(&mut self, kind: WidgetKind) -> Result<WidgetState, EntryError> {
        let word = self.rest().to_string();
        self.pos = self.text.len();
        let s = match (kind, word.as_str()) {
            (WidgetKind::TextField, "enabled") => WidgetState::Editable,
            (WidgetKind::ListField | WidgetKind::ComboBoxField, "enabled") => WidgetState::Selectable,
            (_, "enabled") => WidgetState::Enabled,
            (_, "disabled") => WidgetState::Disabled,
            (_, "blocked") => WidgetState::Blocked,
            (_, "foreground") => WidgetState::Foreground,
            (_, "background") => WidgetState::Background,
            _ => return Err(self.err("state")),
        };
        if kind.allowed_states().contains(&s) {
            Ok(s)
        } else {
            Err(EntryError::BadState { kind, state: s })
        }
    }

    fn done(&self) -> Result<(), EntryError> {
        if self.pos == self.text.len() { Ok(()) } else { Err(self.err("trailing text")) }
    }
}

/// The record written `⟨*⟩` in check predicates.
pub fn wildcard_record() -> Record {
    Record(vec![("*".into(), "*".into())])
}

impl FromStr for OutputEntry {
    type Err = EntryError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor { text, pos: 0 };
        let entry = if c.eat("GUI: Menu ") {
            let label = c.quoted()?;
            c.expect(" ", "space")?;
            OutputEntry::Menu { label, state: c.state(WidgetKind::GraphicalMenu)? }
        } else if c.eat("GUI: Button ") {
            let label = c.quoted()?;
            c.expect(" ", "space")?;
            OutputEntry::Button { label, state: c.state(WidgetKind::Button)? }
        } else if c.eat("GUI: Text field ") {
            let label = c.quoted()?;
            c.expect(" as ", "' as '")?;
            let value = c.optional_quoted()?;
            c.expect(" ", "space")?;
            OutputEntry::TextField { label, value, state: c.state(WidgetKind::TextField)? }
        } else if c.eat("GUI: List field ") {
            let label = c.quoted()?;
            c.expect(" ", "space")?;
            let values = c.list()?;
            c.expect(" as ", "' as '")?;
            let value = c.optional_quoted()?;
            c.expect(" ", "space")?;
            OutputEntry::ListField { label, values, value, state: c.state(WidgetKind::ListField)? }
        } else if c.eat("GUI: Combo-box field ") {
            let label = c.quoted()?;
            c.expect(" ", "space")?;
            let values = c.list()?;
            c.expect(" marked at ", "' marked at '")?;
            let marked = if c.eat("⟨empty⟩") { Vec::new() } else { c.list()? };
            c.expect(" ", "space")?;
            OutputEntry::ComboBox { label, values, marked, state: c.state(WidgetKind::ComboBoxField)? }
        } else if c.eat("GUI: Grid with columns") {
            let mut columns = Vec::new();
            if c.eat(" ") && c.rest().starts_with('"') {
                loop {
                    columns.push(c.quoted()?);
                    if !c.eat(", ") {
                        break;
                    }
                }
                c.expect(" as ", "' as '")?;
            } else {
                c.expect("as ", "' as '")?;
            }
            let n = c.until_space();
            let items = n.parse().map_err(|_| c.err("item count"))?;
            c.expect(" items", "' items'")?;
            OutputEntry::Grid { columns, items }
        } else if c.eat("GUI: Window ") {
            let title = c.quoted()?;
            c.expect(" in ", "' in '")?;
            OutputEntry::Window { title, state: c.state(WidgetKind::Window)? }
        } else if c.eat("DB: new record in Table ") {
            let table = c.until_space();
            c.expect(" ", "space")?;
            OutputEntry::DbInsert { table, record: c.record()? }
        } else if c.eat("DB: deleted record in Table ") {
            let table = c.until_space();
            c.expect(" was ", "' was '")?;
            OutputEntry::DbDelete { table, record: c.record()? }
        } else if c.eat("DB: update in Table ") {
            let table = c.until_space();
            c.expect(" as ", "' as '")?;
            let prior = c.record()?;
            c.expect(" → ", "' → '")?;
            OutputEntry::DbUpdate { table, prior, record: c.record()? }
        } else {
            return Err(EntryError::NoTemplate(text.to_string()));
        };
        c.done()?;
        Ok(entry)
    }
}

fn glob_eq(pattern: &str, value: &str) -> bool {
    pattern == "*" || pattern == value
}

fn list_eq(pattern: &[String], value: &[String]) -> bool {
    (pattern.len() == 1 && pattern[0] == "*")
        || (pattern.len() == value.len() && pattern.iter().zip(value).all(|(p, v)| glob_eq(p, v)))
}

fn opt_eq(pattern: &Option<String>, value: &Option<String>) -> bool {
    match (pattern, value) {
        (Some(p), _) if p == "*" => true,
        (p, v) => p == v,
    }
}

fn record_eq(pattern: &Record, value: &Record) -> bool {
    if *pattern == wildcard_record() {
        return true;
    }
    // every listed column must match; unlisted columns are unconstrained
    pattern.0.iter().all(|(k, p)| value.get(k).is_some_and(|v| glob_eq(p, v)))
}

/// Structural match of `pattern` against `entry`: a field equal to `*` (or a
/// value list `("*")`, or the record `⟨*⟩`) matches anything; record patterns
/// constrain only the columns they name.
pub fn entry_matches(pattern: &OutputEntry, entry: &OutputEntry) -> bool {
    use OutputEntry as E;
    match (pattern, entry) {
        (E::Menu { label: pl, state: ps }, E::Menu { label, state })
        | (E::Button { label: pl, state: ps }, E::Button { label, state }) => glob_eq(pl, label) && ps == state,
        (E::TextField { label: pl, value: pv, state: ps }, E::TextField { label, value, state }) => {
            glob_eq(pl, label) && opt_eq(pv, value) && ps == state
        }
        (
            E::ListField { label: pl, values: pvs, value: pv, state: ps },
            E::ListField { label, values, value, state },
        ) => glob_eq(pl, label) && list_eq(pvs, values) && opt_eq(pv, value) && ps == state,
        (
            E::ComboBox { label: pl, values: pvs, marked: pm, state: ps },
            E::ComboBox { label, values, marked, state },
        ) => glob_eq(pl, label) && list_eq(pvs, values) && list_eq(pm, marked) && ps == state,
        (E::Grid { columns: pc, items: pi }, E::Grid { columns, items }) => list_eq(pc, columns) && pi == items,
        (E::Window { title: pt, state: ps }, E::Window { title, state }) => glob_eq(pt, title) && ps == state,
        (E::DbInsert { table: pt, record: pr }, E::DbInsert { table, record })
        | (E::DbDelete { table: pt, record: pr }, E::DbDelete { table, record }) => {
            glob_eq(pt, table) && record_eq(pr, record)
        }
        (E::DbUpdate { table: pt, prior: pp, record: pr }, E::DbUpdate { table, prior, record }) => {
            glob_eq(pt, table) && record_eq(pp, prior) && record_eq(pr, record)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_line() {
        let e = OutputEntry::Window { title: "Invoices".into(), state: WidgetState::Foreground };
        assert_eq!(e.to_string(), "GUI: Window \"Invoices\" in foreground");
    }

    #[test]
    fn list_line() {
        let e = OutputEntry::ListField {
            label: "State".into(),
            values: vec!["not Sent".into(), "Sent".into(), "Replied".into()],
            value: Some("Sent".into()),
            state: WidgetState::Selectable,
        };
        let s = e.to_string();
        assert_eq!(s, "GUI: List field \"State\" (\"not Sent\", \"Sent\", \"Replied\") as \"Sent\" enabled");
        assert_eq!(s.parse::<OutputEntry>().unwrap(), e);
    }

    #[test]
    fn record_escapes_roundtrip() {
        let e = OutputEntry::DbUpdate {
            table: "T".into(),
            prior: Record(vec![("A,B".into(), "x=⟨y⟩".into())]),
            record: Record(vec![("A".into(), "\\".into()), ("C".into(), "".into())]),
        };
        assert_eq!(e.to_string().parse::<OutputEntry>().unwrap(), e);
    }

    #[test]
    fn empty_grid() {
        let e = OutputEntry::Grid { columns: vec![], items: 0 };
        assert_eq!(e.to_string(), "GUI: Grid with columns as 0 items");
        assert_eq!(e.to_string().parse::<OutputEntry>().unwrap(), e);
    }

    #[test]
    fn wildcards() {
        let p: OutputEntry = "DB: new record in Table INVOICES ⟨EMAIL=*⟩".parse().unwrap();
        let e: OutputEntry = "DB: new record in Table INVOICES ⟨NAME=Paul, EMAIL=paul@red.it⟩".parse().unwrap();
        assert!(entry_matches(&p, &e));
        let any: OutputEntry = "DB: new record in Table * ⟨*⟩".parse().unwrap();
        assert!(entry_matches(&any, &e));
        let w: OutputEntry = "GUI: Window \"*\" in foreground".parse().unwrap();
        assert!(!entry_matches(&w, &e));
    }

    #[test]
    fn rejects_unknown() {
        assert!(matches!("GUI: Slider \"x\"".parse::<OutputEntry>(), Err(EntryError::NoTemplate(_))));
        assert!("GUI: Button \"x\" editable".parse::<OutputEntry>().is_err());
    }
}
