//! Live state of a simulated application and its transition function.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::action::{Action, Affordance, Verb};
use super::event::{DbChangeEvent, GuiChangeKind, GuiEvent, OutputEvent, Record};
use super::gui::{GuiState, Widget, WidgetId, WidgetKind, WidgetState, WidgetValue};
use super::spec::{AppSpec, EntityTypeSpec, ValueKind};
use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrudOp {
    New,
    View,
    Edit,
    Delete,
}

/// What a widget does in the application, independent of how it looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WidgetRole {
    EntityMenu(usize),
    DecoyMenu(usize),
    Crud { entity: usize, op: CrudOp },
    Submit { entity: usize },
    CloseForm { entity: usize },
    CloseView { entity: usize },
    CloseInfo(usize),
    Tab { entity: usize, tab: usize },
    Field { entity: usize, field: usize },
    Grid { entity: usize },
    Window,
}

impl WidgetRole {
    /// Top-bar actions: entity menus and decoys alike.
    pub fn is_menu(self) -> bool {
        matches!(self, WidgetRole::EntityMenu(_) | WidgetRole::DecoyMenu(_))
    }
}

#[derive(Debug, Clone)]
struct FormLayout {
    window: WidgetId,
    save: WidgetId,
    close: WidgetId,
    tabs: Vec<WidgetId>,
    fields: Vec<WidgetId>,
}

#[derive(Debug, Clone)]
struct ViewLayout {
    window: WidgetId,
    close: WidgetId,
    fields: Vec<WidgetId>,
}

#[derive(Debug, Clone)]
struct EntityLayout {
    page: WidgetId,
    new: Option<WidgetId>,
    grid: WidgetId,
    view: Option<WidgetId>,
    edit: Option<WidgetId>,
    delete: Option<WidgetId>,
    new_form: FormLayout,
    edit_form: FormLayout,
    view_window: ViewLayout,
}

/// Stable widget ids for every widget the application can ever show.
#[derive(Debug, Clone)]
struct Layout {
    top_bar: Vec<WidgetId>,
    home: WidgetId,
    entities: Vec<EntityLayout>,
    info: Vec<(WidgetId, WidgetId)>,
    roles: BTreeMap<WidgetId, WidgetRole>,
}

impl Layout {
    fn build(spec: &AppSpec) -> Self {
        let mut next = 0u32;
        let mut roles = BTreeMap::new();
        let mut alloc = |role: WidgetRole| {
            next += 1;
            let id = WidgetId(next);
            roles.insert(id, role);
            id
        };
        let entity_count = spec.entity_types.len();
        let top_bar = (0..spec.global_menu_actions)
            .map(|i| {
                alloc(if i < entity_count {
                    WidgetRole::EntityMenu(i)
                } else {
                    WidgetRole::DecoyMenu(i - entity_count)
                })
            })
            .collect();
        let home = alloc(WidgetRole::Window);
        let mut entities = Vec::new();
        for (e, entity) in spec.entity_types.iter().enumerate() {
            let page = alloc(WidgetRole::Window);
            let new = entity.has_new.then(|| alloc(WidgetRole::Crud { entity: e, op: CrudOp::New }));
            let grid = alloc(WidgetRole::Grid { entity: e });
            let view = entity.has_view.then(|| alloc(WidgetRole::Crud { entity: e, op: CrudOp::View }));
            let edit = entity.has_edit.then(|| alloc(WidgetRole::Crud { entity: e, op: CrudOp::Edit }));
            let delete =
                entity.has_delete.then(|| alloc(WidgetRole::Crud { entity: e, op: CrudOp::Delete }));
            let form = |alloc: &mut dyn FnMut(WidgetRole) -> WidgetId| FormLayout {
                window: alloc(WidgetRole::Window),
                save: alloc(WidgetRole::Submit { entity: e }),
                close: alloc(WidgetRole::CloseForm { entity: e }),
                tabs: if entity.tabs > 1 {
                    (0..entity.tabs).map(|t| alloc(WidgetRole::Tab { entity: e, tab: t })).collect()
                } else {
                    Vec::new()
                },
                fields: (0..entity.fields.len())
                    .map(|f| alloc(WidgetRole::Field { entity: e, field: f }))
                    .collect(),
            };
            let new_form = form(&mut alloc);
            let edit_form = form(&mut alloc);
            let view_window = ViewLayout {
                window: alloc(WidgetRole::Window),
                close: alloc(WidgetRole::CloseView { entity: e }),
                fields: (0..entity.fields.len())
                    .map(|f| alloc(WidgetRole::Field { entity: e, field: f }))
                    .collect(),
            };
            entities.push(EntityLayout {
                page,
                new,
                grid,
                view,
                edit,
                delete,
                new_form,
                edit_form,
                view_window,
            });
        }
        let info = (0..spec.decoy_count())
            .map(|d| (alloc(WidgetRole::Window), alloc(WidgetRole::CloseInfo(d))))
            .collect();
        Layout { top_bar, home, entities, info, roles }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum FieldValue {
    Text(String),
    Marked(Vec<String>),
}

impl FieldValue {
    fn is_empty(&self) -> bool {
        match self {
            FieldValue::Text(s) => s.is_empty(),
            FieldValue::Marked(v) => v.is_empty(),
        }
    }

    fn as_stored(&self) -> String {
        match self {
            FieldValue::Text(s) => s.clone(),
            FieldValue::Marked(v) => v.join("; "),
        }
    }

    fn to_widget_value(&self) -> WidgetValue {
        match self {
            FieldValue::Text(s) => WidgetValue::Text(s.clone()),
            FieldValue::Marked(v) => WidgetValue::Marked(v.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum FormMode {
    New,
    Edit { record: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum Screen {
    Home,
    Page(usize),
    Form { entity: usize, mode: FormMode, tab: usize, values: Vec<FieldValue> },
    View { entity: usize, record: u64 },
    Info(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub id: u64,
    pub record: Record,
}

/// One executed action together with what it touched and produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutedStep {
    pub action: Action,
    /// Title label of the target widget at execution time.
    pub label: String,
    pub kind: WidgetKind,
    pub role: WidgetRole,
    pub events: Vec<OutputEvent>,
}

impl ExecutedStep {
    pub fn db_events(&self) -> impl Iterator<Item = &DbChangeEvent> {
        self.events.iter().filter_map(OutputEvent::as_db)
    }
}

#[derive(Debug, Clone)]
pub struct WorldState {
    spec: Arc<AppSpec>,
    layout: Arc<Layout>,
    /// Bottom to top; the last screen is in the foreground.
    stack: Vec<Screen>,
    db: BTreeMap<String, Vec<Row>>,
    change_log: Vec<DbChangeEvent>,
    rng: ChaCha8Rng,
    gui: GuiState,
}

#[derive(Serialize)]
struct Snapshot<'a> {
    stack: &'a [Screen],
    db: &'a BTreeMap<String, Vec<Row>>,
    change_log: &'a [DbChangeEvent],
    rng: &'a ChaCha8Rng,
}

impl WorldState {
    /// Builds the application on its home page with the initial records loaded.
    pub fn build(spec: &AppSpec) -> Result<Self, SimError> {
        spec.validate()?;
        let layout = Layout::build(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut db = BTreeMap::new();
        for entity in &spec.entity_types {
            let rows = (0..entity.initial_records)
                .map(|i| Row { id: i as u64 + 1, record: sample_record(entity, i, &mut rng) })
                .collect();
            db.insert(entity.table_name(), rows);
        }
        let mut world = WorldState {
            spec: Arc::new(spec.clone()),
            layout: Arc::new(layout),
            stack: vec![Screen::Home],
            db,
            change_log: Vec::new(),
            rng,
            gui: GuiState::default(),
        };
        world.gui = world.render();
        Ok(world)
    }

    pub fn spec(&self) -> &AppSpec {
        &self.spec
    }

    pub fn gui(&self) -> &GuiState {
        &self.gui
    }

    pub fn table(&self, name: &str) -> &[Row] {
        self.db.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &[Row])> {
        self.db.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn change_log(&self) -> &[DbChangeEvent] {
        &self.change_log
    }

    pub fn role(&self, id: WidgetId) -> Option<WidgetRole> {
        self.layout.roles.get(&id).copied()
    }

    /// Canonical text form; equal worlds serialize to identical strings.
    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(&Snapshot {
            stack: &self.stack,
            db: &self.db,
            change_log: &self.change_log,
            rng: &self.rng,
        })
        .expect("world snapshot serializes")
    }

    /// Returns and clears change events accumulated since the last drain.
    pub fn drain_change_log(&mut self) -> Vec<DbChangeEvent> {
        std::mem::take(&mut self.change_log)
    }

    /// Every executable interaction, ordered by widget id then verb.
    pub fn affordances(&self) -> Vec<Affordance> {
        let mut out: Vec<Affordance> = self
            .gui
            .top_bar()
            .map(|w| Affordance {
                target: w.id,
                verb: if w.kind == WidgetKind::GraphicalMenu { Verb::Select } else { Verb::Click },
            })
            .collect();
        if let Some(&fg) = self.gui.windows.first() {
            for w in self.gui.widgets_in(fg) {
                let verb = match (w.kind, w.state) {
                    (WidgetKind::Button, WidgetState::Enabled) => Verb::Click,
                    (WidgetKind::TextField, WidgetState::Editable) => Verb::Fill,
                    (WidgetKind::ListField | WidgetKind::ComboBoxField, WidgetState::Selectable) => {
                        Verb::Pick
                    }
                    _ => continue,
                };
                out.push(Affordance { target: w.id, verb });
            }
        }
        out.sort();
        out
    }

    pub fn is_enabled(&self, action: &Action) -> bool {
        if !self.affordances().contains(&action.affordance()) {
            return false;
        }
        match (action.verb(), self.gui.widget(action.target())) {
            (Verb::Pick, Some(w)) => w.possible_values.iter().any(|v| Some(v.as_str()) == action.input()),
            _ => true,
        }
    }

    /// Active tab and tab-button ids of the foreground form, if it has tabs.
    pub fn form_tabs(&self) -> Option<(usize, Vec<WidgetId>)> {
        match self.stack.last() {
            Some(Screen::Form { entity, mode, tab, .. }) => {
                let form = self.form_layout(*entity, *mode);
                (!form.tabs.is_empty()).then(|| (*tab, form.tabs.clone()))
            }
            _ => None,
        }
    }

    /// Submit button of the foreground form.
    pub fn form_submit(&self) -> Option<WidgetId> {
        match self.stack.last() {
            Some(Screen::Form { entity, mode, .. }) => Some(self.form_layout(*entity, *mode).save),
            _ => None,
        }
    }

    /// Executes `action`, then runs the widget bookkeeping needed for reports.
    pub fn step(&mut self, action: &Action) -> Result<ExecutedStep, SimError> {
        let (label, kind) = match self.gui.widget(action.target()) {
            Some(w) => (w.title_label.clone(), w.kind),
            None => return Err(SimError::NotEnabled(action.to_string())),
        };
        let role = self.role(action.target()).ok_or_else(|| SimError::NotEnabled(action.to_string()))?;
        let events = self.execute(action)?;
        Ok(ExecutedStep { action: action.clone(), label, kind, role, events })
    }

    /// Applies `action` and returns every GUI change plus the database events
    /// it committed. Actions that are not currently enabled are rejected.
    pub fn execute(&mut self, action: &Action) -> Result<Vec<OutputEvent>, SimError> {
        if !self.is_enabled(action) {
            return Err(SimError::NotEnabled(action.to_string()));
        }
        let role = self.layout.roles[&action.target()];
        let mut db_events = Vec::new();
        match role {
            WidgetRole::EntityMenu(e) => self.stack = vec![Screen::Page(e)],
            WidgetRole::DecoyMenu(d) => {
                if matches!(self.stack.last(), Some(Screen::Info(_))) {
                    self.stack.pop();
                }
                self.stack.push(Screen::Info(d));
            }
            WidgetRole::Crud { entity, op } => self.open_crud(entity, op, &mut db_events),
            WidgetRole::Submit { .. } => {
                if let Some(Screen::Form { entity, mode, values, .. }) = self.stack.pop() {
                    self.submit(entity, mode, &values, &mut db_events);
                }
            }
            WidgetRole::CloseForm { .. } | WidgetRole::CloseView { .. } | WidgetRole::CloseInfo(_) => {
                self.stack.pop();
            }
            WidgetRole::Tab { tab: t, .. } => {
                if let Some(Screen::Form { tab, .. }) = self.stack.last_mut() {
                    *tab = t;
                }
            }
            WidgetRole::Field { entity, field } => {
                let kind = self.spec.entity_types[entity].fields[field].kind;
                let input = action.input().unwrap_or_default().to_string();
                if let Some(Screen::Form { values, .. }) = self.stack.last_mut() {
                    let slot = &mut values[field];
                    match (kind, slot) {
                        (ValueKind::Combo, FieldValue::Marked(marked)) => {
                            if let Some(pos) = marked.iter().position(|m| *m == input) {
                                marked.remove(pos);
                            } else {
                                marked.push(input);
                            }
                        }
                        (_, slot) => *slot = FieldValue::Text(input),
                    }
                }
            }
            WidgetRole::Grid { .. } | WidgetRole::Window => {
                unreachable!("grids and windows offer no affordance")
            }
        }
        let next = self.render();
        let mut events = diff(&self.gui, &next);
        self.gui = next;
        for e in db_events {
            self.change_log.push(e.clone());
            events.push(OutputEvent::Db(e));
        }
        Ok(events)
    }

    fn entity(&self, e: usize) -> &EntityTypeSpec {
        &self.spec.entity_types[e]
    }

    fn form_layout(&self, entity: usize, mode: FormMode) -> &FormLayout {
        let layout = &self.layout.entities[entity];
        match mode {
            FormMode::New => &layout.new_form,
            FormMode::Edit { .. } => &layout.edit_form,
        }
    }

    fn pick_record(&mut self, entity: usize) -> Option<u64> {
        let table = self.entity(entity).table_name();
        let rows = self.db.get(&table)?;
        if rows.is_empty() {
            return None;
        }
        let i = self.rng.random_range(0..rows.len());
        Some(rows[i].id)
    }

    fn open_crud(&mut self, entity: usize, op: CrudOp, db_events: &mut Vec<DbChangeEvent>) {
        let spec = self.spec.clone();
        let e = &spec.entity_types[entity];
        match op {
            CrudOp::New => {
                let values = e
                    .fields
                    .iter()
                    .map(|f| initial_value(f.kind, f.initial.as_deref()))
                    .collect();
                self.stack.push(Screen::Form { entity, mode: FormMode::New, tab: 0, values });
            }
            CrudOp::View => {
                if let Some(record) = self.pick_record(entity) {
                    self.stack.push(Screen::View { entity, record });
                }
            }
            CrudOp::Edit => {
                if let Some(id) = self.pick_record(entity) {
                    let row = self.row(entity, id).cloned();
                    let values = e
                        .fields
                        .iter()
                        .map(|f| {
                            // modifying a record means re-entering its mandatory data
                            if f.required && !f.kind.is_choice() {
                                return initial_value(f.kind, None);
                            }
                            let stored = if f.persist {
                                row.as_ref().and_then(|r| r.record.get(&f.column_name()))
                            } else {
                                None
                            };
                            match stored {
                                Some(v) if f.kind == ValueKind::Combo => FieldValue::Marked(
                                    v.split("; ").filter(|s| !s.is_empty()).map(String::from).collect(),
                                ),
                                Some(v) => FieldValue::Text(v.to_string()),
                                None => initial_value(f.kind, f.initial.as_deref()),
                            }
                        })
                        .collect();
                    self.stack.push(Screen::Form { entity, mode: FormMode::Edit { record: id }, tab: 0, values });
                }
            }
            CrudOp::Delete => {
                if let Some(id) = self.pick_record(entity) {
                    let table = e.table_name();
                    let rows = self.db.get_mut(&table).expect("table exists");
                    let pos = rows.iter().position(|r| r.id == id).expect("picked row exists");
                    let row = rows.remove(pos);
                    db_events.push(DbChangeEvent::delete(table, row.record));
                }
            }
        }
    }

    fn row(&self, entity: usize, id: u64) -> Option<&Row> {
        self.db
            .get(&self.entity(entity).table_name())
            .and_then(|rows| rows.iter().find(|r| r.id == id))
    }

    fn submit(&mut self, entity: usize, mode: FormMode, values: &[FieldValue], db_events: &mut Vec<DbChangeEvent>) {
        let spec = self.spec.clone();
        let e = &spec.entity_types[entity];
        let valid = e.fields.iter().zip(values).all(|(f, v)| {
            if v.is_empty() {
                return !f.required;
            }
            match v {
                FieldValue::Text(s) => f.kind.accepts(s),
                FieldValue::Marked(_) => true,
            }
        });
        if !valid {
            return;
        }
        let record: Record = e
            .fields
            .iter()
            .zip(values)
            .filter(|(f, _)| f.persist)
            .map(|(f, v)| (f.column_name(), v.as_stored()))
            .collect();
        let table = e.table_name();
        let rows = self.db.entry(table.clone()).or_default();
        match mode {
            FormMode::New => {
                let id = rows.iter().map(|r| r.id).max().unwrap_or(0) + 1;
                rows.push(Row { id, record: record.clone() });
                db_events.push(DbChangeEvent::insert(table, record));
            }
            FormMode::Edit { record: id } => {
                if let Some(row) = rows.iter_mut().find(|r| r.id == id) {
                    let prior = std::mem::replace(&mut row.record, record.clone());
                    db_events.push(DbChangeEvent::update(table, prior, record));
                }
            }
        }
    }

    fn render(&self) -> GuiState {
        let spec = &self.spec;
        let layout = &self.layout;
        let mut gui = GuiState::default();
        for (i, &id) in layout.top_bar.iter().enumerate() {
            let (label, kind) = if i < spec.entity_types.len() {
                (spec.entity_types[i].name.clone(), WidgetKind::GraphicalMenu)
            } else {
                let d = i - spec.entity_types.len();
                let kind = if d.is_multiple_of(2) { WidgetKind::GraphicalMenu } else { WidgetKind::Button };
                (spec.decoy_label(d), kind)
            };
            gui.widgets.insert(id, Widget::new(id, kind, label, WidgetState::Enabled));
        }
        let depth = self.stack.len();
        for (pos, screen) in self.stack.iter().enumerate().rev() {
            let state = if pos + 1 == depth { WidgetState::Foreground } else { WidgetState::Background };
            let mut add = |w: Widget| {
                gui.widgets.insert(w.id, w);
            };
            let window = match screen {
                Screen::Home => {
                    add(Widget::new(layout.home, WidgetKind::Window, "Home", state));
                    layout.home
                }
                Screen::Page(e) => {
                    let entity = &spec.entity_types[*e];
                    let l = &layout.entities[*e];
                    let count = self.table(&entity.table_name()).len();
                    add(Widget::new(l.page, WidgetKind::Window, entity.name.clone(), state));
                    let button = |id: WidgetId, label: String, enabled: bool| {
                        let st = if enabled { WidgetState::Enabled } else { WidgetState::Disabled };
                        Widget::new(id, WidgetKind::Button, label, st).in_window(l.page)
                    };
                    if let Some(id) = l.new {
                        add(button(id, format!("New {}", entity.singular_name()), true));
                    }
                    add(Widget::new(l.grid, WidgetKind::DataGrid, entity.name.clone(), WidgetState::Enabled)
                        .in_window(l.page)
                        .with_columns(entity.grid_columns.clone())
                        .with_value(WidgetValue::Items(count)));
                    for (id, label) in [(l.view, "View"), (l.edit, "Edit"), (l.delete, "Delete")] {
                        if let Some(id) = id {
                            add(button(id, label.to_string(), count > 0));
                        }
                    }
                    l.page
                }
                Screen::Form { entity, mode, tab, values } => {
                    let e = &spec.entity_types[*entity];
                    let f = self.form_layout(*entity, *mode);
                    let title = match mode {
                        FormMode::New => e.singular_name(),
                        FormMode::Edit { .. } => format!("Edit {}", e.singular_name()),
                    };
                    add(Widget::new(f.window, WidgetKind::Window, title, state));
                    add(Widget::new(f.save, WidgetKind::Button, "Save", WidgetState::Enabled).in_window(f.window));
                    add(Widget::new(f.close, WidgetKind::Button, "Close", WidgetState::Enabled).in_window(f.window));
                    for (t, &id) in f.tabs.iter().enumerate() {
                        let st = if t == *tab { WidgetState::Disabled } else { WidgetState::Enabled };
                        add(Widget::new(id, WidgetKind::Button, e.tab_name(t), st).in_window(f.window));
                    }
                    for (i, field) in e.fields.iter().enumerate() {
                        if field.tab != *tab {
                            continue;
                        }
                        add(field_widget(f.fields[i], field, &values[i], true).in_window(f.window));
                    }
                    f.window
                }
                Screen::View { entity, record } => {
                    let e = &spec.entity_types[*entity];
                    let v = &layout.entities[*entity].view_window;
                    add(Widget::new(v.window, WidgetKind::Window, format!("View {}", e.singular_name()), state));
                    add(Widget::new(v.close, WidgetKind::Button, "Close", WidgetState::Enabled).in_window(v.window));
                    let row = self.row(*entity, *record);
                    for (i, field) in e.fields.iter().enumerate() {
                        let stored = row
                            .filter(|_| field.persist)
                            .and_then(|r| r.record.get(&field.column_name()))
                            .map(|s| s.to_string());
                        let value = match (field.kind, stored) {
                            (ValueKind::Combo, Some(s)) => FieldValue::Marked(
                                s.split("; ").filter(|x| !x.is_empty()).map(String::from).collect(),
                            ),
                            (_, Some(s)) => FieldValue::Text(s),
                            (kind, None) => initial_value(kind, field.initial.as_deref()),
                        };
                        add(field_widget(v.fields[i], field, &value, false).in_window(v.window));
                    }
                    v.window
                }
                Screen::Info(d) => {
                    let (window, close) = layout.info[*d];
                    add(Widget::new(window, WidgetKind::Window, spec.decoy_label(*d), state));
                    add(Widget::new(close, WidgetKind::Button, "Close", WidgetState::Enabled).in_window(window));
                    window
                }
            };
            gui.windows.push(window);
        }
        gui.is_input_form = matches!(self.stack.last(), Some(Screen::Form { .. }));
        gui
    }
}

fn initial_value(kind: ValueKind, initial: Option<&str>) -> FieldValue {
    match (kind, initial) {
        (ValueKind::Combo, Some(v)) => FieldValue::Marked(vec![v.to_string()]),
        (ValueKind::Combo, None) => FieldValue::Marked(Vec::new()),
        (_, v) => FieldValue::Text(v.unwrap_or_default().to_string()),
    }
}

fn field_widget(id: WidgetId, field: &super::spec::FieldSpec, value: &FieldValue, editable: bool) -> Widget {
    let (kind, live) = match field.kind {
        ValueKind::List => (WidgetKind::ListField, WidgetState::Selectable),
        ValueKind::Combo => (WidgetKind::ComboBoxField, WidgetState::Selectable),
        _ => (WidgetKind::TextField, WidgetState::Editable),
    };
    let state = if editable { live } else { WidgetState::Blocked };
    Widget::new(id, kind, field.label.clone(), state)
        .with_value(value.to_widget_value())
        .with_options(field.options.clone())
}

fn sample_record(entity: &EntityTypeSpec, index: usize, rng: &mut ChaCha8Rng) -> Record {
    let n = index + 1;
    entity
        .fields
        .iter()
        .filter(|f| f.persist)
        .map(|f| {
            let value = match f.kind {
                ValueKind::Text => format!("{} {n}", f.label),
                ValueKind::Email => format!("user{n}@example.com"),
                ValueKind::Date => format!(
                    "{:02}-{:02}-20{:02}",
                    rng.random_range(1..=28),
                    rng.random_range(1..=12),
                    15 + index % 10
                ),
                ValueKind::NumericId => (1000 + n).to_string(),
                ValueKind::List | ValueKind::Combo => {
                    f.options[rng.random_range(0..f.options.len())].clone()
                }
            };
            (f.column_name(), value)
        })
        .collect()
}

/// GUI change events between two snapshots: window events first in stack
/// order, then widgets grouped by window and ordered by id, then removals.
fn diff(prev: &GuiState, next: &GuiState) -> Vec<OutputEvent> {
    let mut keyed: Vec<((u8, usize, WidgetId), GuiEvent)> = Vec::new();
    for (id, widget) in &next.widgets {
        let change = match prev.widgets.get(id) {
            None => GuiChangeKind::Appeared,
            Some(old) if old != widget => GuiChangeKind::Changed,
            Some(_) => continue,
        };
        let key = if widget.kind == WidgetKind::Window {
            (0, next.window_position(*id).unwrap_or(usize::MAX), *id)
        } else {
            let pos = widget.window.and_then(|w| next.window_position(w)).unwrap_or(usize::MAX);
            (1, pos, *id)
        };
        keyed.push((key, GuiEvent { change, widget: widget.clone() }));
    }
    for (id, widget) in &prev.widgets {
        if !next.widgets.contains_key(id) {
            keyed.push((
                (2, 0, *id),
                GuiEvent { change: GuiChangeKind::Disappeared, widget: widget.clone() },
            ));
        }
    }
    keyed.sort_by_key(|a| a.0);
    keyed.into_iter().map(|(_, e)| OutputEvent::Gui(e)).collect()
}
