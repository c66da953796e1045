//! Fixtures and independent oracles shared by several test targets.
#![allow(dead_code)]

use menuwalk::app::presets::Preset;
use menuwalk::app::{
    Action, DbChangeEvent, ExecutedStep, GuiChangeKind, GuiEvent, OutputEvent, Record, Verb, Widget, WidgetId,
    WidgetKind, WidgetRole, WidgetValue, WorldState,
};
use menuwalk::report::{describe_action, group_input_actions, ReportRow};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn find(world: &WorldState, kind: WidgetKind, label: &str) -> WidgetId {
    world
        .gui()
        .widgets
        .values()
        .find(|w| w.kind == kind && w.title_label == label)
        .unwrap_or_else(|| panic!("no {kind:?} {label}"))
        .id
}

/// Select Invoices, New Invoice, six fills, Save.
pub fn invoice_scenario() -> Vec<ExecutedStep> {
    let mut w = WorldState::build(&Preset::InvoiceDemo.spec()).unwrap();
    let mut steps = Vec::new();
    let menu = find(&w, WidgetKind::GraphicalMenu, "Invoices");
    steps.push(w.step(&Action::select(menu)).unwrap());
    let new = find(&w, WidgetKind::Button, "New Invoice");
    steps.push(w.step(&Action::click(new)).unwrap());
    for (label, value) in [
        ("Invoice Number", "2015.2"),
        ("Invoice Name", "Payment"),
        ("Client Data - Name", "Paul"),
        ("Client Data - Surname", "Red"),
        ("Client Data - Email", "paul@red.it"),
        ("Client Data - Country", "Italy"),
    ] {
        let f = find(&w, WidgetKind::TextField, label);
        steps.push(w.step(&Action::fill(f, value)).unwrap());
    }
    let save = find(&w, WidgetKind::Button, "Save");
    steps.push(w.step(&Action::click(save)).unwrap());
    steps
}

pub const T3_1: [&str; 6] = [
    "GUI: Window \"Invoices\" in foreground",
    "GUI: Button \"New Invoice\" enabled",
    "GUI: Grid with columns \"ID\", \"Name\", \"Data\", \"Action\" as 3 items",
    "GUI: Button \"View\" enabled",
    "GUI: Button \"Edit\" enabled",
    "GUI: Button \"Delete\" enabled",
];

pub const T3_2: [&str; 12] = [
    "GUI: Window \"Invoice\" in foreground",
    "GUI: Window \"Invoices\" in background",
    "GUI: Button \"Save\" enabled",
    "GUI: Button \"Close\" enabled",
    "GUI: Text field \"Invoice Number\" as ⟨empty⟩ enabled",
    "GUI: Text field \"Invoice Name\" as ⟨empty⟩ enabled",
    "GUI: List field \"State\" (\"not Sent\", \"Sent\", \"Replied\") as \"Sent\" enabled",
    "GUI: Text field \"Date\" as \"05-06-2015\" enabled",
    "GUI: Text field \"Client Data - Name\" as ⟨empty⟩ enabled",
    "GUI: Text field \"Client Data - Surname\" as ⟨empty⟩ enabled",
    "GUI: Text field \"Client Data - Email\" as ⟨empty⟩ enabled",
    "GUI: Text field \"Client Data - Country\" as ⟨empty⟩ enabled",
];

pub const T3_3_ACTIONS: [&str; 7] = [
    "Fill field \"Invoice Number\" as \"2015.2\"",
    "Fill field \"Invoice Name\" as \"Payment\"",
    "Fill field \"Client Data - Name\" as \"Paul\"",
    "Fill field \"Client Data - Surname\" as \"Red\"",
    "Fill field \"Client Data - Email\" as \"paul@red.it\"",
    "Fill field \"Client Data - Country\" as \"Italy\"",
    "Click button \"Save\"",
];

pub const T3_3_DB: &str =
    "DB: new record in Table INVOICES ⟨NUMBER=2015.2, LABEL=Payment, NAME=Paul, SURNAME=Red, EMAIL=paul@red.it, COUNTRY=Italy⟩";

fn label() -> impl Strategy<Value = String> {
    "[ -~⟨⟩→,=\"\\\\]{0,12}"
}

fn table() -> impl Strategy<Value = String> {
    "[A-Z_]{1,10}"
}

fn record() -> impl Strategy<Value = Record> {
    prop::collection::vec(("[ -~⟨⟩]{0,8}", "[ -~⟨⟩]{0,8}"), 0..4).prop_map(Record)
}

fn widget() -> impl Strategy<Value = Widget> {
    let kind = prop::sample::select(WidgetKind::ALL.to_vec());
    (kind, label(), any::<prop::sample::Index>(), prop::collection::vec(label(), 0..4), prop::option::of("[ -~]{1,8}"), 0usize..50)
        .prop_map(|(kind, label, si, options, value, n)| {
            let states = kind.allowed_states();
            let state = states[si.index(states.len())];
            let w = Widget::new(WidgetId(1), kind, label, state);
            match kind {
                WidgetKind::TextField => w.with_value(WidgetValue::Text(value.unwrap_or_default())),
                WidgetKind::ListField => w.with_options(options).with_value(WidgetValue::Text(value.unwrap_or_default())),
                WidgetKind::ComboBoxField => {
                    let marked = options.iter().take(n % 3).cloned().collect();
                    w.with_options(options).with_value(WidgetValue::Marked(marked))
                }
                WidgetKind::DataGrid => w.with_columns(options).with_value(WidgetValue::Items(n)),
                _ => w,
            }
        })
}

/// Any event a report can contain: every widget kind in every allowed state,
/// and all three database change kinds.
pub fn event() -> impl Strategy<Value = OutputEvent> {
    prop_oneof![
        widget().prop_map(|w| OutputEvent::Gui(GuiEvent { change: GuiChangeKind::Changed, widget: w })),
        (table(), record()).prop_map(|(t, r)| OutputEvent::Db(DbChangeEvent::insert(t, r))),
        (table(), record()).prop_map(|(t, r)| OutputEvent::Db(DbChangeEvent::delete(t, r))),
        (table(), record(), record()).prop_map(|(t, p, r)| OutputEvent::Db(DbChangeEvent::update(t, p, r))),
    ]
}

pub fn verbs() -> impl Strategy<Value = Vec<Verb>> {
    prop::collection::vec(prop::sample::select(vec![Verb::Select, Verb::Click, Verb::Fill, Verb::Pick]), 0..40)
}

pub fn fake_step(verb: Verb, i: usize) -> ExecutedStep {
    let (action, kind, role) = match verb {
        Verb::Select => (Action::select(WidgetId(1)), WidgetKind::GraphicalMenu, WidgetRole::EntityMenu(0)),
        Verb::Click => (Action::click(WidgetId(2)), WidgetKind::Button, WidgetRole::Window),
        Verb::Fill => (Action::fill(WidgetId(3), format!("v{i}")), WidgetKind::TextField, WidgetRole::Field { entity: 0, field: 0 }),
        Verb::Pick => (Action::pick(WidgetId(4), format!("o{i}")), WidgetKind::ListField, WidgetRole::Field { entity: 0, field: 1 }),
    };
    ExecutedStep { action, label: format!("w{i}"), kind, role, events: Vec::new() }
}

/// Checks the grouping of `steps` into `rows`: the concatenated row actions
/// are exactly the step descriptions, ids run T.1, T.2, ..., and every
/// maximal fill/pick run followed by a click is exactly one row.
pub fn grouping_holds(test_id: &str, steps: &[&ExecutedStep], rows: &[ReportRow]) -> Result<(), String> {
    let flat: Vec<String> = rows.iter().flat_map(|r| r.actions.clone()).collect();
    let expected: Vec<String> = steps.iter().map(|s| describe_action(s)).collect();
    if flat != expected {
        return Err(format!("{test_id}: row actions {flat:?} != steps {expected:?}"));
    }
    for (k, r) in rows.iter().enumerate() {
        if r.id != format!("{test_id}.{}", k + 1) {
            return Err(format!("{test_id}: row {k} is {}", r.id));
        }
    }
    let verbs: Vec<Verb> = steps.iter().map(|s| s.action.verb()).collect();
    let mut i = 0;
    while i < verbs.len() {
        if !verbs[i].takes_input() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < verbs.len() && verbs[j].takes_input() {
            j += 1;
        }
        if j < verbs.len() && verbs[j] == Verb::Click
            && !rows.iter().any(|r| r.first_step == i + 1 && r.last_step == j + 1)
        {
            return Err(format!("{test_id}: fill run {}..{} + click not one row", i + 1, j));
        }
        i = j;
    }
    Ok(())
}

pub fn grouping_holds_for_verbs(verbs: &[Verb]) -> Result<(), String> {
    let steps: Vec<ExecutedStep> = verbs.iter().enumerate().map(|(i, v)| fake_step(*v, i)).collect();
    let refs: Vec<&ExecutedStep> = steps.iter().collect();
    let rows = group_input_actions("T1", &refs).map_err(|e| e.to_string())?;
    grouping_holds("T1", &refs, &rows)
}

/// Exact one-tailed signed-rank p-value by listing all 2^n sign vectors,
/// with ranks computed pairwise.
pub fn brute_force_wilcoxon(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - a).filter(|v| *v != 0.0).collect();
    if d.is_empty() {
        return 1.0;
    }
    let n = d.len();
    let rank = |i: usize| {
        let a = d[i].abs();
        let below = d.iter().filter(|v| v.abs() < a).count() as f64;
        let equal = d.iter().filter(|v| v.abs() == a).count() as f64;
        below + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = (0..n).map(rank).collect();
    let observed: f64 = (0..n).filter(|&i| d[i] > 0.0).map(|i| ranks[i]).sum();
    let mut hits = 0u64;
    for mask in 0u32..(1 << n) {
        let w: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        if w >= observed - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Pearson goodness of fit. Cells with zero expectation must be empty; they
/// do not count towards the degrees of freedom. Returns the upper-tail p.
pub fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0;
    for (&o, &p) in observed.iter().zip(probs) {
        if p == 0.0 {
            if o > 0 {
                return 0.0;
            }
            continue;
        }
        let e = p * n as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return 1.0;
    }
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}
