//! Synthetic plans. The erp-like plan reproduces only the published counts:
//! objectives, checks, checks on satisfied objectives, tracked checks and the
//! split of untracked checks; every interaction and check text is invented.

use crate::app::{AppSpec, EntityTypeSpec, ValueKind};

use super::{DataClass, OracleCheck, PatternToken, TestObjective, TestPlan};

/// Per area, in entity order: objectives, checks, objectives carrying checks, tracked checks.
pub const ERP_OBJECTIVES: [usize; 6] = [73, 119, 52, 21, 10, 75];
pub const ERP_CHECKS: [usize; 6] = [81, 132, 56, 38, 16, 85];
pub const ERP_CHECKED_OBJECTIVES: [usize; 6] = [51, 82, 32, 20, 9, 57];
pub const ERP_TRACKED_CHECKS: [usize; 6] = [65, 100, 41, 28, 9, 67];
/// Untracked checks: grid content, graphical attributes, untracked db data, external effects.
pub const ERP_UNTRACKED_SPLIT: [(DataClass, usize); 4] = [
    (DataClass::GridContent, 35),
    (DataClass::GraphicalAttribute, 6),
    (DataClass::DbUntracked, 12),
    (DataClass::External, 45),
];

const PATTERNS: usize = 12;

fn tok(glob: String) -> PatternToken {
    PatternToken { glob, class: None }
}

fn pinned(glob: String, class: crate::harness::ActionClass) -> PatternToken {
    PatternToken { glob, class: Some(class) }
}

fn field_line(e: &EntityTypeSpec, idx: usize) -> (String, String) {
    let f = &e.fields[idx % e.fields.len()];
    let line = match f.kind {
        ValueKind::List => format!("GUI: List field \"{}\" (\"*\") as \"*\" enabled", f.label),
        ValueKind::Combo => format!("GUI: Combo-box field \"{}\" (\"*\") marked at (\"*\") enabled", f.label),
        _ => format!("GUI: Text field \"{}\" as \"*\" enabled", f.label),
    };
    (f.label.clone(), line)
}

/// Interaction, description and tracked-check candidates (class, predicate) of pattern `p`.
fn pattern(e: &EntityTypeSpec, p: usize, n: usize) -> (Vec<PatternToken>, String, Vec<(DataClass, String)>) {
    use crate::harness::ActionClass::SaveOk;
    let m = e.name.clone();
    let s = e.singular_name();
    let t = e.table_name();
    let menu = || tok(m.clone());
    let op = |label: &str| tok(format!("{m}.{label}"));
    let gui = |line: String| (DataClass::GuiTracked, line);
    let db = |line: String| (DataClass::DbTracked, line);
    let window = |title: &str| gui(format!("GUI: Window \"{title}\" in foreground"));
    let (field, field_check) = field_line(e, n);
    match p {
        0 => (vec![menu()], format!("Open the {m} page"), vec![window(&m), gui(format!("GUI: Button \"New {s}\" enabled"))]),
        1 => (
            vec![menu(), op(&format!("New {s}"))],
            format!("Correctness of the form when adding new {}", m.to_lowercase()),
            vec![window(&s), gui("GUI: Button \"Save\" enabled".into()), gui("GUI: Button \"Close\" enabled".into())],
        ),
        2 => (vec![menu(), op("View")], format!("Inspect an existing {s}"), vec![window(&format!("View {s}"))]),
        3 => (
            vec![menu(), op("Edit")],
            format!("Open an existing {s} for editing"),
            vec![window(&format!("Edit {s}")), gui("GUI: Button \"Save\" enabled".into())],
        ),
        4 => (vec![menu(), op("Delete")], format!("Delete a {s}"), vec![db(format!("DB: deleted record in Table {t} was ⟨*⟩"))]),
        5 => (
            vec![menu(), op(&format!("New {s}")), op("Close")],
            format!("Cancel the creation of a {s}"),
            vec![window(&m)],
        ),
        6 => (
            vec![menu(), op(&format!("New {s}")), op(&field)],
            format!("Enter {field} in a new {s}"),
            vec![gui(field_check)],
        ),
        7 => (
            vec![menu(), op(&format!("New {s}")), pinned(format!("{m}.Save"), SaveOk)],
            format!("Store a new {s}"),
            vec![db(format!("DB: new record in Table {t} ⟨*⟩")), window(&m)],
        ),
        8 => (
            vec![menu(), op("Edit"), pinned(format!("{m}.Save"), SaveOk)],
            format!("Store changes to a {s}"),
            vec![db(format!("DB: update in Table {t} as ⟨*⟩ → ⟨*⟩"))],
        ),
        9 => (
            vec![menu(), op("View"), op("Close")],
            format!("Leave the {s} details"),
            vec![window(&m)],
        ),
        10 if e.tabs > 1 => {
            let tab = e.tab_name(1 + n % (e.tabs - 1));
            (
                vec![menu(), op(&format!("New {s}")), op(&tab)],
                format!("Switch to the {tab} tab of a new {s}"),
                vec![gui(format!("GUI: Button \"{tab}\" disabled"))],
            )
        }
        10 => (
            vec![menu(), op("Edit"), op(&field)],
            format!("Change {field} of a {s}"),
            vec![gui(field_check)],
        ),
        _ => (
            vec![menu(), op("Edit"), op(&field), pinned(format!("{m}.Save"), SaveOk)],
            format!("Store a changed {field} of a {s}"),
            vec![db(format!("DB: update in Table {t} as ⟨*⟩ → ⟨*⟩")), gui(field_check)],
        ),
    }
}

/// Deterministic interleaving of `quotas` by largest deficit.
fn interleave(quotas: &[(DataClass, usize)]) -> Vec<DataClass> {
    let total: usize = quotas.iter().map(|q| q.1).sum();
    let mut used = vec![0usize; quotas.len()];
    let mut out = Vec::with_capacity(total);
    for i in 0..total {
        let k = (0..quotas.len())
            .filter(|&k| used[k] < quotas[k].1)
            .max_by_key(|&k| (quotas[k].1 * (i + 1) * 1000 / total).saturating_sub(used[k] * 1000))
            .expect("quota left");
        used[k] += 1;
        out.push(quotas[k].0);
    }
    out
}

/// Whether check `j` of `n` is one of the `u` untracked ones, spread evenly.
fn is_untracked(j: usize, n: usize, u: usize) -> bool {
    (j + 1) * u / n > j * u / n
}

fn untracked_text(class: DataClass, e: &EntityTypeSpec, j: usize) -> String {
    let s = e.singular_name();
    match class {
        DataClass::GridContent => format!("The {} grid lists the stored {s} in row {}", e.name, 1 + j % 5),
        DataClass::GraphicalAttribute => format!("Mandatory fields of the {s} form are highlighted"),
        DataClass::DbUntracked => format!("Totals of related records are consistent with the stored {s}"),
        _ => format!("A notification about the {s} is sent by email"),
    }
}

/// Builds the six-area plan for an application with at least six entity types
/// (the erp-like preset); areas are the first six entities.
pub fn synthetic_erp_plan(spec: &AppSpec) -> TestPlan {
    let mut untracked = interleave(&ERP_UNTRACKED_SPLIT).into_iter();
    let mut plan = TestPlan::default();
    for (a, e) in spec.entity_types.iter().take(6).enumerate() {
        let checked = ERP_CHECKED_OBJECTIVES[a];
        let n_checks = ERP_CHECKS[a];
        let n_untracked = n_checks - ERP_TRACKED_CHECKS[a];
        let mut check_no = 0;
        for i in 0..ERP_OBJECTIVES[a] {
            let id = format!("{}.{}", a + 1, i + 1);
            let (interaction, description, candidates) = pattern(e, i % PATTERNS, i / PATTERNS);
            // objectives beyond `checked` carry no checks; extra checks go round-robin
            let k = if i < checked { 1 + usize::from(i < n_checks - checked) } else { 0 };
            let mut checks = Vec::new();
            for c in 0..k {
                let cid = format!("{id}.c{}", c + 1);
                let check = if is_untracked(check_no, n_checks, n_untracked) {
                    let class = untracked.next().expect("untracked quota");
                    OracleCheck::new(cid, class, untracked_text(class, e, check_no))
                } else {
                    let (class, line) = candidates[c % candidates.len()].clone();
                    OracleCheck::new(cid, class, line)
                };
                checks.push(check.expect("generated check parses"));
                check_no += 1;
            }
            plan.objectives.push(TestObjective { id, area: e.name.clone(), description, interaction, checks });
        }
        debug_assert_eq!(check_no, n_checks);
    }
    plan
}

/// The invoice sample objective with its two checks.
pub fn invoice_demo_plan() -> TestPlan {
    let checks = vec![
        OracleCheck::new("8.3.c1", DataClass::GuiTracked, "GUI: Window \"Invoice\" in foreground"),
        OracleCheck::new("8.3.c2", DataClass::GuiTracked, "GUI: Text field \"Invoice Number\" as ⟨empty⟩ enabled"),
    ];
    TestPlan {
        objectives: vec![TestObjective {
            id: "8.3".into(),
            area: "Invoices".into(),
            description: "Correctness of the form when adding new invoices".into(),
            interaction: vec![tok("Invoices".into()), tok("Invoices.New Invoice".into())],
            checks: checks.into_iter().map(|c| c.expect("fixed check parses")).collect(),
        }],
    }
}
