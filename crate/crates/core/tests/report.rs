mod common;

use common::{event, grouping_holds_for_verbs, invoice_scenario, verbs, T3_1, T3_2, T3_3_ACTIONS, T3_3_DB};
use menuwalk::app::ExecutedStep;
use menuwalk::report::{format_output_entry, group_input_actions, Channel, OutputEntry};
use proptest::prelude::*;

fn lines(entries: &[OutputEntry]) -> Vec<String> {
    entries.iter().map(ToString::to_string).collect()
}

#[test]
fn sample_invoice_report_rows() {
    let steps = invoice_scenario();
    let refs: Vec<&ExecutedStep> = steps.iter().collect();
    let rows = group_input_actions("T3", &refs).unwrap();
    assert_eq!(rows.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["T3.1", "T3.2", "T3.3"]);

    assert_eq!(rows[0].actions, ["Select menu \"Invoices\""]);
    assert_eq!(lines(&rows[0].outputs), T3_1);
    assert_eq!(rows[1].actions, ["Click button \"New Invoice\""]);
    assert_eq!(lines(&rows[1].outputs), T3_2);
    assert_eq!(rows[2].actions, T3_3_ACTIONS);
    let db: Vec<String> = rows[2].outputs.iter().filter(|o| o.channel() == Channel::Db).map(ToString::to_string).collect();
    assert_eq!(db, [T3_3_DB]);
    assert_eq!(rows[2].operation.as_deref(), Some("Invoices.Save"));
}

#[test]
fn truncated_fill_run_is_one_row() {
    let steps = invoice_scenario();
    let refs: Vec<&ExecutedStep> = steps[..5].iter().collect();
    let rows = group_input_actions("T1", &refs).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!((rows[2].first_step, rows[2].last_step), (3, 5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn templates_roundtrip(e in event()) {
        let entry = format_output_entry(&e).unwrap();
        let text = entry.to_string();
        prop_assert!(!text.contains('\n'));
        let back: OutputEntry = text.parse().unwrap();
        prop_assert_eq!(back.channel(), entry.channel());
        prop_assert_eq!(back.kind(), entry.kind());
        prop_assert_eq!(back, entry);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn grouping_is_a_partition(vs in verbs()) {
        if let Err(e) = grouping_holds_for_verbs(&vs) {
            prop_assert!(false, "{}", e);
        }
    }
}
