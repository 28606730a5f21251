use lewiskit::conditions::{correspondence_test, format_conditions, pairing_table};
use lewiskit::logics::Registry;

#[test]
fn every_pairing_row_corresponds() {
    let reg = Registry::standard();
    let rows = pairing_table();
    assert!(rows.len() >= 20);
    for row in &rows {
        let scheme = reg.scheme(&row.axiom).unwrap();
        let report = correspondence_test(&row.conditions, &scheme.template, 3).unwrap();
        assert!(
            report.passed(),
            "{} / {}: {:?}",
            format_conditions(&row.conditions),
            row.axiom,
            report.counterexample
        );
    }
}
