use mst_core::suites::{run, SUITES};

#[test]
fn every_suite_passes() {
    let reports = run("all", None).unwrap();
    assert_eq!(reports.len(), SUITES.len());
    for report in &reports {
        for check in &report.checks {
            assert!(
                check.passed(),
                "{}/{}: residual {:e} above {:e}",
                report.suite,
                check.name,
                check.residual,
                check.tolerance
            );
        }
    }
}

#[test]
fn single_suite_and_override() {
    let reports = run("blaschke", Some(1e-3)).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0]
        .checks
        .iter()
        .filter(|c| !c.fixed)
        .all(|c| c.tolerance == 1e-3));
    assert!(run("nope", None).is_err());
}

#[test]
fn impossible_tolerance_fails() {
    let reports = run("rational", Some(0.0)).unwrap();
    assert!(!reports[0].passed());
}
