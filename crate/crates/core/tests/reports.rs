use minindex::reports::{analyze, catalog, catalog_verify, global_report, parse_ram, sweep_report, EXIT_DISAGREEMENT};
use minindex::{AnalyzeOptions, Error, ExtensionSpec, ReportDocument};

fn spec(name: &str) -> ExtensionSpec {
    catalog().into_iter().find(|e| e.name == name).unwrap().spec
}

#[test]
fn report_json_round_trips() {
    let doc = analyze(&spec("q2_zeta8_over_real"), &AnalyzeOptions { oracle: true, ..Default::default() }).unwrap();
    let text = doc.to_json();
    let back = ReportDocument::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(back.values_json(), doc.values_json());
}

#[test]
fn report_values_ignore_precision_and_threads() {
    let s = spec("q3_cyclic_cubic");
    let a = analyze(&s, &AnalyzeOptions { oracle: true, ..Default::default() }).unwrap();
    let b = analyze(&s, &AnalyzeOptions { oracle: true, precision: Some(64), parallel: false, ..Default::default() })
        .unwrap();
    assert_eq!(a.values_json(), b.values_json());
    assert_eq!(b.precision.used, 64);
}

#[test]
fn non_cyclic_extension_runs_oracle_only() {
    // Q_2(zeta_8)/Q_2, group C_2 x C_2
    let s = ExtensionSpec::from_json(
        r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]},{"kind":"eisenstein","poly":[[2,-1],[2,-1],1]}]}"#,
    )
    .unwrap();
    let doc = analyze(&s, &AnalyzeOptions { oracle: true, ..Default::default() }).unwrap();
    assert!(doc.profile.is_none() && doc.formulas.is_none() && doc.agreement.is_none());
    let o = doc.oracle.unwrap();
    assert!(o.result.v_p_m() >= o.result.assoc.v_p_index);
}

#[test]
fn budget_errors_carry_counts() {
    let err = analyze(&spec("q3_cyclic_cubic"), &AnalyzeOptions { oracle: true, budget: 10, ..Default::default() });
    assert_eq!(err.unwrap_err(), Error::BudgetExceeded { budget: 10, required: 729 });
}

#[test]
fn corrupted_catalog_is_flagged() {
    let sum = catalog_verify(&AnalyzeOptions::default(), true).unwrap();
    assert_eq!(sum.exit_code, EXIT_DISAGREEMENT);
    assert_eq!(sum.rows.iter().filter(|r| !r.pass).count(), 1);
}

#[test]
fn sweep_examples() {
    let rep = sweep_report(5, 8, 1).unwrap();
    let row = rep.rows.iter().find(|r| r.e_k == 4 && r.t == 3).unwrap();
    assert!(!row.free);
    assert!(sweep_report(3, 2, 1).unwrap().rows.iter().all(|r| r.free));
    assert!(sweep_report(2, 10, 2).unwrap().rows.iter().all(|r| r.free));
}

#[test]
fn global_parsing_and_values() {
    let ram = parse_ram("3:1,2").unwrap();
    assert_eq!((ram.p, ram.n, ram.d, ram.f), (3, 1, 2, None));
    assert_eq!(parse_ram("7:0,3,2").unwrap().f, Some(2));
    assert!(parse_ram("7:0").is_err());
    let g = global_report(6, &[ram]).unwrap();
    assert_eq!(g.valuations[&3], 2);
    assert!(g.agree);
    assert!(global_report(6, &[ram, ram]).is_err());
}
