//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::time::{Duration, Instant};

use minindex::closed_forms::{maximal_order_index_cyclic, sweep};
use minindex::oracle::structure_check;
use minindex::ramification::profile;
use minindex::reports::{analyze, catalog, global_report, parse_ram};
use minindex::{AnalyzeOptions, ExtensionSpec, GaloisLatticeModel, ReportDocument};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond { Ok(()) } else { Err(msg()) }
}

fn spec(name: &str) -> ExtensionSpec {
    catalog().into_iter().find(|e| e.name == name).expect("catalog entry").spec
}

fn full(name: &str) -> Result<ReportDocument, String> {
    analyze(&spec(name), &AnalyzeOptions { oracle: true, ..Default::default() }).map_err(|e| format!("{name}: {e}"))
}

/// `(formula v_p, oracle v_p, free by both)`.
fn values(doc: &ReportDocument) -> (i64, i64, bool) {
    let f = &doc.formulas.as_ref().expect("formulas").values;
    let o = &doc.oracle.as_ref().expect("oracle").result;
    (f.v_p_m, o.v_p_m(), f.free_over_assoc && o.free_over_assoc)
}

const QUADRATICS: [&str; 4] = ["q2_sqrt_minus1", "q2_sqrt2", "q2_sqrt_minus2", "q2_sqrt3"];

fn quadratics() -> Check {
    for name in QUADRATICS {
        let doc = full(name)?;
        let (f, o, _) = values(&doc);
        ensure(f == 1 && o == 1, || format!("{name}: formula v_2 = {f}, oracle v_2 = {o}"))?;
    }
    Ok(())
}

fn zeta8_over_real() -> Check {
    let doc = full("q2_zeta8_over_real")?;
    let prof = doc.profile.as_ref().unwrap();
    let f = &doc.formulas.as_ref().unwrap().values;
    let nu = f.nu.as_ref().ok_or("missing nu data")?;
    ensure(prof.jump == 1 && nu.nu[1] == 1, || format!("t = {}, nu = {:?}", prof.jump, nu.nu))?;
    let (fv, ov, free) = values(&doc);
    ensure(fv == 1 && ov == 1, || format!("formula {fv}, oracle {ov}"))?;
    let assoc = doc.oracle.as_ref().unwrap().result.assoc.v_p_index;
    let max = maximal_order_index_cyclic(2, prof.e_k, prof.f_k, true, 2).map_err(|e| e.to_string())?;
    ensure(assoc == 1 && max == 2, || format!("assoc index {assoc}, maximal order index {max}"))?;
    ensure(free, || "not free".into())
}

fn cubic() -> Check {
    let doc = full("q3_cyclic_cubic")?;
    let t = doc.profile.as_ref().unwrap().jump;
    let (f, o, free) = values(&doc);
    ensure(t == 1 && f == 1 && o == 1 && free, || format!("t = {t}, formula {f}, oracle {o}, free {free}"))
}

fn kummer() -> Check {
    let doc = full("q3_zeta3_kummer")?;
    let (f, o, free) = values(&doc);
    ensure(f == 3 && o == 3, || format!("formula v_3 = {f}, oracle v_3 = {o}"))?;
    let oracle = &doc.oracle.as_ref().unwrap().result;
    ensure(oracle.search.classes_enumerated <= 3u128.pow(12), || "too many classes".into())?;
    ensure(oracle.assoc.pivots == [0, 1, 2] && oracle.assoc.v_k_index == 3, || {
        format!("pivots {:?}", oracle.assoc.pivots)
    })?;
    let max = doc.formulas.as_ref().unwrap().values.v_p_maximal_order_index;
    ensure(free && max == Some(oracle.assoc.v_p_index), || format!("free {free}, maximal order index {max:?}"))
}

fn formula_sweep() -> Check {
    let mut rows = 0;
    for p in [2, 3, 5, 7, 11, 13] {
        for f in 1..=3 {
            for row in sweep(p, 40, f).map_err(|e| e.to_string())? {
                rows += 1;
                ensure(row.violations.is_empty(), || format!("p={p} e={} f={f} t={}: {:?}", row.e_k, row.t, row.violations))?;
            }
        }
    }
    ensure(rows > 0, || "empty sweep".into())
}

fn structure() -> Check {
    let mut checked = 0;
    for e in catalog() {
        let m = GaloisLatticeModel::build(e.spec.build(32).map_err(|x| x.to_string())?, e.spec.base_cut)
            .map_err(|x| x.to_string())?;
        let prof = profile(&m).map_err(|x| x.to_string())?;
        if prof.a.is_some_and(|a| a != 0) {
            let s = structure_check(&m, &prof).map_err(|x| x.to_string())?;
            ensure(s.holds(), || format!("{}: {s:?}", e.name))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no degree-p models with a != 0".into())
}

fn global() -> Check {
    for (deg, ram, p, want) in [(6, "3:1,2", 3, 2), (20, "5:1,4", 5, 4)] {
        let r = global_report(deg, &[parse_ram(ram).map_err(|e| e.to_string())?]).map_err(|e| e.to_string())?;
        ensure(r.valuations[&p] == want && r.recombined[&p] == want, || format!("degree {deg}: {r:?}"))?;
    }
    Ok(())
}

fn determinism() -> Check {
    let names = QUADRATICS.iter().copied().chain(["q2_zeta8_over_real", "q3_cyclic_cubic", "q3_zeta3_kummer"]);
    for name in names {
        let s = spec(name);
        let base = analyze(&s, &AnalyzeOptions { oracle: true, ..Default::default() }).map_err(|e| e.to_string())?;
        let doubled = s.working_precision() * 2;
        for (precision, parallel) in [(Some(doubled), true), (None, false), (Some(doubled), false)] {
            let other = analyze(&s, &AnalyzeOptions { oracle: true, precision, parallel, ..Default::default() })
                .map_err(|e| e.to_string())?;
            ensure(other.values_json() == base.values_json(), || {
                format!("{name}: values differ at precision {precision:?}, parallel {parallel}")
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 quadratic catalog over Q_2", quadratics, Duration::from_secs(5)),
        ("2 Q_2(zeta_8) over Q_2(sqrt 2)", zeta8_over_real, Duration::from_secs(30)),
        ("3 cyclic cubic over Q_3", cubic, Duration::from_secs(60)),
        ("4 Kummer cubic over Q_3(zeta_3)", kummer, Duration::from_secs(600)),
        ("5 formula sweep", formula_sweep, Duration::from_secs(10)),
        ("6 structural valuations", structure, Duration::MAX),
        ("7 global abelian", global, Duration::from_secs(1)),
        ("8 determinism and precision stability", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}")));
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({:.2} s)", elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2} s): {e}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria pass", 8 - failed, 8);
    if failed > 0 {
        std::process::exit(1);
    }
}
