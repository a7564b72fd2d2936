//! Frozen oracle outputs on the catalog, cross-checked against the closed forms.

use minindex::closed_forms::{index_report, minimal_generator_recipe};
use minindex::oracle::{
    associated_order_lattice, index_of_generated_module, minimal_index_search, run_oracle, structure_check,
    witness_coordinates, OracleConfig, SeedSource,
};
use minindex::ramification::{filtration, profile};
use minindex::reports::catalog;
use minindex::{ExtensionSpec, GaloisLatticeModel};

struct Frozen {
    name: &'static str,
    r0: i64,
    classes: u128,
    digits: &'static [u8],
    pivots: &'static [i64],
    seed: SeedSource,
}

const FROZEN: &[Frozen] = &[
    Frozen { name: "q2_sqrt_minus1", r0: 1, classes: 16, digits: &[0, 0, 1, 0], pivots: &[0, 1], seed: SeedSource::ClosedForm },
    Frozen { name: "q2_sqrt2", r0: 1, classes: 16, digits: &[1, 0, 1, 0], pivots: &[0, 1], seed: SeedSource::ClosedForm },
    Frozen { name: "q2_sqrt_minus2", r0: 1, classes: 16, digits: &[1, 0, 1, 0], pivots: &[0, 1], seed: SeedSource::ClosedForm },
    Frozen { name: "q2_sqrt3", r0: 1, classes: 16, digits: &[0, 0, 1, 0], pivots: &[0, 1], seed: SeedSource::ClosedForm },
    Frozen { name: "q2_zeta8_over_real", r0: 1, classes: 16, digits: &[0, 0, 1, 0], pivots: &[0, 1], seed: SeedSource::ClosedForm },
    Frozen { name: "q3_cyclic_cubic", r0: 1, classes: 729, digits: &[0, 0, 1, 0, 0, 0], pivots: &[0, 0, 1], seed: SeedSource::ClosedForm },
    Frozen {
        name: "q3_zeta3_kummer",
        r0: 3,
        classes: 531_441,
        digits: &[1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
        pivots: &[0, 1, 2],
        seed: SeedSource::ClosedForm,
    },
    Frozen { name: "q2_unramified_quadratic", r0: 0, classes: 4, digits: &[0, 1], pivots: &[0, 0], seed: SeedSource::ZeroOne },
];

fn model(spec: &ExtensionSpec, precision: u32) -> GaloisLatticeModel {
    GaloisLatticeModel::build(spec.build(precision).unwrap(), spec.base_cut).unwrap()
}

#[test]
fn catalog_oracle_values_are_frozen() {
    let entries = catalog();
    assert_eq!(entries.len(), FROZEN.len());
    for (e, f) in entries.iter().zip(FROZEN) {
        assert_eq!(e.name, f.name);
        let m = model(&e.spec, 32);
        let prof = profile(&m).unwrap();
        let r = run_oracle(&m, Some(&prof), &OracleConfig::default()).unwrap();
        assert_eq!(r.search.r0, f.r0, "{}", f.name);
        assert_eq!(r.search.classes_enumerated, f.classes, "{}", f.name);
        assert_eq!(r.search.witness_digits, f.digits, "{}", f.name);
        assert_eq!(r.search.seed_source, f.seed, "{}", f.name);
        assert_eq!(r.assoc.pivots, f.pivots, "{}", f.name);
        assert_eq!(r.v_p_m(), e.expected.v_p_m, "{}", f.name);
        assert_eq!(r.free_over_assoc, e.expected.free, "{}", f.name);
        assert_eq!(index_of_generated_module(&m, &r.search.witness).unwrap(), r.search.v_k_min);
    }
}

#[test]
fn oracle_matches_closed_forms_on_catalog() {
    for e in catalog() {
        let m = model(&e.spec, 32);
        let prof = profile(&m).unwrap();
        let rep = index_report(&prof, None).unwrap();
        let r = run_oracle(&m, Some(&prof), &OracleConfig::default()).unwrap();
        assert_eq!(rep.v_p_m, r.v_p_m(), "{}", e.name);
        assert_eq!(rep.v_p_assoc_index, r.assoc.v_p_index, "{}", e.name);
        if let Some(nu) = &rep.nu {
            let mut n = nu.n.clone();
            n.sort_unstable();
            assert_eq!(n, r.assoc.pivots, "{}", e.name);
        }
        if prof.is_cyclic_p() {
            let omega = witness_coordinates(&m, &minimal_generator_recipe(&prof).unwrap()).unwrap();
            let v_k = index_of_generated_module(&m, &omega).unwrap();
            assert_eq!(v_k * prof.f_k as i64, rep.v_p_m, "{}", e.name);
        }
    }
}

#[test]
fn jump_matches_generator_displacement() {
    for e in catalog() {
        let m = model(&e.spec, 32);
        let prof = profile(&m).unwrap();
        let Some(sigma) = m.cyclic_generator().filter(|_| prof.is_cyclic_p()) else { continue };
        let t = &m.tower;
        let pi = t.uniformizer(m.top());
        let d = t.valuation(&t.sub(&m.act(sigma, &pi), &pi)).exact().unwrap();
        assert_eq!(prof.jump, d - 1, "{}", e.name);
        assert_eq!(filtration(&m).unwrap().jumps(), vec![prof.jump], "{}", e.name);
    }
}

#[test]
fn structure_checks_on_degree_p_models() {
    let mut checked = 0;
    for e in catalog() {
        let m = model(&e.spec, 32);
        let prof = profile(&m).unwrap();
        if !prof.a.is_some_and(|a| a != 0) {
            continue;
        }
        let s = structure_check(&m, &prof).unwrap();
        assert!(s.holds(), "{}: {s:?}", e.name);
        checked += 1;
    }
    assert_eq!(checked, 4);
}

#[test]
fn kummer_associated_order_is_maximal() {
    let e = catalog().into_iter().find(|e| e.name == "q3_zeta3_kummer").unwrap();
    let m = model(&e.spec, 32);
    let a = associated_order_lattice(&m).unwrap();
    assert_eq!(a.v_k_index, 3);
    assert_eq!(Some(a.v_p_index), e.expected.v_p_maximal_order_index);
}

#[test]
fn search_is_stable_across_precision_and_threads() {
    for name in ["q2_sqrt_minus1", "q2_zeta8_over_real", "q3_cyclic_cubic"] {
        let e = catalog().into_iter().find(|e| e.name == name).unwrap();
        let (lo, hi) = (model(&e.spec, 32), model(&e.spec, 64));
        let prof = profile(&lo).unwrap();
        assert_eq!(prof, profile(&hi).unwrap());
        let par = minimal_index_search(&lo, Some(&prof), &OracleConfig::default()).unwrap();
        let ser = minimal_index_search(&hi, Some(&prof), &OracleConfig { parallel: false, ..Default::default() }).unwrap();
        assert_eq!(par.witness_digits, ser.witness_digits, "{name}");
        assert_eq!(par.v_k_min, ser.v_k_min, "{name}");
        assert_eq!(associated_order_lattice(&lo).unwrap().pivots, associated_order_lattice(&hi).unwrap().pivots);
    }
}

#[test]
fn unit_multiples_share_the_index() {
    let e = catalog().into_iter().find(|e| e.name == "q3_cyclic_cubic").unwrap();
    let m = model(&e.spec, 32);
    let t = &m.tower;
    let omega: Vec<_> = (0..3).map(|i| t.from_int(0, [1, 1, 0][i])).collect();
    let r = index_of_generated_module(&m, &omega).unwrap();
    for u in [2, 4, 5, -1] {
        let scaled: Vec<_> = omega.iter().map(|x| t.mul(x, &t.from_int(0, u))).collect();
        assert_eq!(index_of_generated_module(&m, &scaled).unwrap(), r);
    }
}
