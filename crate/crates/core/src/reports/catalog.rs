use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tower::ExtensionSpec;

use super::{analyze, exit_code, AnalyzeOptions, ReportDocument, EXIT_DISAGREEMENT, EXIT_OK};

/// Values a catalog entry must reproduce, as `p`-adic valuations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub jump: i64,
    pub v_p_m: i64,
    pub v_p_assoc_index: i64,
    pub free: bool,
    pub v_p_maximal_order_index: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub spec: ExtensionSpec,
    pub expected: Expected,
    /// Where the expected values come from.
    pub rationale: String,
}

fn entry(name: &str, description: &str, spec: &str, expected: Expected, rationale: &str) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        description: description.into(),
        spec: ExtensionSpec::from_json(spec).expect("catalog spec parses"),
        expected,
        rationale: rationale.into(),
    }
}

fn exp(jump: i64, v: i64, assoc: i64, free: bool, max: Option<i64>) -> Expected {
    Expected { jump, v_p_m: v, v_p_assoc_index: assoc, free, v_p_maximal_order_index: max }
}

/// The built-in extensions with known invariants.
pub fn catalog() -> Vec<CatalogEntry> {
    const T1_QUAD: &str = "t = 1 over Q_2: m = p^{f_K}";
    const A0_QUAD: &str = "maximally ramified: m = p^{[L:Q_p]/2}";
    vec![
        entry(
            "q2_sqrt_minus1",
            "Q_2(i)/Q_2 via x^2+2x+2",
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[2,2,1]}]}"#,
            exp(1, 1, 1, true, Some(1)),
            T1_QUAD,
        ),
        entry(
            "q2_sqrt2",
            "Q_2(sqrt 2)/Q_2 via x^2-2",
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]}]}"#,
            exp(2, 1, 1, true, Some(1)),
            A0_QUAD,
        ),
        entry(
            "q2_sqrt_minus2",
            "Q_2(sqrt -2)/Q_2 via x^2+2",
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[2,0,1]}]}"#,
            exp(2, 1, 1, true, Some(1)),
            A0_QUAD,
        ),
        entry(
            "q2_sqrt3",
            "Q_2(sqrt 3)/Q_2 via x^2+2x-2",
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,2,1]}]}"#,
            exp(1, 1, 1, true, Some(1)),
            T1_QUAD,
        ),
        entry(
            "q2_zeta8_over_real",
            "Q_2(zeta_8)/Q_2(sqrt 2): K = Q_2(sqrt 2), L = K(i)",
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]},
                {"kind":"eisenstein","poly":[[2,-1],[2,-1],1]}],"base_cut":1}"#,
            exp(1, 1, 1, true, Some(2)),
            "m = [A : O_K[G]] = N(pi_K) = 2 while [M : O_K[G]] = 4",
        ),
        entry(
            "q3_cyclic_cubic",
            "cyclic cubic x^3-3x^2+3 over Q_3",
            r#"{"p":3,"layers":[{"kind":"eisenstein","poly":[3,0,-3,1]}]}"#,
            exp(1, 1, 1, true, Some(1)),
            "absolutely abelian with f_L = d = n = 1: m = 3",
        ),
        entry(
            "q3_zeta3_kummer",
            "Kummer x^3-(zeta_3-1) over Q_3(zeta_3)",
            r#"{"p":3,"layers":[{"kind":"eisenstein","poly":[3,3,1]},
                {"kind":"eisenstein","poly":[[0,-1],0,0,1]}],"base_cut":1}"#,
            exp(3, 3, 3, true, Some(3)),
            "maximally ramified: m = p^{[L:Q_p]/2}, associated order maximal",
        ),
        entry(
            "q2_unramified_quadratic",
            "unramified quadratic over Q_2",
            r#"{"p":2,"layers":[{"kind":"unramified","poly":[1,1,1]}]}"#,
            exp(-1, 0, 0, true, Some(1)),
            "tame: m = 1",
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computed {
    pub jump: Option<i64>,
    pub formula_v_p_m: Option<i64>,
    pub oracle_v_p_m: Option<i64>,
    pub formula_assoc: Option<i64>,
    pub oracle_assoc: Option<i64>,
    pub formula_free: Option<bool>,
    pub oracle_free: Option<bool>,
    pub v_p_maximal_order_index: Option<i64>,
    pub agreement: bool,
}

impl Computed {
    fn from_report(r: &ReportDocument) -> Self {
        let f = r.formulas.as_ref().map(|f| &f.values);
        let o = r.oracle.as_ref().map(|o| &o.result);
        Computed {
            jump: r.profile.as_ref().map(|p| p.jump),
            formula_v_p_m: f.map(|f| f.v_p_m),
            oracle_v_p_m: o.map(|o| o.v_p_m()),
            formula_assoc: f.map(|f| f.v_p_assoc_index),
            oracle_assoc: o.map(|o| o.assoc.v_p_index),
            formula_free: f.map(|f| f.free_over_assoc),
            oracle_free: o.map(|o| o.free_over_assoc),
            v_p_maximal_order_index: f.and_then(|f| f.v_p_maximal_order_index),
            agreement: r.agreement.as_ref().is_some_and(|a| a.all),
        }
    }

    fn matches(&self, e: &Expected) -> bool {
        self.jump == Some(e.jump)
            && self.formula_v_p_m == Some(e.v_p_m)
            && self.oracle_v_p_m == Some(e.v_p_m)
            && self.formula_assoc == Some(e.v_p_assoc_index)
            && self.oracle_assoc == Some(e.v_p_assoc_index)
            && self.formula_free == Some(e.free)
            && self.oracle_free == Some(e.free)
            && self.v_p_maximal_order_index == e.v_p_maximal_order_index
            && self.agreement
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub name: String,
    pub expected: Expected,
    pub computed: Option<Computed>,
    pub error: Option<String>,
    pub exit_code: i32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub rows: Vec<CatalogRow>,
    pub exit_code: i32,
}

impl CatalogSummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<26} {:>10} {:>10} {:>10} {:>6}  result", "entry", "expected", "formula", "oracle", "free");
        for r in &self.rows {
            let show = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
            let (f, o, free) = match &r.computed {
                Some(c) => (show(c.formula_v_p_m), show(c.oracle_v_p_m), c.oracle_free.map_or("-".into(), |b| b.to_string())),
                None => ("-".into(), "-".into(), "-".into()),
            };
            let verdict = match (&r.error, r.pass) {
                (Some(e), _) => format!("ERROR {e}"),
                (None, true) => "pass".into(),
                (None, false) => "MISMATCH".into(),
            };
            let _ = writeln!(s, "{:<26} {:>10} {:>10} {:>10} {:>6}  {verdict}", r.name, r.expected.v_p_m, f, o, free);
        }
        let passed = self.rows.iter().filter(|r| r.pass).count();
        let _ = writeln!(s, "{passed}/{} entries pass", self.rows.len());
        s
    }
}

/// Runs every catalog entry with the oracle. `corrupt` perturbs one
/// expectation so the mismatch path can be exercised.
pub fn catalog_verify(opts: &AnalyzeOptions, corrupt: bool) -> Result<CatalogSummary> {
    let opts = AnalyzeOptions { oracle: true, ..*opts };
    let mut entries = catalog();
    if corrupt {
        entries[0].expected.v_p_m += 1;
    }
    let mut rows = Vec::with_capacity(entries.len());
    for e in entries {
        let row = match analyze(&e.spec, &opts) {
            Ok(r) => {
                let c = Computed::from_report(&r);
                let pass = c.matches(&e.expected);
                CatalogRow {
                    name: e.name,
                    expected: e.expected,
                    computed: Some(c),
                    error: None,
                    exit_code: if pass { EXIT_OK } else { EXIT_DISAGREEMENT },
                    pass,
                }
            }
            Err(err) => CatalogRow {
                name: e.name,
                expected: e.expected,
                computed: None,
                error: Some(err.to_string()),
                exit_code: exit_code(&err),
                pass: false,
            },
        };
        rows.push(row);
    }
    let exit = rows.iter().map(|r| r.exit_code).max().unwrap_or(EXIT_OK);
    Ok(CatalogSummary { rows, exit_code: exit })
}
