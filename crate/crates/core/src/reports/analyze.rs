use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{index_report, IndexReport};
use crate::error::{Error, Result};
use crate::oracle::{run_oracle, structure_check, OracleConfig, OracleResult, StructureCheck, DEFAULT_BUDGET};
use crate::ramification::{profile, RamificationProfile};
use crate::tower::{roots, ExtensionSpec, FieldTower, GaloisLatticeModel};

use super::power;

/// Precision ceiling for the doubling retry.
pub const MAX_PRECISION: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub oracle: bool,
    /// Overrides the precision given in the extension spec.
    pub precision: Option<u32>,
    pub budget: u128,
    pub parallel: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { oracle: false, precision: None, budget: DEFAULT_BUDGET, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub spec: ExtensionSpec,
    pub oracle: bool,
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSection {
    pub m: String,
    pub zeta_p_in_k: bool,
    pub values: IndexReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub m: String,
    pub result: OracleResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureCheck>,
}

/// Formula vs oracle verdicts; `None` where one side has no value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub v_p_m: bool,
    pub v_p_assoc_index: bool,
    pub free_over_assoc: bool,
    pub assoc_pivots: Option<bool>,
    pub structure: Option<bool>,
    pub all: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub formulas_us: u64,
    pub oracle_us: u64,
    pub total_us: u64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionInfo {
    pub requested: u32,
    pub used: u32,
    pub attempts: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: InputEcho,
    /// Absent when the extension is outside the closed forms' scope.
    pub profile: Option<RamificationProfile>,
    pub formulas: Option<FormulaSection>,
    pub oracle: Option<OracleSection>,
    pub agreement: Option<Agreement>,
    pub timing: Timing,
    pub precision: PrecisionInfo,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidData(e.to_string()))
    }

    /// The report without `timing` and `precision`, for reproducibility checks.
    pub fn values_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let obj = v.as_object_mut().expect("object");
        obj.remove("timing");
        obj.remove("precision");
        serde_json::to_string(&v).expect("value serializes")
    }

    pub fn exit_code(&self) -> i32 {
        match &self.agreement {
            Some(a) if !a.all => super::EXIT_DISAGREEMENT,
            _ => super::EXIT_OK,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let p = self.input.spec.p;
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k:<22} {v}");
        };
        match &self.profile {
            Some(pr) => {
                line("p", p.to_string());
                line("[L:K]", format!("{} (e = {}, f = {})", pr.n, pr.e_rel, pr.f_rel));
                line("e_K, f_K", format!("{}, {}", pr.e_k, pr.f_k));
                line("jump t", pr.jump.to_string());
            }
            None => line("profile", "outside the closed-form scope".into()),
        }
        if let Some(f) = &self.formulas {
            line("formula m", f.m.clone());
            line("formula assoc index", power(p, f.values.v_p_assoc_index));
            line("formula free", f.values.free_over_assoc.to_string());
            if let Some(v) = f.values.v_p_maximal_order_index {
                line("maximal order index", power(p, v));
            }
            line("bound (general/easy)", format!("{} / {}", f.values.bound_general, f.values.bound_easy));
            line("witness", f.values.witness.clone());
        }
        if let Some(o) = &self.oracle {
            line("oracle m", o.m.clone());
            line("oracle assoc index", power(p, o.result.assoc.v_p_index));
            line("oracle assoc pivots", format!("{:?}", o.result.assoc.pivots));
            line("oracle free", o.result.free_over_assoc.to_string());
            line("classes enumerated", o.result.search.classes_enumerated.to_string());
            line("witness digits", format!("{:?}", o.result.search.witness_digits));
        }
        if let Some(a) = &self.agreement {
            line("agreement", if a.all { "yes".into() } else { format!("NO {a:?}") });
        }
        line("precision", format!("{} (requested {})", self.precision.used, self.precision.requested));
        line("time", format!("{:.3} s", self.timing.total_us as f64 / 1e6));
        s
    }
}

/// Whether level `k` contains a primitive `p`-th root of unity.
pub fn zeta_p_in(tower: &FieldTower, k: usize) -> Result<bool> {
    let p = tower.prime();
    if p == 2 {
        return Ok(true);
    }
    let phi = vec![tower.one(k); p as usize];
    Ok(!roots(tower, &phi)?.is_empty())
}

struct Sections {
    profile: Option<RamificationProfile>,
    formulas: Option<FormulaSection>,
    oracle: Option<OracleSection>,
    formulas_us: u64,
    oracle_us: u64,
}

fn analyze_at(spec: &ExtensionSpec, opts: &AnalyzeOptions, precision: u32) -> Result<Sections> {
    let start = Instant::now();
    let model = GaloisLatticeModel::build(spec.build(precision)?, spec.base_cut)?;
    let prof = match profile(&model) {
        Ok(p) => Some(p),
        Err(Error::InvalidProfile(_)) => None,
        Err(e) => return Err(e),
    };
    let formulas = match &prof {
        Some(pr) => {
            let zeta = zeta_p_in(&model.tower, model.base)?;
            let values = index_report(pr, Some(zeta))?;
            Some(FormulaSection { m: power(pr.p, values.v_p_m), zeta_p_in_k: zeta, values })
        }
        None => None,
    };
    let formulas_us = start.elapsed().as_micros() as u64;
    let start = Instant::now();
    let oracle = if opts.oracle {
        let cfg = OracleConfig { budget: opts.budget, parallel: opts.parallel, ..OracleConfig::default() };
        let result = run_oracle(&model, prof.as_ref(), &cfg)?;
        let structure = match &prof {
            Some(pr) if pr.a.is_some_and(|a| a != 0) => Some(structure_check(&model, pr)?),
            _ => None,
        };
        Some(OracleSection { m: power(spec.p, result.v_p_m()), result, structure })
    } else {
        None
    };
    Ok(Sections { profile: prof, formulas, oracle, formulas_us, oracle_us: start.elapsed().as_micros() as u64 })
}

fn agreement(formulas: &FormulaSection, oracle: &OracleSection, prof: &RamificationProfile) -> Agreement {
    let f = &formulas.values;
    let o = &oracle.result;
    let expected_pivots = match (&f.nu, prof.a) {
        (Some(nu), _) => Some(nu.n.clone()),
        (None, Some(0)) => {
            let (p, e) = (prof.p as i64, prof.e_k as i64);
            Some((0..p).map(|i| i * e / (p - 1)).collect())
        }
        _ => None,
    };
    let assoc_pivots = expected_pivots.map(|mut n| {
        n.sort_unstable();
        n == o.assoc.pivots
    });
    let structure = oracle.structure.as_ref().map(StructureCheck::holds);
    let v_p_m = f.v_p_m == o.v_p_m();
    let v_p_assoc_index = f.v_p_assoc_index == o.assoc.v_p_index;
    let free_over_assoc = f.free_over_assoc == o.free_over_assoc;
    let all = v_p_m && v_p_assoc_index && free_over_assoc && assoc_pivots != Some(false) && structure != Some(false);
    Agreement { v_p_m, v_p_assoc_index, free_over_assoc, assoc_pivots, structure, all }
}

/// Profile and closed forms, plus the oracle when requested, doubling the
/// working precision on precision failures up to [`MAX_PRECISION`].
pub fn analyze(spec: &ExtensionSpec, opts: &AnalyzeOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let requested = opts.precision.unwrap_or_else(|| spec.working_precision());
    if requested == 0 {
        return Err(Error::InvalidSpec("precision must be positive".into()));
    }
    let mut precision = requested;
    let mut attempts = 1;
    let sections = loop {
        match analyze_at(spec, opts, precision) {
            Err(e) if e.is_precision() && precision < MAX_PRECISION => {
                precision = (precision * 2).min(MAX_PRECISION);
                attempts += 1;
            }
            other => break other?,
        }
    };
    let agreement = match (&sections.formulas, &sections.oracle, &sections.profile) {
        (Some(f), Some(o), Some(pr)) => Some(agreement(f, o, pr)),
        _ => None,
    };
    Ok(ReportDocument {
        input: InputEcho { spec: spec.clone(), oracle: opts.oracle, budget: opts.budget },
        profile: sections.profile,
        formulas: sections.formulas,
        oracle: sections.oracle,
        agreement,
        timing: Timing {
            formulas_us: sections.formulas_us,
            oracle_us: sections.oracle_us,
            total_us: start.elapsed().as_micros() as u64,
            threads: if opts.parallel { rayon::current_num_threads() } else { 1 },
        },
        precision: PrecisionInfo { requested, used: precision, attempts },
    })
}
