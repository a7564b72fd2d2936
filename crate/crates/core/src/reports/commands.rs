use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{global_abelian_valuation, sweep, PrimeRamification, SweepRow};
use crate::error::{Error, Result};

use super::{EXIT_DISAGREEMENT, EXIT_OK};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub p: u64,
    pub e_max: u64,
    pub f_k: u64,
    pub rows: Vec<SweepRow>,
    pub violations: usize,
}

impl SweepReport {
    pub fn exit_code(&self) -> i32 {
        if self.violations == 0 { EXIT_OK } else { EXIT_DISAGREEMENT }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>3} {:>3} {:>6} {:>5} {:>5} {:>6} {:>6} {:>5} {:>8}",
            "e_K", "t", "a", "f", "sum_nu", "mu", "v_m", "sum_n", "v_A", "free", "bound"
        );
        let show = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>3} {:>3} {:>6} {:>5} {:>5} {:>6} {:>6} {:>5} {:>8}{}",
                r.e_k,
                r.t,
                r.a,
                r.f_k,
                show(r.nu_sum),
                show(r.mu),
                r.v_p_m,
                show(r.n_sum),
                r.v_p_assoc_index,
                r.free,
                r.bound,
                if r.violations.is_empty() { String::new() } else { format!("  VIOLATED: {}", r.violations.join("; ")) }
            );
        }
        let _ = writeln!(s, "{} rows, {} violations", self.rows.len(), self.violations);
        s
    }
}

pub fn sweep_report(p: u64, e_max: u64, f_k: u64) -> Result<SweepReport> {
    if e_max == 0 || f_k == 0 {
        return Err(Error::InvalidData("e-max and f must be positive".into()));
    }
    let rows = sweep(p, e_max, f_k)?;
    let violations = rows.iter().map(|r| r.violations.len()).sum();
    Ok(SweepReport { p, e_max, f_k, rows, violations })
}

/// Parses `p:n,d` or `p:n,d,f`.
pub fn parse_ram(s: &str) -> Result<PrimeRamification> {
    let bad = || Error::InvalidData(format!("expected p:n,d[,f], got {s:?}"));
    let (p, rest) = s.split_once(':').ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(',').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    Ok(PrimeRamification {
        p: num(p)?,
        n: u32::try_from(num(parts[0])?).map_err(|_| bad())?,
        d: num(parts[1])?,
        f: parts.get(2).map(|x| num(x)).transpose()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalReport {
    pub degree: u64,
    /// `p -> v_p(m(L/Q))`.
    pub valuations: BTreeMap<u64, u64>,
    /// `p -> v_p` recombined from the local minimal indices.
    pub recombined: BTreeMap<u64, u64>,
    pub agree: bool,
}

pub fn global_report(degree: u64, ram: &[PrimeRamification]) -> Result<GlobalReport> {
    let mut seen = std::collections::BTreeSet::new();
    if let Some(r) = ram.iter().find(|r| !seen.insert(r.p)) {
        return Err(Error::InvalidData(format!("prime {} listed twice", r.p)));
    }
    let vals = global_abelian_valuation(degree, ram)?;
    Ok(GlobalReport {
        degree,
        valuations: vals.iter().map(|v| (v.p, v.v_p)).collect(),
        recombined: vals.iter().map(|v| (v.p, v.recombined)).collect(),
        agree: vals.iter().all(|v| v.v_p == v.recombined),
    })
}
