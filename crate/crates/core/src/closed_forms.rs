//! Exact closed-form values: ν/μ/n sequences, minimal indices, associated
//! order indices, bounds, and the abelian formulas. Everything is a
//! valuation (an exponent of `p`), never the power itself.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ramification::RamificationProfile;
use crate::tower::is_prime;

/// The integer data `ν_i`, `μ`, `n_i` of a cyclic degree-`p` extension with `a ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuData {
    pub p: u64,
    pub nu: Vec<i64>,
    pub mu: i64,
    pub n: Vec<i64>,
    /// Smallest index attaining `μ`.
    pub i_m: usize,
}

impl NuData {
    pub fn nu_sum(&self) -> i64 {
        self.nu.iter().sum()
    }
    pub fn n_sum(&self) -> i64 {
        self.n.iter().sum()
    }
}

fn require_cyclic_p(profile: &RamificationProfile) -> Result<(u64, i64, i64, u64)> {
    match profile.a {
        Some(a) => Ok((profile.p, profile.e_k as i64, profile.jump, a)),
        None => Err(Error::InvalidProfile("not a ramified cyclic extension of degree p".into())),
    }
}

/// `ν_i = ⌊(a + it)/p⌋`, `μ = min_i (i e_K - (p-1)ν_i)`, `n_i = min_j (ν_{i+j} - ν_j)`.
pub fn nu_data(profile: &RamificationProfile) -> Result<NuData> {
    let (p, e, t, a) = require_cyclic_p(profile)?;
    if a == 0 {
        return Err(Error::InvalidProfile("the ν sequence is defined for a ≠ 0".into()));
    }
    let pi = p as i64;
    let nu: Vec<i64> = (0..pi).map(|i| Integer::div_floor(&(a as i64 + i * t), &pi)).collect();
    let (mut mu, mut i_m) = (i64::MAX, 0);
    for (i, &v) in nu.iter().enumerate() {
        let x = i as i64 * e - (pi - 1) * v;
        if x < mu {
            mu = x;
            i_m = i;
        }
    }
    let pu = p as usize;
    let n = (0..pu).map(|i| (0..pu - i).map(|j| nu[i + j] - nu[j]).min().expect("nonempty")).collect();
    Ok(NuData { p, nu, mu, n, i_m })
}

/// `v_p(m(L/K))` for a ramified cyclic extension of degree `p`.
pub fn minimal_index_cyclic_p(profile: &RamificationProfile) -> Result<i64> {
    let (p, e, _, a) = require_cyclic_p(profile)?;
    let f = profile.f_k as i64;
    if a == 0 {
        let twice = p as i64 * e * f;
        if twice % 2 != 0 {
            return Err(Error::InvalidProfile("p·e_K·f_K must be even when a = 0".into()));
        }
        return Ok(twice / 2);
    }
    let d = nu_data(profile)?;
    Ok(f * (d.nu_sum() + d.mu))
}

/// `(free, v_p([𝔄 : O_K[G]]))`.
pub fn freeness_cyclic_p(profile: &RamificationProfile) -> Result<(bool, i64)> {
    let (p, e, _, a) = require_cyclic_p(profile)?;
    let f = profile.f_k as i64;
    let index = if a == 0 { f * p as i64 * e / 2 } else { f * nu_data(profile)?.n_sum() };
    Ok((index == minimal_index_cyclic_p(profile)?, index))
}

/// A recipe for an element attaining the minimal index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessRecipe {
    /// `π_L^a`.
    UniformizerPower { a: u64 },
    /// `π_L^a + π_K^{-ν} (σ-1)^i π_L^a`.
    Perturbed { a: u64, i: usize, nu: i64 },
    /// `Σ_{i<p} π_L^i`, the unit-coefficient sum of `p`-th roots of powers of `π_K`.
    RootSum { p: u64 },
}

impl std::fmt::Display for WitnessRecipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WitnessRecipe::UniformizerPower { a } => write!(f, "pi_L^{a}"),
            WitnessRecipe::Perturbed { a, i, nu } => write!(f, "pi_L^{a} + pi_K^-{nu} (sigma-1)^{i} pi_L^{a}"),
            WitnessRecipe::RootSum { p } => write!(f, "sum_(i<{p}) pi_L^i"),
        }
    }
}

pub fn minimal_generator_recipe(profile: &RamificationProfile) -> Result<WitnessRecipe> {
    let (p, _, _, a) = require_cyclic_p(profile)?;
    if a == 0 {
        return Ok(WitnessRecipe::RootSum { p });
    }
    let d = nu_data(profile)?;
    Ok(if d.mu == 0 {
        WitnessRecipe::UniformizerPower { a }
    } else {
        WitnessRecipe::Perturbed { a, i: d.i_m, nu: d.nu[d.i_m] }
    })
}

fn vp(p: u64, mut x: u64) -> u64 {
    let mut v = 0;
    while x > 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// The general upper bound and the easier strict bound on `v_p(m(L/K))`.
pub fn general_bound(p: u64, e_rel: u64, f_l: u64, deg_l_qp: u64, deg_l_k: u64) -> Result<(Ratio<i64>, Ratio<i64>)> {
    if [e_rel, f_l, deg_l_qp, deg_l_k].contains(&0) || deg_l_k % e_rel != 0 {
        return Err(Error::InvalidData("bound inputs must be positive with e(L/K) | [L:K]".into()));
    }
    let v = vp(p, deg_l_k) as i64;
    let deg = deg_l_qp as i64;
    let bound = Ratio::from_integer(f_l as i64 * (e_rel as i64 - 1)) + Ratio::new(deg * v, 2);
    let easy = Ratio::from_integer(deg) * (Ratio::from_integer(1) + Ratio::new(v, 2));
    Ok((bound, easy))
}

/// Multiplicative order of `p` modulo `s` (1 for `s = 1`).
fn mult_order(p: u64, s: u64) -> u64 {
    if s == 1 {
        return 1;
    }
    let mut x = p % s;
    let mut k = 1;
    while x != 1 {
        x = x * p % s;
        k += 1;
    }
    k
}

/// `v_p(disc(Q_p(ζ_{p^r s})/Q_p)) = p^{r-1}(pr - r - 1)·f_s`.
pub fn cyclotomic_disc_valuation(p: u64, r: u32, s: u64) -> Result<u64> {
    if s == 0 || s.gcd(&p) != 1 {
        return Err(Error::GcdViolation(format!("s = {s} must be coprime to p = {p}")));
    }
    if r == 0 {
        return Ok(0);
    }
    let r64 = r as u64;
    Ok(p.pow(r - 1) * (p * r64 - r64 - 1) * mult_order(p, s))
}

fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            out -= out / q;
        }
        q += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Both forms of `v_p(m(L/K))` for `K` unramified over `Q_p` and `L/K` abelian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsAbelianIndex {
    pub reduced: u64,
    /// The sum over divisors of `p^n d` before simplification.
    pub unreduced: u64,
}

pub fn minimal_index_abs_abelian_detail(p: u64, f_l: u64, n: u32, d: u64) -> Result<AbsAbelianIndex> {
    if !is_prime(p) {
        return Err(Error::InvalidProfile(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::InvalidProfile(
            "the abelian formula requires an odd prime; at p = 2 it must be modified".into(),
        ));
    }
    if f_l == 0 || d == 0 || d.gcd(&p) != 1 {
        return Err(Error::InvalidProfile(format!("need f_L >= 1 and d >= 1 coprime to p (got f_L={f_l}, d={d})")));
    }
    let pn = p.pow(n);
    let reduced = f_l * d * (pn - 1) / (p - 1);
    let mut disc_sum = 0;
    for delta in divisors(pn * d) {
        let mut r = 0;
        let mut s = delta;
        while s % p == 0 {
            s /= p;
            r += 1;
        }
        // characters of order δ come in Galois orbits of size [Q_p(ζ_δ):Q_p]
        let orbits = euler_phi(delta) / (euler_phi(p.pow(r)) * mult_order(p, s));
        disc_sum += orbits * cyclotomic_disc_valuation(p, r, s)?;
    }
    let twice = f_l * (d * pn * n as u64 - disc_sum);
    if twice % 2 != 0 || twice / 2 != reduced {
        return Err(Error::InvariantViolation(format!(
            "abelian formula mismatch: reduced {reduced}, unreduced {twice}/2"
        )));
    }
    Ok(AbsAbelianIndex { reduced, unreduced: twice / 2 })
}

/// `v_p(m(L/K)) = f_L·d·(p^n - 1)/(p - 1)`.
pub fn minimal_index_abs_abelian(p: u64, f_l: u64, n: u32, d: u64) -> Result<u64> {
    minimal_index_abs_abelian_detail(p, f_l, n, d).map(|x| x.reduced)
}

/// `v_p([𝔐 : O_K[G]])` for cyclic `G` of order `group_order`.
///
/// Supported bases: `K` unramified over `Q_p`, or `ζ_p ∈ K` with `|G| = p`.
pub fn maximal_order_index_cyclic(p: u64, e_k: u64, f_k: u64, zeta_p_in_k: bool, group_order: u64) -> Result<u64> {
    if group_order == 0 || f_k == 0 || e_k == 0 {
        return Err(Error::InvalidData("positive inputs required".into()));
    }
    if e_k == 1 {
        let n = vp(p, group_order) as u32;
        let d = group_order / p.pow(n);
        let disc: u64 = (1..=n as u64).map(|r| p.pow(r as u32 - 1) * (p * r - r - 1)).sum();
        let twice = f_k * (group_order * n as u64 - d * disc);
        return Ok(twice / 2);
    }
    if zeta_p_in_k && group_order == p {
        return Ok(f_k * p * e_k / 2);
    }
    Err(Error::UnsupportedBase(format!(
        "no closed form for a ramified base (e_K = {e_k}) without the p-th roots of unity"
    )))
}

/// Per-prime ramification data of a global abelian field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRamification {
    pub p: u64,
    pub n: u32,
    pub d: u64,
    /// Local inertia degree used in the recombination check.
    pub f: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalValuation {
    pub p: u64,
    pub v_p: u64,
    /// `([L:Q]/(e f))·(local minimal index)`.
    pub recombined: u64,
}

/// `v_p(m(L/Q)) = [L:Q](p^n - 1)/(p^n (p - 1))` per prime, with the
/// recombination from the local formula as a cross-check.
pub fn global_abelian_valuation(degree: u64, ram: &[PrimeRamification]) -> Result<Vec<GlobalValuation>> {
    if degree == 0 {
        return Err(Error::InvalidData("degree must be positive".into()));
    }
    let mut out = Vec::with_capacity(ram.len());
    for r in ram {
        if !is_prime(r.p) {
            return Err(Error::InvalidData(format!("{} is not prime", r.p)));
        }
        if r.d == 0 || r.d.gcd(&r.p) != 1 {
            return Err(Error::InvalidData(format!("d = {} must be positive and coprime to {}", r.d, r.p)));
        }
        let ramified = r.n > 0 || r.d > 1;
        if r.p == 2 && ramified {
            return Err(Error::InvalidData(
                "ramified p = 2 is outside the scope of the abelian formula (it requires an odd prime)".into(),
            ));
        }
        let pn = r.p.pow(r.n);
        let e = pn * r.d;
        let f = r.f.unwrap_or(1);
        if f == 0 || degree % (e * f) != 0 {
            return Err(Error::InvalidData(format!("e·f = {} must divide the degree {degree}", e * f)));
        }
        let v_p = degree / pn * ((pn - 1) / (r.p - 1));
        let recombined = if r.p == 2 { 0 } else { degree / (e * f) * minimal_index_abs_abelian(r.p, f, r.n, r.d)? };
        if recombined != v_p {
            return Err(Error::InvariantViolation(format!(
                "p = {}: direct value {v_p}, recombined {recombined}",
                r.p
            )));
        }
        out.push(GlobalValuation { p: r.p, v_p, recombined });
    }
    Ok(out)
}

/// Closed-form values for one profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub v_p_m: i64,
    pub v_p_assoc_index: i64,
    pub free_over_assoc: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_p_maximal_order_index: Option<i64>,
    /// Rational values rendered as `num/den` or an integer.
    pub bound_general: String,
    pub bound_easy: String,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuData>,
}

pub fn render_ratio(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Evaluates every applicable closed form. `zeta_p_in_k` enables the Kummer
/// branch of the maximal-order index when known.
pub fn index_report(profile: &RamificationProfile, zeta_p_in_k: Option<bool>) -> Result<IndexReport> {
    let p = profile.p;
    let f_l = profile.f_k * profile.f_rel;
    let (bound, easy) = general_bound(p, profile.e_rel, f_l, profile.absolute_degree(), profile.n)?;
    let zeta = zeta_p_in_k.unwrap_or(false) || p == 2 || profile.maximal;
    let max_order = maximal_order_index_cyclic(p, profile.e_k, profile.f_k, zeta, profile.n).ok().map(|v| v as i64);
    if !profile.is_cyclic_p() {
        return Ok(IndexReport {
            v_p_m: 0,
            v_p_assoc_index: 0,
            free_over_assoc: true,
            v_p_maximal_order_index: max_order,
            bound_general: render_ratio(&bound),
            bound_easy: render_ratio(&easy),
            witness: "any normal integral basis generator".into(),
            nu: None,
        });
    }
    let v = minimal_index_cyclic_p(profile)?;
    let (free, assoc) = freeness_cyclic_p(profile)?;
    Ok(IndexReport {
        v_p_m: v,
        v_p_assoc_index: assoc,
        free_over_assoc: free,
        v_p_maximal_order_index: max_order,
        bound_general: render_ratio(&bound),
        bound_easy: render_ratio(&easy),
        witness: minimal_generator_recipe(profile)?.to_string(),
        nu: if profile.maximal { None } else { Some(nu_data(profile)?) },
    })
}

/// One row of a formula sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub e_k: u64,
    pub f_k: u64,
    pub t: i64,
    pub a: u64,
    pub nu_sum: Option<i64>,
    pub mu: Option<i64>,
    pub v_p_m: i64,
    pub n_sum: Option<i64>,
    pub v_p_assoc_index: i64,
    pub free: bool,
    pub bound: String,
    pub violations: Vec<String>,
}

/// Evaluates one profile and checks every structural property of the formulas.
pub fn sweep_row(p: u64, e_k: u64, f_k: u64, t: i64) -> Result<SweepRow> {
    let prof = RamificationProfile::from_invariants(p, e_k, f_k, t)?;
    let a = prof.a.expect("cyclic profile");
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    check(prof.check().is_ok(), "e_K >= a + (p-1)t_0");
    let v = minimal_index_cyclic_p(&prof)?;
    let (free, assoc) = freeness_cyclic_p(&prof)?;
    let (bound, easy) = general_bound(p, p, f_k, prof.absolute_degree(), p)?;
    check(Ratio::from_integer(v) <= bound, "general bound");
    check(Ratio::from_integer(v) < easy, "strict easy bound");
    check(assoc <= v, "[A:O_K[G]] <= m");
    check(free == (assoc == v), "free iff indices agree");
    let divides = (p - 1).checked_rem(a) == Some(0);
    let (mut nu_sum, mut mu, mut n_sum) = (None, None, None);
    if a == 0 {
        check(free, "a = 0 implies free");
        check(2 * v == (p * e_k * f_k) as i64, "a = 0 value");
        let kummer = maximal_order_index_cyclic(p, e_k, f_k, true, p)? as i64;
        check(kummer == v, "a = 0 equals the maximal-order index");
    } else {
        let d = nu_data(&prof)?;
        check(d.mu <= 0, "mu <= 0");
        check(d.nu_sum() + d.mu >= 1, "sum nu + mu >= 1");
        check(d.n[0] == 0, "n_0 = 0");
        check(d.nu[0] == 0, "nu_0 = 0");
        check(d.nu.windows(2).all(|w| w[0] <= w[1]), "nu non-decreasing");
        check(d.n.iter().zip(&d.nu).all(|(n, nu)| 0 <= *n && n <= nu), "0 <= n_i <= nu_i");
        let e = e_k as i64;
        let last = d.nu[p as usize - 1];
        check(e >= last && d.nu[..p as usize - 1].iter().all(|&x| e > x), "e_K bounds the nu sequence");
        if divides {
            let k = (p - 1) / a;
            let t0 = prof.t0.expect("cyclic");
            let expected: Vec<i64> = (0..p as i64).map(|i| i * t0 + i / k as i64).collect();
            check(d.nu == expected, "nu_i = i t_0 + floor(i/k) when a | p-1");
            check(d.mu == 0, "mu = 0 when a | p-1");
        }
        nu_sum = Some(d.nu_sum());
        mu = Some(d.mu);
        n_sum = Some(d.n_sum());
    }
    if divides {
        check(free, "a | p-1 implies free");
    }
    if !prof.almost_maximal && free {
        check(a != 0 && (p - 1) % a == 0, "free and not almost maximal implies a | p-1");
    }
    if t == 1 {
        check(v == f_k as i64, "t = 1 gives v = f_K");
    }
    Ok(SweepRow {
        p,
        e_k,
        f_k,
        t,
        a,
        nu_sum,
        mu,
        v_p_m: v,
        n_sum,
        v_p_assoc_index: assoc,
        free,
        bound: render_ratio(&bound),
        violations: bad,
    })
}

/// Rows for every valid jump with `e_K <= e_max`, in `(e_K, t)` order.
pub fn sweep(p: u64, e_max: u64, f_k: u64) -> Result<Vec<SweepRow>> {
    if !is_prime(p) || e_max == 0 || f_k == 0 {
        return Err(Error::InvalidData("sweep needs a prime p and positive bounds".into()));
    }
    let cases: Vec<(u64, i64)> =
        (1..=e_max).flat_map(|e| RamificationProfile::valid_jumps(p, e).into_iter().map(move |t| (e, t))).collect();
    cases.into_par_iter().map(|(e, t)| sweep_row(p, e, f_k, t)).collect()
}
