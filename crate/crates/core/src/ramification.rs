//! Lower ramification filtration and the jump profile of cyclic extensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Val;
use crate::tower::{is_prime, GaloisLatticeModel};

/// Invariants of `L/K` consumed by the closed-form formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub p: u64,
    pub e_k: u64,
    pub f_k: u64,
    /// `[L:K]`.
    pub n: u64,
    pub e_rel: u64,
    pub f_rel: u64,
    /// The jump `t`; `-1` when unramified, `0` when tame.
    pub jump: i64,
    /// `t mod p`, for ramified cyclic extensions of degree `p`.
    pub a: Option<u64>,
    /// `(t - a)/p`, alongside `a`.
    pub t0: Option<i64>,
    pub unramified: bool,
    pub tame: bool,
    pub weakly_ramified: bool,
    pub maximal: bool,
    pub almost_maximal: bool,
}

impl RamificationProfile {
    /// True for ramified cyclic extensions of degree `p`.
    pub fn is_cyclic_p(&self) -> bool {
        self.a.is_some()
    }

    /// `(p, e_K, f_K, t)`, the data `from_invariants` needs.
    pub fn invariants(&self) -> (u64, u64, u64, i64) {
        (self.p, self.e_k, self.f_k, self.jump)
    }

    /// `[L:Q_p]`.
    pub fn absolute_degree(&self) -> u64 {
        self.e_k * self.f_k * self.n
    }

    /// Checks the jump bounds and the derived inequality `e_K >= a + (p-1)t_0`
    /// (strict unless almost maximal).
    pub fn check(&self) -> Result<()> {
        let (Some(a), Some(t0)) = (self.a, self.t0) else {
            return Ok(());
        };
        let (p, e, t) = (self.p as i64, self.e_k as i64, self.jump);
        if t < 1 || t * (p - 1) > e * p {
            return Err(Error::InvariantViolation(format!("jump {t} outside [1, {e}·{p}/({p}-1)]")));
        }
        if a == 0 && t * (p - 1) != e * p {
            return Err(Error::InvariantViolation(format!("jump {t} divisible by p but not maximal")));
        }
        let lhs = a as i64 + (p - 1) * t0;
        if e < lhs || (!self.almost_maximal && e == lhs) {
            return Err(Error::InvariantViolation(format!("e_K = {e} vs a + (p-1)t_0 = {lhs}")));
        }
        Ok(())
    }

    /// Profile of a ramified cyclic degree-`p` extension from its invariants alone.
    pub fn from_invariants(p: u64, e_k: u64, f_k: u64, t: i64) -> Result<Self> {
        if !is_prime(p) || e_k == 0 || f_k == 0 {
            return Err(Error::InvalidJump(format!("need prime p and positive e_K, f_K (got {p}, {e_k}, {f_k})")));
        }
        let (pi, e) = (p as i64, e_k as i64);
        if t < 1 || t * (pi - 1) > e * pi {
            return Err(Error::InvalidJump(format!("t = {t} outside [1, {e}·{p}/{}]", p - 1)));
        }
        if t % pi == 0 && t * (pi - 1) != e * pi {
            return Err(Error::InvalidJump(format!("t = {t} is divisible by {p} but not equal to e_K·p/(p-1)")));
        }
        let a = t.rem_euclid(pi);
        let profile = RamificationProfile {
            p,
            e_k,
            f_k,
            n: p,
            e_rel: p,
            f_rel: 1,
            jump: t,
            a: Some(a as u64),
            t0: Some((t - a) / pi),
            unramified: false,
            tame: false,
            weakly_ramified: t <= 1,
            maximal: a == 0,
            almost_maximal: e * pi - t * (pi - 1) < pi,
        };
        profile.check()?;
        Ok(profile)
    }

    /// All valid jumps for `(p, e_K)`.
    pub fn valid_jumps(p: u64, e_k: u64) -> Vec<i64> {
        let (pi, e) = (p as i64, e_k as i64);
        (1..=e * pi / (pi - 1)).filter(|&t| t % pi != 0 || t * (pi - 1) == e * pi).collect()
    }
}

/// The lower-numbering filtration `G_0 ⊇ G_1 ⊇ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filtration {
    /// `i_G(g) = min_j v_L(g b_j - b_j)` per group element; `None` for the identity.
    pub i_g: Vec<Option<i64>>,
    /// `groups[i]` lists the elements of `G_i`, until the first trivial group.
    pub groups: Vec<Vec<usize>>,
}

impl Filtration {
    /// Indices `i` with `G_i ≠ G_{i+1}`.
    pub fn jumps(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut i = 0;
        while i + 1 < self.groups.len() {
            if self.groups[i] != self.groups[i + 1] {
                out.push(i as i64);
            }
            i += 1;
        }
        out
    }
}

/// Computes `i_G` for every element and the chain `G_i`.
pub fn filtration(model: &GaloisLatticeModel) -> Result<Filtration> {
    let t = &model.tower;
    let top = model.top();
    let p = t.prime() as i64;
    let cap = t.e(top) as i64 * p / (p - 1) + 2;
    let mut i_g = vec![None];
    for g in 1..model.n {
        let mut v = Val::AtLeast(i64::MAX);
        for b in &model.basis {
            v = v.min(t.valuation(&t.sub(&model.act(g, b), b)));
        }
        match v {
            Val::Exact(x) => i_g.push(Some(x)),
            Val::AtLeast(b) if b >= cap => {
                return Err(Error::InvariantViolation(format!("element {g} acts trivially to precision")))
            }
            Val::AtLeast(_) => return Err(Error::PrecisionExhausted("ramification number not certified".into())),
        }
    }
    let mut groups = Vec::new();
    for i in 0.. {
        let gi: Vec<usize> = (0..model.n).filter(|&g| i_g[g].map_or(true, |x| x > i)).collect();
        let trivial = gi.len() == 1;
        groups.push(gi);
        if trivial {
            break;
        }
    }
    Ok(Filtration { i_g, groups })
}

/// Profile of a model: unramified, tame, or ramified cyclic of degree `p`.
pub fn profile(model: &GaloisLatticeModel) -> Result<RamificationProfile> {
    let t = &model.tower;
    let (base, top) = (model.base, model.top());
    let p = t.prime();
    let (e_k, f_k) = (t.e(base), t.f(base));
    let e_rel = t.e(top) / e_k;
    let f_rel = t.f(top) / f_k;
    let n = model.n as u64;
    let filt = filtration(model)?;
    let g0 = filt.groups[0].len() as u64;
    let g1 = filt.groups.get(1).map_or(1, |g| g.len()) as u64;
    let g2 = filt.groups.get(2).map_or(1, |g| g.len()) as u64;
    if g0 != e_rel {
        return Err(Error::InvariantViolation(format!("|G_0| = {g0} but e(L/K) = {e_rel}")));
    }
    if e_rel == 1 || g1 == 1 {
        let unramified = e_rel == 1;
        return Ok(RamificationProfile {
            p,
            e_k,
            f_k,
            n,
            e_rel,
            f_rel,
            jump: if unramified { -1 } else { 0 },
            a: None,
            t0: None,
            unramified,
            tame: true,
            weakly_ramified: true,
            maximal: false,
            almost_maximal: false,
        });
    }
    if n != p || e_rel != p {
        return Err(Error::InvalidProfile(format!(
            "closed forms cover ramified cyclic extensions of degree p; this one has degree {n}, e = {e_rel}"
        )));
    }
    let jump = filt.i_g[1].expect("non-identity element") - 1;
    let mut prof = RamificationProfile::from_invariants(p, e_k, f_k, jump)
        .map_err(|e| Error::InvariantViolation(format!("computed jump violates the admissible range: {e}")))?;
    prof.weakly_ramified = g2 == 1;
    Ok(prof)
}
