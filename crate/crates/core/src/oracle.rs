//! Brute-force ground truth from a lattice model: the minimal index by
//! exhaustive enumeration of residue classes, the associated order by a
//! Smith form over `O_K`, and the freeness verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{minimal_generator_recipe, nu_data, WitnessRecipe};
use crate::error::{Error, Result};
use crate::padic::{det_valuation_in, det_valuation_mod, smith_form_in, PadicScalar, ScalarMatrix, Val, ValuationRing};
use crate::ramification::RamificationProfile;
use crate::tower::{GaloisLatticeModel, TowerElement};

pub const DEFAULT_BUDGET: u128 = 10_000_000;
const RANDOM_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of residue classes to enumerate.
    pub budget: u128,
    pub parallel: bool,
    /// Seed for the random phase of the generator search.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { budget: DEFAULT_BUDGET, parallel: true, seed: 0 }
    }
}

/// `v_K([O_L : O_K[G]ω])` from the determinant of `(ω | M_2 ω | ... | M_n ω)`.
pub fn index_of_generated_module(model: &GaloisLatticeModel, omega: &[TowerElement]) -> Result<i64> {
    let t = &model.tower;
    if omega.len() != model.n {
        return Err(Error::DimensionMismatch(format!("expected {} coordinates", model.n)));
    }
    if omega.iter().any(|x| t.valuation(x).bound() < 0) {
        return Err(Error::InvalidData("generator coordinates must be integral".into()));
    }
    let cols: Vec<Vec<TowerElement>> = (0..model.n).map(|g| model.apply_matrix(g, omega)).collect();
    let rows = (0..model.n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    match det_valuation_in(&t.ring(model.base), rows) {
        Err(Error::PrecisionExhausted(_)) => Err(Error::NotGenerator),
        other => other,
    }
}

/// Where the starting generator `ω_0` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    ClosedForm,
    ZeroOne,
    Random,
}

/// The element described by a witness recipe, as `K`-coordinates.
pub fn witness_coordinates(model: &GaloisLatticeModel, recipe: &WitnessRecipe) -> Result<Vec<TowerElement>> {
    let t = &model.tower;
    let top = model.top();
    let pi_l = t.uniformizer(top);
    let x = match *recipe {
        WitnessRecipe::UniformizerPower { a } => t.pow(&pi_l, a),
        WitnessRecipe::Perturbed { a, i, nu } => {
            let sigma = model.cyclic_generator().ok_or_else(|| Error::InvalidData("group is not cyclic".into()))?;
            let base = t.pow(&pi_l, a);
            let f = sigma_minus_one_pow(model, sigma, &base, i);
            let pi_k = t.embed(&t.uniformizer(model.base), top);
            t.add(&base, &t.div(&f, &t.pow(&pi_k, nu as u64))?)
        }
        WitnessRecipe::RootSum { p } => (0..p).fold(t.zero(top), |acc, i| t.add(&acc, &t.pow(&pi_l, i))),
    };
    Ok(model.coords(&x))
}

/// `(σ - 1)^i x`.
pub fn sigma_minus_one_pow(model: &GaloisLatticeModel, sigma: usize, x: &TowerElement, i: usize) -> TowerElement {
    let t = &model.tower;
    (0..i).fold(x.clone(), |y, _| t.sub(&model.act(sigma, &y), &y))
}

/// Some integral `ω_0` with nonzero determinant, with its index.
pub fn find_normal_basis_generator(
    model: &GaloisLatticeModel,
    profile: Option<&RamificationProfile>,
    seed: u64,
) -> Result<(Vec<TowerElement>, i64, SeedSource)> {
    let t = &model.tower;
    let n = model.n;
    if let Some(prof) = profile.filter(|p| p.is_cyclic_p()) {
        let recipe = minimal_generator_recipe(prof)?;
        let omega = witness_coordinates(model, &recipe)?;
        if let Ok(r) = index_of_generated_module(model, &omega) {
            return Ok((omega, r, SeedSource::ClosedForm));
        }
    }
    let mut subsets: Vec<u64> = (1..(1u64 << n.min(20))).collect();
    subsets.sort_by_key(|s| (s.count_ones(), s.reverse_bits()));
    for s in subsets {
        let omega: Vec<TowerElement> =
            (0..n).map(|i| if s >> i & 1 == 1 { t.one(model.base) } else { t.zero(model.base) }).collect();
        if let Ok(r) = index_of_generated_module(model, &omega) {
            return Ok((omega, r, SeedSource::ZeroOne));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = t.prime();
    let bound = p.saturating_pow(t.precision().min(8));
    for _ in 0..RANDOM_ATTEMPTS {
        let omega: Vec<TowerElement> = (0..n)
            .map(|_| {
                let mut e = t.zero(model.base);
                for (c, coord) in e.coords.iter_mut().enumerate() {
                    let mut x = rng.random_range(0..bound);
                    if c == 0 && x % p == 0 {
                        x += 1;
                    }
                    *coord = PadicScalar::from_i64(p, t.precision(), x as i64);
                }
                e
            })
            .collect();
        if let Ok(r) = index_of_generated_module(model, &omega) {
            return Ok((omega, r, SeedSource::Random));
        }
    }
    Err(Error::SearchExhausted((1usize << n.min(20)) - 1 + RANDOM_ATTEMPTS))
}

/// Outcome of the exhaustive minimal-index search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// `R` with `m(L/K) = N(π_K^R)`.
    pub v_k_min: i64,
    pub v_p_m: i64,
    /// Index of `ω_0`, fixing the enumeration modulus `π_K^{R_0+1}`.
    pub r0: i64,
    pub seed_source: SeedSource,
    pub classes_enumerated: u128,
    /// Base-`p` digits of the smallest attaining representative: for each
    /// coordinate, for each power of `π_K` up to `R_0`, the residue digits.
    pub witness_digits: Vec<u8>,
    #[serde(skip)]
    pub witness: Vec<TowerElement>,
}

/// Residue-class enumeration over `O_K^n / π_K^{R_0+1}`.
struct Enumerator<'a> {
    model: &'a GaloisLatticeModel,
    p: u64,
    f_k: usize,
    r0: usize,
    /// Digit positions per coordinate: `(R_0+1)·f_K`.
    per_coord: usize,
    digits: usize,
}

impl<'a> Enumerator<'a> {
    fn new(model: &'a GaloisLatticeModel, r0: i64) -> Self {
        let t = &model.tower;
        let f_k = t.f(model.base) as usize;
        let r0 = r0 as usize;
        let per_coord = (r0 + 1) * f_k;
        Enumerator { model, p: t.prime(), f_k, r0, per_coord, digits: per_coord * model.n }
    }

    fn count(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.digits as u32)
    }

    /// Most significant digit first, so smaller indices are lexicographically smaller.
    fn decode(&self, mut idx: u64) -> Vec<u8> {
        let mut d = vec![0u8; self.digits];
        for pos in (0..self.digits).rev() {
            d[pos] = (idx % self.p) as u8;
            idx /= self.p;
        }
        d
    }

    /// The `O_K` elements `θ^a π_K^j` in digit order.
    fn digit_elements(&self) -> Vec<TowerElement> {
        let t = &self.model.tower;
        let base = self.model.base;
        let pi = t.uniformizer(base);
        let theta = if self.f_k > 1 { t.embed(&t.generator(1), base) } else { t.one(base) };
        let mut out = Vec::with_capacity(self.per_coord);
        for j in 0..=self.r0 {
            let pj = t.pow(&pi, j as u64);
            for a in 0..self.f_k {
                out.push(t.mul(&pj, &t.pow(&theta, a as u64)));
            }
        }
        out
    }

    fn element(&self, digits: &[u8]) -> Vec<TowerElement> {
        let t = &self.model.tower;
        let elems = self.digit_elements();
        digits
            .chunks(self.per_coord)
            .map(|ds| {
                ds.iter().zip(&elems).fold(t.zero(self.model.base), |acc, (&d, e)| {
                    t.add(&acc, &t.scale(e, &PadicScalar::from_i64(self.p, t.precision(), d as i64)))
                })
            })
            .collect()
    }
}

fn residues(m: &ScalarMatrix, b: u32, modulus: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.push(m.get(i, j).residue_u64(b, modulus).ok_or_else(|| {
                Error::PrecisionExhausted("model entries not known modulo the enumeration modulus".into())
            })?);
        }
    }
    Ok(out)
}

/// Precomputed `Z/p^B` data for evaluating one class in `O((nD)^3)`.
struct FastPath {
    size: usize,
    b: u32,
    modulus: u64,
    /// `A_{k,l} = Res(M_k)·diag(Mult(κ_l))`, one `size×size` block per column of the index matrix.
    blocks: Vec<Vec<u64>>,
    /// Flat coordinates of each digit element, `D` entries per digit position.
    digit_coords: Vec<Vec<u64>>,
}

impl FastPath {
    fn new(en: &Enumerator<'_>) -> Result<Option<Self>> {
        let model = en.model;
        let t = &model.tower;
        let p = en.p;
        let b = (en.f_k * (en.r0 + 1)) as u32;
        let modulus = match p.checked_pow(b) {
            Some(m) if m < 1 << 62 => m,
            _ => return Ok(None),
        };
        let d = t.dim(model.base);
        let size = model.n * d;
        let mut blocks = Vec::with_capacity(size);
        for res in &model.restricted {
            for l in 0..d {
                let mut kappa = t.zero(model.base);
                kappa.coords[l] = PadicScalar::one(p, t.precision());
                let mult = t.mult_matrix(&kappa);
                let mut diag = vec![vec![PadicScalar::zero(p, t.precision()); size]; size];
                for blk in 0..model.n {
                    for r in 0..d {
                        for c in 0..d {
                            diag[blk * d + r][blk * d + c] = mult[r][c].clone();
                        }
                    }
                }
                let a = res.mul(&ScalarMatrix::new(p, t.precision(), diag)?)?;
                blocks.push(residues(&a, b, modulus)?);
            }
        }
        let digit_coords = en
            .digit_elements()
            .iter()
            .map(|e| {
                e.coords
                    .iter()
                    .map(|s| {
                        s.residue_u64(b, modulus)
                            .ok_or_else(|| Error::PrecisionExhausted("digit element not known to the modulus".into()))
                    })
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(FastPath { size, b, modulus, blocks, digit_coords }))
    }

    /// `v_p` of the index determinant, or `None` when it is at least `B`.
    fn eval(&self, en: &Enumerator<'_>, digits: &[u8], omega: &mut [u64], mat: &mut [u64]) -> Option<u32> {
        let m = self.modulus as u128;
        let d = self.digit_coords.first().map_or(1, Vec::len);
        omega.iter_mut().for_each(|x| *x = 0);
        for (i, ds) in digits.chunks(en.per_coord).enumerate() {
            for (pos, &digit) in ds.iter().enumerate() {
                if digit == 0 {
                    continue;
                }
                for (c, &x) in self.digit_coords[pos].iter().enumerate() {
                    let slot = &mut omega[i * d + c];
                    *slot = ((*slot as u128 + digit as u128 * x as u128) % m) as u64;
                }
            }
        }
        let s = self.size;
        for (col, blk) in self.blocks.iter().enumerate() {
            for r in 0..s {
                let row = &blk[r * s..(r + 1) * s];
                let mut acc: u128 = 0;
                for (a, w) in row.iter().zip(omega.iter()) {
                    acc = (acc + *a as u128 * *w as u128) % m;
                }
                mat[r * s + col] = acc as u64;
            }
        }
        det_valuation_mod(mat, s, en.p, self.b)
    }
}

/// `min_ω v_K([O_L : O_K[G]ω])` by exhaustive enumeration of residue classes.
pub fn minimal_index_search(
    model: &GaloisLatticeModel,
    profile: Option<&RamificationProfile>,
    cfg: &OracleConfig,
) -> Result<SearchOutcome> {
    let (_omega0, r0, seed_source) = find_normal_basis_generator(model, profile, cfg.seed)?;
    let en = Enumerator::new(model, r0);
    let count = en.count().unwrap_or(u128::MAX);
    if count > cfg.budget {
        return Err(Error::BudgetExceeded { budget: cfg.budget, required: count });
    }
    let f_k = en.f_k as i64;
    let best = match FastPath::new(&en)? {
        Some(fast) => {
            let size = fast.size;
            let eval = |scratch: &mut (Vec<u64>, Vec<u64>), idx: u64| {
                let digits = en.decode(idx);
                fast.eval(&en, &digits, &mut scratch.0, &mut scratch.1).map(|v| (v as i64, idx))
            };
            let init = || (vec![0u64; size], vec![0u64; size * size]);
            if cfg.parallel {
                (0..count as u64).into_par_iter().map_init(init, eval).flatten().min()
            } else {
                let mut scratch = init();
                (0..count as u64).filter_map(|i| eval(&mut scratch, i)).min()
            }
        }
        None => {
            let eval = |idx: u64| {
                let omega = en.element(&en.decode(idx));
                index_of_generated_module(model, &omega).ok().filter(|&r| r <= r0).map(|r| (r * f_k, idx))
            };
            if cfg.parallel {
                (0..count as u64).into_par_iter().filter_map(eval).min()
            } else {
                (0..count as u64).filter_map(eval).min()
            }
        }
    };
    let (vp, idx) = best.ok_or_else(|| Error::InvariantViolation("the class of the seed generator was not attained".into()))?;
    if vp % f_k != 0 {
        return Err(Error::InvariantViolation(format!("index valuation {vp} not a multiple of f_K = {f_k}")));
    }
    let v_k_min = vp / f_k;
    let witness_digits = en.decode(idx);
    let witness = en.element(&witness_digits);
    let check = index_of_generated_module(model, &witness)?;
    if check != v_k_min {
        return Err(Error::InvariantViolation(format!("witness re-evaluates to {check}, search found {v_k_min}")));
    }
    Ok(SearchOutcome {
        v_k_min,
        v_p_m: v_k_min * f_k,
        r0,
        seed_source,
        classes_enumerated: count,
        witness_digits,
        witness,
    })
}

/// The associated order as a lattice in `K[G]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociatedOrder {
    /// Smith pivot valuations `s_i`, ascending.
    pub pivots: Vec<i64>,
    pub v_k_index: i64,
    pub v_p_index: i64,
    /// Basis element `i` is `π_K^{-s_i} Σ_g coeffs[i][g]·g`.
    #[serde(skip)]
    pub coeffs: Vec<Vec<TowerElement>>,
}

/// Solves `{c ∈ K^n : T c integral}` where column `g` of `T` stacks the
/// coordinates of `g(b_j)` over all basis elements `b_j`.
pub fn associated_order_lattice(model: &GaloisLatticeModel) -> Result<AssociatedOrder> {
    let t = &model.tower;
    let n = model.n;
    let ring = t.ring(model.base);
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            rows.push((0..n).map(|g| model.matrices[g][i][j].clone()).collect::<Vec<_>>());
        }
    }
    let smith = smith_form_in(&ring, rows.clone())?;
    if smith.rank != n {
        return Err(Error::PrecisionExhausted(format!("associated-order system has rank {} < {n}", smith.rank)));
    }
    let w = &smith.column_transform;
    let coeffs: Vec<Vec<TowerElement>> = (0..n).map(|i| (0..n).map(|g| w[g][i].clone()).collect()).collect();
    // each basis element maps O_L into itself
    for (c, &s) in coeffs.iter().zip(&smith.pivots) {
        for row in &rows {
            let x = row.iter().zip(c).fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)));
            if let Val::Exact(v) = t.valuation(&x) {
                if v < s {
                    return Err(Error::InvariantViolation("associated-order basis element is not integral".into()));
                }
            }
        }
    }
    let v_k_index: i64 = smith.pivots.iter().sum();
    Ok(AssociatedOrder {
        pivots: smith.pivots,
        v_k_index,
        v_p_index: v_k_index * t.f(model.base) as i64,
        coeffs,
    })
}

/// Everything the oracle computes for one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub search: SearchOutcome,
    pub assoc: AssociatedOrder,
    pub free_over_assoc: bool,
    /// Digits of an `𝔄`-generator of `O_L` when free.
    pub generator_over_assoc: Option<Vec<u8>>,
}

impl OracleResult {
    pub fn v_p_m(&self) -> i64 {
        self.search.v_p_m
    }
}

/// Free iff the minimal index equals the associated-order index; the
/// minimal-index witness then generates `O_L` over `𝔄`.
pub fn check_freeness(search: &SearchOutcome, assoc: &AssociatedOrder) -> (bool, Option<Vec<u8>>) {
    let free = search.v_k_min == assoc.v_k_index;
    (free, free.then(|| search.witness_digits.clone()))
}

pub fn run_oracle(
    model: &GaloisLatticeModel,
    profile: Option<&RamificationProfile>,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    let search = minimal_index_search(model, profile, cfg)?;
    let assoc = associated_order_lattice(model)?;
    if search.v_k_min < assoc.v_k_index {
        return Err(Error::InvariantViolation("minimal index below the associated-order index".into()));
    }
    let (free_over_assoc, generator_over_assoc) = check_freeness(&search, &assoc);
    Ok(OracleResult { search, assoc, free_over_assoc, generator_over_assoc })
}

/// Valuations tied to the jump on a cyclic degree-`p` model with `a ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureCheck {
    /// `v_L((σ-1)^i π_L^a)` for `0 <= i <= p`.
    pub valuations: Vec<i64>,
    pub expected: Vec<i64>,
    /// `v_K` of the determinant of `{π_K^{-ν_i}(σ-1)^i π_L^a}` in the integral basis.
    pub transition_det_valuation: i64,
}

impl StructureCheck {
    pub fn holds(&self) -> bool {
        self.valuations == self.expected && self.transition_det_valuation == 0
    }
}

pub fn structure_check(model: &GaloisLatticeModel, profile: &RamificationProfile) -> Result<StructureCheck> {
    let d = nu_data(profile)?;
    let a = profile.a.expect("cyclic profile");
    let (p, t_jump, e) = (profile.p as usize, profile.jump, profile.e_k as i64);
    let sigma = model.cyclic_generator().ok_or_else(|| Error::InvalidData("group is not cyclic".into()))?;
    let t = &model.tower;
    let top = model.top();
    let x = t.pow(&t.uniformizer(top), a);
    let mut valuations = Vec::with_capacity(p + 1);
    let mut images = Vec::with_capacity(p);
    let mut y = x;
    for i in 0..=p {
        valuations.push(
            t.valuation(&y)
                .exact()
                .ok_or_else(|| Error::PrecisionExhausted("(σ-1)^i π_L^a vanishes to precision".into()))?,
        );
        if i < p {
            images.push(y.clone());
            y = t.sub(&model.act(sigma, &y), &y);
        }
    }
    let mut expected: Vec<i64> = (0..p as i64).map(|i| a as i64 + i * t_jump).collect();
    expected.push(e * p as i64 + t_jump + a as i64);
    let pi_k = t.embed(&t.uniformizer(model.base), top);
    let mut cols = Vec::with_capacity(p);
    for (i, img) in images.iter().enumerate() {
        cols.push(model.coords(&t.div(img, &t.pow(&pi_k, d.nu[i] as u64))?));
    }
    let rows = (0..p).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let transition_det_valuation = det_valuation_in(&t.ring(model.base), rows)?;
    Ok(StructureCheck { valuations, expected, transition_det_valuation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramification::profile;
    use crate::tower::ExtensionSpec;

    fn model(json: &str) -> GaloisLatticeModel {
        let s = ExtensionSpec::from_json(json).unwrap();
        GaloisLatticeModel::build(s.build(32).unwrap(), s.base_cut).unwrap()
    }

    fn sqrt2() -> GaloisLatticeModel {
        model(r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]}]}"#)
    }

    #[test]
    fn index_examples() {
        let m = sqrt2();
        let t = &m.tower;
        let one_plus = vec![t.one(0), t.one(0)];
        assert_eq!(index_of_generated_module(&m, &one_plus), Ok(1));
        let root = vec![t.zero(0), t.one(0)];
        assert_eq!(index_of_generated_module(&m, &root), Err(Error::NotGenerator));
    }

    #[test]
    fn index_is_unit_invariant() {
        let m = sqrt2();
        let t = &m.tower;
        let omega = vec![t.one(0), t.one(0)];
        let u = t.from_int(0, 3);
        let scaled: Vec<_> = omega.iter().map(|x| t.mul(x, &u)).collect();
        assert_eq!(index_of_generated_module(&m, &scaled), index_of_generated_module(&m, &omega));
    }

    #[test]
    fn sqrt_two_oracle() {
        let m = sqrt2();
        let prof = profile(&m).unwrap();
        let r = run_oracle(&m, Some(&prof), &OracleConfig::default()).unwrap();
        assert_eq!(r.v_p_m(), 1);
        assert_eq!(r.search.seed_source, SeedSource::ClosedForm);
        assert_eq!(r.assoc.pivots, vec![0, 1]);
        assert!(r.free_over_assoc);
    }

    #[test]
    fn gaussian_oracle() {
        let m = model(r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[2,2,1]}]}"#);
        let prof = profile(&m).unwrap();
        assert_eq!(prof.jump, 1);
        let (omega, r, _) = find_normal_basis_generator(&m, Some(&prof), 0).unwrap();
        assert_eq!(r, 1);
        assert_eq!(index_of_generated_module(&m, &omega), Ok(1));
        let res = run_oracle(&m, Some(&prof), &OracleConfig::default()).unwrap();
        assert_eq!(res.v_p_m(), 1);
        assert!(res.free_over_assoc);
    }

    #[test]
    fn unramified_oracle() {
        let m = model(r#"{"p":2,"layers":[{"kind":"unramified","poly":[1,1,1]}]}"#);
        let prof = profile(&m).unwrap();
        assert!(prof.unramified);
        let res = run_oracle(&m, Some(&prof), &OracleConfig::default()).unwrap();
        assert_eq!(res.search.seed_source, SeedSource::ZeroOne);
        assert_eq!((res.v_p_m(), res.assoc.v_k_index), (0, 0));
        assert!(res.free_over_assoc);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let m = model(r#"{"p":3,"layers":[{"kind":"eisenstein","poly":[3,0,-3,1]}]}"#);
        let prof = profile(&m).unwrap();
        let par = minimal_index_search(&m, Some(&prof), &OracleConfig::default()).unwrap();
        let ser = minimal_index_search(&m, Some(&prof), &OracleConfig { parallel: false, ..Default::default() }).unwrap();
        assert_eq!(par, ser);
        assert_eq!(par.v_p_m, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let m = model(r#"{"p":3,"layers":[{"kind":"eisenstein","poly":[3,0,-3,1]}]}"#);
        let prof = profile(&m).unwrap();
        let err = minimal_index_search(&m, Some(&prof), &OracleConfig { budget: 10, ..Default::default() });
        assert!(matches!(err, Err(Error::BudgetExceeded { budget: 10, .. })));
    }
}
