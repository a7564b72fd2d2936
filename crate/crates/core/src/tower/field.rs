use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{solve_qp, FpPoly, PadicScalar, ResidueField, Val, ValuationRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerKind {
    Unramified,
    Eisenstein,
}

/// An element of some level of a tower, as flat `Z_p` coordinates.
///
/// A level-`k` element is `d_k` consecutive chunks of level-`(k-1)`
/// coordinates; chunk `i` is the coefficient of the `k`-th generator to the
/// power `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TowerElement {
    pub level: usize,
    pub coords: Vec<PadicScalar>,
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}{:?}", self.level, self.coords)
    }
}

/// Input description of one layer: polynomial coefficients, little-endian,
/// each as coordinates over the level below (shorter vectors are zero padded).
#[derive(Clone, Debug)]
pub struct LayerDesc {
    pub kind: LayerKind,
    pub poly: Vec<Vec<PadicScalar>>,
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub kind: LayerKind,
    pub degree: usize,
    /// Monic defining polynomial over the level below, leading 1 included.
    pub poly: Vec<TowerElement>,
}

/// `Q_p`, then at most one unramified layer, then Eisenstein layers.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    precision: u32,
    layers: Vec<Layer>,
    dims: Vec<usize>,
    residue: ResidueField,
}

impl FieldTower {
    /// Validates the layers and builds the tower.
    pub fn new(p: u64, layers: Vec<LayerDesc>, precision: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidSpec("precision must be positive".into()));
        }
        let mut tower = FieldTower {
            p,
            precision,
            layers: Vec::new(),
            dims: vec![1],
            residue: ResidueField::prime_field(p),
        };
        for (idx, desc) in layers.into_iter().enumerate() {
            tower.push_layer(idx, desc)?;
        }
        Ok(tower)
    }

    fn push_layer(&mut self, idx: usize, desc: LayerDesc) -> Result<()> {
        let below = self.layers.len();
        let dim_below = self.dims[below];
        if desc.poly.len() < 2 {
            return Err(Error::InvalidSpec(format!("layer {idx}: polynomial must have degree >= 1")));
        }
        let degree = desc.poly.len() - 1;
        let mut poly = Vec::with_capacity(desc.poly.len());
        for coeff in desc.poly {
            if coeff.len() > dim_below {
                return Err(Error::InvalidSpec(format!(
                    "layer {idx}: coefficient has {} coordinates, expected at most {dim_below}",
                    coeff.len()
                )));
            }
            let mut coords = Vec::with_capacity(dim_below);
            for s in coeff {
                if s.prime() != self.p {
                    return Err(Error::PrimeMismatch(self.p, s.prime()));
                }
                coords.push(s.truncate_abs(self.precision as i64));
            }
            coords.resize(dim_below, PadicScalar::zero(self.p, self.precision));
            poly.push(TowerElement { level: below, coords });
        }
        if !self.approx_eq(&poly[degree], &self.one(below)) {
            return Err(Error::InvalidSpec(format!("layer {idx}: polynomial is not monic")));
        }
        match desc.kind {
            LayerKind::Unramified => {
                if below != 0 {
                    return Err(Error::InvalidSpec(format!(
                        "layer {idx}: an unramified layer is only supported directly over Q_p"
                    )));
                }
                let mut residues = Vec::with_capacity(degree + 1);
                for c in &poly {
                    let s = &c.coords[0];
                    if !s.is_integral() {
                        return Err(Error::InvalidSpec(format!("layer {idx}: non-integral coefficient")));
                    }
                    residues.push(s.residue_u64(1, self.p).ok_or_else(|| {
                        Error::PrecisionExhausted("coefficient residue unknown".into())
                    })?);
                }
                let reduced = FpPoly::new(self.p, residues);
                if !reduced.is_irreducible() {
                    return Err(Error::NotIrreducible(format!("layer {idx}: {:?} mod {}", reduced.coeffs, self.p)));
                }
                self.residue = ResidueField { p: self.p, modulus: reduced };
            }
            LayerKind::Eisenstein => {
                for (i, c) in poly.iter().enumerate().take(degree) {
                    let v = self.valuation(c);
                    let ok = if i == 0 { v == Val::Exact(1) } else { v.bound() >= 1 };
                    if !ok {
                        return Err(Error::NotEisenstein(format!(
                            "layer {idx}: coefficient {i} has valuation {v}"
                        )));
                    }
                }
            }
        }
        self.layers.push(Layer { kind: desc.kind, degree, poly });
        self.dims.push(dim_below * degree);
        Ok(())
    }

    /// Returns a copy with one more layer on top.
    pub fn extend(&self, desc: LayerDesc) -> Result<Self> {
        let mut t = self.clone();
        let idx = t.layers.len();
        t.push_layer(idx, desc)?;
        Ok(t)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }
    /// Index of the top level.
    pub fn top(&self) -> usize {
        self.layers.len()
    }
    /// Degree of level `k` over `Q_p`.
    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// Absolute ramification index of level `k`.
    pub fn e(&self, k: usize) -> u64 {
        self.layers[..k].iter().filter(|l| l.kind == LayerKind::Eisenstein).map(|l| l.degree as u64).product()
    }

    /// Absolute inertia degree of level `k`.
    pub fn f(&self, k: usize) -> u64 {
        self.layers[..k].iter().filter(|l| l.kind == LayerKind::Unramified).map(|l| l.degree as u64).product()
    }

    fn scalar_zero(&self) -> PadicScalar {
        PadicScalar::zero(self.p, self.precision)
    }

    pub fn zero(&self, k: usize) -> TowerElement {
        TowerElement { level: k, coords: vec![self.scalar_zero(); self.dims[k]] }
    }

    pub fn one(&self, k: usize) -> TowerElement {
        self.from_int(k, 1)
    }

    pub fn from_int(&self, k: usize, x: i64) -> TowerElement {
        self.from_scalar(k, PadicScalar::from_i64(self.p, self.precision, x))
    }

    pub fn from_scalar(&self, k: usize, x: PadicScalar) -> TowerElement {
        let mut e = self.zero(k);
        e.coords[0] = x;
        e
    }

    /// The generator of layer `k` (a root of its defining polynomial).
    pub fn generator(&self, k: usize) -> TowerElement {
        assert!(k >= 1 && k <= self.top());
        if self.layers[k - 1].degree == 1 {
            return self.neg(&self.embed(&self.layers[k - 1].poly[0], k));
        }
        let mut e = self.zero(k);
        e.coords[self.dims[k - 1]] = PadicScalar::one(self.p, self.precision);
        e
    }

    /// A uniformizer of level `k`.
    pub fn uniformizer(&self, k: usize) -> TowerElement {
        match (0..k).rev().find(|&i| self.layers[i].kind == LayerKind::Eisenstein) {
            Some(i) => self.embed(&self.generator(i + 1), k),
            None => self.from_int(k, self.p as i64),
        }
    }

    /// Embeds a lower-level element into level `k`.
    pub fn embed(&self, x: &TowerElement, k: usize) -> TowerElement {
        assert!(x.level <= k);
        let mut coords = x.coords.clone();
        coords.resize(self.dims[k], self.scalar_zero());
        TowerElement { level: k, coords }
    }

    /// The level-`k` element `Σ chunks[i]·γ_k^i` with chunks at level `k-1`.
    pub fn from_chunks(&self, k: usize, chunks: &[TowerElement]) -> TowerElement {
        let coords = chunks.iter().flat_map(|c| c.coords.iter().cloned()).collect();
        TowerElement { level: k, coords }
    }

    pub fn chunks(&self, x: &TowerElement) -> Vec<TowerElement> {
        let k = x.level;
        assert!(k >= 1);
        x.coords
            .chunks(self.dims[k - 1])
            .map(|c| TowerElement { level: k - 1, coords: c.to_vec() })
            .collect()
    }

    /// Coordinates of `x` over level `base` in the monomial basis.
    pub fn coords_over(&self, x: &TowerElement, base: usize) -> Vec<TowerElement> {
        x.coords
            .chunks(self.dims[base])
            .map(|c| TowerElement { level: base, coords: c.to_vec() })
            .collect()
    }

    pub fn from_coords_over(&self, k: usize, chunks: &[TowerElement]) -> TowerElement {
        let coords: Vec<PadicScalar> = chunks.iter().flat_map(|c| c.coords.iter().cloned()).collect();
        assert_eq!(coords.len(), self.dims[k]);
        TowerElement { level: k, coords }
    }

    /// Monomials in the generators of levels `base+1..=k`; an integral basis
    /// of level `k` over level `base`.
    pub fn basis_over(&self, k: usize, base: usize) -> Vec<TowerElement> {
        let n = self.dims[k] / self.dims[base];
        (0..n)
            .map(|m| {
                let mut chunks = vec![self.zero(base); n];
                chunks[m] = self.one(base);
                self.from_coords_over(k, &chunks)
            })
            .collect()
    }

    /// Exponents of the generators for basis monomial `m` of level `k` over `base`.
    pub fn basis_exponents(&self, k: usize, base: usize, mut m: usize) -> Vec<usize> {
        (base..k)
            .map(|i| {
                let d = self.layers[i].degree;
                let e = m % d;
                m /= d;
                e
            })
            .collect()
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.level, b.level);
        TowerElement { level: a.level, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.level, b.level);
        TowerElement { level: a.level, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &TowerElement) -> TowerElement {
        TowerElement { level: a.level, coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &TowerElement, s: &PadicScalar) -> TowerElement {
        TowerElement { level: a.level, coords: a.coords.iter().map(|x| x * s).collect() }
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        debug_assert_eq!(a.level, b.level);
        let k = a.level;
        if k == 0 {
            return TowerElement { level: 0, coords: vec![&a.coords[0] * &b.coords[0]] };
        }
        let layer = &self.layers[k - 1];
        let d = layer.degree;
        let ac = self.chunks(a);
        let bc = self.chunks(b);
        let mut prod = vec![self.zero(k - 1); 2 * d - 1];
        for (i, x) in ac.iter().enumerate() {
            if self.is_exact_zero(x) {
                continue;
            }
            for (j, y) in bc.iter().enumerate() {
                prod[i + j] = self.add(&prod[i + j], &self.mul(x, y));
            }
        }
        for i in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut prod[i], self.zero(k - 1));
            for (j, g) in layer.poly.iter().enumerate().take(d) {
                prod[i - d + j] = self.sub(&prod[i - d + j], &self.mul(&c, g));
            }
        }
        prod.truncate(d);
        self.from_chunks(k, &prod)
    }

    pub fn pow(&self, a: &TowerElement, mut e: u64) -> TowerElement {
        let mut base = a.clone();
        let mut acc = self.one(a.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Valuation normalized at the element's own level.
    pub fn valuation(&self, x: &TowerElement) -> Val {
        let k = x.level;
        if k == 0 {
            return x.coords[0].valuation();
        }
        let layer = &self.layers[k - 1];
        let chunks = self.chunks(x);
        let mut acc: Option<Val> = None;
        for (i, c) in chunks.iter().enumerate() {
            let v = self.valuation(c);
            let term = match layer.kind {
                LayerKind::Eisenstein => v.scale(layer.degree as i64).offset(i as i64),
                LayerKind::Unramified => v,
            };
            acc = Some(acc.map_or(term, |a| a.min(term)));
        }
        acc.expect("nonempty layer")
    }

    /// `v_p(N_{level/Q_p}(x))`.
    pub fn norm_valuation(&self, x: &TowerElement) -> Val {
        self.valuation(x).scale(self.f(x.level) as i64)
    }

    /// Zero at the full working precision, so dropping it loses nothing.
    fn is_exact_zero(&self, x: &TowerElement) -> bool {
        x.coords.iter().all(|s| s.is_zero() && s.abs_precision() >= self.precision as i64)
    }

    pub fn is_zero(&self, x: &TowerElement) -> bool {
        !self.valuation(x).is_exact()
    }

    /// True when `a - b` is zero to the tracked precision.
    pub fn approx_eq(&self, a: &TowerElement, b: &TowerElement) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// The `Z_p` matrix of multiplication by `x` (column `j` is `x·e_j`).
    pub fn mult_matrix(&self, x: &TowerElement) -> Vec<Vec<PadicScalar>> {
        let n = self.dims[x.level];
        let cols: Vec<Vec<PadicScalar>> = (0..n)
            .map(|j| {
                let mut e = self.zero(x.level);
                e.coords[j] = PadicScalar::one(self.p, self.precision);
                self.mul(x, &e).coords
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// `a / b` in the field.
    pub fn div(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        debug_assert_eq!(a.level, b.level);
        if a.level == 0 {
            return Ok(TowerElement { level: 0, coords: vec![a.coords[0].try_div(&b.coords[0])?] });
        }
        if self.is_zero(b) {
            return Err(Error::NotInvertibleToPrecision);
        }
        let m = self.mult_matrix(b);
        Ok(TowerElement { level: a.level, coords: solve_qp(&m, &a.coords)? })
    }

    pub fn inv(&self, a: &TowerElement) -> Result<TowerElement> {
        self.div(&self.one(a.level), a)
    }

    /// Residue class of an integral element in `F_q`.
    pub fn residue(&self, x: &TowerElement) -> Result<Vec<u64>> {
        let f = if self.layers.first().map(|l| l.kind) == Some(LayerKind::Unramified) && x.level >= 1 {
            self.layers[0].degree
        } else {
            1
        };
        let mut r = Vec::with_capacity(self.residue.degree());
        for s in &x.coords[..f] {
            if !s.is_integral() || s.abs_precision() < 1 {
                return Err(Error::PrecisionExhausted("residue of an element known to no digits".into()));
            }
            r.push(s.residue_u64(1, self.p).unwrap_or(0));
        }
        r.resize(self.residue.degree(), 0);
        Ok(r)
    }

    /// A lift of a residue class to level `k`.
    pub fn lift_residue(&self, k: usize, r: &[u64]) -> TowerElement {
        let mut e = self.zero(k);
        let f = if k >= 1 && self.layers[0].kind == LayerKind::Unramified { self.layers[0].degree } else { 1 };
        for (i, &c) in r.iter().enumerate().take(f) {
            e.coords[i] = PadicScalar::from_i64(self.p, self.precision, c as i64);
        }
        e
    }

    /// Evaluates `Σ poly[i]·x^i`.
    pub fn eval_poly(&self, poly: &[TowerElement], x: &TowerElement) -> TowerElement {
        let mut acc = self.zero(x.level);
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, poly: &[TowerElement]) -> Vec<TowerElement> {
        poly.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.scale(c, &PadicScalar::from_i64(self.p, self.precision, i as i64)))
            .collect()
    }

    /// Human-readable label of basis monomial `m` of level `k` over `base`.
    pub fn basis_label(&self, k: usize, base: usize, m: usize) -> String {
        let parts: Vec<String> = self
            .basis_exponents(k, base, m)
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("g{}", base + i + 1) } else { format!("g{}^{}", base + i + 1, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// View of level `k` as a valuation ring.
    pub fn ring(&self, k: usize) -> TowerRing<'_> {
        TowerRing { tower: self, level: k }
    }
}

/// Level `level` of a tower as a valuation ring.
#[derive(Clone, Copy, Debug)]
pub struct TowerRing<'a> {
    pub tower: &'a FieldTower,
    pub level: usize,
}

impl ValuationRing for TowerRing<'_> {
    type Elem = TowerElement;

    fn zero(&self) -> TowerElement {
        self.tower.zero(self.level)
    }
    fn one(&self) -> TowerElement {
        self.tower.one(self.level)
    }
    fn add(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.tower.add(a, b)
    }
    fn sub(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.tower.sub(a, b)
    }
    fn mul(&self, a: &TowerElement, b: &TowerElement) -> TowerElement {
        self.tower.mul(a, b)
    }
    fn neg(&self, a: &TowerElement) -> TowerElement {
        self.tower.neg(a)
    }
    fn valuation(&self, a: &TowerElement) -> Val {
        self.tower.valuation(a)
    }
    fn div_exact(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.tower.div(a, b)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: u64, xs: &[i64]) -> Vec<Vec<PadicScalar>> {
        xs.iter().map(|&x| vec![PadicScalar::from_i64(p, 32, x)]).collect()
    }

    fn eis(p: u64, xs: &[i64]) -> LayerDesc {
        LayerDesc { kind: LayerKind::Eisenstein, poly: ints(p, xs) }
    }

    #[test]
    fn sqrt_two_tower() {
        let t = FieldTower::new(2, vec![eis(2, &[-2, 0, 1])], 32).unwrap();
        assert_eq!((t.e(1), t.f(1)), (2, 1));
        let pi = t.generator(1);
        assert_eq!(t.valuation(&pi), Val::Exact(1));
        assert_eq!(t.valuation(&t.from_int(1, 2)), Val::Exact(2));
        assert_eq!(t.valuation(&t.add(&t.one(1), &pi)), Val::Exact(0));
        assert!(t.approx_eq(&t.mul(&pi, &pi), &t.from_int(1, 2)));
    }

    #[test]
    fn cyclic_cubic_tower() {
        let t = FieldTower::new(3, vec![eis(3, &[3, 0, -3, 1])], 32).unwrap();
        assert_eq!((t.e(1), t.f(1)), (3, 1));
    }

    #[test]
    fn unramified_quadratic() {
        let t = FieldTower::new(2, vec![LayerDesc { kind: LayerKind::Unramified, poly: ints(2, &[1, 1, 1]) }], 32)
            .unwrap();
        assert_eq!((t.e(1), t.f(1)), (1, 2));
        assert_eq!(t.residue_field().order(), 4);
        assert_eq!(t.uniformizer(1), t.from_int(1, 2));
    }

    #[test]
    fn rejects_bad_layers() {
        assert!(matches!(FieldTower::new(2, vec![eis(2, &[-4, 0, 1])], 32), Err(Error::NotEisenstein(_))));
        assert!(matches!(FieldTower::new(2, vec![eis(2, &[2, 1, 1])], 32), Err(Error::NotEisenstein(_))));
        let reducible = LayerDesc { kind: LayerKind::Unramified, poly: ints(2, &[1, 0, 1]) };
        assert!(matches!(FieldTower::new(2, vec![reducible], 32), Err(Error::NotIrreducible(_))));
        let wrong_prime = LayerDesc { kind: LayerKind::Eisenstein, poly: ints(3, &[3, 0, 1]) };
        assert!(matches!(FieldTower::new(2, vec![wrong_prime], 32), Err(Error::PrimeMismatch(2, 3))));
    }

    #[test]
    fn division_inverts_multiplication() {
        let t = FieldTower::new(3, vec![eis(3, &[3, 3, 1])], 32).unwrap();
        let t = t
            .extend(LayerDesc {
                kind: LayerKind::Eisenstein,
                poly: vec![
                    vec![PadicScalar::zero(3, 32), PadicScalar::from_i64(3, 32, -1)],
                    vec![],
                    vec![],
                    vec![PadicScalar::one(3, 32)],
                ],
            })
            .unwrap();
        assert_eq!((t.e(2), t.dim(2)), (6, 6));
        let g = t.generator(2);
        let x = t.add(&t.from_int(2, 5), &t.mul(&g, &g));
        let y = t.add(&g, &t.embed(&t.generator(1), 2));
        let q = t.div(&t.mul(&x, &y), &y).unwrap();
        assert!(t.approx_eq(&q, &x));
        assert_eq!(t.valuation(&g), Val::Exact(1));
        assert_eq!(t.valuation(&t.embed(&t.generator(1), 2)), Val::Exact(3));
        assert_eq!(t.valuation(&t.from_int(2, 3)), Val::Exact(6));
    }
}
