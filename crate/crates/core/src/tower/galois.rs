use crate::error::{Error, Result};
use crate::padic::{ScalarMatrix, Val};

use super::roots::roots;
use super::{FieldTower, LayerDesc, LayerKind, TowerElement};

/// A field automorphism fixing level `base`, stored as the images of the
/// generators of levels `base+1..=top` (each an element of the top level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<TowerElement>,
}

impl Automorphism {
    pub fn apply(&self, t: &FieldTower, base: usize, x: &TowerElement) -> TowerElement {
        let top = t.top();
        if x.level <= base {
            return t.embed(x, top);
        }
        let img = &self.images[x.level - base - 1];
        let mut acc = t.zero(top);
        for c in t.chunks(x).iter().rev() {
            acc = t.add(&t.mul(&acc, img), &self.apply(t, base, c));
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, t: &FieldTower, base: usize, other: &Automorphism) -> Automorphism {
        Automorphism { images: other.images.iter().map(|x| self.apply(t, base, x)).collect() }
    }
}

/// Lower bound on `v(σ - τ)` over the generator images.
fn closeness(t: &FieldTower, a: &Automorphism, b: &Automorphism) -> i64 {
    a.images.iter().zip(&b.images).map(|(x, y)| t.valuation(&t.sub(x, y)).bound()).min().unwrap_or(i64::MAX)
}

fn closest(t: &FieldTower, auts: &[Automorphism], x: &Automorphism) -> usize {
    let mut best = (i64::MIN, 0);
    for (i, a) in auts.iter().enumerate() {
        let c = closeness(t, a, x);
        if c > best.0 {
            best = (c, i);
        }
    }
    best.1
}

/// All automorphisms of the top level over level `base`, identity first.
///
/// The images of each generator are the roots of its defining polynomial
/// transported by the partial embedding built so far.
pub fn find_automorphisms(t: &FieldTower, base: usize) -> Result<Vec<Automorphism>> {
    let top = t.top();
    if base > top {
        return Err(Error::InvalidSpec(format!("base level {base} above top level {top}")));
    }
    let mut partial = vec![Automorphism { images: Vec::new() }];
    for m in base + 1..=top {
        let mut next = Vec::new();
        for phi in &partial {
            let poly: Vec<TowerElement> = t.layers()[m - 1].poly.iter().map(|c| phi.apply(t, base, c)).collect();
            for r in roots(t, &poly)? {
                let mut images = phi.images.clone();
                images.push(r);
                next.push(Automorphism { images });
            }
        }
        partial = next;
    }
    let n = t.dim(top) / t.dim(base);
    if partial.len() < n {
        return Err(Error::NotGalois(format!("found {} automorphisms, degree is {n}", partial.len())));
    }
    if partial.len() > n {
        return Err(Error::PrecisionExhausted(format!("{} candidate automorphisms for degree {n}", partial.len())));
    }
    let identity = Automorphism { images: (base + 1..=top).map(|m| t.embed(&t.generator(m), top)).collect() };
    let id = closest(t, &partial, &identity);
    let id_aut = partial.remove(id);
    partial.insert(0, id_aut);
    Ok(partial)
}

/// The p-th cyclotomic layer test and Kummer layer `x^p - π` over the top level.
///
/// Returns the extended tower and `ζ_p` in its top level; the automorphism
/// `π_L ↦ ζ_p π_L` generates the Galois group.
pub fn kummer_extension(k: &FieldTower, uniformizer: Option<&TowerElement>) -> Result<(FieldTower, TowerElement)> {
    let p = k.prime();
    let top = k.top();
    let zeta = if p == 2 {
        k.from_int(top, -1)
    } else {
        let cyclotomic: Vec<TowerElement> = (0..p).map(|_| k.one(top)).collect();
        roots(k, &cyclotomic)?.into_iter().next().ok_or(Error::NoPthRootsOfUnity)?
    };
    let pi = uniformizer.cloned().unwrap_or_else(|| k.uniformizer(top));
    if k.valuation(&pi) != Val::Exact(1) {
        return Err(Error::InvalidData("Kummer layer needs a uniformizer".into()));
    }
    let mut poly = vec![Vec::new(); p as usize + 1];
    poly[0] = k.neg(&pi).coords;
    poly[p as usize] = k.one(top).coords;
    let l = k.extend(LayerDesc { kind: LayerKind::Eisenstein, poly })?;
    let zeta = l.embed(&TowerElement { level: top, coords: zeta.coords }, top + 1);
    Ok((l, zeta))
}

/// The integral basis of `O_L` over `O_K` and the action of every group element on it.
#[derive(Clone, Debug)]
pub struct GaloisLatticeModel {
    pub tower: FieldTower,
    pub base: usize,
    pub n: usize,
    pub basis_labels: Vec<String>,
    pub basis: Vec<TowerElement>,
    pub automorphisms: Vec<Automorphism>,
    /// `matrices[g][i][j]`: coordinate `i` of `g(b_j)`, an element of `O_K`.
    pub matrices: Vec<Vec<Vec<TowerElement>>>,
    /// Restriction of scalars of each matrix to `Z_p`.
    pub restricted: Vec<ScalarMatrix>,
    /// `table[g][h]` is the index of `g∘h`.
    pub table: Vec<Vec<usize>>,
    /// Coordinates of the chosen uniformizer of `L` over `K`.
    pub uniformizer: Vec<TowerElement>,
}

impl GaloisLatticeModel {
    pub fn build(tower: FieldTower, base: usize) -> Result<Self> {
        let top = tower.top();
        if base >= top {
            return Err(Error::InvalidSpec(format!("base level {base} must lie below the top level {top}")));
        }
        let auts = find_automorphisms(&tower, base)?;
        let n = auts.len();
        let mut table = vec![vec![0; n]; n];
        for (g, a) in auts.iter().enumerate() {
            for (h, b) in auts.iter().enumerate() {
                table[g][h] = closest(&tower, &auts, &a.compose(&tower, base, b));
            }
        }
        let auts = cyclic_order(auts, &mut table);
        let basis = tower.basis_over(top, base);
        let basis_labels = (0..n).map(|m| tower.basis_label(top, base, m)).collect();
        let mut matrices = Vec::with_capacity(n);
        for a in &auts {
            let cols: Vec<Vec<TowerElement>> =
                basis.iter().map(|b| tower.coords_over(&a.apply(&tower, base, b), base)).collect();
            let m: Vec<Vec<TowerElement>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
            for row in &m {
                for x in row {
                    if tower.valuation(x).bound() < 0 {
                        return Err(Error::InvariantViolation("non-integral action matrix entry".into()));
                    }
                }
            }
            matrices.push(m);
        }
        let restricted = matrices.iter().map(|m| restrict(&tower, m)).collect::<Result<Vec<_>>>()?;
        let uniformizer = tower.coords_over(&tower.uniformizer(top), base);
        let model = GaloisLatticeModel {
            tower,
            base,
            n,
            basis_labels,
            basis,
            automorphisms: auts,
            matrices,
            restricted,
            table,
            uniformizer,
        };
        model.check_group_law()?;
        Ok(model)
    }

    pub fn top(&self) -> usize {
        self.tower.top()
    }

    /// `M_g·M_h = M_{gh}` to precision, and `M_1 = Id`.
    fn check_group_law(&self) -> Result<()> {
        let ring = self.tower.ring(self.base);
        let id: Vec<Vec<TowerElement>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { self.tower.one(self.base) } else { self.tower.zero(self.base) }).collect())
            .collect();
        if !mat_eq(&self.tower, &self.matrices[0], &id) {
            return Err(Error::InvariantViolation("first group element does not act as the identity".into()));
        }
        for g in 0..self.n {
            for h in 0..self.n {
                let prod = mat_mul(&ring, &self.matrices[g], &self.matrices[h]);
                if !mat_eq(&self.tower, &prod, &self.matrices[self.table[g][h]]) {
                    return Err(Error::InvariantViolation(format!("M_{g} M_{h} differs from M_{}", self.table[g][h])));
                }
            }
        }
        Ok(())
    }

    /// `g(x)` for an element `x` of the top level.
    pub fn act(&self, g: usize, x: &TowerElement) -> TowerElement {
        self.automorphisms[g].apply(&self.tower, self.base, x)
    }

    /// The `K`-coordinate vector of `x`.
    pub fn coords(&self, x: &TowerElement) -> Vec<TowerElement> {
        self.tower.coords_over(x, self.base)
    }

    pub fn from_coords(&self, c: &[TowerElement]) -> TowerElement {
        self.tower.from_coords_over(self.top(), c)
    }

    /// `M·v` over `O_K`.
    pub fn apply_matrix(&self, g: usize, v: &[TowerElement]) -> Vec<TowerElement> {
        let t = &self.tower;
        self.matrices[g]
            .iter()
            .map(|row| row.iter().zip(v).fold(t.zero(self.base), |acc, (a, b)| t.add(&acc, &t.mul(a, b))))
            .collect()
    }

    /// Index of a generator of the group when it is cyclic (element 1 by construction).
    pub fn cyclic_generator(&self) -> Option<usize> {
        if self.n == 1 {
            return Some(0);
        }
        (order_of(&self.table, 1) == self.n).then_some(1)
    }
}

fn order_of(table: &[Vec<usize>], g: usize) -> usize {
    let mut x = g;
    let mut k = 1;
    while x != 0 && k <= table.len() {
        x = table[g][x];
        k += 1;
    }
    k
}

/// Reorders a cyclic group as `1, σ, σ², ...` with `σ` the first generator found.
fn cyclic_order(auts: Vec<Automorphism>, table: &mut Vec<Vec<usize>>) -> Vec<Automorphism> {
    let n = auts.len();
    let Some(gen) = (1..n).find(|&g| order_of(table, g) == n) else {
        return auts;
    };
    let mut order = vec![0];
    let mut x = gen;
    while x != 0 {
        order.push(x);
        x = table[gen][x];
    }
    let mut pos = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let new_table = (0..n).map(|g| (0..n).map(|h| pos[table[order[g]][order[h]]]).collect()).collect();
    *table = new_table;
    order.iter().map(|&i| auts[i].clone()).collect()
}

fn mat_mul(
    ring: &super::TowerRing<'_>,
    a: &[Vec<TowerElement>],
    b: &[Vec<TowerElement>],
) -> Vec<Vec<TowerElement>> {
    use crate::padic::ValuationRing;
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(ring.zero(), |acc, k| ring.add(&acc, &ring.mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_eq(t: &FieldTower, a: &[Vec<TowerElement>], b: &[Vec<TowerElement>]) -> bool {
    a.iter().zip(b).all(|(r, s)| r.iter().zip(s).all(|(x, y)| t.approx_eq(x, y)))
}

/// Restriction of scalars: an `n×n` matrix over level `k` becomes an
/// `(nD)×(nD)` matrix over `Z_p`.
pub fn restrict(t: &FieldTower, m: &[Vec<TowerElement>]) -> Result<ScalarMatrix> {
    let n = m.len();
    let d = m.first().and_then(|r| r.first()).map_or(1, |x| t.dim(x.level));
    let mut rows = vec![Vec::with_capacity(n * d); n * d];
    for (i, row) in m.iter().enumerate() {
        for x in row {
            let block = t.mult_matrix(x);
            for (r, brow) in block.into_iter().enumerate() {
                rows[i * d + r].extend(brow);
            }
        }
    }
    ScalarMatrix::new(t.prime(), t.precision(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicScalar;

    fn ints(p: u64, xs: &[i64]) -> Vec<Vec<PadicScalar>> {
        xs.iter().map(|&x| vec![PadicScalar::from_i64(p, 32, x)]).collect()
    }

    fn quadratic(d: &[i64]) -> FieldTower {
        FieldTower::new(2, vec![LayerDesc { kind: LayerKind::Eisenstein, poly: ints(2, d) }], 32).unwrap()
    }

    #[test]
    fn sqrt_two_sign_flip() {
        let model = GaloisLatticeModel::build(quadratic(&[-2, 0, 1]), 0).unwrap();
        let t = &model.tower;
        let m = &model.matrices[1];
        assert!(t.approx_eq(&m[0][0], &t.one(0)));
        assert!(t.approx_eq(&m[1][1], &t.from_int(0, -1)));
        assert!(t.is_zero(&m[0][1]) && t.is_zero(&m[1][0]));
        assert_eq!(model.table, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(model.basis_labels, vec!["1", "g1"]);
    }

    #[test]
    fn gaussian_integers_model() {
        // π = i - 1 has minimal polynomial x^2 + 2x + 2; σ(π) = -2 - π
        let model = GaloisLatticeModel::build(quadratic(&[2, 2, 1]), 0).unwrap();
        let t = &model.tower;
        let m = &model.matrices[1];
        assert!(t.approx_eq(&m[0][1], &t.from_int(0, -2)));
        assert!(t.approx_eq(&m[1][1], &t.from_int(0, -1)));
    }

    #[test]
    fn cubic_is_cyclic() {
        let t = FieldTower::new(3, vec![LayerDesc { kind: LayerKind::Eisenstein, poly: ints(3, &[3, 0, -3, 1]) }], 32)
            .unwrap();
        let model = GaloisLatticeModel::build(t, 0).unwrap();
        assert_eq!(model.n, 3);
        assert_eq!(model.cyclic_generator(), Some(1));
        assert_eq!(model.table[1][2], 0);
    }

    #[test]
    fn non_galois_rejected() {
        let t = FieldTower::new(3, vec![LayerDesc { kind: LayerKind::Eisenstein, poly: ints(3, &[-3, 0, 0, 1]) }], 32)
            .unwrap();
        assert!(matches!(GaloisLatticeModel::build(t, 0), Err(Error::NotGalois(_))));
    }

    #[test]
    fn kummer_layers() {
        let q2 = FieldTower::new(2, vec![], 32).unwrap();
        let (l, zeta) = kummer_extension(&q2, None).unwrap();
        assert!(l.approx_eq(&zeta, &l.from_int(1, -1)));
        let q3 = FieldTower::new(3, vec![], 32).unwrap();
        assert_eq!(kummer_extension(&q3, None).unwrap_err(), Error::NoPthRootsOfUnity);
        let k = FieldTower::new(3, vec![LayerDesc { kind: LayerKind::Eisenstein, poly: ints(3, &[3, 3, 1]) }], 32)
            .unwrap();
        let (l, zeta) = kummer_extension(&k, None).unwrap();
        assert_eq!(l.e(2), 6);
        let model = GaloisLatticeModel::build(l.clone(), 1).unwrap();
        // every image of π_L is ζ^j π_L
        let pi = l.generator(2);
        for a in &model.automorphisms {
            let ratio = l.div(&a.images[0], &pi).unwrap();
            assert!((0..3).any(|j| l.approx_eq(&ratio, &l.pow(&zeta, j))));
        }
    }
}
