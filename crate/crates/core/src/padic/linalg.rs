use crate::error::{Error, Result};

use super::{PadicScalar, Val};

/// A discrete valuation ring whose elements are known to finite precision.
///
/// `valuation` is normalized so that a uniformizer has valuation 1.
pub trait ValuationRing {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn valuation(&self, a: &Self::Elem) -> Val;
    /// `a / b` for `v(a) >= v(b)`; the quotient is integral.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
}

/// `Z_p` with scalars embedded at a fixed precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegersZp {
    pub p: u64,
    pub precision: u32,
}

impl ValuationRing for IntegersZp {
    type Elem = PadicScalar;

    fn zero(&self) -> PadicScalar {
        PadicScalar::zero(self.p, self.precision)
    }
    fn one(&self) -> PadicScalar {
        PadicScalar::one(self.p, self.precision)
    }
    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a + b
    }
    fn sub(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a - b
    }
    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a * b
    }
    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        -a
    }
    fn valuation(&self, a: &PadicScalar) -> Val {
        a.valuation()
    }
    fn div_exact(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        a.try_div(b)
    }
}

/// A dense matrix of p-adic scalars sharing one prime and precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    p: u64,
    precision: u32,
    rows: usize,
    cols: usize,
    entries: Vec<PadicScalar>,
}

impl ScalarMatrix {
    /// Builds a matrix from rows; entries are truncated to the common precision.
    pub fn new(p: u64, precision: u32, rows: Vec<Vec<PadicScalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for x in row {
                if x.prime() != p {
                    return Err(Error::PrimeMismatch(p, x.prime()));
                }
                entries.push(x.truncate_abs(precision as i64));
            }
        }
        Ok(ScalarMatrix { p, precision, rows: nrows, cols: ncols, entries })
    }

    pub fn from_i64(p: u64, precision: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| PadicScalar::from_i64(p, precision, x)).collect())
            .collect();
        Self::new(p, precision, rows)
    }

    pub fn identity(p: u64, precision: u32, n: usize) -> Self {
        let mut entries = vec![PadicScalar::zero(p, precision); n * n];
        for i in 0..n {
            entries[i * n + i] = PadicScalar::one(p, precision);
        }
        ScalarMatrix { p, precision, rows: n, cols: n, entries }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &PadicScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn to_rows(&self) -> Vec<Vec<PadicScalar>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let prec = self.precision.min(other.precision);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(other.cols);
            for j in 0..other.cols {
                let mut acc = PadicScalar::zero(self.p, prec);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        ScalarMatrix::new(self.p, prec, rows)
    }

    fn ring(&self) -> IntegersZp {
        IntegersZp { p: self.p, precision: self.precision }
    }
}

/// `v_p(det M)`, certified.
pub fn det_valuation(m: &ScalarMatrix) -> Result<i64> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    det_valuation_in(&m.ring(), m.to_rows())
}

/// Smith form over `Z_p`.
pub fn dvr_smith_form(m: &ScalarMatrix) -> Result<SmithForm<PadicScalar>> {
    if m.entries.iter().any(|x| !x.is_integral()) {
        return Err(Error::InvalidData("Smith form needs integral entries".into()));
    }
    smith_form_in(&m.ring(), m.to_rows())
}

/// Result of diagonalizing `T` by unimodular row and column operations.
#[derive(Clone, Debug)]
pub struct SmithForm<E> {
    /// Pivot valuations `s_1 <= s_2 <= ...`.
    pub pivots: Vec<i64>,
    pub rank: usize,
    /// `W` with `T·W = U·S` for some unimodular `U`.
    pub column_transform: Vec<Vec<E>>,
    /// Set when fewer than `min(rows, cols)` pivots could be certified.
    pub rank_deficient: bool,
}

/// Position and valuation of the pivot in the trailing block starting at `k`.
/// Returns `Ok(None)` when every remaining entry is zero to precision.
fn choose_pivot<R: ValuationRing>(
    ring: &R,
    a: &[Vec<R::Elem>],
    k: usize,
    cols: usize,
) -> Result<Option<(usize, usize, i64)>> {
    let mut best: Option<(usize, usize, Val)> = None;
    let mut floor: Option<i64> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().take(cols).skip(k) {
            let v = ring.valuation(x);
            match v {
                Val::AtLeast(b) => floor = Some(floor.map_or(b, |f| f.min(b))),
                Val::Exact(_) => {
                    if best.map_or(true, |(_, _, bv)| v.pivot_cmp(bv).is_lt()) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
    }
    match best {
        None => Ok(None),
        Some((i, j, v)) => {
            let v = v.bound();
            if let Some(f) = floor {
                if f < v {
                    return Err(Error::PrecisionExhausted(format!(
                        "pivot valuation {v} not certified against an entry known only to {f}"
                    )));
                }
            }
            Ok(Some((i, j, v)))
        }
    }
}

/// Certified determinant valuation over any valuation ring.
pub fn det_valuation_in<R: ValuationRing>(ring: &R, mut a: Vec<Vec<R::Elem>>) -> Result<i64> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let mut total = 0;
    for k in 0..n {
        let (pi, pj, v) = choose_pivot(ring, &a, k, n)?
            .ok_or_else(|| Error::PrecisionExhausted("determinant is zero to precision".into()))?;
        total += v;
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let f = ring.div_exact(&row[k], &pivot_row[k])?;
            for j in k + 1..n {
                row[j] = ring.sub(&row[j], &ring.mul(&f, &pivot_row[j]));
            }
        }
    }
    Ok(total)
}

/// Smith form over any valuation ring, with full pivoting on minimal valuation.
pub fn smith_form_in<R: ValuationRing>(ring: &R, mut a: Vec<Vec<R::Elem>>) -> Result<SmithForm<R::Elem>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged rows".into()));
    }
    let mut w: Vec<Vec<R::Elem>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let bound = rows.min(cols);
    for k in 0..bound {
        let Some((pi, pj, v)) = choose_pivot(ring, &a, k, cols)? else {
            break;
        };
        pivots.push(v);
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for row in w.iter_mut() {
            row.swap(k, pj);
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &mut top[k];
        for row in rest.iter_mut() {
            if ring.valuation(&row[k]).exact().is_none() {
                row[k] = ring.zero();
                continue;
            }
            let f = ring.div_exact(&row[k], &pivot_row[k])?;
            row[k] = ring.zero();
            for j in k + 1..cols {
                row[j] = ring.sub(&row[j], &ring.mul(&f, &pivot_row[j]));
            }
        }
        // column operations only touch the pivot row and W
        for j in k + 1..cols {
            if ring.valuation(&pivot_row[j]).exact().is_none() {
                pivot_row[j] = ring.zero();
                continue;
            }
            let f = ring.div_exact(&pivot_row[j], &pivot_row[k])?;
            pivot_row[j] = ring.zero();
            for row in w.iter_mut() {
                row[j] = ring.sub(&row[j], &ring.mul(&f, &row[k]));
            }
        }
    }
    let rank = pivots.len();
    Ok(SmithForm { pivots, rank, column_transform: w, rank_deficient: rank < bound })
}

/// Solves `A x = b` over `Q_p` for square nonsingular `A`.
pub fn solve_qp(a: &[Vec<PadicScalar>], b: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let ring = match b.first() {
        Some(x) => IntegersZp { p: x.prime(), precision: x.precision() },
        None => return Ok(Vec::new()),
    };
    let mut m: Vec<Vec<PadicScalar>> =
        a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (pi, pj, _) = choose_pivot(&ring, &m, k, n)?
            .ok_or_else(|| Error::PrecisionExhausted("singular system to precision".into()))?;
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        perm.swap(k, pj);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let f = row[k].try_div(&pivot_row[k])?;
            for j in k + 1..=n {
                row[j] = row[j].try_sub(&f.try_mul(&pivot_row[j])?)?;
            }
        }
    }
    let mut y = vec![ring.zero(); n];
    for k in (0..n).rev() {
        let mut acc = m[k][n].clone();
        for j in k + 1..n {
            acc = acc.try_sub(&m[k][j].try_mul(&y[j])?)?;
        }
        y[k] = acc.try_div(&m[k][k])?;
    }
    let mut x = vec![ring.zero(); n];
    for (k, &orig) in perm.iter().enumerate() {
        x[orig] = y[k].clone();
    }
    Ok(x)
}
