use num_integer::Integer;

/// Multiplicative inverse of a unit modulo `m`.
fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn val_u64(p: u64, mut x: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(cap)
}

/// `v_p(det A)` for an `n×n` row-major matrix of residues modulo `p^b`.
///
/// Returns `None` when the determinant vanishes modulo `p^b`, i.e. its
/// valuation is at least `b`. Eliminates in place. With full pivoting on
/// minimal valuation every quotient is exact, so no digits are lost.
pub fn det_valuation_mod(a: &mut [u64], n: usize, p: u64, b: u32) -> Option<u32> {
    let m = p.checked_pow(b).expect("modulus fits in u64");
    debug_assert_eq!(a.len(), n * n);
    let mut total = 0u32;
    let mut pows = Vec::with_capacity(b as usize + 1);
    let mut q = 1u64;
    for _ in 0..=b {
        pows.push(q);
        q = q.saturating_mul(p);
    }
    for k in 0..n {
        let mut best = (b, k, k);
        'scan: for i in k..n {
            for j in k..n {
                let v = val_u64(p, a[i * n + j], b);
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let (v, pi, pj) = best;
        total += v;
        if v == b || total >= b {
            return None;
        }
        if pi != k {
            for j in 0..n {
                a.swap(k * n + j, pi * n + j);
            }
        }
        if pj != k {
            for i in 0..n {
                a.swap(i * n + k, i * n + pj);
            }
        }
        let pv = pows[v as usize];
        let unit = a[k * n + k] / pv;
        let uinv = inv_mod(unit % m, m);
        for i in k + 1..n {
            let e = a[i * n + k];
            if e == 0 {
                continue;
            }
            let f = mul_mod(e / pv, uinv, m);
            for j in k + 1..n {
                let t = mul_mod(f, a[k * n + j], m);
                let x = a[i * n + j];
                a[i * n + j] = if x >= t { x - t } else { x + (m - t) };
            }
            a[i * n + k] = 0;
        }
    }
    Some(total)
}

/// Polynomial over `F_p`, little-endian, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    pub fn rem(&self, m: &FpPoly) -> FpPoly {
        let dm = m.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(m.coeffs[dm], self.p);
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mul_mod(r[top], lead_inv, self.p);
            if c != 0 {
                for (i, &mc) in m.coeffs.iter().enumerate() {
                    let idx = top - dm + i;
                    r[idx] = (r[idx] + self.p - mul_mod(c, mc, self.p)) % self.p;
                }
            }
            r.pop();
        }
        FpPoly::new(self.p, r)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(&self, mut e: u128, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::new(self.p, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let p = self.p as u128;
        let x = FpPoly::x(self.p);
        let q_pow = |k: usize| p.pow(k as u32);
        let mut prime_factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                prime_factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_factors.push(m);
        }
        for &r in &prime_factors {
            let h = x.powmod(q_pow(n / r), self).sub(&x);
            if self.gcd(&h).degree() != Some(0) {
                return false;
            }
        }
        x.powmod(q_pow(n), self).sub(&x).rem(self).is_zero()
    }

    /// Smallest monic irreducible of degree `f`, ordered by the integer
    /// encoding of the non-leading coefficients.
    pub fn default_irreducible(p: u64, f: usize) -> FpPoly {
        let total = (p as u128).pow(f as u32);
        for code in 0..total {
            let mut c = Vec::with_capacity(f + 1);
            let mut k = code;
            for _ in 0..f {
                c.push((k % p as u128) as u64);
                k /= p as u128;
            }
            c.push(1);
            let g = FpPoly::new(p, c);
            if g.is_irreducible() {
                return g;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

/// The residue field `F_q = F_p[x]/(m)`; elements are coefficient vectors of length `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub modulus: FpPoly,
}

impl ResidueField {
    pub fn prime_field(p: u64) -> Self {
        ResidueField { p, modulus: FpPoly::x(p) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(1).max(1)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    fn to_poly(&self, a: &[u64]) -> FpPoly {
        FpPoly::new(self.p, a.to_vec())
    }

    fn lower_poly(&self, f: FpPoly) -> Vec<u64> {
        let mut c = if self.modulus.degree() == Some(1) { f.rem(&self.modulus).coeffs } else { f.coeffs };
        c.resize(self.degree(), 0);
        c
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.degree() == 1 {
            return vec![mul_mod(a[0], b[0], self.p)];
        }
        self.lower_poly(self.to_poly(a).mul(&self.to_poly(b)).rem(&self.modulus))
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// The `index`-th element in base-`p` digit order.
    pub fn element(&self, mut index: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            v.push(index % self.p);
            index /= self.p;
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Evaluates a polynomial with coefficients in `F_q` (little-endian).
    pub fn eval(&self, poly: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// All roots by exhaustion, with multiplicity flags (true when the
    /// derivative also vanishes).
    pub fn roots(&self, poly: &[Vec<u64>]) -> Vec<(Vec<u64>, bool)> {
        let deriv: Vec<Vec<u64>> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.iter().map(|&x| mul_mod(x, i as u64 % self.p, self.p)).collect())
            .collect();
        self.elements()
            .filter(|x| self.is_zero(&self.eval(poly, x)))
            .map(|x| {
                let repeated = self.is_zero(&self.eval(&deriv, &x));
                (x, repeated)
            })
            .collect()
    }
}
