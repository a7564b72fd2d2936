use crate::error::{Error, Result};
use crate::padic::Val;

use super::{FieldTower, TowerElement};

const MAX_NEWTON_STEPS: usize = 256;

/// All roots in level `k` of a polynomial with level-`k` coefficients
/// (little-endian), in a deterministic order.
///
/// Repeated residues are separated by substituting `x = r + πy` and
/// recursing; simple residues are lifted by Newton iteration.
pub fn roots(tower: &FieldTower, poly: &[TowerElement]) -> Result<Vec<TowerElement>> {
    let level = poly.first().map(|c| c.level).ok_or_else(|| Error::InvalidData("empty polynomial".into()))?;
    let max_depth = tower.precision() as usize * tower.e(level) as usize + 1;
    let mut out = Vec::new();
    search(tower, level, poly.to_vec(), 0, max_depth, &mut out)?;
    Ok(out)
}

fn search(
    t: &FieldTower,
    k: usize,
    mut g: Vec<TowerElement>,
    depth: usize,
    max_depth: usize,
    out: &mut Vec<TowerElement>,
) -> Result<()> {
    if depth > max_depth {
        return Err(Error::PrecisionExhausted("root separation exceeds precision".into()));
    }
    let vals: Vec<Val> = g.iter().map(|c| t.valuation(c)).collect();
    let content = vals
        .iter()
        .filter_map(|v| v.exact())
        .min()
        .ok_or_else(|| Error::PrecisionExhausted("polynomial vanishes to precision".into()))?;
    if vals.iter().any(|v| !v.is_exact() && v.bound() < content + 1) {
        return Err(Error::PrecisionExhausted("coefficient residue uncertain".into()));
    }
    if content > 0 {
        let pc = t.pow(&t.uniformizer(k), content as u64);
        for c in g.iter_mut() {
            *c = t.div(c, &pc)?;
        }
    }
    let field = t.residue_field();
    let mut reduced = Vec::with_capacity(g.len());
    for c in &g {
        let v = t.valuation(c);
        if v.bound() >= 1 {
            reduced.push(field.zero());
        } else if v.is_exact() {
            reduced.push(t.residue(c)?);
        } else {
            return Err(Error::PrecisionExhausted("coefficient residue uncertain".into()));
        }
    }
    while reduced.last().is_some_and(|c| field.is_zero(c)) {
        reduced.pop();
    }
    if reduced.len() <= 1 {
        return Ok(());
    }
    let deriv = t.derivative(&g);
    for (r, repeated) in field.roots(&reduced) {
        let x0 = t.lift_residue(k, &r);
        if repeated {
            let pi = t.uniformizer(k);
            let mut h = taylor_shift(t, &g, &x0);
            let mut scale = t.one(k);
            for c in h.iter_mut() {
                *c = t.mul(c, &scale);
                scale = t.mul(&scale, &pi);
            }
            let mut sub = Vec::new();
            search(t, k, h, depth + 1, max_depth, &mut sub)?;
            out.extend(sub.into_iter().map(|y| t.add(&x0, &t.mul(&pi, &y))));
        } else {
            out.push(newton(t, &g, &deriv, x0)?);
        }
    }
    Ok(())
}

/// Coefficients of `g(x + r)`.
fn taylor_shift(t: &FieldTower, g: &[TowerElement], r: &TowerElement) -> Vec<TowerElement> {
    let mut c = g.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] = t.add(&c[j], &t.mul(r, &c[j + 1]));
        }
    }
    c
}

fn newton(t: &FieldTower, g: &[TowerElement], dg: &[TowerElement], mut x: TowerElement) -> Result<TowerElement> {
    for _ in 0..MAX_NEWTON_STEPS {
        let gx = t.eval_poly(g, &x);
        if t.is_zero(&gx) {
            return Ok(x);
        }
        let step = t.div(&gx, &t.eval_poly(dg, &x))?;
        if t.is_zero(&step) {
            return Ok(x);
        }
        x = t.sub(&x, &step);
    }
    Err(Error::PrecisionExhausted("Newton iteration did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicScalar;
    use crate::tower::{LayerDesc, LayerKind};

    fn tower(p: u64, layers: &[(LayerKind, &[i64])]) -> FieldTower {
        let descs = layers
            .iter()
            .map(|(k, c)| LayerDesc {
                kind: *k,
                poly: c.iter().map(|&x| vec![PadicScalar::from_i64(p, 32, x)]).collect(),
            })
            .collect();
        FieldTower::new(p, descs, 32).unwrap()
    }

    #[test]
    fn square_roots_of_two() {
        let t = tower(2, &[(LayerKind::Eisenstein, &[-2, 0, 1])]);
        let poly: Vec<_> = t.layers()[0].poly.iter().map(|c| t.embed(c, 1)).collect();
        let rs = roots(&t, &poly).unwrap();
        assert_eq!(rs.len(), 2);
        let g = t.generator(1);
        assert!(rs.iter().any(|r| t.approx_eq(r, &g)));
        assert!(rs.iter().any(|r| t.approx_eq(r, &t.neg(&g))));
    }

    #[test]
    fn cyclic_cubic_splits() {
        let t = tower(3, &[(LayerKind::Eisenstein, &[3, 0, -3, 1])]);
        let poly: Vec<_> = t.layers()[0].poly.iter().map(|c| t.embed(c, 1)).collect();
        let rs = roots(&t, &poly).unwrap();
        assert_eq!(rs.len(), 3);
        for r in &rs {
            assert!(t.valuation(&t.eval_poly(&poly, r)).bound() >= 3 * 20);
        }
    }

    #[test]
    fn non_galois_cubic_has_one_root() {
        // x^3 - 3 over Q_3 is not normal
        let t = tower(3, &[(LayerKind::Eisenstein, &[-3, 0, 0, 1])]);
        let poly: Vec<_> = t.layers()[0].poly.iter().map(|c| t.embed(c, 1)).collect();
        assert_eq!(roots(&t, &poly).unwrap().len(), 1);
    }

    #[test]
    fn frobenius_roots_in_unramified_quadratic() {
        let t = tower(2, &[(LayerKind::Unramified, &[1, 1, 1])]);
        let poly: Vec<_> = t.layers()[0].poly.iter().map(|c| t.embed(c, 1)).collect();
        assert_eq!(roots(&t, &poly).unwrap().len(), 2);
    }

    #[test]
    fn no_cube_roots_of_unity_in_q3() {
        let t = tower(3, &[]);
        let phi3 = vec![t.from_int(0, 1), t.from_int(0, 1), t.from_int(0, 1)];
        assert!(roots(&t, &phi3).unwrap().is_empty());
    }
}
