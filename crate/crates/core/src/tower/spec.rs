use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::padic::{scalar_from_signed, FpPoly, PadicScalar};

use super::{FieldTower, LayerDesc, LayerKind};

/// JSON description of a tower and the level playing the role of `K`.
///
/// Polynomial coefficients are little-endian and include the leading 1.
/// Each coefficient is an integer, or an array of coordinates over the
/// level below. A coordinate is an integer or an `[int, den]` pair standing
/// for `int / p^den`; over `Q_p` a two-element array is read as such a pair.
/// Integers may be given as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub layers: Vec<LayerSpec>,
    #[serde(default)]
    pub base_cut: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub kind: LayerKind,
    /// Omitted for an unramified layer to use the default polynomial of `degree`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

pub const DEFAULT_PRECISION: u32 = 32;

impl ExtensionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Precision requested by the document, or the default.
    pub fn working_precision(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    /// Builds and validates the tower at the given precision.
    pub fn build(&self, precision: u32) -> Result<FieldTower> {
        if self.layers.is_empty() {
            return Err(Error::InvalidSpec("no layers".into()));
        }
        if self.base_cut >= self.layers.len() {
            return Err(Error::InvalidSpec(format!(
                "base_cut {} must be below the number of layers {}",
                self.base_cut,
                self.layers.len()
            )));
        }
        if !super::is_prime(self.p) {
            return Err(Error::InvalidSpec(format!("{} is not prime", self.p)));
        }
        let mut dim_below = 1usize;
        let mut descs = Vec::with_capacity(self.layers.len());
        for (idx, layer) in self.layers.iter().enumerate() {
            let poly = match (&layer.poly, layer.degree, layer.kind) {
                (Some(coeffs), _, _) => coeffs
                    .iter()
                    .map(|c| parse_coefficient(self.p, precision, c, dim_below))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| match e {
                        Error::InvalidSpec(m) => Error::InvalidSpec(format!("layer {idx}: {m}")),
                        other => other,
                    })?,
                (None, Some(f), LayerKind::Unramified) if f >= 1 => FpPoly::default_irreducible(self.p, f)
                    .coeffs
                    .iter()
                    .chain(std::iter::repeat(&0))
                    .take(f + 1)
                    .map(|&c| vec![PadicScalar::from_i64(self.p, precision, c as i64)])
                    .collect(),
                _ => return Err(Error::InvalidSpec(format!("layer {idx}: missing polynomial"))),
            };
            dim_below *= poly.len().saturating_sub(1).max(1);
            descs.push(LayerDesc { kind: layer.kind, poly });
        }
        FieldTower::new(self.p, descs, precision)
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidSpec(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad integer {s:?}"))),
        other => Err(Error::InvalidSpec(format!("expected an integer, got {other}"))),
    }
}

fn parse_scalar(p: u64, precision: u32, v: &Value) -> Result<PadicScalar> {
    match v {
        Value::Array(pair) if pair.len() == 2 => {
            let x = parse_int(&pair[0])?;
            let den = parse_int(&pair[1])?;
            let den: u32 = den
                .try_into()
                .map_err(|_| Error::InvalidSpec("denominator exponent must be a small non-negative integer".into()))?;
            scalar_from_signed(p, precision, &x, den)
        }
        _ => Ok(PadicScalar::from_int(p, precision, parse_int(v)?)),
    }
}

fn parse_coefficient(p: u64, precision: u32, v: &Value, dim_below: usize) -> Result<Vec<PadicScalar>> {
    match v {
        Value::Array(items) if dim_below == 1 && items.len() == 2 => Ok(vec![parse_scalar(p, precision, v)?]),
        Value::Array(items) => {
            if items.len() > dim_below {
                return Err(Error::InvalidSpec(format!(
                    "coefficient has {} coordinates, level below has degree {dim_below}",
                    items.len()
                )));
            }
            items.iter().map(|x| parse_scalar(p, precision, x)).collect()
        }
        _ => Ok(vec![parse_scalar(p, precision, v)?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_layer_tower() {
        let s = ExtensionSpec::from_json(
            r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]},
                {"kind":"eisenstein","poly":[[2,-1],[2,-1],1]}],"base_cut":1}"#,
        )
        .unwrap();
        let t = s.build(32).unwrap();
        assert_eq!((t.e(2), t.f(2), t.dim(2)), (4, 1, 4));
    }

    #[test]
    fn default_unramified_polynomial() {
        let s = ExtensionSpec::from_json(r#"{"p":2,"layers":[{"kind":"unramified","degree":2}]}"#).unwrap();
        assert_eq!(s.build(16).unwrap().f(1), 2);
    }

    #[test]
    fn rational_pairs_and_strings() {
        let s = ExtensionSpec::from_json(r#"{"p":3,"layers":[{"kind":"eisenstein","poly":[["3",0],[9,1],1]}]}"#)
            .unwrap();
        assert!(s.build(16).is_ok());
    }

    #[test]
    fn rejects_non_eisenstein_and_bad_cut() {
        let s = ExtensionSpec::from_json(r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-4,0,1]}]}"#).unwrap();
        assert!(matches!(s.build(16), Err(Error::NotEisenstein(_))));
        let s = ExtensionSpec::from_json(r#"{"p":2,"layers":[{"kind":"eisenstein","poly":[-2,0,1]}],"base_cut":1}"#)
            .unwrap();
        assert!(matches!(s.build(16), Err(Error::InvalidSpec(_))));
    }
}
