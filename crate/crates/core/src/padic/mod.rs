//! Truncated p-adic scalars and linear algebra over discrete valuation rings.

mod linalg;
mod residue;
mod scalar;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use crate::error::Error as PadicError;
pub use linalg::{
    det_valuation, det_valuation_in, dvr_smith_form, smith_form_in, solve_qp, IntegersZp, ScalarMatrix,
    SmithForm, ValuationRing,
};
pub use residue::{det_valuation_mod, FpPoly, ResidueField};
pub use scalar::{prime_power, PadicScalar};
pub(crate) use scalar::scalar_from_signed;

/// A valuation that is either certified or only bounded from below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Val {
    Exact(i64),
    /// The element is zero to precision; its valuation is at least this.
    AtLeast(i64),
}

impl Val {
    pub fn exact(self) -> Option<i64> {
        match self {
            Val::Exact(v) => Some(v),
            Val::AtLeast(_) => None,
        }
    }

    pub fn bound(self) -> i64 {
        match self {
            Val::Exact(v) | Val::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Val::Exact(_))
    }

    /// Valuation of a sum of terms with these valuations, when the terms
    /// cannot cancel (for example distinct residues of the exponents).
    pub fn min(self, other: Val) -> Val {
        match (self, other) {
            (Val::Exact(a), Val::Exact(b)) => Val::Exact(a.min(b)),
            (Val::Exact(a), Val::AtLeast(b)) | (Val::AtLeast(b), Val::Exact(a)) => {
                if a <= b {
                    Val::Exact(a)
                } else {
                    Val::AtLeast(b)
                }
            }
            (Val::AtLeast(a), Val::AtLeast(b)) => Val::AtLeast(a.min(b)),
        }
    }

    pub fn scale(self, k: i64) -> Val {
        match self {
            Val::Exact(v) => Val::Exact(v * k),
            Val::AtLeast(v) => Val::AtLeast(v * k),
        }
    }

    pub fn offset(self, k: i64) -> Val {
        match self {
            Val::Exact(v) => Val::Exact(v + k),
            Val::AtLeast(v) => Val::AtLeast(v + k),
        }
    }

    /// Orders certified values first among equal bounds.
    pub(crate) fn pivot_cmp(self, other: Val) -> Ordering {
        self.bound().cmp(&other.bound()).then(self.is_exact().cmp(&other.is_exact()).reverse())
    }
}

impl std::ops::Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Exact(a), Val::Exact(b)) => Val::Exact(a + b),
            (a, b) => Val::AtLeast(a.bound() + b.bound()),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Exact(v) => write!(f, "{v}"),
            Val::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}
