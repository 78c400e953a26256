//! Closed-form dimension formulas: Riemann–Roch on a smooth curve, ribbon
//! extension spaces, and the Gorenstein test for cyclic quotient
//! singularities.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A cohomology dimension that Riemann–Roch either fixes or leaves open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Determined(u64),
    Undetermined,
}

impl Dim {
    pub fn value(self) -> Option<u64> {
        match self {
            Dim::Determined(v) => Some(v),
            Dim::Undetermined => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Determined(v) => write!(f, "{v}"),
            Dim::Undetermined => f.write_str("undetermined"),
        }
    }
}

/// Serialized as a number, or the string `"undetermined"`.
impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Determined(v) => s.serialize_u64(*v),
            Dim::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BundleKind {
    General { degree: i64 },
    Structure,
    Canonical,
    Bicanonical,
    Anticanonical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RRQuery {
    pub genus: u32,
    pub bundle: BundleKind,
}

impl RRQuery {
    pub fn new(genus: u32, bundle: BundleKind) -> Self {
        RRQuery { genus, bundle }
    }

    pub fn degree(&self) -> i64 {
        let g = self.genus as i64;
        match self.bundle {
            BundleKind::General { degree } => degree,
            BundleKind::Structure => 0,
            BundleKind::Canonical => 2 * g - 2,
            BundleKind::Bicanonical => 4 * g - 4,
            BundleKind::Anticanonical => 2 - 2 * g,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RRDims {
    pub genus: u32,
    pub degree: i64,
    pub h0: Dim,
    pub h1: Dim,
}

/// `h⁰` and `h¹` of a line bundle on a smooth genus-`g` curve, when they
/// follow from degree alone or from the bundle's identity.
pub fn rr_dims(q: RRQuery) -> RRDims {
    let g = q.genus as i64;
    let d = q.degree();
    let det = |v: i64| Dim::Determined(v as u64);
    let (h0, h1) = match q.bundle {
        BundleKind::Structure => (det(1), det(g)),
        BundleKind::Canonical => (det(g), det(1)),
        _ if d < 0 => (det(0), det(g - 1 - d)),
        _ if d > 2 * g - 2 => (det(d - g + 1), det(0)),
        _ => (Dim::Undetermined, Dim::Undetermined),
    };
    RRDims {
        genus: q.genus,
        degree: d,
        h0,
        h1,
    }
}

/// `dim H¹(C, ℐ) = h⁰(ω ⊗ ℐ^∨)` for a line bundle `ℐ` of degree `deg_i`.
pub fn ribbon_ext_dim(genus: u32, deg_i: i64) -> Dim {
    let dual = 2 * genus as i64 - 2 - deg_i;
    rr_dims(RRQuery::new(genus, BundleKind::General { degree: dual })).h0
}

/// Local defect of a ribbon at any point.
pub fn ribbon_local_defect() -> u32 {
    1
}

/// Local defect of a trivially split ribbon.
pub fn split_ribbon_defect() -> u32 {
    0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub r: u64,
    pub a: u64,
    pub b: u64,
    pub gorenstein: bool,
    /// Published value, not computed: 0 if Gorenstein, else `r − 1`.
    pub claimed_defect: u64,
    pub weights_coprime: bool,
}

/// Gorenstein test `1 + a + b ≡ 0 (mod r)` for the quotient of `𝔸³` by
/// `μ_r` acting with weights `(1, a, b)`.
pub fn cyclic_quotient_gorenstein(r: u64, a: i64, b: i64) -> Result<QuotientReport> {
    if r == 0 {
        return Err(Error::InvalidParameter(
            "the group order r must be at least 1".into(),
        ));
    }
    let m = r as i64;
    let (a, b) = (a.rem_euclid(m) as u64, b.rem_euclid(m) as u64);
    let gorenstein = (1 + a + b) % r == 0;
    Ok(QuotientReport {
        r,
        a,
        b,
        gorenstein,
        claimed_defect: if gorenstein { 0 } else { r - 1 },
        weights_coprime: a.gcd(&r) == 1 && b.gcd(&r) == 1,
    })
}
