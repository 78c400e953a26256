//! Exact computation of curve-singularity invariants: numerical semigroups,
//! conductors and delta invariants of curve germs, Rosenlicht dualizing
//! modules, degeneracy defects, canonical differentials on rational nodal
//! curves, and closed-form dimension formulas.
//!
//! Every computation is exact over the rationals.

pub mod catalog;
pub mod defect;
pub mod dualizing;
pub mod error;
pub mod exactla;
pub mod formulas;
pub mod localring;
pub mod nodal;
pub mod semigroup;

pub use error::{Error, Result};
pub use exactla::{RatMatrix, Rational};
pub use localring::{CurveGerm, Preset, Truncation};
pub use semigroup::NumericalSemigroup;
