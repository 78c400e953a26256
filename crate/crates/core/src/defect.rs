//! Local and global degeneracy defects and the Gorenstein classification.
//!
//! The primary local invariant is the type defect `cm_type − 1`, which
//! vanishes exactly on Gorenstein germs. The conductor-gap defect
//! `dim(polar window up to 𝔠) − dim(regular polar parts)` is reported next to
//! it; it equals `Σcᵢ − δ` and is positive on every singular germ.

use serde::Serialize;

use crate::dualizing::omega_min_generators;
use crate::error::{Error, Result};
use crate::localring::CurveGerm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDefectReport {
    pub germ: String,
    pub delta: u32,
    pub conductor_colength: u32,
    pub gorenstein: bool,
    pub cm_type: u32,
    pub type_defect: u32,
    pub conductor_gap_defect: u32,
    pub paper_claim: Option<u32>,
    pub agrees: Option<bool>,
}

impl LocalDefectReport {
    /// Attaches a published value of the type defect for comparison.
    pub fn with_claim(mut self, claim: u32) -> Self {
        self.paper_claim = Some(claim);
        self.agrees = Some(claim == self.type_defect);
        self
    }
}

pub fn local_defect(g: &CurveGerm) -> Result<LocalDefectReport> {
    let omega = omega_min_generators(g)?;
    let polar_window: u32 = g.conductor_colength();
    let regular_polar = omega.polar_basis.len() as u32;
    let gap = polar_window.checked_sub(regular_polar).ok_or_else(|| {
        Error::InternalInconsistency(format!(
            "{}: regular polar space larger than the conductor window",
            g.label()
        ))
    })?;
    if omega.cm_type == 0 {
        return Err(Error::InternalInconsistency(format!(
            "{}: dualizing module has no generators",
            g.label()
        )));
    }
    Ok(LocalDefectReport {
        germ: g.label().to_string(),
        delta: g.delta(),
        conductor_colength: g.conductor_colength(),
        gorenstein: g.is_gorenstein(),
        cm_type: omega.cm_type,
        type_defect: omega.cm_type - 1,
        conductor_gap_defect: gap,
        paper_claim: None,
        agrees: None,
    })
}

/// Aggregate over the singular points of a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalDefectReport {
    pub locals: Vec<LocalDefectReport>,
    pub total_defect: u32,
    pub codim_delta: u32,
    /// Entry `k − 1` records whether the curve lies in `Δ_k`; the list runs
    /// one past the last stratum containing the curve.
    pub strata_membership: Vec<bool>,
}

impl GlobalDefectReport {
    pub fn in_stratum(&self, k: u32) -> bool {
        k >= 1 && self.total_defect >= k
    }
}

pub fn global_defect(locals: Vec<LocalDefectReport>) -> GlobalDefectReport {
    let total: u32 = locals.iter().map(|l| l.type_defect).sum();
    GlobalDefectReport {
        locals,
        total_defect: total,
        codim_delta: total,
        strata_membership: (1..=total + 1).map(|k| total >= k).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GorensteinLabel {
    Gorenstein,
    NonGorenstein,
}

/// Classification with its three witnesses, which must agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub germ: String,
    pub label: GorensteinLabel,
    pub colength_is_twice_delta: bool,
    pub cm_type_is_one: bool,
    pub type_defect_is_zero: bool,
}

pub fn classify(g: &CurveGerm) -> Result<Classification> {
    let report = local_defect(g)?;
    let colength = report.conductor_colength == 2 * report.delta;
    let type_one = report.cm_type == 1;
    let zero_defect = report.type_defect == 0;
    if colength != type_one || type_one != zero_defect {
        return Err(Error::InternalInconsistency(format!(
            "{}: colength test {colength}, type test {type_one}, defect test {zero_defect}",
            g.label()
        )));
    }
    Ok(Classification {
        germ: report.germ,
        label: if colength {
            GorensteinLabel::Gorenstein
        } else {
            GorensteinLabel::NonGorenstein
        },
        colength_is_twice_delta: colength,
        cm_type_is_one: type_one,
        type_defect_is_zero: zero_defect,
    })
}

/// Expected codimension `N − M + 1` of the rank-drop locus of an `N × M`
/// map, reported only when both sizes are supplied.
pub fn expected_codimension(n: i64, m: i64) -> i64 {
    n - m + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{Preset, Truncation};
    use crate::semigroup::NumericalSemigroup;

    fn preset(p: Preset) -> CurveGerm {
        CurveGerm::preset(p, Truncation::Auto).unwrap()
    }

    fn sg_germ(gens: &[i64]) -> CurveGerm {
        CurveGerm::from_semigroup(&NumericalSemigroup::new(gens).unwrap(), Truncation::Auto)
            .unwrap()
    }

    #[test]
    fn local_examples() {
        assert_eq!(local_defect(&preset(Preset::Node)).unwrap().type_defect, 0);
        assert_eq!(local_defect(&sg_germ(&[3, 4, 5])).unwrap().type_defect, 1);
        assert_eq!(
            local_defect(&preset(Preset::TriplePoint))
                .unwrap()
                .type_defect,
            1
        );
    }

    #[test]
    fn gap_defect_identity() {
        let node = local_defect(&preset(Preset::Node)).unwrap();
        assert_eq!(node.conductor_gap_defect, 1);
        let flagship = local_defect(&sg_germ(&[3, 4, 5])).unwrap();
        assert_eq!(flagship.conductor_gap_defect, 1);
        let tac = local_defect(&preset(Preset::Tacnode)).unwrap();
        assert_eq!(tac.conductor_gap_defect, 2);
        for r in [node, flagship, tac] {
            assert_eq!(r.conductor_gap_defect, r.conductor_colength - r.delta);
        }
    }

    #[test]
    fn global_examples() {
        let empty = global_defect(vec![]);
        assert_eq!(empty.total_defect, 0);
        assert!(!empty.in_stratum(1));
        assert_eq!(empty.strata_membership, vec![false]);

        let gor = global_defect(
            [Preset::Node, Preset::Cusp, Preset::Tacnode]
                .map(|p| local_defect(&preset(p)).unwrap())
                .to_vec(),
        );
        assert_eq!((gor.total_defect, gor.codim_delta), (0, 0));

        let two = global_defect(vec![
            local_defect(&sg_germ(&[3, 4, 5])).unwrap(),
            local_defect(&preset(Preset::TriplePoint)).unwrap(),
        ]);
        assert_eq!(two.total_defect, 2);
        assert_eq!(two.strata_membership, vec![true, true, false]);
        assert!(two.in_stratum(2) && !two.in_stratum(3) && !two.in_stratum(0));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&preset(Preset::Cusp)).unwrap().label,
            GorensteinLabel::Gorenstein
        );
        assert_eq!(
            classify(&sg_germ(&[5, 7, 9])).unwrap().label,
            GorensteinLabel::NonGorenstein
        );
        assert_eq!(
            classify(&preset(Preset::Smooth)).unwrap().label,
            GorensteinLabel::Gorenstein
        );
    }

    #[test]
    fn claims_are_compared_not_adopted() {
        let r = local_defect(&preset(Preset::TriplePoint))
            .unwrap()
            .with_claim(2);
        assert_eq!(r.type_defect, 1);
        assert_eq!(r.agrees, Some(false));
    }

    #[test]
    fn expected_codimension_formula() {
        assert_eq!(expected_codimension(5, 3), 3);
    }
}
