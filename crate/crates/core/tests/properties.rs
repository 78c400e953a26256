use num_integer::Integer;
use proptest::prelude::*;

use conductor_lab::catalog::catalog_entries;
use conductor_lab::defect::{global_defect, local_defect};
use conductor_lab::dualizing::{
    canonical_ideal, residue_pairing, rosenlicht_exponents, Differential,
};
use conductor_lab::exactla::{kernel_basis, rank, rref, RatMatrix};
use conductor_lab::formulas::{cyclic_quotient_gorenstein, rr_dims, BundleKind, RRQuery};
use conductor_lab::localring::{Parametrization, SeriesTuple};
use conductor_lab::nodal::{full_selection, nodal_h0_omega, residue_rank, NodalCurve, NodeSide};
use conductor_lab::{CurveGerm, NumericalSemigroup, Rational, Truncation};

// ---- oracles ----

fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank as the size of the largest nonvanishing minor.
fn rank_by_minors(m: &[Vec<i64>]) -> usize {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    (1..=r.min(c))
        .rev()
        .find(|&k| {
            subsets(r, k).iter().any(|rows| {
                subsets(c, k).iter().any(|cols| {
                    let sub: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                        .collect();
                    det(&sub) != 0
                })
            })
        })
        .unwrap_or(0)
}

/// Membership by brute-force search over nonnegative combinations.
fn representable(n: i64, gens: &[i64]) -> bool {
    let mut reach = vec![false; n as usize + 1];
    reach[0] = true;
    for x in 1..=n as usize {
        reach[x] = gens
            .iter()
            .any(|&g| g as usize <= x && reach[x - g as usize]);
    }
    reach[n as usize]
}

fn to_matrix(rows: &[Vec<i64>]) -> RatMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RatMatrix::from_i64_rows(&refs)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn coprime_gens(max: i64, len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(2..=max, 2..=len)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_filter("gcd 1", |v| v.iter().fold(0i64, |a, &b| a.gcd(&b)) == 1)
}

// ---- exact linear algebra ----

proptest! {
    #[test]
    fn rank_matches_minor_oracle(m in small_matrix()) {
        prop_assert_eq!(rank(&to_matrix(&m)), rank_by_minors(&m));
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix()) {
        let a = to_matrix(&m);
        let basis = kernel_basis(&a);
        prop_assert_eq!(basis.len(), a.cols() - rank(&a));
        for v in &basis {
            prop_assert!(a.mul_vec(v).iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn rref_is_idempotent(m in small_matrix()) {
        let (r, pivots) = rref(&to_matrix(&m));
        let (again, pivots2) = rref(&r);
        prop_assert_eq!(r, again);
        prop_assert_eq!(pivots, pivots2);
    }
}

// ---- semigroups ----

proptest! {
    #[test]
    fn membership_matches_brute_force(gens in coprime_gens(12, 4)) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        for n in 0..=(s.conductor() as i64 + 5) {
            prop_assert_eq!(s.contains(n), representable(n, &gens), "n = {}", n);
        }
    }

    #[test]
    fn symmetric_iff_twice_delta_iff_type_one(gens in coprime_gens(12, 4)) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let sym = s.is_symmetric();
        prop_assert_eq!(sym, s.conductor() == 2 * s.delta());
        prop_assert_eq!(sym, s.semigroup_type() == 1);
    }

    #[test]
    fn pseudo_frobenius_from_apery_maxima(gens in coprime_gens(12, 4)) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let m = s.multiplicity() as i64;
        let ap: Vec<i64> = s.apery(m).unwrap().into_iter().map(i64::from).collect();
        // maximal elements of the Apéry set under w ≤ w' ⟺ w' − w ∈ Γ
        let mut oracle: Vec<i64> = ap
            .iter()
            .filter(|&&w| ap.iter().all(|&v| v == w || !s.contains(v - w)))
            .map(|&w| w - m)
            .filter(|&f| f > 0)
            .collect();
        oracle.sort_unstable();
        prop_assert_eq!(s.pseudo_frobenius(), oracle);
    }

    #[test]
    fn canonical_ideal_shift_identity(gens in coprime_gens(12, 3)) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let c = s.conductor() as i64;
        let k = canonical_ideal(&s, -c, 2 * c).exponents;
        let shifted: std::collections::BTreeSet<i64> =
            rosenlicht_exponents(&s, -2 * c, c).into_iter().map(|n| n + c).collect();
        prop_assert_eq!(k, shifted);
    }
}

// ---- germs and the residue pairing ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_branch_germ_matches_its_semigroup(gens in coprime_gens(9, 3)) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let g = CurveGerm::from_semigroup(&s, Truncation::Auto).unwrap();
        prop_assert_eq!(g.delta(), s.delta());
        prop_assert_eq!(g.conductor(), &[s.conductor()][..]);
        prop_assert_eq!(g.value_semigroup().map(|v| v.gaps().to_vec()), Some(s.gaps().to_vec()));
    }

    #[test]
    fn conductor_absorbs_the_normalization(gens in coprime_gens(9, 3), extra in 0usize..5) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let g = CurveGerm::from_semigroup(&s, Truncation::Auto).unwrap();
        let e = s.conductor() as usize + extra;
        let t = Parametrization::monomial(1, 0, e).to_series(g.truncation());
        prop_assert!(g.contains(&t));
        if s.conductor() > 0 {
            let below = Parametrization::monomial(1, 0, s.conductor() as usize - 1).to_series(g.truncation());
            prop_assert!(!g.contains(&below));
        }
    }

    #[test]
    fn residue_pairing_is_bilinear(
        f in prop::collection::vec(-5i64..=5, 8),
        g in prop::collection::vec(-5i64..=5, 8),
        a in -4i64..=4,
        eta in prop::collection::vec(-5i64..=5, 6),
        zeta in prop::collection::vec(-5i64..=5, 6),
    ) {
        let q = Rational::integer;
        let diff = |c: &[i64]| Differential::from_terms(vec![
            c.iter().enumerate().map(|(i, &x)| (-(i as i64) - 1, q(x))).collect(),
        ]);
        let fv: Vec<Rational> = f.iter().map(|&x| q(x)).collect();
        let gv: Vec<Rational> = g.iter().map(|&x| q(x)).collect();
        let combo: Vec<Rational> = f.iter().zip(&g).map(|(&x, &y)| q(a * x + y)).collect();
        let (e1, e2) = (diff(&eta), diff(&zeta));
        let lhs = residue_pairing(&combo, 8, &e1);
        let rhs = q(a) * residue_pairing(&fv, 8, &e1) + residue_pairing(&gv, 8, &e1);
        prop_assert_eq!(lhs, rhs);
        let sum = Differential::linear_combination(&q(a), &e1, &Rational::one(), &e2);
        let lhs = residue_pairing(&fv, 8, &sum);
        let rhs = q(a) * residue_pairing(&fv, 8, &e1) + residue_pairing(&fv, 8, &e2);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closure_is_multiplicative(gens in coprime_gens(7, 3), i in 0usize..3, j in 0usize..3) {
        let s = NumericalSemigroup::new(&gens).unwrap();
        let g = CurveGerm::from_semigroup(&s, Truncation::Auto).unwrap();
        let n = g.truncation();
        let basis = g.closure_basis();
        let pick = |k: usize| SeriesTuple::from_vector(1, n, &basis[k % basis.len()]);
        prop_assert!(g.contains(&pick(i).mul(&pick(j))));
    }
}

// ---- defects ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn global_defect_is_additive(picks in prop::collection::vec(0usize..9, 0..6)) {
        let germs: Vec<_> = catalog_entries()
            .into_iter()
            .filter(|e| e.is_germ())
            .map(|e| local_defect(&e.germ(Truncation::Auto).unwrap().unwrap()).unwrap())
            .collect();
        let chosen: Vec<_> = picks.iter().map(|&k| germs[k % germs.len()].clone()).collect();
        let expected: u32 = chosen.iter().map(|l| l.type_defect).sum();
        let report = global_defect(chosen);
        prop_assert_eq!(report.total_defect, expected);
        prop_assert_eq!(report.codim_delta, expected);
    }
}

// ---- nodal curves ----

fn irreducible_scaled(delta: usize, num: i64, den: i64) -> NodalCurve {
    NodalCurve::irreducible(delta)
        .scaled(&Rational::new(num, den))
        .unwrap()
}

proptest! {
    #[test]
    fn scaling_preserves_h0_and_ranks(delta in 1usize..5, num in prop_oneof![-9i64..=-1, 1i64..=9], den in 1i64..=5) {
        let x = NodalCurve::irreducible(delta);
        let y = irreducible_scaled(delta, num, den);
        prop_assert_eq!(nodal_h0_omega(&x), nodal_h0_omega(&y));
        prop_assert_eq!(
            residue_rank(&x, &full_selection(&x)).unwrap(),
            residue_rank(&y, &full_selection(&y)).unwrap()
        );
        let banana = NodalCurve::banana();
        let scaled = banana.scaled(&Rational::new(num, den)).unwrap();
        prop_assert_eq!(nodal_h0_omega(&banana), nodal_h0_omega(&scaled));
    }

    #[test]
    fn residue_rank_bounds(delta in 1usize..6, picks in prop::collection::vec((0usize..6, 0usize..2), 0..6)) {
        let x = NodalCurve::irreducible(delta);
        let sel: Vec<NodeSide> = picks
            .into_iter()
            .map(|(node, side)| NodeSide { node: node % delta, side })
            .collect();
        let h0 = nodal_h0_omega(&x);
        let k = residue_rank(&x, &sel).unwrap();
        prop_assert!(k <= sel.len().min(h0));
        prop_assert_eq!(residue_rank(&x, &full_selection(&x)).unwrap(), h0);
    }
}

// ---- formulas ----

proptest! {
    #[test]
    fn riemann_roch_identity(g in 0u32..12, d in -30i64..30, kind in 0usize..5) {
        let bundle = match kind {
            0 => BundleKind::General { degree: d },
            1 => BundleKind::Structure,
            2 => BundleKind::Canonical,
            3 => BundleKind::Bicanonical,
            _ => BundleKind::Anticanonical,
        };
        let q = RRQuery::new(g, bundle);
        let dims = rr_dims(q);
        if let (Some(h0), Some(h1)) = (dims.h0.value(), dims.h1.value()) {
            prop_assert_eq!(h0 as i64 - h1 as i64, q.degree() - g as i64 + 1);
        }
    }

    #[test]
    fn quotient_test_is_invariant(r in 1u64..20, a in -40i64..40, b in -40i64..40) {
        let base = cyclic_quotient_gorenstein(r, a, b).unwrap();
        let swapped = cyclic_quotient_gorenstein(r, b, a).unwrap();
        let shifted = cyclic_quotient_gorenstein(r, a + r as i64, b - r as i64).unwrap();
        prop_assert_eq!(base.gorenstein, swapped.gorenstein);
        prop_assert_eq!(base.gorenstein, shifted.gorenstein);
        prop_assert_eq!(base, shifted);
    }
}
