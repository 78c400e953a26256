//! Rosenlicht regular differentials of a curve germ.
//!
//! A meromorphic differential `η = (ηᵢ dtᵢ)` on the normalization is regular
//! when `Σᵢ Res_{tᵢ=0}(fᵢ ηᵢ) = 0` for every `f ∈ O`. Everything here is a
//! literal residue computation against the closure basis of the germ: polar
//! parts with pole order at most `cᵢ` on branch `i` are tested, the regular
//! tail `Õ dt` is always present.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, RatMatrix, Rational, RowSpace};
use crate::localring::CurveGerm;
use crate::semigroup::NumericalSemigroup;

/// Exponent window `{n ∈ [lo, hi] : F − n ∉ Γ}`: the canonical ideal `K(Γ)`
/// in the normalization where `ω ≅ ⊕ k·tⁿ` over `c − 1 − n ∉ Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalIdealSet {
    pub window: (i64, i64),
    pub exponents: BTreeSet<i64>,
}

pub fn canonical_ideal(s: &NumericalSemigroup, lo: i64, hi: i64) -> CanonicalIdealSet {
    let f = s.frobenius();
    CanonicalIdealSet {
        window: (lo, hi),
        exponents: (lo..=hi).filter(|&n| !s.contains(f - n)).collect(),
    }
}

/// Exponents `n ∈ [lo, hi]` with `tⁿ dt` regular, i.e. `−1 − n ∉ Γ`.
pub fn rosenlicht_exponents(s: &NumericalSemigroup, lo: i64, hi: i64) -> BTreeSet<i64> {
    (lo..=hi).filter(|&n| !s.contains(-1 - n)).collect()
}

/// A differential `Σ aₙ tᵢⁿ dtᵢ` on each branch, finitely many terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Differential {
    branches: Vec<BTreeMap<i64, Rational>>,
}

impl Differential {
    pub fn zero(branch_count: usize) -> Self {
        Differential {
            branches: vec![BTreeMap::new(); branch_count],
        }
    }

    pub fn from_terms(branches: Vec<Vec<(i64, Rational)>>) -> Self {
        Differential {
            branches: branches
                .into_iter()
                .map(|terms| {
                    let mut m = BTreeMap::new();
                    for (e, c) in terms {
                        let entry: &mut Rational = m.entry(e).or_insert_with(Rational::zero);
                        *entry += &c;
                    }
                    m.retain(|_, c| !c.is_zero());
                    m
                })
                .collect(),
        }
    }

    pub fn monomial(branch_count: usize, branch: usize, exp: i64) -> Self {
        let mut d = Differential::zero(branch_count);
        d.branches[branch].insert(exp, Rational::one());
        d
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, b: usize) -> &BTreeMap<i64, Rational> {
        &self.branches[b]
    }

    pub fn coeff(&self, branch: usize, exp: i64) -> Rational {
        self.branches[branch]
            .get(&exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(BTreeMap::is_empty)
    }

    /// Pole order on a branch (0 when holomorphic there).
    pub fn pole_order(&self, branch: usize) -> u32 {
        self.branches[branch]
            .keys()
            .next()
            .map_or(0, |&e| if e < 0 { (-e) as u32 } else { 0 })
    }

    /// Lowest exponent over all branches.
    pub fn lowest_exponent(&self) -> Option<i64> {
        self.branches
            .iter()
            .filter_map(|m| m.keys().next().copied())
            .min()
    }

    /// Multiplies branch `b` by `tᵢ^shift`.
    pub fn shifted(&self, shifts: &[u32]) -> Differential {
        Differential {
            branches: self
                .branches
                .iter()
                .zip(shifts)
                .map(|(m, &s)| m.iter().map(|(e, c)| (e + s as i64, c.clone())).collect())
                .collect(),
        }
    }

    pub fn linear_combination(
        a: &Rational,
        x: &Differential,
        b: &Rational,
        y: &Differential,
    ) -> Differential {
        assert_eq!(x.branch_count(), y.branch_count());
        Differential::from_terms(
            (0..x.branch_count())
                .map(|i| {
                    x.branches[i]
                        .iter()
                        .map(|(e, c)| (*e, a * c))
                        .chain(y.branches[i].iter().map(|(e, c)| (*e, b * c)))
                        .collect()
                })
                .collect(),
        )
    }
}

impl fmt::Display for Differential {
    /// `exp:coeff` terms separated by `,`, branches separated by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .branches
            .iter()
            .map(|m| {
                m.iter()
                    .rev()
                    .map(|(e, c)| format!("{e}:{c}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Differential({self})")
    }
}

impl FromStr for Differential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let branches = s
            .split(';')
            .map(|branch| {
                branch
                    .split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|term| {
                        let (e, c) = term.split_once(':').ok_or_else(|| {
                            Error::Parse(format!("term `{term}` is not of the form exp:coeff"))
                        })?;
                        let e: i64 = e.trim().parse().map_err(|_| {
                            Error::Parse(format!("exponent `{}` is not an integer", e.trim()))
                        })?;
                        Ok((e, c.parse::<Rational>()?))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Differential::from_terms(branches))
    }
}

impl Serialize for Differential {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // per branch: {"exp": "num/den"} with exponents as strings, descending
        let branches: Vec<Vec<(i64, String)>> = self
            .branches
            .iter()
            .map(|m| {
                m.iter()
                    .rev()
                    .map(|(e, c)| (*e, c.to_fraction_string()))
                    .collect()
            })
            .collect();
        branches.serialize(serializer)
    }
}

/// A differential with only negative exponents: a principal part.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PolarPart(Differential);

impl PolarPart {
    pub fn new(d: Differential) -> Result<Self> {
        if let Some(e) = d.branches.iter().flat_map(|m| m.keys()).find(|&&e| e >= 0) {
            return Err(Error::Parse(format!(
                "polar parts have negative exponents only, got {e}"
            )));
        }
        Ok(PolarPart(d))
    }

    pub fn zero(branch_count: usize) -> Self {
        PolarPart(Differential::zero(branch_count))
    }

    pub fn as_differential(&self) -> &Differential {
        &self.0
    }

    pub fn into_differential(self) -> Differential {
        self.0
    }

    pub fn branch_count(&self) -> usize {
        self.0.branch_count()
    }

    pub fn pole_order(&self, branch: usize) -> u32 {
        self.0.pole_order(branch)
    }

    /// Exponents carrying a nonzero coefficient on some branch.
    pub fn support(&self) -> BTreeSet<i64> {
        self.0
            .branches
            .iter()
            .flat_map(|m| m.keys().copied())
            .collect()
    }
}

impl FromStr for PolarPart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolarPart::new(s.parse()?)
    }
}

impl fmt::Display for PolarPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for PolarPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolarPart({self})")
    }
}

/// `Σᵢ Res(fᵢ ηᵢ)` for `f` a window vector of the germ (layout
/// `branch · N + exponent`). Terms whose partner exponent falls outside the
/// window are skipped; callers check pole orders against `N` first.
pub fn residue_pairing(f: &[Rational], order: usize, eta: &Differential) -> Rational {
    let mut total = Rational::zero();
    for (b, m) in eta.branches.iter().enumerate() {
        for (e, c) in m.range(..0) {
            let partner = (-1 - e) as usize;
            if partner < order {
                let x = &f[b * order + partner];
                if !x.is_zero() {
                    total += &(x * c);
                }
            }
        }
    }
    total
}

fn check_branches(g: &CurveGerm, d: &Differential) -> Result<()> {
    if d.branch_count() != g.branch_count() {
        return Err(Error::InvalidParameter(format!(
            "differential has {} branches, germ {} has {}",
            d.branch_count(),
            g.label(),
            g.branch_count()
        )));
    }
    Ok(())
}

/// Polar window columns `(branch, exponent)` with `1 ≤ −exponent ≤ cᵢ`.
fn polar_columns(g: &CurveGerm) -> Vec<(usize, i64)> {
    g.conductor()
        .iter()
        .enumerate()
        .flat_map(|(b, &c)| (1..=c as i64).rev().map(move |p| (b, -p)))
        .collect()
}

/// Residue-pairing matrix: rows are closure basis elements, columns the
/// polar monomials of the conductor window.
pub fn residue_pairing_matrix(g: &CurveGerm) -> RatMatrix {
    let cols = polar_columns(g);
    let n = g.truncation();
    let rows = g
        .closure_basis()
        .into_iter()
        .map(|f| {
            cols.iter()
                .map(|&(b, e)| f[b * n + (-1 - e) as usize].clone())
                .collect::<Vec<_>>()
        })
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    RatMatrix::from_rows(cols.len(), rows)
}

/// Basis of the polar parts of regular differentials.
pub fn omega_polar_basis(g: &CurveGerm) -> Result<Vec<PolarPart>> {
    if g.max_conductor() as usize > g.truncation() {
        return Err(Error::truncation(
            g.truncation(),
            "polar window exceeds the truncation",
        ));
    }
    let cols = polar_columns(g);
    let r = g.branch_count();
    kernel_basis(&residue_pairing_matrix(g))
        .into_iter()
        .map(|v| {
            let mut terms = vec![Vec::new(); r];
            for (&(b, e), c) in cols.iter().zip(v) {
                terms[b].push((e, c));
            }
            PolarPart::new(Differential::from_terms(terms))
        })
        .collect()
}

/// Whether `η` pairs to zero against all of `O`, i.e. extends to a section
/// of the dualizing module.
pub fn descent_test(g: &CurveGerm, eta: &PolarPart) -> Result<bool> {
    check_branches(g, eta.as_differential())?;
    let n = g.truncation();
    if (0..g.branch_count()).any(|b| eta.pole_order(b) as usize > n) {
        return Err(Error::truncation(
            n,
            "pole order exceeds the truncation window",
        ));
    }
    Ok(g.closure_basis()
        .iter()
        .all(|f| residue_pairing(f, n, eta.as_differential()).is_zero()))
}

/// The weaker requirement that the conductor clears the poles: pole order at
/// most `cᵢ` on every branch.
pub fn conductor_level_test(g: &CurveGerm, eta: &PolarPart) -> Result<bool> {
    check_branches(g, eta.as_differential())?;
    Ok((0..g.branch_count()).all(|b| eta.pole_order(b) <= g.conductor()[b]))
}

/// Polar basis, minimal generators and Cohen–Macaulay type of `ω`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualizingBasis {
    pub polar_basis: Vec<PolarPart>,
    pub min_generators: Vec<Differential>,
    pub cm_type: u32,
    /// One-branch germs only: `{−1 − f : f pseudo-Frobenius}`.
    pub closed_form_exponents: Option<Vec<i64>>,
}

impl DualizingBasis {
    /// Lowest exponent of each minimal generator, sorted descending.
    pub fn generator_exponents(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .min_generators
            .iter()
            .filter_map(Differential::lowest_exponent)
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Layout of the window `[−cᵢ, hi]` on each branch.
struct OmegaWindow {
    lows: Vec<i64>,
    offsets: Vec<usize>,
    hi: i64,
    len: usize,
}

impl OmegaWindow {
    fn new(conductor: &[u32], hi: i64) -> Self {
        let lows: Vec<i64> = conductor.iter().map(|&c| -(c as i64)).collect();
        let mut offsets = Vec::with_capacity(lows.len());
        let mut len = 0;
        for &lo in &lows {
            offsets.push(len);
            len += (hi - lo + 1) as usize;
        }
        OmegaWindow {
            lows,
            offsets,
            hi,
            len,
        }
    }

    fn index(&self, b: usize, e: i64) -> Option<usize> {
        (e >= self.lows[b] && e <= self.hi).then(|| self.offsets[b] + (e - self.lows[b]) as usize)
    }

    fn vector(&self, d: &Differential) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len];
        for (b, m) in d.branches.iter().enumerate() {
            for (e, c) in m {
                if let Some(i) = self.index(b, *e) {
                    v[i] = c.clone();
                }
            }
        }
        v
    }
}

/// Computes `ω/𝔪ω` on the window `[−c_max, 2·c_max]`.
///
/// Exponents beyond the window lie in `𝔪ω` (they are in `𝔠·Õ dt`), and
/// `𝔪ω = Σⱼ gⱼ ω` for the algebra generators `gⱼ`, so the quotient is a
/// finite rank computation.
pub fn omega_min_generators(g: &CurveGerm) -> Result<DualizingBasis> {
    let polar_basis = omega_polar_basis(g)?;
    let r = g.branch_count();
    let hi = 2 * g.max_conductor() as i64;
    let window = OmegaWindow::new(g.conductor(), hi);

    let mut spanning: Vec<Differential> = polar_basis
        .iter()
        .map(|p| p.as_differential().clone())
        .collect();
    for e in 0..=hi {
        for b in 0..r {
            spanning.push(Differential::monomial(r, b, e));
        }
    }

    let mut maximal = RowSpace::new(window.len);
    for gen in g.generators() {
        for w in &spanning {
            let mut product = vec![Rational::zero(); window.len];
            for b in 0..r {
                for (eg, cg) in gen.branch(b) {
                    for (ew, cw) in w.branch(b) {
                        if let Some(i) = window.index(b, ew + *eg as i64) {
                            product[i] += &(cg * cw);
                        }
                    }
                }
            }
            maximal.insert(&product);
        }
    }

    let omega_dim = polar_basis.len() + r * (hi as usize + 1);
    let cm_type = (omega_dim - maximal.dim()) as u32;

    let mut quotient = maximal;
    let min_generators: Vec<Differential> = spanning
        .into_iter()
        .filter(|w| quotient.insert(&window.vector(w)))
        .collect();
    if min_generators.len() != cm_type as usize {
        return Err(Error::InternalInconsistency(format!(
            "{}: {} generator representatives for type {cm_type}",
            g.label(),
            min_generators.len()
        )));
    }

    let closed_form_exponents = (r == 1)
        .then(|| g.semigroup().cloned().or_else(|| g.value_semigroup()))
        .flatten()
        .map(|s| {
            let pf = s.pseudo_frobenius();
            if pf.is_empty() {
                vec![0]
            } else {
                pf.iter().map(|f| -1 - f).collect()
            }
        });

    Ok(DualizingBasis {
        polar_basis,
        min_generators,
        cm_type,
        closed_form_exponents,
    })
}

/// Minimal number of generators of `ω` as an `O`-module.
pub fn cm_type(g: &CurveGerm) -> Result<u32> {
    Ok(omega_min_generators(g)?.cm_type)
}
