//! Reduced curve germs `O ⊂ Õ = ∏ k[[tᵢ]]` presented by polynomial branch
//! parametrizations, analyzed through a truncation window `Õ/(tᵢ^N)`.
//!
//! The image of `O` in the window is the span of all monomials in the
//! generators. Delta invariant and conductor are read off from that span, and
//! every analysis is re-run at `N + 2`; disagreement is reported as
//! [`Error::TruncationTooSmall`] instead of returning an unstable value.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{RatMatrix, Rational, RowSpace};
use crate::semigroup::NumericalSemigroup;

/// Largest truncation the automatic probe will try.
pub const MAX_TRUNCATION: usize = 1024;

/// A power series known modulo `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: BTreeMap<usize, Rational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// Collects `(exponent, coefficient)` terms, dropping those at or beyond
    /// `order` and any zero coefficients.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut s = TruncatedSeries::zero(order);
        for (e, c) in terms {
            if e < order {
                let entry = s.coeffs.entry(e).or_insert_with(Rational::zero);
                *entry += &c;
                if entry.is_zero() {
                    s.coeffs.remove(&e);
                }
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, e: usize) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, if any within the window.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        TruncatedSeries::from_terms(
            order,
            self.terms()
                .chain(other.terms())
                .map(|(e, c)| (e, c.clone())),
        )
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(other.order);
        let terms = self.terms().flat_map(|(a, x)| {
            other
                .terms()
                .filter(move |(b, _)| a + b < order)
                .map(move |(b, y)| (a + b, x * y))
        });
        TruncatedSeries::from_terms(order, terms.collect::<Vec<_>>())
    }

    pub fn scale(&self, k: &Rational) -> TruncatedSeries {
        TruncatedSeries::from_terms(self.order, self.terms().map(|(e, c)| (e, c * k)))
    }
}

/// One truncated series per branch, all with the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTuple {
    components: Vec<TruncatedSeries>,
}

impl SeriesTuple {
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidParametrization("no branches".into()));
        };
        if components.iter().any(|c| c.order != first.order) {
            return Err(Error::InvalidParametrization(
                "branch series have different truncation orders".into(),
            ));
        }
        Ok(SeriesTuple { components })
    }

    pub fn branch_count(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> usize {
        self.components[0].order
    }

    pub fn component(&self, branch: usize) -> &TruncatedSeries {
        &self.components[branch]
    }

    pub fn mul(&self, other: &SeriesTuple) -> SeriesTuple {
        SeriesTuple {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &SeriesTuple) -> SeriesTuple {
        SeriesTuple {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Flattened coefficient vector, index `branch · order + exponent`.
    pub fn to_vector(&self) -> Vec<Rational> {
        let n = self.order();
        let mut v = vec![Rational::zero(); n * self.branch_count()];
        for (b, s) in self.components.iter().enumerate() {
            for (e, c) in s.terms() {
                v[b * n + e] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(branches: usize, order: usize, v: &[Rational]) -> SeriesTuple {
        assert_eq!(v.len(), branches * order);
        SeriesTuple {
            components: (0..branches)
                .map(|b| {
                    TruncatedSeries::from_terms(
                        order,
                        (0..order).map(|e| (e, v[b * order + e].clone())),
                    )
                })
                .collect(),
        }
    }
}

/// Exact polynomial value of one algebra generator on every branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    branches: Vec<BTreeMap<usize, Rational>>,
}

impl Parametrization {
    /// Takes one list of `(exponent, coefficient)` terms per branch.
    pub fn new(branches: Vec<Vec<(usize, Rational)>>) -> Self {
        Parametrization {
            branches: branches
                .into_iter()
                .map(|terms| {
                    let mut poly = BTreeMap::new();
                    for (e, c) in terms {
                        let entry: &mut Rational = poly.entry(e).or_insert_with(Rational::zero);
                        *entry += &c;
                    }
                    poly.retain(|_, c| !c.is_zero());
                    poly
                })
                .collect(),
        }
    }

    /// `t^exp` on a single branch and zero on the others.
    pub fn monomial(branch_count: usize, branch: usize, exp: usize) -> Self {
        let mut branches = vec![Vec::new(); branch_count];
        branches[branch].push((exp, Rational::one()));
        Parametrization::new(branches)
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, b: usize) -> &BTreeMap<usize, Rational> {
        &self.branches[b]
    }

    pub fn to_series(&self, order: usize) -> SeriesTuple {
        SeriesTuple {
            components: self
                .branches
                .iter()
                .map(|p| TruncatedSeries::from_terms(order, p.iter().map(|(e, c)| (*e, c.clone()))))
                .collect(),
        }
    }

    /// Multiplies a flattened window vector (layout of [`SeriesTuple::to_vector`]).
    pub(crate) fn mul_window(&self, v: &[Rational], order: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (b, poly) in self.branches.iter().enumerate() {
            let base = b * order;
            for k in 0..order {
                let x = &v[base + k];
                if x.is_zero() {
                    continue;
                }
                for (e, c) in poly.range(..order - k) {
                    out[base + k + e] += &(c * x);
                }
            }
        }
        out
    }
}

/// Named germs used throughout the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Node,
    Cusp,
    Tacnode,
    TriplePoint,
    Smooth,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Smooth,
        Preset::Node,
        Preset::Cusp,
        Preset::Tacnode,
        Preset::TriplePoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Node => "node",
            Preset::Cusp => "cusp",
            Preset::Tacnode => "tacnode",
            Preset::TriplePoint => "triple_point",
            Preset::Smooth => "smooth",
        }
    }

    fn generators(self) -> (usize, Vec<Parametrization>) {
        let q = Rational::integer;
        match self {
            // xy = 0
            Preset::Node => (
                2,
                vec![
                    Parametrization::monomial(2, 0, 1),
                    Parametrization::monomial(2, 1, 1),
                ],
            ),
            // y² = x³ via (t², t³)
            Preset::Cusp => (
                1,
                vec![
                    Parametrization::monomial(1, 0, 2),
                    Parametrization::monomial(1, 0, 3),
                ],
            ),
            // (y − x²)(y + x²) = 0: x = (t, s), y = (t², −s²)
            Preset::Tacnode => (
                2,
                vec![
                    Parametrization::new(vec![vec![(1, q(1))], vec![(1, q(1))]]),
                    Parametrization::new(vec![vec![(2, q(1))], vec![(2, q(-1))]]),
                ],
            ),
            // three coordinate axes in 𝔸³
            Preset::TriplePoint => (
                3,
                (0..3).map(|b| Parametrization::monomial(3, b, 1)).collect(),
            ),
            Preset::Smooth => (1, vec![Parametrization::monomial(1, 0, 1)]),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "node" => Ok(Preset::Node),
            "cusp" => Ok(Preset::Cusp),
            "tacnode" => Ok(Preset::Tacnode),
            "triple_point" | "triplepoint" => Ok(Preset::TriplePoint),
            "smooth" => Ok(Preset::Smooth),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the truncation order of a germ is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Truncation {
    /// `N = 2·Σcᵢ + 6`, from the expected conductor when known and from a
    /// stability probe otherwise.
    #[default]
    Auto,
    /// Used verbatim; the stability re-check at `N + 2` still applies.
    Fixed(usize),
}

#[derive(Clone, Debug)]
struct WindowAnalysis {
    closure: RowSpace,
    delta: u32,
    conductor: Vec<u32>,
}

impl WindowAnalysis {
    fn same_invariants(&self, other: &WindowAnalysis) -> bool {
        self.delta == other.delta && self.conductor == other.conductor
    }

    fn colength(&self) -> usize {
        self.conductor.iter().map(|&c| c as usize).sum()
    }
}

fn unit(len: usize, index: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[index] = Rational::one();
    v
}

fn closure_at(branches: usize, generators: &[Parametrization], order: usize) -> RowSpace {
    let len = branches * order;
    let mut space = RowSpace::new(len);
    let mut one = vec![Rational::zero(); len];
    for b in 0..branches {
        one[b * order] = Rational::one();
    }
    space.insert(&one);
    let mut queue = VecDeque::from([one]);
    while let Some(v) = queue.pop_front() {
        for g in generators {
            let w = g.mul_window(&v, order);
            if space.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    space
}

fn analyze_at(branches: usize, generators: &[Parametrization], order: usize) -> WindowAnalysis {
    let closure = closure_at(branches, generators, order);
    let len = branches * order;
    let delta = (len - closure.dim()) as u32;
    let conductor = (0..branches)
        .map(|b| {
            let mut c = order;
            while c > 0 && closure.contains(&unit(len, b * order + c - 1)) {
                c -= 1;
            }
            c as u32
        })
        .collect();
    WindowAnalysis {
        closure,
        delta,
        conductor,
    }
}

fn stable_analysis(
    branches: usize,
    generators: &[Parametrization],
    order: usize,
) -> Result<WindowAnalysis> {
    if order == 0 {
        return Err(Error::truncation(0, "truncation order must be positive"));
    }
    let a = analyze_at(branches, generators, order);
    let b = analyze_at(branches, generators, order + 2);
    if !a.same_invariants(&b) {
        return Err(Error::truncation(
            order,
            format!(
                "delta/conductor changed from {}/{:?} to {}/{:?} at N+2",
                a.delta, a.conductor, b.delta, b.conductor
            ),
        ));
    }
    Ok(a)
}

fn auto_analysis(
    branches: usize,
    generators: &[Parametrization],
    expected_colength: Option<usize>,
) -> Result<(usize, WindowAnalysis)> {
    if let Some(sum) = expected_colength {
        let order = 2 * sum + 6;
        return Ok((order, stable_analysis(branches, generators, order)?));
    }
    let max_val = generators
        .iter()
        .flat_map(|g| g.branches.iter().filter_map(|p| p.keys().next().copied()))
        .max()
        .unwrap_or(1);
    let mut probe = 2 * max_val + 4;
    while probe <= MAX_TRUNCATION {
        let a = analyze_at(branches, generators, probe);
        let b = analyze_at(branches, generators, probe + 2);
        if a.same_invariants(&b) {
            let order = 2 * a.colength() + 6;
            if let Ok(fin) = stable_analysis(branches, generators, order) {
                if 2 * fin.colength() + 6 <= order {
                    return Ok((order, fin));
                }
            }
        }
        probe *= 2;
    }
    Err(Error::truncation(
        MAX_TRUNCATION,
        "closure did not stabilize (is the delta invariant finite?)",
    ))
}

/// A reduced curve singularity with its invariants computed at construction.
#[derive(Clone, Debug)]
pub struct CurveGerm {
    label: String,
    branches: usize,
    generators: Vec<Parametrization>,
    semigroup: Option<NumericalSemigroup>,
    truncation: usize,
    closure: RowSpace,
    delta: u32,
    conductor: Vec<u32>,
}

impl CurveGerm {
    /// Germ generated by polynomial parametrizations. Every generator must
    /// vanish at the origin of every branch.
    pub fn new(
        label: impl Into<String>,
        branches: usize,
        generators: Vec<Parametrization>,
        truncation: Truncation,
    ) -> Result<Self> {
        Self::build(label.into(), branches, generators, None, truncation)
    }

    fn build(
        label: String,
        branches: usize,
        generators: Vec<Parametrization>,
        semigroup: Option<NumericalSemigroup>,
        truncation: Truncation,
    ) -> Result<Self> {
        if branches == 0 {
            return Err(Error::InvalidParametrization(
                "a germ needs at least one branch".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.branch_count() != branches {
                return Err(Error::InvalidParametrization(format!(
                    "generator {i} has {} branches, expected {branches}",
                    g.branch_count()
                )));
            }
            if g.branches.iter().any(|p| p.contains_key(&0)) {
                return Err(Error::InvalidParametrization(format!(
                    "generator {i} has a nonzero constant term"
                )));
            }
        }
        let expected = semigroup.as_ref().map(|s| s.conductor() as usize);
        let (order, analysis) = match truncation {
            Truncation::Fixed(n) => (n, stable_analysis(branches, &generators, n)?),
            Truncation::Auto => auto_analysis(branches, &generators, expected)?,
        };
        Ok(CurveGerm {
            label,
            branches,
            generators,
            semigroup,
            truncation: order,
            closure: analysis.closure,
            delta: analysis.delta,
            conductor: analysis.conductor,
        })
    }

    /// Monomial curve `k[[t^{a₁},…,t^{a_r}]]`.
    pub fn from_semigroup(s: &NumericalSemigroup, truncation: Truncation) -> Result<Self> {
        let generators = s
            .generators()
            .iter()
            .map(|&a| Parametrization::monomial(1, 0, a as usize))
            .collect();
        Self::build(s.to_string(), 1, generators, Some(s.clone()), truncation)
    }

    pub fn preset(p: Preset, truncation: Truncation) -> Result<Self> {
        let (branches, generators) = p.generators();
        Self::build(p.name().to_string(), branches, generators, None, truncation)
    }

    /// The same germ re-analyzed at a different truncation order.
    pub fn with_truncation(&self, order: usize) -> Result<Self> {
        Self::build(
            self.label.clone(),
            self.branches,
            self.generators.clone(),
            self.semigroup.clone(),
            Truncation::Fixed(order),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn branch_count(&self) -> usize {
        self.branches
    }

    pub fn generators(&self) -> &[Parametrization] {
        &self.generators
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// The semigroup this germ was built from, if any.
    pub fn semigroup(&self) -> Option<&NumericalSemigroup> {
        self.semigroup.as_ref()
    }

    /// Row-reduced basis of the image of `O` in the truncation window.
    pub fn algebra_closure(&self) -> RatMatrix {
        self.closure.to_reduced_matrix()
    }

    /// Echelon basis of `O` in the window, flattened as in
    /// [`SeriesTuple::to_vector`].
    pub fn closure_basis(&self) -> Vec<Vec<Rational>> {
        self.closure.basis()
    }

    /// Whether a window element lies in the image of `O`.
    pub fn contains(&self, element: &SeriesTuple) -> bool {
        element.branch_count() == self.branches
            && element.order() == self.truncation
            && self.closure.contains(&element.to_vector())
    }

    /// `dim_k(Õ/O)`.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Branch exponents `cᵢ` of the conductor `∏ tᵢ^{cᵢ} k[[tᵢ]]`.
    pub fn conductor(&self) -> &[u32] {
        &self.conductor
    }

    /// Colength `Σ cᵢ` of the conductor in `Õ`.
    pub fn conductor_colength(&self) -> u32 {
        self.conductor.iter().sum()
    }

    pub fn max_conductor(&self) -> u32 {
        self.conductor.iter().copied().max().unwrap_or(0)
    }

    /// Gorenstein iff the conductor has colength `2δ`.
    pub fn is_gorenstein(&self) -> bool {
        self.conductor_colength() == 2 * self.delta
    }

    /// For one-branch germs, the semigroup of valuations of `O`, read off
    /// from the pivots of the closure basis.
    pub fn value_semigroup(&self) -> Option<NumericalSemigroup> {
        if self.branches != 1 {
            return None;
        }
        let values: Vec<i64> = self
            .closure
            .pivots()
            .filter(|&p| p > 0)
            .map(|p| p as i64)
            .collect();
        NumericalSemigroup::new(&values).ok()
    }

    pub fn summary(&self) -> GermSummary {
        GermSummary {
            germ: self.label.clone(),
            branches: self.branches,
            truncation: self.truncation,
            delta: self.delta,
            conductor: self.conductor.clone(),
            conductor_colength: self.conductor_colength(),
            gorenstein: self.is_gorenstein(),
        }
    }
}

/// Serializable view of the basic germ invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermSummary {
    pub germ: String,
    pub branches: usize,
    pub truncation: usize,
    pub delta: u32,
    pub conductor: Vec<u32>,
    pub conductor_colength: u32,
    pub gorenstein: bool,
}
