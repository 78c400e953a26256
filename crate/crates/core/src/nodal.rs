//! Canonical differentials on projective nodal curves whose components are
//! all rational.
//!
//! A section of the dualizing sheaf is a differential `Σⱼ rⱼ dz/(z − pⱼ)` on
//! each component, with poles only at node preimages. Regularity at infinity
//! forces the residues on each component to sum to zero, and each node
//! forces its two branch residues to cancel. `h⁰(ω)` is the dimension of that
//! linear system.

use std::collections::{HashMap, HashSet};

use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, rank, RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub points: Vec<Rational>,
}

/// A marked point: component index and point index on that component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointRef {
    pub component: usize,
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalCurve {
    components: Vec<Component>,
    nodes: Vec<[PointRef; 2]>,
    offsets: Vec<usize>,
    point_count: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    components: Vec<ComponentFile>,
    nodes: Vec<[(String, usize); 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    label: String,
    points: Vec<String>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCurve(msg.into())
}

impl NodalCurve {
    pub fn new(components: Vec<Component>, nodes: Vec<[PointRef; 2]>) -> Result<Self> {
        if components.is_empty() {
            return Err(malformed("the curve has no components"));
        }
        let mut labels = HashSet::new();
        for c in &components {
            if !labels.insert(c.label.as_str()) {
                return Err(malformed(format!(
                    "duplicate component label `{}`",
                    c.label
                )));
            }
            let mut seen = HashSet::new();
            for p in &c.points {
                if !seen.insert(p) {
                    return Err(malformed(format!(
                        "point {p} appears twice on component `{}`",
                        c.label
                    )));
                }
            }
        }
        let mut used = HashSet::new();
        for (i, pair) in nodes.iter().enumerate() {
            for r in pair {
                let ok = components
                    .get(r.component)
                    .is_some_and(|c| r.point < c.points.len());
                if !ok {
                    return Err(malformed(format!(
                        "node {i} references a missing point ({}, {})",
                        r.component, r.point
                    )));
                }
                if !used.insert(*r) {
                    return Err(malformed(format!(
                        "point {} of component `{}` is used by more than one node",
                        r.point, components[r.component].label
                    )));
                }
            }
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut point_count = 0;
        for c in &components {
            offsets.push(point_count);
            point_count += c.points.len();
        }
        if used.len() != point_count {
            return Err(malformed(
                "every marked point must belong to exactly one node",
            ));
        }
        Ok(NodalCurve {
            components,
            nodes,
            offsets,
            point_count,
        })
    }

    /// Parses the JSON exchange format:
    /// `{"components": [{"label", "points": ["p/q", …]}], "nodes": [[[label, i], [label, j]], …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CurveFile =
            serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
        let mut index = HashMap::new();
        let mut components = Vec::with_capacity(file.components.len());
        for (i, c) in file.components.into_iter().enumerate() {
            let points = c
                .points
                .iter()
                .map(|s| parse_point(s, &c.label))
                .collect::<Result<Vec<_>>>()?;
            index.entry(c.label.clone()).or_insert(i);
            components.push(Component {
                label: c.label,
                points,
            });
        }
        let resolve = |(label, point): &(String, usize)| {
            index
                .get(label)
                .map(|&component| PointRef {
                    component,
                    point: *point,
                })
                .ok_or_else(|| malformed(format!("node references unknown component `{label}`")))
        };
        let nodes = file
            .nodes
            .iter()
            .map(|[a, b]| Ok([resolve(a)?, resolve(b)?]))
            .collect::<Result<Vec<_>>>()?;
        NodalCurve::new(components, nodes)
    }

    /// One rational component with `delta` self-nodes joining the points
    /// `2i ↔ 2i + 1`.
    pub fn irreducible(delta: usize) -> Self {
        let points = (0..2 * delta as i64).map(Rational::integer).collect();
        let nodes = (0..delta)
            .map(|i| {
                [
                    PointRef {
                        component: 0,
                        point: 2 * i,
                    },
                    PointRef {
                        component: 0,
                        point: 2 * i + 1,
                    },
                ]
            })
            .collect();
        NodalCurve::new(
            vec![Component {
                label: "C".into(),
                points,
            }],
            nodes,
        )
        .expect("well-formed")
    }

    /// Two rational components meeting in two nodes.
    pub fn banana() -> Self {
        let comp = |label: &str| Component {
            label: label.into(),
            points: vec![Rational::integer(0), Rational::integer(1)],
        };
        let at = |component, point| PointRef { component, point };
        NodalCurve::new(
            vec![comp("A"), comp("B")],
            vec![[at(0, 0), at(1, 0)], [at(0, 1), at(1, 1)]],
        )
        .expect("well-formed")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[[PointRef; 2]] {
        &self.nodes
    }

    fn unknown(&self, r: PointRef) -> usize {
        self.offsets[r.component] + r.point
    }

    /// Same curve with every coordinate multiplied by `factor ≠ 0`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if factor.is_zero() {
            return Err(Error::InvalidParameter(
                "scaling factor must be nonzero".into(),
            ));
        }
        NodalCurve::new(
            self.components
                .iter()
                .map(|c| Component {
                    label: c.label.clone(),
                    points: c.points.iter().map(|p| p * factor).collect(),
                })
                .collect(),
            self.nodes.clone(),
        )
    }

    /// Residue-balancing system: one row per node, one per component.
    pub fn residue_system(&self) -> RatMatrix {
        let n = self.point_count;
        let mut rows = Vec::new();
        for [a, b] in &self.nodes {
            let mut row = vec![Rational::zero(); n];
            row[self.unknown(*a)] = Rational::one();
            row[self.unknown(*b)] = Rational::one();
            rows.push(row);
        }
        for (c, comp) in self.components.iter().enumerate() {
            let mut row = vec![Rational::zero(); n];
            for j in 0..comp.points.len() {
                row[self.offsets[c] + j] = Rational::one();
            }
            rows.push(row);
        }
        RatMatrix::from_rows(n, rows)
    }
}

fn parse_point(s: &str, label: &str) -> Result<Rational> {
    let t = s.trim().to_ascii_lowercase();
    if matches!(t.as_str(), "inf" | "infinity" | "∞" | "oo") {
        return Err(malformed(format!(
            "component `{label}` has a marked point at infinity; apply a coordinate change z ↦ 1/(z − a) to move it to a finite point"
        )));
    }
    s.parse().map_err(|_| {
        malformed(format!(
            "point `{s}` on component `{label}` is not a rational number"
        ))
    })
}

/// Residues of one canonical differential, per component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancedDifferential {
    pub components: Vec<ComponentResidues>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentResidues {
    pub label: String,
    /// `(point, residue)` pairs; the differential is `Σ r dz/(z − p)`.
    pub residues: Vec<(Rational, Rational)>,
}

/// Basis of `H⁰(ω)` as residue vectors.
pub fn differential_basis(x: &NodalCurve) -> Vec<BalancedDifferential> {
    kernel_basis(&x.residue_system())
        .into_iter()
        .map(|v| BalancedDifferential {
            components: x
                .components
                .iter()
                .enumerate()
                .map(|(c, comp)| ComponentResidues {
                    label: comp.label.clone(),
                    residues: comp
                        .points
                        .iter()
                        .enumerate()
                        .map(|(j, p)| (p.clone(), v[x.offsets[c] + j].clone()))
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

/// `h⁰(ω)` from the residue-balancing system.
pub fn nodal_h0_omega(x: &NodalCurve) -> usize {
    x.point_count - rank(&x.residue_system())
}

/// A node together with the preimage whose residue is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSide {
    pub node: usize,
    pub side: usize,
}

/// Rank of the residue functionals at the selected preimages, restricted to
/// `H⁰(ω)`.
pub fn residue_rank(x: &NodalCurve, selection: &[NodeSide]) -> Result<usize> {
    for s in selection {
        if s.node >= x.nodes.len() || s.side > 1 {
            return Err(malformed(format!(
                "selection {}:{} does not name a node preimage",
                s.node, s.side
            )));
        }
    }
    let basis = kernel_basis(&x.residue_system());
    if basis.is_empty() || selection.is_empty() {
        return Ok(0);
    }
    let rows = selection
        .iter()
        .map(|s| {
            let u = x.unknown(x.nodes[s.node][s.side]);
            basis.iter().map(|v| v[u].clone()).collect()
        })
        .collect();
    Ok(rank(&RatMatrix::from_rows(basis.len(), rows)))
}

/// One preimage (side 0) for every node.
pub fn full_selection(x: &NodalCurve) -> Vec<NodeSide> {
    (0..x.nodes.len())
        .map(|node| NodeSide { node, side: 0 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub connected_components: usize,
    pub cycle_rank: usize,
}

pub fn dual_graph(x: &NodalCurve) -> DualGraph {
    let mut g = UnGraph::<(), ()>::new_undirected();
    let v: Vec<_> = x.components.iter().map(|_| g.add_node(())).collect();
    for [a, b] in &x.nodes {
        g.add_edge(v[a.component], v[b.component], ());
    }
    let cc = connected_components(&g);
    DualGraph {
        vertices: g.node_count(),
        edges: g.edge_count(),
        connected: cc == 1,
        connected_components: cc,
        cycle_rank: g.edge_count() + cc - g.node_count(),
    }
}

/// Values of the displayed exact-sequence formulas, `rank = δ − 1` and
/// `h⁰ = g − δ + 1`, unclamped and flagged when negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceBookkeeping {
    pub genus: u32,
    pub delta: u32,
    pub claimed_res_rank: i64,
    pub claimed_h0: i64,
    pub res_rank_negative: bool,
    pub h0_negative: bool,
}

pub fn sequence_bookkeeping(genus: u32, delta: u32) -> SequenceBookkeeping {
    let rank = delta as i64 - 1;
    let h0 = genus as i64 - delta as i64 + 1;
    SequenceBookkeeping {
        genus,
        delta,
        claimed_res_rank: rank,
        claimed_h0: h0,
        res_rank_negative: rank < 0,
        h0_negative: h0 < 0,
    }
}

/// Residue-span facts for a curve with rational normalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueSpan {
    pub h0: usize,
    /// Rank of all residue functionals (both preimages of every node).
    pub residue_span_dim: usize,
    /// `dim H⁰(normalization, ω)^∨`; zero since every component is rational.
    pub normalization_dual_dim: usize,
}

pub fn residue_span(x: &NodalCurve) -> ResidueSpan {
    let all: Vec<NodeSide> = (0..x.nodes.len())
        .flat_map(|node| [0, 1].map(|side| NodeSide { node, side }))
        .collect();
    ResidueSpan {
        h0: nodal_h0_omega(x),
        residue_span_dim: residue_rank(x, &all).expect("valid selection"),
        normalization_dual_dim: 0,
    }
}

/// Serializable analysis of a nodal curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodalReport {
    pub h0_omega: usize,
    pub dual_graph: DualGraph,
    pub residue_rank_full_selection: usize,
    pub residue_span: ResidueSpan,
    pub bookkeeping: SequenceBookkeeping,
    pub basis: Vec<BalancedDifferential>,
}

pub fn nodal_report(x: &NodalCurve) -> NodalReport {
    NodalReport {
        h0_omega: nodal_h0_omega(x),
        dual_graph: dual_graph(x),
        residue_rank_full_selection: residue_rank(x, &full_selection(x)).expect("valid selection"),
        residue_span: residue_span(x),
        bookkeeping: sequence_bookkeeping(0, x.nodes.len() as u32),
        basis: differential_basis(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree() -> NodalCurve {
        NodalCurve::from_json(
            r#"{"components": [
                {"label": "A", "points": ["0"]},
                {"label": "B", "points": ["0", "1/2"]},
                {"label": "C", "points": ["3"]}],
               "nodes": [[["A", 0], ["B", 0]], [["B", 1], ["C", 0]]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn h0_examples() {
        assert_eq!(nodal_h0_omega(&NodalCurve::banana()), 1);
        assert_eq!(nodal_h0_omega(&NodalCurve::irreducible(1)), 1);
        assert_eq!(nodal_h0_omega(&tree()), 0);
    }

    #[test]
    fn residue_rank_examples() {
        let b = NodalCurve::banana();
        assert_eq!(residue_rank(&b, &full_selection(&b)).unwrap(), 1);
        let t = tree();
        assert_eq!(residue_rank(&t, &full_selection(&t)).unwrap(), 0);
        let two = NodalCurve::irreducible(2);
        assert_eq!(residue_rank(&two, &full_selection(&two)).unwrap(), 2);
        assert!(residue_rank(&two, &[NodeSide { node: 5, side: 0 }]).is_err());
        assert!(residue_rank(&two, &[NodeSide { node: 0, side: 2 }]).is_err());
    }

    #[test]
    fn dual_graph_examples() {
        let g = dual_graph(&NodalCurve::banana());
        assert_eq!((g.vertices, g.edges, g.cycle_rank), (2, 2, 1));
        let g = dual_graph(&NodalCurve::irreducible(3));
        assert_eq!((g.vertices, g.edges, g.cycle_rank), (1, 3, 3));
        assert!(g.connected);
    }

    #[test]
    fn malformed_curves() {
        assert_eq!(
            NodalCurve::new(vec![], vec![]).unwrap_err().code(),
            "malformed_curve"
        );
        let cases = [
            // reused point
            r#"{"components": [{"label": "A", "points": ["0", "1", "2"]}],
                "nodes": [[["A", 0], ["A", 1]], [["A", 1], ["A", 2]]]}"#,
            // coincident points
            r#"{"components": [{"label": "A", "points": ["0", "0"]}],
                "nodes": [[["A", 0], ["A", 1]]]}"#,
            // unused point
            r#"{"components": [{"label": "A", "points": ["0", "1", "2"]}],
                "nodes": [[["A", 0], ["A", 1]]]}"#,
            // point at infinity
            r#"{"components": [{"label": "A", "points": ["0", "inf"]}],
                "nodes": [[["A", 0], ["A", 1]]]}"#,
            // unknown label
            r#"{"components": [{"label": "A", "points": ["0", "1"]}],
                "nodes": [[["A", 0], ["B", 1]]]}"#,
            // node from a point to itself
            r#"{"components": [{"label": "A", "points": ["0"]}],
                "nodes": [[["A", 0], ["A", 0]]]}"#,
            "not json",
        ];
        for text in cases {
            let err = NodalCurve::from_json(text).unwrap_err();
            assert_eq!(err.code(), "malformed_curve", "{text}");
        }
        let inf = NodalCurve::from_json(cases[3]).unwrap_err().to_string();
        assert!(inf.contains("coordinate change"));
    }

    #[test]
    fn bookkeeping_values() {
        let b = sequence_bookkeeping(0, 3);
        assert_eq!(
            (b.claimed_res_rank, b.claimed_h0, b.h0_negative),
            (2, -2, true)
        );
        let b = sequence_bookkeeping(1, 1);
        assert_eq!(
            (b.claimed_res_rank, b.claimed_h0, b.h0_negative),
            (0, 1, false)
        );
        let b = sequence_bookkeeping(0, 0);
        assert_eq!(
            (b.claimed_res_rank, b.res_rank_negative, b.claimed_h0),
            (-1, true, 1)
        );
    }

    #[test]
    fn basis_differentials_are_balanced() {
        let x = NodalCurve::irreducible(3);
        let basis = differential_basis(&x);
        assert_eq!(basis.len(), 3);
        for d in &basis {
            let total: Rational = d.components[0]
                .residues
                .iter()
                .map(|(_, r)| r.clone())
                .sum();
            assert!(total.is_zero());
            for [a, b] in x.nodes() {
                let ra = &d.components[0].residues[a.point].1;
                let rb = &d.components[0].residues[b.point].1;
                assert!((ra + rb).is_zero());
            }
        }
    }

    #[test]
    fn disconnected_curves_sum_over_components() {
        let x = NodalCurve::from_json(
            r#"{"components": [
                {"label": "A", "points": ["0", "1"]},
                {"label": "B", "points": ["0", "1"]}],
               "nodes": [[["A", 0], ["A", 1]], [["B", 0], ["B", 1]]]}"#,
        )
        .unwrap();
        let g = dual_graph(&x);
        assert!(!g.connected);
        assert_eq!(nodal_h0_omega(&x), 2);
        assert_eq!(g.cycle_rank, 2);
    }
}
