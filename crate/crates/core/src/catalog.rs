//! Registry of worked examples with published values, compared against
//! values computed by the engine.
//!
//! Claims are data. They are never read by any computation; a row's
//! `agrees` flag is the only place a claim meets a computed value.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::defect::local_defect;
use crate::dualizing::{
    conductor_level_test, descent_test, omega_min_generators, Differential, PolarPart,
};
use crate::error::{Error, Result};
use crate::formulas::{
    cyclic_quotient_gorenstein, ribbon_ext_dim, ribbon_local_defect, split_ribbon_defect,
};
use crate::localring::{CurveGerm, Preset, Truncation};
use crate::nodal::{
    dual_graph, full_selection, nodal_h0_omega, residue_rank, sequence_bookkeeping, NodalCurve,
};
use crate::semigroup::NumericalSemigroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Semigroup(Vec<i64>),
    Preset(Preset),
    Nodal(NodalConstruction),
    Formula(FormulaConstruction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodalConstruction {
    Banana,
    /// Irreducible rational curve with this many self-nodes.
    Irreducible(usize),
}

impl NodalConstruction {
    pub fn curve(self) -> NodalCurve {
        match self {
            NodalConstruction::Banana => NodalCurve::banana(),
            NodalConstruction::Irreducible(d) => NodalCurve::irreducible(d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaConstruction {
    Ribbon,
    CyclicQuotient { r: u64, a: i64, b: i64 },
}

/// Where a claim is made: a section anchor and a short verbatim quote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Citation {
    pub anchor: &'static str,
    pub quote: &'static str,
}

impl Citation {
    pub fn render(&self) -> String {
        format!("{}: \"{}\"", self.anchor, self.quote)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub invariant: &'static str,
    pub value: Value,
    pub citation: Citation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub construction: Construction,
    pub claims: Vec<Claim>,
}

impl CatalogEntry {
    pub fn is_germ(&self) -> bool {
        matches!(
            self.construction,
            Construction::Semigroup(_) | Construction::Preset(_)
        )
    }

    /// The germ for `Semigroup` and `Preset` entries.
    pub fn germ(&self, truncation: Truncation) -> Option<Result<CurveGerm>> {
        match &self.construction {
            Construction::Semigroup(gens) => Some(
                NumericalSemigroup::new(gens)
                    .and_then(|s| CurveGerm::from_semigroup(&s, truncation)),
            ),
            Construction::Preset(p) => Some(CurveGerm::preset(*p, truncation)),
            _ => None,
        }
    }
}

fn claim(
    invariant: &'static str,
    value: Value,
    anchor: &'static str,
    quote: &'static str,
) -> Claim {
    Claim {
        invariant,
        value,
        citation: Citation { anchor, quote },
    }
}

fn entry(name: &str, construction: Construction, claims: Vec<Claim>) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        construction,
        claims,
    }
}

fn nodal_entry(name: &str, c: NodalConstruction) -> CatalogEntry {
    let delta = c.curve().nodes().len() as u32;
    let b = sequence_bookkeeping(0, delta);
    entry(
        name,
        Construction::Nodal(c),
        vec![
            claim(
                "h0_omega",
                json!(b.claimed_h0),
                "§6 Theorem, proof",
                "Comparing the two expressions",
            ),
            claim(
                "residue_rank",
                json!(b.claimed_res_rank),
                "§6 Theorem, proof",
                "Exactness of (∗) then shows",
            ),
        ],
    )
}

/// Every registered example, in report order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    use Construction::*;
    vec![
        entry(
            "smooth",
            Preset(crate::Preset::Smooth),
            vec![
                claim(
                    "gorenstein",
                    json!(true),
                    "§4.5",
                    "smooth points, ordinary nodes, cusps",
                ),
                claim(
                    "type_defect",
                    json!(0),
                    "§4.5",
                    "smooth points, ordinary nodes, cusps",
                ),
            ],
        ),
        entry(
            "node",
            Preset(crate::Preset::Node),
            vec![
                claim(
                    "conductor",
                    json!([1, 1]),
                    "§4.4 Case 1",
                    "The conductor is the maximal ideal",
                ),
                claim(
                    "type_defect",
                    json!(0),
                    "§4.4 Case 1",
                    "Nodes never contribute",
                ),
                claim(
                    "type_defect",
                    json!(0),
                    "Appendix B table",
                    "Node & smooth (2 points) & 0",
                ),
            ],
        ),
        entry(
            "cusp",
            Preset(crate::Preset::Cusp),
            vec![
                claim(
                    "conductor",
                    json!([2]),
                    "§4.4 Case 2",
                    "The conductor is (t²)",
                ),
                claim(
                    "type_defect",
                    json!(0),
                    "§4.4 Case 2",
                    "Therefore, δ_deg(x) = 0",
                ),
            ],
        ),
        entry(
            "tacnode",
            Preset(crate::Preset::Tacnode),
            vec![
                claim(
                    "conductor",
                    json!([4, 4]),
                    "§4.4 Case 3",
                    "The conductor is (t⁴)⊕(s⁴)",
                ),
                claim(
                    "type_defect",
                    json!(0),
                    "§4.4 Case 3",
                    "Therefore, δ_deg(x) = 0",
                ),
                claim(
                    "type_defect",
                    json!(2),
                    "Appendix B table",
                    "Tacnode & smooth (2 points) & 2",
                ),
            ],
        ),
        entry(
            "triple_point",
            Preset(crate::Preset::TriplePoint),
            vec![
                claim(
                    "conductor",
                    json!([1, 1, 1]),
                    "§4.6 Example 3",
                    "mapping to (u)⊕(v)⊕(w)",
                ),
                claim(
                    "gorenstein",
                    json!(false),
                    "§4.6 Example 3",
                    "hence it is not invertible",
                ),
                claim(
                    "cm_type",
                    json!(2),
                    "§4.6 Example 3",
                    "but requires two generators",
                ),
                claim(
                    "type_defect",
                    json!(2),
                    "§4.6 Example 3",
                    "A direct computation shows ε(x)=2",
                ),
            ],
        ),
        entry(
            "⟨3,4,5⟩",
            Semigroup(vec![3, 4, 5]),
            vec![
                claim("conductor", json!([3]), "§7", "in Ã is 𝔠 = (t³)"),
                claim(
                    "gorenstein",
                    json!(false),
                    "Appendix A",
                    "hence not Gorenstein",
                ),
                claim("type_defect", json!(1), "Appendix A", "one has δ_deg(x)=1"),
                claim(
                    "conductor_level_dt_over_t",
                    json!(true),
                    "§7",
                    "passes the conductor-level test",
                ),
                claim("descends_dt_over_t", json!(false), "§7", "does not descend"),
                claim(
                    "omega_generators",
                    json!([-1, -2]),
                    "§7",
                    "ω_A = ⟨t⁻²dt, t⁻¹dt⟩_A",
                ),
            ],
        ),
        entry(
            "⟨4,5,6⟩",
            Semigroup(vec![4, 5, 6]),
            vec![
                claim(
                    "conductor",
                    json!([8]),
                    "§4.6 Example 1",
                    "𝔠_x = (t⁸) ⊂ k[t]",
                ),
                claim(
                    "type_defect",
                    json!(1),
                    "§4.6 Example 1",
                    "Degeneracy defect. ε(x) = 1",
                ),
            ],
        ),
        entry(
            "⟨4,6,9⟩",
            Semigroup(vec![4, 6, 9]),
            vec![
                claim(
                    "gaps",
                    json!([1, 2, 3, 5, 7, 11]),
                    "§7.1",
                    "The gaps are {1,2,3,5,7,11}",
                ),
                claim("conductor", json!([12]), "§7.1", "in our example c=12"),
                claim("gorenstein", json!(false), "§7.1", "one has δ_deg(x)=2"),
                claim("type_defect", json!(2), "§7.1", "one has δ_deg(x)=2"),
            ],
        ),
        entry(
            "⟨5,7,9⟩",
            Semigroup(vec![5, 7, 9]),
            vec![
                claim(
                    "gaps",
                    json!([1, 2, 3, 4, 6, 8, 11, 13]),
                    "§7.2",
                    "The gaps are {1,2,3,4,6,8,11,13}",
                ),
                claim("conductor", json!([14]), "§7.2", "Γ = ⟨5,7,9⟩, c = 14"),
                claim(
                    "type_defect",
                    json!(3),
                    "§7.2",
                    "Thus three extra constraints appear",
                ),
            ],
        ),
        entry(
            "ribbon",
            Formula(FormulaConstruction::Ribbon),
            vec![
                claim(
                    "local_defect",
                    json!(1),
                    "§4.6 Example 2",
                    "At each point, ε(x)=1",
                ),
                claim(
                    "local_defect",
                    json!(1),
                    "Appendix B table",
                    "Ribbon & smooth curve & 1",
                ),
                claim(
                    "split_defect",
                    json!(0),
                    "§4.6 Example 2",
                    "unless the ribbon splits trivially",
                ),
                claim(
                    "ext_dim_g2",
                    json!(3),
                    "Appendix B Theorem",
                    "dim H¹(C,ω_C^{−1}) = 3g − 3",
                ),
                claim(
                    "ext_dim_g3",
                    json!(6),
                    "Appendix B Theorem",
                    "dim H¹(C,ω_C^{−1}) = 3g − 3",
                ),
                claim(
                    "ext_dim_g4",
                    json!(9),
                    "Appendix B Theorem",
                    "dim H¹(C,ω_C^{−1}) = 3g − 3",
                ),
            ],
        ),
        entry(
            "cyclic_quotient(3;1,1,2)",
            Formula(FormulaConstruction::CyclicQuotient { r: 3, a: 1, b: 2 }),
            vec![
                claim(
                    "gorenstein",
                    json!(false),
                    "§6.1 Example",
                    "1+a+b ≢ 0 (mod r)",
                ),
                claim("defect", json!(2), "§6.1 Example", "defect(x) = r − 1"),
            ],
        ),
        nodal_entry("banana", NodalConstruction::Banana),
        nodal_entry(
            "irreducible_rational_1_node",
            NodalConstruction::Irreducible(1),
        ),
        nodal_entry(
            "irreducible_rational_2_nodes",
            NodalConstruction::Irreducible(2),
        ),
        nodal_entry(
            "irreducible_rational_3_nodes",
            NodalConstruction::Irreducible(3),
        ),
    ]
}

/// Ordered `(invariant, value)` pairs computed for a germ.
pub fn germ_invariants(g: &CurveGerm) -> Result<Vec<(String, Value)>> {
    let local = local_defect(g)?;
    let omega = omega_min_generators(g)?;
    let mut out: Vec<(String, Value)> = Vec::new();
    let mut put = |k: &str, v: Value| out.push((k.to_string(), v));
    put("branches", json!(g.branch_count()));
    put("delta", json!(local.delta));
    put("conductor", json!(g.conductor()));
    put("conductor_colength", json!(local.conductor_colength));
    put("gorenstein", json!(local.gorenstein));
    put("cm_type", json!(local.cm_type));
    put("type_defect", json!(local.type_defect));
    put("conductor_gap_defect", json!(local.conductor_gap_defect));
    put("omega_generators", json!(omega.generator_exponents()));
    if let Some(s) = g.value_semigroup() {
        put("gaps", json!(s.gaps()));
        put("frobenius", json!(s.frobenius()));
    }
    if g.branch_count() == 1 {
        let dt_over_t = PolarPart::new(Differential::monomial(1, 0, -1))?;
        put(
            "conductor_level_dt_over_t",
            json!(conductor_level_test(g, &dt_over_t)?),
        );
        put("descends_dt_over_t", json!(descent_test(g, &dt_over_t)?));
    }
    Ok(out)
}

fn nodal_invariants(c: NodalConstruction) -> Result<Vec<(String, Value)>> {
    let x = c.curve();
    let graph = dual_graph(&x);
    Ok(vec![
        ("nodes".into(), json!(x.nodes().len())),
        ("cycle_rank".into(), json!(graph.cycle_rank)),
        ("h0_omega".into(), json!(nodal_h0_omega(&x))),
        (
            "residue_rank".into(),
            json!(residue_rank(&x, &full_selection(&x))?),
        ),
    ])
}

fn formula_invariants(f: FormulaConstruction) -> Result<Vec<(String, Value)>> {
    let dim = |d: crate::formulas::Dim| serde_json::to_value(d).expect("serializable");
    Ok(match f {
        FormulaConstruction::Ribbon => vec![
            ("local_defect".into(), json!(ribbon_local_defect())),
            ("split_defect".into(), json!(split_ribbon_defect())),
            ("ext_dim_g2".into(), dim(ribbon_ext_dim(2, -2))),
            ("ext_dim_g3".into(), dim(ribbon_ext_dim(3, -4))),
            ("ext_dim_g4".into(), dim(ribbon_ext_dim(4, -6))),
        ],
        FormulaConstruction::CyclicQuotient { r, a, b } => {
            let q = cyclic_quotient_gorenstein(r, a, b)?;
            vec![
                ("gorenstein".into(), json!(q.gorenstein)),
                ("weights_coprime".into(), json!(q.weights_coprime)),
                // no independent oracle for the defect of a quotient singularity
                ("defect".into(), Value::Null),
            ]
        }
    })
}

/// Computed invariants of one entry, at the given truncation for germs.
pub fn entry_invariants(e: &CatalogEntry, truncation: Truncation) -> Result<Vec<(String, Value)>> {
    let result = match &e.construction {
        Construction::Semigroup(_) | Construction::Preset(_) => e
            .germ(truncation)
            .expect("germ entry")
            .and_then(|g| germ_invariants(&g)),
        Construction::Nodal(c) => nodal_invariants(*c),
        Construction::Formula(f) => formula_invariants(*f),
    };
    result.map_err(|source| Error::InEntry {
        entry: e.name.clone(),
        source: Box::new(source),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub entry: String,
    pub invariant: String,
    pub computed: Value,
    pub claimed: Value,
    pub citation: Option<String>,
    /// `None` when there is no claim, or no computed value to compare.
    pub agrees: Option<bool>,
}

/// One row per computed invariant without a claim, and one row per claim.
pub fn catalog_rows(truncation: Truncation) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for e in catalog_entries() {
        let computed = entry_invariants(&e, truncation)?;
        for (invariant, value) in &computed {
            let claims: Vec<&Claim> = e
                .claims
                .iter()
                .filter(|c| c.invariant == invariant)
                .collect();
            if claims.is_empty() {
                rows.push(ReportRow {
                    entry: e.name.clone(),
                    invariant: invariant.clone(),
                    computed: value.clone(),
                    claimed: Value::Null,
                    citation: None,
                    agrees: None,
                });
            }
            for c in claims {
                rows.push(ReportRow {
                    entry: e.name.clone(),
                    invariant: invariant.clone(),
                    computed: value.clone(),
                    claimed: c.value.clone(),
                    citation: Some(c.citation.render()),
                    agrees: (!value.is_null()).then(|| *value == c.value),
                });
            }
        }
        if let Some(c) = e
            .claims
            .iter()
            .find(|c| computed.iter().all(|(k, _)| k != c.invariant))
        {
            return Err(Error::InternalInconsistency(format!(
                "entry `{}` claims `{}`, which is never computed",
                e.name, c.invariant
            )));
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

pub fn render_json(rows: &[ReportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("serializable");
    s.push('\n');
    s
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

pub fn render_table(rows: &[ReportRow]) -> String {
    let header = [
        "entry",
        "invariant",
        "computed",
        "claimed",
        "status",
        "citation",
    ];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let status = match r.agrees {
                Some(true) => "agree",
                Some(false) => "DISAGREE",
                None if r.citation.is_some() => "unchecked",
                None => "",
            };
            [
                r.entry.clone(),
                r.invariant.clone(),
                cell(&r.computed),
                cell(&r.claimed),
                status.to_string(),
                r.citation.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut l = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                l.push_str(c);
            } else {
                let pad = widths[i] - c.chars().count();
                let _ = write!(l, "{c}{}  ", " ".repeat(pad));
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&header.map(String::from));
    for row in &body {
        line(row);
    }
    out
}

pub fn catalog_report(format: ReportFormat, truncation: Truncation) -> Result<String> {
    let rows = catalog_rows(truncation)?;
    Ok(match format {
        ReportFormat::Table => render_table(&rows),
        ReportFormat::Json => render_json(&rows),
    })
}
