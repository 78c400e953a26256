//! Command-line front end for `conductor-lab`.
//!
//! [`run`] parses arguments, dispatches to the engine and writes either a
//! human-readable report or deterministic JSON. Exit status: 0 on success,
//! 1 on a usage error, 2 on an engine error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use conductor_lab::catalog::{catalog_rows, render_json, render_table};
use conductor_lab::defect::{global_defect, local_defect, GlobalDefectReport};
use conductor_lab::dualizing::{
    conductor_level_test, descent_test, omega_min_generators, PolarPart,
};
use conductor_lab::formulas::{
    cyclic_quotient_gorenstein, ribbon_ext_dim, ribbon_local_defect, rr_dims, split_ribbon_defect,
    BundleKind, Dim, RRQuery,
};
use conductor_lab::nodal::{nodal_report, residue_rank, NodalCurve, NodalReport, NodeSide};
use conductor_lab::semigroup::SemigroupSummary;
use conductor_lab::{CurveGerm, Error, NumericalSemigroup, Preset, Truncation};

pub const TRUNCATION_ENV: &str = "CONDUCTOR_LAB_TRUNCATION";

#[derive(Parser, Debug)]
#[command(
    name = "conductor-lab",
    version,
    about = "Exact invariants of curve singularities"
)]
struct Cli {
    /// Output format; `table` applies to `catalog report` and reads as `human` elsewhere.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Fixed truncation order for series computations (stability is still checked).
    #[arg(long, global = true, env = TRUNCATION_ENV, value_parser = clap::value_parser!(u64).range(1..))]
    truncation: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gaps, Frobenius number, conductor, pseudo-Frobenius numbers and type.
    Semigroup {
        #[arg(required = true, allow_negative_numbers = true)]
        generators: Vec<i64>,
    },
    /// Delta invariant, conductor and Gorenstein test of a germ.
    Germ(GermArgs),
    /// Regular polar parts, minimal generators and type of the dualizing module.
    Dualizing(GermArgs),
    /// Conductor-level and full descent tests for a polar part.
    Descent {
        #[command(flatten)]
        germ: GermArgs,
        /// Polar part as `exp:coeff` terms, e.g. `-2:1,-1:3/2`; branches separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    /// Local defect reports and their global aggregate.
    Defect {
        /// Preset names or comma-separated semigroup generators such as `3,4,5`.
        #[arg(required = true)]
        germs: Vec<String>,
    },
    /// Canonical differentials on a nodal curve with rational components.
    Nodal {
        file: PathBuf,
        /// Node preimages as `node:side` (side 0 or 1), comma-separated.
        #[arg(long, value_delimiter = ',')]
        select: Option<Vec<String>>,
    },
    /// Closed-form dimension formulas.
    #[command(subcommand)]
    Formulas(FormulaCommand),
    /// The example registry compared against published values.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args, Debug)]
struct GermArgs {
    /// Preset name (node, cusp, tacnode, triple_point, smooth) or generators like `3,4,5`.
    #[arg(required_unless_present = "semigroup", conflicts_with = "semigroup")]
    germ: Option<String>,
    /// Monomial germ of a numerical semigroup.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    semigroup: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug)]
enum FormulaCommand {
    /// h⁰ and h¹ of a line bundle on a smooth curve.
    Rr {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Bundle::General)]
        bundle: Bundle,
        /// Degree, for `--bundle general`.
        #[arg(
            long,
            allow_negative_numbers = true,
            required_if_eq("bundle", "general")
        )]
        degree: Option<i64>,
    },
    /// Extension space dimension `h¹(ℐ)` and local defects of ribbons.
    Ribbon {
        #[arg(long)]
        genus: u32,
        /// Degree of the conormal line bundle; defaults to `2 − 2g`.
        #[arg(long, allow_negative_numbers = true)]
        deg_i: Option<i64>,
    },
    /// Gorenstein test for the cyclic quotient `1/r (1, a, b)`.
    Quotient {
        r: u64,
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Bundle {
    General,
    Structure,
    Canonical,
    Bicanonical,
    Anticanonical,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Computed invariants next to every published claim.
    Report,
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(
                e.kind(),
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{}", e.render());
                return if e.kind() == DisplayHelpOnMissingArgumentOrSubcommand {
                    1
                } else {
                    0
                };
            }
            let text = e.render().to_string();
            let line = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{line}");
            return 1;
        }
    };
    let json = cli.format == Format::Json;
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Engine(e)) => {
            if json {
                let body =
                    serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } });
                let _ = writeln!(err, "{body}");
            } else {
                let _ = writeln!(err, "error[{}]: {e}", e.code());
            }
            2
        }
    }
}

fn truncation(cli: &Cli) -> Truncation {
    match cli.truncation {
        Some(n) => Truncation::Fixed(n as usize),
        None => Truncation::Auto,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_generators(token: &str) -> Option<Vec<i64>> {
    token.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// A preset name, or comma-separated semigroup generators.
fn germ_from_token(token: &str, t: Truncation) -> Outcome<CurveGerm> {
    if let Ok(p) = token.parse::<Preset>() {
        return Ok(CurveGerm::preset(p, t)?);
    }
    match parse_generators(token) {
        Some(gens) => Ok(CurveGerm::from_semigroup(&NumericalSemigroup::new(&gens)?, t)?),
        None => Err(Failure::Usage(format!(
            "invalid germ `{token}`: expected node, cusp, tacnode, triple_point, smooth or generators like 3,4,5"
        ))),
    }
}

fn germ_from_args(a: &GermArgs, t: Truncation) -> Outcome<CurveGerm> {
    match (&a.germ, &a.semigroup) {
        (_, Some(gens)) => Ok(CurveGerm::from_semigroup(
            &NumericalSemigroup::new(gens)?,
            t,
        )?),
        (Some(token), None) => germ_from_token(token, t),
        (None, None) => Err(Failure::Usage("a germ or --semigroup is required".into())),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn execute(cli: &Cli) -> Outcome<String> {
    let json = cli.format == Format::Json;
    let t = truncation(cli);
    match &cli.command {
        Command::Semigroup { generators } => {
            let s = NumericalSemigroup::new(generators)?;
            let summary = SemigroupSummary::from(&s);
            Ok(if json {
                to_json(&summary)
            } else {
                format!(
                    "semigroup {s}\ngaps: {}\nfrobenius: {}\nconductor: {}\ndelta: {}\npseudo-frobenius: {}\ntype: {}\nsymmetric: {}\n",
                    join(&summary.gaps),
                    summary.frobenius,
                    summary.conductor,
                    summary.delta,
                    join(&summary.pseudo_frobenius),
                    summary.cm_type,
                    yes_no(summary.symmetric),
                )
            })
        }
        Command::Germ(args) => {
            let s = germ_from_args(args, t)?.summary();
            Ok(if json {
                to_json(&s)
            } else {
                format!(
                    "germ {}\nbranches: {}\ntruncation: {}\ndelta: {}\nconductor: {}\nconductor colength: {}\ngorenstein: {}\n",
                    s.germ,
                    s.branches,
                    s.truncation,
                    s.delta,
                    join(&s.conductor),
                    s.conductor_colength,
                    yes_no(s.gorenstein),
                )
            })
        }
        Command::Dualizing(args) => {
            let g = germ_from_args(args, t)?;
            let omega = omega_min_generators(&g)?;
            if json {
                #[derive(Serialize)]
                struct Out<'a> {
                    germ: &'a str,
                    #[serde(flatten)]
                    omega: &'a conductor_lab::dualizing::DualizingBasis,
                    generator_exponents: Vec<i64>,
                }
                return Ok(to_json(&Out {
                    germ: g.label(),
                    omega: &omega,
                    generator_exponents: omega.generator_exponents(),
                }));
            }
            let mut s = format!("germ {}\nregular polar parts:\n", g.label());
            if omega.polar_basis.is_empty() {
                s.push_str("  (none)\n");
            }
            for p in &omega.polar_basis {
                s.push_str(&format!("  {p}\n"));
            }
            s.push_str("minimal generators:\n");
            for d in &omega.min_generators {
                s.push_str(&format!("  {d}\n"));
            }
            s.push_str(&format!("cm type: {}\n", omega.cm_type));
            Ok(s)
        }
        Command::Descent { germ, eta } => {
            let g = germ_from_args(germ, t)?;
            let p: PolarPart = eta
                .parse()
                .map_err(|e: Error| Failure::Usage(format!("invalid --eta `{eta}`: {e}")))?;
            let level = conductor_level_test(&g, &p)?;
            let descends = descent_test(&g, &p)?;
            #[derive(Serialize)]
            struct Out {
                germ: String,
                eta: String,
                conductor_level: bool,
                descends: bool,
            }
            let o = Out {
                germ: g.label().to_string(),
                eta: p.to_string(),
                conductor_level: level,
                descends,
            };
            let verdict = |b: bool| if b { "pass" } else { "fail" };
            Ok(if json {
                to_json(&o)
            } else {
                format!(
                    "germ {}\neta: {}\nconductor_level: {}\ndescent: {}\n",
                    o.germ,
                    o.eta,
                    verdict(level),
                    verdict(descends)
                )
            })
        }
        Command::Defect { germs } => {
            let locals = germs
                .iter()
                .map(|tok| {
                    let g = germ_from_token(tok, t)?;
                    Ok(local_defect(&g)?)
                })
                .collect::<Outcome<Vec<_>>>()?;
            let report = global_defect(locals);
            Ok(if json {
                to_json(&report)
            } else {
                defect_human(&report)
            })
        }
        Command::Nodal { file, select } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let x = NodalCurve::from_json(&text)?;
            let selection = match select {
                Some(items) => Some(
                    items
                        .iter()
                        .map(|s| parse_node_side(s))
                        .collect::<Outcome<Vec<_>>>()?,
                ),
                None => None,
            };
            let selected_rank = match &selection {
                Some(sel) => Some(residue_rank(&x, sel)?),
                None => None,
            };
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                report: NodalReport,
                selection: Option<Vec<NodeSide>>,
                selected_residue_rank: Option<usize>,
            }
            let o = Out {
                report: nodal_report(&x),
                selection,
                selected_residue_rank: selected_rank,
            };
            Ok(if json {
                to_json(&o)
            } else {
                nodal_human(&o.report, o.selected_residue_rank)
            })
        }
        Command::Formulas(f) => formulas(f, json),
        Command::Catalog(CatalogCommand::Report) => {
            let rows = catalog_rows(t)?;
            Ok(if json {
                render_json(&rows)
            } else {
                render_table(&rows)
            })
        }
    }
}

fn parse_node_side(s: &str) -> Outcome<NodeSide> {
    let bad = || {
        Failure::Usage(format!(
            "invalid --select item `{s}`: expected node:side, e.g. 0:1"
        ))
    };
    let (n, side) = s.trim().split_once(':').ok_or_else(bad)?;
    Ok(NodeSide {
        node: n.parse().map_err(|_| bad())?,
        side: side.parse().map_err(|_| bad())?,
    })
}

fn defect_human(r: &GlobalDefectReport) -> String {
    let mut s = String::from(
        "germ            delta  colength  gorenstein  cm_type  type_defect  gap_defect\n",
    );
    for l in &r.locals {
        s.push_str(&format!(
            "{:<15} {:>5}  {:>8}  {:<10}  {:>7}  {:>11}  {:>10}\n",
            l.germ,
            l.delta,
            l.conductor_colength,
            yes_no(l.gorenstein),
            l.cm_type,
            l.type_defect,
            l.conductor_gap_defect
        ));
    }
    let strata: Vec<String> = r
        .strata_membership
        .iter()
        .enumerate()
        .map(|(i, b)| format!("Δ_{}:{}", i + 1, yes_no(*b)))
        .collect();
    s.push_str(&format!(
        "total defect: {}\ncodim: {}\nstrata: {}\n",
        r.total_defect,
        r.codim_delta,
        strata.join(" ")
    ));
    s
}

fn nodal_human(r: &NodalReport, selected: Option<usize>) -> String {
    let g = &r.dual_graph;
    let b = &r.bookkeeping;
    let mut s = format!(
        "h0(omega): {}\ndual graph: V={} E={} connected={} components={} cycle_rank={}\nresidue rank (one preimage per node): {}\nresidue span: {} (dual of normalization differentials: {})\n",
        r.h0_omega,
        g.vertices,
        g.edges,
        yes_no(g.connected),
        g.connected_components,
        g.cycle_rank,
        r.residue_rank_full_selection,
        r.residue_span.residue_span_dim,
        r.residue_span.normalization_dual_dim,
    );
    if let Some(k) = selected {
        s.push_str(&format!("residue rank (selection): {k}\n"));
    }
    s.push_str(&format!(
        "sequence bookkeeping (g={}, delta={}): rank {}{}, h0 {}{}\n",
        b.genus,
        b.delta,
        b.claimed_res_rank,
        if b.res_rank_negative {
            " (negative)"
        } else {
            ""
        },
        b.claimed_h0,
        if b.h0_negative { " (negative)" } else { "" },
    ));
    s
}

fn formulas(f: &FormulaCommand, json: bool) -> Outcome<String> {
    match f {
        FormulaCommand::Rr {
            genus,
            bundle,
            degree,
        } => {
            let kind = match bundle {
                Bundle::General => BundleKind::General {
                    degree: degree.ok_or_else(|| {
                        Failure::Usage("--degree is required for a general bundle".into())
                    })?,
                },
                Bundle::Structure => BundleKind::Structure,
                Bundle::Canonical => BundleKind::Canonical,
                Bundle::Bicanonical => BundleKind::Bicanonical,
                Bundle::Anticanonical => BundleKind::Anticanonical,
            };
            if degree.is_some() && *bundle != Bundle::General {
                return Err(Failure::Usage(
                    "--degree applies only to --bundle general".into(),
                ));
            }
            let d = rr_dims(RRQuery::new(*genus, kind));
            Ok(if json {
                to_json(&d)
            } else {
                format!(
                    "genus {} degree {}\nh0: {}\nh1: {}\n",
                    d.genus, d.degree, d.h0, d.h1
                )
            })
        }
        FormulaCommand::Ribbon { genus, deg_i } => {
            let deg_i = deg_i.unwrap_or(2 - 2 * *genus as i64);
            #[derive(Serialize)]
            struct Out {
                genus: u32,
                deg_i: i64,
                ext_dim: Dim,
                local_defect: u32,
                split_defect: u32,
            }
            let o = Out {
                genus: *genus,
                deg_i,
                ext_dim: ribbon_ext_dim(*genus, deg_i),
                local_defect: ribbon_local_defect(),
                split_defect: split_ribbon_defect(),
            };
            Ok(if json {
                to_json(&o)
            } else {
                format!(
                    "genus {} deg I {}\nh1(I): {}\nlocal defect: {}\nsplit ribbon defect: {}\n",
                    o.genus, o.deg_i, o.ext_dim, o.local_defect, o.split_defect
                )
            })
        }
        FormulaCommand::Quotient { r, a, b } => {
            let q = cyclic_quotient_gorenstein(*r, *a, *b)?;
            Ok(if json {
                to_json(&q)
            } else {
                format!(
                    "1/{} (1, {}, {})\ngorenstein: {}\nweights coprime to r: {}\nclaimed defect (published value, not computed): {}\n",
                    q.r,
                    q.a,
                    q.b,
                    yes_no(q.gorenstein),
                    yes_no(q.weights_coprime),
                    q.claimed_defect
                )
            })
        }
    }
}
