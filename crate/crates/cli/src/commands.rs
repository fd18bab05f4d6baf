//! Subcommands. Each returns the text to print and whether the property held.

use std::collections::BTreeSet;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use leafpower::cycles::{
    can_satisfy_cycle, check_necessary_condition, enumerate_alternating_cycles, AlternatingCycle,
};
use leafpower::graph::generators::sun;
use leafpower::graph::{find_induced_cycle, is_chordal, is_strongly_chordal, verify_elimination};
use leafpower::grq::{gen_grq, gen_grq_variant, verify_minimality, DeletionMethod};
use leafpower::leafroot::{is_leaf_power_exact, verify_leafroot};
use leafpower::lp::can_satisfy;
use leafpower::quartets::{
    count_displaying_topologies, is_compatible, nonleafpower_by_quartets, path_lemma_closure,
    required_quartets,
};
use leafpower::rcc::{build_h, cross_check_reduction, find_induced_grq, DEFAULT_RCC_CAP};
use leafpower::tree::search_binary_topologies;
use leafpower::{Graph, PhyloTree, QuartetSet, DEFAULT_TOPOLOGY_CAP};

use crate::certificate::{Certificate, CertificateKind as Kind, Report};
use crate::format::{
    parse_graph, parse_quartets, parse_rcc, parse_tree, write_graph, write_quartets,
    write_topology, write_tree,
};

#[derive(Debug, Parser)]
#[command(
    name = "leafpower",
    version,
    about = "Leaf powers, strongly chordal graphs and quartets"
)]
pub struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide chordality; certificate is a perfect elimination ordering.
    CheckChordal { graph: PathBuf },
    /// Decide strong chordality; certificate is a simple elimination ordering.
    CheckStronglyChordal { graph: PathBuf },
    /// List alternating cycles with at most `max_c` edge pairs.
    AltCycles {
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_c: usize,
    },
    /// Print the required quartets of a graph.
    RequiredQuartets {
        graph: PathBuf,
        /// Close the set under the path rule first.
        #[arg(long)]
        closure: bool,
    },
    /// Decide whether a quartet set is displayed by a single binary tree.
    QuartetCompat {
        quartets: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOPOLOGY_CAP)]
        cap: usize,
    },
    /// Exact leaf-power test for small graphs.
    LeafpowerExact {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOPOLOGY_CAP)]
        cap: usize,
    },
    /// Check a weighted tree against a graph.
    VerifyLeafroot { graph: PathBuf, tree: PathBuf },
    /// Print `G_{r,q}`, or with `--variant j` the graph without the edges
    /// `a_i b_q` for `2 <= i <= j`.
    GenGrq {
        r: usize,
        q: usize,
        #[arg(long)]
        variant: Option<usize>,
    },
    /// Print the k-sun.
    GenSun { k: usize },
    /// Certify that every single-vertex deletion of `G_{r,q}` is a leaf power.
    GrqMinimality {
        r: usize,
        q: usize,
        /// Also run the exact oracle on deletions with at most this many
        /// vertices.
        #[arg(long, default_value_t = 0)]
        cap: usize,
    },
    /// Build the chordal graph `H` of an RCC instance.
    ReduceRcc {
        instance: PathBuf,
        /// Print a JSON report with the vertex origins instead of `H`.
        #[arg(long)]
        report: bool,
    },
    /// Search a graph for an induced `G_{r,q}`.
    FindGrq { graph: PathBuf },
    /// Solve an RCC instance directly and through `H`, and compare.
    CrossCheckRcc {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RCC_CAP)]
        cap: usize,
    },
}

pub struct Outcome {
    pub holds: bool,
    pub stdout: String,
}

impl Outcome {
    fn report(r: Report) -> Self {
        Self {
            holds: r.holds,
            stdout: r.to_json(),
        }
    }

    fn text(stdout: String) -> Self {
        Self {
            holds: true,
            stdout,
        }
    }
}

/// `-` reads standard input.
fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_input(path)?).with_context(|| format!("in {}", path.display()))
}

fn quartet_strings(q: &QuartetSet) -> Vec<String> {
    q.iter().map(ToString::to_string).collect()
}

pub fn run(command: Command) -> Result<Outcome> {
    Ok(match command {
        Command::CheckChordal { graph } => Outcome::report(check_chordal(&load_graph(&graph)?)?),
        Command::CheckStronglyChordal { graph } => {
            Outcome::report(check_strongly_chordal(&load_graph(&graph)?)?)
        }
        Command::AltCycles { graph, max_c } => {
            Outcome::report(alt_cycles(&load_graph(&graph)?, max_c)?)
        }
        Command::RequiredQuartets { graph, closure } => {
            let mut q = required_quartets(&load_graph(&graph)?);
            if closure {
                q = path_lemma_closure(&q);
            }
            Outcome::text(write_quartets(&q))
        }
        Command::QuartetCompat { quartets, cap } => {
            let q = parse_quartets(&read_input(&quartets)?)
                .with_context(|| format!("in {}", quartets.display()))?;
            Outcome::report(quartet_compat(&q, cap)?)
        }
        Command::LeafpowerExact { graph, cap } => {
            Outcome::report(leafpower_exact(&load_graph(&graph)?, cap)?)
        }
        Command::VerifyLeafroot { graph, tree } => {
            let g = load_graph(&graph)?;
            let wt = parse_tree(&read_input(&tree)?)
                .with_context(|| format!("in {}", tree.display()))?;
            let holds = verify_leafroot(&wt, &g)?;
            Outcome::report(Report {
                command: "verify-leafroot",
                holds,
                summary: if holds {
                    "the tree is a leaf root of the graph".into()
                } else {
                    "the tree is not a leaf root of the graph".into()
                },
                certificates: vec![leaf_root_certificate(&wt, holds)],
            })
        }
        Command::GenGrq { r, q, variant } => Outcome::text(write_graph(&match variant {
            None => gen_grq(r, q)?.graph,
            Some(j) => gen_grq_variant(r, q, j)?,
        })),
        Command::GenSun { k } => Outcome::text(write_graph(&sun(k)?)),
        Command::GrqMinimality { r, q, cap } => Outcome::report(grq_minimality(r, q, cap)?),
        Command::ReduceRcc { instance, report } => {
            let inst = parse_rcc(&read_input(&instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let out = build_h(&inst);
            if !report {
                Outcome::text(write_graph(&out.h))
            } else {
                let chordal = is_chordal(&out.h).is_some();
                let star = out.x_u_star();
                let mut missing = Vec::new();
                for (i, a) in star.iter().enumerate() {
                    for b in &star[i + 1..] {
                        if !out.h.has_edge(a, b)? {
                            missing.push([a.to_string(), b.to_string()]);
                        }
                    }
                }
                missing.sort();
                let corners_missing = missing
                    == [["s1", "t1"], ["s1", "t2"], ["s2", "t1"], ["s2", "t2"]]
                        .map(|p| p.map(str::to_owned));
                Outcome::report(Report {
                    command: "reduce-rcc",
                    holds: chordal && corners_missing,
                    summary: format!(
                        "H has {} vertices and {} edges",
                        out.h.order(),
                        out.h.size()
                    ),
                    certificates: vec![Certificate::new(
                        Kind::ReductionReport,
                        chordal && corners_missing,
                        json!({
                            "h": write_graph(&out.h),
                            "origin": out.origin,
                            "c": out.c,
                            "d": out.d,
                            "h_is_chordal": chordal,
                            "missing_pairs_in_x_u_star": missing,
                        }),
                    )],
                })
            }
        }
        Command::FindGrq { graph } => {
            let h = load_graph(&graph)?;
            let report = match find_induced_grq(&h) {
                Some(emb) => Report {
                    command: "find-grq",
                    holds: true,
                    summary: format!("induced G_{{{},{}}} found", emb.r, emb.q),
                    certificates: vec![Certificate::new(Kind::GrqEmbedding, emb.verify(&h)?, &emb)],
                },
                None => Report {
                    command: "find-grq",
                    holds: false,
                    summary: "no induced G_{r,q}".into(),
                    certificates: vec![],
                },
            };
            Outcome::report(report)
        }
        Command::CrossCheckRcc { instance, cap } => {
            let inst = parse_rcc(&read_input(&instance)?)
                .with_context(|| format!("in {}", instance.display()))?;
            let rep = cross_check_reduction(&inst, cap)?;
            let agree = rep.agree();
            let summary = match (&rep.cycle, agree) {
                (Some(_), true) => "yes on both sides".to_owned(),
                (None, true) => "no on both sides".to_owned(),
                (Some(_), false) => "disagreement: cycle found but no induced G_{r,q}".to_owned(),
                (None, false) => "disagreement: induced G_{r,q} found but no cycle".to_owned(),
            };
            Outcome::report(Report {
                command: "cross-check-rcc",
                holds: agree,
                summary,
                certificates: vec![Certificate::new(Kind::ReductionReport, agree, &rep)],
            })
        }
    })
}

fn check_chordal(g: &Graph) -> Result<Report> {
    Ok(match is_chordal(g) {
        Some(cert) => Report {
            command: "check-chordal",
            holds: true,
            summary: "chordal".into(),
            certificates: vec![Certificate::new(
                Kind::EliminationOrdering,
                verify_elimination(g, &cert)?,
                &cert,
            )],
        },
        None => not_chordal("check-chordal", g),
    })
}

fn not_chordal(command: &'static str, g: &Graph) -> Report {
    let cycle = find_induced_cycle(g).expect("non-chordal graphs have a hole");
    Report {
        command,
        holds: false,
        summary: format!("not chordal: induced cycle {}", cycle.join(" ")),
        certificates: vec![],
    }
}

fn check_strongly_chordal(g: &Graph) -> Result<Report> {
    if is_chordal(g).is_none() {
        return Ok(not_chordal("check-strongly-chordal", g));
    }
    Ok(match is_strongly_chordal(g) {
        Some(cert) => Report {
            command: "check-strongly-chordal",
            holds: true,
            summary: "strongly chordal".into(),
            certificates: vec![Certificate::new(
                Kind::EliminationOrdering,
                verify_elimination(g, &cert)?,
                &cert,
            )],
        },
        None => Report {
            command: "check-strongly-chordal",
            holds: false,
            summary: "chordal, but elimination stalls with no simple vertex".into(),
            certificates: vec![],
        },
    })
}

fn alt_cycles(g: &Graph, max_c: usize) -> Result<Report> {
    let cycles = enumerate_alternating_cycles(g, max_c)?;
    let verified = cycles
        .iter()
        .all(|c| AlternatingCycle::new(g, c.pairs()).as_ref() == Ok(c));
    let listed: Vec<String> = cycles.iter().map(ToString::to_string).collect();
    Ok(Report {
        command: "alt-cycles",
        holds: !cycles.is_empty(),
        summary: format!("{} alternating cycles with c <= {max_c}", cycles.len()),
        certificates: if cycles.is_empty() {
            vec![]
        } else {
            vec![Certificate::new(
                Kind::AlternatingCycles,
                verified,
                json!({ "max_c": max_c, "cycles": listed }),
            )]
        },
    })
}

fn quartet_compat(q: &QuartetSet, cap: usize) -> Result<Report> {
    Ok(match is_compatible(q, cap)? {
        Some(t) => Report {
            command: "quartet-compat",
            holds: true,
            summary: "compatible".into(),
            certificates: vec![Certificate::new(
                Kind::DisplayingTree,
                q.displayed_by(&t)?,
                json!({ "tree": write_topology(&t) }),
            )],
        },
        None => Report {
            command: "quartet-compat",
            holds: false,
            summary: "incompatible".into(),
            certificates: vec![incompatibility_certificate(q, cap)?],
        },
    })
}

/// A direct conflict is self-evident; otherwise the set is re-counted by plain
/// enumeration.
fn incompatibility_certificate(q: &QuartetSet, cap: usize) -> Result<Certificate> {
    let (verified, conflict, method) = match q.find_conflict() {
        Some((x, y)) => (
            true,
            Some([x.to_string(), y.to_string()]),
            "direct-conflict",
        ),
        None => (
            count_displaying_topologies(q, cap)? == 0,
            None,
            "exhaustive-search",
        ),
    };
    Ok(Certificate::new(
        Kind::QuartetIncompatibility,
        verified,
        json!({ "method": method, "conflict": conflict, "quartets": quartet_strings(q) }),
    ))
}

fn leaf_root_certificate(wt: &leafpower::LeafRoot, verified: bool) -> Certificate {
    Certificate::new(
        Kind::LeafRoot,
        verified,
        json!({ "tree": write_tree(wt), "threshold": wt.threshold() }),
    )
}

/// Trees listed with their failing cycles when the graph is not a leaf power.
const FAILING_TREE_LIMIT: usize = 16;

/// An incompatible quartet closure settles the question without the simplex.
fn leafpower_exact(g: &Graph, cap: usize) -> Result<Report> {
    if g.order() > cap {
        bail!("{} vertices, above the cap of {cap}", g.order());
    }
    let mut certificates = Vec::new();
    if let Some(q) = nonleafpower_by_quartets(g, cap)? {
        certificates.push(incompatibility_certificate(&q, cap)?);
    } else if let Some(root) = is_leaf_power_exact(g, cap)? {
        return Ok(Report {
            command: "leafpower-exact",
            holds: true,
            summary: "leaf power".into(),
            certificates: vec![leaf_root_certificate(&root, verify_leafroot(&root, g)?)],
        });
    }
    let rq = required_quartets(g);
    let labels: Vec<&str> = g.labels().collect();
    let shows = |t: &PhyloTree| {
        let inside: BTreeSet<&str> = t.leaf_labels().collect();
        let sub: QuartetSet = rq.restricted_to(&inside).cloned().collect();
        sub.displayed_by(t).expect("labels come from the graph")
    };
    let found = Mutex::new(Vec::new());
    search_binary_topologies(&labels, cap, shows, |t| {
        if shows(t) {
            found.lock().expect("no panics while held").push(t.clone());
        }
        None::<()>
    })?;
    let mut trees: Vec<(String, PhyloTree)> = found
        .into_inner()
        .expect("no panics while held")
        .into_iter()
        .map(|t| (write_topology(&t), t))
        .collect();
    trees.sort_by(|a, b| a.0.cmp(&b.0));
    let displaying = trees.len();
    let max_c = g.order() / 2;
    let mut unexplained = 0;
    for (_, t) in trees.iter().take(FAILING_TREE_LIMIT) {
        match check_necessary_condition(g, t, max_c)? {
            Some(cyc) => certificates.push(failing_cycle_certificate(t, &cyc)?),
            None => unexplained += 1,
        }
    }
    let mut summary =
        format!("not a leaf power; {displaying} binary trees display the required quartets");
    if unexplained > 0 {
        summary.push_str(&format!(
            ", {unexplained} of them satisfy every alternating cycle with c <= {max_c}"
        ));
    }
    Ok(Report {
        command: "leafpower-exact",
        holds: false,
        summary,
        certificates,
    })
}

/// Checked twice: by path counting and by the simplex on the cycle's
/// constraints alone.
fn failing_cycle_certificate(t: &PhyloTree, cyc: &AlternatingCycle) -> Result<Certificate> {
    let by_counts = !can_satisfy_cycle(t, cyc)?;
    let by_lp = !can_satisfy(t, &cyc.constraints())?.feasible;
    Ok(Certificate::new(
        Kind::FailingCycle,
        by_counts && by_lp,
        json!({ "tree": write_topology(t), "cycle": cyc.to_string(), "c": cyc.half_length() }),
    ))
}

fn grq_minimality(r: usize, q: usize, cap: usize) -> Result<Report> {
    let g = gen_grq(r, q)?.graph;
    let report = verify_minimality(r, q, cap)?;
    let mut certificates = Vec::new();
    for d in &report.deletions {
        let verified = verify_leafroot(&d.root, &g.without_vertex(&d.deleted)?)?;
        let method = match &d.method {
            DeletionMethod::Construction => json!({ "kind": "construction" }),
            DeletionMethod::PendantExtension { via, pendants } => {
                json!({ "kind": "pendant-extension", "via": via, "pendants": pendants })
            }
        };
        certificates.push(Certificate::new(
            Kind::LeafRoot,
            verified && d.oracle_agrees != Some(false),
            json!({
                "deleted": d.deleted,
                "method": method,
                "recipe_threshold": d.recipe_threshold,
                "oracle_agrees": d.oracle_agrees,
                "tree": write_tree(&d.root),
                "threshold": d.root.threshold(),
            }),
        ));
    }
    let holds = report.all_certified() && certificates.iter().all(|c| c.verified);
    if report.deletions.len() != g.order() {
        bail!(
            "minimality report covers {} of {} vertices",
            report.deletions.len(),
            g.order()
        );
    }
    let summary = format!(
        "{} of {} deletions of G_{{{r},{q}}} certified as leaf powers",
        certificates.iter().filter(|c| c.verified).count(),
        g.order()
    );
    Ok(Report {
        command: "grq-minimality",
        holds,
        summary,
        certificates: vec![Certificate::new(
            Kind::MinimalityReport,
            holds,
            json!({ "r": r, "q": q, "deletions": certificates }),
        )],
    })
}
