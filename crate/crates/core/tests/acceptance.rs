//! The ten acceptance criteria, one PASS/FAIL line each. Time limits are
//! pinned below; a criterion passes only when its checks hold and it ran
//! within its limit.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use leafpower::cycles::{
    can_satisfy_cycle, check_necessary_condition, construct_cycle_weighting, weighting_satisfies,
    AlternatingCycle,
};
use leafpower::graph::generators::{cycle, sun};
use leafpower::graph::{
    is_chordal, is_strongly_chordal, verify_elimination, EliminationCertificate, EliminationKind,
    Graph,
};
use leafpower::grq::{gen_grq, gen_grq_variant, grq_recipe, simple_ordering, verify_minimality};
use leafpower::grq::{DeletionMethod, MinimalityReport};
use leafpower::leafroot::{
    count_feasible_topologies, has_positive_weights, is_leaf_power_exact, normalize_zero_edges,
    verify_leafroot,
};
use leafpower::lp::{can_satisfy, ConstraintPair};
use leafpower::quartets::{
    count_displaying_topologies, nonleafpower_by_quartets, required_quartets, shutters_family,
};
use leafpower::rcc::{
    build_h, cross_check_reduction, find_chordless_st_cycle, forced_no_instance, planted_instance,
    random_instance, RccInstance, DEFAULT_RCC_CAP,
};
use leafpower::tree::{enumerate_binary_topologies, topology_count};
use leafpower::{PhyloTree, Quartet, QuartetSet, WeightedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const LIMIT_STRONG_CHORDALITY: Duration = Duration::from_secs(5);
const LIMIT_CYCLE_ORACLE: Duration = Duration::from_secs(60);
const LIMIT_FOUR_CYCLES: Duration = Duration::from_secs(30);
const LIMIT_SUN: Duration = Duration::from_secs(60);
const LIMIT_SHUTTERS: Duration = Duration::from_secs(120);
const LIMIT_GRQ_QUARTETS: Duration = Duration::from_secs(60);
const LIMIT_MINIMALITY_EXHAUSTIVE: Duration = Duration::from_secs(30 * 60);
const LIMIT_MINIMALITY_CONSTRUCTION: Duration = Duration::from_secs(60);
const LIMIT_GREEDY: Duration = Duration::from_secs(60);
const LIMIT_RCC: Duration = Duration::from_secs(10 * 60);
const LIMIT_NORMALIZE_REFINE: Duration = Duration::from_secs(120);

/// Bypasses the test harness's output capture so the lines always show.
fn say(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(cond: bool, what: &str, failures: &mut Vec<String>) {
    if !cond {
        failures.push(what.to_owned());
    }
}

fn outcome(failures: Vec<String>, detail: String) -> Outcome {
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            detail
        } else {
            format!("{detail}; failed: {}", failures.join(", "))
        },
    }
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let ok = out.ok && took <= limit;
    say(&format!(
        "{} {id:>2} {name}: {} [{:.2?} of {:?}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took,
        limit
    ));
    ok
}

fn strong_chordality() -> Outcome {
    let mut f = Vec::new();
    for r in 3..=5 {
        for q in 3..=5 {
            let g = gen_grq(r, q).unwrap().graph;
            let ok = is_strongly_chordal(&g).is_some_and(|c| verify_elimination(&g, &c).unwrap());
            check(ok, &format!("G_{r},{q} rejected"), &mut f);
        }
    }
    let g33 = gen_grq(3, 3).unwrap().graph;
    let cert = EliminationCertificate::new(simple_ordering(3, 3).unwrap(), EliminationKind::Simple);
    check(
        verify_elimination(&g33, &cert).unwrap(),
        "ordering for (3,3)",
        &mut f,
    );
    for k in 3..=6 {
        check(
            is_strongly_chordal(&sun(k).unwrap()).is_none(),
            &format!("{k}-sun accepted"),
            &mut f,
        );
    }
    check(
        is_strongly_chordal(&cycle(4)).is_none(),
        "C4 accepted",
        &mut f,
    );
    outcome(
        f,
        "9 G_{r,q} accepted, ordering verified, suns 3..6 and C4 rejected".into(),
    )
}

fn cycle_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1C1E);
    let (mut mismatches, mut yes) = (0, 0);
    for _ in 0..200 {
        let c = rng.gen_range(2..=4);
        let n = rng.gen_range(2 * c..=8);
        let t = random_tree(&mut rng, &labels(n));
        let (_, cyc) = random_cycle_on(&mut rng, &t, c);
        let by_counts = can_satisfy_cycle(&t, &cyc).unwrap();
        let by_lp = can_satisfy(&t, &cyc.constraints()).unwrap().feasible;
        mismatches += usize::from(by_counts != by_lp);
        yes += usize::from(by_lp);
    }
    let mut f = Vec::new();
    check(mismatches == 0, &format!("{mismatches} mismatches"), &mut f);
    check(yes > 0 && yes < 200, "only one verdict seen", &mut f);
    outcome(f, format!("200 instances, {yes} satisfiable, 0 mismatches"))
}

fn four_cycles() -> Outcome {
    let ls = labels(6);
    let trees: Vec<PhyloTree> = enumerate_binary_topologies(&ls, 9).unwrap().collect();
    let mut f = Vec::new();
    check(trees.len() == 105, "tree count", &mut f);
    let (mut checks, mut mismatches) = (0, 0);
    for t in &trees {
        for s in subsets(6).filter(|s| s.len() == 4) {
            let [a, b, c, d] = [0, 1, 2, 3].map(|i| ls[s[i]].as_str());
            for [w, x, y, z] in [[a, b, c, d], [a, c, b, d], [a, d, b, c], [a, b, d, c]] {
                let g = Graph::from_edges([(w, x), (y, z)]).unwrap();
                let cyc = AlternatingCycle::new(&g, &[(w, x), (y, z)]).unwrap();
                let q = Quartet::new(w, x, y, z).unwrap();
                checks += 1;
                let sat = can_satisfy_cycle(t, &cyc).unwrap();
                if sat != q.displayed_by(t).unwrap() || cyc.quartet() != Some(q) {
                    mismatches += 1;
                }
            }
        }
    }
    check(mismatches == 0, &format!("{mismatches} mismatches"), &mut f);
    outcome(f, format!("{checks} (tree, 4-cycle) pairs, 0 mismatches"))
}

/// Triangle `a, b, c`; `y` on `a, b`, `z` on `b, c`, `x` on `c, a`.
fn labelled_sun() -> Graph {
    Graph::from_edges([
        ("a", "b"),
        ("b", "c"),
        ("c", "a"),
        ("y", "a"),
        ("y", "b"),
        ("z", "b"),
        ("z", "c"),
        ("x", "c"),
        ("x", "a"),
    ])
    .unwrap()
}

fn sun_refutation() -> Outcome {
    let g = labelled_sun();
    let mut f = Vec::new();
    check(
        count_feasible_topologies(&g, 9).unwrap() == (105, 0),
        "feasible count",
        &mut f,
    );
    check(
        is_leaf_power_exact(&g, 9).unwrap().is_none(),
        "exact search",
        &mut f,
    );
    let rq = required_quartets(&g);
    let expected: QuartetSet = [
        ["a", "y", "c", "z"],
        ["b", "y", "c", "x"],
        ["b", "z", "a", "x"],
    ]
    .iter()
    .map(|[a, b, c, d]| Quartet::new(a, b, c, d).unwrap())
    .collect();
    check(rq == expected, "required quartets", &mut f);
    let labels: Vec<&str> = g.labels().collect();
    let showing: Vec<PhyloTree> = enumerate_binary_topologies(&labels, 9)
        .unwrap()
        .filter(|t| rq.displayed_by(t).unwrap())
        .collect();
    check(
        showing.len() == 2,
        &format!("{} trees display RQ'", showing.len()),
        &mut f,
    );
    for t in &showing {
        let fail = check_necessary_condition(&g, t, 3).unwrap();
        let six = fail.as_ref().is_some_and(|c| c.half_length() == 3);
        check(six, "no failing 6-cycle", &mut f);
        if let Some(c) = fail {
            check(
                !can_satisfy(t, &c.constraints()).unwrap().feasible,
                "simplex disagrees",
                &mut f,
            );
        }
    }
    outcome(
        f,
        "0 of 105 topologies feasible; both RQ' trees fail a 6-cycle".into(),
    )
}

fn shutters() -> Outcome {
    let mut f = Vec::new();
    for (r, q, trees) in [(3, 3, 105u128), (3, 4, 945)] {
        let s = shutters_family(r, q).unwrap();
        check(
            topology_count(s.labels().len()) == trees,
            "topology count",
            &mut f,
        );
        check(
            count_displaying_topologies(&s, 9).unwrap() == 0,
            &format!("({r},{q}) compatible"),
            &mut f,
        );
        for drop in s.iter() {
            let mut sub = s.clone();
            sub.remove(drop);
            let n = count_displaying_topologies(&sub, 9).unwrap();
            check(
                n > 0,
                &format!("({r},{q}) without {drop} incompatible"),
                &mut f,
            );
        }
    }
    outcome(
        f,
        "(3,3) and (3,4) incompatible over 105 and 945 trees; all 12 proper subsets compatible"
            .into(),
    )
}

fn grq_quartets() -> Outcome {
    let mut f = Vec::new();
    let cases = [
        (
            "G_3,3",
            gen_grq(3, 3).unwrap().graph,
            shutters_family(3, 3).unwrap(),
        ),
        (
            "variant (4,3,2)",
            gen_grq_variant(4, 3, 2).unwrap(),
            shutters_family(4, 3).unwrap(),
        ),
    ];
    let mut sizes = Vec::new();
    for (name, g, family) in cases {
        match nonleafpower_by_quartets(&g, 9).unwrap() {
            Some(q) => {
                check(
                    family.is_subset(&q),
                    &format!("{name} misses its shutters family"),
                    &mut f,
                );
                sizes.push(format!("{name}: {} quartets", q.len()));
            }
            None => check(false, &format!("{name} not certified"), &mut f),
        }
    }
    outcome(f, format!("both certified ({})", sizes.join(", ")))
}

fn expected_threshold(r: usize, q: usize, label: &str) -> u64 {
    let i: usize = label[1..].parse().unwrap();
    let recipe = match &label[..1] {
        "x" => grq_recipe(r, q, i).unwrap(),
        _ => grq_recipe(q, r, i).unwrap(),
    };
    assert_eq!(recipe.threshold, 2 * recipe.p);
    recipe.threshold
}

fn check_report(rep: &MinimalityReport, oracle: bool, f: &mut Vec<String>) {
    let (r, q) = (rep.r, rep.q);
    let g = gen_grq(r, q).unwrap().graph;
    check(rep.deletions.len() == g.order(), "deletion count", f);
    check(rep.all_certified(), "not all certified", f);
    for d in &rep.deletions {
        let h = g.without_vertex(&d.deleted).unwrap();
        check(
            verify_leafroot(&d.root, &h).unwrap(),
            &format!("root for -{}", d.deleted),
            f,
        );
        check(has_positive_weights(&d.root), "zero weight", f);
        let source = match &d.method {
            DeletionMethod::Construction => d.deleted.as_str(),
            DeletionMethod::PendantExtension { via, .. } => via.as_str(),
        };
        check(
            d.recipe_threshold == expected_threshold(r, q, source),
            &format!("threshold for -{}", d.deleted),
            f,
        );
        let agrees = if oracle {
            d.oracle_agrees == Some(true)
        } else {
            d.oracle_agrees.is_none()
        };
        check(agrees, &format!("oracle for -{}", d.deleted), f);
    }
}

fn minimality() -> Outcome {
    let mut f = Vec::new();
    let start = Instant::now();
    check_report(&verify_minimality(3, 3, 9).unwrap(), true, &mut f);
    let exhaustive = start.elapsed();
    check(
        exhaustive <= LIMIT_MINIMALITY_EXHAUSTIVE,
        "exhaustive part too slow",
        &mut f,
    );
    let start = Instant::now();
    for (r, q) in [(3, 4), (4, 4)] {
        check_report(&verify_minimality(r, q, 0).unwrap(), false, &mut f);
    }
    let construction = start.elapsed();
    check(
        construction <= LIMIT_MINIMALITY_CONSTRUCTION,
        "construction part too slow",
        &mut f,
    );
    outcome(
        f,
        format!(
            "(3,3) 10 deletions certified with oracle agreement in {exhaustive:.2?}; \
             (3,4), (4,4) by construction in {construction:.2?}"
        ),
    )
}

fn greedy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6EED);
    let mut f = Vec::new();
    let (mut done, mut tries) = (0, 0);
    while done < 100 {
        tries += 1;
        let c = rng.gen_range(2..=4);
        let n = rng.gen_range(2 * c..=8);
        let t = random_tree(&mut rng, &labels(n));
        let (_, cyc) = random_cycle_on(&mut rng, &t, c);
        if !can_satisfy_cycle(&t, &cyc).unwrap() {
            continue;
        }
        done += 1;
        let w = construct_cycle_weighting(&t, &cyc).unwrap();
        let k = 2 * (c as u64).pow(10);
        check(
            w.k == k && *w.raw.threshold() == k,
            "threshold is not 2c^10",
            &mut f,
        );
        check(
            weighting_satisfies(&w.raw, &cyc).unwrap(),
            "raw weighting fails",
            &mut f,
        );
        check(
            weighting_satisfies(&w.normalized, &cyc).unwrap(),
            "normalized fails",
            &mut f,
        );
        check(
            has_positive_weights(&w.normalized),
            "zero after normalizing",
            &mut f,
        );
        check(w.final_x0 <= k / 2, "f(x0) above k/2", &mut f);
    }
    f.dedup();
    outcome(f, format!("100 satisfiable instances out of {tries} drawn"))
}

/// Non-adjacent pairs inside `X_U` plus the four terminals.
fn missing_in_star(h: &Graph, star: &[&str]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (i, a) in star.iter().enumerate() {
        for b in &star[i + 1..] {
            if !h.has_edge(a, b).unwrap() {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                out.push((a.to_string(), b.to_string()));
            }
        }
    }
    out.sort();
    out
}

fn rcc() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8CC);
    let mut instances: Vec<RccInstance> = Vec::new();
    for _ in 0..12 {
        let arcs = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let extra = 14 - (4 + 2 * (arcs.0 + arcs.1) + 2);
        let eu = rng.gen_range(0..=extra.min(3));
        let ev = rng.gen_range(0..=(extra - eu).min(3));
        instances.push(planted_instance(&mut rng, arcs, eu, ev, 0.3).unwrap());
    }
    for _ in 0..12 {
        let (nu, nv) = (rng.gen_range(3..=6), rng.gen_range(4..=8));
        instances.push(forced_no_instance(&mut rng, nu, nv, 0.4).unwrap());
    }
    for _ in 0..6 {
        let (nu, nv) = (rng.gen_range(3..=6), rng.gen_range(4..=8));
        instances.push(random_instance(&mut rng, nu, nv, 0.35).unwrap());
    }
    let corners: Vec<(String, String)> = [("s1", "t1"), ("s1", "t2"), ("s2", "t1"), ("s2", "t2")]
        .map(|(a, b)| (a.to_owned(), b.to_owned()))
        .to_vec();
    let mut f = Vec::new();
    let (mut planted_yes, mut certified_no, mut agree) = (0, 0, 0);
    for (i, inst) in instances.iter().enumerate() {
        check(
            inst.graph().order() <= 14,
            &format!("#{i} too large"),
            &mut f,
        );
        let out = build_h(inst);
        let chordal = is_chordal(&out.h).is_some_and(|c| verify_elimination(&out.h, &c).unwrap());
        check(chordal, &format!("#{i} H not chordal"), &mut f);
        check(
            missing_in_star(&out.h, &out.x_u_star()) == corners,
            &format!("#{i} corners"),
            &mut f,
        );
        let rep = cross_check_reduction(inst, DEFAULT_RCC_CAP).unwrap();
        agree += usize::from(rep.agree());
        let yes = find_chordless_st_cycle(inst).is_some();
        check(yes == rep.cycle.is_some(), "cycle search unstable", &mut f);
        planted_yes += usize::from(i < 12 && yes);
        certified_no += usize::from(!yes);
    }
    check(
        agree == instances.len(),
        &format!("{} disagreements", instances.len() - agree),
        &mut f,
    );
    check(
        planted_yes >= 10,
        &format!("{planted_yes} planted yes"),
        &mut f,
    );
    check(
        certified_no >= 10,
        &format!("{certified_no} certified no"),
        &mut f,
    );
    outcome(
        f,
        format!("30 instances, {planted_yes} planted yes, {certified_no} no, all agree"),
    )
}

/// Longest leaf-to-leaf path in edges.
fn brute_diameter(t: &PhyloTree) -> usize {
    let leaves: Vec<&str> = t.leaf_labels().collect();
    let mut d = 0;
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            d = d.max(t.path_edges(a, b).unwrap().len());
        }
    }
    d
}

fn normalize_and_refine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1E33A);
    let mut f = Vec::new();
    for _ in 0..300 {
        let n = rng.gen_range(2..=9);
        let wt = random_weighted(&mut rng, n, 4);
        let (t, mut w, k) = wt.into_parts();
        let z = rng.gen_range(0..w.len());
        w[z] = 0;
        let wt = WeightedTree::new(t, w, k).unwrap();
        let g = leaf_power_graph(&wt);
        let norm = normalize_zero_edges(&wt).unwrap();
        let d = brute_diameter(wt.tree()) as u64;
        check(*norm.threshold() == (d + 1) * k + d, "threshold", &mut f);
        check(has_positive_weights(&norm), "zero left", &mut f);
        check(verify_leafroot(&norm, &g).unwrap(), "graph changed", &mut f);
    }
    let mut refinements = 0;
    for _ in 0..300 {
        let n = rng.gen_range(4..=7);
        let ls = labels(n);
        let binary = random_binary_tree(&mut rng, &ls);
        let coarse = contract_some(&mut rng, binary, 3);
        let w: Vec<u64> = (0..coarse.edge_count())
            .map(|_| rng.gen_range(0..=6))
            .collect();
        let k = rng.gen_range(1..=12);
        let wt = WeightedTree::new(coarse.clone(), w, k).unwrap();
        let cons = ConstraintPair::of_graph(&leaf_power_graph(&wt));
        check(
            can_satisfy(&coarse, &cons).unwrap().feasible,
            "base infeasible",
            &mut f,
        );
        for fine in enumerate_binary_topologies(&ls, 9).unwrap() {
            if fine.is_refinement_of(&coarse) {
                refinements += 1;
                check(
                    can_satisfy(&fine, &cons).unwrap().feasible,
                    "refinement infeasible",
                    &mut f,
                );
            }
        }
    }
    f.dedup();
    outcome(
        f,
        format!("300 normalizations; 300 feasible pairs, {refinements} refinements all feasible"),
    )
}

#[test]
fn acceptance() {
    say("");
    let results = [
        run(
            1,
            "strong chordality",
            LIMIT_STRONG_CHORDALITY,
            strong_chordality,
        ),
        run(
            2,
            "cycle verdict vs simplex",
            LIMIT_CYCLE_ORACLE,
            cycle_oracle,
        ),
        run(3, "4-cycles vs quartets", LIMIT_FOUR_CYCLES, four_cycles),
        run(4, "3-sun", LIMIT_SUN, sun_refutation),
        run(5, "shutters families", LIMIT_SHUTTERS, shutters),
        run(
            6,
            "G_r,q quartet certificates",
            LIMIT_GRQ_QUARTETS,
            grq_quartets,
        ),
        run(
            7,
            "minimality",
            LIMIT_MINIMALITY_EXHAUSTIVE + LIMIT_MINIMALITY_CONSTRUCTION,
            minimality,
        ),
        run(8, "greedy cycle weighting", LIMIT_GREEDY, greedy),
        run(9, "RCC reduction", LIMIT_RCC, rcc),
        run(
            10,
            "normalization and refinement",
            LIMIT_NORMALIZE_REFINE,
            normalize_and_refine,
        ),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    assert_eq!(failed, 0, "{failed} acceptance checks failed");
}

#[test]
fn labelled_sun_matches_generator() {
    let relabel = |l: &str| {
        match l {
            "x1" => "a",
            "x2" => "b",
            "x3" => "c",
            "a1" => "y",
            "a2" => "z",
            "a3" => "x",
            _ => unreachable!(),
        }
        .to_owned()
    };
    let g = sun(3).unwrap().relabeled(relabel).unwrap();
    assert!(g.same_labeled_graph(&labelled_sun()));
}
