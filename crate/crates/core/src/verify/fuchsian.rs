use super::{single, VerifyConfig};
use crate::building::Building;
use crate::fuchsian::{
    classify_with_links, edge_cell_incidence, has_induced_4cycle, polygon_report, star_rigid, SimpleGraph,
};
use crate::graph::DefiningGraph;
use crate::report::CheckReport;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Largest graph for the circuit oracle.
const CIRCUIT_LIMIT: usize = 14;
/// Largest graph for the permutation oracle.
const PERMUTATION_LIMIT: usize = 8;

fn circuits(g: &SimpleGraph) -> Vec<Vec<(usize, usize)>> {
    fn dfs(g: &SimpleGraph, start: usize, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<(usize, usize)>>) {
        let last = *path.last().expect("nonempty");
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 3 {
                let mut edges: Vec<(usize, usize)> =
                    path.windows(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
                edges.push((last.min(start), last.max(start)));
                edges.sort();
                out.insert(edges);
            } else if w > start && !path.contains(&w) {
                path.push(w);
                dfs(g, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        dfs(g, s, &mut vec![s], &mut out);
    }
    out.into_iter().collect()
}

/// `m` when the graph is connected, has no odd circuit, and every two edges
/// lie on a common shortest circuit.
fn circuit_oracle(g: &SimpleGraph) -> Option<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    if seen.contains(&false) {
        return None;
    }
    let cs = circuits(g);
    if cs.iter().any(|c| c.len() % 2 == 1) {
        return None;
    }
    let shortest = cs.iter().map(Vec::len).min()?;
    let short: Vec<&Vec<(usize, usize)>> = cs.iter().filter(|c| c.len() == shortest).collect();
    let edges = g.edges();
    let all = edges.iter().all(|a| edges.iter().all(|b| short.iter().any(|c| c.contains(a) && c.contains(b))));
    all.then_some(shortest / 2)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

/// Star-rigidity by scanning every vertex permutation.
fn star_rigid_oracle(g: &DefiningGraph) -> bool {
    let n = g.n();
    let autos: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| (0..n).all(|a| (0..n).all(|b| a == b || g.adjacent(a, b) == g.adjacent(p[a], p[b]))))
        .collect();
    (0..n).all(|v| {
        let star: Vec<usize> = (0..n).filter(|&w| w == v || g.adjacent(v, w)).collect();
        autos.iter().filter(|p| star.iter().all(|&w| p[w] == w)).count() == 1
    })
}

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let g = b.graph();
    let radius = cfg.radius.min(1);
    let polygon = polygon_report(g);
    let mut checks = Vec::new();
    if g.n() <= CIRCUIT_LIMIT {
        let oracle = circuit_oracle(&SimpleGraph::from_defining(g));
        checks.push(single("polygon", oracle == polygon.m.filter(|_| polygon.is_gen_mgon), || {
            json!({ "oracle": oracle, "report": polygon })
        }));
    }
    if g.n() <= PERMUTATION_LIMIT {
        let expected = star_rigid_oracle(g);
        checks.push(single("star rigidity", star_rigid(g) == expected, || json!({ "oracle": expected })));
    }
    let case = classify_with_links(g, radius);
    let mut multiplicities = None;
    if let Some(c) = case.case {
        let links = case.link_check.as_ref().expect("links are checked when a case applies");
        let mut rep = CheckReport::new("links");
        for (rank, summary) in &links.ranks {
            rep.count(summary.vertices as u64);
            for v in &summary.failures {
                rep.violation("link", json!({ "rank": rank, "vertex": v }));
            }
        }
        checks.push(rep);
        match edge_cell_incidence(b, c, radius) {
            Ok(inc) => {
                let m = inc.multiplicities();
                let ok = !inc.sides.is_empty() && inc.sides.iter().all(|(_, ks)| ks.len() == 1);
                checks.push(single("incidence", ok, || json!({ "sides": inc.sides })));
                multiplicities = Some(m);
            }
            Err(e) => checks.push(super::error_check("incidence", e)),
        }
    }
    let info = json!({
        "polygon": polygon,
        "case": case.case,
        "parameters": case.parameters,
        "reason": case.reason,
        "multiplicities": multiplicities,
        "star_rigid": star_rigid(g),
        "induced_4cycle": has_induced_4cycle(g),
    });
    (checks, info)
}
