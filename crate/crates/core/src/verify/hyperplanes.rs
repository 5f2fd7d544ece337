use super::{sweep, VerifyConfig};
use crate::building::{BVertex, Building, Chamber, Cube};
use crate::hyperplanes::{check_special, elementary_parallel_classes, HyperplaneId, SpecialReport, Subgroup};
use crate::report::CheckReport;
use crate::sets::VertexSet;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let r = cfg.radius;
    let ball = b.ball(r);
    let vertices = b.vertices_of(&ball);
    let classes = elementary_parallel_classes(b, &ball);
    let (duals, dual_check) = dual_edges(b);
    let checks = vec![
        sweep("edge degrees", &vertices, |v, rep| edge_degrees(b, v, rep)),
        parallel_classes(b, &classes),
        sweep("one hyperplane per label", &ball, |c, rep| one_per_label(b, c, rep)),
        sweep("oriented parallelism", &ball, |c, rep| oriented(b, c, rep)),
        residue_criterion(b, &ball, &classes),
        sweep("corners", &vertices, |v, rep| corners(b, v, rep)),
        hyperplanes_below(b, &vertices),
        dual_check,
    ];
    let info = json!({
        "parallel_classes": classes.len(),
        "dual_edges": duals,
    });
    (checks, info)
}

/// Lower neighbours number `|G_i|` per label in the type, upper neighbours
/// one per label in the perpendicular set; both read off containing chambers.
fn edge_degrees(b: &Building, v: &BVertex, rep: &mut CheckReport) {
    let g = b.graph();
    let chambers = b.chambers_containing(v);
    let mut expected = 0;
    for i in v.ty.iter() {
        let below: BTreeSet<BVertex> = chambers.iter().map(|c| b.vertex_in(c, v.ty.without(i))).collect();
        rep.check(below.len() == g.order(i) as usize, "lower neighbours", || json!({ "vertex": v, "label": i }));
        expected += below.len();
    }
    let lower = b.lower_edges(v);
    rep.check(b.lower_degree(v) == expected && lower.len() == expected, "lower degree", || json!({ "vertex": v }));
    for e in &lower {
        let ok = e.hi == v.ty && b.edge_label(e).map(|i| v.ty.contains(i)).unwrap_or(false);
        rep.check(ok, "lower edge types", || json!({ "vertex": v, "edge": e }));
    }
    for i in (0..g.n()).filter(|&i| !v.ty.contains(i)) {
        let hi = v.ty.with(i);
        let above: BTreeSet<BVertex> =
            if g.is_spherical(hi) { chambers.iter().map(|c| b.vertex_in(c, hi)).collect() } else { BTreeSet::new() };
        let upper = b.upper_edges(v).iter().filter(|e| e.hi == hi).count();
        rep.check(above.len() == upper && upper <= 1, "upper edges", || json!({ "vertex": v, "label": i }));
    }
}

/// Elementary parallelism closes into classes of constant label and id, and
/// distinct classes carry distinct ids.
fn parallel_classes(b: &Building, classes: &[Vec<Cube>]) -> CheckReport {
    let mut rep = CheckReport::new("parallel classes");
    let mut owners: HashMap<HyperplaneId, usize> = HashMap::new();
    for (k, class) in classes.iter().enumerate() {
        let labels: BTreeSet<usize> = class.iter().map(|e| b.edge_label(e).expect("edge")).collect();
        rep.check(labels.len() == 1, "one label", || json!({ "class": class }));
        let ids: BTreeSet<HyperplaneId> = class.iter().map(|e| b.hyperplane_of(e).expect("edge")).collect();
        rep.check(ids.len() == 1, "one id", || json!({ "class": class }));
        for id in ids {
            let o = *owners.entry(id.clone()).or_insert(k);
            rep.check(o == k, "distinct ids", || json!({ "id": id }));
        }
    }
    rep
}

fn edges_with_label(b: &Building, c: &Chamber, i: usize) -> Vec<Cube> {
    b.chamber_cubes_of_dim(c, 1).into_iter().filter(|e| e.hi.difference(e.lo) == VertexSet::singleton(i)).collect()
}

/// All `i`-edges of a chamber are dual to one hyperplane.
fn one_per_label(b: &Building, c: &Chamber, rep: &mut CheckReport) {
    for i in 0..b.graph().n() {
        let ids: BTreeSet<HyperplaneId> =
            edges_with_label(b, c, i).iter().map(|e| b.hyperplane_of(e).expect("edge")).collect();
        rep.check(ids.len() == 1, "one hyperplane", || json!({ "chamber": c, "label": i, "ids": ids }));
    }
}

/// Opposite edges of each square point the same way: their bottoms and their
/// tops are joined by edges of the remaining label.
fn oriented(b: &Building, c: &Chamber, rep: &mut CheckReport) {
    for sq in b.chamber_cubes_of_dim(c, 2) {
        let edges = b.cube_edges(&sq);
        let free: Vec<usize> = sq.hi.difference(sq.lo).iter().collect();
        for (a, o) in [(free[0], free[1]), (free[1], free[0])] {
            let pair: Vec<&Cube> = edges.iter().filter(|e| b.edge_label(e).ok() == Some(a)).collect();
            let ends: Vec<(BVertex, BVertex)> = pair.iter().map(|e| b.cube_extremes(e)).collect();
            let joined = |x: &BVertex, y: &BVertex| {
                edges.iter().any(|e| {
                    b.edge_label(e).ok() == Some(o) && {
                        let (p, q) = b.cube_extremes(e);
                        (p == *x && q == *y) || (p == *y && q == *x)
                    }
                })
            };
            let ok = pair.len() == 2 && joined(&ends[0].0, &ends[1].0) && joined(&ends[0].1, &ends[1].1);
            rep.check(ok, "oriented parallel", || json!({ "square": sq, "label": a }));
        }
    }
}

/// `i`-edges of `C` and `C'` are parallel iff `C' ∈ 𝒞(i⊥, C)`; within the
/// ball, chambers joined by `i⊥`-galleries have closure-parallel `i`-edges.
fn residue_criterion(b: &Building, ball: &[Chamber], classes: &[Vec<Cube>]) -> CheckReport {
    let g = b.graph();
    let class_of: HashMap<&Cube, usize> =
        classes.iter().enumerate().flat_map(|(k, c)| c.iter().map(move |e| (e, k))).collect();
    let index: HashMap<&Chamber, usize> = ball.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let labels: Vec<usize> = (0..g.n()).collect();
    sweep("parallel iff perpendicular residue", &labels, |&i, rep| {
        let perp = g.neighbors(i);
        let first: Vec<Cube> = ball.iter().map(|c| edges_with_label(b, c, i)[0].clone()).collect();
        // Components of i⊥-adjacency inside the ball.
        let mut parent: Vec<usize> = (0..ball.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (k, c) in ball.iter().enumerate() {
            for d in b.neighbors(c) {
                if let (Some(&l), Some(m)) = (index.get(&d), b.adjacency(c, &d)) {
                    if perp.contains(m) {
                        let (x, y) = (find(&mut parent, k), find(&mut parent, l));
                        parent[x] = y;
                    }
                }
            }
        }
        for k in 0..ball.len() {
            for l in 0..ball.len() {
                let same_residue = g.in_parabolic(&b.delta(&ball[k], &ball[l]), perp);
                let w = || json!({ "chambers": [ball[k], ball[l]], "label": i });
                let parallel = b.parallel(&first[k], &first[l]).expect("edges");
                rep.check(parallel == same_residue, "residue criterion", w);
                if find(&mut parent, k) == find(&mut parent, l) {
                    rep.check(class_of[&first[k]] == class_of[&first[l]], "closure reaches residue", w);
                }
            }
        }
    })
}

/// Two distinct edges at a vertex form a corner iff their labels are
/// distinct and adjacent, iff some square of a chamber at the vertex has both.
fn corners(b: &Building, v: &BVertex, rep: &mut CheckReport) {
    let g = b.graph();
    let edges = b.edges_at(v);
    let mut squares: BTreeSet<(Cube, Cube)> = BTreeSet::new();
    for c in b.chambers_containing(v) {
        for sq in b.chamber_cubes_of_dim(&c, 2) {
            let at_v: Vec<Cube> = b
                .cube_edges(&sq)
                .into_iter()
                .filter(|e| b.cube_contains_vertex(e, v))
                .collect();
            if at_v.len() == 2 {
                squares.insert((at_v[0].clone(), at_v[1].clone()));
                squares.insert((at_v[1].clone(), at_v[0].clone()));
            }
        }
    }
    for e1 in &edges {
        for e2 in edges.iter().filter(|e| *e != e1) {
            let corner = b.forms_corner(v, e1, e2);
            let (i, j) = (b.edge_label(e1).expect("edge"), b.edge_label(e2).expect("edge"));
            let w = || json!({ "vertex": v, "edges": [e1, e2] });
            rep.check(corner == (i != j && g.adjacent(i, j)), "corner iff adjacent labels", w);
            rep.check(corner == squares.contains(&(e1.clone(), e2.clone())), "corner iff square", w);
        }
    }
}

/// Equal lower hyperplane sets iff equal level classes, among vertices of one type.
fn hyperplanes_below(b: &Building, vertices: &[BVertex]) -> CheckReport {
    let below = crate::parallel::map(vertices, |v| (v.ty, b.hyperplanes_below(v)));
    let mut by_hyp: BTreeMap<&(VertexSet, BTreeSet<HyperplaneId>), BTreeSet<usize>> = BTreeMap::new();
    let mut by_class: BTreeMap<_, BTreeSet<usize>> = BTreeMap::new();
    for (k, v) in vertices.iter().enumerate() {
        by_hyp.entry(&below[k]).or_default().insert(k);
        by_class.entry(b.level_class(v)).or_default().insert(k);
    }
    let mut rep = CheckReport::new("hyperplanes below");
    for (k, v) in vertices.iter().enumerate() {
        let a = &by_hyp[&below[k]];
        let c = &by_class[&b.level_class(v)];
        rep.check(a == c, "same hyperplanes iff same class", || json!({ "vertex": v }));
    }
    rep
}

/// Dual edge counts of the hyperplanes through `C_*` with spherical
/// perpendicular set, against the closure on a ball containing the residue.
fn dual_edges(b: &Building) -> (BTreeMap<usize, usize>, CheckReport) {
    let g = b.graph();
    let base = Chamber::base();
    let mut counts = BTreeMap::new();
    let mut rep = CheckReport::new("dual edges");
    for i in 0..g.n() {
        let perp = g.neighbors(i);
        if !g.is_spherical(perp) {
            continue;
        }
        let e = edges_with_label(b, &base, i)[0].clone();
        let h = b.hyperplane_of(&e).expect("edge");
        let dual = b.dual_edges(&h, None).expect("spherical residue");
        let classes = elementary_parallel_classes(b, &b.ball(perp.len() + 1));
        let class = classes.iter().find(|c| c.contains(&e)).expect("edge in ball");
        rep.check(dual == *class, "closure class", || json!({ "label": i, "dual": dual.len(), "closure": class.len() }));
        counts.insert(i, dual.len());
    }
    (counts, rep)
}

fn special_check(name: &str, report: &SpecialReport, clean: bool) -> CheckReport {
    let mut rep = CheckReport::new(name);
    rep.count(report.configurations_checked);
    for v in &report.violations {
        if clean || v.kind == "nice" {
            rep.violation(&v.kind, v.witness.clone());
        }
    }
    let total = report.nice_violations + if clean { report.clean_violations } else { 0 };
    rep.violations_total = total;
    rep
}

/// Shortest nontrivial kernel elements have this many syllables.
const KERNEL_LENGTH: usize = 4;

pub(super) fn run_special(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let r = cfg.radius;
    let kernel = check_special(b, &Subgroup::Kernel, r.max(KERNEL_LENGTH), r);
    let whole = check_special(b, &Subgroup::Whole, r.min(2), r.min(2));
    let checks = vec![special_check("kernel special", &kernel, true), special_check("whole nice", &whole, false)];
    let info = json!({
        "kernel": {
            "box": kernel.search_box,
            "clean_violations": kernel.clean_violations,
            "nice_violations": kernel.nice_violations,
        },
        "whole": {
            "box": whole.search_box,
            "clean_violations": whole.clean_violations,
            "nice_violations": whole.nice_violations,
        },
    });
    (checks, info)
}
