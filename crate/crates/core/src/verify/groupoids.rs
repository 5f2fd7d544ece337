use super::{error_check, sweep, VerifyConfig};
use crate::building::{BVertex, Building, Chamber};
use crate::error::Error;
use crate::graph::DefiningGraph;
use crate::groupoids::{
    ascent, barpsi_extend, build_gamma_hierarchy, class_order_for_gamma, extend_groupoid, gamma_groupoid,
    groupoid_holonomy, phi_from_hierarchy, ClassOrder, PotentialRule, ResidueGroupoid,
};
use crate::report::CheckReport;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::{Element, Syllable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::sync::Arc;

const EQUIVARIANCE_SAMPLES: usize = 50;
const HOLONOMY_SAMPLES: usize = 5;

fn identity_order(g: &DefiningGraph) -> ClassOrder {
    class_order_for_gamma(g, &(0..g.n()).collect::<Vec<_>>()).expect("identity order")
}

/// All `(v, u)` in a chamber with `t(u) = {i}`, `i ∈ t(v)⊥`.
fn admissible(b: &Building, c: &Chamber) -> Vec<(BVertex, BVertex)> {
    let g = b.graph();
    let mut out = Vec::new();
    for &j in b.spherical_sets() {
        for i in g.perp_unchecked(j).iter() {
            out.push((b.vertex_in(c, j), b.vertex_in(c, VertexSet::singleton(i))));
        }
    }
    out
}

fn random_element(g: &DefiningGraph, rng: &mut ChaCha8Rng, max_len: usize) -> Element {
    let len = rng.gen_range(0..=max_len);
    let word: Vec<Syllable> = (0..len)
        .map(|_| {
            let v = rng.gen_range(0..g.n());
            Syllable::new(v, rng.gen_range(1..g.order(v)))
        })
        .collect();
    g.normal_form(&word).expect("valid word")
}

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let g = b.graph();
    let r = cfg.radius;
    let ord = identity_order(g);
    let near = b.ball(r.min(1));
    let ball = b.ball(r);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gammas: Vec<Element> = (0..EQUIVARIANCE_SAMPLES).map(|_| random_element(g, &mut rng, 5)).collect();
    let (rejection, planted) = rejection(b);
    let checks = vec![
        sweep("gamma groupoids", &near, |c, rep| {
            for &j in b.spherical_sets() {
                let phi = gamma_groupoid(b, j, c, None).expect("spherical");
                rep.absorb(phi.validate());
            }
        }),
        rejection,
        sweep("perpendicular level adjacency", &ball, |c, rep| perpendicular(b, c, rep)),
        sweep("ascent sandwich", &ball, |c, rep| sandwich(b, c, &ord, rep)),
        sweep("ascent equivariance", &near, |c, rep| {
            for (v, u) in admissible(b, c) {
                let w = ascent(b, &v, &u, &ord).expect("admissible");
                for gamma in &gammas {
                    let moved = ascent(b, &b.translate_vertex(gamma, &v), &b.translate_vertex(gamma, &u), &ord);
                    rep.check(moved.ok() == Some(b.translate_vertex(gamma, &w)), "equivariance", || {
                        json!({ "v": v, "u": u, "gamma": gamma })
                    });
                }
            }
        }),
        sweep("double ascent", &ball, |c, rep| double_ascent(b, c, &ord, rep)),
        sweep("ascent across adjacency", &ball, |c, rep| across(b, c, &ord, rep)),
        class_order(b, &ord),
    ];
    let info = json!({ "rejection_graph": planted, "equivariance_samples": gammas.len() });
    (checks, info)
}

/// A groupoid on `𝒞({i}, C_*)` whose maps move `i` must fail the
/// shared-vertex condition. Uses an order-preserving automorphism of the
/// graph if one moves a vertex, and a three-vertex path otherwise.
fn rejection(b: &Building) -> (CheckReport, &'static str) {
    let g = b.graph();
    let found = g.automorphisms(true).into_iter().find_map(|p| (0..g.n()).find(|&i| p.apply(i) != i).map(|i| (p, i)));
    let (b, sigma, i, which) = match found {
        Some((p, i)) => (b.clone(), p, i, "input"),
        None => {
            let path = DefiningGraph::cyclic(&[2, 2, 2], &[(0, 1), (1, 2)]).expect("path");
            let swap = VertexPerm::from_images(vec![2, 1, 0]).expect("permutation");
            (Building::new(path), swap, 0, "path")
        }
    };
    let gg = b.graph().clone();
    let n = gg.n();
    let rule = PotentialRule(move |c: &Chamber| if gg.coordinate(&c.0, i) != 0 { sigma.clone() } else { VertexPerm::identity(n) });
    let outcome = extend_groupoid(&b, VertexSet::singleton(i), &Chamber::base(), Arc::new(rule), None);
    let mut rep = CheckReport::new("shared vertex rejection");
    match outcome {
        Err(Error::Validation { condition, .. }) => {
            rep.check(condition == "fixes intersection", "rejected for another reason", || json!({ "condition": condition }))
        }
        Err(e) => rep.check(false, "error", || json!(e.to_string())),
        Ok(_) => rep.check(false, "accepted", || json!({ "vertex": i })),
    }
    (rep, which)
}

/// `Γ`-maps between `i`-adjacent chambers send vertices of types inside `i⊥`
/// to level-adjacent vertices.
fn perpendicular(b: &Building, c1: &Chamber, rep: &mut CheckReport) {
    let g = b.graph();
    for c2 in b.neighbors(c1) {
        let i = b.adjacency(c1, &c2).expect("neighbors");
        for &t in b.spherical_sets().iter().filter(|t| !t.is_empty() && t.is_subset(g.neighbors(i))) {
            let (v1, v2) = (b.vertex_in(c1, t), b.vertex_in(&c2, t));
            rep.check(b.level_adjacent(&v1, &v2), "level adjacent", || json!({ "chambers": [c1, c2], "type": t }));
        }
    }
}

/// `u ⊆ v⇑u ⊆ v ∪ u` by type, inside the common chamber, and `[v] ≺ [v⇑u]`.
fn sandwich(b: &Building, c: &Chamber, ord: &ClassOrder, rep: &mut CheckReport) {
    for (v, u) in admissible(b, c) {
        let w = || json!({ "v": v, "u": u });
        let Ok(x) = ascent(b, &v, &u, ord) else {
            rep.check(false, "undefined", w);
            continue;
        };
        rep.check(u.ty.is_subset(x.ty) && x.ty.is_subset(v.ty.union(u.ty)), "type sandwich", w);
        rep.check(b.contains(c, &x), "common chamber", w);
        let strict = ord.cmp_classes(&b.level_class(&v), &b.level_class(&x)) == Ordering::Less;
        rep.check(strict, "strict increase", w);
    }
}

/// `(v⇑u₁)⇑u₂ = v⇑u₂` for adjacent `i ≺ j` in `t(v)⊥`.
fn double_ascent(b: &Building, c: &Chamber, ord: &ClassOrder, rep: &mut CheckReport) {
    let g = b.graph();
    for &t in b.spherical_sets() {
        let v = b.vertex_in(c, t);
        let perp = g.perp_unchecked(t);
        for i in perp.iter() {
            for j in perp.iter().filter(|&j| g.adjacent(i, j) && ord.precedes(i, j)) {
                let u1 = b.vertex_in(c, VertexSet::singleton(i));
                let u2 = b.vertex_in(c, VertexSet::singleton(j));
                let twice = ascent(b, &v, &u1, ord).and_then(|x| ascent(b, &x, &u2, ord));
                rep.check(twice.ok() == ascent(b, &v, &u2, ord).ok(), "double ascent", || {
                    json!({ "chamber": c, "type": t, "labels": [i, j] })
                });
            }
        }
    }
}

/// For `i`-adjacent chambers: ascent by the wedge agrees, and ascents by
/// rank-1 vertices of a common perpendicular type are level-adjacent.
fn across(b: &Building, c1: &Chamber, ord: &ClassOrder, rep: &mut CheckReport) {
    let g = b.graph();
    for c2 in b.neighbors(c1) {
        let i = b.adjacency(c1, &c2).expect("neighbors");
        let wedge = b.wedge(c1, &c2).expect("adjacent");
        for &t in b.spherical_sets().iter().filter(|t| t.is_subset(g.neighbors(i))) {
            let (v1, v2) = (b.vertex_in(c1, t), b.vertex_in(&c2, t));
            let w = || json!({ "chambers": [c1, c2], "type": t });
            rep.check(ascent(b, &v1, &wedge, ord).ok() == ascent(b, &v2, &wedge, ord).ok(), "wedge ascent", w);
            for j in g.perp_unchecked(t.with(i)).iter() {
                let u1 = b.vertex_in(c1, VertexSet::singleton(j));
                let u2 = b.vertex_in(&c2, VertexSet::singleton(j));
                let ok = match (ascent(b, &v1, &u1, ord), ascent(b, &v2, &u2, ord)) {
                    (Ok(w1), Ok(w2)) => b.level_adjacent(&w1, &w2),
                    _ => false,
                };
                rep.check(ok, "level adjacent ascents", w);
            }
        }
    }
}

/// The type order is the binary order of label positions, total, and
/// strictly refines `≤` on the vertices of one chamber.
fn class_order(b: &Building, ord: &ClassOrder) -> CheckReport {
    let mut rep = CheckReport::new("class order");
    let types = b.spherical_sets();
    let pos: Vec<usize> = {
        let mut p = vec![0; ord.base_order().len()];
        for (k, &l) in ord.base_order().iter().enumerate() {
            p[l] = k;
        }
        p
    };
    let weight = |t: VertexSet| t.iter().map(|m| 1u64 << pos[ord.labels()[m]]).sum::<u64>();
    for &a in types {
        for &c in types {
            let w = || json!({ "types": [a, c] });
            rep.check(ord.cmp_types(a, c) == weight(a).cmp(&weight(c)), "binary weights", w);
            rep.check(ord.cmp_types(a, c) == ord.cmp_types(c, a).reverse(), "antisymmetry", w);
        }
    }
    let vs = b.chamber_vertices(&Chamber::base());
    for u1 in &vs {
        for u2 in &vs {
            if u1 != u2 && b.leq(u1, u2) {
                let lt = ord.cmp_classes(&b.level_class(u1), &b.level_class(u2)).is_lt();
                rep.check(lt, "refines the vertex order", || json!({ "vertices": [u1, u2] }));
            }
        }
    }
    rep
}

fn compare_groupoids(name: &str, got: &ResidueGroupoid, expected: &ResidueGroupoid, rep: &mut CheckReport) {
    let w = || json!({ "check": name, "J": got.j(), "base": got.base() });
    let chambers = got.chambers();
    rep.check(chambers == expected.chambers(), "chambers", w);
    for (c1, c2) in got.adjacent_pairs() {
        let ok = match (got.sigma(&c1, &c2), expected.sigma(&c1, &c2)) {
            (Ok(a), Ok(e)) => a == e,
            _ => false,
        };
        rep.check(ok, "adjacent maps", || json!({ "check": name, "pair": [c1, c2] }));
    }
    for c in &chambers {
        let ok = got.sigma(got.base(), c).ok() == expected.sigma(got.base(), c).ok();
        rep.check(ok, "maps from base", || json!({ "check": name, "to": c }));
    }
}

pub(super) fn run_hierarchy(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let g = b.graph();
    let r = cfg.radius;
    let ord = identity_order(g);
    let h = match build_gamma_hierarchy(b, ord, r) {
        Ok(h) => h,
        Err(e) => return (vec![error_check("hierarchy", e)], Value::Null),
    };
    let mut checks = h.verify(r);
    let near = b.ball(r.min(1));
    let sets: Vec<VertexSet> = b.spherical_sets().to_vec();
    checks.push(sweep("phi from hierarchy", &sets, |&j, rep| {
        let perp = g.perp(j).expect("spherical");
        let radius = (!g.is_spherical(perp)).then_some(r);
        for c in &near {
            match (phi_from_hierarchy(&h, j, c, Some(r)), gamma_groupoid(b, perp, c, radius)) {
                (Ok(phi), Ok(gamma)) => compare_groupoids("phi", &phi, &gamma, rep),
                (Err(e), _) | (_, Err(e)) => rep.violation("error", json!({ "J": j, "error": e.to_string() })),
            }
        }
    }));
    let nonempty: Vec<VertexSet> = sets.iter().copied().filter(|j| !j.is_empty()).collect();
    checks.push(sweep("barpsi of gamma section", &nonempty, |&j, rep| {
        let v = b.vertex_in(&Chamber::base(), j);
        let closed = g.perp_closed(j).expect("spherical");
        let radius = (!g.is_spherical(closed)).then_some(r);
        let psi = gamma_groupoid(b, j, &Chamber::base(), None).expect("spherical");
        match (barpsi_extend(&h, &v, &psi, Some(r)), gamma_groupoid(b, closed, &Chamber::base(), radius)) {
            (Ok(bar), Ok(gamma)) => compare_groupoids("barpsi", &bar, &gamma, rep),
            (Err(e), _) | (_, Err(e)) => rep.violation("error", json!({ "J": j, "error": e.to_string() })),
        }
    }));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut holonomy = CheckReport::new("holonomy");
    let mut sizes = Vec::new();
    for i in 0..g.n() {
        let v = b.vertex_in(&Chamber::base(), VertexSet::singleton(i));
        let closed = g.perp_closed(v.ty).expect("spherical");
        let pool = g.enumerate_ball_in(closed, 2);
        let mut sample: Vec<Element> = pool.choose_multiple(&mut rng, HOLONOMY_SAMPLES).cloned().collect();
        sample.sort();
        match groupoid_holonomy(&h, &v, &sample) {
            Ok(hol) => {
                let identity = vec![VertexPerm::identity(g.n()); hol.chambers.len()];
                let fixed = hol.groupoids.iter().position(|t| *t == identity);
                for (lambda, p) in &hol.images {
                    let ok = fixed.is_some_and(|k| p[k] == k);
                    holonomy.check(ok, "gamma groupoid fixed", || json!({ "vertex": v, "lambda": lambda }));
                }
                sizes.push(json!({ "vertex": i, "groupoids": hol.groupoids.len(), "samples": sample.len() }));
                holonomy.absorb(hol.homomorphism);
            }
            Err(e) => holonomy.violation("error", json!({ "vertex": i, "error": e.to_string() })),
        }
    }
    checks.push(holonomy);
    let info = json!({ "levels": h.levels(), "holonomy": sizes });
    (checks, info)
}
