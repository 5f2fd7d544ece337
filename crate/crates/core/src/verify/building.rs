use super::{sweep, VerifyConfig};
use crate::building::{BVertex, Building, Chamber};
use crate::report::CheckReport;
use crate::sets::VertexSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// Above this many vertices of `I`, subset pairs are sampled.
const SUBSET_PAIRS: usize = 256;

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let r = cfg.radius;
    let ball = b.ball(r);
    let near = b.ball(r.min(1));
    let vertices = b.vertices_of(&ball);
    let up = upward_closure(b, &vertices);
    let checks = vec![
        sweep("chamber intersection", &ball, |c1, rep| intersections(b, c1, &ball, rep)),
        residue_intersections(b, &near, r, cfg.seed),
        sweep("product structure", &near, |c, rep| product_structure(b, c, r, rep)),
        sweep("vertex order", &vertices, |u, rep| vertex_order(b, u, &vertices, &up, rep)),
        sweep("upward closed", &ball, |c, rep| upward_closed(b, c, &up, rep)),
        level_classes(b, r.min(2)),
        single_chamber(b, &vertices),
    ];
    let info = json!({ "chambers": ball.len(), "vertices": vertices.len() });
    (checks, info)
}

/// Pairwise intersections against explicit vertex-set intersection, with
/// wedge and adjacency read off the minimal type.
fn intersections(b: &Building, c1: &Chamber, ball: &[Chamber], rep: &mut CheckReport) {
    let g = b.graph();
    let v1: HashSet<BVertex> = b.chamber_vertices(c1).into_iter().collect();
    for c2 in ball {
        let v2: HashSet<BVertex> = b.chamber_vertices(c2).into_iter().collect();
        let common: BTreeSet<BVertex> = v1.intersection(&v2).cloned().collect();
        let delta = b.delta(c1, c2);
        let containing: Vec<VertexSet> =
            b.spherical_sets().iter().copied().filter(|&j| g.in_parabolic(&delta, j)).collect();
        let minimal: Vec<VertexSet> =
            containing.iter().copied().filter(|&j| containing.iter().all(|&k| j.is_subset(k))).collect();
        let got = b.chamber_intersection(c1, c2);
        let w = || json!({ "chambers": [c1, c2] });
        rep.check(got.is_some() == !common.is_empty(), "nonempty", w);
        rep.check(common.is_empty() == containing.is_empty(), "spherical criterion", w);
        let Some(x) = got else { continue };
        rep.check(minimal == vec![x.jmin], "unique minimal type", w);
        let shared: BTreeSet<BVertex> = x.shared.iter().cloned().collect();
        rep.check(shared == common, "shared vertices", w);
        let by_type: BTreeSet<BVertex> = v1.iter().filter(|v| x.jmin.is_subset(v.ty)).cloned().collect();
        rep.check(by_type == common, "shared types", w);
        let wedge = b.wedge(c1, c2).expect("intersecting");
        rep.check(common.contains(&wedge) && common.iter().all(|v| b.leq(&wedge, v)), "wedge is minimal", w);
        let adj = b.adjacency(c1, c2);
        rep.check(adj == (wedge.rank() == 1).then(|| wedge.ty.single().expect("rank one")), "adjacency by wedge", w);
    }
}

/// Truncated residues satisfy `𝒞(J₁,C) ∩ 𝒞(J₂,C) = 𝒞(J₁∩J₂,C)` exactly.
fn residue_intersections(b: &Building, near: &[Chamber], r: usize, seed: u64) -> CheckReport {
    let g = b.graph();
    let all: Vec<VertexSet> = g.all().subsets().collect();
    let pairs: Vec<(VertexSet, VertexSet)> = if all.len() * all.len() <= SUBSET_PAIRS {
        all.iter().flat_map(|&a| all.iter().map(move |&c| (a, c))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SUBSET_PAIRS)
            .map(|_| (*all.choose(&mut rng).expect("nonempty"), *all.choose(&mut rng).expect("nonempty")))
            .collect()
    };
    let residues: HashMap<VertexSet, Vec<Vec<Chamber>>> = all
        .iter()
        .filter(|j| pairs.iter().any(|(a, c)| *a == **j || *c == **j || a.intersection(*c) == **j))
        .map(|&j| (j, near.iter().map(|c| b.residue(j, c, Some(r)).expect("subset of I")).collect()))
        .collect();
    sweep("residue intersection", &pairs, |&(j1, j2), rep| {
        for k in 0..near.len() {
            let a: BTreeSet<&Chamber> = residues[&j1][k].iter().collect();
            let c: BTreeSet<&Chamber> = residues[&j2][k].iter().collect();
            let meet: BTreeSet<&Chamber> = a.intersection(&c).copied().collect();
            let expected: BTreeSet<&Chamber> = residues[&j1.intersection(j2)][k].iter().collect();
            rep.check(meet == expected, "intersection", || json!({ "chamber": near[k], "J1": j1, "J2": j2 }));
            for d in &residues[&j1][k] {
                rep.check(b.residue_contains(j1, &near[k], d), "membership", || json!({ "chamber": d, "J": j1 }));
            }
        }
    })
}

/// Sections, adjacency and residue properties of `β`, plus bijectivity.
fn product_structure(b: &Building, c: &Chamber, r: usize, rep: &mut CheckReport) {
    let g = b.graph();
    for &j in b.spherical_sets() {
        let perp = g.perp(j).expect("spherical");
        let closed = g.perp_closed(j).expect("spherical");
        let r1 = b.residue(j, c, None).expect("spherical");
        let r2 = b.residue(perp, c, Some(r)).expect("subset of I");
        let beta = |x: &Chamber, y: &Chamber| b.product_map(j, c, x, y).expect("in residues");
        let w = |x: &Chamber, y: &Chamber| json!({ "chamber": c, "J": j, "pair": [x, y] });
        let mut image = BTreeMap::new();
        for x in &r1 {
            rep.check(beta(x, c) == *x, "first section", || w(x, c));
            for y in &r2 {
                let z = beta(x, y);
                rep.check(b.residue_contains(closed, c, &z), "image in residue", || w(x, y));
                rep.check(b.split(j, c, &z).ok() == Some((x.clone(), y.clone())), "split", || w(x, y));
                image.insert(z, (x, y));
            }
        }
        for y in &r2 {
            rep.check(beta(c, y) == *y, "second section", || w(c, y));
        }
        rep.check(image.len() == r1.len() * r2.len(), "injective", || json!({ "chamber": c, "J": j }));
        let pairs: Vec<(&Chamber, &Chamber)> = image.values().copied().collect();
        for &(x1, y1) in &pairs {
            for &(x2, y2) in &pairs {
                let expected = if y1 == y2 {
                    b.adjacency(x1, x2)
                } else if x1 == x2 {
                    b.adjacency(y1, y2)
                } else {
                    None
                };
                rep.check(b.adjacency(&beta(x1, y1), &beta(x2, y2)) == expected, "adjacency", || {
                    json!({ "chamber": c, "J": j, "pairs": [[x1, y1], [x2, y2]] })
                });
            }
        }
        for y in &r2 {
            let row: BTreeSet<Chamber> = r1.iter().map(|x| beta(x, y)).collect();
            let res: BTreeSet<Chamber> = b.residue(j, y, None).expect("spherical").into_iter().collect();
            rep.check(row == res, "rows are J-residues", || w(c, y));
        }
        for x in &r1 {
            let col: BTreeSet<Chamber> = r2.iter().map(|y| beta(x, y)).collect();
            let res: BTreeSet<Chamber> = b.residue(perp, x, Some(r)).expect("subset of I").into_iter().collect();
            rep.check(col == res, "columns are perpendicular residues", || w(x, c));
        }
    }
}

/// Tops of cubes with bottom `u` in the chambers containing `u`.
fn upward_closure(b: &Building, vertices: &[BVertex]) -> HashMap<BVertex, BTreeMap<BVertex, Vec<VertexSet>>> {
    let ups = crate::parallel::map(vertices, |u| {
        let mut out: BTreeMap<BVertex, Vec<VertexSet>> = BTreeMap::new();
        for c in b.chambers_containing(u) {
            for q in b.chamber_cubes(&c).into_iter().filter(|q| q.lo == u.ty && q.rep == u.rep) {
                let top = b.cube_extremes(&q).1;
                out.insert(top, b.cube_vertices(&q).iter().map(|v| v.ty).collect());
            }
        }
        (u.clone(), out)
    });
    ups.into_iter().collect()
}

/// `u ≤ v` iff a cube of dimension `rk v − rk u` contains both, and that cube
/// meets every intermediate type.
fn vertex_order(
    b: &Building,
    u: &BVertex,
    vertices: &[BVertex],
    up: &HashMap<BVertex, BTreeMap<BVertex, Vec<VertexSet>>>,
    rep: &mut CheckReport,
) {
    let tops = &up[u];
    for v in vertices {
        let cube = tops.get(v);
        rep.check(b.leq(u, v) == cube.is_some(), "order by cubes", || json!({ "u": u, "v": v }));
        if let Some(types) = cube {
            let between: BTreeSet<VertexSet> = v.ty.difference(u.ty).subsets().map(|s| u.ty.union(s)).collect();
            let seen: BTreeSet<VertexSet> = types.iter().copied().collect();
            rep.check(seen == between, "intermediate types", || json!({ "u": u, "v": v }));
        }
    }
}

/// `u ≤ v` and `u ∈ C` imply `v ∈ C`.
fn upward_closed(b: &Building, c: &Chamber, up: &HashMap<BVertex, BTreeMap<BVertex, Vec<VertexSet>>>, rep: &mut CheckReport) {
    for u in b.chamber_vertices(c) {
        for v in up[&u].keys() {
            rep.check(b.contains(c, v), "upward closed", || json!({ "chamber": c, "u": u, "v": v }));
        }
    }
}

/// The closure of level-adjacency on a ball against class identifiers, with
/// level-adjacency itself read off explicit adjacent chambers.
fn level_classes(b: &Building, r: usize) -> CheckReport {
    let g = b.graph();
    let vs = b.vertices_of(&b.ball(r));
    let index: HashMap<&BVertex, usize> = vs.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let edges: Vec<Vec<(usize, bool, bool)>> = crate::parallel::map(&vs, |va| {
        let perp = g.perp(va.ty).expect("spherical");
        let mut out = Vec::new();
        for x in b.chambers_containing(va) {
            for y in b.neighbors(&x) {
                let i = b.adjacency(&x, &y).expect("neighbors");
                let vc = b.vertex_in(&y, va.ty);
                if let Some(&c) = index.get(&vc) {
                    out.push((c, perp.contains(i) && vc != *va, b.level_adjacent(va, &vc)));
                }
            }
        }
        out
    });
    let mut rep = CheckReport::new("level classes");
    let mut adjacent: HashSet<(usize, usize)> = HashSet::new();
    for (a, list) in edges.iter().enumerate() {
        for &(c, _, _) in list.iter().filter(|e| e.1) {
            adjacent.insert((a, c));
        }
    }
    let mut parent: Vec<usize> = (0..vs.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, list) in edges.iter().enumerate() {
        for &(c, _, claimed) in list {
            rep.check(claimed == adjacent.contains(&(a, c)), "level adjacency", || json!({ "vertices": [vs[a], vs[c]] }));
        }
    }
    for &(a, c) in &adjacent {
        let (x, y) = (find(&mut parent, a), find(&mut parent, c));
        parent[x] = y;
    }
    let roots: Vec<usize> = (0..vs.len()).map(|k| find(&mut parent, k)).collect();
    let mut owner: HashMap<usize, crate::building::LevelClassId> = HashMap::new();
    let mut seen: HashMap<crate::building::LevelClassId, usize> = HashMap::new();
    for (k, v) in vs.iter().enumerate() {
        let id = b.level_class(v);
        let o = owner.entry(roots[k]).or_insert_with(|| id.clone()).clone();
        rep.check(o == id, "closure within one class", || json!({ "vertex": v }));
        let s = *seen.entry(id).or_insert(roots[k]);
        rep.check(s == roots[k], "class within one closure", || json!({ "vertex": v }));
    }
    rep
}

/// For `v₁ ≈ v₂` of type `J` and `C₁ ∋ v₁`, exactly one chamber of `𝒞(v₂)`
/// lies in `𝒞(J⊥, C₁)`.
fn single_chamber(b: &Building, vertices: &[BVertex]) -> CheckReport {
    let g = b.graph();
    let mut classes: BTreeMap<crate::building::LevelClassId, Vec<&BVertex>> = BTreeMap::new();
    for v in vertices {
        classes.entry(b.level_class(v)).or_default().push(v);
    }
    let pairs: Vec<(&BVertex, &BVertex)> =
        classes.values().flat_map(|vs| vs.iter().flat_map(move |a| vs.iter().map(move |c| (*a, *c)))).collect();
    sweep("single chamber", &pairs, |&(v1, v2), rep| {
        let perp = g.perp(v1.ty).expect("spherical");
        let targets = b.chambers_containing(v2);
        for c1 in b.chambers_containing(v1) {
            let hits = targets.iter().filter(|d| g.in_parabolic(&b.delta(&c1, d), perp)).count();
            rep.check(hits == 1, "single chamber", || json!({ "vertices": [v1, v2], "chamber": c1, "hits": hits }));
        }
    })
}
