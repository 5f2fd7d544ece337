//! Generalized polygons, the three Fuchsian cases and their local checks.


use crate::building::{BVertex, Building, Chamber, Cube};
use crate::error::Result;
use crate::graph::DefiningGraph;
use crate::parallel;
use crate::sets::VertexSet;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// A finite simple graph as adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        SimpleGraph { adj }
    }

    pub fn from_defining(g: &DefiningGraph) -> Self {
        SimpleGraph::new(g.n(), &g.edges())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b))).collect()
    }

    fn distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, if any.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n() {
            let mut dist = vec![usize::MAX; self.n()];
            let mut parent = vec![usize::MAX; self.n()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Subdivides every edge into `k` edges.
    pub fn subdivide(&self, k: usize) -> SimpleGraph {
        let mut edges = Vec::new();
        let mut next = self.n();
        for (a, b) in self.edges() {
            let mut prev = a;
            for _ in 1..k {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, b));
        }
        SimpleGraph::new(next, &edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonReport {
    pub is_gen_mgon: bool,
    /// The diameter, when connected.
    pub m: Option<usize>,
    pub girth: Option<usize>,
    /// `(I₁, I₂)` with vertex 0 in `I₁`, when bipartite.
    pub bipartition: Option<(Vec<usize>, Vec<usize>)>,
    /// Degrees on each side, when both sides are regular.
    pub bidegrees: Option<(usize, usize)>,
    pub thick: bool,
    pub reason: Option<String>,
}

pub fn polygon_report(g: &DefiningGraph) -> PolygonReport {
    polygon_report_simple(&SimpleGraph::from_defining(g))
}

pub fn polygon_report_simple(g: &SimpleGraph) -> PolygonReport {
    let n = g.n();
    let thick = n > 0 && (0..n).all(|v| g.neighbors(v).len() >= 3);
    let mut report =
        PolygonReport { is_gen_mgon: false, m: None, girth: g.girth(), bipartition: None, bidegrees: None, thick, reason: None };
    if n == 0 {
        report.reason = Some("empty graph".into());
        return report;
    }
    let dist: Vec<Vec<usize>> = (0..n).map(|s| g.distances(s)).collect();
    if dist[0].contains(&usize::MAX) {
        report.reason = Some("disconnected".into());
        return report;
    }
    report.m = dist.iter().flatten().copied().max();
    let side: Vec<bool> = dist[0].iter().map(|d| d % 2 == 1).collect();
    if g.edges().iter().any(|&(a, b)| side[a] == side[b]) {
        report.reason = Some("not bipartite".into());
        return report;
    }
    let i1: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let i2: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    let regular = |vs: &[usize]| -> Option<usize> {
        let d = g.neighbors(*vs.first()?).len();
        vs.iter().all(|&v| g.neighbors(v).len() == d).then_some(d)
    };
    report.bidegrees = regular(&i1).zip(regular(&i2));
    report.bipartition = Some((i1, i2));
    let m = report.m.expect("connected");
    match report.girth {
        Some(gi) if m >= 2 && gi == 2 * m => report.is_gen_mgon = true,
        Some(gi) => report.reason = Some(format!("girth {gi} is not twice the diameter {m}")),
        None => report.reason = Some("acyclic".into()),
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
}

/// `(d₁, d₂, p₁, p₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub d1: usize,
    pub d2: usize,
    pub p1: usize,
    pub p2: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: Option<Case>,
    pub polygon: PolygonReport,
    pub parameters: Option<Parameters>,
    pub reason: Option<String>,
    pub link_check: Option<LinkReport>,
}

pub fn classify_case(g: &DefiningGraph) -> CaseReport {
    let polygon = polygon_report(g);
    let mut report = CaseReport { case: None, polygon: polygon.clone(), parameters: None, reason: None, link_check: None };
    if !polygon.is_gen_mgon {
        report.reason = Some(format!("not a generalized polygon: {}", polygon.reason.unwrap_or_default()));
        return report;
    }
    let m = polygon.m.expect("connected");
    if m < 3 {
        report.reason = Some(format!("gonality {m} is below 3"));
        return report;
    }
    let Some((d1, d2)) = polygon.bidegrees else {
        report.reason = Some("degrees are not constant on each side".into());
        return report;
    };
    let (i1, i2) = polygon.bipartition.expect("bipartite");
    let uniform = |vs: &[usize]| -> Option<usize> {
        let p = g.order(vs[0]) as usize;
        vs.iter().all(|&v| g.order(v) as usize == p).then_some(p)
    };
    let (Some(p1), Some(p2)) = (uniform(&i1), uniform(&i2)) else {
        report.reason = Some("group orders are not constant on each side".into());
        return report;
    };
    let params = Parameters { d1, d2, p1, p2 };
    report.parameters = Some(params);
    report.case = if d1 > 2 && d2 > 2 && p1 > 2 && p2 > 2 {
        Some(Case::I)
    } else if p1 == 2 && p2 == 2 && d1 > 2 && d2 > 2 {
        Some(Case::II)
    } else if d1 == 2 && d2 == 2 && p1 > 2 && p2 > 2 {
        Some(Case::III)
    } else {
        report.reason = Some("parameters match none of the three cases".into());
        None
    };
    report
}

/// [`classify_case`] plus [`verify_links`] on the radius ball when a case applies.
pub fn classify_with_links(g: &DefiningGraph, radius: usize) -> CaseReport {
    let mut report = classify_case(g);
    if report.case.is_some() {
        report.link_check = Some(verify_links(&Building::new(g.clone()), radius));
    }
    report
}

/// Link checks for one rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RankSummary {
    pub vertices: usize,
    pub passed: usize,
    /// Observed shapes: `m` for rank 0, side sizes of `K_{a,b}` otherwise.
    pub shapes: BTreeSet<(usize, usize)>,
    pub failures: Vec<BVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub radius: usize,
    pub ranks: BTreeMap<usize, RankSummary>,
    pub passed: bool,
}

/// The link of a building vertex: its incident edges, joined when they span a square.
pub fn link(b: &Building, v: &BVertex) -> (Vec<Cube>, SimpleGraph) {
    let edges = b.edges_at(v);
    let mut pairs = Vec::new();
    for a in 0..edges.len() {
        for c in a + 1..edges.len() {
            if b.forms_corner(v, &edges[a], &edges[c]) {
                pairs.push((a, c));
            }
        }
    }
    let graph = SimpleGraph::new(edges.len(), &pairs);
    (edges, graph)
}

/// Complete bipartite side sizes, if the graph is complete bipartite.
fn complete_bipartite(g: &SimpleGraph) -> Option<(usize, usize)> {
    let report = polygon_report_simple(g);
    let (a, b) = report.bipartition?;
    let full = a.iter().all(|&x| g.neighbors(x).len() == b.len()) && b.iter().all(|&y| g.neighbors(y).len() == a.len());
    full.then(|| (a.len().min(b.len()), a.len().max(b.len())))
}

/// Checks that rank-0 links are copies of the defining graph and higher-rank
/// links are complete bipartite, for every vertex meeting the radius ball.
pub fn verify_links(b: &Building, radius: usize) -> LinkReport {
    let gr = b.graph();
    let target = polygon_report(gr);
    let vertices = b.vertices_of(&b.ball(radius));
    let results = parallel::map(&vertices, |v| {
        let (edges, lk) = link(b, v);
        let shape = if v.rank() == 0 {
            // The edge to the type-{i} vertex corresponds to i.
            let index: Vec<usize> = edges.iter().map(|e| e.hi.iter().next().expect("rank one")).collect();
            let natural = lk.edges().iter().all(|&(x, y)| gr.adjacent(index[x], index[y]))
                && lk.edges().len() == gr.edges().len()
                && edges.len() == gr.n();
            let rep = polygon_report_simple(&lk);
            (natural && rep.is_gen_mgon && rep.m == target.m).then(|| (rep.m.unwrap_or(0), 0))
        } else {
            complete_bipartite(&lk)
        };
        (v.clone(), shape)
    });
    let mut ranks: BTreeMap<usize, RankSummary> = BTreeMap::new();
    for (v, shape) in results {
        let s = ranks.entry(v.rank()).or_default();
        s.vertices += 1;
        match shape {
            Some(x) => {
                s.passed += 1;
                s.shapes.insert(x);
            }
            None => s.failures.push(v),
        }
    }
    let passed = ranks.values().all(|s| s.failures.is_empty());
    LinkReport { radius, ranks, passed }
}

/// Number of Fuchsian chambers containing each side, grouped by side type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceReport {
    pub case: Case,
    pub cells: usize,
    /// `((lo, hi), multiplicities)` for each side type `lo ⊂ hi` seen.
    pub sides: Vec<((VertexSet, VertexSet), BTreeSet<usize>)>,
}

impl IncidenceReport {
    /// All multiplicities seen.
    pub fn multiplicities(&self) -> BTreeSet<usize> {
        self.sides.iter().flat_map(|(_, m)| m.iter().copied()).collect()
    }
}

/// A Fuchsian chamber, named by its generating cube or vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Cell {
    Square(Cube),
    Around(BVertex),
}

fn cell_squares(b: &Building, cell: &Cell) -> Vec<Cube> {
    match cell {
        Cell::Square(q) => vec![q.clone()],
        Cell::Around(v) if v.rank() == 2 => b
            .chambers_containing(v)
            .into_iter()
            .map(|c| Cube { rep: c.0, lo: VertexSet::EMPTY, hi: v.ty })
            .collect(),
        Cell::Around(v) => b.chamber_cubes_of_dim(&Chamber(v.rep.clone()), 2).into_iter().filter(|q| q.lo.is_empty()).collect(),
    }
}

/// Edges lying in exactly one square of the cell.
fn boundary(b: &Building, cell: &Cell) -> BTreeSet<Cube> {
    let mut count: HashMap<Cube, usize> = HashMap::new();
    for q in cell_squares(b, cell) {
        for e in b.cube_edges(&q) {
            *count.entry(e).or_default() += 1;
        }
    }
    count.into_iter().filter(|(_, k)| *k == 1).map(|(e, _)| e).collect()
}

fn cells_near(b: &Building, case: Case, chambers: &[Chamber]) -> BTreeSet<Cell> {
    let mut out = BTreeSet::new();
    for c in chambers {
        match case {
            Case::I => out.extend(b.chamber_cubes_of_dim(c, 2).into_iter().filter(|q| q.lo.is_empty()).map(Cell::Square)),
            Case::II => out.extend(b.chamber_vertices(c).into_iter().filter(|v| v.rank() == 2).map(Cell::Around)),
            Case::III => {
                out.insert(Cell::Around(b.center(c)));
            }
        }
    }
    out
}

/// Counts Fuchsian chambers on each side of the chambers meeting the radius ball.
pub fn edge_cell_incidence(b: &Building, case: Case, radius: usize) -> Result<IncidenceReport> {
    let cells: Vec<Cell> = cells_near(b, case, &b.ball(radius)).into_iter().collect();
    let sides: BTreeSet<Cube> = cells.iter().flat_map(|c| boundary(b, c)).collect();
    let sides: Vec<Cube> = sides.into_iter().collect();
    let counts = parallel::map(&sides, |e| {
        let top = b.cube_extremes(e).1;
        let candidates = cells_near(b, case, &b.chambers_containing(&top));
        let k = candidates.iter().filter(|c| boundary(b, c).contains(e)).count();
        ((e.lo, e.hi), k)
    });
    let mut grouped: BTreeMap<(VertexSet, VertexSet), BTreeSet<usize>> = BTreeMap::new();
    for (key, k) in counts {
        grouped.entry(key).or_default().insert(k);
    }
    Ok(IncidenceReport { case, cells: cells.len(), sides: grouped.into_iter().collect() })
}

/// Whether only the identity fixes the closed star of every vertex pointwise.
pub fn star_rigid(g: &DefiningGraph) -> bool {
    (0..g.n()).all(|v| g.automorphisms_fixing(g.star(v), false).len() == 1)
}

pub fn has_induced_4cycle(g: &DefiningGraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let vs = [a, b, c, d];
                    let degrees: Vec<usize> = vs.iter().map(|&x| vs.iter().filter(|&&y| g.adjacent(x, y)).count()).collect();
                    if degrees.iter().all(|&k| k == 2) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
