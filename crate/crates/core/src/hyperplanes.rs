//! Edge labels, hyperplanes, and the special-action check.

use crate::building::{BVertex, Building, Chamber, Cube};
use crate::error::{domain, Result};
use crate::graph::DefiningGraph;
use crate::parallel;
use crate::report::{Violation, MAX_WITNESSES};
use crate::word::Element;
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// The `i`-hyperplane dual to the edges of the residue `γΓ_{i⊥}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HyperplaneId {
    pub rep: Element,
    pub label: usize,
}

/// An edge with an orientation; `up` points toward the larger type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrientedEdge {
    pub edge: Cube,
    pub up: bool,
}

impl OrientedEdge {
    pub fn initial(&self, b: &Building) -> BVertex {
        let (lo, hi) = b.cube_extremes(&self.edge);
        if self.up {
            lo
        } else {
            hi
        }
    }

    pub fn terminal(&self, b: &Building) -> BVertex {
        let (lo, hi) = b.cube_extremes(&self.edge);
        if self.up {
            hi
        } else {
            lo
        }
    }
}

impl Building {
    pub fn edge_label(&self, e: &Cube) -> Result<usize> {
        match e.hi.difference(e.lo).single() {
            Some(i) => Ok(i),
            None => domain(format!("cube of dimension {} is not an edge", e.dim())),
        }
    }

    pub fn hyperplane_of(&self, e: &Cube) -> Result<HyperplaneId> {
        let i = self.edge_label(e)?;
        let g = self.graph();
        Ok(HyperplaneId { rep: g.coset_min_rep(&e.rep, g.neighbors(i)), label: i })
    }

    pub fn parallel(&self, e1: &Cube, e2: &Cube) -> Result<bool> {
        Ok(self.hyperplane_of(e1)? == self.hyperplane_of(e2)?)
    }

    /// Hyperplanes crossing `E⁻(v)`.
    pub fn hyperplanes_below(&self, v: &BVertex) -> BTreeSet<HyperplaneId> {
        self.lower_edges(v)
            .iter()
            .map(|e| self.hyperplane_of(e).expect("lower edges are edges"))
            .collect()
    }

    pub fn translate_hyperplane(&self, g: &Element, h: &HyperplaneId) -> HyperplaneId {
        let gr = self.graph();
        HyperplaneId { rep: gr.coset_min_rep(&gr.multiply(g, &h.rep), gr.neighbors(h.label)), label: h.label }
    }

    /// Oriented edges with initial vertex `v`.
    pub fn oriented_edges_at(&self, v: &BVertex) -> Vec<OrientedEdge> {
        let mut out: Vec<OrientedEdge> =
            self.upper_edges(v).into_iter().map(|edge| OrientedEdge { edge, up: true }).collect();
        out.extend(self.lower_edges(v).into_iter().map(|edge| OrientedEdge { edge, up: false }));
        out
    }

    /// Edges dual to `h` in chambers within `radius` of `C_{h.rep}`.
    pub fn dual_edges(&self, h: &HyperplaneId, radius: Option<usize>) -> Result<Vec<Cube>> {
        let g = self.graph();
        let perp = g.neighbors(h.label);
        let mut out = BTreeSet::new();
        for c in self.residue(perp, &Chamber(h.rep.clone()), radius)? {
            for lo in self.spherical_sets().iter().filter(|s| s.is_subset(perp)) {
                out.insert(Cube { rep: g.coset_min_rep(&c.0, *lo), lo: *lo, hi: lo.with(h.label) });
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// Classes of the equivalence generated by opposite edges of 2-cubes in the
/// given chambers; each class is sorted, classes are sorted.
pub fn elementary_parallel_classes(b: &Building, chambers: &[Chamber]) -> Vec<Vec<Cube>> {
    let mut edges: Vec<Cube> = chambers.iter().flat_map(|c| b.chamber_cubes_of_dim(c, 1)).collect();
    edges.sort();
    edges.dedup();
    let index: HashMap<&Cube, usize> = edges.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let g = b.graph();
    for c in chambers {
        for sq in b.chamber_cubes_of_dim(c, 2) {
            let free: Vec<usize> = sq.hi.difference(sq.lo).iter().collect();
            for (a, o) in [(free[0], free[1]), (free[1], free[0])] {
                // The two a-edges of the square: at lo and at lo+o.
                let e1 = Cube { rep: sq.rep.clone(), lo: sq.lo, hi: sq.lo.with(a) };
                let top = sq.lo.with(o);
                let e2 = Cube { rep: g.coset_min_rep(&sq.rep, top), lo: top, hi: top.with(a) };
                let (x, y) = (find(&mut parent, index[&e1]), find(&mut parent, index[&e2]));
                parent[x] = y;
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    for k in 0..edges.len() {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().push(edges[k].clone());
    }
    let mut out: Vec<Vec<Cube>> = classes.into_values().collect();
    out.sort();
    out
}

/// A subgroup of `Γ` acting by left multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Subgroup {
    Trivial,
    Whole,
    /// `Γ̂`, the kernel of `Γ → ∏ G_i`.
    Kernel,
    Generated(Vec<Element>),
}

impl Subgroup {
    pub fn contains(&self, g: &DefiningGraph, a: &Element) -> Option<bool> {
        match self {
            Subgroup::Trivial => Some(a.is_identity()),
            Subgroup::Whole => Some(true),
            Subgroup::Kernel => Some((0..g.n()).all(|i| g.coordinate(a, i) == 0)),
            Subgroup::Generated(_) => None,
        }
    }

    /// Elements of syllable length at most `max_len`; generated subgroups are
    /// explored through products that stay within the length bound.
    pub fn elements(&self, g: &DefiningGraph, max_len: usize) -> Vec<Element> {
        match self {
            Subgroup::Trivial => vec![Element::identity()],
            Subgroup::Whole => g.enumerate_ball(max_len),
            Subgroup::Kernel => g
                .enumerate_ball(max_len)
                .into_iter()
                .filter(|a| self.contains(g, a) == Some(true))
                .collect(),
            Subgroup::Generated(gens) => {
                let mut letters: Vec<Element> = gens.clone();
                letters.extend(gens.iter().map(|x| g.invert(x)));
                let mut seen: BTreeSet<Element> = [Element::identity()].into();
                let mut frontier = vec![Element::identity()];
                while !frontier.is_empty() {
                    let mut next = Vec::new();
                    for x in &frontier {
                        for s in &letters {
                            let y = g.multiply(x, s);
                            if y.len() <= max_len && seen.insert(y.clone()) {
                                next.push(y);
                            }
                        }
                    }
                    frontier = next;
                }
                let mut out: Vec<Element> = seen.into_iter().collect();
                out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialBox {
    pub subgroup: String,
    pub element_length: usize,
    pub ball_radius: usize,
    pub elements: usize,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialReport {
    #[serde(rename = "box")]
    pub search_box: SpecialBox,
    pub configurations_checked: u64,
    pub clean_violations: u64,
    pub nice_violations: u64,
    pub violations: Vec<Violation>,
}

impl SpecialReport {
    pub fn passed(&self) -> bool {
        self.clean_violations == 0 && self.nice_violations == 0
    }
}

#[derive(Default)]
struct Tally {
    configs: u64,
    count: u64,
    witnesses: Vec<Violation>,
}

impl Tally {
    fn hit(&mut self, kind: &str, witness: impl FnOnce() -> serde_json::Value) {
        self.count += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Violation { kind: kind.into(), witness: witness() });
        }
    }
}

struct VertexData {
    vertex: BVertex,
    edges: Vec<OrientedEdge>,
    ids: Vec<HyperplaneId>,
}

/// Checks cleanliness and niceness of the subgroup's action over the box of
/// elements of length `element_length` and vertices of chambers within
/// `ball_radius` of `C_*`.
pub fn check_special(b: &Building, subgroup: &Subgroup, element_length: usize, ball_radius: usize) -> SpecialReport {
    let g = b.graph();
    let elements = subgroup.elements(g, element_length);
    let vertices = b.vertices_of(&b.ball(ball_radius));
    let data: Vec<VertexData> = parallel::map(&vertices, |v| {
        let edges = b.oriented_edges_at(v);
        let ids = edges.iter().map(|e| b.hyperplane_of(&e.edge).expect("edge")).collect();
        VertexData { vertex: v.clone(), edges, ids }
    });

    // Cleanliness: g·e1 and e2 never lie in the same oriented class. The same
    // pass collects the hyperplane pairs realised by corners for niceness.
    type Source = (usize, usize, usize, usize);
    let rows: Vec<usize> = (0..data.len()).collect();
    let passes: Vec<(Tally, Vec<((HyperplaneId, HyperplaneId), Source)>)> = parallel::map(&rows, |&x| {
        let d = &data[x];
        let mut t = Tally::default();
        let mut keys = Vec::new();
        let corners: Vec<(usize, usize)> = (0..d.edges.len())
            .flat_map(|k| (0..d.edges.len()).map(move |l| (k, l)))
            .filter(|&(k, l)| k != l && b.forms_corner(&d.vertex, &d.edges[k].edge, &d.edges[l].edge))
            .collect();
        for (gi, gamma) in elements.iter().enumerate() {
            let moved: Vec<HyperplaneId> = d.ids.iter().map(|h| b.translate_hyperplane(gamma, h)).collect();
            for k in 0..d.edges.len() {
                for l in 0..d.edges.len() {
                    if k == l {
                        continue;
                    }
                    t.configs += 1;
                    if d.edges[k].up == d.edges[l].up && moved[k] == d.ids[l] {
                        t.hit("clean", || json!({"vertex": d.vertex, "e1": d.edges[k], "e2": d.edges[l], "g": gamma}));
                    }
                }
            }
            for &(k, l) in &corners {
                keys.push(((moved[k].clone(), d.ids[l].clone()), (x, k, l, gi)));
            }
        }
        (t, keys)
    });
    let mut clean = Vec::with_capacity(passes.len());
    let mut corner_map: HashMap<(HyperplaneId, HyperplaneId), Source> = HashMap::new();
    let mut corner_configs = 0u64;
    for (t, keys) in passes {
        clean.push(t);
        for (key, source) in keys {
            corner_configs += 1;
            corner_map.entry(key).or_insert(source);
        }
    }
    let source_json = |&(x, k, l, gi): &Source| {
        let d = &data[x];
        json!({"vertex": d.vertex, "e1": d.edges[k].edge, "e2": d.edges[l].edge, "g": elements[gi]})
    };
    let nice: Vec<Tally> = parallel::map(&data, |d| {
        let mut t = Tally::default();
        for k in 0..d.edges.len() {
            for l in 0..d.edges.len() {
                if k == l || d.edges[k].edge == d.edges[l].edge {
                    continue;
                }
                t.configs += 1;
                let key = (d.ids[k].clone(), d.ids[l].clone());
                if let Some(source) = corner_map.get(&key) {
                    if !b.forms_corner(&d.vertex, &d.edges[k].edge, &d.edges[l].edge) {
                        t.hit("nice", || json!({"corner": source_json(source), "vertex": d.vertex, "e1": d.edges[k].edge, "e2": d.edges[l].edge}));
                    }
                }
            }
        }
        t
    });

    let mut configurations_checked = corner_configs;
    let mut violations = Vec::new();
    let clean_violations: u64 = clean.iter().map(|t| t.count).sum();
    let nice_violations: u64 = nice.iter().map(|t| t.count).sum();
    for t in clean.into_iter().chain(nice) {
        configurations_checked += t.configs;
        violations.extend(t.witnesses);
    }
    violations.truncate(MAX_WITNESSES);
    SpecialReport {
        search_box: SpecialBox {
            subgroup: match subgroup {
                Subgroup::Trivial => "trivial".into(),
                Subgroup::Whole => "whole".into(),
                Subgroup::Kernel => "kernel".into(),
                Subgroup::Generated(gens) => format!("generated by {} elements", gens.len()),
            },
            element_length,
            ball_radius,
            elements: elements.len(),
            vertices: vertices.len(),
        },
        configurations_checked,
        clean_violations,
        nice_violations,
        violations,
    }
}
