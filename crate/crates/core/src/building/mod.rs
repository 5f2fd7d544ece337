//! The right-angled building `Δ`, computed lazily from coset arithmetic.
//!
//! Every object carries an exact algebraic identity (a minimal coset
//! representative plus type data), so nothing here depends on how much of the
//! building has been enumerated.

mod export;

pub use export::Truncation;

use crate::error::{domain, input, Result};
use crate::graph::DefiningGraph;
use crate::sets::VertexSet;
use crate::word::{Element, Syllable};
use serde::Serialize;
use std::sync::Arc;

/// The chamber `C_γ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Chamber(pub Element);

impl Chamber {
    /// The base chamber `C_*`.
    pub fn base() -> Self {
        Chamber(Element::identity())
    }

    pub fn label(&self) -> &Element {
        &self.0
    }
}

/// A vertex `[γ, J]`: `rep` is the shortest element of `γΓ_J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BVertex {
    pub rep: Element,
    #[serde(rename = "type")]
    pub ty: VertexSet,
}

impl BVertex {
    pub fn rank(&self) -> usize {
        self.ty.len()
    }
}

/// The cube of chamber `C_rep` spanned by the nested spherical sets `lo ⊆ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cube {
    pub rep: Element,
    pub lo: VertexSet,
    pub hi: VertexSet,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.hi.difference(self.lo).len()
    }
}

/// A gallery stored as its start chamber and the syllables `γ_{k-1}⁻¹γ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gallery {
    pub start: Chamber,
    pub letters: Vec<Syllable>,
}

/// The level-equivalence class `(γΓ_{J⊥̲}, J)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LevelClassId {
    pub rep: Element,
    #[serde(rename = "type")]
    pub ty: VertexSet,
}

/// Nonempty intersection of two chambers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Intersection {
    pub jmin: VertexSet,
    pub shared: Vec<BVertex>,
}

struct Inner {
    graph: DefiningGraph,
    spherical: Vec<VertexSet>,
}

/// Handle to the building of a defining graph; cheap to clone.
#[derive(Clone)]
pub struct Building {
    inner: Arc<Inner>,
}

impl std::fmt::Debug for Building {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Building").field("vertices", &self.graph().names()).finish()
    }
}

impl Building {
    pub fn new(graph: DefiningGraph) -> Self {
        let spherical = graph.spherical_sets();
        Building { inner: Arc::new(Inner { graph, spherical }) }
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.inner.graph
    }

    /// The poset `N̄` of spherical sets, ordered by size then bitmask.
    pub fn spherical_sets(&self) -> &[VertexSet] {
        &self.inner.spherical
    }

    pub fn chamber(&self, word: &[Syllable]) -> Result<Chamber> {
        Ok(Chamber(self.graph().normal_form(word)?))
    }

    pub fn vertex(&self, label: &Element, j: VertexSet) -> Result<BVertex> {
        if !self.graph().is_spherical(j) {
            return input(format!("vertex type {j} is not spherical"));
        }
        Ok(self.vertex_of(label, j))
    }

    pub(crate) fn vertex_of(&self, label: &Element, j: VertexSet) -> BVertex {
        BVertex { rep: self.graph().coset_min_rep(label, j), ty: j }
    }

    /// The vertex of standard type `j` in chamber `c`.
    pub fn vertex_in(&self, c: &Chamber, j: VertexSet) -> BVertex {
        self.vertex_of(&c.0, j)
    }

    pub fn center(&self, c: &Chamber) -> BVertex {
        BVertex { rep: c.0.clone(), ty: VertexSet::EMPTY }
    }

    /// One vertex per spherical set.
    pub fn chamber_vertices(&self, c: &Chamber) -> Vec<BVertex> {
        self.spherical_sets().iter().map(|&j| self.vertex_of(&c.0, j)).collect()
    }

    pub fn contains(&self, c: &Chamber, v: &BVertex) -> bool {
        self.graph().coset_min_rep(&c.0, v.ty) == v.rep
    }

    /// `label(c1)⁻¹ label(c2)`.
    pub fn delta(&self, c1: &Chamber, c2: &Chamber) -> Element {
        self.graph().left_quotient(&c1.0, &c2.0)
    }

    pub fn chamber_intersection(&self, c1: &Chamber, c2: &Chamber) -> Option<Intersection> {
        let jmin = self.delta(c1, c2).support();
        if !self.graph().is_spherical(jmin) {
            return None;
        }
        let shared = self
            .spherical_sets()
            .iter()
            .filter(|k| jmin.is_subset(**k))
            .map(|&k| self.vertex_of(&c1.0, k))
            .collect();
        Some(Intersection { jmin, shared })
    }

    /// `Some(i)` iff the chambers are `i`-adjacent.
    pub fn adjacency(&self, c1: &Chamber, c2: &Chamber) -> Option<usize> {
        let d = self.delta(c1, c2);
        (d.len() == 1).then(|| d.syllables()[0].v())
    }

    /// All chambers adjacent to `c`, grouped by vertex then element.
    pub fn neighbors(&self, c: &Chamber) -> Vec<Chamber> {
        let g = self.graph();
        (0..g.n())
            .flat_map(|i| g.group(i).non_identity().map(move |e| Syllable::new(i, e)))
            .map(|s| Chamber(g.multiply(&c.0, &Element::from_reduced_unchecked(vec![s]))))
            .collect()
    }

    /// Right multiplication of a chamber label by one syllable.
    pub fn step(&self, c: &Chamber, s: Syllable) -> Chamber {
        Chamber(self.graph().multiply(&c.0, &Element::from_reduced_unchecked(vec![s])))
    }

    pub fn gallery_chambers(&self, gallery: &Gallery) -> Result<Vec<Chamber>> {
        self.graph().validate_word(&gallery.letters)?;
        let mut out = vec![gallery.start.clone()];
        for &s in &gallery.letters {
            let next = self.step(out.last().expect("nonempty"), s);
            out.push(next);
        }
        Ok(out)
    }

    /// The gallery read off the canonical word of `label(c1)⁻¹ label(c2)`.
    pub fn gallery_between(&self, c1: &Chamber, c2: &Chamber) -> Gallery {
        Gallery { start: c1.clone(), letters: self.delta(c1, c2).syllables().to_vec() }
    }

    /// The chamber-residue `𝒞(J, C)`, truncated to `radius` syllables from `C`.
    pub fn residue(&self, j: VertexSet, c: &Chamber, radius: Option<usize>) -> Result<Vec<Chamber>> {
        let g = self.graph();
        if !j.is_subset(g.all()) {
            return input(format!("residue type {j} is not a subset of I"));
        }
        let elements = match radius {
            Some(r) => g.enumerate_ball_in(j, r),
            None if g.is_spherical(j) => g.parabolic_elements(j)?,
            None => return input(format!("residue of non-spherical type {j} needs a radius")),
        };
        let mut out: Vec<Chamber> = elements.iter().map(|x| Chamber(g.multiply(&c.0, x))).collect();
        out.sort();
        Ok(out)
    }

    pub fn residue_contains(&self, j: VertexSet, c: &Chamber, d: &Chamber) -> bool {
        let g = self.graph();
        g.coset_min_rep(&c.0, j) == g.coset_min_rep(&d.0, j)
    }

    /// The vertex partial order of the building.
    pub fn leq(&self, u: &BVertex, v: &BVertex) -> bool {
        u.ty.is_subset(v.ty) && self.graph().coset_min_rep(&u.rep, v.ty) == v.rep
    }

    /// The `≤`-minimal vertex shared by two chambers.
    pub fn wedge(&self, c1: &Chamber, c2: &Chamber) -> Result<BVertex> {
        match self.chamber_intersection(c1, c2) {
            Some(x) => Ok(self.vertex_of(&c1.0, x.jmin)),
            None => domain("wedge of disjoint chambers"),
        }
    }

    /// The chambers containing `v`, i.e. the residue `𝒞(v)`.
    pub fn chambers_containing(&self, v: &BVertex) -> Vec<Chamber> {
        self.residue(v.ty, &Chamber(v.rep.clone()), None).expect("vertex types are spherical")
    }

    /// `E⁻(v)`: edges from `v` to vertices of lower rank.
    pub fn lower_edges(&self, v: &BVertex) -> Vec<Cube> {
        let g = self.graph();
        let mut out = Vec::new();
        for m in v.ty.iter() {
            let lo = v.ty.without(m);
            for e in g.group(m).elements() {
                let x = if e == 0 {
                    v.rep.clone()
                } else {
                    g.multiply(&v.rep, &Element::from_reduced_unchecked(vec![Syllable::new(m, e)]))
                };
                out.push(Cube { rep: g.coset_min_rep(&x, lo), lo, hi: v.ty });
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// `d⁻(v) = |E⁻(v)|`.
    pub fn lower_degree(&self, v: &BVertex) -> usize {
        self.lower_edges(v).len()
    }

    /// Edges from `v` to vertices of higher rank.
    pub fn upper_edges(&self, v: &BVertex) -> Vec<Cube> {
        let g = self.graph();
        g.perp_unchecked(v.ty)
            .iter()
            .map(|i| Cube { rep: v.rep.clone(), lo: v.ty, hi: v.ty.with(i) })
            .collect()
    }

    /// All edges incident to `v`.
    pub fn edges_at(&self, v: &BVertex) -> Vec<Cube> {
        let mut out = self.lower_edges(v);
        out.extend(self.upper_edges(v));
        out
    }

    pub fn level_class(&self, v: &BVertex) -> LevelClassId {
        let g = self.graph();
        LevelClassId { rep: g.coset_min_rep(&v.rep, g.perp_closed_unchecked(v.ty)), ty: v.ty }
    }

    /// Whether `v1, v2` have equal type and lie in chambers that are
    /// `i`-adjacent for some `i ∈ t(v1)⊥`.
    pub fn level_adjacent(&self, v1: &BVertex, v2: &BVertex) -> bool {
        if v1.ty != v2.ty {
            return false;
        }
        let g = self.graph();
        let d = g.coset_min_rep(&g.left_quotient(&v1.rep, &v2.rep), v1.ty);
        d.len() == 1 && g.perp_unchecked(v1.ty).contains(d.syllables()[0].v())
    }

    /// The residue `𝒞([v]) = 𝒞(J⊥̲, C)` of a level class.
    pub fn class_residue(&self, k: &LevelClassId, radius: Option<usize>) -> Result<Vec<Chamber>> {
        let j = self.graph().perp_closed_unchecked(k.ty);
        self.residue(j, &Chamber(k.rep.clone()), radius)
    }

    /// Rank-1 vertices below `u`.
    pub fn one_downset(&self, u: &BVertex) -> Vec<BVertex> {
        u.ty.iter().map(|m| self.vertex_of(&u.rep, VertexSet::singleton(m))).collect()
    }

    /// `β(C_{γγ₁}, C_{γγ₂}) = C_{γγ₁γ₂}` for `γ₁ ∈ Γ_J`, `γ₂ ∈ Γ_{J⊥}`.
    pub fn product_map(&self, j: VertexSet, c: &Chamber, c1: &Chamber, c2: &Chamber) -> Result<Chamber> {
        let g = self.graph();
        let perp = g.perp(j)?;
        let g1 = self.delta(c, c1);
        let g2 = self.delta(c, c2);
        if !g.in_parabolic(&g1, j) {
            return domain(format!("{:?} is not in the {j}-residue of {:?}", c1.0, c.0));
        }
        if !g.in_parabolic(&g2, perp) {
            return domain(format!("{:?} is not in the {perp}-residue of {:?}", c2.0, c.0));
        }
        Ok(Chamber(g.multiply(&c1.0, &g2)))
    }

    /// Inverse of [`Building::product_map`].
    pub fn split(&self, j: VertexSet, c: &Chamber, d: &Chamber) -> Result<(Chamber, Chamber)> {
        let g = self.graph();
        let closed = g.perp_closed(j)?;
        let delta = self.delta(c, d);
        if !g.in_parabolic(&delta, closed) {
            return domain(format!("{:?} is not in the {closed}-residue of {:?}", d.0, c.0));
        }
        let g1 = g.retract(&delta, j);
        let g2 = g.retract(&delta, closed.difference(j));
        Ok((Chamber(g.multiply(&c.0, &g1)), Chamber(g.multiply(&c.0, &g2))))
    }

    pub fn cube(&self, label: &Element, lo: VertexSet, hi: VertexSet) -> Result<Cube> {
        if !lo.is_subset(hi) || !self.graph().is_spherical(hi) {
            return input(format!("({lo}, {hi}) is not a nested pair of spherical sets"));
        }
        Ok(Cube { rep: self.graph().coset_min_rep(label, lo), lo, hi })
    }

    /// All cubes of a chamber, in `N̄` order of `(lo, hi)`.
    pub fn chamber_cubes(&self, c: &Chamber) -> Vec<Cube> {
        let mut out = Vec::new();
        for &hi in self.spherical_sets() {
            for lo in hi.subsets() {
                out.push(Cube { rep: self.graph().coset_min_rep(&c.0, lo), lo, hi });
            }
        }
        out
    }

    pub fn chamber_cubes_of_dim(&self, c: &Chamber, dim: usize) -> Vec<Cube> {
        self.chamber_cubes(c).into_iter().filter(|q| q.dim() == dim).collect()
    }

    /// Endpoints `(bottom, top)` of a cube.
    pub fn cube_extremes(&self, q: &Cube) -> (BVertex, BVertex) {
        (BVertex { rep: q.rep.clone(), ty: q.lo }, self.vertex_of(&q.rep, q.hi))
    }

    pub fn cube_vertices(&self, q: &Cube) -> Vec<BVertex> {
        q.hi
            .difference(q.lo)
            .subsets()
            .map(|s| self.vertex_of(&q.rep, q.lo.union(s)))
            .collect()
    }

    pub fn cube_contains_vertex(&self, q: &Cube, v: &BVertex) -> bool {
        q.lo.is_subset(v.ty) && v.ty.is_subset(q.hi) && self.graph().coset_min_rep(&q.rep, v.ty) == v.rep
    }

    /// Faces of `q` of dimension one.
    pub fn cube_edges(&self, q: &Cube) -> Vec<Cube> {
        let free = q.hi.difference(q.lo);
        let mut out = Vec::new();
        for s in free.subsets() {
            for i in free.difference(s).iter() {
                let lo = q.lo.union(s);
                out.push(Cube { rep: self.graph().coset_min_rep(&q.rep, lo), lo, hi: lo.with(i) });
            }
        }
        out
    }

    /// Whether two distinct edges at `v` span a 2-cube with corner `v`.
    pub fn forms_corner(&self, v: &BVertex, e1: &Cube, e2: &Cube) -> bool {
        if e1 == e2 || e1.dim() != 1 || e2.dim() != 1 {
            return false;
        }
        if !self.cube_contains_vertex(e1, v) || !self.cube_contains_vertex(e2, v) {
            return false;
        }
        let lo = e1.lo.intersection(e2.lo);
        let hi = e1.hi.union(e2.hi);
        if hi.difference(lo).len() != 2 || !self.graph().is_spherical(hi) {
            return false;
        }
        let d = self.graph().left_quotient(&e1.rep, &e2.rep);
        d.support().is_subset(e1.lo.union(e2.lo))
    }

    /// All chambers within gallery distance `radius` of `C_*`.
    pub fn ball(&self, radius: usize) -> Vec<Chamber> {
        self.graph().enumerate_ball(radius).into_iter().map(Chamber).collect()
    }

    /// All chambers within gallery distance `radius` of `c`.
    pub fn ball_around(&self, c: &Chamber, radius: usize) -> Vec<Chamber> {
        let g = self.graph();
        g.enumerate_ball(radius).iter().map(|x| Chamber(g.multiply(&c.0, x))).collect()
    }

    /// Distinct vertices of the chambers in a list, sorted.
    pub fn vertices_of(&self, chambers: &[Chamber]) -> Vec<BVertex> {
        let mut out: Vec<BVertex> = chambers.iter().flat_map(|c| self.chamber_vertices(c)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn translate_chamber(&self, g: &Element, c: &Chamber) -> Chamber {
        Chamber(self.graph().multiply(g, &c.0))
    }

    pub fn translate_vertex(&self, g: &Element, v: &BVertex) -> BVertex {
        self.vertex_of(&self.graph().multiply(g, &v.rep), v.ty)
    }

    pub fn translate_cube(&self, g: &Element, q: &Cube) -> Cube {
        Cube { rep: self.graph().coset_min_rep(&self.graph().multiply(g, &q.rep), q.lo), lo: q.lo, hi: q.hi }
    }

    pub fn translate_class(&self, g: &Element, k: &LevelClassId) -> LevelClassId {
        let gr = self.graph();
        LevelClassId {
            rep: gr.coset_min_rep(&gr.multiply(g, &k.rep), gr.perp_closed_unchecked(k.ty)),
            ty: k.ty,
        }
    }
}

#[cfg(test)]
mod tests;
