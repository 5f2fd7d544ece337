//! Normal forms and arithmetic in the graph product `Γ(𝒢, (G_i))`.

use crate::error::{input, Result};
use crate::graph::DefiningGraph;
use crate::parallel;
use crate::sets::VertexSet;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A letter `(vertex, elt)` with `elt` a non-identity element of `G_vertex`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Syllable {
    pub vertex: u32,
    pub elt: u32,
}

impl Syllable {
    pub fn new(vertex: usize, elt: u32) -> Self {
        Syllable { vertex: vertex as u32, elt }
    }

    #[inline]
    pub fn v(self) -> usize {
        self.vertex as usize
    }
}

impl From<(u32, u32)> for Syllable {
    fn from((vertex, elt): (u32, u32)) -> Self {
        Syllable { vertex, elt }
    }
}

impl From<Syllable> for (u32, u32) {
    fn from(s: Syllable) -> Self {
        (s.vertex, s.elt)
    }
}

impl fmt::Debug for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.vertex, self.elt)
    }
}

/// A group element as a canonical reduced word.
///
/// Only [`DefiningGraph`] methods construct these, so the word is always in
/// leftmost-minimal normal form and equality of values is equality in `Γ`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Element(Vec<Syllable>);

impl Element {
    pub fn identity() -> Self {
        Element(Vec::new())
    }

    /// Wraps a word already known to be canonical (e.g. a single syllable).
    pub(crate) fn from_reduced_unchecked(w: Vec<Syllable>) -> Self {
        Element(w)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    /// Syllable length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Set of vertices carrying a syllable.
    pub fn support(&self) -> VertexSet {
        VertexSet::from_iter(self.0.iter().map(|s| s.v()))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for s in &self.0 {
            write!(f, "{s:?}")?;
        }
        Ok(())
    }
}

impl DefiningGraph {
    pub fn validate_word(&self, word: &[Syllable]) -> Result<()> {
        for s in word {
            if s.v() >= self.n() {
                return input(format!("syllable {s:?} references a missing vertex"));
            }
            if s.elt == 0 || s.elt >= self.order(s.v()) {
                return input(format!("syllable {s:?} is not a non-identity element of its group"));
            }
        }
        Ok(())
    }

    /// Canonical reduced form of an arbitrary word.
    pub fn normal_form(&self, word: &[Syllable]) -> Result<Element> {
        self.validate_word(word)?;
        Ok(self.normal_form_unchecked(word))
    }

    pub(crate) fn normal_form_unchecked(&self, word: &[Syllable]) -> Element {
        let mut reduced = Vec::with_capacity(word.len());
        for &s in word {
            self.push_reduced(&mut reduced, s);
        }
        self.canonical(reduced)
    }

    /// Appends `s` to a reduced word, merging with the nearest same-vertex
    /// syllable that `s` can shuffle back to.
    fn push_reduced(&self, w: &mut Vec<Syllable>, s: Syllable) {
        let v = s.v();
        let adj = self.neighbors(v);
        for idx in (0..w.len()).rev() {
            let t = w[idx];
            if t.vertex == s.vertex {
                let e = self.group(v).mul(t.elt, s.elt);
                if e == 0 {
                    w.remove(idx);
                } else {
                    w[idx].elt = e;
                }
                return;
            }
            if !adj.contains(t.v()) {
                break;
            }
        }
        w.push(s);
    }

    /// Leftmost-minimal ordering of a reduced word.
    fn canonical(&self, mut rest: Vec<Syllable>) -> Element {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            // `common` holds the vertices adjacent to everything seen so far.
            let mut common = self.all();
            let mut best: Option<usize> = None;
            for (p, s) in rest.iter().enumerate() {
                if (p == 0 || common.contains(s.v())) && best.map_or(true, |b| s.vertex < rest[b].vertex) {
                    best = Some(p);
                }
                common = common.intersection(self.neighbors(s.v()));
                if common.is_empty() {
                    break;
                }
            }
            out.push(rest.remove(best.expect("first syllable is always available")));
        }
        Element(out)
    }

    pub fn syllable(&self, vertex: usize, elt: u32) -> Result<Element> {
        self.normal_form(&[Syllable::new(vertex, elt)])
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut w = a.0.clone();
        for &s in &b.0 {
            self.push_reduced(&mut w, s);
        }
        self.canonical(w)
    }

    /// `a⁻¹ b`.
    pub fn left_quotient(&self, a: &Element, b: &Element) -> Element {
        self.multiply(&self.invert(a), b)
    }

    pub fn invert(&self, a: &Element) -> Element {
        let w = a
            .0
            .iter()
            .rev()
            .map(|s| Syllable { vertex: s.vertex, elt: self.group(s.v()).inv(s.elt) })
            .collect();
        self.canonical(w)
    }

    /// The retraction `ρ_J : Γ → Γ_J` deleting syllables outside `J`.
    pub fn retract(&self, a: &Element, j: VertexSet) -> Element {
        let kept: Vec<Syllable> = a.0.iter().copied().filter(|s| j.contains(s.v())).collect();
        if kept.len() == a.0.len() {
            return a.clone();
        }
        self.normal_form_unchecked(&kept)
    }

    /// The image of `a` under `Γ → G_i`.
    pub fn coordinate(&self, a: &Element, i: usize) -> u32 {
        a.0.iter()
            .filter(|s| s.v() == i)
            .fold(0, |acc, s| self.group(i).mul(acc, s.elt))
    }

    /// Whether `a` lies in `Γ_J`.
    pub fn in_parabolic(&self, a: &Element, j: VertexSet) -> bool {
        a.support().is_subset(j)
    }

    /// Shortest element of the coset `aΓ_J`.
    pub fn coset_min_rep(&self, a: &Element, j: VertexSet) -> Element {
        let mut w = a.0.clone();
        let mut changed = false;
        'scan: loop {
            let mut suffix = VertexSet::EMPTY;
            for p in (0..w.len()).rev() {
                let v = w[p].v();
                if j.contains(v) && suffix.is_subset(self.neighbors(v)) {
                    w.remove(p);
                    changed = true;
                    continue 'scan;
                }
                suffix = suffix.with(v);
            }
            break;
        }
        if changed {
            self.canonical(w)
        } else {
            a.clone()
        }
    }

    /// All elements of `Γ_J` with syllable length at most `radius`, by
    /// length then lexicographically.
    pub fn enumerate_ball_in(&self, j: VertexSet, radius: usize) -> Vec<Element> {
        let letters: Vec<Syllable> = j
            .intersection(self.all())
            .iter()
            .flat_map(|v| self.group(v).non_identity().map(move |e| Syllable::new(v, e)))
            .collect();
        let mut out = vec![Element::identity()];
        let mut layer = vec![Element::identity()];
        for len in 1..=radius {
            let mut next: Vec<Element> = parallel::flat_map(&layer, |x| {
                letters
                    .iter()
                    .filter_map(|&s| {
                        let mut w = x.0.clone();
                        self.push_reduced(&mut w, s);
                        (w.len() == len).then(|| self.canonical(w))
                    })
                    .collect()
            });
            next.sort();
            next.dedup();
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn enumerate_ball(&self, radius: usize) -> Vec<Element> {
        self.enumerate_ball_in(self.all(), radius)
    }

    /// All of `Γ_J` for spherical `J` (a finite direct product).
    pub fn parabolic_elements(&self, j: VertexSet) -> Result<Vec<Element>> {
        if !self.is_spherical(j) {
            return input(format!("Γ_J is infinite for non-spherical J = {j}"));
        }
        Ok(self.enumerate_ball_in(j, j.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::running_example;

    fn w(g: &DefiningGraph, s: &[(usize, u32)]) -> Element {
        let syl: Vec<_> = s.iter().map(|&(v, e)| Syllable::new(v, e)).collect();
        g.normal_form(&syl).unwrap()
    }

    #[test]
    fn trivial_words() {
        let g = running_example();
        assert!(w(&g, &[]).is_identity());
        assert!(w(&g, &[(0, 1), (0, 1)]).is_identity());
        assert_eq!(w(&g, &[(2, 1), (2, 1)]), w(&g, &[(2, 2)]));
        let x = w(&g, &[(2, 1), (0, 1), (2, 1)]);
        assert_eq!(x.len(), 3);
        assert_eq!(g.invert(&w(&g, &[(0, 1)])), w(&g, &[(0, 1)]));
    }

    #[test]
    fn canonical_order_prefers_small_vertices() {
        let g = running_example();
        // j commutes with k, so (k,1)(j,1) is written (j,1)(k,1).
        let x = w(&g, &[(2, 1), (1, 1)]);
        assert_eq!(x.syllables()[0].vertex, 1);
        // l and i do not commute, so order is kept.
        let y = w(&g, &[(3, 1), (0, 1)]);
        assert_eq!(y.syllables()[0].vertex, 3);
    }

    #[test]
    fn merges_across_commuting_syllables() {
        let g = running_example();
        // (i,1)(j,1)(i,1) = (j,1) since i and j commute.
        assert_eq!(w(&g, &[(0, 1), (1, 1), (0, 1)]), w(&g, &[(1, 1)]));
        // (k,1)(j,1)(k,2) = (j,1).
        assert_eq!(w(&g, &[(2, 1), (1, 1), (2, 2)]), w(&g, &[(1, 1)]));
    }

    #[test]
    fn rejects_invalid_syllables() {
        let g = running_example();
        assert!(g.normal_form(&[Syllable::new(9, 1)]).is_err());
        assert!(g.normal_form(&[Syllable::new(0, 0)]).is_err());
        assert!(g.normal_form(&[Syllable::new(0, 2)]).is_err());
    }

    #[test]
    fn coset_rep_examples() {
        let g = running_example();
        let i = VertexSet::singleton(0);
        assert!(g.coset_min_rep(&w(&g, &[(0, 1)]), i).is_identity());
        assert_eq!(g.coset_min_rep(&w(&g, &[(2, 1), (0, 1)]), i), w(&g, &[(2, 1)]));
    }

    #[test]
    fn ball_sizes() {
        let g = running_example();
        assert_eq!(g.enumerate_ball(0).len(), 1);
        assert_eq!(g.enumerate_ball(1).len(), 7);
        let sizes: Vec<_> = (0..4).map(|r| g.enumerate_ball(r).len()).collect();
        assert!(sizes.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(g.parabolic_elements(VertexSet::from_iter([0, 1])).unwrap().len(), 4);
    }

    #[test]
    fn ball_is_sorted_and_distinct() {
        let g = running_example();
        let b = g.enumerate_ball(3);
        for pair in b.windows(2) {
            assert!((pair[0].len(), &pair[0]) < (pair[1].len(), &pair[1]));
        }
    }
}
