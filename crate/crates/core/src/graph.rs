//! The defining graph `𝒢` with its vertex groups, spherical subsets and perps.

use crate::error::{input, Error, Result};
use crate::group::FiniteGroup;
use crate::sets::{VertexPerm, VertexSet, MAX_VERTICES};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
    groups: Vec<FiniteGroup>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexSpec {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphSpec {
    vertices: Vec<VertexSpec>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

impl DefiningGraph {
    /// Builds a graph from vertex names, index edges and vertex groups.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)], groups: Vec<FiniteGroup>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return input("defining graph needs at least one vertex");
        }
        if n > MAX_VERTICES {
            return input(format!("at most {MAX_VERTICES} vertices are supported, got {n}"));
        }
        if groups.len() != n {
            return input("one group per vertex is required");
        }
        let mut adj = vec![VertexSet::EMPTY; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return input(format!("edge ({a},{b}) references a missing vertex"));
            }
            if a == b {
                return input(format!("loop at vertex {a}"));
            }
            if adj[a].contains(b) {
                return input(format!("repeated edge ({a},{b})"));
            }
            adj[a] = adj[a].with(b);
            adj[b] = adj[b].with(a);
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = names.iter().find(|s| !seen.insert(s.as_str())) {
            return input(format!("duplicate vertex name {dup:?}"));
        }
        Ok(DefiningGraph { names, adj, groups })
    }

    /// Convenience constructor: cyclic groups of the given orders, vertices named `0..n`.
    pub fn cyclic(orders: &[u32], edges: &[(usize, usize)]) -> Result<Self> {
        let names = (0..orders.len()).map(|i| i.to_string()).collect();
        let groups = orders.iter().map(|&p| FiniteGroup::cyclic(p)).collect::<Result<_>>()?;
        Self::new(names, edges, groups)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GraphSpec =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("graph spec: {e}")))?;
        let mut names = Vec::new();
        let mut groups = Vec::new();
        for v in spec.vertices {
            let group = match (v.order, v.table) {
                (Some(p), None) => FiniteGroup::cyclic(p)?,
                (None, Some(t)) => FiniteGroup::from_table(t)?,
                _ => return input(format!("vertex {:?} needs exactly one of order/table", v.name)),
            };
            names.push(v.name);
            groups.push(group);
        }
        let index = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::Input(format!("edge references unknown vertex {s:?}")))
        };
        let edges = spec
            .edges
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, &edges, groups)
    }

    pub fn to_json(&self) -> String {
        let vertices = self
            .names
            .iter()
            .zip(&self.groups)
            .map(|(name, g)| match g {
                FiniteGroup::Cyclic(p) => VertexSpec { name: name.clone(), order: Some(*p), table: None },
                FiniteGroup::Table { mul, .. } => {
                    VertexSpec { name: name.clone(), order: None, table: Some(mul.clone()) }
                }
            })
            .collect();
        let edges = self
            .edges()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect();
        serde_json::to_string_pretty(&GraphSpec { vertices, edges }).expect("graph spec serializes")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn group(&self, i: usize) -> &FiniteGroup {
        &self.groups[i]
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn order(&self, i: usize) -> u32 {
        self.groups[i].order()
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Open neighbourhood `i⊥`.
    #[inline]
    pub fn neighbors(&self, i: usize) -> VertexSet {
        self.adj[i]
    }

    /// Closed star `i⊥̲ = {i} ∪ i⊥`.
    #[inline]
    pub fn star(&self, i: usize) -> VertexSet {
        self.adj[i].with(i)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|a| self.adj[a].iter().filter(move |&b| a < b).map(move |b| (a, b)))
            .collect()
    }

    /// Whether the members of `j` are pairwise adjacent.
    pub fn is_spherical(&self, j: VertexSet) -> bool {
        j.is_subset(self.all()) && j.iter().all(|i| j.is_subset(self.star(i)))
    }

    /// All cliques of `𝒢` including the empty one, ordered by size then bitmask.
    pub fn spherical_sets(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::EMPTY];
        let mut frontier = vec![VertexSet::EMPTY];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &j in &frontier {
                let lo = j.iter().last().map_or(0, |m| m + 1);
                for i in lo..self.n() {
                    if j.is_subset(self.adj[i]) {
                        next.push(j.with(i));
                    }
                }
            }
            next.sort();
            out.extend(&next);
            frontier = next;
        }
        out
    }

    fn require_spherical(&self, j: VertexSet) -> Result<()> {
        if self.is_spherical(j) {
            Ok(())
        } else {
            input(format!("{j} is not spherical"))
        }
    }

    /// `J⊥̲ = ∩_{j∈J} j⊥̲`, with `∅⊥̲ = I`.
    pub fn perp_closed(&self, j: VertexSet) -> Result<VertexSet> {
        self.require_spherical(j)?;
        Ok(self.perp_closed_unchecked(j))
    }

    /// `J⊥ = J⊥̲ ∖ J`, with `∅⊥ = I`.
    pub fn perp(&self, j: VertexSet) -> Result<VertexSet> {
        Ok(self.perp_closed(j)?.difference(j))
    }

    pub(crate) fn perp_closed_unchecked(&self, j: VertexSet) -> VertexSet {
        j.iter().fold(self.all(), |acc, i| acc.intersection(self.star(i)))
    }

    pub(crate) fn perp_unchecked(&self, j: VertexSet) -> VertexSet {
        self.perp_closed_unchecked(j).difference(j)
    }

    pub fn is_automorphism(&self, p: &VertexPerm) -> bool {
        p.len() == self.n()
            && (0..self.n()).all(|a| self.adj[a].iter().all(|b| self.adjacent(p.apply(a), p.apply(b))))
    }

    pub fn preserves_orders(&self, p: &VertexPerm) -> bool {
        (0..self.n()).all(|m| self.order(p.apply(m)) == self.order(m))
    }

    /// Graph automorphisms fixing `fixed` pointwise, optionally required to preserve group orders.
    pub fn automorphisms_fixing(&self, fixed: VertexSet, preserve_orders: bool) -> Vec<VertexPerm> {
        let n = self.n();
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_automorphism(0, fixed, preserve_orders, &mut image, &mut used, &mut out);
        out.sort();
        out
    }

    pub fn automorphisms(&self, preserve_orders: bool) -> Vec<VertexPerm> {
        self.automorphisms_fixing(VertexSet::EMPTY, preserve_orders)
    }

    fn extend_automorphism(
        &self,
        a: usize,
        fixed: VertexSet,
        preserve_orders: bool,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<VertexPerm>,
    ) {
        let n = self.n();
        if a == n {
            out.push(VertexPerm::from_images(image.clone()).expect("bijection by construction"));
            return;
        }
        for b in 0..n {
            if used[b] || (fixed.contains(a) && b != a) {
                continue;
            }
            if self.degree(a) != self.degree(b) || (preserve_orders && self.order(a) != self.order(b)) {
                continue;
            }
            let consistent = (0..a).all(|c| self.adjacent(a, c) == self.adjacent(b, image[c]));
            if !consistent {
                continue;
            }
            image[a] = b;
            used[b] = true;
            self.extend_automorphism(a + 1, fixed, preserve_orders, image, used, out);
            used[b] = false;
        }
        image[a] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn running_example_spherical_sets() {
        let g = catalog::running_example();
        let s = g.spherical_sets();
        assert_eq!(s.len(), 7);
        assert_eq!(g.perp(VertexSet::singleton(1)).unwrap(), VertexSet::from_iter([0, 2]));
        assert_eq!(g.perp(VertexSet::EMPTY).unwrap(), g.all());
        assert_eq!(g.perp_closed(VertexSet::EMPTY).unwrap(), g.all());
        assert!(g.perp(VertexSet::from_iter([0, 2])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = catalog::running_example();
        let back = DefiningGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_rejects_bad_specs() {
        assert!(DefiningGraph::from_json("{").is_err());
        assert!(DefiningGraph::from_json(r#"{"vertices":[]}"#).is_err());
        let bad_edge = r#"{"vertices":[{"name":"a","order":2}],"edges":[["a","b"]]}"#;
        assert!(DefiningGraph::from_json(bad_edge).is_err());
        let both = r#"{"vertices":[{"name":"a","order":2,"table":[[0,1],[1,0]]}]}"#;
        assert!(DefiningGraph::from_json(both).is_err());
        let table = r#"{"vertices":[{"name":"a","table":[[0,1],[1,0]]}]}"#;
        assert_eq!(DefiningGraph::from_json(table).unwrap().order(0), 2);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(catalog::cycle(4, 3).automorphisms(true).len(), 8);
        assert_eq!(catalog::heawood(2).automorphisms(true).len(), 336);
        assert_eq!(catalog::running_example().automorphisms(true).len(), 1);
        assert_eq!(catalog::running_example().automorphisms(false).len(), 2);
    }
}
