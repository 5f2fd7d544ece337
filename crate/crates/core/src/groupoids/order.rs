use crate::building::{BVertex, Building, Chamber, LevelClassId};
use crate::error::{domain, input, Error, Result};
use crate::graph::DefiningGraph;
use crate::sets::VertexSet;
use serde::Serialize;
use std::cmp::Ordering;

/// Orbit labels for rank-1 classes together with a total order on the labels.
///
/// Rank-1 vertices of type `{m}` get label `labels[m]`, so this covers
/// lattices whose rank-1 orbits are unions of types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassOrder {
    labels: Vec<usize>,
    base_order: Vec<usize>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl ClassOrder {
    /// `base_order` lists the labels `0..L` from smallest to largest.
    pub fn new(g: &DefiningGraph, labels: Vec<usize>, base_order: Vec<usize>) -> Result<Self> {
        if labels.len() != g.n() {
            return input(format!("expected {} labels, got {}", g.n(), labels.len()));
        }
        let count = base_order.len();
        let mut pos = vec![usize::MAX; count];
        for (p, &l) in base_order.iter().enumerate() {
            if l >= count || pos[l] != usize::MAX {
                return input(format!("base order {base_order:?} is not a permutation of 0..{count}"));
            }
            pos[l] = p;
        }
        if count > 63 {
            return input("at most 63 labels are supported");
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= count) {
            return input(format!("label {l} is missing from the base order"));
        }
        for (a, b) in g.edges() {
            if labels[a] == labels[b] {
                return Err(Error::Validation {
                    condition: "adjacent rank-1 labels differ".into(),
                    witness: format!("{} and {} share label {}", g.name(a), g.name(b), labels[a]),
                });
            }
        }
        Ok(ClassOrder { labels, base_order, pos })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn base_order(&self) -> &[usize] {
        &self.base_order
    }

    /// `q(v)` for a rank-1 vertex.
    pub fn q(&self, v: &BVertex) -> Result<usize> {
        match v.ty.single() {
            Some(m) => Ok(self.labels[m]),
            None => domain(format!("q is defined on rank-1 vertices, got type {}", v.ty)),
        }
    }

    /// Positions in the base order of the labels of `ty`'s rank-1 faces.
    fn positions(&self, ty: VertexSet) -> u64 {
        ty.iter().fold(0, |acc, m| acc | 1 << self.pos[self.labels[m]])
    }

    /// `Σ 2^pos` over the distinct labels below a vertex of type `ty`.
    pub fn key(&self, ty: VertexSet) -> u64 {
        self.positions(ty)
    }

    /// Compares two label sets by the largest element of their symmetric difference.
    pub fn cmp_types(&self, a: VertexSet, b: VertexSet) -> Ordering {
        let (pa, pb) = (self.positions(a), self.positions(b));
        let diff = pa ^ pb;
        if diff == 0 {
            return Ordering::Equal;
        }
        let top = 63 - diff.leading_zeros();
        if pb >> top & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// `⪯` on level classes, through their orbits.
    pub fn cmp_classes(&self, a: &LevelClassId, b: &LevelClassId) -> Ordering {
        self.cmp_types(a.ty, b.ty)
    }

    /// Strict `q(a) ≺ q(b)` on rank-1 types.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.cmp_types(VertexSet::singleton(a), VertexSet::singleton(b)) == Ordering::Less
    }
}

/// The order for `Λ = Γ`: labels are types, ordered by `vertex_order`.
pub fn class_order_for_gamma(g: &DefiningGraph, vertex_order: &[usize]) -> Result<ClassOrder> {
    ClassOrder::new(g, (0..g.n()).collect(), vertex_order.to_vec())
}

/// The unique chamber containing both `v` and the rank-1 vertex `u`.
pub fn common_chamber(b: &Building, v: &BVertex, u: &BVertex) -> Result<Chamber> {
    let g = b.graph();
    let Some(i) = u.ty.single() else {
        return domain(format!("ascent needs a rank-1 vertex, got type {}", u.ty));
    };
    if !g.perp_unchecked(v.ty).contains(i) {
        return domain(format!("{} is not in {}⊥", g.name(i), v.ty));
    }
    let delta = g.left_quotient(&v.rep, &u.rep);
    if !g.in_parabolic(&delta, v.ty.with(i)) {
        return domain(format!("{v:?} and {u:?} share no chamber"));
    }
    Ok(Chamber(g.multiply(&v.rep, &g.retract(&delta, v.ty))))
}

/// The ascent `v⇑u`.
pub fn ascent(b: &Building, v: &BVertex, u: &BVertex, ord: &ClassOrder) -> Result<BVertex> {
    let c = common_chamber(b, v, u)?;
    let i = u.ty.single().expect("checked");
    let ty = VertexSet::from_iter(v.ty.iter().filter(|&m| ord.precedes(i, m))).with(i);
    Ok(b.vertex_in(&c, ty))
}
