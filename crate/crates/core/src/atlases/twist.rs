use crate::building::{BVertex, Building, Chamber};
use crate::error::{input, Result};
use crate::graph::DefiningGraph;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::{Element, Syllable};
use serde::Serialize;
use std::sync::Arc;

/// A rank-preserving automorphism of the building, evaluated chamber by chamber.
pub trait Automorphism: Send + Sync {
    fn chamber(&self, c: &Chamber) -> Result<Chamber>;

    fn preimage(&self, c: &Chamber) -> Result<Chamber>;

    /// Sends the vertex of standard type `J` in `c` to the vertex of
    /// standard type `sigma(J)` in the image of `c`.
    fn sigma(&self, c: &Chamber) -> Result<VertexPerm>;

    fn vertex(&self, b: &Building, v: &BVertex) -> Result<BVertex> {
        let c = Chamber(v.rep.clone());
        let image = self.chamber(&c)?;
        Ok(b.vertex_in(&image, self.sigma(&c)?.apply_set(v.ty)))
    }
}

/// A group automorphism of `Γ` induced by an order-preserving graph
/// automorphism `perm` and isomorphisms `maps[m] : G_m → G_{perm(m)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTwist {
    perm: VertexPerm,
    maps: Vec<Vec<u32>>,
}

impl GroupTwist {
    pub fn new(g: &DefiningGraph, perm: VertexPerm, maps: Vec<Vec<u32>>) -> Result<Self> {
        if perm.len() != g.n() || maps.len() != g.n() {
            return input(format!("a twist of a {}-vertex graph needs {} entries", g.n(), g.n()));
        }
        if !g.is_automorphism(&perm) || !g.preserves_orders(&perm) {
            return input(format!("{perm:?} is not an order-preserving graph automorphism"));
        }
        for (m, map) in maps.iter().enumerate() {
            let (src, dst) = (g.group(m), g.group(perm.apply(m)));
            let order = src.order() as usize;
            let mut seen = vec![false; order];
            if map.len() != order || map.iter().any(|&x| x as usize >= order || std::mem::replace(&mut seen[x as usize], true)) {
                return input(format!("map at {} is not a bijection", g.name(m)));
            }
            for a in src.elements() {
                for b in src.elements() {
                    if map[src.mul(a, b) as usize] != dst.mul(map[a as usize], map[b as usize]) {
                        return input(format!("map at {} is not a homomorphism", g.name(m)));
                    }
                }
            }
        }
        Ok(GroupTwist { perm, maps })
    }

    pub fn identity(g: &DefiningGraph) -> Self {
        let maps = (0..g.n()).map(|m| g.group(m).elements().collect()).collect();
        GroupTwist { perm: VertexPerm::identity(g.n()), maps }
    }

    /// The twist by `perm` with `a ↦ a` on element indices.
    pub fn graph_automorphism(g: &DefiningGraph, perm: VertexPerm) -> Result<Self> {
        let maps = (0..g.n()).map(|m| g.group(m).elements().collect()).collect();
        GroupTwist::new(g, perm, maps)
    }

    /// Inversion on the (abelian) groups at `vertices`, identity elsewhere.
    pub fn inversion(g: &DefiningGraph, vertices: VertexSet) -> Result<Self> {
        let maps = (0..g.n())
            .map(|m| {
                let grp = g.group(m);
                grp.elements().map(|a| if vertices.contains(m) { grp.inv(a) } else { a }).collect()
            })
            .collect();
        GroupTwist::new(g, VertexPerm::identity(g.n()), maps)
    }

    pub fn perm(&self) -> &VertexPerm {
        &self.perm
    }

    pub fn map(&self, m: usize, a: u32) -> u32 {
        self.maps[m][a as usize]
    }

    /// Preimage of `a ∈ G_{perm(m)}` under `maps[m]`.
    pub fn unmap(&self, m: usize, a: u32) -> u32 {
        self.maps[m].iter().position(|&x| x == a).expect("maps are bijections") as u32
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.maps.iter().all(|m| m.iter().enumerate().all(|(a, &x)| a as u32 == x))
    }

    pub fn apply(&self, g: &DefiningGraph, x: &Element) -> Element {
        let word: Vec<Syllable> =
            x.syllables().iter().map(|s| Syllable::new(self.perm.apply(s.v()), self.map(s.v(), s.elt))).collect();
        g.normal_form_unchecked(&word)
    }

    pub fn inverse(&self) -> GroupTwist {
        let inv = self.perm.inverse();
        let maps = (0..self.maps.len())
            .map(|m| {
                let src = inv.apply(m);
                (0..self.maps[src].len() as u32).map(|a| self.unmap(src, a)).collect()
            })
            .collect();
        GroupTwist { perm: inv, maps }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupTwist) -> GroupTwist {
        let maps = (0..self.maps.len())
            .map(|m| other.maps[m].iter().map(|&a| self.map(other.perm.apply(m), a)).collect())
            .collect();
        GroupTwist { perm: self.perm.compose(&other.perm), maps }
    }
}

/// Left multiplication `C_x ↦ C_{γx}`.
#[derive(Clone, Debug)]
pub struct Translation {
    building: Building,
    gamma: Element,
}

impl Translation {
    pub fn new(b: &Building, gamma: Element) -> Self {
        Translation { building: b.clone(), gamma }
    }
}

impl Automorphism for Translation {
    fn chamber(&self, c: &Chamber) -> Result<Chamber> {
        Ok(self.building.translate_chamber(&self.gamma, c))
    }

    fn preimage(&self, c: &Chamber) -> Result<Chamber> {
        let inv = self.building.graph().invert(&self.gamma);
        Ok(self.building.translate_chamber(&inv, c))
    }

    fn sigma(&self, _: &Chamber) -> Result<VertexPerm> {
        Ok(VertexPerm::identity(self.building.graph().n()))
    }
}

/// The building automorphism `C_x ↦ C_{F(x)}` of a group twist `F`.
#[derive(Clone, Debug)]
pub struct TwistMap {
    building: Building,
    twist: GroupTwist,
    inverse: GroupTwist,
}

impl TwistMap {
    pub fn new(b: &Building, twist: GroupTwist) -> Self {
        let inverse = twist.inverse();
        TwistMap { building: b.clone(), twist, inverse }
    }

    pub fn twist(&self) -> &GroupTwist {
        &self.twist
    }
}

impl Automorphism for TwistMap {
    fn chamber(&self, c: &Chamber) -> Result<Chamber> {
        Ok(Chamber(self.twist.apply(self.building.graph(), &c.0)))
    }

    fn preimage(&self, c: &Chamber) -> Result<Chamber> {
        Ok(Chamber(self.inverse.apply(self.building.graph(), &c.0)))
    }

    fn sigma(&self, _: &Chamber) -> Result<VertexPerm> {
        Ok(self.twist.perm.clone())
    }
}

/// `parts[0] ∘ parts[1] ∘ …`, applying the last part first.
#[derive(Clone)]
pub struct Composite {
    parts: Vec<Arc<dyn Automorphism>>,
    n: usize,
}

impl Composite {
    pub fn new(b: &Building, parts: Vec<Arc<dyn Automorphism>>) -> Self {
        Composite { parts, n: b.graph().n() }
    }
}

impl Automorphism for Composite {
    fn chamber(&self, c: &Chamber) -> Result<Chamber> {
        self.parts.iter().rev().try_fold(c.clone(), |d, f| f.chamber(&d))
    }

    fn preimage(&self, c: &Chamber) -> Result<Chamber> {
        self.parts.iter().try_fold(c.clone(), |d, f| f.preimage(&d))
    }

    fn sigma(&self, c: &Chamber) -> Result<VertexPerm> {
        let mut acc = VertexPerm::identity(self.n);
        let mut cur = c.clone();
        for f in self.parts.iter().rev() {
            acc = f.sigma(&cur)?.compose(&acc);
            cur = f.chamber(&cur)?;
        }
        Ok(acc)
    }
}

/// The element `F ∘ L_γ ∘ F⁻¹` of the twisted lattice `FΓF⁻¹`.
#[derive(Clone)]
pub struct TwistedElement {
    pub gamma: Element,
    inner: Composite,
}

impl TwistedElement {
    pub fn new(b: &Building, twist: &GroupTwist, gamma: Element) -> Self {
        let parts: Vec<Arc<dyn Automorphism>> = vec![
            Arc::new(TwistMap::new(b, twist.clone())),
            Arc::new(Translation::new(b, gamma.clone())),
            Arc::new(TwistMap::new(b, twist.inverse())),
        ];
        TwistedElement { gamma, inner: Composite::new(b, parts) }
    }
}

impl Automorphism for TwistedElement {
    fn chamber(&self, c: &Chamber) -> Result<Chamber> {
        self.inner.chamber(c)
    }

    fn preimage(&self, c: &Chamber) -> Result<Chamber> {
        self.inner.preimage(c)
    }

    fn sigma(&self, c: &Chamber) -> Result<VertexPerm> {
        self.inner.sigma(c)
    }
}

/// The inverse of an automorphism.
#[derive(Clone)]
pub struct Inverse(pub Arc<dyn Automorphism>);

impl Automorphism for Inverse {
    fn chamber(&self, c: &Chamber) -> Result<Chamber> {
        self.0.preimage(c)
    }

    fn preimage(&self, c: &Chamber) -> Result<Chamber> {
        self.0.chamber(c)
    }

    fn sigma(&self, c: &Chamber) -> Result<VertexPerm> {
        Ok(self.0.sigma(&self.0.preimage(c)?)?.inverse())
    }
}
