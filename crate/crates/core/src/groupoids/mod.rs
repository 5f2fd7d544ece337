//! Residue-groupoids on chamber-residues, and the hierarchy built from them.
//!
//! A map between two chambers that preserves centers is encoded by a graph
//! automorphism `sigma`: the vertex of standard type `J` in the source goes to
//! the vertex of standard type `sigma(J)` in the target. Groupoids store only
//! the maps between adjacent chambers and compose along canonical galleries.

mod hierarchy;
mod holonomy;
mod order;

pub use hierarchy::{barpsi_extend, build_gamma_hierarchy, build_hierarchy, phi_from_hierarchy, Hierarchy};
pub use holonomy::{enumerate_residue_groupoids, groupoid_from_potential, groupoid_holonomy, Holonomy};
pub use order::{ascent, class_order_for_gamma, common_chamber, ClassOrder};

use crate::building::{BVertex, Building, Chamber};
use crate::error::{input, Error, Result};
use crate::parallel;
use crate::report::CheckReport;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::{Element, Syllable};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::Arc;

/// A center-preserving isomorphism `from → to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberMap {
    pub from: Chamber,
    pub to: Chamber,
    pub sigma: VertexPerm,
}

impl ChamberMap {
    pub fn apply(&self, b: &Building, v: &BVertex) -> Result<BVertex> {
        if !b.contains(&self.from, v) {
            return input(format!("{v:?} is not a vertex of {:?}", self.from));
        }
        Ok(b.vertex_in(&self.to, self.sigma.apply_set(v.ty)))
    }

    /// The induced bijection on the vertices of `from`.
    pub fn vertex_pairs(&self, b: &Building) -> Vec<(BVertex, BVertex)> {
        b.spherical_sets()
            .iter()
            .map(|&k| (b.vertex_in(&self.from, k), b.vertex_in(&self.to, self.sigma.apply_set(k))))
            .collect()
    }
}

/// Checks that the vertex map induced by `sigma` on one chamber is a
/// bijection onto the vertices of the target preserving `≤` and lower degree.
pub fn encoding_is_cubical(b: &Building, sigma: &VertexPerm) -> bool {
    let g = b.graph();
    if sigma.len() != g.n() || !g.is_automorphism(sigma) {
        return false;
    }
    let m = ChamberMap { from: Chamber::base(), to: Chamber::base(), sigma: sigma.clone() };
    let pairs = m.vertex_pairs(b);
    let mut images: Vec<_> = pairs.iter().map(|p| p.1.clone()).collect();
    images.sort();
    images.dedup();
    if images.len() != pairs.len() {
        return false;
    }
    pairs.iter().all(|(u, fu)| {
        pairs.iter().all(|(v, fv)| b.leq(u, v) == b.leq(fu, fv))
            && (u.rank() != 1 || b.lower_degree(u) == b.lower_degree(fu))
    })
}

/// Supplies `sigma` for ordered pairs of adjacent chambers.
pub trait AdjacentRule: Send + Sync {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm>;
}

/// Every map is the restriction of a group element (identity `sigma`).
pub struct IdentityRule(pub usize);

impl AdjacentRule for IdentityRule {
    fn sigma(&self, _: &Chamber, _: &Chamber) -> Result<VertexPerm> {
        Ok(VertexPerm::identity(self.0))
    }
}

/// Explicit maps; pairs without an entry are an error.
pub struct TableRule(pub HashMap<(Chamber, Chamber), VertexPerm>);

impl AdjacentRule for TableRule {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        self.0
            .get(&(c1.clone(), c2.clone()))
            .cloned()
            .ok_or_else(|| Error::Input(format!("no map given for {:?} → {:?}", c1.0, c2.0)))
    }
}

/// `sigma(C₁, C₂) = τ(C₂) τ(C₁)⁻¹` for a chamber-indexed family `τ`.
pub struct PotentialRule<F>(pub F);

impl<F> AdjacentRule for PotentialRule<F>
where
    F: Fn(&Chamber) -> VertexPerm + Send + Sync,
{
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        Ok((self.0)(c2).compose(&(self.0)(c1).inverse()))
    }
}

/// Conjugation of a rule by left multiplication by `λ`.
struct TranslatedRule {
    inner: Arc<dyn AdjacentRule>,
    inverse: Element,
    building: Building,
}

impl AdjacentRule for TranslatedRule {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        let b = &self.building;
        self.inner.sigma(&b.translate_chamber(&self.inverse, c1), &b.translate_chamber(&self.inverse, c2))
    }
}

/// A `𝒞(J, C)`-groupoid, optionally truncated to `radius` steps from `base`.
#[derive(Clone)]
pub struct ResidueGroupoid {
    building: Building,
    j: VertexSet,
    base: Chamber,
    radius: Option<usize>,
    rule: Arc<dyn AdjacentRule>,
}

impl std::fmt::Debug for ResidueGroupoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResidueGroupoid")
            .field("j", &self.j)
            .field("base", &self.base)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl ResidueGroupoid {
    /// Wraps a rule without validating it; see [`extend_groupoid`].
    pub fn from_rule(
        building: &Building,
        j: VertexSet,
        base: Chamber,
        radius: Option<usize>,
        rule: Arc<dyn AdjacentRule>,
    ) -> Result<Self> {
        if radius.is_none() && !building.graph().is_spherical(j) {
            return input(format!("residue of non-spherical type {j} needs a radius"));
        }
        Ok(ResidueGroupoid { building: building.clone(), j, base, radius, rule })
    }

    pub fn building(&self) -> &Building {
        &self.building
    }

    pub fn j(&self) -> VertexSet {
        self.j
    }

    pub fn base(&self) -> &Chamber {
        &self.base
    }

    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    pub fn rule(&self) -> &Arc<dyn AdjacentRule> {
        &self.rule
    }

    /// The chambers covered, sorted.
    pub fn chambers(&self) -> Vec<Chamber> {
        self.building.residue(self.j, &self.base, self.radius).expect("checked at construction")
    }

    pub fn contains(&self, c: &Chamber) -> bool {
        self.building.residue_contains(self.j, &self.base, c)
    }

    /// Ordered adjacent pairs among [`ResidueGroupoid::chambers`].
    pub fn adjacent_pairs(&self) -> Vec<(Chamber, Chamber)> {
        let chambers = self.chambers();
        adjacent_pairs_in(&self.building, self.j, &chambers)
    }

    /// `sigma` of `φ_{C₁,C₂}` for arbitrary chambers of the residue.
    pub fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        if !self.contains(c1) || !self.contains(c2) {
            return input(format!("{:?}, {:?} not both in the {}-residue of {:?}", c1.0, c2.0, self.j, self.base.0));
        }
        let b = &self.building;
        let mut acc = VertexPerm::identity(b.graph().n());
        let mut cur = c1.clone();
        for &s in b.delta(c1, c2).syllables() {
            let next = b.step(&cur, s);
            acc = self.rule.sigma(&cur, &next)?.compose(&acc);
            cur = next;
        }
        Ok(acc)
    }

    pub fn map(&self, c1: &Chamber, c2: &Chamber) -> Result<ChamberMap> {
        Ok(ChamberMap { from: c1.clone(), to: c2.clone(), sigma: self.sigma(c1, c2)? })
    }

    /// `λ·φ`, the groupoid on `λ𝒞(J, C)` with `(λ·φ)_{λC₁,λC₂} = λ∘φ_{C₁,C₂}∘λ⁻¹`.
    pub fn translate(&self, lambda: &Element) -> ResidueGroupoid {
        let b = &self.building;
        ResidueGroupoid {
            building: b.clone(),
            j: self.j,
            base: b.translate_chamber(lambda, &self.base),
            radius: self.radius,
            rule: Arc::new(TranslatedRule {
                inner: self.rule.clone(),
                inverse: b.graph().invert(lambda),
                building: b.clone(),
            }),
        }
    }

    /// Checks the groupoid axioms exhaustively over all pairs and triples.
    pub fn validate(&self) -> CheckReport {
        validate_axioms(self, &self.chambers())
    }

    /// `{J, base, maps}` with one entry per ordered adjacent pair.
    pub fn to_json(&self) -> Result<Value> {
        let mut maps = Vec::new();
        for (c1, c2) in self.adjacent_pairs() {
            let sigma = self.rule.sigma(&c1, &c2)?;
            maps.push(json!({ "from": c1, "to": c2, "sigma": sigma }));
        }
        Ok(json!({ "J": self.j, "base": self.base, "radius": self.radius, "maps": maps }))
    }
}

pub(crate) fn adjacent_pairs_in(b: &Building, j: VertexSet, chambers: &[Chamber]) -> Vec<(Chamber, Chamber)> {
    let set: std::collections::HashSet<&Chamber> = chambers.iter().collect();
    let g = b.graph();
    let mut out = Vec::new();
    for c in chambers {
        for m in j.iter() {
            for e in g.group(m).non_identity() {
                let d = b.step(c, Syllable::new(m, e));
                if set.contains(&d) {
                    out.push((c.clone(), d));
                }
            }
        }
    }
    out
}

fn witness_pair(c1: &Chamber, c2: &Chamber) -> Value {
    json!({ "from": c1, "to": c2 })
}

/// Whether `sigma` fixes every vertex shared by `c1` and `c2`.
fn fixes_intersection(b: &Building, c1: &Chamber, c2: &Chamber, sigma: &VertexPerm) -> bool {
    match b.chamber_intersection(c1, c2) {
        None => true,
        Some(x) => x.shared.iter().all(|v| b.vertex_in(c2, sigma.apply_set(v.ty)) == *v),
    }
}

/// Extension conditions on the adjacent maps of a residue, over `chambers`:
/// order-preserving automorphisms, inverses, triangles, squares, and
/// fixing shared vertices.
pub fn check_extension(b: &Building, j: VertexSet, chambers: &[Chamber], rule: &dyn AdjacentRule) -> CheckReport {
    let g = b.graph();
    let pairs = adjacent_pairs_in(b, j, chambers);
    let set: std::collections::HashSet<&Chamber> = chambers.iter().collect();

    let per_pair = parallel::map(&pairs, |(c1, c2)| {
        let mut r = CheckReport::new("extension");
        let i = b.adjacency(c1, c2).expect("adjacent");
        let s12 = match rule.sigma(c1, c2) {
            Ok(s) => s,
            Err(e) => {
                r.violation("missing", json!({ "pair": witness_pair(c1, c2), "error": e.to_string() }));
                return r;
            }
        };
        let auto = s12.len() == g.n() && g.is_automorphism(&s12);
        r.check(auto && g.preserves_orders(&s12), "automorphism", || json!({ "pair": witness_pair(c1, c2), "sigma": s12 }));
        if !auto {
            return r;
        }
        let inverse_ok = rule.sigma(c2, c1).map(|s21| s21.compose(&s12).is_identity()).unwrap_or(false);
        r.check(inverse_ok, "inverse", || witness_pair(c1, c2));
        r.check(fixes_intersection(b, c1, c2, &s12), "fixes intersection", || {
            json!({ "pair": witness_pair(c1, c2), "sigma": s12 })
        });

        // Triangles in the i-residue, anchored at c1 → c2.
        for e in g.group(i).non_identity() {
            let c3 = b.step(c1, Syllable::new(i, e));
            if c3 == *c2 || !set.contains(&c3) {
                continue;
            }
            let ok = (|| -> Result<bool> {
                let s23 = rule.sigma(c2, &c3)?;
                let s13 = rule.sigma(c1, &c3)?;
                Ok(s23.compose(&s12) == s13)
            })()
            .unwrap_or(false);
            r.check(ok, "triangle", || json!({ "chambers": [c1, c2, &c3] }));
        }

        // Squares with c1 → c2 as the bottom side.
        let d = b.delta(c1, c2);
        let a = d.syllables()[0];
        for k in g.neighbors(i).intersection(j).iter() {
            for e in g.group(k).non_identity() {
                let s = Syllable::new(k, e);
                let c1p = b.step(c1, s);
                let c2p = b.step(c2, s);
                if !set.contains(&c1p) || !set.contains(&c2p) {
                    continue;
                }
                debug_assert_eq!(b.step(&c1p, a), c2p);
                let ok = (|| -> Result<bool> {
                    let right = rule.sigma(c2, &c2p)?.compose(&s12);
                    let left = rule.sigma(&c1p, &c2p)?.compose(&rule.sigma(c1, &c1p)?);
                    Ok(left == right)
                })()
                .unwrap_or(false);
                r.check(ok, "square", || json!({ "square": [c1, c2, &c1p, &c2p] }));
            }
        }
        r
    });
    let mut report = CheckReport::new("extension");
    for r in per_pair {
        report.absorb(r);
    }
    report
}

/// Validates the extension conditions and returns the unique extension to a groupoid.
pub fn extend_groupoid(
    b: &Building,
    j: VertexSet,
    base: &Chamber,
    rule: Arc<dyn AdjacentRule>,
    radius: Option<usize>,
) -> Result<ResidueGroupoid> {
    let groupoid = ResidueGroupoid::from_rule(b, j, base.clone(), radius, rule)?;
    let report = check_extension(b, j, &groupoid.chambers(), groupoid.rule.as_ref());
    if let Some(v) = report.violations.first() {
        return Err(Error::Validation { condition: v.kind.clone(), witness: v.witness.to_string() });
    }
    Ok(groupoid)
}

/// The groupoid induced by `Γ` on `𝒞(J, C)`.
pub fn gamma_groupoid(b: &Building, j: VertexSet, base: &Chamber, radius: Option<usize>) -> Result<ResidueGroupoid> {
    ResidueGroupoid::from_rule(b, j, base.clone(), radius, Arc::new(IdentityRule(b.graph().n())))
}

/// Identity, commutativity and intersection over `chambers`, exhaustively.
pub fn validate_axioms(phi: &ResidueGroupoid, chambers: &[Chamber]) -> CheckReport {
    let b = &phi.building;
    let g = b.graph();
    let sigmas: Vec<Vec<Option<VertexPerm>>> =
        parallel::map(chambers, |c1| chambers.iter().map(|c2| phi.sigma(c1, c2).ok()).collect());
    let rows: Vec<usize> = (0..chambers.len()).collect();
    let parts = parallel::map(&rows, |&x| {
        let mut r = CheckReport::new("groupoid");
        let c1 = &chambers[x];
        r.check(sigmas[x][x].as_ref().is_some_and(|s| s.is_identity()), "identity", || json!(c1));
        for (y, c2) in chambers.iter().enumerate() {
            let Some(s12) = &sigmas[x][y] else {
                r.violation("undefined", witness_pair(c1, c2));
                continue;
            };
            r.check(
                g.is_automorphism(s12) && g.preserves_orders(s12),
                "lower degree",
                || json!({ "pair": witness_pair(c1, c2), "sigma": s12 }),
            );
            r.check(fixes_intersection(b, c1, c2, s12), "intersection", || witness_pair(c1, c2));
            for (z, c3) in chambers.iter().enumerate() {
                let ok = match (&sigmas[y][z], &sigmas[x][z]) {
                    (Some(s23), Some(s13)) => s23.compose(s12) == *s13,
                    _ => false,
                };
                r.check(ok, "commutativity", || json!({ "chambers": [c1, c2, c3] }));
            }
        }
        r
    });
    let mut report = CheckReport::new("groupoid");
    for p in parts {
        report.absorb(p);
    }
    report
}

#[cfg(test)]
mod tests;
