use super::order::ascent;
use super::{check_extension, extend_groupoid, gamma_groupoid, AdjacentRule, ClassOrder, ResidueGroupoid};
use crate::building::{BVertex, Building, Chamber, LevelClassId};
use crate::error::{input, Error, Result};
use crate::parallel;
use crate::report::CheckReport;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::{Element, Syllable};
use serde_json::json;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A hierarchy of residue-groupoids over every level class, evaluated lazily.
///
/// For each nonempty spherical type `J` the hierarchy holds a section: a
/// groupoid `ψ₀` on `𝒞(v₀)`, `v₀` the type-`J` vertex of `C_*`. The groupoid
/// of a class `K` of type `J` extends `K.rep·ψ₀` across `𝒞(K)` using the
/// classes above `K`.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    building: Building,
    order: ClassOrder,
    sections: BTreeMap<VertexSet, ResidueGroupoid>,
    radius: usize,
}

impl Hierarchy {
    pub fn building(&self) -> &Building {
        &self.inner.building
    }

    pub fn order(&self) -> &ClassOrder {
        &self.inner.order
    }

    /// Truncation radius for infinite residues.
    pub fn radius(&self) -> usize {
        self.inner.radius
    }

    pub fn section(&self, j: VertexSet) -> Option<&ResidueGroupoid> {
        self.inner.sections.get(&j)
    }

    /// Spherical types from `⪯`-largest to smallest.
    pub fn levels(&self) -> Vec<VertexSet> {
        let mut out = self.building().spherical_sets().to_vec();
        out.sort_by(|a, b| self.order().cmp_types(*b, *a).then(b.cmp(a)));
        out
    }

    /// `sigma` of `φ^K_{C₁,C₂}` for adjacent chambers of `𝒞(K)`.
    pub fn sigma(&self, class: &LevelClassId, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        let b = self.building();
        let closed = b.graph().perp_closed_unchecked(class.ty);
        let anchor = Chamber(class.rep.clone());
        if !b.residue_contains(closed, &anchor, c1) || !b.residue_contains(closed, &anchor, c2) {
            return input(format!("{:?}, {:?} are not both in the residue of class {class:?}", c1.0, c2.0));
        }
        let Some(i) = b.adjacency(c1, c2) else {
            return input(format!("{:?}, {:?} are not adjacent", c1.0, c2.0));
        };
        if class.ty.contains(i) {
            let v = b.vertex_in(&anchor, class.ty);
            let psi = self.inner.sections[&class.ty].translate(&class.rep);
            self.barpsi_sigma(&v, &psi, c1, c2)
        } else {
            self.phi_step(class.ty, c1, c2)
        }
    }

    /// The adjacent map on a `J⊥`-residue, read from the class of `v₁⇑u`.
    fn phi_step(&self, j: VertexSet, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        let b = self.building();
        let i = b.adjacency(c1, c2).expect("adjacent");
        let w = ascent(b, &b.vertex_in(c1, j), &b.vertex_in(c1, VertexSet::singleton(i)), self.order())?;
        self.sigma(&b.level_class(&w), c1, c2)
    }

    /// `φ_{from,to}` along the canonical gallery of a `J⊥`-residue.
    fn phi_path(&self, j: VertexSet, from: &Chamber, to: &Chamber) -> Result<VertexPerm> {
        let b = self.building();
        let mut acc = VertexPerm::identity(b.graph().n());
        let mut cur = from.clone();
        for &s in b.delta(from, to).syllables() {
            let next = b.step(&cur, s);
            acc = self.phi_step(j, &cur, &next)?.compose(&acc);
            cur = next;
        }
        Ok(acc)
    }

    /// The unique chamber of `𝒞(v) ∩ 𝒞(J⊥, c)`.
    fn project(&self, v: &BVertex, c: &Chamber) -> Chamber {
        let g = self.building().graph();
        Chamber(g.multiply(&v.rep, &g.retract(&g.left_quotient(&v.rep, &c.0), v.ty)))
    }

    /// `ψ̄_{C₁,C₂}` for `i`-adjacent chambers with `i ∈ t(v)`.
    fn barpsi_sigma(&self, v: &BVertex, psi: &ResidueGroupoid, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        let p1 = self.project(v, c1);
        let p2 = self.project(v, c2);
        let down = self.phi_path(v.ty, c1, &p1)?;
        let across = psi.sigma(&p1, &p2)?;
        let up = self.phi_path(v.ty, &p2, c2)?;
        Ok(up.compose(&across.compose(&down)))
    }

    /// `φ^K` as a groupoid on `𝒞(K)`, truncated to [`Hierarchy::radius`] if infinite.
    pub fn groupoid(&self, class: &LevelClassId) -> ResidueGroupoid {
        let b = self.building();
        let closed = b.graph().perp_closed_unchecked(class.ty);
        let radius = (!b.graph().is_spherical(closed)).then_some(self.radius());
        let rule = Arc::new(ClassRule { hierarchy: self.clone(), class: class.clone() });
        ResidueGroupoid::from_rule(b, closed, Chamber(class.rep.clone()), radius, rule).expect("radius set")
    }

    /// Restriction, equivariance and groupoid checks on the `radius` ball.
    pub fn verify(&self, radius: usize) -> Vec<CheckReport> {
        vec![self.check_restriction(radius), self.check_equivariance(radius), self.check_groupoids(radius)]
    }

    /// `φ^{[v]}_{C,C'} = φ^{[v⇑u]}_{C,C'}` for every admissible configuration.
    pub fn check_restriction(&self, radius: usize) -> CheckReport {
        let b = self.building();
        let g = b.graph();
        let chambers = b.ball(radius);
        let parts = parallel::map(&chambers, |c| {
            let mut r = CheckReport::new("restriction");
            for &j in b.spherical_sets() {
                let v = b.vertex_in(c, j);
                for i in g.perp_unchecked(j).iter() {
                    let u = b.vertex_in(c, VertexSet::singleton(i));
                    let w = match ascent(b, &v, &u, self.order()) {
                        Ok(w) => w,
                        Err(e) => {
                            r.violation("ascent", json!({ "v": v, "u": u, "error": e.to_string() }));
                            continue;
                        }
                    };
                    for e in g.group(i).non_identity() {
                        let c2 = b.step(c, Syllable::new(i, e));
                        let lhs = self.sigma(&b.level_class(&v), c, &c2);
                        let rhs = self.sigma(&b.level_class(&w), c, &c2);
                        r.check(lhs.is_ok() && lhs == rhs, "restriction", || {
                            json!({ "v": v, "u": u, "from": c, "to": c2 })
                        });
                    }
                }
            }
            r
        });
        merge("restriction", parts)
    }

    /// `λ·φ^K = φ^{λK}` on adjacent pairs near each class anchor, for `λ` in the ball.
    pub fn check_equivariance(&self, radius: usize) -> CheckReport {
        self.check_equivariance_for(&self.building().graph().enumerate_ball(radius.min(2)), radius)
    }

    pub fn check_equivariance_for(&self, elements: &[Element], radius: usize) -> CheckReport {
        let b = self.building();
        let classes = classes_near(b, radius.min(1));
        let parts = parallel::map(&classes, |k| {
            let mut r = CheckReport::new("equivariance");
            let closed = b.graph().perp_closed_unchecked(k.ty);
            let near = b.residue(closed, &Chamber(k.rep.clone()), Some(1)).expect("radius given");
            for (c1, c2) in super::adjacent_pairs_in(b, closed, &near) {
                let here = self.sigma(k, &c1, &c2);
                for lambda in elements {
                    let lk = b.translate_class(lambda, k);
                    let there = self.sigma(&lk, &b.translate_chamber(lambda, &c1), &b.translate_chamber(lambda, &c2));
                    r.check(here.is_ok() && here == there, "equivariance", || {
                        json!({ "class": k, "lambda": lambda, "from": c1, "to": c2 })
                    });
                }
            }
            r
        });
        merge("equivariance", parts)
    }

    /// Extension conditions for the groupoid of each class near `C_*`.
    pub fn check_groupoids(&self, radius: usize) -> CheckReport {
        let b = self.building();
        let classes = classes_near(b, radius.min(1));
        let parts = parallel::map(&classes, |k| {
            let closed = b.graph().perp_closed_unchecked(k.ty);
            let trunc = (!b.graph().is_spherical(closed)).then_some(radius);
            let chambers = b.residue(closed, &Chamber(k.rep.clone()), trunc).expect("radius given");
            let rule = ClassRule { hierarchy: self.clone(), class: k.clone() };
            let mut r = check_extension(b, closed, &chambers, &rule);
            r.name = "groupoids".into();
            r
        });
        merge("groupoids", parts)
    }
}

fn classes_near(b: &Building, radius: usize) -> Vec<LevelClassId> {
    let mut out: Vec<LevelClassId> = b.vertices_of(&b.ball(radius)).iter().map(|v| b.level_class(v)).collect();
    out.sort();
    out.dedup();
    out
}

fn merge(name: &str, parts: Vec<CheckReport>) -> CheckReport {
    let mut report = CheckReport::new(name);
    for p in parts {
        report.absorb(p);
    }
    report
}

struct ClassRule {
    hierarchy: Hierarchy,
    class: LevelClassId,
}

impl AdjacentRule for ClassRule {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        self.hierarchy.sigma(&self.class, c1, c2)
    }
}

struct PhiRule {
    hierarchy: Hierarchy,
    j: VertexSet,
}

impl AdjacentRule for PhiRule {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        self.hierarchy.phi_step(self.j, c1, c2)
    }
}

pub(super) struct BarPsiRule {
    pub(super) hierarchy: Hierarchy,
    pub(super) v: BVertex,
    pub(super) psi: ResidueGroupoid,
}

impl AdjacentRule for BarPsiRule {
    fn sigma(&self, c1: &Chamber, c2: &Chamber) -> Result<VertexPerm> {
        let b = self.hierarchy.building();
        let Some(i) = b.adjacency(c1, c2) else {
            return input(format!("{:?}, {:?} are not adjacent", c1.0, c2.0));
        };
        if self.v.ty.contains(i) {
            self.hierarchy.barpsi_sigma(&self.v, &self.psi, c1, c2)
        } else {
            self.hierarchy.phi_step(self.v.ty, c1, c2)
        }
    }
}

/// Assembles a hierarchy from per-type sections; missing types get the
/// `Γ`-induced groupoid. Each section must be a groupoid on `𝒞(J, C_*)`.
pub fn build_hierarchy(
    b: &Building,
    order: ClassOrder,
    sections: Vec<ResidueGroupoid>,
    radius: usize,
) -> Result<Hierarchy> {
    let g = b.graph();
    if order.labels().len() != g.n() {
        return input("class order was built for a different graph");
    }
    let mut map = BTreeMap::new();
    for s in sections {
        if s.j().is_empty() || !g.is_spherical(s.j()) || *s.base() != Chamber::base() {
            return input(format!("section of type {} must be a groupoid on the residue of C_*", s.j()));
        }
        let report = s.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::Validation { condition: format!("section {}: {}", s.j(), v.kind), witness: v.witness.to_string() });
        }
        map.insert(s.j(), s);
    }
    for &j in b.spherical_sets() {
        if !j.is_empty() && !map.contains_key(&j) {
            map.insert(j, gamma_groupoid(b, j, &Chamber::base(), None)?);
        }
    }
    Ok(Hierarchy { inner: Arc::new(Inner { building: b.clone(), order, sections: map, radius }) })
}

/// The hierarchy with every section `Γ`-induced, verified on the `radius` ball.
pub fn build_gamma_hierarchy(b: &Building, order: ClassOrder, radius: usize) -> Result<Hierarchy> {
    let h = build_hierarchy(b, order, Vec::new(), radius)?;
    for report in h.verify(radius) {
        if let Some(v) = report.violations.first() {
            return Err(Error::Internal(format!("hierarchy {} check failed: {}", report.name, v.witness)));
        }
    }
    Ok(h)
}

/// The groupoid on `𝒞(J⊥, C′)` whose adjacent maps come from `φ^{[v₁⇑u]}`.
pub fn phi_from_hierarchy(
    h: &Hierarchy,
    j: VertexSet,
    cprime: &Chamber,
    radius: Option<usize>,
) -> Result<ResidueGroupoid> {
    let b = h.building();
    let perp = b.graph().perp(j)?;
    let radius = if b.graph().is_spherical(perp) { None } else { Some(radius.unwrap_or(h.radius())) };
    extend_groupoid(b, perp, cprime, Arc::new(PhiRule { hierarchy: h.clone(), j }), radius)
}

/// Extends a groupoid on `𝒞(v)` across `𝒞([v])` using the hierarchy's `φ`.
pub fn barpsi_extend(h: &Hierarchy, v: &BVertex, psi: &ResidueGroupoid, radius: Option<usize>) -> Result<ResidueGroupoid> {
    let b = h.building();
    if psi.j() != v.ty || !psi.contains(&Chamber(v.rep.clone())) {
        return input(format!("section is not a groupoid on the chambers of {v:?}"));
    }
    let report = psi.validate();
    if let Some(x) = report.violations.first() {
        return Err(Error::Validation { condition: format!("section: {}", x.kind), witness: x.witness.to_string() });
    }
    let closed = b.graph().perp_closed(v.ty)?;
    let radius = if b.graph().is_spherical(closed) { None } else { Some(radius.unwrap_or(h.radius())) };
    let rule = BarPsiRule { hierarchy: h.clone(), v: v.clone(), psi: psi.clone() };
    extend_groupoid(b, closed, &Chamber(v.rep.clone()), Arc::new(rule), radius)
}
