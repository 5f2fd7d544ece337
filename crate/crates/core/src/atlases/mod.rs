//! Typing maps, typed atlases and the automorphisms they determine.
//!
//! A typed atlas assigns every vertex a type and every rank-1 level class a
//! simply transitive action on its columns. Actions are encoded by labeling
//! the columns of each class with elements of `G_i`, so the action of `g` is
//! left multiplication on labels.

mod demo;
mod extend;
mod twist;


pub use demo::{commensuration_demo, sample_ball, DemoReport, DemoSample};
pub use extend::{extend_automorphism, transfer_gallery, Extension};
pub use twist::{Automorphism, Composite, GroupTwist, Inverse, Translation, TwistMap, TwistedElement};

use crate::building::{BVertex, Building, Chamber, Gallery, LevelClassId};
use crate::error::{domain, input, Error, Result};
use crate::groupoids::{check_extension, ResidueGroupoid};
use crate::parallel;
use crate::report::CheckReport;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::{Element, Syllable};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

/// Per-chamber permutations `τ_C`: the vertex of standard type `J` in `C`
/// has type `τ_C(J)`.
#[derive(Clone)]
pub enum Typing {
    Standard,
    Constant(VertexPerm),
    /// `τ_C = sigma(φ_{C,C_*})` for a groupoid on the whole building.
    Groupoid(ResidueGroupoid),
    /// Sparse table; missing chambers are untwisted.
    Table(Arc<HashMap<Chamber, VertexPerm>>),
}

/// Column labelings of rank-1 classes.
#[derive(Clone, Debug)]
pub enum Labels {
    /// Column `c` gets label `c⁻¹`, reading indices of `G_j` in `G_i`.
    Standard,
    /// The labels pushed forward from [`Labels::Standard`] by a twist.
    Twist(GroupTwist),
    /// Explicit labels per class, indexed by column.
    Table { entries: Arc<BTreeMap<LevelClassId, Vec<u32>>>, fallback: Box<Labels> },
}

/// A letter `(i, g)` with `g ≠ 1` in `G_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtlasLetter {
    pub vertex: u32,
    pub elt: u32,
}

pub type AtlasWord = Vec<AtlasLetter>;

/// A typing map together with an atlas of class actions.
#[derive(Clone)]
pub enum TypedAtlas {
    Local { building: Building, typing: Typing, labels: Labels },
    /// `f_*(inner)`.
    Pushed { building: Building, f: Arc<dyn Automorphism>, inner: Arc<TypedAtlas> },
}

impl std::fmt::Debug for TypedAtlas {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypedAtlas::Local { labels, .. } => f.debug_struct("TypedAtlas").field("labels", labels).finish(),
            TypedAtlas::Pushed { inner, .. } => f.debug_tuple("Pushed").field(inner).finish(),
        }
    }
}

/// The atlas `(t_Γ, 𝒜_Γ)` with `𝒜_Γ(g)(C_γ) = C_{γg⁻¹}`.
pub fn standard_atlas(b: &Building) -> TypedAtlas {
    TypedAtlas::Local { building: b.clone(), typing: Typing::Standard, labels: Labels::Standard }
}

/// The atlas `F_*(t_Γ, 𝒜_Γ)` for the automorphism `C_x ↦ C_{F(x)}`.
pub fn twisted_atlas(b: &Building, twist: &GroupTwist) -> TypedAtlas {
    TypedAtlas::Local {
        building: b.clone(),
        typing: Typing::Constant(twist.perm().inverse()),
        labels: Labels::Twist(twist.clone()),
    }
}

/// The atlas typed by `t(v) = t_Γ(φ_{C,C_*}(v))` with the given labels.
pub fn atlas_from_groupoid(phi: &ResidueGroupoid, labels: Labels) -> Result<TypedAtlas> {
    let b = phi.building();
    if phi.j() != b.graph().all() {
        return input(format!("typing needs a groupoid on the whole building, got type {}", phi.j()));
    }
    let report = check_extension(b, phi.j(), &phi.chambers(), phi.rule().as_ref());
    if let Some(v) = report.violations.first() {
        return domain(format!("groupoid fails {}: {}", v.kind, v.witness));
    }
    Ok(TypedAtlas::Local { building: b.clone(), typing: Typing::Groupoid(phi.clone()), labels })
}

/// `sigma(φ_{λC_*,C_*} ∘ λ)`, the chamber holonomy of `λ`.
pub fn chamber_holonomy(phi: &ResidueGroupoid, lambda: &Element) -> Result<VertexPerm> {
    let b = phi.building();
    phi.sigma(&b.translate_chamber(lambda, &Chamber::base()), &Chamber::base())
}

impl TypedAtlas {
    pub fn building(&self) -> &Building {
        match self {
            TypedAtlas::Local { building, .. } | TypedAtlas::Pushed { building, .. } => building,
        }
    }

    pub fn push_forward(&self, f: Arc<dyn Automorphism>) -> TypedAtlas {
        TypedAtlas::Pushed { building: self.building().clone(), f, inner: Arc::new(self.clone()) }
    }

    /// `τ_C`.
    pub fn tau(&self, c: &Chamber) -> Result<VertexPerm> {
        match self {
            TypedAtlas::Local { building, typing, .. } => match typing {
                Typing::Standard => Ok(VertexPerm::identity(building.graph().n())),
                Typing::Constant(p) => Ok(p.clone()),
                Typing::Groupoid(phi) => phi.sigma(c, &Chamber::base()),
                Typing::Table(t) => Ok(t.get(c).cloned().unwrap_or_else(|| VertexPerm::identity(building.graph().n()))),
            },
            TypedAtlas::Pushed { f, inner, .. } => {
                let d = f.preimage(c)?;
                Ok(inner.tau(&d)?.compose(&f.sigma(&d)?.inverse()))
            }
        }
    }

    /// `t(v)`, read in the chamber `C_{rep(v)}`.
    pub fn t(&self, v: &BVertex) -> Result<VertexSet> {
        Ok(self.tau(&Chamber(v.rep.clone()))?.apply_set(v.ty))
    }

    /// `𝒜_{[v]}(g)(d)` for a rank-1 vertex `v` and `d ∈ 𝒞([v])`.
    pub fn act(&self, v: &BVertex, g: u32, d: &Chamber) -> Result<Chamber> {
        match self {
            TypedAtlas::Local { building: b, labels, .. } => {
                let Some(j) = v.ty.single() else {
                    return domain(format!("atlas actions live on rank-1 classes, got type {}", v.ty));
                };
                let gr = b.graph();
                let class = b.level_class(v);
                let delta = gr.left_quotient(&class.rep, &d.0);
                if !gr.in_parabolic(&delta, gr.perp_closed_unchecked(v.ty)) {
                    return domain(format!("{:?} is not in the residue of the class of {v:?}", d.0));
                }
                let i = self.single_type(v)?;
                let gi = gr.group(i);
                if g >= gi.order() {
                    return input(format!("{g} is not an element of G_{}", gr.name(i)));
                }
                let col = gr.coordinate(&delta, j);
                let label = labels.label(b, &class, i, col)?;
                let target = labels.unlabel(b, &class, i, gi.mul(g, label))?;
                let gj = gr.group(j);
                let step = gj.mul(gj.inv(col), target);
                Ok(if step == 0 { d.clone() } else { b.step(d, Syllable::new(j, step)) })
            }
            TypedAtlas::Pushed { building: b, f, inner } => {
                let v0 = inverse_vertex(b, f.as_ref(), v)?;
                f.chamber(&inner.act(&v0, g, &f.preimage(d)?)?)
            }
        }
    }

    fn single_type(&self, v: &BVertex) -> Result<usize> {
        let t = self.t(v)?;
        t.single().ok_or_else(|| Error::Internal(format!("rank-1 vertex {v:?} has type {t}")))
    }

    /// The letter of an adjacent pair.
    pub fn letter(&self, c1: &Chamber, c2: &Chamber) -> Result<AtlasLetter> {
        match self {
            TypedAtlas::Local { building: b, labels, .. } => {
                let Some(j) = b.adjacency(c1, c2) else {
                    return input(format!("{:?} and {:?} are not adjacent", c1.0, c2.0));
                };
                let gr = b.graph();
                let v = b.vertex_in(c1, VertexSet::singleton(j));
                let i = self.single_type(&v)?;
                let class = b.level_class(&v);
                let l1 = labels.label(b, &class, i, gr.coordinate(&gr.left_quotient(&class.rep, &c1.0), j))?;
                let l2 = labels.label(b, &class, i, gr.coordinate(&gr.left_quotient(&class.rep, &c2.0), j))?;
                let gi = gr.group(i);
                Ok(AtlasLetter { vertex: i as u32, elt: gi.mul(l2, gi.inv(l1)) })
            }
            TypedAtlas::Pushed { f, inner, .. } => inner.letter(&f.preimage(c1)?, &f.preimage(c2)?),
        }
    }

    /// The chamber reached from `c` by one letter.
    pub fn apply_letter(&self, c: &Chamber, s: AtlasLetter) -> Result<Chamber> {
        let b = self.building();
        let gr = b.graph();
        let i = s.vertex as usize;
        if i >= gr.n() || s.elt == 0 || s.elt >= gr.order(i) {
            return input(format!("{s:?} is not a letter"));
        }
        let j = self.tau(c)?.inverse().apply(i);
        self.act(&b.vertex_in(c, VertexSet::singleton(j)), s.elt, c)
    }

    /// Checks the typing conditions on the chambers of the radius ball.
    pub fn validate_typing(&self, radius: usize) -> CheckReport {
        let b = self.building();
        let gr = b.graph();
        let chambers = b.ball(radius);
        let reports = parallel::map(&chambers, |c| {
            let mut r = CheckReport::new("typing");
            let tau = match self.tau(c) {
                Ok(t) => t,
                Err(e) => {
                    r.violation("evaluation", json!({ "chamber": c, "error": e.to_string() }));
                    return r;
                }
            };
            r.check(gr.is_automorphism(&tau) && gr.preserves_orders(&tau), "admissible", || {
                json!({ "chamber": c, "sigma": tau })
            });
            for v in b.chamber_vertices(c) {
                let here = tau.apply_set(v.ty);
                let t = self.t(&v);
                r.check(t.as_ref().ok() == Some(&here), "consistency", || json!({ "chamber": c, "vertex": v }));
                if let Some(m) = here.single() {
                    r.check(b.lower_degree(&v) == gr.order(m) as usize, "lower degree", || json!({ "vertex": v }));
                }
                for i in gr.perp_unchecked(v.ty).iter() {
                    for e in gr.group(i).non_identity() {
                        let u = b.vertex_in(&b.step(c, Syllable::new(i, e)), v.ty);
                        let tu = self.t(&u);
                        r.check(tu.as_ref().ok() == Some(&here), "level class", || json!({ "vertex": v, "other": u }));
                    }
                }
            }
            r
        });
        let mut out = CheckReport::new("typing");
        reports.into_iter().for_each(|r| out.absorb(r));
        out
    }

    /// Checks the atlas conditions for the rank-1 classes meeting the radius ball.
    pub fn validate_atlas(&self, radius: usize) -> CheckReport {
        let b = self.building();
        let gr = b.graph();
        let ball = b.ball(radius);
        let vertices: Vec<BVertex> =
            b.vertices_of(&ball).into_iter().filter(|v| v.rank() == 1).collect::<BTreeSet<_>>().into_iter().collect();
        let reports = parallel::map(&vertices, |v| {
            let mut r = CheckReport::new("atlas");
            let i = match self.single_type(v) {
                Ok(i) => i,
                Err(e) => {
                    r.violation("rank", json!({ "vertex": v, "error": e.to_string() }));
                    return r;
                }
            };
            let j = v.ty.single().expect("rank 1");
            let gi = gr.group(i);
            r.check(gi.order() == gr.order(j), "column count", || json!({ "vertex": v }));
            for d in b.chambers_containing(v) {
                let mut orbit = BTreeSet::new();
                let mut images = Vec::new();
                for g in gi.elements() {
                    match self.act(v, g, &d) {
                        Ok(x) => {
                            orbit.insert(x.clone());
                            images.push(x);
                        }
                        Err(e) => {
                            r.violation("evaluation", json!({ "vertex": v, "chamber": d, "error": e.to_string() }));
                            return r;
                        }
                    }
                }
                r.check(images[0] == d, "identity", || json!({ "vertex": v, "chamber": d }));
                let residue: BTreeSet<Chamber> = b.residue(v.ty, &d, None).expect("spherical").into_iter().collect();
                r.check(orbit == residue, "simply transitive on the first factor", || json!({ "vertex": v, "chamber": d }));
                for g in gi.elements() {
                    for h in gi.elements() {
                        let lhs = self.act(v, g, &images[h as usize]).ok();
                        r.check(lhs.as_ref() == Some(&images[gi.mul(g, h) as usize]), "action", || {
                            json!({ "vertex": v, "chamber": d, "g": g, "h": h })
                        });
                    }
                }
            }
            // Chambers of the class away from v, one step into the second factor.
            for k in gr.perp_unchecked(v.ty).iter() {
                let d = b.step(&Chamber(v.rep.clone()), Syllable::new(k, 1));
                let u = b.vertex_in(&d, v.ty);
                for g in gi.non_identity() {
                    let x = self.act(v, g, &d).ok();
                    let y = self.act(&u, g, &d).ok();
                    r.check(x.is_some() && x == y, "class independence", || json!({ "vertex": v, "other": u }));
                    let same = x.as_ref().is_some_and(|x| *x != d && b.residue_contains(v.ty, &d, x));
                    r.check(same, "second factor", || json!({ "vertex": v, "chamber": d, "g": g }));
                }
            }
            r
        });
        let mut out = CheckReport::new("atlas");
        reports.into_iter().for_each(|r| out.absorb(r));
        out
    }

    /// `{typing: [{chamber, sigma}], actions: [{class, column_labels}]}` on the radius ball.
    pub fn to_json(&self, radius: usize) -> Result<Value> {
        let b = self.building();
        let gr = b.graph();
        let ball = b.ball(radius);
        let mut typing = Vec::new();
        for c in &ball {
            typing.push(json!({ "chamber": c, "sigma": self.tau(c)? }));
        }
        let mut classes = BTreeMap::new();
        for v in b.vertices_of(&ball).into_iter().filter(|v| v.rank() == 1) {
            classes.entry(b.level_class(&v)).or_insert(v);
        }
        let mut actions = Vec::new();
        for (class, v) in classes {
            let j = v.ty.single().expect("rank 1");
            let base = Chamber(class.rep.clone());
            let mut labels = vec![0];
            for c in gr.group(j).non_identity() {
                labels.push(self.letter(&base, &b.step(&base, Syllable::new(j, c)))?.elt);
            }
            actions.push(json!({ "class": class, "type": self.t(&v)?, "column_labels": labels }));
        }
        Ok(json!({ "typing": typing, "actions": actions }))
    }
}

fn inverse_vertex(b: &Building, f: &dyn Automorphism, v: &BVertex) -> Result<BVertex> {
    let d = f.preimage(&Chamber(v.rep.clone()))?;
    Ok(b.vertex_in(&d, f.sigma(&d)?.inverse().apply_set(v.ty)))
}

impl Labels {
    fn label(&self, b: &Building, class: &LevelClassId, i: usize, col: u32) -> Result<u32> {
        let gr = b.graph();
        match self {
            Labels::Standard => Ok(gr.group(i).inv(col)),
            Labels::Twist(f) => {
                let j = class.ty.single().expect("rank 1");
                if f.perm().apply(i) != j {
                    return domain(format!("type {} does not match the twist on a class of type {}", gr.name(i), gr.name(j)));
                }
                Ok(gr.group(i).inv(f.unmap(i, col)))
            }
            Labels::Table { entries, fallback } => match entries.get(class) {
                Some(row) => row
                    .get(col as usize)
                    .copied()
                    .ok_or_else(|| Error::Input(format!("label row of {class:?} is too short"))),
                None => fallback.label(b, class, i, col),
            },
        }
    }

    fn unlabel(&self, b: &Building, class: &LevelClassId, i: usize, label: u32) -> Result<u32> {
        let gr = b.graph();
        match self {
            Labels::Standard => Ok(gr.group(i).inv(label)),
            Labels::Twist(f) => {
                let j = class.ty.single().expect("rank 1");
                if f.perm().apply(i) != j {
                    return domain(format!("type {} does not match the twist on a class of type {}", gr.name(i), gr.name(j)));
                }
                Ok(f.map(i, gr.group(i).inv(label)))
            }
            Labels::Table { entries, fallback } => match entries.get(class) {
                Some(row) => row
                    .iter()
                    .position(|&x| x == label)
                    .map(|p| p as u32)
                    .ok_or_else(|| Error::Input(format!("label {label} is missing from the row of {class:?}"))),
                None => fallback.unlabel(b, class, i, label),
            },
        }
    }
}

/// The letters of a gallery.
pub fn atlas_word(atlas: &TypedAtlas, gallery: &Gallery) -> Result<AtlasWord> {
    let chambers = atlas.building().gallery_chambers(gallery)?;
    chambers.windows(2).map(|w| atlas.letter(&w[0], &w[1])).collect()
}

/// The unique gallery from `start` with the given letters.
pub fn gallery_from_word(atlas: &TypedAtlas, word: &[AtlasLetter], start: &Chamber) -> Result<Gallery> {
    let b = atlas.building();
    let mut letters = Vec::with_capacity(word.len());
    let mut cur = start.clone();
    for &s in word {
        let next = atlas.apply_letter(&cur, s)?;
        letters.push(b.delta(&cur, &next).syllables()[0]);
        cur = next;
    }
    Ok(Gallery { start: start.clone(), letters })
}
