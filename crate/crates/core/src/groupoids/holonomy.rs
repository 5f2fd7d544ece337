use super::hierarchy::{BarPsiRule, Hierarchy};
use super::{fixes_intersection, PotentialRule, ResidueGroupoid};
use crate::building::{BVertex, Building, Chamber};
use crate::error::{domain, Error, Result};
use crate::report::CheckReport;
use crate::sets::VertexPerm;
use crate::word::Element;
use serde::Serialize;
use serde_json::json;
use std::collections::HashMap;
use std::sync::Arc;

/// Upper bound on the number of `𝒞(v)`-groupoids enumerated.
pub const MAX_GROUPOIDS: usize = 4096;

/// Every `𝒞(v)`-groupoid, as `τ(D) = sigma(φ_{D₀,D})` over the sorted chambers
/// of `𝒞(v)` with `D₀` the first.
pub fn enumerate_residue_groupoids(b: &Building, v: &BVertex) -> Result<Vec<Vec<VertexPerm>>> {
    let chambers = b.chambers_containing(v);
    let autos = b.graph().automorphisms(true);
    let adjacent: Vec<Vec<usize>> = (0..chambers.len())
        .map(|k| (0..k).filter(|&l| b.adjacency(&chambers[l], &chambers[k]).is_some()).collect())
        .collect();
    let mut out = Vec::new();
    let mut tau = vec![VertexPerm::identity(b.graph().n())];
    fn search(
        b: &Building,
        chambers: &[Chamber],
        autos: &[VertexPerm],
        adjacent: &[Vec<usize>],
        tau: &mut Vec<VertexPerm>,
        out: &mut Vec<Vec<VertexPerm>>,
    ) -> Result<()> {
        let k = tau.len();
        if k == chambers.len() {
            if out.len() == MAX_GROUPOIDS {
                return domain(format!("more than {MAX_GROUPOIDS} residue groupoids"));
            }
            out.push(tau.clone());
            return Ok(());
        }
        for a in autos {
            let ok = adjacent[k].iter().all(|&l| {
                let sigma = a.compose(&tau[l].inverse());
                fixes_intersection(b, &chambers[l], &chambers[k], &sigma)
            });
            if ok {
                tau.push(a.clone());
                search(b, chambers, autos, adjacent, tau, out)?;
                tau.pop();
            }
        }
        Ok(())
    }
    search(b, &chambers, &autos, &adjacent, &mut tau, &mut out)?;
    Ok(out)
}

/// The `𝒞(v)`-groupoid with potential `tau` over the sorted chambers of `𝒞(v)`.
pub fn groupoid_from_potential(b: &Building, v: &BVertex, tau: &[VertexPerm]) -> Result<ResidueGroupoid> {
    let chambers = b.chambers_containing(v);
    if tau.len() != chambers.len() {
        return Err(Error::Input(format!("expected {} potentials, got {}", chambers.len(), tau.len())));
    }
    let n = b.graph().n();
    let table: HashMap<Chamber, VertexPerm> = chambers.into_iter().zip(tau.iter().cloned()).collect();
    let rule = PotentialRule(move |c: &Chamber| table.get(c).cloned().unwrap_or_else(|| VertexPerm::identity(n)));
    ResidueGroupoid::from_rule(b, v.ty, Chamber(v.rep.clone()), None, Arc::new(rule))
}

/// The holonomy action `Υ(λ): ψ ↦ (λ·ψ̄)|𝒞(v)` on all `𝒞(v)`-groupoids.
#[derive(Clone, Debug, Serialize)]
pub struct Holonomy {
    pub vertex: BVertex,
    pub chambers: Vec<Chamber>,
    /// Potentials of the `𝒞(v)`-groupoids, indexed as in `images`.
    pub groupoids: Vec<Vec<VertexPerm>>,
    /// `(λ, Υ(λ))` with `Υ(λ)[k]` the index of the image of groupoid `k`.
    pub images: Vec<(Element, Vec<usize>)>,
    pub homomorphism: CheckReport,
}

impl Holonomy {
    /// Supplied elements acting trivially.
    pub fn kernel(&self) -> Vec<Element> {
        self.images
            .iter()
            .filter(|(_, p)| p.iter().enumerate().all(|(k, &x)| k == x))
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn image(&self, lambda: &Element) -> Option<&[usize]> {
        self.images.iter().find(|(e, _)| e == lambda).map(|(_, p)| p.as_slice())
    }
}

/// Computes `Υ` on `elements` and checks `Υ(λ)Υ(μ) = Υ(λμ)` on all pairs.
pub fn groupoid_holonomy(h: &Hierarchy, v: &BVertex, elements: &[Element]) -> Result<Holonomy> {
    let b = h.building();
    let g = b.graph();
    let class = b.level_class(v);
    for lambda in elements {
        if b.translate_class(lambda, &class) != class {
            return domain(format!("{lambda:?} does not stabilize the class of {v:?}"));
        }
    }
    let chambers = b.chambers_containing(v);
    let groupoids = enumerate_residue_groupoids(b, v)?;
    let index: HashMap<&Vec<VertexPerm>, usize> = groupoids.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let bars: Vec<BarPsiRule> = groupoids
        .iter()
        .map(|t| Ok(BarPsiRule { hierarchy: h.clone(), v: v.clone(), psi: groupoid_from_potential(b, v, t)? }))
        .collect::<Result<_>>()?;

    let upsilon = |lambda: &Element| -> Result<Vec<usize>> {
        let inv = g.invert(lambda);
        let d0 = b.translate_chamber(&inv, &chambers[0]);
        let mut out = Vec::with_capacity(bars.len());
        for bar in &bars {
            let mut tau = Vec::with_capacity(chambers.len());
            for d in &chambers {
                tau.push(bar_sigma(b, bar, &d0, &b.translate_chamber(&inv, d))?);
            }
            match index.get(&tau) {
                Some(&k) => out.push(k),
                None => return Err(Error::Internal(format!("image of a groupoid under {lambda:?} is not a groupoid"))),
            }
        }
        Ok(out)
    };

    let mut images = Vec::with_capacity(elements.len());
    for lambda in elements {
        images.push((lambda.clone(), upsilon(lambda)?));
    }
    let mut homomorphism = CheckReport::new("holonomy homomorphism");
    for (l1, p1) in &images {
        for (l2, p2) in &images {
            let prod = upsilon(&g.multiply(l1, l2))?;
            let composed: Vec<usize> = p2.iter().map(|&k| p1[k]).collect();
            homomorphism.check(prod == composed, "homomorphism", || json!({ "lambda": l1, "mu": l2 }));
        }
    }
    Ok(Holonomy { vertex: v.clone(), chambers, groupoids, images, homomorphism })
}

/// `sigma(ψ̄_{from,to})` composed along the canonical gallery.
fn bar_sigma(b: &Building, bar: &BarPsiRule, from: &Chamber, to: &Chamber) -> Result<VertexPerm> {
    use super::AdjacentRule;
    let mut acc = VertexPerm::identity(b.graph().n());
    let mut cur = from.clone();
    for &s in b.delta(from, to).syllables() {
        let next = b.step(&cur, s);
        acc = bar.sigma(&cur, &next)?.compose(&acc);
        cur = next;
    }
    Ok(acc)
}
