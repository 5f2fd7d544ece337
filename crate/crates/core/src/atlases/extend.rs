use super::twist::Automorphism;
use super::{atlas_word, gallery_from_word, TypedAtlas};
use crate::building::{Chamber, Gallery};
use crate::error::{input, Error, Result};
use crate::sets::VertexPerm;
use serde_json::{json, Value};
use std::collections::{BTreeMap, VecDeque};

/// The end chamber of the gallery from `start2` whose `atlas2`-word is the
/// `atlas1`-word of `gallery`.
pub fn transfer_gallery(atlas1: &TypedAtlas, atlas2: &TypedAtlas, gallery: &Gallery, start2: &Chamber) -> Result<Chamber> {
    let word = atlas_word(atlas1, gallery)?;
    let image = gallery_from_word(atlas2, &word, start2)?;
    let b = atlas2.building();
    Ok(b.gallery_chambers(&image)?.pop().expect("nonempty"))
}

/// The automorphism carrying one typed atlas to another, tabulated on a
/// ball and evaluated by gallery transfer beyond it.
#[derive(Clone)]
pub struct Extension {
    source: TypedAtlas,
    target: TypedAtlas,
    center: Chamber,
    image: Chamber,
    seed: VertexPerm,
    radius: usize,
    table: BTreeMap<Chamber, Chamber>,
    checks: u64,
}

/// Extends the type-matching map `C → C'` with encoding `f_sigma` to the
/// automorphism with `f_*(atlas1) = atlas2`, checked on the radius ball.
pub fn extend_automorphism(
    f_sigma: &VertexPerm,
    c: &Chamber,
    cprime: &Chamber,
    atlas1: &TypedAtlas,
    atlas2: &TypedAtlas,
    radius: usize,
) -> Result<Extension> {
    let b = atlas1.building().clone();
    let expected = atlas2.tau(cprime)?.inverse().compose(&atlas1.tau(c)?);
    if *f_sigma != expected {
        return input(format!("seed {f_sigma:?} does not match types; expected {expected:?}"));
    }
    let sigma_at = |d: &Chamber, image: &Chamber| -> Result<VertexPerm> {
        Ok(atlas2.tau(image)?.inverse().compose(&atlas1.tau(d)?))
    };
    let mut table = BTreeMap::new();
    table.insert(c.clone(), cprime.clone());
    let mut queue = VecDeque::from([(c.clone(), 0usize)]);
    let mut checks = 0u64;
    while let Some((d, depth)) = queue.pop_front() {
        if depth == radius {
            continue;
        }
        let d_image = table[&d].clone();
        let d_sigma = sigma_at(&d, &d_image)?;
        for e in b.neighbors(&d) {
            let e_image = atlas2.apply_letter(&d_image, atlas1.letter(&d, &e)?)?;
            match table.get(&e) {
                Some(known) if *known != e_image => {
                    return Err(Error::Internal(format!(
                        "{:?} reached as {:?} and {:?}",
                        e.0, known.0, e_image.0
                    )));
                }
                Some(_) => {}
                None => {
                    table.insert(e.clone(), e_image.clone());
                    queue.push_back((e.clone(), depth + 1));
                }
            }
            let e_sigma = sigma_at(&e, &e_image)?;
            for v in b.chamber_intersection(&d, &e).expect("adjacent").shared {
                let via_d = b.vertex_in(&d_image, d_sigma.apply_set(v.ty));
                let via_e = b.vertex_in(&e_image, e_sigma.apply_set(v.ty));
                if via_d != via_e {
                    return Err(Error::Internal(format!("{v:?} sent to {via_d:?} and {via_e:?}")));
                }
                checks += 1;
            }
        }
    }
    Ok(Extension {
        source: atlas1.clone(),
        target: atlas2.clone(),
        center: c.clone(),
        image: cprime.clone(),
        seed: f_sigma.clone(),
        radius,
        table,
        checks,
    })
}

impl Extension {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn seed(&self) -> &VertexPerm {
        &self.seed
    }

    /// Tabulated chambers and their images, sorted.
    pub fn table(&self) -> &BTreeMap<Chamber, Chamber> {
        &self.table
    }

    /// Number of shared-vertex consistency checks performed.
    pub fn checks(&self) -> u64 {
        self.checks
    }

    /// Whether the table agrees with the identity.
    pub fn is_identity_on_table(&self) -> bool {
        self.seed.is_identity() && self.table.iter().all(|(d, e)| d == e)
    }

    pub fn to_json(&self) -> Value {
        let table: Vec<Value> = self
            .table
            .iter()
            .map(|(d, e)| {
                let sigma = self.sigma(d).ok();
                json!({ "chamber": d, "image": e, "sigma": sigma })
            })
            .collect();
        json!({
            "center": self.center,
            "image": self.image,
            "seed": self.seed,
            "radius": self.radius,
            "checks": self.checks,
            "table": table,
        })
    }
}

impl Automorphism for Extension {
    fn chamber(&self, d: &Chamber) -> Result<Chamber> {
        if let Some(e) = self.table.get(d) {
            return Ok(e.clone());
        }
        let b = self.source.building();
        transfer_gallery(&self.source, &self.target, &b.gallery_between(&self.center, d), &self.image)
    }

    fn preimage(&self, d: &Chamber) -> Result<Chamber> {
        let b = self.source.building();
        transfer_gallery(&self.target, &self.source, &b.gallery_between(&self.image, d), &self.center)
    }

    fn sigma(&self, d: &Chamber) -> Result<VertexPerm> {
        Ok(self.target.tau(&self.chamber(d)?)?.inverse().compose(&self.source.tau(d)?))
    }
}
