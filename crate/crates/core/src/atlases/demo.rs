use super::extend::extend_automorphism;
use super::twist::{Automorphism, Composite, GroupTwist, Inverse, TwistedElement};
use super::{standard_atlas, twisted_atlas};
use crate::building::{Building, Chamber};
use crate::error::Result;
use crate::report::CheckReport;
use crate::word::Element;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize)]
pub struct DemoSample {
    /// `γ` in `λ = F∘L_γ∘F⁻¹`.
    pub lambda: Element,
    /// The element whose translation agrees with `gλg⁻¹` at `C_*`.
    pub gamma: Element,
    pub preserves_atlas: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub twist: GroupTwist,
    pub radius: usize,
    pub ball_size: usize,
    pub conjugator_ball: Value,
    pub checks: Vec<CheckReport>,
    pub samples: Vec<DemoSample>,
    pub passed: bool,
}

/// `count` distinct elements of the radius ball of `Γ`, chosen by `seed`.
pub fn sample_ball(b: &Building, radius: usize, count: usize, seed: u64) -> Vec<Element> {
    let ball = b.graph().enumerate_ball(radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Element> = ball.choose_multiple(&mut rng, count).cloned().collect();
    out.sort();
    out
}

/// Conjugates the lattice `FΓF⁻¹` preserving `F_*(t_Γ, 𝒜_Γ)` back into `Γ`.
///
/// The conjugator `g` is extended from the type-matching seed at `C_*`; each
/// sample `λ` is checked against a translation on the radius ball.
pub fn commensuration_demo(b: &Building, twist: &GroupTwist, samples: &[Element], radius: usize) -> Result<DemoReport> {
    let atlas = twisted_atlas(b, twist);
    let standard = standard_atlas(b);
    let base = Chamber::base();
    let checks = vec![atlas.validate_typing(1), atlas.validate_atlas(1)];

    let seed = standard.tau(&base)?.inverse().compose(&atlas.tau(&base)?);
    let g: Arc<dyn Automorphism> = Arc::new(extend_automorphism(&seed, &base, &base, &atlas, &standard, radius)?);
    let ginv: Arc<dyn Automorphism> = Arc::new(Inverse(g.clone()));

    let ball = b.ball(radius);
    let mut moved = 0usize;
    for d in &ball {
        if g.chamber(d)? != *d {
            moved += 1;
        }
    }
    let conjugator_ball = json!({
        "seed": seed,
        "chambers": ball.len(),
        "moved": moved,
        "translation": moved == 0 && seed.is_identity(),
    });

    let near = b.ball(1);
    let mut out = Vec::with_capacity(samples.len());
    for lambda in samples {
        let lam: Arc<dyn Automorphism> = Arc::new(TwistedElement::new(b, twist, lambda.clone()));
        let mut preserves = true;
        for d in &near {
            for e in b.neighbors(d) {
                let moved = atlas.letter(&lam.chamber(d)?, &lam.chamber(&e)?)?;
                preserves &= moved == atlas.letter(d, &e)?;
            }
        }
        let conj = Composite::new(b, vec![g.clone(), lam, ginv.clone()]);
        let gamma = conj.chamber(&base)?.0;
        let mut ok = preserves;
        for d in &ball {
            ok &= conj.chamber(d)? == b.translate_chamber(&gamma, d) && conj.sigma(d)?.is_identity();
        }
        out.push(DemoSample { lambda: lambda.clone(), gamma, preserves_atlas: preserves, ok });
    }
    let passed = checks.iter().all(CheckReport::passed) && out.iter().all(|s| s.ok);
    Ok(DemoReport {
        twist: twist.clone(),
        radius,
        ball_size: ball.len(),
        conjugator_ball,
        checks,
        samples: out,
        passed,
    })
}
