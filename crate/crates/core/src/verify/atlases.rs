use super::{sweep, VerifyConfig};
use crate::atlases::{
    atlas_word, extend_automorphism, gallery_from_word, standard_atlas, transfer_gallery, twisted_atlas, GroupTwist,
    TypedAtlas,
};
use crate::building::{Building, Chamber, Gallery};
use crate::graph::DefiningGraph;
use crate::report::CheckReport;
use crate::sets::{VertexPerm, VertexSet};
use crate::word::Syllable;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const ROUND_TRIPS: usize = 200;
const REWRITES: usize = 50;
const EXTENSIONS: usize = 10;

/// Inversion on every abelian vertex group of order at least three.
pub(crate) fn inversion_twist(g: &DefiningGraph) -> Option<GroupTwist> {
    let vs = VertexSet::from_iter((0..g.n()).filter(|&m| g.order(m) >= 3 && g.group(m).is_abelian()));
    if vs.is_empty() {
        return None;
    }
    GroupTwist::inversion(g, vs).ok()
}

fn random_letters(g: &DefiningGraph, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Syllable> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let v = rng.gen_range(0..g.n());
            Syllable::new(v, rng.gen_range(1..g.order(v)))
        })
        .collect()
}

fn random_gallery(b: &Building, pool: &[Chamber], rng: &mut ChaCha8Rng, max_len: usize) -> Gallery {
    let start = pool.choose(rng).expect("nonempty").clone();
    Gallery { start, letters: random_letters(b.graph(), rng, max_len) }
}

/// Applies random backtrack insertions, panel splits and commuting swaps.
fn rewrite(g: &DefiningGraph, gallery: &Gallery, rng: &mut ChaCha8Rng, moves: usize) -> Gallery {
    let mut letters = gallery.letters.clone();
    for _ in 0..moves {
        match rng.gen_range(0..3) {
            0 => {
                let p = rng.gen_range(0..=letters.len());
                let v = rng.gen_range(0..g.n());
                let e = rng.gen_range(1..g.order(v));
                letters.splice(p..p, [Syllable::new(v, e), Syllable::new(v, g.group(v).inv(e))]);
            }
            1 if !letters.is_empty() => {
                let p = rng.gen_range(0..letters.len());
                let s = letters[p];
                let grp = g.group(s.v());
                let mids: Vec<u32> = grp.non_identity().filter(|&x| x != s.elt).collect();
                if let Some(&m) = mids.choose(rng) {
                    let rest = grp.mul(grp.inv(m), s.elt);
                    letters.splice(p..=p, [Syllable::new(s.v(), m), Syllable::new(s.v(), rest)]);
                }
            }
            _ if letters.len() >= 2 => {
                let p = rng.gen_range(0..letters.len() - 1);
                if g.adjacent(letters[p].v(), letters[p + 1].v()) {
                    letters.swap(p, p + 1);
                }
            }
            _ => {}
        }
    }
    Gallery { start: gallery.start.clone(), letters }
}

fn end(b: &Building, gallery: &Gallery) -> Option<Chamber> {
    b.gallery_chambers(gallery).ok().and_then(|mut c| c.pop())
}

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let g = b.graph();
    let r = cfg.radius;
    let standard = standard_atlas(b);
    let twist = inversion_twist(g);
    let mut atlases: Vec<(&str, TypedAtlas)> = vec![("standard", standard.clone())];
    if let Some(t) = &twist {
        atlases.push(("inversion", twisted_atlas(b, t)));
    }
    let mut checks = Vec::new();
    let mut validation = CheckReport::new("atlas validation");
    for (_, a) in &atlases {
        validation.absorb(a.validate_typing(r));
        validation.absorb(a.validate_atlas(r));
    }
    checks.push(validation);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pool = b.ball(2);
    let galleries: Vec<Gallery> = (0..ROUND_TRIPS).map(|_| random_gallery(b, &pool, &mut rng, 6)).collect();
    checks.push(sweep("word round trip", &galleries, |gallery, rep| {
        for (name, a) in &atlases {
            let back = atlas_word(a, gallery).and_then(|w| gallery_from_word(a, &w, &gallery.start));
            rep.check(back.ok().as_ref() == Some(gallery), "round trip", || json!({ "atlas": name, "gallery": gallery }));
        }
    }));

    let start2 = pool.last().expect("nonempty").clone();
    let pairs: Vec<(Gallery, Gallery)> = (0..REWRITES)
        .map(|_| {
            let gallery = random_gallery(b, &pool, &mut rng, 4);
            let other = rewrite(g, &gallery, &mut rng, 6);
            (gallery, other)
        })
        .collect();
    checks.push(sweep("transfer invariance", &pairs, |(gallery, other), rep| {
        let w = || json!({ "gallery": gallery, "rewritten": other });
        rep.check(end(b, gallery) == end(b, other), "same end", w);
        for (_, a1) in &atlases {
            for (_, a2) in &atlases {
                let x = transfer_gallery(a1, a2, gallery, &start2);
                let y = transfer_gallery(a1, a2, other, &start2);
                rep.check(x.is_ok() && x.ok() == y.ok(), "transfer", w);
            }
        }
    }));

    let ext_pool = g.enumerate_ball(3);
    let gammas: Vec<_> = ext_pool.choose_multiple(&mut rng, EXTENSIONS).cloned().collect();
    let identity = VertexPerm::identity(g.n());
    checks.push(sweep("standard extension", &gammas, |gamma, rep| {
        match extend_automorphism(&identity, &Chamber::base(), &Chamber(gamma.clone()), &standard, &standard, r) {
            Ok(f) => {
                rep.check(f.table().len() == b.ball(r).len(), "table covers ball", || json!({ "gamma": gamma }));
                for (d, e) in f.table() {
                    rep.check(*e == b.translate_chamber(gamma, d), "left multiplication", || {
                        json!({ "gamma": gamma, "chamber": d, "image": e })
                    });
                }
            }
            Err(e) => rep.violation("error", json!({ "gamma": gamma, "error": e.to_string() })),
        }
    }));
    let info = json!({
        "atlases": atlases.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
        "round_trips": galleries.len(),
        "rewrites": pairs.len(),
        "extensions": gammas.len(),
    });
    (checks, info)
}
