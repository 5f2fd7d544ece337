use super::{sweep, VerifyConfig};
use crate::building::Building;
use crate::graph::DefiningGraph;
use crate::report::CheckReport;
use crate::sets::VertexSet;
use crate::word::{Element, Syllable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

const RANDOM_CASES: usize = 1000;
const WORD_BUDGET: usize = 60_000;

pub(super) fn run(b: &Building, cfg: &VerifyConfig) -> (Vec<CheckReport>, Value) {
    let g = b.graph();
    let (closure, bound, words, components) = move_closure(g);
    let cases = random_cases(g, cfg.seed);
    let checks = vec![
        closure,
        sweep("normal form soundness", &cases, |c, r| soundness(g, c, r)),
        sweep("retraction", &cases, |c, r| retraction(g, c, r)),
        sweep("coset representatives", &cases, |c, r| coset_reps(g, c, r)),
        ball_check(g, cfg.radius),
    ];
    let info = json!({
        "closure_word_length": bound,
        "closure_words": words,
        "closure_classes": components,
        "random_cases": cases.len(),
    });
    (checks, info)
}

fn letters(g: &DefiningGraph) -> Vec<Syllable> {
    (0..g.n()).flat_map(|v| g.group(v).non_identity().map(move |e| Syllable::new(v, e))).collect()
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Words related by one elementary move of length at most `bound`; only the
/// length-increasing and length-preserving directions are generated.
fn moves(g: &DefiningGraph, w: &[Syllable], bound: usize) -> Vec<Vec<Syllable>> {
    let mut out = Vec::new();
    let n = w.len();
    if n + 2 <= bound {
        for k in 0..=n {
            for s in letters(g) {
                let inv = Syllable::new(s.v(), g.group(s.v()).inv(s.elt));
                let mut x = w.to_vec();
                x.splice(k..k, [s, inv]);
                out.push(x);
            }
        }
    }
    if n < bound {
        for k in 0..n {
            let grp = g.group(w[k].v());
            for a in grp.non_identity() {
                let rest = grp.mul(grp.inv(a), w[k].elt);
                if rest != 0 {
                    let mut x = w.to_vec();
                    x.splice(k..=k, [Syllable::new(w[k].v(), a), Syllable::new(w[k].v(), rest)]);
                    out.push(x);
                }
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        if g.adjacent(w[k].v(), w[k + 1].v()) {
            let mut x = w.to_vec();
            x.swap(k, k + 1);
            out.push(x);
        }
    }
    out
}

/// Compares normal-form equality with connectivity under elementary moves on
/// every word up to the largest length that fits the budget.
fn move_closure(g: &DefiningGraph) -> (CheckReport, usize, usize, usize) {
    let alphabet = letters(g);
    let mut bound = 0;
    let mut total = 1usize;
    while bound < 4 {
        let next = total + alphabet.len().pow(bound as u32 + 1);
        if next > WORD_BUDGET {
            break;
        }
        total = next;
        bound += 1;
    }
    let mut words: Vec<Vec<Syllable>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Syllable>> = vec![Vec::new()];
    for _ in 0..bound {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&s| [w.as_slice(), &[s]].concat()))
            .collect();
        words.extend(layer.iter().cloned());
    }
    let index: HashMap<&[Syllable], usize> = words.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    for (k, w) in words.iter().enumerate() {
        for x in moves(g, w, bound) {
            let (a, c) = (find(&mut parent, k), find(&mut parent, index[x.as_slice()]));
            parent[a] = c;
        }
    }
    let forms: Vec<Element> = words.iter().map(|w| g.normal_form_unchecked(w)).collect();
    let mut report = CheckReport::new("move closure");
    let mut by_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut by_form: HashMap<&Element, usize> = HashMap::new();
    for k in 0..words.len() {
        let root = find(&mut parent, k);
        let rep = *by_class.entry(root).or_insert(k);
        report.check(forms[rep] == forms[k], "connected words with different normal forms", || {
            json!({ "words": [words[rep], words[k]] })
        });
        let owner = *by_form.entry(&forms[k]).or_insert(root);
        report.check(owner == root, "equal normal forms in different classes", || {
            json!({ "word": words[k], "normal_form": forms[k] })
        });
    }
    let classes = by_class.len();
    (report, bound, words.len(), classes)
}

struct Case {
    word: Vec<Syllable>,
    other: Vec<Syllable>,
    j1: VertexSet,
    j2: VertexSet,
}

fn random_word(g: &DefiningGraph, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Syllable> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let v = rng.gen_range(0..g.n());
            Syllable::new(v, rng.gen_range(1..g.order(v)))
        })
        .collect()
}

fn random_subset(g: &DefiningGraph, rng: &mut ChaCha8Rng) -> VertexSet {
    VertexSet::from_iter((0..g.n()).filter(|_| rng.gen_bool(0.5)))
}

fn random_cases(g: &DefiningGraph, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_CASES)
        .map(|_| Case {
            word: random_word(g, &mut rng, 8),
            other: random_word(g, &mut rng, 8),
            j1: random_subset(g, &mut rng),
            j2: random_subset(g, &mut rng),
        })
        .collect()
}

/// Per-vertex images and group laws agree with the raw word.
fn soundness(g: &DefiningGraph, c: &Case, r: &mut CheckReport) {
    let a = g.normal_form_unchecked(&c.word);
    for i in 0..g.n() {
        let raw: Vec<Syllable> = c.word.iter().copied().filter(|s| s.v() == i).collect();
        let expected = raw.iter().fold(0, |acc, s| g.group(i).mul(acc, s.elt));
        r.check(g.coordinate(&a, i) == expected, "coordinate", || json!({ "word": c.word, "vertex": i }));
        let ri = g.retract(&a, VertexSet::singleton(i));
        r.check(ri == g.normal_form_unchecked(&raw), "singleton retraction", || json!({ "word": c.word, "vertex": i }));
    }
    r.check(a.len() <= c.word.len(), "length", || json!({ "word": c.word }));
    r.check(g.normal_form_unchecked(a.syllables()) == a, "canonical", || json!({ "word": c.word }));
    let b = g.normal_form_unchecked(&c.other);
    let ab = g.normal_form_unchecked(&[c.word.as_slice(), &c.other].concat());
    r.check(g.multiply(&a, &b) == ab, "product", || json!({ "words": [c.word, c.other] }));
    r.check(g.multiply(&a, &g.invert(&a)).is_identity(), "inverse", || json!({ "word": c.word }));
}

fn retraction(g: &DefiningGraph, c: &Case, r: &mut CheckReport) {
    let a = g.normal_form_unchecked(&c.word);
    let b = g.normal_form_unchecked(&c.other);
    let twice = g.retract(&g.retract(&a, c.j1), c.j2);
    r.check(twice == g.retract(&a, c.j1.intersection(c.j2)), "composition", || {
        json!({ "word": c.word, "J1": c.j1, "J2": c.j2 })
    });
    let hom = g.multiply(&g.retract(&a, c.j1), &g.retract(&b, c.j1));
    r.check(g.retract(&g.multiply(&a, &b), c.j1) == hom, "homomorphism", || {
        json!({ "words": [c.word, c.other], "J": c.j1 })
    });
    r.check(g.in_parabolic(&g.retract(&a, c.j1), c.j1), "image", || json!({ "word": c.word, "J": c.j1 }));
    let kept: Vec<Syllable> = c.word.iter().copied().filter(|s| c.j1.contains(s.v())).collect();
    r.check(g.retract(&a, c.j1) == g.normal_form_unchecked(&kept), "deletion", || json!({ "word": c.word, "J": c.j1 }));
}

fn coset_reps(g: &DefiningGraph, c: &Case, r: &mut CheckReport) {
    let a = g.normal_form_unchecked(&c.word);
    let j = c.j1;
    let rep = g.coset_min_rep(&a, j);
    r.check(g.coset_min_rep(&rep, j) == rep, "idempotence", || json!({ "word": c.word, "J": j }));
    r.check(g.in_parabolic(&g.left_quotient(&rep, &a), j), "coset law", || json!({ "word": c.word, "J": j }));
    let b = g.normal_form_unchecked(&c.other);
    let same = g.coset_min_rep(&b, j) == rep;
    r.check(same == g.in_parabolic(&g.left_quotient(&a, &b), j), "coset identity", || {
        json!({ "words": [c.word, c.other], "J": j })
    });
    // Brute-force minimum over a spherical coset.
    let sph = clique_in(g, j);
    if let Ok(elements) = g.parabolic_elements(sph) {
        let coset: Vec<Element> = elements.iter().map(|x| g.multiply(&a, x)).collect();
        let min = coset.iter().map(Element::len).min().unwrap_or(0);
        let shortest: Vec<&Element> = coset.iter().filter(|x| x.len() == min).collect();
        let rep = g.coset_min_rep(&a, sph);
        r.check(shortest.len() == 1 && *shortest[0] == rep, "shortest element", || {
            json!({ "word": c.word, "J": sph, "shortest": shortest })
        });
    }
}

/// A greedy clique inside `s`; `s` itself when spherical.
fn clique_in(g: &DefiningGraph, s: VertexSet) -> VertexSet {
    let mut out = VertexSet::EMPTY;
    for m in s.iter() {
        if out.iter().all(|x| g.adjacent(x, m)) {
            out = out.with(m);
        }
    }
    out
}

fn ball_check(g: &DefiningGraph, radius: usize) -> CheckReport {
    let mut r = CheckReport::new("ball enumeration");
    let mut prev = 0;
    for k in 0..=radius.min(4) {
        let ball = g.enumerate_ball(k);
        r.check(ball.len() >= prev, "monotone", || json!({ "radius": k }));
        prev = ball.len();
        let distinct = ball.windows(2).all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1]));
        r.check(distinct, "ordered and distinct", || json!({ "radius": k }));
        let canonical = ball.iter().all(|x| x.len() <= k && g.normal_form_unchecked(x.syllables()) == *x);
        r.check(canonical, "canonical", || json!({ "radius": k }));
    }
    let one = 1 + (0..g.n()).map(|i| g.order(i) as usize - 1).sum::<usize>();
    r.check(g.enumerate_ball(1).len() == one, "radius one", || json!({ "expected": one }));
    r
}
