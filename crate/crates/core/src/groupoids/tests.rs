use super::*;
use crate::catalog::{fork, running_example};
use crate::graph::DefiningGraph;
use crate::sets::VertexSet;
use crate::word::Syllable;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const I: usize = 0;
const J: usize = 1;
const K: usize = 2;
const L: usize = 3;

fn set(xs: &[usize]) -> VertexSet {
    VertexSet::from_iter(xs.iter().copied())
}

fn b0() -> Building {
    Building::new(running_example())
}

fn ijkl(b: &Building) -> ClassOrder {
    class_order_for_gamma(b.graph(), &[I, J, K, L]).unwrap()
}

fn swap_pq() -> VertexPerm {
    VertexPerm::from_images(vec![0, 1, 3, 2]).unwrap()
}

/// The fork groupoid on `𝒞({x}, C_*)` with potential `σ^a` on `C_{(x,a)}` for odd `a`.
fn twisted_x_section(b: &Building) -> ResidueGroupoid {
    let g = b.graph().clone();
    let rule = PotentialRule(move |c: &Chamber| {
        if g.coordinate(&c.0, 0) % 2 == 1 {
            swap_pq()
        } else {
            VertexPerm::identity(4)
        }
    });
    extend_groupoid(b, VertexSet::singleton(0), &Chamber::base(), Arc::new(rule), None).unwrap()
}

#[test]
fn encodings_agree_on_a_chamber() {
    for g in [running_example(), fork(2), crate::catalog::cycle(4, 2)] {
        let b = Building::new(g.clone());
        for p in g.automorphisms(false) {
            assert!(encoding_is_cubical(&b, &p) == g.preserves_orders(&p), "{p:?}");
        }
    }
    let b = b0();
    assert!(!encoding_is_cubical(&b, &VertexPerm::from_images(vec![3, 1, 2, 0]).unwrap()));
}

#[test]
fn identity_maps_extend() {
    let b = b0();
    let phi = extend_groupoid(&b, set(&[I]), &Chamber::base(), Arc::new(IdentityRule(4)), None).unwrap();
    assert!(phi.validate().passed());
    let single = gamma_groupoid(&b, VertexSet::EMPTY, &Chamber::base(), None).unwrap();
    assert_eq!(single.chambers(), vec![Chamber::base()]);
    assert!(single.sigma(&Chamber::base(), &Chamber::base()).unwrap().is_identity());
}

#[test]
fn translations_compose_to_translations() {
    let b = b0();
    let g = b.graph();
    let phi = extend_groupoid(&b, set(&[I, J]), &Chamber::base(), Arc::new(IdentityRule(4)), None).unwrap();
    let chambers = phi.chambers();
    assert_eq!(chambers.len(), 4);
    let ordered_pairs = chambers.iter().flat_map(|a| chambers.iter().filter(move |c| *c != a)).count();
    assert_eq!(ordered_pairs, 12);
    assert!(phi.validate().passed());
    for c in &chambers {
        for d in &chambers {
            let m = phi.map(c, d).unwrap();
            let gamma = g.multiply(&d.0, &g.invert(&c.0));
            for v in b.chamber_vertices(c) {
                assert_eq!(m.apply(&b, &v).unwrap(), b.translate_vertex(&gamma, &v));
            }
        }
    }
}

#[test]
fn moving_the_shared_vertex_is_rejected() {
    let g = DefiningGraph::cyclic(&[2, 2, 2, 2], &[(0, 1), (1, 2)]).unwrap();
    let b = Building::new(g);
    let swap = VertexPerm::from_images(vec![2, 1, 0, 3]).unwrap();
    let c0 = Chamber::base();
    let c1 = b.chamber(&[Syllable::new(I, 1)]).unwrap();
    let table = TableRule([((c0.clone(), c1.clone()), swap.clone()), ((c1, c0.clone()), swap)].into_iter().collect());
    match extend_groupoid(&b, set(&[I]), &c0, Arc::new(table), None) {
        Err(Error::Validation { condition, .. }) => assert_eq!(condition, "fixes intersection"),
        other => panic!("expected a shared-vertex failure, got {other:?}"),
    }
}

#[test]
fn missing_and_inconsistent_maps_are_reported() {
    let b = b0();
    let c0 = Chamber::base();
    let c1 = b.chamber(&[Syllable::new(I, 1)]).unwrap();
    let table = TableRule([((c0.clone(), c1), VertexPerm::identity(4))].into_iter().collect());
    assert!(matches!(
        extend_groupoid(&b, set(&[I]), &c0, Arc::new(table), None),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn gamma_groupoids_satisfy_the_axioms_on_spherical_residues() {
    for g in [running_example(), fork(3)] {
        let b = Building::new(g);
        for &j in b.spherical_sets() {
            for c in b.ball(1) {
                let phi = gamma_groupoid(&b, j, &c, None).unwrap();
                let r = phi.validate();
                assert!(r.passed(), "{j} {c:?}: {r:?}");
            }
        }
    }
}

#[test]
fn adjacent_maps_move_perpendicular_vertices_level_adjacently() {
    for (b, phi_of) in [
        (b0(), None),
        (Building::new(fork(2)), Some(())),
    ] {
        let g = b.graph().clone();
        for c1 in b.ball(1) {
            for c2 in b.neighbors(&c1) {
                let i = b.adjacency(&c1, &c2).unwrap();
                let sigma = if phi_of.is_some() && i == 0 {
                    let twisted = twisted_x_section(&b).translate(&c1.0);
                    twisted.sigma(&c1, &c2).unwrap()
                } else {
                    VertexPerm::identity(g.n())
                };
                let m = ChamberMap { from: c1.clone(), to: c2.clone(), sigma };
                for j in g.neighbors(i).iter() {
                    let v1 = b.vertex_in(&c1, VertexSet::singleton(j));
                    let image = m.apply(&b, &v1).unwrap();
                    assert_eq!(image.ty, v1.ty);
                    assert!(b.level_adjacent(&v1, &image));
                }
            }
        }
    }
}

#[test]
fn ascent_examples() {
    let b = b0();
    let c = Chamber::base();
    let v = b.vertex_in(&c, set(&[J]));
    let u = b.vertex_in(&c, set(&[I]));
    let up = class_order_for_gamma(b.graph(), &[I, J, K, L]).unwrap();
    assert_eq!(ascent(&b, &v, &u, &up).unwrap(), b.vertex_in(&c, set(&[I, J])));
    let down = class_order_for_gamma(b.graph(), &[J, I, K, L]).unwrap();
    assert_eq!(ascent(&b, &v, &u, &down).unwrap(), u);
    assert_eq!(ascent(&b, &b.center(&c), &u, &up).unwrap(), u);

    let far = b.vertex_in(&b.chamber(&[Syllable::new(K, 1)]).unwrap(), set(&[I]));
    assert!(matches!(ascent(&b, &b.vertex_in(&c, set(&[K])), &far, &up), Err(Error::Domain(_))));
    assert!(matches!(ascent(&b, &u, &b.vertex_in(&c, set(&[K])), &up), Err(Error::Domain(_))));
}

/// All `(v, u)` in a chamber with `t(u) = {i}`, `i ∈ t(v)⊥`.
fn admissible(b: &Building, c: &Chamber) -> Vec<(BVertex, BVertex)> {
    let g = b.graph();
    let mut out = Vec::new();
    for &j in b.spherical_sets() {
        for i in g.perp_unchecked(j).iter() {
            out.push((b.vertex_in(c, j), b.vertex_in(c, VertexSet::singleton(i))));
        }
    }
    out
}

#[test]
fn ascent_is_equivariant() {
    let b = b0();
    let g = b.graph();
    let ord = ijkl(&b);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool = g.enumerate_ball(5);
    let gammas: Vec<_> = pool.choose_multiple(&mut rng, 50).cloned().collect();
    for c in b.ball(1) {
        for (v, u) in admissible(&b, &c) {
            let w = ascent(&b, &v, &u, &ord).unwrap();
            for gamma in &gammas {
                let lhs = b.translate_vertex(gamma, &w);
                let rhs = ascent(&b, &b.translate_vertex(gamma, &v), &b.translate_vertex(gamma, &u), &ord).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn ascent_sandwich_and_strict_increase() {
    let b = b0();
    for ord in [ijkl(&b), class_order_for_gamma(b.graph(), &[L, K, J, I]).unwrap()] {
        for c in b.ball(2) {
            for (v, u) in admissible(&b, &c) {
                let w = ascent(&b, &v, &u, &ord).unwrap();
                assert!(u.ty.is_subset(w.ty) && w.ty.is_subset(v.ty.union(u.ty)));
                assert!(b.contains(&c, &w));
                assert_eq!(ord.cmp_classes(&b.level_class(&v), &b.level_class(&w)), std::cmp::Ordering::Less);
            }
        }
    }
}

#[test]
fn double_ascent() {
    let b = b0();
    let g = b.graph();
    let ord = ijkl(&b);
    let mut checked = 0;
    for c in b.ball(1) {
        for &t in b.spherical_sets() {
            let v = b.vertex_in(&c, t);
            let perp = g.perp_unchecked(t);
            for i in perp.iter() {
                for j in perp.iter().filter(|&j| g.adjacent(i, j) && ord.precedes(i, j)) {
                    let u1 = b.vertex_in(&c, VertexSet::singleton(i));
                    let u2 = b.vertex_in(&c, VertexSet::singleton(j));
                    let once = ascent(&b, &v, &u1, &ord).unwrap();
                    assert_eq!(ascent(&b, &once, &u2, &ord).unwrap(), ascent(&b, &v, &u2, &ord).unwrap());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn ascent_across_adjacent_chambers() {
    let b = b0();
    let g = b.graph();
    let ord = ijkl(&b);
    for c1 in b.ball(1) {
        for c2 in b.neighbors(&c1) {
            let i = b.adjacency(&c1, &c2).unwrap();
            let wedge = b.wedge(&c1, &c2).unwrap();
            for &t in b.spherical_sets().iter().filter(|t| t.is_subset(g.neighbors(i))) {
                let v1 = b.vertex_in(&c1, t);
                let v2 = b.vertex_in(&c2, t);
                assert_eq!(ascent(&b, &v1, &wedge, &ord).unwrap(), ascent(&b, &v2, &wedge, &ord).unwrap());
                for j in g.perp_unchecked(t.with(i)).iter() {
                    let u1 = b.vertex_in(&c1, VertexSet::singleton(j));
                    let u2 = b.vertex_in(&c2, VertexSet::singleton(j));
                    let w1 = ascent(&b, &v1, &u1, &ord).unwrap();
                    let w2 = ascent(&b, &v2, &u2, &ord).unwrap();
                    assert!(b.level_adjacent(&w1, &w2));
                }
            }
        }
    }
}

#[test]
fn class_order_axioms() {
    let b = b0();
    let ord = ijkl(&b);
    let types = b.spherical_sets().to_vec();
    assert_eq!(types.len(), 7);
    // Oracle: binary weights of the positions.
    let weight = |t: VertexSet| t.iter().map(|m| 1u64 << [0, 1, 2, 3][m]).sum::<u64>();
    for &a in &types {
        for &c in &types {
            assert_eq!(ord.cmp_types(a, c), weight(a).cmp(&weight(c)), "{a} {c}");
            assert_eq!(ord.cmp_types(a, c), ord.cmp_types(c, a).reverse());
            for &d in &types {
                if ord.cmp_types(a, c).is_le() && ord.cmp_types(c, d).is_le() {
                    assert!(ord.cmp_types(a, d).is_le());
                }
            }
        }
    }
    assert!(ord.cmp_types(set(&[I]), set(&[J])).is_lt());
    assert!(ord.cmp_types(set(&[J]), set(&[I, J])).is_lt());
    for &t in &types {
        if !t.is_empty() {
            assert!(ord.cmp_types(VertexSet::EMPTY, t).is_lt());
        }
    }
}

#[test]
fn strict_vertex_order_gives_strict_class_order() {
    let b = b0();
    let ord = class_order_for_gamma(b.graph(), &[K, I, L, J]).unwrap();
    for c in b.ball(1) {
        let vs = b.chamber_vertices(&c);
        for u1 in &vs {
            for u2 in &vs {
                if u1 != u2 && b.leq(u1, u2) {
                    assert!(ord.cmp_classes(&b.level_class(u1), &b.level_class(u2)).is_lt());
                }
            }
        }
    }
}

#[test]
fn adjacent_labels_must_differ() {
    let g = running_example();
    assert!(matches!(ClassOrder::new(&g, vec![0, 0, 1, 2], vec![0, 1, 2]), Err(Error::Validation { .. })));
    assert!(ClassOrder::new(&g, vec![0, 1, 0, 2], vec![2, 0, 1]).is_ok());
    assert!(matches!(ClassOrder::new(&g, vec![0, 1, 2, 3], vec![0, 1, 1, 3]), Err(Error::Input(_))));
}

#[test]
fn gamma_hierarchy_verifies() {
    let b = b0();
    let h = build_gamma_hierarchy(&b, ijkl(&b), 2).unwrap();
    let restriction = h.check_restriction(2);
    assert!(restriction.passed());
    assert!(restriction.configurations > 100);
    for r in h.verify(2) {
        assert!(r.passed(), "{r:?}");
    }
    let levels = h.levels();
    assert_eq!(levels[0], set(&[L]));
    assert_eq!(*levels.last().unwrap(), VertexSet::EMPTY);
    for t in [set(&[I, J]), set(&[J, K]), set(&[L])] {
        assert!(b.graph().perp(t).unwrap().is_empty());
        let v = b.vertex_in(&Chamber::base(), t);
        let class = b.level_class(&v);
        assert_eq!(class.rep, v.rep);
    }
}

#[test]
fn gamma_hierarchy_maps_are_translations() {
    let b = b0();
    let h = build_gamma_hierarchy(&b, ijkl(&b), 2).unwrap();
    for v in b.vertices_of(&b.ball(1)) {
        let phi = h.groupoid(&b.level_class(&v));
        for (c1, c2) in phi.adjacent_pairs().iter().take(40) {
            assert!(phi.sigma(c1, c2).unwrap().is_identity());
        }
    }
}

#[test]
fn phi_examples() {
    let b = b0();
    let h = build_gamma_hierarchy(&b, ijkl(&b), 2).unwrap();
    let cprime = b.chamber(&[Syllable::new(K, 2)]).unwrap();
    let phi = phi_from_hierarchy(&h, set(&[I]), &cprime, None).unwrap();
    let gamma = gamma_groupoid(&b, set(&[J]), &cprime, None).unwrap();
    assert_eq!(phi.chambers(), gamma.chambers());
    for c1 in phi.chambers() {
        for c2 in phi.chambers() {
            assert_eq!(phi.sigma(&c1, &c2).unwrap(), gamma.sigma(&c1, &c2).unwrap());
        }
    }
    let top = phi_from_hierarchy(&h, set(&[I, J]), &cprime, None).unwrap();
    assert_eq!(top.chambers(), vec![cprime.clone()]);
    let whole = phi_from_hierarchy(&h, VertexSet::EMPTY, &Chamber::base(), Some(2)).unwrap();
    let report = check_extension(&b, whole.j(), &whole.chambers(), whole.rule().as_ref());
    assert!(report.passed());
    assert!(report.violations_total == 0 && report.configurations > 0);
}

#[test]
fn barpsi_of_gamma_section_is_gamma() {
    let b = b0();
    let h = build_gamma_hierarchy(&b, ijkl(&b), 2).unwrap();
    for t in [set(&[I]), set(&[K]), set(&[J])] {
        let v = b.vertex_in(&Chamber::base(), t);
        let psi = gamma_groupoid(&b, t, &Chamber::base(), None).unwrap();
        let bar = barpsi_extend(&h, &v, &psi, Some(2)).unwrap();
        for (c1, c2) in bar.adjacent_pairs() {
            assert!(bar.sigma(&c1, &c2).unwrap().is_identity());
        }
    }
}

#[test]
fn twisted_section_extends() {
    let b = Building::new(fork(2));
    let ord = class_order_for_gamma(b.graph(), &[0, 1, 2, 3]).unwrap();
    let h = build_gamma_hierarchy(&b, ord, 2).unwrap();
    let v = b.vertex_in(&Chamber::base(), VertexSet::singleton(0));
    let psi = twisted_x_section(&b);
    let bar = barpsi_extend(&h, &v, &psi, None).unwrap();
    assert!(bar.validate().passed());
    for c1 in psi.chambers() {
        for c2 in psi.chambers() {
            assert_eq!(bar.sigma(&c1, &c2).unwrap(), psi.sigma(&c1, &c2).unwrap());
        }
    }
    let nontrivial = bar.adjacent_pairs().iter().any(|(a, c)| !bar.sigma(a, c).unwrap().is_identity());
    assert!(nontrivial);
}

#[test]
fn twisted_hierarchy_gives_a_whole_building_groupoid() {
    let b = Building::new(fork(2));
    let ord = class_order_for_gamma(b.graph(), &[0, 1, 2, 3]).unwrap();
    let h = build_hierarchy(&b, ord, vec![twisted_x_section(&b)], 2).unwrap();
    for r in h.verify(2) {
        assert!(r.passed(), "{r:?}");
    }
    let bottom = b.level_class(&b.center(&Chamber::base()));
    let phi = h.groupoid(&bottom);
    assert!(phi.validate().passed());
    let moved: BTreeSet<VertexPerm> =
        phi.chambers().iter().map(|c| phi.sigma(&Chamber::base(), c).unwrap()).collect();
    assert_eq!(moved.len(), 2);
}

#[test]
fn action_on_groupoids_is_an_action() {
    let b = Building::new(fork(3));
    let g = b.graph();
    let phi = twisted_x_section(&b);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pool = g.enumerate_ball(3);
    for _ in 0..20 {
        let lambda = pool.choose(&mut rng).unwrap();
        let mu = pool.choose(&mut rng).unwrap();
        let left = phi.translate(mu).translate(lambda);
        let right = phi.translate(&g.multiply(lambda, mu));
        assert_eq!(left.chambers(), right.chambers());
        for c1 in left.chambers() {
            for c2 in left.chambers() {
                assert_eq!(left.sigma(&c1, &c2).unwrap(), right.sigma(&c1, &c2).unwrap());
            }
        }
    }
}

#[test]
fn residue_groupoid_enumeration() {
    let b = Building::new(fork(3));
    let v = b.vertex_in(&Chamber::base(), VertexSet::singleton(0));
    assert_eq!(enumerate_residue_groupoids(&b, &v).unwrap().len(), 4);
    let vy = b.vertex_in(&Chamber::base(), VertexSet::singleton(1));
    assert_eq!(enumerate_residue_groupoids(&b, &vy).unwrap().len(), 1);
    for tau in enumerate_residue_groupoids(&b, &b.vertex_in(&Chamber::base(), set(&[0, 1]))).unwrap() {
        let psi = groupoid_from_potential(&b, &b.vertex_in(&Chamber::base(), set(&[0, 1])), &tau).unwrap();
        assert!(psi.validate().passed());
    }
}

#[test]
fn holonomy_for_gamma() {
    let b = b0();
    let g = b.graph();
    let h = build_gamma_hierarchy(&b, ijkl(&b), 2).unwrap();
    let v = b.vertex_in(&Chamber::base(), set(&[I]));
    let stab: Vec<Element> = g
        .enumerate_ball_in(g.perp_closed(v.ty).unwrap(), 2)
        .into_iter()
        .take(5)
        .collect();
    let hol = groupoid_holonomy(&h, &v, &stab).unwrap();
    assert!(hol.homomorphism.passed());
    let identity_potential = vec![VertexPerm::identity(4); hol.chambers.len()];
    let gamma_index = hol.groupoids.iter().position(|t| *t == identity_potential).unwrap();
    for (lambda, p) in &hol.images {
        assert_eq!(p[gamma_index], gamma_index, "{lambda:?}");
    }
    let id = hol.image(&Element::identity()).unwrap();
    assert!(id.iter().enumerate().all(|(k, &x)| k == x));

    let outside = b.chamber(&[Syllable::new(L, 1)]).unwrap().0;
    assert!(matches!(groupoid_holonomy(&h, &v, &[outside]), Err(Error::Domain(_))));
}

#[test]
fn holonomy_homomorphism_on_fork() {
    let b = Building::new(fork(3));
    let g = b.graph();
    let ord = class_order_for_gamma(g, &[0, 1, 2, 3]).unwrap();
    let h = build_gamma_hierarchy(&b, ord, 2).unwrap();
    let v = b.vertex_in(&Chamber::base(), VertexSet::singleton(0));
    let sample: Vec<Element> = ["", "x1", "y1", "x2", "x1y1"]
        .iter()
        .map(|w| {
            let word: Vec<Syllable> = w
                .as_bytes()
                .chunks(2)
                .map(|ch| Syllable::new(if ch[0] == b'x' { 0 } else { 1 }, (ch[1] - b'0') as u32))
                .collect();
            g.normal_form(&word).unwrap()
        })
        .collect();
    let hol = groupoid_holonomy(&h, &v, &sample).unwrap();
    assert!(hol.homomorphism.passed(), "{:?}", hol.homomorphism);
    assert_eq!(hol.groupoids.len(), 4);
    let kernel = hol.kernel();
    assert!(kernel.contains(&Element::identity()));
    assert!(kernel.contains(&sample[2]));
    assert!(!kernel.contains(&sample[1]));
}

#[test]
fn json_dump_lists_adjacent_maps() {
    let b = Building::new(fork(2));
    let psi = twisted_x_section(&b);
    let v = psi.to_json().unwrap();
    assert_eq!(v["maps"].as_array().unwrap().len(), 2);
    assert_eq!(v["J"], serde_json::json!([0]));
}
