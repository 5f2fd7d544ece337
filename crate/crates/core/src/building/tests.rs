use super::*;
use crate::catalog::running_example;
use std::collections::BTreeSet;

const I: usize = 0;
const J: usize = 1;
const K: usize = 2;
const L: usize = 3;

fn b0() -> Building {
    Building::new(running_example())
}

fn ch(b: &Building, s: &[(usize, u32)]) -> Chamber {
    let syl: Vec<_> = s.iter().map(|&(v, e)| Syllable::new(v, e)).collect();
    b.chamber(&syl).unwrap()
}

fn set(xs: &[usize]) -> VertexSet {
    VertexSet::from_iter(xs.iter().copied())
}

/// Vertex identity by the defining equivalence: `γ₁⁻¹γ₂ ∈ Γ_J` via retraction.
fn same_vertex(b: &Building, g1: &Element, g2: &Element, j: VertexSet) -> bool {
    let d = b.graph().left_quotient(g1, g2);
    b.graph().retract(&d, j) == d
}

#[test]
fn base_chamber_vertices() {
    let b = b0();
    let vs = b.chamber_vertices(&Chamber::base());
    let types: BTreeSet<_> = vs.iter().map(|v| v.ty).collect();
    let expected: BTreeSet<_> =
        [set(&[]), set(&[I]), set(&[J]), set(&[K]), set(&[L]), set(&[I, J]), set(&[J, K])].into();
    assert_eq!(types, expected);
    let c = ch(&b, &[(L, 2), (I, 1)]);
    assert_eq!(b.center(&c).rep, c.0);
    assert_eq!(b.vertex_in(&c, VertexSet::EMPTY), b.center(&c));
}

#[test]
fn adjacent_chambers_share_vertices_containing_label() {
    let b = b0();
    let c = ch(&b, &[(J, 1)]);
    let a: BTreeSet<_> = b.chamber_vertices(&Chamber::base()).into_iter().collect();
    let d: BTreeSet<_> = b.chamber_vertices(&c).into_iter().collect();
    let shared: Vec<_> = a.intersection(&d).collect();
    assert_eq!(shared.len(), 3);
    assert!(shared.iter().all(|v| v.ty.contains(J)));
}

#[test]
fn intersection_examples() {
    let b = b0();
    let base = Chamber::base();
    let x = b.chamber_intersection(&base, &base).unwrap();
    assert_eq!(x.jmin, VertexSet::EMPTY);
    assert_eq!(x.shared.len(), 7);
    let c = ch(&b, &[(I, 1), (J, 1)]);
    let x = b.chamber_intersection(&base, &c).unwrap();
    assert_eq!(x.jmin, set(&[I, J]));
    assert_eq!(x.shared, vec![b.vertex_in(&base, set(&[I, J]))]);
    assert!(b.chamber_intersection(&base, &ch(&b, &[(L, 1), (I, 1)])).is_none());
}

#[test]
fn adjacency_examples() {
    let b = b0();
    let base = Chamber::base();
    assert_eq!(b.adjacency(&base, &ch(&b, &[(K, 1)])), Some(K));
    assert_eq!(b.adjacency(&base, &base), None);
    let adjacent = b.ball(1).iter().filter(|c| b.adjacency(&base, c).is_some()).count();
    assert_eq!(adjacent, 6);
    assert_eq!(b.neighbors(&base).len(), 6);
}

#[test]
fn residue_examples() {
    let b = b0();
    let base = Chamber::base();
    assert_eq!(b.residue(VertexSet::EMPTY, &base, None).unwrap(), vec![base.clone()]);
    assert_eq!(b.residue(set(&[I, J]), &base, None).unwrap().len(), 4);
    assert!(b.residue(set(&[I, K]), &base, None).is_err());
    assert_eq!(b.residue(set(&[I, K]), &base, Some(2)).unwrap().len(), 1 + 3 + 4);
}

#[test]
fn poset_on_base_chamber() {
    let b = b0();
    let vs = b.chamber_vertices(&Chamber::base());
    for u in &vs {
        assert!(b.leq(u, u));
        for v in &vs {
            if b.leq(u, v) && b.leq(v, u) {
                assert_eq!(u, v);
            }
            for w in &vs {
                if b.leq(u, v) && b.leq(v, w) {
                    assert!(b.leq(u, w));
                }
            }
        }
        assert!(b.leq(&vs[0], u));
    }
    let w = b.wedge(&Chamber::base(), &ch(&b, &[(K, 1)])).unwrap();
    assert_eq!((w.ty, w.rank()), (set(&[K]), 1));
    assert!(b.wedge(&Chamber::base(), &ch(&b, &[(L, 1), (I, 1)])).is_err());
}

#[test]
fn lower_degrees() {
    let b = b0();
    let base = Chamber::base();
    assert!(b.lower_edges(&b.center(&base)).is_empty());
    assert_eq!(b.lower_degree(&b.vertex_in(&base, set(&[I]))), 2);
    assert_eq!(b.lower_degree(&b.vertex_in(&base, set(&[K]))), 3);
    assert_eq!(b.lower_degree(&b.vertex_in(&base, set(&[I, J]))), 4);
    assert_eq!(b.lower_degree(&b.vertex_in(&base, set(&[J, K]))), 5);
}

#[test]
fn level_classes() {
    let b = b0();
    let centers: BTreeSet<_> = b.ball(2).iter().map(|c| b.level_class(&b.center(c))).collect();
    assert_eq!(centers.len(), 1);
    let v1 = b.vertex_in(&Chamber::base(), set(&[I]));
    let v2 = b.vertex_in(&ch(&b, &[(J, 1)]), set(&[I]));
    assert_ne!(v1, v2);
    assert!(b.level_adjacent(&v1, &v2));
    assert_eq!(b.level_class(&v1), b.level_class(&v2));
    let v3 = b.vertex_in(&ch(&b, &[(K, 1)]), set(&[I]));
    assert!(!b.level_adjacent(&v1, &v3));
}

#[test]
fn level_adjacency_closure_matches_class_ids() {
    let b = b0();
    let vs = b.vertices_of(&b.ball(2));
    let n = vs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..n {
        for c in a + 1..n {
            // Definitional oracle: chambers containing each vertex that are i-adjacent, i ∈ J⊥.
            let (va, vc) = (&vs[a], &vs[c]);
            if va.ty != vc.ty {
                continue;
            }
            let perp = b.graph().perp(va.ty).unwrap();
            let adjacent = b.chambers_containing(va).iter().any(|x| {
                b.chambers_containing(vc)
                    .iter()
                    .any(|y| b.adjacency(x, y).is_some_and(|i| perp.contains(i)))
            });
            assert_eq!(adjacent, b.level_adjacent(va, vc), "{va:?} {vc:?}");
            if adjacent {
                let (ra, rc) = (find(&mut parent, a), find(&mut parent, c));
                parent[ra] = rc;
            }
        }
    }
    for a in 0..n {
        for c in 0..n {
            let same = find(&mut parent, a) == find(&mut parent, c);
            assert_eq!(same, b.level_class(&vs[a]) == b.level_class(&vs[c]));
        }
    }
}

#[test]
fn one_downsets() {
    let b = b0();
    let base = Chamber::base();
    assert!(b.one_downset(&b.center(&base)).is_empty());
    let ij = b.vertex_in(&base, set(&[I, J]));
    let down: BTreeSet<_> = b.one_downset(&ij).into_iter().collect();
    let expected: BTreeSet<_> = [b.vertex_in(&base, set(&[I])), b.vertex_in(&base, set(&[J]))].into();
    assert_eq!(down, expected);
    for c in b.ball(1) {
        for u in b.chamber_vertices(&c) {
            let down = b.one_downset(&u);
            assert_eq!(down.len(), u.rank());
            for d in &down {
                assert!(b.leq(d, &u));
            }
        }
    }
}

#[test]
fn product_map_examples() {
    let b = b0();
    let base = Chamber::base();
    let i = set(&[I]);
    assert_eq!(b.product_map(i, &base, &base, &base).unwrap(), base);
    let c1 = ch(&b, &[(I, 1)]);
    let c2 = ch(&b, &[(J, 1)]);
    assert_eq!(b.product_map(i, &base, &c1, &c2).unwrap(), ch(&b, &[(I, 1), (J, 1)]));
    let mut images = BTreeSet::new();
    for x in b.residue(i, &base, None).unwrap() {
        for y in b.residue(set(&[J]), &base, None).unwrap() {
            // {i}⊥ = {j} in the running example.
            let z = b.product_map(i, &base, &x, &y).unwrap();
            assert_eq!(b.split(i, &base, &z).unwrap(), (x.clone(), y.clone()));
            images.insert(z);
        }
    }
    let target: BTreeSet<_> = b.residue(set(&[I, J]), &base, None).unwrap().into_iter().collect();
    assert_eq!(images, target);
    assert!(b.product_map(i, &base, &c2, &c1).is_err());
}

#[test]
fn vertex_identity_matches_defining_equivalence() {
    let b = b0();
    let g = b.graph();
    let elems = g.enumerate_ball(3);
    for &j in b.spherical_sets() {
        for x in elems.iter().step_by(3) {
            for y in elems.iter().step_by(5) {
                let same_id = b.vertex(x, j).unwrap() == b.vertex(y, j).unwrap();
                assert_eq!(same_id, same_vertex(&b, x, y, j));
            }
        }
    }
}

#[test]
fn truncation_exports() {
    let b = b0();
    let t = Truncation::new(&b, 1);
    assert_eq!(t.chambers.len(), 7);
    let t0 = Truncation::new(&b, 0);
    assert_eq!((t0.chambers.len(), t0.vertices.len()), (1, 7));
    assert_eq!(t0.cubes.iter().filter(|q| q.dim == 1).count(), 8);
    let dot = t0.to_dot();
    assert!(dot.starts_with("graph building {"));
    assert_eq!(dot.matches(" -- ").count(), 8);
    assert_eq!(t.to_json(), Truncation::new(&b, 1).to_json());
}
