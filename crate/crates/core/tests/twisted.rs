use std::collections::BTreeMap;

use koszulkit::ainfty::AInfinityAlgebra;
use koszulkit::dgmod::koszul_dual;
use koszulkit::presentations::{parse_presentation, realize_algebra, DegreeWindow, FinDimDgAlgebra};
use koszulkit::twisted::*;
use koszulkit::{Error, LinComb, Scalar, F2, F5, Q};

fn realize<F: Scalar>(text: &str) -> FinDimDgAlgebra<F> {
    realize_algebra(&parse_presentation(text).unwrap(), DegreeWindow::UNBOUNDED, 4).unwrap()
}

const CUBIC: &str = "vertices 1 2 3 4\narrow a1 : 1 -> 2 deg 0\narrow a2 : 2 -> 3 deg 0\narrow a3 : 3 -> 4 deg 0\nrelation a3*a2*a1\n";

/// Ext algebra of the cubic relation: x1, x2, x3 in degree 1, z in degree 2, m3(x1, x2, x3) = ±z.
fn cubic_dual() -> (AInfinityAlgebra<Q>, [usize; 4]) {
    let e = koszul_dual(&realize::<Q>(CUBIC), 5, 5).unwrap().algebra;
    let find = |s: usize, t: usize, n: i64| {
        let v: Vec<usize> = (0..e.dim())
            .filter(|&x| e.basis[x].source == s && e.basis[x].target == t && e.degree(x) == n)
            .collect();
        assert_eq!(v.len(), 1);
        v[0]
    };
    let ids = [find(1, 0, 1), find(2, 1, 1), find(3, 2, 1), find(3, 0, 2)];
    (e, ids)
}

fn chain(entries: &[(usize, i64)], twists: &[(usize, usize, usize)]) -> TwistedComplex<Q> {
    let mut delta = zero_matrix(entries.len(), entries.len());
    for &(i, j, x) in twists {
        delta[i][j] = LinComb::basis(x);
    }
    TwistedComplex::new(entries.to_vec(), delta)
}

#[test]
fn maurer_cartan_sees_the_triple_product() {
    let (e, [x1, x2, x3, z]) = cubic_dual();
    assert!(!e.m(&[x1, x2, x3]).is_zero());
    assert!(e.m(&[x1, x2]).is_zero());
    let zero = chain(&[(0, 0), (1, 0)], &[]);
    assert!(mc_check(&e, &zero).unwrap().holds());
    let three = chain(&[(0, 0), (1, 0), (2, 0)], &[(0, 1, x1), (1, 2, x2)]);
    assert!(mc_check(&e, &three).unwrap().holds());
    let four = chain(&[(0, 0), (1, 0), (2, 0), (3, 0)], &[(0, 1, x1), (1, 2, x2), (2, 3, x3)]);
    let r = mc_check(&e, &four).unwrap();
    assert!(!r.holds());
    assert_eq!(r.certificate.as_deref(), Some("entry (1, 4) is nonzero"));
    let shifted = chain(&[(0, 1), (3, 0)], &[(0, 1, z)]);
    assert!(mc_check(&e, &shifted).unwrap().holds());
    // wrong degree
    let bad = chain(&[(0, 0), (3, 0)], &[(0, 1, z)]);
    assert!(matches!(mc_check(&e, &bad), Err(Error::Malformed(_))));
}

#[test]
fn non_closed_twist_fails() {
    // a dg algebra with d(h) = b a: the twist h alone is not closed
    let a = realize::<Q>("vertices 1 2 3\narrow a : 1 -> 2 deg 1\narrow b : 2 -> 3 deg 1\narrow h : 1 -> 3 deg 1\ndifferential h = b*a\n");
    let a = AInfinityAlgebra::from_dg(&a, 2);
    let h = (0..a.dim()).find(|&x| a.label(x) == "h").unwrap();
    let t = chain(&[(2, 0), (0, 0)], &[(0, 1, h)]);
    let r = mc_check(&a, &t).unwrap();
    assert!(!r.holds());
    assert_eq!(r.certificate.as_deref(), Some("entry (1, 2) is nonzero"));
}

#[test]
fn hom_complexes_square_to_zero_and_shift() {
    let (e, [x1, x2, x3, z]) = cubic_dual();
    let objects = [
        chain(&[(0, 0)], &[]),
        chain(&[(3, 0)], &[]),
        chain(&[(0, 0), (1, 0), (2, 0)], &[(0, 1, x1), (1, 2, x2)]),
        chain(&[(1, 0), (2, 0), (3, 0)], &[(0, 1, x2), (1, 2, x3)]),
        chain(&[(0, 1), (3, 0)], &[(0, 1, z)]),
        chain(&[(0, 1), (2, 0), (3, 0)], &[(1, 2, x3)]),
    ];
    for t in &objects {
        assert!(mc_check(&e, t).unwrap().holds());
    }
    for t in &objects {
        for u in &objects {
            let h = hom_complex(&e, t, u).unwrap();
            let h1 = hom_complex(&e, t, &u.shift(1)).unwrap();
            let shifted: BTreeMap<i64, usize> = h.cohomology_dims().into_iter().map(|(m, d)| (m - 1, d)).collect();
            assert_eq!(h1.cohomology_dims(), shifted);
        }
    }
    // single entries reproduce the algebra blocks
    let s = |v| chain(&[(v, 0)], &[]);
    let h = hom_complex(&e, &s(3), &s(0)).unwrap();
    assert_eq!(h.cohomology_dims(), BTreeMap::from([(2, 1)]));
    let h = hom_complex(&e, &s(2), &s(2)).unwrap();
    assert_eq!(h.cohomology_dims(), BTreeMap::from([(0, 1)]));
}

fn closed_basis(e: &AInfinityAlgebra<Q>, t: &TwistedComplex<Q>, u: &TwistedComplex<Q>, m: i64) -> Vec<TwMorphism<Q>> {
    let h = hom_complex(e, t, u).unwrap();
    let Some(basis) = h.basis.get(&m) else { return Vec::new() };
    let n = basis.len();
    let kernel = match h.differential.get(&m) {
        Some(d) => d.kernel_basis(),
        None => (0..n).map(|k| (0..n).map(|i| if i == k { Q::from_i64(1) } else { Q::from_i64(0) }).collect()).collect(),
    };
    kernel.iter().map(|v| h.to_morphism(m, v)).collect()
}

#[test]
fn identities_cones_and_associators() {
    let (e, [x1, x2, x3, _]) = cubic_dual();
    let t = chain(&[(0, 0), (1, 0)], &[(0, 1, x1)]);
    let u = chain(&[(1, 0), (2, 0)], &[(0, 1, x2)]);
    let w = chain(&[(2, 0), (3, 0)], &[(0, 1, x3)]);
    let all = [t.clone(), u.clone(), w.clone(), t.shift(2), chain(&[(0, -1), (1, 0)], &[])];
    for a in &all {
        let id = TwMorphism::identity(&e, a);
        assert!(m1_tw(&e, &id).is_zero());
        for b in &all {
            for m in -2..=3 {
                for f in closed_basis(&e, a, b, m) {
                    assert_eq!(compose(&e, &TwMorphism::identity(&e, b), &f).unwrap().matrix, f.matrix);
                    assert_eq!(compose(&e, &f, &id).unwrap().matrix, f.matrix);
                }
            }
        }
    }
    // cone of the identity is contractible
    for a in &all {
        let c = cone(&e, &TwMorphism::identity(&e, a)).unwrap();
        assert!(mc_check(&e, &c).unwrap().holds());
        for b in &all {
            assert!(hom_complex(&e, &c, b).unwrap().cohomology_dims().is_empty());
            assert!(hom_complex(&e, b, &c).unwrap().cohomology_dims().is_empty());
        }
    }
    // cone of zero is the direct sum
    let c = cone(&e, &TwMorphism::zero(&t, &u, 0)).unwrap();
    assert_eq!(c, u.direct_sum(&t.shift(1)));
    // associativity up to m1 of the associator, for degree one maps t -> u[1] -> w[2] -> ...
    let x = chain(&[(3, 0)], &[]);
    for f in closed_basis(&e, &t, &u, 1) {
        for g in closed_basis(&e, &u, &w, 1) {
            for h in closed_basis(&e, &w, &x, 0) {
                let lhs = compose(&e, &compose(&e, &h, &g).unwrap(), &f).unwrap();
                let rhs = compose(&e, &h, &compose(&e, &g, &f).unwrap()).unwrap();
                let mut defect = lhs.clone();
                defect.add_scaled(&rhs, &Q::from_i64(-1));
                let m3 = m_tw(&e, &[&h, &g, &f]).unwrap();
                let dm3 = m1_tw(&e, &m3);
                let mut plus = defect.clone();
                plus.add_scaled(&dm3, &Q::from_i64(1));
                let mut minus = defect.clone();
                minus.add_scaled(&dm3, &Q::from_i64(-1));
                assert!(plus.is_zero() || minus.is_zero());
                let hom = hom_complex(&e, &t, &x).unwrap();
                assert!(hom.primitive(&defect).unwrap().is_some());
            }
        }
    }
}

#[test]
fn cone_of_the_arrow_class_is_the_extension() {
    // E = kA4/(a3 a2 a1) with |a_i| = 1: the cone of a1: L1[-1] -> L2 is "1 over 2"
    let e = AInfinityAlgebra::from_dg(&realize::<Q>(&CUBIC.replace("deg 0", "deg 1")), 2);
    let a1 = (0..e.dim()).find(|&x| e.label(x) == "a1").unwrap();
    let src = chain(&[(0, -1)], &[]);
    let tgt = chain(&[(1, 0)], &[]);
    let mut f = TwMorphism::zero(&src, &tgt, 0);
    f.matrix[0][0] = LinComb::basis(a1);
    let c = cone(&e, &f).unwrap();
    assert_eq!(c.entries, vec![(1, 0), (0, 0)]);
    assert_eq!(c.delta[0][1], LinComb::basis(a1));
    assert!(mc_check(&e, &c).unwrap().holds());
    // L1 on top: a quotient of the cone, L2 at the bottom: a subobject
    let s = |v| chain(&[(v, 0)], &[]);
    assert_eq!(hom_complex(&e, &c, &s(0)).unwrap().cohomology_dims().get(&0), Some(&1));
    assert_eq!(hom_complex(&e, &s(0), &c).unwrap().cohomology_dims().get(&0), None);
    assert_eq!(hom_complex(&e, &s(1), &c).unwrap().cohomology_dims().get(&0), Some(&1));
}

#[test]
fn filt_objects_small_cases() {
    let k = AInfinityAlgebra::from_dg(&FinDimDgAlgebra::<F2>::semisimple(vec!["1".into()]), 2);
    let cfg = HeartWindowConfig::new(1).unwrap();
    let one = filt_objects(&k, cfg, 1, &FieldEnumeration::Exhaustive, 1000).unwrap();
    assert_eq!(one.len(), 1);
    let two = filt_objects(&k, cfg, 2, &FieldEnumeration::Exhaustive, 1000).unwrap();
    assert_eq!(two.len(), 2);
    let d3 = filt_objects(&k, HeartWindowConfig::new(3).unwrap(), 1, &FieldEnumeration::Exhaustive, 1000).unwrap();
    let shifts: Vec<i64> = d3.iter().map(|t| t.entries[0].1).collect();
    assert_eq!(shifts, vec![0, 1, 2]);

    let a2 = AInfinityAlgebra::from_dg(&realize::<F2>("field F2\nvertices 1 2\narrow a : 1 -> 2 deg 1\n"), 2);
    let objs = filt_objects(&a2, cfg, 2, &FieldEnumeration::Exhaustive, 1000).unwrap();
    let nonsplit: Vec<_> = objs.iter().filter(|t| t.delta.iter().flatten().any(|x| !x.is_zero())).collect();
    assert_eq!(nonsplit.len(), 1);
    assert_eq!(nonsplit[0].entries, vec![(1, 0), (0, 0)]);
    // L1, L2, L1+L1, L1+L2, L2+L1 (split), L2+L2, L2 over L1 (nonsplit); equal shifts permute
    assert_eq!(objs.len(), 2 + 3 + 1);
    for t in &objs {
        assert!(mc_check(&a2, t).unwrap().holds());
        assert_eq!(co_t_parts(t), (t.entries.iter().all(|e| e.1 == 0), true));
    }

    let q = AInfinityAlgebra::from_dg(&FinDimDgAlgebra::<Q>::semisimple(vec!["1".into()]), 2);
    assert!(matches!(filt_objects(&q, cfg, 1, &FieldEnumeration::Exhaustive, 10), Err(Error::UnsupportedField(_))));
    let grid = filt_objects(&q, cfg, 1, &FieldEnumeration::Grid(vec![Q::from_i64(1)]), 10).unwrap();
    assert_eq!(grid.len(), 1);
}

#[test]
fn random_f5_hom_complexes_square_to_zero() {
    let e = AInfinityAlgebra::from_dg(
        &realize::<F5>("field F5\nvertices 1 2 3\narrow a : 1 -> 2 deg 1\narrow b : 2 -> 3 deg 1\narrow c : 1 -> 3 deg 2\n"),
        2,
    );
    let objs = filt_objects(&e, HeartWindowConfig::new(2).unwrap(), 2, &FieldEnumeration::Exhaustive, 100_000).unwrap();
    for t in objs.iter().step_by(7) {
        for u in objs.iter().step_by(5) {
            hom_complex(&e, t, u).unwrap();
        }
    }
}
