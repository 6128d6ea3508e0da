use koszulkit::ainfty::AInfinityAlgebra;
use koszulkit::checks::*;
use koszulkit::dgmod::{koszul_dual, DgModule};
use koszulkit::exactlin::in_span;
use koszulkit::presentations::{parse_presentation, realize_algebra, DegreeWindow, FinDimDgAlgebra};
use koszulkit::twisted::{hom_complex, zero_matrix, TwistedComplex};
use koszulkit::{Error, LinComb, Scalar, F2, Q};

fn realize<F: Scalar>(text: &str) -> FinDimDgAlgebra<F> {
    let text = match F::field() {
        koszulkit::FieldTag::Rationals => text.to_string(),
        _ => format!("field {}\n{text}", F::field()),
    };
    realize_algebra(&parse_presentation(&text).unwrap(), DegreeWindow::UNBOUNDED, 4).unwrap()
}

const K2: &str = "vertices 1 2\n";
const A2: &str = "vertices 1 2\narrow a : 1 -> 2 deg 1\n";
const A3_RAD2: &str = "vertices 1 2 3\narrow a : 1 -> 2 deg 1\narrow b : 2 -> 3 deg 1\nrelation b*a\n";
const CUBIC: &str = "vertices 1 2 3 4\narrow a1 : 1 -> 2 deg 1\narrow a2 : 2 -> 3 deg 1\narrow a3 : 3 -> 4 deg 1\nrelation a3*a2*a1\n";

fn span<F: Scalar>(text: &str, s: usize) -> GenerationCertificate<F> {
    let e = AInfinityAlgebra::from_dg(&realize::<F>(text), 2);
    one_generated_span_check(&e, 1, 3, s, 100_000).unwrap()
}

#[test]
fn span_check_on_koszul_algebras() {
    for text in [K2, A2, A3_RAD2] {
        let c = span::<F2>(text, 3);
        assert_eq!(c.verdict, GenerationVerdict::GeneratedUpToBound, "{text}");
        assert!(c.witness.is_none());
        assert!(one_generated_via_dual(&realize::<F2>(text), 1, 6, 6).unwrap().holds());
    }
}

#[test]
fn cubic_relation_has_a_degree_two_witness() {
    let e = AInfinityAlgebra::from_dg(&realize::<F2>(CUBIC), 2);
    let c = one_generated_span_check(&e, 1, 3, 4, 100_000).unwrap();
    assert_eq!(c.verdict, GenerationVerdict::NotGeneratedWithWitness);
    let w = c.witness.clone().unwrap();
    assert_eq!(w.degree, 2);
    assert_eq!(w.source.entries, vec![(0, 0)]);
    assert_eq!(w.target.entries, vec![(3, 0), (2, 0)]);
    let desc = describe_morphism(&e, &w);
    assert!(desc.contains("a2*a1"), "{desc}");
    // the witness is closed and not a boundary
    let h = hom_complex(&e, &w.source, &w.target).unwrap();
    assert!(koszulkit::twisted::m1_tw(&e, &w).is_zero());
    assert!(h.primitive(&w).unwrap().is_none());
    assert_eq!(c.report(&e).verdict, koszulkit::Verdict::Fails);
    let dual = one_generated_via_dual(&realize::<F2>(CUBIC), 1, 6, 6).unwrap();
    assert!(!dual.holds());
}

#[test]
fn factorable_classes_form_a_subspace() {
    let e = AInfinityAlgebra::from_dg(&realize::<F2>(CUBIC), 2);
    let s2 = TwistedComplex::<F2>::single(1, 0);
    let mut d = zero_matrix(2, 2);
    let a3 = (0..e.dim()).find(|&x| e.label(x) == "a3").unwrap();
    d[0][1] = LinComb::basis(a3);
    let z = TwistedComplex::new(vec![(3, 0), (2, 0)], d);
    let x = TwistedComplex::single(0, 0);
    let (hom, basis) = degree_two_factorable(&e, &x, &z, &[s2, TwistedComplex::single(2, 0)]).unwrap();
    let dim = hom.basis.get(&2).map_or(0, |b| b.len());
    for u in &basis {
        for v in &basis {
            let sum: Vec<F2> = u.iter().zip(v).map(|(a, b)| *a + *b).collect();
            assert!(in_span(dim, &basis, &sum));
        }
    }
    // a2 a1 is not in the span
    let a2a1 = (0..e.dim()).find(|&y| e.label(y) == "a2*a1").unwrap();
    let mut f = koszulkit::twisted::TwMorphism::zero(&x, &z, 2);
    f.matrix[1][0] = LinComb::basis(a2a1);
    assert!(!in_span(dim, &basis, &hom.to_vector(&f)));
}

#[test]
fn span_check_refuses_rationals_and_reports_overflow() {
    let e = AInfinityAlgebra::from_dg(&realize::<Q>(A2), 2);
    assert!(matches!(one_generated_span_check(&e, 1, 2, 2, 1000), Err(Error::UnsupportedField(_))));
    let e = AInfinityAlgebra::from_dg(&realize::<F2>(CUBIC), 2);
    let c = one_generated_span_check(&e, 1, 2, 4, 3).unwrap();
    assert_eq!(c.verdict, GenerationVerdict::Inconclusive);
}

#[test]
fn dual_generation_is_monotone_in_d() {
    for text in [K2, A2, A3_RAD2, CUBIC] {
        let a = realize::<Q>(text);
        let mut seen = false;
        for d in 1..=4 {
            let ok = one_generated_via_dual(&a, d, 6, 6).unwrap().holds();
            assert!(ok || !seen, "{text} d={d}");
            seen |= ok;
        }
        assert!(seen, "{text}");
    }
}

#[test]
fn complicial_examples() {
    let a = realize::<Q>("vertices 1 2\narrow a : 1 -> 2 deg 0\n");
    let v = complicial_check_silting(&a, 1).unwrap();
    assert!(v.holds && v.strict);
    let dual_numbers = realize::<Q>("vertices 1\narrow x : 1 -> 1 deg -1\nrelation x*x\n");
    assert!(!complicial_check_silting(&dual_numbers, 1).unwrap().holds);
    let v = complicial_check_silting(&dual_numbers, 2).unwrap();
    assert!(v.holds && v.strict);
    let v = complicial_check_silting(&dual_numbers, 3).unwrap();
    assert!(v.holds && !v.strict);
    let positive = realize::<Q>("vertices 1\narrow x : 1 -> 1 deg 1\nrelation x*x\n");
    assert!(matches!(complicial_check_silting(&positive, 2), Err(Error::NotConnective(_))));
}

#[test]
fn semibricks_of_modules() {
    let a = realize::<Q>("vertices 1 2\narrow a : 1 -> 2 deg 0\n");
    let simples = SimpleCollection::from_modules(
        &a,
        vec![("S1".into(), DgModule::simple(&a, 0)), ("S2".into(), DgModule::simple(&a, 1))],
        2,
    )
    .unwrap();
    assert_eq!(simples.hom_dim(0, 1, 1) + simples.hom_dim(1, 0, 1), 1);
    assert!(semibrick_check(&simples, 1, 1).unwrap().holds());
    let mixed = SimpleCollection::from_modules(
        &a,
        vec![("P1".into(), DgModule::projective(&a, 0)), ("S1".into(), DgModule::simple(&a, 0))],
        2,
    )
    .unwrap();
    let r = semibrick_check(&mixed, 1, 1).unwrap();
    assert!(!r.holds());
    // shifting out of the window
    let shifted = SimpleCollection::from_modules(&a, vec![("S1".into(), DgModule::simple(&a, 0))], 2).unwrap();
    assert!(semibrick_check(&shifted, 1, 1).unwrap().holds());
    assert!(!semibrick_check(&shifted, 2, 1).unwrap().holds());
    assert!(semibrick_check(&shifted, 2, 2).unwrap().holds());
    let dup = SimpleCollection::from_modules(
        &a,
        vec![("S".into(), DgModule::simple(&a, 0)), ("S".into(), DgModule::simple(&a, 1))],
        2,
    );
    assert!(matches!(dup, Err(Error::InvalidArgument(_))));
}

#[test]
fn endomorphism_division_test() {
    // k[x]/x^2 in degree 0: End of the regular module is not a division algebra
    let a = realize::<Q>("vertices 1\narrow x : 1 -> 1 deg 0\nrelation x*x\n");
    let c = SimpleCollection::from_modules(&a, vec![("A".into(), DgModule::regular(&a))], 1).unwrap();
    assert_eq!(c.ends[0].dim, 2);
    assert_eq!(c.ends[0].is_division(), Some(false));
    let s = SimpleCollection::from_modules(&a, vec![("S".into(), DgModule::simple(&a, 0))], 1).unwrap();
    assert_eq!(s.ends[0].is_division(), Some(true));
    // Q(i) and Q[x]/(x^2 - 1) by structure constants
    let q = |v: [i64; 2]| v.iter().map(|&x| Q::from_i64(x)).collect::<Vec<_>>();
    let gaussian = EndAlgebra { dim: 2, products: vec![vec![q([1, 0]), q([0, 1])], vec![q([0, 1]), q([-1, 0])]] };
    assert_eq!(gaussian.is_division(), Some(true));
    let split = EndAlgebra { dim: 2, products: vec![vec![q([1, 0]), q([0, 1])], vec![q([0, 1]), q([1, 0])]] };
    assert_eq!(split.is_division(), Some(false));
    let f2 = |v: [u64; 2]| v.iter().map(|&x| F2::from_i64(x as i64)).collect::<Vec<_>>();
    // F4 = F2[x]/(x^2 + x + 1)
    let f4 = EndAlgebra { dim: 2, products: vec![vec![f2([1, 0]), f2([0, 1])], vec![f2([0, 1]), f2([1, 1])]] };
    assert_eq!(f4.is_division(), Some(true));
}

#[test]
fn twisted_semibricks_and_recognition() {
    let k = AInfinityAlgebra::from_dg(&FinDimDgAlgebra::<Q>::semisimple(vec!["1".into()]), 2);
    let simples = SimpleCollection::from_twisted(&k, vec![("L".into(), TwistedComplex::single(0, 0))]).unwrap();
    assert!(semibrick_check(&simples, 1, 1).unwrap().holds());
    let r = recognition_check(&k, &simples, &[TwistedComplex::single(0, 0)], 1).unwrap();
    assert!(r.holds());
    assert_eq!(r.dims["H*(End P)"], [(0, 1)].into_iter().collect());

    // E = kA2 with |a| = 1; projectives are the extension and the other simple
    let e = koszul_dual(&realize::<Q>("vertices 1 2\narrow a : 1 -> 2 deg 0\n"), 4, 4).unwrap().algebra;
    let x = (0..e.dim()).find(|&y| !e.is_unit(y)).unwrap();
    let (s, t) = (e.basis[x].source, e.basis[x].target);
    let simples = SimpleCollection::from_twisted(
        &e,
        vec![("L1".into(), TwistedComplex::single(s, 0)), ("L2".into(), TwistedComplex::single(t, 0))],
    )
    .unwrap();
    assert!(semibrick_check(&simples, 1, 1).unwrap().holds());
    let mut d = zero_matrix(2, 2);
    d[0][1] = LinComb::basis(x);
    let p1 = TwistedComplex::new(vec![(t, 0), (s, 0)], d);
    let p2 = TwistedComplex::single(t, 0);
    let r = recognition_check(&e, &simples, &[p1.clone(), p2.clone()], 1).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.dims["H*(End P)"], [(0, 3)].into_iter().collect());
    // the simple itself is not projective: Hom^1(L1, L2) survives
    let bad = recognition_check(&e, &simples, &[TwistedComplex::single(s, 0), p2], 1).unwrap();
    assert!(!bad.holds());
    assert!(bad.parts.iter().any(|p| p.check == "positive_homs_to_simples_vanish" && !p.holds()));
    // no closed projection onto the wrong simple
    let swapped = recognition_check(&e, &simples, &[TwistedComplex::single(t, 0), p1], 1).unwrap();
    assert!(!swapped.holds());
}
