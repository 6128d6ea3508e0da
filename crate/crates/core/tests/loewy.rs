mod common;

use common::modules::*;
use koszulkit::dgmod::DgModule;
use koszulkit::loewy::*;
use koszulkit::presentations::FinDimDgAlgebra;
use koszulkit::{Scalar, F3, Q};

/// One radical step satisfies the cohomology formulas: nothing above the top
/// degree, the radical of the top cohomology, everything below unchanged.
fn check_rad_step<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>) {
    let c = *m.cohomology_dims().keys().next_back().unwrap();
    let r = rad(m, a, 2).unwrap();
    r.validate(a).unwrap();
    let before = m.cohomology_dims();
    let after = r.cohomology_dims();
    assert!(after.keys().all(|&k| k <= c));
    assert_eq!(after.get(&c).copied().unwrap_or(0), radical_dim_of_cohomology(m, a, c));
    for (&k, &n) in &before {
        if k < c {
            assert_eq!(after.get(&k), Some(&n), "degree {k}");
        }
    }
    assert!(r.total_cohomology() < m.total_cohomology());
}

fn suite<F: Scalar>(seeds: std::ops::Range<u64>) {
    let a = a3::<F>();
    let mut mixed = 0;
    for seed in seeds {
        let m = random_module(&a, seed);
        let tower = radical_tower(&m, &a, 2).unwrap();
        for x in &tower {
            check_rad_step(x, &a);
        }
        let sum: usize = m.cohomology_dims().keys().map(|&k| heart_loewy_words(&m, &a, k)).sum();
        assert_eq!(big_loewy(&m, &a, 2).unwrap(), sum, "seed {seed}");
        let p = loewy_profile(&m, &a, 2).unwrap();
        assert!(p.loewy_lower <= p.loewy_upper);
        if m.cohomology_dims().len() == 1 {
            assert_eq!(p.loewy_lower, p.loewy_upper);
        } else {
            mixed += 1;
        }
    }
    assert!(mixed >= 4, "only {mixed} modules with two cohomology degrees");
}

#[test]
fn random_modules_over_q() {
    suite::<Q>(0..20);
}

#[test]
fn random_modules_over_f3() {
    suite::<F3>(100..120);
}

#[test]
fn two_degree_example() {
    // H^{-1} = S, H^0 = the projective of length 3
    let a = a3::<Q>();
    let p = (0..3).map(|v| DgModule::projective(&a, v)).max_by_key(|p| p.dim()).unwrap();
    let m = DgModule::direct_sum(&[&p, &DgModule::simple(&a, 1).shift(1)]);
    assert_eq!(big_loewy(&m, &a, 2).unwrap(), 4);
    assert_eq!(loewy_bounds(&m, &a, 2).unwrap(), (3, 4));
    let prof = loewy_profile(&m, &a, 2).unwrap();
    assert_eq!(prof.lower_clause, LowerClause::Heart);
    assert_eq!(prof.topd, Some(0));
    assert_eq!(prof.tower.len(), 4);
    // S[1] ⊕ S: the ceiling clause wins
    let s = DgModule::simple(&a, 0);
    let m = DgModule::direct_sum(&[&s, &s.shift(1)]);
    let prof = loewy_profile(&m, &a, 2).unwrap();
    assert_eq!((prof.loewy_lower, prof.loewy_upper), (1, 2));
    let m3 = DgModule::direct_sum(&[&s, &s.shift(1), &s.shift(2)]);
    let prof = loewy_profile(&m3, &a, 3).unwrap();
    assert_eq!((prof.loewy_lower, prof.loewy_upper, prof.lower_clause), (1, 3, LowerClause::Heart));
}

#[test]
fn heart_oracle_matches_library() {
    let a = a3::<Q>();
    for seed in 200..210 {
        let m = random_module(&a, seed);
        for &k in m.cohomology_dims().keys() {
            assert_eq!(heart_loewy(&m, &a, k), heart_loewy_words(&m, &a, k));
        }
    }
}
