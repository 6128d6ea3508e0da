mod common;

use koszulkit::ainfty::{build_retract, check_stasheff, cohomology_algebra, minimal_model};
use koszulkit::presentations::{parse_presentation, realize_algebra, DegreeWindow};
use koszulkit::F5;

#[test]
fn random_f5_minimal_models_satisfy_stasheff() {
    let mut nontrivial = 0;
    for seed in 0..30 {
        let text = common::random_f5_presentation(seed);
        let a = realize_algebra::<F5>(&parse_presentation(&text).unwrap(), DegreeWindow::UNBOUNDED, 3)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        build_retract(&a).verify(&a).unwrap();
        let m = minimal_model(&a, 5).unwrap();
        println!("seed {seed}: dim {} -> {}", a.dim(), m.dim());
        let r = check_stasheff(&m).unwrap();
        assert!(r.holds(), "seed {seed}: {:?}\n{text}", r.certificate);
        assert_eq!(m.graded_dims(), cohomology_algebra(&a).graded_dims());
        if (3..=5).any(|n| m.entries(n).next().is_some()) {
            nontrivial += 1;
        }
    }
    println!("{nontrivial} of 30 models have higher products");
    assert!(nontrivial > 0);
}
