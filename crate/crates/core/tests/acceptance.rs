//! End-to-end acceptance suite. Prints one line per criterion; all arithmetic
//! is exact, so the only tolerances are the wall-clock limits below.

mod common;

use num_traits::Zero;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use koszulkit::ainfty::{check_stasheff, minimal_model, AInfinityAlgebra};
use koszulkit::checks::{one_generated_span_check, one_generated_via_dual, GenerationVerdict};
use koszulkit::dgmod::{
    cone, double_dual_compare, koszul_dual, koszul_dual_of_coconnective, semifree_resolution, yoneda, DgModule,
    ExtGroups, ModuleMap,
};
use koszulkit::loewy::{big_loewy, radical_tower, rad};
use koszulkit::presentations::{parse_presentation, realize_algebra, DegreeWindow, FinDimDgAlgebra};
use koszulkit::{LinComb, Scalar, Window, F2, F5, Q};

fn realize<F: Scalar>(text: &str, bound: usize) -> FinDimDgAlgebra<F> {
    let text = match F::elements() {
        Some(e) if !text.starts_with("field") => format!("field F{}\n{text}", e.len()),
        _ => text.to_string(),
    };
    realize_algebra(&parse_presentation(&text).unwrap(), DegreeWindow::UNBOUNDED, bound).unwrap()
}

const CUBIC_DEG1: &str = "vertices 1 2 3 4\narrow a1 : 1 -> 2 deg 1\narrow a2 : 2 -> 3 deg 1\narrow a3 : 3 -> 4 deg 1\nrelation a3*a2*a1\n";
const QTILDE: &str = "vertices 1 2 3 4\narrow b1 : 2 -> 1 deg 0\narrow b2 : 3 -> 2 deg 0\narrow b3 : 4 -> 3 deg 0\nrelation b1*b2\nrelation b2*b3\n";
const K2: &str = "vertices 1 2\n";
const A2_DEG1: &str = "vertices 1 2\narrow a : 1 -> 2 deg 1\n";
const A3_RAD2_DEG1: &str = "vertices 1 2 3\narrow a : 1 -> 2 deg 1\narrow b : 2 -> 3 deg 1\nrelation b*a\n";

fn kronecker(d: usize) -> String {
    let mut t = String::from("vertices 1 2\n");
    for i in 1..d {
        t += &format!("arrow a{i} : 1 -> 2 deg -{i}\n");
    }
    t
}

type Check = Box<dyn FnOnce() -> Result<String, String>>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Result<String, String> {
    let e = realize::<Q>(CUBIC_DEG1, 4);
    let dual = koszul_dual_of_coconnective(&e, 6, 5).map_err(|x| x.to_string())?;
    let w = dual.window().ok_or("no certified window")?;
    ensure(w.covers(-3, 1), format!("window {w:?} does not cover [-3, 1]"))?;
    let hom = dual.block_dim(3, 0, -1);
    ensure(hom >= 1, "Hom(S4, S1[-1]) vanishes")?;
    let r = one_generated_via_dual(&e, 1, 6, 5).map_err(|x| x.to_string())?;
    ensure(!r.holds(), "1gen-dual holds")?;
    let cert = r.certificate.unwrap_or_default();
    ensure(cert.contains("[-1]"), format!("unexpected certificate {cert}"))?;
    Ok(format!("dim Hom(S4, S1[-1]) = {hom}, 1gen-dual fails: {cert}"))
}

fn criterion_2() -> Result<String, String> {
    let a = realize::<Q>(QTILDE, 8);
    let kd = koszul_dual(&a, 8, 5).map_err(|x| x.to_string())?;
    let w = kd.window().ok_or("no certified window")?;
    ensure(w.covers(0, 6), format!("window {w:?} does not cover [0, 6]"))?;
    let dims = kd.graded_dims();
    let got: Vec<usize> = (0..=6).map(|k| dims.get(&k).copied().unwrap_or(0)).collect();
    ensure(got == vec![4, 3, 2, 1, 0, 0, 0], format!("dims {got:?}"))?;
    // kQ for Q = 1 -> 2 -> 3 -> 4 up to orientation: one path per block, all composites nonzero
    let e = &kd.algebra;
    let span = |s: usize, t: usize| s.abs_diff(t) as i64;
    let orient = e.basis.iter().find(|b| b.degree == 1).map(|b| b.target as i64 - b.source as i64).ok_or("no arrows")?;
    for s in 0..4 {
        for t in 0..4 {
            for n in 0..=6 {
                let expect = usize::from((t as i64 - s as i64) * orient >= 0 && span(s, t) == n);
                ensure(kd.block_dim(s, t, n) == expect, format!("block ({s}, {t}, {n})"))?;
            }
        }
    }
    let non_units: Vec<usize> = e.non_units();
    for &x in &non_units {
        for &y in &non_units {
            if e.composable(x, y) {
                let p = e.m(&[x, y]);
                ensure(p.len() == 1, format!("m2({}, {}) = {p:?}", e.label(x), e.label(y)))?;
                let z = p.indices().next().unwrap();
                ensure(
                    e.basis[z].source == e.basis[y].source && e.basis[z].target == e.basis[x].target,
                    "product lands in the wrong block",
                )?;
            }
        }
    }
    for n in 3..=5 {
        ensure(e.entries(n).all(|(t, v)| v.is_zero() || t.iter().any(|&x| e.is_unit(x))), format!("m{n} is nonzero"))?;
    }
    Ok(format!("dims {got:?} in window [0, 6], products are path composition, no higher products"))
}

/// `dim H^n(M e_v)` for all degrees and vertices.
fn vertex_cohomology<F: Scalar>(m: &DgModule<F>, nv: usize) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    let (lo, hi) = (m.min_degree().unwrap_or(0), m.max_degree().unwrap_or(0));
    for n in lo..=hi {
        for v in 0..nv {
            let rank = |k: i64| {
                let src = m.at(k, v);
                if src.is_empty() {
                    return 0;
                }
                let cols: Vec<Vec<F>> = src.iter().map(|&x| m.d_basis(x).to_dense(m.dim())).collect();
                koszulkit::Matrix::from_columns(m.dim(), &cols).rank()
            };
            let h = m.at(n, v).len() - rank(n) - rank(n - 1);
            if h > 0 {
                out.push((n, v, h));
            }
        }
    }
    out
}

fn criterion_3() -> Result<String, String> {
    let mut notes = Vec::new();
    for d in [2usize, 3] {
        let a = realize::<Q>(&kronecker(d), 4);
        let reg = DgModule::regular(&a);
        let shifted: Vec<DgModule<Q>> = (1..d as i64).map(|i| DgModule::simple(&a, 0).shift(i)).collect();
        let src = DgModule::direct_sum(&shifted.iter().collect::<Vec<_>>());
        let images = (1..d)
            .map(|i| {
                let k = reg.basis.iter().position(|b| b.label == format!("a{i}")).expect("arrow in A");
                LinComb::basis(k)
            })
            .collect();
        let f = ModuleMap { degree: 0, images };
        f.validate(&a, &src, &reg).map_err(|x| x.to_string())?;
        let c = cone(&f, &src, &reg).map_err(|x| x.to_string())?;
        c.validate(&a).map_err(|x| x.to_string())?;
        let tops = DgModule::direct_sum(&[&DgModule::simple(&a, 0), &DgModule::simple(&a, 1)]);
        let got = vertex_cohomology(&c, 2);
        ensure(got == vertex_cohomology(&tops, 2), format!("d = {d}: cone cohomology {got:?}"))?;
        notes.push(format!("d={d}: {got:?}"));
    }
    Ok(format!("cone cohomology equals S1 + S2 ({})", notes.join("; ")))
}

fn criterion_4() -> Result<String, String> {
    let mut models: Vec<(String, AInfinityAlgebra<Q>)> = Vec::new();
    let cubic = realize::<Q>(CUBIC_DEG1, 4);
    models.push(("E".into(), minimal_model(&cubic, 5).map_err(|x| x.to_string())?));
    models.push(("E^!".into(), koszul_dual_of_coconnective(&cubic, 6, 5).map_err(|x| x.to_string())?.algebra));
    models.push(("Qtilde^!".into(), koszul_dual(&realize(QTILDE, 8), 8, 5).map_err(|x| x.to_string())?.algebra));
    for d in [2, 3] {
        let a = realize::<Q>(&kronecker(d), 4);
        models.push((format!("A_{d}"), minimal_model(&a, 5).map_err(|x| x.to_string())?));
    }
    for (name, m) in &models {
        ensure(m.arity_bound >= 5, format!("{name}: arity bound {}", m.arity_bound))?;
        let r = check_stasheff(m).map_err(|x| x.to_string())?;
        ensure(r.holds(), format!("{name}: {:?}", r.certificate))?;
    }
    let mut higher = 0;
    for seed in 0..10 {
        let text = common::random_f5_presentation(seed);
        let a = realize::<F5>(&text, 3);
        let m = minimal_model(&a, 5).map_err(|x| x.to_string())?;
        let r = check_stasheff(&m).map_err(|x| x.to_string())?;
        ensure(r.holds(), format!("random seed {seed}: {:?}", r.certificate))?;
        if (3..=5).any(|n| m.entries(n).any(|(_, v)| !v.is_zero())) {
            higher += 1;
        }
    }
    Ok(format!("{} models and 10 random F5 models satisfy Stasheff up to arity 5 ({higher} random ones with higher products)", models.len()))
}

fn criterion_5() -> Result<String, String> {
    let a = realize::<Q>(&CUBIC_DEG1.replace("deg 1", "deg 0"), 4);
    let e = koszul_dual(&a, 5, 5).map_err(|x| x.to_string())?.algebra;
    let find = |s: usize, t: usize, n: i64| -> Result<usize, String> {
        let v: Vec<usize> = (0..e.dim()).filter(|&x| e.basis[x].source == s && e.basis[x].target == t && e.degree(x) == n).collect();
        ensure(v.len() == 1, format!("block ({s}, {t}, {n}) has dimension {}", v.len()))?;
        Ok(v[0])
    };
    let (x1, x2, x3, z) = (find(1, 0, 1)?, find(2, 1, 1)?, find(3, 2, 1)?, find(3, 0, 2)?);
    let m3 = e.m(&[x1, x2, x3]);
    ensure(m3.indices().collect::<Vec<_>>() == vec![z], format!("m3 = {m3:?}"))?;
    // oracle: Ext^2(S4, S1) is one-dimensional but no Yoneda product of degree one classes reaches it
    let s: Vec<DgModule<Q>> = (0..4).map(|v| DgModule::simple(&a, v)).collect();
    let res: Vec<_> = s.iter().map(|m| semifree_resolution(m, &a, -4).unwrap()).collect();
    let ext = |i: usize, j: usize| ExtGroups::new(&res[i], &s[j], 3).unwrap();
    let e41 = ext(3, 0);
    ensure(e41.dim(2) == 1, format!("Ext^2(S4, S1) has dimension {}", e41.dim(2)))?;
    // degree one classes run S4 -> S3 and S2 -> S1 only, so no pair composes into Ext^2(S4, S1)
    let ones: Vec<(usize, usize)> = (0..4).map(|m| (ext(3, m).dim(1), ext(m, 0).dim(1))).collect();
    ensure(ones == vec![(0, 0), (0, 1), (1, 0), (0, 0)], format!("Ext^1 dimensions {ones:?}"))?;
    let mut composites = 0;
    for mid in 0..4 {
        let (first, second) = (ext(3, mid), ext(mid, 0));
        for p in 0..first.dim(1) {
            for q in 0..second.dim(1) {
                let c = yoneda(&second.rep_map(1, q), &first.rep_map(1, p), 1, &res[3], &res[mid], &s[mid], &s[0])
                    .map_err(|x| x.to_string())?;
                let class = e41.class_of(2, &c).ok_or("composite is not a cocycle")?;
                ensure(class.iter().all(|c| c.is_zero()), "a Yoneda product reaches Ext^2(S4, S1)")?;
                composites += 1;
            }
        }
    }
    ensure(e.m(&[x1, x2]).is_zero() && e.m(&[x2, x3]).is_zero(), "m2 of consecutive arrows is nonzero")?;
    Ok(format!("m3(x1, x2, x3) = {}, Ext^2(S4, S1) = 1, {composites} Yoneda composites reach it", m3.get(z)))
}

fn criterion_6() -> Result<String, String> {
    let mut lines = Vec::new();
    for (name, text) in [("k^2", K2), ("kA2", A2_DEG1), ("kA3/rad^2", A3_RAD2_DEG1), ("kA4/(a3a2a1)", CUBIC_DEG1)] {
        let a = realize::<F2>(text, 4);
        let e = AInfinityAlgebra::from_dg(&a, 2);
        let span = one_generated_span_check(&e, 1, 3, 4, 1_000_000).map_err(|x| x.to_string())?;
        let dual = one_generated_via_dual(&a, 1, 6, 5).map_err(|x| x.to_string())?;
        let span_ok = match span.verdict {
            GenerationVerdict::GeneratedUpToBound => true,
            GenerationVerdict::NotGeneratedWithWitness => false,
            GenerationVerdict::Inconclusive => return Err(format!("{name}: span check inconclusive")),
        };
        ensure(span_ok == dual.holds(), format!("{name}: span {span_ok}, dual {}", dual.holds()))?;
        if let Some(w) = &span.witness {
            ensure(w.degree == 2 && w.source.entries == vec![(0, 0)] && w.target.entries == vec![(3, 0), (2, 0)], "unexpected witness")?;
            lines.push(format!("{name}: witness {}", koszulkit::checks::describe_morphism(&e, w)));
        } else {
            lines.push(format!("{name}: generated"));
        }
    }
    ensure(lines.last().is_some_and(|l| l.contains("witness")), "no witness for the cubic relation")?;
    Ok(lines.join("; "))
}

fn criterion_7() -> Result<String, String> {
    let a = common::modules::a3::<Q>();
    let mut steps = 0;
    for seed in 0..20 {
        let m = common::modules::random_module(&a, seed);
        let dims = m.cohomology_dims();
        ensure(dims.keys().all(|&k| k == 0 || k == -1), format!("seed {seed}: cohomology {dims:?}"))?;
        for x in radical_tower(&m, &a, 2).map_err(|e| e.to_string())? {
            let c = *x.cohomology_dims().keys().next_back().unwrap();
            let r = rad(&x, &a, 2).map_err(|e| e.to_string())?;
            let (before, after) = (x.cohomology_dims(), r.cohomology_dims());
            ensure(after.keys().all(|&k| k <= c), format!("seed {seed}: rad has cohomology above {c}"))?;
            let expect = common::modules::radical_dim_of_cohomology(&x, &a, c);
            ensure(after.get(&c).copied().unwrap_or(0) == expect, format!("seed {seed}: H^{c}(rad) != rad H^{c}"))?;
            ensure(before.iter().filter(|(&k, _)| k < c).all(|(k, n)| after.get(k) == Some(n)), format!("seed {seed}: lower cohomology changed"))?;
            steps += 1;
        }
        let sum: usize = dims.keys().map(|&k| common::modules::heart_loewy_words(&m, &a, k)).sum();
        let big = big_loewy(&m, &a, 2).map_err(|e| e.to_string())?;
        ensure(big == sum, format!("seed {seed}: big_loewy {big} != {sum}"))?;
    }
    Ok(format!("20 modules, {steps} radical steps, sum formula exact"))
}

fn criterion_8() -> Result<String, String> {
    let cases = [
        ("k", "vertices 1\n"),
        ("k^2", "vertices 1 2\n"),
        ("k^3", "vertices 1 2 3\n"),
        ("kA2", "vertices 1 2\narrow a : 1 -> 2 deg 0\n"),
        ("kA3/rad^2", "vertices 1 2 3\narrow a : 1 -> 2 deg 0\narrow b : 2 -> 3 deg 0\nrelation b*a\n"),
        ("k[x]/x^2", "vertices 1\narrow x : 1 -> 1 deg 0\nrelation x*x\n"),
    ];
    for (name, text) in cases {
        let a = realize::<Q>(text, 4);
        let r = double_dual_compare(&a, 6, 4).map_err(|x| x.to_string())?;
        ensure(r.holds(), format!("{name}: {:?}", r.certificate))?;
        let w = r.windows.get("A^!^!").copied().unwrap_or(Window::ALL);
        ensure(a.graded_dims().keys().all(|&k| w.contains(k)), format!("{name}: window {w:?}"))?;
    }
    Ok(format!("{} algebras: dims and products of the double dual match", cases.len()))
}

#[test]
fn acceptance() {
    let criteria: Vec<(usize, &str, u64, Check)> = vec![
        (1, "cubic relation counterexample", 10, Box::new(criterion_1)),
        (2, "quadratic monomial Koszul pair", 10, Box::new(criterion_2)),
        (3, "graded Kronecker truncation", 30, Box::new(criterion_3)),
        (4, "Stasheff identities", 60, Box::new(criterion_4)),
        (5, "higher multiplication reconstruction", 10, Box::new(criterion_5)),
        (6, "span check against the dual", 120, Box::new(criterion_6)),
        (7, "Loewy suite", 30, Box::new(criterion_7)),
        (8, "double-dual stability", 60, Box::new(criterion_8)),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took > Duration::from_secs(limit) {
                Err(format!("took {took:.2?}, limit {limit}s"))
            } else {
                Ok(msg)
            }
        });
        match &result {
            Ok(msg) => println!("criterion {n} PASS {name} ({took:.2?} of {limit}s): {msg}"),
            Err(msg) => {
                println!("criterion {n} FAIL {name} ({took:.2?} of {limit}s): {msg}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
