#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random dg quiver algebra over F5 in the text grammar.
///
/// Arrows are split into "cycle" arrows with zero differential and
/// "homotopy" arrows whose differential is a combination of parallel paths of
/// cycle arrows. All paths of length `len` are set to zero, which keeps the
/// algebra finite, makes the ideal closed under `d`, and gives `d^2 = 0`.
pub fn random_f5_presentation(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(2..=3usize);
    let len = 3usize;
    let mut cycle: Vec<(usize, usize, i64)> = Vec::new();
    for _ in 0..rng.gen_range(2..=3) {
        cycle.push((rng.gen_range(0..nv), rng.gen_range(0..nv), rng.gen_range(-1..=1)));
    }
    // paths of cycle arrows of length 1..len, as arrow index lists (last applied first)
    let mut paths: Vec<Vec<usize>> = (0..cycle.len()).map(|a| vec![a]).collect();
    let mut layer = paths.clone();
    for _ in 1..len - 1 {
        let mut next = Vec::new();
        for p in &layer {
            for (a, arrow) in cycle.iter().enumerate() {
                if arrow.0 == cycle[p[0]].1 {
                    let mut q = vec![a];
                    q.extend_from_slice(p);
                    next.push(q);
                }
            }
        }
        paths.extend(next.iter().cloned());
        layer = next;
    }
    let src = |p: &[usize]| cycle[*p.last().unwrap()].0;
    let tgt = |p: &[usize]| cycle[p[0]].1;
    let deg = |p: &[usize]| p.iter().map(|&a| cycle[a].2).sum::<i64>();

    let mut text = String::from("field F5\nvertices");
    for v in 0..nv {
        text += &format!(" v{v}");
    }
    text.push('\n');
    let mut arrows: Vec<(usize, usize, i64)> = cycle.clone();
    let mut names: Vec<String> = (0..cycle.len()).map(|a| format!("c{a}")).collect();
    let mut diffs = Vec::new();
    for h in 0..rng.gen_range(1..=2) {
        let p = paths[rng.gen_range(0..paths.len())].clone();
        let (s, t, dg) = (src(&p), tgt(&p), deg(&p));
        let mut terms = Vec::new();
        for q in paths.iter().filter(|q| src(q) == s && tgt(q) == t && deg(q) == dg) {
            let c = if *q == p { rng.gen_range(1..5) } else { rng.gen_range(0..5) };
            if c != 0 {
                let word: Vec<&str> = q.iter().map(|&a| names[a].as_str()).collect();
                terms.push(format!("{c}*{}", word.join("*")));
            }
        }
        names.push(format!("h{h}"));
        arrows.push((s, t, dg - 1));
        diffs.push(format!("differential h{h} = {}", terms.join(" + ")));
    }
    for (a, (s, t, d)) in arrows.iter().enumerate() {
        text += &format!("arrow {} : v{s} -> v{t} deg {d}\n", names[a]);
    }
    // all composable words of length `len` in all arrows
    let mut words: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &words {
            for (a, arrow) in arrows.iter().enumerate() {
                if arrow.0 == arrows[w[0]].1 {
                    let mut q = vec![a];
                    q.extend_from_slice(w);
                    next.push(q);
                }
            }
        }
        words = next;
    }
    for w in words {
        let word: Vec<&str> = w.iter().map(|&a| names[a].as_str()).collect();
        text += &format!("relation {}\n", word.join("*"));
    }
    for d in diffs {
        text += &d;
        text.push('\n');
    }
    text
}

pub mod modules {
    use koszulkit::dgmod::{cone, DgModule, ModuleMap};
    use koszulkit::exactlin::{extend_basis, in_span};
    use koszulkit::presentations::{parse_presentation, realize_algebra, DegreeWindow, FinDimDgAlgebra};
    use koszulkit::{LinComb, Matrix, Scalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn a3<F: Scalar>() -> FinDimDgAlgebra<F> {
        let mut text = String::from("vertices 1 2 3\narrow a : 1 -> 2 deg 0\narrow b : 2 -> 3 deg 0\n");
        if let Some(elems) = F::elements() {
            text = format!("field F{}\n{text}", elems.len());
        }
        realize_algebra(&parse_presentation(&text).unwrap(), DegreeWindow::UNBOUNDED, 4).unwrap()
    }

    /// `cone(⊕ P_{v_i} -> Y)` for a random sum of projectives `Y`, plus
    /// sometimes an extra shifted summand; cohomology lies in `(-2, 0]`.
    pub fn random_module<F: Scalar>(a: &FinDimDgAlgebra<F>, seed: u64) -> DgModule<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nv = a.num_vertices();
        let proj = |v: usize| DgModule::projective(a, v);
        let ys: Vec<DgModule<F>> = (0..rng.gen_range(1..=3)).map(|_| proj(rng.gen_range(0..nv))).collect();
        let y = DgModule::direct_sum(&ys.iter().collect::<Vec<_>>());
        let xs: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..nv)).collect();
        let mut images = Vec::new();
        let mut parts = Vec::new();
        for &v in &xs {
            let p = proj(v);
            // image of the generator e_v: a random element of Y^0 e_v
            let mut g = LinComb::zero();
            for k in y.at(0, v) {
                g.add_term(k, F::from_i64(rng.gen_range(-2..=2)));
            }
            for k in 0..p.dim() {
                let path = (0..a.dim()).filter(|&z| a.basis[z].target == v).nth(k).unwrap();
                images.push(y.act(&g, &LinComb::basis(path)));
            }
            parts.push(p);
        }
        let x = DgModule::direct_sum(&parts.iter().collect::<Vec<_>>());
        let f = ModuleMap { degree: 0, images };
        f.validate(a, &x, &y).unwrap();
        let mut m = cone(&f, &x, &y).unwrap();
        if rng.gen_bool(0.3) {
            let extra = DgModule::simple(a, rng.gen_range(0..nv)).shift(1);
            m = DgModule::direct_sum(&[&m, &extra]);
        }
        m.validate(a).unwrap();
        m
    }

    fn column_space<F: Scalar>(m: &DgModule<F>, n: i64) -> (Vec<Vec<F>>, Vec<Vec<F>>) {
        let dim = m.dim();
        let embed = |idx: &[usize], v: &[F]| {
            let mut out = vec![F::zero(); dim];
            for (c, &x) in v.iter().zip(idx) {
                out[x] = c.clone();
            }
            out
        };
        let here = m.in_degree(n);
        let below = m.in_degree(n - 1);
        let z: Vec<Vec<F>> = m.d_matrix(n).kernel_basis().iter().map(|v| embed(&here, v)).collect();
        let b: Vec<Vec<F>> = below.iter().map(|&x| m.d_basis(x).to_dense(dim)).collect();
        let b = if b.is_empty() { b } else { Matrix::from_columns(dim, &b).image_basis() };
        (z, b)
    }

    fn radical_generators<F: Scalar>(a: &FinDimDgAlgebra<F>) -> Vec<usize> {
        (0..a.dim()).filter(|&x| a.degree(x) == 0 && !a.is_idempotent(x)).collect()
    }

    /// Loewy length of `H^n(M)` by brute force over words in the radical generators.
    pub fn heart_loewy_words<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, n: i64) -> usize {
        let (z, b) = column_space(m, n);
        let dim = m.dim();
        let gens = radical_generators(a);
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for len in 0.. {
            let survives = z.iter().any(|x| {
                words.iter().any(|w| {
                    let mut v = LinComb::from_dense(x);
                    for &g in w {
                        v = m.act(&v, &LinComb::basis(g));
                    }
                    !in_span(dim, &b, &v.to_dense(dim))
                })
            });
            if !survives {
                return len;
            }
            words = words.iter().flat_map(|w| gens.iter().map(move |&g| [w.clone(), vec![g]].concat())).collect();
        }
        unreachable!()
    }

    /// `dim rad(H^n M)` from the matrices of the radical generators on `H^n`.
    pub fn radical_dim_of_cohomology<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, n: i64) -> usize {
        let (z, b) = column_space(m, n);
        let dim = m.dim();
        let reps = extend_basis(dim, &b, &z);
        let mut all = reps.clone();
        all.extend(b.iter().cloned());
        let mut cols = Vec::new();
        for g in radical_generators(a) {
            for r in &reps {
                let v = m.act(&LinComb::from_dense(r), &LinComb::basis(g)).to_dense(dim);
                let c = koszulkit::exactlin::coordinates(dim, &all, &v).expect("cocycle");
                cols.push(c[..reps.len()].to_vec());
            }
        }
        if cols.is_empty() || reps.is_empty() {
            return 0;
        }
        Matrix::from_columns(reps.len(), &cols).rank()
    }
}
