use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ainfty::{cohomology_algebra, AInfinityAlgebra};
use crate::dgmod::{semifree_resolution, yoneda, DgModule, ExtGroups};
use crate::error::{Error, Result};
use crate::exactlin::{coordinates, FieldTag, Matrix, Scalar};
use crate::presentations::FinDimDgAlgebra;
use crate::report::{CheckReport, DimTable, Verdict, Window};
use crate::twisted::{cocone, hom_complex, m1_tw, mc_check, TwHom, TwMorphism, TwistedComplex};

/// `H^0 End(L)` by structure constants: `products[i][j]` are the coordinates
/// of `b_i ∘ b_j`.
#[derive(Clone, Debug)]
pub struct EndAlgebra<F> {
    pub dim: usize,
    pub products: Vec<Vec<Vec<F>>>,
}

impl<F: Scalar> EndAlgebra<F> {
    fn left_mult(&self, x: &[F]) -> Matrix<F> {
        let mut m: Matrix<F> = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (i, c) in x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (r, p) in self.products[i][j].iter().enumerate() {
                    let v = m.get(r, j).clone() + c.clone() * p.clone();
                    m.set(r, j, v);
                }
            }
        }
        m
    }

    /// Whether every nonzero element is invertible. Over a prime field all
    /// elements are tried; over Q the minimal polynomials of basis elements
    /// must be irreducible (decided up to degree 3, else `None`).
    pub fn is_division(&self) -> Option<bool> {
        match self.dim {
            0 => return Some(false),
            1 => return Some(!self.products[0][0][0].is_zero()),
            _ => {}
        }
        if let Some(elems) = F::elements() {
            let mut digits = vec![0usize; self.dim];
            loop {
                let mut i = 0;
                while i < self.dim {
                    digits[i] += 1;
                    if digits[i] < elems.len() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == self.dim {
                    return Some(true);
                }
                let x: Vec<F> = digits.iter().map(|&k| elems[k].clone()).collect();
                if self.left_mult(&x).rank() < self.dim {
                    return Some(false);
                }
            }
        }
        for b in 0..self.dim {
            let mut x = vec![F::zero(); self.dim];
            x[b] = F::one();
            let m = self.left_mult(&x);
            if m.rank() < self.dim {
                return Some(false);
            }
            match minimal_polynomial_irreducible(&m) {
                Some(true) => {}
                other => return other,
            }
        }
        Some(true)
    }
}

/// Minimal polynomial of a matrix, monic, lowest degree first.
fn minimal_polynomial<F: Scalar>(m: &Matrix<F>) -> Vec<F> {
    let n = m.rows();
    let flat = |a: &Matrix<F>| -> Vec<F> { (0..n).flat_map(|r| a.row(r).to_vec()).collect() };
    let mut powers = vec![flat(&Matrix::identity(n))];
    let mut cur = Matrix::identity(n);
    loop {
        cur = m.mul(&cur).expect("square");
        let v = flat(&cur);
        if let Some(c) = coordinates(n * n, &powers, &v) {
            let mut poly: Vec<F> = c.into_iter().map(|x| -x).collect();
            poly.push(F::one());
            return poly;
        }
        powers.push(v);
    }
}

fn minimal_polynomial_irreducible<F: Scalar>(m: &Matrix<F>) -> Option<bool> {
    let p = minimal_polynomial(m);
    let deg = p.len() - 1;
    if deg <= 1 {
        return Some(true);
    }
    if deg > 3 || F::field() != FieldTag::Rationals {
        return None;
    }
    // degree 2 or 3: irreducible iff no rational root
    let coeffs: Vec<BigRational> = p.iter().map(|c| c.to_string().parse::<BigRational>().expect("rational")).collect();
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    if ints[0].is_zero() {
        return Some(false);
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs();
        let mut out = Vec::new();
        let mut k = BigInt::one();
        while &k * &k <= n {
            if (&n % &k).is_zero() {
                out.push(k.clone());
                out.push(&n / &k);
            }
            k += 1;
        }
        out
    };
    for pn in divisors(&ints[0]) {
        for qd in divisors(&ints[deg]) {
            for s in [1i64, -1] {
                let r = BigRational::new(&pn * s, qd.clone());
                let mut acc = BigRational::zero();
                for c in ints.iter().rev() {
                    acc = acc * &r + BigRational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

#[derive(Clone, Debug)]
pub enum Member<F> {
    Module(DgModule<F>),
    Twisted(TwistedComplex<F>),
}

/// A family of objects with cached pairwise Hom data.
#[derive(Clone, Debug)]
pub struct SimpleCollection<F> {
    pub labels: Vec<String>,
    pub members: Vec<Member<F>>,
    /// `homs[(i, j)]`: dims of `H^k Hom(L_i, L_j)` for `k` in `window`.
    pub homs: BTreeMap<(usize, usize), DimTable>,
    pub window: Window,
    /// Cohomological degree range of each member.
    pub ranges: Vec<Option<(i64, i64)>>,
    pub ends: Vec<EndAlgebra<F>>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::InvalidArgument(format!("duplicate member label `{l}`")));
        }
    }
    Ok(())
}

impl<F: Scalar> SimpleCollection<F> {
    /// Dg modules over `a`; Ext is computed for degrees up to `max_k`.
    pub fn from_modules(a: &FinDimDgAlgebra<F>, members: Vec<(String, DgModule<F>)>, max_k: i64) -> Result<Self> {
        let labels: Vec<String> = members.iter().map(|m| m.0.clone()).collect();
        check_labels(&labels)?;
        let mods: Vec<DgModule<F>> = members.into_iter().map(|m| m.1).collect();
        let lowest = mods.iter().filter_map(|m| m.min_degree()).min().unwrap_or(0) - max_k - 1;
        let res = mods.iter().map(|m| semifree_resolution(m, a, lowest)).collect::<Result<Vec<_>>>()?;
        let mut homs = BTreeMap::new();
        let mut ends = Vec::new();
        for i in 0..mods.len() {
            for j in 0..mods.len() {
                let ext = ExtGroups::new(&res[i], &mods[j], max_k)?;
                homs.insert((i, j), ext.dims());
                if i == j {
                    let n0 = ext.dim(0);
                    let mut products = vec![vec![Vec::new(); n0]; n0];
                    for p in 0..n0 {
                        for q in 0..n0 {
                            let c = yoneda(&ext.rep_map(0, p), &ext.rep_map(0, q), 0, &res[i], &res[i], &mods[i], &mods[i])?;
                            products[p][q] = ext
                                .class_of(0, &c)
                                .ok_or_else(|| Error::InvalidAlgebra("composite is not a cocycle".into()))?;
                        }
                    }
                    ends.push(EndAlgebra { dim: n0, products });
                }
            }
        }
        let ranges = mods.iter().map(cohomology_range).collect();
        Ok(SimpleCollection {
            labels,
            members: mods.into_iter().map(Member::Module).collect(),
            homs,
            window: Window::at_most(max_k),
            ranges,
            ends,
        })
    }

    /// Twisted complexes over `e`; Hom complexes are finite, so every degree is covered.
    pub fn from_twisted(e: &AInfinityAlgebra<F>, members: Vec<(String, TwistedComplex<F>)>) -> Result<Self> {
        let labels: Vec<String> = members.iter().map(|m| m.0.clone()).collect();
        check_labels(&labels)?;
        let objs: Vec<TwistedComplex<F>> = members.into_iter().map(|m| m.1).collect();
        for t in &objs {
            if !mc_check(e, t)?.holds() {
                return Err(Error::Malformed(format!("{} fails the Maurer-Cartan equation", t.label(e))));
            }
        }
        let mut homs = BTreeMap::new();
        let mut ends = Vec::new();
        for i in 0..objs.len() {
            for j in 0..objs.len() {
                let h = hom_complex(e, &objs[i], &objs[j])?;
                homs.insert((i, j), h.cohomology_dims());
                if i == j {
                    ends.push(end_algebra(e, &h)?);
                }
            }
        }
        let ranges = objs
            .iter()
            .map(|t| {
                let lo = t.entries.iter().map(|e| -e.1).min()?;
                let hi = t.entries.iter().map(|e| -e.1).max()?;
                Some((lo, hi))
            })
            .collect();
        Ok(SimpleCollection {
            labels,
            members: objs.into_iter().map(Member::Twisted).collect(),
            homs,
            window: Window::ALL,
            ranges,
            ends,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn hom_dim(&self, i: usize, j: usize, k: i64) -> usize {
        self.homs[&(i, j)].get(&k).copied().unwrap_or(0)
    }
}

fn cohomology_range<F: Scalar>(m: &DgModule<F>) -> Option<(i64, i64)> {
    let dims = m.cohomology_dims();
    Some((*dims.keys().next()?, *dims.keys().next_back()?))
}

fn cocycle_reps<F: Scalar>(h: &TwHom<F>, k: i64) -> (Vec<Vec<F>>, Vec<Vec<F>>) {
    let Some(basis) = h.basis.get(&k) else { return (Vec::new(), Vec::new()) };
    let dim = basis.len();
    let z = match h.differential.get(&k) {
        Some(d) => d.kernel_basis(),
        None => (0..dim).map(|i| (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect(),
    };
    let b = h.differential.get(&(k - 1)).map(|d| d.image_basis()).unwrap_or_default();
    (crate::exactlin::extend_basis(dim, &b, &z), b)
}

fn end_algebra<F: Scalar>(e: &AInfinityAlgebra<F>, h: &TwHom<F>) -> Result<EndAlgebra<F>> {
    let (reps, b) = cocycle_reps(h, 0);
    let n = reps.len();
    let dim = h.basis.get(&0).map_or(0, |x| x.len());
    let mut all = reps.clone();
    all.extend(b);
    let mut products = vec![vec![Vec::new(); n]; n];
    for p in 0..n {
        for q in 0..n {
            let c = crate::twisted::compose(e, &h.to_morphism(0, &reps[p]), &h.to_morphism(0, &reps[q]))?;
            let coords = coordinates(dim, &all, &h.to_vector(&c))
                .ok_or_else(|| Error::InvalidAlgebra("composite of cocycles is not a cocycle".into()))?;
            products[p][q] = coords[..n].to_vec();
        }
    }
    Ok(EndAlgebra { dim: n, products })
}

/// n-semibrick conditions for a collection inside `(-d, 0]`: the shifts
/// `L[0..n-1]` stay in the window, negative Homs vanish, `H^0 End` is a
/// division algebra and `H^0 Hom` between distinct members vanishes.
pub fn semibrick_check<F: Scalar>(c: &SimpleCollection<F>, n: usize, d: usize) -> Result<CheckReport> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be positive".into()));
    }
    let (n, d) = (n as i64, d as i64);
    let mut window = CheckReport::new("shifts_in_window", Verdict::Holds);
    for (i, r) in c.ranges.iter().enumerate() {
        if let Some((lo, hi)) = r {
            if *hi > 0 || lo - (n - 1) <= -d {
                window.verdict = Verdict::Fails;
                window.certificate =
                    Some(format!("{}[0..{}] has cohomology in [{}, {hi}], outside ({}, 0]", c.labels[i], n - 1, lo - (n - 1), -d));
                break;
            }
        }
    }
    let mut negative = CheckReport::new("negative_homs_vanish", Verdict::Holds);
    'neg: for (&(i, j), dims) in &c.homs {
        for (&k, &dim) in dims {
            if k < 0 && dim > 0 {
                negative.verdict = Verdict::Fails;
                negative.certificate = Some(format!("H^{k} Hom({}, {}) has dimension {dim}", c.labels[i], c.labels[j]));
                break 'neg;
            }
        }
    }
    let mut division = CheckReport::new("division_endomorphisms", Verdict::Holds);
    for i in 0..c.len() {
        for j in 0..c.len() {
            if i != j && c.hom_dim(i, j, 0) > 0 {
                division.verdict = Verdict::Fails;
                division.certificate = Some(format!("H^0 Hom({}, {}) is nonzero", c.labels[i], c.labels[j]));
            }
        }
        if division.verdict == Verdict::Fails {
            break;
        }
        match c.ends[i].is_division() {
            Some(true) => {}
            Some(false) => {
                division.verdict = Verdict::Fails;
                division.certificate = Some(format!("H^0 End({}) is not a division algebra", c.labels[i]));
                break;
            }
            None => {
                division.verdict = Verdict::Inconclusive;
                division = division.with_note(format!("could not decide whether H^0 End({}) is a division algebra", c.labels[i]));
            }
        }
    }
    Ok(CheckReport::all("semibrick", vec![window, negative, division]).with_window("hom", c.window))
}

/// Hypotheses of the recognition theorem for candidates `P_i` over a
/// simple-minded collection `L_i` of twisted complexes: a closed map
/// `P_i -> L_i` whose cocone lies in the `(-d, 0]` window after cancelling
/// the matched entry, and `H^k Hom(P, L) = 0` for `k >= 1`. Reports
/// `H* End(⊕ P_i)`, the reconstructed algebra.
pub fn recognition_check<F: Scalar>(
    e: &AInfinityAlgebra<F>,
    smc: &SimpleCollection<F>,
    candidates: &[TwistedComplex<F>],
    d: usize,
) -> Result<CheckReport> {
    if candidates.len() != smc.len() {
        return Err(Error::InvalidArgument(format!("{} candidates for {} simples", candidates.len(), smc.len())));
    }
    let simples: Vec<&TwistedComplex<F>> = smc
        .members
        .iter()
        .map(|m| match m {
            Member::Twisted(t) => Ok(t),
            Member::Module(_) => Err(Error::InvalidArgument("recognition needs a collection of twisted complexes".into())),
        })
        .collect::<Result<_>>()?;
    for p in candidates {
        if !mc_check(e, p)?.holds() {
            return Err(Error::Malformed(format!("candidate {} fails the Maurer-Cartan equation", p.label(e))));
        }
    }
    let d = d as i64;
    let mut triangles = CheckReport::new("triangles_in_window", Verdict::Holds);
    for (i, (p, l)) in candidates.iter().zip(&simples).enumerate() {
        match top_map(e, p, l)? {
            Some((f, k)) => {
                let c = cocone(e, &f)?;
                debug_assert!(mc_check(e, &c)?.holds());
                // cancelling L[-1] against the matched entry leaves P without entry k
                let rest: Vec<i64> = p.entries.iter().enumerate().filter(|&(q, _)| q != k).map(|(_, e)| e.1).collect();
                if let Some(r) = rest.iter().find(|&&r| r < 0 || r > d - 1) {
                    triangles.verdict = Verdict::Fails;
                    triangles.certificate =
                        Some(format!("cocone of P{} -> {} has an entry shifted by {r}", i + 1, smc.labels[i]));
                    break;
                }
            }
            None => {
                triangles.verdict = Verdict::Fails;
                triangles.certificate = Some(format!("no closed projection of P{} onto {}", i + 1, smc.labels[i]));
                break;
            }
        }
    }
    let p_all = candidates.iter().skip(1).fold(candidates[0].clone(), |acc, t| acc.direct_sum(t));
    let mut vanishing = CheckReport::new("positive_homs_to_simples_vanish", Verdict::Holds);
    for (j, l) in simples.iter().enumerate() {
        let h = hom_complex(e, &p_all, l)?;
        if let Some((&k, _)) = h.cohomology_dims().iter().find(|(&k, _)| k >= 1) {
            vanishing.verdict = Verdict::Fails;
            vanishing.certificate = Some(format!("H^{k} Hom(P, {}) is nonzero", smc.labels[j]));
            break;
        }
    }
    let end = hom_complex(e, &p_all, &p_all)?;
    Ok(CheckReport::all("recognition", vec![triangles, vanishing]).with_dims("H*(End P)", end.cohomology_dims()))
}

/// A closed degree-0 map from `p` onto the simple `l` (a single entry),
/// projecting an entry at the same vertex and shift that receives no twist.
fn top_map<F: Scalar>(
    e: &AInfinityAlgebra<F>,
    p: &TwistedComplex<F>,
    l: &TwistedComplex<F>,
) -> Result<Option<(TwMorphism<F>, usize)>> {
    if l.len() != 1 {
        return Err(Error::InvalidArgument("simples must be single entries".into()));
    }
    let (v, r) = l.entries[0];
    for k in 0..p.len() {
        if p.entries[k] != (v, r) || p.delta[k].iter().any(|x| !x.is_zero()) {
            continue;
        }
        let mut f = TwMorphism::zero(p, l, 0);
        f.matrix[0][k] = crate::exactlin::LinComb::term(e.units[v], F::sign(r));
        if m1_tw(e, &f).is_zero() {
            return Ok(Some((f, k)));
        }
    }
    Ok(None)
}

/// Outcome of the silting criterion for `(d-1)`-compliciality.
#[derive(Clone, Debug)]
pub struct ComplicialVerdict {
    pub holds: bool,
    /// Also `H^{-d+1}(A) != 0`, so `d - 1` is minimal.
    pub strict: bool,
    pub report: CheckReport,
}

/// `A` is `(d-1)`-complicial iff `H^*(A)` lies in `(-d, 0]`.
pub fn complicial_check_silting<F: Scalar>(a: &FinDimDgAlgebra<F>, d: usize) -> Result<ComplicialVerdict> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let d = d as i64;
    let dims = cohomology_algebra(a).graded_dims();
    if let Some((&k, _)) = dims.iter().find(|(&k, &n)| k > 0 && n > 0) {
        return Err(Error::NotConnective(format!("H^{k}(A) is nonzero")));
    }
    let outside: Vec<i64> = dims.iter().filter(|(&k, &n)| n > 0 && k <= -d).map(|(&k, _)| k).collect();
    let holds = outside.is_empty();
    let strict = holds && dims.get(&(1 - d)).is_some_and(|&n| n > 0);
    let mut report = CheckReport::new("complicial", Verdict::from_bool(holds))
        .with_dims("H*(A)", dims)
        .with_note(format!("strict: {strict}"));
    if !holds {
        report = report.with_certificate(format!("H*(A) is nonzero in degrees {outside:?} outside ({}, 0]", -d));
    }
    Ok(ComplicialVerdict { holds, strict, report })
}
