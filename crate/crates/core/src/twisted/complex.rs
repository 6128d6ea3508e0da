use std::collections::BTreeMap;

use crate::ainfty::{bar_sign_exponent, AInfinityAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Matrix, Scalar};
use crate::presentations::{Realization, TwistedSpec};
use crate::report::{CheckReport, Verdict};

/// Matrix of algebra elements; rows index target entries, columns source entries.
pub type TwMatrix<F> = Vec<Vec<LinComb<F>>>;

pub fn zero_matrix<F: Scalar>(rows: usize, cols: usize) -> TwMatrix<F> {
    vec![vec![LinComb::zero(); cols]; rows]
}

fn matrix_is_zero<F: Scalar>(m: &TwMatrix<F>) -> bool {
    m.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

fn add_matrix<F: Scalar>(acc: &mut TwMatrix<F>, m: &TwMatrix<F>, c: &F) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (x, y) in ra.iter_mut().zip(rm) {
            x.add_scaled(y, c);
        }
    }
}

/// A one-sided twisted complex `(⊕ A_i[r_i], δ)` over an algebra with
/// idempotents, `A_i = e_{v_i}`.
///
/// `delta[i][j]` maps entry `j` to entry `i` and is nonzero only for `i < j`;
/// it has degree `r_i - r_j + 1` in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex<F> {
    pub entries: Vec<(usize, i64)>,
    pub delta: TwMatrix<F>,
}

impl<F: Scalar> TwistedComplex<F> {
    pub fn new(entries: Vec<(usize, i64)>, delta: TwMatrix<F>) -> Self {
        TwistedComplex { entries, delta }
    }

    /// `A_v[r]` with no twist.
    pub fn single(v: usize, r: i64) -> Self {
        TwistedComplex { entries: vec![(v, r)], delta: zero_matrix(1, 1) }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn shift_of(&self, i: usize) -> i64 {
        self.entries[i].1
    }

    pub fn vertex_of(&self, i: usize) -> usize {
        self.entries[i].0
    }

    /// `T[k]`. With the sign conventions used here the twist is unchanged.
    pub fn shift(&self, k: i64) -> Self {
        TwistedComplex { entries: self.entries.iter().map(|&(v, r)| (v, r + k)).collect(), delta: self.delta.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        let n = self.len();
        let mut delta = zero_matrix(entries.len(), entries.len());
        for i in 0..n {
            for j in 0..n {
                delta[i][j] = self.delta[i][j].clone();
            }
        }
        for i in 0..other.len() {
            for j in 0..other.len() {
                delta[n + i][n + j] = other.delta[i][j].clone();
            }
        }
        TwistedComplex { entries, delta }
    }

    /// Checks shape, strict upper-triangularity and entry degrees.
    pub fn check_shape(&self, a: &AInfinityAlgebra<F>) -> Result<()> {
        let n = self.len();
        if self.delta.len() != n || self.delta.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(format!("twist is not a {n}x{n} matrix")));
        }
        if let Some(&(v, _)) = self.entries.iter().find(|(v, _)| *v >= a.num_vertices()) {
            return Err(Error::Malformed(format!("entry at unknown vertex {v}")));
        }
        for i in 0..n {
            for j in 0..n {
                let x = &self.delta[i][j];
                if x.is_zero() {
                    continue;
                }
                if i >= j {
                    return Err(Error::Malformed(format!("twist entry ({}, {}) is below the diagonal", i + 1, j + 1)));
                }
                check_entry(a, x, self.vertex_of(j), self.vertex_of(i), self.shift_of(i) - self.shift_of(j) + 1)
                    .map_err(|e| Error::Malformed(format!("twist entry ({}, {}): {e}", i + 1, j + 1)))?;
            }
        }
        Ok(())
    }

    pub fn label(&self, a: &AInfinityAlgebra<F>) -> String {
        let parts: Vec<String> = self.entries.iter().map(|&(v, r)| format!("{}[{r}]", a.vertices[v])).collect();
        parts.join(" + ")
    }

    /// Builds a twisted complex over `A` viewed as an A-infinity algebra.
    pub fn from_spec(spec: &TwistedSpec, r: &Realization<F>) -> Result<Self> {
        let n = spec.entries.len();
        let mut delta = zero_matrix(n, n);
        for (i, j, poly) in &spec.twists {
            if *i >= n || *j >= n {
                return Err(Error::Malformed(format!("twist ({}, {}) outside {n} entries", i + 1, j + 1)));
            }
            delta[*i][*j] = r.element(poly)?;
        }
        Ok(TwistedComplex { entries: spec.entries.clone(), delta })
    }
}

fn check_entry<F: Scalar>(a: &AInfinityAlgebra<F>, x: &LinComb<F>, source: usize, target: usize, degree: i64) -> Result<()> {
    for (b, _) in x.iter() {
        let e = &a.basis[b];
        if e.source != source || e.target != target {
            return Err(Error::Malformed(format!("{} does not go from vertex {source} to vertex {target}", e.label)));
        }
        if e.degree != degree {
            return Err(Error::Malformed(format!("{} has degree {}, expected {degree}", e.label, e.degree)));
        }
    }
    Ok(())
}

/// A morphism of twisted complexes of degree `degree`; `matrix[i][j]` maps
/// entry `j` of the source to entry `i` of the target and has algebra degree
/// `degree + r'_i - r_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMorphism<F> {
    pub source: TwistedComplex<F>,
    pub target: TwistedComplex<F>,
    pub degree: i64,
    pub matrix: TwMatrix<F>,
}

impl<F: Scalar> TwMorphism<F> {
    pub fn zero(source: &TwistedComplex<F>, target: &TwistedComplex<F>, degree: i64) -> Self {
        TwMorphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            matrix: zero_matrix(target.len(), source.len()),
        }
    }

    /// The identity: `(-1)^{r_i} e_{v_i}` on the diagonal.
    pub fn identity(a: &AInfinityAlgebra<F>, t: &TwistedComplex<F>) -> Self {
        let mut f = Self::zero(t, t, 0);
        for (i, &(v, r)) in t.entries.iter().enumerate() {
            f.matrix[i][i] = LinComb::term(a.units[v], F::sign(r));
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        matrix_is_zero(&self.matrix)
    }

    pub fn check_degrees(&self, a: &AInfinityAlgebra<F>) -> Result<()> {
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let deg = self.degree + self.target.shift_of(i) - self.source.shift_of(j);
                check_entry(a, x, self.source.vertex_of(j), self.target.vertex_of(i), deg)
                    .map_err(|e| Error::Malformed(format!("morphism entry ({}, {}): {e}", i + 1, j + 1)))?;
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        add_matrix(&mut self.matrix, &other.matrix, c);
    }

    pub fn scaled(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.source, &self.target, self.degree);
        out.add_scaled(self, c);
        out
    }
}

/// `b` of the additive enlargement on a chain of matrices: `mats[k]` maps
/// `objects[k + 1]` to `objects[k]`. An entry is `(-1)^{r}` times `b_n` of
/// the algebra, `r` the shift of the final target entry.
fn b_chain<F: Scalar>(a: &AInfinityAlgebra<F>, objects: &[&[(usize, i64)]], mats: &[&TwMatrix<F>]) -> TwMatrix<F> {
    let n = mats.len();
    let rows = objects[0].len();
    let cols = objects[n].len();
    let mut out = zero_matrix(rows, cols);
    if n > a.arity_bound {
        return out;
    }
    for i0 in 0..rows {
        let mut states: Vec<(usize, Vec<usize>, F)> = vec![(i0, Vec::new(), F::one())];
        for (k, m) in mats.iter().enumerate() {
            let mut next = Vec::new();
            for (i, tuple, c) in &states {
                for j in 0..objects[k + 1].len() {
                    for (x, cx) in m[*i][j].iter() {
                        if let Some(&last) = tuple.last() {
                            if !a.composable(last, x) {
                                continue;
                            }
                        }
                        let mut t = tuple.clone();
                        t.push(x);
                        next.push((j, t, c.clone() * cx.clone()));
                    }
                }
            }
            states = next;
            if states.is_empty() {
                break;
            }
        }
        let sign = F::sign(objects[0][i0].1);
        for (j, tuple, c) in states {
            let v = a.b(&tuple);
            if !v.is_zero() {
                out[i0][j].add_scaled(&v, &(c * sign.clone()));
            }
        }
    }
    out
}

/// Largest arity touched by `b^tw_n` on these objects.
pub fn arity_needed<F: Scalar>(objects: &[&TwistedComplex<F>]) -> usize {
    let n = objects.len() - 1;
    n + objects.iter().map(|t| if matrix_is_zero(&t.delta) { 0 } else { t.len() - 1 }).sum::<usize>()
}

/// `b^tw_n(f_1, .., f_n)` with `f_k: T_k -> T_{k-1}`, inserting twists in
/// every gap. For `n = 0` this is the Maurer-Cartan expression of `T_0`.
fn b_tw<F: Scalar>(a: &AInfinityAlgebra<F>, objects: &[&TwistedComplex<F>], fs: &[&TwMatrix<F>]) -> TwMatrix<F> {
    let n = fs.len();
    let caps: Vec<usize> = objects.iter().map(|t| if matrix_is_zero(&t.delta) { 0 } else { t.len() - 1 }).collect();
    let mut out = zero_matrix(objects[0].len(), objects[n].len());
    let mut ks = vec![0usize; n + 1];
    loop {
        let total = n + ks.iter().sum::<usize>();
        if total >= 1 && total <= a.arity_bound {
            let mut objs: Vec<&[(usize, i64)]> = vec![&objects[0].entries];
            let mut mats: Vec<&TwMatrix<F>> = Vec::new();
            for g in 0..=n {
                for _ in 0..ks[g] {
                    mats.push(&objects[g].delta);
                    objs.push(&objects[g].entries);
                }
                if g < n {
                    mats.push(fs[g]);
                    objs.push(&objects[g + 1].entries);
                }
            }
            add_matrix(&mut out, &b_chain(a, &objs, &mats), &F::one());
        }
        // next insertion pattern
        let mut g = 0;
        loop {
            if g > n {
                return out;
            }
            if ks[g] < caps[g] {
                ks[g] += 1;
                break;
            }
            ks[g] = 0;
            g += 1;
        }
    }
}

/// Checks the Maurer-Cartan equation `sum_t ± m_t(δ, .., δ) = 0`.
pub fn mc_check<F: Scalar>(a: &AInfinityAlgebra<F>, t: &TwistedComplex<F>) -> Result<CheckReport> {
    t.check_shape(a)?;
    let mc = b_tw(a, &[t], &[]);
    let mut report = CheckReport::new("maurer_cartan", Verdict::Holds);
    'outer: for (i, row) in mc.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                report.verdict = Verdict::Fails;
                report.certificate = Some(format!("entry ({}, {}) is nonzero", i + 1, j + 1));
                break 'outer;
            }
        }
    }
    let needed = arity_needed(&[t]);
    if needed > a.arity_bound {
        report = report.with_note(format!(
            "uses m_n for n <= {}; exact only if higher products of the algebra vanish (arity {needed} possible)",
            a.arity_bound
        ));
    }
    Ok(report)
}

/// `m^tw_n(f_1, .., f_n)`, where `f_1` is applied last.
pub fn m_tw<F: Scalar>(a: &AInfinityAlgebra<F>, fs: &[&TwMorphism<F>]) -> Result<TwMorphism<F>> {
    if fs.is_empty() {
        return Err(Error::InvalidArgument("m_tw needs at least one morphism".into()));
    }
    for w in fs.windows(2) {
        if w[0].source != w[1].target {
            return Err(Error::MismatchedEndpoints("consecutive morphisms do not compose".into()));
        }
    }
    let mut objects: Vec<&TwistedComplex<F>> = vec![&fs[0].target];
    objects.extend(fs.iter().map(|f| &f.source));
    let mats: Vec<&TwMatrix<F>> = fs.iter().map(|f| &f.matrix).collect();
    let n = fs.len() as i64;
    let degree = fs.iter().map(|f| f.degree).sum::<i64>() + 2 - n;
    let sign = F::sign(bar_sign_exponent(fs.iter().map(|f| f.degree)));
    let b = b_tw(a, &objects, &mats);
    let mut out = TwMorphism::zero(objects[n as usize], objects[0], degree);
    add_matrix(&mut out.matrix, &b, &sign);
    Ok(out)
}

pub fn m1_tw<F: Scalar>(a: &AInfinityAlgebra<F>, f: &TwMorphism<F>) -> TwMorphism<F> {
    m_tw(a, &[f]).expect("a single morphism composes")
}

/// `g ∘ f = m^tw_2(g, f)`.
pub fn compose<F: Scalar>(a: &AInfinityAlgebra<F>, g: &TwMorphism<F>, f: &TwMorphism<F>) -> Result<TwMorphism<F>> {
    m_tw(a, &[g, f])
}

fn require_closed<F: Scalar>(a: &AInfinityAlgebra<F>, f: &TwMorphism<F>) -> Result<()> {
    if f.degree != 0 {
        return Err(Error::NotClosed(format!("morphism has degree {}, expected 0", f.degree)));
    }
    if !m1_tw(a, f).is_zero() {
        return Err(Error::NotClosed("m1 of the morphism is nonzero".into()));
    }
    Ok(())
}

fn block_twist<F: Scalar>(top: &TwistedComplex<F>, bottom: &TwistedComplex<F>, f: &TwMatrix<F>) -> TwistedComplex<F> {
    let mut t = top.direct_sum(bottom);
    let n = top.len();
    for i in 0..n {
        for j in 0..bottom.len() {
            t.delta[i][n + j] = f[i][j].clone();
        }
    }
    t
}

/// `cone(f) = (T' ⊕ T[1], [[δ', f], [0, δ]])` for a closed degree 0 map `f: T -> T'`.
pub fn cone<F: Scalar>(a: &AInfinityAlgebra<F>, f: &TwMorphism<F>) -> Result<TwistedComplex<F>> {
    require_closed(a, f)?;
    Ok(block_twist(&f.target, &f.source.shift(1), &f.matrix))
}

/// `cocone(f) = (T'[-1] ⊕ T, [[δ', f], [0, δ]])`.
pub fn cocone<F: Scalar>(a: &AInfinityAlgebra<F>, f: &TwMorphism<F>) -> Result<TwistedComplex<F>> {
    require_closed(a, f)?;
    Ok(block_twist(&f.target.shift(-1), &f.source, &f.matrix))
}

/// A basis vector of a hom space: `(target entry, source entry, algebra basis index)`.
pub type HomBasisElem = (usize, usize, usize);

/// Basis of `Hom^m(T, T')`.
pub fn hom_basis<F: Scalar>(a: &AInfinityAlgebra<F>, t: &TwistedComplex<F>, t2: &TwistedComplex<F>, m: i64) -> Vec<HomBasisElem> {
    let mut out = Vec::new();
    for (i, &(vi, ri)) in t2.entries.iter().enumerate() {
        for (j, &(vj, rj)) in t.entries.iter().enumerate() {
            for (x, b) in a.basis.iter().enumerate() {
                if b.source == vj && b.target == vi && b.degree == m + ri - rj {
                    out.push((i, j, x));
                }
            }
        }
    }
    out
}

/// The hom complex `(Hom(T, T'), m^tw_1)` over all degrees where it is nonzero.
#[derive(Clone)]
pub struct TwHom<F> {
    pub source: TwistedComplex<F>,
    pub target: TwistedComplex<F>,
    pub basis: BTreeMap<i64, Vec<HomBasisElem>>,
    /// `differential[m]`: `Hom^m -> Hom^{m+1}`.
    pub differential: BTreeMap<i64, Matrix<F>>,
}

impl<F: Scalar> TwHom<F> {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.basis.iter().filter(|(_, b)| !b.is_empty()).map(|(&m, b)| (m, b.len())).collect()
    }

    fn rank(&self, m: i64) -> usize {
        self.differential.get(&m).map_or(0, |d| d.rank())
    }

    pub fn cohomology_dim(&self, m: i64) -> usize {
        let dim = self.basis.get(&m).map_or(0, |b| b.len());
        dim - self.rank(m) - self.rank(m - 1)
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.basis.keys().map(|&m| (m, self.cohomology_dim(m))).filter(|&(_, d)| d > 0).collect()
    }

    pub fn to_morphism(&self, m: i64, v: &[F]) -> TwMorphism<F> {
        let mut f = TwMorphism::zero(&self.source, &self.target, m);
        for (&(i, j, x), c) in self.basis[&m].iter().zip(v) {
            f.matrix[i][j].add_term(x, c.clone());
        }
        f
    }

    pub fn to_vector(&self, f: &TwMorphism<F>) -> Vec<F> {
        let empty = Vec::new();
        let basis = self.basis.get(&f.degree).unwrap_or(&empty);
        basis.iter().map(|&(i, j, x)| f.matrix[i][j].get(x)).collect()
    }

    /// Solves `m^tw_1(h) = f` for a closed `f`; `None` if `f` is not exact.
    pub fn primitive(&self, f: &TwMorphism<F>) -> Result<Option<TwMorphism<F>>> {
        let m = f.degree;
        let Some(d) = self.differential.get(&(m - 1)) else {
            return Ok(if f.is_zero() { Some(TwMorphism::zero(&self.source, &self.target, m - 1)) } else { None });
        };
        Ok(d.solve(&self.to_vector(f))?.map(|h| self.to_morphism(m - 1, &h)))
    }
}

/// Builds `Hom(T, T')` with its differential and checks that it squares to zero.
pub fn hom_complex<F: Scalar>(a: &AInfinityAlgebra<F>, t: &TwistedComplex<F>, t2: &TwistedComplex<F>) -> Result<TwHom<F>> {
    let mut degrees: Vec<i64> = Vec::new();
    for &(vi, ri) in &t2.entries {
        for &(vj, rj) in &t.entries {
            for b in &a.basis {
                if b.source == vj && b.target == vi {
                    degrees.push(b.degree - ri + rj);
                }
            }
        }
    }
    degrees.sort_unstable();
    degrees.dedup();
    let basis: BTreeMap<i64, Vec<HomBasisElem>> = degrees.iter().map(|&m| (m, hom_basis(a, t, t2, m))).collect();
    let mut hom = TwHom { source: t.clone(), target: t2.clone(), basis, differential: BTreeMap::new() };
    for &m in &degrees {
        let Some(target_basis) = hom.basis.get(&(m + 1)) else { continue };
        let index: BTreeMap<HomBasisElem, usize> = target_basis.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let n = hom.basis[&m].len();
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = vec![F::zero(); n];
            v[k] = F::one();
            let df = m1_tw(a, &hom.to_morphism(m, &v));
            let mut col = LinComb::zero();
            for (i, row) in df.matrix.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    for (y, c) in x.iter() {
                        let pos = index.get(&(i, j, y)).ok_or_else(|| {
                            Error::InvalidAlgebra("m1 of a morphism left the hom space".into())
                        })?;
                        col.add_term(*pos, c.clone());
                    }
                }
            }
            cols.push(col);
        }
        hom.differential.insert(m, Matrix::from_sparse_columns(target_basis.len(), &cols));
    }
    for &m in &degrees {
        if let (Some(d0), Some(d1)) = (hom.differential.get(&m), hom.differential.get(&(m + 1))) {
            if !d1.mul(d0)?.is_zero() {
                return Err(Error::InvalidAlgebra(format!("m1 on Hom^{m} does not square to zero")));
            }
        }
    }
    Ok(hom)
}

/// Which halves of the canonical co-t-structure the entries place `T` in:
/// `(all shifts <= 0, all shifts >= 0)`.
pub fn co_t_parts<F>(t: &TwistedComplex<F>) -> (bool, bool) {
    (t.entries.iter().all(|e| e.1 <= 0), t.entries.iter().all(|e| e.1 >= 0))
}
