use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Matrix, Scalar};
use crate::presentations::{rational_into, FinDimDgAlgebra, ModuleSpec, Realization};

/// A basis vector `x` of a right module with `x = x e_vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModElem {
    pub label: String,
    pub degree: i64,
    pub vertex: usize,
}

/// A finite-dimensional right dg module over a [`FinDimDgAlgebra`].
///
/// The action table holds `x · a` for basis vectors, including the
/// idempotents; missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule<F> {
    pub basis: Vec<ModElem>,
    action: HashMap<(usize, usize), LinComb<F>>,
    diff: Vec<LinComb<F>>,
}

impl<F: Scalar> DgModule<F> {
    pub fn new(basis: Vec<ModElem>, action: HashMap<(usize, usize), LinComb<F>>, diff: Vec<LinComb<F>>) -> Self {
        assert_eq!(basis.len(), diff.len());
        let action = action.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        DgModule { basis, action, diff }
    }

    pub fn zero() -> Self {
        DgModule { basis: Vec::new(), action: HashMap::new(), diff: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, x: usize) -> i64 {
        self.basis[x].degree
    }

    pub fn act_basis(&self, x: usize, a: usize) -> Option<&LinComb<F>> {
        self.action.get(&(x, a))
    }

    pub fn act(&self, x: &LinComb<F>, a: &LinComb<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (i, c) in x.iter() {
            for (j, e) in a.iter() {
                if let Some(v) = self.action.get(&(i, j)) {
                    out.add_scaled(v, &(c.clone() * e.clone()));
                }
            }
        }
        out
    }

    pub fn d_basis(&self, x: usize) -> &LinComb<F> {
        &self.diff[x]
    }

    pub fn d(&self, x: &LinComb<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (i, c) in x.iter() {
            out.add_scaled(&self.diff[i], c);
        }
        out
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.iter().map(|b| b.degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.basis.iter().map(|b| b.degree).max()
    }

    /// Basis indices of a given degree.
    pub fn in_degree(&self, n: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&x| self.basis[x].degree == n).collect()
    }

    /// Matrix of `d: M^n -> M^{n+1}` in the bases `in_degree(n)`, `in_degree(n+1)`.
    pub fn d_matrix(&self, n: i64) -> Matrix<F> {
        let src = self.in_degree(n);
        let tgt = self.in_degree(n + 1);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (k, &x) in src.iter().enumerate() {
            for (z, c) in self.diff[x].iter() {
                m.set(pos[&z], k, c.clone());
            }
        }
        m
    }

    /// Degree -> dim H^n, zero entries omitted.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let Some((lo, hi)) = self.min_degree().zip(self.max_degree()) else { return out };
        for n in lo..=hi {
            let dim = self.in_degree(n).len();
            let rank_out = self.d_matrix(n).rank();
            let rank_in = self.d_matrix(n - 1).rank();
            let h = dim - rank_out - rank_in;
            if h > 0 {
                out.insert(n, h);
            }
        }
        out
    }

    pub fn total_cohomology(&self) -> usize {
        self.cohomology_dims().values().sum()
    }

    /// Checks `d^2 = 0`, the Leibniz rule, associativity and unitality of the action.
    pub fn validate(&self, a: &FinDimDgAlgebra<F>) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModule(m));
        let n = self.dim();
        for x in 0..n {
            if self.basis[x].vertex >= a.num_vertices() {
                return bad(format!("{} sits at an unknown vertex", self.basis[x].label));
            }
            for z in self.diff[x].indices() {
                if self.basis[z].degree != self.basis[x].degree + 1 || self.basis[z].vertex != self.basis[x].vertex {
                    return bad(format!("d({}) is not homogeneous", self.basis[x].label));
                }
            }
            if !self.d(&self.diff[x]).is_zero() {
                return bad(format!("d^2 does not vanish on {}", self.basis[x].label));
            }
        }
        for (&(x, y), v) in &self.action {
            let (bx, by) = (&self.basis[x], &a.basis[y]);
            if by.target != bx.vertex {
                return bad(format!("{} · {} should vanish", bx.label, by.label));
            }
            for z in v.indices() {
                let bz = &self.basis[z];
                if bz.degree != bx.degree + by.degree || bz.vertex != by.source {
                    return bad(format!("{} · {} is not homogeneous", bx.label, by.label));
                }
            }
        }
        for x in 0..n {
            let bx = LinComb::basis(x);
            if self.act(&bx, &a.unit()) != bx {
                return bad(format!("unit does not act as identity on {}", self.basis[x].label));
            }
            for y in 0..a.dim() {
                if a.basis[y].target != self.basis[x].vertex {
                    continue;
                }
                let by = LinComb::basis(y);
                let xy = self.act(&bx, &by);
                // Leibniz
                let mut rhs = self.act(&self.diff[x], &by);
                rhs.add_scaled(&self.act(&bx, a.d_basis(y)), &F::sign(self.degree(x)));
                if self.d(&xy) != rhs {
                    return bad(format!("Leibniz rule fails on ({}, {})", self.basis[x].label, a.basis[y].label));
                }
                for z in 0..a.dim() {
                    if a.basis[z].target != a.basis[y].source {
                        continue;
                    }
                    let bz = LinComb::basis(z);
                    if self.act(&xy, &bz) != self.act(&bx, &a.mul_basis(y, z)) {
                        return bad(format!(
                            "action is not associative on ({}, {}, {})",
                            self.basis[x].label, a.basis[y].label, a.basis[z].label
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `M[k]`: degrees lowered by `k`, differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|b| ModElem { label: format!("{}[{k}]", b.label), degree: b.degree - k, vertex: b.vertex })
            .collect();
        let s = F::sign(k);
        DgModule { basis, action: self.action.clone(), diff: self.diff.iter().map(|v| v.scaled(&s)).collect() }
    }

    pub fn direct_sum(parts: &[&DgModule<F>]) -> Self {
        let mut out = DgModule::zero();
        for p in parts {
            let off = out.dim();
            out.basis.extend(p.basis.iter().cloned());
            out.diff.extend(p.diff.iter().map(|v| v.reindex(|i| Some(i + off))));
            for (&(x, y), v) in &p.action {
                out.action.insert((x + off, y), v.reindex(|i| Some(i + off)));
            }
        }
        out
    }

    /// The simple module at vertex `v`: one dimension in degree 0 on which
    /// every non-idempotent basis vector acts by zero.
    pub fn simple(a: &FinDimDgAlgebra<F>, v: usize) -> Self {
        let basis = vec![ModElem { label: format!("S{}", a.vertices[v]), degree: 0, vertex: v }];
        let mut action = HashMap::new();
        action.insert((0, a.idempotents[v]), LinComb::basis(0));
        DgModule::new(basis, action, vec![LinComb::zero()])
    }

    /// The indecomposable projective `e_v A`, spanned by basis vectors ending at `v`.
    pub fn projective(a: &FinDimDgAlgebra<F>, v: usize) -> Self {
        let idx: Vec<usize> = (0..a.dim()).filter(|&x| a.basis[x].target == v).collect();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let basis = idx
            .iter()
            .map(|&x| ModElem { label: a.basis[x].label.clone(), degree: a.basis[x].degree, vertex: a.basis[x].source })
            .collect();
        let mut action = HashMap::new();
        for (k, &x) in idx.iter().enumerate() {
            for y in 0..a.dim() {
                if let Some(v) = a.mul_basis_ref(x, y) {
                    action.insert((k, y), v.reindex(|i| pos.get(&i).copied()));
                }
            }
        }
        let diff = idx.iter().map(|&x| a.d_basis(x).reindex(|i| pos.get(&i).copied())).collect();
        DgModule::new(basis, action, diff)
    }

    /// `A` as a right module over itself.
    pub fn regular(a: &FinDimDgAlgebra<F>) -> Self {
        let ps: Vec<DgModule<F>> = (0..a.num_vertices()).map(|v| Self::projective(a, v)).collect();
        Self::direct_sum(&ps.iter().collect::<Vec<_>>())
    }

    /// Builds a module from a `module` block, extending the arrow action
    /// along the reduced paths of the realization.
    pub fn from_spec(spec: &ModuleSpec, r: &Realization<F>) -> Result<Self> {
        let a = &r.algebra;
        let basis: Vec<ModElem> = spec
            .elems
            .iter()
            .map(|(name, deg, v)| ModElem { label: name.clone(), degree: *deg, vertex: *v })
            .collect();
        let n = basis.len();
        let convert = |terms: &[(num_rational::BigRational, usize)]| -> Result<LinComb<F>> {
            let mut out = LinComb::zero();
            for (c, i) in terms {
                out.add_term(*i, rational_into::<F>(c)?);
            }
            Ok(out)
        };
        let mut arrow_act: HashMap<(usize, usize), LinComb<F>> = HashMap::new();
        for (x, arrow, value) in &spec.actions {
            arrow_act.insert((*x, *arrow), convert(value)?);
        }
        let mut diff = vec![LinComb::zero(); n];
        for (x, value) in &spec.diffs {
            diff[*x] = convert(value)?;
        }
        let mut action = HashMap::new();
        for x in 0..n {
            for (pi, path) in r.paths.iter().enumerate() {
                if path.target != basis[x].vertex {
                    continue;
                }
                // x · (a_k ... a_1) = ((x · a_k) · a_{k-1}) ... · a_1
                let mut cur = LinComb::basis(x);
                for &arr in &path.arrows {
                    let mut next = LinComb::zero();
                    for (y, c) in cur.iter() {
                        if let Some(v) = arrow_act.get(&(y, arr)) {
                            next.add_scaled(v, c);
                        }
                    }
                    cur = next;
                }
                if !cur.is_zero() {
                    action.insert((x, pi), cur);
                }
            }
        }
        let m = DgModule::new(basis, action, diff);
        m.validate(a)?;
        Ok(m)
    }

    /// Elements of `M^n e_v`.
    pub fn at(&self, n: i64, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&x| self.basis[x].degree == n && self.basis[x].vertex == v).collect()
    }
}

/// A homogeneous map of right modules, given on basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<F> {
    pub degree: i64,
    pub images: Vec<LinComb<F>>,
}

impl<F: Scalar> ModuleMap<F> {
    pub fn apply(&self, x: &LinComb<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (i, c) in x.iter() {
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    /// Checks homogeneity, A-linearity and `d f = (-1)^{deg} f d`.
    pub fn validate(&self, a: &FinDimDgAlgebra<F>, src: &DgModule<F>, tgt: &DgModule<F>) -> Result<()> {
        if self.images.len() != src.dim() {
            return Err(Error::DimensionMismatch { expected: src.dim(), found: self.images.len() });
        }
        for x in 0..src.dim() {
            for z in self.images[x].indices() {
                if tgt.basis[z].degree != src.basis[x].degree + self.degree || tgt.basis[z].vertex != src.basis[x].vertex {
                    return Err(Error::InvalidModule(format!("map is not homogeneous on {}", src.basis[x].label)));
                }
            }
            let bx = LinComb::basis(x);
            for y in 0..a.dim() {
                let by = LinComb::basis(y);
                if self.apply(&src.act(&bx, &by)) != tgt.act(&self.images[x], &by) {
                    return Err(Error::InvalidModule(format!(
                        "map is not A-linear on ({}, {})",
                        src.basis[x].label, a.basis[y].label
                    )));
                }
            }
            let lhs = tgt.d(&self.images[x]);
            let rhs = self.apply(src.d_basis(x)).scaled(&F::sign(self.degree));
            if lhs != rhs {
                return Err(Error::NotClosed(format!("d f != ±f d on {}", src.basis[x].label)));
            }
        }
        Ok(())
    }
}

/// `cone(f) = N ⊕ M[1]` with `d(n, m) = (d n + f m, -d m)` for a closed degree-0 map `f: M -> N`.
pub fn cone<F: Scalar>(f: &ModuleMap<F>, src: &DgModule<F>, tgt: &DgModule<F>) -> Result<DgModule<F>> {
    if f.degree != 0 {
        return Err(Error::InvalidArgument("cone needs a degree-0 map".into()));
    }
    let shifted = src.shift(1);
    let mut out = DgModule::direct_sum(&[tgt, &shifted]);
    let off = tgt.dim();
    for x in 0..src.dim() {
        out.diff[off + x].add_assign(&f.images[x]);
    }
    Ok(out)
}
