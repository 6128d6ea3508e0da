use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{FieldTag, LinComb, Scalar};

/// One basis vector of a finite-dimensional algebra over a quiver: an element
/// of `e_target · A · e_source`, homogeneous of the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

/// A finite-dimensional dg algebra with explicit structure constants.
///
/// `mul(x, y)` is "x after y": it can only be nonzero when
/// `x.source == y.target`. Missing table entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimDgAlgebra<F> {
    pub vertices: Vec<String>,
    pub basis: Vec<BasisElement>,
    /// Basis index of the idempotent `e_v` for each vertex.
    pub idempotents: Vec<usize>,
    /// Optional extra grading (path length) preserved by product and differential.
    pub weights: Option<Vec<usize>>,
    mult: HashMap<(usize, usize), LinComb<F>>,
    diff: Vec<LinComb<F>>,
}

impl<F: Scalar> FinDimDgAlgebra<F> {
    /// Assembles an algebra from tables without checking the axioms; see [`Self::validate`].
    pub fn from_tables(
        vertices: Vec<String>,
        basis: Vec<BasisElement>,
        idempotents: Vec<usize>,
        mult: HashMap<(usize, usize), LinComb<F>>,
        diff: Vec<LinComb<F>>,
    ) -> Self {
        assert_eq!(basis.len(), diff.len(), "one differential entry per basis vector");
        let mult = mult.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        FinDimDgAlgebra { vertices, basis, idempotents, weights: None, mult, diff }
    }

    pub fn with_weights(mut self, weights: Vec<usize>) -> Self {
        assert_eq!(weights.len(), self.basis.len());
        self.weights = Some(weights);
        self
    }

    pub fn field(&self) -> FieldTag {
        F::field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn weight(&self, i: usize) -> Option<usize> {
        self.weights.as_ref().map(|w| w[i])
    }

    pub fn mul_basis(&self, x: usize, y: usize) -> LinComb<F> {
        self.mult.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn mul_basis_ref(&self, x: usize, y: usize) -> Option<&LinComb<F>> {
        self.mult.get(&(x, y))
    }

    pub fn mul(&self, x: &LinComb<F>, y: &LinComb<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(v) = self.mult.get(&(i, j)) {
                    out.add_scaled(v, &(a.clone() * b.clone()));
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
        for (i, a) in x.iter() {
            out.add_scaled(&self.diff[i], a);
        }
        out
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(|v| v.is_zero())
    }

    /// Nonzero entries of the multiplication table.
    pub fn mult_entries(&self) -> impl Iterator<Item = (&(usize, usize), &LinComb<F>)> {
        self.mult.iter()
    }

    pub fn unit(&self) -> LinComb<F> {
        self.idempotents.iter().map(|&e| (e, F::one())).collect()
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.idempotents.contains(&x)
    }

    /// Degree -> dimension, zero entries omitted.
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

    /// Basis indices grouped by (source, target, degree, weight); every
    /// structure map is homogeneous for this decomposition except `d`, which
    /// raises the degree by one.
    pub fn blocks(&self) -> BTreeMap<(usize, usize, i64, usize), Vec<usize>> {
        let mut out: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            out.entry((b.source, b.target, b.degree, self.weight(i).unwrap_or(0))).or_default().push(i);
        }
        out
    }

    /// Whether basis vectors `x`, `y` can multiply to something nonzero.
    pub fn composable(&self, x: usize, y: usize) -> bool {
        self.basis[x].source == self.basis[y].target
    }

    /// Checks the dg algebra axioms on every basis pair and triple.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let label = |i: usize| self.basis[i].label.as_str();
        if self.idempotents.len() != self.vertices.len() {
            return Err(Error::InvalidAlgebra("one idempotent per vertex is required".into()));
        }
        for (v, &e) in self.idempotents.iter().enumerate() {
            let b = &self.basis[e];
            if b.source != v || b.target != v || b.degree != 0 {
                return Err(Error::InvalidAlgebra(format!("idempotent {} is misplaced", b.label)));
            }
        }
        // homogeneity of tables
        for (&(x, y), v) in &self.mult {
            if !self.composable(x, y) {
                return Err(Error::InvalidAlgebra(format!("{} * {} should vanish", label(x), label(y))));
            }
            let deg = self.degree(x) + self.degree(y);
            for z in v.indices() {
                let bz = &self.basis[z];
                if bz.degree != deg || bz.source != self.basis[y].source || bz.target != self.basis[x].target {
                    return Err(Error::InvalidAlgebra(format!("{} * {} is not homogeneous", label(x), label(y))));
                }
                if let Some(w) = &self.weights {
                    if w[z] != w[x] + w[y] {
                        return Err(Error::InvalidAlgebra(format!("{} * {} breaks the weight grading", label(x), label(y))));
                    }
                }
            }
        }
        for x in 0..n {
            for z in self.diff[x].indices() {
                let (bx, bz) = (&self.basis[x], &self.basis[z]);
                if bz.degree != bx.degree + 1 || bz.source != bx.source || bz.target != bx.target {
                    return Err(Error::InvalidAlgebra(format!("d({}) is not homogeneous", bx.label)));
                }
                if let Some(w) = &self.weights {
                    if w[z] != w[x] {
                        return Err(Error::InvalidAlgebra(format!("d({}) breaks the weight grading", bx.label)));
                    }
                }
            }
        }
        // unit
        let one = self.unit();
        for x in 0..n {
            let bx = LinComb::basis(x);
            if self.mul(&one, &bx) != bx || self.mul(&bx, &one) != bx {
                return Err(Error::InvalidAlgebra(format!("unit law fails on {}", label(x))));
            }
        }
        // d^2 = 0
        for x in 0..n {
            if !self.d(&self.diff[x]).is_zero() {
                return Err(Error::InvalidAlgebra(format!("d^2 does not vanish on {}", label(x))));
            }
        }
        // Leibniz
        for x in 0..n {
            for y in 0..n {
                if !self.composable(x, y) {
                    continue;
                }
                let lhs = self.d(&self.mul_basis(x, y));
                let mut rhs = self.mul(&self.diff[x], &LinComb::basis(y));
                rhs.add_scaled(&self.mul(&LinComb::basis(x), &self.diff[y]), &F::sign(self.degree(x)));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!("Leibniz rule fails on ({}, {})", label(x), label(y))));
                }
            }
        }
        // associativity
        for x in 0..n {
            for y in 0..n {
                if !self.composable(x, y) {
                    continue;
                }
                let xy = self.mul_basis(x, y);
                for z in 0..n {
                    if !self.composable(y, z) {
                        continue;
                    }
                    let left = self.mul(&xy, &LinComb::basis(z));
                    let right = self.mul(&LinComb::basis(x), &self.mul_basis(y, z));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            label(x),
                            label(y),
                            label(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The semisimple algebra spanned by the vertex idempotents.
    pub fn semisimple(vertices: Vec<String>) -> Self {
        let n = vertices.len();
        let basis = (0..n)
            .map(|v| BasisElement { label: format!("e{}", vertices[v]), degree: 0, source: v, target: v })
            .collect();
        let mult = (0..n).map(|v| ((v, v), LinComb::basis(v))).collect();
        FinDimDgAlgebra::from_tables(vertices, basis, (0..n).collect(), mult, vec![LinComb::zero(); n])
    }
}
