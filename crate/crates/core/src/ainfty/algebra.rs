use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Scalar};
use crate::presentations::{BasisElement, FinDimDgAlgebra};

/// An A-infinity algebra over a quiver, with operations `m_1..m_N` stored as
/// sparse tables on composable basis tuples.
///
/// Signs follow the Stasheff identities
/// `sum_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0`
/// with the Koszul rule for applying tensor products of maps. Internally it
/// is often easier to use the sign-free "bar" operations
/// `b_n(x_1..x_n) = (-1)^{sum_i (n-i)|x_i|} m_n(x_1..x_n)`, see [`Self::b`].
///
/// A tuple `(x_1, .., x_n)` is composable when `x_i.source == x_{i+1}.target`,
/// so `m_2(x, y)` is "x after y" as for [`FinDimDgAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityAlgebra<F> {
    pub vertices: Vec<String>,
    pub basis: Vec<BasisElement>,
    /// Basis index of the strict unit `e_v` for each vertex.
    pub units: Vec<usize>,
    pub weights: Option<Vec<usize>>,
    /// All products of arity at most this bound are exact; higher ones are not computed.
    pub arity_bound: usize,
    /// `tables[n]` holds `m_n`; index 0 is unused.
    tables: Vec<HashMap<Vec<usize>, LinComb<F>>>,
}

/// `(-1)^{sum_i (n-i)|x_i|}`: the sign relating `m_n` and `b_n` on a tuple of degrees.
pub fn bar_sign_exponent(degrees: impl IntoIterator<Item = i64>) -> i64 {
    let degs: Vec<i64> = degrees.into_iter().collect();
    let n = degs.len() as i64;
    degs.iter().enumerate().map(|(i, d)| (n - 1 - i as i64) * d).sum()
}

impl<F: Scalar> AInfinityAlgebra<F> {
    pub fn new(
        vertices: Vec<String>,
        basis: Vec<BasisElement>,
        units: Vec<usize>,
        weights: Option<Vec<usize>>,
        arity_bound: usize,
    ) -> Self {
        AInfinityAlgebra {
            vertices,
            basis,
            units,
            weights,
            arity_bound,
            tables: vec![HashMap::new(); arity_bound + 1],
        }
    }

    /// A dg algebra viewed as an A-infinity algebra with `m_n = 0` for `n >= 3`.
    pub fn from_dg(a: &FinDimDgAlgebra<F>, arity_bound: usize) -> Self {
        let mut out = Self::new(
            a.vertices.clone(),
            a.basis.clone(),
            a.idempotents.clone(),
            a.weights.clone(),
            arity_bound.max(2),
        );
        for x in 0..a.dim() {
            out.set_m(vec![x], a.d_basis(x).clone());
        }
        for (&(x, y), v) in a.mult_entries() {
            out.set_m(vec![x, y], v.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, x: usize) -> i64 {
        self.basis[x].degree
    }

    pub fn weight(&self, x: usize) -> Option<usize> {
        self.weights.as_ref().map(|w| w[x])
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units.contains(&x)
    }

    pub fn set_m(&mut self, tuple: Vec<usize>, value: LinComb<F>) {
        let n = tuple.len();
        assert!(n >= 1 && n <= self.arity_bound, "arity {n} outside 1..={}", self.arity_bound);
        if value.is_zero() {
            self.tables[n].remove(&tuple);
        } else {
            self.tables[n].insert(tuple, value);
        }
    }

    pub fn m(&self, tuple: &[usize]) -> LinComb<F> {
        self.m_ref(tuple).cloned().unwrap_or_default()
    }

    pub fn m_ref(&self, tuple: &[usize]) -> Option<&LinComb<F>> {
        self.tables.get(tuple.len()).and_then(|t| t.get(tuple))
    }

    /// The bar operation `b_n`.
    pub fn b(&self, tuple: &[usize]) -> LinComb<F> {
        match self.m_ref(tuple) {
            None => LinComb::zero(),
            Some(v) => v.scaled(&F::sign(bar_sign_exponent(tuple.iter().map(|&x| self.degree(x))))),
        }
    }

    /// Nonzero entries of `m_n`.
    pub fn entries(&self, n: usize) -> impl Iterator<Item = (&Vec<usize>, &LinComb<F>)> {
        self.tables.get(n).into_iter().flat_map(|t| t.iter())
    }

    pub fn is_minimal(&self) -> bool {
        self.tables.get(1).map_or(true, |t| t.is_empty())
    }

    pub fn composable(&self, x: usize, y: usize) -> bool {
        self.basis[x].source == self.basis[y].target
    }

    /// All composable tuples of length `n` from `elems`.
    pub fn composable_tuples(&self, elems: &[usize], n: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = elems.iter().map(|&x| vec![x]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for t in &out {
                let last = *t.last().expect("nonempty");
                for &y in elems {
                    if self.composable(last, y) {
                        let mut u = t.clone();
                        u.push(y);
                        next.push(u);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Basis vectors that are not units.
    pub fn non_units(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&x| !self.is_unit(x)).collect()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn label(&self, x: usize) -> &str {
        &self.basis[x].label
    }

    pub fn tuple_label(&self, tuple: &[usize]) -> String {
        let parts: Vec<&str> = tuple.iter().map(|&x| self.label(x)).collect();
        format!("({})", parts.join(", "))
    }

    /// Checks that every table entry has output degree `2 - n + sum of inputs`,
    /// endpoints matching the tuple, and (if present) additive weights.
    pub fn check_degrees(&self) -> Result<()> {
        for n in 1..self.tables.len() {
            for (t, v) in &self.tables[n] {
                if t.windows(2).any(|w| !self.composable(w[0], w[1])) {
                    return Err(Error::Malformed(format!("m_{n} defined on non-composable {}", self.tuple_label(t))));
                }
                let deg = 2 - n as i64 + t.iter().map(|&x| self.degree(x)).sum::<i64>();
                let (src, tgt) = (self.basis[t[n - 1]].source, self.basis[t[0]].target);
                for z in v.indices() {
                    let b = &self.basis[z];
                    if b.degree != deg {
                        return Err(Error::Malformed(format!(
                            "m_{n}{} has a term {} of degree {} instead of {deg}",
                            self.tuple_label(t),
                            b.label,
                            b.degree
                        )));
                    }
                    if b.source != src || b.target != tgt {
                        return Err(Error::Malformed(format!("m_{n}{} has endpoints off", self.tuple_label(t))));
                    }
                    if let Some(w) = &self.weights {
                        if w[z] != t.iter().map(|&x| w[x]).sum::<usize>() {
                            return Err(Error::Malformed(format!("m_{n}{} breaks the weight grading", self.tuple_label(t))));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The dg algebra `(A, m_1, m_2)`, provided all higher products vanish.
    pub fn to_dg(&self) -> Option<FinDimDgAlgebra<F>> {
        if (3..self.tables.len()).any(|n| !self.tables[n].is_empty()) {
            return None;
        }
        let mult = self.tables[2].iter().map(|(t, v)| ((t[0], t[1]), v.clone())).collect();
        let diff = (0..self.dim()).map(|x| self.m(&[x])).collect();
        let mut a = FinDimDgAlgebra::from_tables(self.vertices.clone(), self.basis.clone(), self.units.clone(), mult, diff);
        if let Some(w) = &self.weights {
            a = a.with_weights(w.clone());
        }
        Some(a)
    }

    /// The quotient by the span of the basis vectors failing `keep`, which
    /// must be an A-infinity ideal (checked).
    pub fn quotient(&self, keep: impl Fn(usize) -> bool) -> Result<Self> {
        let kept: Vec<usize> = (0..self.dim()).filter(|&x| keep(x)).collect();
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        if self.units.iter().any(|u| !pos.contains_key(u)) {
            return Err(Error::InvalidArgument("a quotient cannot drop a unit".into()));
        }
        let mut out = Self::new(
            self.vertices.clone(),
            kept.iter().map(|&x| self.basis[x].clone()).collect(),
            self.units.iter().map(|u| pos[u]).collect(),
            self.weights.as_ref().map(|w| kept.iter().map(|&x| w[x]).collect()),
            self.arity_bound,
        );
        for n in 1..self.tables.len() {
            for (t, v) in &self.tables[n] {
                let inside = t.iter().all(|x| pos.contains_key(x));
                if !inside {
                    if v.indices().any(|z| pos.contains_key(&z)) {
                        return Err(Error::InvalidArgument(format!(
                            "dropped span is not an ideal: m_{n}{} leaves it",
                            self.tuple_label(t)
                        )));
                    }
                    continue;
                }
                let tuple = t.iter().map(|x| pos[x]).collect();
                out.set_m(tuple, v.reindex(|z| pos.get(&z).copied()));
            }
        }
        Ok(out)
    }

    /// Forgets everything above arity `n`.
    pub fn truncate_arity(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.tables.truncate(n + 1);
        out.tables.resize(n + 1, HashMap::new());
        out.arity_bound = n;
        out
    }
}
