use std::collections::BTreeMap;

use super::Scalar;

/// A sparse linear combination of basis vectors, keyed by basis index.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<F> {
    terms: BTreeMap<usize, F>,
}

impl<F> Default for LinComb<F> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<F: Scalar> LinComb<F> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, F::one())
    }

    pub fn term(i: usize, c: F) -> Self {
        let mut out = Self::zero();
        out.add_term(i, c);
        out
    }

    pub fn from_dense(v: &[F]) -> Self {
        let mut out = Self::zero();
        for (i, c) in v.iter().enumerate() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn to_dense(&self, n: usize) -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (&i, c) in &self.terms {
            v[i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: usize) -> F {
        self.terms.get(&i).cloned().unwrap_or_else(F::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, i: usize, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&i);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(i, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.terms {
            self.add_term(i, x.clone() * c.clone());
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (&i, x) in &other.terms {
            self.add_term(i, x.clone());
        }
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb { terms: self.terms.iter().map(|(&i, x)| (i, x.clone() * c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        LinComb { terms: self.terms.iter().map(|(&i, x)| (i, -x.clone())).collect() }
    }

    /// Applies a linear map given on basis vectors.
    pub fn map<G>(&self, mut f: G) -> Self
    where
        G: FnMut(usize) -> LinComb<F>,
    {
        let mut out = Self::zero();
        for (&i, c) in &self.terms {
            out.add_scaled(&f(i), c);
        }
        out
    }

    /// Reindexes basis vectors; indices mapped to `None` are dropped.
    pub fn reindex<G>(&self, mut f: G) -> Self
    where
        G: FnMut(usize) -> Option<usize>,
    {
        let mut out = Self::zero();
        for (&i, c) in &self.terms {
            if let Some(j) = f(i) {
                out.add_term(j, c.clone());
            }
        }
        out
    }
}

impl<F: Scalar> FromIterator<(usize, F)> for LinComb<F> {
    fn from_iter<T: IntoIterator<Item = (usize, F)>>(iter: T) -> Self {
        let mut out = Self::zero();
        for (i, c) in iter {
            out.add_term(i, c);
        }
        out
    }
}
