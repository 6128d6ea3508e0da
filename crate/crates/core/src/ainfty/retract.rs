use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{extend_basis, LinComb, Matrix, Scalar};
use crate::presentations::{BasisElement, FinDimDgAlgebra};

/// A deformation retract of a dg algebra onto its cohomology:
/// `p i = id`, `i p - id = d h + h d`, and `h i = 0`, `p h = 0`, `h h = 0`.
#[derive(Clone, Debug)]
pub struct RetractData<F> {
    /// Basis of the cohomology; `label` is taken from a representative.
    pub h_basis: Vec<BasisElement>,
    pub h_weights: Option<Vec<usize>>,
    /// Representing cocycle of each cohomology basis vector.
    pub i: Vec<LinComb<F>>,
    /// Cohomology coordinates of each algebra basis vector.
    pub p: Vec<LinComb<F>>,
    /// Degree -1 homotopy on algebra basis vectors.
    pub h: Vec<LinComb<F>>,
}

fn apply<F: Scalar>(map: &[LinComb<F>], x: &LinComb<F>) -> LinComb<F> {
    let mut out = LinComb::zero();
    for (k, c) in x.iter() {
        out.add_scaled(&map[k], c);
    }
    out
}

impl<F: Scalar> RetractData<F> {
    pub fn apply_i(&self, x: &LinComb<F>) -> LinComb<F> {
        apply(&self.i, x)
    }

    pub fn apply_p(&self, x: &LinComb<F>) -> LinComb<F> {
        apply(&self.p, x)
    }

    pub fn apply_h(&self, x: &LinComb<F>) -> LinComb<F> {
        apply(&self.h, x)
    }

    /// Post-hoc verification of all retract identities.
    pub fn verify(&self, a: &FinDimDgAlgebra<F>) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidAlgebra(format!("retract: {m}")));
        for (k, ik) in self.i.iter().enumerate() {
            if !a.d(ik).is_zero() {
                return bad("i(h) is not a cocycle");
            }
            if self.apply_p(ik) != LinComb::basis(k) {
                return bad("p i != id");
            }
            if !self.apply_h(ik).is_zero() {
                return bad("h i != 0");
            }
        }
        for x in 0..a.dim() {
            let bx = LinComb::basis(x);
            let hx = &self.h[x];
            if !self.apply_p(hx).is_zero() {
                return bad("p h != 0");
            }
            if !self.apply_h(hx).is_zero() {
                return bad("h h != 0");
            }
            let mut lhs = self.apply_i(&self.p[x]);
            lhs.add_scaled(&bx, &-F::one());
            let mut rhs = a.d(hx);
            rhs.add_assign(&self.apply_h(a.d_basis(x)));
            if lhs != rhs {
                return bad(&format!("i p - id != d h + h d on {}", a.basis[x].label));
            }
        }
        Ok(())
    }
}

/// Builds a retract block by block, where a block collects the basis vectors
/// with fixed endpoints (and weight). Choices are deterministic: the
/// cohomology is spanned by the first kernel vectors (in echelon order)
/// independent of the coboundaries, and the complement of the cocycles by the
/// first standard basis vectors.
///
/// Because `h` and `p` respect endpoints, the transferred structure is
/// strictly unital.
pub fn build_retract<F: Scalar>(a: &FinDimDgAlgebra<F>) -> RetractData<F> {
    let n = a.dim();
    let mut h_basis = Vec::new();
    let mut h_weights = Vec::new();
    let mut i_map = Vec::new();
    let mut p_map: Vec<LinComb<F>> = vec![LinComb::zero(); n];
    let mut h_map: Vec<LinComb<F>> = vec![LinComb::zero(); n];

    // group by (source, target, weight), then by degree
    let mut groups: BTreeMap<(usize, usize, usize), BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
    for (x, b) in a.basis.iter().enumerate() {
        groups
            .entry((b.source, b.target, a.weight(x).unwrap_or(0)))
            .or_default()
            .entry(b.degree)
            .or_default()
            .push(x);
    }

    // idempotents must be their own cohomology representatives, so handle
    // degree 0 blocks on the diagonal with the idempotent first
    for ((src, tgt, w), by_degree) in groups {
        // complement C^{k} of the cocycles, in local coordinates, and its image
        let mut prev: Option<(Vec<usize>, Vec<Vec<F>>)> = None; // (indices, basis of C)
        let degrees: Vec<i64> = by_degree.keys().copied().collect();
        for (pos, &deg) in degrees.iter().enumerate() {
            let idx = &by_degree[&deg];
            let dim = idx.len();
            let local: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &x)| (x, k)).collect();
            // d: V^deg -> V^{deg+1}
            let next_idx: Vec<usize> = if pos + 1 < degrees.len() && degrees[pos + 1] == deg + 1 {
                by_degree[&(deg + 1)].clone()
            } else {
                Vec::new()
            };
            let next_local: BTreeMap<usize, usize> = next_idx.iter().enumerate().map(|(k, &x)| (x, k)).collect();
            let mut dmat = Matrix::zeros(next_idx.len(), dim);
            for (k, &x) in idx.iter().enumerate() {
                for (z, c) in a.d_basis(x).iter() {
                    dmat.set(next_local[&z], k, c.clone());
                }
            }
            let mut kernel = dmat.kernel_basis();
            // prefer the idempotent as the unit class
            if src == tgt && deg == 0 && w == 0 {
                let e = a.idempotents[src];
                if let Some(&k) = local.get(&e) {
                    let mut ev = vec![F::zero(); dim];
                    ev[k] = F::one();
                    kernel.insert(0, ev);
                }
            }
            // coboundaries d(C^{deg-1})
            let (prev_c_idx, c_prev): (Vec<usize>, Vec<Vec<F>>) = match prev.take() {
                Some((pidx, c)) if !c.is_empty() && degrees[pos - 1] == deg - 1 => (pidx, c),
                _ => (Vec::new(), Vec::new()),
            };
            let boundaries: Vec<Vec<F>> = c_prev
                .iter()
                .map(|cv| {
                    let mut out = vec![F::zero(); dim];
                    for (k, coef) in cv.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        for (z, c) in a.d_basis(prev_c_idx[k]).iter() {
                            let j = local[&z];
                            out[j] = out[j].clone() + coef.clone() * c.clone();
                        }
                    }
                    out
                })
                .collect();
            let cohom = extend_basis(dim, &boundaries, &kernel);
            let mut bz = boundaries.clone();
            bz.extend(cohom.iter().cloned());
            let standard: Vec<Vec<F>> = (0..dim)
                .map(|k| {
                    let mut v = vec![F::zero(); dim];
                    v[k] = F::one();
                    v
                })
                .collect();
            let comp = extend_basis(dim, &bz, &standard);

            // coordinates of each standard vector in (B, H, C)
            let mut all = bz.clone();
            all.extend(comp.iter().cloned());
            let m = Matrix::from_columns(dim, &all);
            let (nb, nh) = (boundaries.len(), cohom.len());
            let first_h = h_basis.len();
            for (j, v) in cohom.iter().enumerate() {
                let rep: LinComb<F> = v.iter().enumerate().map(|(k, c)| (idx[k], c.clone())).collect();
                let lead = v.iter().position(|c| !c.is_zero()).expect("nonzero class");
                h_basis.push(BasisElement {
                    label: format!("[{}]", a.basis[idx[lead]].label),
                    degree: deg,
                    source: src,
                    target: tgt,
                });
                h_weights.push(w);
                i_map.push(rep);
                let _ = j;
            }
            for (k, &x) in idx.iter().enumerate() {
                let coords = m.solve(&standard[k]).expect("square").expect("basis");
                let mut p = LinComb::zero();
                for j in 0..nh {
                    p.add_term(first_h + j, coords[nb + j].clone());
                }
                p_map[x] = p;
                let mut h = LinComb::zero();
                for j in 0..nb {
                    // h(d c_j) = -c_j
                    let c = &coords[j];
                    if c.is_zero() {
                        continue;
                    }
                    for (t, cv) in c_prev[j].iter().enumerate() {
                        h.add_term(prev_c_idx[t], -(c.clone() * cv.clone()));
                    }
                }
                h_map[x] = h;
            }
            prev = Some((idx.clone(), comp));
        }
    }
    RetractData {
        h_basis,
        h_weights: a.weights.as_ref().map(|_| h_weights),
        i: i_map,
        p: p_map,
        h: h_map,
    }
}
