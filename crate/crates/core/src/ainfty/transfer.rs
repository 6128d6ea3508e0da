use std::collections::HashMap;

use rayon::prelude::*;

use super::algebra::{bar_sign_exponent, AInfinityAlgebra};
use super::retract::{build_retract, RetractData};
use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Scalar};
use crate::presentations::FinDimDgAlgebra;

/// `b_2(x, y) = (-1)^{|x|} x y` on homogeneous elements of the dg algebra.
fn b2<F: Scalar>(a: &FinDimDgAlgebra<F>, x: &LinComb<F>, y: &LinComb<F>) -> LinComb<F> {
    let mut out = LinComb::zero();
    for (i, c) in x.iter() {
        let s = F::sign(a.degree(i));
        for (j, e) in y.iter() {
            if let Some(v) = a.mul_basis_ref(i, j) {
                out.add_scaled(v, &(s.clone() * c.clone() * e.clone()));
            }
        }
    }
    out
}

/// Minimal model of a finite-dimensional dg algebra by homotopy transfer.
///
/// With bar operations `b` on `A` and the retract `(i, p, h)`, put
/// `T(x) = i(x)` and, for longer tuples,
/// `T(x_1..x_k) = h(sum_j b_2(T(x_1..x_j), T(x_{j+1}..x_k)))`; then
/// `b'_n(x_1..x_n) = p(sum_j b_2(T(x_1..x_j), T(x_{j+1}..x_n)))`.
/// This is the sum over planar binary trees with `b_2` at the vertices and
/// `h` on internal edges. Replacing `h` by `-h` multiplies `m_n` by `(-1)^n`,
/// which is again a minimal model.
pub fn minimal_model<F: Scalar>(a: &FinDimDgAlgebra<F>, arity_bound: usize) -> Result<AInfinityAlgebra<F>> {
    let r = build_retract(a);
    minimal_model_with(a, &r, arity_bound)
}

pub fn minimal_model_with<F: Scalar>(
    a: &FinDimDgAlgebra<F>,
    r: &RetractData<F>,
    arity_bound: usize,
) -> Result<AInfinityAlgebra<F>> {
    if arity_bound < 2 {
        return Err(Error::InvalidArgument("arity bound must be at least 2".into()));
    }
    let units: Vec<usize> = a
        .idempotents
        .iter()
        .map(|e| {
            r.i.iter()
                .position(|v| *v == LinComb::basis(*e))
                .ok_or_else(|| Error::InvalidAlgebra("an idempotent is exact".into()))
        })
        .collect::<Result<_>>()?;
    let mut out = AInfinityAlgebra::new(a.vertices.clone(), r.h_basis.clone(), units, r.h_weights.clone(), arity_bound);
    let elems = out.non_units();

    // T on tuples of each length, level by level
    let mut t_levels: Vec<HashMap<Vec<usize>, LinComb<F>>> = vec![HashMap::new()];
    t_levels.push(elems.iter().map(|&x| (vec![x], r.i[x].clone())).collect());
    let hdeg: Vec<i64> = r.h_basis.iter().map(|b| b.degree).collect();

    for k in 2..=arity_bound {
        let tuples = out.composable_tuples(&elems, k);
        let results: Vec<(Vec<usize>, LinComb<F>, LinComb<F>)> = tuples
            .into_par_iter()
            .map(|t| {
                let mut q = LinComb::zero();
                for j in 1..k {
                    let (l, rr) = (&t_levels[j][&t[..j].to_vec()], &t_levels[k - j][&t[j..].to_vec()]);
                    if l.is_zero() || rr.is_zero() {
                        continue;
                    }
                    q.add_assign(&b2(a, l, rr));
                }
                let b = r.apply_p(&q);
                let tree = if k < arity_bound { r.apply_h(&q) } else { LinComb::zero() };
                (t, b, tree)
            })
            .collect();
        let mut level = HashMap::with_capacity(results.len());
        for (t, b, tree) in results {
            let sign = F::sign(bar_sign_exponent(t.iter().map(|&x| hdeg[x])));
            if !b.is_zero() {
                out.set_m(t.clone(), b.scaled(&sign));
            }
            level.insert(t, tree);
        }
        t_levels.push(level);
    }
    // products with units
    for (v, &e) in out.units.clone().iter().enumerate() {
        for x in 0..out.dim() {
            if out.basis[x].target == v {
                out.set_m(vec![e, x], LinComb::basis(x));
            }
            if out.basis[x].source == v {
                out.set_m(vec![x, e], LinComb::basis(x));
            }
        }
    }
    Ok(out)
}

/// The cohomology algebra with its induced product.
pub fn cohomology_algebra<F: Scalar>(a: &FinDimDgAlgebra<F>) -> FinDimDgAlgebra<F> {
    let m = minimal_model(a, 2).expect("arity 2 is allowed");
    m.to_dg().expect("arity 2 has no higher products")
}
