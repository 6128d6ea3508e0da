use rayon::prelude::*;

use super::algebra::AInfinityAlgebra;
use crate::error::Result;
use crate::exactlin::{LinComb, Scalar};
use crate::report::{CheckReport, Verdict};

/// Left-hand side of the arity-`n` Stasheff identity on one composable tuple.
pub fn stasheff_defect<F: Scalar>(a: &AInfinityAlgebra<F>, x: &[usize]) -> LinComb<F> {
    let n = x.len();
    let mut out = LinComb::zero();
    let mut prefix_deg = 0i64;
    for r in 0..n {
        if r > 0 {
            prefix_deg += a.degree(x[r - 1]);
        }
        for s in 1..=n - r {
            let t = n - r - s;
            if r + 1 + t > a.arity_bound || s > a.arity_bound {
                continue;
            }
            let Some(inner) = a.m_ref(&x[r..r + s]) else { continue };
            let sign = F::sign((r + s * t) as i64 + s as i64 * prefix_deg);
            let mut tuple = Vec::with_capacity(r + 1 + t);
            tuple.extend_from_slice(&x[..r]);
            tuple.push(0);
            tuple.extend_from_slice(&x[r + s..]);
            for (z, c) in inner.iter() {
                tuple[r] = z;
                if let Some(outer) = a.m_ref(&tuple) {
                    out.add_scaled(outer, &(sign.clone() * c.clone()));
                }
            }
        }
    }
    out
}

/// Strict unitality of the vertex idempotents.
pub fn check_strict_unitality<F: Scalar>(a: &AInfinityAlgebra<F>) -> CheckReport {
    let fail = |msg: String| CheckReport::new("strict_unitality", Verdict::Fails).with_certificate(msg);
    for (v, &e) in a.units.iter().enumerate() {
        if !a.m(&[e]).is_zero() {
            return fail(format!("m_1({}) != 0", a.label(e)));
        }
        for x in 0..a.dim() {
            let bx = &a.basis[x];
            let expect_left = if bx.target == v { LinComb::basis(x) } else { LinComb::zero() };
            let expect_right = if bx.source == v { LinComb::basis(x) } else { LinComb::zero() };
            if a.m(&[e, x]) != expect_left || a.m(&[x, e]) != expect_right {
                return fail(format!("m_2 with unit {} fails on {}", a.label(e), a.label(x)));
            }
        }
    }
    for n in 3..=a.arity_bound {
        if let Some((t, _)) = a.entries(n).find(|(t, _)| t.iter().any(|&x| a.is_unit(x))) {
            return fail(format!("m_{n}{} != 0 although it contains a unit", a.tuple_label(t)));
        }
    }
    CheckReport::new("strict_unitality", Verdict::Holds)
}

/// Verifies the Stasheff identities for every arity up to the arity bound on
/// every composable basis tuple.
///
/// Tuples containing a strict unit are skipped once strict unitality has been
/// verified, since the identities on them follow from the unit axioms.
pub fn check_stasheff<F: Scalar>(a: &AInfinityAlgebra<F>) -> Result<CheckReport> {
    a.check_degrees()?;
    let unital = check_strict_unitality(a);
    let elems: Vec<usize> = if unital.holds() { a.non_units() } else { (0..a.dim()).collect() };
    let mut parts = Vec::new();
    let mut first_failure = None;
    for n in 1..=a.arity_bound {
        let tuples = a.composable_tuples(&elems, n);
        let bad = tuples.par_iter().find_first(|t| !stasheff_defect(a, t).is_zero());
        let verdict = Verdict::from_bool(bad.is_none());
        let mut part = CheckReport::new(format!("stasheff_arity_{n}"), verdict)
            .with_note(format!("{} tuples checked", tuples.len()));
        if let Some(t) = bad {
            let cert = format!("arity {n} fails on {}", a.tuple_label(t));
            part = part.with_certificate(cert.clone());
            first_failure.get_or_insert(cert);
        }
        parts.push(part);
    }
    let mut report = CheckReport::all("stasheff", parts);
    if !unital.holds() {
        report = report.with_note(format!("not strictly unital: {}", unital.certificate.clone().unwrap_or_default()));
    }
    report.certificate = first_failure;
    Ok(report)
}
