use std::collections::BTreeSet;

use super::complex::{mc_check, zero_matrix, TwistedComplex};
use crate::ainfty::AInfinityAlgebra;
use crate::error::{Error, Result};
use crate::exactlin::{FieldTag, LinComb, Scalar};

/// Width of the extension window `(-d, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeartWindowConfig {
    pub d: usize,
}

impl HeartWindowConfig {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("the window width d must be at least 1".into()));
        }
        Ok(HeartWindowConfig { d })
    }
}

/// How twist coefficients are enumerated.
#[derive(Clone, Debug)]
pub enum FieldEnumeration<F> {
    /// Every element of a finite prime field.
    Exhaustive,
    /// Coefficients from a fixed list (not complete).
    Grid(Vec<F>),
}

/// Twisted complexes `(⊕ L_i[r_i], δ)` with `d - 1 >= r_1 >= .. >= r_n >= 0`
/// and at most `max_steps` entries, for every Maurer-Cartan twist.
///
/// Objects differing by a permutation of equal-shift entries that keeps the
/// twist upper triangular are listed once. `max_candidates` bounds the
/// number of twists tried.
pub fn filt_objects<F: Scalar>(
    e: &AInfinityAlgebra<F>,
    cfg: HeartWindowConfig,
    max_steps: usize,
    mode: &FieldEnumeration<F>,
    max_candidates: u64,
) -> Result<Vec<TwistedComplex<F>>> {
    let coefficients: Vec<F> = match mode {
        FieldEnumeration::Exhaustive => {
            if F::field() == FieldTag::Rationals {
                return Err(Error::UnsupportedField(
                    "exhaustive enumeration needs a finite prime field; use a coefficient grid over Q".into(),
                ));
            }
            F::elements().expect("finite field")
        }
        FieldEnumeration::Grid(values) => {
            let mut v: Vec<F> = vec![F::zero()];
            v.extend(values.iter().filter(|c| !c.is_zero()).cloned());
            v
        }
    };
    if let Some(b) = e.basis.iter().find(|b| b.degree < 0) {
        return Err(Error::NotCoconnective(format!("{} has degree {}", b.label, b.degree)));
    }
    let nv = e.num_vertices();
    let d = cfg.d as i64;
    let mut out = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut tried: u64 = 0;
    for n in 1..=max_steps {
        for entries in entry_sequences(nv, d, n) {
            // twist slots: (i, j, basis elements)
            let mut slots: Vec<(usize, usize, Vec<usize>)> = Vec::new();
            for j in 0..n {
                for i in 0..j {
                    let (vi, ri) = entries[i];
                    let (vj, rj) = entries[j];
                    let elems: Vec<usize> = (0..e.dim())
                        .filter(|&x| {
                            let b = &e.basis[x];
                            b.source == vj && b.target == vi && b.degree == ri - rj + 1
                        })
                        .collect();
                    if !elems.is_empty() {
                        slots.push((i, j, elems));
                    }
                }
            }
            let total: usize = slots.iter().map(|s| s.2.len()).sum();
            let count = (coefficients.len() as u64).checked_pow(total as u32).unwrap_or(u64::MAX);
            tried = tried.saturating_add(count);
            if tried > max_candidates {
                return Err(Error::InvalidArgument(format!(
                    "enumeration exceeds {max_candidates} candidate twists; lower max_steps or raise the bound"
                )));
            }
            let mut digits = vec![0usize; total];
            loop {
                let mut delta = zero_matrix(n, n);
                let mut k = 0;
                for (i, j, elems) in &slots {
                    let mut x = LinComb::zero();
                    for &b in elems {
                        x.add_term(b, coefficients[digits[k]].clone());
                        k += 1;
                    }
                    delta[*i][*j] = x;
                }
                let t = TwistedComplex::new(entries.clone(), delta);
                if mc_check(e, &t)?.holds() {
                    let key = canonical_key(&t);
                    if seen.insert(key) {
                        out.push(t);
                    }
                }
                if !advance(&mut digits, coefficients.len()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Entry sequences with non-increasing shifts in `[0, d - 1]`.
fn entry_sequences(nv: usize, d: i64, n: usize) -> Vec<Vec<(usize, i64)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for seq in &out {
            let max_r = seq.last().map_or(d - 1, |&(_, r)| r);
            for r in 0..=max_r {
                for v in 0..nv {
                    let mut s = seq.clone();
                    s.push((v, r));
                    next.push(s);
                }
            }
        }
        out = next;
    }
    out
}

fn render<F: Scalar>(t: &TwistedComplex<F>, perm: &[usize]) -> String {
    let mut s = String::new();
    for &p in perm {
        s.push_str(&format!("{:?};", t.entries[p]));
    }
    for &p in perm {
        for &q in perm {
            s.push_str(&format!("{:?};", t.delta[p][q].iter().map(|(x, c)| (x, c.to_string())).collect::<Vec<_>>()));
        }
    }
    s
}

/// Smallest rendering over permutations of equal-shift runs that keep the
/// twist strictly upper triangular.
fn canonical_key<F: Scalar>(t: &TwistedComplex<F>) -> String {
    let n = t.len();
    let mut best: Option<String> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    permute_runs(t, &mut perm, 0, &mut best);
    best.expect("identity permutation is admissible")
}

fn permute_runs<F: Scalar>(t: &TwistedComplex<F>, perm: &mut Vec<usize>, start: usize, best: &mut Option<String>) {
    let n = perm.len();
    if start >= n {
        let upper = (0..n).all(|a| (0..=a).all(|b| t.delta[perm[a]][perm[b]].is_zero()));
        if upper {
            let key = render(t, perm);
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
        }
        return;
    }
    let r = t.shift_of(start);
    let end = (start..n).find(|&k| t.shift_of(k) != r).unwrap_or(n);
    let run: Vec<usize> = (start..end).collect();
    for p in permutations(&run) {
        perm[start..end].copy_from_slice(&p);
        permute_runs(t, perm, end, best);
    }
    perm[start..end].copy_from_slice(&run);
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
