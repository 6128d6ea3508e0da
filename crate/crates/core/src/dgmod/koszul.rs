use std::collections::{BTreeMap, HashMap};

use crate::ainfty::{cohomology_algebra, minimal_model, AInfinityAlgebra};
use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Scalar};
use crate::presentations::{BasisElement, FinDimDgAlgebra};
use crate::report::{CheckReport, DimTable, Verdict, Window};

/// Which part of a truncated dual is exact.
///
/// A class is exact if nothing was truncated, if its degree lies in
/// `degrees`, or if its weight is at most `max_weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Certificate {
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<usize>,
}

impl Certificate {
    pub const COMPLETE: Certificate = Certificate { complete: true, degrees: None, max_weight: None };

    /// The degrees in which every class is exact.
    pub fn degree_window(&self) -> Option<Window> {
        if self.complete {
            Some(Window::ALL)
        } else {
            self.degrees
        }
    }

    pub fn contains(&self, degree: i64, weight: Option<usize>) -> bool {
        self.complete
            || self.degrees.is_some_and(|w| w.contains(degree))
            || self.max_weight.zip(weight).is_some_and(|(m, x)| x <= m)
    }
}

/// The graded dual of the bar construction, truncated at a word length.
///
/// For an augmented A-infinity algebra `A` with augmentation ideal `J`, the
/// basis consists of duals `[y_1|...|y_m]*` of composable words of basis
/// vectors of `J` (`y_i.source == y_{i+1}.target`) of degree
/// `sum (1 - |y_i|)`, plus one idempotent per vertex. The dual of `[y_1]`
/// for an arrow-like `y: s -> t` goes from `t` to `s`, matching
/// `Ext^1(S_t, S_s)` for right modules. The product is concatenation,
/// `w* · u* = [u|w]*`, and the differential is minus the signed transpose of
/// the bar differential.
#[derive(Clone, Debug)]
pub struct BarDual<F> {
    pub algebra: FinDimDgAlgebra<F>,
    /// Words behind the basis vectors (empty for idempotents).
    pub words: Vec<Vec<usize>>,
    pub max_length: usize,
    pub certificate: Certificate,
}

fn bar_degree(d: i64) -> i64 {
    d - 1
}

/// Computes the truncated dual of the bar construction of `a`.
///
/// `exact_arity` says whether `m_n` vanishes above the arity bound (true for
/// dg algebras); otherwise the length bound is capped by the arity bound.
pub fn bar_dual<F: Scalar>(a: &AInfinityAlgebra<F>, max_length: usize, exact_arity: bool) -> Result<BarDual<F>> {
    let letters = a.non_units();
    let is_letter: Vec<bool> = (0..a.dim()).map(|x| !a.is_unit(x)).collect();
    // augmentation: products of letters stay among letters
    for n in 1..=a.arity_bound {
        for (t, v) in a.entries(n) {
            if t.iter().all(|&x| is_letter[x]) && v.indices().any(|z| !is_letter[z]) {
                return Err(Error::InvalidAlgebra(format!(
                    "not augmented: m_{n}{} has a unit component",
                    a.tuple_label(t)
                )));
            }
        }
    }
    let len_bound = if exact_arity { max_length } else { max_length.min(a.arity_bound) };

    // words by length
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = letters.iter().map(|&y| vec![y]).collect();
    let mut longer_exists = false;
    for len in 1..=len_bound + 1 {
        if len == len_bound + 1 {
            longer_exists = !layer.is_empty();
            break;
        }
        words.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for w in &layer {
            let last = *w.last().expect("nonempty");
            for &y in &letters {
                if a.composable(last, y) {
                    let mut u = w.clone();
                    u.push(y);
                    next.push(u);
                }
            }
        }
        layer = next;
    }

    let positive = letters.iter().all(|&y| 1 - a.degree(y) >= 1);
    let negative = letters.iter().all(|&y| 1 - a.degree(y) <= -1);
    let weighted = a.weights.is_some() && letters.iter().all(|&y| a.weight(y).unwrap_or(0) >= 1);
    let l = len_bound as i64;
    let certificate = Certificate {
        complete: !longer_exists,
        degrees: if positive {
            Some(Window::at_most(l - 1))
        } else if negative {
            Some(Window::at_least(1 - l))
        } else {
            None
        },
        max_weight: weighted.then_some(len_bound),
    };
    if !certificate.complete && certificate.degrees.is_none() && certificate.max_weight.is_none() {
        return Err(Error::Uncertified(format!(
            "words of every length contribute to finitely many degrees only when letters have degree <= 0 or >= 2, \
             or carry positive weights; length bound {len_bound} is not enough"
        )));
    }
    // with only a weight bound, words of larger weight span a dg ideal
    if !certificate.complete && certificate.degrees.is_none() {
        words.retain(|w| w.iter().map(|&y| a.weight(y).unwrap_or(0)).sum::<usize>() <= len_bound);
    }

    let nv = a.num_vertices();
    let mut basis: Vec<BasisElement> = (0..nv)
        .map(|v| BasisElement { label: format!("e{}", a.vertices[v]), degree: 0, source: v, target: v })
        .collect();
    let mut all_words: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for w in &words {
        let first = &a.basis[w[0]];
        let last = &a.basis[*w.last().expect("nonempty")];
        let labels: Vec<&str> = w.iter().map(|&y| a.label(y)).collect();
        basis.push(BasisElement {
            label: format!("[{}]*", labels.join("|")),
            degree: w.iter().map(|&y| 1 - a.degree(y)).sum(),
            source: first.target,
            target: last.source,
        });
        all_words.push(w.clone());
    }
    let index: HashMap<&[usize], usize> =
        all_words.iter().enumerate().skip(nv).map(|(i, w)| (w.as_slice(), i)).collect();
    let dim = basis.len();

    let mut mult = HashMap::new();
    for v in 0..nv {
        for x in 0..dim {
            if basis[x].target == v {
                mult.insert((v, x), LinComb::basis(x));
            }
            if basis[x].source == v {
                mult.insert((x, v), LinComb::basis(x));
            }
        }
    }
    for x in nv..dim {
        for y in nv..dim {
            if basis[x].source != basis[y].target {
                continue;
            }
            let mut w = all_words[y].clone();
            w.extend_from_slice(&all_words[x]);
            if let Some(&z) = index.get(w.as_slice()) {
                mult.insert((x, y), LinComb::basis(z));
            }
        }
    }

    // letters beta -> [(alpha, coefficient of beta in b_n(alpha))]
    let mut preimages: HashMap<usize, Vec<(Vec<usize>, F)>> = HashMap::new();
    for n in 1..=a.arity_bound.min(len_bound) {
        for (t, _) in a.entries(n) {
            if !t.iter().all(|&x| is_letter[x]) {
                continue;
            }
            for (z, c) in a.b(t).iter() {
                preimages.entry(z).or_default().push((t.clone(), c.clone()));
            }
        }
    }
    for list in preimages.values_mut() {
        list.sort_by(|p, q| p.0.cmp(&q.0));
    }
    let mut diff = vec![LinComb::zero(); dim];
    for x in nv..dim {
        let w = &all_words[x];
        let mut out = LinComb::zero();
        let mut prefix = 0i64;
        for (j, &beta) in w.iter().enumerate() {
            if let Some(list) = preimages.get(&beta) {
                for (alpha, c) in list {
                    if w.len() - 1 + alpha.len() > len_bound {
                        continue;
                    }
                    let mut y = w[..j].to_vec();
                    y.extend_from_slice(alpha);
                    y.extend_from_slice(&w[j + 1..]);
                    if let Some(&yi) = index.get(y.as_slice()) {
                        out.add_term(yi, c.clone() * F::sign(prefix));
                    }
                }
            }
            prefix += bar_degree(a.degree(beta));
        }
        // delta(phi) = -(-1)^{|phi|} phi ∘ D
        diff[x] = out.scaled(&-F::sign(basis[x].degree));
    }
    let mut algebra = FinDimDgAlgebra::from_tables(a.vertices.clone(), basis, (0..nv).collect(), mult, diff);
    if let Some(wts) = &a.weights {
        let ww = all_words.iter().map(|w| w.iter().map(|&y| wts[y]).sum()).collect();
        algebra = algebra.with_weights(ww);
    }
    algebra.validate()?;
    Ok(BarDual { algebra, words: all_words, max_length: len_bound, certificate })
}

/// A Koszul dual: a minimal A-infinity algebra, exact on its certified part.
#[derive(Clone, Debug)]
pub struct KoszulDual<F> {
    pub algebra: AInfinityAlgebra<F>,
    pub certificate: Certificate,
    pub word_length: usize,
}

impl<F: Scalar> KoszulDual<F> {
    pub fn graded_dims(&self) -> DimTable {
        self.algebra.graded_dims()
    }

    /// Dimension of the block of degree `n` from vertex `s` to vertex `t`,
    /// i.e. `Hom(S_s, S_t[n])`.
    pub fn block_dim(&self, s: usize, t: usize, n: i64) -> usize {
        self.algebra.basis.iter().filter(|b| b.source == s && b.target == t && b.degree == n).count()
    }

    /// Degrees in which the dual is exact, if any.
    pub fn window(&self) -> Option<Window> {
        self.certificate.degree_window()
    }
}

fn dual_from_bar<F: Scalar>(bd: BarDual<F>, arity_bound: usize) -> Result<KoszulDual<F>> {
    let m = minimal_model(&bd.algebra, arity_bound)?;
    let cert = bd.certificate;
    let keep: Vec<bool> = (0..m.dim()).map(|x| cert.contains(m.degree(x), m.weight(x))).collect();
    let m = if keep.iter().all(|&k| k) { m } else { m.quotient(|x| keep[x])? };
    Ok(KoszulDual { algebra: m, certificate: cert, word_length: bd.max_length })
}

/// Koszul dual `REnd_A(S_A)` of a connective dg algebra, computed from the
/// dual bar construction truncated at `max_length` letters.
pub fn koszul_dual<F: Scalar>(a: &FinDimDgAlgebra<F>, max_length: usize, arity_bound: usize) -> Result<KoszulDual<F>> {
    let h = cohomology_algebra(a);
    if let Some(d) = h.max_degree().filter(|&d| d > 0) {
        return Err(Error::NotConnective(format!("H^{d} is nonzero")));
    }
    let bd = bar_dual(&AInfinityAlgebra::from_dg(a, 2), max_length, true)?;
    dual_from_bar(bd, arity_bound)
}

/// Koszul dual `REnd_E(H^0 E)` of a coconnective dg algebra with
/// `H^0(E) = k × ... × k`, via its minimal model.
pub fn koszul_dual_of_coconnective<F: Scalar>(
    e: &FinDimDgAlgebra<F>,
    max_length: usize,
    arity_bound: usize,
) -> Result<KoszulDual<F>> {
    let model_arity = arity_bound.max(max_length).max(2);
    let m = minimal_model(e, model_arity)?;
    check_coconnective_model(&m)?;
    let exact = e.has_zero_differential();
    let bd = bar_dual(&m, max_length, exact)?;
    dual_from_bar(bd, arity_bound)
}

/// Koszul dual of a minimal A-infinity algebra (the second step of a double dual).
pub fn koszul_dual_of_minimal<F: Scalar>(
    m: &AInfinityAlgebra<F>,
    max_length: usize,
    arity_bound: usize,
) -> Result<KoszulDual<F>> {
    let bd = bar_dual(m, max_length, false)?;
    dual_from_bar(bd, arity_bound)
}

fn check_coconnective_model<F: Scalar>(m: &AInfinityAlgebra<F>) -> Result<()> {
    if let Some(b) = m.basis.iter().find(|b| b.degree < 0) {
        return Err(Error::NotCoconnective(format!("cohomology class {} in degree {}", b.label, b.degree)));
    }
    if let Some(x) = (0..m.dim()).find(|&x| m.degree(x) == 0 && !m.is_unit(x)) {
        return Err(Error::NotSemisimple(format!("H^0 contains the radical class {}", m.label(x))));
    }
    Ok(())
}

/// Whether a graded dimension table is concentrated in `(-d, 0]`.
///
/// Returns the offending degrees. The table's certified window must contain
/// `[-d - 1, 1]`.
pub fn check_concentration(dims: &DimTable, window: Option<Window>, d: i64) -> Result<(bool, Vec<i64>)> {
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let window = match window {
        Some(w) if w.covers(-d - 1, 1) => w,
        Some(w) => {
            let show = |x: Option<i64>| x.map_or("*".to_string(), |v| v.to_string());
            return Err(Error::Uncertified(format!(
                "certified window [{}, {}] does not contain [{}, 1]",
                show(w.min),
                show(w.max),
                -d - 1
            )));
        }
        None => return Err(Error::Uncertified("no certified degree window".into())),
    };
    let offending: Vec<i64> =
        dims.iter().filter(|(&k, &n)| n > 0 && !(-d < k && k <= 0) && window.contains(k)).map(|(&k, _)| k).collect();
    Ok((offending.is_empty(), offending))
}

/// Block key used to align bases: (source, target, degree, weight).
type BlockKey = (usize, usize, i64, Option<usize>);

/// Looks for a diagonal rescaling matching the products of two minimal
/// algebras whose blocks are at most one-dimensional. Returns `None` if the
/// block dimensions differ or no consistent rescaling exists.
fn diagonal_alignment<F: Scalar>(x: &AInfinityAlgebra<F>, y: &AInfinityAlgebra<F>) -> std::result::Result<(), String> {
    let key = |a: &AInfinityAlgebra<F>, i: usize| -> BlockKey {
        let b = &a.basis[i];
        (b.source, b.target, b.degree, a.weight(i))
    };
    let mut xm: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    let mut ym: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    for i in 0..x.dim() {
        xm.entry(key(x, i)).or_default().push(i);
    }
    for i in 0..y.dim() {
        ym.entry(key(y, i)).or_default().push(i);
    }
    let dims = |m: &BTreeMap<BlockKey, Vec<usize>>| m.iter().map(|(k, v)| (*k, v.len())).collect::<BTreeMap<_, _>>();
    if dims(&xm) != dims(&ym) {
        return Err("block dimensions differ".into());
    }
    if xm.values().any(|v| v.len() > 1) {
        return Err("blocks of dimension > 1: only dimensions were compared".into());
    }
    let to_y: HashMap<usize, usize> = xm.iter().map(|(k, v)| (v[0], ym[k][0])).collect();
    // scaling factors lambda with y_{to_y(i)} = lambda_i x_i
    let mut lambda: Vec<Option<F>> = vec![None; x.dim()];
    for &u in &x.units {
        lambda[u] = Some(F::one());
    }
    // constraints x_i x_j = c x_k  and  y_i' y_j' = c' y_k'
    let mut constraints = Vec::new();
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            if !x.composable(i, j) {
                continue;
            }
            let px = x.m(&[i, j]);
            let py = y.m(&[to_y[&i], to_y[&j]]);
            let support_x: Vec<usize> = px.indices().collect();
            let support_y: Vec<usize> = py.indices().collect();
            let mapped: Vec<usize> = support_x.iter().map(|k| to_y[k]).collect();
            if mapped != support_y {
                return Err(format!("product of {} and {} differs in support", x.label(i), x.label(j)));
            }
            if let Some(&k) = support_x.first() {
                constraints.push((i, j, k, px.get(k), py.get(to_y[&k])));
            }
        }
    }
    // y_i y_j = c' y_k  <=>  lambda_i lambda_j c x_k = c' lambda_k x_k
    loop {
        let mut progress = false;
        for (i, j, k, c, c2) in &constraints {
            let (li, lj, lk) = (lambda[*i].clone(), lambda[*j].clone(), lambda[*k].clone());
            match (li, lj, lk) {
                (Some(a), Some(b), Some(z)) => {
                    if a * b * c.clone() != c2.clone() * z {
                        return Err(format!("no rescaling matches the product of {} and {}", x.label(*i), x.label(*j)));
                    }
                }
                (Some(a), Some(b), None) => {
                    lambda[*k] = (a * b * c.clone()).div(c2);
                    progress = true;
                }
                (Some(a), None, Some(z)) => {
                    lambda[*j] = (c2.clone() * z).div(&(a * c.clone()));
                    progress = true;
                }
                (None, Some(b), Some(z)) => {
                    lambda[*i] = (c2.clone() * z).div(&(b * c.clone()));
                    progress = true;
                }
                _ => {}
            }
        }
        if !progress {
            match lambda.iter().position(|l| l.is_none()) {
                Some(free) => lambda[free] = Some(F::one()),
                None => break,
            }
        }
    }
    Ok(())
}

/// Compares `H*((A^!)^!)` with `H*(A)` on the certified part: graded
/// dimensions per block and, when blocks are at most one-dimensional, the
/// products up to a diagonal change of basis.
pub fn double_dual_compare<F: Scalar>(a: &FinDimDgAlgebra<F>, max_length: usize, arity_bound: usize) -> Result<CheckReport> {
    let first = koszul_dual(a, max_length, arity_bound)?;
    let second = koszul_dual_of_minimal(&first.algebra, max_length, arity_bound)?;
    let h = AInfinityAlgebra::from_dg(&cohomology_algebra(a), 2);
    // the second dual is exact where its words avoid truncated letters of the first
    let cert = if first.certificate.complete {
        second.certificate
    } else {
        let w = first.certificate.max_weight.zip(second.certificate.max_weight).map(|(x, y)| x.min(y));
        if w.is_none() {
            return Err(Error::Uncertified(
                "the first dual is truncated and carries no weight bound; the double dual is not certified".into(),
            ));
        }
        Certificate { complete: false, degrees: None, max_weight: w }
    };
    let restrict = |m: &AInfinityAlgebra<F>| -> Result<AInfinityAlgebra<F>> {
        let keep: Vec<bool> = (0..m.dim()).map(|x| cert.contains(m.degree(x), m.weight(x))).collect();
        m.quotient(|x| keep[x])
    };
    let dd = restrict(&second.algebra)?;
    // weights of H*(A) compare with those of the double dual only when both exist
    let mut hh = restrict(&h)?;
    let mut ddw = dd.clone();
    if hh.weights.is_none() || ddw.weights.is_none() {
        hh.weights = None;
        ddw.weights = None;
    }
    let mut report = CheckReport::new("double_dual", Verdict::Holds)
        .with_dims("H*(A)", hh.graded_dims())
        .with_dims("H*(A^!^!)", ddw.graded_dims())
        .with_dims("H*(A^!)", first.graded_dims());
    if let Some(w) = first.window() {
        report = report.with_window("A^!", w);
    }
    if let Some(w) = cert.degree_window() {
        report = report.with_window("A^!^!", w);
    }
    if let Some(w) = cert.max_weight.filter(|_| !cert.complete) {
        report = report.with_note(format!("exact in weights <= {w}"));
    }
    match diagonal_alignment(&hh, &ddw) {
        Ok(()) => {}
        Err(msg) if msg.starts_with("blocks of dimension") => {
            report = report.with_note(msg);
        }
        Err(msg) => {
            report.verdict = Verdict::Fails;
            report.certificate = Some(msg);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::check_stasheff;
    use crate::exactlin::Q;
    use crate::presentations::{parse_presentation, realize_algebra, DegreeWindow};

    fn realize_q(text: &str, bound: usize) -> FinDimDgAlgebra<Q> {
        realize_algebra(&parse_presentation(text).unwrap(), DegreeWindow::UNBOUNDED, bound).unwrap()
    }

    #[test]
    fn semisimple_is_self_dual() {
        let a = FinDimDgAlgebra::<Q>::semisimple(vec!["1".into(), "2".into()]);
        let d = koszul_dual(&a, 4, 3).unwrap();
        assert_eq!(d.graded_dims(), BTreeMap::from([(0, 2)]));
        assert!(d.certificate.complete);
    }

    #[test]
    fn quadratic_monomial_dual_is_path_algebra() {
        let text = "vertices 1 2 3 4\n\
            arrow b1 : 2 -> 1 deg 0\narrow b2 : 3 -> 2 deg 0\narrow b3 : 4 -> 3 deg 0\n\
            relation b1*b2\nrelation b2*b3\n";
        let d = koszul_dual(&realize_q(text, 3), 5, 4).unwrap();
        assert_eq!(d.graded_dims(), BTreeMap::from([(0, 4), (1, 3), (2, 2), (3, 1)]));
        assert!(check_stasheff(&d.algebra).unwrap().holds());
    }

    #[test]
    fn dual_numbers_dual_is_polynomial() {
        let a = realize_q("vertices 1\narrow x : 1 -> 1 deg 0\nrelation x*x\n", 2);
        let d = koszul_dual(&a, 6, 3).unwrap();
        assert_eq!(d.window(), Some(Window::at_most(5)));
        // degrees <= 5 by the degree bound, degree 6 by the weight bound
        assert_eq!(d.graded_dims(), (0..=6).map(|k| (k, 1)).collect());
    }

    #[test]
    fn cubic_coconnective_dual_has_degree_minus_one() {
        let text = "vertices 1 2 3 4\narrow a1 : 1 -> 2 deg 1\narrow a2 : 2 -> 3 deg 1\narrow a3 : 3 -> 4 deg 1\nrelation a3*a2*a1\n";
        let d = koszul_dual_of_coconnective(&realize_q(text, 3), 4, 4).unwrap();
        assert!(d.certificate.complete);
        assert_eq!(d.graded_dims(), BTreeMap::from([(-1, 1), (0, 7)]));
        assert_eq!(d.block_dim(3, 0, -1), 1);
        let (ok, off) = check_concentration(&d.graded_dims(), d.window(), 1).unwrap();
        assert!(!ok);
        assert_eq!(off, vec![-1]);
    }

    #[test]
    fn a2_in_degree_one_has_dual_in_degree_zero() {
        let d = koszul_dual_of_coconnective(&realize_q("vertices 1 2\narrow a : 1 -> 2 deg 1\n", 2), 3, 3).unwrap();
        assert_eq!(d.graded_dims(), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn radical_in_degree_zero_is_not_semisimple() {
        let e = realize_q("vertices 1 2\narrow a : 1 -> 2 deg 0\n", 2);
        assert!(matches!(koszul_dual_of_coconnective(&e, 3, 3), Err(Error::NotSemisimple(_))));
    }

    #[test]
    fn concentration_is_monotone() {
        let dims = BTreeMap::from([(-2, 1), (0, 3)]);
        let w = Some(Window::ALL);
        assert!(!check_concentration(&dims, w, 1).unwrap().0);
        assert!(!check_concentration(&dims, w, 2).unwrap().0);
        assert!(check_concentration(&dims, w, 3).unwrap().0);
        assert!(check_concentration(&dims, Some(Window::new(0, 0)), 1).is_err());
    }

    #[test]
    fn double_duals() {
        for text in [
            "vertices 1 2 3\n",
            "vertices 1 2\narrow a : 1 -> 2 deg 0\n",
            "vertices 1 2 3\narrow a : 1 -> 2 deg 0\narrow b : 2 -> 3 deg 0\nrelation b*a\n",
            "vertices 1\narrow x : 1 -> 1 deg 0\nrelation x*x\n",
        ] {
            let r = double_dual_compare(&realize_q(text, 3), 5, 5).unwrap();
            assert!(r.holds(), "{text}: {r:?}");
            assert_eq!(r.dims["H*(A)"], r.dims["H*(A^!^!)"]);
        }
    }
}
