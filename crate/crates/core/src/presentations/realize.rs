use std::collections::HashMap;

use num_rational::BigRational;

use super::algebra::{BasisElement, FinDimDgAlgebra};
use super::parser::{DgAlgebraPresentation, PathPoly};
use super::quiver::{GradedQuiver, Path};
use super::rewriting::{Poly, RewriteSystem};
use crate::error::{Error, Result};
use crate::exactlin::{LinComb, Scalar};

/// Image of a rational in `F`, failing when the denominator vanishes there.
pub fn rational_into<F: Scalar>(q: &BigRational) -> Result<F> {
    F::from_ratio(q.numer(), q.denom())
        .ok_or_else(|| Error::UnsupportedField(format!("coefficient {q} is not defined over {}", F::field())))
}

pub fn path_poly_into<F: Scalar>(p: &PathPoly) -> Result<Poly<F>> {
    let mut terms = Vec::with_capacity(p.len());
    for (c, path) in p {
        terms.push((rational_into::<F>(c)?, path.clone()));
    }
    Ok(Poly::from_terms(terms))
}

/// Inclusive range of allowed basis degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub min: i64,
    pub max: i64,
}

impl DegreeWindow {
    pub const UNBOUNDED: DegreeWindow = DegreeWindow { min: i64::MIN, max: i64::MAX };

    pub fn new(min: i64, max: i64) -> Self {
        DegreeWindow { min, max }
    }

    pub fn contains(&self, d: i64) -> bool {
        self.min <= d && d <= self.max
    }
}

/// Realization of a presented dg algebra together with the data used to build it.
#[derive(Clone, Debug)]
pub struct Realization<F> {
    pub algebra: FinDimDgAlgebra<F>,
    /// The reduced path behind each basis vector.
    pub paths: Vec<Path>,
    pub rewriting: RewriteSystem<F>,
}

impl<F: Scalar> Realization<F> {
    /// Reduces a path polynomial to coordinates in the path basis.
    pub fn element(&self, p: &PathPoly) -> Result<LinComb<F>> {
        let nf = self.rewriting.normal_form(&path_poly_into::<F>(p)?);
        nf.terms()
            .map(|(q, c)| {
                let i = self.paths.iter().position(|b| b == q).ok_or_else(|| {
                    Error::OutsideWindow("path is not in the realized basis".into())
                })?;
                Ok((i, c.clone()))
            })
            .collect()
    }
}

pub fn realize_algebra<F: Scalar>(
    pres: &DgAlgebraPresentation,
    window: DegreeWindow,
    path_length_bound: usize,
) -> Result<FinDimDgAlgebra<F>> {
    realize(pres, window, path_length_bound).map(|r| r.algebra)
}

pub fn realize<F: Scalar>(
    pres: &DgAlgebraPresentation,
    window: DegreeWindow,
    path_length_bound: usize,
) -> Result<Realization<F>> {
    if pres.field != F::field() {
        return Err(Error::UnsupportedField(format!(
            "presentation is over {} but the computation runs over {}",
            pres.field,
            F::field()
        )));
    }
    let quiver = &pres.quiver;
    let relations = pres.relations.iter().map(path_poly_into::<F>).collect::<Result<Vec<_>>>()?;
    let sys = RewriteSystem::complete(quiver, relations, path_length_bound)?;

    let paths = reduced_paths(quiver, &sys, path_length_bound)?;
    for p in &paths {
        let deg = quiver.path_degree(p);
        if !window.contains(deg) {
            return Err(Error::NotFinite(format!(
                "basis path {} has degree {deg}, outside [{}, {}]",
                quiver.path_label(p),
                window.min,
                window.max
            )));
        }
    }
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let to_lincomb = |poly: &Poly<F>| -> LinComb<F> {
        poly.terms().map(|(p, c)| (*index.get(p).expect("normal forms are basis paths"), c.clone())).collect()
    };

    let basis: Vec<BasisElement> = paths
        .iter()
        .map(|p| BasisElement {
            label: quiver.path_label(p),
            degree: quiver.path_degree(p),
            source: p.source,
            target: p.target,
        })
        .collect();

    let mut mult = HashMap::new();
    for (i, x) in paths.iter().enumerate() {
        for (j, y) in paths.iter().enumerate() {
            if let Some(xy) = x.compose(y) {
                let nf = sys.normal_form(&Poly::monomial(xy));
                if !nf.is_zero() {
                    mult.insert((i, j), to_lincomb(&nf));
                }
            }
        }
    }

    let mut arrow_d: Vec<Poly<F>> = vec![Poly::zero(); quiver.arrows.len()];
    for (a, value) in &pres.differentials {
        arrow_d[*a] = path_poly_into::<F>(value)?;
    }
    let d_path = |p: &Path| -> Poly<F> { leibniz(quiver, &arrow_d, p) };

    // d must preserve the ideal: d(rule) reduces to zero
    for rule in &sys.rules {
        let mut image = d_path(&rule.lhs);
        for (q, c) in rule.rhs.terms() {
            image.add_scaled(&d_path(q), &-c.clone());
        }
        let r = sys.normal_form(&image);
        if !r.is_zero() {
            return Err(Error::InvalidAlgebra(format!(
                "d of relation with leading path {} is not in the ideal: {}",
                quiver.path_label(&rule.lhs),
                r.render(quiver)
            )));
        }
    }
    let diff: Vec<LinComb<F>> = paths.iter().map(|p| to_lincomb(&sys.normal_form(&d_path(p)))).collect();

    let idempotents = (0..quiver.vertices.len())
        .map(|v| *index.get(&Path::trivial(v)).expect("trivial paths are reduced"))
        .collect();
    let mut algebra = FinDimDgAlgebra::from_tables(quiver.vertices.clone(), basis, idempotents, mult, diff);
    let d_keeps_length =
        arrow_d.iter().all(|d| d.terms().all(|(p, _)| p.len() == 1));
    if sys.length_homogeneous() && d_keeps_length {
        algebra = algebra.with_weights(paths.iter().map(|p| p.len()).collect());
    }
    algebra.validate()?;
    Ok(Realization { algebra, paths, rewriting: sys })
}

/// d(a_k ... a_1) = sum_j (-1)^{|a_k| + ... + |a_{j+1}|} a_k ... d(a_j) ... a_1.
fn leibniz<F: Scalar>(quiver: &GradedQuiver, arrow_d: &[Poly<F>], p: &Path) -> Poly<F> {
    let mut out = Poly::zero();
    let mut sign_exp = 0i64;
    for (pos, &a) in p.arrows.iter().enumerate() {
        for (q, c) in arrow_d[a].terms() {
            let mut arrows = p.arrows[..pos].to_vec();
            arrows.extend_from_slice(&q.arrows);
            arrows.extend_from_slice(&p.arrows[pos + 1..]);
            out.add_term(Path { source: p.source, target: p.target, arrows }, c.clone() * F::sign(sign_exp));
        }
        sign_exp += quiver.arrows[a].degree;
    }
    out
}

/// Reduced paths ordered by vertex idempotents first, then by length and arrow sequence.
fn reduced_paths<F: Scalar>(quiver: &GradedQuiver, sys: &RewriteSystem<F>, bound: usize) -> Result<Vec<Path>> {
    let mut all: Vec<Path> = (0..quiver.vertices.len()).map(Path::trivial).collect();
    let mut layer = all.clone();
    for len in 1..=bound + 1 {
        let mut next = Vec::new();
        for p in &layer {
            for (a, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.source != p.target {
                    continue;
                }
                let mut arrows = vec![a];
                arrows.extend_from_slice(&p.arrows);
                let q = Path { source: p.source, target: arrow.target, arrows };
                if sys.is_reduced(&q) {
                    next.push(q);
                }
            }
        }
        if len == bound + 1 {
            if let Some(q) = next.first() {
                return Err(Error::NotFinite(format!(
                    "reduced path {} is longer than the bound {bound}",
                    quiver.path_label(q)
                )));
            }
        } else {
            next.sort_by(|x, y| x.order_key().cmp(&y.order_key()).then(x.source.cmp(&y.source)));
            all.extend(next.iter().cloned());
        }
        layer = next;
    }
    Ok(all)
}
