//! Tops, radicals and Loewy lengths of dg modules whose cohomology lies in
//! `(-d, 0]`.
//!
//! Everything happens on the cochain level. A module with top degree `c`
//! is first replaced by its truncation `τ^{≤c} M` (degree `c` cut down to the
//! cocycles), which is a submodule because `A` has no positive part. The
//! radical is then the honest kernel of the degreewise surjection onto the
//! semisimple top.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dgmod::{DgModule, ModElem, ModuleMap};
use crate::error::{Error, Result};
use crate::exactlin::{coordinates, extend_basis, LinComb, Matrix, Scalar};
use crate::presentations::FinDimDgAlgebra;
use crate::report::DimTable;

fn check_algebra<F: Scalar>(a: &FinDimDgAlgebra<F>) -> Result<()> {
    match a.max_degree() {
        Some(n) if n > 0 => Err(Error::NotConnective(format!("the algebra has basis elements in degree {n}"))),
        _ => Ok(()),
    }
}

fn check_window<F: Scalar>(m: &DgModule<F>, d: usize) -> Result<DimTable> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let dims = m.cohomology_dims();
    if let Some(k) = dims.keys().find(|&&k| k > 0 || k <= -(d as i64)) {
        return Err(Error::OutsideWindow(format!("H^{k} of the module is nonzero, outside ({}, 0]", -(d as i64))));
    }
    Ok(dims)
}

/// Degree-0 non-idempotent basis elements of `A`.
fn radical_generators<F: Scalar>(a: &FinDimDgAlgebra<F>) -> Vec<usize> {
    (0..a.dim()).filter(|&x| a.degree(x) == 0 && !a.is_idempotent(x)).collect()
}

fn dense<F: Scalar>(m: &DgModule<F>, x: &LinComb<F>) -> Vec<F> {
    x.to_dense(m.dim())
}

fn unit_vector<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    LinComb::basis(i).to_dense(n)
}

/// Cocycles and coboundaries of `M^n e_v`, as vectors of `M`.
fn cocycles_at<F: Scalar>(m: &DgModule<F>, n: i64, v: usize) -> Vec<Vec<F>> {
    let idx = m.at(n, v);
    let cols: Vec<Vec<F>> = idx.iter().map(|&x| dense(m, m.d_basis(x))).collect();
    let kernel = if cols.is_empty() { Vec::new() } else { Matrix::from_columns(m.dim(), &cols).kernel_basis() };
    kernel
        .iter()
        .map(|k| {
            let mut out = vec![F::zero(); m.dim()];
            for (c, &x) in k.iter().zip(&idx) {
                out[x] = c.clone();
            }
            out
        })
        .collect()
}

fn coboundaries_at<F: Scalar>(m: &DgModule<F>, n: i64, v: usize) -> Vec<Vec<F>> {
    let images: Vec<Vec<F>> = m.at(n - 1, v).iter().map(|&x| dense(m, m.d_basis(x))).collect();
    span(m.dim(), &images)
}

fn span<F: Scalar>(dim: usize, vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(dim, vectors).image_basis()
}

/// Part of `x` at vertex `v`.
fn at_vertex<F: Scalar>(m: &DgModule<F>, x: &[F], v: usize) -> Vec<F> {
    x.iter().enumerate().map(|(i, c)| if m.basis[i].vertex == v { c.clone() } else { F::zero() }).collect()
}

/// The submodule spanned by the given vectors, listed per degree and
/// vertex, with its inclusion. The spans must be closed under `d` and the action.
fn submodule<F: Scalar>(
    a: &FinDimDgAlgebra<F>,
    m: &DgModule<F>,
    spaces: &[(i64, usize, Vec<Vec<F>>)],
) -> Result<(DgModule<F>, ModuleMap<F>)> {
    let mut basis = Vec::new();
    let mut vectors: Vec<Vec<F>> = Vec::new();
    for (n, v, vs) in spaces {
        for (k, x) in vs.iter().enumerate() {
            basis.push(ModElem { label: format!("{}_{n}_{k}", a.vertices[*v]), degree: *n, vertex: *v });
            vectors.push(x.clone());
        }
    }
    let express = |x: &LinComb<F>| -> Result<LinComb<F>> {
        if x.is_zero() {
            return Ok(LinComb::zero());
        }
        coordinates(m.dim(), &vectors, &dense(m, x))
            .map(|c| LinComb::from_dense(&c))
            .ok_or_else(|| Error::InvalidModule("subspace is not a submodule".into()))
    };
    let lift: Vec<LinComb<F>> = vectors.iter().map(|x| LinComb::from_dense(x)).collect();
    let mut action = std::collections::HashMap::new();
    let mut diff = Vec::new();
    for (k, x) in lift.iter().enumerate() {
        diff.push(express(&m.d(x))?);
        for y in 0..a.dim() {
            let xy = m.act(x, &LinComb::basis(y));
            if !xy.is_zero() {
                action.insert((k, y), express(&xy)?);
            }
        }
    }
    Ok((DgModule::new(basis, action, diff), ModuleMap { degree: 0, images: lift }))
}

fn top_degree<F: Scalar>(m: &DgModule<F>, d: usize) -> Result<Option<i64>> {
    Ok(check_window(m, d)?.keys().next_back().copied())
}

/// `τ^{≤c} M`: everything below `c`, the cocycles in degree `c`.
fn truncate<F: Scalar>(a: &FinDimDgAlgebra<F>, m: &DgModule<F>, c: i64) -> Result<DgModule<F>> {
    let mut spaces = Vec::new();
    for n in m.min_degree().unwrap_or(c)..=c {
        for v in 0..a.num_vertices() {
            let vs = if n < c {
                m.at(n, v).iter().map(|&x| unit_vector(m.dim(), x)).collect()
            } else {
                cocycles_at(m, n, v)
            };
            if !vs.is_empty() {
                spaces.push((n, v, vs));
            }
        }
    }
    Ok(submodule(a, m, &spaces)?.0)
}

/// `B^c e_v + (Z^c A^0_+) e_v` inside a module concentrated in degrees `≤ c`.
fn radical_at<F: Scalar>(a: &FinDimDgAlgebra<F>, m: &DgModule<F>, c: i64, v: usize) -> Vec<Vec<F>> {
    let gens = radical_generators(a);
    let mut vs = coboundaries_at(m, c, v);
    for w in 0..a.num_vertices() {
        for z in cocycles_at(m, c, w) {
            let z = LinComb::from_dense(&z);
            for &y in &gens {
                let zy = m.act(&z, &LinComb::basis(y));
                if !zy.is_zero() {
                    vs.push(at_vertex(m, &dense(m, &zy), v));
                }
            }
        }
    }
    span(m.dim(), &vs)
}

/// The top of `M`: its degree, the semisimple module, the truncated model
/// of `M` and the degreewise surjection from the model.
#[derive(Clone, Debug)]
pub struct Top<F> {
    pub topd: i64,
    pub module: DgModule<F>,
    pub model: DgModule<F>,
    pub map: ModuleMap<F>,
    /// Vertex -> multiplicity, zeros omitted.
    pub multiplicities: BTreeMap<usize, usize>,
}

/// `None` when `M` is acyclic.
pub fn top<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<Option<Top<F>>> {
    check_algebra(a)?;
    let Some(c) = top_degree(m, d)? else { return Ok(None) };
    let model = truncate(a, m, c)?;
    let mut parts = Vec::new();
    let mut multiplicities = BTreeMap::new();
    let mut images = vec![LinComb::zero(); model.dim()];
    for v in 0..a.num_vertices() {
        let rad = radical_at(a, &model, c, v);
        let cocycles = cocycles_at(&model, c, v);
        let complement = extend_basis(model.dim(), &rad, &cocycles);
        if complement.is_empty() {
            continue;
        }
        let offset: usize = parts.iter().map(|p: &DgModule<F>| p.dim()).sum();
        let mut all = complement.clone();
        all.extend(rad.iter().cloned());
        for x in model.at(c, v) {
            let coords = coordinates(model.dim(), &all, &unit_vector(model.dim(), x))
                .ok_or_else(|| Error::InvalidModule("degree c of the truncation is not all cocycles".into()))?;
            images[x] = coords[..complement.len()].iter().cloned().enumerate().map(|(k, f)| (offset + k, f)).collect();
        }
        multiplicities.insert(v, complement.len());
        for _ in 0..complement.len() {
            parts.push(DgModule::simple(a, v).shift(-c));
        }
    }
    let module = DgModule::direct_sum(&parts.iter().collect::<Vec<_>>());
    Ok(Some(Top { topd: c, module, model, map: ModuleMap { degree: 0, images }, multiplicities }))
}

/// The kernel of the surjection onto the top (zero for acyclic `M`).
pub fn rad<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<DgModule<F>> {
    check_algebra(a)?;
    let Some(c) = top_degree(m, d)? else { return Ok(DgModule::zero()) };
    let model = truncate(a, m, c)?;
    let mut spaces = Vec::new();
    for n in model.min_degree().unwrap_or(c)..=c {
        for v in 0..a.num_vertices() {
            let vs = if n < c {
                model.at(n, v).iter().map(|&x| unit_vector(model.dim(), x)).collect()
            } else {
                radical_at(a, &model, c, v)
            };
            if !vs.is_empty() {
                spaces.push((n, v, vs));
            }
        }
    }
    Ok(submodule(a, &model, &spaces)?.0)
}

/// `M, rad M, rad^2 M, ...`, stopping before the first acyclic term.
pub fn radical_tower<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<Vec<DgModule<F>>> {
    let mut tower = Vec::new();
    let mut cur = m.clone();
    let limit = m.dim() + 1;
    while cur.total_cohomology() > 0 {
        if tower.len() > limit {
            return Err(Error::InvalidModule("radical tower does not terminate".into()));
        }
        let next = rad(&cur, a, d)?;
        tower.push(cur);
        cur = next;
    }
    Ok(tower)
}

/// Number of radical steps until the module becomes acyclic.
pub fn big_loewy<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<usize> {
    Ok(radical_tower(m, a, d)?.len())
}

/// Loewy length of `H^n(M)` as a module over `H^0(A)`.
pub fn heart_loewy<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, n: i64) -> usize {
    let gens = radical_generators(a);
    let dim = m.dim();
    let mut bounds = Vec::new();
    let mut layer = Vec::new();
    for v in 0..a.num_vertices() {
        bounds.extend(coboundaries_at(m, n, v));
        layer.extend(cocycles_at(m, n, v));
    }
    let bounds = span(dim, &bounds);
    let mut length = 0;
    loop {
        if layer.iter().all(|x| crate::exactlin::in_span(dim, &bounds, x)) {
            return length;
        }
        length += 1;
        let mut next = bounds.clone();
        for x in &layer {
            let x = LinComb::from_dense(x);
            for &y in &gens {
                next.push(dense(m, &m.act(&x, &LinComb::basis(y))));
            }
        }
        layer = span(dim, &next);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerClause {
    /// The maximal Loewy length of a cohomology module.
    Heart,
    /// `⌈BigLoewy / d⌉`.
    Ceiling,
}

/// Loewy data of one module.
#[derive(Clone, Debug, Serialize)]
pub struct LoewyProfile {
    pub topd: Option<i64>,
    /// Vertex label -> multiplicity in the top.
    pub top: BTreeMap<String, usize>,
    /// Cohomology dimensions of `rad^n M`, one table per step.
    pub tower: Vec<DimTable>,
    /// Loewy length of each nonzero cohomology module.
    pub heart: BTreeMap<i64, usize>,
    pub big_loewy: usize,
    pub loewy_lower: usize,
    pub loewy_upper: usize,
    pub lower_clause: LowerClause,
}

/// Bounds `lower <= Loewy(M) <= upper`.
pub fn loewy_bounds<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<(usize, usize)> {
    let p = loewy_profile(m, a, d)?;
    Ok((p.loewy_lower, p.loewy_upper))
}

pub fn loewy_profile<F: Scalar>(m: &DgModule<F>, a: &FinDimDgAlgebra<F>, d: usize) -> Result<LoewyProfile> {
    check_algebra(a)?;
    let dims = check_window(m, d)?;
    let t = top(m, a, d)?;
    let tower = radical_tower(m, a, d)?;
    let big = tower.len();
    let heart: BTreeMap<i64, usize> = dims.keys().map(|&n| (n, heart_loewy(m, a, n))).collect();
    if big != heart.values().sum::<usize>() {
        return Err(Error::InvalidModule(format!(
            "radical tower of length {big} disagrees with the cohomology Loewy lengths {heart:?}"
        )));
    }
    let by_heart = heart.values().copied().max().unwrap_or(0);
    let by_ceiling = big.div_ceil(d);
    let (lower, clause) =
        if by_ceiling > by_heart { (by_ceiling, LowerClause::Ceiling) } else { (by_heart, LowerClause::Heart) };
    Ok(LoewyProfile {
        topd: t.as_ref().map(|t| t.topd),
        top: t
            .map(|t| t.multiplicities.iter().map(|(&v, &k)| (a.vertices[v].clone(), k)).collect())
            .unwrap_or_default(),
        tower: tower.iter().map(|x| x.cohomology_dims()).collect(),
        heart,
        big_loewy: big,
        loewy_lower: lower,
        loewy_upper: big,
        lower_clause: clause,
    })
}

/// Upper bound `d * b` for the height of `fd(A)^{(-d,0]}`, with `b` the
/// nilpotency index of the radical of `H^0(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeightBound {
    pub bound: usize,
    pub nilpotency: usize,
    pub finite: bool,
}

pub fn height_report<F: Scalar>(a: &FinDimDgAlgebra<F>, d: usize) -> Result<HeightBound> {
    check_algebra(a)?;
    let reg = DgModule::regular(a);
    check_window(&reg, d)?;
    let b = heart_loewy(&reg, a, 0);
    Ok(HeightBound { bound: d * b, nilpotency: b, finite: true })
}
