use std::collections::{BTreeMap, HashMap};

use super::module::{DgModule, ModElem, ModuleMap};
use crate::error::{Error, Result};
use crate::exactlin::{coordinates, extend_basis, LinComb, Matrix, Scalar};
use crate::presentations::FinDimDgAlgebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: i64,
    pub vertex: usize,
}

/// A minimal semifree resolution `P -> M`, built from the top degree down.
///
/// `P` is free on the generators `g_j = g_j e_{v_j}`; its basis consists of
/// the products `g_j · a` with `a` a basis vector of `A` ending at `v_j`.
/// Only generators of degree at least `lowest_degree` are constructed; the
/// cone of the augmentation is acyclic in degrees `>= lowest_degree`.
#[derive(Clone, Debug)]
pub struct SemifreeResolution<F> {
    pub generators: Vec<Generator>,
    pub module: DgModule<F>,
    /// For each basis vector of `P`, its generator and algebra basis vector.
    pub basis_gen: Vec<(usize, usize)>,
    /// Basis index of `g_j` itself.
    pub gen_basis: Vec<usize>,
    pub augmentation: ModuleMap<F>,
    pub lowest_degree: i64,
}

struct Builder<'a, F> {
    a: &'a FinDimDgAlgebra<F>,
    gens: Vec<Generator>,
    basis: Vec<ModElem>,
    basis_gen: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    gen_basis: Vec<usize>,
    /// d(g_j) in P
    dgen: Vec<LinComb<F>>,
    /// epsilon(g_j) in M
    phi: Vec<LinComb<F>>,
}

impl<'a, F: Scalar> Builder<'a, F> {
    fn add_generator(&mut self, degree: i64, vertex: usize, d: LinComb<F>, phi: LinComb<F>) {
        let j = self.gens.len();
        self.gens.push(Generator { degree, vertex });
        self.dgen.push(d);
        self.phi.push(phi);
        for y in 0..self.a.dim() {
            let b = &self.a.basis[y];
            if b.target != vertex {
                continue;
            }
            let label = if self.a.is_idempotent(y) { format!("g{j}") } else { format!("g{j}·{}", b.label) };
            self.index.insert((j, y), self.basis.len());
            if self.a.is_idempotent(y) {
                self.gen_basis.push(self.basis.len());
            }
            self.basis.push(ModElem { label, degree: degree + b.degree, vertex: b.source });
            self.basis_gen.push((j, y));
        }
    }

    /// `x · a` in P.
    fn act(&self, x: &LinComb<F>, y: usize) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (i, c) in x.iter() {
            let (j, b) = self.basis_gen[i];
            if let Some(v) = self.a.mul_basis_ref(b, y) {
                for (z, e) in v.iter() {
                    out.add_term(self.index[&(j, z)], c.clone() * e.clone());
                }
            }
        }
        out
    }

    /// d(g_j · a) = d(g_j) · a + (-1)^{|g_j|} g_j · d(a)
    fn d_basis(&self, i: usize) -> LinComb<F> {
        let (j, y) = self.basis_gen[i];
        let mut out = self.act(&self.dgen[j], y);
        for (z, c) in self.a.d_basis(y).iter() {
            out.add_term(self.index[&(j, z)], c.clone() * F::sign(self.gens[j].degree));
        }
        out
    }

    fn eps_basis(&self, m: &DgModule<F>, i: usize) -> LinComb<F> {
        let (j, y) = self.basis_gen[i];
        m.act(&self.phi[j], &LinComb::basis(y))
    }

    fn at(&self, n: i64, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].degree == n && self.basis[i].vertex == v).collect()
    }
}

/// Coordinates of the cone `C = M ⊕ P[1]` in degree `n` at a vertex:
/// `M^n e_v` followed by `P^{n+1} e_v`.
struct ConeDegree {
    m_idx: Vec<usize>,
    p_idx: Vec<usize>,
}

impl ConeDegree {
    fn new<F: Scalar>(b: &Builder<F>, m: &DgModule<F>, n: i64, v: usize) -> Self {
        ConeDegree { m_idx: m.at(n, v), p_idx: b.at(n + 1, v) }
    }

    fn dim(&self) -> usize {
        self.m_idx.len() + self.p_idx.len()
    }
}

/// Matrix of `d_C(m, p) = (d m + eps p, -d p)` from degree `n` to `n + 1`.
fn cone_d<F: Scalar>(b: &Builder<F>, m: &DgModule<F>, src: &ConeDegree, tgt: &ConeDegree) -> Matrix<F> {
    let mpos: HashMap<usize, usize> = tgt.m_idx.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let ppos: HashMap<usize, usize> = tgt.p_idx.iter().enumerate().map(|(k, &x)| (x, k + tgt.m_idx.len())).collect();
    let mut mat = Matrix::zeros(tgt.dim(), src.dim());
    for (k, &x) in src.m_idx.iter().enumerate() {
        for (z, c) in m.d_basis(x).iter() {
            mat.set(mpos[&z], k, c.clone());
        }
    }
    let off = src.m_idx.len();
    for (k, &x) in src.p_idx.iter().enumerate() {
        for (z, c) in b.eps_basis(m, x).iter() {
            let r = mpos[&z];
            let cur = mat.get(r, off + k).clone();
            mat.set(r, off + k, cur + c.clone());
        }
        for (z, c) in b.d_basis(x).iter() {
            mat.set(ppos[&z], off + k, -c.clone());
        }
    }
    mat
}

/// Builds a minimal semifree resolution of `m` with generators down to degree `lowest_degree`.
///
/// The algebra must be concentrated in nonpositive degrees so that
/// generators can be added degree by degree from the top.
pub fn semifree_resolution<F: Scalar>(
    m: &DgModule<F>,
    a: &FinDimDgAlgebra<F>,
    lowest_degree: i64,
) -> Result<SemifreeResolution<F>> {
    if a.max_degree().is_some_and(|d| d > 0) {
        return Err(Error::NotConnective("resolutions need an algebra in nonpositive degrees".into()));
    }
    m.validate(a)?;
    let mut b = Builder {
        a,
        gens: Vec::new(),
        basis: Vec::new(),
        basis_gen: Vec::new(),
        index: HashMap::new(),
        gen_basis: Vec::new(),
        dgen: Vec::new(),
        phi: Vec::new(),
    };
    let nv = a.num_vertices();
    // degree-0 radical elements, which act on cocycles of the cone
    let rad0: Vec<usize> = (0..a.dim()).filter(|&y| a.degree(y) == 0 && !a.is_idempotent(y)).collect();
    let top = m.max_degree().unwrap_or(lowest_degree);
    let mut n = top;
    while n >= lowest_degree {
        let degs: Vec<(ConeDegree, ConeDegree, ConeDegree)> = (0..nv)
            .map(|v| (ConeDegree::new(&b, m, n - 1, v), ConeDegree::new(&b, m, n, v), ConeDegree::new(&b, m, n + 1, v)))
            .collect();
        let cocycles: Vec<Vec<Vec<F>>> =
            degs.iter().map(|(_, cur, next)| cone_d(&b, m, cur, next).kernel_basis()).collect();
        let mut new_gens = Vec::new();
        for v in 0..nv {
            let (prev, cur, _) = &degs[v];
            let dim = cur.dim();
            let mut span = cone_d(&b, m, prev, cur).image_basis();
            // cocycles at other vertices pushed here by degree-0 radical elements
            for &y in &rad0 {
                let yb = &a.basis[y];
                if yb.source != v {
                    continue;
                }
                let w = yb.target;
                let (_, wcur, _) = &degs[w];
                let mpos: HashMap<usize, usize> = cur.m_idx.iter().enumerate().map(|(k, &x)| (x, k)).collect();
                let ppos: HashMap<usize, usize> =
                    cur.p_idx.iter().enumerate().map(|(k, &x)| (x, k + cur.m_idx.len())).collect();
                for z in &cocycles[w] {
                    let mut out = vec![F::zero(); dim];
                    let mpart: LinComb<F> = wcur.m_idx.iter().zip(z).map(|(&x, c)| (x, c.clone())).collect();
                    let ppart: LinComb<F> = wcur.p_idx.iter().zip(&z[wcur.m_idx.len()..]).map(|(&x, c)| (x, c.clone())).collect();
                    for (i, c) in m.act(&mpart, &LinComb::basis(y)).iter() {
                        out[mpos[&i]] = c.clone();
                    }
                    for (i, c) in b.act(&ppart, y).iter() {
                        out[ppos[&i]] = c.clone();
                    }
                    span.push(out);
                }
            }
            for z in extend_basis(dim, &span, &cocycles[v]) {
                let phi: LinComb<F> = cur.m_idx.iter().zip(&z).map(|(&x, c)| (x, c.clone())).collect();
                let p: LinComb<F> = cur.p_idx.iter().zip(&z[cur.m_idx.len()..]).map(|(&x, c)| (x, -c.clone())).collect();
                new_gens.push((v, p, phi));
            }
        }
        for (v, d, phi) in new_gens {
            b.add_generator(n, v, d, phi);
        }
        n -= 1;
    }
    // certify: the cone is acyclic in degrees >= lowest_degree
    for n in lowest_degree..=top + 1 {
        for v in 0..nv {
            let (prev, cur, next) =
                (ConeDegree::new(&b, m, n - 1, v), ConeDegree::new(&b, m, n, v), ConeDegree::new(&b, m, n + 1, v));
            let z = cur.dim() - cone_d(&b, m, &cur, &next).rank();
            let bd = cone_d(&b, m, &prev, &cur).rank();
            if z != bd {
                return Err(Error::Uncertified(format!("augmentation cone has cohomology in degree {n}")));
            }
        }
    }
    let diff: Vec<LinComb<F>> = (0..b.basis.len()).map(|i| b.d_basis(i)).collect();
    let mut action = HashMap::new();
    for i in 0..b.basis.len() {
        for y in 0..a.dim() {
            let v = b.act(&LinComb::basis(i), y);
            if !v.is_zero() {
                action.insert((i, y), v);
            }
        }
    }
    let eps: Vec<LinComb<F>> = (0..b.basis.len()).map(|i| b.eps_basis(m, i)).collect();
    let module = DgModule::new(b.basis, action, diff);
    Ok(SemifreeResolution {
        generators: b.gens,
        module,
        basis_gen: b.basis_gen,
        gen_basis: b.gen_basis,
        augmentation: ModuleMap { degree: 0, images: eps },
        lowest_degree,
    })
}

impl<F: Scalar> SemifreeResolution<F> {
    /// Number of generators per degree.
    pub fn generator_counts(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.degree).or_insert(0) += 1;
        }
        out
    }

    /// `d(g_j)` as a combination of `g_i · a`.
    pub fn d_generator(&self, j: usize) -> &LinComb<F> {
        self.module.d_basis(self.gen_basis[j])
    }
}

/// A map of degree `k` from a resolution to a module, determined by its
/// values on generators.
pub type GenMap<F> = Vec<LinComb<F>>;

/// Extends a map on generators A-linearly: `f(g_j · a) = f(g_j) · a`.
pub fn extend_on<F: Scalar>(res: &SemifreeResolution<F>, target: &DgModule<F>, f: &GenMap<F>, x: &LinComb<F>) -> LinComb<F> {
    let mut out = LinComb::zero();
    for (i, c) in x.iter() {
        let (j, y) = res.basis_gen[i];
        out.add_scaled(&target.act(&f[j], &LinComb::basis(y)), c);
    }
    out
}

/// `Hom_A(P, N)` for a resolution `P` of `M`.
pub struct HomComplex<'a, F> {
    pub res: &'a SemifreeResolution<F>,
    pub target: &'a DgModule<F>,
}

impl<'a, F: Scalar> HomComplex<'a, F> {
    pub fn new(res: &'a SemifreeResolution<F>, target: &'a DgModule<F>) -> Self {
        HomComplex { res, target }
    }

    /// Basis of degree-`k` maps: (generator, target basis vector) pairs.
    pub fn basis(&self, k: i64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, g) in self.res.generators.iter().enumerate() {
            for y in self.target.at(g.degree + k, g.vertex) {
                out.push((j, y));
            }
        }
        out
    }

    pub fn to_map(&self, k: i64, v: &[F]) -> GenMap<F> {
        let mut f = vec![LinComb::zero(); self.res.generators.len()];
        for ((j, y), c) in self.basis(k).into_iter().zip(v) {
            f[j].add_term(y, c.clone());
        }
        f
    }

    pub fn to_vector(&self, k: i64, f: &GenMap<F>) -> Vec<F> {
        self.basis(k).into_iter().map(|(j, y)| f[j].get(y)).collect()
    }

    /// `(δf)(g) = d(f(g)) - (-1)^k f(d g)`.
    pub fn delta(&self, k: i64, f: &GenMap<F>) -> GenMap<F> {
        (0..self.res.generators.len())
            .map(|j| {
                let mut out = self.target.d(&f[j]);
                let fdg = extend_on(self.res, self.target, f, self.res.d_generator(j));
                out.add_scaled(&fdg, &-F::sign(k));
                out
            })
            .collect()
    }

    pub fn delta_matrix(&self, k: i64) -> Matrix<F> {
        let src = self.basis(k);
        let cols: Vec<Vec<F>> = (0..src.len())
            .map(|c| {
                let mut e = vec![F::zero(); src.len()];
                e[c] = F::one();
                self.to_vector(k + 1, &self.delta(k, &self.to_map(k, &e)))
            })
            .collect();
        Matrix::from_columns(self.basis(k + 1).len(), &cols)
    }

    /// Cocycle representatives of a basis of `H^k`, and a basis of the coboundaries.
    pub fn cohomology(&self, k: i64) -> (Vec<Vec<F>>, Vec<Vec<F>>) {
        let dim = self.basis(k).len();
        let z = self.delta_matrix(k).kernel_basis();
        let b = self.delta_matrix(k - 1).image_basis();
        let reps = extend_basis(dim, &b, &z);
        (reps, b)
    }
}

/// `Ext^k_A(M, N)` for `k` in a certified window, with cocycle representatives.
pub struct ExtGroups<'a, F> {
    pub hom: HomComplex<'a, F>,
    pub window: (i64, i64),
    pub reps: BTreeMap<i64, Vec<Vec<F>>>,
    boundaries: BTreeMap<i64, Vec<Vec<F>>>,
}

impl<'a, F: Scalar> ExtGroups<'a, F> {
    /// Computes `Ext^k` for `k <= max_k`. The resolution must reach low
    /// enough: `max_k <= min deg N - lowest_degree - 1`.
    pub fn new(res: &'a SemifreeResolution<F>, target: &'a DgModule<F>, max_k: i64) -> Result<Self> {
        let (Some(lo_n), Some(hi_n)) = (target.min_degree(), target.max_degree()) else {
            return Ok(ExtGroups { hom: HomComplex::new(res, target), window: (0, max_k), reps: BTreeMap::new(), boundaries: BTreeMap::new() });
        };
        let certified = lo_n - res.lowest_degree - 1;
        if max_k > certified {
            return Err(Error::Uncertified(format!(
                "Ext^{max_k} needs generators below degree {}; resolution stops at {}",
                lo_n - max_k,
                res.lowest_degree
            )));
        }
        let top_gen = res.generators.iter().map(|g| g.degree).max().unwrap_or(0);
        let min_k = lo_n - top_gen;
        let hom = HomComplex::new(res, target);
        let mut reps = BTreeMap::new();
        let mut boundaries = BTreeMap::new();
        for k in min_k..=max_k {
            let (r, b) = hom.cohomology(k);
            reps.insert(k, r);
            boundaries.insert(k, b);
        }
        let _ = hi_n;
        Ok(ExtGroups { hom, window: (min_k, max_k), reps, boundaries })
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.reps.iter().filter(|(_, r)| !r.is_empty()).map(|(&k, r)| (k, r.len())).collect()
    }

    pub fn dim(&self, k: i64) -> usize {
        self.reps.get(&k).map_or(0, |r| r.len())
    }

    pub fn rep_map(&self, k: i64, i: usize) -> GenMap<F> {
        self.hom.to_map(k, &self.reps[&k][i])
    }

    /// Coordinates of the class of a cocycle in the chosen basis of `Ext^k`.
    pub fn class_of(&self, k: i64, f: &GenMap<F>) -> Option<Vec<F>> {
        let v = self.hom.to_vector(k, f);
        let b = self.boundaries.get(&k)?;
        let reps = &self.reps[&k];
        let mut all = reps.clone();
        all.extend(b.iter().cloned());
        let c = coordinates(v.len(), &all, &v)?;
        Some(c[..reps.len()].to_vec())
    }
}

/// Lifts a degree-`j` cocycle `beta: P_L -> M` to a chain map
/// `P_L -> P_M` of degree `j` over the augmentation of `P_M`.
pub fn lift<F: Scalar>(
    beta: &GenMap<F>,
    j: i64,
    res_l: &SemifreeResolution<F>,
    res_m: &SemifreeResolution<F>,
    m: &DgModule<F>,
) -> Result<GenMap<F>> {
    let pm = &res_m.module;
    let mut lifted: GenMap<F> = Vec::with_capacity(res_l.generators.len());
    for (gi, g) in res_l.generators.iter().enumerate() {
        // r = (-1)^j lifted(d g)
        let dg = res_l.d_generator(gi);
        let mut r = LinComb::zero();
        for (i, c) in dg.iter() {
            let (jj, y) = res_l.basis_gen[i];
            r.add_scaled(&pm.act(&lifted[jj], &LinComb::basis(y)), &(c.clone() * F::sign(j)));
        }
        let deg = g.degree + j;
        let unknowns = pm.at(deg, g.vertex);
        let rows_p = pm.at(deg + 1, g.vertex);
        let rows_m = m.at(deg, g.vertex);
        let ppos: HashMap<usize, usize> = rows_p.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let mpos: HashMap<usize, usize> = rows_m.iter().enumerate().map(|(k, &x)| (x, k + rows_p.len())).collect();
        let nrows = rows_p.len() + rows_m.len();
        let mut mat = Matrix::zeros(nrows, unknowns.len());
        for (k, &x) in unknowns.iter().enumerate() {
            for (z, c) in pm.d_basis(x).iter() {
                mat.set(ppos[&z], k, c.clone());
            }
            for (z, c) in res_m.augmentation.images[x].iter() {
                mat.set(mpos[&z], k, c.clone());
            }
        }
        let mut rhs = vec![F::zero(); nrows];
        for (z, c) in r.iter() {
            match ppos.get(&z) {
                Some(&p) => rhs[p] = c.clone(),
                None => return Err(Error::Uncertified("lift leaves the truncated resolution".into())),
            }
        }
        for (z, c) in beta[gi].iter() {
            rhs[mpos[&z]] = c.clone();
        }
        let sol = mat
            .solve(&rhs)?
            .ok_or_else(|| Error::Uncertified("no lift within the truncated resolution".into()))?;
        lifted.push(unknowns.iter().zip(sol).map(|(&x, c)| (x, c)).collect());
    }
    Ok(lifted)
}

/// Yoneda composite `alpha ∘ beta` of `alpha: P_M -> N` (degree i) and
/// `beta: P_L -> M` (degree j), as a degree `i + j` map `P_L -> N`.
pub fn yoneda<F: Scalar>(
    alpha: &GenMap<F>,
    beta: &GenMap<F>,
    j: i64,
    res_l: &SemifreeResolution<F>,
    res_m: &SemifreeResolution<F>,
    m: &DgModule<F>,
    n: &DgModule<F>,
) -> Result<GenMap<F>> {
    let lifted = lift(beta, j, res_l, res_m, m)?;
    Ok(lifted.iter().map(|x| extend_on(res_m, n, alpha, x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Q;
    use num_traits::Zero;
    use crate::presentations::{parse_presentation, realize_algebra, DegreeWindow};

    fn realize_q(text: &str, bound: usize) -> FinDimDgAlgebra<Q> {
        realize_algebra(&parse_presentation(text).unwrap(), DegreeWindow::UNBOUNDED, bound).unwrap()
    }

    #[test]
    fn free_module_resolves_itself() {
        let a = realize_q("vertices 1 2\narrow a : 1 -> 2 deg 0\n", 2);
        let p = DgModule::projective(&a, 1);
        let r = semifree_resolution(&p, &a, -3).unwrap();
        assert_eq!(r.generators.len(), 1);
        r.module.validate(&a).unwrap();
    }

    #[test]
    fn dual_numbers_resolution_is_periodic() {
        let a = realize_q("vertices 1\narrow x : 1 -> 1 deg 0\nrelation x*x\n", 2);
        let s = DgModule::simple(&a, 0);
        let r = semifree_resolution(&s, &a, -5).unwrap();
        assert_eq!(r.generator_counts(), (-5..=0).map(|d| (d, 1)).collect());
        let ext = ExtGroups::new(&r, &s, 4).unwrap();
        assert_eq!(ext.dims(), (0..=4).map(|d| (d, 1)).collect());
    }

    #[test]
    fn cubic_relation_resolution_follows_the_overlaps() {
        // S4 over kA4/(a3 a2 a1): P4 <- P3 <- P1
        let text = "vertices 1 2 3 4\narrow a1 : 1 -> 2 deg 0\narrow a2 : 2 -> 3 deg 0\narrow a3 : 3 -> 4 deg 0\nrelation a3*a2*a1\n";
        let a = realize_q(text, 3);
        let s4 = DgModule::simple(&a, 3);
        let r = semifree_resolution(&s4, &a, -4).unwrap();
        let gens: Vec<(i64, usize)> = r.generators.iter().map(|g| (g.degree, g.vertex)).collect();
        assert_eq!(gens, vec![(0, 3), (-1, 2), (-2, 0)]);
        let s1 = DgModule::simple(&a, 0);
        let ext = ExtGroups::new(&r, &s1, 3).unwrap();
        assert_eq!(ext.dims(), BTreeMap::from([(2, 1)]));
    }

    #[test]
    fn yoneda_products_over_a3() {
        // Ext^1(S3, S2) x Ext^1(S2, S1)... over kA3 the composite of the two arrow classes is nonzero
        let text = "vertices 1 2 3\narrow a : 1 -> 2 deg 0\narrow b : 2 -> 3 deg 0\nrelation b*a\n";
        let a = realize_q(text, 2);
        let s: Vec<_> = (0..3).map(|v| DgModule::simple(&a, v)).collect();
        let r: Vec<_> = s.iter().map(|m| semifree_resolution(m, &a, -4).unwrap()).collect();
        // Ext^1(S3, S2) and Ext^1(S2, S1), Ext^2(S3, S1)
        let e32 = ExtGroups::new(&r[2], &s[1], 2).unwrap();
        let e21 = ExtGroups::new(&r[1], &s[0], 2).unwrap();
        let e31 = ExtGroups::new(&r[2], &s[0], 2).unwrap();
        assert_eq!((e32.dim(1), e21.dim(1), e31.dim(2)), (1, 1, 1));
        // alpha in Ext^1(S2, S1), beta in Ext^1(S3, S2): alpha ∘ beta in Ext^2(S3, S1)
        let prod = yoneda(&e21.rep_map(1, 0), &e32.rep_map(1, 0), 1, &r[2], &r[1], &s[1], &s[0]).unwrap();
        let c = e31.class_of(2, &prod).unwrap();
        assert!(!c[0].is_zero());
    }
}
