//! Cells and mosaics of indecomposables: constructions and their checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::enumerate::{combinations, digits, field_size, pow_u128, OrbitClassifier};
use crate::error::{Budget, Error, Result};
use crate::ext::assemble_d;
use crate::field::Field;
use crate::homalg::{analyze_end, hom_dimension, theta_map};
use crate::labeled::{coefficient_quiver, is_tree};
use crate::matrix::{Echelon, Matrix};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{extension, sequence_maps, RElement, Representation};

/// Certified by a construction theorem, verified by exhaustive check, unknown, or failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flag {
    Unknown,
    Certified(String),
    Verified(String),
    Failed(String),
}

impl Flag {
    pub fn is_positive(&self) -> bool {
        matches!(self, Flag::Certified(_) | Flag::Verified(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::Unknown => "unknown",
            Flag::Certified(_) => "certified",
            Flag::Verified(_) => "verified",
            Flag::Failed(_) => "failed",
        }
    }

    pub fn note(&self) -> Option<&str> {
        match self {
            Flag::Certified(s) | Flag::Verified(s) | Flag::Failed(s) => Some(s),
            Flag::Unknown => None,
        }
    }
}

/// A base representation T with a parameter subspace U ⊆ R(T, T).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell<F: Field> {
    pub base: Representation<F>,
    pub params: Vec<RElement<F>>,
    pub strong: Flag,
    pub separating: Flag,
    pub schurian: Flag,
}

impl<F: Field> Cell<F> {
    pub fn new(base: Representation<F>, params: Vec<RElement<F>>) -> Result<Self> {
        let f = base.field().clone();
        let len: usize = base.quiver().arrows().iter().map(|a| base.dims()[a.src] * base.dims()[a.tgt]).sum();
        let mut e = Echelon::new(&f, len);
        for p in &params {
            if p.src_dims != *base.dims() || p.tgt_dims != *base.dims() {
                return Err(Error::Mismatch("cell parameter is not in R(T,T)".into()));
            }
            if !e.insert(p.to_vec()) {
                return Err(Error::InvalidInput("cell parameters are linearly dependent".into()));
            }
        }
        Ok(Cell { base, params, strong: Flag::Unknown, separating: Flag::Unknown, schurian: Flag::Unknown })
    }

    /// The zero-dimensional cell {T}.
    pub fn point(base: Representation<F>) -> Self {
        Cell { base, params: Vec::new(), strong: Flag::Unknown, separating: Flag::Unknown, schurian: Flag::Unknown }
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn zero_param(&self) -> RElement<F> {
        RElement::zero_between(&self.base, &self.base)
    }

    /// Σ c_i p_i.
    pub fn param(&self, coeffs: &[F::Elem]) -> RElement<F> {
        RElement::combination(self.base.field(), &self.zero_param(), coeffs, &self.params)
    }

    /// T(λ) for λ = Σ c_i p_i.
    pub fn at(&self, coeffs: &[F::Elem]) -> Representation<F> {
        self.base.deform(&self.param(coeffs)).expect("parameter shapes checked")
    }

    fn certify(mut self, reason: &str) -> Self {
        self.strong = Flag::Certified(reason.into());
        self.separating = Flag::Certified(reason.into());
        self
    }
}

/// A family of cells of one dimension vector, with the construction step of each cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mosaic<F: Field> {
    pub dimvector: DimVector,
    pub cells: Vec<Cell<F>>,
    pub provenance: Vec<String>,
}

impl<F: Field> Mosaic<F> {
    pub fn new(dimvector: DimVector) -> Self {
        Mosaic { dimvector, cells: Vec::new(), provenance: Vec::new() }
    }

    pub fn push(&mut self, cell: Cell<F>, provenance: String) -> Result<()> {
        if *cell.base.dims() != self.dimvector {
            return Err(Error::Mismatch("cell has a different dimension vector".into()));
        }
        self.cells.push(cell);
        self.provenance.push(provenance);
        Ok(())
    }

    pub fn cell_dims(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.dim()).collect()
    }

    /// Number of cells of each dimension.
    pub fn dim_histogram(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim()).max().unwrap_or(0);
        let mut h = vec![0; top + 1];
        for c in &self.cells {
            h[c.dim()] += 1;
        }
        h
    }
}

/// What a hypothesis check established.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Certificate {
    pub hypotheses: Vec<String>,
    pub samples: usize,
    /// Some hypothesis holds for structural reasons rather than by sampling.
    pub symbolic: bool,
    /// Separating part (b) established as well as part (a).
    pub part_b: bool,
}

/// How parameter points are chosen for sampled hypothesis checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    /// Finite parameter spaces up to this size are enumerated completely.
    pub exhaustive_limit: u128,
    /// Otherwise this many random points (plus 0) per space.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { exhaustive_limit: 256, samples: 6, seed: 7 }
    }
}

/// Points of span(basis) for hypothesis checks: all of them over a small
/// finite field, else 0 and random small-integer combinations.
pub fn parameter_points<F: Field>(field: &F, template: &RElement<F>, basis: &[RElement<F>], s: &Sampling) -> Vec<RElement<F>> {
    if let Some(q) = field.size() {
        let n = pow_u128(q, basis.len());
        if n <= s.exhaustive_limit {
            return (0..n).map(|k| RElement::combination(field, template, &digits(field, q, k, basis.len()), basis)).collect();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = vec![template.clone()];
    if basis.is_empty() {
        return out;
    }
    for _ in 0..s.samples {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| field.parse(&format!("{}", rng.next_u32() % 7)).expect("small integer")).collect();
        out.push(RElement::combination(field, template, &coeffs, basis));
    }
    out
}

fn support(d: &DimVector) -> BTreeSet<usize> {
    d.0.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect()
}

fn witness<F: Field>(what: &str, x: &RElement<F>) -> String {
    let f: Vec<String> = x.blocks.iter().map(|b| format!("{:?}", b)).collect();
    format!("{} = [{}]", what, f.join("; "))
}

/// Hypotheses of the strong-cell theorem on the triples `w` ⊆ U_NM × U_M × U_N:
/// each π_{μ,λ}(e + τ) is nonzero and each Θ-map vanishes.
pub fn check_strong_hypotheses<F: Field>(m: &Representation<F>, n: &Representation<F>, e: &RElement<F>, w: &[(RElement<F>, RElement<F>, RElement<F>)]) -> Result<Certificate> {
    m.same_context(n)?;
    let disjoint = support(m.dims()).is_disjoint(&support(n.dims()));
    let mut cert = Certificate { symbolic: disjoint, ..Default::default() };
    cert.hypotheses.push("π_{μ,λ}(e+τ) ≠ 0".into());
    cert.hypotheses.push(if disjoint { "Θ = 0 (disjoint supports)".into() } else { "Θ = 0 (computed)".into() });
    for (tau, lambda, mu) in w {
        let ml = m.deform(lambda)?;
        let nm = n.deform(mu)?;
        let et = e.add(tau);
        let ep = assemble_d(&nm, &ml)?;
        if ep.is_trivial(&et) {
            return Err(Error::HypothesisFailed { hypothesis: "π_{μ,λ}(e+τ) ≠ 0".into(), witness: format!("{}, {}, {}", witness("τ", tau), witness("λ", lambda), witness("μ", mu)) });
        }
        if !disjoint {
            let b = extension(&ml, &nm, &et)?;
            let (incl, proj) = sequence_maps(&ml, &nm, &b);
            if !theta_map(&b, &b, &incl, &proj)?.is_zero() {
                return Err(Error::HypothesisFailed { hypothesis: "Θ-map vanishes".into(), witness: format!("{}, {}, {}", witness("τ", tau), witness("λ", lambda), witness("μ", mu)) });
            }
        }
        cert.samples += 1;
    }
    Ok(cert)
}

/// Hypotheses of the separating theorem, checked on sampled parameter points.
/// Part (a) needs vanishing Θ-maps; part (b) additionally Schurian outer
/// terms, e ∉ span(U_NM) and e + U_NM universal.
pub fn check_separating<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
    e: &RElement<F>,
    u_m: &[RElement<F>],
    u_n: &[RElement<F>],
    u_nm: &[RElement<F>],
    s: &Sampling,
) -> Result<Certificate> {
    m.same_context(n)?;
    let f = m.field();
    let disjoint = support(m.dims()).is_disjoint(&support(n.dims()));
    let lambdas = parameter_points(f, &RElement::zero_between(m, m), u_m, s);
    let mus = parameter_points(f, &RElement::zero_between(n, n), u_n, s);
    let taus = parameter_points(f, &RElement::zero_between(n, m), u_nm, s);
    let mut cert = Certificate { symbolic: disjoint, ..Default::default() };
    cert.hypotheses.push(if disjoint { "Θ = 0 (disjoint supports)".into() } else { "Θ = 0 (sampled)".into() });
    if !disjoint {
        for lambda in &lambdas {
            for mu in &mus {
                let ml = m.deform(lambda)?;
                let nm = n.deform(mu)?;
                // every Θ factors through Hom(M(λ), N(μ')); its vanishing is enough
                for mu2 in &mus {
                    let nm2 = n.deform(mu2)?;
                    if hom_dimension(&ml, &nm2) != 0 {
                        for tau in &taus {
                            let b = extension(&ml, &nm, &e.add(tau))?;
                            for tau2 in &taus {
                                let b2 = extension(&ml, &nm2, &e.add(tau2))?;
                                let (incl, _) = sequence_maps(&ml, &nm, &b);
                                let (_, proj) = sequence_maps(&ml, &nm2, &b2);
                                if !theta_map(&b, &b2, &incl, &proj)?.is_zero() {
                                    return Err(Error::HypothesisFailed { hypothesis: "Θ-maps vanish".into(), witness: format!("{}, {}", witness("τ", tau), witness("τ'", tau2)) });
                                }
                            }
                        }
                    }
                }
                cert.samples += 1;
            }
        }
    }
    // part (b)
    let mut span = Echelon::new(f, e.space_dim());
    for u in u_nm {
        span.insert(u.to_vec());
    }
    if span.contains(&e.to_vec()) {
        return Err(Error::HypothesisFailed { hypothesis: "e ∉ span(U_NM)".into(), witness: witness("e", e) });
    }
    for lambda in &lambdas {
        for mu in &mus {
            let ml = m.deform(lambda)?;
            let nm = n.deform(mu)?;
            if hom_dimension(&ml, &ml) != 1 || hom_dimension(&nm, &nm) != 1 {
                return Ok(cert);
            }
            let ep = assemble_d(&nm, &ml)?;
            let mut cands = vec![e.clone()];
            cands.extend(u_nm.iter().cloned());
            let (idx, _) = ep.represent_basis(&cands);
            if idx.len() != cands.len() {
                return Err(Error::HypothesisFailed { hypothesis: "e + U_NM universal".into(), witness: format!("{}, {}", witness("λ", lambda), witness("μ", mu)) });
            }
        }
    }
    cert.hypotheses.push("End(M(λ)) = End(N(μ)) = k, e ∉ span(U_NM), e + U_NM universal (sampled)".into());
    cert.part_b = true;
    Ok(cert)
}

/// Entry of a Schubert cell pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Zero,
    One,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertCell {
    /// Pivot columns, 1-based.
    pub columns: Vec<usize>,
    pub pattern: Vec<Vec<Entry>>,
    /// Free positions (row, col), 0-based, row-major.
    pub free: Vec<(usize, usize)>,
}

impl SchubertCell {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// The base point: every free entry set to 0.
    pub fn base_point<F: Field>(&self, f: &F) -> Matrix<F> {
        let d = self.pattern.len();
        let n = self.pattern.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(f, d, n);
        for (j, &c) in self.columns.iter().enumerate() {
            m.set(j, c - 1, f.one());
        }
        m
    }
}

/// Row j has a 1 in column i_j and free entries in columns k < i_j outside I.
pub fn schubert_cell(columns: &[usize], n: usize, d: usize) -> Result<SchubertCell> {
    if columns.len() != d || d == 0 {
        return Err(Error::InvalidInput(format!("expected {} pivot columns", d)));
    }
    if columns.windows(2).any(|w| w[0] >= w[1]) || columns[0] < 1 || columns[d - 1] > n {
        return Err(Error::InvalidInput(format!("pivot columns must be strictly increasing in 1..={}", n)));
    }
    let mut pattern = vec![vec![Entry::Zero; n]; d];
    let mut free = Vec::new();
    for (j, &i) in columns.iter().enumerate() {
        pattern[j][i - 1] = Entry::One;
        for k in 1..i {
            if !columns.contains(&k) {
                pattern[j][k - 1] = Entry::Free;
                free.push((j, k - 1));
            }
        }
    }
    free.sort();
    Ok(SchubertCell { columns: columns.to_vec(), pattern, free })
}

/// M^d as d consecutive copies.
pub fn power<F: Field>(m: &Representation<F>, d: usize) -> Result<Representation<F>> {
    let mut out = m.clone();
    for _ in 1..d {
        out = out.direct_sum(m)?;
    }
    Ok(out)
}

/// λ ⊗ id_{k^d}: block diagonal with d copies.
pub fn diag_power<F: Field>(q: &Quiver, f: &F, x: &RElement<F>, d: usize) -> RElement<F> {
    let scale = |v: &DimVector| DimVector(v.0.iter().map(|n| n * d).collect());
    let mut out = RElement::zero(q, f, &scale(&x.src_dims), &scale(&x.tgt_dims));
    for (a, b) in x.blocks.iter().enumerate() {
        for j in 0..d {
            out.blocks[a].set_block(j * b.rows(), j * b.cols(), b);
        }
    }
    out
}

/// Γ(A) = Σ_i e_i ⊗ (column i of A) ∈ R(N, M^d), with copy j of M in block j.
pub fn gamma_tau<F: Field>(q: &Quiver, f: &F, basis: &[RElement<F>], a: &Matrix<F>) -> Result<RElement<F>> {
    let first = basis.first().ok_or_else(|| Error::InvalidInput("empty extension basis".into()))?;
    if a.cols() != basis.len() {
        return Err(Error::Mismatch(format!("A has {} columns for {} basis vectors", a.cols(), basis.len())));
    }
    let d = a.rows();
    let tgt = DimVector(first.tgt_dims.0.iter().map(|n| n * d).collect());
    let mut out = RElement::zero(q, f, &first.src_dims, &tgt);
    for (i, e) in basis.iter().enumerate() {
        for j in 0..d {
            let c = a.get(j, i);
            if f.is_zero(c) {
                continue;
            }
            for (k, blk) in e.blocks.iter().enumerate() {
                let r0 = j * blk.rows();
                for r in 0..blk.rows() {
                    for s in 0..blk.cols() {
                        let v = f.mul_add(out.blocks[k].get(r0 + r, s), c, blk.get(r, s));
                        out.blocks[k].set(r0 + r, s, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The middle term F(A) of the extension of N by M ⊗ k^d with class Γ(A),
/// after checking Hom(M, N) = 0, both Schurian and that `basis` represents a
/// basis of Ext(N, M).
pub fn gamma_extension<F: Field>(m: &Representation<F>, n: &Representation<F>, basis: &[RElement<F>], a: &Matrix<F>) -> Result<Representation<F>> {
    m.same_context(n)?;
    if hom_dimension(m, n) != 0 {
        return Err(Error::HypothesisFailed { hypothesis: "Hom(M, N) = 0".into(), witness: format!("dim Hom(M, N) = {}", hom_dimension(m, n)) });
    }
    for (name, x) in [("M", m), ("N", n)] {
        if hom_dimension(x, x) != 1 {
            return Err(Error::HypothesisFailed { hypothesis: format!("{} Schurian", name), witness: format!("dim End({}) = {}", name, hom_dimension(x, x)) });
        }
    }
    let ep = assemble_d(n, m)?;
    let (idx, complete) = ep.represent_basis(basis);
    if idx.len() != basis.len() || !complete {
        return Err(Error::HypothesisFailed { hypothesis: "basis represents a basis of Ext(N, M)".into(), witness: format!("{} of {} vectors independent, Ext has dimension {}", idx.len(), basis.len(), ep.ext_dim) });
    }
    let md = power(m, a.rows())?;
    let tau = gamma_tau(m.quiver(), m.field(), basis, a)?;
    extension(&md, n, &tau)
}

/// Checks the Grassmann-cell hypotheses on sampled (λ, μ) ∈ U_M × U_N.
fn check_grassmann_hypotheses<F: Field>(cm: &Cell<F>, cn: &Cell<F>, u_nm: &[RElement<F>], s: &Sampling) -> Result<usize> {
    let (m, n) = (&cm.base, &cn.base);
    let f = m.field();
    let lambdas = parameter_points(f, &cm.zero_param(), &cm.params, s);
    let mus = parameter_points(f, &cn.zero_param(), &cn.params, s);
    let mut k = 0;
    for lambda in &lambdas {
        for mu in &mus {
            let ml = m.deform(lambda)?;
            let nm = n.deform(mu)?;
            let w = || format!("{}, {}", witness("λ", lambda), witness("μ", mu));
            if hom_dimension(&ml, &ml) != 1 || hom_dimension(&nm, &nm) != 1 {
                return Err(Error::HypothesisFailed { hypothesis: "outer cells Schurian".into(), witness: w() });
            }
            if hom_dimension(&ml, &nm) != 0 {
                return Err(Error::HypothesisFailed { hypothesis: "Hom(M(λ), N(μ)) = 0".into(), witness: w() });
            }
            let ep = assemble_d(&nm, &ml)?;
            let (idx, complete) = ep.represent_basis(u_nm);
            if idx.len() != u_nm.len() || !complete {
                return Err(Error::HypothesisFailed { hypothesis: "U_NM universal".into(), witness: w() });
            }
            k += 1;
        }
    }
    Ok(k)
}

/// One cell per pivot sequence I: base B_I = F(A_I base point), parameters the
/// Schubert coordinates (upper-right), λ ⊗ id (upper-left) and μ (lower-right).
pub fn grassmann_mosaic<F: Field>(cell_m: &Cell<F>, cell_n: &Cell<F>, u_nm: &[RElement<F>], d: usize, s: &Sampling) -> Result<Mosaic<F>> {
    let (m, n) = (&cell_m.base, &cell_n.base);
    m.same_context(n)?;
    let nb = u_nm.len();
    if d == 0 || d > nb {
        return Err(Error::InvalidInput(format!("need 1 ≤ d ≤ {}", nb)));
    }
    let samples = check_grassmann_hypotheses(cell_m, cell_n, u_nm, s)?;
    let q = m.quiver().clone();
    let f = m.field().clone();
    let md = power(m, d)?;
    let dims = md.dims().add(n.dims());
    let mut mosaic = Mosaic::new(dims);
    for cols in combinations(nb, d) {
        let pivots: Vec<usize> = cols.iter().map(|c| c + 1).collect();
        let sc = schubert_cell(&pivots, nb, d)?;
        let tau = gamma_tau(&q, &f, u_nm, &sc.base_point(&f))?;
        let b = extension(&md, n, &tau)?;
        let mut params = Vec::new();
        for &(j, k) in &sc.free {
            let unit = Matrix::unit(&f, d, nb, j, k);
            let t = gamma_tau(&q, &f, u_nm, &unit)?;
            params.push(t.embed_in_sum(&q, &f, md.dims(), n.dims(), false, true));
        }
        for lambda in &cell_m.params {
            params.push(diag_power(&q, &f, lambda, d).embed_in_sum(&q, &f, md.dims(), n.dims(), true, true));
        }
        for mu in &cell_n.params {
            params.push(mu.embed_in_sum(&q, &f, md.dims(), n.dims(), false, false));
        }
        let cell = Cell::new(b, params)?.certify(&format!("Grassmann cell theorem; hypotheses checked on {} parameter pairs", samples));
        mosaic.push(cell, format!("grassmann I={:?} d={}", pivots, d))?;
    }
    Ok(mosaic)
}

/// The d = 1 case for tree modules: cells (B_i, A_i) with A_i = span(e_k, k < i),
/// and every B_i must have a tree coefficient quiver.
pub fn tree_cell_recursion<F: Field>(cell_s: &Cell<F>, cell_t: &Cell<F>, treebasis: &[RElement<F>], s: &Sampling) -> Result<Mosaic<F>> {
    for (name, c) in [("S", cell_s), ("T", cell_t)] {
        if !is_tree(&coefficient_quiver(&c.base, None)?) {
            return Err(Error::NotTree(format!("{} is not presented as a tree module", name)));
        }
    }
    let mut mosaic = grassmann_mosaic(cell_t, cell_s, treebasis, 1, s)?;
    for (i, c) in mosaic.cells.iter().enumerate() {
        let lq = coefficient_quiver(&c.base, None)?;
        if !is_tree(&lq) {
            return Err(Error::NotTree(format!("middle term B_{} is not a tree module", i + 1)));
        }
    }
    for (i, p) in mosaic.provenance.iter_mut().enumerate() {
        *p = format!("tree recursion i={}", i + 1);
    }
    Ok(mosaic)
}

/// α(n) = 2 q_0 + Σ_{i ≤ m} q_i, on S(n).
fn subspace_dims(n: usize, m: usize) -> DimVector {
    let mut d = vec![0; n + 1];
    d[0] = 2;
    for x in d.iter_mut().take(m + 1).skip(1) {
        *x = 1;
    }
    DimVector(d)
}

fn subspace_rep<F: Field>(q: &Arc<Quiver>, f: &F, n: usize, cols: &[[i64; 2]]) -> Representation<F> {
    let dims = subspace_dims(n, cols.len());
    let mut r = Representation::zero(q.clone(), f, dims);
    for (i, c) in cols.iter().enumerate() {
        r.set_matrix(i, Matrix::from_i64(f, 2, 1, c));
    }
    r
}

/// Cellular tree normal form for α(n) = 2 q_0 + Σ q_i of S(n): start from the
/// exceptional T^3_1, extend each cell by S_{m+1} along e_1, e_2, and add the
/// zero-dimensional partition cells.
pub fn subspace_tnf<F: Field>(n: usize, field: &F, s: &Sampling) -> Result<Mosaic<F>> {
    if n < 3 {
        return Err(Error::InvalidInput("the subspace normal form needs n ≥ 3".into()));
    }
    let q = Arc::new(Quiver::subspace(n));
    let (e1, e2, one) = ([1, 0], [0, 1], [1, 1]);
    let mut mosaic = Mosaic::new(subspace_dims(n, 3));
    let mut t = Cell::point(subspace_rep(&q, field, n, &[e1, e2, one]));
    t.strong = Flag::Certified("exceptional root α(3)".into());
    t.separating = Flag::Certified("single point".into());
    mosaic.push(t, "T^3_1".into())?;
    for m in 3..n {
        let mut next = Mosaic::new(subspace_dims(n, m + 1));
        let simple = Representation::simple(q.clone(), field, m + 1);
        let mut cs = Cell::point(simple.clone());
        cs.strong = Flag::Certified("simple".into());
        cs.separating = Flag::Certified("single point".into());
        for (cell, prov) in mosaic.cells.iter().zip(&mosaic.provenance) {
            let basis: Vec<RElement<F>> = (0..2).map(|r| RElement::unit(&q, field, simple.dims(), cell.base.dims(), m, r, 0)).collect();
            let step = tree_cell_recursion(&cs, cell, &basis, s)?;
            for (c, p) in step.cells.into_iter().zip(step.provenance) {
                next.push(c, format!("{} > {} (S_{})", prov, p, m + 1))?;
            }
        }
        // partitions I ⊔ J of {1..m}, 1 ∈ I, J ≠ ∅
        for mask in 0..(1u64 << (m - 1)) {
            if mask == (1u64 << (m - 1)) - 1 {
                continue;
            }
            let mut cols = vec![e1];
            for i in 1..m {
                cols.push(if mask >> (i - 1) & 1 == 1 { e1 } else { e2 });
            }
            let j: Vec<usize> = (1..m).filter(|i| mask >> (i - 1) & 1 == 0).map(|i| i + 1).collect();
            cols.push(one);
            let mut c = Cell::point(subspace_rep(&q, field, n, &cols));
            c.strong = Flag::Certified("partition cell".into());
            c.separating = Flag::Certified("single point".into());
            next.push(c, format!("partition J={:?} at n={}", j, m + 1))?;
        }
        mosaic = next;
    }
    Ok(mosaic)
}

/// K(2), (2,2): {(S, {0}), (T, ⟨f⟩)} with T_a = I, T_b = E_12, f = (0, I) and S the swap of T.
pub fn kronecker22_mosaic<F: Field>(field: &F) -> Mosaic<F> {
    let q = Arc::new(Quiver::kronecker(2));
    let t = Representation::from_i64(q.clone(), field, &[2, 2], &[("a", &[1, 0, 0, 1]), ("b", &[0, 1, 0, 0])]).expect("fixed shapes");
    let s = Representation::from_i64(q.clone(), field, &[2, 2], &[("a", &[0, 1, 0, 0]), ("b", &[1, 0, 0, 1])]).expect("fixed shapes");
    let mut fpar = RElement::zero_between(&t, &t);
    fpar.blocks[1] = Matrix::identity(field, 2);
    let mut m = Mosaic::new(DimVector(vec![2, 2]));
    m.push(Cell::point(s), "S".into()).expect("same dimension");
    m.push(Cell::new(t, vec![fpar]).expect("one parameter"), "T".into()).expect("same dimension");
    m
}

/// Coverage of the indecomposable classes of R_α(F_q) by a mosaic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TNFReport {
    pub q: u64,
    pub covered: usize,
    /// Absolutely indecomposable classes.
    pub total_indec_classes: usize,
    /// Indecomposable classes that split over an extension of F_q; cells never meet them.
    pub non_absolute_classes: usize,
    pub multiply_covered: usize,
    /// Cell points that are not absolutely indecomposable, per cell.
    pub decomposable_points: Vec<u128>,
    /// Isomorphic pairs of points within one cell, per cell.
    pub internal_collisions: Vec<u128>,
    pub cell_dims: Vec<usize>,
}

impl TNFReport {
    pub fn is_tnf(&self) -> bool {
        self.covered == self.total_indec_classes && self.multiply_covered == 0 && self.decomposable_points.iter().all(|&d| d == 0)
    }
}

/// Exhaustive check over F_q: classify all points, then map every cell point
/// to its class.
pub fn verify_mosaic<F: Field>(mosaic: &Mosaic<F>, budget: Budget) -> Result<TNFReport> {
    let first = mosaic.cells.first().ok_or_else(|| Error::InvalidInput("empty mosaic".into()))?;
    let f = first.base.field().clone();
    let q = field_size(&f)?;
    let quiver = first.base.quiver().clone();
    let mut cl = OrbitClassifier::new(quiver, &f, mosaic.dimvector.clone(), budget)?;
    let total = cl.space.count();
    budget.check(total.saturating_mul(cl.group_order() as u128))?;
    // class -> (local, absolutely indecomposable)
    let mut kind: BTreeMap<u128, (bool, bool)> = BTreeMap::new();
    for idx in 0..total {
        let p = cl.space.point(idx);
        let c = cl.class_of(&p);
        if let alloc::collections::btree_map::Entry::Vacant(v) = kind.entry(c) {
            let a = analyze_end(&p, budget)?;
            v.insert((a.is_local, a.is_absolutely_indec));
        }
    }
    let mut hits: BTreeMap<u128, usize> = BTreeMap::new();
    let mut decomposable_points = Vec::new();
    let mut internal_collisions = Vec::new();
    for cell in &mosaic.cells {
        let n = pow_u128(q, cell.dim());
        budget.check(n)?;
        let mut bad = 0u128;
        let mut own: BTreeMap<u128, u128> = BTreeMap::new();
        for k in 0..n {
            let p = cell.at(&digits(&f, q, k, cell.dim()));
            let c = cl.class_of(&p);
            if !kind[&c].1 {
                bad += 1;
            }
            *own.entry(c).or_insert(0) += 1;
        }
        internal_collisions.push(own.values().map(|&v| v - 1).sum());
        decomposable_points.push(bad);
        for (c, _) in own {
            *hits.entry(c).or_insert(0) += 1;
        }
    }
    let indec_classes: BTreeSet<u128> = kind.iter().filter(|(_, v)| v.1).map(|(&c, _)| c).collect();
    let non_absolute_classes = kind.values().filter(|v| v.0 && !v.1).count();
    let covered = indec_classes.iter().filter(|c| hits.contains_key(c)).count();
    let multiply_covered = hits.values().filter(|&&h| h > 1).count() + internal_collisions.iter().filter(|&&x| x > 0).count();
    Ok(TNFReport {
        q,
        covered,
        total_indec_classes: indec_classes.len(),
        non_absolute_classes,
        multiply_covered,
        decomposable_points,
        internal_collisions,
        cell_dims: mosaic.cell_dims(),
    })
}

/// Records the outcome of [`verify_mosaic`] in the cell flags.
pub fn apply_verification<F: Field>(mosaic: &mut Mosaic<F>, report: &TNFReport) {
    for (i, c) in mosaic.cells.iter_mut().enumerate() {
        let how = format!("exhaustive over F_{}", report.q);
        c.strong = if report.decomposable_points[i] == 0 { Flag::Verified(how.clone()) } else { Flag::Failed(format!("{} decomposable points", report.decomposable_points[i])) };
        c.separating = if report.internal_collisions[i] == 0 { Flag::Verified(how) } else { Flag::Failed(format!("{} isomorphic pairs", report.internal_collisions[i])) };
    }
}
