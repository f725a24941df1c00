//! Morphism calculus: Θ-maps, connecting homomorphisms, Ext(B,B) bases of
//! extensions, endomorphism rings and isomorphism tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::enumerate::{digits, field_size, pow_u128};
use crate::error::{Budget, Error, Result};
use crate::ext::{assemble_d, d_matrix, hom_basis, hom_dim, ExtPresentation};
use crate::field::Field;
use crate::matrix::{Echelon, Matrix};
use crate::rep::{extension, Morphism, RElement, Representation};

/// Σ c_i φ_i for morphisms with a common source and target.
pub fn combine<F: Field>(basis: &[Morphism<F>], coeffs: &[F::Elem], source: &Representation<F>, target: &Representation<F>) -> Morphism<F> {
    let f = source.field();
    let mut out = Morphism::zero(source, target);
    for (phi, c) in basis.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (o, p) in out.components.iter_mut().zip(&phi.components) {
            *o = o.add(&p.scale(c));
        }
    }
    out
}

/// Coordinates of `phi` with respect to `basis`, if it lies in the span.
pub fn hom_coordinates<F: Field>(basis: &[Morphism<F>], phi: &Morphism<F>) -> Option<Vec<F::Elem>> {
    let f = phi.source.field();
    let len = phi.flat_entries().len();
    if basis.is_empty() {
        return phi.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<F::Elem>> = basis.iter().map(|b| b.flat_entries()).collect();
    let mut m = Matrix::zeros(f, len, basis.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m.solve(&phi.flat_entries())
}

/// Matrix of Θ: Hom(b, b2) → Hom(M(λ), N(μ')), φ ↦ proj ∘ φ ∘ incl, on hom-basis coordinates.
pub fn theta_map<F: Field>(b: &Representation<F>, b2: &Representation<F>, incl: &Morphism<F>, proj: &Morphism<F>) -> Result<Matrix<F>> {
    if incl.target != *b || proj.source != *b2 {
        return Err(Error::Mismatch("Θ-map morphisms are not composable".into()));
    }
    let dom = hom_basis(b, b2)?;
    let cod = hom_basis(&incl.source, &proj.target)?;
    let f = b.field();
    let mut m = Matrix::zeros(f, cod.len(), dom.len());
    for (j, phi) in dom.iter().enumerate() {
        let comp = proj.after(phi).after(incl);
        let c = hom_coordinates(&cod, &comp).ok_or_else(|| Error::VerificationFailed("composite is not a morphism".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

/// (f_a ∘ g_{s(a)})_a for f ∈ R(N, M) and g: L → N; an element of R(L, M).
pub fn post_compose<F: Field>(f: &RElement<F>, g: &Morphism<F>) -> RElement<F> {
    let q = g.source.quiver();
    let blocks = q.arrows().iter().enumerate().map(|(a, ar)| f.blocks[a].mul(&g.components[ar.src])).collect();
    RElement { src_dims: g.source.dims().clone(), tgt_dims: f.tgt_dims.clone(), blocks }
}

/// (h_{t(a)} ∘ f_a)_a for f ∈ R(N, M) and h: M → L; an element of R(N, L).
pub fn pre_compose<F: Field>(h: &Morphism<F>, f: &RElement<F>) -> RElement<F> {
    let q = h.source.quiver();
    let blocks = q.arrows().iter().enumerate().map(|(a, ar)| h.components[ar.tgt].mul(&f.blocks[a])).collect();
    RElement { src_dims: f.src_dims.clone(), tgt_dims: h.target.dims().clone(), blocks }
}

/// δ_L: Hom(L, N) → Ext(L, M), g ↦ π_{L,M}(f ∘ g). Columns follow `hom_basis(L, N)`,
/// rows the Ext coordinates of `ep_lm`.
pub fn connecting_hom<F: Field>(l: &Representation<F>, n: &Representation<F>, seq_f: &RElement<F>, ep_lm: &ExtPresentation<F>) -> Result<(Matrix<F>, Vec<Morphism<F>>)> {
    if seq_f.src_dims != *n.dims() || ep_lm.source != *l || seq_f.tgt_dims != *ep_lm.target.dims() {
        return Err(Error::Mismatch("connecting homomorphism contexts disagree".into()));
    }
    let basis = hom_basis(l, n)?;
    let mut m = Matrix::zeros(l.field(), ep_lm.ext_dim, basis.len());
    for (j, g) in basis.iter().enumerate() {
        for (i, x) in ep_lm.ext_coords(&post_compose(seq_f, g)).into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok((m, basis))
}

/// δ^L: Hom(M, L) → Ext(N, L), h ↦ π_{N,L}(h ∘ f). Columns follow `hom_basis(M, L)`.
pub fn connecting_hom_dual<F: Field>(l: &Representation<F>, m: &Representation<F>, seq_f: &RElement<F>, ep_nl: &ExtPresentation<F>) -> Result<(Matrix<F>, Vec<Morphism<F>>)> {
    if seq_f.tgt_dims != *m.dims() || ep_nl.target != *l || seq_f.src_dims != *ep_nl.source.dims() {
        return Err(Error::Mismatch("connecting homomorphism contexts disagree".into()));
    }
    let basis = hom_basis(m, l)?;
    let mut mat = Matrix::zeros(l.field(), ep_nl.ext_dim, basis.len());
    for (j, h) in basis.iter().enumerate() {
        for (i, x) in ep_nl.ext_coords(&pre_compose(h, seq_f)).into_iter().enumerate() {
            mat.set(i, j, x);
        }
    }
    Ok((mat, basis))
}

/// Class in R(L, M) of the pullback of 0 → M → B → N → 0 (B the middle term
/// of f ∈ R(N, M)) along g: L → N, computed from the explicit fibre product
/// E = ker(B ⊕ L → N) and an arbitrary vector-space section. Oracle for δ_L.
pub fn pullback_class<F: Field>(m: &Representation<F>, n: &Representation<F>, f: &RElement<F>, g: &Morphism<F>) -> Result<RElement<F>> {
    let l = &g.source;
    if g.target != *n || f.src_dims != *n.dims() || f.tgt_dims != *m.dims() {
        return Err(Error::Mismatch("pullback contexts disagree".into()));
    }
    let fld = m.field();
    let q = m.quiver();
    let b = extension(m, n, f)?;
    let nv = q.n_vertices();
    let mut kern = Vec::with_capacity(nv);
    let mut incl = Vec::with_capacity(nv);
    let mut sect = Vec::with_capacity(nv);
    for v in 0..nv {
        let (mv, nn, lv) = (m.dims()[v], n.dims()[v], l.dims()[v]);
        let bv = mv + nn;
        // (b, x) ↦ p(b) − g(x)
        let mut a = Matrix::zeros(fld, nn, bv + lv);
        a.set_block(0, mv, &Matrix::identity(fld, nn));
        a.set_block(0, bv, &g.components[v].neg());
        let basis = a.kernel_basis();
        let ev = basis.len();
        if ev != mv + lv {
            return Err(Error::VerificationFailed(format!("fibre product has dimension {} at vertex {}", ev, v)));
        }
        let mut k = Matrix::zeros(fld, bv + lv, ev);
        for (j, c) in basis.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                k.set(i, j, x.clone());
            }
        }
        let solve_cols = |lhs: &Matrix<F>, rhs: &Matrix<F>| -> Result<Matrix<F>> {
            let mut out = Matrix::zeros(fld, lhs.cols(), rhs.cols());
            for j in 0..rhs.cols() {
                let x = lhs.solve(&rhs.col(j)).ok_or_else(|| Error::VerificationFailed("pullback map not solvable".into()))?;
                for (i, y) in x.into_iter().enumerate() {
                    out.set(i, j, y);
                }
            }
            Ok(out)
        };
        let mut mi = Matrix::zeros(fld, bv + lv, mv);
        mi.set_block(0, 0, &Matrix::identity(fld, mv));
        incl.push(solve_cols(&k, &mi)?);
        let proj = k.submatrix(bv, 0, lv, ev);
        sect.push(solve_cols(&proj, &Matrix::identity(fld, lv))?);
        kern.push(k);
    }
    let mut tau = RElement::zero(q, fld, l.dims(), m.dims());
    for (ai, ar) in q.arrows().iter().enumerate() {
        let (s, t) = (ar.src, ar.tgt);
        let (bs, ls) = (b.dims()[s], l.dims()[s]);
        let (bt, lt) = (b.dims()[t], l.dims()[t]);
        // arrow of E: K_t X = (B_a ⊕ L_a) K_s
        let mut big = Matrix::zeros(fld, bt + lt, bs + ls);
        big.set_block(0, 0, b.matrix(ai));
        big.set_block(bt, bs, l.matrix(ai));
        let rhs = big.mul(&kern[s]);
        let mut x = Matrix::zeros(fld, kern[t].cols(), kern[s].cols());
        for j in 0..rhs.cols() {
            let c = kern[t].solve(&rhs.col(j)).ok_or_else(|| Error::VerificationFailed("fibre product not closed under arrows".into()))?;
            for (i, y) in c.into_iter().enumerate() {
                x.set(i, j, y);
            }
        }
        let defect = x.mul(&sect[s]).sub(&sect[t].mul(l.matrix(ai)));
        for j in 0..defect.cols() {
            let c = incl[t].solve(&defect.col(j)).ok_or_else(|| Error::VerificationFailed("section defect leaves M".into()))?;
            for (i, y) in c.into_iter().enumerate() {
                tau.blocks[ai].set(i, j, y);
            }
        }
    }
    Ok(tau)
}

/// Represented bases of the four Ext spaces between M and N.
#[derive(Clone, Debug)]
pub struct ExtBases<F: Field> {
    pub r_m: Vec<RElement<F>>,
    pub r_n: Vec<RElement<F>>,
    pub r_nm: Vec<RElement<F>>,
    pub r_mn: Vec<RElement<F>>,
}

impl<F: Field> ExtBases<F> {
    /// Greedy standard-vector bases of all four spaces.
    pub fn standard(m: &Representation<F>, n: &Representation<F>) -> Result<Self> {
        Ok(ExtBases {
            r_m: assemble_d(m, m)?.standard_ext_basis(),
            r_n: assemble_d(n, n)?.standard_ext_basis(),
            r_nm: assemble_d(n, m)?.standard_ext_basis(),
            r_mn: assemble_d(m, n)?.standard_ext_basis(),
        })
    }
}

/// Which block of R(B, B) an assembled basis element came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    N,
    MN,
    NM,
    M,
}

/// Elements of R(N,M) ⊕ R(M,M) = R(B,M), or R(M,N) ⊕ R(N,N) = R(B,N), placed by source summand.
fn embed_source<F: Field>(x: &RElement<F>, b: &Representation<F>, m_dims: &crate::quiver::DimVector, src_is_m: bool) -> RElement<F> {
    let q = b.quiver();
    let f = b.field();
    let mut out = RElement::zero(q, f, b.dims(), &x.tgt_dims);
    for (a, ar) in q.arrows().iter().enumerate() {
        let c0 = if src_is_m { 0 } else { m_dims[ar.src] };
        out.blocks[a].set_block(0, c0, &x.blocks[a]);
    }
    out
}

/// A basis of Ext(B, B) for B the middle term of e ∈ R(N, M), assembled from
/// represented bases of the four Ext spaces between M and N.
///
/// Output order: R'_N, R_{M,N}, R'_{N,M}, R'_M, each embedded in R(B, B).
pub fn ext_basis_of_extension<F: Field>(m: &Representation<F>, n: &Representation<F>, e: &RElement<F>, bases: &ExtBases<F>) -> Result<Vec<(Block, RElement<F>)>> {
    m.same_context(n)?;
    for (name, ep, set) in [
        ("R_M", assemble_d(m, m)?, &bases.r_m),
        ("R_N", assemble_d(n, n)?, &bases.r_n),
        ("R_NM", assemble_d(n, m)?, &bases.r_nm),
        ("R_MN", assemble_d(m, n)?, &bases.r_mn),
    ] {
        let (idx, complete) = ep.represent_basis(set);
        if !complete || idx.len() != set.len() {
            return Err(Error::HypothesisFailed { hypothesis: format!("{} represents a basis", name), witness: format!("{} of {} independent, ext dim {}", idx.len(), set.len(), ep.ext_dim) });
        }
    }
    let q = m.quiver();
    let f = m.field();
    let (md, nd) = (m.dims(), n.dims());
    let b = extension(m, n, e)?;

    // Ext(B, N): R_{M,N} first, then R_N, modulo im d_{B,N}.
    let ep_bn = assemble_d(&b, n)?;
    let cand_n: Vec<(Block, &RElement<F>, RElement<F>)> = bases
        .r_mn
        .iter()
        .map(|x| (Block::MN, x, embed_source(x, &b, md, true)))
        .chain(bases.r_n.iter().map(|x| (Block::N, x, embed_source(x, &b, md, false))))
        .collect();
    let vecs: Vec<RElement<F>> = cand_n.iter().map(|c| c.2.clone()).collect();
    let (pick_n, _) = ep_bn.represent_basis(&vecs);

    // Ext(B, M): R_M first, then R_{N,M}, modulo im d_{B,M}; then modulo im δ_B.
    let ep_bm = assemble_d(&b, m)?;
    let cand_m: Vec<(Block, &RElement<F>, RElement<F>)> = bases
        .r_m
        .iter()
        .map(|x| (Block::M, x, embed_source(x, &b, md, true)))
        .chain(bases.r_nm.iter().map(|x| (Block::NM, x, embed_source(x, &b, md, false))))
        .collect();
    let vecs: Vec<RElement<F>> = cand_m.iter().map(|c| c.2.clone()).collect();
    let (pick_m1, _) = ep_bm.represent_basis(&vecs);
    let mut second: Vec<usize> = pick_m1.iter().copied().filter(|&i| cand_m[i].0 == Block::NM).collect();
    second.extend(pick_m1.iter().copied().filter(|&i| cand_m[i].0 == Block::M));
    let mut w = ep_bm.image.clone();
    for g in hom_basis(&b, n)? {
        w.insert(post_compose(e, &g).to_vec());
    }
    let pick_m: Vec<usize> = second.into_iter().filter(|&i| w.insert(cand_m[i].2.to_vec())).collect();

    let place = |blk: Block, x: &RElement<F>| match blk {
        Block::N => x.embed_in_sum(q, f, md, nd, false, false),
        Block::MN => x.embed_in_sum(q, f, md, nd, true, false),
        Block::NM => x.embed_in_sum(q, f, md, nd, false, true),
        Block::M => x.embed_in_sum(q, f, md, nd, true, true),
    };
    let mut out = Vec::new();
    for blk in [Block::N, Block::MN] {
        for &i in &pick_n {
            if cand_n[i].0 == blk {
                out.push((blk, place(blk, cand_n[i].1)));
            }
        }
    }
    for blk in [Block::NM, Block::M] {
        for &i in &pick_m {
            if cand_m[i].0 == blk {
                out.push((blk, place(blk, cand_m[i].1)));
            }
        }
    }
    let ep_bb = assemble_d(&b, &b)?;
    let elems: Vec<RElement<F>> = out.iter().map(|x| x.1.clone()).collect();
    let (idx, complete) = ep_bb.represent_basis(&elems);
    if !complete || idx.len() != elems.len() {
        return Err(Error::VerificationFailed(format!("assembled set of {} elements does not represent a basis of Ext(B,B) (dim {})", elems.len(), ep_bb.ext_dim)));
    }
    Ok(out)
}

/// Endomorphism ring data of a representation over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoAnalysis {
    pub end_dim: usize,
    pub nilpotent_count: u128,
    pub nilpotent_span_dim: usize,
    pub is_local: bool,
    pub is_absolutely_indec: bool,
    pub unit_count: u128,
}

/// Enumerates End(M) over F_q and classifies its elements.
pub fn analyze_end<F: Field>(m: &Representation<F>, budget: Budget) -> Result<EndoAnalysis> {
    let q = field_size(m.field())?;
    let f = m.field();
    if m.is_zero() {
        return Ok(EndoAnalysis { end_dim: 0, nilpotent_count: 1, nilpotent_span_dim: 0, is_local: false, is_absolutely_indec: false, unit_count: 1 });
    }
    let basis = hom_basis(m, m)?;
    let e = basis.len();
    if e == 1 {
        return Ok(EndoAnalysis { end_dim: 1, nilpotent_count: 1, nilpotent_span_dim: 0, is_local: true, is_absolutely_indec: true, unit_count: q as u128 - 1 });
    }
    let total = pow_u128(q, e);
    budget.check(total)?;
    let mut units: u128 = 0;
    let mut nil: u128 = 0;
    let mut span = Echelon::new(f, e);
    for idx in 0..total {
        let c = digits(f, q, idx, e);
        let x = combine(&basis, &c, m, m);
        if x.components.iter().all(|c| c.invertible()) {
            units += 1;
        } else if x.components.iter().all(|c| c.is_nilpotent()) {
            nil += 1;
            span.insert(c);
        }
    }
    let closed = nil == pow_u128(q, span.dim());
    let is_local = units + nil == total && closed;
    let is_absolutely_indec = is_local && nil == pow_u128(q, e - 1);
    Ok(EndoAnalysis { end_dim: e, nilpotent_count: nil, nilpotent_span_dim: span.dim(), is_local, is_absolutely_indec, unit_count: units })
}

pub fn is_indecomposable<F: Field>(m: &Representation<F>, budget: Budget) -> Result<bool> {
    Ok(analyze_end(m, budget)?.is_local)
}

/// End(M) = k; valid over any field.
pub fn is_schurian<F: Field>(m: &Representation<F>) -> bool {
    !m.is_zero() && hom_dim(m, m) == 1
}

pub fn aut_count<F: Field>(m: &Representation<F>, budget: Budget) -> Result<u128> {
    Ok(analyze_end(m, budget)?.unit_count)
}

/// Decides a ≅ b. Over F_q by exhaustive scan of Hom(a, b); over Q by random
/// sampling for "yes" and a degree-bounded grid for "no".
pub fn is_isomorphic<F: Field>(a: &Representation<F>, b: &Representation<F>, budget: Budget, seed: u64) -> Result<bool> {
    a.same_context(b)?;
    if a.dims() != b.dims() {
        return Ok(false);
    }
    if a == b {
        return Ok(true);
    }
    let basis = hom_basis(a, b)?;
    let h = basis.len();
    let end_a = hom_dim(a, a);
    if h != end_a || hom_dim(b, a) != end_a || hom_dim(b, b) != end_a {
        return Ok(false);
    }
    let f = a.field();
    let iso = |c: &[F::Elem]| combine(&basis, c, a, b).is_iso();
    match f.size() {
        Some(q) => {
            let total = pow_u128(q, h);
            budget.check(total)?;
            Ok((0..total).any(|idx| iso(&digits(f, q, idx, h))))
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let deg = a.total_dim() as u64;
            for _ in 0..64 {
                let c: Vec<F::Elem> = (0..h).map(|_| f.element(rng.next_u64() % (4 * deg + 8))).collect();
                if iso(&c) {
                    return Ok(true);
                }
            }
            // det(Σ x_i φ_i) has degree ≤ total dim in each variable, so a grid with
            // total dim + 1 values per variable detects a nonzero polynomial.
            let side = deg + 1;
            let total = pow_u128(side, h);
            if total > budget.0 {
                return Err(Error::Undecided(format!("grid of {} points exceeds budget {}", total, budget.0)));
            }
            let found = (0..total).any(|mut idx| {
                let c: Vec<F::Elem> = (0..h)
                    .map(|_| {
                        let d = (idx % side as u128) as u64;
                        idx /= side as u128;
                        f.element(d)
                    })
                    .collect();
                iso(&c)
            });
            Ok(found)
        }
    }
}

/// dim Hom(a, b) via rank; re-exported for callers that only need a number.
pub fn hom_dimension<F: Field>(a: &Representation<F>, b: &Representation<F>) -> usize {
    hom_dim(a, b)
}

/// Rank of d_{N,M}; used for quick universality checks.
pub fn d_rank<F: Field>(n: &Representation<F>, m: &Representation<F>) -> usize {
    d_matrix(n, m).rank()
}

/// Human-readable label of an R(N, M) standard vector: `j -a-> i` style.
pub fn describe<F: Field>(x: &RElement<F>, arrow_ids: &[String]) -> String {
    let mut parts = Vec::new();
    for (a, b) in x.blocks.iter().enumerate() {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let v = b.get(i, j);
                if !b.field().is_zero(v) {
                    parts.push(format!("{}[{},{}]={}", arrow_ids[a], i, j, b.field().format(v)));
                }
            }
        }
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::quiver::{DimVector, Quiver};
    use alloc::sync::Arc;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn simple_endomorphisms() {
        let q = Arc::new(Quiver::kronecker(2));
        let s = Representation::simple(q.clone(), &f2(), 0);
        let a = analyze_end(&s, Budget::default()).unwrap();
        assert!(a.is_local && a.is_absolutely_indec);
        assert_eq!((a.end_dim, a.unit_count), (1, 1));
        let ss = s.direct_sum(&s).unwrap();
        let a = analyze_end(&ss, Budget::default()).unwrap();
        assert_eq!(a.end_dim, 4);
        assert!(!a.is_local);
        assert_eq!(a.unit_count, 6);
    }

    #[test]
    fn jordan_block_is_local() {
        let q = Arc::new(Quiver::new(&["x"], &[("l", "x", "x")]).unwrap());
        let f3 = PrimeField::new(3).unwrap();
        let j = Representation::from_i64(q, &f3, &[2], &[("l", &[0, 1, 0, 0])]).unwrap();
        let a = analyze_end(&j, Budget::default()).unwrap();
        assert_eq!(a.end_dim, 2);
        assert!(a.is_local && a.is_absolutely_indec);
        assert_eq!(a.unit_count, 6);
    }

    #[test]
    fn irreducible_polynomial_is_local_but_not_absolutely() {
        // x^2 + 1 over F_3 is irreducible: End = F_9
        let q = Arc::new(Quiver::new(&["x"], &[("l", "x", "x")]).unwrap());
        let f3 = PrimeField::new(3).unwrap();
        let m = Representation::from_i64(q, &f3, &[2], &[("l", &[0, -1, 1, 0])]).unwrap();
        let a = analyze_end(&m, Budget::default()).unwrap();
        assert!(a.is_local);
        assert!(!a.is_absolutely_indec);
        assert_eq!(a.unit_count, 8);
    }

    #[test]
    fn isomorphism_of_t_i() {
        let q = Arc::new(Quiver::kronecker(2));
        let t1 = Representation::from_i64(q.clone(), &f2(), &[1, 1], &[("a", &[1])]).unwrap();
        let t2 = Representation::from_i64(q.clone(), &f2(), &[1, 1], &[("b", &[1])]).unwrap();
        assert!(is_isomorphic(&t1, &t1, Budget::default(), 0).unwrap());
        assert!(!is_isomorphic(&t1, &t2, Budget::default(), 0).unwrap());
        let qq = Representation::from_i64(q.clone(), &Rationals, &[1, 1], &[("a", &[2]), ("b", &[1])]).unwrap();
        let qr = Representation::from_i64(q.clone(), &Rationals, &[1, 1], &[("a", &[4]), ("b", &[2])]).unwrap();
        let qs = Representation::from_i64(q, &Rationals, &[1, 1], &[("a", &[1]), ("b", &[1])]).unwrap();
        assert!(is_isomorphic(&qq, &qr, Budget::default(), 1).unwrap());
        assert!(!is_isomorphic(&qq, &qs, Budget::default(), 1).unwrap());
    }

    #[test]
    fn theta_map_zero_for_disjoint_supports() {
        let q = Arc::new(Quiver::kronecker(2));
        let s0 = Representation::simple(q.clone(), &Rationals, 0);
        let s1 = Representation::simple(q.clone(), &Rationals, 1);
        let e = RElement::unit(&q, &Rationals, s0.dims(), s1.dims(), 0, 0, 0);
        let b = extension(&s1, &s0, &e).unwrap();
        let (incl, proj) = crate::rep::sequence_maps(&s1, &s0, &b);
        let t = theta_map(&b, &b, &incl, &proj).unwrap();
        assert!(t.is_zero());
        assert_eq!(t.rows(), 0);
    }

    #[test]
    fn theta_map_nonzero_on_split_sum() {
        // K(1): M = S_0 ⊕-ish chain; b = M ⊕ N with M = N = the 0 -> 1 identity module
        let q = Arc::new(Quiver::kronecker(1));
        let m = Representation::from_i64(q.clone(), &Rationals, &[1, 1], &[("a", &[1])]).unwrap();
        let z = RElement::zero_between(&m, &m);
        let b = extension(&m, &m, &z).unwrap();
        let (incl, proj) = crate::rep::sequence_maps(&m, &m, &b);
        let t = theta_map(&b, &b, &incl, &proj).unwrap();
        assert!(!t.is_zero());
        let zero = Morphism::zero(&m, &b);
        assert!(theta_map(&b, &b, &zero, &proj).unwrap().is_zero());
    }

    #[test]
    fn kronecker_t1_as_extension_of_simples() {
        let q = Arc::new(Quiver::kronecker(3));
        let s0 = Representation::simple(q.clone(), &Rationals, 0);
        let s1 = Representation::simple(q.clone(), &Rationals, 1);
        let e = RElement::unit(&q, &Rationals, s0.dims(), s1.dims(), 0, 0, 0);
        let bases = ExtBases::standard(&s1, &s0).unwrap();
        let out = ext_basis_of_extension(&s1, &s0, &e, &bases).unwrap();
        let arrows: Vec<usize> = out.iter().map(|(_, x)| x.blocks.iter().position(|b| !b.is_zero()).unwrap()).collect();
        assert_eq!(arrows, alloc::vec![1, 2]);
        assert!(out.iter().all(|(b, _)| *b == Block::NM));
        let _ = DimVector::zero(2);
    }
}
