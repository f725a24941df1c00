//! Representations, the spaces R(N, M), morphisms, extensions and deformations.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::{DimVector, Quiver};

/// A representation: one matrix per arrow, rows indexed by the target space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation<F: Field> {
    quiver: Arc<Quiver>,
    field: F,
    dims: DimVector,
    matrices: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    pub fn new(quiver: Arc<Quiver>, field: &F, dims: DimVector, matrices: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != quiver.n_vertices() {
            return Err(Error::Mismatch("dimension vector length".into()));
        }
        if matrices.len() != quiver.n_arrows() {
            return Err(Error::Mismatch("one matrix per arrow required".into()));
        }
        for (a, m) in quiver.arrows().iter().zip(&matrices) {
            if m.rows() != dims[a.tgt] || m.cols() != dims[a.src] {
                return Err(Error::Mismatch(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.id,
                    dims[a.tgt],
                    dims[a.src],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { quiver, field: field.clone(), dims, matrices })
    }

    pub fn zero(quiver: Arc<Quiver>, field: &F, dims: DimVector) -> Self {
        let matrices = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, dims[a.tgt], dims[a.src]))
            .collect();
        Representation { quiver, field: field.clone(), dims, matrices }
    }

    /// The simple representation at vertex `q`.
    pub fn simple(quiver: Arc<Quiver>, field: &F, q: usize) -> Self {
        let mut d = DimVector::zero(quiver.n_vertices());
        d.0[q] = 1;
        Self::zero(quiver, field, d)
    }

    /// Builds from `(arrow id, row-major integer entries)`; unlisted arrows are zero.
    pub fn from_i64(quiver: Arc<Quiver>, field: &F, dims: &[usize], maps: &[(&str, &[i64])]) -> Result<Self> {
        let mut r = Self::zero(quiver, field, DimVector(dims.to_vec()));
        for (id, entries) in maps {
            let a = r
                .quiver
                .arrow_index(id)
                .ok_or_else(|| Error::InvalidInput(format!("unknown arrow `{}`", id)))?;
            let (rows, cols) = (r.dims[r.quiver.tgt(a)], r.dims[r.quiver.src(a)]);
            if entries.len() != rows * cols {
                return Err(Error::Mismatch(format!("arrow `{}` needs {} entries", id, rows * cols)));
            }
            r.matrices[a] = Matrix::from_i64(field, rows, cols, entries);
        }
        Ok(r)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dims(&self) -> &DimVector {
        &self.dims
    }
    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }
    pub fn matrix(&self, a: usize) -> &Matrix<F> {
        &self.matrices[a]
    }
    pub fn set_matrix(&mut self, a: usize, m: Matrix<F>) {
        assert_eq!((m.rows(), m.cols()), (self.matrices[a].rows(), self.matrices[a].cols()));
        self.matrices[a] = m;
    }
    pub fn total_dim(&self) -> usize {
        self.dims.total()
    }
    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }

    pub fn same_context(&self, other: &Self) -> Result<()> {
        if self.quiver != other.quiver && *self.quiver != *other.quiver {
            return Err(Error::Mismatch("representations live on different quivers".into()));
        }
        if self.field != other.field {
            return Err(Error::Mismatch("representations live over different fields".into()));
        }
        Ok(())
    }

    /// All matrix entries concatenated in arrow order.
    pub fn flat_entries(&self) -> Vec<F::Elem> {
        self.matrices.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    /// M(λ) = M + λ.
    pub fn deform(&self, lambda: &RElement<F>) -> Result<Self> {
        if lambda.src_dims != self.dims || lambda.tgt_dims != self.dims {
            return Err(Error::Mismatch("deformation parameter is not in R(M,M)".into()));
        }
        let matrices = self.matrices.iter().zip(&lambda.blocks).map(|(m, l)| m.add(l)).collect();
        Ok(Representation { quiver: self.quiver.clone(), field: self.field.clone(), dims: self.dims.clone(), matrices })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let q = &self.quiver;
        let matrices = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| {
                let z1 = Matrix::zeros(&self.field, self.dims[ar.tgt], other.dims[ar.src]);
                let z2 = Matrix::zeros(&self.field, other.dims[ar.tgt], self.dims[ar.src]);
                Matrix::blocks(&self.matrices[a], &z1, &z2, &other.matrices[a])
            })
            .collect();
        Ok(Representation {
            quiver: q.clone(),
            field: self.field.clone(),
            dims: self.dims.add(&other.dims),
            matrices,
        })
    }

    /// Restriction to the full subquiver on `sub` (kept in the given order).
    pub fn restrict(&self, sub: &[usize]) -> Self {
        let (q, kept) = self.quiver.full_subquiver(sub);
        let dims = DimVector(sub.iter().map(|&v| self.dims[v]).collect());
        let matrices = kept.iter().map(|&a| self.matrices[a].clone()).collect();
        Representation { quiver: Arc::new(q), field: self.field.clone(), dims, matrices }
    }

    /// Applies a base change: g * M with (g*M)_a = g_{t(a)} M_a g_{s(a)}^{-1}.
    pub fn act(&self, g: &[Matrix<F>], g_inv: &[Matrix<F>]) -> Self {
        let q = &self.quiver;
        let matrices = q
            .arrows()
            .iter()
            .zip(&self.matrices)
            .map(|(ar, m)| g[ar.tgt].mul(m).mul(&g_inv[ar.src]))
            .collect();
        Representation { quiver: q.clone(), field: self.field.clone(), dims: self.dims.clone(), matrices }
    }
}

/// An element of R(N, M) = ⊕_a Hom(N_{s(a)}, M_{t(a)}).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RElement<F: Field> {
    pub src_dims: DimVector,
    pub tgt_dims: DimVector,
    pub blocks: Vec<Matrix<F>>,
}

impl<F: Field> RElement<F> {
    pub fn zero(quiver: &Quiver, field: &F, src_dims: &DimVector, tgt_dims: &DimVector) -> Self {
        let blocks = quiver
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, tgt_dims[a.tgt], src_dims[a.src]))
            .collect();
        RElement { src_dims: src_dims.clone(), tgt_dims: tgt_dims.clone(), blocks }
    }

    /// The zero element of R(n, m).
    pub fn zero_between(n: &Representation<F>, m: &Representation<F>) -> Self {
        Self::zero(n.quiver(), n.field(), n.dims(), m.dims())
    }

    /// The standard vector with a single 1 at (arrow, row, col).
    pub fn unit(quiver: &Quiver, field: &F, src_dims: &DimVector, tgt_dims: &DimVector, a: usize, row: usize, col: usize) -> Self {
        let mut e = Self::zero(quiver, field, src_dims, tgt_dims);
        e.blocks[a].set(row, col, field.one());
        e
    }

    /// dim R(N, M).
    pub fn space_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.rows() * b.cols()).sum()
    }

    /// Standard basis in (arrow, row, col) order.
    pub fn standard_basis(quiver: &Quiver, field: &F, src_dims: &DimVector, tgt_dims: &DimVector) -> Vec<Self> {
        let mut out = Vec::new();
        for (a, ar) in quiver.arrows().iter().enumerate() {
            for i in 0..tgt_dims[ar.tgt] {
                for j in 0..src_dims[ar.src] {
                    out.push(Self::unit(quiver, field, src_dims, tgt_dims, a, i, j));
                }
            }
        }
        out
    }

    /// Coordinates in the standard basis.
    pub fn to_vec(&self) -> Vec<F::Elem> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    /// Inverse of [`RElement::to_vec`] given a template of the right shape.
    pub fn with_coords(&self, v: &[F::Elem]) -> Self {
        assert_eq!(v.len(), self.space_dim(), "coordinate vector length");
        let mut out = self.clone();
        let mut k = 0;
        for b in out.blocks.iter_mut() {
            let n = b.rows() * b.cols();
            b.entries_mut().clone_from_slice(&v[k..k + n]);
            k += n;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.src_dims == other.src_dims && self.tgt_dims == other.tgt_dims, "R-space mismatch");
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        RElement { src_dims: self.src_dims.clone(), tgt_dims: self.tgt_dims.clone(), blocks }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.neg()).collect();
        RElement { src_dims: self.src_dims.clone(), tgt_dims: self.tgt_dims.clone(), blocks }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let blocks = self.blocks.iter().map(|b| b.scale(c)).collect();
        RElement { src_dims: self.src_dims.clone(), tgt_dims: self.tgt_dims.clone(), blocks }
    }

    /// Σ c_i x_i for elements of one R-space; `template` fixes the shape.
    pub fn combination(field: &F, template: &Self, coeffs: &[F::Elem], elems: &[Self]) -> Self {
        let mut acc = template.scale(&field.zero());
        for (c, x) in coeffs.iter().zip(elems) {
            if !field.is_zero(c) {
                acc = acc.add(&x.scale(c));
            }
        }
        acc
    }

    /// Places this element of R(X, Y) into R(B, B) for B = M ⊕ N.
    /// `src_is_m`/`tgt_is_m` say whether X and Y are the M summand.
    pub fn embed_in_sum(&self, quiver: &Quiver, field: &F, m_dims: &DimVector, n_dims: &DimVector, src_is_m: bool, tgt_is_m: bool) -> Self {
        let b = m_dims.add(n_dims);
        let mut out = Self::zero(quiver, field, &b, &b);
        for (a, ar) in quiver.arrows().iter().enumerate() {
            let r0 = if tgt_is_m { 0 } else { m_dims[ar.tgt] };
            let c0 = if src_is_m { 0 } else { m_dims[ar.src] };
            out.blocks[a].set_block(r0, c0, &self.blocks[a]);
        }
        out
    }

    /// Block `(src_is_m, tgt_is_m)` of an element of R(B, B) with B = M ⊕ N.
    pub fn extract_from_sum(&self, quiver: &Quiver, m_dims: &DimVector, n_dims: &DimVector, src_is_m: bool, tgt_is_m: bool) -> Self {
        let pick = |m: bool| if m { m_dims.clone() } else { n_dims.clone() };
        let (sd, td) = (pick(src_is_m), pick(tgt_is_m));
        let blocks = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| {
                let r0 = if tgt_is_m { 0 } else { m_dims[ar.tgt] };
                let c0 = if src_is_m { 0 } else { m_dims[ar.src] };
                self.blocks[a].submatrix(r0, c0, td[ar.tgt], sd[ar.src])
            })
            .collect();
        RElement { src_dims: sd, tgt_dims: td, blocks }
    }
}

/// A morphism of representations, one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism<F: Field> {
    pub source: Representation<F>,
    pub target: Representation<F>,
    pub components: Vec<Matrix<F>>,
}

impl<F: Field> Morphism<F> {
    /// Checks φ_{t(a)} S_a = T_a φ_{s(a)} for every arrow.
    pub fn new(source: Representation<F>, target: Representation<F>, components: Vec<Matrix<F>>) -> Result<Self> {
        let m = Morphism { source, target, components };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.source.same_context(&self.target)?;
        let q = self.source.quiver();
        if self.components.len() != q.n_vertices() {
            return Err(Error::Mismatch("one component per vertex required".into()));
        }
        for (v, c) in self.components.iter().enumerate() {
            if c.rows() != self.target.dims()[v] || c.cols() != self.source.dims()[v] {
                return Err(Error::Mismatch(format!("component at vertex {} has the wrong shape", v)));
            }
        }
        for (a, ar) in q.arrows().iter().enumerate() {
            let lhs = self.components[ar.tgt].mul(self.source.matrix(a));
            let rhs = self.target.matrix(a).mul(&self.components[ar.src]);
            if lhs != rhs {
                return Err(Error::VerificationFailed(format!("morphism equation fails at arrow `{}`", ar.id)));
            }
        }
        Ok(())
    }

    pub fn identity(r: &Representation<F>) -> Self {
        let components = r.dims().0.iter().map(|&d| Matrix::identity(r.field(), d)).collect();
        Morphism { source: r.clone(), target: r.clone(), components }
    }

    pub fn zero(source: &Representation<F>, target: &Representation<F>) -> Self {
        let components = source
            .dims()
            .0
            .iter()
            .zip(&target.dims().0)
            .map(|(&s, &t)| Matrix::zeros(source.field(), t, s))
            .collect();
        Morphism { source: source.clone(), target: target.clone(), components }
    }

    /// `self ∘ first`
    pub fn after(&self, first: &Self) -> Self {
        let components = self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect();
        Morphism { source: first.source.clone(), target: self.target.clone(), components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|c| c.invertible())
    }

    pub fn flat_entries(&self) -> Vec<F::Elem> {
        self.components.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }
}

/// The extension B(τ, λ, μ) with B_q = M_q ⊕ N_q and blocks [[M_a+λ_a, τ_a], [0, N_a+μ_a]].
pub fn middle_term<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
    tau: &RElement<F>,
    lambda: &RElement<F>,
    mu: &RElement<F>,
) -> Result<Representation<F>> {
    m.same_context(n)?;
    if tau.src_dims != *n.dims() || tau.tgt_dims != *m.dims() {
        return Err(Error::Mismatch("τ must lie in R(N,M)".into()));
    }
    let ml = m.deform(lambda)?;
    let nm = n.deform(mu)?;
    let q = m.quiver();
    let matrices = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, ar)| {
            let z = Matrix::zeros(m.field(), n.dims()[ar.tgt], m.dims()[ar.src]);
            Matrix::blocks(ml.matrix(a), &tau.blocks[a], &z, nm.matrix(a))
        })
        .collect();
    Representation::new(q.clone(), m.field(), m.dims().add(n.dims()), matrices)
}

/// Middle term of τ with no deformation.
pub fn extension<F: Field>(m: &Representation<F>, n: &Representation<F>, tau: &RElement<F>) -> Result<Representation<F>> {
    let lm = RElement::zero_between(m, m);
    let ln = RElement::zero_between(n, n);
    middle_term(m, n, tau, &lm, &ln)
}

/// The canonical inclusion M → B and projection B → N of a middle term.
pub fn sequence_maps<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
    b: &Representation<F>,
) -> (Morphism<F>, Morphism<F>) {
    let f = m.field();
    let incl = (0..m.dims().len())
        .map(|v| {
            let (dm, dn) = (m.dims()[v], n.dims()[v]);
            Matrix::identity(f, dm).vstack(&Matrix::zeros(f, dn, dm))
        })
        .collect();
    let proj = (0..m.dims().len())
        .map(|v| {
            let (dm, dn) = (m.dims()[v], n.dims()[v]);
            Matrix::zeros(f, dn, dm).hstack(&Matrix::identity(f, dn))
        })
        .collect();
    (
        Morphism { source: m.clone(), target: b.clone(), components: incl },
        Morphism { source: b.clone(), target: n.clone(), components: proj },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn k(n: usize) -> Arc<Quiver> {
        Arc::new(Quiver::kronecker(n))
    }

    #[test]
    fn direct_sum_of_simples() {
        let q = k(3);
        let s0 = Representation::simple(q.clone(), &Rationals, 0);
        let s1 = Representation::simple(q.clone(), &Rationals, 1);
        let s = s0.direct_sum(&s1).unwrap();
        assert_eq!(s.dims().0, alloc::vec![1, 1]);
        assert!(s.matrices().iter().all(|m| m.is_zero()));
        let z = Representation::zero(q, &Rationals, DimVector::zero(2));
        assert_eq!(s.direct_sum(&z).unwrap(), s);
    }

    #[test]
    fn middle_term_of_standard_vector_is_t_i() {
        let q = k(3);
        let s0 = Representation::simple(q.clone(), &Rationals, 0);
        let s1 = Representation::simple(q.clone(), &Rationals, 1);
        let e = RElement::unit(&q, &Rationals, s0.dims(), s1.dims(), 1, 0, 0);
        let t = extension(&s1, &s0, &e).unwrap();
        let expect = Representation::from_i64(q, &Rationals, &[1, 1], &[("b", &[1])]).unwrap();
        assert_eq!(t, expect);
        let (i, p) = sequence_maps(&s1, &s0, &t);
        i.validate().unwrap();
        p.validate().unwrap();
    }

    #[test]
    fn deform_t_i() {
        let q = k(3);
        let f5 = PrimeField::new(5).unwrap();
        let t = Representation::from_i64(q.clone(), &f5, &[1, 1], &[("b", &[1])]).unwrap();
        let mut l = RElement::zero_between(&t, &t);
        l.blocks[0].set(0, 0, 3);
        l.blocks[2].set(0, 0, 4);
        let d = t.deform(&l).unwrap();
        assert_eq!(d.flat_entries(), alloc::vec![3, 1, 4]);
        assert_eq!(t.deform(&RElement::zero_between(&t, &t)).unwrap(), t);
    }

    #[test]
    fn restriction() {
        let q = Arc::new(Quiver::subspace(3));
        let m = Representation::from_i64(q, &Rationals, &[2, 1, 1, 1], &[("a1", &[1, 0]), ("a2", &[0, 1]), ("a3", &[1, 1])]).unwrap();
        assert_eq!(m.restrict(&[0, 1, 2, 3]).matrices(), m.matrices());
        assert!(m.restrict(&[]).is_zero());
        let r = m.restrict(&[0, 1]);
        assert_eq!(r.dims().0, alloc::vec![2, 1]);
        assert_eq!(r.quiver().n_arrows(), 1);
    }

    #[test]
    fn shape_validation() {
        let q = k(1);
        let bad = Representation::new(q, &Rationals, DimVector(alloc::vec![1, 2]), alloc::vec![Matrix::zeros(&Rationals, 1, 1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn embed_and_extract_round_trip() {
        let q = k(2);
        let f = PrimeField::new(3).unwrap();
        let md = DimVector(alloc::vec![1, 2]);
        let nd = DimVector(alloc::vec![2, 1]);
        let mut x = RElement::zero(&q, &f, &nd, &md);
        x.blocks[0].set(1, 0, 2);
        let e = x.embed_in_sum(&q, &f, &md, &nd, false, true);
        assert_eq!(e.extract_from_sum(&q, &md, &nd, false, true), x);
        assert!(e.extract_from_sum(&q, &md, &nd, true, true).is_zero());
    }
}
