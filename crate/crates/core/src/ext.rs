//! The map d_{N,M}, Hom as its kernel and Ext as its cokernel.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::field::Field;
use crate::matrix::{Echelon, Matrix};
use crate::quiver::euler_form;
use crate::rep::{Morphism, RElement, Representation};

/// d_{N,M}: ⊕_q Hom(N_q, M_q) → R(N, M), (f_q) ↦ (f_{t(a)} N_a − M_a f_{s(a)}).
#[derive(Clone, Debug)]
pub struct ExtPresentation<F: Field> {
    pub source: Representation<F>,
    pub target: Representation<F>,
    pub d_matrix: Matrix<F>,
    pub image: Echelon<F>,
    pub hom_dim: usize,
    pub ext_dim: usize,
    free: Vec<usize>,
}

/// Offsets of the per-vertex blocks Hom(N_q, M_q) in the flattened domain.
fn domain_offsets<F: Field>(n: &Representation<F>, m: &Representation<F>) -> Vec<usize> {
    let mut acc = 0;
    (0..n.dims().len())
        .map(|q| {
            let o = acc;
            acc += n.dims()[q] * m.dims()[q];
            o
        })
        .collect()
}

fn r_offsets<F: Field>(n: &Representation<F>, m: &Representation<F>) -> Vec<usize> {
    let mut acc = 0;
    n.quiver()
        .arrows()
        .iter()
        .map(|a| {
            let o = acc;
            acc += m.dims()[a.tgt] * n.dims()[a.src];
            o
        })
        .collect()
}

/// The flattened matrix of d_{N,M}.
pub fn d_matrix<F: Field>(n: &Representation<F>, m: &Representation<F>) -> Matrix<F> {
    let f = n.field();
    let q = n.quiver();
    let dom = domain_offsets(n, m);
    let ro = r_offsets(n, m);
    let dom_dim: usize = (0..q.n_vertices()).map(|v| n.dims()[v] * m.dims()[v]).sum();
    let r_dim: usize = q.arrows().iter().map(|a| m.dims()[a.tgt] * n.dims()[a.src]).sum();
    let mut d = Matrix::zeros(f, r_dim, dom_dim);
    for (a, ar) in q.arrows().iter().enumerate() {
        let (ns, mt) = (n.dims()[ar.src], m.dims()[ar.tgt]);
        let na = n.matrix(a);
        let ma = m.matrix(a);
        // f_t N_a: the (r, c) unit of f_t contributes row c of N_a to row r.
        let t = ar.tgt;
        for r in 0..m.dims()[t] {
            for c in 0..n.dims()[t] {
                let col = dom[t] + r * n.dims()[t] + c;
                for j in 0..ns {
                    let x = na.get(c, j);
                    if !f.is_zero(x) {
                        let row = ro[a] + r * ns + j;
                        let v = f.add(d.get(row, col), x);
                        d.set(row, col, v);
                    }
                }
            }
        }
        // −M_a f_s: the (r, c) unit of f_s contributes −column r of M_a to column c.
        let s = ar.src;
        for r in 0..m.dims()[s] {
            for c in 0..n.dims()[s] {
                let col = dom[s] + r * n.dims()[s] + c;
                for i in 0..mt {
                    let x = ma.get(i, r);
                    if !f.is_zero(x) {
                        let row = ro[a] + i * ns + c;
                        let v = f.sub(d.get(row, col), x);
                        d.set(row, col, v);
                    }
                }
            }
        }
    }
    d
}

/// dim Hom(N, M) from the rank of d.
pub fn hom_dim<F: Field>(n: &Representation<F>, m: &Representation<F>) -> usize {
    let d = d_matrix(n, m);
    d.cols() - d.rank()
}

/// Assembles d_{N,M} with its echelonized image.
pub fn assemble_d<F: Field>(n: &Representation<F>, m: &Representation<F>) -> Result<ExtPresentation<F>> {
    n.same_context(m)?;
    let d = d_matrix(n, m);
    let f = n.field();
    let columns: Vec<Vec<F::Elem>> = (0..d.cols()).map(|j| d.col(j)).collect();
    let image = Echelon::spanned_by(f, d.rows(), &columns);
    let rank = image.dim();
    let hom_dim = d.cols() - rank;
    let ext_dim = d.rows() - rank;
    debug_assert_eq!(
        hom_dim as i64 - ext_dim as i64,
        euler_form(n.quiver(), n.dims(), m.dims()).unwrap_or(0)
    );
    let mut is_pivot = vec![false; d.rows()];
    for &p in image.pivots() {
        is_pivot[p] = true;
    }
    let free = (0..d.rows()).filter(|&i| !is_pivot[i]).collect();
    Ok(ExtPresentation { source: n.clone(), target: m.clone(), d_matrix: d, image, hom_dim, ext_dim, free })
}

/// A basis of Hom(N, M).
pub fn hom_basis<F: Field>(n: &Representation<F>, m: &Representation<F>) -> Result<Vec<Morphism<F>>> {
    n.same_context(m)?;
    let d = d_matrix(n, m);
    Ok(d.kernel_basis().iter().map(|v| morphism_from_vec(n, m, v)).collect())
}

/// Reads a flattened ⊕_q Hom(N_q, M_q) vector as a morphism N → M.
pub fn morphism_from_vec<F: Field>(n: &Representation<F>, m: &Representation<F>, v: &[F::Elem]) -> Morphism<F> {
    let mut k = 0;
    let components = (0..n.dims().len())
        .map(|q| {
            let (r, c) = (m.dims()[q], n.dims()[q]);
            let mat = Matrix::from_entries(n.field(), r, c, v[k..k + r * c].to_vec());
            k += r * c;
            mat
        })
        .collect();
    Morphism { source: n.clone(), target: m.clone(), components }
}

impl<F: Field> ExtPresentation<F> {
    pub fn r_dim(&self) -> usize {
        self.d_matrix.rows()
    }

    pub fn field(&self) -> &F {
        self.source.field()
    }

    pub fn zero_element(&self) -> RElement<F> {
        RElement::zero_between(&self.source, &self.target)
    }

    pub fn standard_basis(&self) -> Vec<RElement<F>> {
        RElement::standard_basis(self.source.quiver(), self.field(), self.source.dims(), self.target.dims())
    }

    pub fn hom_basis(&self) -> Vec<Morphism<F>> {
        self.d_matrix
            .kernel_basis()
            .iter()
            .map(|v| morphism_from_vec(&self.source, &self.target, v))
            .collect()
    }

    /// Image under d of a family (f_q) given as a morphism-shaped tuple.
    pub fn d_of(&self, components: &[Matrix<F>]) -> RElement<F> {
        let v: Vec<F::Elem> = components.iter().flat_map(|m| m.entries().iter().cloned()).collect();
        self.zero_element().with_coords(&self.d_matrix.mul_vec(&v))
    }

    fn check_shape(&self, f: &RElement<F>) {
        assert!(
            f.src_dims == *self.source.dims() && f.tgt_dims == *self.target.dims(),
            "element is not in R(N,M) of this presentation"
        );
    }

    /// The canonical representative of f + im d: pivot coordinates of the image are zero.
    pub fn pi_reduce(&self, f: &RElement<F>) -> RElement<F> {
        self.check_shape(f);
        let mut v = f.to_vec();
        self.image.reduce(&mut v);
        f.with_coords(&v)
    }

    /// Whether π(f) = 0.
    pub fn is_trivial(&self, f: &RElement<F>) -> bool {
        self.check_shape(f);
        self.image.contains(&f.to_vec())
    }

    /// Coordinates of π(f) in Ext(N, M): the free coordinates of the reduced representative.
    pub fn ext_coords(&self, f: &RElement<F>) -> Vec<F::Elem> {
        let r = self.pi_reduce(f).to_vec();
        self.free.iter().map(|&i| r[i].clone()).collect()
    }

    /// Positions (in standard order) that carry Ext coordinates.
    pub fn free_positions(&self) -> &[usize] {
        &self.free
    }

    /// Greedy choice of candidates whose classes are independent in Ext(N, M).
    /// The flag says whether the selection is a basis.
    pub fn represent_basis(&self, candidates: &[RElement<F>]) -> (Vec<usize>, bool) {
        let vs: Vec<Vec<F::Elem>> = candidates
            .iter()
            .map(|c| {
                self.check_shape(c);
                c.to_vec()
            })
            .collect();
        let mut e = self.image.clone();
        let idx: Vec<usize> = vs.iter().enumerate().filter_map(|(i, v)| e.insert(v.clone()).then_some(i)).collect();
        let complete = idx.len() == self.ext_dim;
        (idx, complete)
    }

    /// Standard vectors (arrow, row, col order) that represent a basis of Ext(N, M).
    pub fn standard_ext_basis(&self) -> Vec<RElement<F>> {
        let std = self.standard_basis();
        let (idx, _) = self.represent_basis(&std);
        idx.into_iter().map(|i| std[i].clone()).collect()
    }
}
