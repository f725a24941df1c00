//! Labeled quivers and coefficient quivers.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::{Arrow, Quiver};
use crate::rep::Representation;

/// A quiver with a structure map to a base quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledQuiver {
    pub carrier: Quiver,
    pub vertex_labels: Vec<usize>,
    pub arrow_labels: Vec<usize>,
}

impl LabeledQuiver {
    pub fn new(base: &Quiver, carrier: Quiver, vertex_labels: Vec<usize>, arrow_labels: Vec<usize>) -> Result<Self> {
        if vertex_labels.len() != carrier.n_vertices() || arrow_labels.len() != carrier.n_arrows() {
            return Err(Error::Mismatch("label maps have the wrong length".into()));
        }
        for (i, ar) in carrier.arrows().iter().enumerate() {
            let l = arrow_labels[i];
            if l >= base.n_arrows() || base.src(l) != vertex_labels[ar.src] || base.tgt(l) != vertex_labels[ar.tgt] {
                return Err(Error::InvalidInput(format!("arrow `{}` does not commute with its label", ar.id)));
            }
            for (j, other) in carrier.arrows().iter().enumerate().take(i) {
                if arrow_labels[j] == l && other.src == ar.src && other.tgt == ar.tgt {
                    return Err(Error::InvalidInput(format!("two arrows labeled `{}` between the same vertices", base.arrows()[l].id)));
                }
            }
        }
        Ok(LabeledQuiver { carrier, vertex_labels, arrow_labels })
    }

    pub fn n_vertices(&self) -> usize {
        self.carrier.n_vertices()
    }

    pub fn n_arrows(&self) -> usize {
        self.carrier.n_arrows()
    }
}

/// Coefficient quiver of `m` in the homogeneous basis given per vertex by the
/// columns of `basis[q]`; `None` means the standard basis.
pub fn coefficient_quiver<F: Field>(m: &Representation<F>, basis: Option<&[Matrix<F>]>) -> Result<LabeledQuiver> {
    let q = m.quiver();
    let f = m.field();
    let dims = m.dims();
    let mut inverses = Vec::new();
    if let Some(b) = basis {
        if b.len() != q.n_vertices() {
            return Err(Error::Mismatch("one basis per vertex expected".into()));
        }
        for (v, p) in b.iter().enumerate() {
            if p.rows() != dims[v] || p.cols() != dims[v] {
                return Err(Error::Mismatch(format!("basis at vertex {} has the wrong size", q.vertices()[v])));
            }
            inverses.push(p.inverse().ok_or_else(|| Error::InvalidInput(format!("basis at vertex {} does not span", q.vertices()[v])))?);
        }
    }
    let offsets = dims.offsets();
    let mut vertices = Vec::new();
    let mut vertex_labels = Vec::new();
    for v in 0..q.n_vertices() {
        for i in 0..dims[v] {
            vertices.push(format!("{}:{}", q.vertices()[v], i));
            vertex_labels.push(v);
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_labels = Vec::new();
    for (a, ar) in q.arrows().iter().enumerate() {
        let coeffs = match basis {
            Some(b) => inverses[ar.tgt].mul(m.matrix(a)).mul(&b[ar.src]),
            None => m.matrix(a).clone(),
        };
        for j in 0..coeffs.cols() {
            for i in 0..coeffs.rows() {
                if !f.is_zero(coeffs.get(i, j)) {
                    arrows.push(Arrow { id: format!("{}:{}>{}", ar.id, j, i), src: offsets[ar.src] + j, tgt: offsets[ar.tgt] + i });
                    arrow_labels.push(a);
                }
            }
        }
    }
    let carrier = Quiver::from_parts(vertices, arrows)?;
    Ok(LabeledQuiver { carrier, vertex_labels, arrow_labels })
}

/// Connected with exactly one edge fewer than vertices.
pub fn is_tree(lq: &LabeledQuiver) -> bool {
    graph_is_tree(&lq.carrier)
}

pub fn graph_is_tree(q: &Quiver) -> bool {
    let n = q.n_vertices();
    n > 0 && q.n_arrows() + 1 == n && is_connected(q)
}

pub fn is_connected(q: &Quiver) -> bool {
    let n = q.n_vertices();
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for a in q.arrows() {
        adj[a.src].push(a.tgt);
        adj[a.tgt].push(a.src);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Renders the arrows of a coefficient quiver as `src -a-> tgt` lines.
pub fn describe_arrows(lq: &LabeledQuiver, base: &Quiver) -> Vec<String> {
    lq.carrier
        .arrows()
        .iter()
        .zip(&lq.arrow_labels)
        .map(|(ar, &l)| format!("{} -{}-> {}", lq.carrier.vertices()[ar.src], base.arrows()[l].id, lq.carrier.vertices()[ar.tgt]))
        .collect()
}
