//! Exhaustive enumeration over finite fields: points of R_α, the group GL_α,
//! subspaces, and orbit classes.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::matrix::{Echelon, Matrix};
use crate::quiver::{rep_space_dim, DimVector, Quiver};
use crate::rep::Representation;

pub fn field_size<F: Field>(f: &F) -> Result<u64> {
    f.size().ok_or(Error::NeedsFiniteField)
}

/// q^e as u128, saturating.
pub fn pow_u128(q: u64, e: usize) -> u128 {
    let mut r: u128 = 1;
    for _ in 0..e {
        r = r.saturating_mul(q as u128);
    }
    r
}

/// Decodes `idx` into `len` base-q digits, least significant first.
pub fn digits<F: Field>(f: &F, q: u64, mut idx: u128, len: usize) -> Vec<F::Elem> {
    (0..len)
        .map(|_| {
            let d = (idx % q as u128) as u64;
            idx /= q as u128;
            f.element(d)
        })
        .collect()
}

/// All points of R_α(F_q) in a fixed order; `index` ↔ representation.
#[derive(Clone, Debug)]
pub struct PointSpace<F: Field> {
    pub quiver: Arc<Quiver>,
    pub field: F,
    pub dims: DimVector,
    pub q: u64,
    pub n_entries: usize,
}

impl<F: Field> PointSpace<F> {
    pub fn new(quiver: Arc<Quiver>, field: &F, dims: DimVector) -> Result<Self> {
        let q = field_size(field)?;
        if dims.len() != quiver.n_vertices() {
            return Err(Error::Mismatch("dimension vector length".into()));
        }
        let n_entries = rep_space_dim(&quiver, &dims);
        Ok(PointSpace { quiver, field: field.clone(), dims, q, n_entries })
    }

    pub fn count(&self) -> u128 {
        pow_u128(self.q, self.n_entries)
    }

    pub fn point(&self, idx: u128) -> Representation<F> {
        let d = digits(&self.field, self.q, idx, self.n_entries);
        let mut k = 0;
        let matrices = self
            .quiver
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (self.dims[a.tgt], self.dims[a.src]);
                let m = Matrix::from_entries(&self.field, r, c, d[k..k + r * c].to_vec());
                k += r * c;
                m
            })
            .collect();
        Representation::new(self.quiver.clone(), &self.field, self.dims.clone(), matrices).expect("shapes by construction")
    }

    pub fn index(&self, r: &Representation<F>) -> u128 {
        let mut idx: u128 = 0;
        for x in r.flat_entries().iter().rev() {
            idx = idx * self.q as u128 + self.field.index(x) as u128;
        }
        idx
    }
}

/// |GL_n(F_q)| = Π_{i<n} (q^n − q^i).
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    let mut r = BigUint::one();
    for i in 0..n {
        r *= &qn - BigUint::from(q).pow(i as u32);
    }
    r
}

/// |GL_α(F_q)| = Π_q |GL_{α_q}(F_q)|.
pub fn gl_alpha_order(dims: &DimVector, q: u64) -> BigUint {
    dims.0.iter().map(|&n| gl_order(n, q)).product()
}

/// All invertible n×n matrices over F_q with their inverses.
pub fn gl_elements<F: Field>(f: &F, n: usize) -> Result<Vec<(Matrix<F>, Matrix<F>)>> {
    let q = field_size(f)?;
    let total = pow_u128(q, n * n);
    let mut out = Vec::new();
    for idx in 0..total {
        let m = Matrix::from_entries(f, n, n, digits(f, q, idx, n * n));
        if let Some(inv) = m.inverse() {
            out.push((m, inv));
        }
    }
    Ok(out)
}

/// All k-dimensional subspaces of F_q^n, each as a k×n matrix in reduced row echelon form.
pub fn subspaces_of_dim<F: Field>(f: &F, n: usize, k: usize) -> Result<Vec<Matrix<F>>> {
    let q = field_size(f)?;
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: row j, columns c < pivots[j] that are not pivots
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|j| (0..pivots[j]).filter(|c| !pivots.contains(c)).map(move |c| (j, c)))
            .collect();
        let total = pow_u128(q, slots.len());
        for idx in 0..total {
            let vals = digits(f, q, idx, slots.len());
            let mut m = Matrix::zeros(f, k, n);
            for (j, &p) in pivots.iter().enumerate() {
                m.set(j, p, f.one());
            }
            for ((j, c), v) in slots.iter().zip(vals) {
                m.set(*j, *c, v);
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// All subspaces of F_q^n (every dimension).
pub fn all_subspaces<F: Field>(f: &F, n: usize) -> Result<Vec<Matrix<F>>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(subspaces_of_dim(f, n, k)?);
    }
    Ok(out)
}

/// All subspaces of F_q^n containing span(rows of `base`), as bases (rows).
pub fn subspaces_containing<F: Field>(f: &F, n: usize, base: &[Vec<F::Elem>]) -> Result<Vec<Vec<Vec<F::Elem>>>> {
    let e = Echelon::spanned_by(f, n, base);
    // complement: standard vectors at non-pivot coordinates
    let comp: Vec<usize> = (0..n).filter(|c| !e.pivots().contains(c)).collect();
    let mut out = Vec::new();
    for sub in all_subspaces(f, comp.len())? {
        let mut rows: Vec<Vec<F::Elem>> = e.basis().to_vec();
        for i in 0..sub.rows() {
            let mut v = vec![f.zero(); n];
            for (j, &c) in comp.iter().enumerate() {
                v[c] = sub.get(i, j).clone();
            }
            rows.push(v);
        }
        out.push(rows);
    }
    Ok(out)
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Computes orbit classes of GL_α acting on R_α(F_q): a point's class is the
/// least index in its orbit.
pub struct OrbitClassifier<F: Field> {
    pub space: PointSpace<F>,
    groups: Vec<Vec<(Matrix<F>, Matrix<F>)>>,
    cache: BTreeMap<u128, u128>,
}

impl<F: Field> OrbitClassifier<F> {
    pub fn new(quiver: Arc<Quiver>, field: &F, dims: DimVector, budget: Budget) -> Result<Self> {
        let space = PointSpace::new(quiver, field, dims.clone())?;
        let order: u128 = gl_alpha_order(&dims, space.q).try_into().unwrap_or(u128::MAX);
        budget.check(order)?;
        let groups = dims.0.iter().map(|&n| gl_elements(field, n)).collect::<Result<Vec<_>>>()?;
        Ok(OrbitClassifier { space, groups, cache: BTreeMap::new() })
    }

    pub fn group_order(&self) -> usize {
        self.groups.iter().map(|g| g.len()).product()
    }

    /// Visits every g ∈ GL_α as (g_q, g_q^{-1}) tuples.
    pub fn for_each_group_element(&self, mut visit: impl FnMut(&[Matrix<F>], &[Matrix<F>])) {
        let nv = self.groups.len();
        let mut pos = vec![0usize; nv];
        let mut g: Vec<Matrix<F>> = self.groups.iter().map(|gs| gs[0].0.clone()).collect();
        let mut gi: Vec<Matrix<F>> = self.groups.iter().map(|gs| gs[0].1.clone()).collect();
        loop {
            visit(&g, &gi);
            let mut v = 0;
            loop {
                if v == nv {
                    return;
                }
                pos[v] += 1;
                if pos[v] < self.groups[v].len() {
                    g[v] = self.groups[v][pos[v]].0.clone();
                    gi[v] = self.groups[v][pos[v]].1.clone();
                    break;
                }
                pos[v] = 0;
                g[v] = self.groups[v][0].0.clone();
                gi[v] = self.groups[v][0].1.clone();
                v += 1;
            }
        }
    }

    /// The orbit of `r` as a set of indices.
    pub fn orbit(&self, r: &Representation<F>) -> alloc::collections::BTreeSet<u128> {
        let mut out = alloc::collections::BTreeSet::new();
        self.for_each_group_element(|g, gi| {
            out.insert(self.space.index(&r.act(g, gi)));
        });
        out
    }

    /// Least index in the orbit of `r`.
    pub fn class_of(&mut self, r: &Representation<F>) -> u128 {
        let idx = self.space.index(r);
        if let Some(&c) = self.cache.get(&idx) {
            return c;
        }
        let orbit = self.orbit(r);
        let c = *orbit.iter().next().expect("orbit is nonempty");
        for &o in &orbit {
            self.cache.insert(o, c);
        }
        c
    }

    /// Number of orbits on all of R_α, by explicit transversal.
    pub fn count_orbits(&mut self, budget: Budget) -> Result<usize> {
        let total = self.space.count();
        budget.check(total)?;
        let mut classes = alloc::collections::BTreeSet::new();
        for idx in 0..total {
            let p = self.space.point(idx);
            classes.insert(self.class_of(&p));
        }
        Ok(classes.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
        assert_eq!(gl_order(0, 5), BigUint::from(1u32));
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(gl_elements(&f3, 2).unwrap().len(), 48);
    }

    #[test]
    fn grassmannian_sizes() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(subspaces_of_dim(&f2, 4, 2).unwrap().len(), 35);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(subspaces_of_dim(&f3, 4, 2).unwrap().len(), 130);
        assert_eq!(all_subspaces(&f3, 3).unwrap().len(), 28);
    }

    #[test]
    fn subspaces_containing_a_line() {
        let f2 = PrimeField::new(2).unwrap();
        // subspaces of F_2^3 containing e1: 0-dim quotient choices in F_2^2: 1 + 3 + 1
        assert_eq!(subspaces_containing(&f2, 3, &[vec![1, 0, 0]]).unwrap().len(), 5);
    }

    #[test]
    fn point_index_round_trip() {
        let f3 = PrimeField::new(3).unwrap();
        let s = PointSpace::new(Arc::new(Quiver::kronecker(2)), &f3, DimVector(vec![1, 2])).unwrap();
        for i in [0u128, 7, 80] {
            assert_eq!(s.index(&s.point(i)), i);
        }
    }

    #[test]
    fn orbit_count_kronecker_one_one() {
        // K(2), (1,1) over F_2: orbits are 0 and the q+1 points of P^1
        let f2 = PrimeField::new(2).unwrap();
        let mut c = OrbitClassifier::new(Arc::new(Quiver::kronecker(2)), &f2, DimVector(vec![1, 1]), Budget::default()).unwrap();
        assert_eq!(c.count_orbits(Budget::default()).unwrap(), 4);
    }
}
