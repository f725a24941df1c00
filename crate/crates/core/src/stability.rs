//! Slope stability, subrepresentations, scss and Harder-Narasimhan filtrations.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::enumerate::{subspaces_containing, PointSpace};
use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::homalg::{hom_dimension, is_indecomposable};
use crate::matrix::{Echelon, Matrix};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{Morphism, Representation};

/// Θ: one integer per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityWeights(pub Vec<i64>);

impl StabilityWeights {
    pub fn new(q: &Quiver, theta: Vec<i64>) -> Result<Self> {
        if theta.len() != q.n_vertices() {
            return Err(Error::Mismatch("Θ needs one entry per vertex".into()));
        }
        Ok(StabilityWeights(theta))
    }

    pub fn apply(&self, alpha: &DimVector) -> i64 {
        self.0.iter().zip(&alpha.0).map(|(t, d)| t * *d as i64).sum()
    }
}

/// μ(α) = Θ(α) / dim α.
pub fn slope(theta: &StabilityWeights, alpha: &DimVector) -> Result<BigRational> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("slope of the zero dimension vector".into()));
    }
    Ok(BigRational::new(BigInt::from(theta.apply(alpha)), BigInt::from(alpha.total() as u64)))
}

/// Subspaces per vertex, as row bases.
pub type Subspaces<E> = Vec<Vec<Vec<E>>>;

struct Walker<'a, F: Field> {
    m: &'a Representation<F>,
    order: Vec<usize>,
    pos: Vec<usize>,
    dims_only: bool,
    budget: Budget,
    steps: u128,
}

impl<'a, F: Field> Walker<'a, F> {
    fn new(m: &'a Representation<F>, dims_only: bool, budget: Budget) -> Self {
        let q = m.quiver();
        let order = q.topological_order().unwrap_or_else(|| (0..q.n_vertices()).collect());
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        Walker { m, order, pos, dims_only, budget, steps: 0 }
    }

    fn is_sink(&self, v: usize) -> bool {
        self.m.quiver().arrows().iter().all(|a| a.src != v)
    }

    fn required(&self, v: usize, chosen: &Subspaces<F::Elem>) -> Vec<Vec<F::Elem>> {
        let q = self.m.quiver();
        let mut out = Vec::new();
        for (a, ar) in q.arrows().iter().enumerate() {
            if ar.tgt == v && self.pos[ar.src] < self.pos[v] {
                for u in &chosen[ar.src] {
                    out.push(self.m.matrix(a).mul_vec(u));
                }
            }
        }
        out
    }

    fn closed(&self, chosen: &Subspaces<F::Elem>) -> bool {
        let f = self.m.field();
        let q = self.m.quiver();
        for (a, ar) in q.arrows().iter().enumerate() {
            if self.pos[ar.src] >= self.pos[ar.tgt] {
                let e = Echelon::spanned_by(f, self.m.dims()[ar.tgt], &chosen[ar.tgt]);
                if chosen[ar.src].iter().any(|u| !e.contains(&self.m.matrix(a).mul_vec(u))) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, chosen: &mut Subspaces<F::Elem>, dims: &mut Vec<usize>, visit: &mut dyn FnMut(&DimVector, Option<&Subspaces<F::Elem>>)) -> Result<()> {
        self.steps += 1;
        self.budget.check(self.steps)?;
        if k == self.order.len() {
            if self.closed(chosen) {
                let d = DimVector(dims.clone());
                visit(&d, if self.dims_only { None } else { Some(chosen) });
            }
            return Ok(());
        }
        let v = self.order[k];
        let f = self.m.field();
        let n = self.m.dims()[v];
        let req = self.required(v, chosen);
        if self.dims_only && self.is_sink(v) {
            let lo = Echelon::spanned_by(f, n, &req).dim();
            for d in lo..=n {
                dims[v] = d;
                self.run(k + 1, chosen, dims, visit)?;
            }
            dims[v] = 0;
            return Ok(());
        }
        for sub in subspaces_containing(f, n, &req)? {
            dims[v] = sub.len();
            chosen[v] = sub;
            self.run(k + 1, chosen, dims, visit)?;
        }
        chosen[v] = Vec::new();
        dims[v] = 0;
        Ok(())
    }
}

/// Calls `visit` once per subrepresentation of `m` (finite field only).
pub fn for_each_subrep<F: Field>(m: &Representation<F>, budget: Budget, mut visit: impl FnMut(&DimVector, &Subspaces<F::Elem>)) -> Result<()> {
    let mut w = Walker::new(m, false, budget);
    let nv = m.quiver().n_vertices();
    let mut chosen = vec![Vec::new(); nv];
    let mut dims = vec![0; nv];
    w.run(0, &mut chosen, &mut dims, &mut |d, s| visit(d, s.expect("spaces requested")))
}

/// Dimension vectors of all subrepresentations. Sinks are branched on
/// dimension only, which keeps large fields cheap on bipartite quivers.
pub fn subrep_dimvectors<F: Field>(m: &Representation<F>, budget: Budget) -> Result<BTreeSet<DimVector>> {
    let mut w = Walker::new(m, true, budget);
    let nv = m.quiver().n_vertices();
    let mut chosen = vec![Vec::new(); nv];
    let mut dims = vec![0; nv];
    let mut out = BTreeSet::new();
    w.run(0, &mut chosen, &mut dims, &mut |d, _| {
        out.insert(d.clone());
    })?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stability {
    Stable,
    SemistableOnly,
    Unstable,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::SemistableOnly => "semistable",
            Stability::Unstable => "unstable",
        }
    }
}

pub fn is_stable<F: Field>(m: &Representation<F>, theta: &StabilityWeights, budget: Budget) -> Result<Stability> {
    let alpha = m.dims().clone();
    let mu = slope(theta, &alpha)?;
    let mut strict = true;
    for beta in subrep_dimvectors(m, budget)? {
        if beta.is_zero() || beta == alpha {
            continue;
        }
        let s = slope(theta, &beta)?;
        if s > mu {
            return Ok(Stability::Unstable);
        }
        if s == mu {
            strict = false;
        }
    }
    Ok(if strict { Stability::Stable } else { Stability::SemistableOnly })
}

/// Extends the rows of `sub` to a basis of F^n with standard vectors; returns
/// the basis as columns of an invertible matrix, `sub` first.
fn adapted_basis<F: Field>(f: &F, n: usize, sub: &[Vec<F::Elem>]) -> Matrix<F> {
    let mut e = Echelon::new(f, n);
    let mut cols: Vec<Vec<F::Elem>> = Vec::new();
    for v in sub {
        if e.insert(v.clone()) {
            cols.push(v.clone());
        }
    }
    for i in 0..n {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        if e.insert(v.clone()) {
            cols.push(v);
        }
    }
    Matrix::from_rows(f, cols, n).transpose()
}

/// The subrepresentation on `spaces` with its inclusion, and the quotient with
/// its projection.
pub fn sub_and_quotient<F: Field>(m: &Representation<F>, spaces: &Subspaces<F::Elem>) -> Result<(Morphism<F>, Morphism<F>)> {
    let q = m.quiver();
    let f = m.field();
    let nv = q.n_vertices();
    let mut bases = Vec::with_capacity(nv);
    let mut invs = Vec::with_capacity(nv);
    let mut ks = Vec::with_capacity(nv);
    for v in 0..nv {
        let n = m.dims()[v];
        let p = adapted_basis(f, n, &spaces[v]);
        ks.push(Echelon::spanned_by(f, n, &spaces[v]).dim());
        invs.push(p.inverse().expect("adapted basis is invertible"));
        bases.push(p);
    }
    let sub_dims = DimVector(ks.clone());
    let quo_dims = DimVector((0..nv).map(|v| m.dims()[v] - ks[v]).collect());
    let mut sub_maps = Vec::new();
    let mut quo_maps = Vec::new();
    for (a, ar) in q.arrows().iter().enumerate() {
        let c = invs[ar.tgt].mul(m.matrix(a)).mul(&bases[ar.src]);
        let (ks_, kt) = (ks[ar.src], ks[ar.tgt]);
        if !c.submatrix(kt, 0, m.dims()[ar.tgt] - kt, ks_).is_zero() {
            return Err(Error::InvalidInput(format!("subspaces are not closed under arrow {}", ar.id)));
        }
        sub_maps.push(c.submatrix(0, 0, kt, ks_));
        quo_maps.push(c.submatrix(kt, ks_, m.dims()[ar.tgt] - kt, m.dims()[ar.src] - ks_));
    }
    let sub = Representation::new(q.clone(), f, sub_dims, sub_maps)?;
    let quo = Representation::new(q.clone(), f, quo_dims, quo_maps)?;
    let incl: Vec<Matrix<F>> = (0..nv).map(|v| bases[v].submatrix(0, 0, m.dims()[v], ks[v])).collect();
    let proj: Vec<Matrix<F>> = (0..nv).map(|v| invs[v].submatrix(ks[v], 0, m.dims()[v] - ks[v], m.dims()[v])).collect();
    Ok((Morphism::new(sub, m.clone(), incl)?, Morphism::new(m.clone(), quo, proj)?))
}

/// The unique subrepresentation of maximal slope and, among those, maximal dimension.
pub fn scss<F: Field>(m: &Representation<F>, theta: &StabilityWeights, budget: Budget) -> Result<Subspaces<F::Elem>> {
    if m.is_zero() {
        return Err(Error::InvalidInput("zero representation".into()));
    }
    let mut best: Option<(BigRational, usize, Subspaces<F::Elem>)> = None;
    let mut tie = false;
    for_each_subrep(m, budget, |d, s| {
        if d.is_zero() {
            return;
        }
        let mu = slope(theta, d).expect("nonzero");
        let key = (mu, d.total());
        match &best {
            Some((bm, bt, _)) if (bm.clone(), *bt) > key => {}
            Some((bm, bt, _)) if (bm.clone(), *bt) == key => tie = true,
            _ => {
                tie = false;
                best = Some((key.0, key.1, s.clone()));
            }
        }
    })?;
    if tie {
        return Err(Error::VerificationFailed("two maximal-slope subrepresentations of maximal dimension".into()));
    }
    Ok(best.expect("m itself is a candidate").2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNData<F: Field> {
    /// scss(M), the first filtration step.
    pub scss: Representation<F>,
    /// Semistable subquotients M_i / M_{i-1}.
    pub subquotients: Vec<Representation<F>>,
    /// Dimension vectors of the filtration steps M_1 ⊂ M_2 ⊂ … ⊂ M.
    pub filtration: Vec<DimVector>,
    pub slopes: Vec<BigRational>,
    pub length: usize,
}

pub fn scss_and_hn<F: Field>(m: &Representation<F>, theta: &StabilityWeights, budget: Budget) -> Result<HNData<F>> {
    let mut rest = m.clone();
    let mut subquotients = Vec::new();
    let mut filtration = Vec::new();
    let mut slopes = Vec::new();
    let mut acc = DimVector::zero(m.quiver().n_vertices());
    while !rest.is_zero() {
        let s = scss(&rest, theta, budget)?;
        let (incl, proj) = sub_and_quotient(&rest, &s)?;
        if hom_dimension(&incl.source, &proj.target) != 0 {
            return Err(Error::VerificationFailed("Hom(scss M, M/scss M) is nonzero".into()));
        }
        let mu = slope(theta, incl.source.dims())?;
        if slopes.last().is_some_and(|p| *p <= mu) {
            return Err(Error::VerificationFailed("HN slopes are not strictly decreasing".into()));
        }
        acc = acc.add(incl.source.dims());
        filtration.push(acc.clone());
        slopes.push(mu);
        subquotients.push(incl.source.clone());
        rest = proj.target;
    }
    Ok(HNData { scss: subquotients[0].clone(), length: subquotients.len(), subquotients, filtration, slopes })
}

/// Largest dim End(M) over indecomposable points of R_α(F_p); 0 if there are none.
pub fn schur_level<F: Field>(q: alloc::sync::Arc<Quiver>, field: &F, alpha: &DimVector, budget: Budget) -> Result<usize> {
    let ps = PointSpace::new(q, field, alpha.clone())?;
    budget.check(ps.count())?;
    let mut best = 0;
    for i in 0..ps.count() {
        let m = ps.point(i);
        let e = hom_dimension(&m, &m);
        if e > best && is_indecomposable(&m, budget)? {
            best = e;
        }
    }
    Ok(best)
}

/// d(M)_I for T(n): dimension at q_0 of the subrepresentation generated at
/// the vertices q_i, i ∈ I (1-based, q_1 carries the two parallel arrows).
pub fn t_quiver_generated_dim<F: Field>(m: &Representation<F>, subset: &[usize]) -> usize {
    let q = m.quiver();
    let f = m.field();
    let mut vs = Vec::new();
    for (a, ar) in q.arrows().iter().enumerate() {
        if subset.contains(&ar.src) {
            let mat = m.matrix(a);
            for j in 0..mat.cols() {
                vs.push(mat.col(j));
            }
        }
    }
    Echelon::spanned_by(f, m.dims()[0], &vs).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::enumerate::combinations;
    use alloc::sync::Arc;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn slopes() {
        let th = StabilityWeights(vec![1, 0]);
        assert_eq!(slope(&th, &DimVector(vec![1, 1])).unwrap(), r(1, 2));
        let th = StabilityWeights(vec![1, 0, 1]);
        assert_eq!(slope(&th, &DimVector(vec![1, 1, 1])).unwrap(), r(2, 3));
        assert_eq!(slope(&StabilityWeights(vec![0, 0]), &DimVector(vec![3, 1])).unwrap(), r(0, 1));
        assert!(slope(&th, &DimVector(vec![0, 0, 0])).is_err());
    }

    #[test]
    fn simples_are_stable() {
        let f = PrimeField::new(3).unwrap();
        let q = Arc::new(Quiver::kronecker(2));
        for v in 0..2 {
            let s = Representation::simple(q.clone(), &f, v);
            assert_eq!(is_stable(&s, &StabilityWeights(vec![1, 0]), Budget::default()).unwrap(), Stability::Stable);
        }
    }

    #[test]
    fn equal_slope_sum_is_semistable() {
        let f = PrimeField::new(2).unwrap();
        let q = Arc::new(Quiver::kronecker(2));
        let t = Representation::from_i64(q.clone(), &f, &[1, 1], &[("a", &[1])]).unwrap();
        let th = StabilityWeights(vec![1, 0]);
        assert_eq!(is_stable(&t, &th, Budget::default()).unwrap(), Stability::Stable);
        let tt = t.direct_sum(&t).unwrap();
        assert_eq!(is_stable(&tt, &th, Budget::default()).unwrap(), Stability::SemistableOnly);
    }

    #[test]
    fn scss_of_simple_plus_t() {
        // S_0 ⊕ T with T = (1,1), a = 1: slopes 1 and 1/2
        let f = PrimeField::new(3).unwrap();
        let q = Arc::new(Quiver::kronecker(2));
        let t = Representation::from_i64(q.clone(), &f, &[1, 1], &[("a", &[1])]).unwrap();
        let m = Representation::simple(q, &f, 0).direct_sum(&t).unwrap();
        let th = StabilityWeights(vec![1, 0]);
        let hn = scss_and_hn(&m, &th, Budget::default()).unwrap();
        assert_eq!(hn.scss.dims(), &DimVector(vec![1, 0]));
        assert_eq!(hn.length, 2);
        assert_eq!(hn.slopes, vec![r(1, 1), r(1, 2)]);
        assert_eq!(hn.filtration.last().unwrap(), m.dims());
    }

    #[test]
    fn stable_has_length_one() {
        let f = PrimeField::new(2).unwrap();
        let q = Arc::new(Quiver::kronecker(3));
        let t = Representation::from_i64(q, &f, &[1, 2], &[("a", &[1, 0]), ("b", &[0, 1])]).unwrap();
        let hn = scss_and_hn(&t, &StabilityWeights(vec![1, 0]), Budget::default()).unwrap();
        assert_eq!(hn.length, 1);
    }

    #[test]
    fn subrep_dims_agree_with_full_enumeration() {
        let f = PrimeField::new(2).unwrap();
        let q = Arc::new(Quiver::kronecker(2));
        let ps = PointSpace::new(q, &f, DimVector(vec![2, 2])).unwrap();
        for i in (0..ps.count()).step_by(7) {
            let m = ps.point(i);
            let mut full = BTreeSet::new();
            for_each_subrep(&m, Budget::default(), |d, _| {
                full.insert(d.clone());
            })
            .unwrap();
            assert_eq!(full, subrep_dimvectors(&m, Budget::default()).unwrap());
        }
    }

    #[test]
    fn t2_criterion_matches_enumeration() {
        let f = PrimeField::new(2).unwrap();
        let n = 2;
        let q = Arc::new(Quiver::t_quiver(n));
        let th = StabilityWeights(vec![0, 1, 1, 1]);
        let ps = PointSpace::new(q, &f, DimVector(vec![2, 1, 1, 1])).unwrap();
        for i in 0..ps.count() {
            let m = ps.point(i);
            let mut crit = true;
            for k in 1..=n {
                for idx in combinations(n + 1, k) {
                    let subset: Vec<usize> = idx.iter().map(|i| i + 1).collect();
                    // d(M)_I > n/(n+1) |I|
                    if t_quiver_generated_dim(&m, &subset) * (n + 1) <= n * k {
                        crit = false;
                    }
                }
            }
            let st = is_stable(&m, &th, Budget::default()).unwrap();
            assert_eq!(st == Stability::Stable, crit, "point {}", i);
        }
    }

    #[test]
    fn schur_levels() {
        let f = PrimeField::new(2).unwrap();
        let k2 = Arc::new(Quiver::kronecker(2));
        assert_eq!(schur_level(k2.clone(), &f, &DimVector(vec![2, 2]), Budget::default()).unwrap(), 2);
        assert_eq!(schur_level(k2, &f, &DimVector(vec![1, 2]), Budget::default()).unwrap(), 1);
        let k3 = Arc::new(Quiver::kronecker(3));
        assert_eq!(schur_level(k3, &f, &DimVector(vec![1, 3]), Budget::default()).unwrap(), 1);
    }
}
