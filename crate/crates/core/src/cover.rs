//! Finite windows of the universal abelian covering quiver, representations
//! on them, and the push-down to the base quiver.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::{Arrow, DimVector, Quiver};
use crate::rep::Representation;

/// A vertex of the cover: a base vertex and a character χ ∈ Z^{Q_1}.
pub type CoverPoint = (usize, Vec<i64>);

/// Vertices of the cover within graph distance `radius` of the χ = 0 shell,
/// with every cover arrow whose endpoints both lie in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWindow {
    pub base: Arc<Quiver>,
    pub radius: usize,
    pub points: Vec<CoverPoint>,
    pub quiver: Arc<Quiver>,
    /// Base arrow of each window arrow.
    pub arrow_base: Vec<usize>,
    index: BTreeMap<CoverPoint, usize>,
}

fn chi_string(chi: &[i64]) -> String {
    let parts: Vec<String> = chi.iter().map(|c| format!("{}", c)).collect();
    format!("({})", parts.join(","))
}

fn step(q: &Quiver, (v, chi): &CoverPoint) -> Vec<CoverPoint> {
    let mut out = Vec::new();
    for (a, ar) in q.arrows().iter().enumerate() {
        if ar.src == *v {
            let mut c = chi.clone();
            c[a] += 1;
            out.push((ar.tgt, c));
        }
        if ar.tgt == *v {
            let mut c = chi.clone();
            c[a] -= 1;
            out.push((ar.src, c));
        }
    }
    out
}

impl CoverWindow {
    pub fn new(base: Arc<Quiver>, radius: usize) -> Self {
        let zero = vec![0i64; base.n_arrows()];
        let mut dist: BTreeMap<CoverPoint, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for v in 0..base.n_vertices() {
            dist.insert((v, zero.clone()), 0);
            queue.push_back((v, zero.clone()));
        }
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            if d == radius {
                continue;
            }
            for n in step(&base, &p) {
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    queue.push_back(n);
                }
            }
        }
        let points: Vec<CoverPoint> = dist.into_keys().collect();
        Self::from_points(base, radius, points)
    }

    /// The smallest window containing all of `pts`, searching radii up to 32.
    pub fn containing(base: Arc<Quiver>, pts: &[CoverPoint]) -> Result<Self> {
        for r in 0..=32 {
            let w = Self::new(base.clone(), r);
            if pts.iter().all(|p| w.index_of(p).is_some()) {
                return Ok(w);
            }
        }
        Err(Error::WindowTooSmall("points are not within radius 32 of the χ = 0 shell".into()))
    }

    fn from_points(base: Arc<Quiver>, radius: usize, points: Vec<CoverPoint>) -> Self {
        let index: BTreeMap<CoverPoint, usize> = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let vertices: Vec<String> = points.iter().map(|(v, chi)| format!("{}@{}", base.vertices()[*v], chi_string(chi))).collect();
        let mut arrows = Vec::new();
        let mut arrow_base = Vec::new();
        for (i, (v, chi)) in points.iter().enumerate() {
            for (a, ar) in base.arrows().iter().enumerate() {
                if ar.src != *v {
                    continue;
                }
                let mut c = chi.clone();
                c[a] += 1;
                if let Some(&j) = index.get(&(ar.tgt, c)) {
                    arrows.push(Arrow { id: format!("{}@{}", ar.id, chi_string(chi)), src: i, tgt: j });
                    arrow_base.push(a);
                }
            }
        }
        let quiver = Arc::new(Quiver::from_parts(vertices, arrows).expect("window ids are unique"));
        CoverWindow { base, radius, points, quiver, arrow_base, index }
    }

    pub fn index_of(&self, p: &CoverPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Window arrow from point `i` along base arrow `a`, if present.
    pub fn arrow_from(&self, i: usize, a: usize) -> Option<usize> {
        self.quiver.arrows().iter().enumerate().find(|(k, ar)| ar.src == i && self.arrow_base[*k] == a).map(|(k, _)| k)
    }

    /// d_γ(χ) = Σ γ_a χ_a.
    pub fn weight(&self, i: usize, gamma: &[i64]) -> i64 {
        self.points[i].1.iter().zip(gamma).map(|(c, g)| c * g).sum()
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for ar in self.quiver.arrows() {
            adj[ar.src].push(ar.tgt);
            adj[ar.tgt].push(ar.src);
        }
        adj
    }
}

/// A dimension vector on the cover: sorted (window vertex, dim) pairs with dim > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverDims(pub Vec<(usize, usize)>);

impl CoverDims {
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().map(|x| x.0).collect()
    }

    pub fn to_dimvector(&self, w: &CoverWindow) -> DimVector {
        let mut d = vec![0; w.len()];
        for &(i, n) in &self.0 {
            d[i] = n;
        }
        DimVector(d)
    }

    /// Fiber sums: F_Q(α̂).
    pub fn push_down(&self, w: &CoverWindow) -> DimVector {
        let mut d = vec![0; w.base.n_vertices()];
        for &(i, n) in &self.0 {
            d[w.points[i].0] += n;
        }
        DimVector(d)
    }
}

/// Translation-invariant key: the least normalization over anchors.
fn translation_key(w: &CoverWindow, dims: &[(usize, usize)]) -> Vec<(usize, Vec<i64>, usize)> {
    let mut best: Option<Vec<(usize, Vec<i64>, usize)>> = None;
    for &(anchor, _) in dims {
        let shift = &w.points[anchor].1;
        let mut k: Vec<(usize, Vec<i64>, usize)> = dims
            .iter()
            .map(|&(i, n)| {
                let (v, chi) = &w.points[i];
                (*v, chi.iter().zip(shift).map(|(a, b)| a - b).collect(), n)
            })
            .collect();
        k.sort();
        if best.as_ref().map_or(true, |b| k < *b) {
            best = Some(k);
        }
    }
    best.unwrap_or_default()
}

/// Cover dimension vectors with connected support and fiber sums `alpha`,
/// one per translation class, as the least translate found in the window.
pub fn compatible_dimvectors(w: &CoverWindow, alpha: &DimVector, budget: crate::error::Budget) -> Result<Vec<CoverDims>> {
    if alpha.len() != w.base.n_vertices() {
        return Err(Error::Mismatch("dimension vector on wrong quiver".into()));
    }
    if alpha.is_zero() {
        return Ok(vec![CoverDims(Vec::new())]);
    }
    let total = alpha.total();
    let adj = w.neighbours();
    let base_of = |i: usize| w.points[i].0;
    let fits = |set: &[usize]| {
        let mut c = vec![0usize; alpha.len()];
        for &i in set {
            c[base_of(i)] += 1;
        }
        c.iter().zip(&alpha.0).all(|(x, a)| x <= a)
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for (i, (v, chi)) in w.points.iter().enumerate() {
        if chi.iter().all(|&c| c == 0) && alpha[*v] > 0 {
            frontier.push(vec![i]);
        }
    }
    let mut steps: u128 = 0;
    while let Some(set) = frontier.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        steps += 1;
        budget.check(steps)?;
        if set.len() == total {
            continue;
        }
        let mut cand: BTreeSet<usize> = BTreeSet::new();
        for &i in &set {
            for &j in &adj[i] {
                if set.binary_search(&j).is_err() {
                    cand.insert(j);
                }
            }
        }
        for j in cand {
            let mut s = set.clone();
            let pos = s.binary_search(&j).unwrap_err();
            s.insert(pos, j);
            if fits(&s) && !seen.contains(&s) {
                frontier.push(s);
            }
        }
    }
    let mut classes: BTreeMap<Vec<(usize, Vec<i64>, usize)>, CoverDims> = BTreeMap::new();
    for set in &seen {
        let mut count = vec![0usize; alpha.len()];
        for &i in set {
            count[base_of(i)] += 1;
        }
        if count.iter().zip(&alpha.0).any(|(c, a)| (*c == 0) != (*a == 0)) {
            continue;
        }
        for dims in distributions(set, &count, alpha, &base_of) {
            let key = translation_key(w, &dims);
            let cd = CoverDims(dims);
            match classes.get(&key) {
                Some(old) if *old <= cd => {}
                _ => {
                    classes.insert(key, cd);
                }
            }
        }
    }
    let mut out: Vec<CoverDims> = classes.into_values().collect();
    out.sort();
    Ok(out)
}

/// All ways to give each vertex of `set` a positive dimension with fiber sums `alpha`.
fn distributions(set: &[usize], count: &[usize], alpha: &DimVector, base_of: &dyn Fn(usize) -> usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    let mut remaining: Vec<usize> = alpha.0.clone();
    let mut left: Vec<usize> = count.to_vec();
    // process vertices in order; each choice constrained so the rest can still be positive
    fn rec(
        set: &[usize],
        k: usize,
        base_of: &dyn Fn(usize) -> usize,
        remaining: &mut Vec<usize>,
        left: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == set.len() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let v = base_of(set[k]);
        left[v] -= 1;
        let max = remaining[v] - left[v];
        let lo = if left[v] == 0 { max } else { 1 };
        for d in lo..=max {
            remaining[v] -= d;
            cur.push((set[k], d));
            rec(set, k + 1, base_of, remaining, left, cur, out);
            cur.pop();
            remaining[v] += d;
        }
        left[v] += 1;
    }
    out.clear();
    let mut cur = Vec::new();
    rec(set, 0, base_of, &mut remaining, &mut left, &mut cur, &mut out);
    out
}

/// A representation of a cover window with a one-parameter subgroup γ and an
/// explicit basis order for the push-down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRepresentation<F: Field> {
    pub window: Arc<CoverWindow>,
    pub rep: Representation<F>,
    pub gamma: Vec<i64>,
    /// Support vertices in push-down basis order (per base vertex, in list order).
    pub order: Vec<usize>,
}

impl<F: Field> CoverRepresentation<F> {
    /// Default order: by base vertex, then decreasing weight, then window index.
    pub fn new(window: Arc<CoverWindow>, rep: Representation<F>, gamma: Vec<i64>) -> Result<Self> {
        if rep.quiver().as_ref() != window.quiver.as_ref() {
            return Err(Error::Mismatch("representation is not on the window quiver".into()));
        }
        if gamma.len() != window.base.n_arrows() {
            return Err(Error::Mismatch("γ needs one entry per base arrow".into()));
        }
        let mut order: Vec<usize> = (0..window.len()).filter(|&i| rep.dims()[i] > 0).collect();
        order.sort_by_key(|&i| (window.points[i].0, -window.weight(i, &gamma), i));
        Ok(CoverRepresentation { window, rep, gamma, order })
    }

    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut a = order.clone();
        a.sort_unstable();
        let mut b = self.order.clone();
        b.sort_unstable();
        if a != b {
            return Err(Error::InvalidInput("order must list exactly the support".into()));
        }
        self.order = order;
        Ok(self)
    }

    /// Builds from support points (in basis order) with dimensions and arrow
    /// blocks keyed by (base arrow, source point).
    pub fn from_parts(
        window: Arc<CoverWindow>,
        field: &F,
        support: &[(CoverPoint, usize)],
        blocks: &[(usize, Vec<i64>, Matrix<F>)],
        gamma: Vec<i64>,
    ) -> Result<Self> {
        let mut dims = vec![0; window.len()];
        let mut order = Vec::new();
        for (p, d) in support {
            let i = window.index_of(p).ok_or_else(|| Error::WindowTooSmall(format!("point {:?} is outside the window", p)))?;
            dims[i] = *d;
            if *d > 0 {
                order.push(i);
            }
        }
        let dims = DimVector(dims);
        let mut rep = Representation::zero(window.quiver.clone(), field, dims.clone());
        for (a, chi, m) in blocks {
            let i = window.index_of(&(window.base.src(*a), chi.clone())).ok_or_else(|| Error::WindowTooSmall("arrow source outside the window".into()))?;
            let k = window.arrow_from(i, *a).ok_or_else(|| Error::WindowTooSmall("arrow target outside the window".into()))?;
            let tgt = window.quiver.tgt(k);
            if m.rows() != dims[tgt] || m.cols() != dims[i] {
                return Err(Error::Mismatch(format!("block for arrow {} has the wrong shape", window.quiver.arrows()[k].id)));
            }
            rep.set_matrix(k, m.clone());
        }
        Self::new(window, rep, gamma)?.with_order(order)
    }

    pub fn field(&self) -> &F {
        self.rep.field()
    }

    /// Offsets of each support vertex inside its base fiber.
    fn offsets(&self) -> BTreeMap<usize, usize> {
        let mut acc = vec![0usize; self.window.base.n_vertices()];
        let mut out = BTreeMap::new();
        for &i in &self.order {
            let v = self.window.points[i].0;
            out.insert(i, acc[v]);
            acc[v] += self.rep.dims()[i];
        }
        out
    }

    /// Per base vertex, the weights of the push-down basis vectors in order.
    pub fn weights(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new(); self.window.base.n_vertices()];
        for &i in &self.order {
            let w = self.window.weight(i, &self.gamma);
            for _ in 0..self.rep.dims()[i] {
                out[self.window.points[i].0].push(w);
            }
        }
        out
    }

    pub fn cover_dims(&self) -> CoverDims {
        let mut v: Vec<(usize, usize)> = self.order.iter().map(|&i| (i, self.rep.dims()[i])).collect();
        v.sort_unstable();
        CoverDims(v)
    }
}

/// The push-down F_Q: fibers become direct sums, blocks are placed per arrow.
pub fn pushdown<F: Field>(cr: &CoverRepresentation<F>) -> Representation<F> {
    let w = &cr.window;
    let f = cr.field();
    let mut dims = vec![0; w.base.n_vertices()];
    for &i in &cr.order {
        dims[w.points[i].0] += cr.rep.dims()[i];
    }
    let dims = DimVector(dims);
    let off = cr.offsets();
    let mut mats: Vec<Matrix<F>> = w.base.arrows().iter().map(|a| Matrix::zeros(f, dims[a.tgt], dims[a.src])).collect();
    for (k, ar) in w.quiver.arrows().iter().enumerate() {
        if let (Some(&r0), Some(&c0)) = (off.get(&ar.tgt), off.get(&ar.src)) {
            mats[w.arrow_base[k]].set_block(r0, c0, cr.rep.matrix(k));
        }
    }
    Representation::new(w.base.clone(), f, dims, mats).expect("shapes by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn radius_zero_has_no_arrows() {
        let w = CoverWindow::new(Arc::new(Quiver::kronecker(3)), 0);
        assert_eq!(w.len(), 2);
        assert_eq!(w.quiver.n_arrows(), 0);
    }

    #[test]
    fn kronecker_radius_one() {
        let w = CoverWindow::new(Arc::new(Quiver::kronecker(2)), 1);
        let expect: BTreeSet<CoverPoint> = [
            (0, vec![0, 0]),
            (1, vec![0, 0]),
            (1, vec![1, 0]),
            (1, vec![0, 1]),
            (0, vec![-1, 0]),
            (0, vec![0, -1]),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<CoverPoint> = w.points.iter().cloned().collect();
        assert_eq!(got, expect);
        assert_eq!(w.quiver.n_arrows(), 4);
    }

    #[test]
    fn simple_lifts_once() {
        let w = CoverWindow::new(Arc::new(Quiver::kronecker(2)), 2);
        let c = compatible_dimvectors(&w, &DimVector(vec![1, 0]), Default::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(w.points[c[0].0[0].0], (0, vec![0, 0]));
        let z = compatible_dimvectors(&w, &DimVector(vec![0, 0]), Default::default()).unwrap();
        assert_eq!(z, vec![CoverDims(Vec::new())]);
    }

    #[test]
    fn kronecker_one_one_lifts() {
        // one class per arrow
        let w = CoverWindow::new(Arc::new(Quiver::kronecker(3)), 2);
        let c = compatible_dimvectors(&w, &DimVector(vec![1, 1]), Default::default()).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn pushdown_of_t_i() {
        let base = Arc::new(Quiver::kronecker(2));
        let w = Arc::new(CoverWindow::new(base.clone(), 1));
        let one = Matrix::identity(&Rationals, 1);
        let cr = CoverRepresentation::from_parts(
            w,
            &Rationals,
            &[((0, vec![0, 0]), 1), ((1, vec![0, 1]), 1)],
            &[(1, vec![0, 0], one)],
            vec![1, 2],
        )
        .unwrap();
        let t = pushdown(&cr);
        assert_eq!(t, Representation::from_i64(base, &Rationals, &[1, 1], &[("b", &[1])]).unwrap());
        assert_eq!(cr.weights(), vec![vec![0], vec![2]]);
    }
}
