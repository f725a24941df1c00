//! Torus fixed points from cover lifts, attracting sets and their sections.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cover::{compatible_dimvectors, pushdown, CoverDims, CoverRepresentation, CoverWindow};
use crate::enumerate::{digits, field_size, pow_u128};
use crate::error::{Budget, Error, Result};
use crate::ext::d_matrix;
use crate::field::{Field, PrimeField};
use crate::homalg::hom_dimension;
use crate::labeled::graph_is_tree;
use crate::matrix::Matrix;
use crate::quiver::{euler_form, DimVector, Quiver};
use crate::rep::Representation;
use crate::stability::{is_stable, Stability, StabilityWeights};

/// A coordinate (arrow, row, col) of R(T, T).
pub type Coord = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorData<F: Field> {
    /// T, pushed down.
    pub lift: Representation<F>,
    /// Per vertex, per basis vector weights.
    pub weights: Vec<Vec<i64>>,
    pub v_t: Vec<Coord>,
    /// Unipotent generators (vertex, i, j) with w_i > w_j.
    pub u_psi: Vec<(usize, usize, usize)>,
    pub section: Option<Vec<Coord>>,
    pub cell_dim: usize,
}

fn r_weight(q: &Quiver, w: &[Vec<i64>], gamma: &[i64], (a, i, j): Coord) -> i64 {
    w[q.tgt(a)][i] - w[q.src(a)][j] - gamma[a]
}

fn r_coords(t: &Representation<impl Field>) -> Vec<Coord> {
    let q = t.quiver();
    let mut out = Vec::new();
    for (a, ar) in q.arrows().iter().enumerate() {
        for i in 0..t.dims()[ar.tgt] {
            for j in 0..t.dims()[ar.src] {
                out.push((a, i, j));
            }
        }
    }
    out
}

fn domain_coords(t: &Representation<impl Field>) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for v in 0..t.dims().len() {
        for i in 0..t.dims()[v] {
            for j in 0..t.dims()[v] {
                out.push((v, i, j));
            }
        }
    }
    out
}

/// Weight-zero part of Ext(T, T); a sufficiently general γ makes it vanish.
pub fn weight_zero_ext<F: Field>(t: &Representation<F>, weights: &[Vec<i64>], gamma: &[i64]) -> usize {
    let q = t.quiver();
    let d = d_matrix(t, t);
    let rows: Vec<usize> = r_coords(t).into_iter().enumerate().filter(|(_, c)| r_weight(q, weights, gamma, *c) == 0).map(|(k, _)| k).collect();
    let cols: Vec<usize> = domain_coords(t).into_iter().enumerate().filter(|(_, (v, i, j))| weights[*v][*i] == weights[*v][*j]).map(|(k, _)| k).collect();
    let f = t.field();
    let mut sub = Matrix::zeros(f, rows.len(), cols.len());
    for (r, &k) in rows.iter().enumerate() {
        for (c, &l) in cols.iter().enumerate() {
            sub.set(r, c, d.get(k, l).clone());
        }
    }
    rows.len() - sub.rank()
}

/// V_T, U_ψ and the cell dimension, plus the section when one is found.
pub fn attracting_space<F: Field>(cr: &CoverRepresentation<F>) -> Result<AttractorData<F>> {
    let t = pushdown(cr);
    let weights = cr.weights();
    let q = t.quiver().clone();
    let zero = weight_zero_ext(&t, &weights, &cr.gamma);
    if zero != 0 {
        return Err(Error::HypothesisFailed {
            hypothesis: "γ sufficiently general".into(),
            witness: format!("weight-zero part of Ext(T,T) has dimension {}; choose a different γ", zero),
        });
    }
    let v_t: Vec<Coord> = r_coords(&t).into_iter().filter(|c| r_weight(&q, &weights, &cr.gamma, *c) > 0).collect();
    let u_psi: Vec<(usize, usize, usize)> = domain_coords(&t).into_iter().filter(|&(v, i, j)| i != j && weights[v][i] > weights[v][j]).collect();
    if u_psi.len() > v_t.len() {
        return Err(Error::VerificationFailed("unipotent part larger than V_T".into()));
    }
    let cell_dim = v_t.len() - u_psi.len();
    let mut ad = AttractorData { lift: t, weights, v_t, u_psi, section: None, cell_dim };
    ad.section = Some(cell_section(&ad, &cr.gamma)?);
    Ok(ad)
}

/// Straightens the U_ψ action: tangent vectors of the generators are reduced
/// to echelon form with V_T ordered by (col, row, arrow); pivot coordinates
/// are eliminated and the remaining ones span U_T.
pub fn cell_section<F: Field>(ad: &AttractorData<F>, gamma: &[i64]) -> Result<Vec<Coord>> {
    let t = &ad.lift;
    let f = t.field();
    let q = t.quiver();
    let all = r_coords(t);
    let dom = domain_coords(t);
    let d = d_matrix(t, t);
    let mut order: Vec<Coord> = ad.v_t.clone();
    order.sort_by_key(|&(a, i, j)| (j, i, a));
    let pos_in_all = |c: &Coord| all.iter().position(|x| x == c).expect("coordinate of R(T,T)");
    let mut rows = Vec::new();
    for g in &ad.u_psi {
        let k = dom.iter().position(|x| x == g).expect("generator in domain");
        for (r, c) in all.iter().enumerate() {
            if !f.is_zero(d.get(r, k)) && r_weight(q, &ad.weights, gamma, *c) <= 0 {
                return Err(Error::VerificationFailed("a unipotent generator leaves T + V_T".into()));
            }
        }
        rows.push(order.iter().map(|c| d.get(pos_in_all(c), k).clone()).collect::<Vec<_>>());
    }
    let m = Matrix::from_rows(f, rows, order.len());
    let rref = m.rref();
    if rref.pivots.len() < ad.u_psi.len() {
        return Err(Error::Unsupported(format!(
            "no canonical section: tangent vectors of U_ψ have rank {} < {}",
            rref.pivots.len(),
            ad.u_psi.len()
        )));
    }
    let mut free: Vec<Coord> = order.iter().enumerate().filter(|(k, _)| !rref.pivots.contains(k)).map(|(_, c)| *c).collect();
    free.sort();
    Ok(free)
}

/// T + λ for λ supported on `coords`.
pub fn perturb<F: Field>(t: &Representation<F>, coords: &[Coord], values: &[F::Elem]) -> Representation<F> {
    let f = t.field();
    let mut r = t.clone();
    for (&(a, i, j), v) in coords.iter().zip(values) {
        let mut m = r.matrix(a).clone();
        let x = f.add(m.get(i, j), v);
        m.set(i, j, x);
        r.set_matrix(a, m);
    }
    r
}

fn unipotent_element<F: Field>(t: &Representation<F>, gens: &[(usize, usize, usize)], vals: &[F::Elem]) -> Vec<Matrix<F>> {
    let f = t.field();
    let mut g: Vec<Matrix<F>> = (0..t.dims().len()).map(|v| Matrix::identity(f, t.dims()[v])).collect();
    for (&(v, i, j), x) in gens.iter().zip(vals) {
        g[v].set(i, j, x.clone());
    }
    g
}

/// Exhaustive check over a finite field that every U_ψ-orbit in T + V_T
/// meets T + U_T in exactly one point. Returns the number of orbits checked.
pub fn verify_section<F: Field>(ad: &AttractorData<F>, budget: Budget) -> Result<u128> {
    let t = &ad.lift;
    let f = t.field();
    let qs = field_size(f)?;
    let section = ad.section.as_ref().ok_or_else(|| Error::InvalidInput("no section to verify".into()))?;
    let n_pts = pow_u128(qs, ad.v_t.len());
    let n_grp = pow_u128(qs, ad.u_psi.len());
    budget.check(n_pts.saturating_mul(n_grp))?;
    let group: Vec<(Vec<Matrix<F>>, Vec<Matrix<F>>)> = (0..n_grp)
        .map(|k| {
            let g = unipotent_element(t, &ad.u_psi, &digits(f, qs, k, ad.u_psi.len()));
            let gi = g.iter().map(|m| m.inverse().expect("unipotent")).collect();
            (g, gi)
        })
        .collect();
    let off: Vec<usize> = ad.v_t.iter().map(|c| section.binary_search(c).map_or(usize::MAX, |_| 0)).collect();
    let base = t.clone();
    for k in 0..n_pts {
        let x = perturb(&base, &ad.v_t, &digits(f, qs, k, ad.v_t.len()));
        let mut hits = BTreeSet::new();
        for (g, gi) in &group {
            let y = x.act(g, gi);
            let mut inside = true;
            for (idx, &(a, i, j)) in ad.v_t.iter().enumerate() {
                if off[idx] != 0 && f.sub(y.matrix(a).get(i, j), base.matrix(a).get(i, j)) != f.zero() {
                    inside = false;
                    break;
                }
            }
            if inside {
                hits.insert(y.flat_entries().iter().map(|e| f.index(e)).collect::<Vec<u64>>());
            }
        }
        if hits.len() != 1 {
            return Err(Error::VerificationFailed(format!("orbit of point {} meets the section {} times", k, hits.len())));
        }
    }
    Ok(n_pts)
}

/// Exceptional representative on a tree support: unit entries between
/// one-dimensional vertices; a vertex of dimension d > 1 needs exactly d + 1
/// one-dimensional neighbours, the first d (by arrow) get e_1..e_d and the
/// last the all-ones vector.
pub fn tree_representative<F: Field>(w: &CoverWindow, cd: &CoverDims, field: &F) -> Result<Representation<F>> {
    let dims = cd.to_dimvector(w);
    let support = cd.support();
    let wq = &w.quiver;
    let edges: Vec<usize> = (0..wq.n_arrows()).filter(|&k| dims[wq.src(k)] > 0 && dims[wq.tgt(k)] > 0).collect();
    let (sub, _) = wq.full_subquiver(&support);
    if !graph_is_tree(&sub) {
        return Err(Error::NotTree("support of the cover dimension vector is not a tree".into()));
    }
    let mut rep = Representation::zero(wq.clone(), field, dims.clone());
    for &v in &support {
        let d = dims[v];
        if d == 1 {
            continue;
        }
        let arms: Vec<usize> = edges.iter().copied().filter(|&k| wq.src(k) == v || wq.tgt(k) == v).collect();
        if arms.len() != d + 1 || arms.iter().any(|&k| dims[wq.src(k)] + dims[wq.tgt(k)] != d + 1) {
            return Err(Error::Unsupported(format!("vertex {} of dimension {} is not the center of a star with {} unit arms", wq.vertices()[v], d, d + 1)));
        }
        for (n, &k) in arms.iter().enumerate() {
            let vec: Vec<F::Elem> = (0..d).map(|i| if n == d || i == n { field.one() } else { field.zero() }).collect();
            let m = if wq.tgt(k) == v { Matrix::from_rows(field, vec.into_iter().map(|x| vec![x]).collect(), 1) } else { Matrix::from_rows(field, vec![vec], d) };
            rep.set_matrix(k, m);
        }
    }
    for &k in &edges {
        if dims[wq.src(k)] == 1 && dims[wq.tgt(k)] == 1 {
            rep.set_matrix(k, Matrix::identity(field, 1));
        }
    }
    Ok(rep)
}

/// Tree module with small pseudo-random integer entries, for supports the
/// unit-entry rule does not cover.
pub fn generic_representative<F: Field>(w: &CoverWindow, cd: &CoverDims, field: &F, seed: u64) -> Representation<F> {
    let dims = cd.to_dimvector(w);
    let wq = &w.quiver;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Representation::zero(wq.clone(), field, dims.clone());
    for k in 0..wq.n_arrows() {
        let (r, c) = (dims[wq.tgt(k)], dims[wq.src(k)]);
        if r > 0 && c > 0 {
            let entries = (0..r * c).map(|_| field.parse(&format!("{}", 1 + rng.next_u32() % 9)).expect("small integer")).collect();
            rep.set_matrix(k, Matrix::from_entries(field, r, c, entries));
        }
    }
    rep
}

/// Torus fixed points of the stable moduli: exceptional tree modules on
/// compatible cover dimension vectors, Schurian and Θ̂-stable over F_p.
pub fn fixed_points<F: Field>(
    window: Arc<CoverWindow>,
    field: &F,
    alpha: &DimVector,
    theta: &StabilityWeights,
    gamma: &[i64],
    stability_prime: u32,
    budget: Budget,
) -> Result<Vec<CoverRepresentation<F>>> {
    if gamma.len() != window.base.n_arrows() {
        return Err(Error::Mismatch("γ needs one entry per base arrow".into()));
    }
    let fp = PrimeField::new(stability_prime)?;
    let wq = &window.quiver;
    let theta_hat = StabilityWeights(window.points.iter().map(|(v, _)| theta.0[*v]).collect());
    let mut out = Vec::new();
    for cd in compatible_dimvectors(&window, alpha, budget)? {
        let dims = cd.to_dimvector(&window);
        if euler_form(wq, &dims, &dims)? != 1 {
            continue;
        }
        let (sub, _) = wq.full_subquiver(&cd.support());
        if !graph_is_tree(&sub) {
            continue;
        }
        let (probe, seed) = match tree_representative(&window, &cd, &fp) {
            Ok(r) => (r, None),
            Err(Error::Unsupported(_)) => match (0..8).map(|s| (generic_representative(&window, &cd, &fp, s), s)).find(|(r, _)| hom_dimension(r, r) == 1) {
                Some((r, s)) => (r, Some(s)),
                None => continue,
            },
            Err(e) => return Err(e),
        };
        if hom_dimension(&probe, &probe) != 1 {
            continue;
        }
        let support = cd.support();
        let restricted = probe.restrict(&support);
        let theta_sub = StabilityWeights(support.iter().map(|&i| theta_hat.0[i]).collect());
        if is_stable(&restricted, &theta_sub, budget)? != Stability::Stable {
            continue;
        }
        let rep = match seed {
            None => tree_representative(&window, &cd, field)?,
            Some(s) => generic_representative(&window, &cd, field, s),
        };
        out.push(CoverRepresentation::new(window.clone(), rep, gamma.to_vec())?);
    }
    Ok(out)
}

/// Σ q^{2·cell_dim} as a coefficient list.
pub fn poincare(cell_dims: &[usize]) -> Vec<u64> {
    let top = cell_dims.iter().map(|d| 2 * d).max().unwrap_or(0);
    let mut c = vec![0u64; top + 1];
    for d in cell_dims {
        c[2 * d] += 1;
    }
    if cell_dims.is_empty() {
        c[0] = 0;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn poincare_sums() {
        assert_eq!(poincare(&[0]), vec![1]);
        assert_eq!(poincare(&[0, 1, 1, 2]), vec![1, 0, 2, 0, 1]);
    }

    #[test]
    fn simple_is_one_fixed_point() {
        let w = Arc::new(CoverWindow::new(Arc::new(Quiver::kronecker(3)), 1));
        let fps = fixed_points(w, &Rationals, &DimVector(vec![1, 0]), &StabilityWeights(vec![1, 0]), &[1, 3, 5], 101, Budget::default()).unwrap();
        assert_eq!(fps.len(), 1);
        let ad = attracting_space(&fps[0]).unwrap();
        assert_eq!(ad.cell_dim, 0);
        assert_eq!(ad.section, Some(Vec::new()));
    }

    #[test]
    fn translation_leaves_patterns_unchanged() {
        let base = Arc::new(Quiver::kronecker(2));
        let w = Arc::new(CoverWindow::containing(base, &[(0, vec![1, -1]), (1, vec![2, -1])]).unwrap());
        let one = Matrix::identity(&Rationals, 1);
        let lift = |shift: i64| {
            CoverRepresentation::from_parts(
                w.clone(),
                &Rationals,
                &[((0, vec![shift, -shift]), 1), ((1, vec![shift + 1, -shift]), 1)],
                &[(0, vec![shift, -shift], one.clone())],
                vec![1, 2],
            )
            .unwrap()
        };
        let a = attracting_space(&lift(0)).unwrap();
        let b = attracting_space(&lift(1)).unwrap();
        assert_eq!(a.weights, vec![vec![0], vec![1]]);
        assert_eq!(b.weights, vec![vec![-1], vec![0]]);
        assert_eq!((a.v_t, a.u_psi, a.section), (b.v_t, b.u_psi, b.section));
    }
}
