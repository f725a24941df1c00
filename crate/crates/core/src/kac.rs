//! Counting indecomposable classes over F_q and interpolating Kac polynomials.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cells::Mosaic;
use crate::enumerate::{field_size, gl_alpha_order, OrbitClassifier, PointSpace};
use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::homalg::analyze_end;
use crate::quiver::{euler_form, DimVector, Quiver};

/// Σ |Aut| over a range of points, split by kind. Divided by |GL_α| these are
/// class counts, so partial sums over disjoint ranges merge by addition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialCount {
    pub points: u128,
    pub all: BigUint,
    pub indec: BigUint,
    pub abs_indec: BigUint,
}

impl PartialCount {
    pub fn merge(mut self, other: &PartialCount) -> Self {
        self.points += other.points;
        self.all += &other.all;
        self.indec += &other.indec;
        self.abs_indec += &other.abs_indec;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacSample {
    pub q: u64,
    pub alpha: DimVector,
    pub all_classes: u128,
    pub indec_classes: u128,
    pub abs_indec_classes: u128,
    pub point_count: u128,
}

/// Accumulates the points with indices in `range`.
pub fn count_range<F: Field>(quiver: Arc<Quiver>, field: &F, alpha: &DimVector, range: Range<u128>, budget: Budget) -> Result<PartialCount> {
    let space = PointSpace::new(quiver, field, alpha.clone())?;
    if range.end > space.count() {
        return Err(Error::InvalidInput(format!("range end {} beyond {} points", range.end, space.count())));
    }
    let mut acc = PartialCount::default();
    for idx in range {
        let p = space.point(idx);
        let e = analyze_end(&p, budget)?;
        let aut = BigUint::from(e.unit_count);
        if e.is_local {
            acc.indec += &aut;
        }
        if e.is_absolutely_indec {
            acc.abs_indec += &aut;
        }
        acc.all += aut;
        acc.points += 1;
    }
    Ok(acc)
}

/// Contiguous index ranges covering all points, as equal as possible.
pub fn shard_ranges(total: u128, shards: usize) -> Vec<Range<u128>> {
    let k = shards.max(1) as u128;
    (0..k).map(|i| (total * i / k)..(total * (i + 1) / k)).filter(|r| !r.is_empty()).collect()
}

fn exact_quotient(sum: &BigUint, order: &BigUint, what: &str) -> Result<u128> {
    let (quo, rem) = sum.div_rem(order);
    if !rem.is_zero() {
        return Err(Error::VerificationFailed(format!("{} count {}/{} is not an integer", what, sum, order)));
    }
    quo.to_u128().ok_or_else(|| Error::VerificationFailed(format!("{} count does not fit in u128", what)))
}

/// Turns a complete accumulation into class counts, asserting integrality.
pub fn finish(q: u64, alpha: &DimVector, acc: &PartialCount, expected_points: u128) -> Result<KacSample> {
    if acc.points != expected_points {
        return Err(Error::VerificationFailed(format!("accumulated {} of {} points", acc.points, expected_points)));
    }
    let gl = gl_alpha_order(alpha, q);
    Ok(KacSample {
        q,
        alpha: alpha.clone(),
        all_classes: exact_quotient(&acc.all, &gl, "class")?,
        indec_classes: exact_quotient(&acc.indec, &gl, "indecomposable")?,
        abs_indec_classes: exact_quotient(&acc.abs_indec, &gl, "absolutely indecomposable")?,
        point_count: acc.points,
    })
}

/// Number of points of R_α(F_q), checked against the budget.
pub fn point_count<F: Field>(quiver: &Arc<Quiver>, field: &F, alpha: &DimVector, budget: Budget) -> Result<u128> {
    let space = PointSpace::new(quiver.clone(), field, alpha.clone())?;
    budget.check(space.count())?;
    Ok(space.count())
}

/// Single-threaded count over all of R_α(F_q).
pub fn count_classes<F: Field>(quiver: Arc<Quiver>, field: &F, alpha: &DimVector, budget: Budget) -> Result<KacSample> {
    let q = field_size(field)?;
    let total = point_count(&quiver, field, alpha, budget)?;
    let acc = count_range(quiver, field, alpha, 0..total, budget)?;
    finish(q, alpha, &acc, total)
}

/// Class count by explicit orbit transversal; compared with the weighted count.
pub fn burnside_check<F: Field>(quiver: Arc<Quiver>, field: &F, alpha: &DimVector, budget: Budget) -> Result<(usize, u128)> {
    let sample = count_classes(quiver.clone(), field, alpha, budget)?;
    let mut cl = OrbitClassifier::new(quiver, field, alpha.clone(), budget)?;
    budget.check(cl.space.count().saturating_mul(cl.group_order() as u128))?;
    let orbits = cl.count_orbits(budget)?;
    if orbits as u128 != sample.all_classes {
        return Err(Error::VerificationFailed(format!("{} orbits by transversal, {} by weights", orbits, sample.all_classes)));
    }
    Ok((orbits, sample.all_classes))
}

/// max(0, 1 − ⟨α,α⟩).
pub fn default_degree_bound(quiver: &Quiver, alpha: &DimVector) -> Result<usize> {
    Ok((1 - euler_form(quiver, alpha, alpha)?).max(0) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KacReport {
    pub samples: Vec<(u64, u128)>,
    /// c_0, c_1, ... when the fit is integral and consistent with every sample.
    pub polynomial: Option<Vec<BigInt>>,
    pub degree_bound_used: usize,
    /// More samples than the degree bound needs, all consistent.
    pub trusted: bool,
    pub nonnegative: bool,
    pub inconsistency: Option<String>,
}

impl KacReport {
    pub fn eval(&self, q: i64) -> Option<BigInt> {
        let c = self.polynomial.as_ref()?;
        Some(c.iter().rev().fold(BigInt::zero(), |acc, x| acc * q + x))
    }
}

/// Coefficients of the Lagrange polynomial through `pts`, lowest degree first.
fn lagrange(pts: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = pts.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x − x_j)/(x_i − x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (k, b) in basis.iter().enumerate() {
            out[k] += b * &scale;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Fits the absolutely indecomposable counts with degree ≤ `degree_bound`
/// through the first bound + 1 samples and checks the rest against it.
pub fn interpolate(samples: &[KacSample], degree_bound: usize) -> Result<KacReport> {
    let mut pts: Vec<(u64, u128)> = samples.iter().map(|s| (s.q, s.abs_indec_classes)).collect();
    pts.sort();
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidInput("samples at the same q".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.alpha != samples[0].alpha) {
        return Err(Error::Mismatch(format!("samples for {:?} and {:?}", samples[0].alpha, s.alpha)));
    }
    let need = degree_bound + 1;
    if pts.len() < need {
        return Err(Error::InsufficientSamples { have: pts.len(), need });
    }
    let rat = |x: u128| BigRational::from_integer(BigInt::from(x));
    let fit: Vec<_> = pts[..need].iter().map(|&(q, a)| (rat(q as u128), rat(a))).collect();
    let coeffs = lagrange(&fit);
    let mut report = KacReport { samples: pts.clone(), polynomial: None, degree_bound_used: degree_bound, trusted: false, nonnegative: false, inconsistency: None };
    if let Some(c) = coeffs.iter().find(|c| !c.is_integer()) {
        report.inconsistency = Some(format!("non-integral coefficient {}", c));
        return Ok(report);
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.to_integer()).collect();
    report.polynomial = Some(ints);
    for &(q, a) in &pts[need..] {
        let v = report.eval(q as i64).expect("polynomial present");
        if v != BigInt::from(a) {
            report.inconsistency = Some(format!("fit gives {} at q = {}, counted {}", v, q, a));
            report.polynomial = None;
            return Ok(report);
        }
    }
    let c = report.polynomial.as_ref().expect("polynomial present");
    report.nonnegative = c.iter().all(|x| !x.is_negative());
    report.trusted = pts.len() > need;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCrossCheck {
    /// (i, c_i, number of cells of dimension i).
    pub per_degree: Vec<(usize, BigInt, usize)>,
    pub value_at_one: BigInt,
    pub cell_count: usize,
}

impl CellCrossCheck {
    pub fn matches(&self) -> bool {
        self.value_at_one == BigInt::from(self.cell_count) && self.per_degree.iter().all(|(_, c, n)| *c == BigInt::from(*n))
    }
}

/// Compares c_i with the number of cells of dimension i, and a(1) with the cell count.
pub fn crosscheck_cells<F: Field>(report: &KacReport, mosaic: &Mosaic<F>) -> Result<CellCrossCheck> {
    let c = report.polynomial.as_ref().ok_or_else(|| Error::InvalidInput("report has no polynomial".into()))?;
    let hist = mosaic.dim_histogram();
    let top = c.len().max(hist.len());
    let per_degree = (0..top).map(|i| (i, c.get(i).cloned().unwrap_or_default(), hist.get(i).copied().unwrap_or(0))).collect();
    Ok(CellCrossCheck { per_degree, value_at_one: c.iter().sum(), cell_count: mosaic.cells.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn sample(q: u64, a: u128) -> KacSample {
        KacSample { q, alpha: DimVector(vec![1, 1]), all_classes: a, indec_classes: a, abs_indec_classes: a, point_count: 0 }
    }

    #[test]
    fn line_through_two_points() {
        let r = interpolate(&[sample(2, 3), sample(3, 4)], 1).unwrap();
        assert_eq!(r.polynomial, Some(vec![BigInt::from(1), BigInt::from(1)]));
        assert!(!r.trusted);
        assert!(r.nonnegative);
        let r = interpolate(&[sample(2, 3), sample(3, 4), sample(5, 6)], 1).unwrap();
        assert!(r.trusted);
        let r = interpolate(&[sample(2, 3), sample(3, 4), sample(5, 7)], 1).unwrap();
        assert!(r.polynomial.is_none() && r.inconsistency.is_some());
    }

    #[test]
    fn constant_and_nonintegral() {
        let r = interpolate(&[sample(2, 1), sample(3, 1)], 1).unwrap();
        assert_eq!(r.polynomial, Some(vec![BigInt::from(1)]));
        let r = interpolate(&[sample(2, 1), sample(3, 2), sample(5, 2)], 2).unwrap();
        assert!(r.polynomial.is_none());
        assert!(matches!(interpolate(&[sample(2, 1)], 1), Err(Error::InsufficientSamples { have: 1, need: 2 })));
        assert!(interpolate(&[sample(2, 1), sample(2, 1)], 0).is_err());
    }

    #[test]
    fn shards_cover_everything() {
        let r = shard_ranges(10, 3);
        assert_eq!(r, vec![0..3, 3..6, 6..10]);
        assert_eq!(shard_ranges(2, 5).iter().map(|r| r.end - r.start).sum::<u128>(), 2);
    }

    #[test]
    fn kronecker_counts_and_sharding() {
        let q = Arc::new(Quiver::kronecker(2));
        let f = PrimeField::new(3).unwrap();
        let a = DimVector(vec![1, 1]);
        let s = count_classes(q.clone(), &f, &a, Budget::default()).unwrap();
        assert_eq!((s.abs_indec_classes, s.indec_classes), (4, 4));
        let merged = shard_ranges(9, 4).into_iter().map(|r| count_range(q.clone(), &f, &a, r, Budget::default()).unwrap()).fold(PartialCount::default(), |a, b| a.merge(&b));
        assert_eq!(finish(3, &a, &merged, 9).unwrap(), s);
        assert_eq!(default_degree_bound(&q, &a).unwrap(), 1);
    }

    #[test]
    fn burnside_matches_transversal() {
        let q = Arc::new(Quiver::kronecker(2));
        let f = PrimeField::new(2).unwrap();
        // zero, and the q + 1 points of P^1
        assert_eq!(burnside_check(q.clone(), &f, &DimVector(vec![1, 1]), Budget::default()).unwrap().0, 4);
        let (orbits, weighted) = burnside_check(q, &f, &DimVector(vec![1, 2]), Budget::default()).unwrap();
        assert_eq!(orbits as u128, weighted);
    }
}
