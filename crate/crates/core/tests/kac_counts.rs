use std::sync::Arc;

use num_bigint::BigInt;
use quivercell_core::cells::{grassmann_mosaic, kronecker22_mosaic, subspace_tnf, Cell, Sampling};
use quivercell_core::kac::{count_classes, crosscheck_cells, default_degree_bound, interpolate, KacSample};
use quivercell_core::{Budget, DimVector, PrimeField, Quiver, RElement, Representation};

fn counts(q: &Arc<Quiver>, alpha: &[usize], primes: &[u32]) -> Vec<KacSample> {
    primes.iter().map(|&p| count_classes(q.clone(), &PrimeField::new(p).unwrap(), &DimVector(alpha.to_vec()), Budget(1 << 40)).unwrap()).collect()
}

fn poly(c: &[i64]) -> Option<Vec<BigInt>> {
    Some(c.iter().map(|&x| BigInt::from(x)).collect())
}

#[test]
fn kronecker_one_one() {
    let q = Arc::new(Quiver::kronecker(2));
    let s = counts(&q, &[1, 1], &[2, 3, 5]);
    for x in &s {
        assert_eq!(x.abs_indec_classes, x.q as u128 + 1);
        assert_eq!(x.indec_classes, x.abs_indec_classes);
    }
    let bound = default_degree_bound(&q, &DimVector(vec![1, 1])).unwrap();
    assert_eq!(bound, 1);
    let r = interpolate(&s, bound).unwrap();
    assert_eq!(r.polynomial, poly(&[1, 1]));
    assert!(r.trusted && r.nonnegative);
}

#[test]
fn kronecker_two_two() {
    let q = Arc::new(Quiver::kronecker(2));
    let s = counts(&q, &[2, 2], &[2, 3]);
    for x in &s {
        assert_eq!(x.abs_indec_classes, x.q as u128 + 1);
        // the degree-2 points of P^1 give non-absolute indecomposables
        assert_eq!(x.indec_classes - x.abs_indec_classes, (x.q as u128 * x.q as u128 - x.q as u128) / 2);
    }
    let r = interpolate(&s, 1).unwrap();
    assert_eq!(r.polynomial, poly(&[1, 1]));
    let c = crosscheck_cells(&r, &kronecker22_mosaic(&PrimeField::new(2).unwrap())).unwrap();
    assert!(c.matches(), "{:?}", c);
}

#[test]
fn subspace_quiver() {
    let q3 = Arc::new(Quiver::subspace(3));
    for x in counts(&q3, &[2, 1, 1, 1], &[2, 3]) {
        assert_eq!(x.abs_indec_classes, 1);
    }
    let q4 = Arc::new(Quiver::subspace(4));
    let alpha = [2, 1, 1, 1, 1];
    let s = counts(&q4, &alpha, &[2, 3]);
    for x in &s {
        assert_eq!(x.indec_classes, x.abs_indec_classes);
    }
    let r = interpolate(&s, default_degree_bound(&q4, &DimVector(alpha.to_vec())).unwrap()).unwrap();
    assert_eq!(r.polynomial, poly(&[4, 1]));
    let f = PrimeField::new(2).unwrap();
    let c = crosscheck_cells(&r, &subspace_tnf(4, &f, &Sampling::default()).unwrap()).unwrap();
    assert!(c.matches(), "{:?}", c);
    let r3 = interpolate(&counts(&q3, &[2, 1, 1, 1], &[2, 3]), 1).unwrap();
    assert!(crosscheck_cells(&r3, &subspace_tnf(3, &f, &Sampling::default()).unwrap()).unwrap().matches());
}

#[test]
fn grassmannian_counts() {
    let q = Arc::new(Quiver::kronecker(4));
    let s = counts(&q, &[1, 2], &[2, 3]);
    assert_eq!(s[0].abs_indec_classes, 35);
    assert_eq!(s[1].abs_indec_classes, 130);
    // Gaussian binomial [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
    let f = PrimeField::new(2).unwrap();
    let m = Cell::point(Representation::simple(q.clone(), &f, 1));
    let n = Cell::point(Representation::simple(q.clone(), &f, 0));
    let basis: Vec<_> = (0..4).map(|a| RElement::unit(&q, &f, n.base.dims(), m.base.dims(), a, 0, 0)).collect();
    let mosaic = grassmann_mosaic(&m, &n, &basis, 2, &Sampling::default()).unwrap();
    assert_eq!(mosaic.dim_histogram(), vec![1, 1, 2, 1, 1]);
}
