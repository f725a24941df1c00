use std::sync::Arc;

use quivercell_core::cells::{apply_verification, grassmann_mosaic, kronecker22_mosaic, subspace_tnf, tree_cell_recursion, verify_mosaic, Cell, Sampling};
use quivercell_core::{Budget, PrimeField, Quiver, RElement, Representation};

fn simple_cells(p: u32, arrows: usize) -> (Cell<PrimeField>, Cell<PrimeField>, Vec<RElement<PrimeField>>) {
    let f = PrimeField::new(p).unwrap();
    let q = Arc::new(Quiver::kronecker(arrows));
    let m = Cell::point(Representation::simple(q.clone(), &f, 1));
    let n = Cell::point(Representation::simple(q.clone(), &f, 0));
    let basis = (0..arrows).map(|a| RElement::unit(&q, &f, n.base.dims(), m.base.dims(), a, 0, 0)).collect();
    (m, n, basis)
}

#[test]
fn subspace_four_is_tnf_at_q2() {
    let f = PrimeField::new(2).unwrap();
    let mut m = subspace_tnf(4, &f, &Sampling::default()).unwrap();
    assert_eq!(m.cells.len(), 5);
    let r = verify_mosaic(&m, Budget(1 << 40)).unwrap();
    assert_eq!((r.covered, r.total_indec_classes, r.multiply_covered), (6, 6, 0));
    assert!(r.is_tnf());
    apply_verification(&mut m, &r);
    assert!(m.cells.iter().all(|c| c.strong.is_positive() && c.separating.is_positive()));
}

#[test]
fn grassmannian_k4_one_two() {
    let (m, n, basis) = simple_cells(2, 4);
    let mosaic = grassmann_mosaic(&m, &n, &basis, 2, &Sampling::default()).unwrap();
    let mut dims = mosaic.cell_dims();
    dims.sort();
    assert_eq!(dims, vec![0, 1, 2, 2, 3, 4]);
    let r = verify_mosaic(&mosaic, Budget(1 << 40)).unwrap();
    assert!(r.is_tnf(), "{:?}", r);
    assert_eq!(r.covered, 35);
}

#[test]
fn kronecker_two_two() {
    for p in [2, 3] {
        let f = PrimeField::new(p).unwrap();
        let r = verify_mosaic(&kronecker22_mosaic(&f), Budget(1 << 40)).unwrap();
        assert!(r.is_tnf(), "{:?}", r);
        assert_eq!(r.covered as u32, p + 1);
        // degree-2 points of P^1 are indecomposable but not absolutely so
        assert_eq!(r.non_absolute_classes as u32, (p * p - p) / 2);
    }
}

#[test]
fn tree_recursion_on_kronecker() {
    let (m, n, basis) = simple_cells(3, 2);
    let mosaic = tree_cell_recursion(&n, &m, &basis, &Sampling::default()).unwrap();
    assert_eq!(mosaic.cell_dims(), vec![0, 1]);
}
