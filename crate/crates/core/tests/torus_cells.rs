use std::sync::Arc;

use quivercell_core::cover::{pushdown, CoverRepresentation, CoverWindow};
use quivercell_core::stability::{is_stable, Stability, StabilityWeights};
use quivercell_core::torus::{attracting_space, fixed_points, perturb, poincare, verify_section, AttractorData};
use quivercell_core::{Budget, DimVector, Field, Matrix, PrimeField, Quiver, Rationals, Representation};

fn k3_example<F: Field>(f: &F) -> CoverRepresentation<F> {
    let base = Arc::new(Quiver::kronecker(3));
    let x1 = (0, vec![-1, 0, 0]);
    let x2 = (0, vec![-1, -1, 1]);
    let y1 = (1, vec![0, 0, 0]);
    let y2 = (1, vec![-1, 0, 1]);
    let y3 = (1, vec![-1, -1, 2]);
    let pts = [x1.clone(), x2.clone(), y1, y2, y3];
    let w = Arc::new(CoverWindow::containing(base, &pts).unwrap());
    let one = Matrix::identity(f, 1);
    let support: Vec<_> = pts.iter().map(|p| (p.clone(), 1)).collect();
    CoverRepresentation::from_parts(
        w,
        f,
        &support,
        &[(0, x1.1.clone(), one.clone()), (2, x1.1, one.clone()), (1, x2.1.clone(), one.clone()), (2, x2.1, one)],
        vec![1, 3, 5],
    )
    .unwrap()
}

#[test]
fn k3_example_weights_and_lift() {
    let cr = k3_example(&Rationals);
    assert_eq!(cr.weights(), vec![vec![-1, 1], vec![0, 4, 6]]);
    let t = pushdown(&cr);
    let expect = Representation::from_i64(
        Arc::new(Quiver::kronecker(3)),
        &Rationals,
        &[2, 3],
        &[("a", &[1, 0, 0, 0, 0, 0]), ("b", &[0, 0, 0, 1, 0, 0]), ("c", &[0, 0, 1, 0, 0, 1])],
    )
    .unwrap();
    assert_eq!(t, expect);
}

#[test]
fn k3_example_attracting_cell() {
    let ad = attracting_space(&k3_example(&Rationals)).unwrap();
    let v_t = vec![(0, 1, 0), (0, 1, 1), (0, 2, 0), (0, 2, 1), (1, 1, 0), (1, 2, 0), (1, 2, 1), (2, 2, 0)];
    assert_eq!(ad.v_t, v_t);
    assert_eq!(ad.u_psi, vec![(0, 1, 0), (1, 1, 0), (1, 2, 0), (1, 2, 1)]);
    assert_eq!(ad.cell_dim, 4);
    assert_eq!(ad.section, Some(vec![(0, 1, 1), (0, 2, 1), (1, 2, 0), (1, 2, 1)]));
}

#[test]
fn k3_example_section_meets_orbits_once() {
    for p in [2, 3] {
        let f = PrimeField::new(p).unwrap();
        let ad = attracting_space(&k3_example(&f)).unwrap();
        assert_eq!(verify_section(&ad, Budget::default()).unwrap(), (p as u128).pow(8));
    }
}

fn all_attracted_points_stable(ad: &AttractorData<PrimeField>, theta: &StabilityWeights, step: usize) {
    let f = ad.lift.field();
    let q = f.size().unwrap();
    let n = ad.v_t.len() as u32;
    for k in (0..q.pow(n)).step_by(step) {
        let vals: Vec<u32> = (0..n).map(|i| ((k / q.pow(i)) % q) as u32).collect();
        let m = perturb(&ad.lift, &ad.v_t, &vals);
        assert_eq!(is_stable(&m, theta, Budget::default()).unwrap(), Stability::Stable);
    }
}

#[test]
fn k3_example_attracting_set_is_stable() {
    let th = StabilityWeights(vec![1, 0]);
    for p in [2, 3] {
        let f = PrimeField::new(p).unwrap();
        let ad = attracting_space(&k3_example(&f)).unwrap();
        all_attracted_points_stable(&ad, &th, if p == 2 { 1 } else { 37 });
    }
}

fn k21_cells<F: Field>(f: &F, n: usize) -> Vec<(AttractorData<F>, CoverRepresentation<F>)> {
    let base = Arc::new(Quiver::k21());
    let w = Arc::new(CoverWindow::new(base, 2 * n + 1));
    let fps = fixed_points(w, f, &DimVector(vec![n, n, 1]), &StabilityWeights(vec![1, 0, 1]), &[1, 3, 1], 101, Budget::default()).unwrap();
    fps.into_iter().map(|cr| (attracting_space(&cr).unwrap(), cr)).collect()
}

#[test]
fn k21_two_two_one() {
    let cells = k21_cells(&Rationals, 2);
    assert_eq!(cells.len(), 3);
    let q = Arc::new(Quiver::k21());
    let rep = |a: &[i64], b: &[i64], c: &[i64]| Representation::from_i64(q.clone(), &Rationals, &[2, 2, 1], &[("a", a), ("b", b), ("c", c)]).unwrap();
    let expected = [
        (rep(&[1, 0, 0, 1], &[0, 1, 0, 0], &[0, 1]), vec![]),
        (rep(&[1, 0, 0, 0], &[0, 0, 0, 1], &[1, 1]), vec![(0, 1, 1)]),
        (rep(&[0, 0, 1, 0], &[1, 0, 0, 1], &[1, 0]), vec![(0, 0, 1), (0, 1, 1)]),
    ];
    for (t, section) in expected {
        let hit = cells.iter().find(|(ad, _)| ad.lift == t).unwrap_or_else(|| panic!("missing fixed point {:?}", t));
        assert_eq!(hit.0.section.as_ref().unwrap(), &section);
        assert_eq!(hit.0.cell_dim, section.len());
    }
}

#[test]
fn k21_poincare_polynomials() {
    for n in 1..=4 {
        let dims: Vec<usize> = k21_cells(&Rationals, n).iter().map(|c| c.0.cell_dim).collect();
        let expect: Vec<u64> = (0..=2 * n).map(|k| if k % 2 == 0 { 1 } else { 0 }).collect();
        assert_eq!(poincare(&dims), expect, "n = {}", n);
    }
}

#[test]
fn k21_sections_verified_over_f2() {
    let f = PrimeField::new(2).unwrap();
    for (ad, _) in k21_cells(&f, 2) {
        verify_section(&ad, Budget::default()).unwrap();
        all_attracted_points_stable(&ad, &StabilityWeights(vec![1, 0, 1]), 1);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn t_quiver_fixed_points_and_poincare() {
    for n in 1..=3 {
        let base = Arc::new(Quiver::t_quiver(n));
        let w = Arc::new(CoverWindow::new(base, 4));
        let mut alpha = vec![n];
        alpha.extend(std::iter::repeat(1).take(n + 1));
        let mut theta = vec![0];
        theta.extend(std::iter::repeat(1).take(n + 1));
        let mut gamma = vec![1, 2];
        gamma.extend(std::iter::repeat(0).take(n));
        let fps = fixed_points(w, &Rationals, &DimVector(alpha), &StabilityWeights(theta), &gamma, 101, Budget::default()).unwrap();
        let dims: Vec<usize> = fps.iter().map(|cr| attracting_space(cr).unwrap().cell_dim).collect();
        for m in 0..=n {
            assert_eq!(dims.iter().filter(|&&d| d == m).count() as u64, binomial(n as u64, m as u64), "n = {}, m = {}", n, m);
        }
        let expect: Vec<u64> = (0..=2 * n).map(|k| if k % 2 == 0 { binomial(n as u64, k as u64 / 2) } else { 0 }).collect();
        assert_eq!(poincare(&dims), expect);
    }
}
