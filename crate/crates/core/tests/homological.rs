use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use quivercell_core::ext::{assemble_d, hom_basis, hom_dim};
use quivercell_core::homalg::{connecting_hom, connecting_hom_dual, ext_basis_of_extension, is_isomorphic, pullback_class, Block, ExtBases};
use quivercell_core::labeled::{coefficient_quiver, is_tree};
use quivercell_core::quiver::euler_form;
use quivercell_core::rep::extension;
use quivercell_core::{Budget, DimVector, Field, Matrix, PrimeField, Quiver, RElement, Rationals, Representation};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

// K(3) with arrows a, b, c; basis labels 1 | 2 for T1 and 1' | 2', 3' for T2
fn t1<F: Field>(f: &F) -> Representation<F> {
    Representation::from_i64(Arc::new(Quiver::kronecker(3)), f, &[1, 1], &[("a", &[1])]).unwrap()
}

fn t2<F: Field>(f: &F) -> Representation<F> {
    Representation::from_i64(Arc::new(Quiver::kronecker(3)), f, &[1, 2], &[("a", &[0, 1]), ("b", &[1, 0])]).unwrap()
}

fn u<F: Field>(f: &F, src: &Representation<F>, tgt: &Representation<F>, arrow: usize, row: usize, col: usize) -> RElement<F> {
    RElement::unit(&Quiver::kronecker(3), f, src.dims(), tgt.dims(), arrow, row, col)
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

#[test]
fn worked_example_ext_basis() {
    let f = Rationals;
    let (t1, t2) = (t1(&f), t2(&f));
    // sub M = T2, quotient N = T1, e = 1 -c-> 2'
    let e = u(&f, &t1, &t2, C, 0, 0);
    let bases = ExtBases {
        r_n: vec![u(&f, &t1, &t1, B, 0, 0), u(&f, &t1, &t1, C, 0, 0)],
        r_m: vec![u(&f, &t2, &t2, C, 0, 0), u(&f, &t2, &t2, C, 1, 0)],
        r_nm: vec![e.clone(), u(&f, &t1, &t2, C, 1, 0), u(&f, &t1, &t2, B, 1, 0)],
        r_mn: vec![u(&f, &t2, &t1, C, 0, 0)],
    };
    let b = extension(&t2, &t1, &e).unwrap();
    assert!(is_tree(&coefficient_quiver(&b, None).unwrap()));
    let out = ext_basis_of_extension(&t2, &t1, &e, &bases).unwrap();
    assert_eq!(out.len(), assemble_d(&b, &b).unwrap().ext_dim);
    // B basis: vertex 0 = (1', 1), vertex 1 = (2', 3', 2)
    let got: BTreeSet<(usize, usize, usize)> = out
        .iter()
        .map(|(_, x)| {
            let nz: Vec<_> = (0..3).flat_map(|a| (0..3).flat_map(move |r| (0..2).map(move |c| (a, r, c)))).filter(|&(a, r, c)| !f.is_zero(x.blocks[a].get(r, c))).collect();
            assert_eq!(nz.len(), 1);
            nz[0]
        })
        .collect();
    let expect: BTreeSet<_> = [(B, 2, 1), (C, 2, 1), (C, 2, 0), (C, 1, 1), (B, 1, 1), (C, 1, 0)].into_iter().collect();
    assert_eq!(got, expect);
    assert!(out.iter().any(|(blk, _)| *blk == Block::MN));
}

#[test]
fn worked_example_connecting_maps() {
    let f = Rationals;
    let (t1, t2) = (t1(&f), t2(&f));
    let e = u(&f, &t1, &t2, C, 0, 0);
    let h = hom_basis(&t2, &t1).unwrap();
    assert_eq!(h.len(), 1);
    // f(1') = 1, f(3') = 2, f(2') = 0
    let g = &h[0];
    let c0 = g.components[0].get(0, 0).clone();
    assert!(!f.is_zero(&c0));
    assert!(f.is_zero(g.components[1].get(0, 0)));
    assert_eq!(g.components[1].get(0, 1), &c0);
    let (d1, _) = connecting_hom_dual(&t1, &t2, &e, &assemble_d(&t1, &t1).unwrap()).unwrap();
    assert!(d1.is_zero());
    let ep = assemble_d(&t1, &t2).unwrap();
    let (d2, basis) = connecting_hom_dual(&t2, &t2, &e, &ep).unwrap();
    assert_eq!(basis.len(), 1);
    let id_coeff = basis[0].components[0].get(0, 0).clone();
    let col: Vec<_> = d2.col(0).iter().map(|x| f.mul(x, &f.inv(&id_coeff).unwrap())).collect();
    assert_eq!(col, ep.ext_coords(&e));
}

fn random_quiver(rng: &mut ChaCha8Rng) -> Quiver {
    let nv = 1 + (rng.next_u32() % 3) as usize;
    let na = (rng.next_u32() % 5) as usize;
    let names: Vec<String> = (0..nv).map(|i| format!("{}", i)).collect();
    let arrows: Vec<(String, String, String)> = (0..na)
        .map(|k| (format!("x{}", k), names[(rng.next_u32() as usize) % nv].clone(), names[(rng.next_u32() as usize) % nv].clone()))
        .collect();
    Quiver::new(&names, &arrows).unwrap()
}

fn random_rep<F: Field>(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, f: &F, max_dim: u32) -> Representation<F> {
    let dims: Vec<usize> = (0..q.n_vertices()).map(|_| (rng.next_u32() % (max_dim + 1)) as usize).collect();
    random_rep_of(rng, q, f, &dims)
}

fn random_rep_of<F: Field>(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, f: &F, dims: &[usize]) -> Representation<F> {
    let mats = q
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.tgt], dims[a.src]);
            let e = (0..r * c).map(|_| f.from_i64((rng.next_u32() % 5) as i64)).collect();
            Matrix::from_entries(f, r, c, e)
        })
        .collect();
    Representation::new(q.clone(), f, DimVector(dims.to_vec()), mats).unwrap()
}

fn random_relement<F: Field>(rng: &mut ChaCha8Rng, f: &F, n: &Representation<F>, m: &Representation<F>) -> RElement<F> {
    let z = RElement::zero_between(n, m);
    let v: Vec<F::Elem> = (0..z.space_dim()).map(|_| f.from_i64((rng.next_u32() % 5) as i64)).collect();
    z.with_coords(&v)
}

fn euler_holds<F: Field>(f: &F, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = Arc::new(random_quiver(&mut rng));
    let n = random_rep(&mut rng, &q, f, 4);
    let m = random_rep(&mut rng, &q, f, 4);
    let ep = assemble_d(&n, &m).unwrap();
    let lhs = hom_dim(&n, &m) as i64 - ep.ext_dim as i64;
    assert_eq!(lhs, euler_form(&q, n.dims(), m.dims()).unwrap(), "seed {}", seed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn euler_form_over_q(seed in any::<u64>()) {
        euler_holds(&Rationals, seed);
    }

    #[test]
    fn euler_form_over_f5(seed in any::<u64>()) {
        euler_holds(&PrimeField::new(5).unwrap(), seed);
    }

    #[test]
    fn connecting_hom_is_pullback(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new([2, 3, 5][(seed % 3) as usize]).unwrap();
        let q = Arc::new(random_quiver(&mut rng));
        let n = random_rep(&mut rng, &q, &f, 2);
        let m = random_rep(&mut rng, &q, &f, 2);
        // L = N half of the time so that Hom(L, N) ≠ 0
        let l = if rng.next_u32() % 2 == 0 { n.clone() } else { random_rep(&mut rng, &q, &f, 2) };
        let e = random_relement(&mut rng, &f, &n, &m);
        let ep = assemble_d(&l, &m).unwrap();
        let (delta, basis) = connecting_hom(&l, &n, &e, &ep).unwrap();
        for (j, g) in basis.iter().enumerate() {
            let tau = pullback_class(&m, &n, &e, g).unwrap();
            prop_assert_eq!(delta.col(j), ep.ext_coords(&tau));
        }
    }

    #[test]
    fn split_iff_trivial_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new([2, 3][(seed % 2) as usize]).unwrap();
        let q = Arc::new(Quiver::kronecker(2));
        let n = random_rep(&mut rng, &q, &f, 1);
        let m = random_rep(&mut rng, &q, &f, 1);
        let e = random_relement(&mut rng, &f, &n, &m);
        let trivial = assemble_d(&n, &m).unwrap().is_trivial(&e);
        let b = extension(&m, &n, &e).unwrap();
        let split = is_isomorphic(&b, &m.direct_sum(&n).unwrap(), Budget::default(), seed).unwrap();
        prop_assert_eq!(trivial, split);
    }
}

#[test]
fn pullback_along_identity_is_the_class() {
    let f = PrimeField::new(3).unwrap();
    let (t1, t2) = (t1(&f), t2(&f));
    let e = u(&f, &t1, &t2, C, 0, 0).add(&u(&f, &t1, &t2, A, 1, 0));
    let id = quivercell_core::Morphism::identity(&t1);
    let tau = pullback_class(&t2, &t1, &e, &id).unwrap();
    let ep = assemble_d(&t1, &t2).unwrap();
    assert_eq!(ep.ext_coords(&tau), ep.ext_coords(&e));
}
