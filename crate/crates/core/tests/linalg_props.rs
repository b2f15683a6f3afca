use linsofic::{complete_to_basis, rk_dist, Field, Matrix, PrimeField, Rationals, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Plain modular elimination on `u64` rows, independent of the library.
fn oracle_rank(p: u64, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| m[rank][c] * x % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + p * p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gf(p: u32, rows: usize, cols: usize, seed: u64) -> Matrix<PrimeField> {
    let f = PrimeField::new(p).unwrap();
    Matrix::random(&f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed), 0)
}

fn rat(rows: usize, cols: usize, seed: u64) -> Matrix<Rationals> {
    Matrix::random(&Rationals, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed), 3)
}

fn invertible<F: Field>(f: &F, n: usize, seed: u64) -> Matrix<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = Matrix::random(f, n, n, &mut rng, 3);
        if m.rank() == n {
            return m;
        }
    }
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(101)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rank_matches_oracle(p in prime(), r in 1usize..7, c in 1usize..7, seed in any::<u64>()) {
        let m = gf(p, r, c, seed);
        let rows: Vec<Vec<u64>> = (0..r).map(|i| m.row(i).iter().map(|&x| x as u64).collect()).collect();
        prop_assert_eq!(m.rank(), oracle_rank(p as u64, &rows));
    }

    #[test]
    fn rank_nullity(p in prime(), r in 1usize..7, c in 1usize..7, seed in any::<u64>()) {
        let m = gf(p, r, c, seed);
        prop_assert_eq!(m.rank() + m.nullspace().dim(), c);
        let q = rat(r, c, seed);
        prop_assert_eq!(q.rank() + q.nullspace().dim(), c);
        for v in q.nullspace().basis_vectors() {
            prop_assert!(q.mul_vec(&v).unwrap().iter().all(|x| Rationals.is_zero(x)));
        }
    }

    #[test]
    fn rk_dist_is_a_metric(p in prime(), n in 1usize..6, seeds in any::<[u64; 3]>()) {
        let (a, b, c) = (gf(p, n, n, seeds[0]), gf(p, n, n, seeds[1]), gf(p, n, n, seeds[2]));
        let zero = rk_dist(&a, &a).unwrap();
        prop_assert_eq!(zero, linsofic::rational::int(0));
        let ab = rk_dist(&a, &b).unwrap();
        prop_assert_eq!(&ab, &rk_dist(&b, &a).unwrap());
        prop_assert_eq!(ab == linsofic::rational::int(0), a == b);
        prop_assert!(ab <= linsofic::rational::int(1));
        prop_assert!(rk_dist(&a, &c).unwrap() <= ab + rk_dist(&b, &c).unwrap());
    }

    #[test]
    fn subspaces_are_canonical(p in prime(), n in 1usize..7, k in 1usize..6, seed in any::<u64>()) {
        let f = PrimeField::new(p).unwrap();
        let gens = gf(p, n, k, seed);
        let mix = invertible(&f, k, seed ^ 0x5eed);
        let mixed = gens.mul(&mix).unwrap();
        let s = Subspace::from_vectors(&f, n, &gens.columns().collect::<Vec<_>>());
        let t = Subspace::from_vectors(&f, n, &mixed.columns().collect::<Vec<_>>());
        prop_assert_eq!(&s, &t);
        prop_assert_eq!(s.dim(), gens.rank());
        for v in gens.columns() {
            prop_assert!(s.contains(&v));
        }
    }

    #[test]
    fn completion_is_invertible(p in prime(), n in 1usize..7, k in 0usize..7, seed in any::<u64>()) {
        let f = PrimeField::new(p).unwrap();
        let k = k.min(n);
        let independent = Subspace::from_vectors(&f, n, &gf(p, n, k, seed).columns().collect::<Vec<_>>());
        let start = independent.basis().clone();
        let full = complete_to_basis(&start).unwrap();
        prop_assert_eq!(full.rank(), n);
        for j in 0..start.cols() {
            prop_assert_eq!(full.column(j), start.column(j));
        }
        let q_start = Subspace::from_vectors(&Rationals, n, &rat(n, k, seed).columns().collect::<Vec<_>>()).basis().clone();
        prop_assert_eq!(complete_to_basis(&q_start).unwrap().rank(), n);
    }

    #[test]
    fn rank_is_subadditive(p in prime(), n in 1usize..7, seeds in any::<[u64; 2]>()) {
        let (a, b) = (gf(p, n, n, seeds[0]), gf(p, n, n, seeds[1]));
        prop_assert!(a.add(&b).unwrap().rank() <= a.rank() + b.rank());
        prop_assert!(a.mul(&b).unwrap().rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn rank_is_invariant_under_equivalence(p in prime(), r in 1usize..6, c in 1usize..6, seed in any::<u64>()) {
        let f = PrimeField::new(p).unwrap();
        let a = gf(p, r, c, seed);
        let pm = invertible(&f, r, seed.wrapping_add(1));
        let qm = invertible(&f, c, seed.wrapping_add(2));
        prop_assert_eq!(pm.mul(&a).unwrap().mul(&qm).unwrap().rank(), a.rank());
        let inv = pm.inverse().unwrap();
        prop_assert_eq!(pm.mul(&inv).unwrap(), Matrix::identity(&f, r));
    }
}
