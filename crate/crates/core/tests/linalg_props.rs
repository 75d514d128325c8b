use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varcount_core::congruence::{
    count_solutions, enumerate_solutions, is_solvable, CongruenceSystem,
};
use varcount_core::gen::random_congruence_system;
use varcount_core::intlinalg::{smith_normal_form, verify_snf, IntMatrix};

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

/// A random unimodular matrix: a product of elementary operations.
fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 => rows.swap(a, b),
            1 => rows[a].iter_mut().for_each(|x| *x = -*x),
            _ if a != b => {
                let c = rng.gen_range(-2..=2);
                let src = rows[b].clone();
                rows[a].iter_mut().zip(src).for_each(|(x, y)| *x += c * y);
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(&rows).unwrap()
}

proptest! {
    #[test]
    fn snf_verifies(a in matrix_strategy(6, 9)) {
        prop_assume!(!a.is_zero());
        let s = smith_normal_form(&a).unwrap();
        prop_assert!(verify_snf(&a, &s).unwrap());
        prop_assert!(s.rank() <= a.rows().min(a.cols()));
    }

    #[test]
    fn snf_with_repeated_rows(a in matrix_strategy(4, 20)) {
        prop_assume!(!a.is_zero());
        let doubled = varcount_core::intlinalg::stack_rows(&[a.clone(), a.clone()]).unwrap();
        let s = smith_normal_form(&doubled).unwrap();
        prop_assert!(verify_snf(&doubled, &s).unwrap());
        prop_assert_eq!(s.d, smith_normal_form(&a).unwrap().d);
    }

    #[test]
    fn invariant_factors_survive_scrambling(a in matrix_strategy(5, 6), seed in any::<u64>()) {
        prop_assume!(!a.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_unimodular(&mut rng, a.rows());
        let q = random_unimodular(&mut rng, a.cols());
        let scrambled = p.mul(&a).unwrap().mul(&q).unwrap();
        prop_assert_eq!(smith_normal_form(&scrambled).unwrap().d, smith_normal_form(&a).unwrap().d);
    }

    #[test]
    fn invariant_product_is_determinant(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<BigInt> = (0..n * n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        let a = IntMatrix::new(n, n, data).unwrap();
        let det = a.determinant().unwrap();
        prop_assume!(!det.is_zero());
        let s = smith_normal_form(&a).unwrap();
        prop_assert_eq!(s.rank(), n);
        let prod: BigInt = s.d.iter().product();
        prop_assert_eq!(prod, det.abs());
    }
}

fn random_system(rng: &mut impl Rng) -> CongruenceSystem {
    random_congruence_system(rng, 100_000)
}

#[test]
fn congruence_count_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut solvable = 0;
    for _ in 0..300 {
        let sys = random_system(&mut rng);
        let listed = enumerate_solutions(&sys, 100_000).unwrap();
        let counted = count_solutions(&sys).unwrap();
        assert_eq!(
            BigInt::from(listed.len()),
            BigInt::from(counted.clone()),
            "{sys:?}"
        );
        assert_eq!(is_solvable(&sys).unwrap(), !listed.is_empty());
        solvable += usize::from(!listed.is_empty());
    }
    assert!(solvable > 50);
}

#[test]
fn congruence_count_invariances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let sys = random_system(&mut rng);
        let base = count_solutions(&sys).unwrap();
        let h = sys.matrix();
        let m = sys.modulus().clone();

        // scramble H by a unimodular row transform P (applied to B too)
        let p = random_unimodular(&mut rng, h.rows());
        let scrambled =
            CongruenceSystem::new(p.mul(h).unwrap(), p.mul_vec(sys.rhs()).unwrap(), m.clone())
                .unwrap();
        assert_eq!(is_solvable(&scrambled).unwrap(), is_solvable(&sys).unwrap());
        assert_eq!(count_solutions(&scrambled).unwrap(), base);

        // reverse the rows
        let rows: Vec<Vec<BigInt>> = (0..h.rows()).rev().map(|i| h.row(i).to_vec()).collect();
        let rhs: Vec<BigInt> = sys.rhs().iter().rev().cloned().collect();
        let reversed =
            CongruenceSystem::new(IntMatrix::from_rows(&rows).unwrap(), rhs, m.clone()).unwrap();
        assert_eq!(count_solutions(&reversed).unwrap(), base);

        // shift entries by multiples of m
        let shifted_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x + &m * rng.gen_range(-2i64..=2))
                    .collect()
            })
            .collect();
        let shifted_h = IntMatrix::from_rows(&shifted_rows).unwrap();
        if shifted_h.is_zero() {
            continue;
        }
        let shifted_b: Vec<BigInt> = reversed
            .rhs()
            .iter()
            .map(|x| x + &m * rng.gen_range(-3i64..=3))
            .collect();
        let shifted = CongruenceSystem::new(shifted_h, shifted_b, m.clone()).unwrap();
        assert_eq!(count_solutions(&shifted).unwrap(), base);
    }
}
