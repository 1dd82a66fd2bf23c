mod common;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use expnbhd::homology::{betti_bounded, Gf2Matrix};
use expnbhd::simplicial::{Complex, Simplex};

fn config() -> Config {
    Config { cases: 256, rng_seed: RngSeed::Fixed(common::seed()), ..Config::default() }
}

fn matrix(rows: usize, cols: usize, bits: &[bool]) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if bits[r * cols + c] {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn dense(m: &Gf2Matrix) -> Vec<Vec<bool>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect()
}

fn arb_matrix(max: usize) -> impl Strategy<Value = Gf2Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<bool>(), r * c).prop_map(move |bits| matrix(r, c, &bits))
    })
}

fn product_pair(max: usize) -> impl Strategy<Value = (Gf2Matrix, Gf2Matrix)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(r, k, c)| {
        (prop::collection::vec(any::<bool>(), r * k), prop::collection::vec(any::<bool>(), k * c))
            .prop_map(move |(x, y)| (matrix(r, k, &x), matrix(k, c, &y)))
    })
}

fn arb_facets() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::btree_set(0u32..8, 1..=5), 1..=6)
        .prop_map(|fs| fs.into_iter().map(|s| s.into_iter().collect()).collect())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rank_is_transpose_invariant_and_matches_elimination(a in arb_matrix(40)) {
        let r = a.rank();
        prop_assert_eq!(r, a.transpose().rank());
        prop_assert_eq!(r, common::naive_rank(&dense(&a)));
        prop_assert!(r <= a.rows().min(a.cols()));
    }

    #[test]
    fn rank_of_a_product_is_bounded((a, b) in product_pair(24)) {
        let p = a.mul(&b).unwrap();
        prop_assert!(p.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn euler_characteristic_matches_face_counts(facets in arb_facets()) {
        let c = Complex::from_simplices(
            facets.iter().map(|f| Simplex::new(f.clone()).unwrap()).collect(),
            common::labels(8),
        )
        .unwrap();
        let d = c.dim().unwrap();
        let betti = betti_bounded(&c, d).betti;
        let mut counts = vec![0i64; d + 1];
        for f in common::all_faces(&facets) {
            counts[f.len() - 1] += 1;
        }
        let alt = |xs: &[i64]| xs.iter().enumerate().map(|(k, x)| if k % 2 == 0 { *x } else { -*x }).sum::<i64>();
        let b: Vec<i64> = betti.iter().map(|&x| x as i64).collect();
        prop_assert_eq!(alt(&b), alt(&counts));
    }
}
