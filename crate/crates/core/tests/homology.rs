mod common;

use rand::seq::SliceRandom;
use rand::Rng;

use expnbhd::homology::*;
use expnbhd::simplicial::{build_delta, faces_up_to, Complex, Simplex};
use expnbhd::Error;

fn random_complex(rng: &mut impl Rng, nv: u32, nf: usize, max_size: usize) -> Complex {
    let facets: Vec<Simplex> = (0..nf)
        .map(|_| {
            let mut pool: Vec<u32> = (0..nv).collect();
            pool.shuffle(rng);
            let k = rng.gen_range(1..=max_size);
            Simplex::new(pool[..k].to_vec()).unwrap()
        })
        .collect();
    Complex::from_simplices(facets, common::labels(nv as usize)).unwrap()
}

fn facet_lists(c: &Complex) -> Vec<Vec<u32>> {
    c.facets().iter().map(|f| f.vertices().to_vec()).collect()
}

#[test]
fn rank_matches_naive_elimination() {
    let mut rng = common::rng(3);
    for trial in 0..1000 {
        let rows = rng.gen_range(1..=64);
        let cols = rng.gen_range(1..=64);
        let p = [0.05, 0.2, 0.5][trial % 3];
        let dense: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(p)).collect()).collect();
        let m = Gf2Matrix::from_fn(rows, cols, |r, c| dense[r][c]);
        let want = common::naive_rank(&dense);
        assert_eq!(rank_gf2(&m), want, "trial {trial}");
        assert_eq!(m.transpose().rank(), want);
        let sparse = SparseColumns {
            nrows: rows,
            columns: (0..cols)
                .map(|c| (0..rows as u32).filter(|&r| dense[r as usize][c]).collect())
                .collect(),
        };
        assert_eq!(sparse.rank(), want);
    }
}

#[test]
fn low_rank_products() {
    let mut rng = common::rng(4);
    for _ in 0..50 {
        let k = rng.gen_range(1..8);
        let a = Gf2Matrix::from_fn(40, k, |_, _| rng.gen_bool(0.5));
        let b = Gf2Matrix::from_fn(k, 50, |_, _| rng.gen_bool(0.5));
        let r = a.mul(&b).unwrap().rank();
        assert!(r <= k);
        let dense: Vec<Vec<bool>> = {
            let p = a.mul(&b).unwrap();
            (0..40).map(|i| (0..50).map(|j| p.get(i, j)).collect()).collect()
        };
        assert_eq!(r, common::naive_rank(&dense));
    }
}

#[test]
fn boundary_of_boundary_vanishes() {
    let mut rng = common::rng(5);
    let mut complexes: Vec<Complex> = (0..40).map(|_| random_complex(&mut rng, 8, 6, 5)).collect();
    complexes.push(build_delta(3).unwrap().complex);
    for c in &complexes {
        let top = c.dim().unwrap();
        for k in 1..top {
            let a = boundary_matrix(c, k).unwrap();
            let b = boundary_matrix(c, k + 1).unwrap();
            assert_eq!(a.cols, b.rows);
            assert!(a.matrix.mul(&b.matrix).unwrap().is_zero(), "k={k}");
        }
        let faces = faces_up_to(c, top).unwrap();
        for k in 1..top {
            let a = sparse_boundary(&faces, k).to_dense();
            let b = sparse_boundary(&faces, k + 1).to_dense();
            assert!(a.mul(&b).unwrap().is_zero());
        }
    }
}

#[test]
fn betti_matches_definition_on_random_complexes() {
    let mut rng = common::rng(6);
    for _ in 0..100 {
        let nf = rng.gen_range(2..9);
        let c = random_complex(&mut rng, 9, nf, 5);
        let d = c.dim().unwrap();
        assert_eq!(betti_bounded(&c, d).betti, common::naive_betti(&facet_lists(&c), d));
    }
}

#[test]
fn betti_ignores_facet_order_and_labels() {
    let mut rng = common::rng(7);
    let mut cases: Vec<Complex> = (0..30).map(|_| random_complex(&mut rng, 9, 7, 5)).collect();
    cases.push(build_delta(3).unwrap().complex);
    for c in cases {
        let d = c.dim().unwrap().min(3);
        let want = betti_bounded(&c, d).betti;
        let nv = c.vertex_labels().len();
        let mut perm: Vec<u32> = (0..nv as u32).collect();
        perm.shuffle(&mut rng);
        let mut facets: Vec<Simplex> = c
            .facets()
            .iter()
            .map(|f| Simplex::new(f.vertices().iter().map(|&v| perm[v as usize]).collect()).unwrap())
            .collect();
        facets.shuffle(&mut rng);
        let relabeled = Complex::from_simplices(facets, common::labels(nv)).unwrap();
        assert_eq!(betti_bounded(&relabeled, d).betti, want);
    }
}

#[test]
fn truncated_tables_never_extrapolate() {
    let delta = build_delta(3).unwrap();
    let t = betti_bounded_with(&delta.complex, 2, 400);
    assert!(t.betti.len() < 3);
    assert_eq!(t.max_verified_dim.map(|d| d + 1), Some(t.betti.len()).filter(|&l| l > 0));
    let none = betti_bounded_with(&delta.complex, 2, 1);
    assert!(none.betti.is_empty());
    assert_eq!(none.max_verified_dim, None);
    let full = betti_bounded(&delta.complex, 2);
    assert_eq!(full.max_verified_dim, Some(2));
    assert_eq!(&full.betti[..t.betti.len()], &t.betti[..]);
}

#[test]
fn chain_complex_rejects_nonzero_composition() {
    let d1 = Gf2Matrix::from_entries(1, 1, &[(0, 0)]).unwrap();
    let d2 = Gf2Matrix::from_entries(1, 1, &[(0, 0)]).unwrap();
    let err = ChainComplex::new(vec![1, 1, 1], vec![d1, d2]).unwrap_err();
    assert!(matches!(err, Error::InvalidChain { dim: 1 }));
    let bad_shape = Gf2Matrix::zeros(2, 2);
    assert!(ChainComplex::new(vec![1, 1], vec![bad_shape]).is_err());
}

#[test]
fn simplicial_chain_complex_agrees_with_direct_betti() {
    let c = build_delta(3).unwrap().complex;
    let faces = faces_up_to(&c, 2).unwrap();
    let dims = faces.counts();
    let boundaries: Vec<Gf2Matrix> = (1..=2).map(|k| sparse_boundary(&faces, k).to_dense()).collect();
    let t = betti_of_chain(&dims, &boundaries).unwrap();
    assert_eq!(t.betti, vec![1, 1, 14]);
    let json = serde_json::to_string(&ChainComplex::new(dims, boundaries).unwrap().to_json()).unwrap();
    let back = ChainComplex::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back.betti().betti, vec![1, 1, 14]);
}

#[test]
fn betti_csv_has_a_header() {
    let mut out = Vec::new();
    BettiTable::new(Method::Bruteforce, vec![1, 1]).write_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "dim,betti,method\n0,1,bruteforce\n1,1,bruteforce\n");
}
