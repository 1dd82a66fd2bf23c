mod common;

use rand::seq::SliceRandom;
use rand::Rng;

use expnbhd::homology::betti_bounded;
use expnbhd::morse::*;
use expnbhd::simplicial::{Complex, Simplex};
use expnbhd::Error;

fn complex(facets: &[Vec<u32>], nv: usize) -> Complex {
    Complex::from_simplices(
        facets.iter().map(|f| Simplex::new(f.clone()).unwrap()).collect(),
        common::labels(nv),
    )
    .unwrap()
}

fn random_complex(rng: &mut impl Rng) -> Complex {
    let nv = rng.gen_range(4..=8u32);
    let nf = rng.gen_range(1..=6);
    let facets: Vec<Vec<u32>> = (0..nf)
        .map(|_| {
            let mut pool: Vec<u32> = (0..nv).collect();
            pool.shuffle(rng);
            pool[..rng.gen_range(1..=4)].to_vec()
        })
        .collect();
    complex(&facets, nv as usize)
}

/// Pairs `σ` with `σ ∪ {v}` one vertex at a time; such matchings are acyclic.
fn vertex_matching(p: &FacePoset, order: &[u32]) -> Matching {
    let mut used = vec![false; p.len()];
    let mut pairs = Vec::new();
    for &v in order {
        for id in 0..p.len() {
            if used[id] || p.cell(id).contains(&v) {
                continue;
            }
            let up = p.simplex(id).with(v);
            if let Some(t) = p.id_of_simplex(&up) {
                if !used[t] {
                    used[id] = true;
                    used[t] = true;
                    pairs.push((id, t));
                }
            }
        }
    }
    Matching::new(pairs)
}

fn random_matching(p: &FacePoset, rng: &mut impl Rng) -> Matching {
    let mut covers: Vec<(usize, usize)> = (0..p.len())
        .flat_map(|t| p.facets_of(t).into_iter().map(move |s| (s, t)))
        .collect();
    covers.shuffle(rng);
    let mut used = vec![false; p.len()];
    let mut pairs = Vec::new();
    for (s, t) in covers {
        if !used[s] && !used[t] && rng.gen_bool(0.6) {
            used[s] = true;
            used[t] = true;
            pairs.push((s, t));
        }
    }
    Matching::new(pairs)
}

fn assert_is_cycle(p: &FacePoset, m: &Matching, cycle: &[usize]) {
    assert!(cycle.len() >= 4 && cycle.len() % 2 == 0);
    let idx = MatchIndex::new(p, m).unwrap();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if idx.up(a) == Some(b) {
            continue;
        }
        assert!(idx.is_matched_down(a), "{a} -> {b}");
        assert!(p.covers(b, a));
        assert_ne!(idx.up(b), Some(a));
    }
}

#[test]
fn face_poset_counts() {
    let c = complex(&[vec![0, 1, 2], vec![2, 3]], 4);
    let p = face_poset(&c).unwrap();
    assert_eq!(p.counts(), vec![4, 4, 1]);
    assert_eq!(p.len(), 9);
    let tri = p.id_of(&[0, 1, 2]).unwrap();
    assert_eq!(p.facets_of(tri).len(), 3);
    assert_eq!(p.cofaces_of(p.id_of(&[2]).unwrap()).len(), 3);
    assert_eq!(p.describe(p.id_of(&[2, 3]).unwrap()), "{3,4}");
}

#[test]
fn invalid_matchings_are_reported() {
    let c = complex(&[vec![0, 1, 2]], 3);
    let p = face_poset(&c).unwrap();
    let v0 = p.id_of(&[0]).unwrap();
    let tri = p.id_of(&[0, 1, 2]).unwrap();
    let e01 = p.id_of(&[0, 1]).unwrap();
    let r = validate_matching(&p, &Matching::new(vec![(v0, tri)]));
    assert_eq!(r.violations, vec![Violation::NotACover { sigma: v0, tau: tri }]);
    let r = validate_matching(&p, &Matching::new(vec![(v0, e01), (e01, tri)]));
    assert_eq!(r.violations, vec![Violation::DoublyMatched { cell: e01 }]);
    assert!(matches!(
        critical_cells(&p, &Matching::new(vec![(v0, tri)])),
        Err(Error::PreconditionViolation(_))
    ));
}

#[test]
fn vertex_matchings_are_acyclic_and_compute_homology() {
    let mut rng = common::rng(8);
    for _ in 0..200 {
        let c = random_complex(&mut rng);
        let p = face_poset(&c).unwrap();
        let mut order: Vec<u32> = c.used_vertices();
        order.shuffle(&mut rng);
        order.truncate(rng.gen_range(1..=order.len()));
        let m = vertex_matching(&p, &order);
        let a = is_acyclic(&p, &m).unwrap();
        assert!(a.acyclic && a.cycle.is_none());
        let crit = critical_cells(&p, &m).unwrap();
        check_partition(&p, &m, &crit).unwrap();
        let morse = morse_boundaries(&p, &m).unwrap();
        let d = c.dim().unwrap();
        let want = betti_bounded(&c, d);
        assert_eq!(morse.chain.betti().trimmed(), want.trimmed());
        assert_eq!(want.betti, common::naive_betti(&c.facets().iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>(), d));
    }
}

#[test]
fn random_matchings_either_certify_or_exhibit_a_cycle() {
    let mut rng = common::rng(9);
    let (mut acyclic, mut cyclic) = (0, 0);
    for _ in 0..400 {
        let c = random_complex(&mut rng);
        let p = face_poset(&c).unwrap();
        let m = random_matching(&p, &mut rng);
        assert!(validate_matching(&p, &m).is_ok());
        let a = is_acyclic(&p, &m).unwrap();
        if a.acyclic {
            acyclic += 1;
            let morse = morse_boundaries(&p, &m).unwrap();
            assert_eq!(morse.chain.betti().trimmed(), betti_bounded(&c, c.dim().unwrap()).trimmed());
        } else {
            cyclic += 1;
            assert_is_cycle(&p, &m, a.cycle.as_ref().unwrap());
            assert!(matches!(morse_boundaries(&p, &m), Err(Error::PreconditionViolation(_))));
        }
    }
    assert!(acyclic > 20 && cyclic > 20, "{acyclic} acyclic, {cyclic} cyclic");
}

#[test]
fn square_boundary_cycle_fixture() {
    // boundary of a square: a matching pushing every vertex along the same direction cycles
    let c = complex(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], 4);
    let p = face_poset(&c).unwrap();
    let id = |v: &[u32]| p.id_of(v).unwrap();
    let m = Matching::new(vec![
        (id(&[0]), id(&[0, 1])),
        (id(&[1]), id(&[1, 2])),
        (id(&[2]), id(&[2, 3])),
        (id(&[3]), id(&[0, 3])),
    ]);
    let a = is_acyclic(&p, &m).unwrap();
    assert!(!a.acyclic);
    let cycle = a.cycle.unwrap();
    assert_eq!(cycle.len(), 8);
    assert_is_cycle(&p, &m, &cycle);
}

#[test]
fn parity_and_enumeration_agree() {
    let mut rng = common::rng(10);
    let mut checked = 0;
    for _ in 0..200 {
        let c = random_complex(&mut rng);
        let p = face_poset(&c).unwrap();
        let mut order = c.used_vertices();
        order.shuffle(&mut rng);
        order.truncate(2);
        let m = vertex_matching(&p, &order);
        let crit = critical_cells(&p, &m).unwrap();
        for d in 1..crit.by_dim.len() {
            for &tau in &crit.by_dim[d] {
                for &sigma in &crit.by_dim[d - 1] {
                    let paths = enumerate_alternating_paths(&p, &m, tau, sigma, 100_000).unwrap();
                    let parity = alternating_path_parity(&p, &m, tau, sigma).unwrap();
                    assert_eq!(paths.len() % 2 == 1, parity);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn critical_set_orders_by_dimension_then_vertices() {
    let c = complex(&[vec![0, 1, 2], vec![2, 3]], 4);
    let p = face_poset(&c).unwrap();
    let crit = critical_cells(&p, &Matching::default()).unwrap();
    assert_eq!(crit.counts(), vec![4, 4, 1]);
    let simplices = crit.simplices(&p);
    for dim in &simplices {
        assert!(dim.windows(2).all(|w| w[0].vertices() < w[1].vertices()));
    }
}
