mod common;

use expnbhd::graph::*;
use expnbhd::hom::*;
use expnbhd::homology::betti_bounded;
use expnbhd::simplicial::neighborhood_complex;

fn hom_betti(g: &Graph, h: &Graph, maxdim: usize) -> Vec<usize> {
    let cells = enumerate_hom_cells(g, h).unwrap();
    let oc = order_complex_of_hom(&cells, h).unwrap();
    betti_bounded(&oc, maxdim).trimmed()
}

fn nbhd_betti(g: &Graph, maxdim: usize) -> Vec<usize> {
    betti_bounded(&neighborhood_complex(g), maxdim).trimmed()
}

#[test]
fn lovasz_equivalence_on_the_corpus() {
    let graphs = common::lovasz_corpus();
    assert!(graphs.len() >= 20);
    for (name, g) in &graphs {
        let d = 4;
        assert_eq!(hom_betti(&complete_graph(2).unwrap(), g, d), nbhd_betti(g, d), "{name}");
    }
}

#[test]
fn known_neighborhood_complexes() {
    assert_eq!(nbhd_betti(&complete_graph(4).unwrap(), 3), vec![1, 0, 1]);
    assert_eq!(nbhd_betti(&cycle_graph(6).unwrap(), 2), vec![2, 2]);
    assert_eq!(nbhd_betti(&cycle_graph(5).unwrap(), 2), vec![1, 1]);
}

#[test]
fn hom_k2_k4_is_a_sphere() {
    assert_eq!(hom_betti(&complete_graph(2).unwrap(), &complete_graph(4).unwrap(), 3), vec![1, 0, 1]);
}

#[test]
fn torus_from_both_sides() {
    let k2 = complete_graph(2).unwrap();
    let k3 = complete_graph(3).unwrap();
    let square = categorical_product(&k2, &k2);
    let exp = exponential_graph(&k2, &k3).unwrap();
    assert_eq!(hom_betti(&square, &k3, 3), vec![1, 2, 1]);
    assert_eq!(hom_betti(&k2, &exp, 3), vec![1, 2, 1]);
    assert_eq!(nbhd_betti(&exp, 3), vec![1, 2, 1]);
}

#[test]
fn hom_cells_are_valid_and_closed_under_faces() {
    let k2 = complete_graph(2).unwrap();
    for h in [complete_graph(4).unwrap(), cycle_graph(5).unwrap(), fold_core_exponential(3, 2).unwrap().graph] {
        let cells = enumerate_hom_cells(&k2, &h).unwrap();
        let set: std::collections::HashSet<_> = cells.iter().cloned().collect();
        for c in &cells {
            assert!(c.is_valid(&k2, &h));
            for v in 0..2 {
                let xs = c.set(v);
                if xs.len() < 2 {
                    continue;
                }
                for drop in &xs {
                    let mut sets: Vec<Vec<usize>> = (0..2).map(|w| c.set(w)).collect();
                    sets[v].retain(|x| x != drop);
                    assert!(set.contains(&HomCell::new(&sets).unwrap()));
                }
            }
        }
        assert!(cells.windows(2).all(|w| w[0].dim() <= w[1].dim()));
    }
}
