//! Cells of the Hom complex `Hom(G, H)` and the order complex of their face poset.
//!
//! A cell assigns to every vertex of `G` a nonempty set of vertices of `H`
//! (stored as a bitmask) such that every edge of `G` maps into edges of `H`.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::simplicial::{Complex, Simplex};

pub const DEFAULT_HOM_BOUND: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomCell {
    assignment: Vec<u64>,
}

impl HomCell {
    /// Builds a cell from explicit vertex sets; validity against a pair of graphs
    /// is checked by [`HomCell::is_valid`].
    pub fn new(sets: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = Vec::with_capacity(sets.len());
        for s in sets {
            if s.is_empty() {
                return Err(invalid("cell coordinates must be nonempty"));
            }
            let mut mask = 0u64;
            for &v in s {
                if v >= 64 {
                    return Err(invalid("target vertices beyond 64 are not supported"));
                }
                mask |= 1 << v;
            }
            assignment.push(mask);
        }
        Ok(HomCell { assignment })
    }

    pub fn masks(&self) -> &[u64] {
        &self.assignment
    }

    pub fn set(&self, v: usize) -> Vec<usize> {
        (0..64).filter(|&b| self.assignment[v] >> b & 1 == 1).collect()
    }

    pub fn dim(&self) -> usize {
        self.assignment.iter().map(|m| m.count_ones() as usize - 1).sum()
    }

    /// Coordinatewise inclusion.
    pub fn is_face_of(&self, other: &HomCell) -> bool {
        self.assignment.len() == other.assignment.len()
            && self.assignment.iter().zip(&other.assignment).all(|(a, b)| a & !b == 0)
    }

    pub fn is_valid(&self, g: &Graph, h: &Graph) -> bool {
        let nb = neighbor_masks(h);
        self.assignment.len() == g.vertex_count() && valid_with(&self.assignment, g, &nb)
    }

    /// Label such as `1|2,3`, using the vertex labels of `h`.
    pub fn label(&self, h: &Graph) -> String {
        (0..self.assignment.len())
            .map(|v| {
                self.set(v)
                    .into_iter()
                    .map(|x| h.label(x).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

fn neighbor_masks(h: &Graph) -> Vec<u64> {
    (0..h.vertex_count())
        .map(|a| h.neighbors(a).iter().fold(0u64, |m, &b| m | 1 << b))
        .collect()
}

fn common_neighbors(mask: u64, nb: &[u64]) -> u64 {
    let mut out = u64::MAX;
    let mut m = mask;
    while m != 0 {
        out &= nb[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    out
}

fn valid_with(assignment: &[u64], g: &Graph, nb: &[u64]) -> bool {
    g.edges()
        .chain(g.loops().map(|v| (v, v)))
        .all(|(u, v)| assignment[v] & !common_neighbors(assignment[u], nb) == 0)
}

/// All cells of `Hom(g, h)`, sorted by dimension and then by assignment.
pub fn enumerate_hom_cells(g: &Graph, h: &Graph) -> Result<Vec<HomCell>> {
    enumerate_hom_cells_bounded(g, h, DEFAULT_HOM_BOUND)
}

pub fn enumerate_hom_cells_bounded(g: &Graph, h: &Graph, bound: u64) -> Result<Vec<HomCell>> {
    let k = h.vertex_count();
    if k == 0 || k > 63 {
        return Err(invalid(format!("target graph must have 1..=63 vertices, got {k}")));
    }
    let per_vertex = (1u64 << k) - 1;
    let tuples = (0..g.vertex_count()).try_fold(1u64, |acc, _| acc.checked_mul(per_vertex));
    match tuples {
        Some(t) if t <= bound => {}
        _ => {
            return Err(Error::ResourceLimit {
                what: format!("subset tuples for Hom with |V(G)|={} and |V(H)|={k}", g.vertex_count()),
                bound,
            })
        }
    }
    let nb = neighbor_masks(h);
    let n = g.vertex_count();
    let mut cells = Vec::new();
    let mut current = vec![0u64; n];
    fn extend(
        v: usize,
        g: &Graph,
        nb: &[u64],
        full: u64,
        current: &mut Vec<u64>,
        cells: &mut Vec<HomCell>,
    ) {
        if v == current.len() {
            cells.push(HomCell {
                assignment: current.clone(),
            });
            return;
        }
        let mut allowed = full;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if u < v {
                allowed &= common_neighbors(current[u], nb);
            }
        }
        // enumerate nonempty submasks of `allowed`
        let mut sub = allowed;
        while sub != 0 {
            let self_ok = !g.has_loop(v) || sub & !common_neighbors(sub, nb) == 0;
            if self_ok {
                current[v] = sub;
                extend(v + 1, g, nb, full, current, cells);
            }
            sub = (sub - 1) & allowed;
        }
        current[v] = 0;
    }
    extend(0, g, &nb, per_vertex, &mut current, &mut cells);
    cells.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    Ok(cells)
}

/// Order complex of the face poset of `cells`: vertices are the cells, facets
/// are the maximal chains. Labels come from `h`.
pub fn order_complex_of_hom(cells: &[HomCell], h: &Graph) -> Result<Complex> {
    let index: HashMap<&HomCell, u32> = cells.iter().enumerate().map(|(i, c)| (c, i as u32)).collect();
    let width = h.vertex_count();
    // cover relation: add a single target vertex to a single coordinate
    let up: Vec<Vec<u32>> = cells
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for v in 0..c.assignment.len() {
                for x in 0..width {
                    if c.assignment[v] >> x & 1 == 0 {
                        let mut next = c.clone();
                        next.assignment[v] |= 1 << x;
                        if let Some(&j) = index.get(&next) {
                            out.push(j);
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut facets = Vec::new();
    let mut chain = Vec::new();
    fn walk(at: u32, up: &[Vec<u32>], chain: &mut Vec<u32>, facets: &mut Vec<Simplex>) {
        chain.push(at);
        if up[at as usize].is_empty() {
            facets.push(Simplex::new(chain.clone()).expect("chains are nonempty"));
        } else {
            for &next in &up[at as usize] {
                walk(next, up, chain, facets);
            }
        }
        chain.pop();
    }
    for (i, c) in cells.iter().enumerate() {
        if c.dim() == 0 {
            walk(i as u32, &up, &mut chain, &mut facets);
        }
    }
    let labels = cells.iter().map(|c| c.label(h)).collect();
    Complex::from_simplices(facets, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::homology::betti_bounded;

    #[test]
    fn hom_k2_k3_cells() {
        let cells = enumerate_hom_cells(&complete_graph(2).unwrap(), &complete_graph(3).unwrap()).unwrap();
        assert_eq!(cells.len(), 12);
        assert_eq!(cells.iter().filter(|c| c.dim() == 0).count(), 6);
    }

    #[test]
    fn hom_k2_k2_cells() {
        let cells = enumerate_hom_cells(&complete_graph(2).unwrap(), &complete_graph(2).unwrap()).unwrap();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.dim() == 0));
    }

    #[test]
    fn hom_from_single_vertex() {
        let k1 = complete_graph(1).unwrap();
        let h = complete_graph(4).unwrap();
        assert_eq!(enumerate_hom_cells(&k1, &h).unwrap().len(), 15);
    }

    #[test]
    fn order_complex_of_k2_k3_is_circle() {
        let k3 = complete_graph(3).unwrap();
        let cells = enumerate_hom_cells(&complete_graph(2).unwrap(), &k3).unwrap();
        let oc = order_complex_of_hom(&cells, &k3).unwrap();
        assert_eq!(oc.vertex_labels().len(), 12);
        assert_eq!(betti_bounded(&oc, 1).betti, vec![1, 1]);
    }

    #[test]
    fn face_relation_and_labels() {
        let k3 = complete_graph(3).unwrap();
        let a = HomCell::new(&[vec![0], vec![1]]).unwrap();
        let b = HomCell::new(&[vec![0], vec![1, 2]]).unwrap();
        assert!(a.is_face_of(&b) && !b.is_face_of(&a));
        assert!(b.is_valid(&complete_graph(2).unwrap(), &k3));
        assert_eq!(b.label(&k3), format!("{}|{},{}", k3.label(0), k3.label(1), k3.label(2)));
        assert!(!HomCell::new(&[vec![0, 1], vec![1]]).unwrap().is_valid(&complete_graph(2).unwrap(), &k3));
    }

    #[test]
    fn bound_enforced() {
        let k3 = complete_graph(3).unwrap();
        let err = enumerate_hom_cells_bounded(&k3, &k3, 10).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }
}
