#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use expnbhd::graph::{categorical_product, complete_graph, cycle_graph, fold_core_exponential, path_graph, Graph};

pub const DEFAULT_SEED: u64 = 0x5eed_2026;

/// Seed for randomized tests; override with `EXPNBHD_SEED`.
pub fn seed() -> u64 {
    std::env::var("EXPNBHD_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt)
}

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(labels(n), edges).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, loops: bool) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u..n {
            if (u != v || loops) && rng.gen_bool(if u == v { p / 4.0 } else { p }) {
                edges.push((u, v));
            }
        }
    }
    graph(n, &edges)
}

/// All maps `[n] -> [m]` as 1-based value strings, lexicographic.
pub fn all_value_strings(n: usize, m: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                (1..=m as u8).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Rank over GF(2) by plain row elimination on `Vec<Vec<bool>>`.
pub fn naive_rank(rows: &[Vec<bool>]) -> usize {
    let mut a: Vec<Vec<bool>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c]) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] {
                for k in 0..ncols {
                    let v = a[rank][k];
                    a[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Every simplex (as a sorted vertex list) of the complex generated by `facets`,
/// by subset enumeration.
pub fn all_faces(facets: &[Vec<u32>]) -> std::collections::BTreeSet<Vec<u32>> {
    let mut out = std::collections::BTreeSet::new();
    for f in facets {
        for mask in 1u64..(1 << f.len()) {
            out.insert((0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect());
        }
    }
    out
}

/// Betti numbers over GF(2) straight from the definition, via the naive rank.
pub fn naive_betti(facets: &[Vec<u32>], maxdim: usize) -> Vec<usize> {
    let faces = all_faces(facets);
    let by_dim: Vec<Vec<Vec<u32>>> = (0..=maxdim + 1)
        .map(|d| faces.iter().filter(|f| f.len() == d + 1).cloned().collect())
        .collect();
    let rank = |k: usize| -> usize {
        if k == 0 || by_dim[k].is_empty() || by_dim[k - 1].is_empty() {
            return 0;
        }
        let rows: Vec<Vec<bool>> = by_dim[k - 1]
            .iter()
            .map(|r| by_dim[k].iter().map(|c| r.iter().all(|x| c.contains(x))).collect())
            .collect();
        naive_rank(&rows)
    };
    (0..=maxdim)
        .map(|k| by_dim[k].len() - rank(k) - rank(k + 1))
        .collect()
}

/// Small graphs for comparing the two complexes attached to a graph.
pub fn lovasz_corpus() -> Vec<(String, Graph)> {
    let g = graph;
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 2..=5 {
        out.push((format!("K{n}"), complete_graph(n).unwrap()));
    }
    for n in 4..=7 {
        out.push((format!("C{n}"), cycle_graph(n).unwrap()));
    }
    out.push(("C3".into(), cycle_graph(3).unwrap()));
    for n in 2..=5 {
        out.push((format!("P{n}"), path_graph(n).unwrap()));
    }
    out.push(("core of K3^K2".into(), fold_core_exponential(3, 2).unwrap().graph));
    out.push(("K1,3".into(), g(4, &[(0, 1), (0, 2), (0, 3)])));
    out.push(("K2,3".into(), g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])));
    out.push(("K4 minus an edge".into(), g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])));
    out.push(("bowtie".into(), g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])));
    out.push(("wheel W5".into(), g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)])));
    out.push(("prism".into(), g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])));
    out.push(("C5 with a chord".into(), g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])));
    out.push(("two triangles".into(), g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])));
    out.push(("triangle with a pendant path".into(), g(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)])));
    out.push(("looped path".into(), g(3, &[(0, 1), (1, 2), (2, 2)])));
    out.push(("K3 x K2".into(), categorical_product(&complete_graph(3).unwrap(), &complete_graph(2).unwrap())));
    out
}
