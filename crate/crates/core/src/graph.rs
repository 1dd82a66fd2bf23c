//! Finite graphs with loops, categorical products, exponential graphs and folds.
//!
//! Vertices are addressed by dense indices `0..vertex_count`. Every vertex
//! carries a display label; labels are unique within a graph. Adjacency is
//! stored as sorted neighbor lists and a vertex with a loop lists itself.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default cap on the number of vertices `exponential_graph` will enumerate.
/// Adjacency is computed over all vertex pairs, so the bound stays modest.
pub const DEFAULT_EXP_VERTEX_BOUND: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
}

/// Wire form of a [`Graph`]: 0-based indices, loops listed separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub labels: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub loops: Vec<usize>,
}

impl Graph {
    /// Builds a graph from labels and an undirected edge list. A pair `(i, i)`
    /// adds a loop at `i`. Duplicate edges are merged.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            adj[u].push(v as u32);
            if u != v {
                adj[v].push(u as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { labels, adj })
    }

    /// Builds a graph from already symmetric, sorted, deduplicated adjacency lists.
    pub(crate) fn from_adjacency(labels: Vec<String>, adj: Vec<Vec<u32>>) -> Self {
        debug_assert_eq!(labels.len(), adj.len());
        Graph { labels, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sorted neighbor list of `v`; contains `v` itself when `v` carries a loop.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.is_adjacent(v, v)
    }

    /// Number of neighbors other than `v` itself.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len() - usize::from(self.has_loop(v))
    }

    /// Undirected non-loop edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.has_loop(v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn loop_count(&self) -> usize {
        self.loops().count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&v| self.is_adjacent(v as usize, u)))
    }

    /// Two-coloring check. A loop makes a graph non-bipartite.
    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Subgraph induced on `keep` (in the given order).
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i as u32;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                let mut list: Vec<u32> = self.adj[v]
                    .iter()
                    .filter_map(|&w| {
                        let p = pos[w as usize];
                        (p != u32::MAX).then_some(p)
                    })
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        Graph { labels, adj }
    }

    /// The graph with vertex `u` and all its edges removed.
    pub fn delete_vertex(&self, u: usize) -> Graph {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&v| v != u).collect();
        self.induced_subgraph(&keep)
    }

    /// Connected components (loops ignored), each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            labels: self.labels.clone(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            loops: self.loops().collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        edges.extend(json.loops.iter().map(|&v| (v, v)));
        Graph::from_edges(json.labels.clone(), &edges)
    }
}

/// Shape of a set map `[n] -> [m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FnKind {
    Constant,
    Injective,
    Other,
}

/// A set map `[n] -> [m]` stored as its value string; values are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FnVertex {
    values: Vec<u8>,
}

impl FnVertex {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("a map needs a nonempty domain"));
        }
        if values.contains(&0) {
            return Err(invalid("map values are 1-based"));
        }
        Ok(FnVertex { values })
    }

    pub fn constant(x: u8, n: usize) -> Self {
        FnVertex { values: vec![x; n] }
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    /// Value at the 1-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.values[i - 1]
    }

    /// Constant wins over injective when `n = 1`.
    pub fn kind(&self) -> FnKind {
        let first = self.values[0];
        if self.values.iter().all(|&v| v == first) {
            FnKind::Constant
        } else if self.is_injective() {
            FnKind::Injective
        } else {
            FnKind::Other
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u128;
        self.values.iter().all(|&v| {
            let bit = 1u128 << (v as u32 % 128);
            let fresh = seen & bit == 0;
            seen |= bit;
            fresh
        })
    }

    pub fn contains_value(&self, x: u8) -> bool {
        self.values.contains(&x)
    }

    /// 1-based position holding `x`, if any.
    pub fn position_of(&self, x: u8) -> Option<usize> {
        self.values.iter().position(|&v| v == x).map(|p| p + 1)
    }

    /// Values of `[m]` outside the image, ascending.
    pub fn missing_values(&self, m: u8) -> Vec<u8> {
        (1..=m).filter(|x| !self.values.contains(x)).collect()
    }

    /// Notation label: `<x>` for constants, the value string otherwise.
    pub fn label(&self) -> String {
        if self.kind() == FnKind::Constant {
            return format!("<{}>", self.values[0]);
        }
        if self.values.iter().all(|&v| v <= 9) {
            self.values.iter().map(|v| char::from(b'0' + v)).collect()
        } else {
            let parts: Vec<String> = self.values.iter().map(u8::to_string).collect();
            parts.join(".")
        }
    }
}

impl fmt::Display for FnVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Replaces the value at 1-based position `k` of an injective map by `x`,
/// where `x` lies outside the image.
pub fn variant(f: &FnVertex, k: usize, x: u8) -> Result<FnVertex> {
    if !f.is_injective() {
        return Err(invalid(format!("{f} is not injective")));
    }
    if k == 0 || k > f.domain_size() {
        return Err(invalid(format!("position {k} outside 1..={}", f.domain_size())));
    }
    if x == 0 {
        return Err(invalid("values are 1-based"));
    }
    if f.contains_value(x) {
        return Err(invalid(format!("{x} is in the image of {f}")));
    }
    let mut values = f.values.clone();
    values[k - 1] = x;
    Ok(FnVertex { values })
}

/// An exponential graph (or one of its induced subgraphs) together with the
/// set map behind every vertex.
#[derive(Clone, Debug)]
pub struct ExponentialGraph {
    pub graph: Graph,
    maps: Vec<FnVertex>,
    index: HashMap<Vec<u8>, u32>,
}

impl ExponentialGraph {
    fn new(graph: Graph, maps: Vec<FnVertex>) -> Self {
        let index = maps
            .iter()
            .enumerate()
            .map(|(i, f)| (f.values.clone(), i as u32))
            .collect();
        ExponentialGraph { graph, maps, index }
    }

    pub fn maps(&self) -> &[FnVertex] {
        &self.maps
    }

    pub fn map(&self, v: usize) -> &FnVertex {
        &self.maps[v]
    }

    pub fn index_of(&self, values: &[u8]) -> Option<usize> {
        self.index.get(values).map(|&i| i as usize)
    }

    pub fn index_of_constant(&self, x: u8) -> Option<usize> {
        let n = self.maps.first()?.domain_size();
        self.index_of(&vec![x; n])
    }
}

impl std::ops::Deref for ExponentialGraph {
    type Target = Graph;
    fn deref(&self) -> &Graph {
        &self.graph
    }
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("complete graph needs n >= 1"));
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    let adj = (0..n)
        .map(|u| (0..n as u32).filter(|&v| v as usize != u).collect())
        .collect();
    Ok(Graph::from_adjacency(labels, adj))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid("cycle graph needs n >= 3"));
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(labels, &edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("path graph needs n >= 1"));
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(labels, &edges)
}

/// `G x H`: vertex `(g, h)` sits at index `g * |V(H)| + h`.
pub fn categorical_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.vertex_count();
    let mut labels = Vec::with_capacity(g.vertex_count() * nh);
    for a in 0..g.vertex_count() {
        for b in 0..nh {
            labels.push(format!("({},{})", g.label(a), h.label(b)));
        }
    }
    let mut adj = vec![Vec::new(); labels.len()];
    for a in 0..g.vertex_count() {
        for b in 0..nh {
            let list = &mut adj[a * nh + b];
            for &a2 in g.neighbors(a) {
                for &b2 in h.neighbors(b) {
                    list.push(a2 * nh as u32 + b2);
                }
            }
            list.sort_unstable();
        }
    }
    Graph::from_adjacency(labels, adj)
}

fn exp_adjacent(f: &[u8], g: &[u8], arcs: &[(usize, usize)], target: &Graph) -> bool {
    arcs.iter()
        .all(|&(v, w)| target.is_adjacent(f[v] as usize - 1, g[w] as usize - 1))
}

/// Adjacency lists for the graph on `maps` where `f ~ g` iff every arc `v -> w`
/// of the source forces `f(v) ~ g(w)` in the target.
fn exp_adjacency(maps: &[FnVertex], source: &Graph, target: &Graph) -> Vec<Vec<u32>> {
    use rayon::prelude::*;
    let arcs: Vec<(usize, usize)> = (0..source.vertex_count())
        .flat_map(|v| source.neighbors(v).iter().map(move |&w| (v, w as usize)))
        .collect();
    maps.par_iter()
        .map(|f| {
            maps.iter()
                .enumerate()
                .filter(|(_, g)| exp_adjacent(&f.values, &g.values, &arcs, target))
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect()
}

/// All set maps `V(G) -> V(H)` in lexicographic order of their value strings.
fn all_maps(n: usize, m: usize) -> Vec<FnVertex> {
    let total = m.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![1u8; n];
    for _ in 0..total {
        out.push(FnVertex { values: cur.clone() });
        for pos in (0..n).rev() {
            if (cur[pos] as usize) < m {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 1;
        }
    }
    out
}

/// The exponential graph `H^G` with the default vertex bound.
pub fn exponential_graph(g: &Graph, h: &Graph) -> Result<ExponentialGraph> {
    exponential_graph_bounded(g, h, DEFAULT_EXP_VERTEX_BOUND)
}

pub fn exponential_graph_bounded(g: &Graph, h: &Graph, bound: u64) -> Result<ExponentialGraph> {
    let n = g.vertex_count();
    let m = h.vertex_count();
    if n == 0 || m == 0 {
        return Err(invalid("exponential graph needs nonempty graphs"));
    }
    if m > u8::MAX as usize {
        return Err(invalid("target graph too large for the value encoding"));
    }
    let count = (m as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if count > bound {
        return Err(Error::ResourceLimit {
            what: format!("exponential graph with {m}^{n} vertices"),
            bound,
        });
    }
    let maps = all_maps(n, m);
    let adj = exp_adjacency(&maps, g, h);
    let labels = maps.iter().map(FnVertex::label).collect();
    Ok(ExponentialGraph::new(Graph::from_adjacency(labels, adj), maps))
}

/// Injective maps `[n] -> [m]` in lexicographic order.
pub fn injective_maps(n: usize, m: usize) -> Vec<FnVertex> {
    fn rec(n: usize, m: u8, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<FnVertex>) {
        if cur.len() == n {
            out.push(FnVertex { values: cur.clone() });
            return;
        }
        for x in 1..=m {
            if !used[x as usize] {
                used[x as usize] = true;
                cur.push(x);
                rec(n, m, cur, used, out);
                cur.pop();
                used[x as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    if n <= m {
        rec(n, m as u8, &mut Vec::with_capacity(n), &mut vec![false; m + 1], &mut out);
    }
    out
}

/// The subgraph of `K_m^{K_n}` induced on constant and injective maps.
///
/// Constants `<1>..<m>` occupy indices `0..m`; injective maps follow in
/// lexicographic order. For `n = 1` every map is constant, so only the
/// constants appear.
pub fn fold_core_exponential(m: usize, n: usize) -> Result<ExponentialGraph> {
    fold_core_exponential_bounded(m, n, DEFAULT_EXP_VERTEX_BOUND)
}

pub fn fold_core_exponential_bounded(m: usize, n: usize, bound: u64) -> Result<ExponentialGraph> {
    if m == 0 || n == 0 {
        return Err(invalid("fold core needs m >= 1 and n >= 1"));
    }
    if m > u8::MAX as usize {
        return Err(invalid("m too large for the value encoding"));
    }
    let injective = if n >= 2 && n <= m {
        (m - n + 1..=m).try_fold(1u64, |acc, k| acc.checked_mul(k as u64))
    } else {
        Some(0)
    };
    match injective.and_then(|i| i.checked_add(m as u64)) {
        Some(count) if count <= bound => {}
        _ => {
            return Err(Error::ResourceLimit {
                what: format!("fold core of K_{m}^(K_{n})"),
                bound,
            })
        }
    }
    let mut maps: Vec<FnVertex> = (1..=m as u8).map(|x| FnVertex::constant(x, n)).collect();
    if n >= 2 {
        maps.extend(injective_maps(n, m));
    }
    let kn = complete_graph(n)?;
    let km = complete_graph(m)?;
    let adj = exp_adjacency(&maps, &kn, &km);
    let labels = maps.iter().map(FnVertex::label).collect();
    Ok(ExponentialGraph::new(Graph::from_adjacency(labels, adj), maps))
}

/// Common neighbors of every vertex in `set`; the whole vertex set when `set` is empty.
pub fn neighborhood(g: &Graph, set: &[usize]) -> Vec<usize> {
    let Some((&first, rest)) = set.split_first() else {
        return (0..g.vertex_count()).collect();
    };
    g.neighbors(first)
        .iter()
        .map(|&v| v as usize)
        .filter(|&v| rest.iter().all(|&a| g.is_adjacent(a, v)))
        .collect()
}

fn is_sorted_subset(a: &[u32], b: &[u32]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Smallest `u`, then smallest `v != u`, with `N(u) ⊆ N(v)`.
pub fn find_fold(g: &Graph) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    (0..n).find_map(|u| {
        (0..n)
            .find(|&v| v != u && is_sorted_subset(g.neighbors(u), g.neighbors(v)))
            .map(|v| (u, v))
    })
}

/// Result of folding a graph until no fold remains.
#[derive(Clone, Debug)]
pub struct FoldSequence {
    /// Original indices of the surviving vertices, ascending.
    pub kept: Vec<usize>,
    /// Deleted vertex and its dominating vertex, in original indices, in order.
    pub steps: Vec<(usize, usize)>,
    pub core: Graph,
}

const FOLD_BITSET_LIMIT: usize = 16_384;

/// Repeats `find_fold` + vertex deletion until no fold exists.
///
/// Produces the same deletion sequence as the naive loop; only vertices adjacent
/// to a deleted vertex can gain a fold, so just those are rechecked.
pub fn fold_to_fixed_point(g: &Graph) -> FoldSequence {
    let n = g.vertex_count();
    if n > FOLD_BITSET_LIMIT {
        return fold_with_lists(g);
    }
    let words = n.div_ceil(64);
    let mut deg: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    // rows of deleted vertices are left intact: their bits at live vertices
    // still record the original adjacency
    let mut bits: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut row = vec![0u64; words];
            for &w in g.neighbors(v) {
                row[w as usize / 64] |= 1 << (w % 64);
            }
            row
        })
        .collect();
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    // `None`: check against every vertex; `Some(d)`: a dominator can only be a
    // vertex missing from the row of some deleted neighbor in `d`
    let mut dirty: BTreeMap<usize, Option<Vec<usize>>> = (0..n).map(|v| (v, None)).collect();
    let mut steps = Vec::new();
    let mut cand = vec![0u64; words];
    while let Some((u, since)) = dirty.pop_first() {
        match &since {
            None => cand.copy_from_slice(&alive),
            Some(d) => {
                cand.fill(0);
                for &x in d {
                    for (c, (a, b)) in cand.iter_mut().zip(alive.iter().zip(&bits[x])) {
                        *c |= a & !b;
                    }
                }
            }
        }
        cand[u / 64] &= !(1 << (u % 64));
        let row = &bits[u];
        let found = cand.iter().enumerate().find_map(|(i, &word)| {
            let mut word = word;
            while word != 0 {
                let v = i * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                if deg[u] <= deg[v] && row.iter().zip(&bits[v]).all(|(x, y)| x & !y == 0) {
                    return Some(v);
                }
            }
            None
        });
        let Some(v) = found else { continue };
        steps.push((u, v));
        alive[u / 64] &= !(1 << (u % 64));
        let neighbors: Vec<usize> = (0..n).filter(|&w| w != u && bits[u][w / 64] >> (w % 64) & 1 == 1).collect();
        for w in neighbors {
            if alive[w / 64] >> (w % 64) & 1 == 0 {
                continue;
            }
            bits[w][u / 64] &= !(1 << (u % 64));
            deg[w] -= 1;
            match dirty.entry(w).or_insert_with(|| Some(Vec::new())) {
                Some(d) => d.push(u),
                None => {}
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&v| alive[v / 64] >> (v % 64) & 1 == 1).collect();
    let core = g.induced_subgraph(&kept);
    FoldSequence { kept, steps, core }
}

fn fold_with_lists(g: &Graph) -> FoldSequence {
    let n = g.vertex_count();
    let mut nb: Vec<Vec<u32>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut alive = vec![true; n];
    let mut dirty: BTreeSet<usize> = (0..n).collect();
    let mut steps = Vec::new();
    while let Some(&u) = dirty.iter().next() {
        dirty.remove(&u);
        let Some(v) = (0..n).find(|&v| v != u && alive[v] && is_sorted_subset(&nb[u], &nb[v])) else {
            continue;
        };
        steps.push((u, v));
        alive[u] = false;
        for w in std::mem::take(&mut nb[u]) {
            let w = w as usize;
            if w == u {
                continue;
            }
            if let Ok(p) = nb[w].binary_search(&(u as u32)) {
                nb[w].remove(p);
            }
            dirty.insert(w);
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let core = g.induced_subgraph(&kept);
    FoldSequence { kept, steps, core }
}
