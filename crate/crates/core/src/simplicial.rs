//! Facet-based simplicial complexes.
//!
//! A [`Complex`] keeps only its maximal simplices. Lower faces are produced on
//! demand, one dimension at a time, by [`faces_up_to`]; neighborhood complexes
//! of exponential-graph cores have few facets but enormous face counts.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{fold_core_exponential, variant, ExponentialGraph, FnKind, Graph};

/// Default cap on the number of faces materialized by [`faces_up_to`].
pub const DEFAULT_FACE_BOUND: u64 = 20_000_000;

/// A nonempty, strictly increasing list of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts and deduplicates `vertices`.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("a simplex needs at least one vertex"));
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex(vertices))
    }

    pub fn from_sorted(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("a simplex needs at least one vertex"));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("{vertices:?} is not strictly increasing")));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<u32>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `self ⊆ other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_subset(&self.0, &other.0)
    }

    /// Removes `v`; `None` when that would leave nothing.
    pub fn without(&self, v: u32) -> Option<Simplex> {
        let rest: Vec<u32> = self.0.iter().copied().filter(|&w| w != v).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    pub fn with(&self, v: u32) -> Simplex {
        let mut out = self.0.clone();
        if let Err(p) = out.binary_search(&v) {
            out.insert(p, v);
        }
        Simplex(out)
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        out.sort_unstable();
        out.dedup();
        Simplex(out)
    }

    /// Codimension-one faces, in lexicographic order.
    pub fn boundary(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        let mut out: Vec<Simplex> = (0..self.0.len())
            .map(|i| {
                let mut f = self.0.clone();
                f.remove(i);
                Simplex(f)
            })
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn is_subset(a: &[u32], b: &[u32]) -> bool {
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

/// A simplicial complex stored by its maximal simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    facets: Vec<Simplex>,
    vertex_labels: Vec<String>,
}

/// Wire form of a [`Complex`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertex_labels: Vec<String>,
    pub facets: Vec<Vec<u32>>,
}

impl Complex {
    /// Keeps the inclusion-maximal members of `simplices`, sorted lexicographically.
    pub fn from_simplices(simplices: Vec<Simplex>, vertex_labels: Vec<String>) -> Result<Self> {
        for s in &simplices {
            if let Some(&v) = s.vertices().last() {
                if v as usize >= vertex_labels.len() {
                    return Err(invalid(format!(
                        "vertex {v} has no label ({} labels)",
                        vertex_labels.len()
                    )));
                }
            }
        }
        Ok(Complex {
            facets: maximal_only(simplices),
            vertex_labels,
        })
    }

    /// Trusts that `facets` is already a sorted antichain.
    pub(crate) fn from_facets_unchecked(facets: Vec<Simplex>, vertex_labels: Vec<String>) -> Self {
        Complex {
            facets,
            vertex_labels,
        }
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.vertex_labels[v as usize]
    }

    /// Largest facet dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(Simplex::dim).max()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.facets.iter().any(|f| s.is_face_of(f))
    }

    pub fn is_facet(&self, s: &Simplex) -> bool {
        self.facets.binary_search(s).is_ok()
    }

    /// Vertices that appear in some facet.
    pub fn used_vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.facets.iter().flat_map(|f| f.0.iter().copied()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Pairwise incomparability of facets.
    pub fn is_antichain(&self) -> bool {
        self.facets.iter().enumerate().all(|(i, a)| {
            self.facets
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.is_face_of(b))
        })
    }

    /// Renders a simplex with vertex labels, e.g. `{<1>,234}`.
    pub fn describe(&self, s: &Simplex) -> String {
        let parts: Vec<&str> = s.vertices().iter().map(|&v| self.label(v)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertex_labels: self.vertex_labels.clone(),
            facets: self.facets.iter().map(|f| f.0.clone()).collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        let simplices = json
            .facets
            .iter()
            .map(|f| Simplex::new(f.clone()))
            .collect::<Result<Vec<_>>>()?;
        Complex::from_simplices(simplices, json.vertex_labels.clone())
    }

    /// Facets containing `s`.
    fn facets_containing(&self, s: &Simplex) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| s.is_face_of(&self.facets[i]))
            .collect()
    }
}

fn maximal_only(mut simplices: Vec<Simplex>) -> Vec<Simplex> {
    simplices.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    simplices.dedup();
    let mut kept: Vec<Simplex> = Vec::with_capacity(simplices.len());
    for s in simplices {
        if !kept.iter().any(|k| k.len() > s.len() && s.is_face_of(k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Faces of a single dimension, stored flat and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceList {
    width: usize,
    data: Vec<u32>,
}

impl FaceList {
    pub fn empty(dim: usize) -> Self {
        FaceList {
            width: dim + 1,
            data: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.width - 1
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width)
    }

    /// Position of `face` by binary search.
    pub fn index_of(&self, face: &[u32]) -> Option<usize> {
        if face.len() != self.width {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn to_simplices(&self) -> Vec<Simplex> {
        self.iter().map(|f| Simplex(f.to_vec())).collect()
    }
}

/// All faces of a complex up to some dimension, grouped by dimension.
#[derive(Clone, Debug)]
pub struct Faces {
    pub by_dim: Vec<FaceList>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.by_dim.iter().map(FaceList::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(FaceList::len).collect()
    }

    /// Dimension-major, then lexicographic.
    pub fn to_simplices(&self) -> Vec<Simplex> {
        self.by_dim.iter().flat_map(FaceList::to_simplices).collect()
    }

    /// CSV rows `dim,vertex_list` with a header; vertices space-separated.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["dim", "vertex_list"])?;
        for list in &self.by_dim {
            let dim = list.dim().to_string();
            for f in list.iter() {
                let vs: Vec<String> = f.iter().map(u32::to_string).collect();
                w.write_record([dim.as_str(), vs.join(" ").as_str()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Upper bound on the number of faces of dimension `<= d` (before deduplication).
pub fn face_count_estimate(c: &Complex, d: usize) -> u64 {
    c.facets
        .iter()
        .map(|f| {
            (0..=d as u64)
                .map(|k| binomial(f.len() as u64, k + 1))
                .fold(0u64, u64::saturating_add)
        })
        .fold(0u64, u64::saturating_add)
}

/// Calls `visit` with every `k`-subset of `set`, in lexicographic order.
pub(crate) fn for_each_subset<F: FnMut(&[u32])>(set: &[u32], k: usize, mut visit: F) {
    let n = set.len();
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<u32> = idx.iter().map(|&i| set[i]).collect();
    loop {
        visit(&buf);
        // rightmost index that can still advance
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        i -= 1;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = set[idx[j]];
        }
    }
}

fn faces_of_dim(c: &Complex, k: usize) -> FaceList {
    let width = k + 1;
    let mut faces: Vec<Vec<u32>> = c
        .facets
        .par_iter()
        .flat_map_iter(|f| {
            let mut local = Vec::new();
            for_each_subset(&f.0, width, |s| local.push(s.to_vec()));
            local
        })
        .collect();
    faces.par_sort_unstable();
    faces.dedup();
    let mut data = Vec::with_capacity(faces.len() * width);
    for f in faces {
        data.extend_from_slice(&f);
    }
    FaceList { width, data }
}

/// Every face of dimension `<= d`, deduplicated and sorted, with the default bound.
pub fn faces_up_to(c: &Complex, d: usize) -> Result<Faces> {
    faces_up_to_bounded(c, d, DEFAULT_FACE_BOUND)
}

/// As [`faces_up_to`]; fails before enumerating when the face count could exceed `bound`.
pub fn faces_up_to_bounded(c: &Complex, d: usize, bound: u64) -> Result<Faces> {
    let estimate = face_count_estimate(c, d);
    if estimate > bound {
        let largest = c.facets.iter().map(Simplex::len).max().unwrap_or(0);
        return Err(Error::ResourceLimit {
            what: format!(
                "faces up to dimension {d} (about {estimate}; largest facet has {largest} vertices)"
            ),
            bound,
        });
    }
    let top = c.dim().map_or(0, |t| t.min(d));
    let mut by_dim: Vec<FaceList> = (0..=top).map(|k| faces_of_dim(c, k)).collect();
    by_dim.extend((top + 1..=d).map(FaceList::empty));
    Ok(Faces { by_dim })
}

/// Facets of the neighborhood complex: the inclusion-maximal nonempty `N(v)`.
pub fn neighborhood_complex(g: &Graph) -> Complex {
    let simplices: Vec<Simplex> = (0..g.vertex_count())
        .filter(|&v| !g.neighbors(v).is_empty())
        .map(|v| Simplex(g.neighbors(v).to_vec()))
        .collect();
    Complex::from_facets_unchecked(maximal_only(simplices), g.labels().to_vec())
}

/// `true` iff `tau` is a facet and the only facet containing `sigma`.
pub fn is_free_pair(c: &Complex, sigma: &Simplex, tau: &Simplex) -> Result<bool> {
    if !sigma.is_face_of(tau) || sigma == tau {
        return Err(invalid(format!("{sigma} is not a proper face of {tau}")));
    }
    if !c.is_facet(tau) {
        return Ok(false);
    }
    Ok(c.facets.iter().all(|f| f == tau || !sigma.is_face_of(f)))
}

/// Removes every simplex between `sigma` and the facet `tau`.
///
/// `tau` is replaced by those `tau \ {v}`, `v ∈ sigma`, that are not already
/// covered by another facet.
pub fn elementary_collapse(c: &Complex, sigma: &Simplex, tau: &Simplex) -> Result<Complex> {
    let mut out = c.clone();
    collapse_in_place(&mut out, sigma, tau)?;
    Ok(out)
}

fn collapse_in_place(c: &mut Complex, sigma: &Simplex, tau: &Simplex) -> Result<()> {
    if !is_free_pair(c, sigma, tau)? {
        return Err(Error::PreconditionViolation(format!(
            "({}, {}) is not a collapsible pair",
            c.describe(sigma),
            c.describe(tau)
        )));
    }
    let pos = c.facets.binary_search(tau).expect("checked facet");
    c.facets.remove(pos);
    for &v in sigma.vertices() {
        let Some(face) = tau.without(v) else { continue };
        if !c.contains(&face) {
            let at = c.facets.binary_search(&face).unwrap_or_else(|p| p);
            c.facets.insert(at, face);
        }
    }
    Ok(())
}

/// Collapses the facet `tau = xs ∪ ys` onto the facets `{x_i} ∪ ys`, provided
/// every pair `{x_i, x_j}` is a free face of `tau`.
pub fn collapse_free_family(c: &Complex, tau: &Simplex, xs: &[u32], ys: &[u32]) -> Result<Complex> {
    collapse_free_family_anchored(c, tau, xs, ys, &[])
}

/// Generalization where the free faces are `{x_i, x_j} ∪ anchor`, `anchor ⊆ ys`.
///
/// Besides the facets `{x_i} ∪ ys`, each `tau \ {a}` for `a ∈ anchor` survives
/// (when still maximal). With an empty anchor this is the plain family collapse.
pub fn collapse_free_family_anchored(
    c: &Complex,
    tau: &Simplex,
    xs: &[u32],
    ys: &[u32],
    anchor: &[u32],
) -> Result<Complex> {
    if xs.len() < 2 {
        return Err(invalid("need at least two free vertices"));
    }
    let all = Simplex::new(xs.iter().chain(ys).copied().collect())?;
    if &all != tau || all.len() != xs.len() + ys.len() {
        return Err(invalid(format!(
            "{} is not the disjoint union of the given vertex families",
            c.describe(tau)
        )));
    }
    if !anchor.iter().all(|a| ys.contains(a)) {
        return Err(invalid("anchor must lie inside ys"));
    }
    if !c.is_facet(tau) {
        return Err(Error::PreconditionViolation(format!("{} is not a facet", c.describe(tau))));
    }
    let pair_face = |a: u32, b: u32| {
        let mut v = vec![a, b];
        v.extend_from_slice(anchor);
        Simplex::new(v).expect("nonempty")
    };
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let sigma = pair_face(xs[i], xs[j]);
            if !is_free_pair(c, &sigma, tau)? {
                return Err(Error::PreconditionViolation(format!(
                    "{} is not a free face of {}",
                    c.describe(&sigma),
                    c.describe(tau)
                )));
            }
        }
    }

    let mut out = c.clone();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let sigma = pair_face(xs[i], xs[j]);
            let holders = out.facets_containing(&sigma);
            if holders.len() != 1 {
                return Err(Error::PreconditionViolation(format!(
                    "{} lies in {} facets during the cascade",
                    out.describe(&sigma),
                    holders.len()
                )));
            }
            let holder = out.facets[holders[0]].clone();
            collapse_in_place(&mut out, &sigma, &holder)?;
        }
    }

    let mut expected: Vec<Simplex> = c.facets.iter().filter(|f| *f != tau).cloned().collect();
    for &x in xs {
        let mut v = ys.to_vec();
        v.push(x);
        expected.push(Simplex::new(v)?);
    }
    for &a in anchor {
        if let Some(face) = tau.without(a) {
            expected.push(face);
        }
    }
    let expected = maximal_only(expected);
    if expected != out.facets {
        return Err(Error::InternalConsistency(format!(
            "family collapse of {} did not produce the predicted facets",
            c.describe(tau)
        )));
    }
    Ok(out)
}

/// Facet families of the collapsed complex built from the core of `K_{n+1}^{K_n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct FamilySizes {
    pub m1: usize,
    pub a1: usize,
    pub a2: usize,
    pub a3: usize,
}

impl FamilySizes {
    /// `|M1| = (n+1)! n`, `|A1| = n n! (n-1)`, `|A2| = n! (n-1)`, `|A3| = n+1`.
    pub fn predicted(n: usize) -> Self {
        let fact: usize = (1..=n).product();
        FamilySizes {
            m1: fact * (n + 1) * n,
            a1: n * fact * (n - 1),
            a2: fact * (n - 1),
            a3: n + 1,
        }
    }
}

/// The complex `Δ` together with the core graph whose vertices it uses.
#[derive(Clone, Debug)]
pub struct Delta {
    pub n: usize,
    pub core: ExponentialGraph,
    pub complex: Complex,
    pub families: FamilySizes,
}

impl Delta {
    /// Vertex index of the constant map `<x>`.
    pub fn constant(&self, x: u8) -> u32 {
        x as u32 - 1
    }

    pub fn injective(&self, values: &[u8]) -> u32 {
        self.core.index_of(values).expect("injective map of the core") as u32
    }
}

/// Builds `Δ` for `n >= 3` directly from its four facet families:
///
/// * `M1 = {{f, f_s, <x>}}` with `x ∉ Im f`,
/// * `A1 = {{<1>, <y>, g}}` with `1, y ∈ Im g`, `y != 1`,
/// * `A2 = {{<2>, <y>, g}}` with `2, y ∈ Im g`, `1 ∉ Im g`, `y != 2`,
/// * `A3` = all `n`-sets of constants.
pub fn build_delta(n: usize) -> Result<Delta> {
    if n < 3 {
        return Err(invalid(format!("build_delta needs n >= 3, got {n}")));
    }
    let core = fold_core_exponential(n + 1, n)?;
    let m = (n + 1) as u8;
    let konst = |x: u8| x as u32 - 1;
    let mut m1 = Vec::new();
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    for (gi, g) in core.maps().iter().enumerate() {
        if g.kind() != FnKind::Injective {
            continue;
        }
        let gi = gi as u32;
        let x = g.missing_values(m)[0];
        for s in 1..=n {
            let fs = variant(g, s, x)?;
            let fs = core.index_of(fs.values()).expect("variant lies in the core") as u32;
            m1.push(Simplex::new(vec![gi, fs, konst(x)])?);
        }
        if g.contains_value(1) {
            for &y in g.values().iter().filter(|&&y| y != 1) {
                a1.push(Simplex::new(vec![konst(1), konst(y), gi])?);
            }
        } else {
            for &y in g.values().iter().filter(|&&y| y != 2) {
                a2.push(Simplex::new(vec![konst(2), konst(y), gi])?);
            }
        }
    }
    let a3: Vec<Simplex> = (1..=m)
        .map(|z| Simplex::from_sorted_unchecked((1..=m).filter(|&y| y != z).map(konst).collect()))
        .collect();
    let families = FamilySizes {
        m1: m1.len(),
        a1: a1.len(),
        a2: a2.len(),
        a3: a3.len(),
    };
    let mut facets: Vec<Simplex> = m1.into_iter().chain(a1).chain(a2).chain(a3).collect();
    facets.sort();
    let before = facets.len();
    facets.dedup();
    if facets.len() != before {
        return Err(Error::InternalConsistency("facet families overlap".into()));
    }
    let complex = Complex::from_facets_unchecked(facets, core.labels().to_vec());
    Ok(Delta {
        n,
        core,
        complex,
        families,
    })
}

/// Runs the full collapse cascade from the neighborhood complex of the core of
/// `K_{n+1}^{K_n}` down to `Δ`, validating every elementary collapse.
///
/// Stages: each `N(f)` for injective `f` collapses onto `{f, f_s, <x>}`; each
/// `N(<y>)` onto the simplices `{<y_1>, …, <y_n>, g}`; each of those onto
/// `{<y_1>, <y_i>, g}` with `y_1 = 1` when `1 ∈ Im g` and `y_1 = 2` otherwise.
pub fn collapse_core_to_delta(n: usize) -> Result<Complex> {
    if n < 3 {
        return Err(invalid(format!("the collapse cascade needs n >= 3, got {n}")));
    }
    let core = fold_core_exponential(n + 1, n)?;
    let m = (n + 1) as u8;
    let konst = |x: u8| x as u32 - 1;
    let mut c = neighborhood_complex(&core);

    for (fi, f) in core.maps().iter().enumerate() {
        if f.kind() != FnKind::Injective {
            continue;
        }
        let x = f.missing_values(m)[0];
        let tau = Simplex(core.neighbors(fi).to_vec());
        let xs = (1..=n)
            .map(|s| Ok(core.index_of(variant(f, s, x)?.values()).expect("in core") as u32))
            .collect::<Result<Vec<u32>>>()?;
        let ys = [fi as u32, konst(x)];
        c = collapse_free_family(&c, &tau, &xs, &ys)?;
    }

    for y in 1..=m {
        let yi = konst(y) as usize;
        let tau = Simplex(core.neighbors(yi).to_vec());
        let (xs, ys): (Vec<u32>, Vec<u32>) = tau
            .vertices()
            .iter()
            .partition(|&&v| core.map(v as usize).kind() == FnKind::Injective);
        c = collapse_free_family(&c, &tau, &xs, &ys)?;
    }

    for (gi, g) in core.maps().iter().enumerate() {
        if g.kind() != FnKind::Injective {
            continue;
        }
        let y1: u8 = if g.contains_value(1) { 1 } else { 2 };
        let gi = gi as u32;
        let mut tau: Vec<u32> = g.values().iter().map(|&v| konst(v)).collect();
        tau.push(gi);
        let tau = Simplex::new(tau)?;
        let mut xs: Vec<u32> = g.values().iter().filter(|&&v| v != y1).map(|&v| konst(v)).collect();
        xs.sort_unstable();
        c = collapse_free_family_anchored(&c, &tau, &xs, &[konst(y1), gi], &[gi])?;
    }
    Ok(c)
}

/// Lemma-style free-face census on the core of `K_{n+1}^{K_n}`: every pair
/// `{f_s, f_t}` is free in `N(f)`, and every pair of distinct non-constant
/// neighbors of `<y>` is free in `N(<y>)`. Returns the number of pairs checked.
pub fn free_face_census(n: usize) -> Result<usize> {
    let core = fold_core_exponential(n + 1, n)?;
    let m = (n + 1) as u8;
    let c = neighborhood_complex(&core);
    let mut checked = 0;
    for (vi, f) in core.maps().iter().enumerate() {
        let tau = Simplex(core.neighbors(vi).to_vec());
        let members: Vec<u32> = match f.kind() {
            FnKind::Injective => {
                let x = f.missing_values(m)[0];
                (1..=n)
                    .map(|s| Ok(core.index_of(variant(f, s, x)?.values()).expect("in core") as u32))
                    .collect::<Result<Vec<u32>>>()?
            }
            _ => tau
                .vertices()
                .iter()
                .copied()
                .filter(|&v| core.map(v as usize).kind() != FnKind::Constant)
                .collect(),
        };
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let sigma = Simplex::new(vec![members[i], members[j]])?;
                if !is_free_pair(&c, &sigma, &tau)? {
                    return Err(Error::LemmaViolation(format!(
                        "{} is not free in N({})",
                        c.describe(&sigma),
                        core.label(vi)
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Vertex-set equality helper used by tests and reports.
pub fn facet_set(c: &Complex) -> HashSet<Vec<String>> {
    c.facets
        .iter()
        .map(|f| {
            let mut v: Vec<String> = f.vertices().iter().map(|&i| c.label(i).to_string()).collect();
            v.sort();
            v
        })
        .collect()
}
