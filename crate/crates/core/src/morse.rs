//! Discrete Morse theory on face posets of simplicial complexes.
//!
//! Cells are addressed by a global id: dimension-major, then lexicographic in
//! their vertex lists. Matchings are lists of `(σ, μ(σ))` pairs; every
//! operation beyond [`validate_matching`] expects a valid matching.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::homology::{ChainComplex, Gf2Matrix};
use crate::simplicial::{faces_up_to_bounded, Complex, Faces, Simplex, DEFAULT_FACE_BOUND};

const NONE: u32 = u32::MAX;

/// All nonempty faces of a complex with the cover relation.
#[derive(Clone, Debug)]
pub struct FacePoset {
    faces: Faces,
    offsets: Vec<usize>,
    labels: Vec<String>,
    cofaces: Vec<Vec<u32>>,
}

pub fn face_poset(c: &Complex) -> Result<FacePoset> {
    face_poset_bounded(c, DEFAULT_FACE_BOUND)
}

pub fn face_poset_bounded(c: &Complex, bound: u64) -> Result<FacePoset> {
    let top = c.dim().unwrap_or(0);
    let faces = faces_up_to_bounded(c, top, bound)?;
    let mut offsets = vec![0];
    for list in &faces.by_dim {
        offsets.push(offsets.last().unwrap() + list.len());
    }
    let mut poset = FacePoset {
        faces,
        offsets,
        labels: c.vertex_labels().to_vec(),
        cofaces: Vec::new(),
    };
    let mut cofaces = vec![Vec::new(); poset.len()];
    for id in 0..poset.len() {
        for f in poset.facets_of(id) {
            cofaces[f].push(id as u32);
        }
    }
    poset.cofaces = cofaces;
    Ok(poset)
}

impl FacePoset {
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest cell dimension present.
    pub fn top_dim(&self) -> usize {
        self.faces.by_dim.len().saturating_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.faces.counts()
    }

    pub fn ids_of_dim(&self, d: usize) -> std::ops::Range<usize> {
        if d + 1 >= self.offsets.len() {
            return self.len()..self.len();
        }
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn dim_of(&self, id: usize) -> usize {
        self.offsets.partition_point(|&o| o <= id) - 1
    }

    pub fn cell(&self, id: usize) -> &[u32] {
        let d = self.dim_of(id);
        self.faces.by_dim[d].get(id - self.offsets[d])
    }

    pub fn simplex(&self, id: usize) -> Simplex {
        Simplex::from_sorted_unchecked(self.cell(id).to_vec())
    }

    pub fn id_of(&self, vertices: &[u32]) -> Option<usize> {
        let d = vertices.len().checked_sub(1)?;
        let list = self.faces.by_dim.get(d)?;
        list.index_of(vertices).map(|i| self.offsets[d] + i)
    }

    pub fn id_of_simplex(&self, s: &Simplex) -> Option<usize> {
        self.id_of(s.vertices())
    }

    /// Ids of the codimension-one faces, in the order the vertex is dropped.
    pub fn facets_of(&self, id: usize) -> Vec<usize> {
        let cell = self.cell(id);
        if cell.len() < 2 {
            return Vec::new();
        }
        let mut buf = Vec::with_capacity(cell.len() - 1);
        (0..cell.len())
            .map(|skip| {
                buf.clear();
                buf.extend(cell.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                self.id_of(&buf).expect("face posets are closed under faces")
            })
            .collect()
    }

    pub fn cofaces_of(&self, id: usize) -> &[u32] {
        &self.cofaces[id]
    }

    /// `σ` is a facet of `τ`.
    pub fn covers(&self, sigma: usize, tau: usize) -> bool {
        let (s, t) = (self.cell(sigma), self.cell(tau));
        s.len() + 1 == t.len() && s.iter().all(|v| t.binary_search(v).is_ok())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Cell rendered with vertex labels, e.g. `{<1>,234}`.
    pub fn describe(&self, id: usize) -> String {
        let parts: Vec<&str> = self.cell(id).iter().map(|&v| self.labels[v as usize].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// A partial pairing of cells given as `(σ, μ(σ))` ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Matching { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// CSV with header `cell_vertices,matched_cell_vertices`; labels space-separated.
    pub fn write_csv<W: std::io::Write>(&self, p: &FacePoset, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cell_vertices", "matched_cell_vertices"])?;
        let render = |id: usize| -> String {
            p.cell(id)
                .iter()
                .map(|&v| p.labels()[v as usize].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut pairs = self.pairs.clone();
        pairs.sort_unstable();
        for (s, t) in pairs {
            w.write_record([render(s), render(t)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownCell { cell: usize },
    NotACover { sigma: usize, tau: usize },
    DoublyMatched { cell: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownCell { cell } => write!(f, "cell id {cell} is not in the poset"),
            Violation::NotACover { sigma, tau } => write!(f, "({sigma},{tau}) is not a cover relation"),
            Violation::DoublyMatched { cell } => write!(f, "cell {cell} belongs to more than one pair"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_matching(p: &FacePoset, m: &Matching) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = vec![0u8; p.len()];
    for &(s, t) in &m.pairs {
        if s >= p.len() || t >= p.len() {
            violations.push(Violation::UnknownCell { cell: s.max(t) });
            continue;
        }
        if !p.covers(s, t) {
            violations.push(Violation::NotACover { sigma: s, tau: t });
        }
        for c in [s, t] {
            seen[c] = seen[c].saturating_add(1);
            if seen[c] == 2 {
                violations.push(Violation::DoublyMatched { cell: c });
            }
        }
    }
    ValidationReport { violations }
}

/// Per-cell view of a valid matching.
#[derive(Clone, Debug)]
pub struct MatchIndex {
    partner: Vec<u32>,
    is_lower: Vec<bool>,
}

impl MatchIndex {
    pub fn new(p: &FacePoset, m: &Matching) -> Result<Self> {
        let report = validate_matching(p, m);
        if let Some(v) = report.violations.first() {
            return Err(Error::PreconditionViolation(format!("invalid matching: {v}")));
        }
        let mut partner = vec![NONE; p.len()];
        let mut is_lower = vec![false; p.len()];
        for &(s, t) in &m.pairs {
            partner[s] = t as u32;
            partner[t] = s as u32;
            is_lower[s] = true;
        }
        Ok(MatchIndex { partner, is_lower })
    }

    /// `μ(σ)` when `σ` is matched upward.
    pub fn up(&self, id: usize) -> Option<usize> {
        (self.is_lower[id]).then(|| self.partner[id] as usize)
    }

    pub fn is_critical(&self, id: usize) -> bool {
        self.partner[id] == NONE
    }

    pub fn is_matched_down(&self, id: usize) -> bool {
        self.partner[id] != NONE && !self.is_lower[id]
    }
}

/// Outcome of the acyclicity check; `cycle` lists cell ids along a directed cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Acyclicity {
    pub acyclic: bool,
    pub cycle: Option<Vec<usize>>,
}

fn successors(p: &FacePoset, idx: &MatchIndex, id: usize) -> Vec<usize> {
    if let Some(t) = idx.up(id) {
        return vec![t];
    }
    if idx.is_matched_down(id) {
        let x = idx.partner[id] as usize;
        return p.facets_of(id).into_iter().filter(|&y| y != x).collect();
    }
    Vec::new()
}

/// Looks for a directed cycle through up-arcs `x -> μ(x)` and down-arcs
/// `μ(x) -> y` for facets `y != x` of `μ(x)`.
pub fn is_acyclic(p: &FacePoset, m: &Matching) -> Result<Acyclicity> {
    let idx = MatchIndex::new(p, m)?;
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; p.len()];
    for root in 0..p.len() {
        if state[root] != 0 || idx.is_critical(root) {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, successors(p, &idx, root), 0)];
        state[root] = 1;
        while let Some((node, succ, pos)) = stack.last_mut() {
            if *pos == succ.len() {
                state[*node] = 2;
                stack.pop();
                continue;
            }
            let next = succ[*pos];
            *pos += 1;
            match state[next] {
                0 => {
                    state[next] = 1;
                    let s = successors(p, &idx, next);
                    stack.push((next, s, 0));
                }
                1 => {
                    let start = stack.iter().position(|(n, _, _)| *n == next).unwrap();
                    let cycle = stack[start..].iter().map(|(n, _, _)| *n).collect();
                    return Ok(Acyclicity {
                        acyclic: false,
                        cycle: Some(cycle),
                    });
                }
                _ => {}
            }
        }
    }
    Ok(Acyclicity {
        acyclic: true,
        cycle: None,
    })
}

/// Unmatched cells grouped by dimension, each group sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    pub by_dim: Vec<Vec<usize>>,
}

impl CriticalSet {
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.by_dim.iter().any(|v| v.binary_search(&id).is_ok())
    }

    /// Cells as vertex lists, grouped by dimension.
    pub fn simplices(&self, p: &FacePoset) -> Vec<Vec<Simplex>> {
        self.by_dim
            .iter()
            .map(|ids| ids.iter().map(|&i| p.simplex(i)).collect())
            .collect()
    }
}

pub fn critical_cells(p: &FacePoset, m: &Matching) -> Result<CriticalSet> {
    let idx = MatchIndex::new(p, m)?;
    Ok(critical_from_index(p, &idx))
}

fn critical_from_index(p: &FacePoset, idx: &MatchIndex) -> CriticalSet {
    let by_dim = (0..=p.top_dim())
        .map(|d| p.ids_of_dim(d).filter(|&i| idx.is_critical(i)).collect())
        .collect();
    CriticalSet { by_dim }
}

/// Every cell is exactly one of: matched upward, matched downward, critical.
pub fn check_partition(p: &FacePoset, m: &Matching, crit: &CriticalSet) -> Result<()> {
    let idx = MatchIndex::new(p, m)?;
    let lower = (0..p.len()).filter(|&i| idx.up(i).is_some()).count();
    let upper = (0..p.len()).filter(|&i| idx.is_matched_down(i)).count();
    for i in 0..p.len() {
        if idx.is_critical(i) != crit.contains(i) {
            return Err(Error::InternalConsistency(format!(
                "cell {} disagrees with the critical set",
                p.describe(i)
            )));
        }
    }
    if lower + upper + crit.total() != p.len() || lower != upper {
        return Err(Error::InternalConsistency("matched and critical cells do not partition the poset".into()));
    }
    Ok(())
}

fn acyclic_index(p: &FacePoset, m: &Matching) -> Result<MatchIndex> {
    let idx = MatchIndex::new(p, m)?;
    if let Some(cycle) = is_acyclic(p, m)?.cycle {
        let cells: Vec<String> = cycle.iter().map(|&c| p.describe(c)).collect();
        return Err(Error::PreconditionViolation(format!("matching has a cycle: {}", cells.join(" -> "))));
    }
    Ok(idx)
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

/// For every cell of dimension `d`, the parity vector of alternating paths
/// ending at each critical `d`-cell (indexed by position in `critical`).
fn flow(p: &FacePoset, idx: &MatchIndex, d: usize, critical: &[usize]) -> (usize, Vec<u64>) {
    let range = p.ids_of_dim(d);
    let base = range.start;
    let count = range.len();
    let words = words_for(critical.len());
    let mut values = vec![0u64; count * words];
    for (k, &c) in critical.iter().enumerate() {
        values[(c - base) * words + k / 64] |= 1u64 << (k % 64);
    }
    let mut done: Vec<bool> = (0..count).map(|i| !idx.up(base + i).is_some()).collect();
    let mut stack: Vec<(usize, bool)> = Vec::new();
    let mut acc = vec![0u64; words];
    for start in 0..count {
        if done[start] {
            continue;
        }
        stack.push((start, false));
        while let Some((local, expanded)) = stack.pop() {
            if done[local] {
                continue;
            }
            let id = base + local;
            let tau = idx.up(id).unwrap();
            let others: Vec<usize> = p.facets_of(tau).into_iter().filter(|&z| z != id).collect();
            if expanded {
                acc.iter_mut().for_each(|w| *w = 0);
                for z in others {
                    let zl = z - base;
                    for (a, v) in acc.iter_mut().zip(&values[zl * words..(zl + 1) * words]) {
                        *a ^= v;
                    }
                }
                values[local * words..(local + 1) * words].copy_from_slice(&acc);
                done[local] = true;
            } else {
                stack.push((local, true));
                for z in others {
                    if !done[z - base] {
                        stack.push((z - base, false));
                    }
                }
            }
        }
    }
    (words, values)
}

/// Number of alternating paths from `tau` to `sigma`, modulo two.
pub fn alternating_path_parity(p: &FacePoset, m: &Matching, tau: usize, sigma: usize) -> Result<bool> {
    let idx = acyclic_index(p, m)?;
    if tau >= p.len() || sigma >= p.len() {
        return Err(invalid("cell id out of range"));
    }
    let (dt, ds) = (p.dim_of(tau), p.dim_of(sigma));
    if dt != ds + 1 {
        return Err(invalid(format!("dimensions {dt} and {ds} do not differ by one")));
    }
    if !idx.is_critical(tau) || !idx.is_critical(sigma) {
        return Err(Error::PreconditionViolation("both cells must be critical".into()));
    }
    let (words, values) = flow(p, &idx, ds, &[sigma]);
    let base = p.ids_of_dim(ds).start;
    let parity = p
        .facets_of(tau)
        .into_iter()
        .fold(false, |acc, y| acc ^ (values[(y - base) * words] & 1 == 1));
    Ok(parity)
}

/// Critical cells together with the chain complex they span.
#[derive(Clone, Debug)]
pub struct MorseComplex {
    pub critical: CriticalSet,
    pub chain: ChainComplex,
}

/// Boundary matrices between consecutive critical dimensions; rows and
/// columns follow the id order inside each dimension.
pub fn morse_boundaries(p: &FacePoset, m: &Matching) -> Result<MorseComplex> {
    let idx = acyclic_index(p, m)?;
    let critical = critical_from_index(p, &idx);
    let mut top = critical.by_dim.len();
    while top > 1 && critical.by_dim[top - 1].is_empty() {
        top -= 1;
    }
    let dims: Vec<usize> = critical.by_dim[..top].iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for d in 1..top {
        let rows = &critical.by_dim[d - 1];
        let cols = &critical.by_dim[d];
        let (words, values) = flow(p, &idx, d - 1, rows);
        let base = p.ids_of_dim(d - 1).start;
        let mut mat = Gf2Matrix::zeros(rows.len(), cols.len());
        for (j, &tau) in cols.iter().enumerate() {
            let mut acc = vec![0u64; words];
            for y in p.facets_of(tau) {
                let yl = y - base;
                for (a, v) in acc.iter_mut().zip(&values[yl * words..(yl + 1) * words]) {
                    *a ^= v;
                }
            }
            for i in 0..rows.len() {
                if acc[i / 64] >> (i % 64) & 1 == 1 {
                    mat.set(i, j, true);
                }
            }
        }
        boundaries.push(mat);
    }
    let chain = ChainComplex::new(dims, boundaries)?;
    Ok(MorseComplex { critical, chain })
}

/// Every alternating path from `tau` to `sigma`, as the list of cells
/// `x_1, μ(x_1), ..., x_t, μ(x_t)` strictly between them. Stops with a
/// resource-limit error after `limit` paths.
pub fn enumerate_alternating_paths(
    p: &FacePoset,
    m: &Matching,
    tau: usize,
    sigma: usize,
    limit: usize,
) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_paths_from(p, m, tau, limit)?
        .into_iter()
        .filter(|(end, _)| *end == sigma)
        .map(|(_, path)| path)
        .collect())
}

/// Every alternating path from `tau` to any critical cell, as `(end, inner cells)`.
pub fn enumerate_paths_from(p: &FacePoset, m: &Matching, tau: usize, limit: usize) -> Result<Vec<(usize, Vec<usize>)>> {
    Ok(enumerate_paths_from_many(p, m, &[tau], limit)?.pop().unwrap())
}

/// As [`enumerate_paths_from`] for several start cells; `limit` applies per start cell.
pub fn enumerate_paths_from_many(
    p: &FacePoset,
    m: &Matching,
    taus: &[usize],
    limit: usize,
) -> Result<Vec<Vec<(usize, Vec<usize>)>>> {
    let idx = acyclic_index(p, m)?;
    fn walk(
        p: &FacePoset,
        idx: &MatchIndex,
        from: usize,
        skip: Option<usize>,
        path: &mut Vec<usize>,
        out: &mut Vec<(usize, Vec<usize>)>,
        limit: usize,
    ) -> Result<()> {
        for y in p.facets_of(from) {
            if Some(y) == skip {
                continue;
            }
            if idx.is_critical(y) {
                if out.len() == limit {
                    return Err(Error::ResourceLimit {
                        what: "alternating paths".into(),
                        bound: limit as u64,
                    });
                }
                out.push((y, path.clone()));
            } else if let Some(up) = idx.up(y) {
                path.push(y);
                path.push(up);
                walk(p, idx, up, Some(y), path, out, limit)?;
                path.truncate(path.len() - 2);
            }
        }
        Ok(())
    }
    taus.iter()
        .map(|&tau| {
            let mut out = Vec::new();
            walk(p, &idx, tau, None, &mut Vec::new(), &mut out, limit)?;
            Ok(out)
        })
        .collect()
}

/// Cells lying on some alternating path that starts at `tau` and ends at a
/// critical cell accepted by `target`.
pub fn cells_on_paths(
    p: &FacePoset,
    m: &Matching,
    tau: usize,
    target: impl Fn(usize) -> bool,
) -> Result<Vec<usize>> {
    Ok(cells_on_paths_many(p, m, &[tau], target)?.pop().unwrap())
}

/// As [`cells_on_paths`] for several start cells sharing one memo table.
pub fn cells_on_paths_many(
    p: &FacePoset,
    m: &Matching,
    taus: &[usize],
    target: impl Fn(usize) -> bool,
) -> Result<Vec<Vec<usize>>> {
    let idx = acyclic_index(p, m)?;
    let mut memo: HashMap<usize, bool> = HashMap::new();
    // iterative so that long gradient paths cannot exhaust the stack
    let reaches = |start: usize, memo: &mut HashMap<usize, bool>| -> bool {
        let mut stack = vec![(start, false)];
        while let Some((y, expanded)) = stack.pop() {
            if memo.contains_key(&y) {
                continue;
            }
            if idx.is_critical(y) {
                memo.insert(y, target(y));
                continue;
            }
            let Some(up) = idx.up(y) else {
                memo.insert(y, false);
                continue;
            };
            let next: Vec<usize> = p.facets_of(up).into_iter().filter(|&z| z != y).collect();
            if expanded {
                let r = next.iter().any(|z| memo[z]);
                memo.insert(y, r);
            } else {
                stack.push((y, true));
                stack.extend(next.into_iter().filter(|z| !memo.contains_key(z)).map(|z| (z, false)));
            }
        }
        memo[&start]
    };
    let mut all = Vec::with_capacity(taus.len());
    for &tau in taus {
        let mut on_path = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut queue: Vec<usize> = p.facets_of(tau);
        while let Some(y) = queue.pop() {
            if !seen.insert(y) || !reaches(y, &mut memo) {
                continue;
            }
            if let Some(up) = idx.up(y) {
                on_path.push(y);
                on_path.push(up);
                queue.extend(p.facets_of(up).into_iter().filter(|&z| z != y));
            }
        }
        on_path.sort_unstable();
        on_path.dedup();
        all.push(on_path);
    }
    Ok(all)
}
