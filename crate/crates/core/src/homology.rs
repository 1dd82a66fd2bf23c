//! Linear algebra over the two-element field and Betti numbers.
//!
//! Small matrices (Morse boundaries, incidence matrices) are dense and
//! bit-packed by rows. Simplicial boundary matrices of large complexes are
//! reduced column by column in sparse form, largest dimension first, so that
//! faces already known to be pivots can be skipped one dimension down.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::simplicial::{faces_up_to_bounded, Complex, Faces, Simplex, DEFAULT_FACE_BOUND};

/// Dense matrix over the two-element field with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            let line: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Sets every listed `(row, col)` entry to one.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for &(r, c) in entries {
            if r >= rows || c >= cols {
                return Err(invalid(format!("entry ({r},{c}) outside {rows}x{cols}")));
            }
            m.set(r, c, true);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        let bit = 1u64 << (c % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1u64 << (c % 64);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.cols).map(|c| self.column_weight(c)).collect()
    }

    /// Rows holding a one in column `c`.
    pub fn column_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    out.push((r, wi * 64 + b));
                    w &= w - 1;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for (r, c) in self.entries() {
            t.set(c, r, true);
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k).to_vec();
                    let dst = &mut out.data[r * out.words..(r + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank by row reduction on a private copy.
    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        let words = self.words;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..self.rows).find(|&r| data[r * words + w] & bit != 0) else {
                continue;
            };
            if p != rank {
                for k in w..words {
                    data.swap(p * words + k, rank * words + k);
                }
            }
            for r in rank + 1..self.rows {
                if data[r * words + w] & bit != 0 {
                    for k in w..words {
                        let v = data[rank * words + k];
                        data[r * words + k] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

pub fn rank_gf2(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// A sparse matrix over the two-element field, stored as sorted columns.
#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    pub nrows: usize,
    pub columns: Vec<Vec<u32>>,
}

/// Outcome of a sparse column reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    /// Rows that ended up as the lowest entry of some reduced column.
    pub pivot_rows: Vec<u32>,
}

fn xor_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

impl SparseColumns {
    /// Column reduction with the largest row index as pivot. Columns whose
    /// index is flagged in `skip` are known to reduce to zero and are ignored.
    pub fn reduce(&self, skip: Option<&[bool]>) -> Reduction {
        let mut owner: Vec<u32> = vec![u32::MAX; self.nrows];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut pivot_rows = Vec::new();
        let mut scratch = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            if skip.is_some_and(|s| s[j]) {
                continue;
            }
            let mut cur = col.clone();
            while let Some(&low) = cur.last() {
                let o = owner[low as usize];
                if o == u32::MAX {
                    break;
                }
                xor_sorted(&cur, &reduced[o as usize], &mut scratch);
                std::mem::swap(&mut cur, &mut scratch);
            }
            if let Some(&low) = cur.last() {
                owner[low as usize] = reduced.len() as u32;
                pivot_rows.push(low);
                reduced.push(cur);
            }
        }
        Reduction {
            rank: reduced.len(),
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.reduce(None).rank
    }

    pub fn to_dense(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.nrows, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for &r in col {
                m.toggle(r as usize, c);
            }
        }
        m
    }
}

/// Sparse boundary `∂_k`: rows are the `(k-1)`-faces, columns the `k`-faces.
pub fn sparse_boundary(faces: &Faces, k: usize) -> SparseColumns {
    use rayon::prelude::*;
    if k == 0 || k >= faces.by_dim.len() {
        let nrows = if k == 0 { 0 } else { faces.by_dim.get(k - 1).map_or(0, |f| f.len()) };
        let ncols = faces.by_dim.get(k).map_or(0, |f| f.len());
        return SparseColumns {
            nrows,
            columns: vec![Vec::new(); ncols],
        };
    }
    let lower = &faces.by_dim[k - 1];
    let upper = &faces.by_dim[k];
    let columns = (0..upper.len())
        .into_par_iter()
        .map(|j| {
            let face = upper.get(j);
            let mut buf = Vec::with_capacity(k);
            let mut col: Vec<u32> = (0..face.len())
                .map(|skip| {
                    buf.clear();
                    buf.extend(face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    lower.index_of(&buf).expect("faces are closed under taking subsets") as u32
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    SparseColumns {
        nrows: lower.len(),
        columns,
    }
}

/// A boundary matrix together with the faces indexing its rows and columns.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub matrix: Gf2Matrix,
    pub rows: Vec<Simplex>,
    pub cols: Vec<Simplex>,
}

/// Dense `∂_k` of a complex; intended for complexes of moderate size.
pub fn boundary_matrix(c: &Complex, k: usize) -> Result<BoundaryMatrix> {
    let faces = faces_up_to_bounded(c, k, DEFAULT_FACE_BOUND)?;
    let sparse = sparse_boundary(&faces, k);
    let rows = if k == 0 { Vec::new() } else { faces.by_dim[k - 1].to_simplices() };
    Ok(BoundaryMatrix {
        matrix: sparse.to_dense(),
        rows,
        cols: faces.by_dim[k].to_simplices(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Morse,
}

/// Betti numbers over the two-element field for dimensions `0..=max_verified_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub method: Method,
    pub betti: Vec<usize>,
    /// `None` when not even dimension 0 could be certified.
    pub max_verified_dim: Option<usize>,
}

impl BettiTable {
    pub fn new(method: Method, betti: Vec<usize>) -> Self {
        let max_verified_dim = betti.len().checked_sub(1);
        BettiTable {
            method,
            betti,
            max_verified_dim,
        }
    }

    pub fn get(&self, k: usize) -> Option<usize> {
        self.betti.get(k).copied()
    }

    /// Entries with trailing zeros removed (at least one entry kept when nonempty).
    pub fn trimmed(&self) -> Vec<usize> {
        let mut v = self.betti.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Equality on the dimensions both tables certify.
    pub fn agrees_with(&self, other: &BettiTable) -> bool {
        self.betti.iter().zip(&other.betti).all(|(a, b)| a == b)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["dim", "betti", "method"])?;
        let method = match self.method {
            Method::Bruteforce => "bruteforce",
            Method::Morse => "morse",
        };
        for (k, b) in self.betti.iter().enumerate() {
            w.write_record([k.to_string().as_str(), b.to_string().as_str(), method])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Betti numbers of `c` for dimensions `0..=maxdim` by direct reduction of the
/// simplicial boundary matrices, with the default face bound.
pub fn betti_bounded(c: &Complex, maxdim: usize) -> BettiTable {
    betti_bounded_with(c, maxdim, DEFAULT_FACE_BOUND)
}

/// As [`betti_bounded`]; when faces up to `maxdim + 1` would exceed `face_bound`,
/// the table is truncated to the largest dimension that fits.
pub fn betti_bounded_with(c: &Complex, maxdim: usize, face_bound: u64) -> BettiTable {
    let mut d = maxdim;
    loop {
        match faces_up_to_bounded(c, d + 1, face_bound) {
            Ok(faces) => return betti_from_faces(&faces, d),
            Err(_) if d > 0 => d -= 1,
            Err(_) => {
                return BettiTable {
                    method: Method::Bruteforce,
                    betti: Vec::new(),
                    max_verified_dim: None,
                }
            }
        }
    }
}

/// Betti numbers `0..=d` from faces enumerated up to dimension `d + 1`.
pub fn betti_from_faces(faces: &Faces, d: usize) -> BettiTable {
    assert!(faces.by_dim.len() >= d + 2, "faces must reach dimension d+1");
    let counts = faces.counts();
    let mut ranks = vec![0usize; d + 2];
    let mut skip: Option<Vec<bool>> = None;
    for k in (1..=d + 1).rev() {
        let red = sparse_boundary(faces, k).reduce(skip.as_deref());
        ranks[k] = red.rank;
        let mut mask = vec![false; counts[k - 1]];
        for r in red.pivot_rows {
            mask[r as usize] = true;
        }
        skip = Some(mask);
    }
    let betti = (0..=d).map(|k| counts[k] - ranks[k] - ranks[k + 1]).collect();
    BettiTable::new(Method::Bruteforce, betti)
}

/// A finite chain complex over the two-element field.
///
/// `boundaries[k - 1]` is `∂_k : C_k -> C_{k-1}` with `dims[k - 1]` rows and `dims[k]` columns.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundaries: Vec<Gf2Matrix>,
}

/// Wire form of a matrix: shape plus the positions of its ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[usize; 2]>,
}

impl From<&Gf2Matrix> for MatrixJson {
    fn from(m: &Gf2Matrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().into_iter().map(|(r, c)| [r, c]).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for Gf2Matrix {
    type Error = Error;
    fn try_from(j: &MatrixJson) -> Result<Self> {
        let entries: Vec<(usize, usize)> = j.entries.iter().map(|e| (e[0], e[1])).collect();
        Gf2Matrix::from_entries(j.rows, j.cols, &entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplexJson {
    pub dims: Vec<usize>,
    pub boundaries: Vec<MatrixJson>,
}

impl ChainComplex {
    /// Checks shapes and `∂_k ∂_{k+1} = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Gf2Matrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(invalid(format!(
                "{} chain groups need {} boundary maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[i] || b.cols() != dims[i + 1] {
                return Err(invalid(format!(
                    "boundary {} is {}x{}, expected {}x{}",
                    i + 1,
                    b.rows(),
                    b.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                return Err(Error::InvalidChain { dim: k });
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn betti(&self) -> BettiTable {
        let ranks: Vec<usize> = self.boundaries.iter().map(Gf2Matrix::rank).collect();
        let rank = |k: usize| if k == 0 || k > ranks.len() { 0 } else { ranks[k - 1] };
        let betti = (0..self.dims.len())
            .map(|k| self.dims[k] - rank(k) - rank(k + 1))
            .collect();
        BettiTable::new(Method::Morse, betti)
    }

    pub fn to_json(&self) -> ChainComplexJson {
        ChainComplexJson {
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(MatrixJson::from).collect(),
        }
    }

    pub fn from_json(j: &ChainComplexJson) -> Result<Self> {
        let boundaries = j
            .boundaries
            .iter()
            .map(Gf2Matrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        ChainComplex::new(j.dims.clone(), boundaries)
    }
}

/// Betti numbers of the chain complex with groups of the given `dims`.
pub fn betti_of_chain(dims: &[usize], boundaries: &[Gf2Matrix]) -> Result<BettiTable> {
    Ok(ChainComplex::new(dims.to_vec(), boundaries.to_vec())?.betti())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn dense_basics() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        let ones = Gf2Matrix::from_fn(4, 4, |_, _| true);
        assert_eq!(rank_gf2(&ones), 1);
        assert_eq!(Gf2Matrix::zeros(5, 0).rank(), 0);
        let wide = Gf2Matrix::from_fn(3, 130, |r, c| c % 3 == r);
        assert_eq!(wide.rank(), 3);
        assert_eq!(wide.transpose().rank(), 3);
        let before = ones.clone();
        let _ = ones.rank();
        assert_eq!(ones, before);
    }

    #[test]
    fn boundary_of_triangle_edges() {
        let c = Complex::from_simplices(vec![s(&[0, 1]), s(&[1, 2]), s(&[0, 2])], labels(3)).unwrap();
        let b = boundary_matrix(&c, 1).unwrap();
        assert_eq!((b.matrix.rows(), b.matrix.cols()), (3, 3));
        assert_eq!(b.matrix.column_weights(), vec![2, 2, 2]);
        assert_eq!(b.matrix.rank(), 2);
    }

    #[test]
    fn boundary_of_single_triangle() {
        let c = Complex::from_simplices(vec![s(&[0, 1, 2])], labels(3)).unwrap();
        let b = boundary_matrix(&c, 2).unwrap();
        assert_eq!((b.matrix.rows(), b.matrix.cols()), (3, 1));
        assert_eq!(b.matrix.column_weights(), vec![3]);
    }

    #[test]
    fn betti_of_triangle_boundary() {
        let c = Complex::from_simplices(vec![s(&[0, 1]), s(&[1, 2]), s(&[0, 2])], labels(3)).unwrap();
        let t = betti_bounded(&c, 1);
        assert_eq!(t.betti, vec![1, 1]);
        assert_eq!(t.max_verified_dim, Some(1));
        assert_eq!(t.method, Method::Bruteforce);
    }

    #[test]
    fn betti_of_sphere_and_points() {
        let tetra = Complex::from_simplices(
            vec![s(&[0, 1, 2]), s(&[0, 1, 3]), s(&[0, 2, 3]), s(&[1, 2, 3])],
            labels(4),
        )
        .unwrap();
        assert_eq!(betti_bounded(&tetra, 3).betti, vec![1, 0, 1, 0]);
        let points = Complex::from_simplices(vec![s(&[0]), s(&[1])], labels(2)).unwrap();
        assert_eq!(betti_bounded(&points, 1).betti, vec![2, 0]);
    }

    #[test]
    fn truncated_table_is_honest() {
        let big = Complex::from_simplices(vec![s(&(0..12).collect::<Vec<_>>())], labels(12)).unwrap();
        let t = betti_bounded_with(&big, 5, 12 + 66 + 220);
        assert_eq!(t.max_verified_dim, Some(1));
        assert_eq!(t.betti, vec![1, 0]);
    }

    #[test]
    fn trivial_chain() {
        let t = betti_of_chain(&[1], &[]).unwrap();
        assert_eq!(t.betti, vec![1]);
        assert_eq!(t.method, Method::Morse);
    }

    #[test]
    fn nonzero_composition_rejected() {
        let d1 = Gf2Matrix::from_fn(1, 1, |_, _| true);
        let d2 = Gf2Matrix::from_fn(1, 1, |_, _| true);
        match betti_of_chain(&[1, 1, 1], &[d1, d2]) {
            Err(Error::InvalidChain { dim }) => assert_eq!(dim, 1),
            other => panic!("expected invalid chain, got {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(betti_of_chain(&[2, 1], &[Gf2Matrix::zeros(1, 1)]).is_err());
    }

    #[test]
    fn chain_json_round_trip() {
        let d1 = Gf2Matrix::from_entries(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let cc = ChainComplex::new(vec![2, 1], vec![d1]).unwrap();
        let text = serde_json::to_string(&cc.to_json()).unwrap();
        let back: ChainComplexJson = serde_json::from_str(&text).unwrap();
        let cc2 = ChainComplex::from_json(&back).unwrap();
        assert_eq!(cc2.betti().betti, vec![1, 0]);
    }

    #[test]
    fn betti_json_shape() {
        let t = BettiTable::new(Method::Morse, vec![1, 1, 14]);
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"method":"morse","betti":[1,1,14],"max_verified_dim":2}"#
        );
    }

    #[test]
    fn sparse_matches_dense() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]];
        let sp = SparseColumns { nrows: 4, columns: cols };
        assert_eq!(sp.rank(), sp.to_dense().rank());
        assert_eq!(sp.rank(), 3);
    }
}
