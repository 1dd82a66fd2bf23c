//! The explicit acyclic matching `μ = μ1 ∪ μ2` on `Δ`, its critical cells in
//! closed form, the incidence matrix between critical 2-cells and 1-cells, and
//! the homology reports built on top of them.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{
    complete_graph, exponential_graph, fold_core_exponential, fold_to_fixed_point, variant, FnKind, FnVertex,
};
use crate::homology::{betti_bounded, BettiTable, Gf2Matrix};
use crate::morse::{
    cells_on_paths_many, check_partition, enumerate_paths_from_many, face_poset, is_acyclic, morse_boundaries,
    validate_matching, Acyclicity, FacePoset, Matching, MorseComplex,
};
use crate::simplicial::{
    build_delta, collapse_core_to_delta, facet_set, free_face_census, neighborhood_complex, Complex, Delta,
    FamilySizes, Simplex,
};

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The three shapes a 1-cell left over by `μ1` can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeType {
    /// `{f, <x>}` with `1 ∉ Im f`, `x != 1`.
    I,
    /// `{f, <x>}` with `x ∉ Im f`, `x != 1`.
    II,
    /// `{f, f_i}` with `f(k) = 1` for some `k != i`.
    III,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MatchCensus {
    /// Pairs `σ -> σ ∪ <1>`.
    pub s1: usize,
    /// Pairs from the second matching.
    pub s2: usize,
    pub type_i: usize,
    pub type_ii: usize,
    pub type_iii: usize,
    /// Type I cells `{f, <2>}` left unmatched.
    pub excluded: usize,
}

/// `Δ`, its face poset and the matching `μ` on it.
#[derive(Clone, Debug)]
pub struct MuMatching {
    pub delta: Delta,
    pub poset: FacePoset,
    pub matching: Matching,
    pub census: MatchCensus,
}

fn n_constants(delta: &Delta) -> u32 {
    delta.n as u32 + 1
}

fn map_of<'a>(delta: &'a Delta, v: u32) -> &'a FnVertex {
    delta.core.map(v as usize)
}

/// Classifies a 1-cell of `Δ` by shape; `None` when it fits none of the types.
pub fn classify_edge(delta: &Delta, cell: &[u32]) -> Option<EdgeType> {
    let [a, b] = cell else { return None };
    let consts = n_constants(delta);
    match (*a < consts, *b < consts) {
        (true, false) => {
            let x = *a as u8 + 1;
            let f = map_of(delta, *b);
            if x == 1 {
                None
            } else if !f.contains_value(1) {
                Some(EdgeType::I)
            } else if !f.contains_value(x) {
                Some(EdgeType::II)
            } else {
                None
            }
        }
        (false, false) => {
            let (f, g) = (map_of(delta, *a), map_of(delta, *b));
            let diff: Vec<usize> = (1..=delta.n).filter(|&i| f.at(i) != g.at(i)).collect();
            let [i] = diff[..] else { return None };
            match f.position_of(1) {
                Some(k) if k != i => Some(EdgeType::III),
                _ => None,
            }
        }
        _ => None,
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Image of a type I/II/III 1-cell under the second matching, as a vertex list;
/// `None` for the excluded cells `{f, <2>}` with `1 ∉ Im f`.
fn mu2_image(delta: &Delta, cell: &[u32], ty: EdgeType) -> Result<Option<Vec<u32>>> {
    let (a, b) = (cell[0], cell[1]);
    Ok(match ty {
        EdgeType::III => {
            let (f, g) = (map_of(delta, a), map_of(delta, b));
            let i = (1..=delta.n).find(|&i| f.at(i) != g.at(i)).expect("maps differ");
            let top = f.at(i).max(g.at(i));
            Some(sorted(vec![a, b, delta.constant(top)]))
        }
        EdgeType::II => {
            let x = a as u8 + 1;
            let f = map_of(delta, b);
            let k = f.position_of(1).expect("1 lies in the image");
            let fk = variant(f, k, x)?;
            Some(sorted(vec![a, b, delta.injective(fk.values())]))
        }
        EdgeType::I => {
            let y = a as u8 + 1;
            if y == 2 {
                None
            } else {
                Some(sorted(vec![a, b, delta.constant(2)]))
            }
        }
    })
}

/// Builds `μ1 ∪ μ2` on the face poset of `Δ` for `n >= 3`, checking that every
/// leftover 1-cell is classified, every image is a cell of `Δ`, and no two
/// cells share an image.
pub fn build_matching_mu(n: usize) -> Result<MuMatching> {
    let delta = build_delta(n)?;
    let poset = face_poset(&delta.complex)?;
    let one = delta.constant(1);
    let mut taken = vec![false; poset.len()];
    let mut pairs = Vec::new();
    let mut census = MatchCensus::default();
    for id in 0..poset.len() {
        let cell = poset.cell(id);
        let Err(pos) = cell.binary_search(&one) else { continue };
        let mut with = cell.to_vec();
        with.insert(pos, one);
        if let Some(t) = poset.id_of(&with) {
            pairs.push((id, t));
            taken[id] = true;
            taken[t] = true;
            census.s1 += 1;
        }
    }
    let mut image_of: HashMap<usize, usize> = HashMap::new();
    for id in poset.ids_of_dim(1) {
        if taken[id] {
            continue;
        }
        let cell = poset.cell(id);
        let ty = classify_edge(&delta, cell).ok_or_else(|| {
            Error::LemmaViolation(format!("1-cell {} left by μ1 fits none of the three types", poset.describe(id)))
        })?;
        match ty {
            EdgeType::I => census.type_i += 1,
            EdgeType::II => census.type_ii += 1,
            EdgeType::III => census.type_iii += 1,
        }
        let Some(image) = mu2_image(&delta, cell, ty)? else {
            census.excluded += 1;
            continue;
        };
        let t = poset.id_of(&image).ok_or_else(|| {
            Error::InternalConsistency(format!("μ2 image of {} is not a cell of Δ", poset.describe(id)))
        })?;
        if taken[t] {
            return Err(Error::LemmaViolation(format!(
                "μ2 image {} of {} is already matched",
                poset.describe(t),
                poset.describe(id)
            )));
        }
        if let Some(prev) = image_of.insert(t, id) {
            return Err(Error::LemmaViolation(format!(
                "μ2 is not injective: {} and {} both map to {}",
                poset.describe(prev),
                poset.describe(id),
                poset.describe(t)
            )));
        }
        pairs.push((id, t));
        census.s2 += 1;
    }
    Ok(MuMatching {
        delta,
        poset,
        matching: Matching::new(pairs),
        census,
    })
}

/// Critical cells of `μ` written down from their defining conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCritical {
    pub n: usize,
    pub zero: Simplex,
    /// `{f, <2>}` with `Im f = [n+1] \ {1}`.
    pub c1: Vec<Simplex>,
    /// `{f, f_i, <x>}` with `x ∉ Im f`, `f(k) = 1`, `i != k`, `x < f(i)`.
    pub c2: Vec<Simplex>,
    /// `{<2>, ..., <n+1>}`.
    pub c3: Simplex,
}

impl ClosedFormCritical {
    pub fn by_dim(&self) -> Vec<Vec<Simplex>> {
        let mut out = vec![Vec::new(); self.n];
        out[0].push(self.zero.clone());
        out[1].extend(self.c1.iter().cloned());
        out[2].extend(self.c2.iter().cloned());
        out[self.n - 1].push(self.c3.clone());
        for d in &mut out {
            d.sort();
        }
        out
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim().iter().map(Vec::len).collect()
    }
}

pub fn closed_form_critical(n: usize) -> Result<ClosedFormCritical> {
    if n < 3 {
        return Err(invalid(format!("critical census needs n >= 3, got {n}")));
    }
    let core = fold_core_exponential(n + 1, n)?;
    let m = (n + 1) as u8;
    let konst = |x: u8| x as u32 - 1;
    let idx = |f: &FnVertex| core.index_of(f.values()).expect("map of the core") as u32;
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for f in core.maps().iter().filter(|f| f.kind() == FnKind::Injective) {
        let x = f.missing_values(m)[0];
        let Some(k) = f.position_of(1) else {
            c1.push(Simplex::new(vec![idx(f), konst(2)])?);
            continue;
        };
        for i in (1..=n).filter(|&i| i != k && x < f.at(i)) {
            let fi = variant(f, i, x)?;
            c2.push(Simplex::new(vec![idx(f), idx(&fi), konst(x)])?);
        }
    }
    c1.sort();
    c2.sort();
    Ok(ClosedFormCritical {
        n,
        zero: Simplex::new(vec![konst(1)])?,
        c1,
        c2,
        c3: Simplex::new((2..=m).map(konst).collect())?,
    })
}

/// The injective maps `[n] -> {2, ..., n+1}` listed so that consecutive maps
/// differ by swapping the values at two positions (adjacent-transposition order).
pub fn wn_transposition_ordering(n: usize) -> Result<Vec<FnVertex>> {
    if n < 2 {
        return Err(invalid(format!("the ordering needs n >= 2, got {n}")));
    }
    if n > 12 {
        return Err(Error::ResourceLimit {
            what: format!("{n}! orderings"),
            bound: 479_001_600,
        });
    }
    // Steinhaus-Johnson-Trotter with directions: false = left, true = right
    let mut perm: Vec<usize> = (0..n).collect();
    let mut right = vec![false; n];
    let mut out = Vec::with_capacity(factorial(n));
    loop {
        out.push(FnVertex::new(perm.iter().map(|&e| e as u8 + 2).collect())?);
        let mut mobile: Option<usize> = None;
        for pos in 0..n {
            let e = perm[pos];
            let target = if right[e] { pos + 1 } else { pos.wrapping_sub(1) };
            if target < n && perm[target] < e && mobile.is_none_or(|mp| perm[mp] < e) {
                mobile = Some(pos);
            }
        }
        let Some(pos) = mobile else { break };
        let e = perm[pos];
        let target = if right[e] { pos + 1 } else { pos - 1 };
        perm.swap(pos, target);
        for d in right.iter_mut().skip(e + 1) {
            *d = !*d;
        }
    }
    Ok(out)
}

/// `a ~ b`: the two maps differ exactly by swapping the values at two positions.
pub fn is_transposition_pair(a: &FnVertex, b: &FnVertex) -> bool {
    if a.domain_size() != b.domain_size() {
        return false;
    }
    let diff: Vec<usize> = (1..=a.domain_size()).filter(|&i| a.at(i) != b.at(i)).collect();
    matches!(diff[..], [i, j] if a.at(i) == b.at(j) && a.at(j) == b.at(i))
}

/// The matching together with its Morse complex.
#[derive(Clone, Debug)]
pub struct MorseRun {
    pub mu: MuMatching,
    pub acyclicity: Acyclicity,
    pub morse: MorseComplex,
}

pub fn run_morse(n: usize) -> Result<MorseRun> {
    let mu = build_matching_mu(n)?;
    let acyclicity = is_acyclic(&mu.poset, &mu.matching)?;
    if let Some(cycle) = &acyclicity.cycle {
        let cells: Vec<String> = cycle.iter().map(|&c| mu.poset.describe(c)).collect();
        return Err(Error::LemmaViolation(format!("μ has a cycle: {}", cells.join(" -> "))));
    }
    let morse = morse_boundaries(&mu.poset, &mu.matching)?;
    Ok(MorseRun { mu, acyclicity, morse })
}

/// Incidences between the `C2` cells (columns, in cell order) and the `C1`
/// cells (rows, in transposition order of their maps).
#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    pub matrix: Gf2Matrix,
    pub rows: Vec<Simplex>,
    pub row_maps: Vec<FnVertex>,
    pub cols: Vec<Simplex>,
}

pub fn incidence_matrix_a(n: usize) -> Result<IncidenceMatrix> {
    incidence_matrix_from(&run_morse(n)?)
}

pub fn incidence_matrix_from(run: &MorseRun) -> Result<IncidenceMatrix> {
    let n = run.mu.delta.n;
    let delta = &run.mu.delta;
    let p = &run.mu.poset;
    let crit = &run.morse.critical;
    let closed = closed_form_critical(n)?;
    let c2: HashSet<&Simplex> = closed.c2.iter().collect();
    let d2 = run
        .morse
        .chain
        .boundaries
        .get(1)
        .ok_or_else(|| Error::InternalConsistency("no boundary in dimension 2".into()))?;
    let row_pos: HashMap<usize, usize> = crit.by_dim[1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let order = wn_transposition_ordering(n)?;
    let mut rows = Vec::with_capacity(order.len());
    let mut src_rows = Vec::with_capacity(order.len());
    for f in &order {
        let cell = Simplex::new(vec![delta.injective(f.values()), delta.constant(2)])?;
        let id = p
            .id_of_simplex(&cell)
            .ok_or_else(|| Error::InternalConsistency(format!("{} is not a cell", p.labels()[cell.vertices()[0] as usize])))?;
        let r = *row_pos
            .get(&id)
            .ok_or_else(|| Error::LemmaViolation(format!("{} is not critical", p.describe(id))))?;
        rows.push(cell);
        src_rows.push(r);
    }
    let cols_src: Vec<(usize, Simplex)> = crit.by_dim[2]
        .iter()
        .enumerate()
        .map(|(j, &c)| (j, p.simplex(c)))
        .filter(|(_, s)| c2.contains(s))
        .collect();
    let matrix = Gf2Matrix::from_fn(rows.len(), cols_src.len(), |r, c| d2.get(src_rows[r], cols_src[c].0));
    for (c, (_, s)) in cols_src.iter().enumerate() {
        let w = matrix.column_weight(c);
        if w != 2 {
            return Err(Error::LemmaViolation(format!(
                "column {} of the incidence matrix has weight {w}, expected 2",
                describe(delta, s)
            )));
        }
    }
    Ok(IncidenceMatrix {
        matrix,
        rows,
        row_maps: order,
        cols: cols_src.into_iter().map(|(_, s)| s).collect(),
    })
}

fn describe(delta: &Delta, s: &Simplex) -> String {
    delta.complex.describe(s)
}

/// The two critical 1-cells a `C2` cell `{f, f_i, <x>}` is expected to reach:
/// `{f_k, <2>}` and `{(f_i)_k, <2>}` with `f(k) = 1`.
pub fn expected_targets(delta: &Delta, tau: &Simplex) -> Result<[Simplex; 2]> {
    let m = (delta.n + 1) as u8;
    let consts = n_constants(delta);
    let vs = tau.vertices();
    let [x_idx, g, h] = [vs[0], vs[1], vs[2]];
    if x_idx >= consts || g < consts || h < consts {
        return Err(invalid(format!("{} is not of the shape {{f, f_i, <x>}}", describe(delta, tau))));
    }
    let x = x_idx as u8 + 1;
    let (gm, hm) = (map_of(delta, g), map_of(delta, h));
    let (f, fi) = if gm.missing_values(m) == [x] { (gm, hm) } else { (hm, gm) };
    let k = f.position_of(1).ok_or_else(|| invalid("1 must lie in the image"))?;
    let fk = variant(f, k, x)?;
    let fik = variant(fi, k, fi.missing_values(m)[0])?;
    let two = delta.constant(2);
    Ok([
        Simplex::new(vec![delta.injective(fk.values()), two])?,
        Simplex::new(vec![delta.injective(fik.values()), two])?,
    ])
}

/// Betti numbers predicted by the closed-form census: `1, 1, p - n! + 1` in
/// dimensions 0–2 and `1` in dimension `n - 1` (added to dimension 2 when `n = 3`).
pub fn expected_betti(n: usize) -> Vec<usize> {
    let fact = factorial(n);
    let p = fact * (n - 1) * n / 2;
    let mut b = vec![0; n];
    b[0] = 1;
    b[1] = 1;
    b[2] = p - fact + 1;
    b[n - 1] += 1;
    b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> CrossCheck {
    CrossCheck {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalFamilies {
    pub zero: usize,
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
    pub c3_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub facets: FamilySizes,
    pub critical: Vec<usize>,
    pub critical_families: CriticalFamilies,
    pub rank_d2: usize,
    pub betti: Vec<usize>,
    pub acyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce: Option<BettiTable>,
    pub crosschecks: Vec<CrossCheck>,
}

impl PipelineReport {
    pub fn all_pass(&self) -> bool {
        self.crosschecks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CrossCheck> {
        self.crosschecks.iter().filter(|c| !c.pass).collect()
    }
}

/// How much direct homology of the neighborhood complex to compute alongside
/// the Morse pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteForce {
    /// All dimensions for `n <= 4`, dimensions 0–1 for `n = 5`, none beyond.
    Default,
    Off,
    UpTo(usize),
}

pub fn theorem1_report(n: usize) -> Result<PipelineReport> {
    theorem1_report_with(n, BruteForce::Default)
}

pub fn theorem1_report_with(n: usize, brute: BruteForce) -> Result<PipelineReport> {
    if n < 3 {
        return Err(invalid(format!("the pipeline needs n >= 3, got {n}")));
    }
    let run = run_morse(n)?;
    let mu = &run.mu;
    let mut checks = Vec::new();

    let predicted = FamilySizes::predicted(n);
    checks.push(check(
        "facet_families",
        mu.delta.families == predicted,
        format!("{} vs {}", families_text(&mu.delta.families), families_text(&predicted)),
    ));
    let validation = validate_matching(&mu.poset, &mu.matching);
    checks.push(check(
        "matching_valid",
        validation.is_ok(),
        validation.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
    ));
    checks.push(check("acyclic", run.acyclicity.acyclic, ""));

    let crit = &run.morse.critical;
    let partition = check_partition(&mu.poset, &mu.matching, crit);
    checks.push(check(
        "critical_partition",
        partition.is_ok(),
        partition.err().map(|e| e.to_string()).unwrap_or_default(),
    ));

    let closed = closed_form_critical(n)?;
    let engine = crit.simplices(&mu.poset);
    let closed_dims = closed.by_dim();
    checks.push(check(
        "critical_closed_form",
        engine == closed_dims,
        format!("engine {:?}, closed form {:?}", crit.counts(), closed.counts()),
    ));
    let fact = factorial(n);
    checks.push(check(
        "critical_count_formula",
        closed.c1.len() == fact && closed.c2.len() == fact * (n - 1) * n / 2,
        format!("|C1| = {}, |C2| = {}", closed.c1.len(), closed.c2.len()),
    ));

    let (a_check, pairing) = match incidence_matrix_from(&run) {
        Ok(a) => {
            let pairing = pairing_failures(&run, &a)?;
            (check("d2_column_weights", true, format!("{}x{}", a.matrix.rows(), a.matrix.cols())), pairing)
        }
        Err(e) => (check("d2_column_weights", false, e.to_string()), vec!["matrix unavailable".to_string()]),
    };
    checks.push(a_check);
    checks.push(check("d2_pairing", pairing.is_empty(), pairing.join("; ")));

    let boundaries = &run.morse.chain.boundaries;
    let rank_d2 = boundaries.get(1).map_or(0, Gf2Matrix::rank);
    checks.push(check("rank_d2", rank_d2 == fact - 1, format!("rank {rank_d2}, expected {}", fact - 1)));
    if n >= 4 {
        let top = boundaries.get(n - 2);
        let zero = top.is_some_and(Gf2Matrix::is_zero);
        checks.push(check("top_boundary_zero", zero, format!("boundary out of dimension {}", n - 1)));
    }

    let betti_table = run.morse.chain.betti();
    let betti = betti_table.betti.clone();
    let expected = expected_betti(n);
    checks.push(check("betti_formula", betti == expected, format!("{betti:?} vs {expected:?}")));

    let delta_brute = betti_bounded(&mu.delta.complex, n);
    checks.push(check(
        "bruteforce_delta",
        delta_brute.agrees_with(&betti_table),
        verified_text(&delta_brute),
    ));

    let core_dims = match brute {
        BruteForce::Off => None,
        BruteForce::UpTo(d) => Some(d),
        BruteForce::Default if n <= 4 => Some(n - 1),
        BruteForce::Default if n == 5 => Some(1),
        BruteForce::Default => None,
    };
    let mut bruteforce = None;
    if let Some(d) = core_dims {
        let core = fold_core_exponential(n + 1, n)?;
        let table = betti_bounded(&neighborhood_complex(&core), d);
        let certified = table.max_verified_dim.map_or(0, |t| t + 1);
        let mut detail = verified_text(&table);
        if certified < betti.len() {
            detail.push_str(&format!("; dimensions {certified}..{} rely on the Morse complex alone", betti.len() - 1));
        }
        checks.push(check(
            "bruteforce_core",
            table.max_verified_dim.is_some() && table.agrees_with(&betti_table),
            detail,
        ));
        bruteforce = Some(table);
    }

    let counts = crit.counts();
    Ok(PipelineReport {
        n,
        facets: mu.delta.families,
        critical: counts,
        critical_families: CriticalFamilies {
            zero: 1,
            c1: closed.c1.len(),
            c2: closed.c2.len(),
            c3: 1,
            c3_dim: n - 1,
        },
        rank_d2,
        betti,
        acyclic: run.acyclicity.acyclic,
        bruteforce,
        crosschecks: checks,
    })
}

fn families_text(f: &FamilySizes) -> String {
    format!("M1={} A1={} A2={} A3={}", f.m1, f.a1, f.a2, f.a3)
}

fn verified_text(t: &BettiTable) -> String {
    match t.max_verified_dim {
        Some(d) => format!("{:?} through dimension {d}", t.betti),
        None => "nothing certified".to_string(),
    }
}

/// Columns whose two incident rows are not the predicted pair, or not related
/// by a transposition.
fn pairing_failures(run: &MorseRun, a: &IncidenceMatrix) -> Result<Vec<String>> {
    let delta = &run.mu.delta;
    let mut bad = Vec::new();
    for (c, tau) in a.cols.iter().enumerate() {
        let hit: Vec<usize> = a.matrix.column_support(c);
        let mut got: Vec<Simplex> = hit.iter().map(|&r| a.rows[r].clone()).collect();
        got.sort();
        let mut want = expected_targets(delta, tau)?.to_vec();
        want.sort();
        if got != want {
            bad.push(format!("{} reaches the wrong critical 1-cells", describe(delta, tau)));
        } else if !is_transposition_pair(&a.row_maps[hit[0]], &a.row_maps[hit[1]]) {
            bad.push(format!("{}: incident rows are not a transposition pair", describe(delta, tau)));
        }
    }
    Ok(bad)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cor1Case {
    /// `m = n + 1`
    Successor,
    /// `m = n`
    Equal,
    /// `m < n`
    Smaller,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cor1Report {
    pub m: usize,
    pub n: usize,
    pub case: Cor1Case,
    /// Predicted connectivity: 0, -1 or `m - 3`.
    pub connectivity: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<PipelineReport>,
    pub crosschecks: Vec<CrossCheck>,
}

impl Cor1Report {
    pub fn all_pass(&self) -> bool {
        self.crosschecks.iter().all(|c| c.pass)
    }
}

/// Number of connected components of a complex (vertices in no facet are ignored).
pub fn component_count(c: &Complex) -> usize {
    let n = c.vertex_labels().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for f in c.facets() {
        let vs = f.vertices();
        for w in vs.windows(2) {
            let (a, b) = (find(&mut parent, w[0] as usize), find(&mut parent, w[1] as usize));
            parent[a] = b;
        }
    }
    let used = c.used_vertices();
    let roots: HashSet<usize> = used.iter().map(|&v| find(&mut parent, v as usize)).collect();
    roots.len()
}

/// Connectivity of the neighborhood complex of `K_m^{K_n}` via its core.
pub fn corollary1_report(m: usize, n: usize) -> Result<Cor1Report> {
    if n < 2 || m < 2 || m > n + 1 {
        return Err(invalid(format!("need 2 <= m <= n+1 and n >= 2, got m={m}, n={n}")));
    }
    let mut checks = Vec::new();
    if m == n + 1 {
        let (betti, theorem1) = if n >= 3 {
            let r = theorem1_report(n)?;
            checks.extend(r.crosschecks.iter().cloned());
            (r.betti.clone(), Some(r))
        } else {
            let core = fold_core_exponential(m, n)?;
            (betti_bounded(&neighborhood_complex(&core), 2).betti, None)
        };
        checks.push(check("connected", betti.first() == Some(&1), format!("b0 = {:?}", betti.first())));
        checks.push(check(
            "h1_nonzero",
            betti.get(1).is_some_and(|&b| b > 0),
            format!("b1 = {:?}", betti.get(1)),
        ));
        if n == 2 {
            checks.push(check("torus_betti", betti == [1, 2, 1], format!("{betti:?}")));
        }
        return Ok(Cor1Report {
            m,
            n,
            case: Cor1Case::Successor,
            connectivity: 0,
            betti: Some(betti),
            components: None,
            theorem1,
            crosschecks: checks,
        });
    }
    let core = fold_core_exponential(m, n)?;
    let nc = neighborhood_complex(&core);
    if m == n {
        let comps = component_count(&nc);
        checks.push(check("disconnected", comps >= 2, format!("{comps} components")));
        let isolated = core
            .maps()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.kind() == FnKind::Injective)
            .all(|(v, _)| core.neighbors(v) == [v as u32]);
        checks.push(check("bijections_isolated", isolated, "N(f) = {f} for every bijection f"));
        if n >= 3 {
            let want = factorial(n) + 1;
            checks.push(check("component_count", comps == want, format!("{comps} vs {want}")));
        }
        return Ok(Cor1Report {
            m,
            n,
            case: Cor1Case::Equal,
            connectivity: -1,
            betti: None,
            components: Some(comps),
            theorem1: None,
            crosschecks: checks,
        });
    }
    let only_constants = core.maps().iter().all(|f| f.kind() == FnKind::Constant);
    checks.push(check("core_is_complete_graph", only_constants, format!("{} vertices", core.vertex_count())));
    let betti = betti_bounded(&nc, m - 2).betti;
    let sphere = if m == 2 {
        vec![2]
    } else {
        let mut b = vec![0; m - 1];
        b[0] = 1;
        b[m - 2] += 1;
        b
    };
    checks.push(check("sphere_betti", betti == sphere, format!("{betti:?} vs {sphere:?}")));
    Ok(Cor1Report {
        m,
        n,
        case: Cor1Case::Smaller,
        connectivity: m as i64 - 3,
        betti: Some(betti),
        components: None,
        theorem1: None,
        crosschecks: checks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl LemmaCheck {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        LemmaCheck {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        LemmaCheck {
            name: name.to_string(),
            status: Status::Skipped,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<String>) -> Self {
        match r {
            Ok(d) => Self::new(name, true, d),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

pub const LEMMA_NAMES: &[&str] = &[
    "fold-core",
    "neighborhoods",
    "free-faces",
    "collapse",
    "trichotomy",
    "injective",
    "matching",
    "acyclic",
    "critical",
    "exclusion",
    "paths",
    "ordering",
    "rank",
    "incidence",
];

/// Runs the named checks (all of [`LEMMA_NAMES`] when `names` is empty).
pub fn verify(n: usize, names: &[&str]) -> Result<Vec<LemmaCheck>> {
    if !(3..=5).contains(&n) {
        return Err(invalid(format!("verification supports 3 <= n <= 5, got {n}")));
    }
    for name in names {
        if !LEMMA_NAMES.contains(name) {
            return Err(invalid(format!("unknown check {name:?}; known: {}", LEMMA_NAMES.join(", "))));
        }
    }
    let selected: Vec<&str> = if names.is_empty() { LEMMA_NAMES.to_vec() } else { names.to_vec() };
    let needs_run = selected
        .iter()
        .any(|s| !matches!(*s, "fold-core" | "neighborhoods" | "free-faces" | "collapse" | "ordering"));
    let run = if needs_run { Some(run_morse(n)) } else { None };
    let mut out = Vec::new();
    for name in selected {
        let run = run.as_ref();
        let result = match name {
            "fold-core" => verify_fold_core(n),
            "neighborhoods" => LemmaCheck::from_result(name, verify_neighborhoods(n)),
            "free-faces" => LemmaCheck::from_result(name, free_face_census(n).map(|c| format!("{c} pairs free"))),
            "collapse" => verify_collapse(n),
            "ordering" => LemmaCheck::from_result(name, verify_ordering(n)),
            _ => match run.expect("pipeline requested") {
                Err(e) => LemmaCheck::new(name, false, e.to_string()),
                Ok(run) => LemmaCheck::from_result(name, verify_on_run(name, run)),
            },
        };
        out.push(result);
    }
    Ok(out)
}

fn verify_fold_core(n: usize) -> LemmaCheck {
    let name = "fold-core";
    let m = n + 1;
    if (m as u64).pow(n as u32) > 4096 {
        return LemmaCheck::skipped(name, format!("{m}^{n} maps exceed the folding budget of 4096"));
    }
    let r = (|| -> Result<String> {
        let full = exponential_graph(&complete_graph(n)?, &complete_graph(m)?)?;
        let folded = fold_to_fixed_point(&full);
        let core = fold_core_exponential(m, n)?;
        let same = same_labeled_graph(&folded.core, &core);
        if !same {
            return Err(Error::LemmaViolation(format!(
                "fixed point has {} vertices, core has {}",
                folded.core.vertex_count(),
                core.vertex_count()
            )));
        }
        Ok(format!("{} folds down to {} vertices", folded.steps.len(), core.vertex_count()))
    })();
    LemmaCheck::from_result(name, r)
}

/// Same labels and same adjacency under the label correspondence.
pub fn same_labeled_graph(a: &crate::graph::Graph, b: &crate::graph::Graph) -> bool {
    if a.vertex_count() != b.vertex_count() {
        return false;
    }
    let index: HashMap<&str, usize> = b.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let map: Option<Vec<usize>> = (0..a.vertex_count()).map(|v| index.get(a.label(v)).copied()).collect();
    let Some(map) = map else { return false };
    (0..a.vertex_count()).all(|u| {
        let mut mine: Vec<usize> = a.neighbors(u).iter().map(|&w| map[w as usize]).collect();
        mine.sort_unstable();
        let theirs: Vec<usize> = b.neighbors(map[u]).iter().map(|&w| w as usize).collect();
        mine == theirs
    })
}

fn verify_neighborhoods(n: usize) -> Result<String> {
    let core = fold_core_exponential(n + 1, n)?;
    let m = (n + 1) as u8;
    for (v, f) in core.maps().iter().enumerate() {
        let nb = core.neighbors(v);
        match f.kind() {
            FnKind::Injective => {
                if nb.len() != n + 2 {
                    return Err(Error::LemmaViolation(format!("|N({f})| = {}, expected {}", nb.len(), n + 2)));
                }
            }
            _ => {
                let x = f.at(1);
                let mut want: Vec<u32> = (1..=m).filter(|&y| y != x).map(|y| y as u32 - 1).collect();
                want.extend(
                    core.maps()
                        .iter()
                        .enumerate()
                        .filter(|(_, g)| g.kind() == FnKind::Injective && !g.contains_value(x))
                        .map(|(i, _)| i as u32),
                );
                want.sort_unstable();
                if nb != want.as_slice() {
                    return Err(Error::LemmaViolation(format!("N({f}) has the wrong members")));
                }
            }
        }
    }
    Ok(format!("{} neighborhoods checked", core.vertex_count()))
}

fn verify_collapse(n: usize) -> LemmaCheck {
    let name = "collapse";
    let r = (|| -> Result<String> {
        let collapsed = collapse_core_to_delta(n)?;
        let delta = build_delta(n)?;
        if facet_set(&collapsed) != facet_set(&delta.complex) {
            return Err(Error::LemmaViolation("cascade does not end at Δ".into()));
        }
        Ok(format!("{} facets after the cascade", collapsed.facets().len()))
    })();
    LemmaCheck::from_result(name, r)
}

fn verify_ordering(n: usize) -> Result<String> {
    let order = wn_transposition_ordering(n)?;
    let distinct: HashSet<&FnVertex> = order.iter().collect();
    let m = (n + 1) as u8;
    let in_wn = order.iter().all(|f| f.is_injective() && f.missing_values(m) == [1]);
    let chained = order.windows(2).all(|w| is_transposition_pair(&w[0], &w[1]));
    if order.len() != factorial(n) || distinct.len() != order.len() || !in_wn || !chained {
        return Err(Error::LemmaViolation("ordering is not a transposition chain through W_n".into()));
    }
    Ok(format!("{} maps", order.len()))
}

fn verify_on_run(name: &str, run: &MorseRun) -> Result<String> {
    let mu = &run.mu;
    let p = &mu.poset;
    let n = mu.delta.n;
    match name {
        "trichotomy" => {
            let c = mu.census;
            Ok(format!("types I/II/III: {}/{}/{}", c.type_i, c.type_ii, c.type_iii))
        }
        "injective" => Ok(format!("{} distinct images", mu.census.s2)),
        "matching" => {
            let v = validate_matching(p, &mu.matching);
            if !v.is_ok() {
                return Err(Error::LemmaViolation(v.violations[0].to_string()));
            }
            Ok(format!("{} pairs", mu.matching.len()))
        }
        "acyclic" => {
            if !run.acyclicity.acyclic {
                return Err(Error::LemmaViolation("matching has a cycle".into()));
            }
            Ok("no directed cycle".into())
        }
        "critical" => {
            let closed = closed_form_critical(n)?;
            if run.morse.critical.simplices(p) != closed.by_dim() {
                return Err(Error::LemmaViolation("engine and closed form disagree".into()));
            }
            Ok(format!("counts {:?}", closed.counts()))
        }
        "exclusion" => {
            let one = mu.delta.constant(1);
            let crit = &run.morse.critical;
            let starts: Vec<usize> = crit.by_dim.iter().skip(2).flatten().copied().collect();
            let on = cells_on_paths_many(p, &mu.matching, &starts, |c| p.dim_of(c) >= 1)?;
            for (tau, cells) in starts.iter().zip(&on) {
                if let Some(&bad) = cells.iter().find(|&&c| p.cell(c).contains(&one)) {
                    return Err(Error::LemmaViolation(format!(
                        "path from {} passes through {}",
                        p.describe(*tau),
                        p.describe(bad)
                    )));
                }
            }
            let to_zero = cells_on_paths_many(p, &mu.matching, &crit.by_dim[1], |c| p.dim_of(c) == 0)?;
            let touching = to_zero.iter().filter(|cells| cells.iter().any(|&c| p.cell(c).contains(&one))).count();
            Ok(format!(
                "{} critical cells of dimension >= 2 checked; {touching} paths from critical 1-cells to <1> pass through cells containing <1>",
                starts.len()
            ))
        }
        "paths" => {
            let closed = closed_form_critical(n)?;
            let ids: Vec<usize> = closed.c2.iter().map(|s| p.id_of_simplex(s).expect("cell")).collect();
            let all = enumerate_paths_from_many(p, &mu.matching, &ids, 10_000)?;
            for (tau, paths) in closed.c2.iter().zip(&all) {
                let mut targets: Vec<Simplex> = paths.iter().map(|(end, _)| p.simplex(*end)).collect();
                targets.sort();
                let mut want = expected_targets(&mu.delta, tau)?.to_vec();
                want.sort();
                if targets != want {
                    return Err(Error::LemmaViolation(format!(
                        "{} has {} paths to critical cells",
                        describe(&mu.delta, tau),
                        targets.len()
                    )));
                }
            }
            let c3 = p.id_of_simplex(&closed.c3).expect("cell");
            let from_c3 = enumerate_paths_from_many(p, &mu.matching, &[c3], 10_000)?;
            if !from_c3[0].is_empty() {
                return Err(Error::LemmaViolation("the top critical cell has alternating paths".into()));
            }
            Ok(format!("{} critical 2-cells each reach exactly 2 critical 1-cells by one path", ids.len()))
        }
        "rank" => {
            let a = incidence_matrix_from(run)?;
            let rank = a.matrix.rank();
            let fact = factorial(n);
            let drop_first = Gf2Matrix::from_fn(a.matrix.rows() - 1, a.matrix.cols(), |r, c| a.matrix.get(r + 1, c));
            if rank != fact - 1 || drop_first.rank() != fact - 1 {
                return Err(Error::LemmaViolation(format!("rank {rank}, expected {}", fact - 1)));
            }
            Ok(format!("rank {rank} of a {}x{} matrix", a.matrix.rows(), a.matrix.cols()))
        }
        "incidence" => {
            let a = incidence_matrix_from(run)?;
            let bad = pairing_failures(run, &a)?;
            if let Some(b) = bad.first() {
                return Err(Error::LemmaViolation(b.clone()));
            }
            let mut realized: HashMap<(usize, usize), usize> = HashMap::new();
            for c in 0..a.matrix.cols() {
                let s = a.matrix.column_support(c);
                *realized.entry((s[0], s[1])).or_default() += 1;
            }
            let missing = (0..a.rows.len() - 1).filter(|&i| !realized.contains_key(&(i, i + 1))).count();
            if missing > 0 {
                return Err(Error::LemmaViolation(format!("{missing} consecutive pairs are realized by no column")));
            }
            let pairs_total = (0..a.row_maps.len())
                .flat_map(|i| (i + 1..a.row_maps.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| is_transposition_pair(&a.row_maps[i], &a.row_maps[j]))
                .count();
            Ok(format!(
                "{} transposition pairs, {} realized by columns",
                pairs_total,
                realized.len()
            ))
        }
        other => Err(invalid(format!("unknown check {other:?}"))),
    }
}
