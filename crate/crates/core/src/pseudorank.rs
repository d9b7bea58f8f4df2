//! The singleton-procedure engine.
//!
//! A column of a symbolic matrix is a singleton when its only live nonzero
//! entry is a known nonzero and everything else live in the column is a
//! known zero. Deleting a singleton column together with its row may create
//! or destroy other singletons, so the searcher backtracks over the choice
//! of singleton at every step, with memoization keyed by the pair of
//! liveness masks. A successful run down to a single surviving row that
//! still holds a known nonzero certifies a pseudo-rank lower bound equal to
//! the number of chosen rows, and every returned witness replays through an
//! independent checker.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::upattern::{circulant, UMat, USym, UVec};

/// Node budget for the backtracking searches.
#[derive(Clone, Debug)]
pub struct Budget {
    remaining: u64,
}

impl Budget {
    pub fn new(nodes: u64) -> Budget {
        Budget { remaining: nodes }
    }

    /// Default node budget per pseudo-rank query.
    pub fn default_query() -> Budget {
        Budget::new(10_000_000)
    }

    fn spend(&mut self) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::BudgetExhausted);
        }
        self.remaining -= 1;
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

/// A replayable certificate that some set of rows admits a successful
/// singleton procedure. Indices refer to the original matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonWitness {
    pub rows: Vec<u32>,
    pub deletions: Vec<(u32, u32)>,
    pub final_row: u32,
    pub final_has_plus: bool,
}

/// All live columns that are singletons, with their nonzero row.
pub fn find_singletons(m: &UMat) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for col in 0..m.n_cols() {
        if !m.col_live(col) {
            continue;
        }
        let mut plus_row = None;
        let mut ok = true;
        for row in 0..m.n_rows() {
            if !m.row_live(row) {
                continue;
            }
            match m.at(row, col) {
                USym::Zero => {}
                USym::Nonzero => {
                    if plus_row.is_some() {
                        ok = false;
                        break;
                    }
                    plus_row = Some(row as u32);
                }
                USym::Unknown => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if let Some(r) = plus_row {
                out.push((col as u32, r));
            }
        }
    }
    out
}

/// Mask out a singleton column and its row; errors if the pair is not a
/// current singleton.
pub fn singleton_delete(m: &UMat, col: u32, row: u32) -> Result<UMat> {
    if !find_singletons(m).contains(&(col, row)) {
        return Err(Error::NotASingleton { col, row });
    }
    let mut out = m.clone();
    out.mask_col(col as usize);
    out.mask_row(row as usize);
    Ok(out)
}

/// Replay a witness against the full matrix, independently of any search
/// machinery. Checks every deletion step and the final surviving row.
pub fn replay_witness(m: &UMat, w: &SingletonWitness) -> Result<()> {
    let r = w.rows.len();
    if r == 0 {
        return Err(Error::InvalidWitness("empty row set".into()));
    }
    let mut seen = HashSet::new();
    for &row in &w.rows {
        if row as usize >= m.n_rows() || !m.row_live(row as usize) {
            return Err(Error::InvalidWitness(format!("row {row} out of range or dead")));
        }
        if !seen.insert(row) {
            return Err(Error::InvalidWitness(format!("row {row} repeated")));
        }
    }
    if w.deletions.len() != r - 1 {
        return Err(Error::InvalidWitness(format!(
            "expected {} deletions for {} rows, got {}",
            r - 1,
            r,
            w.deletions.len()
        )));
    }
    let mut cur = m.restrict_rows(&w.rows);
    for &(col, row) in &w.deletions {
        if !w.rows.contains(&row) {
            return Err(Error::InvalidWitness(format!("deletion row {row} not in the row set")));
        }
        cur = singleton_delete(&cur, col, row)?;
    }
    // exactly one live row remains
    let survivors: Vec<u32> = w
        .rows
        .iter()
        .copied()
        .filter(|&row| cur.row_live(row as usize))
        .collect();
    if survivors != [w.final_row] {
        return Err(Error::InvalidWitness(format!(
            "survivors {survivors:?} do not match final row {}",
            w.final_row
        )));
    }
    let has_plus = (0..cur.n_cols())
        .any(|c| cur.col_live(c) && cur.at(w.final_row as usize, c) == USym::Nonzero);
    if !has_plus || !w.final_has_plus {
        return Err(Error::InvalidWitness("final row holds no known nonzero".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Bitmask search engine
// ---------------------------------------------------------------------------

enum Outcome {
    Found(Vec<(u32, u32)>),
    Absent,
    Exhausted,
}

struct Engine {
    /// Per column: bitmask over local row indices with a known nonzero.
    plus: Vec<u64>,
    /// Per column: bitmask over local row indices with an unknown.
    unknown: Vec<u64>,
    /// States proven to admit no completion.
    failed: HashSet<(u64, u64)>,
}

impl Engine {
    fn build(m: &UMat, rows: &[u32]) -> Result<Engine> {
        if m.n_cols() > 64 {
            return Err(Error::MatrixTooLarge(m.n_cols()));
        }
        if rows.len() > 64 {
            return Err(Error::MatrixTooLarge(rows.len()));
        }
        let mut plus = vec![0u64; m.n_cols()];
        let mut unknown = vec![0u64; m.n_cols()];
        for (local, &row) in rows.iter().enumerate() {
            for col in 0..m.n_cols() {
                if !m.col_live(col) {
                    continue;
                }
                match m.at(row as usize, col) {
                    USym::Nonzero => plus[col] |= 1 << local,
                    USym::Unknown => unknown[col] |= 1 << local,
                    USym::Zero => {}
                }
            }
        }
        Ok(Engine { plus, unknown, failed: HashSet::new() })
    }

    fn live_cols_mask(&self, m: &UMat) -> u64 {
        let mut mask = 0u64;
        for col in 0..m.n_cols() {
            if m.col_live(col) {
                mask |= 1 << col;
            }
        }
        mask
    }

    fn dfs(&mut self, live_rows: u64, live_cols: u64, budget: &mut Budget) -> Result<Outcome> {
        budget.spend()?;
        if live_rows.count_ones() == 1 {
            let row = live_rows.trailing_zeros() as usize;
            let mut cols = live_cols;
            while cols != 0 {
                let col = cols.trailing_zeros() as usize;
                cols &= cols - 1;
                if self.plus[col] >> row & 1 == 1 {
                    return Ok(Outcome::Found(Vec::new()));
                }
            }
            return Ok(Outcome::Absent);
        }
        if self.failed.contains(&(live_rows, live_cols)) {
            return Ok(Outcome::Absent);
        }
        let mut exhausted = false;
        let mut cols = live_cols;
        while cols != 0 {
            let col = cols.trailing_zeros() as usize;
            cols &= cols - 1;
            let lp = self.plus[col] & live_rows;
            if lp.count_ones() != 1 || self.unknown[col] & live_rows != 0 {
                continue;
            }
            let row = lp.trailing_zeros();
            match self.dfs(live_rows & !(1 << row), live_cols & !(1 << col), budget) {
                Ok(Outcome::Found(mut rest)) => {
                    rest.insert(0, (col as u32, row));
                    return Ok(Outcome::Found(rest));
                }
                Ok(Outcome::Absent) => {}
                Ok(Outcome::Exhausted) => exhausted = true,
                Err(Error::BudgetExhausted) => return Ok(Outcome::Exhausted),
                Err(e) => return Err(e),
            }
        }
        if exhausted {
            Ok(Outcome::Exhausted)
        } else {
            self.failed.insert((live_rows, live_cols));
            Ok(Outcome::Absent)
        }
    }
}

/// Backtracking search for a successful singleton procedure over the given
/// rows. `Ok(Some(w))` carries a replayable witness, `Ok(None)` means the
/// search completed exhaustively without one, `Err(BudgetExhausted)` means
/// neither is established.
pub fn successful_procedure(
    m: &UMat,
    rows: &[u32],
    budget: &mut Budget,
) -> Result<Option<SingletonWitness>> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty row set".into()));
    }
    for &row in rows {
        if row as usize >= m.n_rows() || !m.row_live(row as usize) {
            return Err(Error::InvalidParameter(format!("row {row} out of range or dead")));
        }
    }
    let mut engine = Engine::build(m, rows)?;
    let live_rows = if rows.len() == 64 { u64::MAX } else { (1u64 << rows.len()) - 1 };
    let live_cols = engine.live_cols_mask(m);
    match engine.dfs(live_rows, live_cols, budget) {
        Ok(Outcome::Found(deletions)) => {
            let deletions: Vec<(u32, u32)> =
                deletions.into_iter().map(|(c, local)| (c, rows[local as usize])).collect();
            let deleted: HashSet<u32> = deletions.iter().map(|&(_, r)| r).collect();
            let final_row = rows.iter().copied().find(|r| !deleted.contains(r)).unwrap();
            let w = SingletonWitness {
                rows: rows.to_vec(),
                deletions,
                final_row,
                final_has_plus: true,
            };
            debug_assert!(replay_witness(m, &w).is_ok());
            Ok(Some(w))
        }
        Ok(Outcome::Absent) => Ok(None),
        Ok(Outcome::Exhausted) => Err(Error::BudgetExhausted),
        Err(e) => Err(e),
    }
}

/// Direct witness for a vector with a long cyclic zero run: if `v` has `r-1`
/// consecutive zeros followed by a known nonzero, the first `r` rows of its
/// circulant admit the diagonal deletion order.
pub fn zero_run_witness(v: &UVec, r: u32) -> Option<SingletonWitness> {
    let n = v.len();
    if r == 0 || r as usize > n {
        return None;
    }
    let need = r as usize - 1;
    // pick the first run head whose run is long enough and ends in a nonzero
    for start in 0..n {
        if need > 0 && v.0[start] != USym::Zero {
            continue;
        }
        let mut len = 0;
        while len < n && v.0[(start + len) % n] == USym::Zero {
            len += 1;
        }
        if len < need {
            continue;
        }
        // the run must end in a known nonzero, which anchors the diagonal
        if v.0[(start + len) % n] != USym::Nonzero {
            continue;
        }
        let plus_pos = (start + len) % n;
        let rows: Vec<u32> = (0..r).collect();
        let deletions: Vec<(u32, u32)> =
            (0..r - 1).map(|i| (((plus_pos + i as usize) % n) as u32, i)).collect();
        return Some(SingletonWitness {
            rows,
            deletions,
            final_row: r - 1,
            final_has_plus: true,
        });
    }
    None
}

/// Search for a witness that prk(M) >= r.
///
/// Contiguous row windows are tried first (the constructions behind the
/// run-pattern bounds always live in such windows), then seeded random row
/// subsets, then exhaustive subset enumeration while budget remains.
pub fn prk_lower_bound(
    m: &UMat,
    r: u32,
    budget: &mut Budget,
    seed: u64,
) -> Result<Option<SingletonWitness>> {
    let n = m.n_rows();
    if r == 0 || r as usize > n {
        return Ok(None);
    }
    let live: Vec<u32> = (0..n as u32).filter(|&i| m.row_live(i as usize)).collect();
    if (r as usize) > live.len() {
        return Ok(None);
    }
    let mut exhausted_any = false;
    // contiguous windows (wrapping over the live rows)
    for anchor in 0..live.len() {
        let mut rows: Vec<u32> =
            (0..r as usize).map(|i| live[(anchor + i) % live.len()]).collect();
        rows.sort_unstable();
        match successful_procedure(m, &rows, budget) {
            Ok(Some(w)) => return Ok(Some(w)),
            Ok(None) => {}
            Err(Error::BudgetExhausted) => {
                exhausted_any = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    // seeded random subsets
    if !exhausted_any && (r as usize) < live.len() {
        let mut rng = SplitMix64::new(seed ^ 0x70b5_11aa);
        for _ in 0..256 {
            if budget.remaining() == 0 {
                exhausted_any = true;
                break;
            }
            let pick = rng.sample_indices(live.len(), r as usize);
            let rows: Vec<u32> = pick.into_iter().map(|i| live[i]).collect();
            match successful_procedure(m, &rows, budget) {
                Ok(Some(w)) => return Ok(Some(w)),
                Ok(None) => {}
                Err(Error::BudgetExhausted) => {
                    exhausted_any = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
    }
    // exhaustive subsets
    if !exhausted_any {
        let mut found = None;
        let complete = for_each_subset(live.len(), r as usize, |pick| {
            let rows: Vec<u32> = pick.iter().map(|&i| live[i]).collect();
            match successful_procedure(m, &rows, budget) {
                Ok(Some(w)) => {
                    found = Some(w);
                    ControlFlow::Stop
                }
                Ok(None) => ControlFlow::Continue,
                Err(_) => ControlFlow::Abort,
            }
        });
        if let Some(w) = found {
            return Ok(Some(w));
        }
        if complete {
            return Ok(None);
        }
        exhausted_any = true;
    }
    if exhausted_any {
        Err(Error::BudgetExhausted)
    } else {
        Ok(None)
    }
}

#[derive(PartialEq)]
enum ControlFlow {
    Continue,
    Stop,
    Abort,
}

/// Visit all size-k subsets of {0..n} in lexicographic order. Returns true
/// when the enumeration ran to completion.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> ControlFlow) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        match visit(&idx) {
            ControlFlow::Continue => {}
            ControlFlow::Stop => return true,
            ControlFlow::Abort => return false,
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact pseudo-rank by descending search over row subsets. Exponential;
/// intended for matrices of at most a couple dozen rows.
pub fn prk_exact(m: &UMat, budget: &mut Budget) -> Result<u32> {
    let live: Vec<u32> = (0..m.n_rows() as u32).filter(|&i| m.row_live(i as usize)).collect();
    let any_plus = live.iter().any(|&row| {
        (0..m.n_cols()).any(|c| m.col_live(c) && m.at(row as usize, c) == USym::Nonzero)
    });
    if !any_plus {
        // no known nonzero anywhere, so no row set can finish successfully
        return Ok(0);
    }
    for r in (2..=live.len()).rev() {
        let mut found = false;
        let mut aborted = false;
        let complete = for_each_subset(live.len(), r, |pick| {
            let rows: Vec<u32> = pick.iter().map(|&i| live[i]).collect();
            match successful_procedure(m, &rows, budget) {
                Ok(Some(_)) => {
                    found = true;
                    ControlFlow::Stop
                }
                Ok(None) => ControlFlow::Continue,
                Err(_) => {
                    aborted = true;
                    ControlFlow::Abort
                }
            }
        });
        if found {
            return Ok(r as u32);
        }
        if aborted || !complete {
            return Err(Error::BudgetExhausted);
        }
    }
    Ok(1)
}

// ---------------------------------------------------------------------------
// Constant-diagonal square matrices with prescribed first and last columns
// ---------------------------------------------------------------------------

/// Shape parameters of the constant-diagonal square matrix family: first
/// column `P 0^(m-1-t0) D^t0`, last column `0^z1 D^t1 ... 0^z(s+1) P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalShape {
    pub t0: u32,
    pub z: Vec<u32>,
    pub t: Vec<u32>,
}

impl DiagonalShape {
    pub fn new(t0: u32, z: Vec<u32>, t: Vec<u32>) -> Result<DiagonalShape> {
        let shape = DiagonalShape { t0, z, t };
        shape.validate()?;
        Ok(shape)
    }

    pub fn s(&self) -> usize {
        self.t.len()
    }

    pub fn m(&self) -> u32 {
        let blocks: u32 = self.z[..self.s()].iter().zip(&self.t).map(|(&z, &t)| z + t).sum();
        blocks + self.z[self.s()] + 1
    }

    fn x(&self, i: usize) -> u32 {
        // 1-based
        self.z[i - 1] + self.t[i - 1]
    }

    fn y(&self, i: usize) -> u32 {
        (1..=i).map(|j| self.x(j)).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.t.len();
        if s == 0 {
            return Err(Error::InvalidShape("need at least one unknown block".into()));
        }
        if self.z.len() != s + 1 {
            return Err(Error::InvalidShape(format!(
                "zero-run list must have length {} (got {})",
                s + 1,
                self.z.len()
            )));
        }
        if self.z.contains(&0) || self.t.contains(&0) {
            return Err(Error::InvalidShape("all run lengths must be positive".into()));
        }
        if self.t0 + 1 > self.m() {
            return Err(Error::InvalidShape("tail overlap longer than the matrix".into()));
        }
        Ok(())
    }

    /// Last column, top to bottom.
    pub fn last_column(&self) -> UVec {
        let mut v = Vec::new();
        for i in 0..self.s() {
            v.extend(std::iter::repeat_n(USym::Zero, self.z[i] as usize));
            v.extend(std::iter::repeat_n(USym::Unknown, self.t[i] as usize));
        }
        v.extend(std::iter::repeat_n(USym::Zero, self.z[self.s()] as usize));
        v.push(USym::Nonzero);
        UVec(v)
    }
}

/// The m-by-m matrix with constant diagonals determined by the shape's first
/// and last columns.
pub fn build_diagonal_matrix(shape: &DiagonalShape) -> Result<UMat> {
    shape.validate()?;
    let m = shape.m() as usize;
    let last_col = shape.last_column();
    debug_assert_eq!(last_col.len(), m);
    let first_row = last_col.reverse();
    let mut first_col = vec![USym::Nonzero];
    first_col.extend(std::iter::repeat_n(USym::Zero, m - 1 - shape.t0 as usize));
    first_col.extend(std::iter::repeat_n(USym::Unknown, shape.t0 as usize));
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            row.push(if j >= i { first_row.0[j - i] } else { first_col[i - j] });
        }
        rows.push(row);
    }
    Ok(UMat::from_rows(rows))
}

/// Structural certificate that the shape's matrix has full pseudo-rank:
/// the tail overlap fits under the first zero run, and each derived
/// comparison vector has its zeros inside the zeros of the reversed last
/// column. Negative run lengths make the certificate fail.
pub fn diagonal_prk_certificate(shape: &DiagonalShape) -> Result<bool> {
    shape.validate()?;
    let s = shape.s();
    let m = shape.m();
    if shape.t0 > shape.z[0] {
        return Ok(false);
    }
    let reference = shape.last_column().reverse();
    let y_s = shape.y(s);
    for i in 1..=s {
        let mut runs: Vec<(USym, u32)> = vec![(USym::Nonzero, 1), (USym::Zero, shape.x(i) - 1)];
        let mut expressible = true;
        for j in i + 1..=s {
            let fill = shape.t[j - 1] + shape.z[i - 1] - 1;
            if shape.x(j) < fill {
                expressible = false;
                break;
            }
            runs.push((USym::Unknown, shape.x(j) - fill));
            runs.push((USym::Zero, fill));
        }
        if !expressible {
            return Ok(false);
        }
        let y_prev = shape.y(i - 1);
        runs.push((USym::Unknown, m - y_s + y_prev));
        let probe = crate::upattern::RunPattern::new(&runs).expand();
        debug_assert_eq!(probe.len(), m as usize);
        if !crate::upattern::zero_superset(&probe, &reference)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: prk lower bound for the circulant of a vector.
pub fn circulant_prk_lower_bound(
    v: &UVec,
    r: u32,
    budget: &mut Budget,
    seed: u64,
) -> Result<Option<SingletonWitness>> {
    if let Some(w) = zero_run_witness(v, r) {
        let m = circulant(v);
        replay_witness(&m, &w)?;
        return Ok(Some(w));
    }
    prk_lower_bound(&circulant(v), r, budget, seed)
}
