//! The three-valued symbolic domain for DFT vectors: a position is either a
//! known zero, a known nonzero, or unknown. Defining sets map to canonical
//! symbolic vectors, patterns are run-length encoded, and cyclic pattern
//! matching only constrains the pattern's zero positions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Symbol of the abstract domain. `Zero` is a certain zero, `Nonzero` a
/// certain nonzero, `Unknown` carries no information.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum USym {
    Zero,
    Unknown,
    Nonzero,
}

impl USym {
    pub fn token(self) -> char {
        match self {
            USym::Zero => '0',
            USym::Unknown => 'D',
            USym::Nonzero => 'P',
        }
    }

    pub fn from_token(c: char) -> Option<USym> {
        match c {
            '0' => Some(USym::Zero),
            'D' => Some(USym::Unknown),
            'P' => Some(USym::Nonzero),
            _ => None,
        }
    }
}

/// A symbolic vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UVec(pub Vec<USym>);

impl UVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse from a token string like `"0DP0"`.
    pub fn parse(s: &str) -> Result<UVec> {
        let syms: Option<Vec<USym>> = s.chars().map(USym::from_token).collect();
        syms.map(UVec)
            .ok_or_else(|| Error::InvalidParameter(format!("bad symbol string {s:?}")))
    }

    pub fn reverse(&self) -> UVec {
        let mut v = self.0.clone();
        v.reverse();
        UVec(v)
    }

    /// Cyclic right rotation by `m` places.
    pub fn rotate(&self, m: usize) -> UVec {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let m = m % n;
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.0[(i + n - m) % n]);
        }
        UVec(v)
    }

    pub fn zero_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == USym::Zero)
            .map(|(i, _)| i)
            .collect()
    }

    /// Longest cyclic run of `Zero` symbols; returns (length, start) with the
    /// smallest start among maxima. Length n means the whole vector is zero.
    pub fn longest_zero_run(&self) -> (usize, usize) {
        let n = self.len();
        if self.0.iter().all(|&s| s == USym::Zero) {
            return (n, 0);
        }
        let mut best = (0usize, 0usize);
        for start in 0..n {
            if self.0[start] != USym::Zero {
                continue;
            }
            if self.0[(start + n - 1) % n] == USym::Zero {
                continue; // not the head of a run
            }
            let mut len = 0;
            while len < n && self.0[(start + len) % n] == USym::Zero {
                len += 1;
            }
            if len > best.0 {
                best = (len, start);
            }
        }
        best
    }
}

impl fmt::Display for UVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.token())?;
        }
        Ok(())
    }
}

/// Canonical symbolic vector of a defining set: position i (0-based) is a
/// known zero exactly when i is in the set, unknown otherwise.
pub fn r_of(n: u32, s: &BTreeSet<u32>) -> UVec {
    UVec(
        (0..n)
            .map(|i| if s.contains(&i) { USym::Zero } else { USym::Unknown })
            .collect(),
    )
}

/// `zero(a) subset-of zero(b)` for equal-length vectors.
pub fn zero_superset(a: &UVec, b: &UVec) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.0
        .iter()
        .zip(&b.0)
        .all(|(&x, &y)| x != USym::Zero || y == USym::Zero))
}

// ---------------------------------------------------------------------------
// Run-length patterns
// ---------------------------------------------------------------------------

/// A normalized run-length pattern: adjacent runs always have distinct
/// symbols and every count is at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunPattern {
    runs: Vec<(USym, u32)>,
}

impl RunPattern {
    pub fn new(raw: &[(USym, u32)]) -> RunPattern {
        let mut runs: Vec<(USym, u32)> = Vec::new();
        for &(sym, count) in raw {
            if count == 0 {
                continue;
            }
            match runs.last_mut() {
                Some((last, c)) if *last == sym => *c += count,
                _ => runs.push((sym, count)),
            }
        }
        RunPattern { runs }
    }

    pub fn runs(&self) -> &[(USym, u32)] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, c)| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Offsets (within the pattern) of its zero positions.
    pub fn zero_offsets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut pos = 0usize;
        for &(sym, count) in &self.runs {
            if sym == USym::Zero {
                out.extend(pos..pos + count as usize);
            }
            pos += count as usize;
        }
        out
    }

    pub fn expand(&self) -> UVec {
        let mut v = Vec::with_capacity(self.len());
        for &(sym, count) in &self.runs {
            for _ in 0..count {
                v.push(sym);
            }
        }
        UVec(v)
    }

    pub fn from_uvec(v: &UVec) -> RunPattern {
        let raw: Vec<(USym, u32)> = v.0.iter().map(|&s| (s, 1)).collect();
        RunPattern::new(&raw)
    }

    /// Parse the pattern text format: whitespace-separated `SYM^count`
    /// tokens with `SYM` in {0, D, P}, and parenthesized groups with a
    /// repetition exponent, e.g. `0^10 D^1 (0^2 D^1)^3 D^2 0^1`.
    pub fn parse(text: &str) -> Result<RunPattern> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0usize;
        let runs = parse_seq(&chars, &mut pos, 0)?;
        skip_ws(&chars, &mut pos);
        if pos != chars.len() {
            return Err(Error::InvalidParameter(format!(
                "trailing input at byte {pos} in pattern {text:?}"
            )));
        }
        Ok(RunPattern::new(&runs))
    }
}

impl fmt::Display for RunPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(sym, count) in &self.runs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}^{}", sym.token(), count)?;
        }
        Ok(())
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_count(chars: &[char], pos: &mut usize) -> Result<u32> {
    if *pos >= chars.len() || chars[*pos] != '^' {
        return Err(Error::InvalidParameter("expected '^count'".into()));
    }
    *pos += 1;
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::InvalidParameter("missing exponent digits".into()));
    }
    let digits: String = chars[start..*pos].iter().collect();
    digits
        .parse::<u32>()
        .map_err(|_| Error::InvalidParameter(format!("bad exponent {digits:?}")))
}

fn parse_seq(chars: &[char], pos: &mut usize, depth: u32) -> Result<Vec<(USym, u32)>> {
    let mut out = Vec::new();
    loop {
        skip_ws(chars, pos);
        if *pos >= chars.len() {
            break;
        }
        let c = chars[*pos];
        if c == ')' {
            if depth == 0 {
                return Err(Error::InvalidParameter("unbalanced ')'".into()));
            }
            break;
        }
        if c == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, depth + 1)?;
            skip_ws(chars, pos);
            if *pos >= chars.len() || chars[*pos] != ')' {
                return Err(Error::InvalidParameter("unbalanced '('".into()));
            }
            *pos += 1;
            let reps = parse_count(chars, pos)?;
            for _ in 0..reps {
                out.extend(inner.iter().copied());
            }
            continue;
        }
        let sym = USym::from_token(c)
            .ok_or_else(|| Error::InvalidParameter(format!("bad symbol {c:?}")))?;
        *pos += 1;
        let count = parse_count(chars, pos)?;
        out.push((sym, count));
    }
    Ok(out)
}

/// Every 0-based cyclic offset at which the pattern's zero positions land on
/// zeros of `v`. Unknown and nonzero pattern positions impose no constraint:
/// the hypotheses of the run-pattern theorems only require the listed zeros,
/// and extra zeros in `v` strengthen them.
pub fn match_cyclic(v: &UVec, p: &RunPattern) -> Vec<u32> {
    let n = v.len();
    if p.len() > n || n == 0 {
        return Vec::new();
    }
    let zeros = p.zero_offsets();
    let mut out = Vec::new();
    'offsets: for o in 0..n {
        for &j in &zeros {
            if v.0[(o + j) % n] != USym::Zero {
                continue 'offsets;
            }
        }
        out.push(o as u32);
    }
    out
}

/// Single-offset form of [`match_cyclic`].
pub fn matches_at(v: &UVec, p: &RunPattern, offset: u32) -> bool {
    let n = v.len();
    if p.len() > n || n == 0 {
        return false;
    }
    p.zero_offsets()
        .iter()
        .all(|&j| v.0[(offset as usize + j) % n] == USym::Zero)
}

// ---------------------------------------------------------------------------
// Matrices over the symbolic domain
// ---------------------------------------------------------------------------

/// A dense symbolic matrix with row/column liveness masks; deletions mask
/// entries out rather than moving them, so original indices stay stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UMat {
    rows: usize,
    cols: usize,
    cells: Vec<USym>,
    live_rows: Vec<bool>,
    live_cols: Vec<bool>,
}

impl UMat {
    pub fn from_rows(rows: Vec<Vec<USym>>) -> UMat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        UMat {
            rows: r,
            cols: c,
            cells: rows.into_iter().flatten().collect(),
            live_rows: vec![true; r],
            live_cols: vec![true; c],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, row: usize, col: usize) -> USym {
        self.cells[row * self.cols + col]
    }

    pub fn row_live(&self, row: usize) -> bool {
        self.live_rows[row]
    }

    pub fn col_live(&self, col: usize) -> bool {
        self.live_cols[col]
    }

    pub fn live_row_count(&self) -> usize {
        self.live_rows.iter().filter(|&&b| b).count()
    }

    pub fn mask_row(&mut self, row: usize) {
        self.live_rows[row] = false;
    }

    pub fn mask_col(&mut self, col: usize) {
        self.live_cols[col] = false;
    }

    /// Restrict to a set of rows (masking out all others).
    pub fn restrict_rows(&self, keep: &[u32]) -> UMat {
        let mut m = self.clone();
        for r in 0..self.rows {
            m.live_rows[r] = keep.contains(&(r as u32));
        }
        m
    }
}

/// The n-by-n circulant of `v`: row i is `v` cyclically shifted right by i.
pub fn circulant(v: &UVec) -> UMat {
    let n = v.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(v.0[(j + n - i) % n]);
        }
        rows.push(row);
    }
    UMat::from_rows(rows)
}

// ---------------------------------------------------------------------------
// Abstraction sets
// ---------------------------------------------------------------------------

/// Number of resolutions of the unknown positions of `v`: 2^s if some
/// position is already a known nonzero, else 2^s - 1 (the all-zero
/// resolution is excluded).
pub fn abstraction_cardinality(v: &UVec) -> u128 {
    let s = v.0.iter().filter(|&&x| x == USym::Unknown).count() as u32;
    let has_plus = v.0.contains(&USym::Nonzero);
    if has_plus {
        1u128 << s
    } else {
        (1u128 << s) - 1
    }
}

/// Iterator over the abstraction set of `v`: each unknown resolves to zero
/// or nonzero, zeros and nonzeros stay put, the all-zero vector is excluded.
/// Masks are enumerated in increasing binary order with bit i driving the
/// i-th unknown position, so the stream is deterministic.
pub struct AbstractionIter {
    base: UVec,
    unknown_pos: Vec<usize>,
    has_plus: bool,
    next_mask: u64,
    end: u64,
}

impl Iterator for AbstractionIter {
    type Item = UVec;

    fn next(&mut self) -> Option<UVec> {
        loop {
            if self.next_mask >= self.end {
                return None;
            }
            let mask = self.next_mask;
            self.next_mask += 1;
            if !self.has_plus && mask == 0 {
                continue; // all-zero resolution excluded
            }
            let mut v = self.base.clone();
            for (bit, &pos) in self.unknown_pos.iter().enumerate() {
                v.0[pos] = if mask >> bit & 1 == 1 { USym::Nonzero } else { USym::Zero };
            }
            return Some(v);
        }
    }
}

/// Stream the abstraction set, refusing when its cardinality exceeds `cap`.
pub fn abstraction_set(v: &UVec, cap: u64) -> Result<AbstractionIter> {
    let card = abstraction_cardinality(v);
    if card > cap as u128 {
        return Err(Error::AbstractionTooLarge(card, cap));
    }
    let unknown_pos: Vec<usize> = v
        .0
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == USym::Unknown)
        .map(|(i, _)| i)
        .collect();
    let has_plus = v.0.contains(&USym::Nonzero);
    Ok(AbstractionIter {
        base: v.clone(),
        end: 1u64 << unknown_pos.len(),
        unknown_pos,
        has_plus,
        next_mask: 0,
    })
}
