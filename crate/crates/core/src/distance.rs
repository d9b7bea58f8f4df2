//! Ground-truth minimum-distance oracles: exhaustive projective
//! enumeration for small codes, seeded information-set search for upper
//! bound witnesses, and the DFT-rank weight identity as a cross-check.

use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::codes::{element_token, parse_element_token, CodeSpec};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceWitness {
    pub codeword: Vec<String>,
    pub weight: u32,
    pub seed: u64,
    pub iteration: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceResult {
    pub lower: Option<u32>,
    /// "exhaustive" or "bound-engine".
    pub lower_provenance: Option<String>,
    pub upper: Option<u32>,
    pub witness: Option<DistanceWitness>,
    pub exact: Option<u32>,
}

impl DistanceResult {
    fn empty() -> DistanceResult {
        DistanceResult {
            lower: None,
            lower_provenance: None,
            upper: None,
            witness: None,
            exact: None,
        }
    }
}

/// Check a serialized witness: parses, is a codeword, has the stated weight.
pub fn validate_witness(code: &CodeSpec, w: &DistanceWitness) -> Result<()> {
    if w.codeword.len() != code.n as usize {
        return Err(Error::LengthMismatch { expected: code.n as usize, got: w.codeword.len() });
    }
    let word: Result<Vec<u64>> =
        w.codeword.iter().map(|t| parse_element_token(&code.base, t)).collect();
    let word = word?;
    if CodeSpec::weight(&word) != w.weight {
        return Err(Error::InvalidWitness("stated weight differs".into()));
    }
    if w.weight == 0 {
        return Err(Error::InvalidWitness("zero codeword".into()));
    }
    if !code.is_codeword(&word)? {
        return Err(Error::InvalidWitness("not a codeword".into()));
    }
    Ok(())
}

fn witness_from_word(code: &CodeSpec, word: &[u64], seed: u64, iteration: u64) -> DistanceWitness {
    DistanceWitness {
        codeword: word.iter().map(|&c| element_token(&code.base, c)).collect(),
        weight: CodeSpec::weight(word),
        seed,
        iteration,
    }
}

/// Exact minimum distance by projective enumeration: the first nonzero
/// message coordinate is pinned to 1, the rest run through the field with
/// incremental codeword updates. `budget` caps the number of projective
/// classes visited.
pub fn exact_distance(code: &CodeSpec, budget: u64) -> Result<DistanceResult> {
    let k = code.k as usize;
    if k == 0 {
        return Err(Error::InvalidParameter("zero-dimensional code".into()));
    }
    let q = code.q;
    let classes = {
        let mut acc: u128 = 0;
        let mut pw: u128 = 1;
        for _ in 0..k {
            acc += pw;
            pw *= q as u128;
        }
        acc // (q^k - 1) / (q - 1)
    };
    if classes > budget as u128 {
        return Err(Error::BudgetExhausted);
    }
    let f = &code.base;
    let rows = code.generator_matrix();
    let n = code.n as usize;
    // step deltas between consecutive encodings, plus the wrap-around
    let mut delta = vec![0u64; q as usize];
    for v in 0..q - 1 {
        delta[v as usize] = f.sub(v + 1, v);
    }
    delta[(q - 1) as usize] = f.sub(0, q - 1);

    let mut best_w = u32::MAX;
    let mut best_word: Vec<u64> = Vec::new();
    for lead in 0..k {
        // message = e_lead, free positions lead+1..k cycle through the field
        let mut word = rows[lead].clone();
        let free = k - lead - 1;
        let mut digits = vec![0u64; free];
        loop {
            let w = CodeSpec::weight(&word);
            if w < best_w {
                best_w = w;
                best_word = word.clone();
            }
            // odometer step
            let mut pos = 0;
            loop {
                if pos == free {
                    break;
                }
                let v = digits[pos];
                let d = delta[v as usize];
                let row = &rows[lead + 1 + pos];
                for j in 0..n {
                    if row[j] != 0 {
                        word[j] = f.add(word[j], f.mul(d, row[j]));
                    }
                }
                if v + 1 < q {
                    digits[pos] = v + 1;
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
    }
    Ok(DistanceResult {
        lower: Some(best_w),
        lower_provenance: Some("exhaustive".into()),
        upper: Some(best_w),
        witness: Some(witness_from_word(code, &best_word, 0, 0)),
        exact: Some(best_w),
    })
}

/// Upper-bound search: sample an information set, put the generator matrix
/// in systematic form on it, and enumerate codewords whose message support
/// on the information set has size at most two (projectively scaled).
/// Deterministic given the seed; `target` allows stopping as soon as a
/// codeword at least that good has been found.
#[allow(clippy::needless_range_loop)] // pivot row and target row alias the same table
pub fn stochastic_upper(
    code: &CodeSpec,
    seed: u64,
    iterations: u64,
    target: Option<u32>,
) -> Result<DistanceResult> {
    let k = code.k as usize;
    if k == 0 {
        return Err(Error::InvalidParameter("zero-dimensional code".into()));
    }
    if iterations == 0 {
        return Ok(DistanceResult::empty());
    }
    let n = code.n as usize;
    let q = code.q;
    let f = &code.base;
    let rows = code.generator_matrix();
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(u32, Vec<u64>, u64)> = None;
    let mut singular_streak = 0u32;

    let consider = |word: &[u64], iter: u64, best: &mut Option<(u32, Vec<u64>, u64)>| {
        let w = CodeSpec::weight(word);
        if w > 0 && best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
            *best = Some((w, word.to_vec(), iter));
        }
    };

    'iterations: for iter in 1..=iterations {
        let info = rng.sample_indices(n, k);
        // systematic form on the information set
        let mut g = rows.clone();
        let mut ok = true;
        for (r, &col) in info.iter().enumerate() {
            let pivot = (r..k).find(|&i| g[i][col] != 0);
            let Some(pivot) = pivot else {
                ok = false;
                break;
            };
            g.swap(r, pivot);
            let inv = f.inv(g[r][col])?;
            for j in 0..n {
                g[r][j] = f.mul(g[r][j], inv);
            }
            for i in 0..k {
                if i != r && g[i][col] != 0 {
                    let c = g[i][col];
                    for j in 0..n {
                        if g[r][j] != 0 {
                            g[i][j] = f.sub(g[i][j], f.mul(c, g[r][j]));
                        }
                    }
                }
            }
        }
        if !ok {
            singular_streak += 1;
            if singular_streak > 200 {
                return Err(Error::SingularInformationSet);
            }
            continue;
        }
        singular_streak = 0;
        // weight-1 message supports
        for row in g.iter() {
            consider(row, iter, &mut best);
        }
        // weight-2 supports, scaled so the first coefficient is 1
        let mut combo = vec![0u64; n];
        for i in 0..k {
            for j in i + 1..k {
                for alpha in 1..q {
                    for (t, slot) in combo.iter_mut().enumerate() {
                        *slot = f.add(g[i][t], f.mul(alpha, g[j][t]));
                    }
                    consider(&combo, iter, &mut best);
                }
            }
        }
        if let (Some(t), Some((bw, _, _))) = (target, best.as_ref()) {
            if *bw <= t {
                break 'iterations;
            }
        }
    }
    match best {
        None => Ok(DistanceResult::empty()),
        Some((w, word, iter)) => {
            let witness = witness_from_word(code, &word, seed, iter);
            debug_assert!(validate_witness(code, &witness).is_ok());
            Ok(DistanceResult {
                lower: None,
                lower_provenance: None,
                upper: Some(w),
                witness: Some(witness),
                exact: None,
            })
        }
    }
}

/// Row rank by Gaussian elimination; consumes the matrix.
#[allow(clippy::needless_range_loop)] // pivot row and target row alias the same table
pub fn matrix_rank(f: &Field, mut rows: Vec<Vec<u64>>) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]).expect("nonzero pivot");
        for j in col..n {
            rows[rank][j] = f.mul(rows[rank][j], inv);
        }
        for i in 0..m {
            if i != rank && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in col..n {
                    if rows[rank][j] != 0 {
                        rows[i][j] = f.sub(rows[i][j], f.mul(c, rows[rank][j]));
                    }
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Weight of a codeword through the transform-domain identity: the rank of
/// the circulant of its DFT equals its Hamming weight.
pub fn blahut_weight(code: &CodeSpec, word: &[u64]) -> u32 {
    let a = code.dft(word);
    let n = a.len();
    let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| a[(j + n - i) % n]).collect()).collect();
    matrix_rank(&code.ext, rows) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::LambdaSpec;
    use std::collections::BTreeSet;

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    fn repetition_code(n: u32, q: u64) -> CodeSpec {
        let s: BTreeSet<u32> = (1..n).collect();
        CodeSpec::from_defining_set(q, n, LambdaSpec::One, &s).unwrap()
    }

    #[test]
    fn repetition_distance() {
        for (n, q) in [(6u32, 7u64), (5, 11), (4, 5)] {
            let c = repetition_code(n, q);
            assert_eq!(c.k, 1);
            let d = exact_distance(&c, 1 << 20).unwrap();
            assert_eq!(d.exact, Some(n));
            validate_witness(&c, d.witness.as_ref().unwrap()).unwrap();
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = CodeSpec::from_defining_set(7, 12, LambdaSpec::One, &set(&[1])).unwrap();
        assert!(matches!(exact_distance(&c, 10), Err(Error::BudgetExhausted)));
    }

    #[test]
    fn stochastic_converges_to_exact() {
        let c = CodeSpec::from_defining_set(7, 12, LambdaSpec::One, &set(&[1, 2, 3, 4])).unwrap();
        let exact = exact_distance(&c, 1 << 22).unwrap().exact.unwrap();
        let got = stochastic_upper(&c, 0, 400, None).unwrap();
        assert_eq!(got.upper, Some(exact));
        validate_witness(&c, got.witness.as_ref().unwrap()).unwrap();
        // reproducible
        let again = stochastic_upper(&c, 0, 400, None).unwrap();
        assert_eq!(
            serde_json::to_string(&got.witness).unwrap(),
            serde_json::to_string(&again.witness).unwrap()
        );
        // no iterations, no upper bound
        let none = stochastic_upper(&c, 0, 0, None).unwrap();
        assert!(none.upper.is_none() && none.witness.is_none());
    }

    #[test]
    fn blahut_identity_small() {
        let c = CodeSpec::from_defining_set(7, 12, LambdaSpec::One, &set(&[1, 2, 3])).unwrap();
        let zero = vec![0u64; 12];
        assert_eq!(blahut_weight(&c, &zero), 0);
        let mut impulse = vec![0u64; 12];
        impulse[0] = 1;
        assert_eq!(blahut_weight(&c, &impulse), 1);
        let ones = vec![1u64; 12];
        assert_eq!(blahut_weight(&c, &ones), 12);
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let msg: Vec<u64> = (0..c.k as usize).map(|_| rng.below(7)).collect();
            let word = c.encode(&msg).unwrap();
            assert_eq!(blahut_weight(&c, &word), CodeSpec::weight(&word));
        }
    }

    #[test]
    fn exact_bounds_dominate_engine_bounds() {
        // spot check the oracle against the pattern engine on one code
        let s = set(&[1, 2, 3, 4, 5]);
        let c = CodeSpec::from_defining_set(11, 10, LambdaSpec::One, &s).unwrap();
        let d = exact_distance(&c, 1 << 22).unwrap().exact.unwrap();
        let b = crate::bounds::best_bound(c.n, &c.defining_set);
        assert!(b.value <= d, "bound {} exceeds exact {d}", b.value);
    }
}
