//! Translation-invariant linear equations `a_1 x_1 + ... + a_k x_k = 0`.
//!
//! Coefficients are nonzero and sum to zero, so constant assignments are
//! always (trivial) solutions. Arithmetic is checked 64-bit throughout.
//!
//! Symmetry is decided by comparing the coefficient multiset with its
//! negation. This agrees with the pairing form `sum a_i x_i = sum a_i y_i`:
//! a pairing of each `a_i` with a `-a_i` is exactly a bijection between the
//! multiset and its negation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest coefficient magnitude accepted by [`Equation::new`].
pub const MAX_COEFFICIENT: i64 = 1 << 31;
/// Largest number of variables accepted by [`Equation::genus`].
pub const GENUS_MAX_VARIABLES: usize = 24;
/// Largest `N` accepted by [`brute_avoidance`].
pub const AVOIDANCE_MAX_N: i64 = 40;
/// Largest number of variables accepted by [`brute_avoidance`].
pub const AVOIDANCE_MAX_VARIABLES: usize = 6;
/// Enumeration budget for [`count_distinct_solutions`] (number of partial tuples).
pub const COUNT_BUDGET: u128 = 500_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("coefficient at index {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("coefficients sum to {sum}, not zero")]
    NonzeroSum { sum: i64 },
    #[error("an equation needs at least two coefficients, got {len}")]
    TooShort { len: usize },
    #[error("coefficient {value} exceeds the magnitude bound 2^31")]
    CoefficientTooLarge { value: i64 },
    #[error("{k} variables exceeds the limit of {max}")]
    TooManyVariables { k: usize, max: usize },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("instance exceeds the exhaustive-search scale: {0}")]
    ScaleExceeded(String),
    #[error("64-bit overflow while evaluating the equation")]
    Overflow,
    #[error("cannot parse coefficient list: {0}")]
    Parse(String),
}

/// A validated translation-invariant equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Equation {
    coeffs: Vec<i64>,
}

impl TryFrom<Vec<i64>> for Equation {
    type Error = EquationError;

    fn try_from(coeffs: Vec<i64>) -> Result<Self, Self::Error> {
        Equation::new(coeffs)
    }
}

impl From<Equation> for Vec<i64> {
    fn from(eq: Equation) -> Self {
        eq.coeffs
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for Equation {
    type Err = EquationError;

    /// Parses a comma-separated coefficient list such as `1,1,-2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| EquationError::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Equation::new(coeffs)
    }
}

/// Partition of the coefficient indices into blocks with zero coefficient sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSumPartition {
    pub parts: Vec<Vec<usize>>,
    pub sums: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionClass {
    NotASolution,
    Trivial,
    NonTrivialWithRepeats,
    AllDistinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvoidMode {
    /// No solution with all variables distinct (the `R_E` quantity).
    DistinctFree,
    /// No nontrivial solution at all (the `r_E` quantity).
    NontrivialFree,
}

impl AvoidMode {
    pub fn forbids(self, class: SolutionClass) -> bool {
        match self {
            AvoidMode::DistinctFree => class == SolutionClass::AllDistinct,
            AvoidMode::NontrivialFree => matches!(
                class,
                SolutionClass::AllDistinct | SolutionClass::NonTrivialWithRepeats
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceResult {
    pub n: i64,
    pub n_max: usize,
    pub witness: Vec<i64>,
    pub mode: AvoidMode,
}

impl Equation {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, EquationError> {
        if coeffs.len() < 2 {
            return Err(EquationError::TooShort { len: coeffs.len() });
        }
        if let Some(index) = coeffs.iter().position(|&a| a == 0) {
            return Err(EquationError::ZeroCoefficient { index });
        }
        if let Some(&value) = coeffs.iter().find(|a| a.abs() > MAX_COEFFICIENT) {
            return Err(EquationError::CoefficientTooLarge { value });
        }
        let sum = checked_sum(&coeffs)?;
        if sum != 0 {
            return Err(EquationError::NonzeroSum { sum });
        }
        Ok(Equation { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximum number of blocks in a partition of the indices into
    /// zero-sum blocks, together with a partition attaining it.
    pub fn genus(&self) -> Result<(usize, ZeroSumPartition), EquationError> {
        genus_of(&self.coeffs)
    }

    /// One coefficient differs in sign from all the others (either polarity).
    pub fn is_convex(&self) -> bool {
        let pos = self.coeffs.iter().filter(|&&a| a > 0).count();
        let neg = self.coeffs.len() - pos;
        pos.min(neg) == 1
    }

    pub fn is_symmetric(&self) -> bool {
        let mut a = self.coeffs.clone();
        let mut b: Vec<i64> = self.coeffs.iter().map(|x| -x).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Genus exactly one, i.e. no proper nonempty subset of the coefficients
    /// sums to zero. Uses subset-sum reachability, so there is no cap on `k`.
    pub fn is_genus_one(&self) -> bool {
        !has_proper_zero_sum_subset(&self.coeffs)
    }

    pub fn evaluate(&self, x: &[i64]) -> Result<i64, EquationError> {
        if x.len() != self.coeffs.len() {
            return Err(EquationError::LengthMismatch {
                expected: self.coeffs.len(),
                got: x.len(),
            });
        }
        self.coeffs.iter().zip(x).try_fold(0i64, |acc, (&a, &v)| {
            a.checked_mul(v)
                .and_then(|t| acc.checked_add(t))
                .ok_or(EquationError::Overflow)
        })
    }

    pub fn classify_solution(&self, x: &[i64]) -> Result<SolutionClass, EquationError> {
        if self.evaluate(x)? != 0 {
            return Ok(SolutionClass::NotASolution);
        }
        let mut blocks: HashMap<i64, i64> = HashMap::new();
        for (&a, &v) in self.coeffs.iter().zip(x) {
            let s = blocks.entry(v).or_insert(0);
            *s = s.checked_add(a).ok_or(EquationError::Overflow)?;
        }
        if blocks.len() == x.len() {
            Ok(SolutionClass::AllDistinct)
        } else if blocks.values().all(|&s| s == 0) {
            Ok(SolutionClass::Trivial)
        } else {
            Ok(SolutionClass::NonTrivialWithRepeats)
        }
    }
}

fn checked_sum(values: &[i64]) -> Result<i64, EquationError> {
    values
        .iter()
        .try_fold(0i64, |acc, &a| acc.checked_add(a))
        .ok_or(EquationError::Overflow)
}

/// Genus of an arbitrary zero-sum coefficient list (used for combined
/// equations that may not have been wrapped in [`Equation`] yet).
pub fn genus_of(coeffs: &[i64]) -> Result<(usize, ZeroSumPartition), EquationError> {
    let k = coeffs.len();
    if k > GENUS_MAX_VARIABLES {
        return Err(EquationError::TooManyVariables {
            k,
            max: GENUS_MAX_VARIABLES,
        });
    }
    if k < 2 {
        return Err(EquationError::TooShort { len: k });
    }
    let sum = checked_sum(coeffs)?;
    if sum != 0 {
        return Err(EquationError::NonzeroSum { sum });
    }
    let full: u32 = (1u32 << k) - 1;

    // Zero-sum masks bucketed by their lowest index.
    let mut by_low: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut sums = vec![0i64; 1usize << k];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let s = sums[(mask & (mask - 1)) as usize]
            .checked_add(coeffs[low])
            .ok_or(EquationError::Overflow)?;
        sums[mask as usize] = s;
        if s == 0 {
            by_low[low].push(mask);
        }
    }
    drop(sums);

    // f(S) for zero-sum S: 1 + max f(S \ T) over zero-sum T containing the
    // lowest index of S. Only zero-sum masks are ever reached from `full`.
    let mut memo: HashMap<u32, (u8, u32)> = HashMap::new();
    fn best(s: u32, by_low: &[Vec<u32>], memo: &mut HashMap<u32, (u8, u32)>) -> u8 {
        if s == 0 {
            return 0;
        }
        if let Some(&(v, _)) = memo.get(&s) {
            return v;
        }
        let low = s.trailing_zeros() as usize;
        let mut top = (0u8, 0u32);
        for &t in &by_low[low] {
            if t & !s == 0 {
                let v = 1 + best(s & !t, by_low, memo);
                if v > top.0 {
                    top = (v, t);
                }
            }
        }
        memo.insert(s, top);
        top.0
    }
    let m = best(full, &by_low, &mut memo) as usize;

    let mut parts = Vec::with_capacity(m);
    let mut s = full;
    while s != 0 {
        let t = memo[&s].1;
        parts.push((0..k).filter(|&i| t >> i & 1 == 1).collect::<Vec<_>>());
        s &= !t;
    }
    let sums = parts.iter().map(|_| 0).collect();
    Ok((m, ZeroSumPartition { parts, sums }))
}

/// True iff some nonempty proper subset of `coeffs` sums to zero.
///
/// `coeffs` must sum to zero. Any proper zero-sum subset has a zero-sum
/// complement, so one of the two avoids index 0; it suffices to look for a
/// nonempty zero-sum subset of `coeffs[1..]` (the full tail sums to
/// `-coeffs[0] != 0`).
pub fn has_proper_zero_sum_subset(coeffs: &[i64]) -> bool {
    let tail = &coeffs[1.min(coeffs.len())..];
    let span: i64 = tail.iter().map(|a| a.abs()).sum();
    if span <= 1 << 16 {
        // Bitset over sums in [-span, span] of nonempty subsets.
        let width = (2 * span + 1) as usize;
        let words = width.div_ceil(64);
        let mut reach = vec![0u64; words];
        let mut next = vec![0u64; words];
        for &a in tail {
            next.copy_from_slice(&reach);
            shift_or(&reach, &mut next, a);
            let bit = (a + span) as usize;
            next[bit / 64] |= 1 << (bit % 64);
            std::mem::swap(&mut reach, &mut next);
            let zero = span as usize;
            if reach[zero / 64] >> (zero % 64) & 1 == 1 {
                return true;
            }
        }
        false
    } else {
        let mut reach: HashSet<i64> = HashSet::new();
        for &a in tail {
            let mut add: Vec<i64> = reach.iter().map(|s| s + a).collect();
            add.push(a);
            reach.extend(add);
            if reach.contains(&0) {
                return true;
            }
        }
        false
    }
}

/// `dst |= src shifted by `by` bits` (positive = towards higher sums).
fn shift_or(src: &[u64], dst: &mut [u64], by: i64) {
    let n = src.len();
    let words = (by.unsigned_abs() / 64) as usize;
    let bits = (by.unsigned_abs() % 64) as u32;
    if by >= 0 {
        for i in (words..n).rev() {
            let mut v = src[i - words] << bits;
            if bits > 0 && i > words {
                v |= src[i - words - 1] >> (64 - bits);
            }
            dst[i] |= v;
        }
    } else {
        for i in 0..n.saturating_sub(words) {
            let mut v = src[i + words] >> bits;
            if bits > 0 && i + words + 1 < n {
                v |= src[i + words + 1] << (64 - bits);
            }
            dst[i] |= v;
        }
    }
}

/// A pattern of forbidden solutions after merging equal variables:
/// `coeffs` are the nonzero block sums (values must be distinct) and
/// `zero_blocks` more distinct values are needed for blocks summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ForbiddenPattern {
    coeffs: Vec<i64>,
    zero_blocks: usize,
}

impl ForbiddenPattern {
    fn values_needed(&self) -> usize {
        self.coeffs.len() + self.zero_blocks
    }
}

fn forbidden_patterns(eq: &Equation, mode: AvoidMode) -> Vec<ForbiddenPattern> {
    match mode {
        AvoidMode::DistinctFree => vec![ForbiddenPattern {
            coeffs: eq.coeffs.clone(),
            zero_blocks: 0,
        }],
        AvoidMode::NontrivialFree => {
            let k = eq.len();
            let mut out = BTreeSet::new();
            let mut labels = vec![0usize; k];
            set_partitions(k, 0, 0, &mut labels, &mut |labels, blocks| {
                let mut sums = vec![0i64; blocks];
                for (i, &b) in labels.iter().enumerate() {
                    sums[b] += eq.coeffs[i];
                }
                if sums.iter().all(|&s| s == 0) {
                    return;
                }
                let mut coeffs: Vec<i64> = sums.iter().copied().filter(|&s| s != 0).collect();
                coeffs.sort_unstable();
                let zero_blocks = blocks - coeffs.len();
                out.insert(ForbiddenPattern {
                    coeffs,
                    zero_blocks,
                });
            });
            out.into_iter().collect()
        }
    }
}

/// Visits every set partition of `0..k` as a restricted growth string.
fn set_partitions(
    k: usize,
    i: usize,
    blocks: usize,
    labels: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], usize),
) {
    if i == k {
        visit(labels, blocks);
        return;
    }
    for b in 0..=blocks {
        labels[i] = b;
        set_partitions(k, i + 1, blocks.max(b + 1), labels, visit);
    }
}

/// Does `set` (bitmask over values `1..=40`) contain distinct values solving
/// `pattern.coeffs` with `x` among them? `x` must be in `set`.
fn solution_through(coeffs: &[i64], set: u64, x: i64) -> bool {
    let r = coeffs.len();
    let others = set & !(1u64 << x);
    for j in 0..r {
        // Place x at position j, fill the rest with distinct values of `others`.
        let rest: Vec<i64> = (0..r).filter(|&i| i != j).map(|i| coeffs[i]).collect();
        if fill(&rest, others, -coeffs[j] * x) {
            return true;
        }
    }
    false
}

/// Distinct values from `avail` with `sum rest_i * v_i == target`.
fn fill(rest: &[i64], avail: u64, target: i64) -> bool {
    match rest.len() {
        0 => target == 0,
        1 => {
            let a = rest[0];
            target % a == 0 && {
                let v = target / a;
                (1..64).contains(&v) && avail >> v & 1 == 1
            }
        }
        _ => {
            let mut bits = avail;
            while bits != 0 {
                let v = bits.trailing_zeros() as i64;
                bits &= bits - 1;
                if fill(&rest[1..], avail & !(1u64 << v), target - rest[0] * v) {
                    return true;
                }
            }
            false
        }
    }
}

struct AvoidanceSearch<'a> {
    patterns: &'a [ForbiddenPattern],
    /// Maximum avoiding size for every interval length already solved.
    best_by_len: Vec<usize>,
}

impl AvoidanceSearch<'_> {
    /// Searches an avoiding subset of `[1, len]` of size `target` that
    /// contains `1`; returns it in increasing order.
    fn find(&self, len: i64, target: usize) -> Option<Vec<i64>> {
        let mut chosen = vec![1i64];
        // A single value never solves a pattern (every pattern has >= 2 nonzero blocks).
        let found_by_pattern = vec![false; self.patterns.len()];
        self.extend(len, target, 2, 1u64 << 1, &mut chosen, &found_by_pattern)
            .then_some(chosen)
    }

    fn extend(
        &self,
        len: i64,
        target: usize,
        next: i64,
        set: u64,
        chosen: &mut Vec<i64>,
        found: &[bool],
    ) -> bool {
        if chosen.len() >= target {
            return true;
        }
        if next > len {
            return false;
        }
        // Whatever is added from [next, len] avoids solutions on its own.
        let room = self.best_by_len[(len - next + 1) as usize];
        if chosen.len() + room < target {
            return false;
        }
        let with = set | 1u64 << next;
        let size = chosen.len() + 1;
        let mut now = found.to_vec();
        let mut ok = true;
        for (p, pat) in self.patterns.iter().enumerate() {
            if !now[p] && solution_through(&pat.coeffs, with, next) {
                now[p] = true;
            }
            if now[p] && size >= pat.values_needed() {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push(next);
            if self.extend(len, target, next + 1, with, chosen, &now) {
                return true;
            }
            chosen.pop();
        }
        self.extend(len, target, next + 1, set, chosen, found)
    }
}

/// Exact maximum subset of `[1, n]` avoiding the solutions forbidden by `mode`.
///
/// Solves every interval length `1..=n` in turn. A length-`L` optimum exceeds
/// the length-`L-1` optimum by at most one, and any improving set must
/// contain both endpoints; the optimum for shorter intervals bounds what
/// the still-unexamined suffix can contribute.
pub fn brute_avoidance(
    eq: &Equation,
    n: i64,
    mode: AvoidMode,
) -> Result<AvoidanceResult, EquationError> {
    if !(1..=AVOIDANCE_MAX_N).contains(&n) {
        return Err(EquationError::ScaleExceeded(format!(
            "N = {n} outside 1..={AVOIDANCE_MAX_N}"
        )));
    }
    if eq.len() > AVOIDANCE_MAX_VARIABLES {
        return Err(EquationError::ScaleExceeded(format!(
            "k = {} exceeds {AVOIDANCE_MAX_VARIABLES}",
            eq.len()
        )));
    }
    let patterns = forbidden_patterns(eq, mode);
    let mut search = AvoidanceSearch {
        patterns: &patterns,
        best_by_len: vec![0, 1],
    };
    let mut witness = vec![1i64];
    for len in 2..=n {
        let prev = search.best_by_len[(len - 1) as usize];
        match search.find(len, prev + 1) {
            Some(w) => {
                witness = w;
                search.best_by_len.push(prev + 1);
            }
            None => search.best_by_len.push(prev),
        }
    }
    Ok(AvoidanceResult {
        n,
        n_max: witness.len(),
        witness,
        mode,
    })
}

/// Number of ordered `k`-tuples of pairwise distinct elements of `set`
/// solving `eq`.
pub fn count_distinct_solutions(eq: &Equation, set: &[i64]) -> Result<u128, EquationError> {
    let mut values: Vec<i64> = set.to_vec();
    values.sort_unstable();
    values.dedup();
    let k = eq.len();
    let work = (values.len() as u128).saturating_pow(k as u32 - 1);
    if work > COUNT_BUDGET {
        return Err(EquationError::ScaleExceeded(format!(
            "|A|^(k-1) = {work} exceeds {COUNT_BUDGET}"
        )));
    }
    let index: HashMap<i64, usize> = values.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut used = vec![false; values.len()];
    let mut count = 0u128;
    count_rec(eq.coeffs(), 0, 0, &values, &index, &mut used, &mut count)?;
    Ok(count)
}

fn count_rec(
    coeffs: &[i64],
    pos: usize,
    partial: i64,
    values: &[i64],
    index: &HashMap<i64, usize>,
    used: &mut [bool],
    count: &mut u128,
) -> Result<(), EquationError> {
    let last = coeffs.len() - 1;
    if pos == last {
        let a = coeffs[last];
        if partial % a == 0 {
            if let Some(&i) = index.get(&(-partial / a)) {
                if !used[i] {
                    *count += 1;
                }
            }
        }
        return Ok(());
    }
    for (i, &v) in values.iter().enumerate() {
        if used[i] {
            continue;
        }
        let next = coeffs[pos]
            .checked_mul(v)
            .and_then(|t| partial.checked_add(t))
            .ok_or(EquationError::Overflow)?;
        used[i] = true;
        count_rec(coeffs, pos + 1, next, values, index, used, count)?;
        used[i] = false;
    }
    Ok(())
}

/// Checks that `set` has no solution of the kind forbidden by `mode`, by
/// enumerating every `k`-tuple over `set`.
pub fn verify_avoiding(eq: &Equation, set: &[i64], mode: AvoidMode) -> Result<bool, EquationError> {
    let k = eq.len();
    let work = (set.len() as u128).saturating_pow(k as u32);
    if work > COUNT_BUDGET {
        return Err(EquationError::ScaleExceeded(format!(
            "|A|^k = {work} exceeds {COUNT_BUDGET}"
        )));
    }
    let mut tuple = vec![0i64; k];
    let mut clean = true;
    for_each_tuple(set, 0, &mut tuple, &mut |t| {
        if clean && mode.forbids(eq.classify_solution(t).unwrap_or(SolutionClass::NotASolution)) {
            clean = false;
        }
    });
    Ok(clean)
}

fn for_each_tuple(set: &[i64], pos: usize, tuple: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
    if pos == tuple.len() {
        visit(tuple);
        return;
    }
    for &v in set {
        tuple[pos] = v;
        for_each_tuple(set, pos + 1, tuple, visit);
    }
}
