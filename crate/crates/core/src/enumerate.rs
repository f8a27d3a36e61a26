//! Lexicographic enumeration of integer vectors with a fixed sum.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of candidates any enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Number of ways to write `total` as an ordered sum of `parts` nonnegative
/// integers, saturating at `u128::MAX`.
pub fn count_compositions(total: i64, parts: usize) -> u128 {
    if total < 0 || parts == 0 {
        return u128::from(total == 0 && parts == 0);
    }
    // C(total + parts - 1, parts - 1), built incrementally so every
    // intermediate value is itself a binomial coefficient.
    let k = (parts - 1) as u128;
    let n = total as u128 + k;
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = match acc.checked_mul(n - k + i) {
            Some(x) => x / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of vectors `x` with `lower <= x <= upper` coordinatewise and sum `total`.
pub fn count_bounded(lower: &[i64], upper: &[i64], total: i64) -> u128 {
    let shifted_total = total - lower.iter().sum::<i64>();
    if shifted_total < 0 || lower.iter().zip(upper).any(|(l, u)| l > u) {
        return 0;
    }
    let t = shifted_total as usize;
    let mut ways = vec![0u128; t + 1];
    ways[0] = 1;
    for (l, u) in lower.iter().zip(upper) {
        let width = (u - l) as usize;
        let mut next = vec![0u128; t + 1];
        // sliding window sum over the last `width + 1` entries
        let mut window: u128 = 0;
        for s in 0..=t {
            window = window.saturating_add(ways[s]);
            if s > width {
                window -= ways[s - width - 1];
            }
            next[s] = window;
        }
        ways = next;
    }
    ways[t]
}

/// Fails with [`Error::BudgetExceeded`] when `count` is over `budget`.
pub fn check_budget(what: &'static str, count: u128, budget: u64) -> Result<()> {
    if count > u128::from(budget) {
        Err(Error::BudgetExceeded {
            what,
            count,
            budget,
        })
    } else {
        Ok(())
    }
}

/// Integer vectors between two bounds with a fixed sum, in ascending
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct BoundedCompositions {
    lower: Vec<i64>,
    upper: Vec<i64>,
    /// `suffix_upper[i]` is the sum of `upper[i..]`.
    suffix_upper: Vec<i64>,
    suffix_lower: Vec<i64>,
    total: i64,
    current: Option<Vec<i64>>,
    started: bool,
}

impl BoundedCompositions {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>, total: i64) -> Self {
        assert_eq!(lower.len(), upper.len());
        let n = lower.len();
        let mut suffix_upper = vec![0; n + 1];
        let mut suffix_lower = vec![0; n + 1];
        for i in (0..n).rev() {
            suffix_upper[i] = suffix_upper[i + 1] + upper[i];
            suffix_lower[i] = suffix_lower[i + 1] + lower[i];
        }
        let feasible = n > 0
            && lower.iter().zip(&upper).all(|(l, u)| l <= u)
            && suffix_lower[0] <= total
            && total <= suffix_upper[0];
        let mut it = BoundedCompositions {
            lower,
            upper,
            suffix_upper,
            suffix_lower,
            total,
            current: None,
            started: false,
        };
        if feasible {
            let mut x = vec![0; n];
            it.fill_minimal(&mut x, 0, total);
            it.current = Some(x);
        }
        it
    }

    /// All nonnegative vectors of length `parts` summing to `total`.
    pub fn nonnegative(parts: usize, total: i64) -> Self {
        Self::new(vec![0; parts], vec![total.max(0); parts], total)
    }

    fn fill_minimal(&self, x: &mut [i64], from: usize, mut remaining: i64) {
        for k in from..x.len() {
            x[k] = self.lower[k].max(remaining - self.suffix_upper[k + 1]);
            remaining -= x[k];
        }
    }

    fn advance(&mut self) {
        let Some(mut x) = self.current.take() else {
            return;
        };
        let n = x.len();
        let mut prefix: i64 = x[..n.saturating_sub(1)].iter().sum();
        for i in (0..n.saturating_sub(1)).rev() {
            prefix -= x[i];
            let bumped = x[i] + 1;
            let rest = self.total - prefix - bumped;
            if bumped <= self.upper[i] && rest >= self.suffix_lower[i + 1] && rest <= self.suffix_upper[i + 1] {
                x[i] = bumped;
                self.fill_minimal(&mut x, i + 1, rest);
                self.current = Some(x);
                return;
            }
        }
    }
}

impl Iterator for BoundedCompositions {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.started {
            self.advance();
        }
        self.started = true;
        self.current.clone()
    }
}

/// Keeps the items accepted by `keep`, evaluating the predicate on the rayon
/// pool in chunks while preserving input order.
pub fn filter_ordered<I, T, F>(items: I, keep: F) -> Result<Vec<T>>
where
    I: Iterator<Item = T>,
    T: Send + Sync,
    F: Fn(&T) -> Result<bool> + Sync,
{
    const CHUNK: usize = 4096;
    let mut out = Vec::new();
    let mut items = items.peekable();
    while items.peek().is_some() {
        let chunk: Vec<T> = items.by_ref().take(CHUNK).collect();
        let verdicts: Vec<bool> = chunk.par_iter().map(&keep).collect::<Result<_>>()?;
        out.extend(chunk.into_iter().zip(verdicts).filter_map(|(t, k)| k.then_some(t)));
    }
    Ok(out)
}

/// First item accepted by `keep` in input order, searching chunks in parallel.
pub fn find_first<I, T, F>(items: I, keep: F) -> Result<Option<T>>
where
    I: Iterator<Item = T>,
    T: Send + Sync,
    F: Fn(&T) -> Result<bool> + Sync,
{
    const CHUNK: usize = 4096;
    let mut items = items.peekable();
    while items.peek().is_some() {
        let chunk: Vec<T> = items.by_ref().take(CHUNK).collect();
        let verdicts: Vec<bool> = chunk.par_iter().map(&keep).collect::<Result<_>>()?;
        if let Some(pos) = verdicts.iter().position(|&k| k) {
            return Ok(chunk.into_iter().nth(pos));
        }
    }
    Ok(None)
}
