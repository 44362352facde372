//! Grading contests: grades are worth the expected wage of the rank interval
//! they reveal, so each grading scheme induces a prize vector.

mod search;
mod table1;
mod wages;

pub use search::{optimize_grading, GradingSearchResult, HCase, SearchMode, TIE_TOL};
pub use table1::{table1_row, Table1Row};
pub use wages::{order_statistic_wages, OrderStatWages, WageSpec};

use std::fmt;

use crate::contest::PrizeVector;
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_N: usize = 20;

/// Cut sequence `1 ≤ n₁ < … < n_m = n`: ranks `n_{k−1}+1 ..= n_k` share grade `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradingContest {
    cuts: Vec<usize>,
}

impl GradingContest {
    pub fn new(cuts: Vec<usize>) -> Result<Self> {
        if cuts.is_empty() || cuts[0] < 1 {
            return Err(Error::Input("cuts must be positive and non-empty".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("cuts must be strictly increasing, got {cuts:?}")));
        }
        Ok(Self { cuts })
    }

    /// Rank-revealing contest `(1, 2, …, n)`.
    pub fn rank_revealing(n: usize) -> Self {
        Self { cuts: (1..=n).collect() }
    }

    /// Contest whose interior cuts are the set bits of `mask` (bit `k−1` for cut `k`).
    fn from_mask(n: usize, mask: u32) -> Self {
        let mut cuts: Vec<usize> = (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        cuts.push(n);
        Self { cuts }
    }

    /// Parses `"1,2,5"`, optionally wrapped in parentheses.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let cuts = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Input(format!("invalid cut {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cuts)
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn n(&self) -> usize {
        *self.cuts.last().unwrap()
    }

    pub fn grades(&self) -> usize {
        self.cuts.len()
    }

    /// `(lo, hi)` rank ranges of each grade, 1-based inclusive.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut prev = 0;
        self.cuts.iter().map(move |&c| {
            let block = (prev + 1, c);
            prev = c;
            block
        })
    }
}

impl fmt::Display for GradingContest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cuts.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Each rank receives the average of `vstar` over its grade's rank block.
pub fn induced_prize_vector(g: &GradingContest, vstar: &OrderStatWages) -> Result<PrizeVector> {
    let v = vstar.values();
    if g.n() != v.len() {
        return Err(Error::Input(format!(
            "grading contest is for n = {} but there are {} wages",
            g.n(),
            v.len()
        )));
    }
    let mut out = Vec::with_capacity(v.len());
    for (lo, hi) in g.blocks() {
        let avg = v[lo - 1..hi].iter().sum::<f64>() / (hi - lo + 1) as f64;
        out.extend(std::iter::repeat_n(avg, hi - lo + 1));
    }
    PrizeVector::new(out)
}

/// True when `h`'s cuts are a subsequence of `g`'s, i.e. `g` is at least as informative.
pub fn refines(g: &GradingContest, h: &GradingContest) -> Result<bool> {
    if g.n() != h.n() {
        return Err(Error::Input(format!(
            "contests are for different n ({} and {})",
            g.n(),
            h.n()
        )));
    }
    Ok(h.cuts.iter().all(|c| g.cuts.binary_search(c).is_ok()))
}

/// All `2^(n−1)` grading contests, ordered by the bit mask of their interior cuts.
pub fn enumerate_gradings(n: usize) -> Result<Vec<GradingContest>> {
    if !(2..=MAX_ENUMERATION_N).contains(&n) {
        return Err(Error::Input(format!(
            "enumeration supports 2 ≤ n ≤ {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    Ok((0..1u32 << (n - 1)).map(|m| GradingContest::from_mask(n, m)).collect())
}
