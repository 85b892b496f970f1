use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::matrix::{median, ResultMatrix, Summarizer};
use crate::rank::{average_ranks, tie_sizes};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Largest pooled sample size handled by exact enumeration.
pub const EXACT_MAX_TOTAL: usize = 12;

fn chi2_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("df >= 1");
    dist.sf(x).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanReport {
    pub algorithms: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub n_problems: usize,
}

impl FriedmanReport {
    /// Algorithm indices from best (lowest mean rank) to worst; ties keep input order.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.mean_ranks.len()).collect();
        idx.sort_by(|&a, &b| self.mean_ranks[a].total_cmp(&self.mean_ranks[b]));
        idx
    }
}

/// Friedman test over per-problem summaries.
pub fn friedman(matrix: &ResultMatrix, summarizer: Summarizer) -> Result<FriedmanReport> {
    let k = matrix.n_algorithms();
    let n = matrix.n_problems();
    if k < 2 || n < 2 {
        return Err(Error::TooFew(format!("Friedman needs k >= 2 and n >= 2, got k={k}, n={n}")));
    }
    let summary = matrix.summarize(summarizer);
    let mut mean_ranks = vec![0.0; k];
    for row in &summary {
        for (j, r) in average_ranks(row).into_iter().enumerate() {
            mean_ranks[j] += r;
        }
    }
    for r in &mut mean_ranks {
        *r /= n as f64;
    }
    let (kf, nf) = (k as f64, n as f64);
    let centre = (kf + 1.0) / 2.0;
    let statistic = 12.0 * nf / (kf * (kf + 1.0)) * mean_ranks.iter().map(|r| (r - centre).powi(2)).sum::<f64>();
    Ok(FriedmanReport {
        algorithms: matrix.algorithms.clone(),
        mean_ranks,
        statistic,
        df: k - 1,
        p_value: chi2_sf(statistic, k - 1),
        n_problems: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// First sample significantly better (lower).
    Better,
    Similar,
    Worse,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Better => "+",
            Verdict::Similar => "=",
            Verdict::Worse => "-",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Rank sum of the first sample.
    pub rank_sum: f64,
    pub p_value: f64,
    pub exact: bool,
    pub verdict: Verdict,
}

/// Two-sided exact p over all assignments of the pooled doubled ranks.
fn exact_rank_sum_p(doubled: &[i64], n_a: usize, observed: i64) -> f64 {
    let n = doubled.len();
    let total: i64 = doubled.iter().sum();
    // Deviations are compared on the scale 2 * n * W to stay in integers.
    let dev = |w2: i64| (n as i64 * w2 - n_a as i64 * total).abs();
    let obs = dev(observed);
    let mut extreme = 0u64;
    let mut count = 0u64;
    let mut pick: Vec<usize> = (0..n_a).collect();
    loop {
        let w2: i64 = pick.iter().map(|&i| doubled[i]).sum();
        count += 1;
        if dev(w2) >= obs {
            extreme += 1;
        }
        // Next combination in lexicographic order.
        let mut i = n_a;
        loop {
            if i == 0 {
                return extreme as f64 / count as f64;
            }
            i -= 1;
            if pick[i] < n - n_a + i {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..n_a {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn normal_rank_sum_p(pooled: &[f64], n_a: usize, rank_sum: f64) -> f64 {
    let n = pooled.len() as f64;
    let (na, nb) = (n_a as f64, n - n_a as f64);
    let ties: f64 = tie_sizes(pooled).iter().map(|&t| (t * t * t - t) as f64).sum();
    let var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let u = rank_sum - na * (na + 1.0) / 2.0;
    let z = ((u - na * nb / 2.0).abs() - 0.5).max(0.0) / var.sqrt();
    let p = 2.0 * Normal::standard().sf(z);
    p.clamp(0.0, 1.0)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// How [`rank_sum_p`] computes the two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumMethod {
    /// Enumerate every split of the pooled ranks (only sensible for small samples).
    Exact,
    /// Normal approximation with tie and continuity corrections.
    Normal,
}

/// Two-sided rank-sum p-value by an explicitly chosen method.
pub fn rank_sum_p(a: &[f64], b: &[f64], method: RankSumMethod) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = average_ranks(&pooled);
    Ok(match method {
        RankSumMethod::Exact => {
            let doubled: Vec<i64> = ranks.iter().map(|r| (2.0 * r).round() as i64).collect();
            let observed: i64 = doubled[..a.len()].iter().sum();
            exact_rank_sum_p(&doubled, a.len(), observed)
        }
        RankSumMethod::Normal => normal_rank_sum_p(&pooled, a.len(), ranks[..a.len()].iter().sum()),
    })
}

/// Two-sided Wilcoxon rank-sum test with a direction verdict for `a`.
///
/// Exact enumeration is used when the pooled size is at most
/// [`EXACT_MAX_TOTAL`]; larger inputs use the normal approximation with tie
/// and continuity corrections. A significant result is `Better` when `a`'s
/// median is lower, with means breaking a median tie.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let rank_sum: f64 = average_ranks(&pooled)[..a.len()].iter().sum();
    let exact = pooled.len() <= EXACT_MAX_TOTAL;
    let method = if exact { RankSumMethod::Exact } else { RankSumMethod::Normal };
    let p_value = rank_sum_p(a, b, method)?;
    let verdict = if p_value > alpha {
        Verdict::Similar
    } else {
        let (ma, mb) = (median(a), median(b));
        let (ma, mb) = if ma == mb { (mean(a), mean(b)) } else { (ma, mb) };
        if ma < mb {
            Verdict::Better
        } else if ma > mb {
            Verdict::Worse
        } else {
            Verdict::Similar
        }
    };
    Ok(WilcoxonResult {
        rank_sum,
        p_value,
        exact,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KruskalReport {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub mean_ranks: Vec<f64>,
}

/// Kruskal-Wallis H test with tie correction.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<KruskalReport> {
    if groups.len() < 2 {
        return Err(Error::TooFew(format!("need at least 2 groups, got {}", groups.len())));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let ranks = average_ranks(&pooled);
    let m = pooled.len() as f64;
    let mut mean_ranks = Vec::with_capacity(groups.len());
    let mut start = 0;
    for g in groups {
        mean_ranks.push(ranks[start..start + g.len()].iter().sum::<f64>() / g.len() as f64);
        start += g.len();
    }
    let centre = (m + 1.0) / 2.0;
    let h_raw = 12.0 / (m * (m + 1.0))
        * groups
            .iter()
            .zip(&mean_ranks)
            .map(|(g, r)| g.len() as f64 * (r - centre).powi(2))
            .sum::<f64>();
    let ties: f64 = tie_sizes(&pooled).iter().map(|&t| (t * t * t - t) as f64).sum();
    let correction = 1.0 - ties / (m * m * m - m);
    let statistic = if correction > 0.0 { h_raw / correction } else { 0.0 };
    let df = groups.len() - 1;
    Ok(KruskalReport {
        statistic,
        df,
        p_value: chi2_sf(statistic, df),
        mean_ranks,
    })
}

/// Per-problem Kruskal-Wallis results and the across-problem mean of each algorithm's rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KruskalSummary {
    pub algorithms: Vec<String>,
    pub per_problem: Vec<KruskalReport>,
    pub average_mean_ranks: Vec<f64>,
}

pub fn kruskal_wallis_matrix(matrix: &ResultMatrix) -> Result<KruskalSummary> {
    let k = matrix.n_algorithms();
    let mut per_problem = Vec::with_capacity(matrix.n_problems());
    let mut avg = vec![0.0; k];
    for p in 0..matrix.n_problems() {
        let groups: Vec<&[f64]> = (0..k).map(|a| matrix.runs(p, a)).collect();
        let rep = kruskal_wallis(&groups)?;
        for (s, r) in avg.iter_mut().zip(&rep.mean_ranks) {
            *s += r;
        }
        per_problem.push(rep);
    }
    let n = matrix.n_problems().max(1) as f64;
    Ok(KruskalSummary {
        algorithms: matrix.algorithms.clone(),
        per_problem,
        average_mean_ranks: avg.into_iter().map(|s| s / n).collect(),
    })
}

/// Verdict counts of `algorithm` against `baseline` over all problems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub algorithm: String,
    pub baseline: String,
    pub better: usize,
    pub similar: usize,
    pub worse: usize,
}

impl PairCounts {
    pub fn total(&self) -> usize {
        self.better + self.similar + self.worse
    }

    /// `better/similar/worse`.
    pub fn triple(&self) -> String {
        format!("{}/{}/{}", self.better, self.similar, self.worse)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtlTable {
    pub alpha: f64,
    pub n_problems: usize,
    /// Every ordered pair of distinct algorithms.
    pub pairs: Vec<PairCounts>,
}

impl WtlTable {
    pub fn get(&self, algorithm: &str, baseline: &str) -> Option<&PairCounts> {
        self.pairs.iter().find(|p| p.algorithm == algorithm && p.baseline == baseline)
    }
}

fn check_runs(matrix: &ResultMatrix) -> Result<()> {
    if matrix.n_runs() < 2 {
        return Err(Error::TooFew(format!("rank-sum tests need >= 2 runs, got {}", matrix.n_runs())));
    }
    Ok(())
}

fn count_pair(matrix: &ResultMatrix, a: usize, b: usize, alpha: f64) -> Result<PairCounts> {
    let mut c = PairCounts {
        algorithm: matrix.algorithms[a].clone(),
        baseline: matrix.algorithms[b].clone(),
        better: 0,
        similar: 0,
        worse: 0,
    };
    for p in 0..matrix.n_problems() {
        match wilcoxon_rank_sum(matrix.runs(p, a), matrix.runs(p, b), alpha)?.verdict {
            Verdict::Better => c.better += 1,
            Verdict::Similar => c.similar += 1,
            Verdict::Worse => c.worse += 1,
        }
    }
    Ok(c)
}

/// Win/tie/loss counts for every ordered algorithm pair.
pub fn wtl_table(matrix: &ResultMatrix, alpha: f64) -> Result<WtlTable> {
    check_runs(matrix)?;
    let k = matrix.n_algorithms();
    let mut pairs = Vec::with_capacity(k * k.saturating_sub(1));
    for a in 0..k {
        for b in 0..k {
            if a != b {
                pairs.push(count_pair(matrix, a, b, alpha)?);
            }
        }
    }
    Ok(WtlTable {
        alpha,
        n_problems: matrix.n_problems(),
        pairs,
    })
}

/// Counts of every other algorithm against `baseline`.
pub fn versus(matrix: &ResultMatrix, baseline: &str, alpha: f64) -> Result<Vec<PairCounts>> {
    check_runs(matrix)?;
    let b = matrix
        .algorithm_index(baseline)
        .ok_or_else(|| Error::TooFew(format!("baseline {baseline:?} not in matrix")))?;
    (0..matrix.n_algorithms())
        .filter(|&a| a != b)
        .map(|a| count_pair(matrix, a, b, alpha))
        .collect()
}
