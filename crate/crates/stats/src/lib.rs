//! Nonparametric comparison of optimizer results.
//!
//! All tests treat lower values as better.

mod error;
mod matrix;
mod rank;
pub mod report;
mod nonparametric;

pub use error::{Error, Result};
pub use matrix::{ResultMatrix, Summarizer};
pub use rank::average_ranks;
pub use nonparametric::{
    friedman, kruskal_wallis, kruskal_wallis_matrix, rank_sum_p, versus, wilcoxon_rank_sum, wtl_table, FriedmanReport,
    KruskalReport, KruskalSummary, PairCounts, RankSumMethod, Verdict, WilcoxonResult, WtlTable, DEFAULT_ALPHA, EXACT_MAX_TOTAL,
};
