//! Exact counts of rational points on systems of staircase diagonal-monomial
//! equations over finite fields.
//!
//! The pipeline is [`parser`] → [`variety`] → [`counting`], with the Smith
//! normal form machinery in [`intlinalg`] and [`congruence`], field arithmetic
//! and index tables in [`field`], and an independent brute-force count in
//! [`oracle`].

pub mod congruence;
pub mod counting;
pub mod field;
pub mod gen;
pub mod intlinalg;
pub mod oracle;
pub mod parser;
pub mod report;
pub mod variety;

pub use counting::{
    count_points, CountError, CountOptions, CountReport, FilterStrategy, LevelPath,
};
pub use field::{FieldElement, FieldSpec, LogTable};
pub use intlinalg::{smith_normal_form, verify_snf, IntMatrix, SnfDecomposition};
pub use oracle::{brute_count, partition_profile};
pub use parser::{parse, parse_system, serialize, ParseOptions};
pub use variety::{RawVarietySpec, VarietySpec};

/// Run `f` on a pool of `threads` workers, or on the global pool when `None`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
