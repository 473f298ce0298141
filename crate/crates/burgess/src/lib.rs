//! Character sums over intervals and unions of intervals.
//!
//! This crate computes the objects behind Burgess-type estimates at desk
//! scale and verifies the inequalities that connect them:
//!
//! - exact Dirichlet character evaluation ([`dirichlet`]),
//! - interval sums, prefix maxima, and closed-form reference bounds
//!   ([`sums`]),
//! - the congruence count N(l, S, n) by a brute-force oracle and by an
//!   O(n|S| + l) histogram algorithm, plus a step-by-step verifier for the
//!   chain of inequalities that bounds it ([`congruence`]),
//! - the smooth cutoff and its lattice-sum identity ([`smoothing`]),
//! - the reduction from spaced-interval maxima to congruence counts
//!   ([`reduction`]),
//! - campaign pipelines that sweep parameter grids and emit reproducible
//!   CSV/JSON reports ([`harness`], [`report`]).
//!
//! The `burgess` binary exposes all of it as subcommands; see the book
//! under `book/` for a guided tour.

pub mod arith;
pub mod congruence;
pub mod dirichlet;
pub mod error;
pub mod harness;
pub mod reduction;
pub mod report;
pub mod smoothing;
pub mod sums;

pub use error::{Error, Result};

// Compile the book's code snippets as doctests so the guide cannot drift
// from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }
    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(Characters, "../../../book/src/characters.md");
    chapter!(IntervalSums, "../../../book/src/interval-sums.md");
    chapter!(CongruenceCounts, "../../../book/src/congruence-counts.md");
    chapter!(Smoothing, "../../../book/src/smoothing.md");
    chapter!(Reduction, "../../../book/src/reduction.md");
    chapter!(Campaigns, "../../../book/src/campaigns.md");
}
