//! Perfect splitter sets in cyclic groups.
//!
//! A set `B` of nonzero residues modulo `N` is a `B[-k1,k2](N)` splitter set
//! when the products `lambda * s` for `lambda in [-k1,k2] \ {0}` and `s in B`
//! are pairwise distinct and nonzero. Perfect splitter sets are exactly the
//! splitting sets of splittings of `Z_N`, and for prime `N = q` they
//! correspond to direct factors of the index group `Z_{q-1}`. This crate
//! decides existence of perfect splitter sets family by family, constructs
//! explicit sets, verifies user-supplied sets, and cross-checks everything
//! against exhaustive exact-cover oracles.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, or use the `splitter` binary.

pub mod cyclotomic;
pub mod error;
pub mod existence;
pub mod num_core;
pub mod quasiperfect;
pub mod set_factorization;
pub mod setfile;
pub mod splitter_core;

pub use error::{Error, Result};
pub use existence::{check_family, construct_perfect, Decision, Verdict};
pub use num_core::{FactoredInteger, GroupCtx, RationalUnit};
pub use splitter_core::{Classification, Interval, Kind, SplitterSet};
