//! Exact scalars, pair-indexed distance vectors and the max-plus
//! operations on them.

mod pairs;
mod scalar;
mod vector;

pub use pairs::{pair_count, pairs, PairIndex};
pub(crate) use pairs::position_unchecked;
pub use scalar::{ExactScalar, ParseScalarError};
pub use vector::{ProjectivePoint, UltraVector};
