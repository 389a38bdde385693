//! Dense polynomials, reduced rational functions and truncated power series
//! over Q.

mod poly;
mod ratfunc;
mod series;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::{series_of_ratfunc, TruncSeries};
