pub mod budget;
pub mod error;
pub mod hilbert;
pub mod kronecker;
pub mod lift;
pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod mpoly;
pub mod polyring;
pub mod proof;
pub mod relation;
pub mod ring;
pub mod scalar;
pub mod system;

pub use error::{Error, FailureKind, Result};
pub use matrix::Matrix;
pub use polyring::{series_of_ratfunc, Poly, RatFunc, TruncSeries};
pub use ring::{Field, Ring};
pub use scalar::{LogValue, Rational};
pub use system::{CoeffBound, MahlerSystem, RegularityCertificate};
