pub mod braids;
pub mod error;
pub mod linalg;
pub mod mcg;
pub mod recoupling;
pub mod scalars;
pub mod skein;
pub mod tl;
pub mod tqft;

pub use error::{Error, Result};
pub use scalars::{QuantumParams, Ring, Scalar};
