//! Value distribution of quartic Hecke L-functions over `Q(i)`.
//!
//! Exact `Z[i]` arithmetic and the quartic residue symbol, smoothed
//! L-values for the family `c ≡ 1 (mod 16)`, the Euler-product
//! characteristic function and its Dirichlet-series twin, and the inverse
//! Fourier transform to a density.

pub mod arith;
pub mod charfn;
pub mod density;
pub mod error;
pub mod exec;
pub mod gaussint;
pub mod lfunc;
pub mod numeric;
pub mod quartic;
pub mod report;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gaussint::{FamilyElement, GaussFactorization, GaussInt, PrimeIdealRec};
pub use quartic::QuarticValue;
