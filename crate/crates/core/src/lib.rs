//! Exact arithmetic for the cyclotomic Dedekind embedding and the cyclic
//! Wedderburn embeddings.
//!
//! Everything here is computed over exact rationals: cyclotomic field
//! arithmetic, t-adic valuations at t = 1 - zeta, Gaussian binomials and
//! q-Pascal matrices, Vandermonde diagonalization, elementary divisors over
//! Z and over the discrete valuation ring Z_(p)[zeta_{p^n}], congruence
//! ("tie") systems describing embedding images, Hochschild (co)homology
//! descriptors, radical series, and index/discriminant identities. Closed
//! forms are paired with independent brute-force oracles throughout.

pub mod absolute;
pub mod cyclotomic;
pub mod dedekind;
pub mod error;
pub mod gauss;
pub mod linalg;
pub mod rational;
pub mod ties;
pub mod vandermonde;
pub mod verify;
pub mod wedderburn;

pub use cyclotomic::{CycElement, Valuation};
pub use error::Error;
pub use linalg::ExactMatrix;
pub use ties::TieSystem;
