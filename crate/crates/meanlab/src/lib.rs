//! Bivariate means and the integral/transform constructions built on them.
//!
//! The library has four layers:
//!
//! * [`mean`] — the classical two-variable means (arithmetic, geometric,
//!   harmonic, contraharmonic, root square, centroidal, Heronian, ...),
//!   their arithmetic complements and convex combinations, and validity
//!   checks for user-supplied mean functions.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature in one and two dimensions
//!   with honest error bounds; every closed form in the crate is testable
//!   against it.
//! * [`integral`] and [`transform`] — the integral mean `I_M` over `[a,b]²`
//!   with its affine companion `J_M`, and the shift (`S`), scale (`P`),
//!   trigonometric (`Ŝ`, `S_M`) and composite (`T`) transforms, each with
//!   closed forms where they exist.
//! * [`lab`] — seeded inequality scans, counterexample search with
//!   high-precision escalation, and certificate reproduction.

pub mod cli;
pub mod error;
pub mod gamma;
pub mod hiprec;
pub mod integral;
pub mod lab;
pub mod mean;
pub mod pair;
pub mod quad;
pub mod report;
pub mod transform;

pub use error::{Error, Result};
pub use pair::{PositivePair, Tolerance};
