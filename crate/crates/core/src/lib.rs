//! Exact counting of SL(n, Z) points in Frobenius-norm balls, together with the
//! spherical-transform evaluations and exponent bookkeeping that govern the
//! error term of the hyperbolic lattice point problem.
//!
//! The crate is split by concern:
//!
//! - [`exactlat`]: exact enumeration and counting of `γ ∈ SL(n, Z)` with `‖z⁻¹γw‖ ≤ T`.
//! - [`mainterm`]: the main-term constant `c_n` in high precision and empirical
//!   error-exponent fits.
//! - [`sphtrans`]: the spherical transform of the ball indicator (contour, residue
//!   and direct routes) and the bound envelopes used by the exponent analysis.
//! - [`spectrum`]: Eisenstein spectral types `E(d, f)` and their exponent profiles.
//! - [`expopt`]: the smoothing-exponent optimizations and literature baselines.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled (the
//! default); every parallel path has a sequential twin selected by [`Execution`].

pub mod exactlat;
pub mod expopt;
pub mod mainterm;
mod par;
pub mod spectrum;
pub mod sphtrans;

pub use par::Execution;
