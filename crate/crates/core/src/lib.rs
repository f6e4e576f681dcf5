//! Deformed exponential families on finite measure spaces.
//!
//! The crate builds φ-families of probability densities: a φ-function
//! (the exponential or a Kaniadakis κ-exponential) replaces `exp` in the
//! parametrization `u ↦ φ(c + u − ψ(u)·u₀)`, where the normalizer `ψ` plays the
//! role of the cumulant-generating functional. On top of that it provides
//!
//! * [`measure`]: weighted point sets and reproducible integration,
//! * [`phi`]: κ-exponential/κ-logarithm and axiom validation,
//! * [`orlicz`]: Musielak–Orlicz modular, Luxemburg and Orlicz norms, Fenchel conjugate,
//! * [`family`]: charts, centering, ψ, parametrization and transition maps,
//! * [`divergence`]: Bregman divergence of ψ, closed-form φ- and κ-divergences, KL,
//! * [`io`]: JSON/CSV formats, and [`batch`] for data-parallel evaluation.
//!
//! ```
//! use phifam::{divergence::kappa_divergence, MeasureSpace, ScalarField};
//!
//! let space = MeasureSpace::counting(2).unwrap();
//! let u0 = ScalarField::constant(2, 1.0).unwrap();
//! let p = ScalarField::new(vec![0.5, 0.5]).unwrap();
//! let q = ScalarField::new(vec![0.8, 0.2]).unwrap();
//! let d = kappa_divergence(&space, &1.0.into(), &u0, &p, &q).unwrap();
//! assert!((d.value - 0.5625).abs() < 1e-12);
//! ```

// `!(x > 0.0)` style tests are deliberate: they reject NaN along with the
// ordinary failures.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod divergence;
pub mod error;
pub mod family;
pub mod io;
pub mod measure;
pub mod orlicz;
pub mod phi;
pub mod solver;

pub use error::{Error, Result};
pub use family::{transition, Chart, TangentVector};
pub use measure::{MeasureSpace, ScalarField};
pub use orlicz::MusielakOrliczFunction;
pub use phi::{PhiFn, PhiFunction};
pub use solver::SolverOptions;
