//! Traveling-wave fronts for the Nicholson blowflies equation with a delay in
//! the diffusion term,
//!
//! ```text
//! ∂u/∂t = ∂²u(t - τ₁, x)/∂x² - δ·u(t, x) + p·u(t - τ₂, x)·e^{-a·u(t - τ₂, x)}.
//! ```
//!
//! The pipeline: characteristic roots ([`charroots`]) give the exponential
//! rates of the quasi upper and lower profiles ([`profiles`]); the Green's
//! kernel of the linear wave operator ([`quadrature`]) defines the integral
//! operator iterated in [`iteration`].

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charroots;
pub mod iteration;
pub mod model;
pub mod profiles;
pub mod quadrature;

pub use charroots::{CharKind, RootResult, StripQuery};
pub use iteration::{IterationConfig, IterationReport};
pub use model::{Equilibria, ModelParams, WaveProfile};
pub use profiles::{Grid, Profile};
pub use quadrature::{KernelSpec, KernelTable, SimpsonPlan};
