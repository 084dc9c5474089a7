//! Tunable α-loss GANs at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`rng`], [`prob`] | seeded counter-based randomness, finite and toy continuous distributions |
//! | [`loss`] | α-loss in probability, binary-label and margin form |
//! | [`arimoto`] | Arimoto divergence `D_{f_α}`, its generator, ψ_α and the JS / Hellinger / TV limits |
//! | [`value`] | the α-GAN value function, exact and Monte-Carlo |
//! | [`equilibrium`] | closed-form optimal discriminator, brute-force oracle, generator objective |
//! | [`variational`] | recovering `f_α` from the margin loss by 1-D minimisation |
//! | [`convergence`] | distribution sequences, divergence traces, equivalence verdicts |
//! | [`mlp`], [`train`] | tiny MLPs with hand-written backprop and an alternating trainer |
//!
//! All divergences use natural logarithms.

pub mod arimoto;
pub mod convergence;
pub mod equilibrium;
mod error;
pub mod loss;
pub mod math;
pub mod mlp;
pub mod prob;
pub mod rng;
pub mod search;
pub mod train;
pub mod value;
pub mod variational;

pub use error::{Error, Result};
pub use loss::{AlphaParam, Branch, Label};
pub use prob::{DiscreteDistribution, Samples, ToyContinuousDist};
pub use rng::Rng;
