//! Two-parameter tempered entropy `S(p) = sum_i p_i [(lambda - ln p_i)^sigma - lambda^sigma]`
//! and numerical harnesses for its properties.
//!
//! * [`entropy`]: distributions, parameters and the entropy itself.
//! * [`axioms`]: seeded checks of nonnegativity, maximality, expansibility,
//!   concavity and the tempering inequality.
//! * [`lesche`]: stability-ratio experiments with structured and searched
//!   perturbations, plus a Rényi control.
//! * [`fracderiv`]: quadrature check of the tempered fractional derivative
//!   the entropy is built from.
//! * [`cli`]: the `tempent` command-line tool.

pub mod axioms;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod fracderiv;
pub mod lesche;

pub use entropy::{
    entropy, g_func, generator, generator_derivative, make_dist, max_entropy, shannon_entropy,
    ubriaco_entropy, Derivative, EntropyParams, EntropyValue, ProbDist,
};
pub use error::{Error, Result};
