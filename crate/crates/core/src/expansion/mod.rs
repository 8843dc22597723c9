//! The SDE model, one-step expansion operators `A_n` of the Euler scheme and
//! the coefficients `L_n` of its modified Kolmogorov generator.

mod bernoulli;
mod model;
mod operators;

pub use bernoulli::{bernoulli, bernoulli_table, MAX_BERNOULLI};
pub use model::{generator, SdeModel};
pub use operators::{
    a_operators, compositions, l_operators, truncated_generator, ExpansionConfig, InverseReport,
    OperatorExpansion, DEFAULT_ORDER,
};
