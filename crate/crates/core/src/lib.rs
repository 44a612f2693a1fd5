pub mod domain;
pub mod error;
pub mod bernoulli;
pub mod evaluator;
pub mod classifier;
pub mod matrixkit;
