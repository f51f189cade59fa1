//! Command-line front end for the variational engine: model files in,
//! certified symbolic reports out.
//!
//! The pipeline reads a sectioned model file describing a bundle chart,
//! Lagrangian densities, and vector fields; each subcommand runs one engine
//! operation and renders the result as text or JSON with identical fields.

pub mod commands;
pub mod corpus;
pub mod diag;
pub mod exprparse;
pub mod model;
pub mod render;
