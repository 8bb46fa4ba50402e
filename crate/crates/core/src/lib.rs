// SPDX-License-Identifier: Apache-2.0

//! Situation-aware query enrichment and community-based friend recommendation.
//!
//! Numeric graph code is generic over [`scalar::Scalar`]; the aliases below
//! fix the usual choices (`f64` for running, exact rationals for checking).

pub mod community;
pub mod context;
pub mod enrich;
pub mod eval;
pub mod graph;
pub mod recommend;
pub mod scalar;
pub mod situation;
pub mod social;
pub mod store;
pub mod text;

/// Exact supports and confidences (ratios of transaction counts).
pub type Support = num_rational::Ratio<u64>;
/// Exact signed rational for oracle arithmetic.
pub type Exact = num_rational::Ratio<i128>;

pub type Graph = graph::SimpleGraph<f64>;
pub type ExactGraph = graph::SimpleGraph<Exact>;
pub type Transition = community::TransitionModel<f64>;
pub type Hierarchy = community::Dendrogram<f64>;
pub type CbrWeights = enrich::CbrConfig<f64>;
