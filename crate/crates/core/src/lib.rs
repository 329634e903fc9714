//! Online bottleneck identification on networks with stochastic edge weights.
//!
//! Edges are base arms of a combinatorial semi-bandit and source→target paths
//! are super arms whose cost is their largest edge weight. Agents learn
//! Gaussian edge-weight means while repeatedly choosing minimax paths.

pub mod bandit;
pub mod experiment;
pub mod gaussian;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod objective;
pub mod oracle;
