//! Expected flooding time of intermittently connected mobile networks.
//!
//! Every unordered pair of the `N` nodes is an independent link that
//! alternates OFF periods (exponential, rate `λ`) with ON contacts of mean
//! duration `μ⁻¹ ≥ 0`, so a link is ON at a random instant with probability
//! `p = μ⁻¹/(μ⁻¹ + λ⁻¹)`. A message starting at one node copies itself
//! instantaneously along every ON path; the *flooding time* is the first
//! moment all `N` nodes hold it.
//!
//! The crate computes that expectation several independent ways and makes
//! them confront each other:
//!
//! * [`analytic`] — the closed form `F₀ = (2/(λN)) H_{N−1}` for point-like
//!   contacts, the exact `O(N³)` recursion over (informed, active) counts
//!   for general `p`, cheap lower/upper bounds, small-`p` expansions,
//!   operation-count formulas, and the population threshold where the
//!   upper bound beats the sparse form.
//! * [`stochastic`] — a generative sampler of the same recursion (equal in
//!   expectation by construction), a physical event-driven simulator of
//!   the raw edge process that assumes none of the analytic results, and a
//!   bit-reproducible parallel Monte Carlo harness.
//! * [`oracle`] — for `N ≤ 4` and exponential contacts, the edge process
//!   is a finite Markov chain; an absorption-time solve yields its exact
//!   flooding expectation to quantify how well the recursion tracks the
//!   physical process.
//!
//! ```
//! use floodtime::{exact_flooding_time, sparse_flooding_time, ModelParams};
//!
//! let params = ModelParams::from_edge_probability(3, 1.0, 0.5)?;
//! let (f, _, _) = exact_flooding_time(&params);
//! assert_eq!(f, 0.3125);
//! assert!(f < sparse_flooding_time(&params));
//! # Ok::<(), floodtime::ParamError>(())
//! ```

pub mod analytic;
pub mod kernels;
pub mod oracle;
pub mod params;
pub mod stochastic;

pub use analytic::{
    assemble_system, complexity_exact, complexity_lower, complexity_upper, crossover_n,
    exact_flooding_time, incremental_upper, lower_bound_flooding_time, lower_bound_with_counts,
    psi_index, small_p_exact, small_p_lower, sparse_envelope, sparse_flooding_time,
    upper_bound_flooding_time, FaTable, OpCounts, SparseSystem, UpperTable,
};
pub use oracle::{
    ctmc_exact_flooding, oracle_report, regular_states, ChainState, OracleError, OracleReport,
    MAX_ORACLE_NODES,
};
pub use params::{stationary_probability, ModelParams, ParamError};
pub use stochastic::{
    edge_pairs, informed_closure, monte_carlo, simulate_generative, simulate_physical,
    stationary_edge_init, EdgeSimState, FloodingEstimate, GuardExceeded, OnDurationLaw, SimError,
    SimulatorKind, DEFAULT_EVENT_BUDGET,
};
