//! Exact expected flooding time of the *physical* edge process at tiny N.
//!
//! When the ON duration is exponential (rate `μ`) the whole edge graph is a
//! continuous-time Markov chain: each OFF edge flips ON at rate `λ`, each ON
//! edge flips OFF at rate `μ`, and the message closure is applied
//! instantaneously after every flip. Enumerating the closed ("regular")
//! states and solving the absorption-time linear system gives the flooding
//! expectation with no sampling error and no recourse to the `(i, a)`
//! recursion — the chain is the ground truth the analytic machinery is
//! measured against, which is why none of the recursion code is reused
//! here.
//!
//! State space: `2^{N(N−1)/2}` edge configurations × informed subsets, so
//! the solver is capped at `N ≤ 4` (44 regular states; `N = 5` already
//! exceeds 16 million raw states).

use crate::analytic::{
    exact_flooding_time, lower_bound_flooding_time, sparse_flooding_time,
    upper_bound_flooding_time,
};
use crate::params::{stationary_probability, ModelParams};
use crate::stochastic::edge_pairs;

/// Largest population the chain solver accepts.
pub const MAX_ORACLE_NODES: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("chain solver supports 2 <= N <= {MAX_ORACLE_NODES}, got {0}")]
    UnsupportedSize(usize),
    #[error("rates must be positive and finite, got lambda = {lambda}, mu = {mu}")]
    BadRates { lambda: f64, mu: f64 },
    /// Cannot occur for positive finite rates; kept explicit rather than
    /// panicking inside the elimination.
    #[error("absorption-time system is singular")]
    Singular,
}

/// One closed state of the edge chain: ON-edge bitmask (bit `e` set when
/// edge `e` of [`edge_pairs`] is ON) plus informed-node bitmask containing
/// the source bit 0. Regular states have no ON edge across the
/// informed/uninformed boundary and at least one uninformed node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainState {
    pub edge_config: u32,
    pub informed: u32,
}

fn closure_mask(pairs: &[(usize, usize)], edge_config: u32, informed: u32) -> u32 {
    let mut reached = informed;
    loop {
        let mut grew = false;
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if edge_config & (1 << e) != 0 {
                let has_u = reached & (1 << u) != 0;
                let has_v = reached & (1 << v) != 0;
                if has_u != has_v {
                    reached |= (1 << u) | (1 << v);
                    grew = true;
                }
            }
        }
        if !grew {
            return reached;
        }
    }
}

/// All regular (closed, transient) states for an `n`-node chain, ordered by
/// `(edge_config, informed)`; 1 state at `N = 2`, 6 at `N = 3`, 44 at `N = 4`.
pub fn regular_states(n_nodes: usize) -> Result<Vec<ChainState>, OracleError> {
    if !(2..=MAX_ORACLE_NODES).contains(&n_nodes) {
        return Err(OracleError::UnsupportedSize(n_nodes));
    }
    let pairs = edge_pairs(n_nodes);
    let full: u32 = (1 << n_nodes) - 1;
    let mut states = Vec::new();
    for edge_config in 0..(1u32 << pairs.len()) {
        for informed in 0..=full {
            let closed = informed & 1 != 0
                && informed != full
                && closure_mask(&pairs, edge_config, informed) == informed;
            if closed {
                states.push(ChainState { edge_config, informed });
            }
        }
    }
    Ok(states)
}

/// Gaussian elimination with partial pivoting; the absorption systems here
/// are at most 44×44, where a dense direct solve is exact for all
/// practical purposes.
#[allow(clippy::needless_range_loop)] // textbook index form; rows alias within `a`
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, OracleError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("nonempty column range");
        if a[pivot][col].abs() < 1e-300 {
            return Err(OracleError::Singular);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Exact expected flooding time of the edge-Markov process (`2 ≤ N ≤ 4`).
///
/// Solves `R(s)·h(s) − Σ_t rate(s→t)·h(t) = 1` over the regular states,
/// where every flip is composed with the closure map (targets that inform
/// everyone are absorbing with `h = 0`), then averages `h` over the
/// stationary initial condition: edges independently ON with probability
/// `p = λ/(λ+μ)`, informed set the closure of the source.
pub fn ctmc_exact_flooding(n_nodes: usize, lambda: f64, mu: f64) -> Result<f64, OracleError> {
    if !(lambda > 0.0 && lambda.is_finite() && mu > 0.0 && mu.is_finite()) {
        return Err(OracleError::BadRates { lambda, mu });
    }
    let states = regular_states(n_nodes)?;
    let pairs = edge_pairs(n_nodes);
    let n_edges = pairs.len();
    let full: u32 = (1 << n_nodes) - 1;
    let index_of = |edge_config: u32, informed: u32| -> Option<usize> {
        states
            .binary_search_by_key(&(edge_config, informed), |s| (s.edge_config, s.informed))
            .ok()
    };

    let dim = states.len();
    let mut a = vec![vec![0.0; dim]; dim];
    let b = vec![1.0; dim];
    for (row, s) in states.iter().enumerate() {
        for e in 0..n_edges {
            let bit = 1u32 << e;
            let flipped = s.edge_config ^ bit;
            let (rate, informed_after) = if s.edge_config & bit == 0 {
                // OFF→ON may bridge the boundary; compose with closure
                (lambda, closure_mask(&pairs, flipped, s.informed))
            } else {
                // ON→OFF never informs anyone
                (mu, s.informed)
            };
            a[row][row] += rate;
            if informed_after != full {
                let col = index_of(flipped, informed_after)
                    .expect("closure of a regular state is regular");
                a[row][col] -= rate;
            }
        }
    }
    let h = solve_dense(a, b)?;

    let p = stationary_probability(lambda, 1.0 / mu).expect("validated rates");
    let mut expectation = 0.0;
    for edge_config in 0..(1u32 << n_edges) {
        let k = edge_config.count_ones() as i32;
        let weight = p.powi(k) * (1.0 - p).powi(n_edges as i32 - k);
        let informed = closure_mask(&pairs, edge_config, 1);
        if informed != full {
            let idx = index_of(edge_config, informed).expect("closed initial state is regular");
            expectation += weight * h[idx];
        }
    }
    Ok(expectation)
}

/// Side-by-side comparison of the chain value with every analytic quantity
/// at the same `(N, λ, p)`.
///
/// The recursion value is guaranteed to sit inside `[lower, upper]`; where
/// the chain value falls is an empirical finding carried by the deviation
/// fields and `ctmc_within_bounds`, never presumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub n_nodes: usize,
    pub lambda: f64,
    pub mu: f64,
    /// Stationary ON probability `λ/(λ+μ)`.
    pub p: f64,
    /// Absorption-time value from the edge chain.
    pub ctmc: f64,
    /// `exact_flooding_time` at the same parameters.
    pub exact: f64,
    pub lower: f64,
    pub upper: f64,
    /// Point-like closed form `F₀`.
    pub sparse: f64,
    /// Signed relative deviations `(x − ctmc)/ctmc` of each analytic value.
    pub rel_dev_exact: f64,
    pub rel_dev_lower: f64,
    pub rel_dev_upper: f64,
    pub rel_dev_sparse: f64,
    /// Whether `lower ≤ ctmc ≤ upper`.
    pub ctmc_within_bounds: bool,
}

/// Build the [`OracleReport`] for `2 ≤ N ≤ 4` and positive finite rates.
pub fn oracle_report(n_nodes: usize, lambda: f64, mu: f64) -> Result<OracleReport, OracleError> {
    let ctmc = ctmc_exact_flooding(n_nodes, lambda, mu)?;
    let p = stationary_probability(lambda, 1.0 / mu).expect("validated rates");
    let params = ModelParams::from_edge_probability(n_nodes, lambda, p)
        .expect("oracle sizes and validated rates are in-domain");
    let (exact, _, _) = exact_flooding_time(&params);
    let lower = lower_bound_flooding_time(&params);
    let (upper, _) = upper_bound_flooding_time(&params);
    let sparse = sparse_flooding_time(&params);
    debug_assert!(lower <= exact && exact <= upper);
    let rel = |x: f64| (x - ctmc) / ctmc;
    Ok(OracleReport {
        n_nodes,
        lambda,
        mu,
        p,
        ctmc,
        exact,
        lower,
        upper,
        sparse,
        rel_dev_exact: rel(exact),
        rel_dev_lower: rel(lower),
        rel_dev_upper: rel(upper),
        rel_dev_sparse: rel(sparse),
        ctmc_within_bounds: lower <= ctmc && ctmc <= upper,
    })
}
