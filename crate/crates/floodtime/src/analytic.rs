//! Closed-form and recursively defined flooding-time quantities.
//!
//! The flooding process is tracked by the pair `(i, a)`: `i` nodes hold the
//! message, of which only the `a` most recently informed are "active" —
//! their links toward the N−i uninformed nodes are still ON independently
//! with probability `p`, while every other informed/uninformed link is
//! known OFF. The expected remaining flooding time `F⁽ᵃ⁾(i)` satisfies
//!
//! ```text
//! F⁽ᵃ⁾(N−1) = (1−p)^a / (λ(N−1))
//! F⁽ᵃ⁾(i)   = (1−p)^{a(N−i)} [ 1/(λ i (N−i)) + F⁽¹⁾(i+1) ]
//!           + Σ_{c=1}^{N−i−1} C(N−i,c) [1−(1−p)^a]^c (1−p)^{a(N−i−c)} F⁽ᶜ⁾(i+c)
//! ```
//!
//! and the expected flooding time from one informed node is `F(1) = F⁽¹⁾(1)`.
//! The binomial weight is exactly the law of "c of the N−i uninformed nodes
//! see an ON link from an active node"; with `c = 0` the first of all
//! `i(N−i)` OFF boundary links to come up ends an exponential wait of rate
//! `λ i (N−i)`.
//!
//! This module provides:
//!
//! * `sparse_flooding_time` — the point-like-contact closed form
//!   `F₀(1) = (2/(λN)) H_{N−1}` and its logarithmic envelope;
//! * `exact_flooding_time` — the recursion above as a dependency-ordered
//!   dynamic program with instrumented operation counts;
//! * `assemble_system` / forward substitution — the same equations as an
//!   explicit unit-lower-triangular system `T F = d` under the flat index
//!   `Ψ(i,a)`, kept as an independent route for verification;
//! * `lower_bound_flooding_time` / `upper_bound_flooding_time` — the
//!   cheaper recursions that bracket `F(1)` (all informed nodes active,
//!   resp. surviving-subgraph restriction);
//! * `small_p_exact` / `small_p_lower` — first-order expansions at `p = 0`;
//! * complexity formulas counting the multiply/add work of each solver;
//! * `crossover_n` — the population size past which the upper bound drops
//!   below the sparse closed form.

use crate::kernels::{any_on_prob, binomial_pmf_row_parts_into, harmonic, survive_pow};
use crate::params::{ModelParams, ParamError};

/// Multiply/add tally of a solve. One multiplication per off-diagonal
/// coefficient applied to a dependency value and one addition per term
/// accumulated after the constant; coefficient construction (powers,
/// binomial weights) is not counted.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    pub multiplications: u64,
    pub additions: u64,
}

/// Number of unknowns in the `(i, a)` recursion for `n` nodes.
fn system_dimension(n: usize) -> usize {
    if n < 2 {
        1
    } else {
        (n - 1) * (n - 2) / 2 + 1
    }
}

/// Flat 1-based position of `(i, a)`, `Ψ(i,a) = ((N−1)(N−2) − i(i−1))/2 + a`:
/// the base row `i = N−1` comes first, the root `(1, 1)` last.
pub fn psi_index(n_nodes: usize, i: usize, a: usize) -> Result<usize, ParamError> {
    let in_domain = (i == 1 && a == 1)
        || (n_nodes >= 3 && (2..=n_nodes - 1).contains(&i) && (1..=i - 1).contains(&a));
    if n_nodes < 2 || !in_domain {
        return Err(ParamError::IndexDomain { n: n_nodes, i, a });
    }
    Ok(((n_nodes - 1) * (n_nodes - 2) - i * (i - 1)) / 2 + a)
}

/// Unchecked 0-based variant for internal table layout.
#[inline]
fn psi0(n: usize, i: usize, a: usize) -> usize {
    ((n - 1) * (n - 2) - i * (i - 1)) / 2 + a - 1
}

/// Triangular table of the auxiliary times `F⁽ᵃ⁾(i)`, stored in `Ψ` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FaTable {
    n_nodes: usize,
    values: Vec<f64>,
}

impl FaTable {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of stored entries: `(N−2)(N−1)/2 + 1`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `F⁽ᵃ⁾(i)` for `2 ≤ i ≤ N−1, 1 ≤ a ≤ i−1`, or the root `(1, 1)`.
    pub fn get(&self, i: usize, a: usize) -> Option<f64> {
        if self.n_nodes == 1 {
            return (i == 1 && a == 1).then_some(self.values[0]);
        }
        psi_index(self.n_nodes, i, a).ok().map(|k| self.values[k - 1])
    }

    /// The flooding time `F(1)` stored at the root entry.
    pub fn root(&self) -> f64 {
        *self.values.last().expect("table always holds the root entry")
    }
}

/// Sparse-regime closed form `F₀(1) = (2/(λN)) H_{N−1}`; 0 for `N = 1`.
///
/// `p` is ignored: with point-like contacts at most one link is ON at any
/// instant and the message advances through N−1 single-link waits.
pub fn sparse_flooding_time(params: &ModelParams) -> f64 {
    let n = params.n_nodes();
    if n == 1 {
        return 0.0;
    }
    let h = harmonic(n - 1).expect("n >= 2");
    2.0 * h / (params.lambda() * n as f64)
}

/// Logarithmic envelope `(2 ln N/(λN), 2(1+ln(N−1))/(λN))` bracketing
/// [`sparse_flooding_time`].
pub fn sparse_envelope(params: &ModelParams) -> Result<(f64, f64), ParamError> {
    let n = params.n_nodes();
    if n < 2 {
        return Err(ParamError::NodeCount { min: 2, got: n });
    }
    let nf = n as f64;
    let lo = 2.0 * nf.ln() / (params.lambda() * nf);
    let hi = 2.0 * (1.0 + (nf - 1.0).ln()) / (params.lambda() * nf);
    Ok((lo, hi))
}

/// Exact expected flooding time `F(1)` with the full `F⁽ᵃ⁾(i)` table and
/// instrumented operation counts.
///
/// The table is filled in decreasing `i` (every row depends only on rows
/// with larger `i`), evaluating each row as the constant
/// `(1−p)^{a(N−i)}/(λ i (N−i))` plus one coefficient–dependency product per
/// reachable state. The `c = 0` wait and the `c = 1` transfer both land on
/// `F⁽¹⁾(i+1)`, so their coefficients are merged before the multiply; that
/// makes the tally match the off-diagonal count of the triangular-system
/// view exactly.
pub fn exact_flooding_time(params: &ModelParams) -> (f64, FaTable, OpCounts) {
    let n = params.n_nodes();
    let lambda = params.lambda();
    let p = params.p();
    let mut values = vec![0.0; system_dimension(n)];
    let mut ops = OpCounts::default();
    if n == 1 {
        let table = FaTable { n_nodes: n, values };
        return (0.0, table, ops);
    }
    if n == 2 {
        values[0] = survive_pow(p, 1) / lambda;
        let table = FaTable { n_nodes: n, values };
        return (table.root(), table, ops);
    }
    // base row: from i = N−1 a single OFF→ON transition finishes the flood
    for a in 1..=n - 2 {
        values[psi0(n, n - 1, a)] = survive_pow(p, a) / (lambda * (n - 1) as f64);
    }
    let mut row = Vec::new();
    for i in (1..=n - 2).rev() {
        let m = n - i;
        let a_max = if i == 1 { 1 } else { i - 1 };
        for a in 1..=a_max {
            binomial_pmf_row_parts_into(m, any_on_prob(p, a), survive_pow(p, a), &mut row);
            let mut acc = row[0] / (lambda * (i * m) as f64);
            let merged = row[0] + row[1];
            acc += merged * values[psi0(n, i + 1, 1)];
            ops.multiplications += 1;
            ops.additions += 1;
            for c in 2..m {
                acc += row[c] * values[psi0(n, i + c, c)];
                ops.multiplications += 1;
                ops.additions += 1;
            }
            values[psi0(n, i, a)] = acc;
        }
    }
    let table = FaTable { n_nodes: n, values };
    (table.root(), table, ops)
}

/// The `(i, a)` recursion written as a unit-lower-triangular system
/// `T F = d` under the `Ψ` ordering; kept independent of the dynamic
/// program (coefficients built from explicit powers and multiplicative
/// binomial factors) so the two routes cross-check each other.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    /// Number of rows, `(N−2)(N−1)/2 + 1`.
    pub dimension: usize,
    /// Strictly-lower off-diagonals as `(row, col, coefficient)` with
    /// 1-based `Ψ` indices, grouped by increasing row.
    pub t_offdiag: Vec<(usize, usize, f64)>,
    /// Constant terms, `d[k]` belonging to row `k + 1`.
    pub d: Vec<f64>,
}

impl SparseSystem {
    /// Solve `T F = d` by forward substitution; entry `dimension − 1` of the
    /// result is `F(1)`.
    pub fn forward_substitution(&self) -> Vec<f64> {
        let mut f = self.d.clone();
        for &(row, col, coeff) in &self.t_offdiag {
            f[row - 1] -= coeff * f[col - 1];
        }
        f
    }
}

/// Emit the triangular system for `N ≥ 3`.
pub fn assemble_system(params: &ModelParams) -> Result<SparseSystem, ParamError> {
    let n = params.n_nodes();
    if n < 3 {
        return Err(ParamError::NodeCount { min: 3, got: n });
    }
    let lambda = params.lambda();
    let p = params.p();
    let dim = system_dimension(n);
    let mut d = vec![0.0; dim];
    let mut t_offdiag = Vec::new();
    for a in 1..=n - 2 {
        d[psi0(n, n - 1, a)] = survive_pow(p, a) / (lambda * (n - 1) as f64);
    }
    for i in (1..=n - 2).rev() {
        let m = n - i;
        let a_max = if i == 1 { 1 } else { i - 1 };
        for a in 1..=a_max {
            let row = psi0(n, i, a) + 1;
            let survive_all = survive_pow(p, a * m);
            d[row - 1] = survive_all / (lambda * (i * m) as f64);
            let q = any_on_prob(p, a);
            // c = 0 (wait) and c = 1 (single transfer) share column Ψ(i+1, 1)
            let merged = -(survive_all + m as f64 * q * survive_pow(p, a * (m - 1)));
            t_offdiag.push((row, psi0(n, i + 1, 1) + 1, merged));
            let mut binom = m as f64; // C(m, 1), updated multiplicatively
            for c in 2..m {
                binom *= (m - c + 1) as f64 / c as f64;
                let coeff = -binom * q.powi(c as i32) * survive_pow(p, a * (m - c));
                t_offdiag.push((row, psi0(n, i + c, c) + 1, coeff));
            }
        }
    }
    Ok(SparseSystem { dimension: dim, t_offdiag, d })
}

/// Off-diagonal count of the exact system: `(N³ − 6N² + 17N − 18)/6`.
pub fn complexity_exact(n_nodes: usize) -> Result<u64, ParamError> {
    if n_nodes < 3 {
        return Err(ParamError::NodeCount { min: 3, got: n_nodes });
    }
    let n = n_nodes as i128;
    Ok(((n * n * n - 6 * n * n + 17 * n - 18) / 6) as u64)
}

/// Operation count of the lower-bound recursion: `C(N−1, 2)`.
pub fn complexity_lower(n_nodes: usize) -> Result<u64, ParamError> {
    if n_nodes < 2 {
        return Err(ParamError::NodeCount { min: 2, got: n_nodes });
    }
    let n = n_nodes as u64;
    Ok((n - 1) * (n - 2) / 2)
}

/// Operation count of the upper-bound recursion; identical to the exact
/// solver's count.
pub fn complexity_upper(n_nodes: usize) -> Result<u64, ParamError> {
    complexity_exact(n_nodes)
}

/// Extra operations needed to extend an upper-bound table from `N−1` to `N`
/// nodes: `(N−1)(N−2)/2 − N + 3`.
pub fn incremental_upper(n_nodes: usize) -> Result<u64, ParamError> {
    if n_nodes < 3 {
        return Err(ParamError::NodeCount { min: 3, got: n_nodes });
    }
    let n = n_nodes as u64;
    Ok((n - 1) * (n - 2) / 2 + 3 - n)
}

/// First-order expansion of the exact time at small `p`:
/// `F₀(1) − (H_{N−1}/λ) p`.
pub fn small_p_exact(params: &ModelParams) -> Result<f64, ParamError> {
    let n = params.n_nodes();
    if n < 2 {
        return Err(ParamError::NodeCount { min: 2, got: n });
    }
    let f0 = sparse_flooding_time(params);
    let h = harmonic(n - 1).expect("n >= 2");
    Ok(f0 - h / params.lambda() * params.p())
}

/// First-order expansion of the lower bound: `F₀(1) − ((N−1)/λ) p`.
/// Steeper than [`small_p_exact`] since `N−1 ≥ H_{N−1}`.
pub fn small_p_lower(params: &ModelParams) -> Result<f64, ParamError> {
    let n = params.n_nodes();
    if n < 2 {
        return Err(ParamError::NodeCount { min: 2, got: n });
    }
    let f0 = sparse_flooding_time(params);
    Ok(f0 - (n - 1) as f64 / params.lambda() * params.p())
}

/// Lower bound `F̲(1)`: the recursion with every informed node kept active
/// (`a = i`), which can only speed the spread up.
pub fn lower_bound_flooding_time(params: &ModelParams) -> f64 {
    lower_bound_with_counts(params).0
}

/// [`lower_bound_flooding_time`] with the same instrumentation as the
/// exact solver; the tally comes to `C(N−1, 2)`.
pub fn lower_bound_with_counts(params: &ModelParams) -> (f64, OpCounts) {
    let n = params.n_nodes();
    let lambda = params.lambda();
    let p = params.p();
    let mut ops = OpCounts::default();
    if n == 1 {
        return (0.0, ops);
    }
    // g[i−1] = F̲(i); only the single index survives because a = i throughout
    let mut g = vec![0.0; n - 1];
    g[n - 2] = survive_pow(p, n - 1) / (lambda * (n - 1) as f64);
    let mut row = Vec::new();
    for i in (1..=n.saturating_sub(2)).rev() {
        let m = n - i;
        binomial_pmf_row_parts_into(m, any_on_prob(p, i), survive_pow(p, i), &mut row);
        let mut acc = row[0] / (lambda * (i * m) as f64);
        let merged = row[0] + row[1];
        acc += merged * g[i + 1 - 1];
        ops.multiplications += 1;
        ops.additions += 1;
        for c in 2..m {
            acc += row[c] * g[i + c - 1];
            ops.multiplications += 1;
            ops.additions += 1;
        }
        g[i - 1] = acc;
    }
    (g[0], ops)
}

/// Table of the upper-bound recursion `G(a, m)` indexed by active count `a`
/// and uninformed count `m`, filled for all `a + m ≤ N`.
///
/// After a wait the process restarts on the surviving subgraph of the
/// newly informed node plus the still-uninformed nodes, which is what makes
/// the value depend on `(a, m)` alone and lets one table serve every
/// population size `K ≤ N` through `F̄ = G(1, K−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTable {
    n_nodes: usize,
    values: Vec<f64>,
}

impl UpperTable {
    fn idx(&self, a: usize, m: usize) -> usize {
        (m - 1) * self.n_nodes - m * (m - 1) / 2 + a - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// `G(a, m)` for `a ≥ 1, m ≥ 1, a + m ≤ N`.
    pub fn get(&self, a: usize, m: usize) -> Option<f64> {
        (a >= 1 && m >= 1 && a + m <= self.n_nodes).then(|| self.values[self.idx(a, m)])
    }

    /// Upper bound on the flooding time of a `k`-node network, `2 ≤ k ≤ N`:
    /// the table built once at `N` already contains every smaller size.
    pub fn upper_for(&self, k: usize) -> Option<f64> {
        if k < 2 {
            return None;
        }
        self.get(1, k - 1)
    }
}

/// Upper bound `F̄(1)` with its full `(a, m)` table.
pub fn upper_bound_flooding_time(params: &ModelParams) -> (f64, UpperTable) {
    let n = params.n_nodes();
    let lambda = params.lambda();
    let p = params.p();
    let size = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let mut table = UpperTable { n_nodes: n, values: vec![0.0; size] };
    if n == 1 {
        return (0.0, table);
    }
    let mut row = Vec::new();
    for m in 1..=n - 1 {
        for a in 1..=n - m {
            let value = if m == 1 {
                // one uninformed node, a active links racing for it
                survive_pow(p, a) / (lambda * a as f64)
            } else {
                binomial_pmf_row_parts_into(m, any_on_prob(p, a), survive_pow(p, a), &mut row);
                let mut acc = row[0] / (lambda * (a * m) as f64);
                acc += (row[0] + row[1]) * table.values[table.idx(1, m - 1)];
                for (c, &weight) in row.iter().enumerate().take(m).skip(2) {
                    acc += weight * table.values[table.idx(c, m - c)];
                }
                acc
            };
            let k = table.idx(a, m);
            table.values[k] = value;
        }
    }
    (table.get(1, n - 1).expect("n >= 2"), table)
}

/// Smallest `N̂ ∈ [2, n_max]` with `F̄ < F₀` for every population size in
/// `(N̂, n_max]`; `None` when the largest violation sits at `n_max` itself
/// (so no nonvacuous threshold exists within the horizon).
pub fn crossover_n(lambda: f64, p: f64, n_max: usize) -> Result<Option<usize>, ParamError> {
    if n_max < 3 {
        return Err(ParamError::NodeCount { min: 3, got: n_max });
    }
    let params = ModelParams::from_edge_probability(n_max, lambda, p)?;
    let (_, table) = upper_bound_flooding_time(&params);
    let mut h = 0.0; // running H_{k−1}
    let mut worst: Option<usize> = None;
    for k in 2..=n_max {
        h += 1.0 / (k - 1) as f64;
        let f0 = 2.0 * h / (lambda * k as f64);
        let fbar = table.upper_for(k).expect("k <= n_max");
        if fbar >= f0 {
            worst = Some(k);
        }
    }
    Ok(match worst {
        None => Some(2),
        Some(k) if k == n_max => None,
        Some(k) => Some(k),
    })
}
