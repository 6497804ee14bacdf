//! Scalar kernels shared by every solver: harmonic numbers, stable powers
//! of survival probabilities, and binomial probability rows.

use crate::params::ParamError;

/// n-th harmonic number `H_n = Σ_{i=1..n} 1/i`, accumulated in ascending
/// order so every caller sees the same rounding.
pub fn harmonic(n: usize) -> Result<f64, ParamError> {
    if n == 0 {
        return Err(ParamError::HarmonicIndex);
    }
    let mut h = 0.0;
    for i in 1..=n {
        h += 1.0 / i as f64;
    }
    Ok(h)
}

/// `(1 − p)^k` evaluated as `exp(k · ln(1 − p))` so that large exponents
/// (up to a(N−i) ≈ N²) do not accumulate repeated-multiplication drift.
///
/// `k = 0` returns 1 for every `p`, including `p = 1` (0⁰ = 1 convention).
pub fn survive_pow(p: f64, k: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p), "p must be a probability, got {p}");
    if k == 0 {
        return 1.0;
    }
    // ln_1p keeps full precision for small p; at p = 1 it yields −inf and
    // the exponential collapses to 0 as required.
    ((-p).ln_1p() * k as f64).exp()
}

/// `1 − (1 − p)^k`: the chance at least one of `k` independent links, each
/// ON with probability `p`, is ON. Evaluated as `−expm1(k · ln(1 − p))` so
/// the result keeps full *relative* precision even where it is within one
/// ulp of 0 or 1 — forming `1.0 − survive_pow(p, k)` instead would lose the
/// survival probability to cancellation once `(1−p)^k` drops below ~1e−16,
/// which the solvers hit at large `a` and `p` near 1.
pub fn any_on_prob(p: f64, k: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p), "p must be a probability, got {p}");
    if k == 0 {
        return 0.0;
    }
    -((-p).ln_1p() * k as f64).exp_m1()
}

/// Full binomial row `[C(m,c) q^c (1−q)^{m−c}]` for `c = 0..=m`.
///
/// Terms follow the multiplicative recurrence
/// `term_{c+1} = term_c · ((m−c)/(c+1)) · (q/(1−q))`, anchored at the mode
/// `c* = ⌊(m+1)q⌋` and normalized with a compensated sum. Anchoring at the
/// mode instead of at `(1−q)^m` keeps the row representable for large `m`
/// (the c = 0 term underflows near m ≈ 1000 already at q = 1/2); wherever
/// both anchors are representable the two agree to rounding. The returned
/// row sums to 1 within 1e−12 for all `m ≤ 10⁴`.
pub fn binomial_pmf_row(m: usize, q: f64) -> Vec<f64> {
    let mut row = Vec::new();
    binomial_pmf_row_into(m, q, &mut row);
    row
}

/// Allocation-free variant of [`binomial_pmf_row`]; clears and fills `row`.
pub fn binomial_pmf_row_into(m: usize, q: f64, row: &mut Vec<f64>) {
    assert!(
        q.is_finite() && (0.0..=1.0).contains(&q),
        "q must be a probability, got {q}"
    );
    binomial_pmf_row_parts_into(m, q, 1.0 - q, row);
}

/// Row filler taking the success and failure probabilities as separately
/// computed values (`q + s = 1` in exact arithmetic). The solvers pass
/// `q = any_on_prob(p, a)` and `s = survive_pow(p, a)` so that the tail
/// near either end of the row keeps full relative precision instead of
/// inheriting the cancellation error of a `1.0 − q` round trip.
pub(crate) fn binomial_pmf_row_parts_into(m: usize, q: f64, s: f64, row: &mut Vec<f64>) {
    debug_assert!(
        (q + s - 1.0).abs() <= 1e-12,
        "q = {q} and s = {s} must be complementary"
    );
    row.clear();
    row.resize(m + 1, 0.0);
    if m == 0 || q == 0.0 {
        row[0] = 1.0;
        return;
    }
    if s == 0.0 {
        row[m] = 1.0;
        return;
    }
    let mode = (((m + 1) as f64 * q).floor() as usize).min(m);
    row[mode] = 1.0;
    let up = q / s;
    for c in mode..m {
        // ratio ≤ 1 beyond the mode, so no term overflows
        row[c + 1] = row[c] * ((m - c) as f64 / (c + 1) as f64) * up;
    }
    if mode > 0 {
        let down = s / q;
        for c in (1..=mode).rev() {
            row[c - 1] = row[c] * (c as f64 / (m - c + 1) as f64) * down;
        }
    }
    let total = compensated_sum(row);
    let inv = 1.0 / total;
    for t in row.iter_mut() {
        *t *= inv;
    }
}

/// Neumaier-compensated sum; deterministic and accurate to a few ulps even
/// for 10⁴-term rows, which is what lets the pmf-normalization and the
/// Monte Carlo moments meet their stated tolerances.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
