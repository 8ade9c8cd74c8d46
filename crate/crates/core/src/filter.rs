//! Application of EKZ filters to a [`TimeSeries`], in direct form (one pass
//! of the full `k`-fold window) and iterated form (`k` passes of the single
//! window).

use crate::error::Result;
use crate::series::TimeSeries;
use crate::window::{BoundaryPolicy, FilterSpec};

/// Filters `x` with the full coefficient window `a_u^{m_r,k} / m_r^k`.
pub fn apply_direct(x: &TimeSeries, spec: &FilterSpec) -> Result<TimeSeries> {
    let window = spec.coefficients()?;
    Ok(convolve_centered(
        x,
        window.weights(),
        window.normalizer(),
        spec.boundary(),
    ))
}

/// Filters `x` by applying the single-pass window `k` times. On a fully
/// observed series with [`BoundaryPolicy::Missing`] this agrees with
/// [`apply_direct`] up to rounding.
pub fn apply_iterated(x: &TimeSeries, spec: &FilterSpec) -> Result<TimeSeries> {
    // Same support guard as the direct form.
    spec.coefficients()?;
    let base = spec.base_weights();
    let mut out = x.clone();
    for _ in 0..spec.k() {
        out = convolve_centered(&out, &base, spec.m_r(), spec.boundary());
    }
    Ok(out)
}

/// Extended simple moving average: the `k = 1` EKZ filter.
pub fn esma(x: &TimeSeries, m_r: f64, policy: BoundaryPolicy) -> Result<TimeSeries> {
    let spec = FilterSpec::new(m_r, 1)?.with_boundary(policy);
    apply_direct(x, &spec)
}

/// Centered weighted sum `sum_u w_u x[t+u] / normalizer` over an odd-length,
/// symmetric `weights`. Windows that are not fully observed follow `policy`.
fn convolve_centered(
    x: &TimeSeries,
    weights: &[f64],
    normalizer: f64,
    policy: BoundaryPolicy,
) -> TimeSeries {
    let n = x.len();
    let h = weights.len() / 2;
    let values = x.values();
    let mask = x.missing_mask();

    // missing_before[i] = number of missing samples in x[..i]
    let mut missing_before = Vec::with_capacity(n + 1);
    missing_before.push(0usize);
    for &m in mask {
        missing_before.push(missing_before.last().unwrap() + m as usize);
    }

    let mut out = vec![f64::NAN; n];
    let mut out_missing = vec![true; n];
    for t in 0..n {
        let fits = t >= h && t + h < n;
        if fits && missing_before[t + h + 1] == missing_before[t - h] {
            let window = &values[t - h..=t + h];
            let s: f64 = weights.iter().zip(window).map(|(w, v)| w * v).sum();
            out[t] = s / normalizer;
            out_missing[t] = false;
            continue;
        }
        if policy == BoundaryPolicy::Renormalize {
            let lo = t.saturating_sub(h);
            let hi = (t + h).min(n - 1);
            let mut s = 0.0;
            let mut applied = 0.0;
            for i in lo..=hi {
                if !mask[i] {
                    let w = weights[i + h - t];
                    s += w * values[i];
                    applied += w;
                }
            }
            if applied > 0.0 {
                out[t] = s / applied;
                out_missing[t] = false;
            }
        }
    }
    x.derive(out, out_missing)
}
