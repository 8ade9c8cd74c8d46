//! Window-length decomposition and coefficient generation for the extended
//! Kolmogorov-Zurbenko (EKZ) filter.
//!
//! A real window length `m_r >= 1` is split as `m_r = m_o + m_d`, where `m_o`
//! is the greatest odd integer not above `m_r` and `0 <= m_d < 2`. The single
//! pass window is `{m_d/2, 1, ..., 1, m_d/2}` (with `m_o` ones); `k` passes
//! convolve it with itself. For odd integer `m_r` the end weights vanish, they
//! are trimmed, and the result is the classic KZ window.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Upper bound on `k * (m_o + 1)`, the coefficient support width.
pub const DEFAULT_MAX_SUPPORT: u64 = 10_000_000;

// Keeps `m_o` exactly representable and far from integer overflow.
const MAX_WINDOW_LENGTH: f64 = 4_503_599_627_370_496.0; // 2^52

/// What to emit where the filter window does not fit inside the observed data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Output is missing unless every tap lands on an observed sample.
    #[default]
    Missing,
    /// Drop unavailable taps and divide by the sum of the weights applied.
    Renormalize,
}

impl FromStr for BoundaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "missing" => Ok(BoundaryPolicy::Missing),
            "renorm" | "renormalize" => Ok(BoundaryPolicy::Renormalize),
            other => Err(Error::domain(format!(
                "unknown boundary policy {other:?} (expected \"missing\" or \"renorm\")"
            ))),
        }
    }
}

impl fmt::Display for BoundaryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryPolicy::Missing => "missing",
            BoundaryPolicy::Renormalize => "renorm",
        })
    }
}

/// Splits `m_r` into `(m_o, m_d)`.
pub fn decompose_window_length(m_r: f64) -> Result<(u64, f64)> {
    if !m_r.is_finite() || m_r < 1.0 {
        return Err(Error::domain(format!(
            "window length must be a finite real >= 1, got {m_r}"
        )));
    }
    if m_r > MAX_WINDOW_LENGTH {
        return Err(Error::domain(format!("window length {m_r} is too large")));
    }
    let floor = m_r.floor() as u64;
    let m_o = if floor % 2 == 1 { floor } else { floor - 1 };
    let m_d = m_r - m_o as f64;
    Ok((m_o, m_d))
}

/// A validated `(m_r, k)` pair with its decomposition and boundary policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    m_r: f64,
    k: u32,
    m_o: u64,
    m_d: f64,
    boundary: BoundaryPolicy,
}

impl FilterSpec {
    pub fn new(m_r: f64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("iteration count k must be a positive integer"));
        }
        let (m_o, m_d) = decompose_window_length(m_r)?;
        Ok(FilterSpec {
            m_r,
            k,
            m_o,
            m_d,
            boundary: BoundaryPolicy::default(),
        })
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn m_r(&self) -> f64 {
        self.m_r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m_o(&self) -> u64 {
        self.m_o
    }

    pub fn m_d(&self) -> f64 {
        self.m_d
    }

    pub fn boundary(&self) -> BoundaryPolicy {
        self.boundary
    }

    /// True when `m_r` is an odd integer, i.e. the filter is a classic KZ filter.
    pub fn is_kz(&self) -> bool {
        self.m_d == 0.0
    }

    /// Half-width of a single pass.
    pub fn pass_half_width(&self) -> usize {
        if self.is_kz() {
            ((self.m_o - 1) / 2) as usize
        } else {
            self.m_o.div_ceil(2) as usize
        }
    }

    /// Half-width of the full `k`-pass support.
    pub fn half_width(&self) -> usize {
        self.k as usize * self.pass_half_width()
    }

    /// Single pass weights `{m_d/2, 1, ..., 1, m_d/2}`, zero ends trimmed.
    pub fn base_weights(&self) -> Vec<f64> {
        let ones = self.m_o as usize;
        if self.is_kz() {
            vec![1.0; ones]
        } else {
            let mut w = Vec::with_capacity(ones + 2);
            w.push(self.m_d / 2.0);
            w.extend(std::iter::repeat_n(1.0, ones));
            w.push(self.m_d / 2.0);
            w
        }
    }

    pub fn coefficients(&self) -> Result<CoefficientWindow> {
        coefficients_for(self, DEFAULT_MAX_SUPPORT)
    }

    /// Short label such as `ekz_m2_k1`, used for table columns.
    pub fn label(&self) -> String {
        format!("ekz_m{}_k{}", self.m_r, self.k)
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EKZ(m_r={}, k={})", self.m_r, self.k)
    }
}

/// Symmetric, unnormalized EKZ weights `a_u` for `u` in `[-H, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientWindow {
    weights: Vec<f64>,
    half_width: usize,
    normalizer: f64,
    m_r: f64,
    k: u32,
}

impl CoefficientWindow {
    /// Weights ordered from offset `-H` to `+H`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `m_r^k`, the nominal sum of the weights.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn m_r(&self) -> f64 {
        self.m_r
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `a_u`, zero outside the support.
    pub fn weight(&self, offset: isize) -> f64 {
        let idx = offset + self.half_width as isize;
        if idx < 0 {
            return 0.0;
        }
        self.weights.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// `(offset, weight)` pairs from `-H` to `+H`.
    pub fn iter(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        let h = self.half_width as isize;
        self.weights.iter().enumerate().map(move |(i, &w)| (i as isize - h, w))
    }

    /// Weights divided by `m_r^k`; they sum to one.
    pub fn normalized(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w / self.normalizer).collect()
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Coefficients of `(m_d/2 + z + ... + z^{m_o} + (m_d/2) z^{m_o+1})^k`,
/// centered, built by `k - 1` successive discrete convolutions.
pub fn ekz_coefficients(m_r: f64, k: u32) -> Result<CoefficientWindow> {
    ekz_coefficients_with_limit(m_r, k, DEFAULT_MAX_SUPPORT)
}

pub fn ekz_coefficients_with_limit(m_r: f64, k: u32, max_support: u64) -> Result<CoefficientWindow> {
    coefficients_for(&FilterSpec::new(m_r, k)?, max_support)
}

fn coefficients_for(spec: &FilterSpec, max_support: u64) -> Result<CoefficientWindow> {
    let width = (spec.m_o + 1).checked_mul(spec.k as u64);
    match width {
        Some(w) if w <= max_support => {}
        _ => {
            return Err(Error::Resource(format!(
                "{spec} needs a support of k*(m_o+1) = {}*{} taps, above the limit of {max_support}",
                spec.k,
                spec.m_o + 1
            )))
        }
    }

    let base = spec.base_weights();
    let mut acc = base.clone();
    for _ in 1..spec.k {
        acc = symmetric_convolve(&acc, &base);
    }
    Ok(CoefficientWindow {
        half_width: (acc.len() - 1) / 2,
        weights: acc,
        normalizer: spec.m_r.powi(spec.k as i32),
        m_r: spec.m_r,
        k: spec.k,
    })
}

/// Full convolution of two symmetric sequences. Only the first half and the
/// center are computed; the rest is mirrored so the result is exactly symmetric.
fn symmetric_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() + b.len() - 1;
    let mut out = vec![0.0; n];
    for j in 0..n.div_ceil(2) {
        let lo = j.saturating_sub(b.len() - 1);
        let hi = j.min(a.len() - 1);
        let mut s = 0.0;
        for i in lo..=hi {
            s += a[i] * b[j - i];
        }
        out[j] = s;
    }
    for j in n.div_ceil(2)..n {
        out[j] = out[n - 1 - j];
    }
    out
}
