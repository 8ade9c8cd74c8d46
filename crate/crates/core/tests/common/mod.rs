//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use ekz::simulate::gen_white_noise;
use ekz::TimeSeries;

pub const FIXTURE_SEED: u64 = 20_240_611;

/// Untrimmed single-pass polynomial `{m_d/2, 1, ..., 1, m_d/2}`.
pub fn base_polynomial(m_r: f64) -> Vec<f64> {
    let mut m_o = m_r.floor() as usize;
    if m_o.is_multiple_of(2) {
        m_o -= 1;
    }
    let m_d = m_r - m_o as f64;
    let mut p = vec![m_d / 2.0];
    p.extend(std::iter::repeat_n(1.0, m_o));
    p.push(m_d / 2.0);
    p
}

/// Coefficients of `poly^k` by enumerating every k-tuple of terms.
pub fn brute_force_power(poly: &[f64], k: u32) -> Vec<f64> {
    let deg = poly.len() - 1;
    let mut out = vec![0.0; deg * k as usize + 1];
    let mut idx = vec![0usize; k as usize];
    loop {
        let exponent: usize = idx.iter().sum();
        let product: f64 = idx.iter().map(|&i| poly[i]).product();
        out[exponent] += product;
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] <= deg {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Brute-force EKZ coefficients, with the zero end taps of an odd `m_r` removed.
pub fn brute_force_ekz(m_r: f64, k: u32) -> Vec<f64> {
    let full = brute_force_power(&base_polynomial(m_r), k);
    let lead = full.iter().take_while(|&&v| v == 0.0).count();
    full[lead..full.len() - lead].to_vec()
}

/// Textbook full linear convolution.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Plain centered SMA of odd length `m`; missing where the window is incomplete.
pub fn sma(x: &[Option<f64>], m: usize) -> Vec<Option<f64>> {
    let h = m / 2;
    (0..x.len())
        .map(|t| {
            if t < h || t + h >= x.len() {
                return None;
            }
            let mut s = 0.0;
            for v in &x[t - h..=t + h] {
                s += (*v)?;
            }
            Some(s / m as f64)
        })
        .collect()
}

pub fn kz_by_composition(x: &[Option<f64>], m: usize, k: u32) -> Vec<Option<f64>> {
    (0..k).fold(x.to_vec(), |acc, _| sma(&acc, m))
}

pub fn noise_fixture(n: usize) -> TimeSeries {
    gen_white_noise(n, 1.0, FIXTURE_SEED).unwrap()
}

/// Largest per-sample deviation; `None` if the missing masks differ.
pub fn max_deviation(a: &[Option<f64>], b: &[Option<f64>]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        match (x, y) {
            (Some(x), Some(y)) => worst = worst.max((x - y).abs()),
            (None, None) => {}
            _ => return None,
        }
    }
    Some(worst)
}

/// `(leading, trailing)` missing counts.
pub fn edge_missing(y: &TimeSeries) -> (usize, usize) {
    let mask = y.missing_mask();
    let lead = mask.iter().take_while(|&&m| m).count();
    let trail = mask.iter().rev().take_while(|&&m| m).count();
    (lead, trail)
}

pub fn interior_range(y: &TimeSeries) -> f64 {
    let v: Vec<f64> = y.to_options().into_iter().flatten().collect();
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn sinusoid(n: usize, period: f64, amplitude: f64, phase: f64) -> Vec<f64> {
    (0..n)
        .map(|t| amplitude * (2.0 * std::f64::consts::PI * t as f64 / period + phase).sin())
        .collect()
}
