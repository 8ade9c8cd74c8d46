//! Energy transfer functions, half-power cutoff and periodograms.
//!
//! Frequencies are in cycles per sample, on `[0, 0.5]`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::window::{CoefficientWindow, FilterSpec};

pub const DEFAULT_GRID_POINTS: usize = 1024;
pub const DEFAULT_LOG_FLOOR: f64 = 1e-300;

// Below this the closed form is replaced by its limit at zero.
const DC_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferKind {
    /// `(sin(pi m_r l) / (m_r sin(pi l)))^(2k)`; exact only for odd integer `m_r`.
    ClosedForm,
    /// Squared frequency response of the actual coefficient window.
    ExactFromCoefficients,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferCurve {
    pub frequencies: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: TransferKind,
    pub m_r: f64,
    pub k: u32,
}

/// `points` evenly spaced frequencies covering `[0, 0.5]`, both ends included.
pub fn frequency_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::domain("frequency grid needs at least 2 points"));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| 0.5 * i as f64 / last).collect())
}

fn check_frequency(lambda: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&lambda) {
        return Err(Error::domain(format!(
            "frequency {lambda} outside [0, 0.5]"
        )));
    }
    Ok(())
}

/// Closed-form energy transfer function at `lambda`.
pub fn etf_closed_form(m_r: f64, k: u32, lambda: f64) -> Result<f64> {
    let spec = FilterSpec::new(m_r, k)?;
    check_frequency(lambda)?;
    Ok(closed_form_unchecked(spec.m_r(), spec.k(), lambda))
}

fn closed_form_unchecked(m_r: f64, k: u32, lambda: f64) -> f64 {
    if lambda < DC_EPSILON {
        return 1.0;
    }
    let ratio = (PI * m_r * lambda).sin() / (m_r * (PI * lambda).sin());
    ratio.powi(2 * k as i32)
}

pub fn etf_closed_form_curve(m_r: f64, k: u32, grid: &[f64]) -> Result<TransferCurve> {
    FilterSpec::new(m_r, k)?;
    for &l in grid {
        check_frequency(l)?;
    }
    Ok(TransferCurve {
        frequencies: grid.to_vec(),
        values: grid.iter().map(|&l| closed_form_unchecked(m_r, k, l)).collect(),
        kind: TransferKind::ClosedForm,
        m_r,
        k,
    })
}

/// Amplitude response `sum_u (a_u / m_r^k) cos(2 pi lambda u)` of a window.
pub fn frequency_response(coeffs: &CoefficientWindow, lambda: f64) -> f64 {
    let norm = coeffs.normalizer();
    let w = coeffs.weights();
    let h = coeffs.half_width();
    let mut s = w[h] / norm;
    for u in 1..=h {
        s += 2.0 * (w[h + u] / norm) * (2.0 * PI * lambda * u as f64).cos();
    }
    s
}

/// Squared frequency response of `coeffs` at every grid frequency.
pub fn etf_exact(coeffs: &CoefficientWindow, grid: &[f64]) -> Result<TransferCurve> {
    for &l in grid {
        check_frequency(l)?;
    }
    Ok(TransferCurve {
        frequencies: grid.to_vec(),
        values: grid
            .iter()
            .map(|&l| frequency_response(coeffs, l).powi(2))
            .collect(),
        kind: TransferKind::ExactFromCoefficients,
        m_r: coeffs.m_r(),
        k: coeffs.k(),
    })
}

/// Approximate half-power frequency of an EKZ filter.
pub fn cutoff_half_power(m_r: f64, k: u32) -> Result<f64> {
    let spec = FilterSpec::new(m_r, k)?;
    if spec.m_r() == 1.0 {
        return Err(Error::domain(
            "the identity filter (m_r = 1) has no half-power point",
        ));
    }
    let half_root = 0.5f64.powf(1.0 / (2.0 * k as f64));
    Ok(6f64.sqrt() / PI * ((1.0 - half_root) / (m_r * m_r - half_root)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerScale {
    Linear,
    /// Natural log of `max(power, floor)`.
    Log { floor: f64 },
}

/// One-sided raw periodogram `I(j/n) = |sum_t x_t e^{-2 pi i j t / n}|^2 / n`
/// for `j = 0..=n/2`. The mean is not removed.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    pub n: usize,
    pub scale: PowerScale,
}

impl Periodogram {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::domain(format!(
                "periodogram needs at least 2 samples, got {n}"
            )));
        }
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        let fft = FftPlanner::new().plan_fft_forward(n);
        fft.process(&mut buf);
        let bins = n / 2 + 1;
        Ok(Periodogram {
            frequencies: (0..bins).map(|j| j as f64 / n as f64).collect(),
            power: buf[..bins].iter().map(|c| c.norm_sqr() / n as f64).collect(),
            n,
            scale: PowerScale::Linear,
        })
    }

    /// Log-scaled copy. Already log-scaled periodograms are returned unchanged.
    pub fn to_log(&self, floor: f64) -> Result<Self> {
        if !(floor.is_finite() && floor > 0.0) {
            return Err(Error::domain(format!("log floor must be a positive real, got {floor}")));
        }
        if let PowerScale::Log { .. } = self.scale {
            return Ok(self.clone());
        }
        Ok(Periodogram {
            frequencies: self.frequencies.clone(),
            power: self.power.iter().map(|&p| p.max(floor).ln()).collect(),
            n: self.n,
            scale: PowerScale::Log { floor },
        })
    }

    /// Sum over all `n` Fourier frequencies, reconstructed from the one-sided
    /// bins. Equals `sum x_t^2` by Parseval.
    pub fn two_sided_sum(&self) -> f64 {
        let p = &self.power;
        let interior_end = if self.n.is_multiple_of(2) { p.len() - 1 } else { p.len() };
        let mut s = p[0];
        for &v in &p[1..interior_end] {
            s += 2.0 * v;
        }
        if self.n.is_multiple_of(2) {
            s += p[p.len() - 1];
        }
        s
    }

    /// Mean power over bins whose frequency lies in `[lo, hi]`, or `None`
    /// when no bin falls in the band.
    pub fn band_mean(&self, lo: f64, hi: f64) -> Option<f64> {
        let (sum, count) = self
            .frequencies
            .iter()
            .zip(&self.power)
            .filter(|(f, _)| (lo..=hi).contains(*f))
            .fold((0.0, 0usize), |(s, c), (_, p)| (s + p, c + 1));
        (count > 0).then(|| sum / count as f64)
    }
}

/// Periodogram of a fully observed series.
pub fn periodogram(x: &TimeSeries) -> Result<Periodogram> {
    if !x.is_fully_observed() {
        return Err(Error::Data(format!(
            "series has {} missing values; trim or fill them before computing a periodogram",
            x.missing_count()
        )));
    }
    Periodogram::from_values(x.values())
}

pub fn log_periodogram(x: &TimeSeries, floor: f64) -> Result<Periodogram> {
    periodogram(x)?.to_log(floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::ekz_coefficients;

    #[test]
    fn closed_form_examples() {
        assert!(etf_closed_form(7.0, 1, 1.0 / 7.0).unwrap() < 1e-30);
        assert_eq!(etf_closed_form(4.5, 3, 0.0).unwrap(), 1.0);
        assert!((etf_closed_form(3.0, 1, 0.5).unwrap() - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_rejects_out_of_range_frequency() {
        assert!(matches!(etf_closed_form(3.0, 1, 0.51), Err(Error::Domain(_))));
        assert!(matches!(etf_closed_form(3.0, 1, -0.1), Err(Error::Domain(_))));
        assert!(matches!(etf_closed_form(0.5, 1, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_zeros() {
        let c = ekz_coefficients(7.0, 2).unwrap();
        assert!(etf_exact(&c, &[1.0 / 7.0]).unwrap().values[0] < 1e-20);
        let c = ekz_coefficients(2.0, 1).unwrap();
        assert!(etf_exact(&c, &[0.5]).unwrap().values[0] < 1e-20);
    }

    #[test]
    fn exact_near_zero_for_fractional_window() {
        let c = ekz_coefficients(1.0 / 0.26, 1).unwrap();
        let v = etf_exact(&c, &[0.26]).unwrap().values[0];
        assert!(v > 0.0 && v < 1e-3, "{v}");
    }

    #[test]
    fn cutoff_examples() {
        let c = cutoff_half_power(7.0, 1).unwrap();
        assert!((c - 0.0607).abs() < 5e-5, "{c}");
        assert!(matches!(cutoff_half_power(1.0, 2), Err(Error::Domain(_))));
        let mut prev = f64::INFINITY;
        for m in [1.5, 2.0, 3.0, 7.5, 20.0, 365.25] {
            let c = cutoff_half_power(m, 2).unwrap();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn grid_covers_endpoints() {
        let g = frequency_grid(DEFAULT_GRID_POINTS).unwrap();
        assert_eq!(g.len(), 1024);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1023], 0.5);
        assert!(frequency_grid(1).is_err());
    }

    #[test]
    fn periodogram_of_constant() {
        let x = TimeSeries::new(vec![2.0; 16]).unwrap();
        let p = periodogram(&x).unwrap();
        assert_eq!(p.power.len(), 9);
        assert!((p.power[0] - 16.0 * 4.0).abs() < 1e-12);
        assert!(p.power[1..].iter().all(|&v| v < 1e-20));
    }

    #[test]
    fn periodogram_of_sinusoid() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|t| 3.0 * (2.0 * PI * t as f64 / 8.0).sin()).collect();
        let p = Periodogram::from_values(&x).unwrap();
        let peak = p.power[n / 8];
        assert!((p.frequencies[n / 8] - 0.125).abs() < 1e-15);
        for (j, &v) in p.power.iter().enumerate() {
            if j != n / 8 {
                assert!(v < 1e-10 * peak, "bin {j}: {v}");
            }
        }
    }

    #[test]
    fn periodogram_rejects_missing_and_short() {
        let x = TimeSeries::from_options(&[Some(1.0), None, Some(2.0)]).unwrap();
        assert!(matches!(periodogram(&x), Err(Error::Data(_))));
        let x = TimeSeries::new(vec![1.0]).unwrap();
        assert!(matches!(periodogram(&x), Err(Error::Domain(_))));
    }

    #[test]
    fn log_floor_rule() {
        let p = Periodogram {
            frequencies: vec![0.0, 0.25, 0.5],
            power: vec![1.0, 0.0, std::f64::consts::E],
            n: 4,
            scale: PowerScale::Linear,
        };
        let l = p.to_log(DEFAULT_LOG_FLOOR).unwrap();
        assert_eq!(l.power[0], 0.0);
        assert_eq!(l.power[1], DEFAULT_LOG_FLOOR.ln());
        assert!((l.power[2] - 1.0).abs() < 1e-15);
        assert!(p.to_log(0.0).is_err());
    }

    #[test]
    fn parseval_odd_and_even() {
        for n in [7usize, 8] {
            let x: Vec<f64> = (0..n).map(|t| (t as f64 * 0.7).cos() + 0.3 * t as f64).collect();
            let p = Periodogram::from_values(&x).unwrap();
            let energy: f64 = x.iter().map(|v| v * v).sum();
            assert!((p.two_sided_sum() - energy).abs() < 1e-10 * energy);
        }
    }

    #[test]
    fn band_mean() {
        let p = Periodogram {
            frequencies: vec![0.0, 0.25, 0.5],
            power: vec![1.0, 2.0, 4.0],
            n: 4,
            scale: PowerScale::Linear,
        };
        assert_eq!(p.band_mean(0.2, 0.5), Some(3.0));
        assert_eq!(p.band_mean(0.3, 0.4), None);
    }
}
