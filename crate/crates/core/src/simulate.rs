//! Seeded signal generators and the periodogram experiment runner.
//!
//! # Random numbers
//!
//! White noise is drawn from ChaCha20 (`rand_chacha::ChaCha20Rng`), seeded
//! with `seed_from_u64(seed)`; the `i`-th noise component of a recipe uses
//! stream `i`. Uniforms are `(next_u64() >> 11) * 2^-53` in `[0, 1)`, and
//! normals come from the Marsaglia polar method, both values of each accepted
//! pair being used in order. The logarithm and sine come from `libm`, so a
//! given seed yields the same bits on every platform. Changing any of this
//! changes every fixture.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::filter::apply_direct;
use crate::io::Table;
use crate::series::TimeSeries;
use crate::spectral::{
    etf_closed_form_curve, etf_exact, frequency_grid, Periodogram, TransferCurve,
    DEFAULT_GRID_POINTS, DEFAULT_LOG_FLOOR,
};
use crate::window::FilterSpec;

pub const DESK_SCALE_N: usize = 20_000;
pub const FULL_SCALE_N: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

/// Standard normal draws from a ChaCha20 stream.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GaussianStream { rng, spare: None }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * libm::log(s) / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

fn noise_values(n: usize, sigma: f64, seed: u64, stream: u64) -> Vec<f64> {
    let mut g = GaussianStream::new(seed, stream);
    (0..n).map(|_| sigma * g.next_standard()).collect()
}

fn sinusoid_values(n: usize, period: f64, amplitude: f64, phase: f64) -> Vec<f64> {
    (0..n)
        .map(|t| {
            // reduce first so long series keep full phase accuracy
            let cycles = (t as f64).rem_euclid(period) / period;
            amplitude * libm::sin(2.0 * std::f64::consts::PI * cycles + phase)
        })
        .collect()
}

/// `n` independent Gaussian(0, sigma^2) samples.
pub fn gen_white_noise(n: usize, sigma: f64, seed: u64) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::domain("white noise length must be positive"));
    }
    check_sigma(sigma)?;
    TimeSeries::new(noise_values(n, sigma, seed, 0))
}

/// `amplitude * sin(2 pi t / period + phase)` for `t = 0..n`.
pub fn gen_sinusoid(n: usize, period: f64, amplitude: f64, phase: f64) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::domain("sinusoid length must be positive"));
    }
    check_period(period)?;
    if !amplitude.is_finite() || !phase.is_finite() {
        return Err(Error::domain("sinusoid amplitude and phase must be finite"));
    }
    TimeSeries::new(sinusoid_values(n, period, amplitude, phase))
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("noise sigma must be positive, got {sigma}")));
    }
    Ok(())
}

fn check_period(period: f64) -> Result<()> {
    if !(period.is_finite() && period > 1.0) {
        return Err(Error::domain(format!(
            "sinusoid period must exceed 1 sample, got {period}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Component {
    WhiteNoise { sigma: f64 },
    Sinusoid { period: f64, amplitude: f64, phase: f64 },
}

/// A fully specified, reproducible experiment.
///
/// `filters` are applied to the synthesized series; `references` only
/// contribute transfer-function curves (the comparison filters drawn
/// alongside a figure).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRecipe {
    pub n: usize,
    pub seed: u64,
    pub components: Vec<Component>,
    pub filters: Vec<FilterSpec>,
    pub references: Vec<FilterSpec>,
    pub grid_points: usize,
}

impl SimulationRecipe {
    pub fn new(n: usize, seed: u64) -> Self {
        SimulationRecipe {
            n,
            seed,
            components: Vec::new(),
            filters: Vec::new(),
            references: Vec::new(),
            grid_points: DEFAULT_GRID_POINTS,
        }
    }

    /// White noise, EKZ(2,1) and EKZ(2,2), with the SMA_3 curve for comparison.
    pub fn figure4(n: usize, seed: u64) -> Result<Self> {
        let mut r = SimulationRecipe::new(n, seed);
        r.components.push(Component::WhiteNoise { sigma: 1.0 });
        r.filters = vec![FilterSpec::new(2.0, 1)?, FilterSpec::new(2.0, 2)?];
        r.references = vec![FilterSpec::new(3.0, 1)?];
        Ok(r)
    }

    /// White noise and EKZ(1/0.26, 1), with KZ(3,1) and KZ(5,1) for comparison.
    pub fn figure5(n: usize, seed: u64) -> Result<Self> {
        let mut r = SimulationRecipe::new(n, seed);
        r.components.push(Component::WhiteNoise { sigma: 1.0 });
        r.filters = vec![FilterSpec::new(1.0 / 0.26, 1)?];
        r.references = vec![FilterSpec::new(3.0, 1)?, FilterSpec::new(5.0, 1)?];
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(format!("recipe length must be at least 2, got {}", self.n)));
        }
        if self.grid_points < 2 {
            return Err(Error::domain("recipe grid needs at least 2 points"));
        }
        for c in &self.components {
            match *c {
                Component::WhiteNoise { sigma } => check_sigma(sigma)?,
                Component::Sinusoid { period, amplitude, phase } => {
                    check_period(period)?;
                    if !amplitude.is_finite() || !phase.is_finite() {
                        return Err(Error::domain("sinusoid amplitude and phase must be finite"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sum of all components.
    pub fn synthesize(&self) -> Result<TimeSeries> {
        self.validate()?;
        let mut x = vec![0.0; self.n];
        let mut stream = 0;
        for c in &self.components {
            let part = match *c {
                Component::WhiteNoise { sigma } => {
                    stream += 1;
                    noise_values(self.n, sigma, self.seed, stream - 1)
                }
                Component::Sinusoid { period, amplitude, phase } => {
                    sinusoid_values(self.n, period, amplitude, phase)
                }
            };
            for (acc, v) in x.iter_mut().zip(part) {
                *acc += v;
            }
        }
        TimeSeries::new(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub periodogram: Periodogram,
    pub log_periodogram: Periodogram,
}

impl Spectrum {
    fn of(values: &[f64]) -> Result<Self> {
        let periodogram = Periodogram::from_values(values)?;
        let log_periodogram = periodogram.to_log(DEFAULT_LOG_FLOOR)?;
        Ok(Spectrum {
            periodogram,
            log_periodogram,
        })
    }

    fn table(&self) -> Table {
        Table::new()
            .with_reals("frequency", self.periodogram.frequencies.clone())
            .with_reals("power", self.periodogram.power.clone())
            .with_reals("log_power", self.log_periodogram.power.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredOutput {
    pub spec: FilterSpec,
    pub series: TimeSeries,
    /// Periodogram of the longest fully observed stretch of `series`.
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    Applied,
    Reference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferPair {
    pub spec: FilterSpec,
    pub role: CurveRole,
    pub exact: TransferCurve,
    pub closed_form: TransferCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub recipe: SimulationRecipe,
    pub raw: TimeSeries,
    pub raw_spectrum: Spectrum,
    pub filtered: Vec<FilteredOutput>,
    pub transfer: Vec<TransferPair>,
}

impl ExperimentReport {
    /// Plot-ready tables, named for the file each should land in.
    pub fn tables(&self) -> Vec<(String, Table)> {
        let mut out = vec![("periodogram_raw".to_string(), self.raw_spectrum.table())];
        for f in &self.filtered {
            out.push((format!("periodogram_{}", f.spec.label()), f.spectrum.table()));
        }
        if let Some(first) = self.transfer.first() {
            let mut t = Table::new().with_reals("frequency", first.exact.frequencies.clone());
            for p in &self.transfer {
                let label = p.spec.label();
                t = t
                    .with_reals(format!("exact_{label}"), p.exact.values.clone())
                    .with_reals(format!("closed_{label}"), p.closed_form.values.clone());
            }
            out.push(("etf".to_string(), t));
        }
        out
    }
}

/// Synthesizes the recipe's series, filters it with each listed filter
/// (boundary samples left missing) and computes spectra and transfer curves.
pub fn run_experiment(recipe: &SimulationRecipe) -> Result<ExperimentReport> {
    let raw = recipe.synthesize()?;
    let raw_spectrum = Spectrum::of(raw.values())?;

    let mut filtered = Vec::with_capacity(recipe.filters.len());
    for spec in &recipe.filters {
        let series = apply_direct(&raw, spec)?;
        let interior = series.observed_interior();
        if interior.len() < 2 {
            return Err(Error::Data(format!(
                "{spec} leaves fewer than 2 observed samples from a series of {}",
                recipe.n
            )));
        }
        filtered.push(FilteredOutput {
            spec: *spec,
            spectrum: Spectrum::of(&interior)?,
            series,
        });
    }

    let grid = frequency_grid(recipe.grid_points)?;
    let mut transfer = Vec::new();
    let roles = recipe
        .filters
        .iter()
        .map(|s| (s, CurveRole::Applied))
        .chain(recipe.references.iter().map(|s| (s, CurveRole::Reference)));
    for (spec, role) in roles {
        transfer.push(TransferPair {
            spec: *spec,
            role,
            exact: etf_exact(&spec.coefficients()?, &grid)?,
            closed_form: etf_closed_form_curve(spec.m_r(), spec.k(), &grid)?,
        });
    }

    Ok(ExperimentReport {
        recipe: recipe.clone(),
        raw,
        raw_spectrum,
        filtered,
        transfer,
    })
}
