use crate::error::{Error, Result};

/// Real-valued samples on a uniform grid, with an explicit missing mask.
///
/// Missing slots hold `NaN` in `values`; every observed slot is finite.
/// The time step and origin are labels only: all filtering is index based.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    missing: Vec<bool>,
    time_step: f64,
    origin: i64,
}

impl TimeSeries {
    /// Fully observed series. Fails on an empty input or non-finite samples.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let missing = vec![false; values.len()];
        Self::with_mask(values, missing)
    }

    /// Series from optional samples, `None` meaning missing.
    pub fn from_options(samples: &[Option<f64>]) -> Result<Self> {
        let values = samples.iter().map(|s| s.unwrap_or(f64::NAN)).collect();
        let missing = samples.iter().map(Option::is_none).collect();
        Self::with_mask(values, missing)
    }

    pub fn with_mask(mut values: Vec<f64>, missing: Vec<bool>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("time series must contain at least one sample"));
        }
        if values.len() != missing.len() {
            return Err(Error::domain(format!(
                "values ({}) and missing mask ({}) differ in length",
                values.len(),
                missing.len()
            )));
        }
        for (i, (v, &m)) in values.iter_mut().zip(&missing).enumerate() {
            if m {
                *v = f64::NAN;
            } else if !v.is_finite() {
                return Err(Error::Data(format!("non-finite sample {v} at index {i}")));
            }
        }
        Ok(TimeSeries {
            values,
            missing,
            time_step: 1.0,
            origin: 0,
        })
    }

    pub fn with_time_step(mut self, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::domain(format!("time step must be positive, got {step}")));
        }
        self.time_step = step;
        Ok(self)
    }

    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = origin;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed series; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        if self.missing[i] {
            None
        } else {
            Some(self.values[i])
        }
    }

    /// Raw sample buffer; missing slots are `NaN`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn missing_mask(&self) -> &[bool] {
        &self.missing
    }

    pub fn time_step(&self) -> f64 {
        self.time_step
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn to_options(&self) -> Vec<Option<f64>> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    pub fn is_fully_observed(&self) -> bool {
        !self.missing.iter().any(|&m| m)
    }

    /// Longest run of consecutive observed samples, as an index range.
    /// Ties go to the earliest run. Empty when everything is missing.
    pub fn longest_observed_run(&self) -> std::ops::Range<usize> {
        let mut best = 0..0;
        let mut start = None;
        for i in 0..=self.len() {
            let observed = i < self.len() && !self.missing[i];
            match (observed, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    if i - s > best.len() {
                        best = s..i;
                    }
                    start = None;
                }
                _ => {}
            }
        }
        best
    }

    /// Observed values of the longest fully observed run.
    pub fn observed_interior(&self) -> Vec<f64> {
        self.values[self.longest_observed_run()].to_vec()
    }

    /// Same grid labels, new samples. Used by filters to build their output.
    pub(crate) fn derive(&self, values: Vec<f64>, missing: Vec<bool>) -> TimeSeries {
        debug_assert_eq!(values.len(), self.len());
        TimeSeries {
            values,
            missing,
            time_step: self.time_step,
            origin: self.origin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(TimeSeries::new(vec![]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(TimeSeries::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn missing_slots_may_hold_anything() {
        let ts = TimeSeries::with_mask(vec![1.0, f64::INFINITY, 3.0], vec![false, true, false]).unwrap();
        assert_eq!(ts.get(1), None);
        assert_eq!(ts.get(2), Some(3.0));
        assert_eq!(ts.missing_count(), 1);
    }

    #[test]
    fn mask_length_must_match() {
        assert!(TimeSeries::with_mask(vec![1.0, 2.0], vec![false]).is_err());
    }

    #[test]
    fn longest_run() {
        let ts = TimeSeries::from_options(&[None, Some(1.0), Some(2.0), None, Some(3.0), Some(4.0), Some(5.0), None])
            .unwrap();
        assert_eq!(ts.longest_observed_run(), 4..7);
        assert_eq!(ts.observed_interior(), vec![3.0, 4.0, 5.0]);

        let none = TimeSeries::from_options(&[None, None]).unwrap();
        assert!(none.longest_observed_run().is_empty());
    }

    #[test]
    fn time_step_must_be_positive() {
        let ts = TimeSeries::new(vec![1.0]).unwrap();
        assert!(ts.clone().with_time_step(0.0).is_err());
        assert_eq!(ts.with_time_step(0.25).unwrap().time_step(), 0.25);
    }
}
