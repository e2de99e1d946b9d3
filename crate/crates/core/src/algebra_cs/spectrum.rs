//! Analytic spectra `E(n)` and their gap functions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SusyError};
use crate::model::PotentialModel;
use crate::poschl_teller::{pt_eigenvalue, PTParams};
use crate::scalar::Real;

/// Levels checked for monotonicity when a spectrum is built.
const CHECKED_LEVELS: usize = 64;

/// `E(n)` for `n ≥ 0` with gap function `f(n) = E(n+1) - E(n)`.
#[derive(Clone)]
pub struct SpectrumFunction<T> {
    energy: Arc<dyn Fn(usize) -> T + Send + Sync>,
    pub label: String,
}

impl<T: Real> fmt::Debug for SpectrumFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectrumFunction")
            .field("label", &self.label)
            .field("e0", &self.e(0))
            .finish()
    }
}

impl<T: Real> SpectrumFunction<T> {
    /// Fails unless `E` is finite and strictly increasing on the first levels.
    pub fn new<F>(label: impl Into<String>, energy: F) -> Result<Self>
    where
        F: Fn(usize) -> T + Send + Sync + 'static,
    {
        let label = label.into();
        for n in 0..CHECKED_LEVELS {
            let (a, b) = (energy(n), energy(n + 1));
            if !a.is_finite() || !(b > a) {
                return Err(SusyError::InvalidInput(format!(
                    "spectrum '{label}' is not strictly increasing at n = {n} ({a}, {b})"
                )));
            }
        }
        Ok(Self {
            energy: Arc::new(energy),
            label,
        })
    }

    /// `E(n) = n + 1/2`.
    pub fn oscillator() -> Self {
        Self::new("oscillator", |n| T::from_usize_lossy(n) + T::lit(0.5)).expect("increasing")
    }

    /// `E(n) = (μ + 2n)² / 2` with `μ = λ + ν`.
    pub fn poschl_teller(p: PTParams<T>) -> Self {
        Self::new(format!("PT({}, {})", p.lambda, p.nu), move |n| {
            pt_eigenvalue(p, n)
        })
        .expect("increasing")
    }

    /// The analytic spectrum attached to a model.
    pub fn from_model(model: &PotentialModel<T>) -> Result<Self> {
        if !model.has_spectrum() {
            return Err(SusyError::InvalidInput(format!(
                "model '{}' has no analytic spectrum",
                model.label
            )));
        }
        let m = model.clone();
        Self::new(model.label.clone(), move |n| {
            m.energy(n).expect("spectrum present")
        })
    }

    pub fn e(&self, n: usize) -> T {
        (self.energy)(n)
    }

    pub fn e0(&self) -> T {
        self.e(0)
    }

    /// `E(n+1) - E(n)`.
    pub fn f(&self, n: usize) -> T {
        self.e(n + 1) - self.e(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_functions() {
        let osc = SpectrumFunction::<f64>::oscillator();
        assert!((0..10).all(|n| osc.f(n) == 1.0));
        let pt = SpectrumFunction::poschl_teller(PTParams::new(3.0, 4.0).unwrap());
        assert_eq!(pt.e0(), 24.5);
        for n in 0..10 {
            assert_eq!(pt.f(n), 4.0 * n as f64 + 16.0);
        }
    }

    #[test]
    fn rejects_decreasing_spectra() {
        assert!(SpectrumFunction::<f64>::new("bad", |n| -(n as f64)).is_err());
        assert!(
            SpectrumFunction::<f64>::new("flat", |n| if n > 3 { 1.0 } else { n as f64 * 0.1 })
                .is_err()
        );
    }
}
