//! XX-model parameters, the spectral symbol `g(theta)`, and its Fourier
//! coefficients `g_l` — the only physics inputs to the whole pipeline.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] use num_traits::Float; // float math in no_std builds

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// Model parameters restricted to the critical phase `|h| < 2`.
///
/// The Fermi momentum `k_F = arccos(|h|/2)` is derived at construction; the
/// symbol takes both values ±1 only in this phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    h: f64,
    k_f: f64,
}

impl ModelParams {
    pub fn new(h: f64) -> Result<Self> {
        if !h.is_finite() || h.abs() >= 2.0 {
            return Err(Error::FieldOutOfRange { h });
        }
        Ok(Self { h, k_f: (h.abs() / 2.0).acos() })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `k_F = arccos(|h|/2)`, in `(0, pi/2]`.
    pub fn fermi_momentum(&self) -> f64 {
        self.k_f
    }

    /// The piecewise symbol: +1 for `theta (mod 2pi)` within the filled arc
    /// `(-k_F, k_F)`, -1 on the rest of the circle. The measure-zero
    /// boundary points `theta = ±k_F` map to +1 by convention.
    pub fn symbol(&self, theta: f64) -> f64 {
        let mut t = theta % TAU;
        if t < 0.0 {
            t += TAU;
        }
        if t <= self.k_f || t >= TAU - self.k_f {
            1.0
        } else {
            -1.0
        }
    }

    /// Fourier coefficient `g_l` of the symbol, in closed form:
    /// `g_0 = (2 k_F - pi)/pi` and `g_l = 2 sin(l k_F)/(pi l)` for `l != 0`.
    ///
    /// At `h = 0` the coefficients reduce to
    /// `g_l = (1 - (-1)^l) sin(l pi/2)/(l pi)`; the even-lag zeros are
    /// structural (they drive the rank deficiencies the determinant engine
    /// must handle), so that case is evaluated exactly instead of through
    /// `sin`.
    pub fn fourier_coefficient(&self, lag: i64) -> f64 {
        if lag == 0 {
            return (2.0 * self.k_f - PI) / PI;
        }
        if self.h == 0.0 {
            let a = lag.unsigned_abs();
            if a.is_multiple_of(2) {
                return 0.0;
            }
            let sign = if a % 4 == 1 { 1.0 } else { -1.0 };
            return 2.0 * sign / (PI * a as f64);
        }
        let l = lag as f64;
        2.0 * (l * self.k_f).sin() / (PI * l)
    }
}

/// Cached Fourier coefficients `g_l` for `|l| <= max_lag`.
///
/// Only non-negative lags are stored; `g_l = g_{-l}` holds exactly because
/// the closed form is manifestly even.
#[derive(Clone, Debug)]
pub struct FourierTable {
    params: ModelParams,
    values: Vec<f64>,
}

impl FourierTable {
    pub fn new(params: ModelParams, max_lag: usize) -> Self {
        let values = (0..=max_lag as i64).map(|l| params.fourier_coefficient(l)).collect();
        Self { params, values }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, lag: i64) -> Result<f64> {
        self.values
            .get(lag.unsigned_abs() as usize)
            .copied()
            .ok_or(Error::LagOutOfRange { lag, max_lag: self.max_lag() })
    }

    /// Hot-path lookup; the caller has already validated the range.
    #[inline]
    pub(crate) fn lag(&self, lag: i64) -> f64 {
        self.values[lag.unsigned_abs() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(h: f64) -> ModelParams {
        ModelParams::new(h).unwrap()
    }

    #[test]
    fn rejects_fields_outside_critical_phase() {
        assert!(matches!(ModelParams::new(2.0), Err(Error::FieldOutOfRange { .. })));
        assert!(matches!(ModelParams::new(-3.1), Err(Error::FieldOutOfRange { .. })));
        assert!(matches!(ModelParams::new(f64::NAN), Err(Error::FieldOutOfRange { .. })));
        assert!(ModelParams::new(1.999).is_ok());
    }

    #[test]
    fn fermi_momentum_is_half_pi_at_zero_field() {
        assert!((params(0.0).fermi_momentum() - PI / 2.0).abs() < 1e-15);
        assert!((params(-1.0).fermi_momentum() - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symbol_values_at_zero_field() {
        let p = params(0.0);
        assert_eq!(p.symbol(0.0), 1.0);
        assert_eq!(p.symbol(PI), -1.0);
        assert_eq!(p.symbol(TAU), 1.0);
        assert_eq!(p.symbol(-0.3), 1.0);
        // boundary convention: theta = ±k_F maps to +1
        assert_eq!(p.symbol(p.fermi_momentum()), 1.0);
        assert_eq!(p.symbol(-p.fermi_momentum()), 1.0);
        assert_eq!(p.symbol(p.fermi_momentum() + 1e-12), -1.0);
    }

    #[test]
    fn zero_field_coefficients_match_closed_form() {
        let p = params(0.0);
        assert_eq!(p.fourier_coefficient(0), 0.0);
        assert!((p.fourier_coefficient(1) - 2.0 / PI).abs() < 1e-16);
        assert!(p.fourier_coefficient(2).abs() < 1e-16);
        assert!((p.fourier_coefficient(3) - (-2.0 / (3.0 * PI))).abs() < 1e-16);
    }

    #[test]
    fn coefficients_are_even_and_decay() {
        for &h in &[0.0, 0.5, 1.0, 1.9] {
            let p = params(h);
            for l in 1..=64i64 {
                assert_eq!(p.fourier_coefficient(l), p.fourier_coefficient(-l));
                assert!(p.fourier_coefficient(l).abs() <= 2.0 / (PI * l as f64) + 1e-15);
            }
        }
    }

    #[test]
    fn table_agrees_with_coefficients() {
        let p = params(0.5);
        let t = FourierTable::new(p, 16);
        assert_eq!(t.max_lag(), 16);
        for l in -16..=16 {
            assert_eq!(t.get(l).unwrap(), p.fourier_coefficient(l));
        }
        assert!(matches!(t.get(17), Err(Error::LagOutOfRange { .. })));
        assert!(matches!(t.get(-17), Err(Error::LagOutOfRange { .. })));
    }

    #[test]
    fn zero_lag_table() {
        let t = FourierTable::new(params(0.0), 0);
        assert_eq!(t.get(0).unwrap(), 0.0);
        assert!(t.get(1).is_err());
    }
}
