//! Redshift of light emitted by a string whose scale grows linearly in time.

use crate::error::{Error, Result};

/// `z = sqrt(t_obsv / t_emit) - 1`.
pub fn redshift(t_emit: f64, t_obsv: f64) -> Result<f64> {
    if !(t_emit > 0.0 && t_obsv >= t_emit && t_obsv.is_finite()) {
        return Err(Error::NonpositiveTime { t_emit, t_obsv });
    }
    Ok((t_obsv / t_emit).sqrt() - 1.0)
}

/// Lower bound on the emission time, `Δt / ((1 + p z)² - 1)`, for light
/// observed at redshift `z` from a source whose own redshift is at most a
/// fraction `p` of it.
pub fn emission_bound(dt: f64, p: f64, z_obsv: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} outside (0, 1)")));
    }
    if !(z_obsv > 0.0 && z_obsv.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "z = {z_obsv} must be positive"
        )));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt = {dt} must be non-negative"
        )));
    }
    Ok(dt / ((1.0 + p * z_obsv).powi(2) - 1.0))
}

/// Linearized expansion rate `H = z / Δt`.
pub fn hubble_rate(dt: f64, z: f64) -> f64 {
    z / dt
}

/// The small-`z` form of [`emission_bound`], `1 / (2 p H)`.
pub fn small_z_bound(p: f64, h: f64) -> f64 {
    1.0 / (2.0 * p * h)
}
