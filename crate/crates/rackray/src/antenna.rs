//! Dipole-like antenna model.
//!
//! The pattern is `G0 * |sin(theta)|^n` about the dipole axis, with `n`
//! chosen so the E-plane half-power beamwidth matches the configured
//! value (n = 4.82 for 60 degrees). The pattern is azimuthally symmetric
//! and has nulls along the axis. Polarization is the axis component
//! transverse to the propagation direction.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::Vec3;

pub const DEFAULT_BORESIGHT_GAIN_DBI: f64 = 3.0;
pub const DEFAULT_E_PLANE_HPBW_DEG: f64 = 60.0;
pub const DEFAULT_TX_POWER_DBM: f64 = 0.0;
pub const DEFAULT_SENSITIVITY_DBM: f64 = -106.0;

#[derive(Debug, Error, PartialEq)]
pub enum AntennaError {
    #[error("direction lies in the antenna pattern null; polarization undefined")]
    PatternNull,
    #[error("unknown polarization {0:?} (expected vertical, horizontal-x or horizontal-y)")]
    UnknownPolarization(String),
}

/// Named antenna orientations used by the scenario presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Vertical,
    HorizontalX,
    HorizontalY,
}

impl Polarization {
    /// Dipole axis for this polarization.
    pub fn axis(self) -> Vec3 {
        match self {
            Polarization::Vertical => Vec3::new(0.0, 0.0, 1.0),
            Polarization::HorizontalX => Vec3::new(1.0, 0.0, 0.0),
            Polarization::HorizontalY => Vec3::new(0.0, 1.0, 0.0),
        }
    }
}

impl FromStr for Polarization {
    type Err = AntennaError;
    fn from_str(s: &str) -> Result<Self, AntennaError> {
        match s {
            "vertical" => Ok(Polarization::Vertical),
            "horizontal-x" => Ok(Polarization::HorizontalX),
            "horizontal-y" => Ok(Polarization::HorizontalY),
            other => Err(AntennaError::UnknownPolarization(other.to_string())),
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::Vertical => "vertical",
            Polarization::HorizontalX => "horizontal-x",
            Polarization::HorizontalY => "horizontal-y",
        })
    }
}

/// Antenna terminal; the same model serves TX and RX.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Antenna {
    pub position: Vec3,
    /// Dipole axis, unit; defines the polarization.
    pub axis: Vec3,
    pub boresight_gain_dbi: f64,
    pub e_plane_hpbw_deg: f64,
    pub tx_power_dbm: f64,
    pub sensitivity_dbm: f64,
}

impl Antenna {
    pub fn new(position: Vec3, axis: Vec3) -> Self {
        let axis = axis.normalized();
        Antenna {
            position,
            axis,
            boresight_gain_dbi: DEFAULT_BORESIGHT_GAIN_DBI,
            e_plane_hpbw_deg: DEFAULT_E_PLANE_HPBW_DEG,
            tx_power_dbm: DEFAULT_TX_POWER_DBM,
            sensitivity_dbm: DEFAULT_SENSITIVITY_DBM,
        }
    }

    pub fn with_polarization(position: Vec3, pol: Polarization) -> Self {
        Antenna::new(position, pol.axis())
    }

    /// Pattern exponent n solving sin(90deg - hpbw/2)^n = 1/2.
    pub fn pattern_exponent(&self) -> f64 {
        let half = (self.e_plane_hpbw_deg / 2.0).to_radians();
        0.5f64.ln() / half.cos().ln()
    }

    /// Linear power gain toward a unit direction.
    pub fn pattern_gain(&self, direction: Vec3) -> f64 {
        debug_assert!(direction.is_unit(1e-9));
        let cos = self.axis.dot(direction).clamp(-1.0, 1.0);
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        let g0 = crate::from_db(self.boresight_gain_dbi);
        if sin == 0.0 {
            return 0.0;
        }
        g0 * sin.powf(self.pattern_exponent())
    }

    /// Unit polarization vector for a departure/arrival direction: the
    /// axis component transverse to propagation. Undefined (error) along
    /// the pattern null.
    pub fn polarization_vector(&self, direction: Vec3) -> Result<Vec3, AntennaError> {
        debug_assert!(direction.is_unit(1e-9));
        if self.axis.cross(direction).norm() < 1e-9 {
            return Err(AntennaError::PatternNull);
        }
        let transverse = self.axis - direction * self.axis.dot(direction);
        Ok(transverse.normalized())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vertical() -> Antenna {
        Antenna::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0))
    }

    #[test]
    fn boresight_gain_is_3_dbi() {
        let g = vertical().pattern_gain(Vec3::new(1.0, 0.0, 0.0));
        assert!((g - 10f64.powf(0.3)).abs() < 1e-12);
    }

    #[test]
    fn axis_direction_is_null() {
        assert_eq!(vertical().pattern_gain(Vec3::new(0.0, 0.0, 1.0)), 0.0);
        assert_eq!(vertical().pattern_gain(Vec3::new(0.0, 0.0, -1.0)), 0.0);
    }

    #[test]
    fn hpbw_definition_halves_power() {
        let ant = vertical();
        assert!((ant.pattern_exponent() - 4.8188).abs() < 1e-3);
        // 60 degrees from the axis = 30 degrees off boresight: half power.
        let d = Vec3::new(60f64.to_radians().sin(), 0.0, 60f64.to_radians().cos());
        let g = ant.pattern_gain(d);
        assert!((g - 10f64.powf(0.3) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn polarization_broadside_is_axis() {
        let p = vertical().polarization_vector(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((p - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn polarization_oblique_projection() {
        let d = Vec3::new(1.0, 0.0, 1.0).normalized();
        let p = vertical().polarization_vector(d).unwrap();
        let expect = Vec3::new(-1.0, 0.0, 1.0).normalized();
        assert!((p - expect).norm() < 1e-12);
    }

    #[test]
    fn polarization_along_axis_errors() {
        assert_eq!(
            vertical().polarization_vector(Vec3::new(0.0, 0.0, 1.0)),
            Err(AntennaError::PatternNull)
        );
    }

    #[test]
    fn preset_axes() {
        assert_eq!(Polarization::Vertical.axis(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(Polarization::HorizontalX.axis(), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(Polarization::HorizontalY.axis(), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!("vertical".parse::<Polarization>().unwrap(), Polarization::Vertical);
        assert_eq!("horizontal-x".parse::<Polarization>().unwrap(), Polarization::HorizontalX);
        assert_eq!("horizontal-y".parse::<Polarization>().unwrap(), Polarization::HorizontalY);
        assert!("diagonal".parse::<Polarization>().is_err());
    }

    proptest! {
        #[test]
        fn gain_depends_only_on_axis_angle(phi in 0.0f64..std::f64::consts::TAU, theta in 0.01f64..3.13) {
            let ant = vertical();
            let d0 = Vec3::new(theta.sin(), 0.0, theta.cos());
            let d1 = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            prop_assert!((ant.pattern_gain(d0) - ant.pattern_gain(d1)).abs() < 1e-12);
            // Never exceeds boresight.
            prop_assert!(ant.pattern_gain(d1) <= 10f64.powf(0.3) + 1e-9);
        }

        #[test]
        fn polarization_is_unit_and_transverse(theta in 0.05f64..3.09, phi in 0.0f64..std::f64::consts::TAU) {
            let ant = vertical();
            let d = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let p = ant.polarization_vector(d).unwrap();
            prop_assert!(p.is_unit(1e-12));
            prop_assert!(p.dot(d).abs() < 1e-12);
        }
    }
}
