//! Polarization-resolved reflection coefficients.
//!
//! Flat-surface Fresnel coefficients for PEC and lossy dielectric
//! surfaces, and the coherent roughness correction
//!
//! ```text
//! R = R0 * exp(-8 (pi * dh * cos(theta_i) / lambda0)^2)
//! ```
//!
//! applied as a real scaling of the specular component only.
//!
//! Conventions: time dependence `exp(+j w t)`, lossy permittivity
//! `eps = eps' - j eps''`, and ray-fixed polarization bases, under which a
//! PEC surface has `r_perp = -1` and `r_par = +1` at every angle. With
//! these bases the parallel reflected basis vector flips through normal
//! incidence, so for a dielectric `r_par(0) = -r_perp(0)` even though the
//! physical reflection at normal incidence is isotropic.

use num_complex::Complex64;
use thiserror::Error;

use crate::scene::{Material, MaterialKind};
use crate::{wavelength, VACUUM_PERMITTIVITY};

#[derive(Debug, Error, PartialEq)]
pub enum MaterialError {
    #[error("incidence angle {0} rad is outside [0, pi/2)")]
    InvalidAngle(f64),
    #[error("frequency must be positive, got {0}")]
    InvalidFrequency(f64),
    #[error("invalid roughness context: {0}")]
    InvalidContext(&'static str),
}

/// Flat or roughness-scaled reflection coefficients at one incidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoeffs {
    /// E-field perpendicular to the plane of incidence (soft).
    pub r_perp: Complex64,
    /// E-field parallel to the plane of incidence (hard).
    pub r_par: Complex64,
    /// Angle from the surface normal, radians.
    pub theta_i: f64,
    pub frequency: f64,
}

/// Inputs of the roughness attenuation factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughnessContext {
    /// Standard deviation of surface height, m.
    pub dh: f64,
    /// Free-space wavelength, m.
    pub lambda0: f64,
    /// Angle from the surface normal, radians.
    pub theta_i: f64,
}

impl RoughnessContext {
    pub fn new(dh: f64, lambda0: f64, theta_i: f64) -> Result<Self, MaterialError> {
        if dh < 0.0 {
            return Err(MaterialError::InvalidContext("dh must be >= 0"));
        }
        if lambda0 <= 0.0 {
            return Err(MaterialError::InvalidContext("lambda0 must be > 0"));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_i) {
            return Err(MaterialError::InvalidAngle(theta_i));
        }
        Ok(RoughnessContext { dh, lambda0, theta_i })
    }
}

/// Complex relative permittivity of a lossy dielectric at a frequency.
pub fn complex_permittivity(eps_r: f64, sigma: f64, frequency: f64) -> Complex64 {
    let eps_loss = sigma / (2.0 * std::f64::consts::PI * frequency * VACUUM_PERMITTIVITY);
    Complex64::new(eps_r, -eps_loss)
}

/// Flat-surface Fresnel reflection coefficients.
pub fn fresnel_coefficients(
    material: &Material,
    theta_i: f64,
    frequency: f64,
) -> Result<ReflectionCoeffs, MaterialError> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta_i) {
        return Err(MaterialError::InvalidAngle(theta_i));
    }
    if frequency <= 0.0 {
        return Err(MaterialError::InvalidFrequency(frequency));
    }
    let (r_perp, r_par) = match material.kind {
        MaterialKind::Pec => (Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)),
        MaterialKind::Dielectric { eps_r, sigma } => {
            let eps = complex_permittivity(eps_r, sigma, frequency);
            let cos_i = theta_i.cos();
            let sin2 = theta_i.sin().powi(2);
            let root = (eps - sin2).sqrt();
            let r_perp = (cos_i - root) / (cos_i + root);
            let r_par = (eps * cos_i - root) / (eps * cos_i + root);
            (r_perp, r_par)
        }
    };
    Ok(ReflectionCoeffs { r_perp, r_par, theta_i, frequency })
}

/// Coherent roughness attenuation, in (0, 1].
pub fn roughness_factor(ctx: &RoughnessContext) -> f64 {
    let arg = std::f64::consts::PI * ctx.dh * ctx.theta_i.cos() / ctx.lambda0;
    (-8.0 * arg * arg).exp()
}

/// Flat coefficients scaled by the material's roughness. With a flat
/// material (`roughness_dh == 0`) this is bit-identical to
/// [`fresnel_coefficients`].
pub fn effective_reflection(
    material: &Material,
    theta_i: f64,
    frequency: f64,
) -> Result<ReflectionCoeffs, MaterialError> {
    let mut coeffs = fresnel_coefficients(material, theta_i, frequency)?;
    if material.roughness_dh > 0.0 {
        let ctx = RoughnessContext::new(material.roughness_dh, wavelength(frequency), theta_i)?;
        let factor = roughness_factor(&ctx);
        coeffs.r_perp *= factor;
        coeffs.r_par *= factor;
    }
    Ok(coeffs)
}
