//! Complex field evaluation: per-path voltage transfer values with full
//! polarization tracking, coherent summation per frequency, and band
//! averaging into received power.
//!
//! The per-path value at one frequency is
//!
//! ```text
//! sqrt(Gtx * Grx) * spreading * exp(-j k L) * (interaction chain, RX projection)
//! ```
//!
//! with `spreading = lambda / (4 pi L)` for reflection chains and the
//! edge-diffraction spreading for single-diffraction paths. The field is
//! carried through each reflection in the ray-fixed perpendicular/parallel
//! basis of the local plane of incidence, and through a diffraction in the
//! edge-fixed basis with the soft/hard wedge coefficients.

pub mod utd;

use num_complex::Complex64;
use thiserror::Error;

use crate::antenna::Antenna;
use crate::geom::Vec3;
use crate::scene::Scene;
use crate::tracer::{edge_geometry, EdgeGeometry, InteractionKind, PropagationPath};
use crate::{materials, to_db, wavelength, SPEED_OF_LIGHT};

pub use utd::{transition_function, RIGHT_ANGLE_WEDGE_N};

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("frequency must be positive, got {0}")]
    InvalidFrequency(f64),
    #[error("zero-length path")]
    ZeroLengthPath,
    #[error("directions violate the Keller cone condition by {0} rad")]
    KellerConeViolation(f64),
    #[error("unknown edge id {0}")]
    UnknownEdge(u32),
    #[error("unknown surface id {0}")]
    UnknownSurface(u32),
    #[error(transparent)]
    Material(#[from] materials::MaterialError),
}

/// UWB waveform: Gaussian spectrum sampled uniformly across the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveform {
    pub center_freq: f64,
    pub bandwidth: f64,
    /// Frequency samples across the band; 1 = narrowband at the carrier.
    pub band_samples: u32,
}

impl Default for Waveform {
    fn default() -> Self {
        Waveform { center_freq: 3.994e9, bandwidth: 468e6, band_samples: 16 }
    }
}

impl Waveform {
    pub fn narrowband(center_freq: f64) -> Self {
        Waveform { center_freq, bandwidth: 0.0, band_samples: 1 }
    }

    /// Sample frequencies with Gaussian spectral weights. The Gaussian's
    /// -10 dB full width equals the configured bandwidth.
    pub fn band_frequencies(&self) -> Vec<(f64, f64)> {
        assert!(self.band_samples >= 1 && self.bandwidth >= 0.0 && self.center_freq > 0.0);
        if self.band_samples == 1 || self.bandwidth == 0.0 {
            return vec![(self.center_freq, 1.0)];
        }
        let k = self.band_samples as usize;
        let sigma = self.bandwidth / (2.0 * (2.0 * 10f64.ln()).sqrt());
        (0..k)
            .map(|i| {
                let f = self.center_freq - self.bandwidth / 2.0
                    + self.bandwidth * i as f64 / (k - 1) as f64;
                let d = f - self.center_freq;
                (f, (-d * d / (2.0 * sigma * sigma)).exp())
            })
            .collect()
    }
}

/// Per-path complex voltage transfer value at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFieldGain {
    pub value: Complex64,
    /// Propagation delay, seconds.
    pub delay: f64,
}

/// Link budget thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub sensitivity_dbm: f64,
    pub max_safe_path_loss_db: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        LinkBudget { tx_power_dbm: 0.0, sensitivity_dbm: -106.0, max_safe_path_loss_db: 85.0 }
    }
}

/// Complex-valued 3-vector for polarization states.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CVec3 {
    x: Complex64,
    y: Complex64,
    z: Complex64,
}

impl CVec3 {
    fn from_real(v: Vec3) -> Self {
        CVec3 { x: v.x.into(), y: v.y.into(), z: v.z.into() }
    }

    fn dot_real(self, v: Vec3) -> Complex64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    fn scaled_real(v: Vec3, s: Complex64) -> Self {
        CVec3 { x: s * v.x, y: s * v.y, z: s * v.z }
    }

    fn add(self, o: CVec3) -> Self {
        CVec3 { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }

    fn scale(self, s: Complex64) -> Self {
        CVec3 { x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

/// Geometry handed to the wedge-coefficient evaluation: the edge and the
/// two leg lengths.
#[derive(Debug, Clone, Copy)]
pub struct DiffractionGeometry {
    pub edge: EdgeGeometry,
    pub s_incident: f64,
    pub s_diffracted: f64,
}

/// Soft and hard UTD coefficients for a right-angle PEC wedge.
///
/// `incident_dir` points toward the edge point, `diffracted_dir` away
/// from it; both must satisfy the Keller cone condition.
pub fn utd_coefficients(
    geom: &DiffractionGeometry,
    incident_dir: Vec3,
    diffracted_dir: Vec3,
    frequency: f64,
) -> Result<(Complex64, Complex64), FieldError> {
    if frequency <= 0.0 {
        return Err(FieldError::InvalidFrequency(frequency));
    }
    let e = geom.edge.dir;
    let cone = (incident_dir.dot(e) - diffracted_dir.dot(e)).abs();
    if cone > 1e-6 {
        return Err(FieldError::KellerConeViolation(cone));
    }
    let cos_beta = incident_dir.dot(e).clamp(-1.0, 1.0);
    let sin_beta = (1.0 - cos_beta * cos_beta).sqrt();
    if sin_beta < 1e-9 {
        return Err(FieldError::KellerConeViolation(1.0));
    }

    let n = RIGHT_ANGLE_WEDGE_N;
    let phi_prime = face_angle(&geom.edge, -incident_dir);
    let phi = face_angle(&geom.edge, diffracted_dir);
    let k = 2.0 * std::f64::consts::PI / wavelength(frequency);
    let l_param = geom.s_incident * geom.s_diffracted / (geom.s_incident + geom.s_diffracted)
        * sin_beta
        * sin_beta;
    Ok(utd::wedge_coefficients(n, k, l_param, phi, phi_prime, sin_beta))
}

/// Angle of a direction from the o-face, measured through the wedge
/// exterior, in [0, n pi].
fn face_angle(edge: &EdgeGeometry, dir: Vec3) -> f64 {
    let t = edge.face_tangents[0];
    let n = edge.face_normals[0];
    let transverse = dir - edge.dir * dir.dot(edge.dir);
    let mut phi = transverse.dot(n).atan2(transverse.dot(t));
    if phi < 0.0 {
        phi += std::f64::consts::TAU;
    }
    phi.clamp(0.0, RIGHT_ANGLE_WEDGE_N * std::f64::consts::PI)
}

/// Complex voltage transfer of one path at one frequency.
///
/// A terminal direction in an antenna pattern null gives a zero value,
/// not an error.
pub fn path_complex_gain(
    path: &PropagationPath,
    tx: &Antenna,
    rx: &Antenna,
    frequency: f64,
    scene: &Scene,
) -> Result<ComplexFieldGain, FieldError> {
    if frequency <= 0.0 {
        return Err(FieldError::InvalidFrequency(frequency));
    }
    if path.total_length <= crate::tracer::MIN_SEGMENT {
        return Err(FieldError::ZeroLengthPath);
    }
    let lambda = wavelength(frequency);
    let k = 2.0 * std::f64::consts::PI / lambda;
    let length = path.total_length;
    let delay = length / SPEED_OF_LIGHT;

    let zero = || Ok(ComplexFieldGain { value: Complex64::new(0.0, 0.0), delay });

    let launch_dir = path.launch_dir();
    let arrival_dir = path.arrival_dir();
    let g_tx = tx.pattern_gain(launch_dir);
    let g_rx = rx.pattern_gain(arrival_dir);
    if g_tx == 0.0 || g_rx == 0.0 {
        return zero();
    }
    let Ok(p_tx) = tx.polarization_vector(launch_dir) else {
        return zero();
    };
    let Ok(p_rx) = rx.polarization_vector(arrival_dir) else {
        return zero();
    };

    let mut field = CVec3::from_real(p_tx);
    // Extra amplitude factor replacing 1/L spreading for diffraction paths.
    let mut diffraction_spread: Option<f64> = None;

    let points: Vec<Vec3> = path.points().collect();
    for (i, interaction) in path.interactions.iter().enumerate() {
        match interaction.kind {
            InteractionKind::Launch | InteractionKind::Arrival => {}
            InteractionKind::Reflection { surface_id, normal } => {
                let d_in = (points[i] - points[i - 1]).normalized();
                let d_out = (points[i + 1] - points[i]).normalized();
                let cos_inc = (-d_in.dot(normal)).clamp(-1.0, 1.0);
                // Numerical slack: treat near-grazing as just under pi/2.
                let theta = cos_inc.max(1e-12).acos().min(std::f64::consts::FRAC_PI_2 - 1e-12);
                let material = scene
                    .material_for_surface(surface_id)
                    .ok_or(FieldError::UnknownSurface(surface_id))?;
                let coeffs = materials::effective_reflection(material, theta, frequency)?;

                let cross = d_in.cross(normal);
                if cross.norm() < 1e-9 {
                    // Normal incidence: the ray-fixed decomposition is
                    // degenerate and both components scale by r_perp.
                    field = field.scale(coeffs.r_perp);
                } else {
                    let e_perp = cross.normalized();
                    let e_par_in = e_perp.cross(d_in);
                    let e_par_out = e_perp.cross(d_out);
                    let a_perp = field.dot_real(e_perp) * coeffs.r_perp;
                    let a_par = field.dot_real(e_par_in) * coeffs.r_par;
                    field = CVec3::scaled_real(e_perp, a_perp)
                        .add(CVec3::scaled_real(e_par_out, a_par));
                }
            }
            InteractionKind::Diffraction { edge_id, .. } => {
                let edge =
                    edge_geometry(scene, edge_id).ok_or(FieldError::UnknownEdge(edge_id))?;
                let d_in = (points[i] - points[i - 1]).normalized();
                let d_out = (points[i + 1] - points[i]).normalized();
                let s_inc = (points[i] - points[i - 1]).norm();
                let s_dif = (points[i + 1] - points[i]).norm();
                let geom = DiffractionGeometry { edge, s_incident: s_inc, s_diffracted: s_dif };
                let (d_soft, d_hard) = utd_coefficients(&geom, d_in, d_out, frequency)?;

                // Edge-fixed ray bases.
                let cross_in = edge.dir.cross(d_in);
                let cross_out = edge.dir.cross(d_out);
                if cross_in.norm() < 1e-9 || cross_out.norm() < 1e-9 {
                    return zero();
                }
                let phi_hat_in = -cross_in.normalized();
                let beta_hat_in = phi_hat_in.cross(d_in);
                let phi_hat_out = cross_out.normalized();
                let beta_hat_out = phi_hat_out.cross(d_out);

                let a_soft = field.dot_real(beta_hat_in) * d_soft;
                let a_hard = field.dot_real(phi_hat_in) * d_hard;
                field = CVec3::scaled_real(beta_hat_out, a_soft)
                    .add(CVec3::scaled_real(phi_hat_out, a_hard))
                    .scale(Complex64::new(-1.0, 0.0));

                // Spherical-wave edge spreading, replacing the 1/L of a
                // pure reflection chain.
                diffraction_spread =
                    Some((1.0 / (s_inc * s_dif * (s_inc + s_dif))).sqrt());
            }
        }
    }

    let projection = field.dot_real(p_rx);
    let spreading = match diffraction_spread {
        None => lambda / (4.0 * std::f64::consts::PI * length),
        Some(s) => lambda / (4.0 * std::f64::consts::PI) * s,
    };
    let phase = Complex64::from_polar(1.0, -k * length);
    let value = (g_tx * g_rx).sqrt() * spreading * phase * projection;
    Ok(ComplexFieldGain { value, delay })
}

/// Received power in dBm from a coherent field sum at the TX power.
/// A zero sum maps to the negative-infinity marker.
pub fn power_dbm(tx_power_dbm: f64, field_sum: Complex64) -> f64 {
    tx_power_dbm + to_db(field_sum.norm_sqr())
}

fn field_sum(
    paths: &[PropagationPath],
    tx: &Antenna,
    rx: &Antenna,
    frequency: f64,
    scene: &Scene,
) -> Complex64 {
    paths
        .iter()
        .map(|p| {
            path_complex_gain(p, tx, rx, frequency, scene)
                .expect("tracer paths are field-evaluable")
                .value
        })
        .sum()
}

/// Coherent received power at a single frequency, dBm. Paths must be
/// deduplicated and canonically sorted. Empty list gives the
/// negative-infinity marker.
pub fn coherent_receive_power(
    paths: &[PropagationPath],
    tx: &Antenna,
    rx: &Antenna,
    frequency: f64,
    scene: &Scene,
) -> f64 {
    power_dbm(tx.tx_power_dbm, field_sum(paths, tx, rx, frequency, scene))
}

/// Gaussian-weighted average of the coherent receive power across the
/// waveform band, dBm. One band sample reduces exactly to
/// [`coherent_receive_power`] at the carrier.
pub fn band_averaged_power(
    paths: &[PropagationPath],
    tx: &Antenna,
    rx: &Antenna,
    waveform: &Waveform,
    scene: &Scene,
) -> f64 {
    let samples = waveform.band_frequencies();
    if samples.len() == 1 {
        return coherent_receive_power(paths, tx, rx, samples[0].0, scene);
    }
    let mut acc = 0.0;
    let mut total_weight = 0.0;
    for (f, w) in samples {
        let sum = field_sum(paths, tx, rx, f, scene);
        acc += w * sum.norm_sqr();
        total_weight += w;
    }
    power_dbm(tx.tx_power_dbm, Complex64::new((acc / total_weight).sqrt(), 0.0))
}

/// Path loss in dB and the safe-communication verdict.
pub fn path_loss(received_dbm: f64, budget: &LinkBudget) -> (f64, bool) {
    let pl = budget.tx_power_dbm - received_dbm;
    let safe = pl <= budget.max_safe_path_loss_db && received_dbm >= budget.sensitivity_dbm;
    (pl, safe)
}

/// Free-space path loss in dB at a distance, for oracles and link math.
pub fn free_space_path_loss_db(distance: f64, frequency: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * distance / wavelength(frequency)).log10()
}
