//! Deterministic ray tracer for ultrawideband radio coverage in rack
//! warehouses.
//!
//! The scene is a field of axis-aligned metal rack boxes over a concrete
//! floor. Propagation paths between a transmitter and a grid of receiver
//! points are enumerated with a shooting-and-bouncing-ray sweep whose
//! candidate reflection sequences are then refined to exact specular
//! geometry with the image method, plus single edge diffraction. Complex
//! path gains with full polarization tracking are summed coherently per
//! frequency and averaged over the signal band into received power and
//! path loss maps.
//!
//! Everything is deterministic: the launch lattice is a geodesic sphere,
//! path lists are canonically ordered, and grid sweeps produce identical
//! bytes regardless of worker count.

pub mod antenna;
pub mod field;
pub mod geom;
pub mod materials;
pub mod runner;
pub mod scene;
pub mod tracer;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Free-space wavelength for a frequency in Hz.
pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

/// Linear power ratio to decibels; zero or negative maps to `-inf`.
pub fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        10.0 * ratio.log10()
    } else {
        f64::NEG_INFINITY
    }
}

/// Decibels to linear power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
