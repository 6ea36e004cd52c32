//! Uniform-theory-of-diffraction coefficients for a PEC wedge.
//!
//! Four-term cotangent form with the Fresnel transition function, wedge
//! parameter `n` = exterior angle / pi (1.5 for the right-angle box edges
//! used here). The transition function is evaluated through the classic
//! rational approximation of the Fresnel integrals, accurate to a few
//! parts in a thousand, which keeps the total field continuous across
//! shadow boundaries to well under the percent level.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

/// Wedge parameter for a 90-degree (box) edge: exterior angle 270 degrees.
pub const RIGHT_ANGLE_WEDGE_N: f64 = 1.5;

/// Auxiliary Fresnel functions f and g (Abramowitz & Stegun 7.3.32-33).
fn fresnel_fg(v: f64) -> (f64, f64) {
    let f = (1.0 + 0.926 * v) / (2.0 + 1.792 * v + 3.104 * v * v);
    let g = 1.0 / (2.0 + 4.142 * v + 3.492 * v * v + 6.670 * v * v * v);
    (f, g)
}

/// Fresnel transition function F(x) = 2j sqrt(x) e^{jx} Int_{sqrt(x)}^inf e^{-j t^2} dt.
///
/// F(0) = 0, F(x) -> 1 as x -> infinity; |F| <= 1 up to the approximation
/// error of the underlying Fresnel-integral fit.
pub fn transition_function(x: f64) -> Complex64 {
    debug_assert!(x >= 0.0, "transition function argument must be non-negative");
    if x <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let v = (2.0 * x / PI).sqrt();
    let (f, g) = fresnel_fg(v);
    // F(x) = 2 sqrt(pi x / 2) (f + j g): the oscillatory e^{jx} factors of
    // the definition cancel exactly against the Fresnel-integral phases
    // when written in terms of the auxiliary functions.
    let amp = 2.0 * (PI * x / 2.0).sqrt();
    amp * Complex64::new(f, g)
}

/// `a(beta)` argument of the transition function: `2 cos^2((2 n pi N - beta)/2)`
/// with N the integer most nearly satisfying `2 n pi N - beta = sign * pi`.
fn a_param(n: f64, beta: f64, sign: f64) -> f64 {
    let big_n = ((beta + sign * PI) / (2.0 * n * PI)).round();
    let c = ((2.0 * n * PI * big_n - beta) / 2.0).cos();
    2.0 * c * c
}

/// One `cot * F` term with the analytic limit across its singularity.
fn cot_times_f(cot_arg: f64, x: f64, n: f64, k_l: f64) -> Complex64 {
    let delta = cot_arg - PI * (cot_arg / PI).round();
    if delta.abs() < 1e-7 {
        // cot((pi +- beta)/2n) diverges exactly where a -> 0; the product
        // tends to n sqrt(2 pi k L) e^{j pi/4} with the sign of the
        // boundary crossing. This jump is what cancels the geometric-optics
        // discontinuity.
        let mag = n * (2.0 * PI * k_l).sqrt();
        return Complex64::from_polar(mag, FRAC_PI_4) * delta.signum();
    }
    let cot = cot_arg.cos() / cot_arg.sin();
    cot * transition_function(x)
}

/// Soft and hard diffraction coefficients of a PEC wedge.
///
/// * `n` - wedge parameter (exterior angle / pi)
/// * `k` - wavenumber, rad/m
/// * `l_param` - distance parameter `s s' sin^2(beta0) / (s + s')`
/// * `phi`, `phi_prime` - diffraction/incidence angles from the o-face,
///   both in `[0, n pi]`
/// * `sin_beta0` - sine of the angle between the incident ray and the edge
pub fn wedge_coefficients(
    n: f64,
    k: f64,
    l_param: f64,
    phi: f64,
    phi_prime: f64,
    sin_beta0: f64,
) -> (Complex64, Complex64) {
    let k_l = k * l_param;
    let term = |beta: f64| -> Complex64 {
        let plus = cot_times_f((PI + beta) / (2.0 * n), k_l * a_param(n, beta, 1.0), n, k_l);
        let minus = cot_times_f((PI - beta) / (2.0 * n), k_l * a_param(n, beta, -1.0), n, k_l);
        plus + minus
    };
    let incident = term(phi - phi_prime);
    let reflected = term(phi + phi_prime);

    let prefactor = -Complex64::from_polar(1.0, -FRAC_PI_4)
        / (2.0 * n * (2.0 * PI * k).sqrt() * sin_beta0);
    let d_soft = prefactor * (incident - reflected);
    let d_hard = prefactor * (incident + reflected);
    (d_soft, d_hard)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transition_function_limits() {
        assert_eq!(transition_function(0.0), Complex64::new(0.0, 0.0));
        // Small argument: F ~ (sqrt(pi x) - 2x e^{j pi/4}) e^{j(pi/4 + x)}.
        let x = 1e-4;
        let f = transition_function(x);
        let expect = (Complex64::new((PI * x).sqrt(), 0.0)
            - 2.0 * x * Complex64::from_polar(1.0, FRAC_PI_4))
            * Complex64::from_polar(1.0, FRAC_PI_4 + x);
        assert!((f - expect).norm() < 2e-3 * expect.norm() + 2e-6, "{f} vs {expect}");
        // Large argument: F -> 1.
        let f = transition_function(50.0);
        assert!((f - Complex64::new(1.0, 0.0)).norm() < 0.1, "F(50) = {f}");
        // Magnitude stays bounded.
        for i in 1..200 {
            let x = i as f64 * 0.05;
            assert!(transition_function(x).norm() < 1.1);
        }
    }

    #[test]
    fn soft_coefficient_vanishes_at_grazing_observation() {
        // Observation along the o-face (phi = 0): tangential E must vanish,
        // so the soft coefficient cancels exactly.
        let k = 2.0 * PI / 0.0750607;
        let (d_s, d_h) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, 1.0, 0.0, 0.8, 1.0);
        assert_eq!(d_s, Complex64::new(0.0, 0.0));
        assert!(d_h.norm() > 0.0);
    }

    #[test]
    fn coefficients_are_reciprocal() {
        let k = 2.0 * PI / 0.0750607;
        for (phi, phi_prime) in [(0.3, 2.0), (1.1, 3.9), (2.2, 0.7)] {
            let (s1, h1) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, 0.7, phi, phi_prime, 0.9);
            let (s2, h2) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, 0.7, phi_prime, phi, 0.9);
            assert!((s1 - s2).norm() < 1e-12 * (1.0 + s1.norm()));
            assert!((h1 - h2).norm() < 1e-12 * (1.0 + h1.norm()));
        }
    }

    #[test]
    fn deep_lit_region_coefficients_are_small() {
        let k = 2.0 * PI / 0.0750607;
        // Away from both boundaries (ISB at phi' + pi = 4.04, RSB at
        // pi - phi' = 2.24 for phi' = 0.9).
        let (d_s, d_h) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, 1.0, 3.2, 0.9, 1.0);
        // With unit leg lengths the diffracted-to-direct amplitude ratio
        // is |D| sqrt((s + s') / (s s')); it must be a small fraction.
        for d in [d_s, d_h] {
            let ratio = d.norm() * 2f64.sqrt();
            assert!(ratio < 0.5, "diffracted/direct = {ratio}");
        }
    }

    /// Exact Sommerfeld half-plane solution, the classical benchmark: for
    /// a unit plane wave from direction phi' hitting a PEC half-plane at
    /// phi = 0, the total field is V(r, phi - phi') -/+ V(r, phi + phi')
    /// (soft/hard), with
    ///
    /// ```text
    /// V(r, psi) = e^{j pi/4}/sqrt(pi) * e^{jkr cos(psi)}
    ///             * Int_{-inf}^{sqrt(2kr) cos(psi/2)} e^{-j tau^2} d tau.
    /// ```
    ///
    /// The n = 2 wedge coefficient plus geometric optics must reproduce it
    /// everywhere, including through both transition regions, up to the
    /// Fresnel-integral approximation error.
    #[test]
    fn half_plane_total_field_matches_sommerfeld() {
        // Independent quadrature for Int_0^a e^{-j tau^2} d tau (Simpson).
        let fresnel_quad = |a: f64| -> Complex64 {
            let n = 4000usize;
            let h = a / n as f64;
            let f = |t: f64| Complex64::from_polar(1.0, -t * t);
            let mut acc = f(0.0) + f(a);
            for i in 1..n {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * f(i as f64 * h);
            }
            acc * h / 3.0
        };
        let half_line = Complex64::from_polar(PI.sqrt() / 2.0, -FRAC_PI_4);
        let v = |kr: f64, psi: f64| -> Complex64 {
            let a = (2.0 * kr).sqrt() * (psi / 2.0).cos();
            // Int_{-inf}^{a} = sqrt(pi)/2 e^{-j pi/4} + Int_0^a.
            let tail = half_line + fresnel_quad(a.abs()) * a.signum();
            Complex64::from_polar(1.0, FRAC_PI_4) / PI.sqrt()
                * Complex64::from_polar(1.0, kr * psi.cos())
                * tail
        };

        let kr = 20.0;
        let k = 1.0;
        let r = kr / k;
        let phi_prime = 0.7;
        let mut worst: f64 = 0.0;
        for i in 0..720 {
            // Offset grid so no sample lands exactly on a GO boundary.
            let phi = (i as f64 + 0.37) * (2.0 * PI) / 721.0;
            if phi <= 1e-3 || phi >= 2.0 * PI - 1e-3 {
                continue;
            }
            let exact_soft = v(kr, phi - phi_prime) - v(kr, phi + phi_prime);
            let exact_hard = v(kr, phi - phi_prime) + v(kr, phi + phi_prime);

            let incident = if phi < PI + phi_prime {
                Complex64::from_polar(1.0, kr * (phi - phi_prime).cos())
            } else {
                Complex64::new(0.0, 0.0)
            };
            let reflected = if phi < PI - phi_prime {
                Complex64::from_polar(1.0, kr * (phi + phi_prime).cos())
            } else {
                Complex64::new(0.0, 0.0)
            };
            // Plane-wave incidence: distance parameter L = r, cylindrical
            // spreading 1/sqrt(r).
            let (d_s, d_h) = wedge_coefficients(2.0, k, r, phi, phi_prime, 1.0);
            let spread = Complex64::from_polar(1.0 / r.sqrt(), -kr);
            let utd_soft = incident - reflected + d_s * spread;
            let utd_hard = incident + reflected + d_h * spread;

            for (got, exact) in [(utd_soft, exact_soft), (utd_hard, exact_hard)] {
                let err = (got - exact).norm();
                worst = worst.max(err);
                assert!(err < 0.015, "phi = {phi}: {got} vs exact {exact} (err {err})");
            }
        }
        assert!(worst > 0.0);
        println!("half-plane worst |error| vs Sommerfeld: {worst:.2e}");
    }

    #[test]
    fn jump_across_isb_matches_go_scale() {
        let k = 2.0 * PI / 0.0750607;
        let l = 0.8;
        let phi_prime = 0.7;
        let isb = phi_prime + PI;
        let eps = 1e-4;
        let (s_lit, _) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, l, isb - eps, phi_prime, 1.0);
        let (s_shadow, _) = wedge_coefficients(RIGHT_ANGLE_WEDGE_N, k, l, isb + eps, phi_prime, 1.0);
        let jump = (s_shadow - s_lit).norm();
        // The diffracted-field discontinuity equals sqrt(L) / sqrt stuff:
        // |Delta D| = sqrt(L). (Spreading then turns this into the exact
        // GO field magnitude at the boundary.)
        assert!((jump - l.sqrt()).abs() < 0.02 * l.sqrt(), "jump {jump} vs sqrt(L) {}", l.sqrt());
    }
}
