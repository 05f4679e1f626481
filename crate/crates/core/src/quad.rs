//! Quadrature rules for the circle and the two-sphere.
//!
//! The periodic trapezoid rule is spectrally accurate for smooth periodic
//! integrands, so it is the default on the circle and in longitude. Latitude
//! uses Gauss–Legendre in `t = x1` (the cosine of the colatitude), which makes
//! the surface element simply `dt dψ`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DVector;

use crate::geom::{Angle, UnitVector};

pub const DEFAULT_CIRCLE_NODES: usize = 1024;
pub const DEFAULT_SPHERE_LAT: usize = 64;
pub const DEFAULT_SPHERE_LON: usize = 128;

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("n >= 1"));
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

pub fn gauss_legendre_integral(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    gauss_legendre(n, a, b).into_iter().map(|(x, w)| w * f(x)).sum()
}

/// Equispaced angles `−π + 2πk/n` with equal weights `2π/n`.
pub fn circle_nodes(n: usize) -> impl Iterator<Item = (Angle, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(move |k| (Angle::new(-PI + h * k as f64), h))
}

/// Periodic trapezoid rule for `∫ f(θ) dθ` over the circle.
pub fn circle_integral(n: usize, f: impl Fn(Angle) -> f64) -> f64 {
    circle_nodes(n).map(|(t, w)| w * f(t)).sum()
}

/// A product rule on `S_2` (or a cap of it) about the pole `e1`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    nodes: Vec<(UnitVector, f64)>,
}

impl SphereRule {
    /// Whole sphere: Gauss–Legendre in `x1 ∈ [-1, 1]`, trapezoid in longitude.
    pub fn sphere2(n_lat: usize, n_lon: usize) -> Self {
        Self::band(n_lat, n_lon, -1.0, 1.0)
    }

    /// The open hemisphere `x1 > 0`.
    pub fn hemisphere2(n_lat: usize, n_lon: usize) -> Self {
        Self::band(n_lat, n_lon, 0.0, 1.0)
    }

    fn band(n_lat: usize, n_lon: usize, lo: f64, hi: f64) -> Self {
        let h = 2.0 * PI / n_lon as f64;
        let mut nodes = Vec::with_capacity(n_lat * n_lon);
        for (t, wt) in gauss_legendre(n_lat, lo, hi) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            for k in 0..n_lon {
                let (sp, cp) = (h * k as f64).sin_cos();
                let x = UnitVector::renormalized(DVector::from_vec(vec![t, s * cp, s * sp]));
                nodes.push((x, wt * h));
            }
        }
        SphereRule { nodes }
    }

    pub fn nodes(&self) -> &[(UnitVector, f64)] {
        &self.nodes
    }

    pub fn integrate(&self, f: impl Fn(&UnitVector) -> f64) -> f64 {
        self.nodes.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// `∫ f [dx]` over `S_{q-1}` for q = 2 (trapezoid) or q = 3 (product rule).
/// Returns `None` for other dimensions.
pub fn sphere_integral(q: usize, f: impl Fn(&UnitVector) -> f64) -> Option<f64> {
    match q {
        2 => Some(circle_integral(DEFAULT_CIRCLE_NODES, |t| f(&t.to_vector()))),
        3 => Some(SphereRule::sphere2(DEFAULT_SPHERE_LAT, DEFAULT_SPHERE_LON).integrate(f)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let v = gauss_legendre_integral(5, 0.0, 2.0, |x| x.powi(9) - 3.0 * x * x);
        assert_abs_diff_eq!(v, 2f64.powi(10) / 10.0 - 8.0, epsilon = 1e-11);
    }

    #[test]
    fn circle_rule_integrates_trig_polynomials() {
        assert_abs_diff_eq!(circle_integral(16, |_| 1.0), 2.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(circle_integral(16, |t| t.radians().cos().powi(2)), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(circle_integral(16, |t| (3.0 * t.radians()).sin()), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn sphere_rule_area_and_moments() {
        let rule = SphereRule::sphere2(16, 32);
        assert_abs_diff_eq!(rule.integrate(|_| 1.0), 4.0 * PI, epsilon = 1e-12);
        // ∫ x_i² [dx] = 4π/3 for each axis.
        for i in 0..3 {
            assert_abs_diff_eq!(rule.integrate(|x| x[i] * x[i]), 4.0 * PI / 3.0, epsilon = 1e-12);
        }
        let hemi = SphereRule::hemisphere2(16, 32);
        assert_abs_diff_eq!(hemi.integrate(|_| 1.0), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(hemi.integrate(|x| x[0]), PI, epsilon = 1e-12);
    }
}
