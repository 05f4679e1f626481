//! Gnomonic and stereographic projections of `S_{q-1}` onto the tangent
//! space `R^{q-1}` at the pole `e1`, and the factors relating Lebesgue
//! measure there to surface measure on the sphere.
//!
//! With `x = (cos φ, sin φ u)` and `y = (cos θ, sin θ u)`:
//!
//! * gnomonic: `v = tan φ · u`, `dv = cos^{-q} φ [dx]`;
//! * stereographic: `w = tan(θ/2) · u`, `dw = 2^{1-q} cos^{-2(q-1)}(θ/2) [dy]`.
//!
//! When `θ = 2φ` the two projections coincide, which makes
//! `[dy] = 2^{q-1} cos^{q-2} φ [dx]` under angle doubling.
//!
//! All maps are taken about `e1`; rotate data into that frame first.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;

use crate::error::{invalid, Error, Result};
use crate::geom::{UnitVector, DEGENERATE_SIN};

/// A point of the tangent space `R^{q-1}`; `q` is its length plus one.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPoint(DVector<f64>);

impl TangentPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(coords))
    }

    pub fn from_dvector(v: DVector<f64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::DimensionTooSmall(1));
        }
        if let Some(&bad) = v.iter().find(|c| !c.is_finite()) {
            return Err(invalid("coords", bad, "tangent coordinates must be finite"));
        }
        Ok(TangentPoint(v))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// Ambient dimension `q` of the sphere this point belongs to.
    pub fn sphere_dim(&self) -> usize {
        self.0.len() + 1
    }

    /// The radial part `r = ‖v‖` (or `s = ‖w‖`).
    pub fn radius(&self) -> f64 {
        self.0.norm()
    }
}

/// `v = x_{2:q} / x1` on the open hemisphere `x1 > 0`.
pub fn gnomonic(x: &UnitVector) -> Result<TangentPoint> {
    if !(x[0] > 0.0) {
        return Err(Error::OutsideHemisphere);
    }
    Ok(TangentPoint(x.tail() / x[0]))
}

/// `x = (1, v) / sqrt(1 + ‖v‖²)`.
pub fn gnomonic_inverse(v: &TangentPoint) -> UnitVector {
    let mut x = DVector::zeros(v.sphere_dim());
    x[0] = 1.0;
    x.rows_mut(1, v.0.len()).copy_from(&v.0);
    UnitVector::renormalized(x)
}

/// `w = y_{2:q} / (1 + y1)`, undefined at `−e1`.
pub fn stereographic(y: &UnitVector) -> Result<TangentPoint> {
    let one_plus = 1.0 + y[0];
    // ‖y + e1‖² = 2(1 + y1)
    if (2.0 * one_plus).max(0.0).sqrt() < DEGENERATE_SIN {
        return Err(Error::PointAtInfinity);
    }
    Ok(TangentPoint(y.tail() / one_plus))
}

/// `y = ((1 − ‖w‖²), 2w) / (1 + ‖w‖²)`.
pub fn stereographic_inverse(w: &TangentPoint) -> UnitVector {
    let s2 = w.0.norm_squared();
    let den = 1.0 + s2;
    let mut y = DVector::zeros(w.sphere_dim());
    y[0] = (1.0 - s2) / den;
    y.rows_mut(1, w.0.len()).copy_from(&(&w.0 * (2.0 / den)));
    UnitVector::renormalized(y)
}

/// `cos^{-q} φ`, the density of tangent-plane Lebesgue measure with respect
/// to surface measure under gnomonic projection.
pub fn gnomonic_measure_factor(phi: f64, q: usize) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&phi) {
        return Err(invalid("phi", phi, "colatitude must lie in [0, pi/2)"));
    }
    Ok(phi.cos().powi(-(q as i32)))
}

/// `(1/2)^{q-1} cos^{-2(q-1)}(θ/2)` for stereographic projection.
pub fn stereo_measure_factor(theta: f64, q: usize) -> Result<f64> {
    if !(theta.abs() < std::f64::consts::PI) {
        return Err(invalid("theta", theta, "angle must satisfy |theta| < pi"));
    }
    let k = q as i32 - 1;
    Ok(0.5f64.powi(k) * (0.5 * theta).cos().powi(-2 * k))
}

/// `2^{q-1} cos^{q-2} φ`, the Jacobian of angle doubling on the sphere.
pub fn doubling_measure_factor(phi: f64, q: usize) -> f64 {
    2f64.powi(q as i32 - 1) * phi.cos().powi(q as i32 - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{vec, Angle};
    use crate::xform::double_angle_sphere;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

    fn uv(c: &[f64]) -> UnitVector {
        UnitVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn gnomonic_examples() {
        assert_eq!(gnomonic(&UnitVector::north(4).unwrap()).unwrap().as_slice(), &[0.0; 3]);
        let v = gnomonic(&vec(Angle::new(FRAC_PI_4))).unwrap();
        assert_abs_diff_eq!(v.as_slice()[0], 1.0, epsilon = 1e-15);
        let h = SQRT_2 / 2.0;
        let v = gnomonic(&uv(&[h, h, 0.0])).unwrap();
        assert_abs_diff_eq!(v.as_slice()[0], 1.0, epsilon = 1e-15);
        assert_eq!(v.as_slice()[1], 0.0);
        assert_eq!(gnomonic(&uv(&[0.0, 1.0])), Err(Error::OutsideHemisphere));
        assert_eq!(gnomonic(&uv(&[-0.6, 0.8])), Err(Error::OutsideHemisphere));
    }

    #[test]
    fn gnomonic_inverse_examples() {
        let x = gnomonic_inverse(&TangentPoint::new(vec![0.0, 0.0]).unwrap());
        assert_eq!(x, UnitVector::north(3).unwrap());
        let x = gnomonic_inverse(&TangentPoint::new(vec![1.0]).unwrap());
        assert_abs_diff_eq!(x[0], SQRT_2 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], SQRT_2 / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(stereographic(&UnitVector::north(3).unwrap()).unwrap().as_slice(), &[0.0, 0.0]);
        let w = stereographic(&vec(Angle::new(FRAC_PI_2))).unwrap();
        assert_abs_diff_eq!(w.as_slice()[0], 1.0, epsilon = 1e-15);
        let w = stereographic(&uv(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 0.0]);
        assert_eq!(stereographic(&uv(&[-1.0, 0.0, 0.0])), Err(Error::PointAtInfinity));
    }

    #[test]
    fn stereographic_inverse_examples() {
        assert_eq!(
            stereographic_inverse(&TangentPoint::new(vec![0.0]).unwrap()),
            UnitVector::north(2).unwrap()
        );
        let y = stereographic_inverse(&TangentPoint::new(vec![1.0]).unwrap());
        assert_abs_diff_eq!(y[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-15);
        let y = stereographic_inverse(&TangentPoint::new(vec![1000.0]).unwrap());
        assert_abs_diff_eq!(y[0], (1.0 - 1e6) / (1.0 + 1e6), epsilon = 1e-15);
        assert_abs_diff_eq!(y[0], -0.999998, epsilon = 1e-8);
    }

    #[test]
    fn measure_factor_examples() {
        assert_eq!(gnomonic_measure_factor(0.0, 3).unwrap(), 1.0);
        assert_abs_diff_eq!(gnomonic_measure_factor(FRAC_PI_4, 2).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gnomonic_measure_factor(FRAC_PI_3, 3).unwrap(), 8.0, epsilon = 1e-13);
        assert!(gnomonic_measure_factor(FRAC_PI_2, 3).is_err());

        assert_eq!(stereo_measure_factor(0.0, 2).unwrap(), 0.5);
        assert_abs_diff_eq!(stereo_measure_factor(FRAC_PI_2, 2).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(stereo_measure_factor(0.0, 3).unwrap(), 0.25);
        assert!(stereo_measure_factor(PI, 3).is_err());

        assert_eq!(doubling_measure_factor(1.234, 2), 2.0);
        assert_eq!(doubling_measure_factor(0.0, 3), 4.0);
        assert_abs_diff_eq!(doubling_measure_factor(FRAC_PI_2, 3), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn factors_are_consistent_under_doubling() {
        for q in 2..=4 {
            for k in 0..200 {
                let phi = 1.5 * k as f64 / 200.0;
                let g = gnomonic_measure_factor(phi, q).unwrap();
                let sd = stereo_measure_factor(2.0 * phi, q).unwrap() * doubling_measure_factor(phi, q);
                assert_abs_diff_eq!(g, sd, epsilon = 1e-12 * g.max(1.0));
            }
        }
    }

    /// For q = 3: ∫ f(v) dv = ∫_{hemisphere} f(gnomonic(x)) cos^{-3}φ [dx].
    #[test]
    fn gnomonic_factor_by_integration() {
        // ∫ exp(−‖v‖²)(1 + v1 + v2²) dv over R² = π + π/2.
        let f = |v: &DVector<f64>| (-v.norm_squared()).exp() * (1.0 + v[0] + v[1] * v[1]);
        let exact = 1.5 * PI;
        let rule = crate::quad::SphereRule::hemisphere2(400, 64);
        let sphere_side = rule.integrate(|x| {
            let v = gnomonic(x).unwrap();
            f(v.coords()) * gnomonic_measure_factor(x[0].clamp(-1.0, 1.0).acos(), 3).unwrap()
        });
        assert_abs_diff_eq!(sphere_side, exact, epsilon = 1e-6);
    }

    fn hemisphere_point(q: usize) -> impl Strategy<Value = UnitVector> {
        proptest::collection::vec(-1.0f64..1.0, q)
            .prop_filter("nonzero", |c| c.iter().map(|v| v * v).sum::<f64>() > 1e-3)
            .prop_map(|mut c| {
                c[0] = c[0].abs() + 1e-3;
                UnitVector::normalize(c).unwrap()
            })
    }

    proptest! {
        #[test]
        fn gnomonic_round_trip(c in proptest::collection::vec(-50.0f64..50.0, 1..4)) {
            let v = TangentPoint::new(c).unwrap();
            let x = gnomonic_inverse(&v);
            prop_assert!(x[0] > 0.0);
            let back = gnomonic(&x).unwrap();
            prop_assert!((back.coords() - v.coords()).norm() < 1e-12 * (1.0 + v.radius()));
        }

        #[test]
        fn stereographic_round_trip(c in proptest::collection::vec(-50.0f64..50.0, 1..4)) {
            let w = TangentPoint::new(c).unwrap();
            let back = stereographic(&stereographic_inverse(&w)).unwrap();
            prop_assert!((back.coords() - w.coords()).norm() < 1e-12 * (1.0 + w.radius()));
        }

        #[test]
        fn doubled_point_projects_identically(x in hemisphere_point(3), x4 in hemisphere_point(4), t in -1.5f64..1.5) {
            for x in [x, x4, vec(Angle::new(t))] {
                let e1 = UnitVector::north(x.dim()).unwrap();
                let y = double_angle_sphere(&x, &e1).unwrap();
                let w = stereographic(&y).unwrap();
                let v = gnomonic(&x).unwrap();
                prop_assert!((w.coords() - v.coords()).norm() < 1e-12 * (1.0 + v.radius()).powi(2));
            }
        }
    }
}
