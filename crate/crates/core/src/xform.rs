//! Maps of the circle to itself (squaring, rescaled linear, Möbius) and the
//! angle doubling/halving maps on spheres.
//!
//! The central fact tying these together: a rescaled linear map followed by
//! squaring equals squaring followed by a Möbius map,
//!
//! ```text
//! M(S(x); λ) = S(L(x; b)),   b = (1 − λ)/(1 + λ),
//! ```
//!
//! and its rotated version for a general 2×2 matrix with positive determinant.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geom::{
    self, compose_in_frame, decompose_in_frame, Angle, Polar, PoleFrame, Rotation2, UnitVector,
};

const MIN_DET: f64 = 1e-14;

/// `b = (1 − λ)/(1 + λ)`. The map is its own inverse.
pub fn b_from_lambda(lambda: f64) -> f64 {
    (1.0 - lambda) / (1.0 + lambda)
}

/// `λ = (1 − b)/(1 + b)`.
pub fn lambda_from_b(b: f64) -> f64 {
    (1.0 - b) / (1.0 + b)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda.abs() < 1.0 {
        Ok(())
    } else {
        Err(invalid("lambda", lambda, "must satisfy |lambda| < 1"))
    }
}

/// A real 2×2 matrix with positive determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralLinear2(Matrix2<f64>);

impl GeneralLinear2 {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if !(det > MIN_DET) {
            return Err(Error::NonPositiveDeterminant(det));
        }
        Ok(GeneralLinear2(m))
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }

    pub fn svd(&self) -> Svd2 {
        svd2(&self.0).expect("determinant checked on construction")
    }
}

/// Parameters of the general Möbius map
/// `M(y; λ, e^{iψ_post}, e^{iψ_pre}) = R_{ψ_post} M(R_{ψ_pre}ᵀ y; λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusParams {
    lambda: f64,
    pre: Angle,
    post: Angle,
}

impl MobiusParams {
    pub fn new(lambda: f64, pre: Angle, post: Angle) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(MobiusParams { lambda, pre, post })
    }

    /// The Möbius map matched to `L(·; B)` through squaring: λ from the
    /// singular-value ratio, rotations doubled.
    pub fn from_svd(svd: &Svd2) -> Self {
        MobiusParams {
            lambda: lambda_from_b(svd.ratio),
            pre: Angle::new(2.0 * svd.beta.radians()),
            post: Angle::new(2.0 * svd.alpha.radians()),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn pre(&self) -> Angle {
        self.pre
    }

    pub fn post(&self) -> Angle {
        self.post
    }
}

/// `B = c R_α diag(1, b) R_βᵀ` with `c` the largest singular value and
/// `b ∈ (0, 1]` the singular-value ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub scale: f64,
    pub alpha: Angle,
    pub ratio: f64,
    pub beta: Angle,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Matrix2<f64> {
        let ra = Rotation2::new(self.alpha).matrix();
        let rb = Rotation2::new(self.beta).matrix();
        ra * Matrix2::new(1.0, 0.0, 0.0, self.ratio) * rb.transpose() * self.scale
    }
}

/// Closed-form SVD of a 2×2 matrix with positive determinant. When the two
/// singular values coincide the factorization is not unique; `β = 0` then.
pub fn svd2(m: &Matrix2<f64>) -> Result<Svd2> {
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::NonPositiveDeterminant(det));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    // m = R(φ) diag(s1, s2) R(θ) with the angles below.
    let e = 0.5 * (a + d);
    let f = 0.5 * (a - d);
    let g = 0.5 * (c + b);
    let h = 0.5 * (c - b);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let s1 = q + r;
    let a2 = h.atan2(e);
    let (alpha, beta) = if r <= 1e-15 * q {
        (a2, 0.0)
    } else {
        let a1 = g.atan2(f);
        (0.5 * (a2 + a1), -0.5 * (a2 - a1))
    };
    // s2 = q − r loses digits when the matrix is nearly singular; det/s1 does not.
    let s2 = det / s1;
    Ok(Svd2 {
        scale: s1,
        alpha: Angle::new(alpha),
        ratio: s2 / s1,
        beta: Angle::new(beta),
    })
}

/// Squaring `S(x) = (x1² − x2², 2 x1 x2)`, i.e. complex squaring.
pub fn square(x: &UnitVector) -> Result<UnitVector> {
    let v = x.to_vector2()?;
    Ok(UnitVector::from_vector2(Vector2::new(
        v.x * v.x - v.y * v.y,
        2.0 * v.x * v.y,
    )))
}

/// `L(x; b) = (x1, b x2)/‖·‖`.
pub fn rescale_linear_diag(x: &UnitVector, b: f64) -> Result<UnitVector> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(invalid("b", b, "scale must be positive"));
    }
    let v = x.to_vector2()?;
    Ok(UnitVector::from_vector2(Vector2::new(v.x, b * v.y)))
}

/// `L(x; B) = Bx/‖Bx‖`.
pub fn rescale_linear_general(x: &UnitVector, m: &GeneralLinear2) -> Result<UnitVector> {
    let bx = m.matrix() * x.to_vector2()?;
    if bx.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(UnitVector::from_vector2(bx))
}

/// Diagonal Möbius map
/// `M(y; λ) = (2λ + (1 + λ²) y1, (1 − λ²) y2) / (1 + λ² + 2λ y1)`.
/// Defined for `|λ| < 1`; `M(·; −λ)` is the inverse of `M(·; λ)`.
pub fn mobius_diag(y: &UnitVector, lambda: f64) -> Result<UnitVector> {
    check_lambda(lambda)?;
    let v = y.to_vector2()?;
    let l2 = lambda * lambda;
    let den = 1.0 + l2 + 2.0 * lambda * v.x;
    Ok(UnitVector::from_vector2(Vector2::new(
        (2.0 * lambda + (1.0 + l2) * v.x) / den,
        (1.0 - l2) * v.y / den,
    )))
}

/// The same map evaluated as `(z + λ)/(λ z + 1)` in complex arithmetic.
pub fn mobius_diag_complex(y: &UnitVector, lambda: f64) -> Result<UnitVector> {
    check_lambda(lambda)?;
    let v = y.to_vector2()?;
    let z = Complex64::new(v.x, v.y);
    let w = (z + lambda) / (z * lambda + 1.0);
    Ok(UnitVector::from_vector2(Vector2::new(w.re, w.im)))
}

/// `R_{ψ_post} M(R_{ψ_pre}ᵀ y; λ)`.
pub fn mobius_general(y: &UnitVector, p: &MobiusParams) -> Result<UnitVector> {
    let z = Rotation2::new(p.pre).apply_transpose(y)?;
    let w = mobius_diag(&z, p.lambda)?;
    Rotation2::new(p.post).apply(&w)
}

/// `e^{i(ψ_post − ψ_pre)} (y + λ e^{iψ_pre}) / (λ e^{−iψ_pre} y + 1)`.
pub fn mobius_general_complex(y: &UnitVector, p: &MobiusParams) -> Result<UnitVector> {
    let v = y.to_vector2()?;
    let z = Complex64::new(v.x, v.y);
    let pre = Complex64::from_polar(1.0, p.pre.radians());
    let turn = Complex64::from_polar(1.0, p.post.radians() - p.pre.radians());
    let w = turn * (z + p.lambda * pre) / (p.lambda * pre.conj() * z + 1.0);
    Ok(UnitVector::from_vector2(Vector2::new(w.re, w.im)))
}

/// Inverse of [`mobius_diag`].
pub fn mobius_inverse(w: &UnitVector, lambda: f64) -> Result<UnitVector> {
    check_lambda(lambda)?;
    mobius_diag(w, -lambda)
}

/// Doubles the colatitude about `pole`: `(φ, u) ↦ (2φ, u)`. On the circle
/// this is squaring in coordinates where the pole is `(1, 0)`. At the pole and
/// its antipode the direction drops out and the result is the pole.
pub fn double_angle_sphere(x: &UnitVector, pole: &UnitVector) -> Result<UnitVector> {
    x.same_dim(pole)?;
    let frame = PoleFrame::new(pole);
    let xf = frame.to_frame(x);
    if x.dim() == 2 {
        let sq = square(&UnitVector::renormalized(xf))?;
        return Ok(frame.back_from_frame(sq.into_dvector()));
    }
    match decompose_in_frame(&xf) {
        Polar::Degenerate { .. } => Ok(pole.clone()),
        Polar::Regular(p) => Ok(frame.back_from_frame(compose_in_frame(2.0 * p.colat(), p.sub()))),
    }
}

/// Halves the colatitude about `pole`, returning the preimage under
/// [`double_angle_sphere`] with `x · pole ≥ 0`. The other preimage is `−x`.
pub fn halve_angle_sphere(y: &UnitVector, pole: &UnitVector) -> Result<UnitVector> {
    y.same_dim(pole)?;
    let frame = PoleFrame::new(pole);
    let yf = frame.to_frame(y);
    if y.dim() == 2 {
        let theta = geom::arg(&UnitVector::renormalized(yf))?;
        let x = geom::vec(Angle::new(0.5 * theta.radians()));
        return Ok(frame.back_from_frame(x.into_dvector()));
    }
    match decompose_in_frame(&yf) {
        Polar::Degenerate { colat: 0.0 } => Ok(pole.clone()),
        Polar::Degenerate { .. } => Err(Error::DegeneratePolar),
        Polar::Regular(p) => Ok(frame.back_from_frame(compose_in_frame(0.5 * p.colat(), p.sub()))),
    }
}

/// Helper for callers that build rotations from raw angles.
pub fn general_linear_from_svd(scale: f64, alpha: Angle, ratio: f64, beta: Angle) -> Result<GeneralLinear2> {
    GeneralLinear2::new(
        Svd2 {
            scale,
            alpha,
            ratio,
            beta,
        }
        .reconstruct(),
    )
}
