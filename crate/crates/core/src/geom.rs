//! Points on circles and spheres.
//!
//! Two angle conventions coexist. On the circle a point is a full angle in
//! (−π, π]; on a general sphere a point is a colatitude in [0, π] about a
//! pole together with a unit direction `u` in the tangent hyperplane
//! (`x = cos φ · pole + sin φ · u` in pole-aligned coordinates). Callers pick
//! the convention that matches their formula.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{invalid, Error, Result};

/// Accepted deviation from unit norm before a vector is rejected.
const RENORMALIZE_TOL: f64 = 1e-9;

/// Below this value of `sin φ` the polar direction `u` is treated as undefined.
pub(crate) const DEGENERATE_SIN: f64 = 1e-14;

/// Reduce an angle in radians to (−π, π].
pub fn wrap_angle(radians: f64) -> f64 {
    if radians > -PI && radians <= PI {
        return radians;
    }
    let r = radians.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// An angle in radians, always stored in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Self {
        Angle(wrap_angle(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// The point `(cos φ, sin φ)` on the unit circle.
    pub fn to_vector(self) -> UnitVector {
        vec(self)
    }
}

impl From<f64> for Angle {
    fn from(radians: f64) -> Self {
        Angle::new(radians)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point on the unit sphere `S_{q-1}` in `R^q`, `q >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<f64>);

impl UnitVector {
    /// Accepts coordinates whose norm is within 1e-9 of one and renormalizes
    /// them; anything further away is a caller error.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let v = DVector::from_vec(coords);
        check_dim(v.len())?;
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(UnitVector(v / norm))
    }

    /// Projects any nonzero vector onto the sphere.
    pub fn normalize(coords: Vec<f64>) -> Result<Self> {
        Self::normalize_dvector(DVector::from_vec(coords))
    }

    pub fn normalize_dvector(v: DVector<f64>) -> Result<Self> {
        check_dim(v.len())?;
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NotUnitNorm(norm));
        }
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVector(v / norm))
    }

    /// Internal constructor for vectors that are nonzero by construction.
    pub(crate) fn renormalized(v: DVector<f64>) -> Self {
        debug_assert!(v.len() >= 2);
        let norm = v.norm();
        debug_assert!(norm > 0.0);
        UnitVector(v / norm)
    }

    /// The coordinate basis vector `e_{axis+1}` in `R^q`.
    pub fn basis(q: usize, axis: usize) -> Result<Self> {
        check_dim(q)?;
        if axis >= q {
            return Err(Error::DimensionMismatch {
                expected: q,
                got: axis + 1,
            });
        }
        let mut v = DVector::zeros(q);
        v[axis] = 1.0;
        Ok(UnitVector(v))
    }

    /// The north pole `e1`.
    pub fn north(q: usize) -> Result<Self> {
        Self::basis(q, 0)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<f64> {
        self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.as_slice().to_vec()
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    /// Everything after the first coordinate.
    pub fn tail(&self) -> DVector<f64> {
        self.0.rows(1, self.dim() - 1).into_owned()
    }

    pub(crate) fn to_vector2(&self) -> Result<Vector2<f64>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.dim(),
            });
        }
        Ok(Vector2::new(self.0[0], self.0[1]))
    }

    pub(crate) fn from_vector2(v: Vector2<f64>) -> Self {
        Self::renormalized(DVector::from_column_slice(v.as_slice()))
    }

    pub(crate) fn same_dim(&self, other: &UnitVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for UnitVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Neg for UnitVector {
    type Output = UnitVector;
    fn neg(self) -> UnitVector {
        UnitVector(-self.0)
    }
}

impl Neg for &UnitVector {
    type Output = UnitVector;
    fn neg(self) -> UnitVector {
        UnitVector(-&self.0)
    }
}

fn check_dim(q: usize) -> Result<()> {
    if q < 2 {
        Err(Error::DimensionTooSmall(q))
    } else {
        Ok(())
    }
}

/// Direction component of a polar representation. On the circle the
/// direction is the scalar ±1; for `q > 2` it is a unit `(q-1)`-vector.
#[derive(Debug, Clone, PartialEq)]
pub enum SubDirection {
    Sign(f64),
    Unit(UnitVector),
}

impl SubDirection {
    pub fn dim(&self) -> usize {
        match self {
            SubDirection::Sign(_) => 1,
            SubDirection::Unit(u) => u.dim(),
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match self {
            SubDirection::Sign(s) => vec![*s],
            SubDirection::Unit(u) => u.to_vec(),
        }
    }

    fn from_tail(tail: DVector<f64>) -> Self {
        if tail.len() == 1 {
            SubDirection::Sign(tail[0].signum())
        } else {
            SubDirection::Unit(UnitVector::renormalized(tail))
        }
    }
}

/// Colatitude about a pole plus the tangent direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPoint {
    colat: f64,
    sub: SubDirection,
}

impl PolarPoint {
    pub fn new(colat: f64, sub: SubDirection) -> Result<Self> {
        if !(0.0..=PI).contains(&colat) {
            return Err(invalid("colat", colat, "colatitude must lie in [0, pi]"));
        }
        if let SubDirection::Sign(s) = sub {
            if s != 1.0 && s != -1.0 {
                return Err(invalid("sub", s, "circle direction must be +1 or -1"));
            }
        }
        Ok(PolarPoint { colat, sub })
    }

    pub fn colat(&self) -> f64 {
        self.colat
    }

    pub fn sub(&self) -> &SubDirection {
        &self.sub
    }

    /// Ambient dimension `q`.
    pub fn dim(&self) -> usize {
        self.sub.dim() + 1
    }
}

/// Result of decomposing a point about a pole. At the pole or its antipode
/// the direction is undefined and only the colatitude (0 or π) is returned.
#[derive(Debug, Clone, PartialEq)]
pub enum Polar {
    Regular(PolarPoint),
    Degenerate { colat: f64 },
}

impl Polar {
    pub fn colat(&self) -> f64 {
        match self {
            Polar::Regular(p) => p.colat,
            Polar::Degenerate { colat } => *colat,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Polar::Degenerate { .. })
    }
}

/// Orthogonal change of coordinates sending `pole` to `e1`. The identity when
/// the pole already is `e1`.
#[derive(Debug, Clone)]
pub(crate) struct PoleFrame(Option<DMatrix<f64>>);

impl PoleFrame {
    pub(crate) fn new(pole: &UnitVector) -> Self {
        let q = pole.dim();
        let c = pole[0];
        if c == 1.0 {
            return PoleFrame(None);
        }
        // Minimal rotation a -> b: I + K + K²/(1 + a·b), K = b aᵀ − a bᵀ.
        let rotation_to = |a: &DVector<f64>, b: &DVector<f64>| {
            let k = b * a.transpose() - a * b.transpose();
            let k2 = &k * &k;
            DMatrix::identity(q, q) + &k + k2 / (1.0 + a.dot(b))
        };
        let a = pole.as_dvector();
        let m = if c >= 0.0 {
            let e1 = UnitVector::north(q).expect("q >= 2").into_dvector();
            rotation_to(a, &e1)
        } else {
            // Rotate to −e1 (well conditioned here), then a half turn in the
            // (e1, e2) plane.
            let mut minus_e1 = DVector::zeros(q);
            minus_e1[0] = -1.0;
            let mut half_turn = DMatrix::identity(q, q);
            half_turn[(0, 0)] = -1.0;
            half_turn[(1, 1)] = -1.0;
            half_turn * rotation_to(a, &minus_e1)
        };
        PoleFrame(Some(m))
    }

    pub(crate) fn to_frame(&self, x: &UnitVector) -> DVector<f64> {
        match &self.0 {
            None => x.as_dvector().clone(),
            Some(m) => m * x.as_dvector(),
        }
    }

    pub(crate) fn back_from_frame(&self, v: DVector<f64>) -> UnitVector {
        match &self.0 {
            None => UnitVector::renormalized(v),
            Some(m) => UnitVector::renormalized(m.transpose() * v),
        }
    }
}

/// `Arg(x)` for a point on the circle.
pub fn arg(x: &UnitVector) -> Result<Angle> {
    let v = x.to_vector2()?;
    Ok(Angle::new(v.y.atan2(v.x)))
}

/// `vec(φ) = (cos φ, sin φ)`.
pub fn vec(phi: Angle) -> UnitVector {
    let (s, c) = phi.radians().sin_cos();
    UnitVector::from_vector2(Vector2::new(c, s))
}

/// Polar form of `x` about `pole`: `x = cos φ · pole + sin φ · u` in
/// coordinates where the pole is `e1`.
pub fn polar_decompose(x: &UnitVector, pole: &UnitVector) -> Result<Polar> {
    x.same_dim(pole)?;
    let frame = PoleFrame::new(pole);
    Ok(decompose_in_frame(&frame.to_frame(x)))
}

pub(crate) fn decompose_in_frame(xf: &DVector<f64>) -> Polar {
    let cos_phi = xf[0].clamp(-1.0, 1.0);
    let tail = xf.rows(1, xf.len() - 1).into_owned();
    let sin_phi = tail.norm();
    let colat = sin_phi.atan2(cos_phi);
    if sin_phi < DEGENERATE_SIN {
        let colat = if cos_phi > 0.0 { 0.0 } else { PI };
        return Polar::Degenerate { colat };
    }
    Polar::Regular(PolarPoint {
        colat,
        sub: SubDirection::from_tail(tail),
    })
}

/// Inverse of [`polar_decompose`].
pub fn polar_compose(p: &PolarPoint, pole: &UnitVector) -> Result<UnitVector> {
    if p.dim() != pole.dim() {
        return Err(Error::DimensionMismatch {
            expected: pole.dim(),
            got: p.dim(),
        });
    }
    let frame = PoleFrame::new(pole);
    Ok(frame.back_from_frame(compose_in_frame(p.colat, &p.sub)))
}

pub(crate) fn compose_in_frame(colat: f64, sub: &SubDirection) -> DVector<f64> {
    let (s, c) = colat.sin_cos();
    let coords = sub.coords();
    let mut v = DVector::zeros(coords.len() + 1);
    v[0] = c;
    for (i, ui) in coords.iter().enumerate() {
        v[i + 1] = s * ui;
    }
    v
}

/// Half-angle tangent `tan(θ/2)`.
pub fn tan_half(theta: Angle) -> Result<f64> {
    let half = 0.5 * theta.radians();
    let (s, c) = half.sin_cos();
    if c.abs() < DEGENERATE_SIN {
        return Err(Error::PointAtInfinity);
    }
    Ok(s / c)
}

/// Surface area `π_q = 2 π^{q/2} / Γ(q/2)` of `S_{q-1}`.
pub fn surface_area(q: usize) -> Result<f64> {
    check_dim(q)?;
    Ok(ln_surface_area(q).exp())
}

pub(crate) fn ln_surface_area(q: usize) -> f64 {
    let h = 0.5 * q as f64;
    std::f64::consts::LN_2 + h * PI.ln() - statrs::function::gamma::ln_gamma(h)
}

/// A planar rotation `R_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation2 {
    angle: Angle,
}

impl Rotation2 {
    pub fn new(angle: Angle) -> Self {
        Rotation2 { angle }
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        let (s, c) = self.angle.radians().sin_cos();
        Matrix2::new(c, -s, s, c)
    }

    pub fn apply(&self, x: &UnitVector) -> Result<UnitVector> {
        Ok(UnitVector::from_vector2(self.matrix() * x.to_vector2()?))
    }

    pub fn apply_transpose(&self, x: &UnitVector) -> Result<UnitVector> {
        Ok(UnitVector::from_vector2(
            self.matrix().transpose() * x.to_vector2()?,
        ))
    }
}

/// `R_α x`.
pub fn rotate2(alpha: Angle, x: &UnitVector) -> Result<UnitVector> {
    Rotation2::new(alpha).apply(x)
}
