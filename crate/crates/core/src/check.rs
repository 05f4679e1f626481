//! Named identity suites. Each suite draws its random cases from generators
//! keyed by `(seed, trial)`, so a report depends only on its inputs and not on
//! thread scheduling.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, Matrix2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{
    acg_gnomonic_params, acg_pdf, ar1_spectral_pdf, car1_alpha, car1_lambda, doubled_acg_pdf,
    expand_sc_quadratic, mvt_pdf, p_linear, param_convert, qf_split, sample_wc, sc_pdf,
    sc_stereo_params, stream_rng, wc_fourier_coeff, wc_pdf, AcgParams, MvtParams, ScParams,
    WcMethod, WcParameterization, WcParams,
};
use crate::error::{invalid, Error, Result};
use crate::geom::{ln_surface_area, vec, Angle, UnitVector};
use crate::linalg::SpdMatrix;
use crate::project::{
    doubling_measure_factor, gnomonic_inverse, gnomonic_measure_factor, stereo_measure_factor,
    stereographic_inverse, TangentPoint,
};
use crate::quad::{circle_integral, circle_nodes, sphere_integral, SphereRule};
use crate::xform::{
    b_from_lambda, double_angle_sphere, lambda_from_b, mobius_diag, mobius_general,
    rescale_linear_diag, rescale_linear_general, square, GeneralLinear2, MobiusParams,
};

/// Tangent points drawn per random parameter set in the pushforward suites.
pub const POINTS_PER_CASE: usize = 100;

const SAMPLER_LAMBDA: f64 = 0.5;
const SAMPLER_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Mobius,
    MobiusGeneral,
    Doubling,
    PushforwardGnomonic,
    PushforwardStereo,
    Normalization,
    Fourier,
    Table1,
    Spectral,
    Samplers,
    MeasureFactors,
    QuadraticForms,
    ScExpansion,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Mobius,
        Suite::MobiusGeneral,
        Suite::Doubling,
        Suite::PushforwardGnomonic,
        Suite::PushforwardStereo,
        Suite::Normalization,
        Suite::Fourier,
        Suite::Table1,
        Suite::Spectral,
        Suite::Samplers,
        Suite::MeasureFactors,
        Suite::QuadraticForms,
        Suite::ScExpansion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Mobius => "mobius",
            Suite::MobiusGeneral => "mobius-general",
            Suite::Doubling => "doubling",
            Suite::PushforwardGnomonic => "pushforward-gnomonic",
            Suite::PushforwardStereo => "pushforward-stereo",
            Suite::Normalization => "normalization",
            Suite::Fourier => "fourier",
            Suite::Table1 => "table1",
            Suite::Spectral => "spectral",
            Suite::Samplers => "samplers",
            Suite::MeasureFactors => "measure-factors",
            Suite::QuadraticForms => "quadratic-forms",
            Suite::ScExpansion => "sc-expansion",
        }
    }

    /// For `samplers` the tolerance is a bound on |z-scores|; elsewhere it
    /// bounds an absolute or relative numerical error.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Mobius | Suite::Doubling | Suite::Table1 | Suite::Spectral => 1e-12,
            Suite::MeasureFactors | Suite::ScExpansion => 1e-12,
            Suite::MobiusGeneral => 1e-11,
            Suite::PushforwardGnomonic | Suite::PushforwardStereo | Suite::Fourier => 1e-10,
            Suite::QuadraticForms => 1e-10,
            Suite::Normalization => 1e-8,
            Suite::Samplers => 3.0,
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Mobius => 100_000,
            Suite::MobiusGeneral | Suite::QuadraticForms | Suite::ScExpansion => 10_000,
            Suite::Samplers => 100_000,
            Suite::PushforwardGnomonic | Suite::PushforwardStereo => 5,
            _ => 16,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "suite",
                name: s.to_string(),
            })
    }
}

/// Parses a suite name, expanding `all` to every suite.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>> {
    if name == "all" {
        Ok(Suite::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub trials: usize,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
    pub wall_time: f64,
}

/// Runs one suite. `trials` counts random cases; suites with reference
/// parameter values always check those as well. `tol` defaults to
/// [`Suite::default_tolerance`].
pub fn run_suite(suite: Suite, trials: usize, seed: u64, tol: Option<f64>) -> Result<CheckReport> {
    if trials == 0 {
        return Err(invalid("trials", 0.0, "at least one trial is required"));
    }
    let tolerance = tol.unwrap_or(suite.default_tolerance());
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(invalid("tol", tolerance, "tolerance must be positive and finite"));
    }
    let start = Instant::now();
    let err = match suite {
        Suite::Mobius => per_trial(trials, seed, mobius_trial),
        Suite::MobiusGeneral => per_trial(trials, seed, mobius_general_trial),
        Suite::Doubling => with_reference(&[0.1, 0.5, 0.9], trials, seed, |r| r.random_range(0.02..0.98), doubling_error),
        Suite::PushforwardGnomonic => per_trial(trials, seed, gnomonic_trial),
        Suite::PushforwardStereo => per_trial(trials, seed, stereo_trial),
        Suite::Normalization => normalization_error(trials, seed),
        Suite::Fourier => fourier_error(trials, seed),
        Suite::Table1 => with_reference(&[0.2, 0.5, 0.8], trials, seed, |r| r.random_range(0.0..0.99), table1_error),
        Suite::Spectral => with_reference(&[0.0, 0.5, -0.5], trials, seed, |r| r.random_range(-0.95..0.95), spectral_error),
        Suite::Samplers => sampler_max_z(trials, seed)?,
        Suite::MeasureFactors => measure_factor_error(trials, seed),
        Suite::QuadraticForms => per_trial(trials, seed, qf_trial),
        Suite::ScExpansion => per_trial(trials, seed, sc_expansion_trial),
    };
    Ok(CheckReport {
        suite: suite.name().to_string(),
        trials,
        max_abs_error: err,
        tolerance,
        passed: err <= tolerance,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Max that propagates NaN, so a NaN error can never pass.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn per_trial(trials: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> f64 {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| f(&mut stream_rng(seed, i)))
        .reduce(|| 0.0, nan_max)
}

fn with_reference(
    reference: &[f64],
    trials: usize,
    seed: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> f64 + Sync,
    f: impl Fn(f64) -> f64 + Sync,
) -> f64 {
    let fixed = reference.iter().map(|&p| f(p)).fold(0.0, nan_max);
    nan_max(fixed, per_trial(trials, seed, |r| f(draw(r))))
}

fn random_angle(rng: &mut ChaCha8Rng) -> Angle {
    Angle::new(rng.random_range(-PI..PI))
}

fn random_unit(q: usize, rng: &mut ChaCha8Rng) -> UnitVector {
    crate::dist::sample_uniform(q, rng).expect("q >= 2")
}

fn gaussian(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// `GGᵀ + εI` with standard normal `G`.
pub fn random_spd(q: usize, eps: f64, rng: &mut ChaCha8Rng) -> SpdMatrix {
    let g = DMatrix::from_fn(q, q, |_, _| rng.sample::<f64, _>(StandardNormal));
    SpdMatrix::new(&g * g.transpose() + DMatrix::identity(q, q) * eps).expect("SPD by construction")
}

fn unit_dist(a: &UnitVector, b: &UnitVector) -> f64 {
    (a.as_dvector() - b.as_dvector()).norm()
}

/// `‖M(S(x); λ) − S(L(x; b))‖` for random `x` and log-uniform `b ∈ [0.05, 20]`.
fn mobius_trial(rng: &mut ChaCha8Rng) -> f64 {
    let x = vec(random_angle(rng));
    let b = rng.random_range((0.05f64).ln()..=(20.0f64).ln()).exp();
    let lhs = mobius_diag(&square(&x).unwrap(), lambda_from_b(b)).unwrap();
    let rhs = square(&rescale_linear_diag(&x, b).unwrap()).unwrap();
    unit_dist(&lhs, &rhs)
}

/// Random matrix with entries in [−1, 1] and positive determinant.
pub fn random_general_linear(rng: &mut ChaCha8Rng) -> GeneralLinear2 {
    loop {
        let m = Matrix2::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if let Ok(g) = GeneralLinear2::new(m) {
            return g;
        }
    }
}

fn mobius_general_trial(rng: &mut ChaCha8Rng) -> f64 {
    let g = random_general_linear(rng);
    let x = vec(random_angle(rng));
    let p = MobiusParams::from_svd(&g.svd());
    let lhs = mobius_general(&square(&x).unwrap(), &p).unwrap();
    let rhs = square(&rescale_linear_general(&x, &g).unwrap()).unwrap();
    unit_dist(&lhs, &rhs)
}

/// Max over a 1024-grid of `|2 f_WC(2φ; λ) − (f_ACG(φ) + f_ACG(φ + π))|`.
pub fn doubling_error(b: f64) -> f64 {
    let acg = AcgParams::circle(b).unwrap();
    let wc = WcParams::centered(lambda_from_b(b)).unwrap();
    circle_nodes(1024)
        .map(|(phi, _)| {
            let x = vec(phi);
            let branches = acg_pdf(&x, &acg).unwrap() + acg_pdf(&-&x, &acg).unwrap();
            let lhs = 2.0 * wc_pdf(Angle::new(2.0 * phi.radians()), &wc);
            (lhs - branches).abs()
        })
        .fold(0.0, nan_max)
}

fn tangent_points(p: usize, rng: &mut ChaCha8Rng) -> Vec<TangentPoint> {
    (0..POINTS_PER_CASE)
        .map(|_| TangentPoint::from_dvector(gaussian(p, 2.0, rng)).unwrap())
        .collect()
}

/// Gnomonic pushforward for one random Σ in each of q = 2, 3, 4. Both `x`
/// and `−x` land on `v`, hence the factor 2.
fn gnomonic_trial(rng: &mut ChaCha8Rng) -> f64 {
    (2..=4)
        .map(|q| {
            let sigma = random_spd(q, 0.1, rng);
            let acg = AcgParams::from_scatter(&sigma).unwrap();
            let t = acg_gnomonic_params(&sigma).unwrap();
            tangent_points(q - 1, rng)
                .iter()
                .map(|v| {
                    let x = gnomonic_inverse(v);
                    let phi = x[0].clamp(-1.0, 1.0).acos();
                    let lhs = 2.0 * acg_pdf(&x, &acg).unwrap() / gnomonic_measure_factor(phi, q).unwrap();
                    rel_err(lhs, mvt_pdf(v.coords(), &t).unwrap())
                })
                .fold(0.0, nan_max)
        })
        .fold(0.0, nan_max)
}

fn random_sc(q: usize, rng: &mut ChaCha8Rng) -> ScParams {
    ScParams::new(rng.random_range(0.0..0.95), random_unit(q, rng)).unwrap()
}

fn sc_pushforward_lhs(y: &UnitVector, p: &ScParams) -> f64 {
    let theta = y[0].clamp(-1.0, 1.0).acos();
    sc_pdf(y, p).unwrap() / stereo_measure_factor(theta, p.dim()).unwrap()
}

/// Stereographic pushforward for one random SC law in each of q = 2, 3, 4.
fn stereo_trial(rng: &mut ChaCha8Rng) -> f64 {
    (2..=4)
        .map(|q| {
            let p = random_sc(q, rng);
            let t = sc_stereo_params(&p);
            tangent_points(q - 1, rng)
                .iter()
                .map(|w| {
                    let y = stereographic_inverse(w);
                    rel_err(sc_pushforward_lhs(&y, &p), mvt_pdf(w.coords(), &t).unwrap())
                })
                .fold(0.0, nan_max)
        })
        .fold(0.0, nan_max)
}

/// `max/min − 1` of a set of positive ratios: zero iff they are all equal.
fn ratio_spread(ratios: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    hi / lo - 1.0
}

/// Gnomonic pushforward with the scatter replaced by `Σ22.1⁻¹`. Returns the
/// smallest, over `cases` random Σ per dimension, of the spread of
/// `f_ACG · cos^q φ / t-density` over the tangent points. A positive value
/// means no normalizing constant can rescue the inverted scatter.
pub fn gnomonic_inverse_scatter_spread(cases: usize, seed: u64) -> f64 {
    (0..cases as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            (2..=4)
                .map(|q| {
                    let sigma = random_spd(q, 0.1, &mut rng);
                    let acg = AcgParams::from_scatter(&sigma).unwrap();
                    let good = acg_gnomonic_params(&sigma).unwrap();
                    let bad = MvtParams::new(good.location().clone(), good.scatter().inverse(), 1.0).unwrap();
                    ratio_spread(tangent_points(q - 1, &mut rng).iter().map(|v| {
                        let x = gnomonic_inverse(v);
                        acg_pdf(&x, &acg).unwrap() * x[0].powi(q as i32) / mvt_pdf(v.coords(), &bad).unwrap()
                    }))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Stereographic pushforward at q = 3 with the SC exponent `q − 1` replaced
/// by `q/2`. Returns the smallest spread of the density ratio over `cases`
/// random laws with `λ ≥ 0.2`.
pub fn stereo_exponent_spread(cases: usize, seed: u64) -> f64 {
    let q = 3;
    (0..cases as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let p = ScParams::new(rng.random_range(0.2..0.95), random_unit(q, &mut rng)).unwrap();
            let t = sc_stereo_params(&p);
            let l = p.lambda();
            ratio_spread(tangent_points(q - 1, &mut rng).iter().map(|w| {
                let y = stereographic_inverse(w);
                let theta = y[0].clamp(-1.0, 1.0).acos();
                let alt = (-ln_surface_area(q) + 0.5 * q as f64 * ((1.0 - l * l) / p_linear(&y, &p)).ln()).exp();
                alt / stereo_measure_factor(theta, q).unwrap() / mvt_pdf(w.coords(), &t).unwrap()
            }))
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// For q = 3, the doubled ACG law with `Ω = diag(b², 1, 1)` against the
/// spherical Cauchy family `SC(λ, e1)`. Returns `min over λ` of the max
/// relative density gap on a latitude-longitude grid, with the λ minimizing it.
pub fn doubled_acg_sc_gap(b: f64) -> (f64, f64) {
    let acg = AcgParams::new(SpdMatrix::from_diagonal(&[b * b, 1.0, 1.0]).unwrap()).unwrap();
    let e1 = UnitVector::north(3).unwrap();
    let rule = SphereRule::sphere2(48, 16);
    let grid: Vec<(UnitVector, f64)> = rule
        .nodes()
        .iter()
        .map(|(y, _)| (y.clone(), doubled_acg_pdf(y, &acg).unwrap()))
        .collect();
    (0..999)
        .into_par_iter()
        .map(|k| {
            let l = k as f64 / 1000.0;
            let sc = ScParams::new(l, e1.clone()).unwrap();
            let gap = grid
                .iter()
                .map(|(y, d)| rel_err(*d, sc_pdf(y, &sc).unwrap()))
                .fold(0.0, nan_max);
            (gap, l)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
}

/// Normalization of WC, ACG and SC at reference parameters plus `trials`
/// random laws of each kind.
fn normalization_error(trials: usize, seed: u64) -> f64 {
    let omegas = [
        SpdMatrix::identity(3),
        SpdMatrix::from_diagonal(&[4.0, 1.0, 0.5]).unwrap(),
        SpdMatrix::from_row_slice(3, &[2.0, 0.3, -0.2, 0.3, 1.0, 0.1, -0.2, 0.1, 0.5]).unwrap(),
    ];
    let mu = |c: &[f64]| UnitVector::normalize(c.to_vec()).unwrap();
    let mut fixed = Vec::new();
    for l in [0.0, 0.5, 0.9] {
        fixed.push(wc_norm(&WcParams::new(l, Angle::new(1.0)).unwrap()));
    }
    for b in [0.2, 1.0, 3.0] {
        fixed.push(acg_norm(&AcgParams::circle(b).unwrap()));
    }
    for o in omegas {
        fixed.push(acg_norm(&AcgParams::new(o).unwrap()));
    }
    for (l, m) in [(0.0, mu(&[1.0, 0.0])), (0.5, mu(&[0.3, -1.0])), (0.9, mu(&[-1.0, 0.2]))] {
        fixed.push(sc_norm(&ScParams::new(l, m).unwrap()));
    }
    for (l, m) in [(0.0, mu(&[1.0, 0.0, 0.0])), (0.3, mu(&[0.2, 0.5, -0.8])), (0.6, mu(&[-0.7, 0.1, 0.4]))] {
        fixed.push(sc_norm(&ScParams::new(l, m).unwrap()));
    }
    let fixed = fixed.into_iter().fold(0.0, nan_max);
    let random = per_trial(trials, seed, |rng| {
        let wc = WcParams::new(rng.random_range(-0.9..0.9), random_angle(rng)).unwrap();
        let acg2 = AcgParams::circle(rng.random_range((0.2f64).ln()..(5.0f64).ln()).exp()).unwrap();
        let acg3 = AcgParams::new(random_spd(3, 1.0, rng)).unwrap();
        let sc2 = ScParams::new(rng.random_range(0.0..0.9), random_unit(2, rng)).unwrap();
        let sc3 = ScParams::new(rng.random_range(0.0..0.6), random_unit(3, rng)).unwrap();
        [wc_norm(&wc), acg_norm(&acg2), acg_norm(&acg3), sc_norm(&sc2), sc_norm(&sc3)]
            .into_iter()
            .fold(0.0, nan_max)
    });
    nan_max(fixed, random)
}

fn wc_norm(p: &WcParams) -> f64 {
    (circle_integral(1024, |t| wc_pdf(t, p)) - 1.0).abs()
}

fn acg_norm(p: &AcgParams) -> f64 {
    let total = if p.dim() == 2 {
        circle_integral(1024, |t| acg_pdf(&vec(t), p).unwrap())
    } else {
        sphere_integral(p.dim(), |x| acg_pdf(x, p).unwrap()).expect("q = 3")
    };
    (total - 1.0).abs()
}

fn sc_norm(p: &ScParams) -> f64 {
    let total = if p.dim() == 2 {
        circle_integral(1024, |t| sc_pdf(&vec(t), p).unwrap())
    } else {
        sphere_integral(p.dim(), |y| sc_pdf(y, p).unwrap()).expect("q = 3")
    };
    (total - 1.0).abs()
}

/// Max over `|m| ≤ 5` of `|∫ e^{imθ} f_WC dθ − λ^{|m|} e^{imμ}|`.
pub fn fourier_error_at(p: &WcParams) -> f64 {
    (-5..=5)
        .map(|m| {
            let re = circle_integral(1024, |t| (m as f64 * t.radians()).cos() * wc_pdf(t, p));
            let im = circle_integral(1024, |t| (m as f64 * t.radians()).sin() * wc_pdf(t, p));
            let exact = wc_fourier_coeff(p, m);
            (re - exact.re).hypot(im - exact.im)
        })
        .fold(0.0, nan_max)
}

fn fourier_error(trials: usize, seed: u64) -> f64 {
    let fixed = [0.2, 0.5, 0.8]
        .into_iter()
        .map(|l| fourier_error_at(&WcParams::centered(l).unwrap()))
        .fold(0.0, nan_max);
    let random = per_trial(trials, seed, |rng| {
        fourier_error_at(&WcParams::new(rng.random_range(-0.9..0.9), random_angle(rng)).unwrap())
    });
    nan_max(fixed, random)
}

/// Starts from each of the four parameterizations of WC(λ) and compares
/// every converted value and the induced densities on a 256-grid.
pub fn table1_error(lambda: f64) -> f64 {
    let b = b_from_lambda(lambda);
    let l2 = lambda * lambda;
    let starts = [
        WcParameterization::Lambda(lambda),
        WcParameterization::B(b),
        WcParameterization::Mu((1.0 - l2).atan2(2.0 * lambda)),
        WcParameterization::Alpha(lambda / (1.0 + l2)),
    ];
    let sets: Vec<_> = starts.iter().map(|&s| param_convert(s).unwrap()).collect();
    let wc = WcParams::centered(lambda).unwrap();
    let mut err: f64 = 0.0;
    for s in &sets {
        let r = &sets[0];
        for (x, y) in [
            (s.abc.a(), r.abc.a()),
            (s.abc.b(), r.abc.b()),
            (s.abc.c(), r.abc.c()),
            (s.lambda, lambda),
            (s.b, b),
            (s.mu, r.mu),
            (s.alpha, r.alpha),
        ] {
            err = nan_max(err, (x - y).abs());
        }
        for (t, _) in circle_nodes(256) {
            let f = wc_pdf(t, &wc);
            err = nan_max(err, rel_err(s.abc.pdf(t), f));
        }
    }
    err
}

/// AR(1) spectral density against WC on a 1024-grid, and the CAR(1)
/// coefficient round trip in both directions.
pub fn spectral_error(lambda: f64) -> f64 {
    let wc = WcParams::centered(lambda).unwrap();
    let grid = circle_nodes(1024)
        .map(|(t, _)| rel_err(ar1_spectral_pdf(t, lambda).unwrap(), wc_pdf(t, &wc)))
        .fold(0.0, nan_max);
    nan_max(grid, car1_round_trip_error(lambda))
}

/// `max(|λ(α(λ)) − λ|, |α(λ(α)) − α|)` with `α = λ/(1 + λ²)`.
pub fn car1_round_trip_error(lambda: f64) -> f64 {
    let alpha = car1_alpha(lambda).unwrap();
    let back = car1_lambda(alpha).unwrap();
    let alpha2 = car1_alpha(back).unwrap();
    (back - lambda).abs().max((alpha2 - alpha).abs())
}

/// Max |z-score| of the empirical `E[cos mΘ]`, `m = 1, 2, 3`, against `λ^m`
/// for each of the three WC samplers with `trials` draws per method.
fn sampler_max_z(trials: usize, seed: u64) -> Result<f64> {
    let p = WcParams::centered(SAMPLER_LAMBDA)?;
    let methods = [WcMethod::Doubling, WcMethod::Stereographic, WcMethod::Wrapping];
    let mut worst: f64 = 0.0;
    for (k, method) in methods.into_iter().enumerate() {
        for z in sampler_z_scores(&p, method, trials, seed, k as u64)? {
            worst = nan_max(worst, z.abs());
        }
    }
    Ok(worst)
}

/// z-scores of the empirical `E[cos mΘ]`, `m = 1, 2, 3`, for one sampler.
/// The variance `Var cos mΘ = (1 − λ^{2m})/2` is exact for WC(λ).
pub fn sampler_z_scores(p: &WcParams, method: WcMethod, n: usize, seed: u64, method_index: u64) -> Result<[f64; 3]> {
    let blocks = n.div_ceil(SAMPLER_BLOCK);
    let sums: Vec<[f64; 3]> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = stream_rng(seed, (method_index << 32) | blk as u64);
            let count = SAMPLER_BLOCK.min(n - blk * SAMPLER_BLOCK);
            let mut s = [0.0; 3];
            for _ in 0..count {
                let t = (sample_wc(p, method, &mut rng)? - p.mu()).radians();
                for (m, acc) in s.iter_mut().enumerate() {
                    *acc += ((m + 1) as f64 * t).cos();
                }
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    let mut z = [0.0; 3];
    let l = p.lambda();
    for (m, zm) in z.iter_mut().enumerate() {
        let total: f64 = sums.iter().map(|s| s[m]).sum();
        let target = l.powi(m as i32 + 1);
        let sd = ((1.0 - l.powi(2 * (m as i32 + 1))) / 2.0 / n as f64).sqrt();
        *zm = (total / n as f64 - target) / sd;
    }
    Ok(z)
}

/// Gnomonic factor against stereographic factor at `2φ` times the doubling
/// factor, relative, on a grid of φ plus `trials` random angles, for
/// q = 2, 3, 4. Also folds in `|doubling(φ, 2) − 2|`.
fn measure_factor_error(trials: usize, seed: u64) -> f64 {
    let at = |phi: f64| {
        (2..=4)
            .map(|q| {
                let g = gnomonic_measure_factor(phi, q).unwrap();
                let sd = stereo_measure_factor(2.0 * phi, q).unwrap() * doubling_measure_factor(phi, q);
                rel_err(sd, g)
            })
            .fold((doubling_measure_factor(phi, 2) - 2.0).abs(), nan_max)
    };
    let grid = (0..1024)
        .map(|k| at(FRAC_PI_2 * k as f64 / 1024.0))
        .fold(0.0, nan_max);
    nan_max(grid, per_trial(trials, seed, |rng| at(rng.random_range(0.0..1.5))))
}

/// `|Q − Q1 − Q_{2.1}| / Q` for a random SPD Σ, split point and vector.
fn qf_trial(rng: &mut ChaCha8Rng) -> f64 {
    let q = rng.random_range(2..=6);
    let sigma = random_spd(q, 0.1, rng);
    let k = rng.random_range(1..q);
    let x = gaussian(q, 1.0, rng);
    let s = qf_split(&x, &sigma, k).unwrap();
    (s.q - s.q1 - s.q21).abs() / s.q
}

/// `|P(double(x)) − xᵀAx|` for random SC parameters and `x`. A is built
/// through a Cholesky factorization, so reaching this point also shows it is
/// positive definite.
fn sc_expansion_trial(rng: &mut ChaCha8Rng) -> f64 {
    let q = rng.random_range(2..=5);
    let p = random_sc(q, rng);
    let a = expand_sc_quadratic(&p);
    let x = random_unit(q, rng);
    let y = double_angle_sphere(&x, &UnitVector::north(q).unwrap()).unwrap();
    (p_linear(&y, &p) - a.quad_form(x.as_dvector())).abs()
}
