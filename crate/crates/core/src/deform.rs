//! Explicit deformation families: radial maps of the disc, metric
//! interpolation on an annulus collar, and paths of Schottky representations.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{
    ping_pong_certificate, truncated_spectrum, ConjugacyClassWord, SchottkyRepresentation,
    TruncatedLengthSpectrum,
};
use crate::metrics::{integrate_along, Curve, ModelSurface, Quadrature, SymmetricAnnulus};
use crate::moebius::translation_length_from_trace;

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in [0, 1], got {t}"
        )));
    }
    Ok(())
}

/// `n` equally spaced parameters from 0 to 1 inclusive.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    1.0
                } else {
                    k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialVariant {
    /// `rho_t(r) = r + t tan(pi r / 2)`
    Phi,
    /// `rho*_t(r) = tan((pi / 2) r / (1 + t))`
    PhiStar,
}

/// Radial homeomorphism `z -> z rho(|z|) / |z|` of the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialFamily {
    pub variant: RadialVariant,
    pub t: f64,
}

impl RadialFamily {
    pub fn new(variant: RadialVariant, t: f64) -> Result<Self> {
        check_t(t)?;
        Ok(RadialFamily { variant, t })
    }

    fn check_r(r: f64) -> Result<()> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "radius must lie in [0, 1), got {r}"
            )));
        }
        Ok(())
    }

    pub fn rho(&self, r: f64) -> Result<f64> {
        Self::check_r(r)?;
        Ok(match self.variant {
            RadialVariant::Phi => r + self.t * (FRAC_PI_2 * r).tan(),
            RadialVariant::PhiStar => (FRAC_PI_2 * r / (1.0 + self.t)).tan(),
        })
    }

    pub fn rho_derivative(&self, r: f64) -> Result<f64> {
        Self::check_r(r)?;
        let sec2 = |x: f64| 1.0 / (x.cos() * x.cos());
        Ok(match self.variant {
            RadialVariant::Phi => 1.0 + self.t * FRAC_PI_2 * sec2(FRAC_PI_2 * r),
            RadialVariant::PhiStar => {
                let k = FRAC_PI_2 / (1.0 + self.t);
                k * sec2(k * r)
            }
        })
    }

    pub fn radial_map(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if r >= 1.0 || !r.is_finite() {
            return Err(Error::outside(z, "unit disc"));
        }
        if r == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(z * (self.rho(r)? / r))
    }

    /// Radius of the image disc, `None` when the image is the whole plane.
    pub fn image_radius(&self) -> Option<f64> {
        match (self.variant, self.t == 0.0) {
            (RadialVariant::Phi, true) => Some(1.0),
            (RadialVariant::Phi, false) => None,
            (RadialVariant::PhiStar, true) => None,
            (RadialVariant::PhiStar, false) => Some((FRAC_PI_2 / (1.0 + self.t)).tan()),
        }
    }
}

/// Hyperbolic length of the unit circle in `A(1/r, r)`, `pi^2 / log r`.
pub fn mu(r: f64) -> Result<f64> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("mu needs r > 1, got {r}")));
    }
    mu_from_log(r.ln())
}

/// [`mu`] as a function of `log r`, for radii beyond `f64` range.
pub fn mu_from_log(log_r: f64) -> Result<f64> {
    if !(log_r > 0.0) || !log_r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mu needs log r > 0, got {log_r}"
        )));
    }
    Ok(PI * PI / log_r)
}

/// Upper bound `2 artanh(2 pi / alpha)` for `mu(r)`: `exp(i alpha z)` maps
/// the disc into `A(1/r, r)` once `log r >= alpha` and wraps `[0, 2 pi / alpha]`
/// once around the core circle.
pub fn mu_upper_bound(alpha: f64, r: f64) -> Result<f64> {
    if !(alpha > 2.0 * PI) {
        return Err(Error::InvalidParameter(format!(
            "alpha must exceed 2 pi, got {alpha}"
        )));
    }
    if !(r > 1.0 && r.ln() >= alpha) {
        return Err(Error::InvalidParameter(format!(
            "exp(i alpha z) leaves A(1/r, r) unless log r >= alpha (r = {r}, alpha = {alpha})"
        )));
    }
    Ok(2.0 * (2.0 * PI / alpha).atanh())
}

/// `chi(u)` with `u = |log|w||`: 1 up to `inner`, 0 from `outer`, quintic
/// smootherstep in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub fn value(&self, u: f64) -> f64 {
        if u <= self.inner {
            return 1.0;
        }
        if u >= self.outer {
            return 0.0;
        }
        let s = (self.outer - u) / (self.outer - self.inner);
        s * s * s * (s * (6.0 * s - 15.0) + 10.0)
    }
}

/// Metric on the collar chart before interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseMetric {
    Euclidean,
    /// `E dx^2 + 2F dx dy + G dy^2` with constant coefficients.
    Constant {
        e: f64,
        f: f64,
        g: f64,
    },
}

impl BaseMetric {
    fn validate(&self) -> Result<()> {
        if let BaseMetric::Constant { e, f, g } = *self {
            if !(e > 0.0 && g > 0.0 && e * g - f * f > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "base metric (E, F, G) = ({e}, {f}, {g}) is not positive definite"
                )));
            }
        }
        Ok(())
    }

    fn quadratic(&self, v: Complex64) -> f64 {
        match *self {
            BaseMetric::Euclidean => v.norm_sqr(),
            BaseMetric::Constant { e, f, g } => {
                e * v.re * v.re + 2.0 * f * v.re * v.im + g * v.im * v.im
            }
        }
    }
}

/// `H_t = (1 - t chi) h + t chi rho^2` on the chart `A(1/r, r)`, where `rho`
/// is the hyperbolic density of that annulus and `chi` is 1 on `A(1/r', r')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollarInterpolation {
    log_r: f64,
    log_r_inner: f64,
    cutoff: Cutoff,
    base: BaseMetric,
}

/// One row of [`collar_lengths`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollarSample {
    pub t: f64,
    pub riemannian_length: f64,
    /// Kobayashi upper bound `|winding| mu(r')`, present at `t = 1` only.
    pub kobayashi_upper_bound: Option<f64>,
}

impl CollarInterpolation {
    /// Cutoff plateau `log r'`, support ending halfway to `log r`.
    pub fn new(r: f64, r_inner: f64, base: BaseMetric) -> Result<Self> {
        if !(r > r_inner && r_inner > 1.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "collar radii need r > r' > 1, got r = {r}, r' = {r_inner}"
            )));
        }
        let (a, b) = (r_inner.ln(), r.ln());
        Self::with_cutoff(
            r,
            r_inner,
            Cutoff {
                inner: a,
                outer: 0.5 * (a + b),
            },
            base,
        )
    }

    pub fn with_cutoff(r: f64, r_inner: f64, cutoff: Cutoff, base: BaseMetric) -> Result<Self> {
        if !(r > r_inner && r_inner > 1.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "collar radii need r > r' > 1, got r = {r}, r' = {r_inner}"
            )));
        }
        let (log_r, log_r_inner) = (r.ln(), r_inner.ln());
        if !(cutoff.inner >= log_r_inner && cutoff.outer > cutoff.inner && cutoff.outer < log_r) {
            return Err(Error::InvalidParameter(format!(
                "cutoff needs log r' <= inner < outer < log r, got inner = {}, outer = {}",
                cutoff.inner, cutoff.outer
            )));
        }
        base.validate()?;
        Ok(CollarInterpolation {
            log_r,
            log_r_inner,
            cutoff,
            base,
        })
    }

    pub fn r(&self) -> f64 {
        self.log_r.exp()
    }

    pub fn r_inner(&self) -> f64 {
        self.log_r_inner.exp()
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn base(&self) -> BaseMetric {
        self.base
    }

    pub fn chart(&self) -> SymmetricAnnulus {
        SymmetricAnnulus::from_log_radius(self.log_r).expect("log r is positive")
    }

    pub fn chi(&self, w: Complex64) -> f64 {
        self.cutoff.value(w.norm().ln().abs())
    }

    /// `v^T H_t(w) v`.
    pub fn quadratic_form(&self, w: Complex64, v: Complex64, t: f64) -> Result<f64> {
        let rho = self.chart().density(w)?;
        let tc = t * self.chi(w);
        Ok((1.0 - tc) * self.base.quadratic(v) + tc * rho * rho * v.norm_sqr())
    }

    fn check_curve(&self, curve: &Curve) -> Result<()> {
        curve.validate()?;
        let chart = self.chart();
        let inside = curve
            .scaled((-self.log_r).exp())
            .clearance(&chart.normalized())
            > 0.0;
        if !inside {
            return Err(Error::DegenerateCurve(format!(
                "curve leaves the collar chart A(1/r, r), r = {}",
                self.r()
            )));
        }
        Ok(())
    }

    pub fn riemannian_length(&self, curve: &Curve, t: f64, quad: &Quadrature) -> Result<f64> {
        check_t(t)?;
        self.check_curve(curve)?;
        integrate_along(curve, quad, |w, v| {
            self.quadratic_form(w, v, t)
                .map(f64::sqrt)
                .unwrap_or(f64::NAN)
        })
    }

    /// `d/dt` of [`Self::riemannian_length`].
    pub fn length_derivative(&self, curve: &Curve, t: f64, quad: &Quadrature) -> Result<f64> {
        check_t(t)?;
        self.check_curve(curve)?;
        let chart = self.chart();
        integrate_along(curve, quad, |w, v| {
            let rho = chart.density(w).unwrap_or(f64::NAN);
            let q = self.quadratic_form(w, v, t).unwrap_or(f64::NAN);
            let diff = rho * rho * v.norm_sqr() - self.base.quadratic(v);
            if q > 0.0 {
                self.chi(w) * diff / (2.0 * q.sqrt())
            } else {
                0.0
            }
        })
    }

    /// Kobayashi bound at `t = 1` for a closed curve inside `A(1/r', r')`.
    pub fn kobayashi_upper_bound(&self, curve: &Curve) -> Result<Option<f64>> {
        let winding = match curve.winding_about(Complex64::new(0.0, 0.0)) {
            Some(w) => w,
            None => return Ok(None),
        };
        Ok(Some(winding.unsigned_abs() as f64 * mu(self.r_inner())?))
    }
}

/// Lengths of `curve` under `H_t` on `t_grid`, with the `t = 1` bound.
pub fn collar_lengths(
    interp: &CollarInterpolation,
    curve: &Curve,
    t_grid: &[f64],
    quad: &Quadrature,
) -> Result<Vec<CollarSample>> {
    let bound = interp.kobayashi_upper_bound(curve)?;
    t_grid
        .iter()
        .map(|&t| {
            Ok(CollarSample {
                t,
                riemannian_length: interp.riemannian_length(curve, t, quad)?,
                kobayashi_upper_bound: if t == 1.0 { bound } else { None },
            })
        })
        .collect()
}

/// `l(t) = start + t (end - start)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthSchedule {
    pub start: f64,
    pub end: f64,
}

impl LengthSchedule {
    pub fn linear(start: f64, end: f64) -> Self {
        LengthSchedule { start, end }
    }

    pub fn constant(value: f64) -> Self {
        LengthSchedule {
            start: value,
            end: value,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.start + t * (self.end - self.start)
    }
}

/// Generators moved along their own axes by translation-length schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationPath {
    base: SchottkyRepresentation,
    schedules: Vec<LengthSchedule>,
}

impl RepresentationPath {
    pub fn new(base: SchottkyRepresentation, schedules: Vec<LengthSchedule>) -> Result<Self> {
        if schedules.len() != base.rank() {
            return Err(Error::InvalidParameter(format!(
                "{} schedules for {} generators",
                schedules.len(),
                base.rank()
            )));
        }
        for (i, (g, s)) in base.generators().iter().zip(&schedules).enumerate() {
            if !(s.start > 0.0 && s.end > 0.0) || !s.start.is_finite() || !s.end.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "schedule for x{} must stay positive",
                    i + 1
                )));
            }
            let l0 = g.translation_length().unwrap_or(f64::NAN);
            if !((l0 - s.start).abs() <= 1e-9 * l0.max(1.0)) {
                return Err(Error::InvalidParameter(format!(
                    "schedule for x{} starts at {} but the generator has length {l0}",
                    i + 1,
                    s.start
                )));
            }
        }
        Ok(RepresentationPath { base, schedules })
    }

    /// Perpendicular pair with `l1(t) = 6 + t`, `l2 = 6`.
    pub fn standard() -> Self {
        let base = SchottkyRepresentation::perpendicular_pair(6.0, 6.0).expect("valid lengths");
        Self::new(
            base,
            vec![
                LengthSchedule::linear(6.0, 7.0),
                LengthSchedule::constant(6.0),
            ],
        )
        .expect("schedules match the base")
    }

    pub fn base(&self) -> &SchottkyRepresentation {
        &self.base
    }

    pub fn schedules(&self) -> &[LengthSchedule] {
        &self.schedules
    }

    /// The representation at `t`, re-certified by ping-pong.
    pub fn at(&self, t: f64) -> Result<SchottkyRepresentation> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(self.base.clone());
        }
        let gens = self
            .base
            .generators()
            .iter()
            .zip(&self.schedules)
            .map(|(g, s)| g.with_translation_length(s.value(t)))
            .collect::<Result<Vec<_>>>()?;
        let rep = SchottkyRepresentation::new(gens)?;
        let cert = ping_pong_certificate(&rep)?;
        if let Some(v) = cert.violation {
            return Err(Error::CertificationFailed(format!("at t = {t}: {v}")));
        }
        Ok(rep)
    }
}

/// Endpoints of `r(t) = exp(-(a + t (b - a)))` for the annulus `A(r(t), 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusFamily {
    pub log_inverse_start: f64,
    pub log_inverse_end: f64,
}

impl AnnulusFamily {
    pub fn new(log_inverse_start: f64, log_inverse_end: f64) -> Result<Self> {
        if !(log_inverse_start > 0.0 && log_inverse_end > 0.0)
            || !log_inverse_start.is_finite()
            || !log_inverse_end.is_finite()
        {
            return Err(Error::InvalidParameter(
                "annulus family needs positive finite log(1/r) at both ends".into(),
            ));
        }
        Ok(AnnulusFamily {
            log_inverse_start,
            log_inverse_end,
        })
    }

    /// `r(t) = exp(-2 pi^2 (1 + t))`, so that `lambda(t) = 1 / (1 + t)`.
    pub fn standard() -> Self {
        AnnulusFamily {
            log_inverse_start: 2.0 * PI * PI,
            log_inverse_end: 4.0 * PI * PI,
        }
    }

    pub fn log_inverse_radius(&self, t: f64) -> f64 {
        self.log_inverse_start + t * (self.log_inverse_end - self.log_inverse_start)
    }

    pub fn surface_at(&self, t: f64) -> Result<ModelSurface> {
        check_t(t)?;
        ModelSurface::annulus((-self.log_inverse_radius(t)).exp())
    }

    /// Stable length of the core class, `2 pi^2 / log(1/r(t))`.
    pub fn lambda(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(2.0 * PI * PI / self.log_inverse_radius(t))
    }

    /// The cyclic deck group of the annulus at `t`.
    pub fn representation_at(&self, t: f64) -> Result<SchottkyRepresentation> {
        SchottkyRepresentation::from_axes(&[(0.0, self.lambda(t)?)])
    }
}

/// Either kind of one-parameter family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeformationFamily {
    Annulus(AnnulusFamily),
    Representation(RepresentationPath),
}

impl DeformationFamily {
    pub fn representation_at(&self, t: f64) -> Result<SchottkyRepresentation> {
        match self {
            DeformationFamily::Annulus(a) => a.representation_at(t),
            DeformationFamily::Representation(p) => p.at(t),
        }
    }

    pub fn spectrum_at(&self, t: f64, max_word_length: usize) -> Result<TruncatedLengthSpectrum> {
        truncated_spectrum(&self.representation_at(t)?, max_word_length)
    }

    /// Stable length of `class` at `t`.
    pub fn lambda(&self, class: &ConjugacyClassWord, t: f64) -> Result<f64> {
        match self {
            DeformationFamily::Annulus(a) => {
                if class.rank_used() > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "the annulus group has one generator, class {class} uses more"
                    )));
                }
                Ok(class.len() as f64 * a.lambda(t)?)
            }
            DeformationFamily::Representation(p) => {
                let rep = p.at(t)?;
                if class.rank_used() > rep.rank() {
                    return Err(Error::InvalidParameter(format!(
                        "class {class} uses more than {} generators",
                        rep.rank()
                    )));
                }
                let m = class.evaluate(rep.generators())?;
                Ok(translation_length_from_trace(m.trace().abs()))
            }
        }
    }
}

/// `(t, lambda(t))` over `t_grid`; the class must have positive length at 0.
pub fn lambda_of_t(
    family: &DeformationFamily,
    class: &ConjugacyClassWord,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let l0 = family.lambda(class, 0.0)?;
    if !(l0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "class {class} has stable length {l0} at t = 0"
        )));
    }
    t_grid
        .iter()
        .map(|&t| Ok((t, family.lambda(class, t)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radial_examples() {
        let id = RadialFamily::new(RadialVariant::Phi, 0.0).unwrap();
        let z = Complex64::new(0.3, -0.4);
        assert_eq!(id.radial_map(z).unwrap(), z);
        let star = RadialFamily::new(RadialVariant::PhiStar, 0.0).unwrap();
        assert_abs_diff_eq!(
            star.radial_map(Complex64::new(0.5, 0.0)).unwrap().norm(),
            1.0,
            epsilon = 1e-15
        );
        let phi = RadialFamily::new(RadialVariant::Phi, 1.0).unwrap();
        assert!(
            phi.radial_map(Complex64::new(0.0, 1.0 - 1e-9))
                .unwrap()
                .norm()
                > 1e8
        );
        assert!(phi.radial_map(Complex64::new(1.0, 0.0)).is_err());
        assert_eq!(
            phi.radial_map(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(RadialFamily::new(RadialVariant::Phi, 1.5).is_err());
    }

    #[test]
    fn image_radii() {
        let star = RadialFamily::new(RadialVariant::PhiStar, 1.0).unwrap();
        assert_abs_diff_eq!(star.image_radius().unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(
            RadialFamily::new(RadialVariant::Phi, 0.2)
                .unwrap()
                .image_radius(),
            None
        );
    }

    #[test]
    fn mu_examples() {
        assert_abs_diff_eq!(mu(PI.exp()).unwrap(), PI, epsilon = 1e-14);
        assert!(mu(1.0).is_err());
        assert!(mu_from_log(1000.0).unwrap() < 0.01);
        let bound = mu_upper_bound(3.0 * PI, (4.0 * PI).exp()).unwrap();
        assert_abs_diff_eq!(bound, 5f64.ln(), epsilon = 1e-14);
        assert!(mu((4.0 * PI).exp()).unwrap() <= bound);
        assert!(mu_upper_bound(PI, 100.0).is_err());
    }

    #[test]
    fn cutoff_shape() {
        let c = Cutoff {
            inner: 1.0,
            outer: 2.0,
        };
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(2.5), 0.0);
        assert_abs_diff_eq!(c.value(1.5), 0.5, epsilon = 1e-15);
        let mut prev = 1.0;
        for k in 0..=100 {
            let v = c.value(1.0 + k as f64 / 100.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn collar_bounds_and_endpoints() {
        let interp =
            CollarInterpolation::new((8.0 * PI).exp(), (4.0 * PI).exp(), BaseMetric::Euclidean)
                .unwrap();
        let curve = Curve::circle(Complex64::new(0.0, 0.0), 1.0);
        let quad = Quadrature::default();
        let rows = collar_lengths(&interp, &curve, &[0.0, 0.5, 1.0], &quad).unwrap();
        assert_abs_diff_eq!(rows[0].riemannian_length, 2.0 * PI, epsilon = 1e-12);
        assert_eq!(rows[0].kobayashi_upper_bound, None);
        assert_abs_diff_eq!(
            rows[2].kobayashi_upper_bound.unwrap(),
            PI / 4.0,
            epsilon = 1e-14
        );
        // chi = 1 on the unit circle, so H_1 is the chart's hyperbolic metric there
        assert_abs_diff_eq!(rows[2].riemannian_length, PI / 8.0, epsilon = 1e-12);
        let outside = Curve::circle(Complex64::new(0.0, 0.0), (9.0 * PI).exp());
        assert!(collar_lengths(&interp, &outside, &[0.0], &quad).is_err());
    }

    #[test]
    fn collar_parameter_checks() {
        assert!(CollarInterpolation::new(2.0, 3.0, BaseMetric::Euclidean).is_err());
        let bad = BaseMetric::Constant {
            e: 1.0,
            f: 2.0,
            g: 1.0,
        };
        assert!(CollarInterpolation::new(9.0, 3.0, bad).is_err());
        let cut = Cutoff {
            inner: 0.5,
            outer: 1.0,
        };
        assert!(CollarInterpolation::with_cutoff(9.0, 3.0, cut, BaseMetric::Euclidean).is_err());
    }

    #[test]
    fn representation_path_examples() {
        let path = RepresentationPath::standard();
        assert_eq!(path.at(0.0).unwrap(), *path.base());
        let one = path.at(1.0).unwrap();
        assert_abs_diff_eq!(
            one.generators()[0].translation_length().unwrap(),
            7.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            one.generators()[1].translation_length().unwrap(),
            6.0,
            epsilon = 1e-10
        );
        let base = SchottkyRepresentation::perpendicular_pair(6.0, 6.0).unwrap();
        assert!(
            RepresentationPath::new(base.clone(), vec![LengthSchedule::constant(5.0); 2]).is_err()
        );
        let shrinking =
            RepresentationPath::new(base, vec![LengthSchedule::linear(6.0, 0.5); 2]).unwrap();
        let r = shrinking.at(1.0);
        assert!(matches!(r, Err(Error::CertificationFailed(_))), "{r:?}");
    }

    #[test]
    fn lambda_examples() {
        let fam = DeformationFamily::Annulus(AnnulusFamily::standard());
        let x1: ConjugacyClassWord = "x1".parse().unwrap();
        let rows = lambda_of_t(&fam, &x1, &uniform_grid(3)).unwrap();
        assert_abs_diff_eq!(rows[0].1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rows[1].1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rows[2].1, 0.5, epsilon = 1e-15);
        let path = DeformationFamily::Representation(RepresentationPath::standard());
        let rows = lambda_of_t(&path, &x1, &[0.0, 0.25, 1.0]).unwrap();
        for (t, l) in rows {
            assert_abs_diff_eq!(l, 6.0 + t, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = uniform_grid(101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(g[50], 0.5);
    }
}
