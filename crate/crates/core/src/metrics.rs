//! Complete curvature −1 metrics on the model surfaces, length quadrature
//! and numerical checks of curvature and of the distance-decreasing property.
//!
//! Every hyperbolic model here is radially symmetric, so a density is a
//! profile `f(|z|)`; [`ModelSurface::profile`] returns it together with its
//! radial derivative, which is what the shortening code differentiates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Model Riemann surfaces, all realized as plane domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSurface {
    /// `|z| < 1`
    Disc,
    /// `0 < |z| < 1`
    PuncturedDisc,
    /// `inner < |z| < 1`
    Annulus {
        inner: f64,
    },
    Plane,
    /// `z != 0`
    PuncturedPlane,
}

impl ModelSurface {
    pub fn annulus(inner: f64) -> Result<Self> {
        let s = ModelSurface::Annulus { inner };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSurface::Annulus { inner } if !(inner > 0.0 && inner < 1.0) => Err(
                Error::InvalidParameter(format!("annulus inner radius {inner} not in (0, 1)")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ModelSurface::Disc => "disc".into(),
            ModelSurface::PuncturedDisc => "punctured disc".into(),
            ModelSurface::Annulus { inner } => format!("annulus A({inner}, 1)"),
            ModelSurface::Plane => "plane".into(),
            ModelSurface::PuncturedPlane => "punctured plane".into(),
        }
    }

    /// False for the plane and punctured plane, whose invariant metric vanishes.
    pub fn is_hyperbolic(&self) -> bool {
        !matches!(self, ModelSurface::Plane | ModelSurface::PuncturedPlane)
    }

    /// Centres that carry winding information (holes and punctures).
    pub fn holes(&self) -> &'static [Complex64] {
        const ORIGIN: [Complex64; 1] = [Complex64 { re: 0.0, im: 0.0 }];
        match self {
            ModelSurface::Disc | ModelSurface::Plane => &[],
            _ => &ORIGIN,
        }
    }

    /// Isolated punctures, where curves may escape.
    pub fn punctures(&self) -> &'static [Complex64] {
        const ORIGIN: [Complex64; 1] = [Complex64 { re: 0.0, im: 0.0 }];
        match self {
            ModelSurface::PuncturedDisc | ModelSurface::PuncturedPlane => &ORIGIN,
            _ => &[],
        }
    }

    /// Clearance of a point whose modulus ranges over `[lo, hi]`.
    fn clearance_for_moduli(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            ModelSurface::Disc => 1.0 - hi,
            ModelSurface::PuncturedDisc => lo.min(1.0 - hi),
            ModelSurface::Annulus { inner } => (lo - inner).min(1.0 - hi),
            ModelSurface::Plane => f64::INFINITY,
            ModelSurface::PuncturedPlane => lo,
        }
    }

    /// Euclidean distance from `z` to the boundary and punctures; nonpositive outside.
    pub fn clearance(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.clearance_for_moduli(r, r)
    }

    /// Euclidean distance from the segment `[p, q]` to the boundary and punctures.
    pub fn segment_clearance(&self, p: Complex64, q: Complex64) -> f64 {
        self.clearance_for_moduli(segment_distance_to_origin(p, q), p.norm().max(q.norm()))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.clearance(z) > 0.0
    }

    fn check(&self, z: Complex64) -> Result<()> {
        self.validate()?;
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::outside(z, self.name()))
        }
    }

    /// Radial profile `f(rho)` and `f'(rho)`; caller guarantees `rho` is admissible.
    pub fn profile(&self, rho: f64) -> (f64, f64) {
        match *self {
            ModelSurface::Disc => {
                let q = 1.0 - rho * rho;
                (2.0 / q, 4.0 * rho / (q * q))
            }
            ModelSurface::PuncturedDisc => {
                let l = -rho.ln();
                let m = rho * l;
                (1.0 / m, -(l - 1.0) / (m * m))
            }
            ModelSurface::Annulus { inner } => {
                let log_r = inner.ln();
                let k = PI / log_r;
                let c = -k;
                let (s, co) = (k * rho.ln()).sin_cos();
                let m = rho * s;
                (c / m, -c * (s + k * co) / (m * m))
            }
            ModelSurface::Plane | ModelSurface::PuncturedPlane => (0.0, 0.0),
        }
    }

    /// Hyperbolic length per euclidean length at `z`.
    pub fn density(&self, z: Complex64) -> Result<f64> {
        self.check(z)?;
        Ok(self.profile(z.norm()).0)
    }

    /// Density and its euclidean gradient `(d/dx + i d/dy) density`.
    pub fn density_and_gradient(&self, z: Complex64) -> Result<(f64, Complex64)> {
        self.check(z)?;
        let rho = z.norm();
        let (f, df) = self.profile(rho);
        Ok((f, z * (df / rho)))
    }

    /// Closed-form length of the circle `|z| = rho`, traversed once.
    pub fn circle_length(&self, rho: f64) -> Result<f64> {
        self.check(Complex64::new(rho, 0.0))?;
        Ok(2.0 * PI * rho * self.profile(rho).0)
    }

    /// Length of the closed geodesic of an annulus, `2 pi^2 / log(1/inner)`.
    pub fn core_length(&self) -> Option<f64> {
        match *self {
            ModelSurface::Annulus { inner } => Some(2.0 * PI * PI / (1.0 / inner).ln()),
            _ => None,
        }
    }

    /// Radius of the closed geodesic of an annulus.
    pub fn core_radius(&self) -> Option<f64> {
        match *self {
            ModelSurface::Annulus { inner } => Some(inner.sqrt()),
            _ => None,
        }
    }

    /// `K + 1` for `K = -density^{-2} Laplacian(log density)`, five-point stencil.
    pub fn curvature_residual(&self, z: Complex64, step: f64) -> Result<f64> {
        if !self.is_hyperbolic() {
            return Err(Error::NonHyperbolicSurface(self.name()));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step {step} must be positive"
            )));
        }
        self.check(z)?;
        let available = self.clearance(z);
        if available <= 4.0 * step {
            return Err(Error::InsufficientClearance {
                needed: 4.0 * step,
                available,
            });
        }
        let u = |w: Complex64| self.profile(w.norm()).0.ln();
        let h = Complex64::new(step, 0.0);
        let v = Complex64::new(0.0, step);
        let centre = u(z);
        let laplacian = (u(z + h) + u(z - h) + u(z + v) + u(z - v) - 4.0 * centre) / (step * step);
        let lambda = centre.exp();
        Ok(-laplacian / (lambda * lambda) + 1.0)
    }
}

fn segment_distance_to_origin(p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return p.norm();
    }
    let t = (-(p.re * d.re + p.im * d.im) / len2).clamp(0.0, 1.0);
    (p + d * t).norm()
}

/// The symmetric annulus `A(1/r, r)` handled through the chart `w -> w / r`
/// onto the normalized annulus `A(1/r^2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricAnnulus {
    log_r: f64,
}

impl SymmetricAnnulus {
    pub fn new(r: f64) -> Result<Self> {
        Self::from_log_radius(r.ln())
    }

    pub fn from_log_radius(log_r: f64) -> Result<Self> {
        if !(log_r > 0.0) || !log_r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "symmetric annulus needs r > 1, got log r = {log_r}"
            )));
        }
        Ok(SymmetricAnnulus { log_r })
    }

    pub fn log_radius(&self) -> f64 {
        self.log_r
    }

    pub fn radius(&self) -> f64 {
        self.log_r.exp()
    }

    /// `A(1/r^2, 1)`.
    pub fn normalized(&self) -> ModelSurface {
        ModelSurface::Annulus {
            inner: (-2.0 * self.log_r).exp(),
        }
    }

    pub fn to_normalized(&self, w: Complex64) -> Complex64 {
        w * (-self.log_r).exp()
    }

    pub fn from_normalized(&self, z: Complex64) -> Complex64 {
        z * self.log_r.exp()
    }

    pub fn contains(&self, w: Complex64) -> bool {
        w.norm().ln().abs() < self.log_r
    }

    /// `(pi / (2 log r)) / (|w| cos(pi log|w| / (2 log r)))`.
    pub fn density(&self, w: Complex64) -> Result<f64> {
        if !self.contains(w) {
            return Err(Error::outside(
                w,
                format!("A(1/r, r), log r = {}", self.log_r),
            ));
        }
        let rho = w.norm();
        let k = PI / (2.0 * self.log_r);
        Ok(k / (rho * (k * rho.ln()).cos()))
    }

    /// Length of the unit circle, `pi^2 / log r`.
    pub fn unit_circle_length(&self) -> f64 {
        PI * PI / self.log_r
    }
}

/// Curves accepted by [`curve_length`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    Polyline {
        vertices: Vec<Complex64>,
        closed: bool,
    },
    /// Round circle traversed `turns` times; negative turns run clockwise.
    Circle {
        center: Complex64,
        radius: f64,
        turns: i32,
    },
    Segment {
        from: Complex64,
        to: Complex64,
    },
}

impl Curve {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Curve::Circle {
            center,
            radius,
            turns: 1,
        }
    }

    pub fn segment(from: Complex64, to: Complex64) -> Self {
        Curve::Segment { from, to }
    }

    /// Straight edges of a polyline (including the closing edge).
    pub fn edges(&self) -> Vec<(Complex64, Complex64)> {
        match self {
            Curve::Polyline { vertices, closed } => {
                let n = vertices.len();
                let m = if *closed { n } else { n.saturating_sub(1) };
                (0..m)
                    .map(|i| (vertices[i], vertices[(i + 1) % n]))
                    .collect()
            }
            Curve::Segment { from, to } => vec![(*from, *to)],
            Curve::Circle { .. } => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Curve::Polyline { vertices, closed } => {
                let min = if *closed { 3 } else { 2 };
                if vertices.len() < min {
                    return Err(Error::DegenerateCurve(format!(
                        "polyline needs at least {min} vertices"
                    )));
                }
                if self.edges().iter().any(|(p, q)| p == q) {
                    return Err(Error::DegenerateCurve("repeated consecutive vertex".into()));
                }
            }
            Curve::Circle { radius, turns, .. } => {
                if !(*radius > 0.0) || *turns == 0 {
                    return Err(Error::DegenerateCurve(
                        "circle needs positive radius and nonzero turns".into(),
                    ));
                }
            }
            Curve::Segment { from, to } => {
                if from == to {
                    return Err(Error::DegenerateCurve("segment of zero length".into()));
                }
            }
        }
        Ok(())
    }

    /// The same curve scaled about the origin.
    pub fn scaled(&self, factor: f64) -> Curve {
        match self {
            Curve::Polyline { vertices, closed } => Curve::Polyline {
                vertices: vertices.iter().map(|z| z * factor).collect(),
                closed: *closed,
            },
            Curve::Circle {
                center,
                radius,
                turns,
            } => Curve::Circle {
                center: center * factor,
                radius: radius * factor,
                turns: *turns,
            },
            Curve::Segment { from, to } => Curve::Segment {
                from: from * factor,
                to: to * factor,
            },
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Curve::Polyline { closed, .. } => *closed,
            Curve::Circle { .. } => true,
            Curve::Segment { .. } => false,
        }
    }

    /// Winding number about `center`; `None` for open curves or curves
    /// through `center`.
    pub fn winding_about(&self, center: Complex64) -> Option<i32> {
        match self {
            Curve::Circle {
                center: c,
                radius,
                turns,
            } => {
                let d = (center - c).norm();
                if d == *radius {
                    None
                } else if d < *radius {
                    Some(*turns)
                } else {
                    Some(0)
                }
            }
            Curve::Polyline {
                vertices,
                closed: true,
            } => crate::curves::winding_number(vertices, center).ok(),
            _ => None,
        }
    }

    /// Minimum clearance of the whole curve from the surface's boundary.
    pub fn clearance(&self, surface: &ModelSurface) -> f64 {
        match self {
            Curve::Circle { center, radius, .. } => {
                let c = center.norm();
                surface.clearance_for_moduli((c - radius).abs(), c + radius)
            }
            _ => self
                .edges()
                .iter()
                .map(|(p, q)| surface.segment_clearance(*p, *q))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Composite Gauss–Legendre settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub order: usize,
    /// Pieces per straight edge.
    pub edge_pieces: usize,
    /// Pieces for a full parametrized circle.
    pub smooth_pieces: usize,
}

impl Quadrature {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.edge_pieces == 0 || self.smooth_pieces == 0 {
            return Err(Error::InvalidParameter(
                "quadrature sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            order: 8,
            edge_pieces: 1,
            smooth_pieces: 64,
        }
    }
}

/// Hyperbolic length `int density(gamma) |gamma'|`.
pub fn curve_length(surface: &ModelSurface, curve: &Curve, quad: &Quadrature) -> Result<f64> {
    surface.validate()?;
    curve.validate()?;
    quad.validate()?;
    if !(curve.clearance(surface) > 0.0) {
        return Err(Error::DegenerateCurve(format!(
            "curve touches the boundary or a puncture of the {}",
            surface.name()
        )));
    }
    if !surface.is_hyperbolic() {
        return Ok(0.0);
    }
    integrate_along(curve, quad, |z, v| surface.profile(z.norm()).0 * v.norm())
}

/// `int f(gamma(s), gamma'(s)) ds` by composite Gauss–Legendre over the
/// curve's natural pieces.
pub fn integrate_along<F>(curve: &Curve, quad: &Quadrature, f: F) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> f64,
{
    curve.validate()?;
    quad.validate()?;
    let rule = GaussLegendre::new(quad.order);
    let total = match curve {
        Curve::Circle {
            center,
            radius,
            turns,
        } => {
            let sign = turns.signum() as f64;
            let span = 2.0 * PI * turns.unsigned_abs() as f64;
            let pieces = quad.smooth_pieces * turns.unsigned_abs() as usize;
            rule.integrate_composite(0.0, span, pieces, |s| {
                let e = Complex64::from_polar(1.0, sign * s);
                let velocity = Complex64::new(0.0, sign) * e * *radius;
                f(center + e * *radius, velocity)
            })
        }
        _ => curve
            .edges()
            .iter()
            .map(|(p, q)| {
                let d = q - p;
                rule.integrate_composite(0.0, 1.0, quad.edge_pieces, |s| f(p + d * s, d))
            })
            .sum(),
    };
    Ok(total)
}

/// Holomorphic maps between model surfaces with closed-form derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolomorphicMap {
    Identity {
        surface: ModelSurface,
    },
    /// Universal covering `z -> exp(-(1 + z)/(1 - z))` of the punctured disc.
    PunctureCovering,
    /// `z -> exp(i alpha z)` from the disc into `A(1/r, r)`, read in the
    /// normalized chart of `A(1/r^2, 1)`. Requires `0 < alpha <= log r`.
    ExpIntoAnnulus {
        alpha: f64,
        log_r: f64,
    },
}

impl HolomorphicMap {
    pub fn exp_into_annulus(alpha: f64, log_r: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= log_r) {
            return Err(Error::InvalidParameter(format!(
                "exp(i alpha z) maps the disc into A(1/r, r) only for 0 < alpha <= log r \
                 (alpha = {alpha}, log r = {log_r})"
            )));
        }
        Ok(HolomorphicMap::ExpIntoAnnulus { alpha, log_r })
    }

    pub fn source(&self) -> ModelSurface {
        match self {
            HolomorphicMap::Identity { surface } => *surface,
            _ => ModelSurface::Disc,
        }
    }

    pub fn target(&self) -> ModelSurface {
        match self {
            HolomorphicMap::Identity { surface } => *surface,
            HolomorphicMap::PunctureCovering => ModelSurface::PuncturedDisc,
            HolomorphicMap::ExpIntoAnnulus { log_r, .. } => ModelSurface::Annulus {
                inner: (-2.0 * log_r).exp(),
            },
        }
    }

    /// Image and complex derivative at `z`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::from(1.0);
        match *self {
            HolomorphicMap::Identity { .. } => (z, one),
            HolomorphicMap::PunctureCovering => {
                let w = (-(one + z) / (one - z)).exp();
                let dz = one - z;
                (w, w * (-2.0) / (dz * dz))
            }
            HolomorphicMap::ExpIntoAnnulus { alpha, log_r } => {
                let i_alpha = Complex64::new(0.0, alpha);
                let w = (i_alpha * z - log_r).exp();
                (w, i_alpha * w)
            }
        }
    }
}

/// `max over grid of density_Y(f(z)) |f'(z)| - density_X(z)`; nonpositive
/// exactly when `f` does not increase hyperbolic lengths on the grid.
pub fn schwarz_pick_check(map: &HolomorphicMap, grid: &[Complex64]) -> Result<f64> {
    let (source, target) = (map.source(), map.target());
    let mut worst = f64::NEG_INFINITY;
    for &z in grid {
        let lx = source.density(z)?;
        let (w, dw) = map.eval(z);
        if !target.contains(w) {
            return Err(Error::ImageOutsideTarget {
                re: z.re,
                im: z.im,
                domain: target.name(),
            });
        }
        let ly = target.profile(w.norm()).0;
        worst = worst.max(ly * dw.norm() - lx);
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    Ok(worst)
}
