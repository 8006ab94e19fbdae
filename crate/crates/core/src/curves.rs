//! Closed polylines on model surfaces and homotopy-preserving shortening.
//!
//! The discrete length of a polyline is the sum over its straight edges of
//! the Gauss–Legendre integral of the density. [`shorten`] runs a
//! preconditioned gradient descent on that functional:
//!
//! * the Euclidean gradient is rescaled by the inverse density at each vertex
//!   and smoothed by `(I + s L)^{-1}`, `L` the cyclic second difference, so
//!   step sizes do not depend on the scale of the curve or its resolution;
//! * every step is capped at half the clearance between the polyline and the
//!   holes and boundary of the surface, so no edge can sweep across a
//!   puncture and the winding numbers are invariant along the run;
//! * step sizes come from Armijo backtracking, so the length trace never
//!   increases.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{Curve, ModelSurface};
use crate::quadrature::GaussLegendre;

pub const MIN_VERTICES: usize = 8;

/// Discrete closed curve on a model surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedPolyline {
    vertices: Vec<Complex64>,
    surface: ModelSurface,
}

impl ClosedPolyline {
    pub fn new(vertices: Vec<Complex64>, surface: ModelSurface) -> Result<Self> {
        surface.validate()?;
        if vertices.len() < MIN_VERTICES {
            return Err(Error::DegenerateCurve(format!(
                "closed polyline needs at least {MIN_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        let curve = ClosedPolyline { vertices, surface };
        if curve.edges().any(|(p, q)| p == q) {
            return Err(Error::DegenerateCurve("repeated consecutive vertex".into()));
        }
        if let Some(z) = curve.vertices.iter().find(|z| !surface.contains(**z)) {
            return Err(Error::outside(*z, surface.name()));
        }
        if !(curve.clearance() > 0.0) {
            return Err(Error::DegenerateCurve(
                "an edge touches the boundary or a puncture".into(),
            ));
        }
        Ok(curve)
    }

    /// `n` equally spaced vertices on a round circle; `orientation` is +1 or -1.
    pub fn circle(
        surface: ModelSurface,
        center: Complex64,
        radius: f64,
        n: usize,
        orientation: i32,
    ) -> Result<Self> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidParameter(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        let sign = orientation as f64;
        let vertices = (0..n)
            .map(|k| center + Complex64::from_polar(radius, sign * 2.0 * PI * k as f64 / n as f64))
            .collect();
        Self::new(vertices, surface)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn surface(&self) -> ModelSurface {
        self.surface
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Smallest distance from any edge to the boundary or a puncture.
    pub fn clearance(&self) -> f64 {
        self.edges()
            .map(|(p, q)| self.surface.segment_clearance(p, q))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_curve(&self) -> Curve {
        Curve::Polyline {
            vertices: self.vertices.clone(),
            closed: true,
        }
    }

    pub fn winding_number(&self, center: Complex64) -> Result<i32> {
        winding_number(&self.vertices, center)
    }

    /// Winding numbers about every hole of the surface.
    pub fn windings(&self) -> Result<Vec<i32>> {
        self.surface
            .holes()
            .iter()
            .map(|c| self.winding_number(*c))
            .collect()
    }

    /// Discrete hyperbolic length with an `order`-point rule per edge.
    pub fn length(&self, order: usize) -> f64 {
        let rule = GaussLegendre::new(order);
        discrete_length(&self.surface, &self.vertices, &rule)
    }

    pub fn euclidean_length(&self) -> f64 {
        self.edges().map(|(p, q)| (q - p).norm()).sum()
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[i + 1..] {
                d = d.max((q - p).norm());
            }
        }
        d
    }

    /// Diagnostic only: true when no two non-adjacent edges intersect.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(edges[i], edges[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// `n` vertices spaced uniformly in Euclidean arc length along the
    /// current polygon, starting at vertex 0.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        let total = self.euclidean_length();
        let edges: Vec<_> = self.edges().collect();
        let mut out = Vec::with_capacity(n);
        let mut edge = 0;
        let mut walked = 0.0;
        for k in 0..n {
            let target = total * k as f64 / n as f64;
            while edge < edges.len() - 1 && walked + (edges[edge].1 - edges[edge].0).norm() < target
            {
                walked += (edges[edge].1 - edges[edge].0).norm();
                edge += 1;
            }
            let (p, q) = edges[edge];
            let len = (q - p).norm();
            let s = ((target - walked) / len).clamp(0.0, 1.0);
            out.push(p + (q - p) * s);
        }
        Self::new(out, self.surface)
    }

    /// `n` vertices on the trigonometric interpolant of the current ones,
    /// which reproduces sampled circles exactly. Falls back to
    /// [`Self::resampled`] if the interpolant leaves the surface or changes
    /// the winding numbers.
    pub fn upsampled(&self, n: usize) -> Result<Self> {
        let m = self.len();
        let half = m / 2;
        let coeff = |k: i64| -> Complex64 {
            self.vertices
                .iter()
                .enumerate()
                .map(|(j, z)| {
                    z * Complex64::from_polar(1.0, -2.0 * PI * (k * j as i64) as f64 / m as f64)
                })
                .sum::<Complex64>()
                / m as f64
        };
        let low = -((m as i64 - 1) / 2);
        let high = (m as i64 - 1) / 2;
        let coeffs: Vec<(i64, Complex64)> = (low..=high).map(|k| (k, coeff(k))).collect();
        let nyquist = m.is_multiple_of(2).then(|| coeff(half as i64));
        let vertices: Vec<Complex64> = (0..n)
            .map(|j| {
                let t = j as f64 / n as f64;
                let mut z: Complex64 = coeffs
                    .iter()
                    .map(|(k, c)| c * Complex64::from_polar(1.0, 2.0 * PI * *k as f64 * t))
                    .sum();
                if let Some(c) = nyquist {
                    z += c * (PI * m as f64 * t).cos();
                }
                z
            })
            .collect();
        let smooth = Self::new(vertices, self.surface);
        match smooth {
            Ok(s) if s.clearance() > 0.0 && s.windings()? == self.windings()? => Ok(s),
            _ => self.resampled(n),
        }
    }

    fn with_vertices(&self, vertices: Vec<Complex64>) -> Self {
        ClosedPolyline {
            vertices,
            surface: self.surface,
        }
    }
}

/// Total change of argument about `center`, in turns.
pub fn winding_number(vertices: &[Complex64], center: Complex64) -> Result<i32> {
    if vertices.contains(&center) {
        return Err(Error::DegenerateCurve(format!(
            "vertex coincides with the winding centre ({}, {})",
            center.re, center.im
        )));
    }
    let n = vertices.len();
    let total: f64 = (0..n)
        .map(|i| ((vertices[(i + 1) % n] - center) / (vertices[i] - center)).arg())
        .sum();
    Ok((total / (2.0 * PI)).round() as i32)
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_intersect((p1, p2): (Complex64, Complex64), (q1, q2): (Complex64, Complex64)) -> bool {
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Neumaier-compensated sum of per-edge lengths.
fn discrete_length(surface: &ModelSurface, vertices: &[Complex64], rule: &GaussLegendre) -> f64 {
    let n = vertices.len();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let d = q - p;
        let integral: f64 = rule
            .unit_interval()
            .map(|(s, w)| w * surface.profile((p + d * s).norm()).0)
            .sum();
        let term = d.norm() * integral;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Discrete length and its gradient with respect to every vertex.
fn length_and_gradient(
    surface: &ModelSurface,
    vertices: &[Complex64],
    rule: &GaussLegendre,
) -> (f64, Vec<Complex64>) {
    let n = vertices.len();
    let mut grad = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (vertices[i], vertices[j]);
        let d = q - p;
        let len = d.norm();
        let unit = d / len;
        let mut integral = 0.0;
        let mut toward_p = Complex64::new(0.0, 0.0);
        let mut toward_q = Complex64::new(0.0, 0.0);
        for (s, w) in rule.unit_interval() {
            let x = p + d * s;
            let rho = x.norm();
            let (f, df) = surface.profile(rho);
            integral += w * f;
            let g = x * (df / rho);
            toward_p += g * (w * (1.0 - s));
            toward_q += g * (w * s);
        }
        grad[i] += -unit * integral + toward_p * len;
        grad[j] += unit * integral + toward_q * len;
    }
    (discrete_length(surface, vertices, rule), grad)
}

/// Solves `((1 + 2s) I - s (shift + shift^{-1})) x = y` for a cyclic `y`.
fn smooth_cyclic(y: &[Complex64], s: f64) -> Vec<Complex64> {
    let n = y.len();
    let (a, b, c) = (-s, 1.0 + 2.0 * s, -s);
    // Sherman–Morrison reduction of the cyclic system to two tridiagonal solves.
    let gamma = -b;
    let mut diag = vec![b; n];
    diag[0] = b - gamma;
    diag[n - 1] = b - a * c / gamma;
    let solve = |rhs: &[Complex64]| -> Vec<Complex64> {
        let mut cp = vec![0.0; n];
        let mut dp = vec![Complex64::new(0.0, 0.0); n];
        cp[0] = c / diag[0];
        dp[0] = rhs[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - a * cp[i - 1];
            cp[i] = c / m;
            dp[i] = (rhs[i] - dp[i - 1] * a) / m;
        }
        let mut x = dp;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= next * cp[i];
        }
        x
    };
    let x = solve(y);
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = Complex64::from(gamma);
    u[n - 1] = Complex64::from(c);
    let z = solve(&u);
    let fact =
        (x[0] + x[n - 1] * (a / gamma)) / (Complex64::from(1.0) + z[0] + z[n - 1] * (a / gamma));
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShorteningStatus {
    Converged,
    EscapedToPuncture,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortenOptions {
    /// Curves of hyperbolic diameter below this have collapsed to a point.
    pub step_tolerance: f64,
    /// Threshold on the density-weighted norm of the normal gradient.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Gauss–Legendre points per edge.
    pub quadrature_order: usize,
    /// Attempt a uniform resampling every this many iterations.
    pub resample_every: usize,
    /// Vertex count after resampling; curves are never thinned below their input size.
    pub resample_vertices: usize,
    /// Vertex distance to a puncture below which the curve has escaped.
    pub escape_clearance: f64,
    /// The length must still be decreasing over this many iterations to call an escape.
    pub escape_window: usize,
    /// Smoothing strength as a multiple of `(n / 2 pi)^2`.
    pub smoothing: f64,
    pub armijo: f64,
}

impl Default for ShortenOptions {
    fn default() -> Self {
        ShortenOptions {
            step_tolerance: 1e-10,
            gradient_tolerance: 1e-8,
            max_iterations: 20_000,
            quadrature_order: 8,
            resample_every: 25,
            resample_vertices: 512,
            escape_clearance: 1e-40,
            escape_window: 50,
            smoothing: 1.0,
            armijo: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShorteningResult {
    pub final_curve: ClosedPolyline,
    pub final_length: f64,
    pub status: ShorteningStatus,
    /// Length before the first step and after every accepted step.
    pub length_trace: Vec<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Self-intersection diagnostic for the final curve.
    pub simple: bool,
}

/// Estimate of the stable length of a curve's free homotopy class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableLength {
    pub value: f64,
    pub attained: bool,
}

struct Iterate {
    vertices: Vec<Complex64>,
    length: f64,
    grad: Vec<Complex64>,
    density: Vec<f64>,
}

impl Iterate {
    fn new(surface: &ModelSurface, vertices: Vec<Complex64>, rule: &GaussLegendre) -> Self {
        let (length, grad) = length_and_gradient(surface, &vertices, rule);
        let density = vertices
            .iter()
            .map(|z| surface.profile(z.norm()).0)
            .collect();
        Iterate {
            vertices,
            length,
            grad,
            density,
        }
    }

    /// Density-weighted norm of the normal part of the gradient. The
    /// tangential part only redistributes vertices along the curve.
    fn gradient_norm(&self) -> f64 {
        normal_part(&self.vertices, &self.grad)
            .iter()
            .zip(&self.density)
            .map(|(g, l)| g.norm_sqr() / (l * l))
            .sum::<f64>()
            .sqrt()
    }
}

/// Projection of a vertex field onto the discrete normals
/// `i (z_{i+1} - z_{i-1})`.
fn normal_part(vertices: &[Complex64], field: &[Complex64]) -> Vec<Complex64> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let chord = vertices[(i + 1) % n] - vertices[(i + n - 1) % n];
            let normal = Complex64::new(0.0, 1.0) * chord / chord.norm();
            let x = field[i];
            normal * (x.re * normal.re + x.im * normal.im)
        })
        .collect()
}

fn validate_options(opts: &ShortenOptions) -> Result<()> {
    let positive = [
        ("step_tolerance", opts.step_tolerance),
        ("gradient_tolerance", opts.gradient_tolerance),
        ("escape_clearance", opts.escape_clearance),
        ("armijo", opts.armijo),
    ];
    for (name, v) in positive {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    if opts.smoothing < 0.0 || opts.armijo >= 1.0 {
        return Err(Error::InvalidParameter(
            "smoothing >= 0 and armijo < 1 required".into(),
        ));
    }
    if opts.quadrature_order == 0 || opts.resample_every == 0 {
        return Err(Error::InvalidParameter(
            "quadrature_order and resample_every must be positive".into(),
        ));
    }
    Ok(())
}

/// Descends the discrete length inside the free homotopy class of `curve`.
pub fn shorten(curve: &ClosedPolyline, opts: &ShortenOptions) -> Result<ShorteningResult> {
    validate_options(opts)?;
    let surface = curve.surface();
    if !surface.is_hyperbolic() {
        return Err(Error::NonHyperbolicSurface(surface.name()));
    }
    let windings = curve.windings()?;
    let contractible = windings.iter().all(|w| *w == 0);
    let rule = GaussLegendre::new(opts.quadrature_order);

    let mut polyline = curve.clone();
    if opts.resample_vertices > polyline.len() {
        polyline = polyline.upsampled(opts.resample_vertices)?;
    }
    let n = polyline.len();
    let smoothing = opts.smoothing * (n as f64 / (2.0 * PI)).powi(2);
    let mut current = Iterate::new(&surface, polyline.vertices.clone(), &rule);
    let mut trace = vec![current.length];
    let mut step: f64 = 1.0;
    let mut status = ShorteningStatus::MaxIterations;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        if current.gradient_norm() < opts.gradient_tolerance {
            status = ShorteningStatus::Converged;
            break;
        }
        let poly = polyline.with_vertices(current.vertices.clone());
        if contractible {
            let lambda_max = current.density.iter().cloned().fold(0.0, f64::max);
            if poly.diameter() * lambda_max < opts.step_tolerance {
                // a collapsed null-homotopic loop sits at the infimum 0
                status = ShorteningStatus::Converged;
                break;
            }
        }
        if escaped(&surface, &current.vertices, &trace, opts) {
            status = ShorteningStatus::EscapedToPuncture;
            break;
        }

        let scaled: Vec<Complex64> = current
            .grad
            .iter()
            .zip(&current.density)
            .map(|(g, l)| g / l)
            .collect();
        let smoothed = smooth_cyclic(&scaled, smoothing);
        let direction: Vec<Complex64> = smoothed
            .iter()
            .zip(&current.density)
            .map(|(u, l)| -u / l)
            .collect();
        let slope: f64 = current
            .grad
            .iter()
            .zip(&direction)
            .map(|(g, d)| g.re * d.re + g.im * d.im)
            .sum();
        let max_move = direction.iter().map(|d| d.norm()).fold(0.0, f64::max);
        let cap = 0.5 * poly.clearance() / max_move;

        let mut alpha = (2.0 * step).min(cap);
        let mut accepted = None;
        for _ in 0..80 {
            let trial: Vec<Complex64> = current
                .vertices
                .iter()
                .zip(&direction)
                .map(|(z, d)| z + d * alpha)
                .collect();
            let len = discrete_length(&surface, &trial, &rule);
            if len <= current.length + opts.armijo * alpha * slope {
                accepted = Some((trial, len));
                break;
            }
            alpha *= 0.5;
        }
        let Some((trial, _)) = accepted else {
            // no representable decrease left along the descent direction
            break;
        };
        step = alpha;
        iterations += 1;
        let mut next = Iterate::new(&surface, trial, &rule);

        if iterations % opts.resample_every == 0 {
            let candidate = polyline.with_vertices(next.vertices.clone()).resampled(n);
            if let Ok(candidate) = candidate {
                let resampled = Iterate::new(&surface, candidate.vertices, &rule);
                if resampled.length <= next.length {
                    next = resampled;
                }
            }
        }

        let check = polyline.with_vertices(next.vertices.clone());
        if check.windings()? != windings {
            return Err(Error::DegenerateCurve(
                "free homotopy class changed during descent".into(),
            ));
        }
        trace.push(next.length);
        current = next;
    }

    if status == ShorteningStatus::MaxIterations
        && current.gradient_norm() < opts.gradient_tolerance
    {
        status = ShorteningStatus::Converged;
    }
    let gradient_norm = current.gradient_norm();
    let final_curve = polyline.with_vertices(current.vertices);
    Ok(ShorteningResult {
        simple: final_curve.is_simple(),
        final_curve,
        final_length: current.length,
        status,
        length_trace: trace,
        iterations,
        gradient_norm,
    })
}

fn escaped(
    surface: &ModelSurface,
    vertices: &[Complex64],
    trace: &[f64],
    opts: &ShortenOptions,
) -> bool {
    let near = surface.punctures().iter().any(|p| {
        vertices
            .iter()
            .any(|z| (z - p).norm() < opts.escape_clearance)
    });
    if !near {
        return false;
    }
    let last = trace.len() - 1;
    let earlier = last.saturating_sub(opts.escape_window);
    trace[last] < trace[earlier]
}

/// Stable length of the class of `curve`: the converged length, or 0 when
/// the class escapes into a puncture.
pub fn stable_length(curve: &ClosedPolyline, opts: &ShortenOptions) -> Result<StableLength> {
    let result = shorten(curve, opts)?;
    Ok(match result.status {
        ShorteningStatus::Converged => StableLength {
            value: result.final_length,
            attained: true,
        },
        ShorteningStatus::EscapedToPuncture => StableLength {
            value: 0.0,
            attained: false,
        },
        ShorteningStatus::MaxIterations => StableLength {
            value: result.final_length,
            attained: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn winding_examples() {
        let s = ModelSurface::PuncturedDisc;
        let fwd = ClosedPolyline::circle(s, c(0.0, 0.0), 0.5, 64, 1).unwrap();
        assert_eq!(fwd.winding_number(c(0.0, 0.0)).unwrap(), 1);
        let back = ClosedPolyline::circle(s, c(0.0, 0.0), 0.5, 64, -1).unwrap();
        assert_eq!(back.winding_number(c(0.0, 0.0)).unwrap(), -1);
        let off = ClosedPolyline::circle(s, c(0.5, 0.0), 0.2, 64, 1).unwrap();
        assert_eq!(off.winding_number(c(0.0, 0.0)).unwrap(), 0);
        assert!(winding_number(fwd.vertices(), fwd.vertices()[3]).is_err());
    }

    #[test]
    fn construction_errors() {
        let s = ModelSurface::PuncturedDisc;
        assert!(ClosedPolyline::circle(s, c(0.0, 0.0), 0.5, 5, 1).is_err());
        assert!(ClosedPolyline::circle(s, c(0.0, 0.0), 1.5, 16, 1).is_err());
        let ok = vec![
            c(-0.3, 0.3),
            c(0.1, -0.3),
            c(0.5, -0.3),
            c(0.6, 0.0),
            c(0.6, 0.3),
            c(0.4, 0.5),
            c(0.0, 0.6),
            c(-0.3, 0.5),
        ];
        assert!(ClosedPolyline::new(ok.clone(), s).is_ok());
        // the first edge now passes straight through the puncture
        let mut bad = ok;
        bad[1] = c(0.3, -0.3);
        assert!(ClosedPolyline::new(bad, s).is_err());
    }

    #[test]
    fn smoothing_solves_cyclic_system() {
        let y: Vec<Complex64> = (0..11)
            .map(|k| c((k as f64).sin(), (k * k) as f64 * 0.1))
            .collect();
        let s = 3.7;
        let x = smooth_cyclic(&y, s);
        let n = y.len();
        for i in 0..n {
            let lhs = x[i] * (1.0 + 2.0 * s) - (x[(i + 1) % n] + x[(i + n - 1) % n]) * s;
            assert!((lhs - y[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let s = ModelSurface::Annulus { inner: 0.05 };
        let mut verts = ClosedPolyline::circle(s, c(0.02, 0.01), 0.4, 12, 1)
            .unwrap()
            .vertices
            .clone();
        verts[3] += c(0.03, -0.02);
        let rule = GaussLegendre::new(8);
        let (_, grad) = length_and_gradient(&s, &verts, &rule);
        let h = 1e-7;
        for k in [0, 3, 7] {
            for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut plus = verts.clone();
                plus[k] += dir * h;
                let mut minus = verts.clone();
                minus[k] -= dir * h;
                let fd = (discrete_length(&s, &plus, &rule) - discrete_length(&s, &minus, &rule))
                    / (2.0 * h);
                let an = grad[k].re * dir.re + grad[k].im * dir.im;
                assert_abs_diff_eq!(an, fd, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn resampling_preserves_polygon() {
        let s = ModelSurface::Disc;
        let p = ClosedPolyline::circle(s, c(0.1, 0.0), 0.5, 16, 1).unwrap();
        let q = p.resampled(64).unwrap();
        assert_eq!(q.len(), 64);
        assert_abs_diff_eq!(q.euclidean_length(), p.euclidean_length(), epsilon = 1e-12);
        assert_abs_diff_eq!(q.length(8), p.length(8), epsilon = 1e-12);
        assert_eq!(q.winding_number(c(0.1, 0.0)).unwrap(), 1);
    }

    #[test]
    fn simplicity_diagnostic() {
        let s = ModelSurface::Plane;
        let circle = ClosedPolyline::circle(s, c(0.0, 0.0), 1.0, 16, 1).unwrap();
        assert!(circle.is_simple());
        let eight: Vec<Complex64> = (0..32)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 32.0;
                c(t.sin(), (2.0 * t).sin() * 0.5)
            })
            .collect();
        assert!(!ClosedPolyline::new(eight, s).unwrap().is_simple());
    }

    #[test]
    fn non_hyperbolic_surfaces_are_rejected() {
        let p =
            ClosedPolyline::circle(ModelSurface::PuncturedPlane, c(0.0, 0.0), 1.0, 16, 1).unwrap();
        assert!(matches!(
            shorten(&p, &ShortenOptions::default()),
            Err(Error::NonHyperbolicSurface(_))
        ));
    }
}
