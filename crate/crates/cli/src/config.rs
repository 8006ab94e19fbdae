//! TOML job documents. Validation errors name the offending field by its
//! dotted path, e.g. `surface.inner`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use hyperlen_core::curves::{ClosedPolyline, ShortenOptions};
use hyperlen_core::deform::{
    AnnulusFamily, BaseMetric, CollarInterpolation, Cutoff, LengthSchedule, RepresentationPath,
};
use hyperlen_core::groups::{ConjugacyClassWord, SchottkyRepresentation};
use hyperlen_core::{Curve, ModelSurface, Moebius, Quadrature};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn at<T>(path: &str, r: hyperlen_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| invalid(path, e))
}

fn finite(path: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(path, format!("must be finite, got {x}")))
    }
}

fn positive(path: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(
            path,
            format!("must be positive and finite, got {x}"),
        ))
    }
}

fn point(path: &str, p: [f64; 2]) -> CliResult<Complex64> {
    Ok(Complex64::new(finite(path, p[0])?, finite(path, p[1])?))
}

/// A radius given directly or by its logarithm, not both.
fn radius_or_log(
    path: &str,
    name: &str,
    value: Option<f64>,
    log_value: Option<f64>,
) -> CliResult<f64> {
    match (value, log_value) {
        (Some(v), None) => positive(&format!("{path}.{name}"), v),
        (None, Some(l)) => {
            let field = format!("{path}.log_{name}");
            let v = finite(&field, l)?.exp();
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(
                    &field,
                    format!("exp({l}) is not a representable radius"),
                ))
            }
        }
        (Some(_), Some(_)) => Err(invalid(
            path,
            format!("give {name} or log_{name}, not both"),
        )),
        (None, None) => Err(invalid(path, format!("missing {name} (or log_{name})"))),
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Disc,
    PuncturedDisc,
    Annulus,
    Plane,
    PuncturedPlane,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    /// Inner radius of `A(inner, 1)`.
    pub inner: Option<f64>,
    pub log_inner: Option<f64>,
}

impl SurfaceSpec {
    pub fn build(&self, path: &str) -> CliResult<ModelSurface> {
        let has_radius = self.inner.is_some() || self.log_inner.is_some();
        let surface = match self.kind {
            SurfaceKind::Annulus => {
                let inner = radius_or_log(path, "inner", self.inner, self.log_inner)?;
                at(&format!("{path}.inner"), ModelSurface::annulus(inner))?
            }
            _ if has_radius => {
                return Err(invalid(path, "only an annulus takes an inner radius"));
            }
            SurfaceKind::Disc => ModelSurface::Disc,
            SurfaceKind::PuncturedDisc => ModelSurface::PuncturedDisc,
            SurfaceKind::Plane => ModelSurface::Plane,
            SurfaceKind::PuncturedPlane => ModelSurface::PuncturedPlane,
        };
        Ok(surface)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: Option<f64>,
        log_radius: Option<f64>,
        /// Signed number of turns; negative runs clockwise.
        turns: Option<i32>,
        /// Vertices when the circle seeds a polyline.
        points: Option<usize>,
    },
    Segment {
        from: [f64; 2],
        to: [f64; 2],
    },
    Polyline {
        vertices: Vec<[f64; 2]>,
        #[serde(default)]
        closed: bool,
    },
}

const DEFAULT_POINTS: usize = 64;

impl CurveSpec {
    pub fn build(&self, path: &str) -> CliResult<Curve> {
        let curve = match self {
            CurveSpec::Circle {
                center,
                radius,
                log_radius,
                turns,
                ..
            } => Curve::Circle {
                center: point(&format!("{path}.center"), *center)?,
                radius: radius_or_log(path, "radius", *radius, *log_radius)?,
                turns: turns.unwrap_or(1),
            },
            CurveSpec::Segment { from, to } => Curve::Segment {
                from: point(&format!("{path}.from"), *from)?,
                to: point(&format!("{path}.to"), *to)?,
            },
            CurveSpec::Polyline { vertices, closed } => Curve::Polyline {
                vertices: vertices
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| point(&format!("{path}.vertices[{i}]"), v))
                    .collect::<CliResult<_>>()?,
                closed: *closed,
            },
        };
        at(path, curve.validate())?;
        Ok(curve)
    }

    /// Closed polygon seeding curve shortening.
    pub fn build_closed(&self, path: &str, surface: ModelSurface) -> CliResult<ClosedPolyline> {
        match self {
            CurveSpec::Circle { turns, points, .. } => {
                let orientation = turns.unwrap_or(1);
                if orientation.abs() != 1 {
                    return Err(invalid(
                        &format!("{path}.turns"),
                        "a shortening seed circle runs once, turns must be 1 or -1",
                    ));
                }
                let Curve::Circle { center, radius, .. } = self.build(path)? else {
                    unreachable!("circle spec builds a circle")
                };
                let n = points.unwrap_or(DEFAULT_POINTS);
                at(
                    &format!("{path}.points"),
                    ClosedPolyline::circle(surface, center, radius, n, orientation),
                )
            }
            CurveSpec::Polyline { vertices, closed } => {
                if !closed {
                    return Err(invalid(
                        &format!("{path}.closed"),
                        "shortening needs a closed curve",
                    ));
                }
                let pts = vertices
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| point(&format!("{path}.vertices[{i}]"), v))
                    .collect::<CliResult<Vec<_>>>()?;
                at(path, ClosedPolyline::new(pts, surface))
            }
            CurveSpec::Segment { .. } => Err(invalid(path, "shortening needs a closed curve")),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub order: Option<usize>,
    pub edge_pieces: Option<usize>,
    pub smooth_pieces: Option<usize>,
}

impl QuadratureSpec {
    pub fn build(&self, path: &str) -> CliResult<Quadrature> {
        let d = Quadrature::default();
        let q = Quadrature {
            order: self.order.unwrap_or(d.order),
            edge_pieces: self.edge_pieces.unwrap_or(d.edge_pieces),
            smooth_pieces: self.smooth_pieces.unwrap_or(d.smooth_pieces),
        };
        at(path, q.validate())?;
        Ok(q)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortenSpec {
    pub max_iterations: Option<usize>,
    pub gradient_tolerance: Option<f64>,
    pub step_tolerance: Option<f64>,
    pub quadrature_order: Option<usize>,
    pub resample_every: Option<usize>,
    pub resample_vertices: Option<usize>,
    pub escape_clearance: Option<f64>,
    pub escape_window: Option<usize>,
}

impl ShortenSpec {
    pub fn build(&self, path: &str) -> CliResult<ShortenOptions> {
        let d = ShortenOptions::default();
        let count = |name: &str, v: Option<usize>, default: usize| match v {
            Some(0) => Err(invalid(&format!("{path}.{name}"), "must be positive")),
            Some(n) => Ok(n),
            None => Ok(default),
        };
        let tol = |name: &str, v: Option<f64>, default: f64| match v {
            Some(x) => positive(&format!("{path}.{name}"), x),
            None => Ok(default),
        };
        Ok(ShortenOptions {
            max_iterations: count("max_iterations", self.max_iterations, d.max_iterations)?,
            gradient_tolerance: tol(
                "gradient_tolerance",
                self.gradient_tolerance,
                d.gradient_tolerance,
            )?,
            step_tolerance: tol("step_tolerance", self.step_tolerance, d.step_tolerance)?,
            quadrature_order: count(
                "quadrature_order",
                self.quadrature_order,
                d.quadrature_order,
            )?,
            resample_every: count("resample_every", self.resample_every, d.resample_every)?,
            resample_vertices: count(
                "resample_vertices",
                self.resample_vertices,
                d.resample_vertices,
            )?,
            escape_clearance: tol(
                "escape_clearance",
                self.escape_clearance,
                d.escape_clearance,
            )?,
            escape_window: count("escape_window", self.escape_window, d.escape_window)?,
            ..d
        })
    }
}

/// Generators either as explicit matrices `[a, b, c, d]` or as translation
/// lengths along axes through `i` (angles default to `j pi / k`).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub lengths: Option<Vec<f64>>,
    pub axes: Option<Vec<f64>>,
    pub generators: Option<Vec<[f64; 4]>>,
}

fn default_axes(k: usize) -> Vec<f64> {
    (0..k).map(|j| j as f64 * PI / k as f64).collect()
}

impl GroupSpec {
    pub fn build(&self, path: &str) -> CliResult<SchottkyRepresentation> {
        if self.generators.is_some() && (self.lengths.is_some() || self.axes.is_some()) {
            return Err(invalid(
                path,
                "give generators, or lengths with optional axes, not both",
            ));
        }
        if let Some(gens) = &self.generators {
            if gens.is_empty() {
                return Err(invalid(
                    &format!("{path}.generators"),
                    "need at least one generator",
                ));
            }
            let ms = gens
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let field = format!("{path}.generators[{i}]");
                    for &x in g {
                        finite(&field, x)?;
                    }
                    at(&field, Moebius::new(g[0], g[1], g[2], g[3]))
                })
                .collect::<CliResult<Vec<_>>>()?;
            return at(
                &format!("{path}.generators"),
                SchottkyRepresentation::new(ms),
            );
        }
        let Some(lengths) = &self.lengths else {
            return Err(invalid(path, "missing generators or lengths"));
        };
        if lengths.is_empty() {
            return Err(invalid(
                &format!("{path}.lengths"),
                "need at least one length",
            ));
        }
        for (i, &l) in lengths.iter().enumerate() {
            positive(&format!("{path}.lengths[{i}]"), l)?;
        }
        let axes = match &self.axes {
            Some(a) if a.len() != lengths.len() => {
                return Err(invalid(
                    &format!("{path}.axes"),
                    format!("{} axes for {} lengths", a.len(), lengths.len()),
                ))
            }
            Some(a) => {
                for (i, &x) in a.iter().enumerate() {
                    finite(&format!("{path}.axes[{i}]"), x)?;
                }
                a.clone()
            }
            None => default_axes(lengths.len()),
        };
        let pairs: Vec<(f64, f64)> = axes.into_iter().zip(lengths.iter().copied()).collect();
        at(path, SchottkyRepresentation::from_axes(&pairs))
    }
}

fn word_length(path: &str, n: Option<usize>, default: usize) -> CliResult<usize> {
    match n {
        Some(0) => Err(invalid(path, "must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(default),
    }
}

fn tolerance(path: &str, t: Option<f64>, default: f64) -> CliResult<f64> {
    match t {
        Some(x) if x >= 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(invalid(
            path,
            format!("must be finite and non-negative, got {x}"),
        )),
        None => Ok(default),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthConfig {
    pub surface: SurfaceSpec,
    pub curve: CurveSpec,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShortenConfig {
    pub surface: SurfaceSpec,
    pub curve: CurveSpec,
    #[serde(default)]
    pub options: ShortenSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub group: GroupSpec,
    pub max_word_length: Option<usize>,
    pub retries: Option<usize>,
}

pub const DEFAULT_MAX_WORD_LENGTH: usize = 8;
/// Random conjugations tried when `--seed` is given and the config is silent.
pub const DEFAULT_SEEDED_RETRIES: usize = 64;

impl SpectrumConfig {
    pub fn max_word_length(&self) -> CliResult<usize> {
        word_length(
            "max_word_length",
            self.max_word_length,
            DEFAULT_MAX_WORD_LENGTH,
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    pub group: GroupSpec,
    pub retries: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Generators on fixed axes with linear length schedules `[start, end]`.
    /// Without schedules this is the standard path (6 -> 7, 6 -> 6).
    Representation {
        axes: Option<Vec<f64>>,
        schedules: Option<Vec<[f64; 2]>>,
    },
    /// `A(r(t), 1)` with `log(1/r(t))` linear between the endpoints.
    Annulus {
        log_inverse_start: Option<f64>,
        log_inverse_end: Option<f64>,
    },
    /// Riemannian metrics interpolating into the collar of `A(1/r, r)`.
    Collar {
        r: Option<f64>,
        log_r: Option<f64>,
        r_inner: Option<f64>,
        log_r_inner: Option<f64>,
        /// `[inner, outer]` in units of `|log |w||`.
        cutoff: Option<[f64; 2]>,
        /// Constant base metric `[E, F, G]`; Euclidean when absent.
        base: Option<[f64; 3]>,
    },
}

pub enum Family {
    Representation(RepresentationPath),
    Annulus(AnnulusFamily),
    Collar(CollarInterpolation),
}

impl FamilySpec {
    pub fn build(&self, path: &str) -> CliResult<Family> {
        match self {
            FamilySpec::Representation { axes, schedules } => {
                let Some(schedules) = schedules else {
                    if axes.is_some() {
                        return Err(invalid(
                            &format!("{path}.schedules"),
                            "axes given without schedules",
                        ));
                    }
                    return Ok(Family::Representation(RepresentationPath::standard()));
                };
                let field = format!("{path}.schedules");
                let starts: Vec<f64> = schedules.iter().map(|s| s[0]).collect();
                for (i, s) in schedules.iter().enumerate() {
                    positive(&format!("{field}[{i}]"), s[0])?;
                    positive(&format!("{field}[{i}]"), s[1])?;
                }
                let base = GroupSpec {
                    lengths: Some(starts),
                    axes: axes.clone(),
                    generators: None,
                }
                .build(path)?;
                let schedules = schedules
                    .iter()
                    .map(|s| LengthSchedule::linear(s[0], s[1]))
                    .collect();
                Ok(Family::Representation(at(
                    &field,
                    RepresentationPath::new(base, schedules),
                )?))
            }
            FamilySpec::Annulus {
                log_inverse_start,
                log_inverse_end,
            } => match (log_inverse_start, log_inverse_end) {
                (None, None) => Ok(Family::Annulus(AnnulusFamily::standard())),
                (Some(a), Some(b)) => Ok(Family::Annulus(at(path, AnnulusFamily::new(*a, *b))?)),
                _ => Err(invalid(
                    path,
                    "give both log_inverse_start and log_inverse_end",
                )),
            },
            FamilySpec::Collar {
                r,
                log_r,
                r_inner,
                log_r_inner,
                cutoff,
                base,
            } => {
                let r = radius_or_log(path, "r", *r, *log_r)?;
                let r_inner = radius_or_log(path, "r_inner", *r_inner, *log_r_inner)?;
                let base = match base {
                    None => BaseMetric::Euclidean,
                    Some([e, f, g]) => BaseMetric::Constant {
                        e: *e,
                        f: *f,
                        g: *g,
                    },
                };
                let interp = match cutoff {
                    None => CollarInterpolation::new(r, r_inner, base),
                    Some([inner, outer]) => CollarInterpolation::with_cutoff(
                        r,
                        r_inner,
                        Cutoff {
                            inner: *inner,
                            outer: *outer,
                        },
                        base,
                    ),
                };
                Ok(Family::Collar(at(path, interp)?))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformConfig {
    pub family: FamilySpec,
    /// Class whose stable length is traced; representation and annulus families.
    pub class: Option<String>,
    /// Curve in the collar chart; collar family only.
    pub curve: Option<CurveSpec>,
    pub grid: Option<usize>,
    pub max_word_length: Option<usize>,
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

pub const DEFAULT_GRID: usize = 101;
pub const DEFAULT_DEFORM_WORD_LENGTH: usize = 3;

impl DeformConfig {
    pub fn grid(&self) -> CliResult<usize> {
        match self.grid {
            Some(n) if n < 2 => Err(invalid("grid", "needs at least 2 points")),
            Some(n) => Ok(n),
            None => Ok(DEFAULT_GRID),
        }
    }

    pub fn class(&self) -> CliResult<ConjugacyClassWord> {
        self.class
            .as_deref()
            .unwrap_or("x1")
            .parse()
            .map_err(|e| invalid("class", e))
    }

    pub fn max_word_length(&self) -> CliResult<usize> {
        word_length(
            "max_word_length",
            self.max_word_length,
            DEFAULT_DEFORM_WORD_LENGTH,
        )
    }

    pub fn tolerance(&self) -> CliResult<f64> {
        tolerance(
            "tolerance",
            self.tolerance,
            hyperlen_core::spectrum::DEFAULT_COMPARE_TOLERANCE,
        )
    }
}

/// One side of a comparison: a spectrum JSON file, or a group to evaluate.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSource {
    pub file: Option<String>,
    pub lengths: Option<Vec<f64>>,
    pub axes: Option<Vec<f64>>,
    pub generators: Option<Vec<[f64; 4]>>,
}

pub enum Source {
    File(String),
    Group(GroupSpec),
}

impl SpectrumSource {
    pub fn source(&self, path: &str) -> CliResult<Source> {
        let group = self.lengths.is_some() || self.axes.is_some() || self.generators.is_some();
        match (&self.file, group) {
            (Some(f), false) => Ok(Source::File(f.clone())),
            (None, true) => Ok(Source::Group(GroupSpec {
                lengths: self.lengths.clone(),
                axes: self.axes.clone(),
                generators: self.generators.clone(),
            })),
            (Some(_), true) => Err(invalid(path, "give a file or a group, not both")),
            (None, false) => Err(invalid(path, "missing file or group")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub a: SpectrumSource,
    pub b: SpectrumSource,
    /// Truncation for groups given inline.
    pub max_word_length: Option<usize>,
    pub tolerance: Option<f64>,
}

impl CompareConfig {
    pub fn max_word_length(&self) -> CliResult<usize> {
        word_length(
            "max_word_length",
            self.max_word_length,
            DEFAULT_MAX_WORD_LENGTH,
        )
    }

    pub fn tolerance(&self) -> CliResult<f64> {
        tolerance(
            "tolerance",
            self.tolerance,
            hyperlen_core::spectrum::DEFAULT_COMPARE_TOLERANCE,
        )
    }
}
