//! Python module `hyperlen`: surfaces, curve lengths, shortening, Schottky
//! groups, truncated spectra and deformation families.

use hyperlen_core::curves::{self, ClosedPolyline, ShortenOptions, ShorteningStatus};
use hyperlen_core::deform::{
    self, AnnulusFamily, DeformationFamily, LengthSchedule, RepresentationPath,
};
use hyperlen_core::groups::{
    self, CertifyOptions, ConjugacyClassWord, SchottkyRepresentation, TruncatedLengthSpectrum,
};
use hyperlen_core::spectrum::{self, Verdict};
use hyperlen_core::{Curve, IsometryClass, Model, ModelSurface, Moebius, Quadrature};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(hyperlen, CertificationError, PyException);

/// `(index, length_a, length_b)` of the first disagreement.
type Witness = (usize, Option<f64>, Option<f64>);

fn err(e: hyperlen_core::Error) -> PyErr {
    if e.is_certification_failure() {
        CertificationError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for hyperlen_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn model(name: &str) -> PyResult<Model> {
    match name {
        "half_plane" => Ok(Model::HalfPlane),
        "disc" => Ok(Model::Disc),
        other => Err(PyValueError::new_err(format!(
            "model must be 'half_plane' or 'disc', got {other:?}"
        ))),
    }
}

#[pyclass(name = "Moebius", module = "hyperlen", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyMoebius(pub Moebius);

#[pymethods]
impl PyMoebius {
    #[new]
    fn new(a: f64, b: f64, c: f64, d: f64) -> PyResult<Self> {
        Moebius::new(a, b, c, d).py().map(Self)
    }

    /// Translation by `length` along the axis through `i` at `axis_angle`.
    #[staticmethod]
    fn hyperbolic(axis_angle: f64, length: f64) -> PyResult<Self> {
        Moebius::hyperbolic(axis_angle, length).py().map(Self)
    }

    #[getter]
    fn entries(&self) -> (f64, f64, f64, f64) {
        let [a, b, c, d] = self.0.entries();
        (a, b, c, d)
    }

    fn trace(&self) -> f64 {
        self.0.trace()
    }

    fn translation_length(&self) -> Option<f64> {
        self.0.translation_length()
    }

    fn classify(&self) -> &'static str {
        match self.0.classify() {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
        }
    }

    fn compose(&self, other: &PyMoebius) -> Self {
        Self(self.0.compose(&other.0))
    }

    fn __mul__(&self, other: &PyMoebius) -> Self {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn pow(&self, n: i32) -> Self {
        Self(self.0.pow(n))
    }

    fn conjugated_by(&self, h: &PyMoebius) -> Self {
        Self(self.0.conjugated_by(&h.0))
    }

    #[pyo3(signature = (z, model = "half_plane"))]
    fn apply(&self, z: Complex64, model: &str) -> PyResult<Complex64> {
        self.0.apply(z, self::model(model)?).py()
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.entries();
        format!("Moebius({a}, {b}, {c}, {d})")
    }
}

#[pyclass(name = "Surface", module = "hyperlen", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySurface(pub ModelSurface);

#[pymethods]
impl PySurface {
    #[staticmethod]
    fn disc() -> Self {
        Self(ModelSurface::Disc)
    }

    #[staticmethod]
    fn punctured_disc() -> Self {
        Self(ModelSurface::PuncturedDisc)
    }

    /// `A(inner, 1)`.
    #[staticmethod]
    fn annulus(inner: f64) -> PyResult<Self> {
        ModelSurface::annulus(inner).py().map(Self)
    }

    #[staticmethod]
    fn plane() -> Self {
        Self(ModelSurface::Plane)
    }

    #[staticmethod]
    fn punctured_plane() -> Self {
        Self(ModelSurface::PuncturedPlane)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name()
    }

    #[getter]
    fn is_hyperbolic(&self) -> bool {
        self.0.is_hyperbolic()
    }

    fn density(&self, z: Complex64) -> PyResult<f64> {
        self.0.density(z).py()
    }

    fn circle_length(&self, rho: f64) -> PyResult<f64> {
        self.0.circle_length(rho).py()
    }

    fn core_length(&self) -> Option<f64> {
        self.0.core_length()
    }

    fn curvature_residual(&self, z: Complex64, step: f64) -> PyResult<f64> {
        self.0.curvature_residual(z, step).py()
    }

    /// Whether every simple closed curve has stable length 0.
    fn is_trivial(&self) -> bool {
        spectrum::classify_trivial(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Surface({})", self.0.name())
    }
}

#[pyclass(name = "Curve", module = "hyperlen", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCurve(pub Curve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    #[pyo3(signature = (center, radius, turns = 1))]
    fn circle(center: Complex64, radius: f64, turns: i32) -> Self {
        Self(Curve::Circle {
            center,
            radius,
            turns,
        })
    }

    #[staticmethod]
    fn segment(start: Complex64, end: Complex64) -> Self {
        Self(Curve::segment(start, end))
    }

    #[staticmethod]
    #[pyo3(signature = (vertices, closed = false))]
    fn polyline(vertices: Vec<Complex64>, closed: bool) -> Self {
        Self(Curve::Polyline { vertices, closed })
    }
}

/// Hyperbolic length of `curve` on `surface`.
#[pyfunction]
#[pyo3(signature = (surface, curve, order = 8, edge_pieces = 1, smooth_pieces = 64))]
fn curve_length(
    surface: &PySurface,
    curve: &PyCurve,
    order: usize,
    edge_pieces: usize,
    smooth_pieces: usize,
) -> PyResult<f64> {
    let quad = Quadrature {
        order,
        edge_pieces,
        smooth_pieces,
    };
    hyperlen_core::curve_length(&surface.0, &curve.0, &quad).py()
}

#[pyclass(name = "ShorteningResult", module = "hyperlen", frozen, get_all)]
pub struct PyShorteningResult {
    /// `converged`, `escaped_to_puncture` or `max_iterations`.
    status: &'static str,
    final_length: f64,
    stable_length: f64,
    attained: bool,
    iterations: usize,
    gradient_norm: f64,
    simple: bool,
    length_trace: Vec<f64>,
    vertices: Vec<Complex64>,
}

/// Shorten the closed polygon `vertices` on `surface` within its class.
#[pyfunction]
#[pyo3(signature = (surface, vertices, max_iterations = None))]
fn shorten(
    py: Python<'_>,
    surface: &PySurface,
    vertices: Vec<Complex64>,
    max_iterations: Option<usize>,
) -> PyResult<PyShorteningResult> {
    let poly = ClosedPolyline::new(vertices, surface.0).py()?;
    let mut opts = ShortenOptions::default();
    if let Some(n) = max_iterations {
        opts.max_iterations = n;
    }
    let r = py.detach(|| curves::shorten(&poly, &opts)).py()?;
    let (status, stable, attained) = match r.status {
        ShorteningStatus::Converged => ("converged", r.final_length, true),
        ShorteningStatus::EscapedToPuncture => ("escaped_to_puncture", 0.0, false),
        ShorteningStatus::MaxIterations => ("max_iterations", r.final_length, false),
    };
    Ok(PyShorteningResult {
        status,
        final_length: r.final_length,
        stable_length: stable,
        attained,
        iterations: r.iterations,
        gradient_norm: r.gradient_norm,
        simple: r.simple,
        length_trace: r.length_trace,
        vertices: r.final_curve.vertices().to_vec(),
    })
}

/// `n` vertices on a round circle; orientation is 1 or -1.
#[pyfunction]
#[pyo3(signature = (surface, center, radius, n = 64, orientation = 1))]
fn circle_vertices(
    surface: &PySurface,
    center: Complex64,
    radius: f64,
    n: usize,
    orientation: i32,
) -> PyResult<Vec<Complex64>> {
    let poly = ClosedPolyline::circle(surface.0, center, radius, n, orientation).py()?;
    Ok(poly.vertices().to_vec())
}

#[pyclass(name = "Spectrum", module = "hyperlen", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySpectrum(pub TruncatedLengthSpectrum);

#[pymethods]
impl PySpectrum {
    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn max_word_length(&self) -> usize {
        self.0.max_word_length
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.0.tolerance
    }

    /// `(word, length)` pairs sorted by length.
    #[getter]
    fn entries(&self) -> Vec<(String, f64)> {
        self.0
            .entries
            .iter()
            .map(|e| (e.word.to_string(), e.length))
            .collect()
    }

    fn lengths(&self) -> Vec<f64> {
        self.0.lengths()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// `(verdict, witness)` where the witness is `(index, length_a, length_b)`.
    #[pyo3(signature = (other, tolerance = spectrum::DEFAULT_COMPARE_TOLERANCE))]
    fn compare(
        &self,
        other: &PySpectrum,
        tolerance: f64,
    ) -> PyResult<(&'static str, Option<Witness>)> {
        let c = spectrum::compare(&self.0, &other.0, tolerance).py()?;
        let verdict = match c.verdict {
            Verdict::Distinct => "distinct",
            Verdict::IndistinguishableAtTruncation => "indistinguishable_at_truncation",
        };
        Ok((
            verdict,
            c.witness.map(|w| (w.index, w.length_a, w.length_b)),
        ))
    }
}

#[pyclass(
    name = "SchottkyGroup",
    module = "hyperlen",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PySchottkyGroup(pub SchottkyRepresentation);

#[pymethods]
impl PySchottkyGroup {
    #[new]
    fn new(generators: Vec<PyMoebius>) -> PyResult<Self> {
        SchottkyRepresentation::new(generators.into_iter().map(|g| g.0).collect())
            .py()
            .map(Self)
    }

    /// Generators from `(axis_angle, translation_length)` pairs.
    #[staticmethod]
    fn from_axes(axes: Vec<(f64, f64)>) -> PyResult<Self> {
        SchottkyRepresentation::from_axes(&axes).py().map(Self)
    }

    #[staticmethod]
    fn perpendicular_pair(length_1: f64, length_2: f64) -> PyResult<Self> {
        SchottkyRepresentation::perpendicular_pair(length_1, length_2)
            .py()
            .map(Self)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn generators(&self) -> Vec<PyMoebius> {
        self.0.generators().iter().map(|g| PyMoebius(*g)).collect()
    }

    fn conjugated_by(&self, h: &PyMoebius) -> PyResult<Self> {
        self.0.conjugated_by(&h.0).py().map(Self)
    }

    /// `(certified, violation)`; with retries, seeded random conjugates are tried.
    #[pyo3(signature = (retries = 0, seed = 0))]
    fn certify(&self, retries: usize, seed: u64) -> PyResult<(bool, Option<String>)> {
        let cert = groups::certify_with(&self.0, &CertifyOptions { retries, seed }).py()?;
        Ok((cert.certified, cert.violation.map(|v| v.to_string())))
    }

    /// Truncated spectrum; raises `CertificationError` if ping-pong fails.
    fn spectrum(&self, py: Python<'_>, max_word_length: usize) -> PyResult<PySpectrum> {
        py.detach(|| groups::truncated_spectrum(&self.0, max_word_length))
            .py()
            .map(PySpectrum)
    }

    /// Spectrum of the generators without a discreteness check.
    fn unchecked_spectrum(&self, py: Python<'_>, max_word_length: usize) -> PyResult<PySpectrum> {
        py.detach(|| groups::spectrum_of_generators(self.0.generators(), max_word_length))
            .py()
            .map(PySpectrum)
    }
}

/// Canonical conjugacy-class words of the free group of rank `k`.
#[pyfunction]
fn enumerate_classes(k: usize, max_word_length: usize) -> Vec<String> {
    groups::enumerate_conjugacy_classes(k, max_word_length)
        .iter()
        .map(|w| w.to_string())
        .collect()
}

#[pyfunction]
fn annulus_from_cyclic(length: f64) -> PyResult<PySurface> {
    groups::annulus_from_cyclic(length).py().map(PySurface)
}

#[pyfunction]
fn mu(r: f64) -> PyResult<f64> {
    deform::mu(r).py()
}

#[pyfunction]
fn mu_upper_bound(alpha: f64, r: f64) -> PyResult<f64> {
    deform::mu_upper_bound(alpha, r).py()
}

fn parse_word(word: &str) -> PyResult<ConjugacyClassWord> {
    word.parse().map_err(err)
}

#[pyclass(name = "DeformationFamily", module = "hyperlen", frozen)]
pub struct PyDeformationFamily(DeformationFamily);

#[pymethods]
impl PyDeformationFamily {
    /// Generators of `group` moved along their axes by `(start, end)` schedules.
    #[staticmethod]
    fn representation(group: &PySchottkyGroup, schedules: Vec<(f64, f64)>) -> PyResult<Self> {
        let schedules = schedules
            .into_iter()
            .map(|(a, b)| LengthSchedule::linear(a, b))
            .collect();
        RepresentationPath::new(group.0.clone(), schedules)
            .py()
            .map(|p| Self(DeformationFamily::Representation(p)))
    }

    /// Perpendicular pair with lengths `6 + t` and `6`.
    #[staticmethod]
    fn standard_path() -> Self {
        Self(DeformationFamily::Representation(
            RepresentationPath::standard(),
        ))
    }

    /// `A(r(t), 1)` with `log(1/r(t))` linear between the endpoints.
    #[staticmethod]
    #[pyo3(signature = (log_inverse_start = None, log_inverse_end = None))]
    fn annulus(log_inverse_start: Option<f64>, log_inverse_end: Option<f64>) -> PyResult<Self> {
        let family = match (log_inverse_start, log_inverse_end) {
            (None, None) => AnnulusFamily::standard(),
            (Some(a), Some(b)) => AnnulusFamily::new(a, b).py()?,
            _ => {
                return Err(PyValueError::new_err(
                    "give both log_inverse_start and log_inverse_end, or neither",
                ))
            }
        };
        Ok(Self(DeformationFamily::Annulus(family)))
    }

    fn group_at(&self, t: f64) -> PyResult<PySchottkyGroup> {
        self.0.representation_at(t).py().map(PySchottkyGroup)
    }

    /// Stable length of the class `word` (e.g. `"x1x2^-1"`) at `t`.
    fn stable_length(&self, word: &str, t: f64) -> PyResult<f64> {
        self.0.lambda(&parse_word(word)?, t).py()
    }

    fn spectrum_at(&self, py: Python<'_>, t: f64, max_word_length: usize) -> PyResult<PySpectrum> {
        py.detach(|| self.0.spectrum_at(t, max_word_length))
            .py()
            .map(PySpectrum)
    }
}

#[pymodule]
pub fn hyperlen(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMoebius>()?;
    m.add_class::<PySurface>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyShorteningResult>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PySchottkyGroup>()?;
    m.add_class::<PyDeformationFamily>()?;
    m.add_function(wrap_pyfunction!(curve_length, m)?)?;
    m.add_function(wrap_pyfunction!(shorten, m)?)?;
    m.add_function(wrap_pyfunction!(circle_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_from_cyclic, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(mu_upper_bound, m)?)?;
    m.add(
        "CertificationError",
        m.py().get_type::<CertificationError>(),
    )?;
    Ok(())
}
