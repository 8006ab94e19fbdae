use std::fs;
use std::path::{Path, PathBuf};

use hyperlen_core::curves::{shorten, ShorteningStatus, StableLength};
use hyperlen_core::deform::{collar_lengths, uniform_grid, DeformationFamily};
use hyperlen_core::groups::{
    certify_with, spectrum_of_generators, CertifyOptions, TruncatedLengthSpectrum,
};
use hyperlen_core::spectrum::{compare, SpectrumComparison};
use hyperlen_core::{curve_length, Curve, Quadrature};
use serde::Serialize;

use crate::config::{
    self, CertifyConfig, CompareConfig, DeformConfig, Family, LengthConfig, ShortenConfig, Source,
    SpectrumConfig, DEFAULT_SEEDED_RETRIES,
};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_num, write_csv, write_json, write_report, Format};

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Run {
    pub config: PathBuf,
    pub out: PathBuf,
    pub format: Format,
    pub seed: Option<u64>,
}

impl Run {
    fn prepare(&self) -> CliResult<()> {
        fs::create_dir_all(&self.out)?;
        Ok(())
    }

    fn file(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn certify_options(&self, retries: Option<usize>) -> CertifyOptions {
        match self.seed {
            Some(seed) => CertifyOptions {
                retries: retries.unwrap_or(DEFAULT_SEEDED_RETRIES),
                seed,
            },
            None => CertifyOptions {
                retries: retries.unwrap_or(0),
                seed: 0,
            },
        }
    }
}

fn curve_kind(curve: &Curve) -> &'static str {
    match curve {
        Curve::Polyline { .. } => "polyline",
        Curve::Circle { .. } => "circle",
        Curve::Segment { .. } => "segment",
    }
}

#[derive(Serialize)]
struct LengthReport {
    surface: String,
    curve: &'static str,
    length: f64,
    hyperbolic: bool,
    note: Option<&'static str>,
    quadrature: Quadrature,
}

pub fn cmd_length(run: &Run) -> CliResult<f64> {
    let cfg: LengthConfig = config::load(&run.config)?;
    let surface = cfg.surface.build("surface")?;
    let curve = cfg.curve.build("curve")?;
    let quad = cfg.quadrature.build("quadrature")?;
    run.prepare()?;
    let length = curve_length(&surface, &curve, &quad)?;
    let hyperbolic = surface.is_hyperbolic();
    let report = LengthReport {
        surface: surface.name(),
        curve: curve_kind(&curve),
        length,
        hyperbolic,
        note: (!hyperbolic).then_some("non-hyperbolic surface: the Kobayashi metric vanishes"),
        quadrature: quad,
    };
    write_report(&run.out, "length", run.format, &report)?;
    println!("length = {}", fmt_num(length));
    Ok(length)
}

#[derive(Serialize)]
struct ShortenReport {
    surface: String,
    status: ShorteningStatus,
    initial_length: f64,
    final_length: f64,
    stable_length: StableLength,
    iterations: usize,
    gradient_norm: f64,
    simple: bool,
    vertices: usize,
    windings: Vec<i32>,
}

pub fn cmd_shorten(run: &Run) -> CliResult<StableLength> {
    let cfg: ShortenConfig = config::load(&run.config)?;
    let surface = cfg.surface.build("surface")?;
    let seed = cfg.curve.build_closed("curve", surface)?;
    let opts = cfg.options.build("options")?;
    if !surface.is_hyperbolic() {
        return Err(CliError::Precondition(format!(
            "{} carries the zero metric; there is nothing to shorten",
            surface.name()
        )));
    }
    run.prepare()?;
    let result = shorten(&seed, &opts)?;
    let stable = match result.status {
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
    };
    let report = ShortenReport {
        surface: surface.name(),
        status: result.status,
        initial_length: result.length_trace[0],
        final_length: result.final_length,
        stable_length: stable,
        iterations: result.iterations,
        gradient_norm: result.gradient_norm,
        simple: result.simple,
        vertices: result.final_curve.len(),
        windings: result.final_curve.windings()?,
    };
    write_report(&run.out, "shorten", run.format, &report)?;
    write_csv(
        &run.file("trace.csv"),
        &["iteration", "length"],
        result
            .length_trace
            .iter()
            .enumerate()
            .map(|(i, l)| vec![i.to_string(), fmt_num(*l)]),
    )?;
    write_csv(
        &run.file("curve.csv"),
        &["x", "y"],
        result
            .final_curve
            .vertices()
            .iter()
            .map(|z| vec![fmt_num(z.re), fmt_num(z.im)]),
    )?;
    println!("status = {}", label(&result.status));
    println!("stable length = {}", fmt_num(stable.value));
    if result.status == ShorteningStatus::MaxIterations {
        return Err(CliError::NonConvergence(format!(
            "no convergence after {} iterations (normal gradient {})",
            result.iterations,
            fmt_num(result.gradient_norm)
        )));
    }
    Ok(stable)
}

fn write_spectrum(path_stem: &Path, format: Format, s: &TruncatedLengthSpectrum) -> CliResult<()> {
    let path = path_stem.with_extension(format.extension());
    match format {
        Format::Json => write_json(&path, s),
        Format::Csv => write_csv(
            &path,
            &["word", "length"],
            s.entries
                .iter()
                .map(|e| vec![e.word.to_string(), fmt_num(e.length)]),
        ),
    }
}

pub fn cmd_spectrum(run: &Run) -> CliResult<TruncatedLengthSpectrum> {
    let cfg: SpectrumConfig = config::load(&run.config)?;
    let rep = cfg.group.build("group")?;
    let n = cfg.max_word_length()?;
    run.prepare()?;
    let cert = certify_with(&rep, &run.certify_options(cfg.retries))?;
    if let Some(v) = cert.violation.filter(|_| !cert.certified) {
        return Err(CliError::Certification(v.to_string()));
    }
    let spectrum = spectrum_of_generators(rep.generators(), n)?;
    write_spectrum(&run.file("spectrum"), run.format, &spectrum)?;
    println!("{} classes up to word length {n}", spectrum.len());
    Ok(spectrum)
}

pub fn cmd_certify(run: &Run) -> CliResult<bool> {
    let cfg: CertifyConfig = config::load(&run.config)?;
    let rep = cfg.group.build("group")?;
    run.prepare()?;
    let cert = certify_with(&rep, &run.certify_options(cfg.retries))?;
    write_json(&run.file("certificate.json"), &cert)?;
    println!("certified = {}", cert.certified);
    match cert.violation.filter(|_| !cert.certified) {
        Some(v) => Err(CliError::Certification(v.to_string())),
        None => Ok(cert.certified),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Trend {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

/// Steps below `1e-12` of the largest value count as flat.
fn trend(values: &[f64]) -> Trend {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flat = 1e-12 * scale;
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if steps.iter().all(|d| d.abs() <= flat) {
        Trend::Constant
    } else if steps.iter().all(|d| *d >= -flat) {
        Trend::Increasing
    } else if steps.iter().all(|d| *d <= flat) {
        Trend::Decreasing
    } else {
        Trend::NonMonotone
    }
}

#[derive(Serialize)]
struct DeformReport {
    family: &'static str,
    quantity: String,
    grid_points: usize,
    value_start: f64,
    value_end: f64,
    trend: Trend,
    /// Kobayashi upper bound on the collar curve's length at `t = 1`.
    kobayashi_upper_bound: Option<f64>,
    max_word_length: Option<usize>,
    comparison: Option<SpectrumComparison>,
}

/// Comparison of the endpoint spectra; `None` for the collar family.
pub fn cmd_deform(run: &Run) -> CliResult<Option<SpectrumComparison>> {
    let cfg: DeformConfig = config::load(&run.config)?;
    let family = cfg.family.build("family")?;
    let grid = uniform_grid(cfg.grid()?);
    let tolerance = cfg.tolerance()?;
    run.prepare()?;
    let (name, quantity, values, bound, family) = match family {
        Family::Collar(interp) => {
            let Some(spec) = &cfg.curve else {
                return Err(CliError::Config(
                    "curve: the collar family needs a curve".into(),
                ));
            };
            let curve = spec.build("curve")?;
            let quad = cfg.quadrature.build("quadrature")?;
            let samples = collar_lengths(&interp, &curve, &grid, &quad)?;
            let bound = samples.last().and_then(|s| s.kobayashi_upper_bound);
            let values = samples
                .iter()
                .map(|s| s.riemannian_length)
                .collect::<Vec<_>>();
            (
                "collar",
                "riemannian_length".to_string(),
                values,
                bound,
                None,
            )
        }
        Family::Representation(p) => {
            let family = DeformationFamily::Representation(p);
            let class = cfg.class()?;
            let values = lambda_values(&family, &class, &grid)?;
            (
                "representation",
                format!("lambda({class})"),
                values,
                None,
                Some(family),
            )
        }
        Family::Annulus(a) => {
            let family = DeformationFamily::Annulus(a);
            let class = cfg.class()?;
            let values = lambda_values(&family, &class, &grid)?;
            (
                "annulus",
                format!("lambda({class})"),
                values,
                None,
                Some(family),
            )
        }
    };
    write_csv(
        &run.file("trace.csv"),
        &["t", "value"],
        grid.iter()
            .zip(&values)
            .map(|(t, v)| vec![fmt_num(*t), fmt_num(*v)]),
    )?;
    let (comparison, n) = match &family {
        Some(f) => {
            let n = cfg.max_word_length()?;
            let start = f.spectrum_at(0.0, n)?;
            let end = f.spectrum_at(1.0, n)?;
            write_spectrum(&run.file("spectrum_start"), run.format, &start)?;
            write_spectrum(&run.file("spectrum_end"), run.format, &end)?;
            let c = compare(&start, &end, tolerance)?;
            write_json(&run.file("comparison.json"), &c)?;
            (Some(c), Some(n))
        }
        None => (None, None),
    };
    let report = DeformReport {
        family: name,
        quantity,
        grid_points: grid.len(),
        value_start: values[0],
        value_end: values[values.len() - 1],
        trend: trend(&values),
        kobayashi_upper_bound: bound,
        max_word_length: n,
        comparison,
    };
    write_report(&run.out, "deform", run.format, &report)?;
    println!(
        "{} from {} to {}",
        report.quantity,
        fmt_num(report.value_start),
        fmt_num(report.value_end)
    );
    if let Some(c) = &comparison {
        println!("verdict = {}", label(&c.verdict));
    }
    Ok(comparison)
}

fn lambda_values(
    family: &DeformationFamily,
    class: &hyperlen_core::groups::ConjugacyClassWord,
    grid: &[f64],
) -> CliResult<Vec<f64>> {
    let rows = hyperlen_core::deform::lambda_of_t(family, class, grid)?;
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// The serialized name of a unit enum variant.
fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn resolve(config: &Path, file: &str) -> PathBuf {
    let p = Path::new(file);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        config.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn load_spectrum(
    run: &Run,
    path: &str,
    source: Source,
    n: usize,
) -> CliResult<TruncatedLengthSpectrum> {
    match source {
        Source::File(f) => {
            let file = resolve(&run.config, &f);
            if file.extension().is_some_and(|e| e != "json") {
                return Err(CliError::Config(format!(
                    "{path}.file: spectra are read from JSON, got {}",
                    file.display()
                )));
            }
            let text = fs::read_to_string(&file)
                .map_err(|e| CliError::Config(format!("{path}.file: {}: {e}", file.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{path}.file: {}: {e}", file.display())))
        }
        Source::Group(g) => {
            let rep = g.build(path)?;
            let cert = certify_with(&rep, &run.certify_options(None))?;
            if let Some(v) = cert.violation.filter(|_| !cert.certified) {
                return Err(CliError::Certification(format!("{path}: {v}")));
            }
            Ok(spectrum_of_generators(rep.generators(), n)?)
        }
    }
}

pub fn cmd_compare(run: &Run) -> CliResult<SpectrumComparison> {
    let cfg: CompareConfig = config::load(&run.config)?;
    let (sa, sb) = (cfg.a.source("a")?, cfg.b.source("b")?);
    let n = cfg.max_word_length()?;
    let tolerance = cfg.tolerance()?;
    run.prepare()?;
    let a = load_spectrum(run, "a", sa, n)?;
    let b = load_spectrum(run, "b", sb, n)?;
    let c = compare(&a, &b, tolerance)?;
    write_json(&run.file("comparison.json"), &c)?;
    println!("verdict = {}", label(&c.verdict));
    Ok(c)
}
