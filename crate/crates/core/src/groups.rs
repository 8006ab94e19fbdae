//! Schottky subgroups of PSL(2, R): ping-pong certification, conjugacy
//! classes of the free group and truncated translation-length spectra.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metrics::ModelSurface;
use crate::moebius::{translation_length_from_trace, Circle, Moebius, PARABOLIC_BAND};

/// Words longer than this are multiplied out in double-double arithmetic.
pub const COMPENSATED_WORD_LENGTH: usize = 12;

/// Margin by which ping-pong discs must be separated.
pub const DISJOINTNESS_MARGIN: f64 = 1e-9;

/// Boundary samples per disc in the pairing check.
pub const PAIRING_SAMPLES: usize = 64;

const PAIRING_TOL: f64 = 1e-9;

/// Letters are `+g` for generator `x_g` and `-g` for its inverse, `g >= 1`.
fn letter_key(l: i32) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

fn cmp_words(a: &[i32], b: &[i32]) -> Ordering {
    a.iter()
        .map(|l| letter_key(*l))
        .cmp(b.iter().map(|l| letter_key(*l)))
}

fn inverse_word(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

fn is_cyclically_reduced(w: &[i32]) -> bool {
    let n = w.len();
    n == 1 || (0..n).all(|i| w[i] != -w[(i + 1) % n])
}

/// Least rotation of the word or of its inverse.
fn canonical(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    let inv = inverse_word(w);
    let mut best = w.to_vec();
    for word in [w, inv.as_slice()] {
        for i in 0..n {
            let rot: Vec<i32> = word[i..].iter().chain(&word[..i]).copied().collect();
            if cmp_words(&rot, &best) == Ordering::Less {
                best = rot;
            }
        }
    }
    best
}

/// A conjugacy class of the free group, identified with its inverse class,
/// stored as its canonical cyclically reduced representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugacyClassWord {
    letters: Vec<i32>,
}

impl ConjugacyClassWord {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter(
                "the identity class has no word".into(),
            ));
        }
        if letters.contains(&0) {
            return Err(Error::InvalidParameter(
                "letter 0 is not a generator".into(),
            ));
        }
        if !is_cyclically_reduced(&letters) {
            return Err(Error::InvalidParameter(format!(
                "word {} is not cyclically reduced",
                format_letters(&letters)
            )));
        }
        Ok(ConjugacyClassWord {
            letters: canonical(&letters),
        })
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of generators the word mentions.
    pub fn rank_used(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Left-to-right matrix product of the word in `generators`.
    pub fn evaluate(&self, generators: &[Moebius]) -> Result<Moebius> {
        evaluate_word(&self.letters, generators)
    }
}

impl Ord for ConjugacyClassWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| cmp_words(&self.letters, &other.letters))
    }
}

impl PartialOrd for ConjugacyClassWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn format_letters(letters: &[i32]) -> String {
    letters
        .iter()
        .map(|l| {
            if *l < 0 {
                format!("x{}^-1", -l)
            } else {
                format!("x{l}")
            }
        })
        .collect()
}

impl fmt::Display for ConjugacyClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

impl FromStr for ConjugacyClassWord {
    type Err = Error;

    /// Parses words written as `x1x2^-1x1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse word {s:?}"));
        let mut letters = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.strip_prefix('x').ok_or_else(bad)?;
            let digits = rest
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len());
            let g: i32 = rest[..digits].parse().map_err(|_| bad())?;
            rest = &rest[digits..];
            if let Some(r) = rest.strip_prefix("^-1") {
                letters.push(-g);
                rest = r;
            } else {
                letters.push(g);
            }
        }
        ConjugacyClassWord::new(letters)
    }
}

impl Serialize for ConjugacyClassWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConjugacyClassWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One canonical representative per conjugacy class (up to inversion) of
/// nontrivial cyclically reduced words of length `1..=max_word_length` in
/// the free group on `k` generators, ordered by length then lexicographically
/// in the letter order `x1 < x1^-1 < x2 < ...`.
pub fn enumerate_conjugacy_classes(k: usize, max_word_length: usize) -> Vec<ConjugacyClassWord> {
    let alphabet: Vec<i32> = (1..=k as i32).flat_map(|g| [g, -g]).collect();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(max_word_length);
    for n in 1..=max_word_length {
        extend_words(&alphabet, n, &mut word, &mut out);
    }
    out
}

fn extend_words(
    alphabet: &[i32],
    n: usize,
    word: &mut Vec<i32>,
    out: &mut Vec<ConjugacyClassWord>,
) {
    if word.len() == n {
        if is_cyclically_reduced(word) && canonical(word) == *word {
            out.push(ConjugacyClassWord {
                letters: word.clone(),
            });
        }
        return;
    }
    for &l in alphabet {
        if word.last().is_some_and(|p| *p == -l) {
            continue;
        }
        // a canonical word starts with its least letter
        if word.first().is_some_and(|f| letter_key(l) < letter_key(*f)) {
            continue;
        }
        word.push(l);
        extend_words(alphabet, n, word, out);
        word.pop();
    }
}

// Error-free transformations for the compensated products.

#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        DoubleDouble { hi, lo }
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

type DdMatrix = [DoubleDouble; 4];

fn dd_mul(x: &DdMatrix, y: &DdMatrix) -> DdMatrix {
    [
        x[0].mul(y[0]).add(x[1].mul(y[2])),
        x[0].mul(y[1]).add(x[1].mul(y[3])),
        x[2].mul(y[0]).add(x[3].mul(y[2])),
        x[2].mul(y[1]).add(x[3].mul(y[3])),
    ]
}

fn letter_matrix(l: i32, generators: &[Moebius]) -> Result<Moebius> {
    let g = generators
        .get(l.unsigned_abs() as usize - 1)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "letter x{} exceeds the {} generators",
                l.unsigned_abs(),
                generators.len()
            ))
        })?;
    Ok(if l < 0 { g.inverse() } else { *g })
}

fn dd_product(letters: &[i32], generators: &[Moebius]) -> Result<DdMatrix> {
    let mut acc: DdMatrix = [1.0, 0.0, 0.0, 1.0].map(DoubleDouble::from);
    for &l in letters {
        let e = letter_matrix(l, generators)?.entries();
        acc = dd_mul(&acc, &e.map(DoubleDouble::from));
    }
    Ok(acc)
}

/// Product of the letters from left to right; compensated for long words.
pub fn evaluate_word(letters: &[i32], generators: &[Moebius]) -> Result<Moebius> {
    if letters.len() <= COMPENSATED_WORD_LENGTH {
        let mut m = Moebius::IDENTITY;
        for &l in letters {
            m = m.compose(&letter_matrix(l, generators)?);
        }
        return Ok(m);
    }
    // Letter matrices are unimodular up to rounding of their entries; dividing
    // by the determinant of the rounded product would reintroduce that error.
    let acc = dd_product(letters, generators)?;
    let [a, b, c, d] = acc.map(DoubleDouble::value);
    Ok(Moebius::from_unimodular(a, b, c, d))
}

/// `|trace|` of the word, summed before the entries are rounded.
pub fn word_trace(letters: &[i32], generators: &[Moebius]) -> Result<f64> {
    let acc = dd_product(letters, generators)?;
    Ok(acc[0].add(acc[3]).value().abs())
}

/// A disc pair for one generator: the generator maps the exterior of `minus`
/// onto the interior of `plus`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscPair {
    pub minus: Circle,
    pub plus: Circle,
}

/// Generators of a free subgroup of PSL(2, R), optionally with explicit
/// ping-pong discs in the disc model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyRepresentation {
    generators: Vec<Moebius>,
    discs: Option<Vec<DiscPair>>,
}

impl SchottkyRepresentation {
    pub fn new(generators: Vec<Moebius>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one generator".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.classify().is_hyperbolic() {
                return Err(Error::InvalidParameter(format!(
                    "generator x{} is not hyperbolic (trace {})",
                    i + 1,
                    g.trace()
                )));
            }
        }
        Ok(SchottkyRepresentation {
            generators,
            discs: None,
        })
    }

    pub fn with_discs(generators: Vec<Moebius>, discs: Vec<DiscPair>) -> Result<Self> {
        let mut rep = Self::new(generators)?;
        if discs.len() != rep.generators.len() {
            return Err(Error::InvalidParameter(format!(
                "{} disc pairs for {} generators",
                discs.len(),
                rep.generators.len()
            )));
        }
        rep.discs = Some(discs);
        Ok(rep)
    }

    /// Generators with the given translation lengths along axes through `i`
    /// at the given angles.
    pub fn from_axes(axes: &[(f64, f64)]) -> Result<Self> {
        let gens = axes
            .iter()
            .map(|(angle, length)| Moebius::hyperbolic(*angle, *length))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    /// Two generators on perpendicular axes through `i`.
    pub fn perpendicular_pair(length_1: f64, length_2: f64) -> Result<Self> {
        Self::from_axes(&[(0.0, length_1), (PI / 2.0, length_2)])
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Moebius] {
        &self.generators
    }

    pub fn discs(&self) -> Option<&[DiscPair]> {
        self.discs.as_deref()
    }

    /// Conjugates every generator by `h`; explicit discs are dropped.
    pub fn conjugated_by(&self, h: &Moebius) -> Result<Self> {
        Self::new(self.generators.iter().map(|g| g.conjugated_by(h)).collect())
    }

    pub fn inverted(&self) -> Result<Self> {
        Self::new(self.generators.iter().map(Moebius::inverse).collect())
    }

    /// Isometric circles of each generator and its inverse.
    pub fn isometric_discs(&self) -> Result<Vec<DiscPair>> {
        self.generators
            .iter()
            .map(|g| {
                Ok(DiscPair {
                    minus: g.isometric_circle()?,
                    plus: g.inverse().isometric_circle()?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Minus,
    Plus,
}

/// Which disc: generator index (0-based) and side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscLabel {
    pub generator: usize,
    pub side: Side,
}

impl fmt::Display for DiscLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Minus => "-",
            Side::Plus => "+",
        };
        write!(f, "D{}{}", self.generator + 1, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two discs are closer than the margin; `gap` is distance minus radii.
    Overlap {
        first: DiscLabel,
        second: DiscLabel,
        gap: f64,
    },
    /// The generator does not carry the boundary of `minus` onto `plus`, or
    /// sends an exterior point outside `plus`.
    Pairing { generator: usize, max_error: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { first, second, gap } => {
                write!(f, "discs {first} and {second} overlap (gap {gap:e})")
            }
            Violation::Pairing {
                generator,
                max_error,
            } => write!(
                f,
                "x{} fails to pair its discs (error {max_error:e})",
                generator + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub certified: bool,
    pub discs: Vec<DiscPair>,
    pub violation: Option<Violation>,
    /// Set when the certificate was found for `h g h^{-1}` rather than `g`.
    pub conjugator: Option<Moebius>,
}

/// Seeded random conjugations tried when the isometric circles of the
/// representation itself do not certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CertifyOptions {
    pub retries: usize,
    pub seed: u64,
}

fn check_discs(generators: &[Moebius], discs: &[DiscPair]) -> Option<Violation> {
    let labelled: Vec<(DiscLabel, Circle)> = discs
        .iter()
        .enumerate()
        .flat_map(|(g, p)| {
            [
                (
                    DiscLabel {
                        generator: g,
                        side: Side::Minus,
                    },
                    p.minus,
                ),
                (
                    DiscLabel {
                        generator: g,
                        side: Side::Plus,
                    },
                    p.plus,
                ),
            ]
        })
        .collect();
    for (i, (la, ca)) in labelled.iter().enumerate() {
        for (lb, cb) in &labelled[i + 1..] {
            let gap = (ca.center - cb.center).norm() - ca.radius - cb.radius;
            if !(gap > DISJOINTNESS_MARGIN) {
                return Some(Violation::Overlap {
                    first: *la,
                    second: *lb,
                    gap,
                });
            }
        }
    }
    for (g, (gen, pair)) in generators.iter().zip(discs).enumerate() {
        let dm = gen.to_disc();
        let mut max_error: f64 = 0.0;
        for s in 0..PAIRING_SAMPLES {
            let angle = 2.0 * PI * (s as f64 + 0.5) / PAIRING_SAMPLES as f64;
            let on = pair.minus.point_at(angle);
            let outside = pair.minus.center + Complex64::from_polar(2.0 * pair.minus.radius, angle);
            let image_error = match dm.apply_extended(on) {
                Ok(w) => ((w - pair.plus.center).norm() - pair.plus.radius).abs(),
                Err(_) => f64::INFINITY,
            };
            let inward = match dm.apply_extended(outside) {
                Ok(w) if (w - pair.plus.center).norm() < pair.plus.radius => 0.0,
                _ => f64::INFINITY,
            };
            max_error = max_error.max(image_error).max(inward);
        }
        if !(max_error <= PAIRING_TOL * pair.plus.radius.max(1.0)) {
            return Some(Violation::Pairing {
                generator: g,
                max_error,
            });
        }
    }
    None
}

/// Ping-pong check with the representation's discs, or its isometric
/// circles when none are given.
pub fn ping_pong_certificate(rep: &SchottkyRepresentation) -> Result<PingPongCertificate> {
    let discs = match rep.discs() {
        Some(d) => d.to_vec(),
        None => rep.isometric_discs()?,
    };
    let violation = check_discs(rep.generators(), &discs);
    Ok(PingPongCertificate {
        certified: violation.is_none(),
        discs,
        violation,
        conjugator: None,
    })
}

/// Random elliptic element with centre in a bounded window of the half-plane.
fn random_elliptic(rng: &mut ChaCha8Rng) -> Moebius {
    let x = rng.gen_range(-1.0..1.0);
    let y = rng.gen_range(-1.0f64..1.0).exp();
    let angle = rng.gen_range(0.0..2.0 * PI);
    Moebius::elliptic(Complex64::new(x, y), angle).expect("centre lies in the half-plane")
}

/// [`ping_pong_certificate`], retrying on random conjugates. A certificate
/// for a conjugate proves the same freeness and discreteness.
pub fn certify_with(
    rep: &SchottkyRepresentation,
    opts: &CertifyOptions,
) -> Result<PingPongCertificate> {
    let first = ping_pong_certificate(rep);
    if matches!(first, Ok(ref c) if c.certified) || opts.retries == 0 {
        return first;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.retries {
        let h = random_elliptic(&mut rng);
        if let Ok(mut cert) = ping_pong_certificate(&rep.conjugated_by(&h)?) {
            if cert.certified {
                cert.conjugator = Some(h);
                return Ok(cert);
            }
        }
    }
    first
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub word: ConjugacyClassWord,
    pub length: f64,
}

/// Sorted multiset of translation lengths of all conjugacy classes up to a
/// word length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedLengthSpectrum {
    pub k: usize,
    pub max_word_length: usize,
    pub tolerance: f64,
    pub entries: Vec<SpectrumEntry>,
}

/// Accuracy the spectrum lengths are stated to.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

impl TruncatedLengthSpectrum {
    pub fn lengths(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.length).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Translation-length spectrum of the generators without a discreteness check.
pub fn spectrum_of_generators(
    generators: &[Moebius],
    max_word_length: usize,
) -> Result<TruncatedLengthSpectrum> {
    if max_word_length == 0 {
        return Err(Error::InvalidParameter(
            "max_word_length must be at least 1".into(),
        ));
    }
    let classes = enumerate_conjugacy_classes(generators.len(), max_word_length);
    let mut entries = Vec::with_capacity(classes.len());
    for word in classes {
        let trace = word_trace(word.letters(), generators)?;
        if !(trace - 2.0 > PARABOLIC_BAND) {
            return Err(Error::NonHyperbolicWord {
                word: word.to_string(),
                trace,
            });
        }
        entries.push(SpectrumEntry {
            length: translation_length_from_trace(trace),
            word,
        });
    }
    entries.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.word.cmp(&b.word))
    });
    Ok(TruncatedLengthSpectrum {
        k: generators.len(),
        max_word_length,
        tolerance: SPECTRUM_TOLERANCE,
        entries,
    })
}

/// Spectrum of a certified representation; uncertified input is an error.
pub fn truncated_spectrum(
    rep: &SchottkyRepresentation,
    max_word_length: usize,
) -> Result<TruncatedLengthSpectrum> {
    let cert = ping_pong_certificate(rep)?;
    if let Some(v) = cert.violation {
        return Err(Error::CertificationFailed(v.to_string()));
    }
    spectrum_of_generators(rep.generators(), max_word_length)
}

/// The annulus `H / <z -> e^l z>`, normalized to `A(exp(-2 pi^2 / l), 1)`.
pub fn annulus_from_cyclic(length: f64) -> Result<ModelSurface> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "translation length must be positive, got {length}"
        )));
    }
    ModelSurface::annulus((-2.0 * PI * PI / length).exp())
}
