//! Elements of PSL(2, R) acting on the upper half-plane and, through the
//! Cayley transform `z -> (z - i)/(z + i)`, on the unit disc.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this `|ad| + |bc|` the determinant is not recomputed.
const RENORMALIZE_LIMIT: f64 = 1e4;

/// Band around `|trace| = 2` inside which an element is called parabolic.
pub const PARABOLIC_BAND: f64 = 1e-10;

/// Entries within this distance of `I` classify as the identity.
const IDENTITY_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which model of the hyperbolic plane a point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    HalfPlane,
    Disc,
}

/// Trace classification of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic { translation_length: f64 },
}

impl IsometryClass {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryClass::Hyperbolic { .. })
    }

    pub fn translation_length(&self) -> Option<f64> {
        match *self {
            IsometryClass::Hyperbolic { translation_length } => Some(translation_length),
            _ => None,
        }
    }
}

/// `2 arccosh(|trace| / 2)`.
pub fn translation_length_from_trace(trace: f64) -> f64 {
    2.0 * (trace.abs() / 2.0).acosh()
}

/// A real Möbius transformation `z -> (az + b)/(cz + d)` with `ad - bc = 1`.
///
/// Matrices are stored in a canonical sign: positive trace, or when the trace
/// vanishes, first nonzero entry positive. `T` and `-T` are the same element
/// and compare equal under [`Moebius::approx_eq`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Moebius {
    pub const IDENTITY: Moebius = Moebius {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds and normalizes a transformation. The determinant must be positive.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::NonPositiveDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Self::canonical_sign(a / s, b / s, c / s, d / s))
    }

    /// Entries already of unit determinant (up to rounding); only the sign is fixed.
    pub(crate) fn from_unimodular(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::canonical_sign(a, b, c, d)
    }

    fn canonical_sign(a: f64, b: f64, c: f64, d: f64) -> Self {
        let trace = a + d;
        let flip = if trace != 0.0 {
            trace < 0.0
        } else {
            [a, b, c, d]
                .into_iter()
                .find(|x| *x != 0.0)
                .is_some_and(|x| x < 0.0)
        };
        if flip {
            Moebius {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Moebius { a, b, c, d }
        }
    }

    /// `z -> e^{length} z`, translation along the imaginary axis.
    pub fn dilation(length: f64) -> Self {
        let h = 0.5 * length;
        Self::from_unimodular(h.exp(), 0.0, 0.0, (-h).exp())
    }

    /// Elliptic rotation by `angle` about the point `i` of the half-plane.
    pub fn rotation_about_i(angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::from_unimodular(c, s, -s, c)
    }

    /// Elliptic rotation by `angle` about an arbitrary point of the half-plane.
    pub fn elliptic(center: Complex64, angle: f64) -> Result<Self> {
        if !(center.im > 0.0) {
            return Err(Error::outside(center, "upper half-plane"));
        }
        // affine map sending i to center, conjugating the rotation about i
        let y = center.im.sqrt();
        let to_center = Self::from_unimodular(y, center.re / y, 0.0, 1.0 / y);
        Ok(Self::rotation_about_i(angle).conjugated_by(&to_center))
    }

    /// Hyperbolic element translating by `length` along the geodesic through
    /// `i` obtained by rotating the imaginary axis by `axis_angle` about `i`.
    pub fn hyperbolic(axis_angle: f64, length: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "translation length must be positive, got {length}"
            )));
        }
        Ok(Self::dilation(length).conjugated_by(&Self::rotation_about_i(axis_angle)))
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix product `self * other` (apply `other` first), re-normalized.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let (a, b, c, d) = (
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        );
        // ad - bc cancels catastrophically for large entries; the product of
        // unimodular matrices is already unimodular up to rounding there.
        let scale = (a * d).abs() + (b * c).abs();
        if scale > RENORMALIZE_LIMIT {
            return Self::canonical_sign(a, b, c, d);
        }
        let s = (a * d - b * c).sqrt();
        Self::canonical_sign(a / s, b / s, c / s, d / s)
    }

    pub fn inverse(&self) -> Moebius {
        Self::canonical_sign(self.d, -self.b, -self.c, self.a)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i32) -> Moebius {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Moebius::IDENTITY, |acc, _| acc.compose(&base))
    }

    /// `h * self * h^{-1}`.
    pub fn conjugated_by(&self, h: &Moebius) -> Moebius {
        h.compose(self).compose(&h.inverse())
    }

    pub fn is_identity(&self) -> bool {
        (self.a - 1.0).abs() < IDENTITY_TOL
            && self.b.abs() < IDENTITY_TOL
            && self.c.abs() < IDENTITY_TOL
            && (self.d - 1.0).abs() < IDENTITY_TOL
    }

    pub fn classify(&self) -> IsometryClass {
        if self.is_identity() {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if t - 2.0 > PARABOLIC_BAND {
            IsometryClass::Hyperbolic {
                translation_length: translation_length_from_trace(t),
            }
        } else if 2.0 - t > PARABOLIC_BAND {
            IsometryClass::Elliptic
        } else {
            IsometryClass::Parabolic
        }
    }

    pub fn translation_length(&self) -> Option<f64> {
        self.classify().translation_length()
    }

    /// Same axis, new translation length. Only defined for hyperbolic elements.
    ///
    /// Writes `g = cosh(L/2) I + sinh(L/2) N` with `N` traceless and `N^2 = I`,
    /// then swaps in the new half-length.
    pub fn with_translation_length(&self, length: f64) -> Result<Moebius> {
        if !self.classify().is_hyperbolic() {
            return Err(Error::InvalidParameter(
                "only hyperbolic elements have an axis".into(),
            ));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "translation length must be positive, got {length}"
            )));
        }
        let half_trace = 0.5 * self.trace();
        let sinh_old = (half_trace * half_trace - 1.0).sqrt();
        let (ch, sh) = ((0.5 * length).cosh(), (0.5 * length).sinh());
        let k = sh / sinh_old;
        Ok(Self::from_unimodular(
            ch + k * (self.a - half_trace),
            k * self.b,
            k * self.c,
            ch + k * (self.d - half_trace),
        ))
    }

    /// Equality up to the projective sign.
    pub fn approx_eq(&self, other: &Moebius, tol: f64) -> bool {
        let close = |s: f64| {
            (self.a - s * other.a).abs() <= tol
                && (self.b - s * other.b).abs() <= tol
                && (self.c - s * other.c).abs() <= tol
                && (self.d - s * other.d).abs() <= tol
        };
        close(1.0) || close(-1.0)
    }

    pub fn apply(&self, z: Complex64, model: Model) -> Result<Complex64> {
        match model {
            Model::HalfPlane => {
                if !(z.im > 0.0) {
                    return Err(Error::outside(z, "upper half-plane"));
                }
                let den = z * self.c + self.d;
                if den.norm() == 0.0 {
                    return Err(Error::Pole { re: z.re, im: z.im });
                }
                Ok((z * self.a + self.b) / den)
            }
            Model::Disc => self.to_disc().apply(z),
        }
    }

    /// Conjugate into the disc model by the Cayley transform.
    pub fn to_disc(&self) -> DiscMoebius {
        // C = [[1, -i], [1, i]], C^{-1} = [[1/2, 1/2], [i/2, -i/2]]
        let m = [
            [Complex64::from(self.a), Complex64::from(self.b)],
            [Complex64::from(self.c), Complex64::from(self.d)],
        ];
        let cay = [[Complex64::from(1.0), -I], [Complex64::from(1.0), I]];
        let cay_inv = [
            [Complex64::from(0.5), Complex64::from(0.5)],
            [0.5 * I, -0.5 * I],
        ];
        let cm = mat_mul(&cay, &m);
        let r = mat_mul(&cm, &cay_inv);
        DiscMoebius {
            a: r[0][0],
            b: r[0][1],
            c: r[1][0],
            d: r[1][1],
        }
    }

    /// Isometric circle `|cz + d| = 1` of the disc-model matrix.
    pub fn isometric_circle(&self) -> Result<Circle> {
        self.to_disc().isometric_circle()
    }
}

impl Mul for Moebius {
    type Output = Moebius;

    fn mul(self, rhs: Moebius) -> Moebius {
        self.compose(&rhs)
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn mat_mul(x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

/// A round circle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn point_at(&self, angle: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, angle)
    }
}

/// Complex matrix acting on the disc, of the form `[[a, b], [conj b, conj a]]`
/// when it comes from a real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscMoebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl DiscMoebius {
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::outside(z, "unit disc"));
        }
        self.apply_extended(z)
    }

    /// Action on the whole Riemann sphere minus the pole; used for ping-pong
    /// checks on circles that leave the disc.
    pub fn apply_extended(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        Ok((self.a * z + self.b) / den)
    }

    pub fn isometric_circle(&self) -> Result<Circle> {
        let nc = self.c.norm();
        if nc < 1e-14 {
            return Err(Error::UndefinedIsometricCircle);
        }
        Ok(Circle {
            center: -self.d / self.c,
            radius: 1.0 / nc,
        })
    }
}

/// Cayley transform from the half-plane to the disc.
pub fn cayley(z: Complex64) -> Complex64 {
    (z - I) / (z + I)
}

/// Inverse Cayley transform from the disc to the half-plane.
pub fn cayley_inverse(w: Complex64) -> Complex64 {
    I * (Complex64::from(1.0) + w) / (Complex64::from(1.0) - w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn normalization_fixes_determinant_and_sign() {
        let g = Moebius::new(-2.0, -1.0, -1.0, -1.0).unwrap();
        assert_abs_diff_eq!(g.determinant(), 1.0, epsilon = 1e-12);
        assert!(g.trace() > 0.0);
        let r = Moebius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(r.entries(), [0.0, 1.0, -1.0, 0.0]);
        assert!(Moebius::new(1.0, 2.0, 3.0, 4.0).is_err());
    }

    #[test]
    fn compose_examples() {
        let g = Moebius::hyperbolic(0.7, 1.3).unwrap();
        assert!(Moebius::IDENTITY.compose(&g).approx_eq(&g, 1e-14));
        assert_eq!(g.compose(&g.inverse()).classify(), IsometryClass::Identity);
        let e = Moebius::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        let e2 = e.compose(&e);
        assert!(e2.approx_eq(
            &Moebius::new(E * E, 0.0, 0.0, 1.0 / (E * E)).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn classify_examples() {
        // trace 3
        let g = Moebius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let expected = 2.0 * (1.5f64 + (1.5f64 * 1.5 - 1.0).sqrt()).ln();
        let len = g.translation_length().unwrap();
        assert_abs_diff_eq!(len, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(len, 1.924847, epsilon = 1e-6);

        let p = Moebius::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(p.classify(), IsometryClass::Parabolic);

        let e = Moebius::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        assert_abs_diff_eq!(e.translation_length().unwrap(), 2.0, epsilon = 1e-12);

        assert_eq!(
            Moebius::rotation_about_i(1.0).classify(),
            IsometryClass::Elliptic
        );
        assert_eq!(Moebius::IDENTITY.classify(), IsometryClass::Identity);
    }

    #[test]
    fn apply_examples() {
        let z = Complex64::new(0.3, 0.7);
        assert_eq!(Moebius::IDENTITY.apply(z, Model::HalfPlane).unwrap(), z);
        let e = Moebius::new(E, 0.0, 0.0, 1.0 / E).unwrap();
        let w = e.apply(I, Model::HalfPlane).unwrap();
        assert_abs_diff_eq!(w.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.im, E * E, epsilon = 1e-12);

        let p = Complex64::new(0.3, 0.2);
        let back = cayley(cayley_inverse(p));
        assert!((back - p).norm() < 1e-12);

        assert!(e.apply(Complex64::new(1.0, 0.0), Model::HalfPlane).is_err());
        assert!(e.apply(Complex64::new(1.0, 0.0), Model::Disc).is_err());
    }

    #[test]
    fn disc_action_commutes_with_cayley() {
        let g = Moebius::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let z = Complex64::new(-0.4, 1.7);
        let via_half = cayley(g.apply(z, Model::HalfPlane).unwrap());
        let via_disc = g.apply(cayley(z), Model::Disc).unwrap();
        assert!((via_half - via_disc).norm() < 1e-12);
    }

    #[test]
    fn isometric_circle_examples() {
        let g = Moebius::hyperbolic(0.0, 2.0).unwrap();
        let dm = g.to_disc();
        let circ = g.isometric_circle().unwrap();
        assert!((circ.center + dm.d / dm.c).norm() < 1e-14);
        assert_abs_diff_eq!(circ.radius, 1.0 / dm.c.norm(), epsilon = 1e-14);
        // hyperbolic along the imaginary axis: radius 1/sinh(l/2)
        assert_abs_diff_eq!(circ.radius, 1.0 / 1.0f64.sinh(), epsilon = 1e-12);

        // rotation about i is rotation about the disc centre
        let rot = Moebius::rotation_about_i(PI / 3.0);
        assert_eq!(rot.isometric_circle(), Err(Error::UndefinedIsometricCircle));
    }

    #[test]
    fn hyperbolic_constructor_axes() {
        let a = Moebius::hyperbolic(0.0, 6.0).unwrap();
        let b = Moebius::hyperbolic(PI / 2.0, 6.0).unwrap();
        assert_abs_diff_eq!(a.translation_length().unwrap(), 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b.translation_length().unwrap(), 6.0, epsilon = 1e-10);
        // b fixes +-1
        let x = b.entries();
        let fix = |t: f64| (x[0] * t + x[1]) / (x[2] * t + x[3]);
        assert_abs_diff_eq!(fix(1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fix(-1.0), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn retargeting_length_keeps_axis() {
        let g = Moebius::hyperbolic(0.4, 3.0).unwrap();
        let h = g.with_translation_length(5.5).unwrap();
        assert_abs_diff_eq!(h.translation_length().unwrap(), 5.5, epsilon = 1e-10);
        assert_abs_diff_eq!(h.determinant(), 1.0, epsilon = 1e-12);
        // commuting elements share the axis
        assert!(g.compose(&h).approx_eq(&h.compose(&g), 1e-10));
        assert!(Moebius::rotation_about_i(1.0)
            .with_translation_length(1.0)
            .is_err());
    }

    #[test]
    fn elliptic_fixes_its_centre() {
        let c = Complex64::new(0.5, 2.0);
        let e = Moebius::elliptic(c, 0.9).unwrap();
        assert!((e.apply(c, Model::HalfPlane).unwrap() - c).norm() < 1e-12);
        assert_eq!(e.classify(), IsometryClass::Elliptic);
    }
}
