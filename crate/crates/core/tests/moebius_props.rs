use approx::assert_abs_diff_eq;
use hyperlen_core::{Model, Moebius};
use num_complex::Complex64;
use proptest::prelude::*;

fn element() -> impl Strategy<Value = Moebius> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("positive determinant", |(a, b, c, d)| a * d - b * c > 0.05)
        .prop_map(|(a, b, c, d)| Moebius::new(a, b, c, d).unwrap())
}

fn hyperbolic() -> impl Strategy<Value = Moebius> {
    (0.0f64..std::f64::consts::PI, 0.05f64..4.0)
        .prop_map(|(a, l)| Moebius::hyperbolic(a, l).unwrap())
}

fn tag(g: &Moebius) -> &'static str {
    match g.classify() {
        hyperlen_core::IsometryClass::Identity => "identity",
        hyperlen_core::IsometryClass::Elliptic => "elliptic",
        hyperlen_core::IsometryClass::Parabolic => "parabolic",
        hyperlen_core::IsometryClass::Hyperbolic { .. } => "hyperbolic",
    }
}

proptest! {
    #[test]
    fn sign_does_not_matter((a, b, c, d) in (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("det", |(a, b, c, d)| a * d - b * c > 0.05)) {
        let g = Moebius::new(a, b, c, d).unwrap();
        let h = Moebius::new(-a, -b, -c, -d).unwrap();
        prop_assert_eq!(g, h);
        prop_assert_eq!(g.classify(), h.classify());
    }

    #[test]
    fn conjugation_keeps_trace(g in element(), h in element()) {
        let c = g.conjugated_by(&h);
        prop_assert!((c.trace().abs() - g.trace().abs()).abs() < 1e-10 * g.trace().abs().max(1.0));
        if (g.trace().abs() - 2.0).abs() > 1e-6 {
            prop_assert_eq!(tag(&c), tag(&g));
        }
    }

    #[test]
    fn group_laws(f in element(), g in element(), h in element()) {
        let left = f.compose(&g).compose(&h);
        let right = f.compose(&g.compose(&h));
        prop_assert!(left.approx_eq(&right, 1e-10 * left.entries().iter().fold(1.0f64, |m, x| m.max(x.abs()))));
        prop_assert!(g.compose(&g.inverse()).approx_eq(&Moebius::IDENTITY, 1e-10));
        prop_assert!(g.inverse().compose(&g).approx_eq(&Moebius::IDENTITY, 1e-10));
        prop_assert!((g.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn powers_add_translation_length(g in hyperbolic(), n in 1i32..=8) {
        let l = g.translation_length().unwrap();
        let ln = g.pow(n).translation_length().unwrap();
        prop_assert!((ln - n as f64 * l).abs() < 1e-8, "{} vs {}", ln, n as f64 * l);
    }

    #[test]
    fn isometric_circles_of_inverse_have_equal_radius(g in hyperbolic()) {
        let a = g.isometric_circle().unwrap();
        let b = g.inverse().isometric_circle().unwrap();
        prop_assert!((a.radius - b.radius).abs() < 1e-12 * a.radius.max(1.0));
    }

    #[test]
    fn action_preserves_the_hyperbolic_distance(g in element(), x in -2.0f64..2.0, y in 0.1f64..3.0, u in -2.0f64..2.0, v in 0.1f64..3.0) {
        // cosh d = 1 + |z - w|^2 / (2 Im z Im w)
        let dist = |z: Complex64, w: Complex64| 1.0 + (z - w).norm_sqr() / (2.0 * z.im * w.im);
        let (z, w) = (Complex64::new(x, y), Complex64::new(u, v));
        let (gz, gw) = (g.apply(z, Model::HalfPlane).unwrap(), g.apply(w, Model::HalfPlane).unwrap());
        let before = dist(z, w);
        prop_assert!((dist(gz, gw) - before).abs() < 1e-8 * before);
    }
}

#[test]
fn disc_action_matches_conjugated_half_plane_action() {
    let g = Moebius::new(2.0, 1.0, 1.0, 1.0).unwrap();
    let z = Complex64::new(0.2, -0.35);
    let via_disc = g.apply(z, Model::Disc).unwrap();
    let h = hyperlen_core::moebius::cayley_inverse(z);
    let expected = hyperlen_core::moebius::cayley(g.apply(h, Model::HalfPlane).unwrap());
    assert_abs_diff_eq!(via_disc.re, expected.re, epsilon = 1e-13);
    assert_abs_diff_eq!(via_disc.im, expected.im, epsilon = 1e-13);
}

#[test]
fn isometric_circle_is_where_the_map_is_euclidean() {
    // |g'(z)| = 1 on the isometric circle of the disc-model matrix
    let g = Moebius::hyperbolic(0.7, 1.3).unwrap();
    let dm = g.to_disc();
    let c = g.isometric_circle().unwrap();
    for k in 0..16 {
        let z = c.point_at(k as f64);
        let h = 1e-6;
        let deriv =
            (dm.apply_extended(z + h).unwrap() - dm.apply_extended(z - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(deriv.norm(), 1.0, epsilon = 1e-7);
    }
}
