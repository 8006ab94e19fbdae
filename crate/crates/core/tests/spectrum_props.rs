use hyperlen_core::curves::{stable_length, ClosedPolyline, ShortenOptions};
use hyperlen_core::deform::RepresentationPath;
use hyperlen_core::groups::{truncated_spectrum, SchottkyRepresentation};
use hyperlen_core::spectrum::{classify_trivial, compare, Verdict};
use hyperlen_core::ModelSurface;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn comparison_is_symmetric(l1 in 2.0f64..5.0, l2 in 2.0f64..5.0, m1 in 2.0f64..5.0, m2 in 2.0f64..5.0, tol in 1e-9f64..1e-1) {
        let a = truncated_spectrum(&SchottkyRepresentation::perpendicular_pair(l1, l2).unwrap(), 3).unwrap();
        let b = truncated_spectrum(&SchottkyRepresentation::perpendicular_pair(m1, m2).unwrap(), 3).unwrap();
        let ab = compare(&a, &b, tol).unwrap();
        let ba = compare(&b, &a, tol).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        if let (Some(x), Some(y)) = (ab.witness, ba.witness) {
            prop_assert_eq!(x.index, y.index);
            prop_assert_eq!(x.length_a, y.length_b);
            let (p, q) = (x.length_a.unwrap(), x.length_b.unwrap());
            prop_assert!((p - q).abs() > tol);
        }
    }
}

#[test]
fn distinct_stays_distinct_under_refinement() {
    let path = RepresentationPath::standard();
    let (a, b) = (path.at(0.0).unwrap(), path.at(1.0).unwrap());
    for l in 1..=6 {
        let cmp = compare(
            &truncated_spectrum(&a, l).unwrap(),
            &truncated_spectrum(&b, l).unwrap(),
            1e-6,
        )
        .unwrap();
        assert_eq!(cmp.verdict, Verdict::Distinct, "word length {l}");
    }
}

#[test]
fn annulus_is_nontrivial_and_punctured_disc_is_trivial() {
    let s = ModelSurface::annulus(0.5).unwrap();
    assert!(!classify_trivial(&s));
    let loop1 = ClosedPolyline::circle(s, Complex64::new(0.0, 0.0), 0.7, 32, 1).unwrap();
    let sl = stable_length(&loop1, &ShortenOptions::default()).unwrap();
    let expected = 2.0 * std::f64::consts::PI.powi(2) / 2f64.ln();
    assert!(sl.attained && (sl.value - expected).abs() < 1e-4 * expected);

    assert!(classify_trivial(&ModelSurface::PuncturedDisc));
    let start = ClosedPolyline::circle(
        ModelSurface::PuncturedDisc,
        Complex64::new(0.0, 0.0),
        0.5,
        32,
        1,
    )
    .unwrap();
    let sl = stable_length(&start, &ShortenOptions::default()).unwrap();
    assert_eq!((sl.value, sl.attained), (0.0, false));
    assert!(classify_trivial(&ModelSurface::Disc));
    assert!(classify_trivial(&ModelSurface::PuncturedPlane));
}
