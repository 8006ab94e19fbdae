"""Smoke test for the hyperlen extension module. Run after building it."""

import math

import hyperlen as hl


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    pd = hl.Surface.punctured_disc()
    rho = math.exp(-2 * math.pi)
    close(hl.curve_length(pd, hl.Curve.circle(0j, rho)), 1.0, 1e-9)
    close(hl.curve_length(hl.Surface.disc(), hl.Curve.segment(0j, 0.5 + 0j), edge_pieces=8), math.log(3), 1e-10)
    assert hl.curve_length(hl.Surface.plane(), hl.Curve.circle(0j, 2.0)) == 0.0

    ann = hl.Surface.annulus(math.exp(-math.pi))
    close(ann.core_length(), 2 * math.pi, 1e-12)
    result = hl.shorten(ann, hl.circle_vertices(ann, 0j, 0.5))
    assert result.status == "converged", result.status
    close(result.stable_length, 2 * math.pi, 1e-4)
    assert all(abs(abs(z) / math.exp(-math.pi / 2) - 1) < 1e-4 for z in result.vertices)

    escaped = hl.shorten(pd, hl.circle_vertices(pd, 0j, 0.5))
    assert escaped.status == "escaped_to_puncture"
    assert min(escaped.length_trace) < 0.1

    g = hl.Moebius.hyperbolic(0.0, 2.0)
    close(g.translation_length(), 2.0, 1e-12)
    assert g.classify() == "hyperbolic"
    close((g * g.inverse()).trace(), 2.0, 1e-12)

    cyclic = hl.SchottkyGroup.from_axes([(0.0, 2.0)])
    lengths = cyclic.spectrum(3).lengths()
    for got, want in zip(lengths, [2.0, 4.0, 6.0]):
        close(got, want, 1e-10)

    pair = hl.SchottkyGroup.perpendicular_pair(6.0, 6.0)
    assert pair.certify() == (True, None)
    certified, violation = hl.SchottkyGroup.perpendicular_pair(0.1, 0.1).certify()
    assert not certified and "overlap" in violation
    try:
        hl.SchottkyGroup.perpendicular_pair(0.1, 0.1).spectrum(2)
    except hl.CertificationError:
        pass
    else:
        raise AssertionError("uncertified group produced a spectrum")

    assert hl.enumerate_classes(2, 2) == ["x1", "x2", "x1x1", "x1x2", "x1x2^-1", "x2x2"]

    path = hl.DeformationFamily.standard_path()
    close(path.stable_length("x1", 0.0), 6.0, 1e-9)
    close(path.stable_length("x1", 1.0), 7.0, 1e-9)
    verdict, witness = path.spectrum_at(0.0, 3).compare(path.spectrum_at(1.0, 3))
    assert verdict == "distinct"
    assert abs(witness[1] - witness[2]) >= 1 - 1e-6

    annuli = hl.DeformationFamily.annulus()
    close(annuli.stable_length("x1", 0.5), 1 / 1.5, 1e-12)

    close(hl.annulus_from_cyclic(2.0).core_length(), 2.0, 1e-9)
    assert hl.mu(math.exp(4 * math.pi)) <= hl.mu_upper_bound(3 * math.pi, math.exp(4 * math.pi))
    print("hyperlen smoke test passed")


if __name__ == "__main__":
    main()
