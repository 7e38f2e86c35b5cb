"""Tests for one-cycles, two-chain certificates, and sweep-out
verification."""

import pytest

from diastolic import corpus
from diastolic.chains import OneCycle, SweepOut, TwoChain, sweep_from_json_dict
from diastolic.errors import LengthMismatch, ValidationError


def edge_cycle(surface, pairs, ring=None):
    """Build a one-chain from (u, v, coeff) triples given by vertex pairs."""
    coeffs = {}
    for u, v, c in pairs:
        coeffs[surface.edge_id(u, v)] = c
    return OneCycle(surface, coeffs, ring)


def test_mass_and_zero():
    s = corpus.mesh("tetrahedron")
    z = edge_cycle(s, [(0, 1, 2), (1, 2, -1), (0, 2, 1)])
    assert z.mass == 4
    assert not z.is_zero()
    assert OneCycle(s).is_zero()
    assert OneCycle(s).mass == 0


def test_triangle_boundary_is_a_cycle_of_mass_three():
    s = corpus.mesh("octahedron")
    for t in range(len(s.triangles)):
        c = TwoChain(s, {t: 1})
        z = c.boundary()
        assert z.mass == 3
        assert z.is_cycle()


def test_fundamental_class_has_null_boundary():
    for name in ("tetrahedron", "octahedron", "csaszar_torus", "genus2"):
        s = corpus.mesh(name)
        full = TwoChain(s, {t: 1 for t in range(len(s.triangles))})
        assert full.boundary().is_zero()
    # mod 2 the same holds on the Klein bottle
    k = corpus.mesh("klein_bottle")
    full = TwoChain(k, {t: 1 for t in range(len(k.triangles))})
    assert full.boundary().is_zero()


def test_non_cycle_detected():
    s = corpus.mesh("tetrahedron")
    z = edge_cycle(s, [(0, 1, 1)])
    assert not z.is_cycle()
    # all three edges of a triangle with matching +1 signs double back:
    # edge (0, 2) is oriented 0 -> 2, so the loop 0 -> 1 -> 2 -> 0 needs -1
    z3 = edge_cycle(s, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    assert not z3.is_cycle()
    loop = edge_cycle(s, [(0, 1, 1), (1, 2, 1), (0, 2, -1)])
    assert loop.is_cycle()


def test_z2_canonicalization():
    s = corpus.mesh("klein_bottle")
    z = edge_cycle(s, [(0, 1, 3), (1, 2, 2)])
    # 3 -> 1, 2 -> 0 dropped
    assert z.mass == 1
    assert z.coeffs == {s.edge_id(0, 1): 1}
    assert -z == z


def test_arithmetic_and_equality():
    s = corpus.mesh("tetrahedron")
    a = edge_cycle(s, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    b = edge_cycle(s, [(0, 1, 1), (1, 3, 1), (3, 0, 1)])
    d = a - b
    assert d + b == a
    assert (a - a).is_zero()
    assert -(-a) == a
    assert hash(a) == hash(edge_cycle(s, [(2, 0, 1), (0, 1, 1), (1, 2, 1)]))


def test_mixed_surface_arithmetic_rejected():
    s = corpus.mesh("tetrahedron")
    t = corpus.mesh("octahedron")
    with pytest.raises(ValidationError):
        OneCycle(s) + OneCycle(t)


def test_z_coefficients_rejected_on_nonorientable():
    k = corpus.mesh("klein_bottle")
    with pytest.raises(ValidationError):
        OneCycle(k, ring="Z")
    with pytest.raises(ValidationError):
        TwoChain(k, {0: 1}, ring="Z")


def sweep_by_triangle_order(surface, order, ring=None):
    """Hand-rolled single-triangle sweep used to exercise the verifier."""
    zero = OneCycle(surface, ring=ring)
    steps = [zero]
    certs = []
    acc = zero
    for t in order:
        c = TwoChain(surface, {t: 1}, ring=ring)
        certs.append(c)
        acc = acc + c.boundary()
        steps.append(acc)
    return SweepOut(surface, steps, certs, ring=ring)


def test_verify_accepts_valid_sweep():
    s = corpus.mesh("tetrahedron")
    sweep = sweep_by_triangle_order(s, range(4))
    report = sweep.verify()
    assert report.endpoints_null
    assert report.certificates_valid
    assert report.generator_certificate
    assert report.accepted
    assert report.max_mass == sweep.max_mass == 4
    assert sweep.mass_profile() == [0, 3, 4, 3, 0]


def test_verify_rejects_nonzero_endpoint():
    s = corpus.mesh("tetrahedron")
    sweep = sweep_by_triangle_order(s, range(4))
    clipped = SweepOut(s, sweep.steps[:-1], sweep.certificates[:-1])
    report = clipped.verify()
    assert not report.endpoints_null
    assert not report.accepted
    # certificates and total are still checked independently
    assert report.certificates_valid
    assert not report.generator_certificate


def test_verify_rejects_broken_certificate():
    s = corpus.mesh("tetrahedron")
    sweep = sweep_by_triangle_order(s, range(4))
    certs = list(sweep.certificates)
    certs[1] = TwoChain(s, {3: 1})
    bad = SweepOut(s, sweep.steps, certs)
    report = bad.verify()
    assert report.endpoints_null
    assert not report.certificates_valid
    assert not report.accepted


def test_verify_rejects_double_cover():
    s = corpus.mesh("tetrahedron")
    a = sweep_by_triangle_order(s, range(4))
    steps = a.steps + a.steps[1:]
    certs = a.certificates + a.certificates
    doubled = SweepOut(s, steps, certs)
    report = doubled.verify()
    assert report.certificates_valid
    assert not report.generator_certificate


def test_verify_accepts_negative_orientation():
    s = corpus.mesh("tetrahedron")
    zero = OneCycle(s)
    steps = [zero]
    certs = []
    acc = zero
    for t in range(4):
        c = -TwoChain(s, {t: 1})
        certs.append(c)
        acc = acc + c.boundary()
        steps.append(acc)
    sweep = SweepOut(s, steps, certs)
    assert sweep.verify().accepted


def test_length_mismatch():
    s = corpus.mesh("tetrahedron")
    with pytest.raises(LengthMismatch):
        SweepOut(s, [OneCycle(s), OneCycle(s)], [])


def test_to_mod2_of_integral_sweep_verifies():
    s = corpus.mesh("genus2")
    sweep = sweep_by_triangle_order(s, range(len(s.triangles)))
    m2 = sweep.to_mod2()
    assert m2.ring == "Z2"
    assert m2.verify().accepted
    assert m2.max_mass <= sweep.max_mass


def test_sweep_json_roundtrip():
    s = corpus.mesh("octahedron")
    sweep = sweep_by_triangle_order(s, [0, 2, 4, 6, 1, 3, 5, 7])
    doc = sweep.to_json_dict()
    assert doc["format"] == "dias-sweep/1"
    back = sweep_from_json_dict(s, doc)
    assert back.mass_profile() == sweep.mass_profile()
    assert back.steps == sweep.steps
    assert back.certificates == sweep.certificates
    assert back.verify().accepted
    with pytest.raises(ValidationError):
        sweep_from_json_dict(s, {"format": "dias-sweep/2"})
