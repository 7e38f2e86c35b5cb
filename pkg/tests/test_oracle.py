"""Tests for the brute-force oracles: exact Cheeger constants and exact
minimal sweep-out max mass on small meshes."""

import math

import pytest

from diastolic import corpus
from diastolic.builder import base_sweep_out
from diastolic.errors import TooLarge
from diastolic.oracle import (
    CHEEGER_CAP,
    SWEEP_CAP,
    exact_cheeger,
    minimal_sweep_max_mass,
)
from diastolic.surface import UNIT_TRIANGLE_AREA


def test_exact_cheeger_tetrahedron():
    s = corpus.mesh("tetrahedron")
    h, dec = exact_cheeger(s)
    assert h == 8.0 / math.sqrt(3.0)
    assert dec.delta.mass == 4
    assert min(len(dec.domain1), len(dec.domain2)) == 2
    assert dec.delta.is_cycle()


def test_exact_cheeger_octahedron():
    h, dec = exact_cheeger(corpus.mesh("octahedron"))
    assert h == pytest.approx(4.0 / math.sqrt(3.0))
    assert dec.delta.mass == 4
    assert min(len(dec.domain1), len(dec.domain2)) == 4


def test_exact_cheeger_icosahedron():
    h, dec = exact_cheeger(corpus.mesh("icosahedron"))
    assert h == pytest.approx(1.385640646055)
    assert dec.delta.mass == 6
    assert min(len(dec.domain1), len(dec.domain2)) == 10


def test_exact_cheeger_csaszar():
    h, dec = exact_cheeger(corpus.mesh("csaszar_torus"))
    assert h == pytest.approx(4.0 / math.sqrt(3.0))
    assert dec.delta.mass == 7
    assert min(len(dec.domain1), len(dec.domain2)) == 7


def test_exact_cheeger_witness_is_the_ratio():
    for name in ("tetrahedron", "octahedron", "icosahedron", "csaszar_torus"):
        s = corpus.mesh(name)
        h, dec = exact_cheeger(s)
        small = min(len(dec.domain1), len(dec.domain2))
        assert h == pytest.approx(dec.delta.mass / (UNIT_TRIANGLE_AREA * small))


def test_exact_cheeger_too_large():
    with pytest.raises(TooLarge):
        exact_cheeger(corpus.mesh("genus2"))  # 26 > 24
    assert CHEEGER_CAP == 24


def test_minimal_sweep_tetrahedron():
    s = corpus.mesh("tetrahedron")
    opt, witness = minimal_sweep_max_mass(s)
    assert opt == 4
    assert witness.max_mass == 4
    assert witness.ring == "Z2"
    assert witness.verify().accepted


def test_minimal_sweep_octahedron():
    s = corpus.mesh("octahedron")
    opt, witness = minimal_sweep_max_mass(s)
    assert opt == 5
    assert witness.verify().accepted
    # the greedy builder matches the optimum on this mesh
    assert base_sweep_out(s).max_mass == 5


def test_minimal_sweep_is_a_lower_bound_for_greedy():
    for name in ("tetrahedron", "octahedron"):
        s = corpus.mesh(name)
        opt, _ = minimal_sweep_max_mass(s)
        assert base_sweep_out(s).max_mass >= opt


def test_minimal_sweep_too_large():
    with pytest.raises(TooLarge):
        minimal_sweep_max_mass(corpus.mesh("icosahedron"))  # 20 > 12
    assert SWEEP_CAP == 12


def test_oracles_are_deterministic():
    s = corpus.mesh("octahedron")
    a = exact_cheeger(s)
    b = exact_cheeger(s)
    assert a[0] == b[0]
    assert a[1].domain1 == b[1].domain1
    x = minimal_sweep_max_mass(s)
    y = minimal_sweep_max_mass(s)
    assert x[0] == y[0]
    assert x[1].mass_profile() == y[1].mass_profile()
