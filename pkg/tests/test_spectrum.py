import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hopflap.errors import DomainError
from hopflap.quadrature import haar_grid, integrate_values, lp_norm_values
from hopflap.spectrum import (Section, SpectralLevel, apply_multiplier, coefficient_vector, eigenvalue,
                              eigenvalue_from_dimension, enumerate_levels, l2_norm, multiplicity,
                              random_section, section_basis, synthesize)
from hopflap.su2 import circle_action, random_elements
from hopflap.wigner import RepIndex, wigner_t


@pytest.mark.parametrize("k,M,expected", [(0, 0, 0), (1, 0, 2), (2, 1, 20)])
def test_eigenvalue_examples(k, M, expected):
    assert eigenvalue(k, M) == expected


@pytest.mark.parametrize("k,M,expected", [(0, 0, 1), (1, 0, 2), (3, 2, 8)])
def test_multiplicity_examples(k, M, expected):
    assert multiplicity(k, M) == expected


@given(st.integers(-40, 40), st.integers(0, 60))
def test_eigenvalue_forms_agree_and_reflect(k, M):
    assert eigenvalue(k, M) == eigenvalue_from_dimension(k, M)
    assert eigenvalue(k, M) == eigenvalue(-k, M)
    assert multiplicity(k, M) == multiplicity(-k, M)


def test_negative_level_rejected():
    with pytest.raises(DomainError):
        eigenvalue(1, -1)


@pytest.mark.parametrize("k", [-4, -1, 0, 1, 2, 7])
def test_levels(k):
    levels = enumerate_levels(k, 30)
    assert [lev.M for lev in levels] == list(range(31))
    assert levels[0].eigenvalue == 2 * abs(k)
    assert all((lev.N - 1 - k) % 2 == 0 for lev in levels)
    assert all(a.eigenvalue < b.eigenvalue for a, b in zip(levels, levels[1:]))
    assert levels[3].l == (2 * 3 + abs(k)) / 2


@pytest.mark.parametrize("k", range(-5, 6))
def test_weyl_count(k):
    for X in range(101):
        assert sum(multiplicity(k, M) for M in range(X + 1)) == (X + 1) * (X + 1 + abs(k))


def test_synthesize_examples():
    g = random_elements(6, 1)
    assert np.all(synthesize(Section.zeros(2, 3), g) == 0)
    s = Section.unit(1, 1, -1, max_m=2)
    np.testing.assert_allclose(synthesize(s, g), 2 * wigner_t(RepIndex(3, 1, -1), g), atol=1e-14)


@given(st.integers(-3, 3), st.floats(-3, 3), st.integers(0, 1000))
def test_synthesize_equivariance(k, t, seed):
    s = random_section(k, 4, seed)
    g = random_elements(3, seed)
    np.testing.assert_allclose(synthesize(s, circle_action(g, t)), np.exp(-1j * k * t) * synthesize(s, g),
                               atol=1e-11)


def test_l2_norm_examples():
    assert l2_norm(Section.zeros(1, 4)) == 0
    assert l2_norm(Section.unit(3, 2, 1)) == 1


@pytest.mark.parametrize("k", [0, 1, -2])
def test_parseval_against_quadrature(k):
    s = random_section(k, 5, 3)
    grid = haar_grid(16, 24, 48)
    vals = synthesize(s, grid.elements)
    assert lp_norm_values(vals, 2, grid) == pytest.approx(l2_norm(s), abs=1e-8)


def test_section_basis_matches_synthesize():
    s = random_section(-3, 6, 9)
    g = random_elements(11, 4)
    np.testing.assert_allclose(section_basis(-3, 6, g) @ coefficient_vector(s), synthesize(s, g), atol=1e-13)


def test_apply_multiplier():
    s = random_section(2, 3, 1)
    assert apply_multiplier(s, lambda M: 1.0).allclose(s)
    doubled = apply_multiplier(s, lambda M: 2.0)
    assert l2_norm(doubled) == pytest.approx(2.0)


def test_multiplier_eigenvalue_matches_finite_difference():
    from hopflap.su2 import horizontal_laplacian_fd
    k = 1
    s = random_section(k, 2, 5)
    lap = apply_multiplier(s, lambda M: eigenvalue(k, M))
    g = random_elements(5, 6)
    fd = horizontal_laplacian_fd(lambda x: synthesize(s, x), g, h=1e-3, richardson=True)
    np.testing.assert_allclose(fd, synthesize(lap, g), rtol=1e-4, atol=1e-6)


def test_random_section():
    s = random_section(2, 5, 7)
    assert l2_norm(s) == pytest.approx(1.0)
    assert random_section(2, 5, 7).allclose(s, atol=0)
    assert [b.size for b in s.blocks] == [multiplicity(2, M) for M in range(6)]
    assert not random_section(2, 5, 8).allclose(s)


def test_section_validation():
    with pytest.raises(DomainError):
        Section(1, (np.zeros(3),))
    with pytest.raises(DomainError):
        Section.unit(2, 0, 1)


@given(st.integers(-4, 4), st.integers(0, 4), st.integers(0, 10_000))
def test_json_round_trip(k, max_m, seed):
    s = random_section(k, max_m, seed)
    back = Section.from_json(s.to_json())
    assert back.allclose(s, atol=0)


def test_json_layout_and_fraction_strings():
    s = Section.unit(1, 0, -1)
    obj = json.loads(s.to_json())
    assert obj["k"] == 1 and obj["maxM"] == 0
    assert {e["n"] for e in obj["entries"]} == {-0.5, 0.5}
    text = json.dumps({"k": 1, "maxM": 0, "entries": [{"M": 0, "n": "-1/2", "re": 1, "im": 0}]})
    assert Section.from_json(text).allclose(s)
    bad = json.dumps({"k": 1, "maxM": 0, "entries": [{"M": 0, "n": 1, "re": 1, "im": 0}]})
    with pytest.raises(DomainError):
        Section.from_json(bad)


def test_spectral_level_properties():
    lev = SpectralLevel(-3, 2)
    assert (lev.l2, lev.N, lev.eigenvalue, lev.multiplicity) == (7, 8, 54, 8)
    assert list(lev.n2_values()) == list(range(-7, 8, 2))
