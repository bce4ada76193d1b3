import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import group_elements
from hopflap.su2 import (FLIP, GroupElement, VectorField, circle_action, conjugate_flip, euler,
                         flow, from_euler, horizontal_laplacian_fd, inverse, multiply,
                         random_elements, second_derivative_along, to_euler)
from hopflap.wigner import RepIndex, wigner_t

ID = GroupElement.identity()
S = np.sqrt(2) / 2


def test_construction_renormalizes():
    g = GroupElement(3.0, 4.0j)
    assert abs(g.a) ** 2 + abs(g.b) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_multiply_examples():
    g = random_elements(1, 0)[0]
    assert multiply(ID, g).allclose(g)
    assert multiply(g, inverse(g)).allclose(ID)
    h = GroupElement(S, 1j * S)
    expected = h.matrix() @ h.matrix()
    assert np.allclose(multiply(h, h).matrix(), expected, atol=1e-15)


def test_inverse_examples():
    assert inverse(ID).allclose(ID)
    g = random_elements(1, 1)[0]
    assert inverse(inverse(g)).allclose(g)
    assert inverse(GroupElement(0, 1j)).allclose(GroupElement(0, -1j))
    assert np.allclose(inverse(g).matrix(), np.linalg.inv(g.matrix()))


@given(group_elements(), group_elements(), group_elements())
def test_associativity(g, h, k):
    assert multiply(multiply(g, h), k).allclose(multiply(g, multiply(h, k)), atol=1e-12)


def test_from_euler_examples():
    assert from_euler_tuple(0, 0, 0).allclose(ID)
    assert from_euler_tuple(0, 0, np.pi / 2).allclose(GroupElement(S, 1j * S))
    assert from_euler_tuple(np.pi, 0, np.pi / 2).allclose(GroupElement(1j * S, -S))


def from_euler_tuple(phi, psi, theta):
    return euler(phi, psi, theta)


def test_from_euler_is_the_triple_product():
    phi, psi, theta = 0.7, -2.3, 1.1
    d = lambda x: np.diag([np.exp(0.5j * x), np.exp(-0.5j * x)])
    mid = np.array([[np.cos(theta / 2), 1j * np.sin(theta / 2)],
                    [1j * np.sin(theta / 2), np.cos(theta / 2)]])
    assert np.allclose(euler(phi, psi, theta).matrix(), d(phi) @ mid @ d(psi), atol=1e-15)


def test_to_euler_examples():
    e = to_euler(ID)
    assert (e.phi, e.psi, e.theta) == (0.0, 0.0, 0.0)
    assert e.degenerate
    e = to_euler(GroupElement(S, 1j * S))
    assert np.allclose(e.as_tuple(), (0, 0, np.pi / 2), atol=1e-15)


def test_euler_round_trip_1000():
    g = random_elements(1000, 42)
    e = to_euler(g)
    back = from_euler(e)
    assert back.allclose(g, atol=1e-12)
    assert np.all((e.phi >= 0) & (e.phi < 2 * np.pi))
    assert np.all((e.psi >= -2 * np.pi) & (e.psi < 2 * np.pi))
    assert np.all((e.theta >= 0) & (e.theta <= np.pi))


@pytest.mark.parametrize("g", [GroupElement(1, 0), GroupElement(-1, 0), GroupElement(1j, 0),
                               GroupElement(0, 1), GroupElement(0, -1j), GroupElement(0, 1j)])
def test_euler_round_trip_degenerate(g):
    e = to_euler(g)
    assert e.degenerate
    assert from_euler(e).allclose(g, atol=1e-15)


def test_to_euler_phi_near_zero_stays_on_lattice():
    # phi a hair below 0 must wrap without changing half-integer phases
    g = euler(np.full(5, 0.0), np.linspace(-2, 2, 5), np.full(5, 0.9))
    tiny = GroupElement(np.asarray(g.a) * np.exp(-1e-17j), np.asarray(g.b))
    assert from_euler(to_euler(tiny)).allclose(g, atol=1e-14)


def test_circle_action_examples():
    g = random_elements(1, 3)[0]
    assert circle_action(g, 0).allclose(g)
    # e^{i pi} = -1 reverses the matrix; a full turn t = 2 pi returns to g
    assert circle_action(g, np.pi).allclose(-g)
    assert circle_action(g, 2 * np.pi).allclose(g)
    t = 0.4
    e, e2 = to_euler(g), to_euler(circle_action(g, t))
    assert e2.theta == pytest.approx(e.theta)
    shift = np.mod(e2.phi - e.phi - 2 * t + np.pi, 2 * np.pi) - np.pi
    assert shift == pytest.approx(0, abs=1e-12)
    # psi is unchanged up to the 2pi that accompanies a wrap of phi
    dpsi = np.mod(e2.psi - e.psi + np.pi, 2 * np.pi) - np.pi
    assert dpsi == pytest.approx(0, abs=1e-12)
    assert euler(e.phi + 2 * t, e.psi, e.theta).allclose(circle_action(g, t), atol=1e-12)


def test_conjugate_flip():
    g = random_elements(1, 4)[0]
    assert conjugate_flip(conjugate_flip(g)).allclose(g)
    assert conjugate_flip(ID).allclose(GroupElement(-1, 0))
    assert np.allclose(conjugate_flip(g).matrix(), FLIP.matrix() @ g.matrix() @ FLIP.matrix())


@pytest.mark.parametrize("field", list(VectorField))
def test_flow_basic(field):
    g = random_elements(1, 5)[0]
    assert flow(g, field, 0.0).allclose(g)
    assert flow(g, field, 0.3 + 2 * np.pi).allclose(flow(g, field, 0.3), atol=1e-12)


@given(group_elements(), st.sampled_from(list(VectorField)),
       st.floats(-3, 3), st.floats(-3, 3))
def test_flow_homomorphism(g, field, s, t):
    assert flow(flow(g, field, s), field, t).allclose(flow(g, field, s + t), atol=1e-12)


@given(group_elements(), st.floats(-3, 3))
def test_minus_kz_generates_circle_action(g, t):
    assert flow(g, VectorField.Kz, -t).allclose(circle_action(g, t), atol=1e-12)


def test_kz_derivative_matches_weight():
    idx = RepIndex(3, 1, -3)
    g = random_elements(10, 6)
    from hopflap.su2 import derivative_along
    d = derivative_along(lambda x: wigner_t(idx, x), g, VectorField.Kz, 1e-5)
    np.testing.assert_allclose(d, 2j * float(idx.m) * wigner_t(idx, g), rtol=1e-8)


def test_second_derivative_constant():
    g = random_elements(4, 7)
    val = second_derivative_along(lambda x: np.ones(np.shape(x.a)), g, VectorField.Kx)
    assert np.max(np.abs(val)) < 1e-8
    with pytest.raises(ValueError):
        second_derivative_along(lambda x: 1.0, g, VectorField.Kx, h=0)


@pytest.mark.parametrize("idx,lam", [(RepIndex(2, 0, 0), 8.0), (RepIndex(1, 1, 1), 2.0)])
def test_horizontal_laplacian_examples(idx, lam):
    g = random_elements(20, 8)
    f = lambda x: wigner_t(idx, x)
    fd = horizontal_laplacian_fd(f, g)
    np.testing.assert_allclose(fd, lam * f(g), rtol=1e-4)
