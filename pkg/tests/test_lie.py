import numpy as np
import pytest

from wolfqk import algebra, lie
from wolfqk.signature import COMPACT, SPLIT, DomainError

SIGS = [COMPACT, SPLIT]


@pytest.mark.parametrize("sig", SIGS)
def test_basis_and_coordinates(sig, rng):
    basis = lie.algebra_basis(sig)
    assert len(basis) == 21
    for X in basis:
        assert lie.is_skew_adjoint(X, sig)
    c = rng.normal(size=21)
    assert np.allclose(lie.algebra_coordinates(lie.from_coordinates(c, sig)), c)


@pytest.mark.parametrize("sig", SIGS)
def test_exp_lands_in_identity_component(sig, rng):
    g = lie.random_group_element(sig, rng, 2.0)
    assert lie.is_group_element(g, sig)
    assert lie.in_identity_component(g, sig)
    assert np.allclose(g @ lie.group_inverse(g, sig), np.eye(7))


def test_reflection_is_outside_identity_component():
    g = np.diag([-1.0, 1, 1, -1, 1, 1, 1])
    assert lie.is_group_element(g, SPLIT)
    assert not lie.in_identity_component(g, SPLIT)


@pytest.mark.parametrize("sig", SIGS)
def test_adjoint_action(sig, rng):
    g, h = (lie.random_group_element(sig, rng) for _ in range(2))
    X, Y = (lie.random_algebra_element(sig, rng) for _ in range(2))
    assert np.allclose(lie.Ad(g @ h, X, sig), lie.Ad(g, lie.Ad(h, X, sig), sig))
    assert np.allclose(lie.Ad_inv(g, lie.Ad(g, X, sig), sig), X)
    assert np.allclose(lie.Ad(g, lie.bracket(X, Y), sig), lie.bracket(lie.Ad(g, X, sig), lie.Ad(g, Y, sig)))
    assert abs(lie.killing(lie.Ad(g, X, sig), lie.Ad(g, Y, sig)) - lie.killing(X, Y)) < 1e-10


def test_check_algebra_rejects():
    with pytest.raises(DomainError):
        lie.check_algebra(np.eye(7), COMPACT)
    with pytest.raises(DomainError):
        lie.check_algebra(np.zeros((3, 3)), COMPACT)


@pytest.mark.parametrize("sig", SIGS)
def test_two_form_round_trip(sig, rng):
    X = lie.random_algebra_element(sig, rng)
    W = lie.matrix_to_two_form(X, sig)
    assert np.allclose(W, -W.T)
    assert np.allclose(lie.two_form_to_matrix(W, sig), X)


@pytest.mark.parametrize("sig", SIGS)
def test_split_parts(sig, rng):
    X = lie.random_algebra_element(sig, rng)
    parts = lie.split(X, sig)
    assert np.allclose(parts.h_prime + parts.s_matrix + parts.m_matrix, X)
    # s and h' commute and are orthogonal
    assert np.allclose(lie.bracket(parts.s_matrix, parts.h_prime), 0, atol=1e-12)
    assert abs(lie.killing(parts.s_matrix, parts.h_prime)) < 1e-12
    assert np.allclose(lie.sp1_to_matrix(parts.s, sig), parts.s_matrix)


@pytest.mark.parametrize("sig", SIGS)
def test_s_is_an_sp1(sig):
    J1, J2, J3 = lie.s_basis(sig)
    # <J, J> = 2 with killing = -tr/2, so each J_k^2 = -1 on the 4-block
    for J in (J1, J2, J3):
        assert lie.killing(J, J) == pytest.approx(2.0)
    span = np.array([J.ravel() for J in (J1, J2, J3)]).T
    for A, B in ((J1, J2), (J2, J3), (J3, J1)):
        C = lie.bracket(A, B).ravel()
        coef, *_ = np.linalg.lstsq(span, C, rcond=None)
        assert np.allclose(span @ coef, C)


@pytest.mark.parametrize("sig", SIGS)
def test_sp1_coordinates_round_trip(sig, rng):
    mu = rng.normal(size=3)
    assert np.allclose(lie.sp1_coordinates(lie.sp1_to_matrix(mu, sig), sig), mu)


@pytest.mark.parametrize("sig", SIGS)
def test_canonical_vector_field_in_g2(sig, rng):
    x = rng.normal(size=7)
    A = lie.canonical_vector_field(x, sig)
    assert lie.is_skew_adjoint(A, sig, 1e-12)
    assert not algebra.is_g2_algebra_element(A, sig)
    assert np.allclose(A @ x, 0)


def test_riemannian_inner_positive(rng):
    X = lie.random_algebra_element(SPLIT, rng)
    assert lie.riemannian_inner(X, X) > 0


@pytest.mark.parametrize("sig", SIGS)
def test_predicates_invariant_under_sp1_sign_flip(sig, monkeypatch, rng):
    from wolfqk import moment as M

    X = lie.random_algebra_element(sig, rng)
    cases = [
        (lie.random_algebra_element(sig, rng), lie.random_group_element(sig, rng)),
        (X - lie.project_s(X, sig), np.eye(7)),
        (lie.project_h_prime(X, sig) + lie.s_basis(sig)[0], np.eye(7)),
    ]

    def observe():
        out = []
        for v, g in cases:
            D = M.differential_matrix(v, g, sig)
            out.append(
                (
                    M.in_zero_locus(v, g, sig),
                    round(M.energy(v, g, sig), 12),
                    M.classify_regularity(v, g, sig),
                    int(np.linalg.matrix_rank(D, tol=1e-9)),
                )
            )
        return out

    J = lie.s_basis(sig)[0]
    before, coords = observe(), lie.sp1_coordinates(J, sig)
    conv = lie.sp1_convention(sig)
    flipped = conv._replace(orientation=-conv.orientation)
    monkeypatch.setattr(lie, "sp1_convention", lambda s: flipped)
    assert np.allclose(lie.sp1_coordinates(J, sig), -coords)
    assert observe() == before
