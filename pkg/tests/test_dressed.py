import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catcavity import (
    JCParams,
    UnsupportedRegimeError,
    apply_annihilation_dressed,
    apply_creation_dressed,
    build_dressed_frame,
)
from catcavity.dressed import GROUND


@pytest.fixture
def resonant_frame():
    return build_dressed_frame(JCParams(g=5.0), 12)


def _fock_doublet(n, trunc):
    """Dressed doublet vectors (plus, minus) over the bare |m, s> basis."""
    dim = 2 * (trunc + 1)
    plus = np.zeros(dim)
    minus = np.zeros(dim)
    r = 1.0 / math.sqrt(2.0)
    plus[2 * (n + 1) + 1] = r   # |n+1, ->
    plus[2 * n] = r             # |n, +>
    minus[2 * (n + 1) + 1] = -r
    minus[2 * n] = r
    return plus, minus


def test_resonant_energies_and_gap(resonant_frame):
    n = np.arange(13)
    assert np.allclose(resonant_frame.energies_plus, 5.0 * np.sqrt(n + 1.0))
    assert np.allclose(resonant_frame.gap, 10.0 * np.sqrt(n + 1.0))
    assert resonant_frame.ground_energy == 0.0


def test_resonant_mixing_angle_is_quarter_pi(resonant_frame):
    assert np.allclose(resonant_frame.mixing_angles, math.pi / 4.0)


def test_detuned_energies():
    frame = build_dressed_frame(JCParams(g=3.0, detuning=4.0, omega=100.0), 4)
    n = np.arange(5)
    half_gap = np.sqrt(4.0 + 9.0 * (n + 1.0))
    assert np.allclose(frame.energies_plus, 100.0 * (n + 0.5) + half_gap)
    assert np.allclose(frame.energies_minus, 100.0 * (n + 0.5) - half_gap)
    assert frame.ground_energy == pytest.approx(-52.0)


def test_large_detuning_mixing_angle_vanishes():
    frame = build_dressed_frame(JCParams(g=1.0, detuning=1e6), 4)
    assert np.all(frame.mixing_angles < 1e-2)


def test_gamma_coefficient_identities(resonant_frame):
    n = np.arange(13)
    total = resonant_frame.gamma_plus + resonant_frame.gamma_minus
    product = resonant_frame.gamma_plus * resonant_frame.gamma_minus
    assert np.allclose(total, n + 0.5)
    assert np.allclose(product, 1.0 / 16.0)


def test_annihilation_matches_fock_computation(resonant_frame):
    trunc = 12
    a_f = np.diag(np.sqrt(np.arange(1.0, trunc + 1)), 1)
    a = np.kron(a_f, np.eye(2))
    for n in range(1, trunc - 1):
        for branch in ("+", "-"):
            plus_in, minus_in = _fock_doublet(n, trunc)
            vec = a @ (plus_in if branch == "+" else minus_in)
            terms = apply_annihilation_dressed(resonant_frame, branch, n)
            rebuilt = np.zeros_like(vec)
            for term in terms:
                p_out, m_out = _fock_doublet(term.level, trunc)
                rebuilt += term.coefficient * (p_out if term.branch == "+" else m_out)
            assert np.allclose(vec, rebuilt, atol=1e-14)


def test_creation_matches_fock_computation(resonant_frame):
    trunc = 12
    ad = np.kron(np.diag(np.sqrt(np.arange(1.0, trunc + 1)), 1), np.eye(2)).T
    for n in range(trunc - 2):
        for branch in ("+", "-"):
            plus_in, minus_in = _fock_doublet(n, trunc)
            vec = ad @ (plus_in if branch == "+" else minus_in)
            terms = apply_creation_dressed(resonant_frame, branch, n)
            rebuilt = np.zeros_like(vec)
            for term in terms:
                p_out, m_out = _fock_doublet(term.level, trunc)
                rebuilt += term.coefficient * (p_out if term.branch == "+" else m_out)
            assert np.allclose(vec, rebuilt, atol=1e-14)


def test_level_zero_annihilates_into_ground(resonant_frame):
    terms = apply_annihilation_dressed(resonant_frame, "+", 0)
    assert len(terms) == 1
    assert terms[0].branch == GROUND
    assert terms[0].coefficient == pytest.approx(1.0 / math.sqrt(2.0))
    terms = apply_annihilation_dressed(resonant_frame, "-", 0)
    assert terms[0].coefficient == pytest.approx(-1.0 / math.sqrt(2.0))


def test_ground_sector_ladder(resonant_frame):
    assert apply_annihilation_dressed(resonant_frame, GROUND, -1) == []
    terms = apply_creation_dressed(resonant_frame, GROUND, -1)
    coeffs = {t.branch: t.coefficient for t in terms}
    assert coeffs["+"] == pytest.approx(1.0 / math.sqrt(2.0))
    assert coeffs["-"] == pytest.approx(-1.0 / math.sqrt(2.0))


def test_ladder_rejected_off_resonance():
    frame = build_dressed_frame(JCParams(g=1.0, detuning=0.5), 4)
    with pytest.raises(UnsupportedRegimeError):
        apply_annihilation_dressed(frame, "+", 2)


def test_number_operator_from_ladder_composition(resonant_frame):
    # a* a |psi_n^s> = (n + 1/2) |psi_n^s> - (1/2) |psi_n^-s>
    for n in range(1, 10):
        for branch in ("+", "-"):
            acc = {}
            for down in apply_annihilation_dressed(resonant_frame, branch, n):
                for up in apply_creation_dressed(resonant_frame, down.branch,
                                                down.level):
                    key = (up.branch, up.level)
                    acc[key] = acc.get(key, 0.0) + down.coefficient * up.coefficient
            other = "-" if branch == "+" else "+"
            assert acc[(branch, n)] == pytest.approx(n + 0.5)
            assert acc[(other, n)] == pytest.approx(-0.5)


@given(n=st.integers(min_value=0, max_value=200))
@settings(max_examples=50, deadline=None)
def test_annihilation_coefficients_norm(n):
    # |a psi_n^s|^2 must equal n + 1/2 at resonance
    frame = build_dressed_frame(JCParams(g=2.0), 2)
    for branch in ("+", "-"):
        terms = apply_annihilation_dressed(frame, branch, n)
        norm = sum(t.coefficient**2 for t in terms)
        assert norm == pytest.approx(n + 0.5, rel=1e-12)
