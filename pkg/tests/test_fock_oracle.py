"""Tests for the truncated Fock-space reference."""
import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.stats import poisson

from janus.config import get_config, set_config
from janus.errors import CutoffTooSmall, InvalidParameter
from janus.models.params import JanusSpec, SqueezeParam
from janus.services import fock_oracle, moments
from janus.services.selftest import random_spec


def test_fock_vector_is_read_only():
    vec = fock_oracle.fock_number_state(2, 10)
    assert vec.cutoff == 10
    with pytest.raises(ValueError):
        vec.amps[0] = 1.0
    with pytest.raises(InvalidParameter):
        fock_oracle.fock_number_state(11, 10)


def test_padded():
    vec = fock_oracle.fock_number_state(1, 5).padded(9)
    assert vec.cutoff == 9
    assert vec.norm == pytest.approx(1.0)
    with pytest.raises(InvalidParameter):
        vec.padded(4)


def test_squeezed_vacuum_amplitudes():
    xi = SqueezeParam(1.0, 0.6)
    vec = fock_oracle.squeezed_vacuum_fock(xi, 200)
    assert vec.norm == pytest.approx(1.0, abs=1e-12)
    assert np.all(vec.amps[1::2] == 0)
    assert vec.amps[2] == pytest.approx(
        cmath.exp(0.6j) * math.tanh(1.0) / math.sqrt(2 * math.cosh(1.0))
    )
    # <a^2> = e^{i theta} sinh r cosh r
    assert fock_oracle.expectation_a2(vec) == pytest.approx(
        cmath.exp(0.6j) * math.sinh(1.0) * math.cosh(1.0), rel=1e-10
    )


def test_squeezed_vacuum_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        fock_oracle.squeezed_vacuum_fock(SqueezeParam(2.0), 10)
    unchecked = fock_oracle.squeezed_vacuum_fock(SqueezeParam(2.0), 10, check=False)
    assert unchecked.norm < 1.0


def test_coherent_state_is_poissonian():
    alpha = 2.0 * cmath.exp(1.1j)
    vec = fock_oracle.coherent_fock(alpha, 80)
    n = np.arange(81)
    assert vec.probabilities() == pytest.approx(poisson.pmf(n, 4.0), abs=1e-14)


def test_displacement_matrix_unitary_block():
    cutoff = 100
    D = fock_oracle.displacement_matrix(0.5 * cmath.exp(0.3j), cutoff)
    block = cutoff - 40
    product = D.conj().T @ D
    assert np.allclose(product[:block, :block], np.eye(block), atol=1e-10)


def test_displacement_matrix_entries():
    alpha = 0.6 - 0.3j
    x = abs(alpha) ** 2
    D = fock_oracle.displacement_matrix(alpha, 30)
    # <n|D|0> is the coherent amplitude, <0|D|n> carries (-alpha*)^n
    assert D[:, 0] == pytest.approx(fock_oracle.coherent_fock(alpha, 30, check=False).amps)
    assert D[0, 3] == pytest.approx(math.exp(-0.5 * x) * (-alpha.conjugate()) ** 3 / math.sqrt(6))
    assert D[1, 1] == pytest.approx(math.exp(-0.5 * x) * (1 - x))


def test_displacement_round_trip():
    vec = fock_oracle.squeezed_vacuum_fock(SqueezeParam(0.5, 1.2), 120)
    alpha = 0.8 + 0.3j
    back = fock_oracle.displace_fock(fock_oracle.displace_fock(vec, alpha), -alpha)
    assert np.max(np.abs(back.amps - vec.amps)) < 1e-10


def test_displacement_cache_is_bounded():
    fock_oracle._displacement_matrix_cached.cache_clear()
    for step in range(2 * fock_oracle.DISPLACEMENT_CACHE_SIZE):
        fock_oracle.displacement_matrix(0.1 * (step + 1), 30)
    info = fock_oracle._displacement_matrix_cached.cache_info()
    assert info.currsize == fock_oracle.DISPLACEMENT_CACHE_SIZE
    fock_oracle.displacement_matrix(0.5, fock_oracle.CACHED_CUTOFF + 1)
    assert fock_oracle._displacement_matrix_cached.cache_info().misses == info.misses


def test_displace_vacuum_gives_coherent_state():
    alpha = -1.2 + 0.5j
    displaced = fock_oracle.displace_fock(fock_oracle.fock_number_state(0, 60), alpha)
    assert displaced.amps == pytest.approx(fock_oracle.coherent_fock(alpha, 60).amps, abs=1e-13)


def test_choose_cutoff(monkeypatch):
    monkeypatch.delenv("JANUS_CUTOFF", raising=False)
    spec = JanusSpec.single(SqueezeParam(0.1), alpha=0.1)
    assert fock_oracle.choose_cutoff(spec) == 60
    big = JanusSpec.single(SqueezeParam(1.5), alpha=3.0)
    assert fock_oracle.choose_cutoff(big) == math.ceil(8 * (9 + math.sinh(1.5) ** 2) + 40)

    monkeypatch.setenv("JANUS_CUTOFF", "77")
    assert fock_oracle.choose_cutoff(big) == 77


def test_build_janus_fock_grows_cutoff(monkeypatch):
    monkeypatch.setenv("JANUS_CUTOFF", "20")
    state = fock_oracle.build_janus_fock(JanusSpec.single(SqueezeParam(1.2), alpha=1.0))
    assert state.cutoff > 20
    assert state.norm == pytest.approx(1.0, abs=1e-9)


def test_build_janus_fock_gives_up():
    config = get_config()
    set_config(replace(config, oracle=replace(config.oracle, max_cutoff=80)))
    with pytest.raises(CutoffTooSmall):
        fock_oracle.build_janus_fock(JanusSpec.single(SqueezeParam(2.5), alpha=3.0))


def test_cross_moment_matches_closed_form():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        spec = random_spec(rng)
        ket, bra = fock_oracle.build_components_fock(spec)
        assert ket.cutoff == bra.cutoff
        for k in range(5):
            expected = moments.matrix_element(k, spec.xi, spec.zeta, spec.alpha)
            oracle = fock_oracle.cross_moment_fock(bra, ket, k)
            assert abs(oracle - expected) / max(1.0, abs(expected)) < 1e-8


def test_moments_stable_when_cutoff_grows():
    rng = np.random.default_rng(1)
    for _ in range(20):
        spec = random_spec(rng)
        state = fock_oracle.build_janus_fock(spec)
        wider = fock_oracle.build_janus_fock(spec, math.ceil(1.5 * state.cutoff))
        for k in range(5):
            value = fock_oracle.cross_moment_fock(state, state, k)
            grown = fock_oracle.cross_moment_fock(wider, wider, k)
            assert abs(grown - value) / abs(grown) < 1e-10


def test_weighted_tail_share():
    amps = np.zeros(41)
    amps[0] = 1.0
    amps[-1] = 1e-4
    vec = fock_oracle.FockVector(amps)
    assert vec.tail_mass(20) == pytest.approx(1e-8)
    assert vec.weighted_tail_share(0, 20) == pytest.approx(1e-8 / (1 + 1e-8))
    share = 1e-8 * 41.0**4
    assert vec.weighted_tail_share(4, 20) == pytest.approx(share / (1 + share))


def test_growth_follows_moment_order(monkeypatch):
    monkeypatch.setenv("JANUS_CUTOFF", "60")
    spec = JanusSpec.single(SqueezeParam(1.0))
    low = fock_oracle.build_janus_fock(spec, order=0)
    high = fock_oracle.build_janus_fock(spec, order=8)
    assert high.cutoff > low.cutoff
    assert high.weighted_tail_share(8) <= get_config().oracle.moment_tol


def test_overlap_matches_m0():
    xi, zeta = SqueezeParam(0.9, 0.2), SqueezeParam(0.4, 3.0)
    a = fock_oracle.squeezed_vacuum_fock(xi, 120)
    b = fock_oracle.squeezed_vacuum_fock(zeta, 80)
    assert fock_oracle.overlap_fock(b, a) == pytest.approx(moments.m0(xi, zeta), abs=1e-12)


def test_number_state_wigner_values():
    vacuum = fock_oracle.fock_number_state(0, 10)
    one = fock_oracle.fock_number_state(1, 10)
    assert fock_oracle.wigner_fock(vacuum, 0.0, 0.0) == pytest.approx(1 / math.pi)
    assert fock_oracle.wigner_fock(one, 0.0, 0.0) == pytest.approx(-1 / math.pi)
    q = np.array([0.5, -1.0])
    p = np.array([0.2, 0.7])
    assert fock_oracle.wigner_fock(vacuum, q, p) == pytest.approx(np.exp(-(q**2 + p**2)) / math.pi)


def test_fock_two_wigner_minimum():
    two = fock_oracle.fock_number_state(2, 10)
    # minimum on the ring 4|beta|^2 = 2(q^2 + p^2) = 4 - sqrt(6)
    radius = math.sqrt((4 - math.sqrt(6)) / 2)
    assert fock_oracle.wigner_fock(two, radius, 0.0) == pytest.approx(-0.1318, abs=1e-4)


def test_var_gsq_vacuum():
    vacuum = fock_oracle.fock_number_state(0, 10)
    assert fock_oracle.var_gsq_fock(vacuum, 0.4) == pytest.approx(0.5)


def test_antisymmetric_state_approaches_two_photons():
    state = fock_oracle.build_janus_fock(moments.antisymmetric_spec(0.01))
    assert state.norm == pytest.approx(1.0, abs=1e-9)
    assert abs(state.amps[2]) ** 2 > 0.9999


def test_antisymmetric_six_photon_admixture():
    r = 0.1
    state = fock_oracle.build_janus_fock(moments.antisymmetric_spec(r))
    c1 = math.sqrt(2.0) / 2
    c3 = math.sqrt(720.0) / 48
    ratio = abs(state.amps[6] / state.amps[2])
    assert ratio == pytest.approx(c3 / c1 * r**2, rel=0.02)
    assert c3 / c1 == pytest.approx(0.7906, abs=1e-4)
