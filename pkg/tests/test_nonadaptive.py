import math

import numpy as np
import pytest
from _oracles import (
    observed_convergence_ratio,
    observed_mixing_steps,
    power_iteration_fixed_point,
    random_config,
)

from memcool import (
    EnergySpectrum,
    MemoryConfig,
    TransitionMatrix,
    alpha_kl,
    attainability_check,
    build_transition,
    build_v_matrix,
    chain_spectrum,
    fixed_point,
    iterate_chain,
    mixing_time_bound,
    p_star,
    rho_star_sl,
    run_protocol,
    spectral_gap_bound,
)

QUBIT = EnergySpectrum((0.0, 1.0))
MACHINE = EnergySpectrum((0.0, 2.0))


def qubit_config(k, ell, beta=0.2):
    return MemoryConfig(system=QUBIT, machine=MACHINE, k=k, ell=ell, beta=beta)


def test_transition_matrix_validation():
    with pytest.raises(ValueError):
        TransitionMatrix(np.array([[0.5, 0.5], [0.6, 0.5]]))
    with pytest.raises(ValueError):
        TransitionMatrix(np.array([[1.5, 0.0], [-0.5, 1.0]]))
    with pytest.raises(ValueError):
        TransitionMatrix(np.ones((2, 3)))


def test_build_v_matrix_small():
    x = math.exp(-0.4)
    v = build_v_matrix(2, 2.0, 0.2)
    np.testing.assert_allclose(v.entries, np.array([[1.0, 1.0], [x, x]]) / (1 + x), atol=1e-15)
    np.testing.assert_allclose(v.entries.sum(axis=0), [1.0, 1.0], atol=1e-15)

    # rank-1 structure: the fixed point is reached in one application
    fp = power_iteration_fixed_point(v.entries)
    np.testing.assert_allclose(fp, [0.598687660112452, 0.401312339887548], atol=1e-13)
    one_step = v.entries @ np.array([0.5, 0.5])
    np.testing.assert_allclose(one_step, fp, atol=1e-13)

    v4 = build_v_matrix(4, 2.0, 0.2)
    fp4 = power_iteration_fixed_point(v4.entries)
    expected = np.exp(-0.4 * np.arange(4))
    np.testing.assert_allclose(fp4, expected / expected.sum(), atol=1e-12)

    with pytest.raises(ValueError):
        build_v_matrix(1, 2.0, 0.2)
    with pytest.raises(ValueError):
        build_v_matrix(4, 0.0, 0.2)


def test_alpha_kl():
    assert alpha_kl(qubit_config(1, 0)) == 1.0
    assert alpha_kl(qubit_config(2, 1)) == 1.0
    # direct-evaluation oracle, frozen: (1 + e^-0.8) / (1 + e^-0.4)^2
    assert math.isclose(alpha_kl(qubit_config(2, 0)), 0.519478508516942, abs_tol=1e-14)
    rng = np.random.default_rng(19)
    for _ in range(60):
        alpha = alpha_kl(random_config(rng))
        assert 0.0 < alpha <= 1.0 + 1e-15


def test_build_transition():
    cfg = qubit_config(1, 0)
    np.testing.assert_allclose(build_transition(cfg).entries,
                               build_v_matrix(2, 2.0, 0.2).entries, atol=1e-15)
    cfg = qubit_config(2, 1)
    t = build_transition(cfg)
    assert t.dim == 4
    np.testing.assert_allclose(t.entries, build_v_matrix(4, 2.0, 0.2).entries, atol=1e-15)

    rng = np.random.default_rng(29)
    for _ in range(40):
        t = build_transition(random_config(rng, k_max=3)).entries
        assert t.min() >= 0.0
        np.testing.assert_allclose(t.sum(axis=0), np.ones(t.shape[1]), atol=1e-12)


def test_chain_spectrum_closed_form():
    lam = chain_spectrum(qubit_config(1, 0))
    assert lam[0] == 1.0
    assert abs(lam[1]) <= 1e-15  # cos(pi/2) kills the subdominant mode

    lam = chain_spectrum(qubit_config(2, 1))
    assert math.isclose(lam[1], 0.693196574921615, abs_tol=1e-13)

    # numerical eigendecomposition as oracle
    for cfg in (qubit_config(2, 1), qubit_config(3, 2), qubit_config(3, 1)):
        eig = np.sort(np.real(np.linalg.eigvals(build_transition(cfg).entries)))[::-1]
        np.testing.assert_allclose(np.sort(chain_spectrum(cfg))[::-1], eig, atol=1e-9)


def test_lambda1_matches_observed_rate():
    for cfg in (qubit_config(2, 1), qubit_config(3, 2), qubit_config(3, 1)):
        lam1 = chain_spectrum(cfg)[1]
        observed = observed_convergence_ratio(cfg)
        assert abs(observed - lam1) <= 0.01 * lam1


def test_spectral_gap_bound():
    cfg = qubit_config(2, 1)
    bound = spectral_gap_bound(cfg)
    assert math.isclose(bound, 0.0196720023552747, abs_tol=1e-14)
    lam = chain_spectrum(cfg)
    assert bound <= lam[0] - lam[1] + 1e-15
    assert math.isclose(lam[0] - lam[1], 0.306803425078385, abs_tol=1e-13)

    # large beta*eps: the squared factor saturates and only 1/Z_M survives
    frozen = MemoryConfig(system=QUBIT, machine=MACHINE, k=1, ell=0, beta=25.0)
    z = 1.0 + math.exp(-50.0)
    assert math.isclose(spectral_gap_bound(frozen), 1.0 / z, rel_tol=1e-9)

    rng = np.random.default_rng(41)
    for _ in range(200):
        cfg = random_config(rng)
        lam = chain_spectrum(cfg)
        assert spectral_gap_bound(cfg) <= lam[0] - lam[1] + 1e-12
        assert spectral_gap_bound(cfg) > 0.0


def test_mixing_time_bound():
    cfg = qubit_config(1, 0)
    bound = mixing_time_bound(cfg, 1e-3)
    assert bound > 0.0
    assert observed_mixing_steps(cfg, 1e-3) <= bound

    # doubling the machine gap speeds up mixing at small beta
    wide = MemoryConfig(system=QUBIT, machine=EnergySpectrum((0.0, 4.0)), k=1, ell=0, beta=0.2)
    assert mixing_time_bound(wide, 1e-3) < bound

    # eta = 1 stays a positive (vacuous-ish) bound: the log argument is > 1
    assert mixing_time_bound(cfg, 1.0) > 0.0
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            mixing_time_bound(cfg, bad)


def test_fixed_point_matches_asymptotic_target():
    rng = np.random.default_rng(53)
    checked = 0
    while checked < 50:
        cfg = random_config(rng, k_max=4)
        lam = chain_spectrum(cfg)
        # keep power iteration affordable: skip nearly-critical chains
        if lam[0] - lam[1] < 1e-3 or not attainability_check(cfg):
            continue
        fp = fixed_point(build_transition(cfg))
        np.testing.assert_allclose(fp, rho_star_sl(cfg), atol=1e-9)
        checked += 1


def test_iterate_chain_reaches_fixed_point():
    cfg = qubit_config(2, 1)
    trace = iterate_chain(cfg, 200)
    np.testing.assert_allclose(np.sort(trace.final.sl_probs)[::-1], rho_star_sl(cfg), atol=1e-9)
    assert math.isclose(trace.final.s_ground, p_star(cfg), abs_tol=1e-9)
    # D = 2 with a pure staircase converges in a single application
    one = iterate_chain(qubit_config(1, 0), 1)
    assert math.isclose(one.final.s_ground, 0.598687660112452, abs_tol=1e-13)


def test_iterate_chain_stalls_every_other_step():
    trace = iterate_chain(qubit_config(3, 2), 40)
    sg = trace.s_ground_values()
    assert np.all(np.diff(sg) >= -1e-12)
    # pairs of steps coincide: odd steps do not cool
    np.testing.assert_allclose(sg[0:10:2], sg[1:10:2], atol=1e-12)
    assert np.all(np.diff(sg[0:10:2]) > 1e-4)


def test_adaptive_dominates_chain():
    cfg = qubit_config(3, 2)
    chain = iterate_chain(cfg, 400)
    adaptive = run_protocol(cfg, 400, mode="stepwise")
    chain_m = {r.machines_used: r.s_ground for r in chain.records}
    for record in adaptive.records:
        if record.machines_used in chain_m:
            assert record.s_ground >= chain_m[record.machines_used] - 1e-12
    assert abs(chain.final.s_ground - adaptive.final.s_ground) <= 1e-8


def test_chain_and_engine_share_limits():
    for k, ell in [(1, 0), (2, 0), (2, 1), (3, 2)]:
        cfg = qubit_config(k, ell)
        chain = iterate_chain(cfg, 400)
        adaptive = run_protocol(cfg, 400, mode="stepwise")
        assert abs(chain.final.s_ground - adaptive.final.s_ground) <= 1e-8


def test_iterate_chain_guards():
    from memcool import CapacityError

    with pytest.raises(ValueError):
        iterate_chain(qubit_config(2, 1), 0)
    with pytest.raises(CapacityError):
        iterate_chain(qubit_config(24, 0), 1)
