import math

import numpy as np
import pytest

from ..exceptions import InfeasibleScenarioError, PowerDomainError
from ..models import BsModel, PaModel
from ..utils.asymptotic import (asymptotic_bs_breakdown, asymptotic_bs_power,
                                asymptotic_pa_power,
                                asymptotic_per_antenna_power,
                                feasibility_check, min_ma_power_constraint,
                                minimal_feasible_antennas,
                                optimal_ma_constrained,
                                optimal_ma_unconstrained, quartic_root,
                                solve_quartic_ma, trace_term)
from ..utils.channel import draw_user_distances, large_scale_fading, \
    target_sinr
from ..utils.oracle import closed_form_quartic_roots, grid_min_bs
from .factories import BsModelFactory, CellGeometryFactory, PaModelFactory

NOISE_WATTS = 10 ** (-126 / 10)


def scenario_trace(rng, users):
    beta = large_scale_fading(
        draw_user_distances(users, CellGeometryFactory(), rng))
    return trace_term(beta, target_sinr(beta), NOISE_WATTS)


def test_trace_term():
    assert trace_term([1.0, 2.0], [2.0, 2.0], 0.5) == pytest.approx(1.5)
    assert trace_term([1.0], [0.0], 1.0) == 0
    with pytest.raises(PowerDomainError):
        trace_term([0.0], [1.0], 1.0)


def test_asymptotic_per_antenna_power():
    assert asymptotic_per_antenna_power(64, 1, 1.0) \
        == pytest.approx(1 / 4032)
    assert asymptotic_per_antenna_power(64, 1, 0.0) == 0
    assert asymptotic_per_antenna_power(20, 4, 2.0) \
        == pytest.approx(2 * asymptotic_per_antenna_power(20, 4, 1.0))
    for m_active in (4, 3):
        with pytest.raises(PowerDomainError):
            asymptotic_per_antenna_power(m_active, 4, 1.0)


def test_asymptotic_bs_power():
    pa = PaModelFactory()
    idle = BsModel(p_fix=15.0, circuit_per_antenna=0.0)
    assert asymptotic_bs_power(8, 2, 0.0, pa, idle) == pytest.approx(15.0)

    bs = BsModelFactory()
    m_active = 10 ** 7
    asymptote = pa.alpha * math.sqrt(3.0) + bs.p_fix \
        + bs.circuit_per_antenna * m_active
    assert asymptotic_bs_power(m_active, 2, 3.0, pa, bs) \
        == pytest.approx(asymptote, rel=1e-9)

    assert sum(asymptotic_bs_breakdown(12, 3, 0.5, pa, bs)) \
        == pytest.approx(asymptotic_bs_power(12, 3, 0.5, pa, bs))


def test_asymptotic_pa_power_is_decreasing():
    pa = PaModelFactory()
    values = [asymptotic_pa_power(m, 5, 0.01, pa) for m in range(6, 200)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert asymptotic_pa_power(64, 4, 0.01, pa) == pytest.approx(
        pa.alpha * 64 * math.sqrt(asymptotic_per_antenna_power(64, 4, 0.01)))


def test_asymptotic_bs_power_is_convex():
    pa, bs = PaModelFactory(), BsModelFactory()
    for users, trace in [(1, 1e-3), (8, 0.05), (30, 2.0)]:
        x = np.arange(users + 2, 257, dtype=float)
        h = 1.0
        f = [(asymptotic_bs_power(v + h, users, trace, pa, bs)
              - 2 * asymptotic_bs_power(v, users, trace, pa, bs)
              + asymptotic_bs_power(v - h, users, trace, pa, bs)) / h ** 2
             for v in x]
        assert np.all(np.asarray(f) > 0)


def test_quartic_root_examples():
    assert quartic_root(2, 32.0) == pytest.approx(4.0, rel=1e-12)
    assert quartic_root(3, 0.0) == 3.0
    assert 5.0 < quartic_root(5, 1e-12) < 5.0 + 1e-3
    with pytest.raises(PowerDomainError):
        quartic_root(2, -1.0)
    with pytest.raises(PowerDomainError):
        quartic_root(0, 1.0)


def test_quartic_root_residual_and_closed_form():
    rng = np.random.default_rng(83)
    for _ in range(200):
        users = int(rng.integers(1, 41))
        constant = 10 ** rng.uniform(-6, 12)
        x = quartic_root(users, constant)
        assert x > users
        assert abs(x * (x - users) ** 3 - constant) <= 1e-9 * constant

        if constant < users ** 4 * 1e-2:
            # radicals lose accuracy next to the triple root at K
            continue
        roots = closed_form_quartic_roots(
            [1.0, -3.0 * users, 3.0 * users ** 2, -float(users) ** 3,
             -constant])
        real = roots[np.abs(roots.imag) <= 1e-6 * np.abs(roots)].real
        above = real[real > users]
        assert above.size == 1
        assert x == pytest.approx(above[0], rel=1e-6)


def test_solve_quartic_ma_is_stationary_point():
    pa, bs = PaModelFactory(), BsModelFactory()
    for users, trace in [(1, 1e-3), (4, 0.02), (12, 0.3), (40, 5.0)]:
        t = pa.alpha * math.sqrt(trace)
        x = solve_quartic_ma(users, t, bs.circuit_per_antenna)
        h = 1e-6 * x
        slope = (asymptotic_bs_power(x + h, users, trace, pa, bs)
                 - asymptotic_bs_power(x - h, users, trace, pa, bs)) / (2 * h)
        assert abs(slope) < 1e-5 * bs.circuit_per_antenna

    assert solve_quartic_ma(2, math.sqrt(32.0), 1.0) \
        == pytest.approx(4.0, rel=1e-12)
    with pytest.raises(PowerDomainError):
        solve_quartic_ma(2, 0.0, 1.0)
    with pytest.raises(PowerDomainError):
        solve_quartic_ma(2, 1.0, 0.0)


def test_optimal_ma_unconstrained_regimes():
    pa = PaModelFactory()
    circuits_limited = BsModel(p_fix=15.0, circuit_per_antenna=1e3)
    assert optimal_ma_unconstrained(64, 4, 1e-3, pa,
                                    circuits_limited) == 5

    pas_limited = BsModel(p_fix=15.0, circuit_per_antenna=1e-9)
    assert optimal_ma_unconstrained(64, 4, 1.0, pa, pas_limited) == 64

    no_circuits = BsModel(p_fix=15.0, circuit_per_antenna=0.0)
    assert optimal_ma_unconstrained(64, 4, 1.0, pa, no_circuits) == 64

    with pytest.raises(InfeasibleScenarioError):
        optimal_ma_unconstrained(4, 4, 1.0, pa, BsModelFactory())


def test_optimal_ma_unconstrained_matches_grid():
    pa, bs = PaModelFactory(), BsModelFactory()
    rng = np.random.default_rng(89)
    for _ in range(50):
        users = int(rng.integers(1, 30))
        antennas = int(rng.integers(users + 1, 200))
        trace = 10 ** rng.uniform(-4, 1)
        expected = grid_min_bs(antennas, users, trace, pa, bs,
                               p_max=math.inf)
        assert optimal_ma_unconstrained(antennas, users, trace, pa, bs) \
            == expected


def test_optimal_ma_unconstrained_rounds_to_cheaper_neighbour():
    pa, bs = PaModelFactory(), BsModelFactory()
    users, trace = 4, 0.05
    x = solve_quartic_ma(users, pa.alpha * math.sqrt(trace),
                         bs.circuit_per_antenna)
    assert users + 1 < x < 64
    chosen = optimal_ma_unconstrained(64, users, trace, pa, bs)
    assert chosen in (math.floor(x), math.ceil(x))
    other = math.ceil(x) if chosen == math.floor(x) else math.floor(x)
    assert asymptotic_bs_power(chosen, users, trace, pa, bs) \
        <= asymptotic_bs_power(other, users, trace, pa, bs)


def test_min_ma_power_constraint():
    assert min_ma_power_constraint(4, 2.0, 1.0) == 5
    assert min_ma_power_constraint(4, 0.0, 1.0) == 4
    with pytest.raises(PowerDomainError):
        min_ma_power_constraint(4, 1.0, 0.0)

    rng = np.random.default_rng(97)
    for _ in range(200):
        users = int(rng.integers(1, 41))
        trace = 10 ** rng.uniform(-3, 3)
        p_max = 10 ** rng.uniform(-6, 0)
        m_hat = min_ma_power_constraint(users, trace, p_max)
        assert asymptotic_per_antenna_power(m_hat, users, trace) <= p_max
        if m_hat - 1 > users:
            assert asymptotic_per_antenna_power(m_hat - 1, users, trace) \
                > p_max


def test_minimal_feasible_antennas():
    assert minimal_feasible_antennas(4, 0.0, 1.0) == 5
    assert minimal_feasible_antennas(4, 2.0, 1.0) == 5
    assert minimal_feasible_antennas(1, 99.0, 1.0) == 11


def test_feasibility_check():
    assert feasibility_check(16, 4, 0.0, 1.0)
    assert feasibility_check(4, 3, 4.0, 1.0)
    assert not feasibility_check(4, 3, 4.0, 0.999)
    assert not feasibility_check(64, 4, 1.0, 1e-12)
    with pytest.raises(InfeasibleScenarioError):
        feasibility_check(4, 4, 0.0, 1.0)


def test_optimal_ma_constrained_branches():
    pa = PaModelFactory()
    circuits_limited = BsModel(p_fix=15.0, circuit_per_antenna=1e3)
    plan = optimal_ma_constrained(64, 4, 1e-3, pa, circuits_limited)
    assert plan.m_dagger == 5
    assert plan.feasible

    no_circuits = BsModel(p_fix=15.0, circuit_per_antenna=0.0)
    plan = optimal_ma_constrained(64, 4, 1.0, pa, no_circuits)
    assert plan.m_dagger == 64
    assert math.isinf(plan.m_tilde)

    # the per-antenna limit forces more antennas than the circuits want
    plan = optimal_ma_constrained(64, 4, 2.0, pa, circuits_limited,
                                  p_max=1e-2)
    assert plan.m_dagger == plan.m_hat
    assert plan.m_dagger > plan.m_tilde
    assert plan.p_bar <= 1e-2


def test_optimal_ma_constrained_plan_fields():
    pa, bs = PaModelFactory(), BsModelFactory()
    plan = optimal_ma_constrained(64, 8, 0.04, pa, bs)
    assert 9 <= plan.m_dagger <= 64
    assert plan.m_dagger >= plan.m_hat
    assert plan.p_bar == pytest.approx(
        asymptotic_per_antenna_power(plan.m_dagger, 8, 0.04))
    assert plan.p_pas_bar == pytest.approx(
        asymptotic_pa_power(plan.m_dagger, 8, 0.04, pa))
    assert plan.p_bs_bar == pytest.approx(
        asymptotic_bs_power(plan.m_dagger, 8, 0.04, pa, bs))
    assert plan.p_bar <= pa.p_max


def test_optimal_ma_constrained_infeasible():
    pa, bs = PaModelFactory(), BsModelFactory()
    with pytest.raises(InfeasibleScenarioError) as exc:
        optimal_ma_constrained(16, 4, 1000.0, pa, bs)
    needed = exc.value.min_antennas
    assert needed == minimal_feasible_antennas(4, 1000.0, 1.0) == 34
    assert feasibility_check(needed, 4, 1000.0, 1.0)
    assert not feasibility_check(needed - 1, 4, 1000.0, 1.0)


def test_optimal_ma_constrained_matches_grid_search():
    pa, bs = PaModel.from_p_max(), BsModel()
    rng = np.random.default_rng(101)
    checked = 0
    while checked < 100:
        antennas = int(rng.integers(2, 257))
        users = int(rng.integers(1, min(antennas, 41)))
        trace = scenario_trace(rng, users)
        p_max = 10 ** rng.uniform(-9, 0)
        if not feasibility_check(antennas, users, trace, p_max):
            continue
        plan = optimal_ma_constrained(antennas, users, trace, pa, bs, p_max)
        assert plan.m_dagger == grid_min_bs(antennas, users, trace, pa, bs,
                                            p_max)
        assert users + 1 <= plan.m_dagger <= antennas
        assert plan.p_bar <= p_max
        checked += 1
