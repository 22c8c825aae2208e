import numpy as np
import pytest

from ..exceptions import (DimensionError, InfeasibleScenarioError,
                          PowerDomainError, SingularChannelError)
from ..models import ChannelRealization, FixedPointConfig, QosTargets
from ..utils.channel import draw_los_channel
from ..utils.power_model import (bs_consumed_power, gain_metrics,
                                 pa_consumed_power)
from ..utils.precoding import (asymptotic_zf_precoder, empirical_sinr,
                               los_allocation_precoder, min_pa_precoder,
                               min_pa_precoder_narrowband,
                               single_user_narrowband_precoder,
                               single_user_saturating_precoder,
                               zf_precoder, zf_residual)
from .factories import (BsModelFactory, FixedPointConfigFactory,
                        PaModelFactory, QosTargetsFactory, rayleigh_instance)


def sqrt_power_sum(solution):
    return float(np.sum(np.sqrt(solution.powers)))


def test_zf_scalar():
    channel = ChannelRealization(np.array([[1.0]]), [1.0])
    solution = zf_precoder(channel, QosTargetsFactory())
    assert solution.matrices[0] == pytest.approx(np.array([[2.0]]))
    assert solution.powers == pytest.approx([4.0])
    assert solution.iterations == 0


def test_zf_two_antennas():
    channel = ChannelRealization(np.array([[1.0, 1.0]]), [1.0])
    solution = zf_precoder(channel, QosTargetsFactory())
    assert solution.matrices[0, :, 0] == pytest.approx([1.0, 1.0])
    assert solution.powers.sum() == pytest.approx(2.0)


def test_zf_residual_on_random_instances():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        users = int(rng.integers(1, 9))
        antennas = int(rng.integers(2 * users, 65))
        subcarriers = int(rng.integers(1, 129))
        channel, qos = rayleigh_instance(rng, antennas, users, subcarriers)
        solution = zf_precoder(channel, qos)
        worst = max(worst, zf_residual(channel, qos, solution))
    assert worst <= 1e-9


def test_zf_meets_sinr_targets():
    rng = np.random.default_rng(8)
    channel, qos = rayleigh_instance(rng, 16, 4, subcarriers=8,
                                     noise_power=0.5)
    solution = zf_precoder(channel, qos)
    sinr = empirical_sinr(channel, solution, qos.noise_power)
    assert sinr.shape == (8, 4)
    assert np.allclose(sinr, qos.normalized_gamma[np.newaxis, :], rtol=1e-9)


def test_zf_rejects_bad_instances():
    rng = np.random.default_rng(0)
    channel, qos = rayleigh_instance(rng, 2, 3)
    with pytest.raises(SingularChannelError):
        zf_precoder(channel, qos)

    channel, _ = rayleigh_instance(rng, 8, 2)
    with pytest.raises(DimensionError):
        zf_precoder(channel, QosTargets([1.0, 2.0, 3.0], 1.0))
    with pytest.raises(DimensionError):
        zf_precoder(channel, QosTargets([1.0, 2.0], 1.0, subcarriers=4))


def test_zf_rejects_colinear_users():
    row = np.array([1.0, 2.0, 3.0, 4.0])
    channel = ChannelRealization(np.vstack([row, row]), [1.0, 1.0])
    with pytest.raises(SingularChannelError):
        zf_precoder(channel, QosTargets([1.0, 1.0], 1.0))


def test_zf_scale_and_phase_covariance():
    rng = np.random.default_rng(13)
    channel, qos = rayleigh_instance(rng, 12, 3, subcarriers=2)
    base = zf_precoder(channel, qos)

    scaled = ChannelRealization(3.0 * channel.per_subcarrier,
                                channel.large_scale)
    assert zf_precoder(scaled, qos).matrices \
        == pytest.approx(base.matrices / 3.0)

    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 12))
    rotated = ChannelRealization(channel.per_subcarrier * phases,
                                 channel.large_scale)
    assert zf_precoder(rotated, qos).powers \
        == pytest.approx(base.powers, rel=1e-9)


def test_min_pa_single_user_narrowband_example():
    channel = ChannelRealization(np.array([[2.0, 1.0]]), [1.0])
    solution = min_pa_precoder(channel, QosTargetsFactory(),
                               FixedPointConfigFactory())
    assert solution.converged
    assert solution.powers == pytest.approx([1.0, 0.0], abs=1e-9)
    assert solution.powers[1] < 1e-9


def test_min_pa_single_user_picks_strongest_antenna():
    pa = PaModelFactory()
    cfg = FixedPointConfigFactory(tolerance=1e-12)
    rng = np.random.default_rng(31)
    for _ in range(100):
        antennas = int(rng.integers(2, 17))
        channel, qos = rayleigh_instance(rng, antennas, 1)
        h = channel.per_subcarrier[0, 0]
        best = int(np.argmax(np.abs(h)))

        solution = min_pa_precoder(channel, qos, cfg)
        assert solution.converged
        assert int(np.argmax(solution.powers)) == best
        others = np.delete(solution.powers, best)
        assert np.all(others < 1e-6 * solution.powers[best])

        expected = pa.alpha * qos.sigma * np.sqrt(qos.gamma[0]) \
            / np.abs(h[best])
        assert pa_consumed_power(solution.powers, pa) \
            == pytest.approx(expected, rel=1e-3)

        closed_form = single_user_narrowband_precoder(h, qos.gamma[0],
                                                      qos.sigma)
        assert solution.powers == pytest.approx(closed_form.powers,
                                                rel=1e-3, abs=1e-6)


def test_min_pa_never_worse_than_zf():
    rng = np.random.default_rng(17)
    cfg = FixedPointConfigFactory(tolerance=1e-9, max_iterations=20_000)
    for users, antennas, subcarriers in [(1, 4, 1), (2, 8, 2), (3, 6, 4),
                                         (4, 16, 1), (2, 5, 8)]:
        channel, qos = rayleigh_instance(rng, antennas, users, subcarriers)
        zf = zf_precoder(channel, qos)
        best = min_pa_precoder(channel, qos, cfg)
        assert sqrt_power_sum(best) <= sqrt_power_sum(zf) * (1 + 1e-12)
        assert zf_residual(channel, qos, best) < 1e-9


def test_min_pa_first_iterate_is_zf_and_objective_decreases():
    rng = np.random.default_rng(23)
    channel, qos = rayleigh_instance(rng, 10, 3, subcarriers=3)
    seen = []
    solution = min_pa_precoder(
        channel, qos,
        FixedPointConfigFactory(tolerance=1e-9, dead_antenna_floor=0.0),
        callback=lambda i, p, r: seen.append((i, p, r)))

    assert seen[0][1] == pytest.approx(zf_precoder(channel, qos).powers)
    objective = [np.sum(np.sqrt(p)) for _, p, _ in seen]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(objective, objective[1:]))
    assert [i for i, _, _ in seen] == list(range(1, solution.iterations + 1))
    assert solution.residual_history == tuple(r for _, _, r in seen)
    assert solution.residual == seen[-1][2]


def test_min_pa_reports_non_convergence():
    rng = np.random.default_rng(29)
    channel, qos = rayleigh_instance(rng, 16, 2)
    solution = min_pa_precoder(channel, qos,
                               FixedPointConfig(tolerance=1e-14,
                                                max_iterations=3))
    assert not solution.converged
    assert solution.iterations == 3
    assert solution.residual > 1e-14
    assert len(solution.residual_history) == 3
    assert zf_residual(channel, qos, solution) < 1e-9


def test_min_pa_scale_and_phase_covariance():
    rng = np.random.default_rng(37)
    channel, qos = rayleigh_instance(rng, 8, 2, subcarriers=2)
    cfg = FixedPointConfigFactory(tolerance=1e-9, dead_antenna_floor=0.0)
    base = min_pa_precoder(channel, qos, cfg)

    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 8))
    rotated = ChannelRealization(channel.per_subcarrier * phases,
                                 channel.large_scale)
    assert min_pa_precoder(rotated, qos, cfg).powers \
        == pytest.approx(base.powers, rel=1e-6, abs=1e-9)

    louder = QosTargets(qos.gamma, 4 * qos.noise_power, qos.subcarriers)
    scaled = min_pa_precoder(channel, louder,
                             FixedPointConfigFactory(tolerance=4e-9,
                                                     dead_antenna_floor=0.0))
    assert scaled.powers == pytest.approx(4 * base.powers, rel=1e-5,
                                          abs=1e-8)


def test_min_pa_square_channel_equals_zf():
    rng = np.random.default_rng(41)
    channel, qos = rayleigh_instance(rng, 4, 4)
    solution = min_pa_precoder_narrowband(channel.per_subcarrier[0], qos)
    assert solution.powers == pytest.approx(zf_precoder(channel, qos).powers,
                                            rel=1e-8)


def test_min_pa_narrowband_rejects_wideband():
    rng = np.random.default_rng(1)
    channel, qos = rayleigh_instance(rng, 4, 2, subcarriers=2)
    with pytest.raises(DimensionError):
        min_pa_precoder_narrowband(channel, qos)
    with pytest.raises(DimensionError):
        min_pa_precoder_narrowband(np.ones(4), qos)


def test_min_pa_narrowband_activates_few_antennas():
    rng = np.random.default_rng(43)
    channel, qos = rayleigh_instance(rng, 32, 4)
    solution = min_pa_precoder_narrowband(
        channel, qos, FixedPointConfigFactory(max_iterations=50_000))
    significant = solution.powers > 1e-4 * solution.powers.max()
    assert np.count_nonzero(significant) <= 16
    assert np.all(zf_precoder(channel, qos).powers > 0)


def test_min_pa_wideband_uniformity():
    pa, bs = PaModelFactory(), BsModelFactory()
    cfg = FixedPointConfigFactory(tolerance=1e-8, max_iterations=5_000)

    def coefficient_of_variation(subcarriers):
        rng = np.random.default_rng(47)
        channel, qos = rayleigh_instance(rng, 32, 4, subcarriers)
        solution = min_pa_precoder(channel, qos, cfg)
        return channel, qos, solution, \
            solution.powers.std() / solution.powers.mean()

    channel, qos, wide, cv_wide = coefficient_of_variation(256)
    assert len(wide.active_set) == 32
    reference = bs_consumed_power(zf_precoder(channel, qos).powers, pa, bs)
    candidate = bs_consumed_power(wide.powers, pa, bs)
    gain_pas, gain_bs = gain_metrics(reference, candidate)
    assert 0.99 <= gain_pas <= 1.01
    assert 0.99 <= gain_bs <= 1.01

    _, _, _, cv_narrow = coefficient_of_variation(4)
    assert cv_wide < cv_narrow


def test_single_user_narrowband_precoder():
    scalar = single_user_narrowband_precoder([1.0], 4.0, 1.0)
    assert scalar.matrices[0, 0, 0] == pytest.approx(2.0)
    assert pa_consumed_power(scalar.powers, PaModelFactory()) \
        == pytest.approx(2 * PaModelFactory().alpha)

    strongest = single_user_narrowband_precoder([2.0, 1.0], 4.0, 1.0)
    assert strongest.powers == pytest.approx([1.0, 0.0])

    tie = single_user_narrowband_precoder([1.0, 1.0], 4.0, 1.0)
    assert tie.active_set == (0,)
    assert tie.powers[0] == pytest.approx(4.0)

    with pytest.raises(InfeasibleScenarioError):
        single_user_narrowband_precoder([0.0, 0.0], 1.0, 1.0)


def test_single_user_narrowband_precoder_phase():
    h = np.array([0.3 - 0.4j, 1j])
    solution = single_user_narrowband_precoder(h, 9.0, 1.0)
    assert h @ solution.matrices[0, :, 0] == pytest.approx(3.0)


def test_single_user_saturating_precoder():
    below = single_user_saturating_precoder([2.0, 1.0], 1.0, 1.0, 1.0)
    reference = single_user_narrowband_precoder([2.0, 1.0], 1.0, 1.0)
    assert below.powers == pytest.approx(reference.powers)

    split = single_user_saturating_precoder([1.0, 1.0], 2.25, 1.0, 1.0)
    assert split.powers == pytest.approx([1.0, 0.25])

    boundary = single_user_saturating_precoder([1.0, 1.0], 4.0, 1.0, 1.0)
    assert boundary.powers == pytest.approx([1.0, 1.0])

    with pytest.raises(InfeasibleScenarioError) as exc:
        single_user_saturating_precoder([1.0, 1.0], 9.0, 1.0, 1.0)
    assert exc.value.deficit == pytest.approx(1.0)

    with pytest.raises(PowerDomainError):
        single_user_saturating_precoder([1.0], 1.0, 1.0, 0.0)


def test_single_user_saturating_precoder_meets_target():
    rng = np.random.default_rng(53)
    h = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    solution = single_user_saturating_precoder(h, 16.0, 1.0, 0.5)
    assert np.all(solution.powers <= 0.5 * (1 + 1e-12))
    assert abs(h @ solution.matrices[0, :, 0]) == pytest.approx(4.0)


def test_los_allocation():
    channel = draw_los_channel(4, 1, 8, np.random.default_rng(59))
    corner = los_allocation_precoder(channel, 4.0, 1.0, [1, 0, 0, 0])
    assert corner.powers == pytest.approx([4.0, 0, 0, 0])

    uniform = los_allocation_precoder(channel, 4.0, 1.0, np.full(4, .25))
    assert uniform.powers == pytest.approx(np.full(4, 4.0 / 16))


def test_los_allocation_invariance():
    pa = PaModelFactory()
    rng = np.random.default_rng(61)
    gamma, noise = 5.0, 0.3
    channel = draw_los_channel(16, 1, 8, rng)
    qos = QosTargets([gamma], noise, 8)
    expected = pa.alpha * np.sqrt(noise) * np.sqrt(gamma)
    for _ in range(20):
        weights = rng.dirichlet(np.ones(16))
        solution = los_allocation_precoder(channel, gamma, np.sqrt(noise),
                                           weights)
        assert pa_consumed_power(solution.powers, pa) \
            == pytest.approx(expected, rel=1e-12)
        assert zf_residual(channel, qos, solution) < 1e-12


def test_los_allocation_rejects_bad_input():
    rng = np.random.default_rng(67)
    channel = draw_los_channel(3, 1, 2, rng)
    with pytest.raises(PowerDomainError):
        los_allocation_precoder(channel, 1.0, 1.0, [0.5, 0.6, -0.1])
    with pytest.raises(DimensionError):
        los_allocation_precoder(channel, 1.0, 1.0, [0.5, 0.5])
    rayleigh, _ = rayleigh_instance(rng, 3, 1, 2)
    with pytest.raises(PowerDomainError):
        los_allocation_precoder(rayleigh, 1.0, 1.0, [1, 0, 0])


def test_min_pa_on_los_channel_reaches_invariant_consumption():
    pa = PaModelFactory()
    channel = draw_los_channel(8, 1, 4, np.random.default_rng(71))
    qos = QosTargets([6.0], 0.5, 4)
    solution = min_pa_precoder(channel, qos, FixedPointConfigFactory())
    assert pa_consumed_power(solution.powers, pa) == pytest.approx(
        pa.alpha * qos.sigma * np.sqrt(6.0), rel=1e-6)


def test_asymptotic_zf_precoder():
    rng = np.random.default_rng(73)
    channel, qos = rayleigh_instance(rng, 16, 3, subcarriers=4)
    solution = asymptotic_zf_precoder(channel, qos, 6)
    assert np.all(solution.powers[6:] == 0)
    assert solution.active_set == tuple(range(6))
    assert zf_residual(channel, qos, solution) < 1e-9

    everything = asymptotic_zf_precoder(channel, qos, 16)
    assert everything.powers == pytest.approx(zf_precoder(channel, qos).powers)

    for bad in (2, 17):
        with pytest.raises(PowerDomainError):
            asymptotic_zf_precoder(channel, qos, bad)
