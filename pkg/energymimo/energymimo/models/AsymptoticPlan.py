from dataclasses import dataclass


@dataclass(frozen=True)
class AsymptoticPlan:
    """
    Optimal number of active antennas in the asymptotic wideband regime,
    with the deterministic powers it leads to.

    :ivar m_tilde: continuous minimizer of the asymptotic BS consumption
    :ivar m_hat: fewest antennas meeting the per-antenna power constraint
    :ivar m_dagger: optimal integer number of active antennas
    :ivar p_bar: transmit power per active antenna at m_dagger
    :ivar p_pas_bar: PA consumption at m_dagger
    :ivar p_bs_bar: BS consumption at m_dagger
    :ivar feasible: whether all M antennas satisfy the power constraint
    """
    m_tilde: float
    m_hat: int
    m_dagger: int
    p_bar: float
    p_pas_bar: float
    p_bs_bar: float
    feasible: bool = True
