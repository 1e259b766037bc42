"""Closed-form spectral tail bounds and their check against exact spectra.

All bounds concern the mass of the spectrum of H = sum_eta H_eta (each
||H_eta|| <= 1) at distance >= gamma*m from mu = d^-n tr H.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hamiltonian import DEFAULT_DENSE_LIMIT, LocalHamiltonian, normalized_trace
from .hypergraph import Coloring, DegreeStats, equitable_coloring
from .spectrum import EigenSystem, TypicalDirectionReport, diagonalize, esd, tail_mass, typical_direction_report

SATISFY_TOL = 1e-12


def chebyshev_bound(k: int, n: int, gamma: float) -> float:
    """Two-sided bound gamma^-2 k^2 / n (from the variance bound on regular graphs)."""
    if gamma <= 0 or n < 1 or k < 1:
        raise ValueError("need gamma > 0, n >= 1, k >= 1")
    return k * k / (gamma * gamma * n)


def prop1_floor(n: int, k: int, d_max: int, d_avg) -> int:
    """floor(n / (k^2 d_max / d_avg)) in exact rational arithmetic."""
    ratio = Fraction(d_avg) / Fraction(d_max)
    return math.floor(Fraction(n) * ratio / (k * k))


def chernoff_prop1(n: int, k: int, d_max: int, d_avg, gamma: float) -> float:
    """k d_max exp(-(gamma^2 / 2) floor(n / (k^2 d_max / d_avg))).

    ``d_avg`` should be a :class:`~fractions.Fraction` (or int) so the floor is
    taken exactly; floats are converted to their exact binary value.
    """
    if not Fraction(d_max) >= Fraction(d_avg) > 0:
        raise ValueError(f"need d_max >= d_avg > 0 (got {d_max}, {d_avg})")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return k * d_max * math.exp(-(gamma**2) / 2 * prop1_floor(n, k, d_max, d_avg))


def chernoff_corollary(n: int, k: int, degree: int, gamma: float) -> float:
    """Regular-hypergraph specialisation k D exp(-(gamma^2 / 2) floor(n / k^2))."""
    return k * degree * math.exp(-(gamma**2) / 2 * (n // (k * k)))


def chernoff_for(stats: DegreeStats, n: int, k: int, gamma: float) -> float:
    return chernoff_prop1(n, k, stats.max_degree, stats.avg_degree, gamma)


def lemma2_bound(coloring: Coloring | Sequence[int], gamma: float) -> float:
    """sum over colors of exp(-m_c gamma^2 / 2); empty classes contribute 1."""
    sizes = coloring.sizes if isinstance(coloring, Coloring) else tuple(coloring)
    return math.fsum(math.exp(-mc * gamma * gamma / 2) for mc in sizes)


def equitable_intermediate(m: int, r: int, gamma: float) -> float:
    """r exp(-floor(m/r) gamma^2 / 2), bounding lemma2_bound for equitable colorings."""
    return r * math.exp(-(m // r) * gamma * gamma / 2)


def ks_bound(n: int, k: int, gamma: float) -> float:
    """exp(-gamma^2 n / (16 e^3 k^3)), the cluster-expansion bound for comparison."""
    return math.exp(-(gamma**2) * n / (16 * math.e**3 * k**3))


def ks_exponent(n: int, k: int, gamma: float) -> float:
    return gamma**2 * n / (16 * math.e**3 * k**3)


def corollary_exponent(n: int, k: int, gamma: float) -> float:
    return gamma**2 / 2 * (n // (k * k))


def exponent_ratio(n: int, k: int) -> float:
    """Regular-graph exponent over the cluster-expansion exponent; 8 e^3 k when k^2 divides n."""
    return corollary_exponent(n, k, 1.0) / ks_exponent(n, k, 1.0)


def anshu_bound_exponent(n: int, k: int, d_reg: int, gamma: float) -> float:
    """Exponent n gamma^2 / (k^3 D) of the short-range bound (its constant is unknown)."""
    if gamma <= 0 or d_reg < 1:
        raise ValueError("need gamma > 0 and degree >= 1")
    return n * gamma**2 / (k**3 * d_reg)


@dataclass(frozen=True)
class BoundReport:
    """Exact tail masses of one instance at one gamma, next to every bound."""

    gamma: float
    mu: float
    m: int
    exact_lower_tail: float
    exact_upper_tail: float
    chebyshev: float
    chernoff_prop1: float
    chernoff_cor: float | None
    lemma2_sum: float
    ks_bound: float
    anshu_exponent: float
    satisfied: dict[str, bool] = field(default_factory=dict)

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied.values())

    def violations(self) -> list[str]:
        return [name for name, ok in self.satisfied.items() if not ok]

    def to_dict(self) -> dict:
        return asdict(self)


def verify_bounds(
    h: LocalHamiltonian,
    gammas: Iterable[float],
    coloring: Coloring | None = None,
    eig: EigenSystem | None = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> list[BoundReport]:
    """Diagonalize ``h`` and compare both exact tails with each bound per gamma.

    Chebyshev and the regular-graph bound only apply to regular hypergraphs; the
    short-range exponent is reported but never judged, since its constant is
    unspecified. The coloring sum uses the equitable coloring unless
    ``coloring`` is supplied, and is checked on both tails (the upper tail of
    H is the lower tail of -H, which has the same coloring).
    """
    eig = eig if eig is not None else diagonalize(h, dense_limit)
    dist = esd(eig, h.d, h.n)
    mu = normalized_trace(h)
    stats = h.stats
    coloring = coloring if coloring is not None else equitable_coloring(h.graph)
    reports = []
    for gamma in gammas:
        gamma = float(gamma)
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        lower = tail_mass(dist, mu, gamma, h.m, "lower")
        upper = tail_mass(dist, mu, gamma, h.m, "upper")
        cheb = chebyshev_bound(h.k, h.n, gamma)
        prop1 = chernoff_for(stats, h.n, h.k, gamma)
        cor = chernoff_corollary(h.n, h.k, stats.max_degree, gamma) if stats.is_regular else None
        l2 = lemma2_bound(coloring, gamma)
        worst = max(lower, upper)
        satisfied = {"chernoff_prop1": worst <= prop1 + SATISFY_TOL, "lemma2": worst <= l2 + SATISFY_TOL}
        if stats.is_regular:
            satisfied["chebyshev"] = lower + upper <= cheb + SATISFY_TOL
            satisfied["chernoff_cor"] = worst <= cor + SATISFY_TOL
        reports.append(
            BoundReport(
                gamma=gamma,
                mu=mu,
                m=h.m,
                exact_lower_tail=lower,
                exact_upper_tail=upper,
                chebyshev=cheb,
                chernoff_prop1=prop1,
                chernoff_cor=cor,
                lemma2_sum=l2,
                ks_bound=ks_bound(h.n, h.k, gamma),
                anshu_exponent=anshu_bound_exponent(h.n, h.k, stats.max_degree, gamma),
                satisfied=satisfied,
            )
        )
    return reports


@dataclass(frozen=True)
class ProofChain:
    lemma2_sum: float
    intermediate: float
    rounded: float
    chernoff_prop1: float

    def holds(self, tol: float = SATISFY_TOL) -> bool:
        return (
            self.lemma2_sum <= self.intermediate + tol
            and self.intermediate <= self.rounded + tol
            and abs(self.rounded - self.chernoff_prop1) <= tol * max(1.0, self.chernoff_prop1)
        )


def proof_chain(h: LocalHamiltonian, coloring: Coloring, gamma: float) -> ProofChain:
    """Each step from the coloring sum to the closed-form tail bound.

    lemma2_sum <= r exp(-floor(m/r) g^2/2) <= k Dmax exp(-g^2/2 floor(m/(k Dmax)))
    and the last expression equals the closed form after m = (Davg / k) n.
    """
    dmax = h.stats.max_degree
    kd = h.k * dmax
    rounded = kd * math.exp(-(gamma**2) / 2 * (h.m // kd))
    return ProofChain(
        lemma2_bound(coloring, gamma),
        equitable_intermediate(h.m, coloring.r, gamma),
        rounded,
        chernoff_for(h.stats, h.n, h.k, gamma),
    )


def typical_directions(
    h: LocalHamiltonian,
    gamma: float,
    eig: EigenSystem | None = None,
    basis: np.ndarray | None = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> TypicalDirectionReport:
    """Typical-direction check with eps_bar = 2 * (closed-form one-sided bound)."""
    eig = eig if eig is not None else diagonalize(h, dense_limit)
    bound = chernoff_for(h.stats, h.n, h.k, gamma)
    return typical_direction_report(eig, normalized_trace(h), gamma, h.m, bound, basis)
