"""Exact spectra: eigendecomposition, spectral distributions and W1 distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConvergenceFailure, NotNormalized
from .hamiltonian import DEFAULT_DENSE_LIMIT, LocalHamiltonian, assemble_dense

MERGE_TOL = 1e-9
MASS_TOL = 1e-9


def _group_starts(sorted_values: np.ndarray, tol: float = MERGE_TOL) -> np.ndarray:
    """Indices where a new cluster of (chain-)merged values begins."""
    if sorted_values.size == 0:
        return np.zeros(0, dtype=int)
    gaps = np.diff(sorted_values) > tol
    return np.concatenate(([0], np.flatnonzero(gaps) + 1))


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """Finitely many point masses on the real line, sorted by location."""

    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float).copy()
        mass = np.asarray(self.masses, dtype=float).copy()
        if loc.shape != mass.shape or loc.ndim != 1 or loc.size == 0:
            raise ValueError("locations and masses must be equal-length non-empty vectors")
        if np.any(np.diff(loc) <= 0):
            raise ValueError("locations must be strictly increasing")
        if np.any(mass < 0):
            raise ValueError("masses must be non-negative")
        if abs(mass.sum() - 1.0) > MASS_TOL:
            raise NotNormalized(f"masses sum to {mass.sum():.17g}, not 1")
        loc.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)

    @classmethod
    def from_points(
        cls, values: Iterable[float], weights: Iterable[float] | None = None, tol: float = MERGE_TOL
    ) -> "SpectralDistribution":
        """Build from unsorted points, merging values within ``tol`` (weights summed).

        Without ``weights`` each point gets mass 1/len(values).
        """
        vals = np.asarray(list(values), dtype=float)
        w = np.full(vals.size, 1.0 / vals.size) if weights is None else np.asarray(list(weights), float)
        order = np.argsort(vals, kind="stable")
        vals, w = vals[order], w[order]
        starts = _group_starts(vals, tol)
        mass = np.add.reduceat(w, starts)
        loc = np.add.reduceat(vals * w, starts)
        # weighted centre of each cluster; unweighted for clusters of zero mass
        plain = np.add.reduceat(vals, starts) / np.diff(np.append(starts, vals.size))
        loc = np.where(mass > 0, loc / np.where(mass > 0, mass, 1.0), plain)
        return cls(loc, mass)

    @classmethod
    def point_mass(cls, x: float) -> "SpectralDistribution":
        return cls(np.array([float(x)]), np.array([1.0]))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.locations.tolist(), self.masses.tolist()))

    def moment(self, j: int) -> float:
        return float(np.dot(self.masses, self.locations**j))

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def variance(self) -> float:
        return float(np.dot(self.masses, (self.locations - self.mean) ** 2))

    def scaled(self, factor: float) -> "SpectralDistribution":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return SpectralDistribution(self.locations * factor, self.masses)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Non-decreasing eigenvalues with eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def residual(self, a: np.ndarray) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(a - (v * self.eigenvalues) @ v.conj().T)))


def diagonalize_matrix(a: np.ndarray) -> EigenSystem:
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"Hermitian eigensolver did not converge: {exc}") from exc
    return EigenSystem(w, v)


def diagonalize(h: LocalHamiltonian, dense_limit: int = DEFAULT_DENSE_LIMIT) -> EigenSystem:
    return diagonalize_matrix(assemble_dense(h, dense_limit))


def esd(e: EigenSystem, d: int, n: int) -> SpectralDistribution:
    """Empirical spectral distribution: mass d^-n per eigenvalue."""
    dim = d**n
    if e.dim != dim:
        raise ValueError(f"eigensystem has {e.dim} eigenvalues, expected d^n = {dim}")
    return SpectralDistribution.from_points(e.eigenvalues, np.full(dim, 1.0 / dim))


def cdf(s: SpectralDistribution, t):
    """Right-continuous CDF F(t) = mass of (-inf, t]; ``t`` may be an array."""
    cum = np.concatenate(([0.0], np.cumsum(s.masses)))
    idx = np.searchsorted(s.locations, t, side="right")
    out = cum[idx]
    return float(out) if np.ndim(out) == 0 else out


def tail_mass(s: SpectralDistribution, mu: float, gamma: float, m: int, side: str = "lower") -> float:
    """Mass of (-inf, mu - gamma m] (``lower``), [mu + gamma m, inf) (``upper``) or both."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    lo = mu - gamma * m
    hi = mu + gamma * m
    lower = float(s.masses[s.locations <= lo].sum())
    upper = float(s.masses[s.locations >= hi].sum())
    if side == "lower":
        return lower
    if side == "upper":
        return upper
    if side == "both":
        return lower + upper
    raise ValueError(f"side must be 'lower', 'upper' or 'both', got {side!r}")


def quantile(s: SpectralDistribution, epsilon: float, d: int, n: int) -> float:
    """lambda_i with i = max(1, floor(epsilon d^n)), 1-based ascending order."""
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    dim = d**n
    i = max(1, math.floor(epsilon * dim))
    counts = np.rint(np.cumsum(s.masses) * dim)
    return float(s.locations[min(np.searchsorted(counts, i), s.locations.size - 1)])


def directional_esd(e: EigenSystem, psi: np.ndarray, d: int | None = None, n: int | None = None) -> SpectralDistribution:
    """Energy distribution of H in the pure state ``psi``.

    The atom at each distinct eigenvalue carries the squared overlap of ``psi``
    with that eigenspace.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != e.dim:
        raise ValueError(f"state has dimension {psi.size}, expected {e.dim}")
    if d is not None and n is not None and d**n != e.dim:
        raise ValueError("d^n does not match the eigensystem dimension")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-9:
        raise NotNormalized(f"state has norm {norm:.17g}")
    weights = np.abs(e.eigenvectors.conj().T @ psi) ** 2
    return SpectralDistribution.from_points(e.eigenvalues, weights / weights.sum())


@dataclass(frozen=True)
class TypicalDirectionReport:
    fraction: float
    eps_bar: float
    threshold: float
    holds: bool
    n_directions: int


def directional_tail_masses(
    e: EigenSystem, mu: float, gamma: float, m: int, basis: np.ndarray | None = None
) -> np.ndarray:
    """Two-sided tail mass {|x - mu| >= gamma m} of each basis direction's energy distribution."""
    in_tail = np.abs(e.eigenvalues - mu) >= gamma * m
    if basis is None:
        weights = np.abs(e.eigenvectors) ** 2  # row j: overlaps of |j> with each eigenvector
    else:
        weights = (np.abs(e.eigenvectors.conj().T @ basis) ** 2).T
    return weights[:, in_tail].sum(axis=1)


def typical_direction_report(
    e: EigenSystem,
    mu: float,
    gamma: float,
    m: int,
    tail_bound: float,
    basis: np.ndarray | None = None,
) -> TypicalDirectionReport:
    """Fraction of basis directions whose tail mass exceeds sqrt(eps_bar).

    ``eps_bar`` is twice ``tail_bound`` (the one-sided concentration bound);
    Markov's inequality says the fraction is at most sqrt(eps_bar). ``basis``
    holds orthonormal columns and defaults to the computational basis.
    """
    eps_bar = 2.0 * tail_bound
    threshold = math.sqrt(eps_bar)
    tails = directional_tail_masses(e, mu, gamma, m, basis)
    fraction = float(np.count_nonzero(tails > threshold)) / tails.size
    holds = fraction <= threshold or eps_bar > 1
    return TypicalDirectionReport(fraction, eps_bar, threshold, holds, tails.size)


def wasserstein1(s1: SpectralDistribution, s2: SpectralDistribution) -> float:
    """Integral of |F1 - F2| over the merged atom locations."""
    x = np.union1d(s1.locations, s2.locations)
    if x.size < 2:
        return 0.0
    gap = cdf(s1, x[:-1]) - cdf(s2, x[:-1])
    return float(np.sum(np.abs(gap) * np.diff(x)))
