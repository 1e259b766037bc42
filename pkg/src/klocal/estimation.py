"""Spectrum estimates for h = H/m: the point-mass estimate and moment inversion."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import Infeasible
from .hamiltonian import LocalHamiltonian, normalized_trace
from .moments import MomentVector
from .spectrum import SpectralDistribution

DEFAULT_GRID_POINTS = 401
DEFAULT_TOLERANCE = 1e-9
SLACK_TOL = 1e-9


@dataclass(frozen=True)
class ReconstructionConfig:
    """LP moment-inversion settings.

    ``tolerances`` are the per-degree slacks eps_j; ``None`` means 1e-9 for
    every degree. They need not be monotone in j.
    """

    grid_points: int = DEFAULT_GRID_POINTS
    r: int = 8
    tolerances: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.tolerances is not None:
            tol = tuple(float(t) for t in self.tolerances)
            if len(tol) != self.r:
                raise ValueError(f"need {self.r} tolerances, got {len(tol)}")
            if any(t <= 0 for t in tol):
                raise ValueError("tolerances must be positive")
            object.__setattr__(self, "tolerances", tol)

    def tolerance(self, degree: int) -> float:
        return DEFAULT_TOLERANCE if self.tolerances is None else self.tolerances[degree - 1]

    def to_dict(self) -> dict:
        return {
            "grid_points": self.grid_points,
            "r": self.r,
            "tolerances": None if self.tolerances is None else list(self.tolerances),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReconstructionConfig":
        tol = data.get("tolerances")
        return cls(
            grid_points=int(data.get("grid_points", DEFAULT_GRID_POINTS)),
            r=int(data.get("r", 8)),
            tolerances=None if tol is None else tuple(tol),
        )


def trivial_estimate(h: LocalHamiltonian, rescaled: bool = False) -> SpectralDistribution:
    """Point mass at mu = d^-n tr H (at mu/m when ``rescaled``, i.e. for h = H/m)."""
    mu = normalized_trace(h)
    return SpectralDistribution.point_mass(mu / h.m if rescaled else mu)


@dataclass(frozen=True)
class MomentFit:
    """LP solution plus how far each degree misses its tolerance band."""

    distribution: SpectralDistribution
    slack: float
    excess: tuple[float, ...]
    allowance: tuple[float, ...]

    @property
    def within_allowance(self) -> bool:
        return all(e <= a + SLACK_TOL for e, a in zip(self.excess, self.allowance))


def discretization_allowance(degree: int, grid_points: int) -> float:
    """Largest change of the degree-j moment when every atom snaps to the grid.

    |x^j - y^j| <= j |x - y| on [-1, 1], and snapping moves atoms by at most
    half the grid spacing.
    """
    return degree * grid_spacing(grid_points) / 2


def fit_moments(mv: MomentVector, cfg: ReconstructionConfig) -> MomentFit:
    """Solve the moment-matching LP on a uniform grid over [-1, 1].

    Variables are grid masses p >= 0 (summing to 1) and one slack s_j >= 0 per
    degree with |sum_i p_i t_i^j - mu_j| <= eps_j + err_j + s_j; total slack is
    minimised by HiGHS dual simplex, which is deterministic.
    """
    r = min(cfg.r, mv.r)
    if r < 1:
        raise ValueError("need at least one moment")
    grid = np.linspace(-1.0, 1.0, cfg.grid_points)
    g = grid.size
    powers = np.vstack([grid**j for j in range(1, r + 1)])
    target = np.array(mv.values[:r])
    width = np.array([cfg.tolerance(j) + mv.error_bounds[j - 1] for j in range(1, r + 1)])
    eye = np.eye(r)
    a_ub = np.block([[powers, -eye], [-powers, -eye]])
    b_ub = np.concatenate([target + width, -target + width])
    a_eq = np.concatenate([np.ones(g), np.zeros(r)])[None, :]
    cost = np.concatenate([np.zeros(g), np.ones(r)])
    res = linprog(
        cost,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=(0, None),
        method="highs-ds",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise Infeasible(f"moment LP failed: {res.message}")
    p = res.x[:g].copy()
    p[p < 1e-12] = 0.0
    p /= p.sum()
    excess = np.maximum(np.abs(powers @ p - target) - width, 0.0)
    keep = p > 0
    return MomentFit(
        SpectralDistribution(grid[keep], p[keep]),
        float(res.x[g:].sum()),
        tuple(excess.tolist()),
        tuple(discretization_allowance(j, cfg.grid_points) for j in range(1, r + 1)),
    )


def reconstruct_from_moments(mv: MomentVector, cfg: ReconstructionConfig | None = None) -> SpectralDistribution:
    """Grid distribution on [-1, 1] whose first r moments match ``mv``.

    The LP minimises the total amount by which the moments miss their bands
    eps_j + error_bounds[j]. Off-grid spectra generally cannot be matched
    exactly by grid masses, so a miss of up to the snapping allowance
    j * spacing / 2 per degree is accepted.

    Raises:
        Infeasible: when some degree misses by more than its allowance, which
            means the moments are inconsistent with any distribution on
            [-1, 1] at the requested tolerances. Carries the minimal slack.
    """
    cfg = cfg or ReconstructionConfig()
    fit = fit_moments(mv, cfg)
    if not fit.within_allowance:
        raise Infeasible(
            f"moment constraints unsatisfiable within tolerance; minimal total slack {fit.slack:.3e}",
            min_slack=fit.slack,
        )
    return fit.distribution


def moment_degree_for_accuracy(gamma: float, c: float) -> int:
    """Number of moments floor(C / gamma), at least 1, for a W1 accuracy gamma."""
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    if c <= 0:
        raise ValueError("C must be positive")
    return max(1, math.floor(c / gamma))


def synthetic_grid_distribution(
    grid_points: int, atoms: int, rng: np.random.Generator
) -> SpectralDistribution:
    """Random distribution supported on ``atoms`` points of the uniform grid."""
    grid = np.linspace(-1.0, 1.0, grid_points)
    idx = np.sort(rng.choice(grid_points, size=atoms, replace=False))
    w = rng.dirichlet(np.ones(atoms))
    return SpectralDistribution(grid[idx], w)


def moments_of(s: SpectralDistribution, r: int) -> MomentVector:
    return MomentVector(tuple(s.moment(j) for j in range(1, r + 1)), (0.0,) * r)


def grid_spacing(grid_points: int) -> float:
    return 2.0 / (grid_points - 1)

