"""Spectral concentration of k-local Hamiltonians at desk scale.

Builds k-local Hamiltonians on interaction hypergraphs, computes their
empirical spectral distributions exactly and through local moment
contractions, and checks the Chernoff-type tail bounds against exact spectra.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    chebyshev_bound,
    chernoff_prop1,
    ks_bound,
    lemma2_bound,
    verify_bounds,
)
from .estimation import ReconstructionConfig, reconstruct_from_moments, trivial_estimate
from .hamiltonian import LocalHamiltonian, LocalTerm, assemble_dense, normalized_trace, random_instance
from .hypergraph import Coloring, Hypergraph, degree_stats, equitable_coloring
from .moments import MomentVector, centered_variance, exact_moments, sampled_moments
from .spectrum import SpectralDistribution, diagonalize, esd, wasserstein1

__all__ = [
    "BoundReport",
    "Coloring",
    "Hypergraph",
    "LocalHamiltonian",
    "LocalTerm",
    "MomentVector",
    "ReconstructionConfig",
    "SpectralDistribution",
    "assemble_dense",
    "centered_variance",
    "chebyshev_bound",
    "chernoff_prop1",
    "degree_stats",
    "diagonalize",
    "equitable_coloring",
    "esd",
    "exact_moments",
    "ks_bound",
    "lemma2_bound",
    "normalized_trace",
    "random_instance",
    "reconstruct_from_moments",
    "sampled_moments",
    "trivial_estimate",
    "verify_bounds",
    "wasserstein1",
]
