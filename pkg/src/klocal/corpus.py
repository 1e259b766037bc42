"""Seeded desk-scale instance corpora for property and bound verification."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .errors import InfeasibleGraph
from .hamiltonian import LocalHamiltonian, random_instance

TERM_MIX = ("gue", "pauli", "diagonal", "ising", "projector")
COMMUTING = ("ising", "projector", "diagonal")


def random_desk_instance(
    seed: int,
    n_range: tuple[int, int] = (3, 10),
    ks: tuple[int, ...] = (2, 3),
    terms: tuple[str, ...] = TERM_MIX,
    graphs: tuple[str, ...] = ("regular", "erdos_renyi", "chain", "complete_k_sets"),
    max_edges: int | None = None,
) -> LocalHamiltonian:
    """One qubit instance drawn from a seeded mix of graph and term kinds.

    Infeasible draws (degree parity, configuration-model failures, oversized
    complete graphs) are redrawn from the same stream, so every seed yields an
    instance.
    """
    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        k = int(rng.choice(ks))
        graph = str(rng.choice(graphs))
        term = str(rng.choice(terms))
        sub_seed = int(rng.integers(2**31))
        if n < k:
            continue
        kw: dict = {}
        if graph == "regular":
            kw["degree"] = int(rng.integers(1, 6))
        elif graph == "erdos_renyi":
            kw["num_edges"] = int(rng.integers(1, 3 * n + 1))
        elif graph == "complete_k_sets" and n > 7:
            continue
        try:
            h = random_instance(n, 2, k, graph=graph, terms=term, seed=sub_seed, **kw)
        except InfeasibleGraph:
            continue
        if max_edges is not None and h.m > max_edges:
            continue
        return h


def desk_corpus(count: int, seed: int = 0, **kwargs) -> Iterator[LocalHamiltonian]:
    for i in range(count):
        yield random_desk_instance(seed * 1_000_003 + i, **kwargs)


def regular_corpus(count: int, seed: int = 0, n_range=(4, 10), ks=(2, 3), terms=TERM_MIX) -> Iterator[LocalHamiltonian]:
    """Only degree-regular instances (Chebyshev and the regular-graph bound apply)."""
    for i in range(count):
        yield random_desk_instance(
            seed * 1_000_003 + i, n_range=n_range, ks=ks, terms=terms, graphs=("regular",)
        )
