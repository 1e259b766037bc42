"""Local Hamiltonians H = sum_eta H_eta on (C^d)^n and their dense assembly.

Qudit 0 is the most significant Kronecker factor everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionLimitExceeded, InstanceError
from .hypergraph import (
    DegreeStats,
    Hypergraph,
    chain_hypergraph,
    complete_hypergraph,
    degree_stats,
    erdos_renyi_hypergraph,
    regular_hypergraph,
)

DEFAULT_DENSE_LIMIT = 2**14
NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-12
# Asymmetry at or below this level is treated as roundoff and symmetrized away.
_ROUNDOFF_ASYMMETRY = 1e-10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

GRAPH_KINDS = ("regular", "erdos_renyi", "chain", "complete_k_sets")
TERM_KINDS = ("gue", "pauli", "diagonal", "ising", "projector", "alternating_xz", "zero")


def hermiticity_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def spectral_norm(a: np.ndarray) -> float:
    """Operator norm; uses eigenvalues for Hermitian input, singular values otherwise."""
    if hermiticity_residual(a) <= HERMITIAN_TOL:
        return float(np.max(np.abs(np.linalg.eigvalsh(a))))
    return float(np.linalg.norm(a, 2))


@dataclass(frozen=True, eq=False)
class LocalTerm:
    """One interaction: a d^k x d^k matrix acting on the qudits in ``support``."""

    support: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        support = tuple(int(v) for v in self.support)
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InstanceError(f"term on {list(support)} is not a square matrix: shape {mat.shape}")
        if hermiticity_residual(mat) <= _ROUNDOFF_ASYMMETRY:
            mat = (mat + mat.conj().T) / 2
        mat.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", mat)

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def normalized_trace(self) -> float:
        return float(np.trace(self.matrix).real) / self.dim


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    """H = sum of ``terms``; ``terms[i]`` lives on ``graph.edges[i]``.

    Structural mismatches (wrong support or matrix size) raise at construction;
    norm and Hermiticity are reported by :func:`validate`.
    """

    graph: Hypergraph
    d: int
    terms: tuple[LocalTerm, ...]
    _stats: DegreeStats = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.d < 2:
            raise InstanceError(f"local dimension must be >= 2, got {self.d}")
        if len(self.terms) != self.graph.m:
            raise InstanceError(f"{len(self.terms)} terms for {self.graph.m} edges")
        size = self.d**self.graph.k
        for i, (t, e) in enumerate(zip(self.terms, self.graph.edges)):
            if t.support != e:
                raise InstanceError(f"term {i} support {list(t.support)} != edge {list(e)}")
            if t.dim != size:
                raise InstanceError(f"term {i} has dimension {t.dim}, expected d^k = {size}")
        object.__setattr__(self, "_stats", degree_stats(self.graph))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def dim(self) -> int:
        return self.d**self.n

    @property
    def stats(self) -> DegreeStats:
        return self._stats

    def __neg__(self) -> "LocalHamiltonian":
        return self.with_terms([-t.matrix for t in self.terms])

    def with_terms(self, matrices: Sequence[np.ndarray]) -> "LocalHamiltonian":
        return LocalHamiltonian(
            self.graph, self.d, [LocalTerm(e, a) for e, a in zip(self.graph.edges, matrices)]
        )

    def subset(self, edge_indices: Sequence[int]) -> "LocalHamiltonian":
        """Hamiltonian of the selected terms on the same n qudits."""
        idx = list(edge_indices)
        g = Hypergraph(self.n, self.k, [self.graph.edges[i] for i in idx])
        return LocalHamiltonian(g, self.d, [self.terms[i] for i in idx])


def validate(h: LocalHamiltonian) -> tuple[bool, list[str]]:
    """Check every term: Hermitian within 1e-12 and operator norm <= 1 + 1e-9."""
    problems = list(h.graph.violations())
    for i, t in enumerate(h.terms):
        res = hermiticity_residual(t.matrix)
        if res > HERMITIAN_TOL:
            problems.append(f"term {i} on {list(t.support)} is not Hermitian (residual {res:.3e})")
        norm = t.norm
        if norm > 1 + NORM_TOL:
            problems.append(f"term {i} on {list(t.support)} has norm {norm:.12g} > 1")
    return not problems, problems


def embed(matrix: np.ndarray, support: Sequence[int], n: int, d: int) -> np.ndarray:
    """Place ``matrix`` on the qudits ``support`` of an n-qudit register.

    The result is ``P (matrix (x) I) P^T`` with P the qudit permutation taking
    (support, rest) to natural order; qudit 0 is the most significant factor.
    """
    support = list(support)
    k = len(support)
    rest = [q for q in range(n) if q not in support]
    big = np.kron(matrix, np.eye(d ** (n - k), dtype=matrix.dtype))
    order = support + rest
    pos = [order.index(q) for q in range(n)]
    t = big.reshape([d] * (2 * n)).transpose(pos + [n + p for p in pos])
    return t.reshape(d**n, d**n)


def check_dense_limit(dim: int, dense_limit: int = DEFAULT_DENSE_LIMIT) -> None:
    if dim > dense_limit:
        raise DimensionLimitExceeded(
            f"Hilbert space dimension {dim} exceeds dense limit {dense_limit}"
        )


def assemble_dense(h: LocalHamiltonian, dense_limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
    check_dense_limit(h.dim, dense_limit)
    out = np.zeros((h.dim, h.dim), dtype=np.complex128)
    for t in h.terms:
        out += embed(t.matrix, t.support, h.n, h.d)
    return out


def normalized_trace(h: LocalHamiltonian) -> float:
    """mu = d^-n tr H = sum_eta tr(H_eta)/d^k, without building H."""
    return float(sum(t.normalized_trace() for t in h.terms))


# -- random instances -------------------------------------------------------


def _pauli_string(labels: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for c in labels:
        out = np.kron(out, PAULI[c])
    return out


def _term(kind: str, d: int, k: int, index: int, rng: np.random.Generator) -> np.ndarray:
    size = d**k
    if kind == "gue":
        g = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
        a = (g + g.conj().T) / 2
        return a / np.max(np.abs(np.linalg.eigvalsh(a)))
    if kind == "diagonal":
        return np.diag(rng.uniform(-1.0, 1.0, size=size)).astype(complex)
    if kind == "zero":
        return np.zeros((size, size), dtype=complex)
    if kind == "projector":
        # 2|0..0><0..0| - I: commuting terms that all favour the same product state
        a = -np.eye(size, dtype=complex)
        a[0, 0] = 1.0
        return a
    if d != 2:
        raise InstanceError(f"term kind {kind!r} requires d = 2")
    if kind == "pauli":
        while True:
            labels = "".join(rng.choice(list("IXYZ"), size=k))
            if labels != "I" * k:
                break
        return float(rng.choice([-1.0, 1.0])) * _pauli_string(labels)
    if kind == "ising":
        return float(rng.choice([-1.0, 1.0])) * _pauli_string("Z" * k)
    if kind == "alternating_xz":
        return _pauli_string(("X" if index % 2 == 0 else "Z") * k)
    raise InstanceError(f"unknown term kind {kind!r}; expected one of {TERM_KINDS}")


def random_graph(
    n: int,
    k: int,
    graph: str,
    rng: np.random.Generator,
    degree: int | None = None,
    num_edges: int | None = None,
) -> Hypergraph:
    if graph == "regular":
        if degree is None:
            raise InstanceError("regular graphs need a degree")
        return regular_hypergraph(n, k, degree, rng)
    if graph == "erdos_renyi":
        if num_edges is None:
            raise InstanceError("erdos_renyi graphs need num_edges")
        return erdos_renyi_hypergraph(n, k, num_edges, rng)
    if graph == "chain":
        return chain_hypergraph(n, k)
    if graph == "complete_k_sets":
        return complete_hypergraph(n, k)
    raise InstanceError(f"unknown graph kind {graph!r}; expected one of {GRAPH_KINDS}")


def random_instance(
    n: int,
    d: int = 2,
    k: int = 2,
    graph: str = "regular",
    terms: str = "gue",
    seed: int = 0,
    degree: int | None = None,
    num_edges: int | None = None,
) -> LocalHamiltonian:
    """Seeded random local Hamiltonian.

    Args:
        graph: one of ``regular`` (needs ``degree``), ``erdos_renyi`` (needs
            ``num_edges``), ``chain``, ``complete_k_sets``.
        terms: ``gue`` (Gaussian Hermitian scaled to norm 1), ``pauli``,
            ``diagonal``, ``ising`` (+-Z..Z), ``projector``, ``alternating_xz``
            (X..X on even edges, Z..Z on odd) or ``zero``.
    """
    rng = np.random.default_rng(seed)
    g = random_graph(n, k, graph, rng, degree=degree, num_edges=num_edges)
    mats = [_term(terms, d, k, i, rng) for i in range(g.m)]
    return LocalHamiltonian(g, d, [LocalTerm(e, a) for e, a in zip(g.edges, mats)])


def strong_chain_reference(n: int = 4) -> LocalHamiltonian:
    """Qubit chain X0X1 + Z1Z2 + X2X3 + ...: neighbouring terms anticommute."""
    return random_instance(n, 2, 2, graph="chain", terms="alternating_xz")
