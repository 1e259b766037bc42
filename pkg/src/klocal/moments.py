"""Moments of the rescaled Hamiltonian h = H/m from local product traces.

The j-th moment of the spectrum of h is the average, over ordered j-tuples of
interactions, of the normalized trace of the product of those interactions.
Each product acts only on the union of its supports, so every trace is taken
on that small register instead of the full space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EnumerationCapExceeded, InternalError, SupportTooLarge
from .hamiltonian import LocalHamiltonian, embed
from .hypergraph import conflict_graph

DEFAULT_SUPPORT_CAP = 14
DEFAULT_ENUMERATION_CAP = 10**7
CONFIDENCE = 0.95
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class MomentVector:
    """Moments mu_1..mu_r of the spectrum of h, with per-degree error half-widths."""

    values: tuple[float, ...]
    error_bounds: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        errs = tuple(float(v) for v in self.error_bounds)
        if len(vals) != len(errs):
            raise ValueError("values and error_bounds differ in length")
        for j, (v, err) in enumerate(zip(vals, errs), start=1):
            if abs(v) > 1 + 1e-9:
                raise ValueError(f"moment {j} = {v} exceeds 1 in magnitude")
            if j % 2 == 0 and v < -(err + 1e-12):
                raise ValueError(f"even moment {j} = {v} is negative beyond its error bound")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "error_bounds", errs)

    @property
    def r(self) -> int:
        return len(self.values)

    def __getitem__(self, degree: int) -> float:
        """Moment by degree (1-based)."""
        if degree < 1:
            raise IndexError("moment degrees start at 1")
        return self.values[degree - 1]


class ProductTraceEvaluator:
    """Normalized traces of ordered interaction products on their union support.

    Operators on disjoint qudits commute, so a product splits into the ordered
    sub-products of its overlap-connected components and its normalized trace
    is the product of theirs. Each component is multiplied out densely on its
    own union support and cached under its least cyclic rotation.
    """

    def __init__(self, h: LocalHamiltonian, support_cap: int = DEFAULT_SUPPORT_CAP):
        self.h = h
        self.support_cap = support_cap
        self._adj = [a | {i} for i, a in enumerate(conflict_graph(h.graph))]
        self._lifted: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}
        self._memo: dict[tuple[int, ...], complex] = {}

    def union_support(self, indices: Sequence[int]) -> tuple[int, ...]:
        s = sorted(set().union(*(self.h.graph.edges[i] for i in indices)))
        if len(s) > self.support_cap:
            raise SupportTooLarge(
                f"union support of {len(s)} qudits exceeds the cap of {self.support_cap}"
            )
        return tuple(s)

    def lifted(self, i: int, support: tuple[int, ...]) -> np.ndarray:
        key = (i, support)
        a = self._lifted.get(key)
        if a is None:
            term = self.h.terms[i]
            local = [support.index(q) for q in term.support]
            a = embed(term.matrix, local, len(support), self.h.d)
            self._lifted[key] = a
        return a

    def components(self, key: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Split an index tuple into ordered sub-tuples of overlap-connected edges."""
        label: dict[int, int] = {}
        distinct = list(dict.fromkeys(key))
        for start in distinct:
            if start in label:
                continue
            label[start] = start
            stack = [start]
            while stack:
                u = stack.pop()
                for v in distinct:
                    if v not in label and v in self._adj[u]:
                        label[v] = start
                        stack.append(v)
        groups: dict[int, list[int]] = {}
        for i in key:
            groups.setdefault(label[i], []).append(i)
        return [tuple(g) for g in groups.values()]

    def _connected_trace(self, key: tuple[int, ...]) -> complex:
        key = min(key[i:] + key[:i] for i in range(len(key)))
        val = self._memo.get(key)
        if val is None:
            s = self.union_support(key)
            if len(key) == 1:
                val = complex(np.trace(self.lifted(key[0], s)))
            else:
                prod = self.lifted(key[0], s)
                for i in key[1:-1]:
                    prod = prod @ self.lifted(i, s)
                # tr(A B) = sum_ij A_ij B_ji
                val = complex(np.sum(prod * self.lifted(key[-1], s).T))
            val /= self.h.d ** len(s)
            self._memo[key] = val
        return val

    def complex_trace(self, indices: Sequence[int]) -> complex:
        key = tuple(int(i) for i in indices)
        if not key:
            raise ValueError("need at least one edge index")
        self.union_support(key)
        val = 1 + 0j
        for part in self.components(key):
            val *= self._connected_trace(part)
        return val

    def trace(self, indices: Sequence[int]) -> float:
        return self.complex_trace(indices).real


def local_product_trace(
    h: LocalHamiltonian,
    edge_indices: Sequence[int],
    support_cap: int = DEFAULT_SUPPORT_CAP,
    evaluator: ProductTraceEvaluator | None = None,
) -> float:
    """Re tr_bar(H_{i1} ... H_{ij}) computed on the union of the supports.

    A single ordered product of Hermitian terms can have a genuinely complex
    trace (e.g. tr(XYZ) = 2i); only the sum over all orderings is real, so the
    real part is returned here and realness is checked on aggregated sums.
    """
    ev = evaluator or ProductTraceEvaluator(h, support_cap)
    for i in edge_indices:
        if not 0 <= int(i) < h.m:
            raise IndexError(f"edge index {i} out of range for m = {h.m}")
    return ev.trace(edge_indices)


def exact_moments(
    h: LocalHamiltonian,
    r_max: int,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
    support_cap: int = DEFAULT_SUPPORT_CAP,
) -> MomentVector:
    """Exact moments mu_j = m^-j sum over all ordered j-tuples, j = 1..r_max.

    Raises:
        EnumerationCapExceeded: if m**r_max exceeds ``enumeration_cap``.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    m = h.m
    if m**r_max > enumeration_cap:
        raise EnumerationCapExceeded(
            f"m^r = {m}^{r_max} = {m**r_max} tuples exceeds the enumeration cap "
            f"{enumeration_cap}; use sampled moments instead"
        )
    ev = ProductTraceEvaluator(h, support_cap)
    values = []
    for j in range(1, r_max + 1):
        traces = [ev.complex_trace(t) for t in itertools.product(range(m), repeat=j)]
        re = math.fsum(z.real for z in traces)
        im = math.fsum(z.imag for z in traces)
        # a single ordering may be complex, the full sum is real
        if abs(im) > _IMAG_TOL * m**j:
            raise InternalError(f"degree-{j} trace sum has imaginary part {im:.3e}")
        values.append(re / m**j)
    return MomentVector(tuple(values), (0.0,) * r_max)


def hoeffding_half_width(samples: int, confidence: float = CONFIDENCE) -> float:
    """Half-width of a two-sided Hoeffding interval for a mean of [-1, 1] samples."""
    return math.sqrt(2.0 * math.log(2.0 / (1.0 - confidence)) / samples)


def sampled_moments(
    h: LocalHamiltonian,
    r_max: int,
    samples_per_degree: int,
    seed: int,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    evaluator: ProductTraceEvaluator | None = None,
) -> MomentVector:
    """Monte Carlo moments from i.i.d. uniform tuples of interactions.

    Tuples for degree j are drawn from a stream seeded by (seed, j), so results
    depend only on the seed. Each sample lies in [-1, 1]; the reported error is
    the 95% Hoeffding half-width. Passing a shared ``evaluator`` reuses cached
    traces across calls on the same Hamiltonian.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if samples_per_degree < 1:
        raise ValueError("samples_per_degree must be >= 1")
    ev = evaluator or ProductTraceEvaluator(h, support_cap)
    if ev.h is not h:
        raise ValueError("evaluator belongs to a different Hamiltonian")
    values = []
    for j in range(1, r_max + 1):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), j]))
        tuples = rng.integers(0, h.m, size=(samples_per_degree, j))
        vals = [ev.trace(row) for row in tuples.tolist()]
        values.append(math.fsum(vals) / samples_per_degree)
    half = hoeffding_half_width(samples_per_degree)
    return MomentVector(tuple(values), (half,) * r_max)


def centered_variance(h: LocalHamiltonian, support_cap: int = DEFAULT_SUPPORT_CAP) -> float:
    """Variance of the spectrum of h = H/m from overlapping pairs only.

    For centred terms, tr_bar((A - a)(B - b)) = tr_bar(AB) - ab, and it
    vanishes when A and B act on disjoint qudits.
    """
    ev = ProductTraceEvaluator(h, support_cap)
    mus = [t.normalized_trace() for t in h.terms]
    adj = conflict_graph(h.graph)
    total = []
    for i in range(h.m):
        for j in sorted(adj[i] | {i}):
            total.append(ev.trace((i, j)) - mus[i] * mus[j])
    return math.fsum(total) / h.m**2


def overlap_probability(h: LocalHamiltonian) -> float:
    """P(eta and eta' intersect) for independent uniform interactions."""
    adj = conflict_graph(h.graph)
    return (h.m + sum(len(a) for a in adj)) / h.m**2
