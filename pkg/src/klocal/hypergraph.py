"""Interaction hypergraphs, degree statistics and equitable hyperedge colorings.

Vertices are qudits ``0..n-1``; each hyperedge is the support of one local
interaction. Hyperedge colorings are computed as vertex colorings of the
conflict graph, whose nodes are edges and whose adjacency is "shares a qudit".
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InfeasibleGraph, InstanceError, InternalError

__all__ = [
    "Hypergraph",
    "DegreeStats",
    "Coloring",
    "degree_stats",
    "conflict_graph",
    "overlap_pair_count",
    "equitable_coloring",
    "random_proper_coloring",
    "validate_coloring",
    "chain_hypergraph",
    "complete_hypergraph",
    "erdos_renyi_hypergraph",
    "regular_hypergraph",
]


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on ``n`` vertices.

    Duplicate edges are allowed and count as distinct interactions.

    Example:
        >>> g = Hypergraph(3, 2, [(0, 1), (2, 1), (0, 2)])
        >>> g.edges
        ((0, 1), (1, 2), (0, 2))
    """

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(tuple(sorted(int(v) for v in e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        problems = self.violations()
        if problems:
            raise InstanceError("invalid hypergraph: " + "; ".join(problems), problems)

    def violations(self) -> list[str]:
        out = []
        if self.n < 1:
            out.append(f"n must be >= 1, got {self.n}")
        if self.k < 1:
            out.append(f"k must be >= 1, got {self.k}")
        if not self.edges:
            out.append("hypergraph needs at least one edge")
        for i, e in enumerate(self.edges):
            if len(e) != self.k:
                out.append(f"edge {i} {list(e)} has {len(e)} vertices, expected k={self.k}")
            elif len(set(e)) != len(e):
                out.append(f"edge {i} {list(e)} repeats a vertex")
            if any(v < 0 or v >= self.n for v in e):
                out.append(f"edge {i} {list(e)} has a vertex outside [0, {self.n})")
        return out

    @property
    def m(self) -> int:
        return len(self.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Hypergraph":
        try:
            return cls(int(data["n"]), int(data["k"]), [tuple(e) for e in data["edges"]])
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed hypergraph data: {exc}") from exc


@dataclass(frozen=True)
class DegreeStats:
    per_vertex: tuple[int, ...]
    max_degree: int
    avg_degree: Fraction

    @property
    def min_degree(self) -> int:
        return min(self.per_vertex)

    @property
    def is_regular(self) -> bool:
        return self.min_degree == self.max_degree


def degree_stats(g: Hypergraph) -> DegreeStats:
    """Count incident edges per vertex; the average is the exact rational k*m/n."""
    deg = [0] * g.n
    for e in g.edges:
        for v in e:
            deg[v] += 1
    return DegreeStats(tuple(deg), max(deg), Fraction(g.k * g.m, g.n))


def conflict_graph(g: Hypergraph) -> list[set[int]]:
    """Adjacency sets of the conflict graph (one node per edge index)."""
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, e in enumerate(g.edges):
        for v in e:
            incident[v].append(i)
    adj = [set() for _ in range(g.m)]
    for i, e in enumerate(g.edges):
        for v in e:
            adj[i].update(incident[v])
        adj[i].discard(i)
    return adj


def overlap_pair_count(g: Hypergraph) -> int:
    """Number of ordered pairs (i, j), i == j included, whose edges intersect."""
    return g.m + sum(len(a) for a in conflict_graph(g))


@dataclass(frozen=True)
class Coloring:
    """Partition of edge indices into color classes of pairwise-disjoint edges."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "classes", tuple(tuple(sorted(int(i) for i in c)) for c in self.classes)
        )

    @property
    def r(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def to_dict(self) -> dict:
        return {"r": self.r, "classes": [list(c) for c in self.classes]}

    @classmethod
    def from_dict(cls, data: dict) -> "Coloring":
        return cls([tuple(c) for c in data["classes"]])


def num_colors(g: Hypergraph) -> int:
    """Color count r = k(max_degree - 1) + 1 used for equitable colorings."""
    return g.k * (degree_stats(g).max_degree - 1) + 1


def validate_coloring(
    g: Hypergraph, c: Coloring, require_equitable: bool = True
) -> tuple[bool, list[str]]:
    """Check that ``c`` is a hyperedge coloring of ``g``.

    With ``require_equitable`` the minimum class size must also be at least
    floor(m / r). Returns ``(ok, violations)``.
    """
    problems = []
    seen: dict[int, int] = {}
    for ci, cls in enumerate(c.classes):
        for i in cls:
            if i < 0 or i >= g.m:
                problems.append(f"class {ci} contains invalid edge index {i}")
            elif i in seen:
                problems.append(f"edge {i} appears in classes {seen[i]} and {ci}")
            else:
                seen[i] = ci
    missing = sorted(set(range(g.m)) - set(seen))
    if missing:
        problems.append(f"edges {missing} are uncolored")
    for ci, cls in enumerate(c.classes):
        valid = [i for i in cls if 0 <= i < g.m]
        for a, b in itertools.combinations(valid, 2):
            shared = set(g.edges[a]) & set(g.edges[b])
            if shared:
                problems.append(
                    f"class {ci}: edges {a} and {b} share vertices {sorted(shared)}"
                )
    if require_equitable and c.r > 0:
        floor_mr = g.m // c.r
        if min(c.sizes) < floor_mr:
            problems.append(
                f"class sizes {list(c.sizes)} not equitable: min {min(c.sizes)} < floor(m/r) = {floor_mr}"
            )
    return not problems, problems


class _Balancer:
    """Mutable coloring state for greedy assignment and swap rebalancing."""

    def __init__(self, adj: list[set[int]], r: int, rng: random.Random):
        self.adj = adj
        self.r = r
        self.rng = rng
        self.color = [-1] * len(adj)
        self.members: list[set[int]] = [set() for _ in range(r)]

    def free(self, v: int, c: int, ignore: int = -1) -> bool:
        return all(self.color[u] != c for u in self.adj[v] if u != ignore)

    def assign(self, v: int, c: int) -> None:
        old = self.color[v]
        if old >= 0:
            self.members[old].discard(v)
        self.color[v] = c
        self.members[c].add(v)

    def greedy(self, order: Sequence[int]) -> None:
        for v in order:
            allowed = [c for c in range(self.r) if self.free(v, c)]
            if not allowed:
                raise InternalError("greedy coloring ran out of colors; conflict degree exceeds r - 1")
            self.assign(v, min(allowed, key=lambda c: (len(self.members[c]), c)))

    def spread(self) -> int:
        sizes = [len(s) for s in self.members]
        return max(sizes) - min(sizes)

    def movable(self, src: int, dst: int) -> list[int]:
        return sorted(v for v in self.members[src] if self.free(v, dst))

    def shift_path(self) -> int:
        """Move one unit of size along a path from a large class to a small one.

        Returns the number of moves made (0 when no such path exists).
        """
        sizes = [len(s) for s in self.members]
        lo = min(sizes)
        targets = {c for c in range(self.r) if sizes[c] == lo}
        # BFS backwards from the small classes over "X can push a vertex into Y".
        parent: dict[int, tuple[int, int]] = {}
        reached = set(targets)
        queue = deque(sorted(targets))
        while queue:
            y = queue.popleft()
            for x in range(self.r):
                if x in reached:
                    continue
                cand = self.movable(x, y)
                if cand:
                    parent[x] = (y, self.rng.choice(cand))
                    reached.add(x)
                    queue.append(x)
        sources = [c for c in reached if sizes[c] >= lo + 2]
        if not sources:
            return 0
        x = max(sources, key=lambda c: (sizes[c], -c))
        moves = 0
        while x not in targets:
            y, v = parent[x]
            self.assign(v, y)
            moves += 1
            x = y
        return moves

    def kempe_swap(self) -> bool:
        """Exchange across the boundary of the set of classes that can reach a small class.

        A vertex in an unreachable class with exactly one neighbour in a reachable
        class takes that neighbour's place; the displaced vertex moves to any
        class where it fits.
        """
        sizes = [len(s) for s in self.members]
        lo = min(sizes)
        reach = {c for c in range(self.r) if sizes[c] == lo}
        grown = True
        while grown:
            grown = False
            for x in range(self.r):
                if x not in reach and any(self.movable(x, y) for y in reach):
                    reach.add(x)
                    grown = True
        candidates = []
        for x in range(self.r):
            if x in reach:
                continue
            for v in self.members[x]:
                for y in reach:
                    blockers = [u for u in self.adj[v] if self.color[u] == y]
                    if len(blockers) == 1:
                        candidates.append((v, y, blockers[0]))
        self.rng.shuffle(candidates)
        for v, y, w in candidates:
            x = self.color[v]
            dests = [z for z in range(self.r) if z != y and self.free(w, z, ignore=v)]
            if not dests:
                continue
            # prefer moving the displaced vertex into a reachable class
            good = [z for z in dests if z in reach]
            z = self.rng.choice(good or dests)
            self.assign(v, y)
            self.assign(w, z)
            return True
        return False

    def perturb(self) -> bool:
        moves = [
            (v, c)
            for v in range(len(self.adj))
            for c in range(self.r)
            if c != self.color[v] and self.free(v, c)
        ]
        if not moves:
            return False
        v, c = self.rng.choice(moves)
        self.assign(v, c)
        return True


def equitable_coloring(g: Hypergraph, seed: int = 0) -> Coloring:
    """Equitable hyperedge coloring with r = k(max_degree - 1) + 1 colors.

    A balanced greedy pass produces a proper coloring (r colors always suffice
    because the conflict graph has maximum degree at most r - 1). Class sizes
    are then evened out by moving vertices along chains of classes and by
    single-conflict swaps, within a budget of ``100 * m * r`` moves.

    Raises:
        InternalError: if the budget is exhausted before sizes differ by <= 1.
    """
    adj = conflict_graph(g)
    r = num_colors(g)
    if max((len(a) for a in adj), default=0) > r - 1:
        raise InternalError("conflict graph degree exceeds k(max_degree - 1)")
    rng = random.Random(seed)
    state = _Balancer(adj, r, rng)
    state.greedy(sorted(range(g.m), key=lambda v: (-len(adj[v]), v)))
    budget = 100 * g.m * r
    spent = 0
    while state.spread() > 1:
        if spent >= budget:
            raise InternalError(
                f"equitable rebalancing exceeded its budget of {budget} moves "
                f"(sizes {[len(s) for s in state.members]})"
            )
        moved = state.shift_path()
        if moved:
            spent += moved
            continue
        spent += 2
        if not state.kempe_swap() and not state.perturb():
            raise InternalError("no legal recoloring move available")
    coloring = Coloring([tuple(s) for s in state.members])
    ok, problems = validate_coloring(g, coloring)
    if not ok:
        raise InternalError("equitable coloring failed validation: " + "; ".join(problems))
    return coloring


def random_proper_coloring(g: Hypergraph, rng: np.random.Generator) -> Coloring:
    """A random (not necessarily equitable) hyperedge coloring.

    Edges are visited in random order and each picks uniformly among the
    existing colors it fits, or opens a new color with probability 1/(#fits+1).
    """
    adj = conflict_graph(g)
    color = [-1] * g.m
    classes: list[list[int]] = []
    for v in rng.permutation(g.m):
        v = int(v)
        fits = [c for c in range(len(classes)) if all(color[u] != c for u in adj[v])]
        pick = int(rng.integers(len(fits) + 1))
        if pick == len(fits):
            classes.append([])
            c = len(classes) - 1
        else:
            c = fits[pick]
        color[v] = c
        classes[c].append(v)
    return Coloring([tuple(c) for c in classes])


# -- generators -------------------------------------------------------------


def chain_hypergraph(n: int, k: int = 2) -> Hypergraph:
    """Open chain: edges {i, ..., i+k-1} for i = 0..n-k."""
    if n < k:
        raise InfeasibleGraph(f"chain needs n >= k (n={n}, k={k})")
    return Hypergraph(n, k, [tuple(range(i, i + k)) for i in range(n - k + 1)])


def complete_hypergraph(n: int, k: int) -> Hypergraph:
    if n < k:
        raise InfeasibleGraph(f"complete k-sets need n >= k (n={n}, k={k})")
    return Hypergraph(n, k, list(itertools.combinations(range(n), k)))


def erdos_renyi_hypergraph(n: int, k: int, m: int, rng: np.random.Generator) -> Hypergraph:
    """``m`` independent uniform k-subsets (repeats allowed)."""
    if n < k or m < 1:
        raise InfeasibleGraph(f"need n >= k and m >= 1 (n={n}, k={k}, m={m})")
    edges = [tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))) for _ in range(m)]
    return Hypergraph(n, k, edges)


def regular_hypergraph(
    n: int, k: int, degree: int, rng: np.random.Generator, max_tries: int = 10_000
) -> Hypergraph:
    """Degree-regular k-uniform multi-hypergraph by configuration-model pairing.

    Stubs are shuffled and cut into consecutive k-groups; a pairing is rejected
    if any group repeats a vertex.
    """
    if degree < 1 or n < k:
        raise InfeasibleGraph(f"need degree >= 1 and n >= k (n={n}, k={k}, degree={degree})")
    if (n * degree) % k:
        raise InfeasibleGraph(
            f"n*degree = {n}*{degree} = {n * degree} is not divisible by k = {k}"
        )
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        groups = rng.permutation(stubs).reshape(-1, k)
        if all(len(set(row.tolist())) == k for row in groups):
            return Hypergraph(n, k, [tuple(row.tolist()) for row in groups])
    raise InfeasibleGraph(
        f"configuration model failed after {max_tries} tries (n={n}, k={k}, degree={degree})"
    )
