"""File formats: instance JSON, spectrum/moment CSV, coloring and report JSON."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, TextIO

import numpy as np

from .errors import InstanceError
from .hamiltonian import LocalHamiltonian, LocalTerm, validate
from .hypergraph import Hypergraph
from .moments import MomentVector
from .spectrum import SpectralDistribution


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


def instance_to_dict(h: LocalHamiltonian) -> dict:
    return {
        "n": h.n,
        "d": h.d,
        "k": h.k,
        "edges": [list(e) for e in h.graph.edges],
        "terms": [
            [[float(z.real), float(z.imag)] for z in t.matrix.ravel()] for t in h.terms
        ],
    }


def instance_from_dict(data: dict, check: bool = True) -> LocalHamiltonian:
    """Parse instance JSON data; with ``check`` every invariant is enforced.

    Raises:
        InstanceError: on malformed data or (with ``check``) any violation,
            including non-Hermitian or over-norm terms.
    """
    try:
        n, d, k = int(data["n"]), int(data["d"]), int(data["k"])
        edges = [tuple(int(v) for v in e) for e in data["edges"]]
        raw_terms = data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed instance: {exc}") from exc
    g = Hypergraph(n, k, edges)
    size = d**k
    if len(raw_terms) != len(edges):
        raise InstanceError(f"{len(raw_terms)} terms for {len(edges)} edges")
    terms = []
    for i, (e, raw) in enumerate(zip(g.edges, raw_terms)):
        arr = np.asarray(raw, dtype=float)
        if arr.shape != (size * size, 2):
            raise InstanceError(
                f"term {i} must be {size * size} [re, im] pairs (d^k = {size}), got shape {arr.shape}"
            )
        terms.append(LocalTerm(e, (arr[:, 0] + 1j * arr[:, 1]).reshape(size, size)))
    h = LocalHamiltonian(g, d, terms)
    if check:
        ok, problems = validate(h)
        if not ok:
            raise InstanceError("invalid instance: " + "; ".join(problems), problems)
    return h


def load_instance(path: str | Path, check: bool = True) -> LocalHamiltonian:
    with open(path) as f:
        return instance_from_dict(json.load(f), check=check)


def load_graph(path: str | Path) -> Hypergraph:
    """Read a hypergraph from an instance file or a bare {n, k, edges} fragment."""
    with open(path) as f:
        return Hypergraph.from_dict(json.load(f))


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def distribution_csv(s: SpectralDistribution) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["location", "mass"])
    for loc, mass in s.atoms:
        w.writerow([fmt(loc), fmt(mass)])
    return buf.getvalue()


def read_distribution_csv(f: TextIO) -> SpectralDistribution:
    rows = list(csv.DictReader(f))
    return SpectralDistribution(
        np.array([float(r["location"]) for r in rows]), np.array([float(r["mass"]) for r in rows])
    )


def moments_csv(mv: MomentVector) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "value", "error_bound"])
    for j, (v, e) in enumerate(zip(mv.values, mv.error_bounds), start=1):
        w.writerow([j, fmt(v), fmt(e)])
    return buf.getvalue()


def read_moments_csv(f: TextIO) -> MomentVector:
    rows = sorted(csv.DictReader(f), key=lambda r: int(r["degree"]))
    degrees = [int(r["degree"]) for r in rows]
    if degrees != list(range(1, len(rows) + 1)):
        raise InstanceError(f"moment degrees must be 1..r without gaps, got {degrees}")
    return MomentVector(
        tuple(float(r["value"]) for r in rows), tuple(float(r["error_bound"]) for r in rows)
    )


def table_csv(header: list[str], rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, float) else ("" if x is None else x) for x in row])
    return buf.getvalue()
