"""Directed graphs with the one-sided shift on infinite paths (k = 1).

Edges compose as end(e_i) = start(e_(i+1)).  Only eventually periodic paths
prefix . cycle^inf are represented.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import lattice as lat
from .errors import DuplicateQuasiOrbit, InputError, SourcelessVertex
from .lattice import Lattice
from .primcat import closure_order


@dataclass(frozen=True)
class Edge:
    name: str
    start: str
    end: str


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise InputError(f"unknown edge {name!r}")

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.start == v]


def validate_graph(vertices: Sequence[str], edges: Iterable) -> Graph:
    """Build a graph from vertex names and (name, start, end) records."""
    vertices = tuple(str(v) for v in vertices)
    if not vertices or len(set(vertices)) != len(vertices):
        raise InputError("vertex names must be nonempty and distinct")
    clean = []
    for rec in edges:
        if isinstance(rec, Mapping):
            rec = (rec.get("name"), rec.get("start"), rec.get("end"))
        try:
            name, s, t = (str(a) for a in rec)
        except (TypeError, ValueError):
            raise InputError(f"bad edge record {rec!r}") from None
        for v in (s, t):
            if v not in vertices:
                raise InputError(f"edge {name!r} uses unknown vertex {v!r}")
        clean.append(Edge(name, s, t))
    if len({e.name for e in clean}) != len(clean):
        raise InputError("duplicate edge names")
    starts = {e.start for e in clean}
    for v in vertices:
        if v not in starts:
            raise SourcelessVertex(v)
    return Graph(vertices, tuple(clean))


def parse_graph(raw: Mapping) -> Graph:
    if not isinstance(raw, Mapping) or "vertices" not in raw or "edges" not in raw:
        raise InputError("a graph needs 'vertices' and 'edges'")
    return validate_graph(raw["vertices"], raw["edges"])


def _primitive(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            return cycle[:d]
    return cycle


def canonical_rotation(cycle: Sequence[str]) -> tuple[str, ...]:
    cycle = tuple(cycle)
    return min(cycle[i:] + cycle[:i] for i in range(len(cycle)))


@dataclass(frozen=True)
class EvPath:
    """The infinite path prefix . cycle^inf in normal form: the cycle is
    primitive and the prefix is as short as possible."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __str__(self) -> str:
        c = "".join(self.cycle)
        tail = f"{c}^inf" if len(self.cycle) == 1 else f"({c})^inf"
        return "".join(self.prefix) + tail


def _normalize(prefix: tuple[str, ...], cycle: tuple[str, ...]) -> EvPath:
    cycle = _primitive(cycle)
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return EvPath(prefix, cycle)


def make_path(G: Graph, prefix: Sequence[str], cycle: Sequence[str]) -> EvPath:
    prefix, cycle = tuple(prefix), tuple(cycle)
    if not cycle:
        raise InputError("the cycle of a path must be nonempty")
    word = prefix + cycle + cycle[:1]
    for a, b in zip(word, word[1:]):
        if G.edge(a).end != G.edge(b).start:
            raise InputError(f"edges {a!r} and {b!r} are not composable")
    return _normalize(prefix, cycle)


def shift(p: EvPath, m: int) -> EvPath:
    if m < 0:
        raise InputError("shift amount must be nonnegative")
    if m <= len(p.prefix):
        return _normalize(p.prefix[m:], p.cycle)
    r = (m - len(p.prefix)) % len(p.cycle)
    return EvPath((), p.cycle[r:] + p.cycle[:r])


def tail_equiv(p: EvPath, q: EvPath) -> bool:
    return canonical_rotation(p.cycle) == canonical_rotation(q.cycle)


def path_vertices(G: Graph, p: EvPath) -> set[str]:
    return {G.edge(e).start for e in p.prefix + p.cycle}


def _reaches(G: Graph, targets: set[str]) -> set[str]:
    """Vertices with a directed path (possibly empty) into targets."""
    into: dict[str, list[str]] = {}
    for e in G.edges:
        into.setdefault(e.end, []).append(e.start)
    seen = set(targets)
    todo = deque(targets)
    while todo:
        v = todo.popleft()
        for u in into.get(v, []):
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def closure_vertices(G: Graph, p: EvPath) -> set[str]:
    """Vertices from which the cycle of p can be reached; closure[p] is the set
    of infinite paths through these vertices only."""
    return _reaches(G, path_vertices(G, EvPath((), p.cycle)))


def closure_contains(G: Graph, p: EvPath, q: EvPath) -> bool:
    """Whether q lies in the closure of the orbit of p."""
    return path_vertices(G, q) <= closure_vertices(G, p)


def _admissible_out(G: Graph, A: set[str], v: str) -> list[Edge]:
    return [e for e in G.out_edges(v) if e.end in A]


def _criterion_H(G: Graph, p: EvPath) -> Lattice:
    A = closure_vertices(G, p)
    cyc = [G.edge(e).start for e in p.cycle]
    if all(len(_admissible_out(G, A, v)) == 1 for v in cyc):
        return lat.hnf([(len(p.cycle),)], 1)
    return lat.zero_lattice(1)


def _oracle_H(G: Graph, p: EvPath, length: int) -> Lattice:
    """Brute force: from each cylinder at an admissible vertex, enumerate
    admissible paths of the given length; a unique one means the shift is
    eventually periodic on that cylinder, with the period of its tail."""
    A = closure_vertices(G, p)
    periods = []
    for u in sorted(A):
        walks = [[u]]
        for _ in range(length):
            walks = [w + [e.end] for w in walks for e in _admissible_out(G, A, w[-1])]
            if len(walks) > 1:
                break
        if len(walks) != 1:
            continue
        w = walks[0]
        last = {}
        for i, v in enumerate(w):
            if v in last:
                periods.append((i - last[v],))
                break
            last[v] = i
    return lat.hnf(periods, 1)


@dataclass(frozen=True)
class GraphH:
    lattice: Lattice
    criterion: Lattice
    oracle: Lattice

    @property
    def agrees(self) -> bool:
        return self.criterion == self.oracle


def graph_H(G: Graph, p: EvPath, length: int | None = None) -> GraphH:
    """H on the orbit closure of p, from the deterministic-tail criterion and
    a brute-force oracle.  On disagreement the oracle value is reported."""
    L = length if length is not None else 3 * len(G.edges)
    crit = _criterion_H(G, p)
    orc = _oracle_H(G, p, max(L, len(G.vertices) + 1))
    return GraphH(orc, crit, orc)


@dataclass
class GraphEntry:
    representative: EvPath
    H: GraphH
    closure_vertices: tuple[str, ...]
    whole_space: bool
    dual_description: str


@dataclass
class GraphCatalogue:
    entries: list[GraphEntry]
    # (i, j, verdict): verdict compares ker pi_i and ker pi_j on C_0
    order: list[tuple[int, int, str]]
    known_closure: str | None = None


def _closure_set(G: Graph, p: EvPath) -> frozenset:
    return frozenset(closure_vertices(G, p))


GRAPH_HS = validate_graph(
    ["v", "w"],
    [("e", "v", "v"), ("f", "w", "v"), ("g", "w", "w")],
)

HS_CLOSURE_STATEMENT = (
    "ker pi_(e^inf,z) is contained in ker pi_(g^inf,w) for all z, w; the hull-kernel "
    "closure of {I_(e^inf,z)} is {I_(e^inf,z)} together with every I_(g^inf,w), and "
    "{I_(g^inf,w)} is closed"
)


def graph_catalogue(G: Graph, reps: Sequence[EvPath]) -> GraphCatalogue:
    reps = list(reps)
    for i, p in enumerate(reps):
        dup = [q for q in reps[i + 1:] if closure_contains(G, p, q) and closure_contains(G, q, p)]
        if dup:
            raise DuplicateQuasiOrbit([str(p)] + [str(q) for q in dup])
    entries = []
    for p in reps:
        h = graph_H(G, p)
        cv = closure_vertices(G, p)
        entries.append(GraphEntry(p, h, tuple(v for v in G.vertices if v in cv),
                                  cv == set(G.vertices), lat.dual_description(h.lattice)))
    order = []
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            order.append((i, j, closure_order(_closure_set(G, reps[i]), _closure_set(G, reps[j]))))
    known = None
    if G == GRAPH_HS and {canonical_rotation(p.cycle) for p in reps} == {("e",), ("g",)}:
        known = HS_CLOSURE_STATEMENT
    return GraphCatalogue(entries, order, known)
