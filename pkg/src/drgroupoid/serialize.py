"""JSON forms of systems, graphs, paths, functions, labels and reports.

Rationals are written as "p/q" strings, lattices as lists of HNF rows, and
every document is dumped with sorted keys so equal inputs give equal bytes.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Mapping

from . import lattice as lat
from .dynsys import FiniteSystem, validate_system
from .errors import DimensionMismatch, InputError
from .groupoid import GroupoidElement
from .lattice import Lattice
from .pathspace import EvPath, Graph, make_path, parse_graph
from .primcat import PrimIdealLabel
from .representations import CcFunction


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def system_to_json(sys: FiniteSystem) -> dict:
    return {"k": sys.k, "points": list(sys.points), "maps": [list(T) for T in sys.maps]}


def system_from_json(raw: Mapping) -> FiniteSystem:
    if not isinstance(raw, Mapping) or not {"k", "points", "maps"} <= set(raw):
        raise InputError("a system needs 'k', 'points' and 'maps'")
    k, maps = raw["k"], raw["maps"]
    if not isinstance(k, int) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    if not isinstance(maps, list) or len(maps) != k:
        raise DimensionMismatch(k, len(maps) if isinstance(maps, list) else maps)
    return validate_system(raw["points"], maps)


def digest(sys: FiniteSystem) -> str:
    canon = json.dumps(system_to_json(sys), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def lattice_to_json(L: Lattice) -> dict:
    return {"basis": [list(r) for r in L.basis], "text": str(L)}


def lattice_from_json(raw: Mapping, k: int) -> Lattice:
    return lat.hnf(raw["basis"], k)


def angle_to_json(theta) -> list[str]:
    return [lat.format_rational(t) for t in theta]


def angle_from_json(raw) -> tuple:
    return lat.make_angle(lat.parse_rational(str(t)) for t in raw)


def graph_to_json(G: Graph) -> dict:
    return {
        "vertices": list(G.vertices),
        "edges": [{"name": e.name, "start": e.start, "end": e.end} for e in G.edges],
    }


def graph_from_json(raw: Mapping) -> Graph:
    return parse_graph(raw)


def path_to_json(p: EvPath) -> dict:
    return {"prefix": list(p.prefix), "cycle": list(p.cycle)}


def path_from_json(G: Graph, raw) -> EvPath:
    if isinstance(raw, str):
        return parse_path(G, raw)
    return make_path(G, raw.get("prefix", []), raw["cycle"])


def parse_path(G: Graph, text: str) -> EvPath:
    """'g,f;e' is g f e^inf; a string without ';' is a cycle."""
    pre, _, cyc = text.rpartition(";")
    split = lambda s: [t.strip() for t in s.split(",") if t.strip()]
    return make_path(G, split(pre), split(cyc))


def _fmt_float(v: float) -> str:
    return repr(float(v))


def function_to_json(f: CcFunction) -> list[dict]:
    out = []
    for a in sorted(f.support()):
        v = f[a]
        out.append({
            "range": a.range, "displacement": list(a.displacement), "source": a.source,
            "re": _fmt_float(v.real), "im": _fmt_float(v.imag),
        })
    return out


def function_from_json(raw) -> CcFunction:
    vals = {}
    for rec in raw:
        a = GroupoidElement(rec["range"], tuple(rec["displacement"]), rec["source"])
        vals[a] = complex(float(rec["re"]), float(rec["im"]))
    return CcFunction(vals)


def label_to_json(label: PrimIdealLabel) -> dict:
    return {"quasi_orbit": label.quasi_orbit, "character": angle_to_json(label.character)}


def label_from_json(raw: Mapping) -> PrimIdealLabel:
    return PrimIdealLabel(raw["quasi_orbit"], tuple(lat.parse_rational(c) for c in raw["character"]))
