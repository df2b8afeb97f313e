"""Extension-closure expressions T_nj, F_i and their inclusion order."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .profiles import (ALL_CIJ, AX, CIJ_INDEX, CategoryId, Tri, W0, _membership, aleq, api, cij,
                       enumerate_profiles)


class LatticeError(ValueError):
    pass


def _cij_order(c: CategoryId) -> int:
    return CIJ_INDEX.index(c.args)


@dataclass(frozen=True)
class TorsionClassExpr:
    name: Optional[str]
    generators: frozenset[CategoryId]

    def __post_init__(self):
        for g in self.generators:
            if not g.is_cij:
                raise LatticeError(f"generator {g} is not one of the C_ij")

    @property
    def ordered(self) -> list[CategoryId]:
        return sorted(self.generators, key=_cij_order)

    def label(self) -> str:
        return self.name or closure_text(self.generators)

    def __str__(self) -> str:
        return self.label()


def closure_text(gens) -> str:
    return "<" + ",".join(str(g) for g in sorted(gens, key=_cij_order)) + ">"


def _t_gens(n: int, j: int) -> frozenset[CategoryId]:
    if n in (0, 2, 4):
        if j != 0:
            raise LatticeError(f"T{n}{j} is not defined")
        return frozenset(c for c in ALL_CIJ if c.args[0] <= n)
    if n in (1, 3, 5) and 0 <= j <= 2:
        out = set(_t_gens(n - 1, 0))
        out.update(cij(n, k) for k in range(j + 1))
        return frozenset(out)
    raise LatticeError(f"T{n}{j} is not defined")


def _f_gens(i: int) -> frozenset[CategoryId]:
    if not 2 <= i <= 5:
        raise LatticeError(f"F{i} is not defined")
    return frozenset(cij(k, 0) for k in range(i + 1))


_T_RE = re.compile(r"^T(\d)(\d)$")
_F_RE = re.compile(r"^F(\d)$")
C00_C20 = "<C00,C20>"


@lru_cache(maxsize=None)
def generators(name: str) -> TorsionClassExpr:
    """Flattened generator set of a named class, a ``C_ij``, or ``<a,b,...>``."""
    name = name.strip().replace(" ", "")
    if m := _T_RE.match(name):
        return TorsionClassExpr(name, _t_gens(int(m[1]), int(m[2])))
    if m := _F_RE.match(name):
        return TorsionClassExpr(name, _f_gens(int(m[1])))
    if name.startswith("<") and name.endswith(">"):
        gens = set()
        for part in filter(None, name[1:-1].split(",")):
            gens |= generators(part).generators
        label = closure_text(gens)
        return TorsionClassExpr(C00_C20 if label == C00_C20 else None, frozenset(gens))
    try:
        c = CategoryId.parse(name)
    except ValueError:
        raise LatticeError(f"unknown class {name!r}") from None
    if not c.is_cij:
        raise LatticeError(f"{name!r} is not an extension-closure expression")
    return TorsionClassExpr(None, frozenset({c}))


THEOREM_NAMES = ("T00", "T20", "T40", "T10", "T11", "T12", "T30", "T31", "T32",
                 "T50", "T51", "T52", "F2", "F3", "F4", "F5", C00_C20)

# class -> lemma whose script proves it is a torsion class
PROOF_SCRIPT = {
    "T00": "C00isTC", "T10": "Jade", "T11": "Lucas", "T12": "Sarah", "T20": "Tyler",
    "T30": "Zuly", "T31": "Gaby", "T32": "Manuel", "T40": "Esteban", "T50": "Joshua",
    "T51": "Lin", "T52": "last", "F2": "Max", "F3": "Jamie", "F4": "Jam", "F5": "Veronica",
    C00_C20: "C00C20isTC",
}


def theorem_list() -> list[TorsionClassExpr]:
    return [generators(n) for n in THEOREM_NAMES]


@dataclass(frozen=True)
class Alias:
    name: str
    category: tuple[CategoryId, ...]   # intersection of these
    script: str

    @property
    def text(self) -> str:
        return "&".join(str(c) for c in self.category)


_ALIASES = (
    Alias("T10", (api(0), W0), "Jade"),
    Alias("T12", (api(0),), "Sarah"),
    Alias("T20", (aleq(1),), "T20isAleq1"),
    Alias("T40", (aleq(2),), "Esteban"),
    Alias("T52", (AX,), "last"),
    Alias("F2", (aleq(1), W0), "Max"),
    Alias("F4", (aleq(2), W0), "Jam"),
    Alias("F5", (W0,), "Veronica"),
)


def aliases() -> tuple[Alias, ...]:
    return _ALIASES


def lookup(name: str) -> Optional[tuple[CategoryId, ...]]:
    for a in _ALIASES:
        if a.name == name:
            return a.category
    return None


@lru_cache(maxsize=None)
def _inside(c: CategoryId, target: tuple[CategoryId, ...]) -> bool:
    """Every consistent profile of ``c`` lies in the intersection ``target``."""
    members = [p for p in enumerate_profiles() if _membership(p, c) is Tri.YES]
    return all(_membership(p, t) is Tri.YES for p in members for t in target)


def _as_expr(x) -> TorsionClassExpr:
    return x if isinstance(x, TorsionClassExpr) else generators(x)


def _covered(g: CategoryId, b: TorsionClassExpr) -> bool:
    if g in b.generators:
        return True
    for a in _ALIASES:
        if generators(a.name).generators <= b.generators and _inside(g, a.category):
            return True
    return False


def leq(a, b) -> bool:
    """Generator containment, with generators absorbed by proven alias categories."""
    a, b = _as_expr(a), _as_expr(b)
    return all(_covered(g, b) for g in a.generators)


def equivalent(a, b) -> bool:
    a, b = _as_expr(a), _as_expr(b)
    if a.generators == b.generators:
        return True
    la, lb = a.name and lookup(a.name), b.name and lookup(b.name)
    return bool(la) and la == lb


def syntactic_leq(a, b) -> bool:
    return _as_expr(a).generators <= _as_expr(b).generators


# ---------------------------------------------------------------------------
# diagram of the C_ij, drawn as a grid; edges as in the picture

DIAGRAM_EDGES = (
    ("C00", "C10"), ("C00", "C20"), ("C10", "C11"), ("C10", "C30"), ("C11", "C12"),
    ("C20", "C30"), ("C20", "C40"), ("C30", "C31"), ("C30", "C50"), ("C31", "C32"),
    ("C40", "C50"), ("C50", "C51"), ("C51", "C52"),
)

# (row, column) in the drawing, row 0 at the top
DIAGRAM_POSITIONS = {
    "C40": (0, 2), "C50": (0, 3),
    "C20": (1, 1), "C30": (1, 2), "C51": (1, 3),
    "C00": (2, 0), "C10": (2, 1), "C31": (2, 2), "C52": (2, 3),
    "C11": (3, 1), "C32": (3, 2),
    "C12": (4, 1),
}


def diagram_nodes() -> list[str]:
    return [str(c) for c in ALL_CIJ]


def export_diagram(fmt: str = "dot") -> str:
    nodes = diagram_nodes()
    edges = sorted(DIAGRAM_EDGES, key=lambda e: (nodes.index(e[0]), nodes.index(e[1])))
    if fmt == "json":
        return json.dumps({"nodes": nodes, "edges": [list(e) for e in edges]}, indent=2) + "\n"
    if fmt == "dot":
        lines = ["graph Cij {"]
        lines += [f"  {n} [pos=\"{DIAGRAM_POSITIONS[n][1]},{-DIAGRAM_POSITIONS[n][0]}!\"];"
                  for n in nodes]
        lines += [f"  {a} -- {b};" for a, b in edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise LatticeError(f"unknown diagram format {fmt!r} (expected dot or json)")


def parse_dot_edges(text: str) -> set[frozenset[str]]:
    return {frozenset(m) for m in re.findall(r"(\w+) -- (\w+);", text)}


def catalog() -> list[dict]:
    """Machine-readable catalog of the seventeen torsion classes."""
    rows = []
    for t in theorem_list():
        a = lookup(t.name)
        rows.append({
            "name": t.name,
            "generators": [str(g) for g in t.ordered],
            "alias": "&".join(str(c) for c in a) if a else None,
            "alias_script": next((x.script for x in _ALIASES if x.name == t.name), None),
            "proof_script": PROOF_SCRIPT[t.name],
        })
    return rows
