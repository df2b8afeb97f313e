"""Ground facts of the proof language, parsed from and printed to text.

Objects are identifiers; ``x^`` is the transform of ``x`` and ``x^^``
normalises to ``x``.  Categories are atoms (``C10``, ``Aleq1``, ``Api0``,
``A2pi1``, ``W0``, ``A1h``, ``Horiz``, ``AX``), closure names (``T31``, ``F2``,
``<C00,C20>``), ``Hat(K)`` and intersections ``K&L``.

Dimensions of the zero object are taken as -1, so the default ranges are
``Dim`` in -1..3 and ``Dpi`` in -1..2.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

from .. import lattice


class FactError(ValueError):
    pass


# ---------------------------------------------------------------------------
# objects

_OBJ_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_']*\^*$")


def norm_obj(text: str) -> str:
    text = text.strip()
    if not _OBJ_RE.match(text):
        raise FactError(f"bad object name {text!r}")
    base = text.rstrip("^")
    hats = (len(text) - len(base)) % 2
    return base + "^" * hats


def hat(x: str) -> str:
    return norm_obj(x + "^")


# ---------------------------------------------------------------------------
# categories

_ATOM_RE = re.compile(r"^(C\d\d|Aleq\d|Api\d|A\dpi\d|W[01]|A1h|Horiz|AX)$")
_CIJ_NAMES = {str(c) for c in lattice.ALL_CIJ}
_NAMED = {lattice.generators(n).generators: n for n in lattice.THEOREM_NAMES}


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def norm_cat(text: str) -> str:
    """Canonical text of a category term; intersections are sorted."""
    text = text.replace(" ", "")
    parts = _split_top(text, "&")
    if len(parts) > 1:
        atoms = set()
        for p in parts:
            atoms.update(_split_top(norm_cat(p), "&"))
        atoms.discard("AX")
        if not atoms:
            return "AX"
        return "&".join(sorted(atoms))
    if text.startswith("Hat(") and text.endswith(")"):
        return f"Hat({norm_cat(text[4:-1])})"
    if text.startswith("<"):
        try:
            e = lattice.generators(text)
        except lattice.LatticeError as exc:
            raise FactError(str(exc)) from None
        return _NAMED.get(e.generators, e.label())
    if _ATOM_RE.match(text):
        if text.startswith("C") and text not in _CIJ_NAMES:
            raise FactError(f"no category {text}")
        return text
    try:
        e = lattice.generators(text)
    except lattice.LatticeError:
        raise FactError(f"unknown category term {text!r}") from None
    if e.name is None:
        raise FactError(f"unknown category term {text!r}")
    return e.name


def components(cat: str) -> list[str]:
    return _split_top(cat, "&")


def is_closure(cat: str) -> bool:
    """Named extension-closure expressions (T_nj, F_i, <...>)."""
    if "&" in cat or cat.startswith("Hat("):
        return False
    return cat.startswith("<") or bool(re.match(r"^(T\d\d|F\d)$", cat))


def closure_gens(cat: str) -> frozenset[str]:
    if cat in _CIJ_NAMES:
        return frozenset({cat})
    return frozenset(str(g) for g in lattice.generators(cat).generators)


# ---------------------------------------------------------------------------
# intervals

INF = math.inf


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __and__(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def within(self, other: "Interval") -> bool:
        return self.empty or (other.lo <= self.lo and self.hi <= other.hi)

    def contains(self, v: int) -> bool:
        return self.lo <= v <= self.hi

    def neg(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def values(self) -> range:
        return range(int(self.lo), int(self.hi) + 1)

    def __str__(self) -> str:
        if self.lo == self.hi:
            return str(int(self.lo))
        lo = "" if self.lo == -INF else str(int(self.lo))
        hi = "" if self.hi == INF else str(int(self.hi))
        return f"{lo}..{hi}"

    @classmethod
    def parse(cls, text: str) -> "Interval":
        text = text.strip()
        m = re.match(r"^(-?\d*)\.\.(-?\d*)$", text)
        if m:
            lo = int(m[1]) if m[1] else -INF
            hi = int(m[2]) if m[2] else INF
            return cls(lo, hi)
        if re.match(r"^-?\d+$", text):
            return cls(int(text), int(text))
        raise FactError(f"bad interval {text!r}")


FULL = Interval(-INF, INF)
DEFAULT_RANGE = {"Dim": Interval(-1, 3), "Dpi": Interval(-1, 2), "Codim": Interval(0, 3)}


# ---------------------------------------------------------------------------
# facts

@dataclass(frozen=True)
class Fact:
    kind: str
    args: tuple

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(str(a) for a in self.args)})"

    # interval facts: key identifies the quantity, last arg is the interval
    @property
    def is_interval(self) -> bool:
        return self.kind in ("Dim", "Dpi", "Codim", "Ch")

    @property
    def key(self) -> tuple:
        if self.is_interval:
            return (self.kind,) + self.args[:-1]
        return (self.kind,) + self.args

    @property
    def interval(self) -> Interval:
        return self.args[-1]

    def objects(self) -> list[str]:
        return [a for a, t in zip(self.args, _SIGS[self.kind]) if t == "o"]


FALSE = Fact("False", ())

# argument signatures: o=object, c=category, i=interval, n=int
_SIGS = {
    "Mem": "oc", "Sub": "cc", "Eq": "cc", "TC": "cc", "Serre": "c",
    "SES": "ooo", "Quot": "oo", "Zero": "o", "HomZero": "co", "QuotClosed": "cc",
    "Dim": "oi", "Dpi": "oi", "Codim": "oi", "Ch": "onni", "False": "",
}

_FACT_RE = re.compile(r"^([A-Za-z]+)\((.*)\)$")


def parse_fact(text: str) -> Fact:
    text = str(text).strip()
    if text in ("False", "False()"):
        return FALSE
    m = _FACT_RE.match(text)
    if not m:
        raise FactError(f"malformed fact {text!r}")
    kind, body = m[1], m[2]
    if kind not in _SIGS:
        raise FactError(f"unknown fact kind {kind!r}")
    raw = [a.strip() for a in _split_top(body, ",")] if body.strip() else []
    sig = _SIGS[kind]
    if kind == "TC" and len(raw) == 1:
        raw.append("AX")
    if len(raw) != len(sig):
        raise FactError(f"{kind} takes {len(sig)} arguments, got {len(raw)} in {text!r}")
    args = []
    for a, t in zip(raw, sig):
        if t == "o":
            args.append(norm_obj(a))
        elif t == "c":
            args.append(norm_cat(a))
        elif t == "i":
            args.append(Interval.parse(a))
        else:
            args.append(int(a))
    if kind == "Ch" and not (args[1] in (0, 1) and args[2] in (0, 1, 2)):
        raise FactError(f"Chern entry out of range in {text!r}")
    return Fact(kind, tuple(args))


def F(text: Union[str, Fact]) -> Fact:
    return text if isinstance(text, Fact) else parse_fact(text)


def fact_text(f: Fact) -> str:
    if f.kind == "TC" and f.args[1] == "AX":
        return f"TC({f.args[0]})"
    return str(f)


def rename(f: Fact, mapping: dict[str, str]) -> Fact:
    """Substitute object names (hats are preserved)."""
    if not mapping:
        return f
    sig = _SIGS[f.kind]
    args = []
    for a, t in zip(f.args, sig):
        if t == "o":
            base = a.rstrip("^")
            args.append(norm_obj(mapping.get(base, base) + a[len(base):]))
        else:
            args.append(a)
    return Fact(f.kind, tuple(args))


def default_interval(key: tuple) -> Interval:
    return DEFAULT_RANGE.get(key[0], FULL)


def object_base(x: str) -> str:
    return x.rstrip("^")


def maybe(text: Optional[str]) -> Optional[Fact]:
    return None if text is None else F(text)
