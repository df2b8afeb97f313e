"""Profile-level check that an extension closure is closed under quotients.

The abstract extension closure (hull) of a class is the fixpoint of the
extension transformer over its generator members.  A class passes when every
quotient candidate of every generator member lands in the hull.  Quotients
with mixed WIT are checked through their WIT0 and WIT1 parts, which are
extension factors; WIT1 parts of WIT1 objects inherit the bounds on the
transform that the surjection between transforms imposes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from ..lattice import TorsionClassExpr, generators
from ..profiles import (Horiz, ObjectProfile, Tri, Wit, _membership, enumerate_profiles,
                        extension_transformer, format_profile, profile_key, quotient_transformer)


@dataclass(frozen=True)
class ClosureVerdict:
    expr: str
    status: str                      # "Valid" or "Inconclusive"
    checked: int                     # quotient candidates examined
    hull_size: int
    reduced_by: Optional[str] = None
    blocking: Optional[ObjectProfile] = None
    blocking_parent: Optional[ObjectProfile] = None
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.status == "Valid"

    def line(self) -> str:
        s = f"{self.expr}: {self.status} (hull={self.hull_size}, quotients checked={self.checked}"
        if self.reduced_by:
            s += f", reduced by {self.reduced_by}"
        s += ")"
        if self.blocking is not None:
            s += f" blocking quotient [{format_profile(self.blocking)}]" \
                 f" of [{format_profile(self.blocking_parent)}]"
        return s


def _members(gens) -> frozenset[ObjectProfile]:
    return frozenset(p for p in enumerate_profiles()
                     if any(_membership(p, g) is Tri.YES for g in gens))


@lru_cache(maxsize=None)
def hull(gens: frozenset) -> frozenset[ObjectProfile]:
    """Fixpoint of the extension transformer over the generator members."""
    current = set(_members(gens))
    frontier = list(current)
    while frontier:
        new = set()
        snapshot = sorted(current, key=profile_key)
        for p in frontier:
            for q in snapshot:
                new |= extension_transformer(p, q)
                new |= extension_transformer(q, p)
        new -= current
        current |= new
        frontier = sorted(new, key=profile_key)
    return frozenset(current)


def _gabriel_ok(parent: ObjectProfile, q: ObjectProfile) -> bool:
    # a surjection parent^ -> q^ exists: hat support can only shrink
    if q.dim_hat > parent.dim_hat:
        return False
    if parent.dim_hat == 1 and q.dim_hat == 1 and parent.hat_horizontal in (Horiz.H, Horiz.V):
        return q.hat_horizontal is parent.hat_horizontal
    return True


def quotient_parts(p: ObjectProfile) -> list[ObjectProfile]:
    """Non-mixed profiles of quotients of ``p`` and of the WIT parts of mixed quotients."""
    out = []
    for q in quotient_transformer(p):
        if q.wit is Wit.MIXED:
            continue
        if p.wit is Wit.WIT1 and q.wit is Wit.WIT1 and not _gabriel_ok(p, q):
            continue
        out.append(q)
    return sorted(out, key=profile_key)


def _as_expr(expr) -> TorsionClassExpr:
    if isinstance(expr, TorsionClassExpr):
        return expr
    if isinstance(expr, (set, frozenset, list, tuple)):
        return TorsionClassExpr(None, frozenset(expr))
    return generators(expr)


def check_closure(expr, proven: Sequence = ()) -> ClosureVerdict:
    """Quotient and extension closure of ``expr`` over the profile space.

    ``proven`` lists classes already known to be torsion classes; the largest
    one inside ``expr`` exempts its own generators from the quotient check.
    """
    e = _as_expr(expr)
    gens = e.generators
    h = hull(gens)
    reducer = None
    for t in proven:
        t = _as_expr(t)
        if t.generators < gens and (reducer is None or len(t.generators) > len(reducer.generators)):
            reducer = t
    pending = gens - (reducer.generators if reducer else frozenset())
    checked = 0
    for p in sorted(_members(pending), key=profile_key):
        if not any(_membership(p, g) is Tri.YES for g in pending):
            continue
        for q in quotient_parts(p):
            checked += 1
            if q not in h:
                return ClosureVerdict(e.label(), "Inconclusive", checked, len(h),
                                      reducer.label() if reducer else None, q, p)
    # the hull must itself be extension closed (fixpoint re-check)
    for p1 in h:
        for p2 in h:
            if not extension_transformer(p1, p2) <= h:
                return ClosureVerdict(e.label(), "Inconclusive", checked, len(h),
                                      reducer.label() if reducer else None,
                                      notes=("hull not extension closed",))
    return ClosureVerdict(e.label(), "Valid", checked, len(h),
                          reducer.label() if reducer else None)


def verify_all(names: Sequence[str]) -> list[ClosureVerdict]:
    """Check classes in order, each reduction using the classes already validated."""
    done: list[TorsionClassExpr] = []
    out = []
    for n in names:
        v = check_closure(n, done)
        out.append(v)
        if v.ok:
            done.append(generators(n))
    return out
