"""Finite attribute model of coherent sheaves on the elliptic threefold.

An :class:`ObjectProfile` records what the proofs ever look at: support
dimension, dimension of the image in the base, WIT index, the dimension and
horizontality of the transform, and two Hom-vanishing flags.  Categories
``C_ij`` and the named subcategories are predicates on profiles.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Optional


class ProfileError(ValueError):
    pass


class Wit(str, enum.Enum):
    WIT0 = "WIT0"
    WIT1 = "WIT1"
    MIXED = "Mixed"


class Horiz(str, enum.Enum):
    H = "H"          # every 1-dimensional component meets fibers in finitely many points
    V = "V"          # every component lies in a fiber
    MIXED = "MixedHV"


class Tri(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __and__(self, other: "Tri") -> "Tri":
        if self is Tri.NO or other is Tri.NO:
            return Tri.NO
        if self is Tri.UNKNOWN or other is Tri.UNKNOWN:
            return Tri.UNKNOWN
        return Tri.YES

    @classmethod
    def of(cls, flag: Optional[bool]) -> "Tri":
        if flag is None:
            return cls.UNKNOWN
        return cls.YES if flag else cls.NO


@dataclass(frozen=True)
class ObjectProfile:
    dim: int
    dpi: int
    wit: Wit
    dim_hat: Optional[int] = None
    hat_horizontal: Optional[Horiz] = None
    horizontal: Optional[Horiz] = None
    hom_c00_zero: Optional[bool] = None
    hom_c11_zero: Optional[bool] = None

    def __str__(self) -> str:
        return format_profile(self)


# ---------------------------------------------------------------------------
# invariants

def _horiz_dpi_ok(h: Optional[Horiz], dpi: int) -> bool:
    if h is None:
        return True
    return dpi == (0 if h is Horiz.V else 1)


def violations(p: ObjectProfile, *, product: bool = True) -> list[str]:
    """Reasons ``p`` cannot be the profile of a nonzero sheaf (empty if consistent).

    ``product`` adds the consequences of the Chern-class properties of the
    product threefold (WIT_1 sheaves of dimension <= 2 have dpi <= 1, and the
    mirrored statement for transforms).
    """
    out = []
    if not (0 <= p.dim <= 3 and 0 <= p.dpi <= 2):
        out.append("dim/dpi out of range")
    if not (p.dpi <= p.dim <= p.dpi + 1):
        out.append("need dpi <= dim <= dpi + 1")
    if (p.dim_hat is None) != (p.wit is Wit.MIXED):
        out.append("dim_hat is present exactly for WIT0/WIT1 profiles")
    if p.dim_hat is not None and not (p.dpi <= p.dim_hat <= p.dpi + 1):
        out.append("need dpi <= dim_hat <= dpi + 1")
    if (p.horizontal is not None) != (p.dim == 1):
        out.append("horizontal is present exactly for dim 1")
    if (p.hat_horizontal is not None) != (p.dim_hat == 1):
        out.append("hat_horizontal is present exactly for dim_hat 1")
    if not _horiz_dpi_ok(p.horizontal, p.dpi):
        out.append("horizontal type disagrees with dpi")
    if not _horiz_dpi_ok(p.hat_horizontal, p.dpi):
        out.append("hat_horizontal type disagrees with dpi")
    if p.dim == 0:
        if p.wit is not Wit.WIT0:
            out.append("0-dimensional sheaves are WIT0")
        if p.hom_c00_zero is True:
            out.append("a nonzero 0-dimensional sheaf receives maps from points")
    if p.dim == 1 and p.horizontal is Horiz.H and p.wit is not Wit.WIT0:
        out.append("horizontal 1-dimensional sheaves are WIT0")
    if p.dim_hat == 0 and p.wit is not Wit.WIT1:
        out.append("transform of dimension 0 forces WIT1")
    if p.dim_hat == 1 and p.hat_horizontal is Horiz.H and p.wit is not Wit.WIT1:
        out.append("horizontal 1-dimensional transform forces WIT1")
    if p.dpi == 0 and p.wit is Wit.WIT1 and p.dim_hat == 0 and p.hom_c11_zero is True:
        out.append("a nonzero C11 object receives its identity map")
    if product:
        if p.wit is Wit.WIT1 and p.dim <= 2 and p.dpi > 1:
            out.append("WIT1 of dim <= 2 must have dpi <= 1")
        if p.wit is Wit.WIT0 and p.dim_hat is not None and p.dim_hat <= 2 and p.dpi > 1:
            out.append("WIT0 with transform of dim <= 2 must have dpi <= 1")
    return out


def is_consistent(p: ObjectProfile, *, product: bool = True) -> bool:
    return not violations(p, product=product)


def check(p: ObjectProfile) -> None:
    bad = violations(p)
    if bad:
        raise ProfileError("inconsistent profile: " + "; ".join(bad))


# ---------------------------------------------------------------------------
# categories

CIJ_INDEX = ((0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2),
             (4, 0), (5, 0), (5, 1), (5, 2))

_CAT_RE = re.compile(r"^(?:C(\d)(\d)|Aleq(\d)|Api(\d)|A(\d)pi(\d)|W([01])|A1h|AX|Empty)$")


@dataclass(frozen=True, order=True)
class CategoryId:
    kind: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        a = self.args
        return {
            "C": lambda: f"C{a[0]}{a[1]}" if a else "Empty",
            "Aleq": lambda: f"Aleq{a[0]}",
            "Api": lambda: f"Api{a[0]}",
            "AdPiE": lambda: f"A{a[0]}pi{a[1]}",
            "W": lambda: f"W{a[0]}",
            "A1h": lambda: "A1h",
            "AX": lambda: "AX",
        }[self.kind]()

    @classmethod
    def parse(cls, text: str) -> "CategoryId":
        m = _CAT_RE.match(text.strip())
        if not m:
            raise ProfileError(f"unknown category {text!r}")
        g = m.groups()
        if g[0] is not None:
            return cij(int(g[0]), int(g[1]))
        if g[2] is not None:
            return aleq(int(g[2]))
        if g[3] is not None:
            return api(int(g[3]))
        if g[4] is not None:
            return adpie(int(g[4]), int(g[5]))
        if g[6] is not None:
            return CategoryId("W", (int(g[6]),))
        return {"A1h": A1H, "AX": AX, "Empty": EMPTY}[text.strip()]

    __repr__ = __str__

    @property
    def is_cij(self) -> bool:
        return self.kind == "C" and bool(self.args)


EMPTY = CategoryId("C")
A1H = CategoryId("A1h")
AX = CategoryId("AX")
W0 = CategoryId("W", (0,))
W1 = CategoryId("W", (1,))


def cij(i: int, j: int) -> CategoryId:
    """``C_ij`` for an index pair of the collection; any other pair is the empty category."""
    return CategoryId("C", (i, j)) if (i, j) in CIJ_INDEX else EMPTY


def aleq(d: int) -> CategoryId:
    if not 0 <= d <= 3:
        raise ProfileError(f"Aleq{d}: d must be in 0..3")
    return CategoryId("Aleq", (d,))


def api(e: int) -> CategoryId:
    if not 0 <= e <= 2:
        raise ProfileError(f"Api{e}: e must be in 0..2")
    return CategoryId("Api", (e,))


def adpie(d: int, e: int) -> CategoryId:
    if not (0 <= e <= d <= 3):
        raise ProfileError(f"A{d}pi{e}: need 0 <= e <= d <= 3")
    return CategoryId("AdPiE", (d, e))


ALL_CIJ = tuple(cij(i, j) for i, j in CIJ_INDEX)


def _eq(value, target) -> Tri:
    if value is None:
        return Tri.UNKNOWN
    return Tri.YES if value == target else Tri.NO


def _b(cond: bool) -> Tri:
    return Tri.YES if cond else Tri.NO


def _cij_predicate(p: ObjectProfile, i: int, j: int) -> Tri:
    d, e, w = p.dim, p.dpi, p.wit
    W0_, W1_ = Wit.WIT0, Wit.WIT1
    table = {
        (0, 0): lambda: _b(d == 0),
        (1, 0): lambda: _b(e == 0 and w is W0_) & Tri.of(p.hom_c00_zero),
        (1, 1): lambda: _b(e == 0 and w is W1_) & _eq(p.dim_hat, 0),
        (1, 2): lambda: _b(e == 0 and w is W1_) & _eq(p.dim_hat, 1) & Tri.of(p.hom_c11_zero),
        (2, 0): lambda: _b(d == 1) & _eq(p.horizontal, Horiz.H),
        (3, 0): lambda: _b(d == 2 and e == 1 and w is W0_),
        (3, 1): lambda: _b(d == 2 and w is W1_) & _eq(p.dim_hat, 1) & _eq(p.hat_horizontal, Horiz.H),
        (3, 2): lambda: _b(d == 2 and e == 1 and w is W1_) & _eq(p.dim_hat, 2),
        (4, 0): lambda: _b(d == 2 and e == 2 and w is W0_) & _eq(p.dim_hat, 3),
        (5, 0): lambda: _b(d == 3 and e == 2 and w is W0_),
        (5, 1): lambda: _b(d == 3 and e == 2 and w is W1_) & _eq(p.dim_hat, 2),
        (5, 2): lambda: _b(d == 3 and e == 2 and w is W1_) & _eq(p.dim_hat, 3),
    }
    return table[(i, j)]()


def membership(p: ObjectProfile, c: CategoryId) -> Tri:
    check(p)
    return _membership(p, c)


def _membership(p: ObjectProfile, c: CategoryId) -> Tri:
    k, a = c.kind, c.args
    if k == "C":
        return _cij_predicate(p, *a) if a else Tri.NO
    if k == "Aleq":
        return _b(p.dim <= a[0])
    if k == "Api":
        return _b(p.dpi <= a[0])
    if k == "AdPiE":
        return _b(p.dim == a[0] and p.dpi == a[1])
    if k == "W":
        return _b(p.wit is (Wit.WIT0, Wit.WIT1)[a[0]])
    if k == "A1h":
        return _b(p.dim == 1 and p.horizontal is Horiz.H)
    if k == "AX":
        return Tri.YES
    raise ProfileError(f"unknown category {c}")


def classify(p: ObjectProfile) -> frozenset[CategoryId]:
    check(p)
    return frozenset(c for c in ALL_CIJ if _membership(p, c) is Tri.YES)


# ---------------------------------------------------------------------------
# transformers

def phi_profile(p: ObjectProfile) -> ObjectProfile:
    """Profile of the transform of a WIT0/WIT1 object.

    Hom flags become unknown unless a lemma forces them: transforms of C10
    objects have no maps from C11, transforms of C12 objects none from C00.
    """
    check(p)
    if p.wit is Wit.MIXED:
        raise ProfileError("transform undefined for mixed WIT")
    hom00 = hom11 = None
    if _cij_predicate(p, 1, 0) is Tri.YES:
        hom11 = True
    if _cij_predicate(p, 1, 2) is Tri.YES:
        hom00 = True
    q = ObjectProfile(
        dim=p.dim_hat, dpi=p.dpi,
        wit=Wit.WIT1 if p.wit is Wit.WIT0 else Wit.WIT0,
        dim_hat=p.dim,
        hat_horizontal=p.horizontal, horizontal=p.hat_horizontal,
        hom_c00_zero=hom00, hom_c11_zero=hom11,
    )
    if q.dim == 0:
        q = replace(q, hom_c00_zero=False)
    if q.dpi == 0 and q.wit is Wit.WIT1 and q.dim_hat == 0:
        q = replace(q, hom_c11_zero=False)
    return q


_DIMS = range(4)
_DPIS = range(3)
_DIM_HATS = (None, 0, 1, 2, 3)
_HORIZ = (None, Horiz.H, Horiz.V, Horiz.MIXED)
_FLAGS = (False, True)


@lru_cache(maxsize=None)
def enumerate_profiles(product: bool = True) -> frozenset[ObjectProfile]:
    """Every consistent profile with decided Hom flags."""
    out = set()
    for dim, dpi, wit, dh, hh, h, f0, f1 in itertools.product(
            _DIMS, _DPIS, Wit, _DIM_HATS, _HORIZ, _HORIZ, _FLAGS, _FLAGS):
        p = ObjectProfile(dim, dpi, wit, dh, hh, h, f0, f1)
        if is_consistent(p, product=product):
            out.add(p)
    return frozenset(out)


def _sorted(ps: Iterable[ObjectProfile]) -> list[ObjectProfile]:
    return sorted(ps, key=profile_key)


def profile_key(p: ObjectProfile) -> tuple:
    """Total order key (None sorts first)."""
    def k(v):
        if v is None:
            return (0, "")
        if isinstance(v, enum.Enum):
            return (1, v.value)
        return (1, v)
    return tuple(k(getattr(p, f)) for f in FIELDS)


FIELDS = ("dim", "dpi", "wit", "dim_hat", "hat_horizontal", "horizontal",
          "hom_c00_zero", "hom_c11_zero")


def _sub_horizontal(parent: ObjectProfile, q: ObjectProfile) -> bool:
    """Horizontality allowed for a subquotient ``q`` of ``parent`` (support containment)."""
    if parent.dim != 1 or q.dim != 1:
        return True
    if parent.horizontal is Horiz.MIXED:
        return True
    return q.horizontal is parent.horizontal


@lru_cache(maxsize=None)
def quotient_transformer(p: ObjectProfile) -> frozenset[ObjectProfile]:
    """Profiles a nonzero quotient of a ``p``-object may have.

    Supports shrink (dim, dpi do not grow), WIT0 passes to quotients, and
    1-dimensional components keep their type.  Hom flags are unconstrained.
    """
    check(p)
    out = set()
    for q in enumerate_profiles():
        if q.dim > p.dim or q.dpi > p.dpi:
            continue
        if p.wit is Wit.WIT0 and q.wit is not Wit.WIT0:
            continue
        if not _sub_horizontal(p, q):
            continue
        out.add(q)
    return frozenset(out)


def _combine_horizontal(parts: list[tuple[int, Optional[Horiz]]], dim: int) -> Optional[Horiz]:
    if dim != 1:
        return None
    labels = {h for d, h in parts if d == 1}
    if labels == {Horiz.H}:
        return Horiz.H
    if labels == {Horiz.V}:
        return Horiz.V
    return Horiz.MIXED


def _ext_flag(sub: Optional[bool], quot: Optional[bool]) -> tuple[Optional[bool], ...]:
    # Hom(C, -) is left exact: 0 -> Hom(C, sub) -> Hom(C, E) -> Hom(C, quot)
    if sub is False:
        return (False,)
    if sub is True and quot is True:
        return (True,)
    return (False, True)


def _ext_wits(w1: Wit, w2: Wit) -> tuple[Wit, ...]:
    if w1 is w2 and w1 is not Wit.MIXED:
        return (w1,)
    out = [Wit.MIXED]
    if w2 is Wit.WIT0:
        out.append(Wit.WIT0)   # WIT0 objects may contain WIT1 subobjects
    if w1 is Wit.WIT1:
        out.append(Wit.WIT1)   # WIT1 objects may have WIT0 quotients
    return tuple(out)


@lru_cache(maxsize=None)
def extension_transformer(p1: ObjectProfile, p2: ObjectProfile) -> frozenset[ObjectProfile]:
    """Profiles of an extension ``0 -> p1 -> E -> p2 -> 0``."""
    check(p1)
    check(p2)
    dim = max(p1.dim, p2.dim)
    dpi = max(p1.dpi, p2.dpi)
    horizontal = _combine_horizontal([(p1.dim, p1.horizontal), (p2.dim, p2.horizontal)], dim)
    out = set()
    for wit in _ext_wits(p1.wit, p2.wit):
        if wit is Wit.MIXED:
            hats = [(None, None)]
        elif p1.wit is wit and p2.wit is wit:
            # the transform is exact on W_i: 0 -> p1^ -> E^ -> p2^ -> 0
            dh = max(p1.dim_hat, p2.dim_hat)
            hats = [(dh, _combine_horizontal(
                [(p1.dim_hat, p1.hat_horizontal), (p2.dim_hat, p2.hat_horizontal)], dh))]
        else:
            hats = [(dh, hh) for dh in range(4) for hh in _HORIZ]
        for dh, hh in hats:
            for f0 in _ext_flag(p1.hom_c00_zero, p2.hom_c00_zero):
                for f1 in _ext_flag(p1.hom_c11_zero, p2.hom_c11_zero):
                    e = ObjectProfile(dim, dpi, wit, dh, hh, horizontal, f0, f1)
                    if is_consistent(e):
                        out.add(e)
    return frozenset(out)


# ---------------------------------------------------------------------------
# canonical profiles and text form

def _canon(dim, dpi, wit, dim_hat, hat=None, h=None, f0=True, f1=True):
    return ObjectProfile(dim, dpi, Wit(wit), dim_hat, hat and Horiz(hat), h and Horiz(h), f0, f1)


CANONICAL = {
    cij(0, 0): _canon(0, 0, "WIT0", 1, "V", None, False),
    cij(1, 0): _canon(1, 0, "WIT0", 1, "V", "V"),
    cij(1, 1): _canon(1, 0, "WIT1", 0, None, "V", True, False),
    cij(1, 2): _canon(1, 0, "WIT1", 1, "V", "V"),
    cij(2, 0): _canon(1, 1, "WIT0", 2, None, "H"),
    cij(3, 0): _canon(2, 1, "WIT0", 2),
    cij(3, 1): _canon(2, 1, "WIT1", 1, "H"),
    cij(3, 2): _canon(2, 1, "WIT1", 2),
    cij(4, 0): _canon(2, 2, "WIT0", 3),
    cij(5, 0): _canon(3, 2, "WIT0", 3),
    cij(5, 1): _canon(3, 2, "WIT1", 2),
    cij(5, 2): _canon(3, 2, "WIT1", 3),
}

_WIT_TXT = {Wit.WIT0: "0", Wit.WIT1: "1", Wit.MIXED: "mixed"}
_H_TXT = {None: "-", Horiz.H: "H", Horiz.V: "V", Horiz.MIXED: "HV"}
_F_TXT = {None: "?", True: "1", False: "0"}


def format_profile(p: ObjectProfile) -> str:
    return " ".join([
        f"dim={p.dim}", f"dpi={p.dpi}", f"wit={_WIT_TXT[p.wit]}",
        f"dim_hat={'-' if p.dim_hat is None else p.dim_hat}",
        f"hat_h={_H_TXT[p.hat_horizontal]}", f"h={_H_TXT[p.horizontal]}",
        f"hom00={_F_TXT[p.hom_c00_zero]}", f"hom11={_F_TXT[p.hom_c11_zero]}",
    ])


def parse_profile(text: str) -> ObjectProfile:
    """Parse ``dim=2 dpi=1 wit=1 dim_hat=2 ...``; omitted optional keys are Absent."""
    fields = {}
    for tok in text.split():
        if "=" not in tok:
            raise ProfileError(f"malformed profile token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    try:
        dim, dpi = int(fields.pop("dim")), int(fields.pop("dpi"))
        wit = {v: k for k, v in _WIT_TXT.items()}[fields.pop("wit").lower()]
        dh = fields.pop("dim_hat", "-")
        hh = {v: k for k, v in _H_TXT.items()}[fields.pop("hat_h", "-")]
        h = {v: k for k, v in _H_TXT.items()}[fields.pop("h", "-")]
        f0 = {v: k for k, v in _F_TXT.items()}[fields.pop("hom00", "?")]
        f1 = {v: k for k, v in _F_TXT.items()}[fields.pop("hom11", "?")]
        dim_hat = None if dh == "-" else int(dh)
    except (KeyError, ValueError) as exc:
        raise ProfileError(f"malformed profile {text!r}: {exc}") from None
    if fields:
        raise ProfileError(f"unknown profile keys: {sorted(fields)}")
    return ObjectProfile(dim, dpi, wit, dim_hat, hh, h, f0, f1)
