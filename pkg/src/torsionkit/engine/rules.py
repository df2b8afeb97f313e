"""Inference rules.  Each checker sees only the cited premises and the claimed
conclusions; the kernel has already confirmed the premises are available."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..chern import transform_map
from .context import Context
from .facts import (FALSE, INF, Fact, Interval, closure_gens, components, default_interval, hat,
                    is_closure, norm_cat, parse_fact)


class RuleError(Exception):
    pass


@dataclass(frozen=True)
class Rule:
    id: str
    summary: str
    admitted: bool
    source: str                         # property or lemma the rule encodes
    forms: tuple[str, ...] = ("",)
    script: Optional[str] = None        # proof script for derived rules
    check: Optional[Callable] = field(default=None, compare=False, repr=False)
    decorative: bool = False            # kept for completeness; no script needs it


@dataclass
class StepEnv:
    """What a checker may consult besides its premises."""
    ctx: Context
    fresh_ok: Callable[[str], bool]
    lemma_goals: Callable[[str], Optional[list[Fact]]]


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise RuleError(msg)


def _of(prem, kind):
    return [p for p in prem if p.kind == kind]


def _one(prem, kind, what=""):
    found = _of(prem, kind)
    _need(bool(found), f"missing premise {kind}{what}")
    return found


def _mem_cats(prem, x) -> set[str]:
    out = set()
    for p in _of(prem, "Mem"):
        if p.args[0] == x:
            out.update(components(p.args[1]))
    return out


def _has_mem(prem, x, cat) -> bool:
    return all(c in _mem_cats(prem, x) for c in components(cat))


def _iv(prem, key) -> Interval:
    out = default_interval(key)
    for p in prem:
        if p.is_interval and p.key == key:
            out = out & p.interval
    return out


def _all_concl(concl, ok: Callable[[Fact], bool], msg: str) -> None:
    _need(bool(concl), "no conclusion")
    for c in concl:
        _need(ok(c), f"{msg}: {c}")


def _wit_index(prem, x) -> Optional[int]:
    cats = _mem_cats(prem, x)
    if "W0" in cats:
        return 0
    if "W1" in cats:
        return 1
    return None


# ---------------------------------------------------------------------------
# definitions of the categories

def unfold(cat: str, x: str, mode: str) -> Optional[list[Fact]]:
    """Facts equivalent to ``x`` in ``cat``.  ``elim`` weakens exact sizes to upper bounds
    so that the zero object (dimension -1) satisfies them."""
    xh = hat(x)

    def dim(o, d):
        return f"Dim({o}, {d})" if mode == "intro" else f"Dim({o}, ..{d})"

    m = re.match(r"^(Aleq|Api)(\d)$", cat)
    if m:
        kind = "Dim" if m[1] == "Aleq" else "Dpi"
        return [parse_fact(f"{kind}({x}, ..{m[2]})")]
    m = re.match(r"^A(\d)pi(\d)$", cat)
    if m:
        d, e = m[1], m[2]
        if mode == "intro":
            return [parse_fact(f"Dim({x}, {d})"), parse_fact(f"Dpi({x}, {e})")]
        return [parse_fact(f"Dim({x}, ..{d})"), parse_fact(f"Dpi({x}, ..{e})")]
    table = {
        "C00": [f"Mem({x}, Aleq0)"],
        "C10": [f"Mem({x}, Api0)", f"Mem({x}, W0)", f"HomZero(C00, {x})"],
        "C11": [f"Mem({x}, Api0)", f"Mem({x}, W1)", f"Dim({xh}, ..0)"],
        "C12": [f"Mem({x}, Api0)", f"Mem({x}, W1)", dim(xh, 1), f"HomZero(C11, {x})"],
        "C20": [f"Mem({x}, A1h)"],
        "C30": [f"Mem({x}, A2pi1)", f"Mem({x}, W0)"],
        "C31": [f"Mem({x}, W1)", f"Mem({xh}, C20)", dim(x, 2)],
        "C32": [f"Mem({x}, A2pi1)", f"Mem({x}, W1)", dim(xh, 2)],
        "C40": [f"Mem({x}, A2pi2)", f"Mem({x}, W0)", dim(xh, 3)],
        "C50": [f"Mem({x}, A3pi2)", f"Mem({x}, W0)"],
        "C51": [f"Mem({x}, A3pi2)", f"Mem({x}, W1)", dim(xh, 2)],
        "C52": [f"Mem({x}, A3pi2)", f"Mem({x}, W1)", dim(xh, 3)],
    }
    if cat in table:
        return [parse_fact(t) for t in table[cat]]
    if mode == "elim":
        if cat == "A1h":
            return [parse_fact(f"Dim({x}, ..1)")]
        if cat == "Horiz":
            return [parse_fact(f"Dim({x}, ..1)")]
    return None


def _elim_closure(cat: str, x: str, depth: int = 4) -> Context:
    """Everything the definitions say about a member of ``cat``."""
    ctx = Context()
    todo = [Fact("Mem", (x, c)) for c in components(cat)]
    seen = set()
    while todo:
        f = todo.pop()
        if f in seen:
            continue
        seen.add(f)
        ctx.add(f)
        if f.kind == "Mem" and len(seen) < 64:
            for c in components(f.args[1]):
                body = unfold(c, f.args[0], "elim")
                if body:
                    todo.extend(body)
    return ctx


def check_def(prem, concl, form, step, env):
    if form == "intro":
        _need(len(concl) == 1 and concl[0].kind == "Mem", "intro concludes one membership")
        x, cat = concl[0].args
        ctx = Context()
        ctx.add_all(prem)
        for c in components(cat):
            if c == "AX":
                continue
            body = unfold(c, x, "intro")
            _need(body is not None, f"{c} has no introduction form")
            for b in body:
                _need(ctx.entails(b), f"premises do not give {b}")
        return
    if form == "elim":
        mems = _one(prem, "Mem")
        for c in concl:
            ok = False
            for m in mems:
                for comp in components(m.args[1]):
                    body = unfold(comp, m.args[0], "elim") or []
                    ctx = Context()
                    ctx.add_all(body)
                    if ctx.entails(c):
                        ok = True
            _need(ok, f"not part of the definition: {c}")
        return
    if form == "sub":
        for c in concl:
            _need(c.kind == "Sub", "sub form concludes inclusions")
            a, b = c.args
            ctx = _elim_closure(a, "x_")
            for comp in components(b):
                if comp == "AX":
                    continue
                body = unfold(comp, "x_", "intro")
                _need(body is not None and all(ctx.entails(f) for f in body)
                      or ctx.entails(Fact("Mem", ("x_", comp))),
                      f"definitions do not give {c}")
        return
    if form == "eq":
        for c in concl:
            _need(c.kind == "Eq", "eq form concludes equalities")
            a, b = c.args
            for u, v in ((a, b), (b, a)):
                ok = False
                for mode in ("intro", "elim"):
                    body = unfold(u, "x_", mode)
                    ok = body == [Fact("Mem", ("x_", v))] and unfold(u, "x_", "elim") == body
                    if not ok:
                        break
                if ok:
                    return
            raise RuleError(f"{a} is not defined as {b}")
    raise RuleError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# dimension rules

def _size_pairs(dim: Interval, dpi: Interval):
    for d in range(-1, 4):
        for e in range(-1, 3):
            if not (dim.contains(d) and dpi.contains(e)):
                continue
            if (d == -1) != (e == -1):
                continue
            if d >= 0 and not (e <= d <= e + 1):
                continue
            yield d, e


def check_d0(prem, concl, form, step, env):
    def ok(c):
        if c.kind == "Codim":
            x = c.args[0]
            dim = _iv(prem, ("Dim", x))
            return dim.lo >= 0 and Interval(3 - dim.hi, 3 - dim.lo).within(c.interval)
        if c.kind == "Dim":
            x = c.args[0]
            cod = _iv(prem, ("Codim", x))
            return Interval(3 - cod.hi, 3 - cod.lo).within(c.interval)
        return False
    _all_concl(concl, ok, "codimension does not follow")


def _check_bound_rule(prem, concl, form, kind, serre_cats, env):
    if form == "serre":
        _all_concl(concl, lambda c: c.kind == "Serre" and re.match(serre_cats, c.args[0]) is not None,
                   "not a Serre category of this rule")
        return
    if form == "quot":
        q = _one(prem, "Quot")

        def ok(c):
            return c.kind == kind and any(
                _iv(prem, (kind, p.args[0])).within(Interval(-INF, c.interval.hi))
                and c.args[0] == p.args[1] and c.interval.lo <= -1 for p in q)
        _all_concl(concl, ok, "bound does not pass to the quotient")
        return
    if form == "ses":
        ses = _one(prem, "SES")

        def ok(c):
            for s in ses:
                a, x, b = s.args
                if c.args[0] in (a, b) and c.kind == kind and c.interval.lo <= -1:
                    if _iv(prem, (kind, x)).hi <= c.interval.hi:
                        return True
            return False
        _all_concl(concl, ok, "bound does not pass to sub or quotient")
        return
    if form == "max":
        ses = _one(prem, "SES")

        def ok(c):
            for s in ses:
                a, x, b = s.args
                if c.args[0] == x and c.kind == kind:
                    ia, ib = _iv(prem, (kind, a)), _iv(prem, (kind, b))
                    if Interval(max(ia.lo, ib.lo), max(ia.hi, ib.hi)).within(c.interval):
                        return True
            return False
        _all_concl(concl, ok, "not the maximum of the outer terms")
        return
    raise RuleError(f"unknown form {form!r}")


def check_d1(prem, concl, form, step, env):
    _check_bound_rule(prem, concl, form, "Dim", r"^Aleq[0-3]$", env)


def check_d3(prem, concl, form, step, env):
    _check_bound_rule(prem, concl, form, "Dpi", r"^Api[0-2]$", env)


def check_d2(prem, concl, form, step, env):
    if form == "sub":
        def ok(c):
            if c.kind != "Sub":
                return False
            a, b = c.args
            ma, mb = re.match(r"^Api(\d)$", a), re.match(r"^Aleq(\d)$", b)
            if ma and mb:
                return int(mb[1]) >= int(ma[1]) + 1
            ma, mb = re.match(r"^Aleq(\d)$", a), re.match(r"^Api(\d)$", b)
            return bool(ma and mb) and int(mb[1]) >= int(ma[1])
        _all_concl(concl, ok, "not a support inclusion")
        return

    def ok(c):
        if c.kind not in ("Dim", "Dpi"):
            return False
        x = c.args[0]
        pairs = list(_size_pairs(_iv(prem, ("Dim", x)), _iv(prem, ("Dpi", x))))
        idx = 0 if c.kind == "Dim" else 1
        return all(c.interval.contains(p[idx]) for p in pairs)
    _all_concl(concl, ok, "not forced by dim(pi(supp)) <= dim <= dim(pi(supp)) + 1")


# ---------------------------------------------------------------------------
# supports

def check_z1(prem, concl, form, step, env):
    mems = [p for p in _of(prem, "Mem") if "Aleq1" in components(p.args[1])
            or any(re.match(r"^Aleq0$", c) for c in components(p.args[1]))]
    _need(bool(mems), "Z1 decomposes an object of dimension at most 1")
    x = mems[0].args[0]
    ses = [c for c in concl if c.kind == "SES" and c.args[1] == x]
    _need(len(ses) == 1, "Z1 produces one sequence")
    h, _, v = ses[0].args
    _need(env.fresh_ok(h) and env.fresh_ok(v) and h != v, "decomposition objects must be fresh")
    allowed = {ses[0], Fact("Mem", (h, "Horiz")), Fact("Mem", (v, "Api0")), Fact("Quot", (x, v)),
               Fact("Mem", (h, "Aleq1")), Fact("Mem", (v, "Aleq1"))}
    _all_concl(concl, lambda c: c in allowed, "not produced by restriction to components")


def check_z2(prem, concl, form, step, env):
    if form == "split":
        def ok(c):
            x = c.args[0]
            if c.kind != "Mem" or not _has_mem(prem, x, "Horiz"):
                return False
            dim = _iv(prem, ("Dim", x))
            if c.args[1] == "C00":
                return dim.hi <= 0
            if c.args[1] in ("A1h", "C20"):
                return dim.lo >= 1
            return False
        _all_concl(concl, ok, "horizontal split does not apply")
        return
    if form == "quot":
        def ok(c):
            if c.kind != "Mem" or c.args[1] not in ("A1h", "C20"):
                return False
            y = c.args[0]
            return _iv(prem, ("Dim", y)).lo >= 1 and any(
                q.args[1] == y and (_has_mem(prem, q.args[0], "A1h") or _has_mem(prem, q.args[0], "C20"))
                for q in _of(prem, "Quot"))
        _all_concl(concl, ok, "curve components of a quotient stay horizontal")
        return
    raise RuleError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# the transform

def check_a2(prem, concl, form, step, env):
    if form == "wit":
        def ok(c):
            if c.kind != "Mem" or c.args[1] not in ("W0", "W1"):
                return False
            x = hat(c.args[0])
            i = _wit_index(prem, x)
            return i is not None and c.args[1] == f"W{1 - i}"
        _all_concl(concl, ok, "transform of a WIT object is not of the opposite type")
        return
    if form == "hom":
        def ok(c):
            if c.kind != "HomZero":
                return False
            k2, y = c.args
            x = hat(y)
            i = _wit_index(prem, x)
            if i is None:
                return False
            for h in _of(prem, "HomZero"):
                k, hx = h.args
                if hx != x:
                    continue
                if Fact("Sub", (k, f"W{i}")) not in prem and f"W{i}" not in components(k):
                    continue
                if k2 == norm_cat(f"Hat({k})&W{1 - i}"):
                    return True
            return False
        _all_concl(concl, ok, "hom vanishing does not transport")
        return
    raise RuleError(f"unknown form {form!r}")


def check_a3(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Dpi":
            return False
        y = c.args[0]
        x = hat(y)
        if _wit_index(prem, x) is None and _wit_index(prem, y) is None:
            return False
        return _iv(prem, ("Dpi", x)).within(c.interval)
    _all_concl(concl, ok, "dim(pi(supp)) is not transported")


def check_a4(prem, concl, form, step, env):
    def ok(c):
        for s in _of(prem, "SES"):
            a, x, b = s.args
            for i in (0, 1):
                w = f"W{i}"
                if _has_mem(prem, a, w) and _has_mem(prem, b, w):
                    if c == Fact("SES", (hat(a), hat(x), hat(b))) or c == Fact("Mem", (x, w)):
                        return True
        return False
    _all_concl(concl, ok, "sequence of WIT objects does not transform")


# ---------------------------------------------------------------------------
# torsion structure

def check_tc3(prem, concl, form, step, env):
    if form == "tc":
        _all_concl(concl, lambda c: c == Fact("TC", ("W0", "AX")), "TC3 gives TC(W0)")
        return
    if form == "split":
        ses = [c for c in concl if c.kind == "SES"]
        _need(len(ses) == 1, "split produces one sequence")
        a0, x, a1 = ses[0].args
        _need(env.ctx.knows_object(x), f"unknown object {x}")
        _need(env.fresh_ok(a0) and env.fresh_ok(a1) and a0 != a1, "split objects must be fresh")
        allowed = {ses[0], Fact("Mem", (a0, "W0")), Fact("Mem", (a1, "W1")), Fact("Quot", (x, a1))}
        _all_concl(concl, lambda c: c in allowed, "not part of the torsion-pair sequence")
        return
    if form == "free":
        def ok(c):
            return c.kind == "Mem" and c.args[1] == "W1" and \
                Fact("HomZero", ("W0", c.args[0])) in prem
        _all_concl(concl, ok, "needs Hom(W0, x) = 0")
        return
    if form == "ext":
        def ok(c):
            if c.kind != "Mem" or c.args[1] not in ("W0", "W1"):
                return False
            return any(s.args[1] == c.args[0] and _has_mem(prem, s.args[0], c.args[1])
                       and _has_mem(prem, s.args[2], c.args[1]) for s in _of(prem, "SES"))
        _all_concl(concl, ok, "not an extension of WIT objects of one type")
        return
    raise RuleError(f"unknown form {form!r}")


def _axiom(expected: str):
    fact = parse_fact(expected)

    def check(prem, concl, form, step, env):
        _all_concl(concl, lambda c: c == fact, f"only {expected}")
    return check


def _ext_closed(prem, k: str) -> bool:
    if is_closure(k):
        return True
    if Fact("Serre", (k,)) in prem or Fact("TC", (k, "AX")) in prem:
        return True
    return k in ("W0", "W1") and Fact("TC", ("W0", "AX")) in prem


def check_ext(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Mem":
            return False
        x, k = c.args
        if not _ext_closed(prem, k):
            # a torsion class inside a Serre ambient is extension closed as well
            amb = [t.args[1] for t in _of(prem, "TC") if t.args[0] == k]
            if not any(Fact("Serre", (a,)) in prem for a in amb):
                return False
        return any(s.args[1] == x and _has_mem(prem, s.args[0], k) and _has_mem(prem, s.args[2], k)
                   for s in _of(prem, "SES"))
    _all_concl(concl, ok, "not an extension inside an extension-closed class")


def check_extmin(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Sub" or not is_closure(c.args[0]):
            return False
        t, k = c.args
        if not _ext_closed(prem, k):
            return False
        covers = [s.args[0] for s in _of(prem, "Sub") if s.args[1] == k]
        return all(any(g == cv or is_closure(cv) and g in closure_gens(cv) and
                       closure_gens(cv) <= closure_gens(t) for cv in covers)
                   for g in closure_gens(t))
    _all_concl(concl, ok, "generators not all inside an extension-closed class")


def check_gen(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Sub":
            return False
        a, b = c.args
        if not is_closure(b):
            return False
        if is_closure(a):
            return closure_gens(a) <= closure_gens(b)
        return a in closure_gens(b)
    _all_concl(concl, ok, "not a generator inclusion")


def check_pol(prem, concl, form, step, env):
    def ok(c):
        return c.kind == "TC" and c.args[1] == "AX" and Fact("Serre", (c.args[0],)) in prem
    _all_concl(concl, ok, "needs a Serre subcategory of the noetherian ambient")


def check_tcq(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Mem":
            return False
        y, k = c.args
        for t in _of(prem, "TC"):
            if t.args[0] != k:
                continue
            amb = t.args[1]
            if amb != "AX" and Fact("Serre", (amb,)) not in prem:
                continue
            if any(q.args[1] == y and _has_mem(prem, q.args[0], k) for q in _of(prem, "Quot")):
                return True
        return False
    _all_concl(concl, ok, "not a quotient of a member of a torsion class")


def check_tp(prem, concl, form, step, env):
    tcs = _one(prem, "TC")
    ses = [c for c in concl if c.kind == "SES"]
    _need(len(ses) == 1, "torsion-pair decomposition produces one sequence")
    t, x, f = ses[0].args
    _need(env.fresh_ok(t) and env.fresh_ok(f) and t != f, "decomposition objects must be fresh")
    for tc in tcs:
        k, amb = tc.args
        if amb != "AX" and not (_has_mem(prem, x, amb) and Fact("Serre", (amb,)) in prem):
            continue
        allowed = {ses[0], Fact("Mem", (t, k)), Fact("HomZero", (k, f)), Fact("Quot", (x, f))}
        if amb != "AX":
            allowed |= {Fact("Mem", (t, amb)), Fact("Mem", (f, amb))}
        if all(c in allowed for c in concl):
            return
    raise RuleError("not a torsion-pair decomposition of a member of the ambient")


def check_serre(prem, concl, form, step, env):
    def ok(c):
        if c == Fact("Serre", ("AX",)):
            return True
        if c.kind == "Serre":
            parts = components(c.args[0])
            return len(parts) > 1 and all(Fact("Serre", (p,)) in prem for p in parts)
        if c.kind != "Mem":
            return False
        y, k = c.args
        if Fact("Serre", (k,)) not in prem:
            return False
        for s in _of(prem, "SES"):
            if y in (s.args[0], s.args[2]) and _has_mem(prem, s.args[1], k):
                return True
        return any(q.args[1] == y and _has_mem(prem, q.args[0], k) for q in _of(prem, "Quot"))
    _all_concl(concl, ok, "not a subobject or quotient inside a Serre subcategory")


def check_meet(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "TC":
            return False
        k, amb = c.args
        parts = components(k)
        return len(parts) > 1 and all(Fact("TC", (p, amb)) in prem for p in parts)
    _all_concl(concl, ok, "not an intersection of torsion classes")


def check_restrict(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "TC" or c.args[1] == "AX":
            return False
        k, s = c.args
        return (Fact("TC", (k, "AX")) in prem and Fact("Serre", (s,)) in prem
                and Fact("Sub", (k, s)) in prem)
    _all_concl(concl, ok, "restriction needs TC(K), Serre(S) and K inside S")


def check_sub(prem, concl, form, step, env):
    subs = _of(prem, "Sub")
    if form == "mem":
        def ok(c):
            if c.kind != "Mem":
                return False
            x, b = c.args
            return any(s.args[1] == b and _has_mem(prem, x, s.args[0]) for s in subs)
        _all_concl(concl, ok, "no inclusion carries the membership")
        return
    if form == "trans":
        def ok(c):
            a, b = c.args
            return c.kind == "Sub" and any(
                s1.args[0] == a and s2.args[1] == b and s1.args[1] == s2.args[0]
                for s1 in subs for s2 in subs)
        _all_concl(concl, ok, "no chain of inclusions")
        return
    if form == "meet":
        def ok(c):
            a, b = c.args
            return c.kind == "Sub" and all(
                Fact("Sub", (a, p)) in prem or p in components(a) for p in components(b))
        _all_concl(concl, ok, "not included in every component")
        return
    if form == "mono":
        def ok(c):
            a, b = c.args
            for s in subs:
                x, y = s.args
                extra = set(components(a)) - set(components(x))
                if set(components(x)) <= set(components(a)) and \
                        set(components(b)) <= set(components(y)) | extra:
                    return True
            return False
        _all_concl(concl, ok, "not an inclusion intersected on both sides")
        return
    raise RuleError(f"unknown form {form!r}")


def check_eq(prem, concl, form, step, env):
    eqs = _of(prem, "Eq")
    if form == "intro":
        _all_concl(concl, lambda c: c.kind == "Eq" and Fact("Sub", c.args) in prem
                   and Fact("Sub", c.args[::-1]) in prem, "needs both inclusions")
        return
    if form == "elim":
        def ok(c):
            return c.kind == "Sub" and any(e.args in (c.args, c.args[::-1]) for e in eqs)
        _all_concl(concl, ok, "not a side of an equality")
        return
    if form == "tc":
        def ok(c):
            if c.kind != "TC":
                return False
            k, amb = c.args
            return any(Fact("TC", (o, amb)) in prem for e in eqs
                       for o in e.args if k in e.args and o != k)
        _all_concl(concl, ok, "equality does not carry the torsion class")
        return
    if form == "sym":
        _all_concl(concl, lambda c: c.kind == "Eq" and Fact("Eq", c.args[::-1]) in prem, "no equality")
        return
    raise RuleError(f"unknown form {form!r}")


def check_hom(prem, concl, form, step, env):
    homs = _of(prem, "HomZero")
    if form == "self":
        def ok(c):
            return c.kind == "Zero" and any(
                h.args[1] == c.args[0] and _has_mem(prem, c.args[0], h.args[0]) for h in homs)
        _all_concl(concl, ok, "no Hom(K, x) = 0 with x in K")
        return
    if form == "sub":
        def ok(c):
            return c.kind == "HomZero" and any(
                h.args[1] == c.args[1] and Fact("Sub", (c.args[0], h.args[0])) in prem
                for h in homs)
        _all_concl(concl, ok, "not a subclass of a Hom-vanishing class")
        return
    if form == "mono":
        def ok(c):
            if c.kind != "Zero":
                return False
            a = c.args[0]
            return any(s.args[0] == a and h.args[1] == s.args[1] and _has_mem(prem, a, h.args[0])
                       for s in _of(prem, "SES") for h in homs)
        _all_concl(concl, ok, "subobject not in a class mapping trivially to the object")
        return
    raise RuleError(f"unknown form {form!r}")


def check_zero(prem, concl, form, step, env):
    zeros = {p.args[0] for p in _of(prem, "Zero")}
    if form == "mem":
        _all_concl(concl, lambda c: c.kind == "Mem" and c.args[0] in zeros, "object not zero")
        return
    if form == "hat":
        _all_concl(concl, lambda c: c.kind == "Zero" and hat(c.args[0]) in zeros, "object not zero")
        return
    if form == "ses":
        def ok(c):
            if c.kind != "Mem":
                return False
            x, k = c.args
            for s in _of(prem, "SES"):
                a, m, b = s.args
                if m != x:
                    continue
                if a in zeros and _has_mem(prem, b, k):
                    return True
                if b in zeros and _has_mem(prem, a, k):
                    return True
            return False
        _all_concl(concl, ok, "middle term is not isomorphic to a member")
        return
    raise RuleError(f"unknown form {form!r}")


def check_quot(prem, concl, form, step, env):
    if form == "ses":
        _all_concl(concl, lambda c: c.kind == "Quot" and any(
            s.args[1:] == c.args for s in _of(prem, "SES")), "not the quotient of a sequence")
        return
    if form == "trans":
        qs = _of(prem, "Quot")
        _all_concl(concl, lambda c: c.kind == "Quot" and any(
            q1.args[0] == c.args[0] and q2.args[1] == c.args[1] and q1.args[1] == q2.args[0]
            for q1 in qs for q2 in qs), "no chain of surjections")
        return
    raise RuleError(f"unknown form {form!r}")


def check_absurd(prem, concl, form, step, env):
    _need(concl == [FALSE], "ABSURD concludes False")
    keys = {p.key for p in prem if p.is_interval}
    for k in keys:
        if _iv(prem, k).empty:
            return
    raise RuleError("premises are not contradictory")


def check_hat(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Mem":
            return False
        x, k = c.args
        if form == "intro":
            m = re.match(r"^Hat\((.*)\)$", k)
            return bool(m) and _has_mem(prem, hat(x), m[1])
        if form == "elim":
            return any(p.args[0] == hat(x) and f"Hat({k})" in components(p.args[1])
                       for p in _of(prem, "Mem"))
        return False
    _all_concl(concl, ok, "not a transform membership")


# ---------------------------------------------------------------------------
# Chern matrices on the product threefold

def check_ch1p(prem, concl, form, step, env):
    if form == "zero":
        def ok(c):
            if c.kind != "Ch" or c.interval != Interval(0, 0):
                return False
            x, i, j = c.args[:3]
            return _iv(prem, ("Codim", x)).lo > i + j
        _all_concl(concl, ok, "entry is not below the codimension")
        return
    if form == "lead":
        def ok(c):
            if c.kind != "Codim":
                return False
            x = c.args[0]
            for p in _of(prem, "Ch"):
                if p.args[0] == x and not p.interval.contains(0):
                    if Interval(-INF, p.args[1] + p.args[2]).within(Interval(-INF, c.interval.hi)) \
                            and c.interval.lo <= 0:
                        return True
            return False
        _all_concl(concl, ok, "no nonzero entry bounds the codimension")
        return
    raise RuleError(f"unknown form {form!r}")


def check_ch2p(prem, concl, form, step, env):
    if form == "dpi":
        def ok(c):
            if c.kind != "Dpi":
                return False
            x = c.args[0]
            h = c.interval.hi
            return c.interval.lo <= -1 and all(
                _iv(prem, ("Ch", x, 1, j)) == Interval(0, 0) for j in range(3) if 2 - j > h)
        _all_concl(concl, ok, "second-row entries do not vanish")
        return
    if form == "full":
        def ok(c):
            return c.kind == "Dpi" and _iv(prem, ("Dim", c.args[0])).lo >= 3 and \
                c.interval.contains(2)
        _all_concl(concl, ok, "needs a 3-dimensional object")
        return
    raise RuleError(f"unknown form {form!r}")


def _leading(c: int) -> list[tuple[int, int]]:
    return [(i, j) for i in (0, 1) for j in range(3) if i + j == c]


def check_ch3p(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Ch":
            return False
        x, i, j = c.args[:3]
        cod = _iv(prem, ("Codim", x))
        if cod.lo != cod.hi or i + j != cod.lo:
            return False
        others = [p for p in _leading(int(cod.lo)) if p != (i, j)]
        total = sum(_iv(prem, ("Ch", x) + p).hi for p in others)
        return total < INF and Interval(1 - total, INF).within(c.interval)
    _all_concl(concl, ok, "leading entries do not force this bound")


def check_ch3p_plus(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Ch":
            return False
        x, i, j = c.args[:3]
        cod = _iv(prem, ("Codim", x))
        return cod.lo == cod.hi == i + j and Interval(0, INF).within(c.interval)
    _all_concl(concl, ok, "not a leading entry")


def check_a4p(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "Ch":
            return False
        y, r, col = c.args[:3]
        # forward: y is the transform of a WIT object; backward: y itself is WIT
        for x, forward in ((hat(y), True), (y, False)):
            i = _wit_index(prem, x)
            if i is None:
                continue
            tm = transform_map(i)
            if forward:
                sign, src = tm[(r, col)]
                iv = _iv(prem, ("Ch", x) + src)
            else:
                inv = {s: (sg, t) for t, (sg, s) in tm.items()}
                sign, tgt = inv[(r, col)]
                iv = _iv(prem, ("Ch", hat(y)) + tgt)
            iv = iv if sign > 0 else iv.neg()
            if iv.within(c.interval):
                return True
        return False
    _all_concl(concl, ok, "entry does not match the transform formula")


# ---------------------------------------------------------------------------
# lemmas

def check_bill(prem, concl, form, step, env):
    def ok(c):
        if c.kind != "TC" or c.args[1] != "AX" or not is_closure(c.args[0]):
            return False
        target = closure_gens(c.args[0])
        for q in _of(prem, "QuotClosed"):
            cl, k = q.args
            if k != c.args[0]:
                continue
            for t in _of(prem, "TC"):
                if t.args[1] != "AX" or not (is_closure(t.args[0]) or t.args[0] in target):
                    continue
                if closure_gens(t.args[0]) | closure_gens(cl) == target:
                    return True
        return False
    _all_concl(concl, ok, "needs TC(T) and quotient closure of C inside <T, C>")


def check_lemma(prem, concl, form, step, env):
    name = step.get("lemma")
    _need(bool(name), "LEMMA step names no lemma")
    goals = env.lemma_goals(name)
    if goals is None:
        raise RuleError(f"forward reference: lemma {name} is not proved")
    _all_concl(concl, lambda c: c in goals, f"not a conclusion of lemma {name}")


def _undecorated(prem, concl, form, step, env):
    raise RuleError("decorative rule has no checkable form")


def _r(id, summary, admitted, source, forms=("",), check=None, decorative=False):
    return Rule(id, summary, admitted, source, tuple(forms), None, check, decorative)


BASE_RULES: tuple[Rule, ...] = (
    _r("D0", "codim = 3 - dim for nonzero objects", True, "property D0", check=check_d0),
    _r("D1", "dim of an extension is the max; dims shrink to subquotients", True, "property D1",
       ("quot", "ses", "max", "serre"), check_d1),
    _r("D2", "dim(pi(supp E)) <= dim E <= dim(pi(supp E)) + 1", True, "property D2",
       ("", "sub"), check_d2),
    _r("D3", "dim(pi(supp)) of an extension is the max", True, "property D3",
       ("quot", "ses", "max", "serre"), check_d3),
    _r("Z1", "restriction to irreducible components", True, "property Z1", check=check_z1),
    _r("Z2", "1-dimensional components are vertical or horizontal", True, "property Z2",
       ("split", "quot"), check_z2),
    _r("A1", "transform cohomology sits in degrees 0 and 1", True, "property A1",
       check=_undecorated, decorative=True),
    _r("A2", "the two transforms compose to the shift", True, "property A2", ("wit", "hom"), check_a2),
    _r("A3", "dim(pi(supp)) is preserved by the transform", True, "property A3", check=check_a3),
    _r("A4", "sequences of WIT_i objects transform to sequences", True, "property A4",
       check=check_a4),
    _r("TC1", "A^{<=d} is a Serre subcategory", True, "property TC1",
       check=_undecorated, decorative=True),
    _r("TC2", "A(p)_{<=e} is a Serre subcategory", True, "property TC2",
       check=_undecorated, decorative=True),
    _r("TC3", "(W0, W1) is a torsion pair", True, "property TC3", ("tc", "split", "free", "ext"),
       check_tc3),
    _r("C0", "C00 lies in W0", True, "property C0", check=_axiom("Sub(C00, W0)")),
    _r("C1", "C20 lies in W0", True, "property C1", check=_axiom("Sub(C20, W0)")),
    _r("CH1p", "entries below the codimension vanish", True, "property CH1p", ("zero", "lead"),
       check_ch1p),
    _r("CH2p", "dim(pi(supp)) read off the second row", True, "property CH2p", ("dpi", "full"),
       check_ch2p),
    _r("CH3p", "leading antidiagonal sum is positive", True, "property CH3p", check=check_ch3p),
    _r("CH3p+", "leading antidiagonal entries are nonnegative", True,
       "design decision strengthening property CH3p", check=check_ch3p_plus),
    _r("A4p", "Chern matrix of the transform", True, "property A4p", check=check_a4p),
    _r("POL", "Serre subcategories of a noetherian category are torsion classes", True,
       "lemma Pol", check=check_pol),
    _r("BILL", "<T, C> is a torsion class if quotients of C stay inside", True,
       "lemma Bill (stated without proof)", check=check_bill),
    _r("RESTRICT", "a torsion class inside a Serre subcategory is a torsion class there", True,
       "formalization choice for restriction to an abelian subcategory", check=check_restrict),
    _r("DEF", "definitions of the categories", True, "definitions", ("intro", "elim", "sub", "eq"),
       check_def),
    _r("HAT", "membership of the transform", True, "definition of the transform",
       ("intro", "elim"), check_hat),
    _r("SUB", "inclusions", True, "logic", ("mem", "trans", "meet", "mono"), check_sub),
    _r("EQ", "equalities", True, "logic", ("intro", "elim", "tc", "sym"), check_eq),
    _r("GEN", "generators lie in extension closures", True, "definition of closures",
       check=check_gen),
    _r("EXT", "extension-closed classes absorb extensions", True, "definition of closures",
       check=check_ext),
    _r("EXTMIN", "the extension closure is the least extension-closed class", True,
       "definition of closures", check=check_extmin),
    _r("TCQ", "torsion classes are closed under quotients", True, "torsion pairs", check=check_tcq),
    _r("TP", "torsion-pair decomposition", True, "torsion pairs", check=check_tp),
    _r("SERRE", "Serre subcategories contain subquotients", True, "Serre subcategories",
       check=check_serre),
    _r("MEET", "intersections of torsion classes are torsion classes", True, "torsion pairs",
       check=check_meet),
    _r("HOM", "Hom vanishing", True, "logic", ("self", "sub", "mono"), check_hom),
    _r("ZERO", "the zero object lies in every class", True, "zero objects", ("mem", "ses", "hat"),
       check_zero),
    _r("QUOT", "surjections", True, "logic", ("ses", "trans"), check_quot),
    _r("ABSURD", "contradictory bounds close a branch", True, "logic", check=check_absurd),
    _r("LEMMA", "cite the goals of a proved lemma", True, "logic", check=check_lemma),
)
