"""Replay of hand-written proof scripts against the rule catalog.

A script is a YAML document::

    lemma: Jade
    goal: [TC(T10), Eq(Api0&W0, T10)]
    steps:
      - {by: TC3, form: tc, get: [TC(W0)]}
      - case: Dim(E2)
        branches: {"..1": [...], "2": [...]}
        join: [Mem(E2, F3)]
      - assume: member          # or: quotient
        obj: x                  # quotient: [e, q]
        of: Api0&W0
        show: Mem(x, T10)
        steps: [...]

Schema scripts replace ``goal`` by a ``schema`` block with variables,
integer parameters, premises and conclusions; the steps are replayed once
per parameter assignment.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional

import yaml

from .context import Context
from .facts import FALSE, Fact, FactError, Interval, fact_text, object_base, parse_fact, rename
from .rules import BASE_RULES, Rule, RuleError, StepEnv


class ScriptError(ValueError):
    pass


# ---------------------------------------------------------------------------
# templates

_PARAM_RE = re.compile(r"\{([^{}]+)\}")
_EXPR_RE = re.compile(r"^\s*(-?\d+|[a-z])\s*(?:([+-])\s*(\d+|[a-z]))?\s*$")


def _eval_param(expr: str, params: dict[str, int]) -> int:
    m = _EXPR_RE.match(expr)
    if not m:
        raise ScriptError(f"bad parameter expression {{{expr}}}")

    def val(tok):
        if tok.lstrip("-").isdigit():
            return int(tok)
        if tok not in params:
            raise ScriptError(f"unbound parameter {tok!r}")
        return params[tok]
    out = val(m[1])
    if m[2]:
        out = out + val(m[3]) if m[2] == "+" else out - val(m[3])
    return out


def substitute(text: str, params: dict[str, int]) -> str:
    return _PARAM_RE.sub(lambda m: str(_eval_param(m[1], params)), str(text))


def _subst_tree(node, params):
    if not params:
        return node
    if isinstance(node, str):
        return substitute(node, params)
    if isinstance(node, list):
        return [_subst_tree(n, params) for n in node]
    if isinstance(node, dict):
        return {substitute(k, params) if isinstance(k, str) else k: _subst_tree(v, params)
                for k, v in node.items()}
    return node


# ---------------------------------------------------------------------------
# schema rules (parametrised lemmas usable as rules)

@dataclass(frozen=True)
class Schema:
    id: str
    vars: tuple[str, ...]
    params: tuple[tuple[str, tuple[int, ...]], ...]
    premises: tuple[str, ...]
    conclusions: tuple[str, ...]
    admitted: bool
    source: str
    script: Optional[str]

    def param_space(self) -> list[dict[str, int]]:
        if not self.params:
            return [{}]
        names = [p for p, _ in self.params]
        return [dict(zip(names, vals))
                for vals in itertools.product(*(v for _, v in self.params))]

    def instantiate(self, bind: dict[str, str], params: dict[str, int]):
        missing = set(self.vars) - set(bind)
        if missing:
            raise RuleError(f"schema {self.id} needs bindings for {sorted(missing)}")
        if {p for p, _ in self.params} != set(params):
            raise RuleError(f"schema {self.id} needs parameters {[p for p, _ in self.params]}")
        for p, allowed in self.params:
            if params[p] not in allowed:
                raise RuleError(f"parameter {p}={params[p]} outside {list(allowed)}")
        prem = [rename(parse_fact(substitute(t, params)), bind) for t in self.premises]
        concl = [rename(parse_fact(substitute(t, params)), bind) for t in self.conclusions]
        return prem, concl


GABRIEL = Schema(
    id="GABRIEL", vars=("A", "Q", "Q0", "Q1"), params=(),
    premises=("Mem(A, W1)", "Quot(A, Q)", "SES(Q0, Q, Q1)", "Mem(Q0, W0)", "Mem(Q1, W1)"),
    conclusions=("Quot(A^, Q1^)",),
    admitted=True, source="lemma Gabriel (stated without proof)", script=None)


# ---------------------------------------------------------------------------
# scripts

@dataclass
class Script:
    lemma: str
    title: str
    goal: list[str]
    steps: list
    schema: Optional[Schema] = None
    admitted: bool = False

    @property
    def uses(self) -> list[str]:
        """Lemmas and derived schemas cited anywhere in the script, in order."""
        out: list[str] = []

        def walk(steps):
            for s in steps or []:
                if "by" in s:
                    name = s.get("lemma") if s["by"] == "LEMMA" else s["by"]
                    if name and name not in out:
                        out.append(name)
                for b in (s.get("branches") or {}).values():
                    walk(b)
                walk(s.get("steps"))
        walk(self.steps)
        return out


def load_script(text: str, origin: str = "<string>") -> Script:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScriptError(f"{origin}: not valid YAML: {exc}") from None
    if not isinstance(doc, dict) or "lemma" not in doc:
        raise ScriptError(f"{origin}: a script needs a 'lemma' field")
    schema = None
    if "schema" in doc:
        s = doc["schema"]
        schema = Schema(
            id=str(s.get("rule", doc["lemma"])), vars=tuple(s.get("vars", [])),
            params=tuple((k, tuple(v)) for k, v in (s.get("params") or {}).items()),
            premises=tuple(s.get("premises", [])), conclusions=tuple(s.get("conclusions", [])),
            admitted=False, source=str(doc.get("title", "")), script=str(doc["lemma"]))
    raw_goal, steps = doc.get("goal", []), doc.get("steps") or []
    if not isinstance(raw_goal, list):
        raise ScriptError(f"{origin}: 'goal' must be a list of facts")
    if not isinstance(steps, list):
        raise ScriptError(f"{origin}: 'steps' must be a list")
    goal = [str(g) for g in raw_goal]
    if schema is None and not goal:
        raise ScriptError(f"{origin}: script {doc['lemma']} has no goal")
    return Script(str(doc["lemma"]), str(doc.get("title", "")), goal, steps, schema)


@lru_cache(maxsize=None)
def _packaged_texts() -> tuple[tuple[str, str], ...]:
    root = resources.files("torsionkit.engine") / "scripts"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            out.append((entry.name, entry.read_text(encoding="utf-8")))
    return tuple(out)


# the order in which the lemmas are stated; used to break ties in scheduling
LEMMA_ORDER = (
    "W01transform", "Daniel", "C00isTC", "Ac_0isTC", "C00inAcpi0", "basic1", "C11reformulation",
    "C12reformulation", "C00C20isTC", "Eddie", "Jade", "Lucas", "Sarah", "Max", "Tyler", "Jamie",
    "Zuly", "C31note", "Gaby", "T20isAleq1", "Erik", "Manuel", "Esteban", "Jam", "Veronica",
    "Joshua", "Lin", "last", "Theorem",
)


def load_catalog() -> dict[str, Script]:
    scripts = {}
    for name, text in _packaged_texts():
        s = load_script(text, name)
        if s.lemma in scripts:
            raise ScriptError(f"duplicate script for {s.lemma}")
        scripts[s.lemma] = s
    return scripts


def schedule(scripts: dict[str, Script]) -> list[str]:
    """Topological order of the citation graph, ties broken by statement order."""
    rank = {n: i for i, n in enumerate(LEMMA_ORDER)}
    deps = citation_graph(scripts)
    done: list[str] = []
    remaining = set(scripts)
    while remaining:
        ready = sorted((n for n in remaining if all(d in done for d in deps[n])),
                       key=lambda n: (rank.get(n, len(rank)), n))
        if not ready:
            raise ScriptError(f"citation cycle among {sorted(remaining)}")
        done.append(ready[0])
        remaining.discard(ready[0])
    return done


def citation_graph(scripts: dict[str, Script]) -> dict[str, list[str]]:
    """lemma -> lemmas it cites (derived schema rules resolve to their scripts)."""
    by_rule = {s.schema.id: n for n, s in scripts.items() if s.schema is not None}
    out = {}
    for n, s in sorted(scripts.items()):
        deps = [by_rule.get(u, u) for u in s.uses]
        out[n] = list(dict.fromkeys(d for d in deps if d in scripts and d != n))
    return out


# ---------------------------------------------------------------------------
# replay

@dataclass
class ReplayResult:
    lemma: str
    valid: bool
    step: Optional[str] = None
    reason: Optional[str] = None
    trace: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "Valid" if self.valid else f"Invalid at step {self.step}: {self.reason}"

    def line(self) -> str:
        return f"{self.lemma}: {self.verdict}"


class _Fail(Exception):
    def __init__(self, path: str, reason: str):
        super().__init__(reason)
        self.path = path
        self.reason = reason


def _facts(items, where: str) -> list[Fact]:
    try:
        return [parse_fact(t) for t in (items or [])]
    except FactError as exc:
        raise _Fail(where, str(exc)) from None


class Kernel:
    def __init__(self, disabled: Iterable[str] = (), admitted: Iterable[Schema] = (GABRIEL,)):
        self.rules: dict[str, Rule] = {r.id: r for r in BASE_RULES}
        self.schemas: dict[str, Schema] = {s.id: s for s in admitted}
        self.disabled = set(disabled)
        self.proved: dict[str, list[Fact]] = {}
        # schema ids that exist somewhere but may not be available yet
        self.pending_schemas: set[str] = {GABRIEL.id}

    # -- public ------------------------------------------------------------

    def replay(self, script: Script) -> ReplayResult:
        trace: list[str] = []
        try:
            if script.schema is not None:
                self._replay_schema(script, trace)
            else:
                ctx = Context()
                goals = _facts(script.goal, "goal")
                self._run(script.steps, ctx, "", trace, {})
                for g in goals:
                    if not ctx.entails(g):
                        raise _Fail("end", f"goal not established: {fact_text(g)}")
                self.proved[script.lemma] = goals
        except _Fail as f:
            trace.append(f"{f.path}: FAIL {f.reason}")
            return ReplayResult(script.lemma, False, f.path, f.reason, trace)
        return ReplayResult(script.lemma, True, trace=trace)

    def replay_all(self, scripts: dict[str, Script]) -> list[ReplayResult]:
        self.pending_schemas |= {s.schema.id for s in scripts.values() if s.schema is not None}
        return [self.replay(scripts[n]) for n in schedule(scripts)]

    def lemma_goals(self, name: str) -> Optional[list[Fact]]:
        return self.proved.get(name)

    # -- internals ---------------------------------------------------------

    def _replay_schema(self, script: Script, trace: list[str]) -> None:
        sch = script.schema
        for params in sch.param_space():
            tag = ",".join(f"{k}={v}" for k, v in params.items())
            ctx = Context()
            bind = {v: v for v in sch.vars}
            prem, concl = sch.instantiate(bind, params)
            ctx.objects.update(sch.vars)
            ctx.add_all(prem)
            steps = _subst_tree(script.steps, params)
            self._run(steps, ctx, f"[{tag}]" if tag else "", trace, params)
            for c in concl:
                if not ctx.entails(c):
                    raise _Fail(f"[{tag}]end", f"conclusion not established: {fact_text(c)}")
        self.schemas[sch.id] = sch
        self.proved[script.lemma] = []

    def _run(self, steps, ctx: Context, prefix: str, trace: list[str], params) -> None:
        if not isinstance(steps or [], list):
            raise _Fail(prefix.rstrip(".") or "1", "malformed step list")
        for n, step in enumerate(steps or [], 1):
            path = f"{prefix}{n}"
            if ctx.closed:
                trace.append(f"{path}: (branch already closed)")
                continue
            if not isinstance(step, dict):
                raise _Fail(path, "malformed step")
            if "case" in step:
                self._case(step, ctx, path, trace, params)
            elif "assume" in step:
                self._assume(step, ctx, path, trace, params)
            elif "by" in step:
                self._apply(step, ctx, path, trace)
            else:
                raise _Fail(path, "step needs 'by', 'case' or 'assume'")

    def _apply(self, step: dict, ctx: Context, path: str, trace: list[str]) -> None:
        rid = str(step["by"])
        form = str(step.get("form", ""))
        prem = _facts(step.get("with"), path)
        concl = _facts(step.get("get"), path)
        if rid in self.disabled:
            raise _Fail(path, f"rule {rid} removed")
        for p in prem:
            if not ctx.entails(p):
                raise _Fail(path, f"premise not available: {fact_text(p)}")
        env = StepEnv(ctx, lambda x: not ctx.knows_object(x), self.lemma_goals)
        if rid in self.rules:
            rule = self.rules[rid]
            if rule.forms != ("",) and form not in rule.forms:
                raise _Fail(path, f"rule {rid} has no form {form!r}")
            try:
                rule.check(prem, concl, form, step, env)
            except RuleError as exc:
                raise _Fail(path, f"{rid}: {exc}") from None
        elif rid in self.schemas or rid in self.pending_schemas:
            self._apply_schema(rid, step, prem, concl, ctx, path)
        else:
            raise _Fail(path, f"unknown rule {rid}")
        label = rid + (f"[{form}]" if form else "") + (f"<{step['lemma']}>" if "lemma" in step else "")
        trace.append(f"{path}: {label} {', '.join(map(fact_text, prem))} => "
                     f"{', '.join(map(fact_text, concl))}")
        ctx.add_all(concl)

    def _apply_schema(self, rid, step, prem, concl, ctx, path) -> None:
        sch = self.schemas.get(rid)
        if sch is None:
            raise _Fail(path, f"forward reference: schema {rid} is not proved")
        bind = {str(k): str(v) for k, v in (step.get("bind") or {}).items()}
        params = {str(k): int(v) for k, v in (step.get("params") or {}).items()}
        try:
            need, gives = sch.instantiate(bind, params)
        except (RuleError, FactError) as exc:
            raise _Fail(path, f"{rid}: {exc}") from None
        for p in need:
            if not self._in_prem(p, prem):
                raise _Fail(path, f"{rid}: premise {fact_text(p)} not cited")
        for c in concl:
            if c not in gives:
                raise _Fail(path, f"{rid}: not a conclusion of the schema: {fact_text(c)}")

    @staticmethod
    def _in_prem(p: Fact, prem: list[Fact]) -> bool:
        c = Context()
        c.add_all(prem)
        return c.entails(p)

    def _case(self, step: dict, ctx: Context, path: str, trace: list[str], params) -> None:
        try:
            probe = parse_fact(f"{str(step['case'])[:-1]}, 0)")
        except FactError as exc:
            raise _Fail(path, f"bad case attribute: {exc}") from None
        if not probe.is_interval:
            raise _Fail(path, "case splits are over dim, dpi, codim or Chern entries")
        key = probe.key
        known = ctx.interval(key)
        branches = step.get("branches") or {}
        ivs = []
        for label in branches:
            try:
                ivs.append(Interval.parse(str(label)))
            except FactError as exc:
                raise _Fail(path, str(exc)) from None
        if not _covers(ivs, known):
            raise _Fail(path, f"branches {list(map(str, ivs))} do not cover {known}")
        join = _facts(step.get("join"), path)
        trace.append(f"{path}: case {step['case']} over {known}")
        for (label, body), iv in zip(branches.items(), ivs):
            bctx = ctx.copy()
            bctx.add(Fact(key[0], key[1:] + (iv,)))
            bpath = f"{path}[{label}]."
            self._run(body, bctx, bpath, trace, params)
            for j in join:
                if not bctx.entails(j):
                    raise _Fail(f"{path}[{label}]", f"branch does not establish {fact_text(j)}")
        ctx.add_all(join)

    def _assume(self, step: dict, ctx: Context, path: str, trace: list[str], params) -> None:
        kind = step["assume"]
        bctx = ctx.copy()
        try:
            of = parse_fact(f"Sub({step['of']}, AX)").args[0]
            show = parse_fact(str(step["show"]))
        except (KeyError, FactError) as exc:
            raise _Fail(path, f"bad assume block: {exc}") from None
        if kind == "member":
            x = str(step["obj"])
            names = [x]
            start = [Fact("Mem", (x, of))]
            if show.kind != "Mem" or show.args[0] != x:
                raise _Fail(path, "member block must show a membership of its object")
            result = Fact("Sub", (of, show.args[1]))
        elif kind == "quotient":
            names = [str(o) for o in step["obj"]]
            if len(names) != 2:
                raise _Fail(path, "quotient block introduces two objects")
            e, q = names
            start = [Fact("Mem", (e, of)), Fact("Quot", (e, q))]
            if show.kind != "Mem" or show.args[0] != q:
                raise _Fail(path, "quotient block must show a membership of the quotient")
            result = Fact("QuotClosed", (of, show.args[1]))
        else:
            raise _Fail(path, f"unknown assume kind {kind!r}")
        for n in names:
            if ctx.knows_object(n):
                raise _Fail(path, f"object {n} is not fresh")
        bctx.objects.update(object_base(n) for n in names)
        bctx.add_all(start)
        trace.append(f"{path}: assume {kind} {', '.join(map(fact_text, start))}")
        self._run(step.get("steps"), bctx, f"{path}.", trace, params)
        if not bctx.entails(show):
            raise _Fail(path, f"assumption block does not show {fact_text(show)}")
        trace.append(f"{path}: => {fact_text(result)}")
        ctx.add(result)


def _covers(ivs: list[Interval], target: Interval) -> bool:
    pos = target.lo
    for iv in sorted(ivs, key=lambda i: i.lo):
        if iv.lo > pos:
            break
        if iv.hi >= target.hi:
            return True
        pos = max(pos, iv.hi + 1)
    return pos > target.hi


# ---------------------------------------------------------------------------
# catalog level operations

def replay_catalog(disabled: Iterable[str] = ()) -> list[ReplayResult]:
    return Kernel(disabled).replay_all(load_catalog())


def rule_catalog() -> list[Rule]:
    """Primitive rules plus the schema rules (admitted or derived by a script)."""
    out = list(BASE_RULES)
    out.append(Rule("GABRIEL", "surjection between transforms of WIT1 parts", True,
                    GABRIEL.source, ("",), None, None))
    for s in load_catalog().values():
        if s.schema is not None:
            out.append(Rule(s.schema.id, s.title, False, "derived", ("",), s.lemma, None))
    return out


def rules_used(scripts: dict[str, Script]) -> dict[str, set[str]]:
    """rule id -> scripts citing it directly."""
    out: dict[str, set[str]] = {}

    def walk(name, steps):
        for s in steps or []:
            if "by" in s:
                out.setdefault(str(s["by"]), set()).add(name)
            for b in (s.get("branches") or {}).values():
                walk(name, b)
            walk(name, s.get("steps"))
    for n, s in scripts.items():
        walk(n, s.steps)
    return out


@dataclass(frozen=True)
class MutationRow:
    rule: str
    direct: tuple[str, ...]       # Invalid even with every cited lemma taken as proved
    broken: tuple[str, ...]       # Invalid when the whole catalog is replayed in order

    def line(self) -> str:
        return (f"{self.rule}: broken={len(self.broken)} direct={len(self.direct)}"
                f" [{', '.join(self.direct)}]")


def mutation_report(rule_ids: Optional[Iterable[str]] = None) -> list[MutationRow]:
    """Replay the catalog once per removed rule."""
    scripts = load_catalog()
    order = schedule(scripts)
    clean = Kernel()
    clean.replay_all(scripts)
    ids = list(rule_ids) if rule_ids is not None else [r.id for r in rule_catalog()]
    rows = []
    for rid in ids:
        results = Kernel({rid}).replay_all(scripts)
        broken = tuple(sorted(r.lemma for r in results if not r.valid))
        direct = []
        for name in order:
            k = Kernel({rid})
            k.pending_schemas |= clean.pending_schemas
            k.proved = dict(clean.proved)
            k.schemas = {i: sc for i, sc in clean.schemas.items() if i != rid}
            if not k.replay(scripts[name]).valid:
                direct.append(name)
        rows.append(MutationRow(rid, tuple(sorted(direct)), broken))
    return rows
