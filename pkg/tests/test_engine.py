import dataclasses

import pytest

from torsionkit.engine import (BASE_RULES, Kernel, ScriptError, check_closure, citation_graph,
                               load_catalog, load_script, mutation_report, replay, rule_catalog,
                               schedule)
from torsionkit.engine.facts import FactError, Interval, norm_cat, norm_obj, parse_fact
from torsionkit.engine.kernel import _packaged_texts
from torsionkit.lattice import PROOF_SCRIPT, THEOREM_NAMES, generators

CATALOG = load_catalog()
NAMED = ("Daniel", "Jade", "Sarah", "Esteban", "Veronica", "last")


def bad(body: str):
    script = load_script("lemma: Bad\ntitle: t\n" + body)
    return Kernel().replay(script)


# -- facts ------------------------------------------------------------------

def test_object_normalisation():
    assert norm_obj("E^^") == "E"
    assert norm_obj("E^^^") == "E^"
    with pytest.raises(FactError):
        norm_obj("1E")


def test_category_normalisation():
    assert norm_cat("W0 & Api0") == "Api0&W0"
    assert norm_cat("Api0&AX") == "Api0"
    assert norm_cat("<C00,C10>") == "T10"
    assert norm_cat("<C20,C00>") == "<C00,C20>"
    with pytest.raises(FactError):
        norm_cat("C99")


def test_interval_parsing():
    assert Interval.parse("..1") == Interval(float("-inf"), 1)
    assert str(Interval.parse("2")) == "2"
    assert Interval(2, 1).within(Interval(5, 6))
    with pytest.raises(FactError):
        Interval.parse("1...2")


@pytest.mark.parametrize("text", ["TC(W0", "Foo(E)", "Mem(E)", "Ch(E, 2, 0, 1)"])
def test_bad_facts(text):
    with pytest.raises(FactError):
        parse_fact(text)


# -- catalog replay -----------------------------------------------------------

def test_full_replay_valid():
    results = replay("all")
    assert len(results) >= 26
    assert all(r.valid for r in results), [r.line() for r in results if not r.valid]
    assert {r.lemma for r in results} >= set(NAMED)


def test_replay_follows_schedule():
    order = [r.lemma for r in replay("all")]
    assert order == schedule(CATALOG)
    pos = {n: i for i, n in enumerate(order)}
    for name, cited in citation_graph(CATALOG).items():
        for c in cited:
            assert pos[c] < pos[name]


def test_every_theorem_class_has_a_valid_script():
    results = {r.lemma: r for r in replay("all")}
    for n in THEOREM_NAMES:
        assert results[PROOF_SCRIPT[n]].valid


def test_single_lemma_replay():
    (r,) = replay("Jade")
    assert r.valid and r.trace
    with pytest.raises(ScriptError):
        replay("NoSuchLemma")


def test_jade_needs_tc3():
    (r,) = replay("Jade", disabled=("TC3",))
    assert not r.valid
    assert r.step == "2" and "TC3" in r.reason
    # step 2 is the one making W0 a torsion class
    assert CATALOG["Jade"].steps[1]["get"] == ["TC(W0)"]


def test_gabriel_withheld_is_a_forward_reference():
    results = {r.lemma: r for r in Kernel(admitted=()).replay_all(CATALOG)}
    assert not results["Lucas"].valid
    assert "forward reference" in results["Lucas"].reason


def test_uncited_lemma_is_a_forward_reference():
    r = bad('goal: ["TC(T31)"]\nsteps:\n  - {by: LEMMA, lemma: Zuly, get: ["TC(T31)"]}\n')
    assert not r.valid and "forward reference" in r.reason


# -- the kernel rejects what it should ----------------------------------------

def test_overclaiming_step():
    r = bad('goal: ["TC(W1)"]\nsteps:\n  - {by: TC3, form: tc, get: ["TC(W0)", "TC(W1)"]}\n')
    assert not r.valid and r.step == "1"


def test_unknown_rule():
    r = bad('goal: ["TC(W0)"]\nsteps:\n  - {by: MAGIC, get: ["TC(W0)"]}\n')
    assert not r.valid and "unknown rule" in r.reason


def test_goal_not_reached():
    r = bad('goal: ["TC(Api0)"]\nsteps:\n  - {by: TC3, form: tc, get: ["TC(W0)"]}\n')
    assert not r.valid and r.step == "end"


def test_missing_premise():
    r = bad('goal: ["TC(Api0&W0)"]\nsteps:\n'
            '  - {by: MEET, with: ["TC(Api0)", "TC(W0)"], get: ["TC(Api0&W0)"]}\n')
    assert not r.valid and "premise not available" in r.reason


def test_absurd_needs_a_contradiction():
    r = bad('goal: ["TC(W0)"]\nsteps:\n  - assume: member\n    obj: E\n    of: W0\n'
            '    show: Mem(E, W1)\n    steps:\n'
            '      - {by: ABSURD, with: ["Mem(E, W0)"], get: ["False"]}\n')
    assert not r.valid and r.step == "1.1"


def test_malformed_scripts():
    with pytest.raises(ScriptError):
        load_script("lemma: X\n")
    with pytest.raises(ScriptError):
        load_script("lemma: X\ntitle: t\ngoal: [TC(W0)]\nsteps: 5\n")
    with pytest.raises(ScriptError):
        load_script(": : :")
    r = bad('goal: ["TC(W0)"]\nsteps:\n  - {by: TC3, form: tc, get: ["TC(W0"]}\n')
    assert not r.valid


@pytest.mark.parametrize("name", sorted(n for n, s in CATALOG.items() if s.schema is None))
def test_no_script_proves_false(name):
    s = CATALOG[name]
    k = Kernel()
    for n in schedule(CATALOG):
        if n == name:
            break
        k.replay(CATALOG[n])
    tampered = dataclasses.replace(s, goal=list(s.goal) + ["False"])
    assert k.replay(s).valid
    assert not k.replay(tampered).valid


def test_tightened_bound_is_rejected():
    text = dict(_packaged_texts())["02_Daniel.yaml"]
    assert 'get: ["Dpi(E, ..1)"]}\n          "2"' in text
    weaker = text.replace('{by: D2, with: ["Dim(E, ..1)"], get: ["Dpi(E, ..1)"]}',
                          '{by: D2, with: ["Dim(E, ..1)"], get: ["Dpi(E, ..0)"]}')
    assert weaker != text
    assert not Kernel().replay(load_script(weaker)).valid


def test_citation_graph_is_acyclic():
    graph = citation_graph(CATALOG)
    state: dict[str, int] = {}

    def visit(n):
        assert state.get(n) != 1, f"cycle through {n}"
        if state.get(n) == 2:
            return
        state[n] = 1
        for m in graph.get(n, []):
            visit(m)
        state[n] = 2
    for n in graph:
        visit(n)


# -- rules and mutations -------------------------------------------------------

def test_rule_catalog():
    rules = {r.id: r for r in rule_catalog()}
    assert len(rules) >= 22
    assert rules["GABRIEL"].admitted
    assert not rules["Eddie"].admitted and rules["Eddie"].script == "Eddie"
    assert len(BASE_RULES) == len({r.id for r in BASE_RULES})


def test_mutation_examples():
    rows = {r.rule: r for r in mutation_report(["A3", "CH2p", "A1"])}
    assert {"C11reformulation", "Sarah", "Manuel"} <= set(rows["A3"].broken)
    assert set(rows["CH2p"].direct) == {"Daniel", "Veronica"}
    assert rows["A1"].broken == ()


# -- closure checks ------------------------------------------------------------

def test_closure_examples():
    assert check_closure(generators("<C00,C20>")).ok
    assert check_closure(generators("T40")).ok
    v = check_closure(generators("<C32>"))
    assert not v.ok and "Inconclusive" in v.line()
