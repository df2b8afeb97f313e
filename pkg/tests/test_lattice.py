import json
from itertools import product

import pytest

from torsionkit import lattice
from torsionkit.lattice import (THEOREM_NAMES, LatticeError, equivalent, export_diagram,
                                generators, leq, lookup, parse_dot_edges, theorem_list)
from torsionkit.profiles import CategoryId

T_CHAIN = ("T00", "T10", "T11", "T12", "T20", "T30", "T31", "T32", "T40", "T50", "T51", "T52")
F_CHAIN = ("F2", "F3", "F4", "F5")


def names(expr):
    return {str(g) for g in expr.generators}


def test_generators_examples():
    assert names(generators("T31")) == {"C00", "C10", "C11", "C12", "C20", "C30", "C31"}
    assert names(generators("F3")) == {"C00", "C10", "C20", "C30"}
    assert names(generators("T00")) == {"C00"}
    assert names(generators("<C00,C20>")) == {"C00", "C20"}


@pytest.mark.parametrize("bad", ["T99", "F9", "X", "<C00,C99>"])
def test_unknown_names(bad):
    with pytest.raises(LatticeError):
        generators(bad)


def test_leq_examples():
    assert leq("T00", "T10")
    assert leq("T20", "T31")
    assert not leq("T52", "F5")


def test_aliases():
    assert lookup("T40") == (CategoryId.parse("Aleq2"),)
    assert lookup("F5") == (CategoryId.parse("W0"),)
    assert lookup("T30") is None


def test_theorem_list():
    ts = theorem_list()
    assert len(ts) == 17 == len(set(THEOREM_NAMES))
    assert "<C00,C20>" in [t.label() for t in ts]


def test_poset_laws():
    for a in THEOREM_NAMES:
        assert leq(a, a)
    for a, b, c in product(THEOREM_NAMES, repeat=3):
        if leq(a, b) and leq(b, c):
            assert leq(a, c)
    for a, b in product(THEOREM_NAMES, repeat=2):
        if leq(a, b) and leq(b, a):
            assert equivalent(a, b)


def test_chains():
    for chain in (T_CHAIN, F_CHAIN):
        for a, b in zip(chain, chain[1:]):
            assert leq(a, b) and not leq(b, a)
    for i in range(2, 6):
        assert leq(f"F{i}", f"T{i}0")


def test_diagram_export():
    dot = export_diagram("dot")
    js = json.loads(export_diagram("json"))
    assert len(js["nodes"]) == 12
    edges = {frozenset(e) for e in js["edges"]}
    assert frozenset({"C00", "C10"}) in edges and frozenset({"C50", "C51"}) in edges
    assert parse_dot_edges(dot) == edges
    assert export_diagram("dot") == dot
    with pytest.raises(LatticeError):
        export_diagram("svg")


def test_catalog_rows():
    rows = lattice.catalog()
    assert [r["name"] for r in rows] == list(THEOREM_NAMES)
    assert all(r["proof_script"] for r in rows)
