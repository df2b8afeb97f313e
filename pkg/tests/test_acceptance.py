"""One test per acceptance criterion; each prints a PASS/FAIL line with its timing."""
import time
from itertools import product

from conftest import ACCEPTANCE
from torsionkit import lattice
from torsionkit.cli import render_catalog, render_replay
from torsionkit.engine import load_catalog, mutation_report, replay
from torsionkit.engine.kernel import rules_used
from torsionkit.profiles import classify, enumerate_profiles
from torsionkit.verify import SearchConfig, run_suite, verify_lemma_daniel, verify_phi_shift, \
    verify_profile_closures

THEOREM_BULLETS = {
    "T00", "T10", "T11", "T12", "T20", "T30", "T31", "T32", "T40", "T50", "T51", "T52",
    "F2", "F3", "F4", "F5", "<C00,C20>",
}


def record(label: str, ok: bool, seconds: float, limit: float | None, detail: str) -> None:
    within = limit is None or seconds < limit
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"{detail}; {seconds:.2f}s{budget}"
    ACCEPTANCE.append((label, ok and within, line))
    print(f"{'PASS' if ok and within else 'FAIL'} {label}: {line}")
    assert ok, detail
    assert within, f"{label} took {seconds:.2f}s{budget}"


def test_ac1_theorem_count():
    t0 = time.perf_counter()
    text = render_catalog()
    names = {r["name"] for r in lattice.catalog()}
    ok = names == THEOREM_BULLETS and "torsion classes: 17" in text
    record("AC1 theorem count", ok, time.perf_counter() - t0, 1.0, f"{len(names)} classes listed")


def test_ac2_full_replay():
    t0 = time.perf_counter()
    results = replay("all")
    valid = {r.lemma for r in results if r.valid}
    must = {"Daniel", "Jade", "Sarah", "Esteban", "Veronica", "last"}
    ok = len(results) >= 26 and len(valid) == len(results) and must <= valid
    record("AC2 full replay", ok, time.perf_counter() - t0, 5.0,
           f"{len(valid)}/{len(results)} scripts Valid")


def test_ac3_rule_necessity():
    t0 = time.perf_counter()
    rows = {r.rule: r for r in mutation_report()}
    cited = set(rules_used(load_catalog()))
    idle = sorted(r for r in cited if not rows[r].broken)
    a3, tc3 = len(rows["A3"].broken), len(rows["TC3"].broken)
    ok = not idle and a3 >= 3 and tc3 >= 10
    record("AC3 rule necessity", ok, time.perf_counter() - t0, 120.0,
           f"{len(cited)} cited rules all break something (idle={idle}); A3 breaks {a3}, TC3 breaks {tc3}")


def test_ac4_chern_involution():
    t0 = time.perf_counter()
    rep = verify_phi_shift(SearchConfig("phi", bound=3, workers=1))
    ok = rep.instances == 117_649 and rep.ok
    record("AC4 Chern involution", ok, time.perf_counter() - t0, 1.0,
           f"{rep.instances} matrices, {len(rep.counterexamples)} counterexamples")


def test_ac5_numerical_daniel():
    t0 = time.perf_counter()
    strict = verify_lemma_daniel(SearchConfig("daniel", bound=5, workers=1))
    relaxed = verify_lemma_daniel(SearchConfig("daniel", bound=5, workers=1, strict_leading=False))
    ok = strict.ok and not relaxed.ok
    record("AC5 numerical Daniel", ok, time.perf_counter() - t0, 30.0,
           f"strict: {len(strict.counterexamples)} counterexamples, "
           f"relaxed: {len(relaxed.counterexamples)}")


def test_ac6_profile_closure():
    t0 = time.perf_counter()
    rep = verify_profile_closures()
    ok = rep.ok and rep.instances == len(enumerate_profiles()) * 17
    record("AC6 profile closure", ok, time.perf_counter() - t0, 10.0,
           f"{rep.instances} decisions, {len(rep.counterexamples)} failures")


def test_ac7_classification_disjointness():
    t0 = time.perf_counter()
    ps = enumerate_profiles()
    bad = [p for p in ps if len(classify(p)) > 1]
    record("AC7 classification disjointness", not bad, time.perf_counter() - t0, 1.0,
           f"{len(ps)} profiles, {len(bad)} violations")


def test_ac8_lattice_poset():
    t0 = time.perf_counter()
    ns = lattice.THEOREM_NAMES
    leq = {(a, b): lattice.leq(a, b) for a, b in product(ns, repeat=2)}
    refl = all(leq[a, a] for a in ns)
    trans = all(leq[a, c] for a, b, c in product(ns, repeat=3) if leq[a, b] and leq[b, c])
    anti = all(lattice.equivalent(a, b) for a, b in product(ns, repeat=2) if leq[a, b] and leq[b, a])
    t_chain = ("T00", "T10", "T11", "T12", "T20", "T30", "T31", "T32", "T40", "T50", "T51", "T52")
    f_chain = ("F2", "F3", "F4", "F5")
    chains = all(leq[a, b] for ch in (t_chain, f_chain) for a, b in zip(ch, ch[1:]))
    chains &= all(leq[f"F{i}", f"T{i}0"] for i in range(2, 6))
    ok = refl and trans and anti and chains
    record("AC8 lattice poset", ok, time.perf_counter() - t0, 1.0,
           f"reflexive={refl} transitive={trans} antisymmetric={anti} chains={chains}")


def test_ac9_determinism():
    t0 = time.perf_counter()
    same = render_replay(replay("all"), trace=True) == render_replay(replay("all"), trace=True)
    configs = [("phi", 3, True), ("daniel", 5, True), ("daniel", 3, False), ("closures", 0, True)]
    mismatched = []
    for suite, bound, strict in configs:
        outs = {run_suite(SearchConfig(suite, bound, w, strict)).to_json() for w in (1, 1, 4)}
        if len(outs) != 1:
            mismatched.append(suite)
    ok = same and not mismatched
    record("AC9 determinism", ok, time.perf_counter() - t0, None,
           f"replay identical={same}; suites differing across runs/workers: {mismatched or 'none'}")
