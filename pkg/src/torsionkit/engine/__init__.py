"""Rule catalog, proof-script replay and profile-level closure checks."""
from .closure import ClosureVerdict, check_closure, hull, verify_all
from .kernel import (GABRIEL, Kernel, MutationRow, ReplayResult, Schema, Script, ScriptError,
                     citation_graph, load_catalog, load_script, mutation_report, replay_catalog,
                     rule_catalog, schedule)
from .rules import BASE_RULES, Rule


def replay(target: "str | Script" = "all", disabled=()) -> list[ReplayResult]:
    """Replay one lemma (its citations are replayed first) or the whole catalog."""
    scripts = load_catalog()
    if isinstance(target, Script):
        k = Kernel(disabled)
        k.pending_schemas |= {s.schema.id for s in scripts.values() if s.schema is not None}
        for name in schedule(scripts):
            if name in _closure_of(target, scripts):
                k.replay(scripts[name])
        return [k.replay(target)]
    if target == "all":
        return Kernel(disabled).replay_all(scripts)
    if target not in scripts:
        raise ScriptError(f"no script for lemma {target!r}")
    needed = _closure_of(scripts[target], scripts)
    results = Kernel(disabled).replay_all({n: s for n, s in scripts.items() if n in needed | {target}})
    return [r for r in results if r.lemma == target]


def _closure_of(script: Script, scripts: dict[str, Script]) -> set[str]:
    graph = citation_graph({**scripts, script.lemma: script})
    seen: set[str] = set()
    todo = list(graph.get(script.lemma, []))
    while todo:
        n = todo.pop()
        if n not in seen:
            seen.add(n)
            todo.extend(graph.get(n, []))
    return seen


__all__ = [
    "BASE_RULES", "ClosureVerdict", "GABRIEL", "Kernel", "MutationRow", "ReplayResult", "Rule",
    "Schema", "Script", "ScriptError", "check_closure", "citation_graph", "hull", "load_catalog",
    "load_script", "mutation_report", "replay", "replay_catalog", "rule_catalog", "schedule",
    "verify_all",
]
