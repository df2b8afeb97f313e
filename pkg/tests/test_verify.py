import json

import numpy as np
import pytest

from torsionkit import chern
from torsionkit.verify import (SearchConfig, default_workers, run_suite, verify_lemma_daniel,
                               verify_phi_shift, verify_profile_closures)


def test_phi_small_box():
    rep = verify_phi_shift(SearchConfig("phi", bound=1, workers=1))
    assert rep.instances == 729 and rep.ok
    assert "no numerical counterexample" in rep.to_text()


def test_injected_sign_error_is_caught():
    def wrong(ms):
        out = chern.phi_batch(ms)
        out[:, 1, 2] *= -1
        return out
    rep = verify_phi_shift(SearchConfig("phi", bound=1, workers=1), phi=wrong)
    assert not rep.ok
    json.loads(rep.counterexamples[0])


def test_daniel_skips_non_wit1_matrix():
    m = chern.ChernMatrix.parse("[[0,1,0],[2,0,0]]")
    assert not chern.wit_necessary(m, 1)
    ms = np.array([m.rows()])
    assert not chern.wit_necessary_batch(ms, 1)[0]


def test_daniel_strict_vs_relaxed():
    strict = verify_lemma_daniel(SearchConfig("daniel", bound=2, workers=1))
    relaxed = verify_lemma_daniel(SearchConfig("daniel", bound=2, workers=1, strict_leading=False))
    assert strict.ok
    assert not relaxed.ok
    # every relaxed counterexample leans on a negative leading entry
    for text in relaxed.counterexamples:
        m = chern.ChernMatrix.parse(text)
        assert not chern.is_sheaf_admissible(m)


def test_closures_bookkeeping():
    rep = verify_profile_closures()
    assert rep.ok and rep.instances == 96 * 17
    assert len(rep.details["verdicts"]) == 17


def test_closures_non_theorem_set():
    rep = verify_profile_closures(names=("<C32>",))
    assert not rep.ok


def test_workers_do_not_change_results():
    for suite in ("phi", "daniel"):
        a = run_suite(SearchConfig(suite, bound=2, workers=1, strict_leading=False))
        b = run_suite(SearchConfig(suite, bound=2, workers=3, strict_leading=False))
        assert a.to_json() == b.to_json()


def test_config_validation(monkeypatch):
    with pytest.raises(ValueError):
        SearchConfig("nope")
    with pytest.raises(ValueError):
        SearchConfig("phi", bound=0)
    with pytest.raises(ValueError):
        SearchConfig("phi", workers=0)
    monkeypatch.setenv("TORSIONKIT_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("TORSIONKIT_WORKERS", "x")
    assert default_workers() == 1


def test_json_without_timing_is_canonical():
    rep = run_suite(SearchConfig("phi", bound=1, workers=1))
    doc = json.loads(rep.to_json())
    assert "seconds" not in doc and doc["instances"] == 729
    assert "seconds" in json.loads(rep.to_json(timing=True))
