# Copyright 2026 The multitest Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoke tests for the Python module; plain asserts, runnable without pytest."""

import json
import os
import sys

import multitest

DATA = os.environ.get(
    "MULTITEST_TEST_DATA",
    os.path.join(os.path.dirname(__file__), "..", "data"))


def test_adjust():
    r = multitest.adjust([0.01, 0.2, 0.6], "bonferroni", 0.05)
    assert [round(x, 12) for x in r["adjusted"]] == [0.03, 0.6, 1.0]
    assert r["rejected"] == [0]
    assert multitest.closure_oracle([0.01, 0.04], "bonferroni") == [0, 1]


def test_errors_are_value_errors():
    for bad in ([], [1.5]):
        try:
            multitest.adjust(bad)
        except ValueError:
            continue
        raise AssertionError("expected ValueError for %r" % (bad,))


def test_plan():
    assert multitest.plan(delta=0.1)["overall_per_variant"] == 1570
    assert multitest.plan(delta=0.1, success_count=2)["overall_per_variant"] == 1901


def test_gst():
    b = multitest.gst_boundaries([1.0], 0.05)
    assert abs(b["z_bounds"][0] - 1.959964) < 1e-6
    b = multitest.gst_boundaries([0.5, 1.0], 0.025, "obf", "one")
    assert abs(b["z_bounds"][1] - 1.9686) < 1e-3
    assert abs(multitest.alpha_spend("pocock", 0.05, 1.0) - 0.05) < 1e-12


def test_decide():
    with open(os.path.join(DATA, "decide_failing_guardrail.json")) as f:
        spec = json.load(f)
    d = multitest.decide(spec)
    assert d["ship"] is False
    assert d["failed_guardrails"] == ["crash_rate"]


def test_power_study_is_deterministic():
    cfg = {"m": 8, "deltas": [0.0, 0.1], "corr": {"type": "independent"}}
    a = multitest.power_study(cfg, seed=7, reps=300)
    b = multitest.power_study(cfg, seed=7, reps=300, workers=2)
    assert a == b
    assert all(0.0 <= c["power"] <= 1.0 for c in a)


def test_vr():
    assert abs(multitest.unadjusted_corr(
        gamma=1.0, sigma0_sq=1.0, sigma_eps_sq=1.0, rho0=0.8,
        rho_eps=0.2) - 0.5) < 1e-12
    assert multitest.decorrelation_gap(gamma=1.0, rho0=0.4, rho_eps=0.4) == 0.0


def test_corpus_roundtrip():
    text = multitest.generate_corpus({"n_experiments": 100}, seed=5)
    assert text == multitest.generate_corpus({"n_experiments": 100}, seed=5)
    rows = {r["method"]: r for r in multitest.replay(text, ["holm"])}
    assert rows["holm"]["ship_rate"] >= rows["bonferroni"]["ship_rate"]
    assert rows["bonferroni"]["delta_pp"] is None


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print("ok", t.__name__)
    print("%d python smoke tests passed" % len(tests))
    return 0


if __name__ == "__main__":
    sys.exit(main())
