# Copyright 2026 The multitest Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Multiple-testing corrections and ship decisions for online experiments."""

import json as _json

from . import _core
from ._core import (
    DomainError,
    NumericError,
    ValidationError,
    adjust,
    alpha_spend,
    bonferroni_cis,
    closure_oracle,
    gst_boundaries,
)

__version__ = _core.__version__
_SCHEMA_VERSION = "1"


def _doc(d):
    d = dict(d or {})
    d.setdefault("schema_version", _SCHEMA_VERSION)
    return _json.dumps(d)


def plan(**inputs):
    """Per-variant sample size; keyword names match the plan JSON schema."""
    return _core.plan_json(_doc(inputs))


def decide(spec):
    """Ship decision for an experiment spec given as a dict."""
    return _json.loads(_core.decide_json(_doc(spec)))


def power_study(config, seed, reps=0, workers=1):
    """Monte Carlo power/FWER cells for a simulation config dict."""
    return _core.power_study_json(_doc(config), seed, reps, workers)


def unadjusted_corr(**params):
    return _core.unadjusted_corr_json(_doc(params))


def decorrelation_gap(**params):
    return _core.decorrelation_gap_json(_doc(params))


def generate_corpus(config=None, seed=0, workers=1):
    """Synthetic corpus as JSON-lines text."""
    return _core.generate_corpus_json(_doc(config), seed, workers)


def replay(corpus_jsonl, methods=(), family="success_only", alpha=0.05,
           vr_on=True):
    return _core.replay_jsonl(corpus_jsonl, list(methods), family, alpha,
                              vr_on)
