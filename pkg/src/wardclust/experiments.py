"""The Ward1/Ward2 equivalence checks, run on freshly generated data.

Four pipelines are compared on one uniform random data set:

* ``ward.D2`` on Euclidean distances, by the naive and NN-chain drivers;
* ``ward.D`` on squared Euclidean distances;
* ``ward.D`` on plain Euclidean distances (the non-Ward misuse);
* ``ward.D`` on squared distances with square-rooted heights.

The published height listings in ``data/published_heights.json`` are
checked against each other as stored, never regenerated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .analysis import compare_heights, topology_equal
from .core import DataMatrix
from .engine import agglomerate_naive, agglomerate_nnchain, transform_heights
from .oracle import compare_with_engine, greedy_ess_agglomerate

RTOL = 1e-9
FIXTURE_ATOL = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class ExperimentReport:
    n: int
    p: int
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def load_published_heights() -> dict:
    text = resources.files("wardclust").joinpath("data/published_heights.json").read_text()
    return {k: np.array(v) for k, v in json.loads(text).items() if k != "about"}


def uniform_data(n: int, p: int, seed: int) -> DataMatrix:
    rng = np.random.default_rng(seed)
    return DataMatrix(rng.uniform(size=(n, p)))


def fixture_checks(published=None) -> list:
    pub = published or load_published_heights()
    d2, d_sq, d_plain = pub["ward_d2_plain"], pub["ward_d_squared"], pub["ward_d_plain"]
    checks = []
    dev = float(np.max(np.abs(d2 ** 2 - d_sq)))
    checks.append(Check("fixture: squared ward.D2 listing reproduces ward.D-on-squared listing",
                        len(d2) == len(d_sq) == 19 and dev <= FIXTURE_ATOL, f"max abs dev {dev:.2e}"))
    dev = float(np.max(np.abs(np.sqrt(d_sq) - d2)))
    checks.append(Check("fixture: square-rooted ward.D-on-squared listing reproduces ward.D2 listing",
                        dev <= FIXTURE_ATOL, f"max abs dev {dev:.2e}"))
    only3 = sorted(set(d_plain.tolist()) - set(d2.tolist()))
    differs = not np.array_equal(np.sort(d_plain), np.sort(d2))
    checks.append(Check("fixture: ward.D-on-plain listing differs from ward.D2 listing",
                        differs and 0.4018957 in only3, f"values only in the plain listing start {only3[:2]}"))
    return checks


def run_experiments(n: int = 20, p: int = 4, seed: int = 19037561, backend=None) -> ExperimentReport:
    if n < 3:
        raise ValueError("experiments need n >= 3")
    report = ExperimentReport(n, p, seed)
    add = report.checks.append
    data = uniform_data(n, p, seed)
    dist = data.dissimilarities()
    dist_sq = data.dissimilarities(squared=True)

    d2_naive = agglomerate_naive(dist, "ward.D2", backend=backend)
    d2_chain = agglomerate_nnchain(dist, "ward.D2", backend=backend)
    d1_sq = agglomerate_nnchain(dist_sq, "ward.D", backend=backend)
    d1_plain = agglomerate_naive(dist, "ward.D", force=True, backend=backend)

    same = topology_equal(d2_naive, d2_chain)
    dev = compare_heights(d2_naive, d2_chain) if same else float("inf")
    add(Check("E1: ward.D2 naive and NN-chain agree", same and dev < RTOL, f"max rel dev {dev:.2e}"))

    same = topology_equal(d1_sq, d2_naive)
    dev = compare_heights(d2_naive, d1_sq, map="square") if same else float("inf")
    add(Check("E2: ward.D on D^2 heights are squares of ward.D2 on D heights", same and dev < RTOL,
              f"max rel dev {dev:.2e}"))

    plain_sorted = np.sort(d1_plain.heights)
    gap_d2 = float(np.max(np.abs(plain_sorted - np.sort(d2_naive.heights))))
    gap_sq = float(np.max(np.abs(plain_sorted - np.sort(d1_sq.heights))))
    flagged = not d1_plain.metadata.get("ward", True) and "warning" in d1_plain.metadata
    add(Check("E3: ward.D on plain D differs from both Ward runs and is flagged non-Ward",
              gap_d2 > RTOL and gap_sq > RTOL and flagged, f"gaps {gap_d2:.3g}, {gap_sq:.3g}"))

    rooted = transform_heights(d1_sq, "sqrt")
    same = topology_equal(rooted, d2_naive)
    dev = compare_heights(rooted, d2_naive) if same else float("inf")
    add(Check("E4: sqrt-height ward.D on D^2 equals ward.D2 on D", same and dev < RTOL, f"max rel dev {dev:.2e}"))

    cmp = compare_with_engine(greedy_ess_agglomerate(data), d1_sq)
    add(Check("oracle: centroid-based greedy ESS merges match ward.D on D^2 (height = 2 dESS)", cmp.ok(RTOL),
              f"max rel dev {cmp.max_relative_deviation:.2e}"))

    report.checks.extend(fixture_checks())
    return report
