"""Seeded property suites shared by the ``verify`` subcommand and the tests.

Every trial draws from its own ``random.Random`` seeded by a string built
from (seed, suite, d, trial), so results do not depend on execution order
or on how trials are split across worker processes.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .core import EdgeTensor, edges
from .field import FieldSpec
from .geometry import PointConfig, geometric_witness, points_to_differences
from .linalg import det_exact, det_s2
from .partitions import planted_cycle_partition, sample_colorings, survey, survey_colorings
from .system import build_At, signed_block_sum


@dataclass
class SuiteResult:
    name: str
    d: int
    trials: int = 0
    failures: int = 0
    counterexamples: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, passed: bool, instance=None) -> None:
        self.trials += 1
        if not passed:
            self.failures += 1
            if len(self.counterexamples) < 5:
                self.counterexamples.append(instance)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "d": self.d,
            "trials": self.trials,
            "failures": self.failures,
            "ok": self.ok,
            **self.extra,
            "counterexamples": self.counterexamples,
        }


def trial_rng(seed: int, suite: str, d: int, i: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{d}:{i}")


def triples(d: int):
    return list(itertools.combinations(range(1, 2 * d + 1), 3))


# -- single trials (module-level so they pickle for worker processes) ---------


def vanishing_trial(d: int, field: FieldSpec, seed: int, i: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, "vanishing", d, i)
    x, y, z = rng.choice(triples(d))
    t = EdgeTensor.random(d, field, rng)
    w = [field.random(rng) for _ in range(d)]
    t = t.replace({(x, y): w, (x, z): w, (y, z): w})
    return det_s2(t) == 0, {"triple": [x, y, z], "tensor": t.to_json()}


def invariance_trial(d: int, field: FieldSpec, seed: int, i: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, "invariance", d, i)
    t = EdgeTensor.random(d, field, rng)
    dep_ok = all(x == 0 for row in signed_block_sum(t) for x in row)
    dets = [det_exact(build_At(t, k)) for k in range(1, 2 * d + 1)]
    return dep_ok and len(set(dets)) == 1, {"tensor": t.to_json()}


def multilinearity_trial(d: int, field: FieldSpec, seed: int, i: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, "multilinearity", d, i)
    t = EdgeTensor.random(d, field, rng)
    e = rng.choice(edges(d))
    u = [field.random(rng) for _ in range(d)]
    v = [field.random(rng) for _ in range(d)]
    a, b = field.random(rng), field.random(rng)
    f = field
    mix = [f.add(f.mul(a, p), f.mul(b, q)) for p, q in zip(u, v)]
    lhs = det_s2(t.replace({e: mix}))
    rhs = f.add(f.mul(a, det_s2(t.replace({e: u}))), f.mul(b, det_s2(t.replace({e: v}))))
    inst = {"tensor": t.to_json(), "edge": list(e), "u": [f.format(x) for x in u], "v": [f.format(x) for x in v],
            "a": f.format(a), "b": f.format(b)}
    return lhs == rhs, inst


def geometry_trial(d: int, field: FieldSpec, seed: int, i: int) -> tuple[bool, dict]:
    rng = trial_rng(seed, "geometry", d, i)
    c = PointConfig.random(d, field, rng)
    det = det_s2(points_to_differences(c))
    w = geometric_witness(c)  # raises if the witness fails its equations
    return det == 0, {"points": c.to_json(), "case": w.case}


def _run(suite: str, fn: Callable, d: int, field: FieldSpec, seed: int, trials: int, workers: int) -> SuiteResult:
    res = SuiteResult(suite, d)
    args = [(d, field, seed, i) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outcomes = list(ex.map(fn, *zip(*args), chunksize=max(1, trials // (4 * workers))))
    else:
        outcomes = [fn(*a) for a in args]
    for passed, inst in outcomes:
        res.record(passed, inst)
    if suite == "geometry":
        cases = [inst["case"] for _, inst in outcomes]
        res.extra["cases"] = {k: cases.count(k) for k in sorted(set(cases))}
    return res


def run_vanishing(d, field, seed, trials, workers=1):
    return _run("vanishing", vanishing_trial, d, field, seed, trials, workers)


def run_invariance(d, field, seed, trials, workers=1):
    return _run("invariance", invariance_trial, d, field, seed, trials, workers)


def run_multilinearity(d, field, seed, trials, workers=1):
    return _run("multilinearity", multilinearity_trial, d, field, seed, trials, workers)


def run_geometry(d, field, seed, trials, workers=1):
    return _run("geometry", geometry_trial, d, field, seed, trials, workers)


def run_partition_theorem(d: int, prime: int, seed: int, samples: int, planted: int = 0) -> SuiteResult:
    """Sampled cycle-free <=> det != 0 check, plus planted monochromatic cycles."""
    res = SuiteResult("partition_theorem", d)
    table = survey_colorings(sample_colorings(d, samples, seed), d, prime)
    rng = random.Random(f"{seed}:planted:{d}")
    parts = [planted_cycle_partition(d, L, rng) for L in range(3, 2 * d + 1) for _ in range(planted)]
    table.merge(survey(parts, FieldSpec.gf(prime)))
    res.trials = table.total
    res.failures = table.disagreements
    res.counterexamples = table.counterexamples[:5]
    res.extra["table"] = {k: v for k, v in table.to_json().items() if k != "counterexamples"}
    return res


def run_all(d: int, field: FieldSpec, seed: int, trials: int, workers: int = 1) -> list[SuiteResult]:
    out = [
        run_vanishing(d, field, seed, trials, workers),
        run_invariance(d, field, seed, trials, workers),
        run_multilinearity(d, field, seed, trials, workers),
        run_geometry(d, field, seed, trials, workers),
    ]
    if field.prime is not None and field.prime < (1 << 31):
        out.append(run_partition_theorem(d, field.prime, seed, trials, planted=max(1, trials // 100)))
    return out

