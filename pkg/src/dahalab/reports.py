"""Identity-suite reports and the parallel suite runner.

A suite is a list of named identity checks over a finite spanning set.
Failures are data, not exceptions: each identity records how many cases it
checked and up to a handful of failure witnesses (enough to reproduce, not
enough to flood a terminal).

Parallel execution forks workers that rebuild the identity list from a
registered factory and run one identity by index, so nothing but small
primitives ever crosses the process boundary and the merged report is
deterministic regardless of worker count.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

MAX_FAILURES = 8


@dataclass
class IdentityResult:
    name: str
    anchor: str
    cases: int
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "cases": self.cases,
            "failures": self.failures,
        }


@dataclass
class Report:
    suite: str
    rank: int
    degree: int
    identities: list[IdentityResult]
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.identities)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "rank": self.rank,
            "degree": self.degree,
            "identities": [r.to_json() for r in self.identities],
            "pass": self.passed,
            "timing": self.timing,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def summary(self) -> str:
        lines = [f"suite {self.suite} (rank {self.rank}, degree {self.degree})"]
        for r in self.identities:
            status = "pass" if r.passed else f"FAIL ({len(r.failures)} shown)"
            lines.append(f"  {r.name}: {r.cases} cases ... {status}")
            for f in r.failures:
                lines.append(f"    case {f['case']}: lhs={f['lhs']} rhs={f['rhs']}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


class IdentitySpec:
    """One named identity plus the machinery to check it over its domain.

    `domain` yields hashable/printable case labels paired with inputs;
    `check` maps one input to (lhs, rhs); equality is delegated to the
    operands' own exact __eq__.
    """

    __slots__ = ("name", "anchor", "domain", "check")

    def __init__(
        self,
        name: str,
        anchor: str,
        domain: Callable[[], Iterable],
        check: Callable,
    ):
        self.name = name
        self.anchor = anchor
        self.domain = domain
        self.check = check

    def run(self) -> IdentityResult:
        cases = 0
        failures: list[dict] = []
        for item in self.domain():
            cases += 1
            lhs, rhs = self.check(item)
            if lhs != rhs:
                if len(failures) < MAX_FAILURES:
                    failures.append(
                        {"case": repr(item), "lhs": repr(lhs), "rhs": repr(rhs)}
                    )
        return IdentityResult(self.name, self.anchor, cases, failures)


# -- registry-based parallel runner -------------------------------------------

_SUITE_REGISTRY: dict[str, Callable[[int, int], list[IdentitySpec]]] = {}


def register_suite(key: str, factory: Callable[[int, int], list[IdentitySpec]]):
    _SUITE_REGISTRY[key] = factory


def suite_factory(key: str) -> Callable[[int, int], list[IdentitySpec]]:
    return _SUITE_REGISTRY[key]


def _run_indexed(args: tuple[str, int, int, int]) -> dict:
    key, rank, degree, idx = args
    spec = _SUITE_REGISTRY[key](rank, degree)[idx]
    res = spec.run()
    return {
        "name": res.name,
        "anchor": res.anchor,
        "cases": res.cases,
        "failures": res.failures,
    }


def default_jobs() -> int:
    env = os.environ.get("DAHA_LAB_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_suite(key: str, rank: int, degree: int, jobs: int = 1) -> Report:
    """Run a registered suite; jobs > 1 forks one task per identity."""
    specs = _SUITE_REGISTRY[key](rank, degree)
    start = time.monotonic()
    if jobs > 1 and len(specs) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(jobs, len(specs))) as pool:
            rows = pool.map(
                _run_indexed,
                [(key, rank, degree, i) for i in range(len(specs))],
            )
        results = [
            IdentityResult(r["name"], r["anchor"], r["cases"], r["failures"])
            for r in rows
        ]
    else:
        results = [s.run() for s in specs]
    return Report(key, rank, degree, results, timing=time.monotonic() - start)
