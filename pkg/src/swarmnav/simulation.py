"""Deterministic Monte Carlo simulation of swarm missions over landmark graphs.

A trial walks the scenario's flight plan segment by segment.  At each
segment every vehicle independently interprets the advice at the current
landmark (correct with probability ``1 - q``) and recognizes the next
landmark (correct with probability ``1 - p``); the swarm then takes both
decisions by majority vote.  The attempt is correct only if both swarm
decisions are correct.  A wrong attempt sends the swarm to a uniformly
random wrong neighbor, where the error is detected on arrival; the swarm
flies back (2x the detour edge length) and retries, up to ``retry_cap``
retries per mission.  Mission success means reaching the terminal landmark.

Randomness is counter-based so that every logical draw has a fixed address
and trials can run in any order, on any number of workers, with bit-equal
results.  The Philox key is ``(master_seed, trial_index)``; each segment
attempt owns a disjoint block of ``2 m + 1`` uniforms (advice draws for
vehicles ``0..m-1``, then recognition draws, then the detour pick), placed
at counter offsets:

* first attempts of the ``k`` segments occupy blocks ``0..k-1``;
* the ``r``-th retry of segment ``i`` occupies block
  ``k + i * retry_cap + (r - 1)``.

A draw is therefore fully keyed by ``(trial, segment, retry, kind,
vehicle)`` and no key is ever consumed twice; pass ``draw_log`` to
:func:`run_trial` to record the consumed keys and audit that.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

from .energy import PowerModel, e_fly
from .terrain import Scenario
from .voting import swarm_path_success

__all__ = [
    "TiePolicy",
    "ErrorModel",
    "SwarmConfig",
    "RngSpec",
    "VoteRecord",
    "TrialOutcome",
    "ResultRow",
    "ResultTable",
    "majority_recognition",
    "majority_advice",
    "run_trial",
    "run_experiment",
    "RESULT_CSV_HEADER",
]

_UINT64_SPAN = 2**64


class TiePolicy(Enum):
    """How an exact even split of correct vehicles is resolved.

    ``SUCCESS`` counts a split with exactly half the vehicles correct as a
    correct swarm decision (matching the majority-error closed form, which
    sums from ``ceil(m/2)``).  ``FRAGMENTATION`` makes every vehicle follow
    its own interpretation; the step then succeeds only if the correct
    subgroup strictly outnumbers the wrong one.  The latter is a
    non-normative extrapolation and only differs for even swarm sizes.
    """

    SUCCESS = "success"
    FRAGMENTATION = "fragmentation"


@dataclass(frozen=True)
class ErrorModel:
    """Per-vehicle recognition (p) and advice (q) error probabilities."""

    p: float
    q: float

    def __post_init__(self) -> None:
        for name, value in (("p", self.p), ("q", self.q)):
            if not (0.0 <= value <= 1.0) or math.isnan(value):
                raise ValueError(f"{name} must be in [0, 1], got {value!r}")


@dataclass(frozen=True)
class SwarmConfig:
    """Swarm size and mission mechanics knobs."""

    m: int
    tie_policy: TiePolicy = TiePolicy.SUCCESS
    retry_cap: int = 100
    speed: float = 5.0

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1:
            raise ValueError(f"swarm size must be an integer >= 1, got {self.m!r}")
        if not isinstance(self.retry_cap, int) or self.retry_cap < 0:
            raise ValueError(f"retry_cap must be an integer >= 0, got {self.retry_cap!r}")
        if not (self.speed > 0.0) or not math.isfinite(self.speed):
            raise ValueError(f"speed must be positive, got {self.speed!r}")


@dataclass(frozen=True)
class RngSpec:
    """Addresses one trial's random stream: (master seed, trial index)."""

    master_seed: int
    trial_index: int

    def __post_init__(self) -> None:
        for name, value in (("master_seed", self.master_seed), ("trial_index", self.trial_index)):
            if not isinstance(value, int) or not 0 <= value < _UINT64_SPAN:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value!r}")


@dataclass(frozen=True)
class VoteRecord:
    """One segment attempt's per-vehicle outcomes and the swarm decision."""

    segment: int
    attempt: int
    advice_ok: tuple[bool, ...]
    recognition_ok: tuple[bool, ...]
    decision_correct: bool


@dataclass(frozen=True)
class TrialOutcome:
    """What one mission did: success flag, effort spent, optional vote trace.

    ``distance_flown`` is the distance covered by each vehicle (the swarm
    flies as one unit) and ``energy`` is the matching single-vehicle mission
    energy; multiply by ``m`` (see :func:`swarmnav.energy.trial_energy`) for
    the all-vehicles total.
    """

    success: bool
    segments_attempted: int
    wasted_detours: int
    distance_flown: float
    energy: float
    votes: tuple[VoteRecord, ...] | None = None


def _majority_vote(votes: Sequence[Hashable]):
    """Outcome shared by at least ceil(m/2) voters, or None when there is none.

    When several outcomes reach the threshold (possible only for even vote
    counts split exactly in half), the one held by the earliest voter wins,
    which keeps the rule deterministic.
    """
    if len(votes) == 0:
        raise ValueError("vote list must not be empty")
    if any(v is None for v in votes):
        raise ValueError("votes must not be None (None is the no-majority marker)")
    threshold = (len(votes) + 1) // 2
    counts: dict[Hashable, int] = {}
    for v in votes:
        counts[v] = counts.get(v, 0) + 1
    eligible = {v for v, c in counts.items() if c >= threshold}
    if not eligible:
        return None
    for v in votes:
        if v in eligible:
            return v
    raise AssertionError("unreachable")  # pragma: no cover


def majority_recognition(votes: Sequence[Hashable]):
    """Landmark identifier adopted by the swarm, or None without a majority."""
    return _majority_vote(votes)


def majority_advice(votes: Sequence[Hashable]):
    """Advice interpretation the swarm follows, or None without a majority."""
    return _majority_vote(votes)


def _decision_correct(correct_count: int, m: int, tie_policy: TiePolicy) -> bool:
    if tie_policy is TiePolicy.SUCCESS:
        return correct_count >= (m + 1) // 2
    return 2 * correct_count > m


class _TrialStream:
    """Counter-addressed uniforms for one trial (layout in module docstring)."""

    def __init__(self, rng: RngSpec, k: int, m: int, retry_cap: int) -> None:
        self._key = np.array([rng.master_seed, rng.trial_index], dtype=np.uint64)
        self._m = m
        self._k = k
        self._retry_cap = retry_cap
        self._block = 2 * m + 1
        self._stride = (self._block + 3) // 4  # Philox emits 4 doubles per tick
        if k > 0:
            first = np.random.Generator(
                np.random.Philox(key=self._key, counter=[0, 0, 0, 0])
            ).random(k * self._stride * 4)
            self.first_attempts = first.reshape(k, self._stride * 4)[:, : self._block]
        else:
            self.first_attempts = np.empty((0, self._block))

    def attempt_block(self, segment: int, retry: int) -> np.ndarray:
        if retry == 0:
            return self.first_attempts[segment]
        tick = (self._k + segment * self._retry_cap + (retry - 1)) * self._stride
        return np.random.Generator(
            np.random.Philox(key=self._key, counter=[tick, 0, 0, 0])
        ).random(self._block)


def run_trial(
    scenario: Scenario,
    errors: ErrorModel,
    swarm: SwarmConfig,
    rng: RngSpec,
    *,
    power: PowerModel = PowerModel(),
    record_votes: bool = False,
    draw_log: list | None = None,
) -> TrialOutcome:
    """Simulate one mission and account its distance and energy.

    With ``draw_log`` a list, every consumed random draw appends its key
    ``(trial, segment, retry, kind, vehicle)`` for independence auditing.
    """
    graph = scenario.graph
    path = scenario.plan.path
    k = scenario.plan.k
    m = swarm.m
    stream = _TrialStream(rng, k, m, swarm.retry_cap)

    # Vectorized correct-vote counts for every segment's first attempt.
    if k > 0:
        first = stream.first_attempts
        first_adv_counts = (first[:, :m] >= errors.q).sum(axis=1)
        first_rec_counts = (first[:, m : 2 * m] >= errors.p).sum(axis=1)

    distance = 0.0
    detours = 0
    attempts = 0
    retries_left = swarm.retry_cap
    votes: list[VoteRecord] = []
    i = 0
    retry = 0
    failed = False
    while i < k:
        if retry == 0:
            adv_count = int(first_adv_counts[i])
            rec_count = int(first_rec_counts[i])
            block = first[i]
        else:
            block = stream.attempt_block(i, retry)
            adv_count = int(np.count_nonzero(block[:m] >= errors.q))
            rec_count = int(np.count_nonzero(block[m : 2 * m] >= errors.p))
        attempts += 1
        if draw_log is not None:
            trial = rng.trial_index
            draw_log.extend((trial, i, retry, "advice", j) for j in range(m))
            draw_log.extend((trial, i, retry, "recognition", j) for j in range(m))
        ok = _decision_correct(adv_count, m, swarm.tie_policy) and _decision_correct(
            rec_count, m, swarm.tie_policy
        )
        if record_votes:
            votes.append(
                VoteRecord(
                    segment=i,
                    attempt=retry,
                    advice_ok=tuple(bool(u >= errors.q) for u in block[:m]),
                    recognition_ok=tuple(bool(u >= errors.p) for u in block[m : 2 * m]),
                    decision_correct=ok,
                )
            )
        if ok:
            distance += graph.edge_length(path[i], path[i + 1])
            i += 1
            retry = 0
            continue
        if retries_left == 0:
            failed = True
            break
        retries_left -= 1
        detours += 1
        wrong = [w for w in graph.neighbors(path[i]) if w != path[i + 1]]
        if wrong:
            pick = min(int(block[2 * m] * len(wrong)), len(wrong) - 1)
            distance += 2.0 * graph.edge_length(path[i], wrong[pick])
            if draw_log is not None:
                draw_log.append((rng.trial_index, i, retry, "detour", None))
        retry += 1

    return TrialOutcome(
        success=not failed,
        segments_attempted=attempts,
        wasted_detours=detours,
        distance_flown=distance,
        energy=e_fly(power, distance, swarm.speed),
        votes=tuple(votes) if record_votes else None,
    )


@dataclass(frozen=True)
class ResultRow:
    """Aggregate of one experiment cell (one swarm size)."""

    m: int
    p: float
    q: float
    trials: int
    fail_rate: float
    fail_stderr: float
    analytic_fail: float
    mean_distance_m: float
    mean_energy_j: float
    mean_detours: float


RESULT_CSV_HEADER = (
    "m,p,q,trials,fail_rate,fail_stderr,analytic_fail,"
    "mean_distance_m,mean_energy_j,mean_detours"
)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


@dataclass(frozen=True)
class ResultTable:
    """Per-swarm-size experiment rows plus CSV serialization."""

    rows: tuple[ResultRow, ...]

    def to_csv_text(self) -> str:
        out = StringIO()
        out.write(RESULT_CSV_HEADER + "\n")
        for r in self.rows:
            out.write(
                f"{r.m},{_fmt(r.p)},{_fmt(r.q)},{r.trials},{_fmt(r.fail_rate)},"
                f"{_fmt(r.fail_stderr)},{_fmt(r.analytic_fail)},{_fmt(r.mean_distance_m)},"
                f"{_fmt(r.mean_energy_j)},{_fmt(r.mean_detours)}\n"
            )
        return out.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv_text(), encoding="utf-8")


def _run_trial_span(
    scenario: Scenario,
    errors: ErrorModel,
    swarm: SwarmConfig,
    power: PowerModel,
    master_seed: int,
    start: int,
    stop: int,
) -> tuple[int, list[float], list[float], list[float]]:
    """Worker body: trials [start, stop); returns failure count and sums-ready lists."""
    failures = 0
    distances: list[float] = []
    energies: list[float] = []
    detour_counts: list[float] = []
    for trial_index in range(start, stop):
        outcome = run_trial(
            scenario, errors, swarm, RngSpec(master_seed, trial_index), power=power
        )
        if not outcome.success:
            failures += 1
        distances.append(outcome.distance_flown)
        energies.append(outcome.energy)
        detour_counts.append(float(outcome.wasted_detours))
    return failures, distances, energies, detour_counts


def run_experiment(
    scenario: Scenario,
    errors: ErrorModel,
    m_values: Iterable[int],
    trials: int,
    master_seed: int,
    *,
    retry_cap: int = 100,
    speed: float = 5.0,
    tie_policy: TiePolicy = TiePolicy.SUCCESS,
    power: PowerModel = PowerModel(),
    workers: int = 1,
) -> ResultTable:
    """Sweep swarm sizes; each cell runs trials with indices 0..trials-1.

    The per-trial results depend only on ``(master_seed, trial_index)`` and
    the cell parameters, and the reduction walks trial spans in index order,
    so the table (and its CSV bytes) is identical for any ``workers`` value.
    Each row also carries the closed-form failure prediction
    ``1 - swarm_path_success`` for cross-checking.
    """
    ms = [int(m) for m in m_values]
    if not ms:
        raise ValueError("m_values must not be empty")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")

    k = scenario.plan.k
    rows = []
    for m in ms:
        swarm = SwarmConfig(m=m, tie_policy=tie_policy, retry_cap=retry_cap, speed=speed)
        spans = _even_spans(trials, workers)
        if workers == 1 or len(spans) == 1:
            parts = [
                _run_trial_span(scenario, errors, swarm, power, master_seed, a, b)
                for a, b in spans
            ]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(
                        _run_trial_span, scenario, errors, swarm, power, master_seed, a, b
                    )
                    for a, b in spans
                ]
                parts = [f.result() for f in futures]

        failures = sum(p[0] for p in parts)
        distances = [d for p in parts for d in p[1]]
        energies = [e for p in parts for e in p[2]]
        detour_counts = [c for p in parts for c in p[3]]

        fail_rate = failures / trials
        fail_stderr = math.sqrt(fail_rate * (1.0 - fail_rate) / trials)
        rows.append(
            ResultRow(
                m=m,
                p=errors.p,
                q=errors.q,
                trials=trials,
                fail_rate=fail_rate,
                fail_stderr=fail_stderr,
                analytic_fail=1.0 - swarm_path_success(errors.p, errors.q, k, m),
                mean_distance_m=math.fsum(distances) / trials,
                mean_energy_j=math.fsum(energies) / trials,
                mean_detours=math.fsum(detour_counts) / trials,
            )
        )
    return ResultTable(rows=tuple(rows))


def _even_spans(trials: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, trials) into up to ``workers`` contiguous spans in order."""
    n = min(workers, trials)
    base = trials // n
    extra = trials % n
    spans = []
    start = 0
    for w in range(n):
        size = base + (1 if w < extra else 0)
        spans.append((start, start + size))
        start += size
    return spans
