"""Stochastic trajectory sampling of the cycle-level protocol dynamics.

Each trial walks the chronological list of potential loss events produced by
a cycle-mode protocol run and fires each one with its conditional
probability, using a counter-based per-trial substream derived from
(master seed, trial index). Results are therefore bit-identical for a fixed
(seed, trials) regardless of execution order or worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import protocols
from .protocols import DuplexMessage, TelexMessage
from .zeno import Event, ZenoParams

_Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float, float]:
    """(rate, low, high) at the given normal quantile."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return phat, max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class TrialEnsemble:
    """Outcome counts of a trajectory ensemble with Wilson 95% intervals."""

    trials: int
    seed: int
    counts: dict
    empirical_rates: dict  # tag -> (rate, low, high)

    def rate(self, tag: str) -> float:
        return self.counts.get(tag, 0) / self.trials


def schedule_survival(events: tuple[Event, ...]) -> float:
    """Survival probability of an event schedule, prod (1 - p)^count."""
    out = 1.0
    for ev in events:
        out *= (1.0 - ev.probability) ** ev.count
    return out


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    # Philox counter blocks: one disjoint 2^128-draw block per trial
    return np.random.Generator(np.random.Philox(key=seed % (1 << 128), counter=index << 128))


def _run_block(args: tuple) -> dict:
    events, success_tags, protocol, seed, lo, hi = args
    counts: dict[str, int] = {}
    for t in range(lo, hi):
        rng = _trial_rng(seed, t)
        tag = None
        for cause, p, count in events:
            if p <= 0.0:
                continue
            if bool(np.any(rng.random(count) < p)):
                tag = "erasure:" + cause
                break
        if tag is None:
            if protocol == "telex":
                tag = success_tags[int(rng.integers(0, 2))]
            else:
                tag = success_tags[0]
        counts[tag] = counts.get(tag, 0) + 1
    return counts


def sample_protocol(
    protocol: str,
    message: "DuplexMessage | TelexMessage",
    params: ZenoParams,
    trials: int,
    seed: int,
    workers: int = 1,
) -> TrialEnsemble:
    """Sample ``trials`` trajectories of a duplex or telex run.

    Success tags are ``decoded:<b1><b2>`` for duplex and
    ``exchanged:mu<bit>`` for telex; erasures are tagged by ledger cause.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if protocol == "duplex":
        if not isinstance(message, DuplexMessage):
            raise ValueError("duplex sampling needs a DuplexMessage")
        run = protocols.duplex_run(message, params, mode="cycle")
        if run.decoded_bits is not None:
            success_tags = (f"decoded:{run.decoded_bits[0]}{run.decoded_bits[1]}",)
        else:
            success_tags = ("decoded:none",)
    elif protocol == "telex":
        if not isinstance(message, TelexMessage):
            raise ValueError("telex sampling needs a TelexMessage")
        run = protocols.telex_run(message, params, mode="cycle", mu=0)
        success_tags = ("exchanged:mu0", "exchanged:mu1")
    else:
        raise ValueError(f"unknown protocol {protocol!r}")

    events = tuple((ev.cause, ev.probability, ev.count) for ev in run.events)

    if workers <= 1:
        counts = _run_block((events, success_tags, protocol, seed, 0, trials))
    else:
        chunk = (trials + workers - 1) // workers
        jobs = [
            (events, success_tags, protocol, seed, lo, min(lo + chunk, trials))
            for lo in range(0, trials, chunk)
        ]
        counts = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(_run_block, jobs):
                for tag, c in partial.items():
                    counts[tag] = counts.get(tag, 0) + c

    assert sum(counts.values()) == trials
    rates = {tag: wilson_interval(c, trials) for tag, c in sorted(counts.items())}
    return TrialEnsemble(trials=trials, seed=seed, counts=dict(sorted(counts.items())), empirical_rates=rates)
