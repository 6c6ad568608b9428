"""Executable property batteries for the reactivity measure.

Each battery returns a :class:`PropsReport` with one :class:`Trial` per
sampled input.  Deterministic checks must pass in every trial; checks that
compare two Monte-Carlo/QMC estimates against their error bars are
statistical and must pass in at least ``STATISTICAL_PASS_FRACTION`` of the
trials (a 95% interval is expected to miss now and then).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .avg import AveragingMode, mean_distance, reactivity
from .errors import UsageError
from .infogeom import conditional_entropy, info_distance
from .measure import DetectorSetting, joint_distribution
from .qcore import apply_channel, apply_local_unitaries, depolarizing, haar_random_unitary
from .states import bell, classical_corr, product, random_mixed, werner

STATISTICAL_PASS_FRACTION = 0.96
CHECKS = ("metric", "lu", "locc", "classical-bound")


@dataclass(frozen=True)
class Trial:
    index: int
    seed: int
    passed: bool
    detail: str
    hard: bool = True  # a hard failure sinks the battery regardless of pass fraction


@dataclass
class PropsReport:
    check: str
    trials: list[Trial] = field(default_factory=list)
    required_fraction: float = 1.0

    @property
    def n_passed(self) -> int:
        return sum(t.passed for t in self.trials)

    @property
    def passed(self) -> bool:
        if not self.trials:
            return False
        if any(not t.passed and t.hard for t in self.trials):
            return False
        return self.n_passed >= math.ceil(self.required_fraction * len(self.trials) - 1e-9)

    def failures(self) -> list[Trial]:
        return [t for t in self.trials if not t.passed]


def trial_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0] >> 1)


def _random_directions(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def check_metric(trials: int = 200, seed: int = 0) -> PropsReport:
    """Symmetry, nonnegativity, triangle inequality and 'conditioning reduces
    entropy' on random 3-qubit states at random detector settings."""
    report = PropsReport("metric")
    for t in range(trials):
        s = trial_seed(seed, t)
        rng = np.random.default_rng(s)
        rho = random_mixed(3, s, rank=1 + t % 8)
        dist = joint_distribution(rho, DetectorSetting(_random_directions(rng, 3)))
        problems = []
        dmat = np.zeros((3, 3))
        for i, j in itertools.permutations(range(3), 2):
            dmat[i, j] = info_distance(dist, i, j)
        if not np.array_equal(dmat, dmat.T):
            problems.append("asymmetric")
        if dmat.min() < -1e-12:
            problems.append(f"negative distance {dmat.min():.3g}")
        for i, j, k in itertools.permutations(range(3)):
            if dmat[i, k] > dmat[i, j] + dmat[j, k] + 1e-10:
                problems.append(f"triangle D{i}{k} > D{i}{j} + D{j}{k}")
        for i, j, k in itertools.permutations(range(3)):
            if conditional_entropy(dist, [i], [j, k]) > conditional_entropy(dist, [i], [j]) + 1e-10:
                problems.append(f"H({i}|{j}{k}) > H({i}|{j})")
        report.trials.append(Trial(t, s, not problems, "; ".join(problems) or "ok"))
    return report


def check_local_unitary(trials: int = 50, seed: int = 0, samples: int = 8192) -> PropsReport:
    """|R(rho) - R(U rho U^dag)| within the combined half widths, sphere mode.

    Even trials use 2-qubit states, odd trials 3-qubit states.
    """
    report = PropsReport("lu", required_fraction=STATISTICAL_PASS_FRACTION)
    for t in range(trials):
        s = trial_seed(seed, t)
        n = 2 if t % 2 == 0 else 3
        rho = random_mixed(n, s, rank=1 + t % 4)
        us = [haar_random_unitary(2, s + 1 + k) for k in range(n)]
        rotated = apply_local_unitaries(rho, us)
        mode = AveragingMode.sphere(samples, seed=s)
        r1 = reactivity(rho, mode)
        r2 = reactivity(rotated, mode)
        diff = abs(r1.reactivity - r2.reactivity)
        bound = r1.half_width + r2.half_width
        report.trials.append(
            Trial(t, s, diff <= bound, f"n={n} R={r1.reactivity:.6f} R'={r2.reactivity:.6f} "
                  f"|dR|={diff:.3g} bound={bound:.3g}", hard=False)
        )
    return report


def check_locc(
    lambdas=tuple(np.round(np.arange(0.2, 1.01, 0.1), 10)),
    ps=tuple(np.round(np.arange(0.1, 0.91, 0.1), 10)),
    seed: int = 0,
    samples: int = 8192,
) -> PropsReport:
    """Local depolarizing noise on both qubits never increases reactivity.

    Also confirms the channel identity werner(l) -> werner(l (1 - p)^2).
    """
    report = PropsReport("locc")
    mode = AveragingMode.sphere(samples, seed=seed)
    for t, (lam, p) in enumerate(itertools.product(lambdas, ps)):
        ch = depolarizing(p)
        rho = werner(lam)
        out = apply_channel(apply_channel(rho, ch, 0), ch, 1)
        problems = []
        if not out.allclose(werner(lam * (1 - p) ** 2), atol=1e-10):
            problems.append("channel output is not the predicted Werner state")
        r_in = reactivity(rho, mode).reactivity
        r_out = reactivity(out, mode).reactivity
        if r_out > r_in + 1e-6:
            problems.append(f"R increased {r_in:.9f} -> {r_out:.9f}")
        report.trials.append(
            Trial(t, seed, not problems, f"lambda={lam} p={p} R={r_in:.6f}->{r_out:.6f}"
                  + ("; " + "; ".join(problems) if problems else ""))
        )
    return report


def check_classical_bound(trials: int = 5, seed: int = 0, samples: int = 8192) -> PropsReport:
    """Mean distance of the classically correlated mixture exceeds that of the
    Bell state beyond the error bars; |00> and the Bell state tie.

    The separation is a hard requirement; the tie is statistical.
    """
    report = PropsReport("classical-bound", required_fraction=STATISTICAL_PASS_FRACTION)
    for t in range(trials):
        s = trial_seed(seed, t)
        mode = AveragingMode.sphere(samples, seed=s)
        d_bell = mean_distance(bell(), mode)
        d_cc = mean_distance(classical_corr(), mode)
        d_00 = mean_distance(product([(0, 0, 1), (0, 0, 1)]), mode)
        separated = d_cc.mean - d_bell.mean > d_cc.half_width + d_bell.half_width
        tied = abs(d_00.mean - d_bell.mean) <= d_00.half_width + d_bell.half_width
        detail = (f"bell={d_bell.mean:.6f}+-{d_bell.half_width:.2g} "
                  f"classical={d_cc.mean:.6f}+-{d_cc.half_width:.2g} "
                  f"|00>={d_00.mean:.6f}+-{d_00.half_width:.2g}")
        report.trials.append(Trial(t, s, separated and tied, detail, hard=not separated))
    return report


def run_check(check: str, trials: int | None = None, seed: int = 0) -> PropsReport:
    if check == "metric":
        return check_metric(trials or 200, seed)
    if check == "lu":
        return check_local_unitary(trials or 50, seed)
    if check == "locc":
        # the (lambda, p) grid is fixed; ``trials`` is not used
        return check_locc(seed=seed)
    if check == "classical-bound":
        return check_classical_bound(trials or 5, seed)
    raise UsageError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
