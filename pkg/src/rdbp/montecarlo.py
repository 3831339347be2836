"""Monte Carlo estimation and verification harness.

Replicate i always runs on ``base_universe.derive_replicate(i)``, so every
estimate is a pure function of (spec, config) and is bit-identical across
runs and across worker counts.  Trajectories that are still alive at the
horizon are reported as their own category, never folded into either side
of an extinction estimate.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from statistics import NormalDist
from typing import Optional, Sequence

import numpy as np

from .criteria import SolverConfig, effective_mean_sf, effective_mean_wf
from .distributions import LawTriple, OffspringLaw, Uniform
from .engine import ProcessSpec, Trajectory, simulate, simulate_coupled
from .policies import (
    StrongestFirstPolicy,
    ThirdLargestFirstPolicy,
    WeakestFirstPolicy,
    count_sf,
)
from .universe import (
    Seed,
    Universe,
    claims_across_replicates,
    offspring_across_replicates,
    resources_across_replicates,
)

__all__ = [
    "McConfig",
    "COUNTEREXAMPLE_TRIPLE",
    "ExtinctionEstimate",
    "GrowthEstimate",
    "SafeHavenReport",
    "SuperadditivityReport",
    "CounterexampleSearchResult",
    "CounterexampleWitness",
    "SfProbeReport",
    "InsufficientSurvivors",
    "wilson_interval",
    "estimate_extinction",
    "safe_haven_check",
    "dominance_check",
    "envelope_check",
    "superadditivity_check",
    "counterexample_search",
    "sf_monotonicity_probe",
]


class InsufficientSurvivors(RuntimeError):
    """No trajectory reached the size threshold the check conditions on."""


@dataclass(frozen=True)
class McConfig:
    replicates: int = 2000
    horizon: int = 200
    explosion_cap: int = 10 ** 6
    base_seed: Seed = Seed(0)
    confidence: float = 0.99

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.explosion_cap < 2:
            raise ValueError("explosion_cap must be >= 2")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must be in (0, 1)")


def wilson_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials with trials >= 1")
    z = NormalDist().inv_cdf(0.5 * (1.0 + confidence))
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    # centre and half agree analytically at the boundary counts; pin the
    # endpoints so rounding in sqrt cannot leave a stray 1e-18 residue
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class ExtinctionEstimate:
    replicates: int
    n_extinct: int
    n_exploded: int
    n_alive_at_horizon: int
    p_extinct: float
    ci_low: float
    ci_high: float
    confidence: float


def _outcome_counts(spec: ProcessSpec, seed_value: int, ids: Sequence[int]) -> tuple[int, int, int]:
    base = Universe(Seed(seed_value), spec.laws, 0)
    extinct = exploded = alive = 0
    for i in ids:
        kind = simulate(spec, base.derive_replicate(int(i))).outcome.kind
        if kind == "extinct":
            extinct += 1
        elif kind == "exploded":
            exploded += 1
        else:
            alive += 1
    return extinct, exploded, alive


def estimate_extinction(spec: ProcessSpec, mc: McConfig, workers: int = 1) -> ExtinctionEstimate:
    """Extinction frequency over mc.replicates coupled-free replicates.

    The Monte Carlo horizon and explosion cap in ``mc`` govern the runs;
    worker count only partitions the replicate ids, never the outcome.
    """
    eff = replace(spec, horizon=mc.horizon, explosion_cap=mc.explosion_cap)
    ids = range(mc.replicates)
    if workers <= 1:
        extinct, exploded, alive = _outcome_counts(eff, mc.base_seed.value, ids)
    else:
        chunks = np.array_split(np.arange(mc.replicates), workers * 4)
        extinct = exploded = alive = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_outcome_counts, eff, mc.base_seed.value, chunk.tolist())
                for chunk in chunks
                if len(chunk)
            ]
            for fut in futures:
                e, x, a = fut.result()
                extinct += e
                exploded += x
                alive += a
    lo, hi = wilson_interval(extinct, mc.replicates, mc.confidence)
    return ExtinctionEstimate(
        replicates=mc.replicates,
        n_extinct=extinct,
        n_exploded=exploded,
        n_alive_at_horizon=alive,
        p_extinct=extinct / mc.replicates,
        ci_low=lo,
        ci_high=hi,
        confidence=mc.confidence,
    )


@dataclass(frozen=True)
class SafeHavenRow:
    initial_size: int
    estimate: ExtinctionEstimate
    power_bound: float
    within_bound: bool


@dataclass(frozen=True)
class SafeHavenReport:
    rows: tuple[SafeHavenRow, ...]
    monotone_nonincreasing: bool
    baseline: ExtinctionEstimate


def safe_haven_check(
    triple: LawTriple, initial_sizes: Sequence[int], mc: McConfig, workers: int = 1
) -> SafeHavenReport:
    """Smallest-first extinction versus founding size.

    Checks that the estimated extinction probability from L founders never
    significantly exceeds the L-th power of the single-founder estimate
    (lower confidence limit against the powered upper limit), and that the
    point estimates are non-increasing in L.
    """
    policy = WeakestFirstPolicy()

    def run(initial: int) -> ExtinctionEstimate:
        spec = ProcessSpec(
            laws=triple,
            policy=policy,
            initial_size=initial,
            horizon=mc.horizon,
            explosion_cap=max(mc.explosion_cap, initial + 1),
        )
        return estimate_extinction(spec, mc, workers=workers)

    baseline = run(1)
    rows = []
    for initial in initial_sizes:
        est = run(initial) if initial != 1 else baseline
        bound = baseline.ci_high ** initial
        rows.append(
            SafeHavenRow(
                initial_size=int(initial),
                estimate=est,
                power_bound=bound,
                within_bound=est.ci_low <= bound,
            )
        )
    mono = all(
        rows[i + 1].estimate.p_extinct <= rows[i].estimate.p_extinct
        for i in range(len(rows) - 1)
    )
    return SafeHavenReport(rows=tuple(rows), monotone_nonincreasing=mono, baseline=baseline)


def _known_size(traj: Trajectory, n: int) -> Optional[int]:
    if n < len(traj.sizes):
        return traj.sizes[n]
    if traj.outcome.kind == "extinct":
        return 0
    return None


def _dominance_violations(
    policy_spec: ProcessSpec, wf_spec: ProcessSpec, seed_value: int, ids: Sequence[int]
) -> int:
    base = Universe(Seed(seed_value), policy_spec.laws, 0)
    violations = 0
    for i in ids:
        u = base.derive_replicate(int(i))
        got, ref = simulate_coupled([policy_spec, wf_spec], u)
        span = max(len(got.sizes), len(ref.sizes))
        for n in range(span):
            g = _known_size(got, n)
            w = _known_size(ref, n)
            if g is not None and w is not None and g > w:
                violations += 1
    return violations


def dominance_check(
    policy, triple: LawTriple, mc: McConfig, initial_size: int = 1, workers: int = 1
) -> int:
    """Generation-by-generation count of policy sizes exceeding the coupled
    smallest-first sizes.  The theory says the count is exactly zero."""
    kwargs = dict(
        laws=triple,
        initial_size=initial_size,
        horizon=mc.horizon,
        explosion_cap=mc.explosion_cap,
    )
    policy_spec = ProcessSpec(policy=policy, **kwargs)
    wf_spec = ProcessSpec(policy=WeakestFirstPolicy(), **kwargs)
    if workers <= 1:
        return _dominance_violations(policy_spec, wf_spec, mc.base_seed.value, range(mc.replicates))
    chunks = np.array_split(np.arange(mc.replicates), workers * 4)
    total = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_dominance_violations, policy_spec, wf_spec, mc.base_seed.value, chunk.tolist())
            for chunk in chunks
            if len(chunk)
        ]
        for fut in futures:
            total += fut.result()
    return total


@dataclass(frozen=True)
class GrowthEstimate:
    mean_ratio: float
    dispersion: float
    n_ratios: int
    n_trajectories: int
    band_low: float
    band_high: float
    fraction_in_band: float
    slack: float


def envelope_check(
    policy,
    triple: LawTriple,
    mc: McConfig,
    min_size: int = 10 ** 4,
    slack: float = 0.05,
    initial_size: int = 1,
) -> GrowthEstimate:
    """Late growth ratios against the effective-mean envelope.

    Collects size ratios from generations at or above ``min_size`` and
    reports how they sit inside [largest-first effective mean - slack,
    smallest-first effective mean + slack].  Raises InsufficientSurvivors
    when no replicate grows that large.
    """
    m = triple.offspring.mean()
    r = triple.resource.mean()
    cfg = SolverConfig()
    band_low = effective_mean_sf(triple.claim, r, m, cfg)
    band_high = effective_mean_wf(triple.claim, r, m, cfg)
    spec = ProcessSpec(
        laws=triple,
        policy=policy,
        initial_size=initial_size,
        horizon=mc.horizon,
        explosion_cap=mc.explosion_cap,
    )
    base = Universe(mc.base_seed, triple, 0)
    ratios: list[float] = []
    contributing = 0
    for i in range(mc.replicates):
        traj = simulate(spec, base.derive_replicate(i))
        picked = [
            traj.sizes[n + 1] / traj.sizes[n]
            for n in range(len(traj.sizes) - 1)
            if traj.sizes[n] >= min_size
        ]
        if picked:
            contributing += 1
            ratios.extend(picked)
    if not ratios:
        raise InsufficientSurvivors(f"no replicate reached size {min_size}")
    arr = np.asarray(ratios)
    inside = (arr >= band_low - slack) & (arr <= band_high + slack)
    return GrowthEstimate(
        mean_ratio=float(arr.mean()),
        dispersion=float(arr.std()),
        n_ratios=len(ratios),
        n_trajectories=contributing,
        band_low=band_low,
        band_high=band_high,
        fraction_in_band=float(inside.mean()),
        slack=slack,
    )


@dataclass(frozen=True)
class SuperadditivityReport:
    generation: int
    initial_size: int
    d_plus: float
    d_plus_threshold: float
    fosd_ok: bool
    p_zero_joint: float
    p_zero_joint_ci_low: float
    p_zero_single_powered: float
    zero_column_ok: bool
    alpha: float

    @property
    def ok(self) -> bool:
        return self.fosd_ok and self.zero_column_ok


def superadditivity_check(
    triple: LawTriple,
    initial_size: int,
    n_gens: int,
    mc: McConfig,
    alpha: float = 1e-3,
) -> SuperadditivityReport:
    """Smallest-first from L founders versus the sum of L single-founder copies.

    The joint process should be stochastically at least as large as the
    independent sum; empirically its CDF must not sit above the sum's CDF by
    more than a one-sided two-sample bound at level alpha.  The mass at zero
    is compared against the powered single-founder estimate directly.
    """
    if initial_size < 1:
        raise ValueError("initial_size must be >= 1")
    policy = WeakestFirstPolicy()
    cap = max(mc.explosion_cap, 10 ** 9)
    joint_spec = ProcessSpec(
        laws=triple, policy=policy, initial_size=initial_size, horizon=n_gens, explosion_cap=cap
    )
    single_spec = ProcessSpec(laws=triple, policy=policy, initial_size=1, horizon=n_gens, explosion_cap=cap)
    base = Universe(mc.base_seed, triple, 0)
    n_rep = mc.replicates

    joint_vals = np.empty(n_rep, dtype=np.int64)
    for i in range(n_rep):
        joint_vals[i] = simulate(joint_spec, base.derive_replicate(i)).size_at(n_gens)

    copy_vals = np.empty(n_rep * initial_size, dtype=np.int64)
    offset = n_rep
    for j in range(n_rep * initial_size):
        copy_vals[j] = simulate(single_spec, base.derive_replicate(offset + j)).size_at(n_gens)
    sum_vals = copy_vals.reshape(n_rep, initial_size).sum(axis=1)

    joint_sorted = np.sort(joint_vals)
    sum_sorted = np.sort(sum_vals)
    grid = np.unique(np.concatenate([joint_sorted, sum_sorted]))
    cdf_joint = np.searchsorted(joint_sorted, grid, side="right") / n_rep
    cdf_sum = np.searchsorted(sum_sorted, grid, side="right") / n_rep
    d_plus = float(np.max(cdf_joint - cdf_sum))
    threshold = math.sqrt(math.log(1.0 / alpha) / 2.0) * math.sqrt(2.0 / n_rep)

    zeros_joint = int(np.sum(joint_vals == 0))
    zeros_copies = int(np.sum(copy_vals == 0))
    joint_lo, _ = wilson_interval(zeros_joint, n_rep, mc.confidence)
    _, copy_hi = wilson_interval(zeros_copies, n_rep * initial_size, mc.confidence)
    powered = copy_hi ** initial_size

    return SuperadditivityReport(
        generation=n_gens,
        initial_size=initial_size,
        d_plus=d_plus,
        d_plus_threshold=threshold,
        fosd_ok=d_plus <= threshold,
        p_zero_joint=zeros_joint / n_rep,
        p_zero_joint_ci_low=joint_lo,
        p_zero_single_powered=powered,
        zero_column_ok=joint_lo <= powered,
        alpha=alpha,
    )


# Reference laws for the search below, tuned so a witness shows up well
# inside the default budget: half the time three children arrive, their
# claims can dwarf a resource unit, and three light claims still fit one.
# With base seed 0 the first hit lands at replicate 118357.
COUNTEREXAMPLE_TRIPLE = LawTriple(
    offspring=OffspringLaw((0.5, 0.0, 0.0, 0.5)),
    claim=Uniform(0.0, 2.0),
    resource=Uniform(0.0, 1.0),
)


@dataclass(frozen=True)
class CounterexampleWitness:
    replicate_id: int
    seed_value: int
    policy_sizes: tuple[int, ...]
    sf_sizes: tuple[int, ...]


@dataclass(frozen=True)
class CounterexampleSearchResult:
    found: bool
    scanned: int
    witness: Optional[CounterexampleWitness] = None


def _counterexample_feasibility(triple: LawTriple) -> None:
    probs = triple.offspring.probabilities
    p3 = probs[3] if len(probs) > 3 else 0.0
    if p3 <= 0.0:
        raise ValueError("counterexample search needs P[offspring = 3] > 0")
    if not triple.claim.is_continuous:
        raise ValueError("counterexample search needs a continuous claim law")
    if not (triple.claim.support_upper > 2.0 * triple.resource.support_lower):
        raise ValueError(
            "counterexample search needs claims able to exceed two resource units "
            f"(claim upper {triple.claim.support_upper:g} vs 2 * resource lower "
            f"{2.0 * triple.resource.support_lower:g})"
        )
    if not (3.0 * triple.claim.support_lower < triple.resource.support_upper):
        raise ValueError("counterexample search needs three small claims to fit one resource unit")


def counterexample_search(
    triple: LawTriple,
    mc: McConfig,
    budget: int = 10 ** 6,
    chunk_size: int = 1 << 16,
) -> CounterexampleSearchResult:
    """Scan replicates for a universe where the third-largest-first policy
    dies by generation 2 while coupled strongest-first is still alive.

    A vectorised first pass discards replicates whose strongest-first line is
    already dead after one generation (a necessary condition for any
    witness); survivors get a full coupled two-generation run through the
    engine, in replicate order, so the first hit is deterministic.
    """
    _counterexample_feasibility(triple)
    base = Universe(mc.base_seed, triple, 0)
    max_k = triple.offspring.max_offspring
    policy_spec = ProcessSpec(
        laws=triple, policy=ThirdLargestFirstPolicy(), initial_size=1, horizon=2
    )
    sf_spec = ProcessSpec(laws=triple, policy=StrongestFirstPolicy(), initial_size=1, horizon=2)

    scanned = 0
    for start in range(0, budget, chunk_size):
        ids = np.arange(start, min(budget, start + chunk_size), dtype=np.int64)
        scanned = int(ids[-1]) + 1
        t0 = offspring_across_replicates(base, ids, 0, 1)
        res = resources_across_replicates(base, ids, 0, 1)
        largest = np.full(len(ids), -np.inf)
        for k in range(1, max_k + 1):
            ck = claims_across_replicates(base, ids, 0, k)
            largest = np.where(k <= t0, np.maximum(largest, ck), largest)
        candidates = ids[(t0 >= 1) & (largest <= res)]
        for i in candidates:
            u = base.derive_replicate(int(i))
            got, ref = simulate_coupled([policy_spec, sf_spec], u)
            if got.size_at(2) == 0 and ref.size_at(2) > 0:
                return CounterexampleSearchResult(
                    found=True,
                    scanned=int(i) + 1,
                    witness=CounterexampleWitness(
                        replicate_id=int(i),
                        seed_value=mc.base_seed.value,
                        policy_sizes=tuple(got.sizes),
                        sf_sizes=tuple(ref.sizes),
                    ),
                )
    return CounterexampleSearchResult(found=False, scanned=scanned)


@dataclass(frozen=True)
class SfProbeCell:
    t: int
    v: int
    rate: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SfProbeReport:
    """Exploratory only: no verdict is drawn from this probe."""

    t_values: tuple[int, ...]
    v_values: tuple[int, ...]
    cells: tuple[SfProbeCell, ...]
    violations: tuple[tuple[int, int, int], ...]  # (t_from, t_to, v) significant decreases
    exploratory: bool = True


def sf_monotonicity_probe(
    triple: LawTriple,
    t_values: Sequence[int],
    mc: McConfig,
    v_max: Optional[int] = None,
) -> SfProbeReport:
    """Estimates P[largest-first count >= v] as the parent count t grows.

    Whether these survival rates increase with t is an open structural
    question, so the report only flags statistically significant decreases
    and never turns them into a pass or fail.
    """
    t_values = tuple(int(t) for t in t_values)
    if any(t < 1 for t in t_values):
        raise ValueError("t values must be >= 1")
    base = Universe(mc.base_seed, triple, 0)
    samples: dict[int, np.ndarray] = {}
    for t in t_values:
        counts = np.empty(mc.replicates, dtype=np.int64)
        for i in range(mc.replicates):
            u = base.derive_replicate(i)
            # generation row t keeps the draws for different t disjoint
            total = int(u.offspring_row(t, t).sum())
            budget = float(u.resource_row(t, t).sum())
            claims = u.claim_row(t, total) if total else np.empty(0)
            counts[i] = count_sf(claims, budget)
        samples[t] = counts

    observed_max = max((int(samples[t].max()) for t in t_values), default=0)
    top = v_max if v_max is not None else max(observed_max, 1)
    v_values = tuple(range(1, top + 1))

    cells = []
    table: dict[tuple[int, int], SfProbeCell] = {}
    for t in t_values:
        for v in v_values:
            hits = int(np.sum(samples[t] >= v))
            lo, hi = wilson_interval(hits, mc.replicates, mc.confidence)
            cell = SfProbeCell(t=t, v=v, rate=hits / mc.replicates, ci_low=lo, ci_high=hi)
            cells.append(cell)
            table[(t, v)] = cell

    violations = []
    for a, b in zip(t_values, t_values[1:]):
        for v in v_values:
            if table[(b, v)].ci_high < table[(a, v)].ci_low:
                violations.append((a, b, v))

    return SfProbeReport(
        t_values=t_values,
        v_values=v_values,
        cells=tuple(cells),
        violations=tuple(violations),
    )
