#!/usr/bin/env python3
"""Run the structural Monte Carlo checks on a reference fixture.

Covers the coupled dominance bound, the growth envelope, the safe-haven
power bound, superadditivity of survival in the founding size, the search
for a universe where the deviant policy loses to largest-first, and the
exploratory largest-first monotonicity probe.  Prints one line per check
and exits nonzero if the hard dominance invariant is violated.
"""

import argparse
import json
from pathlib import Path

from rdbp import (
    COUNTEREXAMPLE_TRIPLE,
    Constant,
    LawTriple,
    McConfig,
    OffspringLaw,
    Seed,
    Uniform,
    WeakestFirstPolicy,
    counterexample_search,
    dominance_check,
    envelope_check,
    safe_haven_check,
    sf_monotonicity_probe,
    superadditivity_check,
)
from rdbp.policies import (
    CoinFlipPolicy,
    FcfsPolicy,
    StrongestFirstPolicy,
    ThirdLargestFirstPolicy,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--replicates", type=int, default=300)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None, help="optional JSON report path")
    args = ap.parse_args()

    triple = LawTriple(OffspringLaw((0.25, 0.0, 0.75)), Uniform(0.0, 2.0), Constant(1.2))
    lean = LawTriple(triple.offspring, triple.claim, Constant(0.9))
    seed = Seed(args.seed)
    report = {}
    failed_hard = False

    mc = McConfig(replicates=args.replicates, horizon=40, explosion_cap=20_000, base_seed=seed)
    total = 0
    for policy in (FcfsPolicy(), StrongestFirstPolicy(), CoinFlipPolicy(), ThirdLargestFirstPolicy()):
        total += dominance_check(policy, lean, mc, workers=args.workers)
    print(f"dominance: {total} violations over four policies")
    report["dominance_violations"] = total
    failed_hard = total > 0

    est = envelope_check(WeakestFirstPolicy(), triple, mc, min_size=2000, slack=0.05)
    print(
        f"envelope: mean late ratio {est.mean_ratio:.4f} in "
        f"[{est.band_low:.4f}, {est.band_high:.4f}] "
        f"({est.n_ratios} ratios from {est.n_trajectories} runs)"
    )
    report["envelope"] = {"mean_ratio": est.mean_ratio,
                          "band": [est.band_low, est.band_high]}

    haven = safe_haven_check(triple, (1, 2, 5, 10), mc, workers=args.workers)
    ps = ", ".join(f"L={row.initial_size}: {row.estimate.p_extinct:.3f}" for row in haven.rows)
    print(f"safe haven: {ps} (monotone={haven.monotone_nonincreasing})")
    report["safe_haven"] = {
        "p_extinct": [row.estimate.p_extinct for row in haven.rows],
        "monotone": haven.monotone_nonincreasing,
    }

    sup = superadditivity_check(triple, initial_size=2, n_gens=3, mc=mc)
    print(
        f"superadditivity: D+ {sup.d_plus:.4f} <= {sup.d_plus_threshold:.4f}: "
        f"{sup.fosd_ok}; zero column ok: {sup.zero_column_ok}"
    )
    report["superadditivity"] = {"fosd_ok": sup.fosd_ok, "zero_column_ok": sup.zero_column_ok}

    search = counterexample_search(COUNTEREXAMPLE_TRIPLE, McConfig(base_seed=seed))
    if search.found:
        w = search.witness
        print(
            f"counterexample: replicate {w.replicate_id} kills the deviant policy "
            f"({w.policy_sizes} vs {w.sf_sizes})"
        )
    else:
        print(f"counterexample: none in {search.scanned} replicates")
    report["counterexample_found"] = search.found

    probe = sf_monotonicity_probe(triple, (1, 2, 3, 4, 5), mc)
    print(
        f"largest-first probe: {len(probe.cells)} cells, "
        f"{len(probe.violations)} significant decreases (exploratory)"
    )
    report["sf_probe_violations"] = len(probe.violations)

    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2) + "\n")
        print(f"wrote {path}")
    return 1 if failed_hard else 0


if __name__ == "__main__":
    raise SystemExit(main())
