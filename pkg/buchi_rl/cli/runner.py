import csv
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from buchi_rl.automata.bundled import load_automaton
from buchi_rl.cli.schemas import OPTIMAL_SLACK, ExperimentConfig, PolicyFile, RunRecord
from buchi_rl.config import get_settings
from buchi_rl.envs.builtin import load_environment
from buchi_rl.errors import OptimumExceededError
from buchi_rl.learn.qtable import extract_policy
from buchi_rl.learn.train import final_satisfaction, train
from buchi_rl.mc.mdp import optimal_satisfaction
from buchi_rl.product.explicit import enumerate_product
from buchi_rl.product.schemas import constant_reward

logger = logging.getLogger(__name__)

CURVE_HEADER = ("step", "satisfaction_probability")
# last row of every curve file; its value is the final greedy satisfaction
FINAL_ROW = "final"
AGGREGATE_HEADER = ("step", "median", "q1", "q3", "mean", "half_std")
SUMMARY_HEADER = (
    "seed",
    "algorithm",
    "final_satisfaction",
    "optimal",
    "steps_to_threshold",
    "wallclock",
)


def make_rngs(master_seed: int, seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Exploration and evaluation streams for one run (PCG64)."""
    explore, evaluate = np.random.SeedSequence([master_seed, seed]).spawn(2)
    return (
        np.random.Generator(np.random.PCG64(explore)),
        np.random.Generator(np.random.PCG64(evaluate)),
    )


def steps_to_threshold(curve: Sequence[tuple[int, float]], target: float) -> Optional[int]:
    """First evaluated step whose satisfaction reaches `target`."""
    for step, value in curve:
        if value >= target - 1e-12:
            return step
    return None


def run_one(
    config: ExperimentConfig, seed: int, optimal: float
) -> tuple[RunRecord, PolicyFile]:
    m = load_environment(config.env)
    a = load_automaton(config.automaton)
    explore, _ = make_rngs(config.master_seed, seed)
    result = train(m, a, config.hyperparams(), explore, seed=seed)
    final = final_satisfaction(result, m, a)
    if final > optimal + OPTIMAL_SLACK:
        raise OptimumExceededError(
            f"seed {seed}: learned policy satisfies with {final:.10f}, "
            f"above the optimum {optimal:.10f}"
        )
    policy = extract_policy(result.q, enumerate_product(m, a, constant_reward(1.0)))
    record = RunRecord(
        config_hash=config.config_hash(),
        seed=seed,
        algorithm=config.algorithm,
        curve=result.curve,
        final_satisfaction=min(max(final, 0.0), 1.0),
        optimal=optimal,
        wallclock=result.wallclock,
        steps=result.steps,
        steps_to_threshold=steps_to_threshold(
            result.curve, config.threshold_fraction * optimal
        ),
    )
    logger.info(
        "seed %d (%s): final %.4f of optimal %.4f in %.1fs",
        seed,
        config.algorithm,
        final,
        optimal,
        result.wallclock,
    )
    return record, PolicyFile.from_policy(config.env, config.automaton, policy)


def run_seeds(
    config: ExperimentConfig, optimal: Optional[float] = None
) -> list[tuple[RunRecord, PolicyFile]]:
    """Train once per seed, in parallel when more than one worker is allowed."""
    if optimal is None:
        optimal = optimal_satisfaction(
            load_environment(config.env), load_automaton(config.automaton)
        )
    workers = config.workers or get_settings().WORKERS
    logger.info(
        "training %s on %s x %s for %d seeds (%d workers)",
        config.algorithm,
        config.env,
        config.automaton,
        len(config.seeds),
        workers,
    )
    if workers <= 1 or len(config.seeds) == 1:
        return [run_one(config, seed, optimal) for seed in config.seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_one, config, seed, optimal) for seed in config.seeds]
        return [f.result() for f in futures]


def aggregate_curves(records: Sequence[RunRecord]) -> list[tuple]:
    """Median, quartiles, mean and half standard deviation per evaluated step."""
    if not records:
        return []
    steps = [step for step, _ in records[0].curve]
    common = set(steps)
    for record in records[1:]:
        common &= {step for step, _ in record.curve}
    rows = []
    for step in (s for s in steps if s in common):
        values = np.array([dict(r.curve)[step] for r in records])
        q1, median, q3 = np.percentile(values, [25, 50, 75])
        rows.append(
            (
                step,
                float(median),
                float(q1),
                float(q3),
                float(values.mean()),
                float(values.std() / 2),
            )
        )
    return rows


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_run_outputs(
    out_dir: Path, results: Sequence[tuple[RunRecord, PolicyFile]]
) -> None:
    records = [record for record, _ in results]
    for record, policy in results:
        write_csv(
            out_dir / f"curve_{record.seed}.csv",
            CURVE_HEADER,
            [*record.curve, (FINAL_ROW, record.final_satisfaction)],
        )
        (out_dir / f"policy_{record.seed}.json").write_text(
            policy.model_dump_json(indent=2) + "\n", encoding="utf-8"
        )
    write_csv(out_dir / "aggregate.csv", AGGREGATE_HEADER, aggregate_curves(records))
    write_csv(
        out_dir / "summary.csv",
        SUMMARY_HEADER,
        [
            (
                r.seed,
                r.algorithm,
                r.final_satisfaction,
                r.optimal,
                "" if r.steps_to_threshold is None else r.steps_to_threshold,
                round(r.wallclock, 3),
            )
            for r in records
        ],
    )
