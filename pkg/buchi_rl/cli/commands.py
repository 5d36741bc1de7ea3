import logging
import math
import statistics
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from buchi_rl.automata.acceptance import ldba_accepts_lasso
from buchi_rl.automata.bundled import BUNDLED_AUTOMATA, bundled_formula, load_automaton
from buchi_rl.cli.config_io import build_config
from buchi_rl.cli.runner import make_rngs, run_seeds, write_csv, write_run_outputs
from buchi_rl.cli.schemas import ExperimentConfig, PolicyFile, RunRecord
from buchi_rl.envs.builtin import load_environment
from buchi_rl.errors import ConfigError
from buchi_rl.learn.hyper import suggest_hyperparameters
from buchi_rl.ltl.models import atoms
from buchi_rl.ltl.parser import parse_ltl
from buchi_rl.ltl.semantics import lasso_satisfies, random_lasso
from buchi_rl.mc.dtmc import buchi_probability, expected_discounted_reward, induce_dtmc
from buchi_rl.mc.mdp import optimal_satisfaction
from buchi_rl.mc.prism import dump_jsonl, export_prism
from buchi_rl.product.models import ProductMdp

logger = logging.getLogger(__name__)


class EvalReport(BaseModel):
    satisfaction: float
    discounted_reward: float
    optimal: float


class OracleReport(BaseModel):
    samples: int
    agreements: int
    disagreements: list[str] = []

    @property
    def ok(self) -> bool:
        return not self.disagreements


def suggested_hyperparameters(config: ExperimentConfig) -> tuple[float, float]:
    """(U, γ) that guarantee optimality from the environment size and p_min."""
    m = load_environment(config.env)
    return suggest_hyperparameters(m.n_states, m.p_min())


def _check_schedule(config: ExperimentConfig) -> None:
    if not config.reward_structure().strictly_positive:
        logger.warning(
            "reward schedule %s has R_0 = 0; levels are not strictly positive",
            config.reward_schedule,
        )
    U, gamma = suggested_hyperparameters(config)
    logger.info(
        "hyperparameters with an optimality guarantee for %s: U=%.3g gamma=%.10f"
        " (configured U=%g gamma=%g)",
        config.env,
        U,
        gamma,
        config.U,
        config.gamma,
    )


def cmd_train(config: ExperimentConfig) -> list[RunRecord]:
    _check_schedule(config)
    results = run_seeds(config)
    write_run_outputs(Path(config.output_dir), results)
    return [record for record, _ in results]


def sweep_points(config: ExperimentConfig) -> list[tuple[str, ExperimentConfig]]:
    """The default point plus one-at-a-time variations of U, γ and K."""
    points = [("default", config)]
    for name, field, values in (
        ("U", "U", config.sweep_u),
        ("gamma", "gamma", config.sweep_gamma),
        ("K", "K", config.sweep_k),
    ):
        for value in values:
            if value != getattr(config, field):
                point = build_config({**config.model_dump(), field: value})
                points.append((f"{name}={value}", point))
    return points


def cmd_sweep(config: ExperimentConfig) -> list[tuple[str, float, float]]:
    _check_schedule(config)
    points = sweep_points(config)
    for _, point_config in points:
        point_config.hyperparams()
    optimal = optimal_satisfaction(
        load_environment(config.env), load_automaton(config.automaton)
    )
    rows = []
    for point, point_config in points:
        logger.info("sweep point %s", point)
        finals = [r.final_satisfaction for r, _ in run_seeds(point_config, optimal)]
        q1, median, q3 = np.percentile(finals, [25, 50, 75])
        rows.append((point, float(median), float(q3 - q1)))
    write_csv(
        Path(config.output_dir) / "sweep.csv",
        ("point", "median_final_satisfaction", "iqr"),
        rows,
    )
    return rows


def read_policy(path: Optional[str]) -> PolicyFile:
    if path is None:
        raise ConfigError("no policy file given")
    try:
        return PolicyFile.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read policy {path}: {exc.strerror}") from exc
    except ValidationError as exc:
        raise ConfigError(f"malformed policy file {path}") from exc


def _policy_chain(config: ExperimentConfig):
    policy_file = read_policy(config.policy)
    if (policy_file.env, policy_file.automaton) != (config.env, config.automaton):
        logger.warning(
            "policy was learned on %s x %s, evaluating on %s x %s",
            policy_file.env,
            policy_file.automaton,
            config.env,
            config.automaton,
        )
    m = load_environment(config.env)
    a = load_automaton(config.automaton)
    product = ProductMdp(m, a, config.reward_structure())
    return m, a, induce_dtmc(product, policy_file.to_policy())


def cmd_eval(config: ExperimentConfig) -> EvalReport:
    m, a, d = _policy_chain(config)
    report = EvalReport(
        satisfaction=buchi_probability(d).initial,
        discounted_reward=expected_discounted_reward(d).initial,
        optimal=optimal_satisfaction(m, a),
    )
    logger.info("evaluated policy %s: %s", config.policy, report)
    return report


def cmd_oracle_check(config: ExperimentConfig) -> OracleReport:
    a = load_automaton(config.automaton)
    if config.formula is not None:
        text = config.formula
    elif config.automaton in BUNDLED_AUTOMATA:
        text = bundled_formula(config.automaton)
    else:
        raise ConfigError("oracle-check needs a formula for a non-bundled automaton")
    formula = parse_ltl(text)
    ap = sorted(set(a.ap) | atoms(formula))
    if config.samples == 0:
        logger.warning("oracle check with 0 samples passes vacuously")
    rng, _ = make_rngs(config.master_seed, config.seeds[0])
    report = OracleReport(samples=config.samples, agreements=0)
    for _ in range(config.samples):
        w = random_lasso(rng, ap)
        if ldba_accepts_lasso(a, w) == lasso_satisfies(formula, w):
            report.agreements += 1
        else:
            report.disagreements.append(
                "stem=%s loop=%s"
                % (
                    [sorted(x) for x in w.stem],
                    [sorted(x) for x in w.loop],
                )
            )
    logger.info(
        "oracle check %s vs %r: %d/%d agree",
        config.automaton,
        text,
        report.agreements,
        report.samples,
    )
    return report


def cmd_export_prism(
    config: ExperimentConfig, out: Optional[str] = None, jsonl: bool = False
) -> Path:
    _, _, d = _policy_chain(config)
    path = Path(out) if out else Path(config.output_dir) / "model.prism"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_prism(d), encoding="utf-8")
    if jsonl:
        path.with_suffix(".jsonl").write_text(dump_jsonl(d), encoding="utf-8")
    logger.info("wrote %d-state chain to %s", d.n, path)
    return path


def median_steps_to_threshold(records: list[RunRecord]) -> float:
    """Median over seeds; a seed that never reaches the threshold counts as inf."""
    return statistics.median(
        math.inf if r.steps_to_threshold is None else r.steps_to_threshold
        for r in records
    )


def cmd_compare(config: ExperimentConfig) -> list[tuple]:
    optimal = optimal_satisfaction(
        load_environment(config.env), load_automaton(config.automaton)
    )
    rows = []
    for algorithm in ("KC", "CF", "CF_KC"):
        records = [
            r
            for r, _ in run_seeds(
                build_config({**config.model_dump(), "algorithm": algorithm}), optimal
            )
        ]
        converged = sum(r.steps_to_threshold is not None for r in records)
        rows.append(
            (
                algorithm,
                median_steps_to_threshold(records),
                f"{converged}/{len(records)}",
                statistics.median(r.final_satisfaction for r in records),
                round(statistics.fmean(r.wallclock for r in records), 3),
            )
        )
    write_csv(
        Path(config.output_dir) / "compare.csv",
        (
            "algorithm",
            "median_steps_to_threshold",
            "converged_seeds",
            "median_final_satisfaction",
            "mean_wallclock",
        ),
        rows,
    )
    return rows
