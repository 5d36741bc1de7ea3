import math

import pytest

from buchi_rl.automata.io import save_ldba
from buchi_rl.cli import commands
from buchi_rl.cli.commands import (
    cmd_compare,
    cmd_eval,
    cmd_oracle_check,
    read_policy,
    suggested_hyperparameters,
    sweep_points,
)
from buchi_rl.cli.config_io import (
    PRESETS,
    format_config,
    load_config,
    parse_config,
    preset_config,
    save_config,
)
from buchi_rl.cli.runner import aggregate_curves, make_rngs, steps_to_threshold
from buchi_rl.cli.schemas import ExperimentConfig, PolicyFile, RunRecord
from buchi_rl.errors import ConfigError
from buchi_rl.learn.hyper import suggest_hyperparameters
from buchi_rl.main import main
from buchi_rl.mc.prism import parse_prism
from tests.conftest import make_gate_policy

SMALL_TRAIN = """\
env = prob_gate
automaton = fga_gnc
K = 10
U = 0.1
episodes = 20
max_steps = 50
eval_interval = 250
seeds = 0, 1
workers = 1
output_dir = {out}
"""


@pytest.fixture
def gate_policy_file(tmp_path, gate):
    path = tmp_path / "policy.json"
    policy = PolicyFile.from_policy("prob_gate", "fga_gnc", make_gate_policy(gate))
    path.write_text(policy.model_dump_json(indent=2), encoding="utf-8")
    return path


# Test configuration


def test_config_round_trip(tmp_path):
    """Test that a saved configuration loads back unchanged."""
    config = ExperimentConfig(
        algorithm="CF_KC", seeds=[3, 1, 4], U=0.25, formula="G F a", sweep_k=[2, 8]
    )
    path = tmp_path / "exp.cfg"
    save_config(config, path)
    assert load_config(path) == config
    assert parse_config(format_config(config)).config_hash() == config.config_hash()


def test_config_defaults():
    """Test the defaults of an empty configuration."""
    config = parse_config("# nothing set\n")
    assert config.env == "prob_gate"
    assert config.seeds == list(range(10))
    assert config.hyperparams().reward.K == 10


@pytest.mark.parametrize(
    "text",
    [
        "colour = blue\n",
        "K = -1\n",
        "seeds = 1, 1\n",
        "algorithm = SARSA\n",
        "episodes\n",
        "K = 3\nK = 4\n",
        "K = 0\n",
        "sweep_gamma = 1.5\n",
        "sweep_u = 0.1, 0\n",
        "sweep_k = -1\n",
    ],
)
def test_config_errors(text):
    """Test that malformed configurations are rejected."""
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_config_file(tmp_path):
    """Test that a missing configuration file raises ConfigError."""
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_build(name):
    """Test that every preset yields a valid configuration."""
    config = preset_config(name)
    assert config.hyperparams().reward.K == config.K


def test_unknown_preset():
    """Test that an unknown preset name raises ConfigError."""
    with pytest.raises(ConfigError):
        preset_config("maze")


def test_cf_uses_constant_reward():
    """Test that the CF baseline drops the counter."""
    config = ExperimentConfig(algorithm="CF")
    assert config.reward_structure().K == 0
    assert config.hyperparams().counterfactual


def test_config_hash_tracks_values():
    """Test that the configuration hash changes with the values."""
    assert ExperimentConfig().config_hash() == ExperimentConfig().config_hash()
    assert ExperimentConfig(U=0.2).config_hash() != ExperimentConfig().config_hash()


def test_sweep_points_vary_one_parameter():
    """Test that sweep points vary one parameter at a time."""
    config = ExperimentConfig(sweep_u=[0.1, 0.5], sweep_gamma=[0.9], sweep_k=[5])
    points = dict(sweep_points(config))
    assert list(points) == ["default", "U=0.5", "gamma=0.9", "K=5"]
    assert points["K=5"].U == config.U and points["K=5"].K == 5


def test_sweep_points_validate_each_point():
    """Test that an invalid sweep point raises ConfigError instead of slipping through."""
    with pytest.raises(ConfigError):
        sweep_points(ExperimentConfig(sweep_u=[], sweep_gamma=[], sweep_k=[0]))


def test_zero_counter_needs_counter_free_schedule():
    """Test that K = 0 is accepted only without the linear schedule."""
    assert ExperimentConfig(K=0, algorithm="CF").reward_structure().K == 0
    assert ExperimentConfig(K=0, reward_schedule="constant").hyperparams().reward.K == 0
    with pytest.raises(ValueError):
        ExperimentConfig(K=0)


def test_small_counter_schedules_build():
    """Test that every K of a small sweep yields a valid reward structure."""
    for K in range(1, 13):
        rs = ExperimentConfig(K=K, U=0.1).hyperparams().reward
        assert rs.rewards[-1] == 0.1


# Test runner helpers


def test_rng_streams_are_reproducible():
    """Test that seeded random streams repeat and differ between seeds."""
    explore, evaluate = make_rngs(0, 7)
    again, _ = make_rngs(0, 7)
    assert explore.random() == again.random()
    assert make_rngs(1, 7)[0].random() != make_rngs(0, 7)[0].random()
    assert evaluate.random() != make_rngs(0, 7)[0].random()


def test_steps_to_threshold():
    """Test the first evaluated step reaching a target."""
    curve = [(100, 0.1), (200, 0.75), (300, 0.8)]
    assert steps_to_threshold(curve, 0.72) == 200
    assert steps_to_threshold(curve, 0.9) is None


def test_aggregate_curves():
    """Test per-step aggregation across seeds."""
    records = [
        RunRecord(
            config_hash="x",
            seed=seed,
            algorithm="KC",
            curve=[(10, value), (20, 0.8)],
            final_satisfaction=0.8,
            optimal=0.8,
            wallclock=0.0,
        )
        for seed, value in enumerate([0.0, 0.4, 0.8])
    ]
    rows = aggregate_curves(records)
    assert [row[0] for row in rows] == [10, 20]
    assert rows[0][1] == pytest.approx(0.4)
    assert rows[1][1:5] == pytest.approx((0.8, 0.8, 0.8, 0.8))


def test_run_record_rejects_bad_curve():
    """Test that a curve with decreasing steps is rejected."""
    with pytest.raises(ValueError):
        RunRecord(
            config_hash="x",
            seed=0,
            algorithm="KC",
            curve=[(20, 0.5), (10, 0.5)],
            final_satisfaction=0.5,
            optimal=0.8,
            wallclock=0.0,
        )


def test_run_record_rejects_final_above_optimal():
    """Test that a record beating the optimum by more than the slack is rejected."""
    fields = dict(config_hash="x", seed=0, algorithm="KC", curve=[], wallclock=0.0)
    RunRecord(final_satisfaction=0.8 + 1e-9, optimal=0.8, **fields)
    with pytest.raises(ValueError):
        RunRecord(final_satisfaction=0.81, optimal=0.8, **fields)


# Test commands


def test_eval_hand_policy(gate_policy_file):
    """Test evaluating the optimal gate policy from a policy file."""
    report = cmd_eval(ExperimentConfig(policy=str(gate_policy_file)))
    assert report.satisfaction == pytest.approx(0.8, abs=1e-9)
    assert report.optimal == pytest.approx(0.8, abs=1e-9)
    assert 0.0 < report.discounted_reward < 1.0


def test_read_policy_errors(tmp_path):
    """Test that missing and malformed policy files raise ConfigError."""
    with pytest.raises(ConfigError):
        read_policy(None)
    bad = tmp_path / "bad.json"
    bad.write_text("{}", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_policy(str(bad))


def test_policy_file_round_trip(gate):
    """Test that a policy survives the policy file format."""
    policy = make_gate_policy(gate)
    restored = PolicyFile.model_validate_json(
        PolicyFile.from_policy("prob_gate", "fga_gnc", policy).model_dump_json()
    )
    assert restored.to_policy() == policy


def test_oracle_check_bundled():
    """Test the oracle check on a bundled automaton."""
    report = cmd_oracle_check(ExperimentConfig(automaton="frozen_lake", samples=200))
    assert report.ok
    assert report.agreements == 200


def test_oracle_check_needs_formula(tmp_path, fga_gnc):
    """Test that a custom automaton without a formula raises ConfigError."""
    path = tmp_path / "custom.ldba"
    path.write_text(save_ldba(fga_gnc), encoding="utf-8")
    with pytest.raises(ConfigError):
        cmd_oracle_check(ExperimentConfig(automaton=str(path)))


def test_compare_counts_unconverged_seeds(tmp_path, monkeypatch):
    """Test that seeds missing the threshold count as infinitely slow in compare."""
    reached = {
        "KC": [10_000, None, None, None, None],
        "CF": [None] * 5,
        "CF_KC": [50_000] * 5,
    }

    def fake_run_seeds(config, optimal):
        return [
            (
                RunRecord(
                    config_hash="x",
                    seed=seed,
                    algorithm=config.algorithm,
                    curve=[],
                    final_satisfaction=0.7,
                    optimal=optimal,
                    wallclock=1.0,
                    steps_to_threshold=steps,
                ),
                None,
            )
            for seed, steps in enumerate(reached[config.algorithm])
        ]

    monkeypatch.setattr(commands, "run_seeds", fake_run_seeds)
    monkeypatch.setattr(commands, "optimal_satisfaction", lambda m, a: 0.8)
    rows = {row[0]: row for row in cmd_compare(ExperimentConfig(output_dir=str(tmp_path)))}
    assert rows["KC"][1:3] == (math.inf, "1/5")
    assert rows["CF"][1:3] == (math.inf, "0/5")
    assert rows["CF_KC"][1:3] == (50_000, "5/5")
    assert rows["CF_KC"][1] < rows["KC"][1]
    lines = (tmp_path / "compare.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0].split(",")[1:3] == ["median_steps_to_threshold", "converged_seeds"]
    assert lines[1].startswith("KC,inf,1/5,")


def test_suggested_hyperparameters_for_gate():
    """Test the guaranteed-optimal hyperparameters derived from the gate world."""
    U, gamma = suggested_hyperparameters(ExperimentConfig())
    assert (U, gamma) == suggest_hyperparameters(40, 0.2)
    assert U == pytest.approx(1 / 200)


# Test the command line


def test_main_oracle_check_passes(capsys):
    """Test that a passing oracle check exits with status 0."""
    assert main(["oracle-check", "--log-level", "WARNING"]) == 0
    assert "1000/1000 lassos agree" in capsys.readouterr().out


def test_main_oracle_check_detects_corruption(tmp_path, fga_gnc, capsys):
    """Test that a corrupted automaton exits with status 1."""
    broken = tmp_path / "broken.ldba"
    broken.write_text(
        save_ldba(fga_gnc).replace("trans: 1 {a} 1", "trans: 1 {a} 1\ntrans: 1 {} 1"),
        encoding="utf-8",
    )
    config = tmp_path / "oracle.cfg"
    config.write_text(
        f"automaton = {broken}\nformula = F G a & G !c\nsamples = 500\n",
        encoding="utf-8",
    )
    assert main(["oracle-check", "--config", str(config)]) == 1
    assert "disagreement:" in capsys.readouterr().out


def test_main_bad_config(tmp_path, capsys):
    """Test that a bad configuration exits with status 2."""
    config = tmp_path / "bad.cfg"
    config.write_text("colour = blue\n", encoding="utf-8")
    assert main(["train", "--config", str(config)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_main_missing_policy(capsys):
    """Test that eval without a policy exits with status 2."""
    assert main(["eval", "--preset", "prob_gate"]) == 2


def test_main_train_is_reproducible(tmp_path):
    """Test that identical configs and seeds give byte-identical curves."""
    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        config = tmp_path / f"{run}.cfg"
        config.write_text(SMALL_TRAIN.format(out=out), encoding="utf-8")
        assert main(["train", "--config", str(config)]) == 0
        outputs.append(out)
    for seed in (0, 1):
        first = (outputs[0] / f"curve_{seed}.csv").read_bytes()
        assert first == (outputs[1] / f"curve_{seed}.csv").read_bytes()
        lines = first.decode().splitlines()
        assert lines[0] == "step,satisfaction_probability"
        assert [int(line.split(",")[0]) for line in lines[1:-1]] == [250, 500, 750, 1000]
        final = lines[-1].split(",")
        assert final[0] == "final"
        assert float(final[1]) == float(lines[-2].split(",")[1])
    for name in ("aggregate.csv", "summary.csv", "policy_0.json"):
        assert (outputs[0] / name).exists()


def test_main_single_seed_override(tmp_path):
    """Test that --seed runs only the given seed."""
    config = tmp_path / "one.cfg"
    config.write_text(SMALL_TRAIN.format(out=tmp_path / "out"), encoding="utf-8")
    assert main(["train", "--config", str(config), "--seed", "5"]) == 0
    assert (tmp_path / "out" / "curve_5.csv").exists()
    assert not (tmp_path / "out" / "curve_0.csv").exists()


def test_main_export_prism(tmp_path, gate_policy_file):
    """Test exporting the gate chain with its JSON lines dump."""
    config = tmp_path / "export.cfg"
    config.write_text(f"policy = {gate_policy_file}\n", encoding="utf-8")
    out = tmp_path / "gate.prism"
    assert main(["export-prism", "--config", str(config), "--out", str(out), "--jsonl"]) == 0
    d = parse_prism(out.read_text(encoding="utf-8"))
    assert d.accepting.any()
    assert out.with_suffix(".jsonl").exists()


def test_main_sweep_bad_value(tmp_path, capsys):
    """Test that an out-of-range sweep value exits with status 2."""
    config = tmp_path / "sweep.cfg"
    config.write_text("sweep_gamma = 0.9, 1.5\n", encoding="utf-8")
    assert main(["sweep", "--config", str(config)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_main_missing_automaton(tmp_path, capsys):
    """Test that a missing automaton file exits with status 2."""
    config = tmp_path / "missing.cfg"
    config.write_text(f"automaton = {tmp_path / 'fga_gnc.ldba'}\n", encoding="utf-8")
    assert main(["oracle-check", "--config", str(config)]) == 2
    assert "no automaton file" in capsys.readouterr().err
