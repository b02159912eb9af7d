import argparse

import pytest
import yaml

from src.cli.main import apply_run_flags, build_parser, main, parse_gate
from src.config import AppConfig

TINY = {
    "scenario": {
        "duration": 3,
        "seed": 5,
        "max_births_per_epoch": 1,
        "sensors": [
            {"position": [0.0, 0.0], "clutter_rate": 1.0},
            {"position": [10000.0, 10000.0], "clutter_rate": 1.0},
        ],
    },
    "filter": {"track_particles": 100, "assoc_samples": 10},
    "birth": {
        "num_chains": 3,
        "chain_length": 2,
        "num_particles": 100,
        "posterior_particles": 100,
    },
}


@pytest.fixture
def tiny_config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(TINY))
    return path


def run_args(*flags: str) -> argparse.Namespace:
    return build_parser().parse_args(["run", *flags])


def test_parse_gate():
    assert parse_gate("euclidean:500") == ("euclidean", 500.0)
    assert parse_gate("mahalanobis:0.99") == ("mahalanobis", 0.99)


@pytest.mark.parametrize("value", ["euclidean", "manhattan:3", "pseudo:abc"])
def test_parse_gate_rejects(value):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_gate(value)


def test_all_on_flag():
    config = apply_run_flags(AppConfig(), run_args("--all-on"))
    assert all(config.toggles.as_dict().values())


def test_gate_and_skip_flags_set_parameters():
    config = apply_run_flags(AppConfig(), run_args("--gate", "pseudo:1e-9", "--skip-miss", "2"))
    assert config.toggles.gate and config.toggles.skip_miss
    assert not config.toggles.memoize
    assert config.birth.gate_mode == "pseudo"
    assert config.birth.gate_threshold == 1e-9
    assert config.birth.max_missed == 2


def test_out_names_the_run(tmp_path):
    config = apply_run_flags(AppConfig(), run_args("--out", str(tmp_path / "memo"), "--seed", "9"))
    assert config.output.label == "memo"
    assert config.output.dir == tmp_path / "memo"
    assert config.scenario.seed == 9


def test_run_then_compare(tiny_config_file, tmp_path):
    base_dir, memo_dir = tmp_path / "baseline", tmp_path / "memo"
    assert main(["run", "--config", str(tiny_config_file), "--out", str(base_dir)]) == 0
    assert main(
        ["run", "--config", str(tiny_config_file), "--memoize", "--out", str(memo_dir)]
    ) == 0
    assert (base_dir / "summary.yaml").exists()
    assert len((memo_dir / "steps.csv").read_text().splitlines()) == 4

    out = tmp_path / "cmp"
    args = [
        "compare", "--baseline", str(base_dir), "--candidates", str(memo_dir), "--out", str(out),
    ]
    assert main(args) == 0
    lines = (out / "comparison.csv").read_text().splitlines()
    assert lines[1].startswith("memo,")


def test_missing_config_fails(tmp_path):
    assert main(["run", "--config", str(tmp_path / "absent.yaml"), "--out", str(tmp_path)]) == 1


def test_compare_with_foreign_seed_fails(tiny_config_file, tmp_path):
    main(["run", "--config", str(tiny_config_file), "--out", str(tmp_path / "a")])
    main(["run", "--config", str(tiny_config_file), "--seed", "6", "--out", str(tmp_path / "b")])
    args = [
        "compare", "--baseline", str(tmp_path / "a"),
        "--candidates", str(tmp_path / "b"), "--out", str(tmp_path / "cmp"),
    ]
    assert main(args) == 1
