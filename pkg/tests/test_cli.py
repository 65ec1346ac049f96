"""CLI commands: outputs, validation, and byte-level reproducibility."""

import json
from pathlib import Path

import pytest

from uepsim import cli

from conftest import DEFAULT_TABLE_PATH


def run(tmp_path, command, config, name, seed=3):
    cfg_path = tmp_path / f"{name}.json"
    cfg_path.write_text(json.dumps(config))
    out = tmp_path / name
    rc = cli.main([command, "--config", str(cfg_path), "--out", str(out), "--seed", str(seed)])
    return rc, out


SMALL_CHAR = {"code": "polar", "n_total": 256, "k_info": 128, "ebno_db": 2.0, "trials": 300}
SMALL_TRANSMIT = {
    "mode": "ratio",
    "code": "polar",
    "ebno_db": 2.0,
    "char_trials": 300,
    "ratios": [[20, 480], [300, 200]],
    "n_pages": 10,
    "page_codewords": 4,
    "quality_image_size": 32,
}
SMALL_SCHEDULE = {
    "algorithms": ["minqueue", "random"],
    "injection_probs": [0.4, 0.8],
    "horizon_ticks": 150,
    "seeds": [0, 1],
    "gain_table": str(DEFAULT_TABLE_PATH),
}
SMALL_FULLSYSTEM = {
    "ebno_grid": [1.5],
    "injection_probs": [0.6],
    "horizon_ticks": 150,
    "seeds": [0, 1],
    "gain_table": str(DEFAULT_TABLE_PATH),
}


def test_characterize_row_count_matches_positions(tmp_path):
    rc, out = run(tmp_path, "characterize", SMALL_CHAR, "char")
    assert rc == 0
    rows = (out / "profile.csv").read_text().strip().splitlines()
    assert rows[0] == "position,error_count"
    assert len(rows) - 1 == 128  # K rows for the crc-free characterization code
    summary = json.loads((out / "summary.json").read_text())
    assert summary["trials"] == 300


def test_characterize_validation_error_exits_nonzero(tmp_path, capsys):
    rc, _ = run(tmp_path, "characterize", {**SMALL_CHAR, "trials": 0}, "bad")
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_transmit_ratio_sweep_rows(tmp_path):
    rc, out = run(tmp_path, "transmit", SMALL_TRANSMIT, "tx")
    assert rc == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()
    assert rows[0] == "ratio_or_npframes,scenario,gain_percent,quality_score,ebno_db"
    assert len(rows) - 1 == 2
    assert rows[1].startswith("20:480,k=0,")


def test_transmit_pframe_sweep_rows(tmp_path):
    config = {
        "mode": "pframes",
        "code": "polar",
        "ebno_db": 1.5,
        "char_trials": 300,
        "protected_pframes": list(range(15)),
        "n_gops": 1,
        "gop_size": 16,
    }
    rc, out = run(tmp_path, "transmit", config, "gop")
    assert rc == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()
    assert len(rows) - 1 == 15
    assert rows[1].startswith("0,np=0,")


def test_transmit_unknown_mode_fails(tmp_path, capsys):
    rc, _ = run(tmp_path, "transmit", {**SMALL_TRANSMIT, "mode": "carrier"}, "badmode")
    assert rc == 1
    assert "mode" in capsys.readouterr().err


def test_schedule_row_count(tmp_path):
    rc, out = run(tmp_path, "schedule", SMALL_SCHEDULE, "sched")
    assert rc == 0
    rows = (out / "metrics.csv").read_text().strip().splitlines()
    assert rows[0].startswith("algorithm,injection_prob,")
    assert len(rows) - 1 == 2 * 2  # algorithms x injection probabilities


def test_schedule_missing_table_names_file(tmp_path, capsys):
    cfg = {**SMALL_SCHEDULE, "gain_table": str(tmp_path / "nowhere.json")}
    rc, _ = run(tmp_path, "schedule", cfg, "notable")
    assert rc == 1
    assert "nowhere.json" in capsys.readouterr().err


def test_fullsystem_grid_and_reference_zero(tmp_path):
    rc, out = run(tmp_path, "fullsystem", SMALL_FULLSYSTEM, "full")
    assert rc == 0
    rows = (out / "scenario_gains.csv").read_text().strip().splitlines()[1:]
    assert len(rows) == 3 * 1 * 1 * 2  # scenarios x ebno x inj x seeds
    ref = [r for r in rows if r.startswith("4L,")]
    assert ref and all(r.rsplit(",", 1)[1] == "0" for r in ref)


@pytest.mark.parametrize(
    "command,config,artifact",
    [
        ("characterize", SMALL_CHAR, "profile.csv"),
        ("transmit", SMALL_TRANSMIT, "sweep.csv"),
        ("schedule", SMALL_SCHEDULE, "metrics.csv"),
        ("fullsystem", SMALL_FULLSYSTEM, "scenario_gains.csv"),
    ],
)
def test_rerun_is_byte_identical(tmp_path, command, config, artifact):
    _, out1 = run(tmp_path, command, config, "first")
    _, out2 = run(tmp_path, command, config, "second")
    assert (out1 / artifact).read_bytes() == (out2 / artifact).read_bytes()
