from pathlib import Path

import numpy as np
import pytest

from stefan_sam.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main, run_experiment
from stefan_sam.config import PRESETS, ConfigError, build_config, parse_config_text, preset_raw, validate_config

SMALL = """
experiment = small
problem.t_end = 0.004
grids = 25, 50
schemes = sam_jump, integral
probes = 0.32, 0.25
snapshot_times = 0.002, 0.004
"""


def write_config(tmp_path, text, name="c.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_validate(name):
    assert validate_config(preset_raw(name)) == []


def test_required_presets_exist():
    assert {"table-appendix-b", "fig-intro", "waiting-time"} <= set(PRESETS)


def test_probe_outside_domain():
    diags = validate_config({"probes": "1.5"})
    assert any("probe outside domain" in d for d in diags)
    assert all(d.startswith("probes:") for d in diags)


def test_unstable_dt_factor():
    diags = validate_config({"scheme.dt_factor": "2"})
    assert any("stability: dt_factor exceeds explicit limit" in d for d in diags)


def test_several_problems_reported_together():
    diags = validate_config({"problem.k_min": "2", "schemes": "upwind", "bogus": "1"})
    keys = {d.split(":")[0] for d in diags}
    assert {"problem.k_min", "schemes", "bogus"} <= keys
    with pytest.raises(ConfigError):
        build_config({"schemes": "upwind"})


def test_parse_errors():
    assert parse_config_text("a = 1 # note\n\n# only a comment\nb=x") == {"a": "1", "b": "x"}
    with pytest.raises(ConfigError):
        parse_config_text("no equals sign")


def test_dt_sweep_labels():
    cfg = build_config(preset_raw("arithmetic-dt"))
    labels = {r.label for r in cfg.runs()}
    assert labels == {"arithmetic_dt32", "arithmetic_dt64"}


def test_run_writes_outputs(tmp_path):
    cfg = write_config(tmp_path, SMALL)
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--output-dir", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    for label in ("sam_jump", "integral"):
        for n in (25, 50):
            stem = f"{label}_N{n}"
            assert {f"{stem}_probe_x0.32.csv", f"{stem}_probe_x0.25.csv",
                    f"{stem}_snapshots.csv", f"{stem}_front.csv"} <= names
    head = (out / "sam_jump_N25_probe_x0.32.csv").read_text().splitlines()
    assert head[0] == "t,p"
    assert "e" in head[1]
    snap = np.loadtxt(out / "integral_N50_snapshots.csv", delimiter=",", skiprows=1)
    assert snap.shape == (2 * 51, 4)
    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[0].split(",")[:6] == ["scheme", "N", "dx", "dt_factor", "l2", "linf"]
    assert "order_l2" in summary[0]
    assert len(summary) == 5
    row = summary[1].split(",")
    assert row[0] == "sam_jump" and row[1] == "25"
    assert np.isfinite(float(row[8]))


def test_runs_are_deterministic_and_parallel_safe(tmp_path):
    cfg = write_config(tmp_path, SMALL)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(cfg), "--output-dir", str(a)]) == EXIT_OK
    assert main(["run", str(cfg), "--output-dir", str(b), "--jobs", "2"]) == EXIT_OK
    for f in sorted(a.iterdir()):
        assert f.read_bytes() == (b / f.name).read_bytes(), f.name


def test_refined_run_and_preset_name(tmp_path):
    text = SMALL.replace("schemes = sam_jump, integral", "schemes = integral_amr\namr.n_inner = 4")
    cfg = write_config(tmp_path, text)
    assert main(["run", str(cfg), "--output-dir", str(tmp_path / "o")]) == EXIT_OK
    assert (tmp_path / "o" / "integral_amr_N25_front.csv").exists()


def test_config_error_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, "probes = 1.5\n")
    assert main(["run", str(cfg)]) == EXIT_CONFIG
    assert "probe outside domain" in capsys.readouterr().err
    assert main(["validate", str(cfg)]) == EXIT_CONFIG
    assert main(["run", "no-such-preset-or-file"]) == EXIT_CONFIG
    assert main(["presets", "nope"]) == EXIT_CONFIG


def test_numerical_failure_from_run_experiment(tmp_path):
    cfg = build_config(parse_config_text("grids = 200\nschemes = arithmetic\n"), tmp_path)
    scheme = cfg.schemes[0][0].__class__("arithmetic", dt_factor=2.0)
    cfg = cfg.__class__(**{**cfg.__dict__, "schemes": ((scheme, False),)})
    msgs = []
    assert run_experiment(cfg, log=msgs.append) == EXIT_NUMERICAL
    assert "numerical failure" in msgs[0]


def test_validate_and_presets_commands(capsys):
    assert main(["validate", "table-appendix-b"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "ok"
    assert main(["presets"]) == EXIT_OK
    assert "waiting-time" in capsys.readouterr().out
    assert main(["presets", "fig-intro"]) == EXIT_OK
    text = capsys.readouterr().out
    assert validate_config(parse_config_text(text)) == []


def test_shipped_config_files_match_presets():
    root = Path(__file__).resolve().parents[1] / "configs"
    files = sorted(root.glob("*.cfg"))
    assert {f.stem for f in files} == set(PRESETS)
    for f in files:
        raw = parse_config_text(f.read_text())
        assert validate_config(raw) == []
        assert raw == preset_raw(f.stem)
