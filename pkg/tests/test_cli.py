import csv
import json
import math

import pytest

from ibc.cli import ConfigError, main, parse_config
from ibc.experiments import EXPERIMENTS


def write(tmp_path, text, name="cfg.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_valid():
    cfg = parse_config("experiment = bisection\nn = 20")
    assert cfg.experiment == "bisection" and cfg.params["n"] == [20]
    assert cfg.params["seed"] == 42 and cfg.seed_defaulted


def test_parse_comments_and_lists():
    cfg = parse_config("# header\nexperiment = kashin  # trailing\nm = 2, 4\n\nseed = 7\n")
    assert cfg.params["m"] == [2, 4] and cfg.params["seed"] == 7 and not cfg.seed_defaulted


def test_parse_range_error_names_key():
    with pytest.raises(ConfigError, match=r"line 1: t must be positive"):
        parse_config("t = -1")
    with pytest.raises(ConfigError, match="eps"):
        parse_config("experiment = sobolev-cone\neps = 0.1, -0.2")


@pytest.mark.parametrize("text, pattern", [
    ("experiment = bisection\nfoo = 1", r"line 2: unknown key 'foo'"),
    ("experiment = nope", "unknown experiment"),
    ("n = 3", "missing 'experiment'"),
    ("experiment = bisection\nn 3", "line 2"),
    ("experiment = bisection\nn = 1\nn = 2", "duplicate"),
    ("experiment = bisection\nn = 1.5", "line 2"),
])
def test_parse_errors(text, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text)


def test_run_kashin_rows_and_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("IBC_OUT", str(tmp_path / "out"))
    assert main(["run", write(tmp_path, "experiment = kashin\nm = 8\nbp_points = 0\n")]) == 0
    rows = read_csv(tmp_path / "out" / "kashin" / "results.csv")
    assert [int(r["n"]) for r in rows] == list(range(1, 9))
    for r in rows:
        assert float(r["sqrt_(m-n)/m"]) == math.sqrt((8 - int(r["n"])) / 8)
    summary = json.loads((tmp_path / "out" / "kashin" / "summary.json").read_text())
    assert summary["seed"] == 42 and summary["seed_defaulted"] and summary["pass"]
    assert summary["criterion"]
    assert all({"name", "bound", "observed", "pass"} <= set(c) for c in summary["claims"])


def test_bisection_columns_and_byte_identical_rerun(tmp_path, monkeypatch):
    cfg = write(tmp_path, "experiment = bisection\nn = 1, 8, 20\nfunctions = 5\nseed = 3\n")
    blobs = []
    for i in range(2):
        monkeypatch.setenv("IBC_OUT", str(tmp_path / f"o{i}"))
        assert main(["run", cfg]) == 0
        blobs.append((tmp_path / f"o{i}" / "bisection" / "results.csv").read_bytes())
    assert blobs[0] == blobs[1]
    header = blobs[0].decode().splitlines()[0].split(",")
    assert header[:2] == ["n", "adaptive_error"] and "lower_bound_1_over_8n" in header


def test_out_key_and_env_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("IBC_OUT", raising=False)
    cfg = write(tmp_path, f"experiment = kurtosis\nout = {tmp_path / 'from_cfg'}\n")
    assert main(["run", cfg]) == 0
    assert (tmp_path / "from_cfg" / "kurtosis" / "summary.json").exists()
    monkeypatch.setenv("IBC_OUT", str(tmp_path / "from_env"))
    assert main(["run", cfg]) == 0
    assert (tmp_path / "from_env" / "kurtosis" / "summary.json").exists()


def test_claim_failure_exit_1(tmp_path, monkeypatch, capsys):
    import ibc.cli as cli
    from ibc.experiments import Claim, ExperimentResult

    def failing(name, params):
        return ExperimentResult(name, "crit", ["x"], [{"x": 1}], [Claim("too big", 1.0, 2.0)],
                                info={"params": params})

    monkeypatch.setattr(cli, "run", failing)
    monkeypatch.setenv("IBC_OUT", str(tmp_path))
    assert main(["run", write(tmp_path, "experiment = kurtosis\n")]) == 1
    assert "[FAIL] too big" in capsys.readouterr().out
    summary = json.loads((tmp_path / "kurtosis" / "summary.json").read_text())
    assert summary["pass"] is False and summary["claims"][0]["pass"] is False


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main([]) == 2
    assert main(["bogus"]) == 2
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2
    assert main(["run", write(tmp_path, "t = -1")]) == 2
    assert "t must be positive" in capsys.readouterr().err
    assert main(["run", write(tmp_path, "experiment = bisection\nfoo = 1")]) == 2


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out
