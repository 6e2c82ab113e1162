import csv
import io
import json

import pytest

from thetalattice.cli import EXIT_CHECKS, EXIT_DOMAIN, EXIT_IO, EXIT_OK, main, parse_values


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_text(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "2", "--b", "0", "--z", "0.5,0.8660254037844386")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert float(lines[0].split("=")[1]) == pytest.approx(0.004894733476085491, rel=1e-14)
    assert len(lines[0].split("=")[1].strip().replace("0.00", "", 1)) == 17


def test_eval_critical_mixing_positive(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "2", "--b", "2.828427", "--z", "0.5,10", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["value"] > 0


def test_eval_domain_error(capsys):
    code, _, err = run(capsys, "eval", "--alpha", "2", "--b", "0", "--z", "0.5,-1")
    assert code == EXIT_DOMAIN and "upper half-plane" in err


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["eval", "--alpha", "two"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["eval", "--alpha", "2"])
    assert e.value.code == 2


def test_replay_round_trip_is_bit_exact(tmp_path, capsys):
    first = tmp_path / "e.json"
    assert main(["eval", "--alpha", "2.3", "--b", "1.7", "--z", "0.31,1.9", "--format", "json", "--out", str(first)]) == 0
    code, out, _ = run(capsys, "eval", "--replay", str(first), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == json.loads(first.read_text())


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--z", "0,0.5", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["x"] == 0.0 and rec["y"] == 2.0


def test_sweep_csv_schema_and_order(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code = main(["sweep", "--alpha", "3,2", "--b", "2,0,1", "--out", str(path)])
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert list(rows[0]) == ["alpha", "b", "phase", "y_b", "energy"]
    keys = [(float(r["alpha"]), float(r["b"])) for r in rows]
    assert keys == sorted(keys) and len(keys) == 6
    assert all(r["phase"] == "hexagonal" for r in rows)


def test_sweep_json_has_error_estimates(capsys):
    code, out, _ = run(capsys, "sweep", "--alpha", "2", "--b", "2.9", "--format", "json")
    (row,) = json.loads(out)
    assert row["phase"] == "nonexistent" and row["y_b"] is None and "est_error" in row


def test_sweep_values_survive_csv(tmp_path):
    path = tmp_path / "s.csv"
    main(["sweep", "--alpha", "2", "--b", "2.815", "--out", str(path)])
    (row,) = list(csv.DictReader(io.StringIO(path.read_text())))
    from thetalattice.phases import classify_phase
    from thetalattice.points import EnergyParams

    ref = classify_phase(EnergyParams(2.0, 2.815))
    assert float(row["y_b"]) == ref.y_b and float(row["energy"]) == ref.energy_at_min


def test_io_error_exit_three(capsys):
    code, _, err = run(capsys, "sweep", "--alpha", "2", "--b", "1", "--out", "/nonexistent/dir/x.csv")
    assert code == EXIT_IO


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# search settings\ny_max = 12\nabs_tol = 1e-13\n")
    code, out, _ = run(capsys, "minimize", "--alpha", "2", "--b", "2.815", "--config", str(cfg), "--format", "json")
    assert code == 0 and json.loads(out)["kind"] == "ceiling_hit"
    code, out, _ = run(capsys, "minimize", "--alpha", "2", "--b", "2.815", "--config", str(cfg), "--y-max", "50",
                       "--format", "json")
    assert json.loads(out)["kind"] == "interior"


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("speed = 3\n")
    with pytest.raises(SystemExit) as e:
        main(["eval", "--alpha", "2", "--b", "0", "--z", "0,1", "--config", str(cfg)])
    assert e.value.code == 2


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--alpha", "2", "--tol", "1e-3")
    assert code == 0 and out.startswith("b_c1 = 2.76")


def test_verify_subset_passes(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--suite", "elementary_inequality,theta_half_ratio", "--grid", "5")
    report = json.loads(out)
    assert code == EXIT_OK and {r["name"] for r in report} == {"elementary_inequality", "theta_half_ratio"}


def test_verify_failure_exit_four(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "laplacian_lower_bound", "--grid", "5", "--format", "csv")
    assert code == EXIT_CHECKS and "laplacian_lower_bound,False" in out


def test_parse_values():
    assert parse_values("2.80:2.803:0.001") == [2.8, 2.801, 2.802, 2.803]
    assert parse_values("1,2") == [1.0, 2.0]
