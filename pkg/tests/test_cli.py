import json
from pathlib import Path

import pytest

from dispdecay import cli


SMALL_KERNEL = {"relation": "power(2)", "n": 1, "k": 0,
                "t_min": 10.0, "t_max": 60.0, "n_t": 8}


def read_report(out_dir):
    return json.loads((Path(out_dir) / "report.json").read_text())


def test_hypotheses_command(tmp_path):
    # the default scenario expects wave to lack exactly the curvature checks
    status = cli.main(["hypotheses", "--out", str(tmp_path)])
    assert status == 0
    report = read_report(tmp_path)
    by_name = {r["relation"]: r for r in report["records"]}
    assert by_name["klein_gordon"]["pass"]
    assert by_name["beam"]["pass"]
    assert by_name["schrodinger4"]["pass"]
    assert not by_name["wave"]["pass"] and by_name["wave"]["verdict"]
    assert by_name["wave"]["expected"] == ["h1", "h2"]
    checks = by_name["klein_gordon"]["checks"]
    assert set(checks) == {"h1", "h2", "h3", "h4"}


def test_hypotheses_failing_expectation(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"relations": ["klein_gordon", "wave"]}))
    status = cli.main(["hypotheses", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 1  # without the expectation, wave's record fails


def test_unknown_relation_is_config_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"relation": "airy", "n": 1, "k": 0}))
    status = cli.main(["kernel-decay", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 2


def test_malformed_config_is_config_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    status = cli.main(["hypotheses", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 2


def test_bessel_selftest_emits_csv(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_points": 50}))
    status = cli.main(["bessel-selftest", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 0
    lines = (tmp_path / "bessel_selftest.csv").read_text().splitlines()
    assert lines[0] == "nu,r,value,reference,abs_error"
    assert len(lines) == 1 + 4 * 50


def test_kernel_decay_records_carry_verdict_fields(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_KERNEL))
    status = cli.main(["kernel-decay", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 0
    record = read_report(tmp_path)["records"][0]
    for key in ("predicted", "fitted", "slack", "verdict", "residual"):
        assert key in record
    csv_lines = (tmp_path / "kernel_decay.csv").read_text().splitlines()
    assert csv_lines[0] == "n,k,t,sup_norm"
    assert len(csv_lines) == 9


def test_hls_command_and_inadmissible_spec(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gamma1": 0.5, "gamma2": 2.0, "p": 2, "q": 2,
                               "n": 1, "trials": 4, "grid_n": 1024}))
    assert cli.main(["hls", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    cfg.write_text(json.dumps({"gamma1": 1.0, "gamma2": 1.0, "p": 2, "q": 2, "n": 1}))
    assert cli.main(["hls", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_nonlinear_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "kg", "n": 1, "kappa": 3.0,
                               "N": 128, "L": 32.0, "T": 2.0, "M_t": 32}))
    status = cli.main(["nonlinear", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 0
    record = read_report(tmp_path)["records"][0]
    assert record["conditions"]["pass"]
    assert all(r < 0.5 for r in record["ratios"])


def test_merge_behaviour(tmp_path):
    good = {"records": [{"label": "a", "verdict": True}], "pass": True}
    bad = {"records": [{"label": "b", "verdict": False,
                        "note": "kept verbatim"}], "pass": False}
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    p1.write_text(json.dumps(good))
    p2.write_text(json.dumps(bad))
    merged = cli.report_merge([p1, p1])
    assert merged["pass"] and len(merged["records"]) == 2
    merged = cli.report_merge([p1, p2])
    assert not merged["pass"]
    assert merged["records"][1]["note"] == "kept verbatim"
    empty = cli.report_merge([])
    assert empty["pass"] and empty["no_data"]


def test_report_determinism_excluding_timestamp(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_KERNEL))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert cli.main(["kernel-decay", "--config", str(cfg),
                         "--out", str(out), "--seed", "0"]) == 0
        text = (out / "report.json").read_text()
        outs.append("\n".join(l for l in text.splitlines()
                              if '"timestamp"' not in l))
    assert outs[0] == outs[1]


def test_custom_relation_from_expressions(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "relation": {"name": "kg_custom", "phi": "sqrt(1+r**2)",
                     "dphi": "r/sqrt(1+r**2)", "d2phi": "(1+r**2)**-1.5",
                     "m1": 1.0, "alpha1": -1.0, "m2": 2.0, "alpha2": 2.0},
        "n": 1, "k": 0, "t_min": 50.0, "t_max": 400.0, "n_t": 8}))
    status = cli.main(["kernel-decay", "--config", str(cfg), "--out", str(tmp_path)])
    assert status == 0
    record = read_report(tmp_path)["records"][0]
    assert record["relation"] == "kg_custom"
    assert record["branch"] == "B" and record["theta_star"] == 1.0
    profile_lines = (tmp_path / "kernel_profile.csv").read_text().splitlines()
    assert profile_lines[0] == "n,k,t,s,re,im,abs,err_est"


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
