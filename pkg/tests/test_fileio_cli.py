import json
import math
from pathlib import Path

import numpy as np
import pytest

from uwbag.cli import main
from uwbag.fileio import CirFileError, RunConfig, read_cir_file, write_cir_file
from uwbag.svmodel import Cir, synthesize_ensemble


def _read(path):
    return Path(path).read_bytes()


def test_cir_file_roundtrip(tmp_path, hover_rx1_vv_15):
    scans = synthesize_ensemble(hover_rx1_vv_15, 5, seed=2)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_cir_file(p1, scans, seed=2, scenario="hover_open,rx1,vv,x=15")
    loaded, header = read_cir_file(p1)
    assert header["n_scans"] == "5"
    assert len(loaded) == 5
    write_cir_file(p2, loaded, seed=2, scenario="hover_open,rx1,vv,x=15")
    assert _read(p1) == _read(p2)  # stable at 9 significant digits
    for orig, back in zip(scans, loaded):
        assert np.allclose(orig.delays, back.delays, rtol=1e-8)
        assert np.allclose(orig.amplitudes, back.amplitudes, rtol=1e-7)


def test_cir_file_reports_bad_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "# uwbag-cir format_version=1\n"
        "# sample_spacing_ns=0.06\n"
        "# window_ns=100\n"
        "# n_scans=1\n"
        "# seed=none\n"
        "# scenario=none\n"
        "scan_id,delay_ns,real,imag\n"
        "0,0,1\n"
    )
    with pytest.raises(CirFileError) as err:
        read_cir_file(path)
    assert err.value.line_no == 8
    assert "4 columns" in str(err.value)


def test_cir_file_rejects_unknown_scan_id(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        "# uwbag-cir format_version=1\n"
        "# sample_spacing_ns=0.06\n"
        "# window_ns=100\n"
        "# n_scans=1\n"
        "# seed=none\n"
        "# scenario=none\n"
        "scan_id,delay_ns,real,imag\n"
        "3,0,1,0\n"
    )
    with pytest.raises(CirFileError):
        read_cir_file(path)


def test_run_config_roundtrip():
    cfg = RunConfig(seed=9, n_scans=10, scenario="moving_open", rx="rx2", orientation="vh", x_m=30.0)
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json('{"bogus_field": 1}')


def _synth(tmp_path, name, *extra):
    out = tmp_path / name
    rc = main(
        [
            "synthesize", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vv",
            "--x", "15", "--seed", "7", "--scans", "20", "--out", str(out), *extra,
        ]
    )
    assert rc == 0
    return out


def test_cli_synthesize_deterministic(tmp_path):
    a = _synth(tmp_path, "a")
    b = _synth(tmp_path, "b")
    assert _read(a / "cir.csv") == _read(b / "cir.csv")


def test_cli_config_reproduces_run(tmp_path):
    a = _synth(tmp_path, "a")
    out_b = tmp_path / "b"
    rc = main(["synthesize", "--config", str(a / "run_config.json"), "--out", str(out_b)])
    assert rc == 0
    assert _read(a / "cir.csv") == _read(out_b / "cir.csv")


def test_cli_analyze_outputs(tmp_path):
    run = _synth(tmp_path, "a")
    rc = main(["analyze", str(run / "cir.csv"), "--out", str(run)])
    assert rc == 0
    stats = (run / "stats.csv").read_text().splitlines()
    header, row = stats
    assert header.startswith("rms_ds_ns,k_factor_db")
    fields = row.split(",")
    assert float(fields[0]) > 0.0  # finite rms delay spread
    assert fields[1] != ""  # VV: K-factor present
    rc2 = main(["analyze", str(run / "cir.csv"), "--out", str(tmp_path / "c")])
    assert rc2 == 0
    for name in ("pdp.csv", "clusters.csv", "stats.csv"):
        assert _read(run / name) == _read(tmp_path / "c" / name)


def test_cli_analyze_vh_emits_empty_k(tmp_path):
    out = tmp_path / "vh"
    rc = main(
        [
            "synthesize", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vh",
            "--x", "15", "--seed", "3", "--scans", "10", "--out", str(out),
        ]
    )
    assert rc == 0
    assert main(["analyze", str(out / "cir.csv"), "--out", str(out)]) == 0
    row = (out / "stats.csv").read_text().splitlines()[1]
    assert row.split(",")[1] == ""


def test_cli_analyze_single_tap_file(tmp_path):
    path = tmp_path / "single.csv"
    write_cir_file(path, [Cir(delays=[0.0], amplitudes=[1.0 + 0j])])
    assert main(["analyze", str(path), "--out", str(tmp_path)]) == 0
    row = (tmp_path / "stats.csv").read_text().splitlines()[1]
    assert float(row.split(",")[0]) == 0.0  # rms of one tap


def test_cli_pathloss_values_and_crossover(tmp_path):
    assert main(["pathloss", "--scenario", "hover_open", "--rx", "rx1",
                 "--orientation", "vv", "--out", str(tmp_path)]) == 0
    rows = {}
    for line in (tmp_path / "sweep.csv").read_text().splitlines()[1:]:
        f = line.split(",")
        rows[(float(f[0]), float(f[1]))] = float(f[6])
    assert rows[(15.0, 10.0)] == pytest.approx(71.10, abs=0.005)
    assert rows[(30.0, 10.0)] == pytest.approx(74.84, abs=0.005)
    assert rows[(15.0, 30.0)] == pytest.approx(81.88, abs=0.005)
    assert rows[(15.0, 10.0)] < rows[(30.0, 10.0)]
    assert rows[(15.0, 30.0)] > rows[(30.0, 30.0)]
    assert len(rows) == 6


def test_cli_pathloss_vh_penalty(tmp_path):
    assert main(["pathloss", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vh",
                 "--x", "15", "--h", "10", "--out", str(tmp_path)]) == 0
    row = (tmp_path / "sweep.csv").read_text().splitlines()[1].split(",")
    assert float(row[5]) == pytest.approx(12.9)
    assert float(row[6]) == pytest.approx(84.0, abs=0.005)


def test_cli_pathloss_vh_without_entry_fails(tmp_path):
    rc = main(["pathloss", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vh",
               "--x", "15", "--h", "50", "--out", str(tmp_path)])
    assert rc == 2


def test_cli_pathloss_foliage_clamp(tmp_path):
    assert main(["pathloss", "--scenario", "hover_foliage", "--rx", "rx1",
                 "--orientation", "vv", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    totals = {line.split(",")[6] for line in lines}
    flags = {line.split(",")[8] for line in lines}
    assert totals == {"92.38"}
    assert flags == {"1"}


def test_cli_pathloss_rx2_gamma_column(tmp_path):
    assert main(["pathloss", "--scenario", "hover_open", "--rx", "rx2", "--orientation", "vv",
                 "--x", "15", "--h", "10", "--out", str(tmp_path)]) == 0
    row = (tmp_path / "sweep.csv").read_text().splitlines()[1].split(",")
    assert float(row[7]) == pytest.approx(0.5682545650765154, rel=1e-6)


def test_cli_estimate_roundtrip_format(tmp_path):
    run = _synth(tmp_path, "a")
    assert main(["estimate", str(run / "cir.csv"), "--out", str(run)]) == 0
    est = json.loads((run / "estimate.json").read_text())
    assert est["scenario"] == "hover_open"
    assert est["n_scans"] == 20
    assert math.isfinite(est["chi_per_ns"])
    # the estimate row is re-ingestable as a custom catalog row
    out2 = tmp_path / "resynth"
    rc = main(
        [
            "synthesize", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vv",
            "--x", "15", "--seed", "1", "--scans", "5",
            "--params-json", str(run / "estimate.json"), "--out", str(out2),
        ]
    )
    assert rc == 0
    assert (out2 / "cir.csv").exists()


def test_cli_estimate_single_scan_warns(tmp_path, capsys):
    out = tmp_path / "one"
    main(["synthesize", "--scenario", "hover_open", "--rx", "rx1", "--orientation", "vv",
          "--x", "15", "--seed", "4", "--scans", "1", "--out", str(out)])
    assert main(["estimate", str(out / "cir.csv"), "--out", str(out)]) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.out
    assert "fewer than 10 scans" in captured.out


def test_cli_estimate_deterministic(tmp_path):
    run = _synth(tmp_path, "a")
    main(["estimate", str(run / "cir.csv"), "--out", str(tmp_path / "e1")])
    main(["estimate", str(run / "cir.csv"), "--out", str(tmp_path / "e2")])
    assert _read(tmp_path / "e1" / "estimate.json") == _read(tmp_path / "e2" / "estimate.json")


def test_cli_catalog_matches_builtin(tmp_path, capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    from uwbag.catalog import catalog_as_dict

    assert json.loads(out) == catalog_as_dict()
    assert main(["catalog", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "catalog.json").read_text()) == catalog_as_dict()


def test_cli_exit_codes(tmp_path):
    assert main(["synthesize", "--scans", "0", "--out", str(tmp_path)]) == 2
    assert main(["analyze", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("not a cir file\n")
    assert main(["analyze", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["pathloss", "--x", "-5", "--out", str(tmp_path)]) == 2


def test_cli_decay_flag_changes_output(tmp_path):
    a = _synth(tmp_path, "a")
    b = _synth(tmp_path, "b", "--decay-as-time-constant")
    assert _read(a / "cir.csv") != _read(b / "cir.csv")
    cfg = json.loads((b / "run_config.json").read_text())
    assert cfg["decay_as_time_constant"] is True


def test_estimate_json_undefined_params_are_null_and_rejected(tmp_path):
    from uwbag.catalog import params_from_row
    from uwbag.fileio import estimate_to_json
    from uwbag.analysis import SVEstimate

    est = SVEstimate(
        n_c_mean=1.0, chi=math.nan, varsigma=0.1, eta=0.2, gamma=1.0,
        omega00=1.0, n_scans=1, flags=["chi undefined"],
    )
    row = json.loads(estimate_to_json(est, "hover_open,rx1,vv,x=15"))
    assert row["chi_per_ns"] is None
    with pytest.raises(ValueError, match="undefined parameters"):
        params_from_row(row)
