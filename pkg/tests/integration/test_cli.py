"""
test_cli.py
Integration tests for the uniwkb command line: every subcommand end to end,
artifact contents, run logging, exit codes and determinism.

cli and artifact_store are imported inside each test because the autouse
fixture reloads them against a temporary artifacts directory.
"""
import json
import math
from pathlib import Path

import pytest


def _run(argv, capsys):
    from uniwkb.cli import main
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out.strip(), err


# ── spectrum ──────────────────────────────────────────────────────────────────

def test_spectrum_improved_equals_exact(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact, read_run_records

    code, out, _ = _run(["spectrum", "--potential", "hydrogen", "--params", "l=0",
                         "--methods", "exact,wkb,improved", "--n", "0..5", "--format", "csv"], capsys)
    assert code == 0
    path = Path(out)
    assert path.exists() and path.suffix == ".csv"

    meta, columns, rows = read_csv_artifact(path)
    assert columns == ["n", "method", "E"]
    assert meta["potential"] == "hydrogen"
    assert meta["subcommand"] == "spectrum"
    assert "l=0" in meta["params"]
    assert meta["version"]

    energies = {(int(n), method): float(E) for n, method, E in rows}
    for n in range(6):
        assert energies[(n, "improved")] == pytest.approx(energies[(n, "exact")], rel=1e-7)
        assert energies[(n, "wkb")] != pytest.approx(energies[(n, "exact")], rel=1e-7)

    records = read_run_records()
    assert len(records) == 1
    assert records[0]["exit_code"] == 0
    assert records[0]["artifact"] == str(path)


def test_bogus_method_exits_2_without_artifact(capsys, temp_artifacts_dir):
    from uniwkb.services.storage.artifact_store import read_run_records

    code, out, err = _run(["spectrum", "--potential", "hydrogen", "--n", "0..5", "--methods", "bogus"], capsys)
    assert code == 2
    assert out == ""
    assert "bogus" in err and "improved" in err
    assert not list(temp_artifacts_dir.glob("spectrum/*"))
    assert read_run_records()[-1]["exit_code"] == 2


def test_unknown_potential_exits_2(capsys):
    code, _, err = _run(["spectrum", "--potential", "square-well"], capsys)
    assert code == 2
    assert "hydrogen" in err


def test_exact_needs_catalog_potential(capsys):
    code, _, err = _run(["spectrum", "--expr", "x**2/2", "--methods", "exact", "--n", "0"], capsys)
    assert code == 2
    assert "catalog" in err


def test_missing_bound_state_exits_2(capsys):
    code, _, _ = _run(["spectrum", "--potential", "morse", "--params", "v0=1,v1=-2",
                       "--methods", "exact", "--n", "3"], capsys)
    assert code == 2


# ── transmit and compare ──────────────────────────────────────────────────────

def test_transmit_writes_curve(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact

    code, out, _ = _run(["transmit", "--potential", "poschl-teller-barrier", "--params", "v0=2.5",
                         "--emin", "0.1", "--emax", "4", "--steps", "20", "--methods", "improved,closed-form"],
                        capsys)
    assert code == 0
    _, columns, rows = read_csv_artifact(Path(out))
    assert columns == ["E", "method", "T"]
    assert len(rows) == 40
    improved = [float(T) for _, m, T in rows if m == "improved"]
    closed = [float(T) for _, m, T in rows if m == "closed-form"]
    assert improved == pytest.approx(closed, rel=1e-8)
    assert improved == sorted(improved)


def test_compare_barrier_layout(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact

    code, out, _ = _run(["compare", "--potential", "poschl-teller-barrier", "--params", "v0=2.5,alpha=1",
                         "--emin", "0.15", "--emax", "2.45", "--steps", "12",
                         "--methods", "improved,wkb,exact-numeric"], capsys)
    assert code == 0
    _, columns, rows = read_csv_artifact(Path(out))
    assert columns == ["E", "T_improved", "T_wkb", "T_exact-numeric"]
    assert len(rows) == 12
    for row in rows:
        _, improved, wkb, oracle = (float(v) for v in row)
        assert abs(improved - oracle) < abs(wkb - oracle)
        assert abs(improved - oracle) <= 0.02


def test_compare_well_layout(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact

    code, out, _ = _run(["compare", "--potential", "poschl-teller-well", "--params", "v0=-10",
                         "--n", "0..3", "--methods", "exact,improved,numerov"], capsys)
    assert code == 0
    _, columns, rows = read_csv_artifact(Path(out))
    assert columns == ["n", "E_exact", "E_improved", "E_numerov"]
    for _, exact, improved, numerov in rows:
        assert float(improved) == pytest.approx(float(exact), rel=1e-7)
        assert float(numerov) == pytest.approx(float(exact), abs=1e-6)


def test_transmit_for_half_line_exits_2(capsys):
    code, _, _ = _run(["transmit", "--potential", "hydrogen", "--emin", "0.1", "--emax", "1"], capsys)
    assert code == 2


# ── wavefunction and error-control ────────────────────────────────────────────

def test_wavefunction_well(capsys):
    from uniwkb.services.storage.artifact_store import read_json_artifact
    from uniwkb.services.wavefunction.uniform import REGIONS

    code, out, _ = _run(["wavefunction", "--potential", "poschl-teller-well", "--params", "v0=-10",
                         "--n", "2", "--xmin", "-4", "--xmax", "4", "--points", "201",
                         "--methods", "improved,numerov", "--format", "json"], capsys)
    assert code == 0
    payload = read_json_artifact(Path(out))
    assert payload["meta"]["n"] == 2
    assert set(payload["meta"]["energies"]) == {"improved", "numerov"}
    data = payload["data"]
    assert len(data) == 402
    assert {row["region"] for row in data} <= set(REGIONS)
    assert all(row["psi_im"] == 0.0 for row in data)
    numerov_rows = [row for row in data if row["method"] == "numerov"]
    assert all(row["map_value"] is None for row in numerov_rows)


def test_wavefunction_rejects_several_states(capsys):
    code, _, err = _run(["wavefunction", "--potential", "poschl-teller-well", "--n", "0..2"], capsys)
    assert code == 2
    assert "single state" in err


def test_error_control_hydrogen(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact

    code, out, _ = _run(["error-control", "--potential", "hydrogen", "--params", "l=1",
                         "--energy", "-0.1", "--xmin", "0.01", "--xmax", "20", "--points", "50"], capsys)
    assert code == 0
    _, columns, rows = read_csv_artifact(Path(out))
    assert columns == ["x", "method", "E", "H", "I", "Q"]
    assert len(rows) == 50
    assert all(math.isfinite(float(row[3])) for row in rows)


# ── User-defined potentials ───────────────────────────────────────────────────

def test_user_defined_expression(capsys):
    from uniwkb.services.storage.artifact_store import read_csv_artifact

    code, out, _ = _run(["spectrum", "--expr", "x**2/2", "--methods", "improved,numerov",
                         "--n", "0..2"], capsys)
    assert code == 0
    meta, _, rows = read_csv_artifact(Path(out))
    assert meta["potential"] == "user-defined"
    assert "x**2/2" in meta["expression"]
    for n, _, E in rows:
        assert float(E) == pytest.approx(int(n) + 0.5, rel=1e-6)


def test_user_defined_bad_expression_exits_2(capsys):
    code, _, _ = _run(["spectrum", "--expr", "x**2 + y", "--n", "0"], capsys)
    assert code == 2


# ── Artifacts ─────────────────────────────────────────────────────────────────

def test_identical_requests_give_identical_artifacts(capsys):
    from uniwkb.services.storage.artifact_store import strip_timestamp

    argv = ["spectrum", "--potential", "morse", "--params", "v0=1,v1=-2",
            "--methods", "exact,wkb,improved", "--n", "0"]
    first = Path(_run(argv, capsys)[1])
    second = Path(_run(argv, capsys)[1])
    assert first != second
    assert strip_timestamp(first.read_text()) == strip_timestamp(second.read_text())


def test_json_round_trip(capsys):
    from uniwkb.services.storage.artifact_store import read_json_artifact

    code, out, _ = _run(["spectrum", "--potential", "poschl-teller-well", "--params", "v0=-10",
                         "--methods", "exact", "--n", "0..3", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(Path(out).read_text(encoding="utf-8"))
    assert payload == read_json_artifact(Path(out))
    from uniwkb.services.potentials.catalog import make_potential
    from uniwkb.services.potentials.spectra import exact_spectrum

    spec = make_potential("poschl-teller-well", {"v0": -10})
    for row in payload["data"]:
        assert row["E"] == exact_spectrum(spec, row["n"])


def test_explicit_output_path(capsys, tmp_path):
    target = tmp_path / "out" / "levels.csv"
    code, out, _ = _run(["spectrum", "--potential", "pure-oscillator-1d", "--methods", "exact",
                         "--n", "0..2", "--output", str(target)], capsys)
    assert code == 0
    assert Path(out) == target
    assert target.read_text().startswith("# version=")


def test_version_flag(capsys):
    from uniwkb import __version__
    from uniwkb.cli import main

    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_missing_subcommand_exits_2(capsys):
    code, _, _ = _run([], capsys)
    assert code == 2
