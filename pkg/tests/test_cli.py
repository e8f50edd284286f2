import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction

import mpmath
import pytest

from sixvertex import oracle
from sixvertex.cli import CSV_HEADER, main
from sixvertex.model import HomParams

ICE_ARGS = ["--lambda", "pi/2", "--eta", "pi/6"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER) and lines[-1] == ""
    return [dict(zip(CSV_HEADER, line.split(","))) for line in lines[1:-1]]


def test_z_all_methods(capsys):
    code, out, _ = run(capsys, "z", "--N", "3", "--lambda", "1.5707963", "--eta", "0.5235987", "--method", "all")
    assert code == 0
    values = [line.split()[-1] for line in out.splitlines() if line.startswith("N=3")]
    assert len(values) == 3 and len(set(values)) == 1
    assert values[0].startswith("1.91811")
    assert "deviation" in out


def test_z_exact_ice_point(capsys):
    code, out, _ = run(capsys, "z", "--N", "3", *ICE_ARGS, "--format", "csv")
    rows = csv_rows(out)
    with mpmath.workdps(60):
        want = 7 * (mpmath.sqrt(3) / 2) ** 9
        assert abs(mpmath.mpf(rows[0]["value"]) - want) < 1e-45
    assert rows[0]["method"] == "det-hom" and rows[0]["r"] == ""


def test_efp_examples(capsys):
    code, out, _ = run(capsys, "efp", "--N", "3", "--r", "2", "--s", "1", "--method", "mir1", "--format", "csv")
    assert code == 0
    value = csv_rows(out)[0]["value"]
    assert Fraction(value).limit_denominator(100) == Fraction(5, 7)
    assert abs(mpmath.mpf(value) - mpmath.mpf(5) / 7) < 1e-48
    code, out, _ = run(capsys, "efp", "--N", "2", "--r", "1", "--s", "2", "--format", "json")
    assert code == 0
    assert mpmath.mpf(json.loads(out)[0]["value"]) == 0


def test_efp_all_methods(capsys):
    code, out, _ = run(capsys, "efp", "--N", "4", "--r", "3", "--s", "2", "--method", "all", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert {r["method"] for r in records} == {"det-hom", "ortho", "mir1", "mir2", "mir3", "oracle", "qism"}


def test_inhomogeneous_input(capsys):
    argv = ["--lambdas", "1.4", "1.6", "1.75", "--nus", "0", "0.1", "-0.1", "--eta", "0.4"]
    code, out, _ = run(capsys, "z", *argv, "--method", "all", "--format", "json")
    assert code == 0 and {r["method"] for r in json.loads(out)} == {"oracle", "det-inhom", "qism"}
    code, out, _ = run(capsys, "efp", *argv, "--r", "2", "--s", "2", "--method", "all", "--format", "json")
    assert code == 0 and {r["method"] for r in json.loads(out)} == {"sum-inhom", "oracle", "qism"}


def test_hgen(capsys):
    code, out, _ = run(capsys, "hgen", "--N", "3", *ICE_ARGS, "--method", "all", "--format", "csv")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 6
    for row in rows:
        want = Fraction((2, 3, 2)[int(row["r"]) - 1], 7)
        assert abs(mpmath.mpf(row["value"]) - mpmath.mpf(want.numerator) / want.denominator) < 1e-48


def test_sweep_grid(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "sweep", "--N", "3", "--smax", "1", *ICE_ARGS, "--format", "csv", "--output", str(path))
    assert code == 0
    data = path.read_bytes()
    assert b"\r" not in data
    rows = csv_rows(data.decode("utf-8"))
    got = [mpmath.mpf(r["value"]) for r in rows]
    for x, want in zip(got, (mpmath.mpf(2) / 7, mpmath.mpf(5) / 7, 1)):
        assert abs(x - want) < 1e-48


def test_sweep_matches_oracle_and_zero_structure(capsys):
    p = HomParams("pi/2", "pi/6")
    table = oracle.brute_efp_table(p.to_inhom(2))
    code, out, _ = run(capsys, "sweep", "--N", "2", "--smax", "2", *ICE_ARGS, "--format", "csv", "--digits", "100")
    assert code == 0
    for row in csv_rows(out):
        r, s = int(row["r"]), int(row["s"])
        value = p.ctx.mpf(row["value"])
        assert abs(value - table[r, s]) < 1e-80
        if s > r:
            assert row["value"] == "0"


def test_sweep_is_deterministic(capsys, tmp_path):
    outs = []
    for i, workers in enumerate(("1", "1", "2")):
        path = tmp_path / f"run{i}.csv"
        argv = ["sweep", "--N", "4", "--smax", "2", "--lambda", "1.3", "--eta", "0.4", "--format", "csv",
                "--output", str(path), "--workers", workers]
        assert run(capsys, *argv)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_sweep_svg(capsys):
    code, out, _ = run(capsys, "sweep", "--N", "4", "--smax", "3", *ICE_ARGS, "--format", "svg")
    assert code == 0
    root = ET.fromstring(out.split("\n", 1)[1])
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    assert len(rects) == 12
    fills = {r.get("fill") for r in rects}
    assert "rgb(255,255,255)" in fills and "rgb(0,0,0)" in fills
    assert "href" not in out


def test_usage_errors(capsys):
    for argv in (
        ["z", "--N", "3", "--precision", "16"],
        ["efp", "--N", "3", "--r", "4", "--s", "1"],
        ["efp", "--N", "5", "--r", "4", "--s", "3", "--method", "mir3"],
        ["z", "--N", "3", "--method", "nonsense"],
        ["z", "--N", "3", "--format", "svg"],
        ["z", "--N", "3", "--lambda", "half"],
        ["sweep", "--N", "3", "--smax", "4"],
        ["validate", "--only", "nothing"],
        ["frobnicate"],
    ):
        with pytest.raises(SystemExit) as exc:
            code = main(argv)
            raise SystemExit(code)
        assert exc.value.code == 2, argv
    capsys.readouterr()


def test_numeric_failure_and_tolerance(capsys):
    code, _, err = run(capsys, "z", "--lambdas", "1.2", "1.2", "--eta", "0.3", "--method", "det-inhom")
    assert code == 1 and "numeric failure" in err
    code, _, err = run(capsys, "z", "--N", "3", *ICE_ARGS, "--method", "all", "--precision", "40",
                       "--tolerance", "0")
    assert code in (0, 1)
    if code == 1:
        assert "exceeds tolerance" in err


def test_validate_only_recurrences(capsys):
    code, out, _ = run(capsys, "validate", "--only", "recurrences")
    assert code == 0
    report = json.loads(out)
    assert [r["name"] for r in report] == ["rec-z", "rec-efp"]
    for r in report:
        assert set(r) >= {"name", "anchor", "max_dev", "tol", "pass"}
        assert isinstance(r["pass"], bool) and r["schema"] == "1"
        assert float(r["max_dev"]) <= float(r["tol"])


def test_validate_low_precision_warns(capsys):
    code, out, _ = run(capsys, "validate", "--only", "ice-counts", "--precision", "32")
    report = json.loads(out)
    assert any("homogeneous 5x5" in w for w in report[0]["warnings"])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sixvertex", "efp", "--N", "2", "--r", "1", "--s", "1",
                          "--lambda", "pi/2", "--eta", "pi/6", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[1].startswith("2,1,1,0.5")
