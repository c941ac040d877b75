import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bergszego.cli import main, parse_complex, parse_point


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def as_complex(s):
    return complex(s.replace("i", "j"))


@pytest.mark.parametrize(
    "text, value",
    [("0.3+0i", 0.3), ("-0.1-0.2i", -0.1 - 0.2j), ("0.5i", 0.5j), ("1e-3+2e-3i", 1e-3 + 2e-3j), ("0.25", 0.25)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_point_tuple():
    assert parse_point("(0.2,0.1i)") == (0.2, 0.1j)
    assert parse_point("0.3+0i") == (0.3,)


@pytest.mark.parametrize("bad", ["0.3 + 0i", "abc", "(0.1,)", "1+2"])
def test_parse_complex_rejects(bad):
    with pytest.raises(Exception):
        parse_point(bad)


def test_verify_holomorphic_disc(capsys):
    code, out, _ = run(capsys, "verify", "--domain", "disc", "--f", "z^2", "--z", "0.3+0i")
    assert code == 0
    (row,) = rows(out)
    assert list(row) == ["domain", "f", "z", "szego", "bergman", "residual", "stokes_defect", "pass"]
    assert abs(as_complex(row["residual"])) < 1e-14
    assert abs(as_complex(row["szego"]) - 0.09) < 1e-14
    assert row["pass"] == "true"


def test_verify_nonholomorphic_disc(capsys):
    code, out, _ = run(capsys, "verify", "--domain", "disc", "--f", "z^1 zb^1", "--z", "0.3+0i")
    assert code == 0
    (row,) = rows(out)
    assert abs(as_complex(row["residual"]) - 0.5) < 1e-12
    assert float(row["stokes_defect"]) <= 1e-8


def test_verify_ball_coordinate(capsys):
    code, out, _ = run(capsys, "verify", "--domain", "ball2", "--f", "z1^1", "--z", "(0.2,0.1i)")
    (row,) = rows(out)
    assert abs(as_complex(row["szego"]) - 0.2) < 1e-12
    assert abs(as_complex(row["bergman"]) - 0.2) < 1e-12
    # the grouped ball terms do not close; the tolerance check fails by design
    assert float(row["stokes_defect"]) > 0.1
    assert row["pass"] == "false"
    assert code == 1


def test_verify_multiple_points(capsys):
    code, out, _ = run(capsys, "verify", "--f", "zb^2", "--z", "0.1+0.2i", "--z=-0.5i")
    assert code == 0
    assert len(rows(out)) == 2


def test_floats_have_17_digits(capsys):
    _, out, _ = run(capsys, "ratio", "--domain", "disc", "--samples", "3")
    row = rows(out)[1]
    assert row["abs_z"] == "0.47499999999999998"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--f", "z^", "--z", "0.3+0i"],
        ["verify", "--f", "z1^1", "--z", "0.3+0i"],
        ["verify", "--domain", "ball2", "--f", "z^1", "--z", "(0.1,0.1)"],
        ["verify", "--f", "z", "--z", "0.99+0i"],
        ["verify", "--f", "z", "--z", "0.3 + 0i"],
        ["verify", "--f", "z", "--z", "0.3+0i", "--tol", "0"],
        ["residual-table", "--kmax", "9"],
        ["nonsense"],
        ["convergence", "--case", "unknown"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_residual_table_rows(capsys):
    code, out, _ = run(capsys, "residual-table", "--domain", "disc", "--kmax", "3", "--mmax", "3")
    assert code == 0
    table = {(int(r["k"]), int(r["m"])): r for r in rows(out)}
    assert table[3, 0]["residual"] == "0"
    assert table[1, 1]["residual"] == "1/2"
    assert table[2, 1]["residual"] == "1/3 * z^1"
    assert table[1, 1]["deviation"] == "1"
    for (k, m), r in table.items():
        if m == 0 or k < m:
            assert r["residual"] == "0" and r["deviation"] == "0"


def test_residual_table_ball(capsys):
    code, out, _ = run(capsys, "residual-table", "--domain", "ball2", "--kmax", "1", "--mmax", "1")
    assert code == 0
    table = {(r["alpha"], r["beta"]): r["residual"] for r in rows(out)}
    assert table["(1,0)", "(1,0)"] == "1/6"
    assert table["(1,0)", "(0,0)"] == "0"


@pytest.mark.parametrize(
    "domain, abs_z, expected",
    [("disc", 0.0, 0.5), ("disc", 0.9, 0.095), ("ball2", 0.0, 0.25)],
)
def test_ratio_examples(capsys, domain, abs_z, expected):
    code, out, _ = run(capsys, "ratio", "--domain", domain, "--samples", "20")
    assert code == 0
    match = [r for r in rows(out) if math.isclose(float(r["abs_z"]), abs_z, abs_tol=1e-12)]
    (row,) = match
    assert abs(float(row["ratio"]) - expected) < 1e-14


@pytest.mark.parametrize("domain", ["disc", "ball2"])
def test_ratio_over_delta_bounded(capsys, domain):
    _, out, _ = run(capsys, "ratio", "--domain", domain, "--samples", "20")
    for r in rows(out):
        assert 0 < float(r["ratio_over_delta"]) <= 1


def test_ratio_needs_two_samples(capsys):
    code, _, _ = run(capsys, "ratio", "--samples", "1")
    assert code == 2


def test_convergence_disc_reproduce(capsys):
    code, out, _ = run(capsys, "convergence", "--case", "disc-reproduce")
    assert code == 0
    table = rows(out)
    at256 = [r for r in table if r["resolution"].startswith("n_theta=256")]
    assert float(at256[0]["error"]) <= 1e-10


def test_convergence_ball_mass_decreasing(capsys):
    code, out, _ = run(capsys, "convergence", "--case", "ball-mass")
    assert code == 0
    errors = [float(r["error"]) for r in rows(out)]
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_convergence_disc_moment(capsys):
    code, out, _ = run(capsys, "convergence", "--case", "disc-moment")
    assert code == 0
    assert all(float(r["error"]) <= 1e-12 for r in rows(out))


def test_measure_audit_constant(capsys):
    code, out, err = run(capsys, "measure-audit")
    assert code == 0
    assert "0.250000" in err
    (row,) = rows(out)
    assert abs(as_complex(row["sigma_mass"]) - 2 * math.pi**2) < 1e-12


def test_measure_audit_modulus_squared(capsys):
    _, out, _ = run(capsys, "measure-audit", "--f", "z1 zb1")
    (row,) = rows(out)
    assert abs(as_complex(row["sigma_mass"]) - math.pi**2) < 1e-12
    assert abs(as_complex(row["ratio"]) - 0.25) < 1e-12


def test_measure_audit_zero(capsys):
    code, out, _ = run(capsys, "measure-audit", "--f", "0")
    assert code == 0
    (row,) = rows(out)
    assert as_complex(row["form_mass"]) == 0


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"domain": "disc", "polySpec": "z^3", "zList": ["0.2+0i"], "tolerance": 1e-9}))
    code, out, _ = run(capsys, "--config", str(cfg), "verify")
    assert code == 0
    (row,) = rows(out)
    assert row["f"] == "z^3"
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--f", "zb^1")
    assert rows(out)[0]["f"] == "zb^1"


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text("[1, 2")
    code, _, _ = run(capsys, "--config", str(cfg), "verify")
    assert code == 2


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "verify", "--f", "z^2", "--z", "0.3+0i", "-o", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("domain,f,z,")


@pytest.mark.parametrize("domain, f, z", [("disc", "z^2 zb^1 + 1/2i", "0.3-0.4i"), ("ball2", "z1 zb2", "(0.2,0.1i)")])
def test_verify_deterministic_across_workers(capsys, domain, f, z):
    base = ["verify", "--domain", domain, "--f", f, "--z", z, "--z", "0.1+0i" if domain == "disc" else "(0.1,0)"]
    _, one, _ = run(capsys, *base, "--workers", "1")
    _, four, _ = run(capsys, *base, "--workers", "4")
    assert one == four
    assert one


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bergszego", "ratio", "--samples", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "abs_z,delta,ratio,ratio_over_delta"
