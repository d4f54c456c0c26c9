import json
import math

import pytest

from matrixmech.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_levels_harmonic_golden(capsys):
    code, out, _ = run(capsys, "levels", "--kind", "harmonic", "--nmax", "3")
    assert code == 0
    assert out == ("n,W0,W1,W_total\n"
                   "0,0.5,0,0.5\n"
                   "1,1.5,0,1.5\n"
                   "2,2.5,0,2.5\n"
                   "3,3.5,0,3.5\n")


def test_levels_x3_values(capsys):
    code, out, _ = run(capsys, "levels", "--kind", "x3", "--lambda", "0.001",
                       "--nmax", "1")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert math.isclose(float(rows[0][3]), 0.5001875, abs_tol=1e-12)
    assert math.isclose(float(rows[1][3]), 1.5009375, abs_tol=1e-12)


def test_levels_zero_coupling_matches_harmonic(capsys):
    _, a, _ = run(capsys, "levels", "--kind", "x3", "--lambda", "0", "--nmax", "4")
    _, b, _ = run(capsys, "levels", "--kind", "harmonic", "--nmax", "4")
    assert a.splitlines()[0] == b.splitlines()[0]
    for ra, rb in zip(a.splitlines()[1:], b.splitlines()[1:]):
        fa, fb = [float(x) for x in ra.split(",")], [float(x) for x in rb.split(",")]
        assert fa[0] == fb[0]
        assert math.isclose(fa[3], fb[3], abs_tol=1e-12)


def test_byte_determinism(capsys):
    args = ("lines", "--kind", "x3", "--lambda", "0.002", "--nmax", "6")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_lines_x3_fundamental(capsys):
    code, out, _ = run(capsys, "lines", "--kind", "x3", "--lambda", "0.001",
                       "--nmax", "2")
    assert code == 0
    row = next(r for r in out.strip().splitlines()[1:] if r.startswith("1,0,"))
    assert math.isclose(float(row.split(",")[2]), 1.00075, rel_tol=1e-12)


def test_lines_x2_overtones_flagged(capsys):
    code, out, _ = run(capsys, "lines", "--kind", "x2", "--lambda", "0.001",
                       "--nmax", "4", "--format", "json")
    assert code == 0
    lines = json.loads(out)["lines"]
    overtones = [l for l in lines if l["n"] - l["m"] == 2]
    assert overtones and all(l["amp_order"] == 1 for l in overtones)
    fundamentals = [l for l in lines if l["n"] - l["m"] == 1]
    # intensity grows with n along the fundamental family
    ints = [l["rel_intensity"] for l in sorted(fundamentals, key=lambda l: l["n"])]
    assert ints == sorted(ints)
    assert math.isclose(max(ints), 1.0)


def test_classical_golden(capsys):
    code, out, _ = run(capsys, "classical", "--kind", "x2", "--a1", "1")
    assert code == 0
    values = {}
    for line in out.strip().splitlines()[1:]:
        q, tau, order, value = line.split(",")
        values[(q, tau, order)] = float(value)
    assert math.isclose(values[("coeff", "0", "1")], -0.5, rel_tol=1e-12)
    assert math.isclose(values[("coeff", "2", "1")], 1 / 6, rel_tol=1e-12)
    assert math.isclose(values[("coeff", "3", "2")], 1 / 48, rel_tol=1e-12)


def test_classical_zero_coupling_single_row(capsys):
    code, out, _ = run(capsys, "classical", "--kind", "harmonic", "--a1", "0.5")
    assert code == 0
    coeff_rows = [l for l in out.splitlines() if l.startswith("coeff,")]
    assert coeff_rows == ["coeff,1,0,0.5"]


def test_classical_x3_json_roundtrip(capsys):
    code, out, _ = run(capsys, "classical", "--kind", "x3", "--a1", "1",
                       "--lambda", "0.001", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert math.isclose(payload["omega_sq"][1], 0.75, rel_tol=1e-12)
    a3 = next(c for c in payload["coefficients"] if c["tau"] == 3)
    assert math.isclose(a3["value"], 0.03125, rel_tol=1e-12)
    # serialize -> parse -> serialize is byte-stable
    assert json.dumps(json.loads(out)) == json.dumps(json.loads(json.dumps(payload)))


def test_json_reparse_identical(capsys):
    _, out, _ = run(capsys, "levels", "--kind", "x3", "--lambda", "0.001",
                    "--nmax", "3", "--format", "json")
    payload = json.loads(out)
    assert json.dumps(payload) + "\n" == out


def test_verify_defaults_pass(capsys):
    code, out, _ = run(capsys, "verify", "--nmax", "6", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert all(c["passed"] for c in payload["checks"])
    names = {c["name"] for c in payload["checks"]}
    assert "harmonic_level_spacing" in names
    assert "quantization_sum_rule" in names


@pytest.mark.parametrize(
    "kind,mutate,expected_fail",
    [
        ("x2", "a2", "eom_residual_overtone2"),
        ("x2", "a0", "offdiagonal_energy"),
        ("x3", "w", "frequency_consistency"),
    ],
)
def test_verify_mutations_fail_named_check(capsys, kind, mutate, expected_fail):
    code, out, _ = run(capsys, "verify", "--kind", kind, "--lambda", "0.001",
                       "--nmax", "6", "--mutate", mutate, "--format", "json")
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    status = {c["name"]: c["passed"] for c in payload["checks"]}
    assert status[expected_fail] is False


def test_verify_mutation_kind_mismatch_is_config_error(capsys):
    code, _, err = run(capsys, "verify", "--kind", "harmonic", "--mutate", "a2")
    assert code == 2
    assert "a2" in err


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample configuration\nkind=x3\nlambda=0.001\nnmax=2\n")
    code, out, _ = run(capsys, "levels", "--config", str(cfg))
    assert code == 0
    assert len(out.strip().splitlines()) == 4  # header + n=0..2
    # flags override the file
    code, out, _ = run(capsys, "levels", "--config", str(cfg), "--nmax", "1")
    assert len(out.strip().splitlines()) == 3


def test_config_env_var(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "env.cfg"
    cfg.write_text("kind=x3\nlambda=0.001\nnmax=1\n")
    monkeypatch.setenv("MATRIXMECH_CONFIG", str(cfg))
    code, out, _ = run(capsys, "levels")
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert math.isclose(float(rows[0].split(",")[3]), 0.5001875, abs_tol=1e-12)


def test_bad_config_exits_2(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("unknown_key=3\n")
    code, _, err = run(capsys, "levels", "--config", str(cfg))
    assert code == 2 and "unknown key" in err

    code, _, err = run(capsys, "levels", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2

    code, _, err = run(capsys, "levels", "--nmax", "0")
    assert code == 2

    code, _, _ = run(capsys, "levels", "--kind", "bogus")
    assert code == 2


def test_levels_order_zero(capsys):
    code, out, _ = run(capsys, "levels", "--kind", "x3", "--lambda", "0.001",
                       "--nmax", "2", "--order", "0")
    assert code == 0
    for row in out.strip().splitlines()[1:]:
        n, w0, w1, wt = row.split(",")
        assert float(w1) == 0.0
        assert math.isclose(float(wt), float(n) + 0.5, rel_tol=1e-12)


def test_oracle_compare_smoke(capsys):
    code, out, _ = run(capsys, "oracle-compare", "--kind", "x3",
                       "--lambda", "0.001", "--nmax", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    for fit in payload["fits"]:
        assert abs(fit["exponent"] - 2.0) < 0.2
