import csv
import io
import json
import math

import pytest

from cascaded_qwm.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from cascaded_qwm.spectrum import Spectrum

FIG2 = ["--gamma-pr", "5", "--gamma-s", "1", "--mu", "1", "--eps-pr", "0.2", "--eps-s", "0.1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_exact(capsys):
    code, out, _ = run(capsys, "spectrum", *FIG2, "--method", "exact", "--harmonics", "-7:7")
    assert code == EXIT_OK
    table = rows(out)
    assert [int(r["n"]) for r in table] == list(range(-7, 8))
    assert out.splitlines()[0] == "n,re,im,abs"
    assert "\r" not in out


def test_spectrum_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["spectrum", *FIG2, "--out", str(a)]) == EXIT_OK
    assert main(["spectrum", *FIG2, "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_neumann_matches_exact(capsys):
    _, exact, _ = run(capsys, "spectrum", *FIG2)
    _, approx, _ = run(capsys, "spectrum", *FIG2, "--method", "neumann:11")
    e, s = Spectrum.from_csv(exact), Spectrum.from_csv(approx)
    for n in (-3, -1, 1, 3):
        assert abs(s[n] - e[n]) < 1e-3 * abs(e[n])


def test_zero_drives(capsys):
    code, out, _ = run(capsys, "spectrum", "--eps-pr", "0", "--eps-s", "0")
    assert code == EXIT_OK
    assert all(float(r["abs"]) == 0 for r in rows(out))


def test_json_format(capsys):
    _, out, _ = run(capsys, "spectrum", *FIG2, "--format", "json", "--harmonics", "-1:1")
    doc = json.loads(out)
    assert doc["columns"] == ["n", "re", "im", "abs"]
    assert len(doc["rows"]) == 3
    assert doc["metadata"]["method"] == "exact"


def test_expand_first_order(capsys):
    code, out, _ = run(capsys, "expand", "--order", "1", "--r", "1", "--gamma-pr", "1", "--mu", "1")
    assert code == EXIT_OK
    table = rows(out)
    assert [tuple(int(r[k]) for k in "abcdn") for r in table] == [(0, 0, 1, 0, 1), (1, 0, 0, 0, -1)]
    assert [float(r["re"]) for r in table] == pytest.approx([4.0, -2.0], rel=1e-14)
    assert all(float(r["im"]) == 0 for r in table)


def test_expand_orders(capsys):
    base = ["expand", "--r", "0.5", "--gamma-pr", "2"]
    counts = {N: len(rows(run(capsys, *base, "--order", str(N))[1])) for N in (1, 2, 3)}
    assert counts[2] == counts[1]
    assert counts[3] == counts[1] + 6


def test_expand_cap(capsys):
    code, _, err = run(capsys, "expand", "--order", "13")
    assert code == EXIT_USAGE
    assert "cap" in err


def test_config_round_trip(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# antibunching spectrum\ngamma_pr = 5\ngamma-s = 1\neps_pr = 0.2\neps_s = 0.1\n"
                   "harmonics = -3:3\n")
    _, from_file, _ = run(capsys, "spectrum", "--config", str(cfg))
    _, from_flags, _ = run(capsys, "spectrum", *FIG2, "--harmonics", "-3:3")
    assert from_file == from_flags
    _, overridden, _ = run(capsys, "spectrum", "--config", str(cfg), "--eps-s", "0.05")
    assert overridden != from_file


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["spectrum"],
    ["spectrum", *FIG2, "--harmonics", "3:1"],
    ["spectrum", *FIG2, "--method", "fourier"],
    ["spectrum", *FIG2, "--omega-pr-re", "0.1"],
    ["spectrum", "--gamma-s", "-1", "--eps-pr", "0.1"],
    ["sweep", "--eps-pr", "0.05"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == EXIT_USAGE


def test_numeric_failure(capsys):
    code, _, err = run(capsys, "spectrum", *FIG2, "--samples", "8")
    assert code == EXIT_NUMERIC
    assert "numeric" in err


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--gamma-pr", "100", "--eps-pr", "0.05", "--eps-s", "0.025",
                       "--points", "5")
    assert code == EXIT_OK
    table = rows(out)
    assert list(table[0]) == ["gamma_s", "r", "S3_numeric", "S3_closed", "S3_asymptote",
                              "Sm5_numeric", "Sm5_closed", "Sm5_asymptote",
                              "Sp5_numeric", "Sp5_closed", "Sp5_asymptote"]
    rs = [float(r["r"]) for r in table]
    assert rs == sorted(rs)
    assert rs[0] == pytest.approx(0.01) and rs[-1] == pytest.approx(100)
    for r in table:
        for tag in ("S3", "Sm5", "Sp5"):
            assert float(r[f"{tag}_numeric"]) == pytest.approx(float(r[f"{tag}_closed"]), rel=0.02)
    smallest = table[0]
    assert float(smallest["Sp5_numeric"]) / float(smallest["r"]) ** 2 == pytest.approx(1.25, rel=0.05)
    assert all(float(table[-1][f"{t}_numeric"]) == pytest.approx(1, abs=0.03) for t in ("S3", "Sm5", "Sp5"))


def test_sweep_ordering_independent_of_workers(capsys):
    base = ["sweep", "--gamma-pr", "100", "--eps-pr", "0.05", "--eps-s", "0.025", "--points", "6"]
    assert run(capsys, *base, "--workers", "1")[1] == run(capsys, *base, "--workers", "4")[1]


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == EXIT_OK
    assert "FAIL" not in out


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--inject-fault")
    assert code == EXIT_VERIFY
    assert any(line.startswith("FAIL") and "consistency" in line for line in out.splitlines())


def test_ode_method(capsys):
    code, out, _ = run(capsys, "spectrum", *FIG2, "--method", "ode", "--delta-omega", "0.5",
                       "--harmonics", "-1:1")
    assert code == EXIT_OK
    assert len(rows(out)) == 3
    assert math.isfinite(float(rows(out)[0]["abs"]))
