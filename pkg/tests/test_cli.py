import csv
import io
import json

import pytest

from edelstein.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    ORBIT_COLUMNS,
    SUBORBIT_COLUMNS,
    VERIFY_COLUMNS,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_orbit_zero_range(capsys):
    code, out, _ = run(capsys, "orbit", "--n-min", "0", "--n-max", "0")
    assert code == EXIT_OK
    assert out == "n,norm_sq,error_bound\n0,0.0,0.0\n"


def test_orbit_default_range(capsys):
    code, out, _ = run(capsys, "orbit")
    rows = rows_of(out)
    assert code == EXIT_OK and len(rows) == 250
    assert tuple(rows[0]) == ORBIT_COLUMNS
    at = {int(r["n"]): float(r["norm_sq"]) for r in rows}
    assert at[120] < min(at[n] for n in range(110, 131) if n != 120)


def test_orbit_json(capsys):
    code, out, _ = run(capsys, "orbit", "--n-max", "3", "--format", "json")
    data = json.loads(out)
    assert [d["n"] for d in data] == [1, 2, 3]
    assert data[0]["norm_sq"] == pytest.approx(5.07096701054141946, rel=1e-9)


def test_suborbit_edelstein(capsys):
    code, out, _ = run(capsys, "suborbit", "--family", "edelstein", "--n-max", "3", "--no-norms")
    rows = rows_of(out)
    assert tuple(rows[0]) == SUBORBIT_COLUMNS
    assert [r["index"] for r in rows] == ["1", "20172", "310224200866619959181160"]
    code, out, _ = run(capsys, "suborbit", "--family", "edelstein", "--n-min", "4", "--n-max", "6", "--no-norms")
    assert [int(r["digits"]) for r in rows_of(out)] == [89, 285, 828]


def test_suborbit_factorial(capsys):
    code, out, _ = run(capsys, "suborbit", "--family", "factorial")
    rows = rows_of(out)
    assert code == EXIT_OK and len(rows) == 12
    assert {r["verdict"] for r in rows} == {"pass"}


def test_suborbit_s(capsys):
    code, out, _ = run(capsys, "suborbit", "--family", "s", "--n-max", "10")
    rows = rows_of(out)
    assert [r["index"] for r in rows[:3]] == ["1", "7", "31"]
    assert {r["verdict"] for r in rows[7:]} == {"pass"}


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify")
    rows = rows_of(out)
    assert code == EXIT_OK
    assert tuple(rows[0]) == VERIFY_COLUMNS
    assert {r["suite"] for r in rows} == {"vanishing", "blowup", "window", "dr", "monotone"}
    assert all(r["verdict"] == "pass" for r in rows)


def test_verify_invsqrt(capsys):
    code, _, _ = run(capsys, "verify", "--xi", "invsqrt", "--n-max", "14", "--samples", "50")
    assert code == EXIT_OK


def test_verify_precondition(capsys):
    code, out, err = run(capsys, "verify", "--n-max", "5")
    assert code == EXIT_USAGE and out == ""
    assert "n >= 8" in err


def test_bad_schedule(capsys):
    code, _, err = run(capsys, "orbit", "--xi", "wobbly")
    assert code == EXIT_USAGE and err


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "orbit", "--n-max", "2", "--out", str(target))
    assert code == EXIT_IO and str(target) in err


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# orbit settings\nn-max = 4\nformat = json\nxi = constant:2.0\n")
    code, out, _ = run(capsys, "orbit", "--config", str(cfg), "--n-max", "2")
    data = json.loads(out)
    assert [d["n"] for d in data] == [1, 2]
    assert data[0]["norm_sq"] == pytest.approx(4 * 5.07096701054141946, rel=1e-9)


def test_bad_config_key(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    code, _, err = run(capsys, "orbit", "--config", str(cfg))
    assert code == EXIT_USAGE and "colour" in err


def test_out_file_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for target in (a, b):
        assert main(["verify", "--n-max", "12", "--samples", "100", "--seed", "7", "--out", str(target)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_dr(capsys):
    code, out, _ = run(capsys, "dr", "--n-max", "5")
    rows = rows_of(out)
    assert code == EXIT_OK and [int(r["n"]) for r in rows] == list(range(6))
    assert float(rows[0]["norm_sq"]) == 0.0
    assert all(float(r["shadow_norm_sq"]) <= float(r["norm_sq"]) + float(r["error_bound"]) for r in rows)
