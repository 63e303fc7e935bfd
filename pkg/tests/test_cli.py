import io
import json

import pytest

from quadreg import cli


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_strength_output():
    code, out, _ = run("strength", "--n", "6", "--gen", "1,2")
    assert code == 0 and out.strip() == "rank=12 strength=5"
    code, out, _ = run("strength", "--n", "5", "--gen", "2,2")
    assert out.strip() == "rank=5 strength=2"


def test_gen_matches_family():
    code, out, _ = run("gen", "--n", "2", "--m", "2")
    assert code == 0
    assert out.split("\n")[:3] == ["x[1,1]^2 + x[2,1]^2", "x[1,1]*x[1,2] + x[2,1]*x[2,2]", "x[1,2]^2 + x[2,2]^2"]


def test_regseq_json():
    code, out, _ = run("regseq", "--n", "2", "--m", "2", "--format", "json")
    res = json.loads(out)
    assert code == 0
    assert (res["verdict"], res["codim"], res["expected"], res["hilbert_ci"]) == ("not-regular", 2, 3, False)


def test_betti_and_reg():
    code, out, _ = run("betti", "--n", "4", "--m", "2", "--format", "json")
    table = json.loads(out)
    assert code == 0 and not table["truncated"]
    code, out, _ = run("reg", "--n", "4", "--m", "2")
    assert out.strip() == "reg=3"


def test_hilbert_terms():
    code, out, _ = run("hilbert", "--n", "1", "--m", "1", "--terms", "4", "--format", "json")
    res = json.loads(out)
    assert res["hilbert_function"] == [1, 1, 0, 0]


def test_stdin_input(monkeypatch):
    code, out, _ = run(
        "gb", "--n", "1", "--m", "2", "--input", "-", stdin="x[1,1]^2\nx[1,1]*x[1,2]\n", monkeypatch=monkeypatch
    )
    assert code == 0 and out.split("\n")[:2] == ["x[1,1]^2", "x[1,1]*x[1,2]"]


def test_collective_strength_modes():
    code, out, _ = run("collective-strength", "--n", "4", "--m", "2", "--field", "101")
    assert code == 0 and out.strip().startswith("collective_strength=1")
    code, out, _ = run("collective-strength", "--n", "6", "--m", "3")
    assert code == 0 and "collective_strength=2" in out
    code, out, _ = run("collective-strength", "--n", "4", "--m", "2", "--field", "101", "--method", "sampled", "--trials", "500")
    assert out.startswith("collective_strength<=1")


def test_g_table_and_verify():
    code, out, _ = run("g-table", "--n-from", "1", "--n-to", "3", "--format", "json")
    assert code == 0
    assert [r["g"] for r in json.loads(out)["rows"]] == [1, 1, 2]
    code, out, _ = run("verify-paper", "--n", "2")
    assert code == 0 and "FAIL" not in out


def test_failed_check_exits_one(monkeypatch):
    from quadreg import family

    real = family.verify_theorem

    def broken(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.checks["(d) reg(R/I) = c"] = False
        return rep

    monkeypatch.setattr(family, "verify_theorem", broken)
    code, out, _ = run("verify-paper", "--n", "1")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("gb", "--n", "2"),
        ("gb", "--n", "2", "--m", "2", "--field", "banana"),
        ("gb", "--n", "2", "--m", "2", "--field", "9"),
        ("gb", "--n", "2", "--m", "2", "--input", "/nonexistent/file"),
        ("strength", "--n", "3", "--gen", "1"),
        ("nosuchcommand",),
        (),
    ],
)
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == 2 and err


def test_parse_error_reports_position(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("x[1,1]^2\n3x[1,1]\n")
    code, _, err = run("gb", "--n", "1", "--m", "1", "--input", str(f))
    assert code == 2 and "2:2:" in err


def test_resource_cap_exit():
    code, _, err = run("gb", "--n", "3", "--m", "3", "--max-pairs", "10")
    assert code == 3 and err


def test_json_is_byte_identical():
    argv = ("betti", "--n", "2", "--m", "3", "--format", "json")
    first = run(*argv)[1]
    assert first == run(*argv)[1]
    assert first.endswith("\n") and json.loads(first)


def test_threads_flag_does_not_change_results():
    a = run("g-table", "--n-from", "3", "--n-to", "3", "--mode", "heuristic", "--no-early-exit", "--format", "json")[1]
    b = run(
        "g-table", "--n-from", "3", "--n-to", "3", "--mode", "heuristic", "--no-early-exit", "--threads", "2",
        "--format", "json",
    )[1]
    assert a == b
