import json
import subprocess
import sys

import pytest

from scgident.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_pair(capsys, fixture_path):
    code, out, _ = run(capsys, "check", fixture_path("fig6a.scg"), "A", "B")
    assert (code, out) == (1, "PAIR A B NotSId TheoremBlocked\n")
    code, out, _ = run(capsys, "check", fixture_path("fig6a.scg"), "C", "D")
    assert (code, out) == (0, "PAIR C D SId UnshieldedCollider\n")


def test_check_all_pairs_json(capsys, fixture_path):
    code, out, err = run(capsys, "check", fixture_path("fig6a.scg"), "--json")
    doc = json.loads(out)
    assert code == 1 and len(doc["pairs"]) == 6
    assert "PAIR A B NotSId TheoremBlocked" in err


def test_check_empty_file(capsys, tmp_path):
    f = tmp_path / "empty.scg"
    f.write_text("")
    code, out, _ = run(capsys, "check", f)
    assert code == 0 and "note" in out


def test_check_effects(capsys, fixture_path):
    g = fixture_path("fig6a.scg")
    assert run(capsys, "check", g, "--effect", "total", "--treatment", "C")[0] == 0
    code, out, _ = run(capsys, "check", g, "--effect", "total", "--treatment", "A")
    assert code == 1 and "BLOCKING A B" in out
    assert run(capsys, "check", g, "--effect", "cde", "--outcome", "D")[0] == 0
    assert run(capsys, "check", g, "--effect", "cde")[0] == 2


def test_check_errors(capsys, fixture_path, tmp_path):
    code, _, err = run(capsys, "check", fixture_path("fig6a.scg"), "A", "Q")
    assert code == 2 and "unknown series" in err
    bad = tmp_path / "bad.scg"
    bad.write_text("A -> B\nA ~ B\n")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "bad.scg:2:" in err
    assert run(capsys, "check", tmp_path / "missing.scg")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_discover_fig3b(capsys, fixture_path):
    code, out, _ = run(capsys, "discover", fixture_path("fig3b.tpl"),
                       "--scg", fixture_path("fig3a.scg"), "--stability")
    assert code == 0
    for k in (1, 2, 3, 4):
        assert f"Z[{k}] -> Y[{k}]" in out and f"Y[{k}] -> X[{k}]" in out


def test_discover_lag_only(capsys, tmp_path):
    f = tmp_path / "lag.tpl"
    f.write_text("X[-1] -> Y\nY[-1] -> X\nX[-1] -> X\n")
    code, out, _ = run(capsys, "discover", f)
    assert code == 0 and "--" not in out


def test_discover_undirected_and_window(capsys, fixture_path):
    code, out, _ = run(capsys, "discover", fixture_path("fig4d.tpl"), "--window", "3",
                       "--method", "mec")
    assert code == 0 and "X[2] -- Y[2]" in out and "[3]" not in out
    assert run(capsys, "discover", fixture_path("fig4d.tpl"), "--window", "1")[0] == 2


def test_discover_incompatible(capsys, fixture_path):
    assert run(capsys, "discover", fixture_path("fig4d.tpl"),
               "--scg", fixture_path("fig2a.scg"))[0] == 2


@pytest.mark.parametrize("tpl", ["fig2b.tpl", "fig2c.tpl", "fig2e.tpl", "fig2f.tpl",
                                 "fig3b.tpl", "fig3c.tpl"])
def test_discover_first_only_same(capsys, fixture_path, tpl):
    _, full, _ = run(capsys, "discover", fixture_path(tpl))
    _, first, _ = run(capsys, "discover", fixture_path(tpl), "--rules", "first-only")
    assert full == first


def test_enumerate_table(capsys):
    code, out, _ = run(capsys, "enumerate", "2", "3")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[1].split() == ["2", "16", "1", "6.25"]


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "3", "--reading", "any-arrowhead", "--json")
    assert json.loads(out)["rows"] == [
        {"n": 3, "total_scgs": 512, "not_fully_sid": 24, "percent": 4.69}
    ]


def test_enumerate_guard(capsys):
    assert run(capsys, "enumerate", "6")[0] == 2


def test_verify_two(capsys):
    code, out, _ = run(capsys, "verify", "2")
    assert code == 0 and out.splitlines()[0] == "16 SCGs, 0 disagreements"


def test_verify_scg_file(capsys, fixture_path):
    code, out, _ = run(capsys, "verify", "--scg", fixture_path("fig6a.scg"))
    assert code == 0
    assert "PAIR A B NotSId UnorientedInSome agree" in out
    assert "0 disagreements" in out


def test_verify_needs_one_target(capsys):
    assert run(capsys, "verify")[0] == 2


def test_output_is_reproducible(capsys, fixture_path):
    a = run(capsys, "discover", fixture_path("fig6b.tpl"), "--json")
    b = run(capsys, "discover", fixture_path("fig6b.tpl"), "--json")
    assert a == b


def test_module_entry_point(fixture_path):
    r = subprocess.run([sys.executable, "-m", "scgident", "check", str(fixture_path("fig6a.scg")),
                        "C", "D"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "PAIR C D SId UnshieldedCollider\n"
