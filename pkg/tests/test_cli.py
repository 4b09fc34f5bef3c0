import json
import math

import pytest

from genset import cli, equiv
from genset.cli import EXIT_INTERNAL, EXIT_LIMIT, EXIT_USAGE, SCHEMA, run


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(capsys, *argv):
    code, out, _ = _run(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == SCHEMA
    return data


def test_psi_s4(capsys):
    data = _json(capsys, "psi", "--group", "Sn:4")
    assert (data["d"], data["psi"], data["order"]) == (2, 3, "24")
    assert data["m_classes"] == 15
    assert data["classes_by_rank"]["2"] == 14


def test_classes_relations(capsys):
    assert _json(capsys, "classes", "--relation", "m", "--group", "Sn:5")["count"] == 67
    assert _json(capsys, "classes", "--relation", "c", "--group", "Sn:3")["count"] == 5
    assert _json(capsys, "classes", "--relation", "m2", "--group", "Sn:4")["count"] == 14
    assert _json(capsys, "classes", "--relation", "mr:3", "--group", "Sn:4")["count"] == 15


def test_autgamma_a5(capsys):
    data = _json(capsys, "autgamma", "--group", "An:5")
    assert int(data["order"]) == 2 ** 31 * 3 ** 7 * 5
    assert int(data["kernel_order"]) == 2 ** 10 * math.factorial(4) ** 6
    assert data["weighted_aut_order"] == "120"


def test_autgroup_and_params(capsys):
    assert _json(capsys, "autgroup", "--group", "Sn:4")["aut_group_order"] == "24"
    p = _json(capsys, "params", "--group", "ElemAb:2,2")
    assert (p["spread"], p["clique_number"], p["chromatic_number"], p["total_domination_number"]) == (2, 3, 3, 2)
    p = _json(capsys, "params", "--group", "Cn:6")
    assert p["spread"] == "inf" and p["chromatic_number"] is None
    assert _json(capsys, "params", "--group", "Sn:4")["total_domination_number"] is None


def test_graph_json_and_dot(capsys):
    g = _json(capsys, "graph", "--group", "Sn:3")
    assert sum(g["weights"]) == 6
    code, out, _ = _run(capsys, "graph", "--group", "Cn:2", "--emit", "dot")
    assert code == 0
    assert out.startswith('graph "Cn:2" {') and "peripheries=2" in out
    assert 'label="1/1"' in out
    code, out, _ = _run(capsys, "classes", "--relation", "m2", "--group", "Sn:3", "--emit", "dot")
    assert code == 0 and "--" in out


def test_stderr_summary(capsys):
    _, _, err = _run(capsys, "psi", "--group", "Sn:3")
    assert "psi=" in err


@pytest.mark.parametrize("argv", [
    ["psi"], ["psi", "--group", "Xn:3"], ["psi", "--group", "custom:3|(1,2"], ["bogus"],
    ["classes", "--group", "Sn:3", "--relation", "q"], ["classes", "--group", "Sn:3", "--emit", "dot"],
    ["psi", "--group", "Sn:3", "--threads", "0"], ["psi", "--group", "file:/nonexistent.gens"],
    ["verify", "nosuchsuite"],
])
def test_usage_errors_exit_one(argv, capsys):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(run(argv))
    assert info.value.code == EXIT_USAGE


def test_cap_and_budget_exit_two(capsys):
    assert _run(capsys, "psi", "--group", "Sn:5", "--cap", "100")[0] == EXIT_LIMIT
    assert _run(capsys, "psi", "--group", "Sn:4", "--budget", "3")[0] == EXIT_LIMIT
    assert _run(capsys, "params", "--group", "An:6", "--budget", "2")[0] == EXIT_LIMIT


def test_internal_error_exit_three(capsys, monkeypatch):
    monkeypatch.setattr(equiv, "PSI_SLACK", 0)
    assert _run(capsys, "psi", "--group", "Sn:4")[0] == EXIT_INTERNAL


def test_cache_hit_matches_miss_byte_for_byte(capsys, tmp_path, monkeypatch):
    cold = _run(capsys, "psi", "--group", "PSL2:7", "--cache-dir", str(tmp_path))
    assert len(list(tmp_path.iterdir())) == 1
    warm = _run(capsys, "psi", "--group", "PSL2:7", "--cache-dir", str(tmp_path))
    assert cold[0] == warm[0] == 0
    assert cold[1] == warm[1]
    monkeypatch.setenv("GENSET_CACHE", str(tmp_path))
    for cmd in (["graph"], ["autgamma"], ["classes", "--relation", "m2"]):
        a = _run(capsys, *cmd, "--group", "PSL2:7")
        b = _run(capsys, *cmd, "--group", "PSL2:7", "--cache-dir", str(tmp_path / "other"))
        assert a[1] == b[1]


def test_output_independent_of_threads(capsys):
    one = _run(capsys, "graph", "--group", "Sn:4", "--threads", "1")
    four = _run(capsys, "graph", "--group", "Sn:4", "--threads", "4")
    assert one[1] == four[1]


@pytest.mark.parametrize("suite", ["s4", "cyclic", "elemab", "equivalence"])
def test_verify_suites_pass(suite, capsys):
    code, out, err = _run(capsys, "verify", suite)
    data = json.loads(out)
    assert code == 0 and data["failures"] == 0
    assert all(r["status"] == "PASS" for r in data["results"])
    assert "PASS" in err


def test_verify_smallsimple_skips_above_cap(capsys):
    code, out, _ = _run(capsys, "verify", "smallsimple")
    data = json.loads(out)
    assert code == 0
    statuses = {r["check"]: r["status"] for r in data["results"]}
    assert any("M11" in k and v == "SKIP" for k, v in statuses.items())
    assert sum(v == "PASS" for v in statuses.values()) >= 9


def test_verify_affine_reports_failure(capsys):
    code, out, _ = _run(capsys, "verify", "affine")
    data = json.loads(out)
    assert code == EXIT_INTERNAL
    failed = [r["check"] for r in data["results"] if r["status"] == "FAIL"]
    assert len(failed) == 1 and "7" in failed[0]


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "genset.cli", "psi", "--group", "Sn:3"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["psi"] == 2
