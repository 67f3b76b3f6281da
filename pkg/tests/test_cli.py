import json
import subprocess
import sys

import pytest

from valcalc.cli import run
from valcalc.constructible import boundary_indicator, indicator
from valcalc.io import dumps, function_to_json, polytope_to_json, valuation_to_json
from valcalc.polytope import box, hull, segment
from valcalc.valuations import euler_valuation, volume_valuation


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else dumps(obj))
    return str(p)


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_volume_of_square(tmp_path, capsys):
    path = _write(tmp_path, "square.json", polytope_to_json(box([0, 0], [1, 1])))
    code, out, _ = _run(capsys, ["volume", path])
    assert code == 0 and json.loads(out) == {"volume": "1/1"}


def test_euler_of_cube_boundary(tmp_path, capsys):
    f = boundary_indicator(box([0] * 3, [1] * 3))
    path = _write(tmp_path, "f.json", function_to_json(f))
    code, out, _ = _run(capsys, ["euler", path])
    assert code == 0 and json.loads(out) == {"euler_integral": "2/1"}


def test_hull_accepts_points_and_reports_f_vector(tmp_path, capsys):
    path = _write(tmp_path, "pts.json", {"dim": 2, "points": [[0, 0], [1, 0], [0, 1], ["1/4", "1/4"]]})
    code, out, _ = _run(capsys, ["hull", path])
    res = json.loads(out)
    assert code == 0 and res["f_vector"] == [3, 3, 1] and len(res["polytope"]["vertices"]) == 3


def test_minkpoly_and_mixed_volume(tmp_path, capsys):
    sq = polytope_to_json(box([0, 0], [1, 1]))
    path = _write(tmp_path, "b.json", {"bodies": [sq, sq]})
    code, out, _ = _run(capsys, ["minkpoly", path])
    assert code == 0
    assert json.loads(out) == {"vars": ["l1", "l2"], "terms": [[[0, 2], "1/1"], [[1, 1], "2/1"], [[2, 0], "1/1"]]}
    code, out, _ = _run(capsys, ["mixed-volume", path])
    assert json.loads(out) == {"mixed_volume": "1/1"}


def test_verdier_reports_both_euler_integrals(tmp_path, capsys):
    path = _write(tmp_path, "f.json", function_to_json(indicator(segment([0], [1]))))
    code, out, _ = _run(capsys, ["verdier", path])
    res = json.loads(out)
    assert code == 0 and res["euler_integral"] == "1/1" and res["euler_integral_of_dual"] == "1/1"


def test_cc_and_normal_cycle(tmp_path, capsys):
    path = _write(tmp_path, "f.json", function_to_json(indicator(segment([0], [1]))))
    _, out, _ = _run(capsys, ["cc", path])
    assert len(json.loads(out)["pieces"]) == 3
    _, out, _ = _run(capsys, ["cc", "--normal-cycle", path])
    assert len(json.loads(out)["pieces"]) == 2


def _pair_input():
    return {
        "rows": [valuation_to_json(euler_valuation(2)), valuation_to_json(volume_valuation(2))],
        "cols": [function_to_json(indicator(hull([[0, 0]]))), function_to_json(indicator(box([0, 0], [1, 1])))],
    }


def test_pair_json_and_csv(tmp_path, capsys):
    path = _write(tmp_path, "pair.json", _pair_input())
    code, out, _ = _run(capsys, ["pair", path])
    assert code == 0 and json.loads(out)["entries"] == [["1/1", "1/1"], ["0/1", "1/1"]]
    code, out, _ = _run(capsys, ["pair", "--format", "csv", path])
    assert code == 0 and out == "1/1,1/1\n0/1,1/1\n"


def test_csv_rejected_elsewhere(tmp_path, capsys):
    path = _write(tmp_path, "square.json", polytope_to_json(box([0, 0], [1, 1])))
    code, _, err = _run(capsys, ["volume", "--format", "csv", path])
    assert code == 2 and "CSV" in err


def test_valuation_commands(tmp_path, capsys):
    sq = polytope_to_json(box([0, 0], [1, 1]))
    chi = valuation_to_json(euler_valuation(2))
    path = _write(tmp_path, "v.json", {"valuation": chi, "body": sq})
    assert json.loads(_run(capsys, ["val-eval", path])[1]) == {"value": "1/1"}
    res = json.loads(_run(capsys, ["val-sigma", path])[1])
    assert res["reflect_route"] == res["boundary_route"] == "1/1"
    res = json.loads(_run(capsys, ["val-decompose", path])[1])
    assert res["components"][:3] == ["1/1", "0/1", "0/1"] and res["min_degree"] == 0
    path = _write(tmp_path, "p.json", {"valuations": [chi, valuation_to_json(volume_valuation(2))], "body": sq})
    res = json.loads(_run(capsys, ["val-product", "--components", path])[1])
    assert res["value"] == "1/1" and res["components"][2] == "1/1"


def test_intrinsic(tmp_path, capsys):
    path = _write(tmp_path, "c.json", polytope_to_json(box([0] * 3, [1] * 3)))
    res = json.loads(_run(capsys, ["intrinsic", "-k", "1", path])[1])
    assert res["intrinsic_volumes"]["1"] == pytest.approx(3.0)


def test_malformed_json_exits_2(tmp_path, capsys):
    path = _write(tmp_path, "bad.json", '{"dim": 2,\n  "vertices": [[0, 0],, ]}')
    code, _, err = _run(capsys, ["volume", path])
    assert code == 2 and "line 2" in err and "column" in err


def test_validation_error_exits_2(tmp_path, capsys):
    path = _write(tmp_path, "mixed.json", {"dim": 2, "vertices": [[0, 0], [1, 0, 0]]})
    assert _run(capsys, ["volume", path])[0] == 2
    assert _run(capsys, ["volume", str(tmp_path / "missing.json")])[0] == 2


def test_cap_violation_exits_3_and_names_the_cap(tmp_path, capsys):
    path = _write(tmp_path, "big.json", {"dim": 7, "vertices": [[0] * 7]})
    code, _, err = _run(capsys, ["volume", path])
    assert code == 3 and "max_dim=6" in err
    path = _write(tmp_path, "sq.json", polytope_to_json(box([0, 0], [1, 1])))
    code, _, err = _run(capsys, ["volume", "--set", "max_dim=1", path])
    assert code == 3 and "max_dim=1" in err


def test_config_flag_errors(tmp_path, capsys):
    path = _write(tmp_path, "sq.json", polytope_to_json(box([0, 0], [1, 1])))
    assert _run(capsys, ["volume", "--set", "nonsense", path])[0] == 2
    assert _run(capsys, ["volume", "--set", "max_dim=x", path])[0] == 2
    assert _run(capsys, ["volume", "--set", "no_such_key=1", path])[0] == 2


def test_out_flag_writes_file(tmp_path, capsys):
    path = _write(tmp_path, "sq.json", polytope_to_json(box([0, 0], [1, 1])))
    out = tmp_path / "res.json"
    assert _run(capsys, ["volume", "--out", str(out), path])[0] == 0
    assert json.loads(out.read_text()) == {"volume": "1/1"}


def test_acceptance_subset_via_cli(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, err = _run(capsys, ["acceptance", "--only", "AC-12,AC-13", "--out", str(out)])
    report = json.loads(out.read_text())
    assert code == 0
    assert [c["id"] for c in report["checks"]] == ["AC-12", "AC-13"]
    assert "AC-13" in err and "PASS" in err


def test_console_script_reads_stdin():
    inp = dumps(polytope_to_json(hull([[0, 0], [1, 0], [0, 1]])))
    res = subprocess.run(
        [sys.executable, "-m", "valcalc.cli", "volume"], input=inp, capture_output=True, text=True, check=True
    )
    assert json.loads(res.stdout) == {"volume": "1/2"}
