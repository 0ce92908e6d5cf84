import io
import json

import pytest

from conftest import GOLDEN, HYPERBOLIC
from tymod.cli import REPORT_KEYS, RunConfig, main, parse_chi, parse_group, read_sweep, run
from tymod.errors import ValidationError

GOLDEN_CASES = {
    "z2": ("Z2", "1/2"),
    "z4": ("Z4", "1/4"),
    "z2xz2_hyperbolic": ("Z2xZ2", HYPERBOLIC),
}


def invoke(**kw):
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig(**kw), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("spec, orders", [("Z2", (2,)), ("Z2xZ4", (2, 4)), ("z4XZ2", (4, 2)), ("Z12", (12,))])
def test_parse_group(spec, orders):
    assert parse_group(spec).orders == orders


@pytest.mark.parametrize("spec, where", [("Z0", "position 0"), ("Z2xZ1", "position 3"), ("Z2x", "position 3"), ("Z2 x Z2", "position 2"), ("", "position 0")])
def test_parse_group_errors(spec, where):
    with pytest.raises(ValidationError, match=where):
        parse_group(spec)


def test_parse_chi():
    assert parse_chi("1/2", parse_group("Z2")).matrix[0][0] == parse_chi("-1/2", parse_group("Z2")).matrix[0][0]
    assert str(parse_chi(HYPERBOLIC, parse_group("Z2xZ2"))) == HYPERBOLIC
    with pytest.raises(ValidationError, match="not well defined"):
        parse_chi("1/3", parse_group("Z2"))
    with pytest.raises(ValidationError):
        parse_chi("1/2,0", parse_group("Z2xZ2"))


def test_classify_json_shape():
    code, out, _ = invoke(command="classify", group_spec="Z2", chi_spec="1/2")
    rep = json.loads(out)
    assert code == 0
    assert tuple(rep) == REPORT_KEYS
    assert len(rep["induced"]) == 1 and rep["equivariant"] == [] and rep["group_theoretical"] is False
    code, out, _ = invoke(command="classify", group_spec="Z4", chi_spec="1/4")
    rep = json.loads(out)
    assert len(rep["equivariant"]) == 1
    assert rep["lagrangians"] == [[[0], [2]]]
    assert rep["equivariant"][0]["nu"] == {"()": "0"}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
@pytest.mark.parametrize("tau, tag", [("+", "plus"), ("-", "minus")])
def test_goldens(name, tau, tag):
    group, chi = GOLDEN_CASES[name]
    expected = (GOLDEN / f"{name}_{tag}.json").read_text()
    runs = [invoke(command="classify", group_spec=group, chi_spec=chi, tau=tau, workers=w)[1] for w in (1, 1, 8)]
    assert runs == [expected] * 3


@pytest.mark.parametrize(
    "kw, code",
    [
        (dict(command="classify", group_spec="Z2", chi_spec="0"), 1),
        (dict(command="classify", group_spec="Z0", chi_spec="1/2"), 1),
        (dict(command="classify", group_spec="Z2", chi_spec="1/2", tau="x"), 1),
        (dict(command="classify", group_spec="Z2xZ2", chi_spec=HYPERBOLIC, budget=2), 1),
        (dict(command="classify"), 1),
        (dict(command="sweep"), 1),
    ],
)
def test_validation_exit_codes(kw, code):
    got, out, err = invoke(**kw)
    assert got == code and out == "" and err.startswith("error:")


def test_env_budget(monkeypatch, capsys):
    monkeypatch.setenv("TYMOD_BUDGET", "2")
    assert main(["classify", "--group", "Z2xZ2", "--chi", HYPERBOLIC]) == 1
    assert "budget" in capsys.readouterr().err
    assert main(["classify", "--group", "Z2xZ2", "--chi", HYPERBOLIC, "--budget", "16"]) == 0
    monkeypatch.setenv("TYMOD_BUDGET", "lots")
    assert main(["classify", "--group", "Z2", "--chi", "1/2"]) == 1


def test_other_commands():
    code, out, _ = invoke(command="subgroups", group_spec="Z2xZ2")
    assert code == 0 and json.loads(out)["count"] == 5
    code, out, _ = invoke(command="forms", group_spec="Z2xZ4", metric=True)
    rep = json.loads(out)
    assert rep["alternating_count"] == 2 and len(rep["metric"]) == 4
    code, out, _ = invoke(command="lagrangians", group_spec="Z2xZ2", chi_spec=HYPERBOLIC)
    assert json.loads(out)["count"] == 3
    code, out, _ = invoke(command="sigma", group_spec="Z2xZ2", chi_spec=HYPERBOLIC, h_spec="(1,0);(0,1)", xi_spec=HYPERBOLIC)
    rep = json.loads(out)
    assert rep["fixed"] and rep["matching"] == 3 and rep["s"] == [[1, 0], [0, 1]]
    code, out, _ = invoke(command="fiber", group_spec="Z2xZ2", chi_spec=HYPERBOLIC, tau="-")
    rep = json.loads(out)
    assert rep["fiber_functor_count"] == 1 and rep["tambara"][0]["tambara_count"] == 1
    code, out, _ = invoke(command="dual", group_spec="Z4", chi_spec="1/4", h_spec="(2)")
    rep = json.loads(out)
    assert rep["dual_pointed"] and rep["e_type"] == [2, 2] and rep["obstruction_trivial"]
    code, out, _ = invoke(command="dual", group_spec="Z2", chi_spec="1/2")
    assert json.loads(out) == {**json.loads(out), "dual_pointed": False, "e_type": [2]}


def test_formats():
    code, out, _ = invoke(command="classify", group_spec="Z4", chi_spec="1/4", tau="-", output="text")
    assert code == 0 and "obstructed fixed:    1" in out
    code, out, _ = invoke(command="classify", group_spec="Z4", chi_spec="1/4", output="csv")
    lines = out.splitlines()
    assert lines[0] == "kind,H,xi,detail" and [l.split(",")[0] for l in lines[1:]] == ["induced", "equivariant"]


def test_sweep(tmp_path):
    f = tmp_path / "sweep.txt"
    f.write_text("# metric groups\nZ4|1/4|-\nZ2|1/2|+   # Ising\n\nZ2xZ2|0,1/2;1/2,0|+\nZ2|0|+\n")
    assert len(read_sweep(str(f))) == 4
    code, out, _ = invoke(command="sweep", sweep_file=str(f), workers=3)
    rows = json.loads(out)
    assert code == 0
    assert [r["group"] for r in rows] == ["Z4", "Z2", "Z2xZ2", "Z2"]
    assert rows[0]["obstructed"] == 1 and rows[2]["fiber_functor_count"] == 3 and "error" in rows[3]
    bad = tmp_path / "bad.txt"
    bad.write_text("Z2|1/2\n")
    assert invoke(command="sweep", sweep_file=str(bad))[0] == 1


def test_selfcheck_passes():
    code, out, _ = invoke(command="selfcheck", output="text")
    assert code == 0 and "FAIL" not in out


def test_internal_failure_exits_2(monkeypatch):
    from tymod import cli
    from tymod.errors import ConsistencyError

    def boom(cfg):
        raise ConsistencyError("sigma squared is not the identity")

    monkeypatch.setitem(cli.HANDLERS, "classify", boom)
    code, out, err = invoke(command="classify", group_spec="Z2", chi_spec="1/2")
    assert code == 2 and out == "" and "sigma squared" in err
