import json
from pathlib import Path


from clonelab.algebra import Operation
from clonelab.cli import main
from clonelab.clones import check_quasigroup

ALG = Path(__file__).resolve().parent.parent / "algebras"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def records(text):
    return dict(line.split(": ", 1) for line in text.splitlines())


def test_pol_leq(capsys):
    code, out, _ = run(capsys, "pol", "--algebra", ALG / "leq.alg", "--arity", 1)
    rec = records(out)
    assert code == 0
    assert out.splitlines()[0] == "seed: 0"
    assert rec["count"] == "3"
    assert [rec[f"op[{i}]"] for i in range(3)] == ["0 0", "0 1", "1 1"]


def test_base_find_two_constants(capsys):
    code, out, _ = run(capsys, "base", "find", "--algebra", ALG / "twoconsts.alg", "--arity", 1)
    assert code == 0
    assert records(out)["D"] == "{(0)}"


def test_base_check_violation_certificate(capsys):
    code, out, _ = run(capsys, "base", "check", "--algebra", ALG / "neg.alg", "--clone", "--points", "")
    rec = records(out)
    assert code == 1
    assert rec["base"] == "false"
    f = tuple(map(int, rec["f"].split()))
    g = tuple(map(int, rec["g"].split()))
    w = int(rec["witness"].strip("()"))
    assert f[w] != g[w]


def test_inv_and_loc(capsys):
    code, out, _ = run(capsys, "inv", "--algebra", ALG / "neg.alg", "--k", 1)
    assert code == 0 and records(out)["rel[1]"] == "{(0), (1)}"
    code, out, _ = run(capsys, "loc", "--algebra", ALG / "twoconsts.alg", "--k", 1)
    assert code == 0 and records(out)["count"] == "4"
    code, out, _ = run(capsys, "loc", "--algebra", ALG / "twoconsts.alg", "--k", 2)
    assert records(out)["closed"] == "true"


def test_clone_gen_budget(capsys):
    code, out, _ = run(capsys, "clone-gen", "--algebra", ALG / "neg.alg", "--arity", 2)
    assert code == 0 and records(out)["arity[2]"] == "4 complete=true"
    code, out, _ = run(capsys, "clone-gen", "--algebra", ALG / "neg.alg", "--arity", 2, "--budget", 1)
    assert code == 3


def test_quasigroup(capsys):
    code, out, _ = run(capsys, "quasigroup", "--algebra", ALG / "z3.alg")
    assert code == 0 and records(out)["quasigroup"] == "true"
    code, out, _ = run(capsys, "quasigroup", "--algebra", ALG / "min2.alg")
    rec = records(out)
    assert code == 1
    dot, ldiv, rdiv = (Operation(2, 2, tuple(map(int, rec[k].split()))) for k in ("dot", "ldiv", "rdiv"))
    res = check_quasigroup(dot, ldiv, rdiv)
    assert rec["identity"] == res.identity and rec["witness"] == f"({res.x},{res.y})"
    code, out, _ = run(capsys, "quasigroup", "--algebra", ALG / "z3.alg", "--find")
    assert code == 0 and records(out)["found"] == "true"


def test_galois_check(capsys):
    code, out, _ = run(capsys, "galois-check", "--algebra", ALG / "neg.alg", "--arity", 2, "--k", 2)
    assert code == 0 and records(out)["equal"] == "true"


def test_integral_domain(capsys):
    code, out, _ = run(capsys, "integral-domain", "--", -1, 0, 1)
    rec = records(out)
    assert code == 0
    assert rec["coefficients"] == "0 -1 0 1" and rec["g(y)"] == "6"


def test_universe_commands(capsys):
    code, out, _ = run(capsys, "universe", "eval", "g5", 0, 1, 2, 3, 4, 5)
    assert code == 0 and "".join(v for k, v in records(out).items() if k.startswith("g5(")) == "010105"
    code, out, _ = run(capsys, "universe", "compose", "g4", "g3")
    assert code == 0 and records(out)["composite"] == "g4"
    code, out, _ = run(capsys, "universe", "member", "p")
    assert code == 1 and records(out)["member"] == "false"
    code, out, _ = run(capsys, "universe", "no-base", 5)
    assert code == 0 and records(out)["witness"] == "7"
    code, out, _ = run(capsys, "universe", "rho", "g4", "--arity", 2, "--coordinate", 2)
    assert code == 0
    code, out, _ = run(capsys, "universe", "interpolate", 0, 1, 2, 3, 4, 5)
    assert records(out)["interpolant"] == "g6"
    code, out, _ = run(capsys, "universe", "parity-local", "--k", 64, "--prefix", 64, "--mode", "max")
    assert code == 0 and records(out)["cases"] == "65"


def test_diagonalize_trace(capsys):
    code, out, _ = run(capsys, "universe", "diagonalize", "--steps", 50)
    rec = records(out)
    assert code == 0
    assert rec["step[0]"] == "0 1 id init"
    lines = [rec[f"step[{k}]"].split() for k in range(50)]
    assert all(int(parts[0]) == k for k, parts in enumerate(lines))
    last_n = int(lines[-1][1])
    assert rec["limit"] == "".join(str(x % 2) for x in range(last_n + 1))
    code, out, _ = run(capsys, "universe", "diagonalize", "--steps", 12, "--parity-index", 3)
    assert code == 1 and records(out)["limit_is_parity"] == "false"


def test_json_matches_text(capsys):
    argv = ["pol", "--algebra", ALG / "leq.alg", "--arity", 2, "--seed", 7]
    _, text, _ = run(capsys, *argv)
    _, js, _ = run(capsys, *argv, "--json")
    data = json.loads(js)
    assert data["seed"] == 7
    assert {k: str(v) for k, v in data.items()} == records(text)


def test_output_is_reproducible(capsys):
    argv = ["verify-all", "--only", 6, "--only", 7, "--seed", 3]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_usage_and_parse_errors(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "pol", "--algebra", tmp_path / "missing.alg")[0] == 2
    bad = tmp_path / "bad.alg"
    bad.write_text("domain 2\nop f 2 : 0 1 2\n")
    code, _, err = run(capsys, "pol", "--algebra", bad)
    assert code == 2 and "line 2" in err
    assert run(capsys, "universe", "eval", "q3", 1)[0] == 2


def test_cap_exhaustion(capsys, monkeypatch):
    assert run(capsys, "pol", "--algebra", ALG / "leq.alg", "--arity", 3, "--cap", 10)[0] == 3
    monkeypatch.setenv("CLONELAB_CAP", "10")
    assert run(capsys, "pol", "--algebra", ALG / "leq.alg", "--arity", 3)[0] == 3


def test_verify_all_fault_injection(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", 2, "--inject-fault")
    assert code == 1
    assert "differs at x=" in records(out)["criterion[2]"]


def test_verify_all_zero_caps(capsys):
    code, out, _ = run(capsys, "verify-all", "--cap", 0, "--budget", 0, "--only", 6, "--only", 7, "--only", 10)
    assert code == 3
    assert all(records(out)[f"criterion[{n}]"].startswith("cap") for n in (6, 7, 10))
