import io
import random

import pytest

from conftest import DATA
from vertexrank.cli import main
from vertexrank.fragments import format_fragment, random_fragment
from vertexrank.model import parse_model
from vertexrank.spin import parse_oneparam


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def ok(*argv):
    code, text = run(*argv)
    assert code == 0
    return text


def d(name):
    return DATA / name


def test_eval_examples():
    assert ok("eval", "--model", d("example2.model"), "--graph", d("k2.graph")) == "0\n"
    assert ok("eval", "--model", d("example2.model"), "--graph", d("circle.graph")) == "2\n"
    assert ok("eval", "--model", d("matching.model"), "--graph", d("k4.graph")) == "3\n"
    assert ok("eval", "--model", d("matching.model"), "--graph", d("k3.graph")) == "0\n"


def test_eval_degree_violation(tmp_path):
    low = tmp_path / "low.model"
    low.write_text("model n=2 degree=2\nterm 1 0 : 1\n")
    code, _ = run("eval", "--model", low, "--graph", d("k4.graph"))
    assert code == 3


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.graph"
    bad.write_text("graph\nvertex a\nedge a b\n")
    code, _ = run("eval", "--model", d("example2.model"), "--graph", bad)
    assert code == 2
    assert "line 3" in capsys.readouterr().err
    code, _ = run("eval", "--model", tmp_path / "missing.model", "--graph", bad)
    assert code == 2


def test_rank_examples():
    assert ok("rank", "--model", d("example2.model"), "--k", 1, "--budget", 3, "--target", 0) \
        .startswith("rank=0 certified=true")
    assert ok("rank", "--spin", d("square.spin"), "--k", 2, "--budget", 3, "--target", 2) \
        .startswith("rank=2 certified=true")
    assert ok("rank", "--model", d("zero.model"), "--k", 3, "--budget", 2, "--target", 0) \
        .startswith("rank=0 certified=true")


def test_rank_classes_flag():
    text = ok("rank", "--spin", d("square.spin"), "--k", 2, "--budget", 3, "--target", 2,
              "--classes")
    assert "class vertices=2 fragments=14 rank=2" in text


def test_invariant_breach_exit_code():
    code, _ = run("rank", "--spin", d("square.spin"), "--k", 3, "--budget", 2, "--target", 1)
    assert code == 4


def test_invdim_and_brauer():
    assert ok("invdim", "--spin", d("square.spin"), "--k", 3) == "4\n"
    assert ok("invdim", "--group", d("swap.group"), "--k", 2) == "2\n"
    assert ok("brauer", "--n", 2, "--k", 4) == "3\n"
    assert ok("brauer", "--n", 5, "--k", 1) == "0\n"


def test_invdim_non_spanning(tmp_path, capsys):
    f = tmp_path / "line.spin"
    f.write_text("spin n=2\npoint 1 : 1 0\npoint 1 : 2 0\n")
    code, _ = run("invdim", "--spin", f, "--k", 2)
    assert code == 3
    assert "1-dimensional" in capsys.readouterr().err


def test_spin_command():
    text = ok("spin", "--spin", d("isotropic.spin"))
    assert text.startswith("closed=false\nwitness:\noneparam n=2\n")
    block = text.split("witness:\n")[1].split("normalized")[0]
    assert parse_oneparam(block).weights == (1, -1)
    text = ok("spin", "--spin", d("square.spin"), "--kmax", 3)
    assert text == "closed=true\nstabilizer_order=2\nk=0 dim=1\nk=1 dim=1\nk=2 dim=2\nk=3 dim=4\n"


def test_limit_command():
    text = ok("limit", "--model", d("example2.model"), "--oneparam", d("example.oneparam"),
              "--e", 3)
    assert text == "model n=2 degree=3\n"
    assert parse_model(text).support == {}


def test_limit_no_limit(tmp_path):
    flipped = tmp_path / "flip.oneparam"
    flipped.write_text("oneparam n=2\n1/2 -1/2*i\n1 i\nweights 1 -1\n")
    assert ok("limit", "--model", d("example2.model"), "--oneparam", flipped, "--e", 2) == "NO_LIMIT\n"


def test_pi_command():
    assert ok("pi", "--graph", d("k2.graph"), "--n", 2) == "1*y[1,0]^2 + 1*y[0,1]^2\n"


def test_pi_then_eval_matches_eval(tmp_path):
    rng = random.Random(11)
    for idx in range(12):
        g = random_fragment(rng, 0, 3, 4, extra_edges=3)
        gf = tmp_path / f"g{idx}.graph"
        gf.write_text(format_fragment(g))
        pf = tmp_path / f"g{idx}.poly"
        pf.write_text(ok("pi", "--graph", gf, "--n", 2))
        for model in ("example2.model", "matching.model", "square.spin"):
            direct = ok("eval", "--model", d(model), "--graph", gf)
            via = ok("eval", "--model", d(model), "--poly", pf)
            assert direct == via


@pytest.mark.parametrize("argv", [
    ("spin", "--spin", d("cross.spin")),
    ("matrix", "--model", d("example2.model"), "--k", 1, "--vertices", 1),
    ("selftest", "--seed", 3, "--count", 5),
])
def test_deterministic(argv):
    assert ok(*argv) == ok(*argv)


def test_emitted_models_reparse(tmp_path):
    text = ok("spin", "--spin", d("isotropic.spin"))
    model_text = text.split(":\n", 2)[2].split("stabilizer")[0]
    h = parse_model(model_text)
    again = tmp_path / "again.spin"
    again.write_text(model_text)
    assert parse_model(again.read_text()) == h


def test_selftest():
    assert ok("selftest", "--seed", 1, "--count", 4) == "selftest ok seed=1 checks=12\n"
