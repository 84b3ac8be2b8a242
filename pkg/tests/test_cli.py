import subprocess
import sys

import pytest

from compart.cli import main
from compart.graph import cycle_graph, write_graph


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_gn_pipeline(run, tmp_path):
    assert run("gen", "gn", 8, "-o", "g8")[0] == 0
    code, out, _ = run("partition", "gn", "-i", "g8", "-o", "c8")
    assert code == 0 and "parts 2" in out
    assert run("verify", "-g", "g8", "-c", "c8")[0] == 0
    code, out, _ = run("reduce", "shift", "-n", 8, "-c", "c8", "-o", "col8")
    assert code == 0 and out.strip().endswith("ok")
    assert len((tmp_path / "col8").read_text().splitlines()) == 56


def test_h_pipeline(run):
    assert run("gen", "h", 9, 4, "-o", "h")[0] == 0
    code, out, _ = run("partition", "h", "-i", "h", "-o", "ch")
    assert code == 0 and "parts 3" in out
    assert run("verify", "-g", "h", "-c", "ch")[0] == 0


def test_solve_c5(run, tmp_path):
    (tmp_path / "c5.graph").write_text(write_graph(cycle_graph(5)))
    code, out, _ = run("solve", "p", "-i", "c5.graph", "--budget-ms", 1000)
    assert code == 0 and out.strip() == "2"
    code, out, _ = run("solve", "c", "-i", "c5.graph", "-o", "c5.cert")
    assert code == 0 and out.strip() == "2"
    assert run("verify", "-g", "c5.graph", "-c", "c5.cert")[0] == 0
    code, out, _ = run("solve", "t=1", "-i", "c5.graph")
    assert code == 1 and out.startswith("unsat")
    assert run("solve", "t=2", "-i", "c5.graph", "--mode", "cover")[0] == 0


def test_solve_timeout_exit_code(run):
    run("gen", "h", 6, 4, "-o", "h64")
    code, out, _ = run("solve", "t=2", "-i", "h64", "--budget-ms", 1)
    assert code == 2 and out.startswith("timeout")
    code, out, _ = run("solve", "p", "-i", "h64", "--budget-ms", 1)
    assert code == 2 and "lower" in out


@pytest.mark.parametrize(
    "gen_args, algo",
    [
        (["gsp", 12, "--seed", 4], "gsp"),
        (["gsp", 12, "--seed", 4, "--complemented"], "gsp"),
        (["bipartite", 4, 5, 0.5, "--seed", 2], "lbip"),
        (["bipartite", 4, 5, 0.5, "--seed", 2], "color-bits"),
        (["gsp", 10, "--seed", 1], "omega-bits"),
        (["gsp", 10, "--seed", 1], "alpha-cliques"),
        (["unit-intervals", 20, 8, "--seed", 3], "unit-interval"),
        (["subtrees", 12, 9, "--seed", 5], "subtree"),
    ],
)
def test_every_algorithm_is_reverifiable(run, gen_args, algo):
    assert run("gen", *gen_args, "-o", "inst")[0] == 0
    code, out, _ = run("partition", algo, "-i", "inst", "-o", "cert")
    assert code == 0, out
    graph = "cert.graph" if algo in ("lbip", "unit-interval", "subtree") else "inst"
    assert run("verify", "-g", graph, "-c", "cert")[0] == 0


def test_dump_psi(run, tmp_path):
    run("gen", "subtrees", 6, 3, "--seed", 1, "-o", "fam")
    assert run("partition", "subtree", "-i", "fam", "-o", "cert", "--dump-psi", "psi")[0] == 0
    lines = (tmp_path / "psi").read_text().splitlines()
    assert len(lines) == 6 and any(line.endswith(": ") for line in lines)


def test_verify_rejects_bad_certificate(run, tmp_path):
    (tmp_path / "c5.graph").write_text(write_graph(cycle_graph(5)))
    (tmp_path / "bad").write_text("parts 1 mode partition\npart 0 size 5\n0 0 1\n1 1 2\n2 2 3\n3 3 4\n4 4 0\n")
    code, out, _ = run("verify", "-g", "c5.graph", "-c", "bad")
    assert code == 1 and "valid no" in out


def test_same_seed_gives_identical_files(run, tmp_path):
    for name in ("a", "b"):
        run("gen", "unit-intervals", 25, 9, "--seed", 42, "-o", name)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    for name in ("a", "b"):
        run("gen", "subtrees", 15, 10, "--seed", 42, "-o", name)
        run("partition", "subtree", "-i", name, "-o", name + ".cert")
    assert (tmp_path / "a.cert").read_bytes() == (tmp_path / "b.cert").read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "gsp", "10", "-o", "x"],  # random family without --seed
        ["gen", "nosuch", "3", "-o", "x"],
        ["partition", "nosuch", "-i", "x", "-o", "y"],
        ["gen", "gn", "many", "-o", "x"],
        ["verify", "-g", "missing", "-c", "missing"],
        ["solve", "t=0", "-i", "x"],
    ],
)
def test_usage_errors_exit_3(run, tmp_path, argv):
    (tmp_path / "x").write_text("2 1\n0 1\n")
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(argv))
    assert info.value.code == 3


def test_format_error_names_line(run, tmp_path):
    (tmp_path / "broken").write_text("3 2\n0 1\n1 oops\n")
    code, _, err = run("verify", "-g", "broken", "-c", "broken")
    assert code == 3 and "line 3" in err


def test_partition_rejects_mismatched_input(run):
    run("gen", "gn", 5, "-o", "g5")
    code, _, err = run("partition", "h", "-i", "g5", "-o", "c")
    assert code == 3 and "labels" in err


def test_sweep_small(run):
    code, out, _ = run("sweep", "--max-edges", 5, "--max-vertices", 6)
    assert code == 0
    assert out.splitlines()[-1].endswith("p>c 0")


def test_console_entry_point(tmp_path):
    out = tmp_path / "g4"
    res = subprocess.run([sys.executable, "-m", "compart.cli", "gen", "gn", "4", "-o", str(out)], capture_output=True)
    assert res.returncode == 0 and out.read_text().startswith("6 ")
