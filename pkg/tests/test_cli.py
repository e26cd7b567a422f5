import csv

from conftest import abstract_instance
from rbsc import cli, generators, model


def write_instance(tmp_path, inst, name="case.rbsc"):
    path = tmp_path / name
    path.write_text(model.serialize_instance(inst))
    return path


def tiny_yes():
    return abstract_instance("BRB", [{0, 1}, {2}], 2, 1)


def test_solve_exit_codes_and_solution_file(tmp_path, capsys):
    path = write_instance(tmp_path, tiny_yes())
    rc = cli.main(["solve", str(path), "--algo", "brute"])
    out = capsys.readouterr().out
    assert rc == 0 and "decision yes" in out
    claim = model.parse_solution((tmp_path / "case.rbsc.solution").read_text())
    assert claim.decision and model.verify(tiny_yes(), claim.chosen).feasible

    hard = abstract_instance("BR", [{0, 1}], 1, 0)
    path2 = write_instance(tmp_path, hard, "no.rbsc")
    rc = cli.main(["solve", str(path2), "--algo", "brute"])
    assert rc == 1
    assert model.parse_solution((tmp_path / "no.rbsc.solution").read_text()).decision is False


def test_solve_rejects_algorithm_precondition(tmp_path, capsys):
    inst = abstract_instance("BRR", [{0, 1, 2}], 2, 2)
    path = write_instance(tmp_path, inst)
    rc = cli.main(["solve", str(path), "--algo", "dp"])
    assert rc == 2
    assert "RedDegreeExceeded" in capsys.readouterr().err


def test_solve_parse_failure_is_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.rbsc"
    bad.write_text("rbsc 2\n")
    assert cli.main(["solve", str(bad)]) == 2


def test_auto_matches_brute_across_corpus(tmp_path):
    profiles = [
        generators.RandomProfile(),
        generators.RandomProfile(mode=model.ABSTRACT, structure="max-one-red", linear=False),
        generators.RandomProfile(unbounded_lines=True),
        generators.RandomProfile(unbounded_lines=True, structure="two-red"),
    ]
    i = 0
    for profile in profiles:
        for seed in range(15):
            inst = generators.gen_random(31_000 + seed, profile)
            path = write_instance(tmp_path, inst, f"auto{i}.rbsc")
            i += 1
            a = cli.main(["solve", str(path), "--algo", "auto", "--out", str(path) + ".a"])
            b = cli.main(["solve", str(path), "--algo", "brute", "--out", str(path) + ".b"])
            assert a == b


def test_kernelize_command(tmp_path, capsys):
    inst = abstract_instance("BBBBB", [{0}, {1}, {2}, {3}, {4}], 2, 0)
    path = write_instance(tmp_path, inst)
    rc = cli.main(["kernelize", str(path), "--param", "kl-kr"])
    out = capsys.readouterr().out
    assert rc == 1 and "decision no" in out
    assert (tmp_path / "case.rbsc.trace").exists()

    ok = abstract_instance("BRB", [{0, 1}, {2}], 2, 1)
    path2 = write_instance(tmp_path, ok, "ok.rbsc")
    rc = cli.main(["kernelize", str(path2), "--param", "ell"])
    assert rc == 0
    kern = model.parse_instance((tmp_path / "ok.rbsc.kernel").read_text())
    # kernelizing the kernel changes nothing
    out2 = tmp_path / "twice.kernel"
    rc = cli.main(["kernelize", str(tmp_path / "ok.rbsc.kernel"), "--param", "ell", "--out", str(out2)])
    assert rc == 0
    assert model.parse_instance(out2.read_text()) == kern


def test_generate_roundtrip_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a.rbsc", tmp_path / "b.rbsc"
    assert cli.main(["generate", "random", "--seed", "7", "--profile", "one-blue", "--out", str(out1)]) == 0
    assert cli.main(["generate", "random", "--seed", "7", "--profile", "one-blue", "--out", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
    inst = model.parse_instance(out1.read_text())
    assert all(
        sum(1 for e in mem if inst.color_of(e) == model.BLUE) == 1
        for _, mem in inst.family
    )


def test_generate_mcc_lines_from_graph_file(tmp_path, capsys):
    g = generators.MulticoloredGraph(
        ((1, 2), (3, 4), (5, 6)),
        frozenset(
            (u, v)
            for i, us in enumerate([(1, 2), (3, 4), (5, 6)])
            for j, vs in enumerate([(1, 2), (3, 4), (5, 6)])
            if i < j
            for u in us
            for v in vs
        ),
    )
    gpath = tmp_path / "k222.mcgraph"
    gpath.write_text(generators.serialize_mcgraph(g))
    rc = cli.main(["generate", "mcc-lines", "--graph", str(gpath), "--out", str(tmp_path / "k222.rbsc")])
    out = capsys.readouterr().out
    assert rc == 0 and "blue 6" in out
    inst = model.parse_instance((tmp_path / "k222.rbsc").read_text())
    assert inst.num_blue == 6


def test_generate_setcover_from_file(tmp_path):
    sc = generators.SetCoverInstance(3, (frozenset({1, 2}), frozenset({3})), 2)
    spath = tmp_path / "cover.setcover"
    spath.write_text(generators.serialize_setcover(sc))
    rc = cli.main(["generate", "setcover", "--input", str(spath), "--out", str(tmp_path / "cover.rbsc")])
    assert rc == 0
    inst = model.parse_instance((tmp_path / "cover.rbsc").read_text())
    assert generators.setcover_decide(sc) == (
        cli.main(["solve", str(tmp_path / "cover.rbsc"), "--algo", "brute"]) == 0
    )


def test_verify_command(tmp_path, capsys):
    inst = tiny_yes()
    path = write_instance(tmp_path, inst)
    sol = model.verify(inst, {0, 1})
    good = tmp_path / "good.solution"
    good.write_text(model.serialize_solution(sol))
    assert cli.main(["verify", str(path), str(good)]) == 0

    over = abstract_instance("BRB", [{0, 1}, {2}], 2, 0)
    path2 = write_instance(tmp_path, over, "tight.rbsc")
    bad = tmp_path / "bad.solution"
    bad.write_text("solution yes\nset 0\nset 1\nred 1\nblue 2\n")
    rc = cli.main(["verify", str(path2), str(bad)])
    assert rc == 1
    assert "red budget exceeded" in capsys.readouterr().out

    unknown = tmp_path / "unknown.solution"
    unknown.write_text("solution yes\nset 9\nred 0\nblue 0\n")
    assert cli.main(["verify", str(path), str(unknown)]) == 2


def test_bench_command(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RBSC_THREADS", "2")
    for seed in range(6):
        inst = generators.gen_random(41_000 + seed, generators.RandomProfile())
        write_instance(tmp_path, inst, f"bench{seed}.rbsc")
    csv_path = tmp_path / "bench.csv"
    rc = cli.main(["bench", str(tmp_path), "--algos", "auto,brute,fpt", "--csv", str(csv_path)])
    out = capsys.readouterr().out
    assert rc == 0 and "disagreements 0" in out
    with open(csv_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 18
    assert list(rows[0]) == ["instance", "algo", "decision", "millis", "branches", "tuples"]
    again = tmp_path / "again.csv"
    assert cli.main(["bench", str(tmp_path), "--algos", "auto,brute,fpt", "--csv", str(again)]) == 0
    strip = lambda text: [
        [row["instance"], row["algo"], row["decision"]] for row in csv.DictReader(open(text))
    ]
    assert strip(csv_path) == strip(again)
