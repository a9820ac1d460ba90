import csv
import io
import re
from xml.etree import ElementTree

import pytest

from balanced2tsp import (
    Instance,
    brute_force_2tsp,
    generate_instance,
    ks_multi,
    read_instance,
    render_svg,
    save_instance,
    validate_sequence,
    write_instance,
)
from balanced2tsp.cli import main
from balanced2tsp.report import BenchRow, BestKnown, bench_csv, gap_pct, gap_table, read_best_known, summarize
from balanced2tsp.tours import TwoTourSequence


def parse_solution(text):
    lines = text.strip().splitlines()
    length = float(lines[0].split()[1])
    t1 = [int(v) - 1 for v in lines[1].split()]
    t2 = [int(v) - 1 for v in lines[2].split()]
    assert t1[0] == t1[-1] == 0 and t2[0] == t2[-1] == 0
    return length, TwoTourSequence.from_tours(t1[:-1], t2[:-1])


@pytest.fixture
def kfile(tmp_path):
    path = tmp_path / "k.txt"
    assert main(["gen", "--n", "9", "--fixed", "3", "--seed", "2", "--kalmanson", "-o", str(path)]) == 0
    return path


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        main(["gen", "--n", "12", "--fixed", "4", "--seed", "5", "-o", str(path)])
    assert a.read_text() == b.read_text()
    assert read_instance(a).same_as(generate_instance(12, 4, 5))


def test_exact_and_oracle_agree(kfile, capsys):
    inst = read_instance(kfile)
    assert main(["exact", str(kfile)]) == 0
    length, q = parse_solution(capsys.readouterr().out)
    assert validate_sequence(q, inst) == []
    assert main(["oracle", str(kfile)]) == 0
    length2, _ = parse_solution(capsys.readouterr().out)
    assert length == length2 == round(brute_force_2tsp(inst).length, 6)


def test_check_kalmanson(kfile, tmp_path, capsys):
    assert main(["check-kalmanson", str(kfile)]) == 0
    assert "KALMANSON yes" in capsys.readouterr().out
    text = ("BALANCED2TSP 1\nN 4\nP 1\nFIXED 1\nCOORDS\n"
            "1 0 0\n2 1 1\n3 1 0\n4 0 1\n")
    bad = tmp_path / "bad.txt"
    bad.write_text(text)
    assert main(["check-kalmanson", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "WITNESS 1 2 3 4 inequality 1" in out


def test_solve_writes_valid_solution_and_svg(tmp_path, capsys):
    inst = generate_instance(20, 4, 3)
    path = tmp_path / "u.txt"
    write_instance(inst, path)
    svg = tmp_path / "u.svg"
    assert main(["solve", str(path), "--init", "rp", "--s", "3", "--l", "2", "--iters", "2",
                 "--seed", "1", "--svg", str(svg)]) == 0
    length, q = parse_solution(capsys.readouterr().out)
    assert validate_sequence(q, read_instance(path)) == []
    assert svg.read_text().startswith("<?xml")


def test_errors_give_nonzero_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("BALANCED2TSP 1\nN 2\nP 0\nFIXED 1 2\nMATRIX\n0 1\n2 0\n")
    assert main(["exact", str(bad)]) == 1
    assert "asymmetric" in capsys.readouterr().err
    assert main(["exact", str(tmp_path / "missing.txt")]) == 1
    big = tmp_path / "big.txt"
    write_instance(generate_instance(30, 4, 0), big)
    assert main(["oracle", str(big)]) == 1


def test_gap_arithmetic():
    assert round(gap_pct(31754, 33008), 2) == -3.80
    row = BenchRow("I42", "h53x36", 33008.0, 1.0, BestKnown(33008.0, 32020.0))
    assert row.gap_pct == 0.0
    s = summarize([row])
    assert s["counts"] == (0, 1, 0)


def test_best_known_file(tmp_path):
    path = tmp_path / "best.txt"
    path.write_text("# name PC PC/h\nI42 33008 32020\nI43 1000\n")
    table = read_best_known(path)
    assert table["I42"] == BestKnown(33008.0, 32020.0)
    assert table["I43"].pc_h is None
    (tmp_path / "empty.txt").write_text("")
    assert read_best_known(tmp_path / "empty.txt") == {}


def test_bench_tables_and_csv(tmp_path, capsys):
    inst_dir = tmp_path / "inst"
    inst_dir.mkdir()
    names = []
    for seed in range(2):
        inst = generate_instance(16, 3, seed)
        names.append(inst.name)
        write_instance(inst, inst_dir / f"{inst.name}.txt")
    (inst_dir / "junk.txt").write_text("not an instance\n")
    ks = ks_multi(read_instance(inst_dir / f"{names[0]}.txt")).length
    best = tmp_path / "best.txt"
    best.write_text(f"{names[0]} {ks:.6f} {ks - 1:.6f}\n{names[1]} 1\n")
    csv_path = tmp_path / "out.csv"
    with pytest.warns(UserWarning, match="junk"):
        code = main(["bench", str(inst_dir), "--best-known", str(best), "--preset", "h42x48",
                     "--csv", str(csv_path)])
    assert code == 0
    out = capsys.readouterr().out
    for label in ("Mean %", "Best %", "Worst %", "#(<,=,>)"):
        assert label in out
    assert re.search(r"instance\s+PC\s+PC/h", out)
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    assert [r["instance"] for r in rows] == sorted(names)
    assert list(rows[0]) == ["instance", "preset", "length", "gap_pct", "seconds"]
    assert float(rows[0]["gap_pct"]) <= 0.0
    assert float(rows[1]["gap_pct"]) > 0.0


def test_bench_without_best_known():
    rows = [BenchRow("a", "h53x36", 10.0, 0.5)]
    text = bench_csv(rows)
    assert text.splitlines()[1] == "a,h53x36,10.000000,,0.500000"
    assert "-" in gap_table(rows, ["h53x36"])


def test_svg_is_deterministic():
    inst = generate_instance(12, 3, 0)
    q = ks_multi(inst).sequence
    a = render_svg(inst, q)
    assert a == render_svg(inst, q)
    # every node is drawn in both panels, fixed ones as squares
    assert a.count('class="fixed"') == 2 * len(inst.fixed)
    assert a.count('class="node"') == 2 * (inst.n - len(inst.fixed))
    assert a.count("<polyline") == 2
    root = ElementTree.fromstring(a.split("?>", 1)[1])
    assert root.tag.endswith("svg")
    with pytest.raises(ValueError):
        render_svg(Instance(inst.matrix, inst.fixed), q)
