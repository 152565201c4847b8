import json

import pytest

from spectre_tiles.cli import main, parse_length
from spectre_tiles.geometry import QSqrt3


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,want", [("1", QSqrt3(1)), ("sqrt3", QSqrt3(0, 1)), ("√3", QSqrt3(0, 1)),
                                       ("2*sqrt3", QSqrt3(0, 2)), ("1 + 2sqrt3", QSqrt3(1, 2))])
def test_parse_length(text, want):
    assert parse_length(text) == want


def test_tile_build(capsys, tmp_path):
    code, out, _ = run(capsys, "tile", "build", "--a", "1", "--b", "sqrt3", "--svg", str(tmp_path / "t.svg"))
    assert code == 0
    data = json.loads(out)
    assert data["vertices"] == 14 and data["simple"]
    assert (tmp_path / "t.svg").read_text().startswith("<svg")


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "tile", "build", "--a", "banana")[0] == 2
    assert run(capsys, "render", str(tmp_path / "missing.patch"))[0] == 2
    assert run(capsys, "hexsub", "--seed", "Omega")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["no-such-verb"])
    assert e.value.code == 2


def test_assemble_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.patch", tmp_path / "b.patch"
    assert run(capsys, "assemble", "--levels", "3", "-o", str(a))[0] == 0
    assert run(capsys, "assemble", "--levels", "3", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "render", str(a), "-o", str(tmp_path / "a.svg"))[0] == 0
    assert (tmp_path / "a.svg").read_text().count('class="tile"') == 559


def test_hexsub_compose_and_periodicity(capsys, tmp_path):
    h2, h1 = tmp_path / "h2.patch", tmp_path / "h1.patch"
    code, out, _ = run(capsys, "hexsub", "--seed", "Delta", "--iters", "2", "--realize", "-o", str(h2))
    assert code == 0 and json.loads(out)["hexagons"] == 63
    code, out, _ = run(capsys, "compose", str(h2), "-o", str(h1))
    assert code == 0 and json.loads(out)["supertiles"] == 8
    code, out, _ = run(capsys, "check-periodic", str(h2))
    assert code == 0 and json.loads(out)["nonperiodic"]
    assert run(capsys, "render", str(h1), "--hexes", "-o", str(tmp_path / "h.svg"))[0] == 0


def test_enumerate_then_reduce(capsys, tmp_path):
    raw, red = tmp_path / "raw.json", tmp_path / "red.json"
    assert run(capsys, "enumerate", "--shapes", "hat,turtle", "--chiral", "-o", str(raw))[0] == 0
    code, out, _ = run(capsys, "reduce", str(raw), "-o", str(red))
    assert code == 0
    assert json.loads(out)["after"] == {"hat": 23, "turtle": 23}


def test_spectre_curve(capsys, tmp_path):
    good = tmp_path / "s.json"
    good.write_text(json.dumps({"kind": "s-curve", "samples": [[0, 0], ["1/4", "1/10"], ["1/2", 0],
                                                               ["3/4", "-1/10"], [1, 0]]}))
    flat = tmp_path / "flat.json"
    flat.write_text(json.dumps({"kind": "s-curve", "samples": [[0, 0], [1, 0]]}))
    code, out, _ = run(capsys, "spectre", "curve", "--file", str(good), "--svg", str(tmp_path / "s.svg"))
    assert code == 0 and json.loads(out)["blocked"]
    assert run(capsys, "spectre", "curve", "--file", str(flat))[0] == 1


def test_hash_mismatch_is_an_input_error(capsys, tmp_path):
    p = tmp_path / "a.patch"
    run(capsys, "assemble", "--levels", "1", "-o", str(p))
    lines = p.read_text().splitlines(keepends=True)
    i = next(i for i, line in enumerate(lines) if line.startswith("tile "))
    f = lines[i].split()
    f[4] = str(int(f[4]) + 2)
    lines[i] = " ".join(f) + "\n"
    p.write_text("".join(lines))
    code, _, err = run(capsys, "render", str(p))
    assert code == 2 and "hash mismatch" in err


def test_verify_report(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "fast", "--only", "1,7,10", "--json", str(rep))
    assert code == 0
    data = json.loads(rep.read_text())
    assert data["passed"] and [c["number"] for c in data["criteria"]] == [1, 7, 10]
    assert out.count("[PASS]") == 3
