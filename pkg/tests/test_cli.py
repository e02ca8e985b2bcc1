import json

import pytest

from relext import cli


@pytest.fixture
def spec(tmp_path):
    def write(text, name="cat.toml"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


A2 = 'backend = "quiverA"\nn = 2\np = 2\n'
A3 = 'backend = "quiverA"\nn = 3\norientation = "RR"\np = 2\n'
ST4 = 'backend = "stmod"\nn = 4\np = 2\n'


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_load_category(spec):
    cat = cli.load_category(spec(A3))
    assert cat.n == 6 and len(cat.projectives) == 3
    assert cli.load_category(spec(ST4)).n == 3
    j = spec(json.dumps({"backend": "stmod", "n": 3, "p": 3}), "c.json")
    assert cli.load_category(j).p == 3


@pytest.mark.parametrize("text", ['backend = "quiverA"\nn = 1\n', 'backend = "other"\nn = 3\n',
                                  'backend = "stmod"\nn = 4\ncolour = 1\n', 'backend = = 1',
                                  'backend = "stmod"\nn = 4\norientation = "R"\n'])
def test_bad_specs(spec, capsys, text):
    code, _, err = run(capsys, "-c", spec(text), "info")
    assert code == 2 and err.startswith("error:")


def test_missing_file(capsys):
    assert run(capsys, "-c", "/nonexistent.toml", "info")[0] == 2


def test_ext_table_a2(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A2), "ext-table", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["objects"] == ["[1,1]", "[2,2]", "[1,2]"]
    assert doc["ext"] == [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    code, out, _ = run(capsys, "-c", spec(A2), "ext-table")
    assert len(out.strip().splitlines()) == 4


def test_info(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A3), "info")
    assert code == 0 and "projectives (*): [3,3], [2,3], [1,3]" in out


def test_closed_dot_is_cube(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A3), "closed", "enumerate", "--format", "dot")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "digraph closed {" and lines[-1] == "}"
    assert sum("[label=" in x for x in lines) == 8
    assert sum("->" in x for x in lines) == 12
    again = run(capsys, "-c", spec(A3), "closed", "enumerate", "--format", "dot")[1]
    assert again == out


def test_closed_json(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(ST4), "closed", "enumerate", "--format", "json")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 8 and len(doc["edges"]) == 12


def test_subfunctor_check(spec, capsys, tmp_path):
    cat = spec(A3)
    good = tmp_path / "good.toml"
    good.write_text('[[pair]]\nc = "S1"\na = "S2"\nbasis = [[1]]\n')
    code, out, _ = run(capsys, "-c", cat, "subfunctor", "check", str(good))
    assert code == 0 and "closed: yes" in out
    # a non-closed additive subfunctor from the oracle, written back out
    from relext import oracle as O
    f = O.oracle_closed(cli.load_category(cat)).non_closed[0]
    bad = tmp_path / "bad.toml"
    bad.write_text(cli.subfunctor_toml(f))
    code, out, _ = run(capsys, "-c", cat, "subfunctor", "check", str(bad))
    assert code == 1 and "closed: no" in out and "counterexample" in out
    malformed = tmp_path / "m.toml"
    malformed.write_text('[[pair]]\nc = "S1"\na = "S2"\nbasis = [[1, 0]]\n')
    assert run(capsys, "-c", cat, "subfunctor", "check", str(malformed))[0] == 2
    unknown = tmp_path / "u.toml"
    unknown.write_text('[[pair]]\nc = "Q"\na = "S2"\nbasis = [[1]]\n')
    assert run(capsys, "-c", cat, "subfunctor", "check", str(unknown))[0] == 2


def test_subfunctor_not_additive(spec, capsys, tmp_path):
    cat = spec(A3)
    from relext import relative as R
    c = cli.load_category(cat)
    for j, i in c.ext_pairs():
        p = tmp_path / f"x{j}{i}.toml"
        p.write_text(f'[[pair]]\nc = "{c.name(j)}"\na = "{c.name(i)}"\nbasis = [[1]]\n')
        f = cli.load_subfunctor(c, p)
        if not R.validate_subfunctor(f).ok:
            code, out, _ = run(capsys, "-c", cat, "subfunctor", "check", str(p))
            assert code == 1 and "additive: no" in out
            return
    pytest.fail("no unstable single-pair assignment")


def test_relative(spec, capsys):
    cat = spec(A3)
    code, out, _ = run(capsys, "-c", cat, "relative", "--yoneda", "[1,1],S2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["closed"] and doc["support"] == ["[1,2]"]
    code, out, _ = run(capsys, "-c", cat, "relative", "--projectivize", "S1,S2")
    assert code == 0 and out.startswith("# support {[1,1],[2,2]}")
    code, out, _ = run(capsys, "-c", cat, "relative", "--co-yoneda", "S1", "--format", "json")
    assert code == 0
    code, out, _ = run(capsys, "-c", spec(ST4), "relative", "--exact", "--format", "json")
    assert json.loads(out)["pairs"] == []
    assert run(capsys, "-c", cat, "relative", "--yoneda", "nope")[0] == 2


def test_defect(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A2), "defect", "--ext", "S1", "S2", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["middle"] == "[1,2]"
    assert doc["contravariant"] == {"[1,1]": 1, "[2,2]": 0, "[1,2]": 0}
    assert doc["covariant"] == {"[1,1]": 0, "[2,2]": 1, "[1,2]": 0}
    assert doc["composition_factors"] == {"[1,1]": 1}
    assert run(capsys, "-c", spec(A2), "defect", "--ext", "S1", "S2", "1", "1")[0] == 2
    assert run(capsys, "-c", spec(A2), "defect", "--ext", "S1", "S2", "x")[0] == 2


def test_oracle(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A3), "oracle", "enumerate")
    assert code == 0 and "additive subfunctors: 13" in out and "agreement: yes" in out
    assert run(capsys, "-c", spec(ST4), "oracle", "enumerate", "--cap", "5")[0] == 2
    assert run(capsys, "-c", spec(A3), "oracle", "enumerate", "--bound", "0")[0] == 2


def test_verify_all_stmod4(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(ST4), "verify", "all", "--seed", "7")
    assert code == 0
    assert out.count("[PASS]") == 12


def test_verify_all_a2_degenerate(spec, capsys):
    code, out, _ = run(capsys, "-c", spec(A2), "verify", "all")
    assert code == 0
    assert "[DEGENERATE]" in out and "[N/A]" in out


def test_requires_category(capsys):
    assert run(capsys, "info")[0] == 2
