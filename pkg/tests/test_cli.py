import pytest

from mso_access.acceptance import REPLACE_PROGRAM
from mso_access.cli import main


@pytest.fixture
def abbab(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("a b b a b\n")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, a0_file):
    code, out, _ = run(capsys, "validate", "--automaton", a0_file)
    assert code == 0
    assert "functional: yes; unambiguous: yes" in out
    assert "X_q3 = {x1,x2}" in out


def test_validate_conflict(capsys, tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet a b\nvar x\nstate p initial\nstate q final\n"
                   "trans p a x q\ntrans p b - q\n")
    code, _, err = run(capsys, "validate", "--automaton", bad)
    assert code == 2 and "x" in err


def test_validate_trims_with_notice(capsys, tmp_path, a0_file):
    path = tmp_path / "extra.aut"
    path.write_text(a0_file.read_text() + "state orphan\ntrans orphan a - q0\n")
    code, out, _ = run(capsys, "validate", "--automaton", path)
    assert code == 0 and "notice: trimmed states orphan" in out


def test_validate_ambiguous(capsys, tmp_path):
    path = tmp_path / "amb.aut"
    path.write_text("alphabet a\nstate p initial\nstate q final\nstate r final\n"
                    "trans p a - q\ntrans p a - r\n")
    code, out, _ = run(capsys, "validate", "--automaton", path)
    assert code == 2 and "unambiguous: no" in out
    code, out, _ = run(capsys, "count", "--automaton", path, "--string", "a")
    assert code == 2
    code, out, _ = run(capsys, "count", "--automaton", path, "--string", "a",
                       "--skip-unambiguity-check")
    assert code == 0 and out == "2\n"


def test_count(capsys, a0_file, abbab):
    assert run(capsys, "count", "--automaton", a0_file, "--input", abbab) == (0, "4\n", "")


def test_chars_flag(capsys, a0_file, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("abbbab\n")
    assert run(capsys, "count", "--automaton", a0_file, "--input", path, "--chars")[1] == "5\n"


def test_get_with_order(capsys, a0_file, abbab):
    code, out, _ = run(capsys, "get", "--automaton", a0_file, "--input", abbab,
                       "--index", 3, "--order", "x2,x1")
    assert code == 0 and out == "x2=3 x1=4\n"


def test_get_out_of_bounds(capsys, a0_file, abbab):
    code, _, err = run(capsys, "get", "--automaton", a0_file, "--input", abbab, "--index", 5)
    assert code == 3
    assert "out-of-bounds: index 5 > count 4" in err


def test_enumerate_with_oracle(capsys, a0_file, abbab):
    code, out, err = run(capsys, "enumerate", "--automaton", a0_file, "--input", abbab, "--oracle")
    assert code == 0
    assert out.splitlines() == ["x1=1 x2=2", "x1=4 x2=2", "x1=4 x2=3", "x1=4 x2=5"]
    assert "agrees" in err


def test_bad_order_is_a_validation_failure(capsys, a0_file, abbab):
    code, _, _ = run(capsys, "enumerate", "--automaton", a0_file, "--input", abbab, "--order", "x1")
    assert code == 2


def test_edit(capsys, tmp_path):
    aut = tmp_path / "a0c.aut"
    from mso_access.fixtures import A0_TEXT
    aut.write_text(A0_TEXT.replace("alphabet a b", "alphabet a b c"))
    prog = tmp_path / "replaced.prog"
    prog.write_text(REPLACE_PROGRAM)
    assert run(capsys, "edit", "--automaton", aut, "--program", prog)[1] == "bbbbab\n"
    assert run(capsys, "edit", "--automaton", aut, "--program", prog, "--count")[1] == "5\n"
    code, out, _ = run(capsys, "edit", "--automaton", aut, "--program", prog, "--index", 1)
    assert code == 0 and out == "x1=5 x2=1\n"


def test_edit_bad_program(capsys, a0_file, tmp_path):
    prog = tmp_path / "bad.prog"
    prog.write_text("db s ab\nsplit A B = s 7\noutput A\n")
    code, _, err = run(capsys, "edit", "--automaton", a0_file, "--program", prog)
    assert code == 2 and "rule 1" in err


@pytest.mark.parametrize("argv", [
    [],
    ["count", "--automaton", "x"],
    ["count", "--automaton", "x", "--input", "y", "--string", "z"],
    ["get", "--automaton", "x", "--string", "ab", "--index", "two"],
    ["edit", "--automaton", "x", "--program", "p", "--count", "--index", "1"],
    ["bench", "--n", "0"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        if main(argv) == 1:
            raise SystemExit(1)
    assert info.value.code == 1


def test_missing_file(capsys):
    code, _, err = run(capsys, "count", "--automaton", "/nonexistent.aut", "--string", "a")
    assert code == 2 and "error" in err


def test_bench_is_deterministic(capsys):
    first = run(capsys, "bench", "--n", 1, 4096, "--trials", 5)
    second = run(capsys, "bench", "--n", 1, 4096, "--trials", 5)
    assert first == second and first[0] == 0
    lines = first[1].splitlines()
    assert "height 1" in lines
    assert all(len(line.split()) in (2, 4) or line.startswith("violation") for line in lines)


def test_bench_growth_is_logarithmic(capsys):
    out = run(capsys, "bench", "--n", 4096, 8192, "--trials", 10)[1]
    mults = [int(line.split()[1]) for line in out.splitlines()
             if line.startswith("max_access_multiplications")]
    # one more tree level costs a bounded number of extra products per variable
    assert mults[1] - mults[0] <= 2 * 60


def test_dump(capsys, a0_file):
    code, out, _ = run(capsys, "dump", "--automaton", a0_file, "--string", "abbbab", "--chars")
    assert code == 0
    assert out.splitlines()[0] == "v1 label=b size=6 height=3"
