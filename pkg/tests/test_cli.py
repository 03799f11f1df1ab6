import io
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction

import pytest

from singforms.cli import (
    EXIT_INPUT,
    EXIT_NON_ISOLATED,
    EXIT_OK,
    EXIT_SOLVER,
    main,
    parse_problem_file,
    problem_to_instance,
)

EX1_N2 = """
# quadric with a generic diagonal 1-form
mode: icis
variables: x1, x2
f: x1^2 + x2^2
omega: x1, 2*x2
"""

SMOOTH = """
variables: x1, x2
f: x1
omega: 0, x2
"""

ELKH_ID = """
mode: elkh
variables: x, y
omega: x, y
"""

NON_ISOLATED = """
variables: x1, x2
f: x1^2
omega: 1, 0
"""


def run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(args)
    return code, out.getvalue(), err.getvalue()


# ---- problem files ------------------------------------------------------------

def test_parse_problem_file():
    pf = parse_problem_file(EX1_N2)
    assert pf.mode == "icis"
    assert pf.variables == ["x1", "x2"]
    assert pf.f == ["x1^2 + x2^2"]
    assert pf.omega == ["x1", "2*x2"]
    inst = problem_to_instance(pf)
    assert inst.n == 2 and inst.k == 1


def test_parse_problem_file_elkh():
    pf = parse_problem_file(ELKH_ID)
    assert pf.mode == "elkh" and pf.f == []
    inst = problem_to_instance(pf)
    assert inst.k == 0


@pytest.mark.parametrize(
    "text",
    [
        "variables: x\nomega: x, y\n",  # omega length mismatch
        "variables: x, y\nf: x\nomega: x, y\nmode: weird\n",
        "variables: x, y\nomega: x, y\n",  # icis without f
        "mode: elkh\nvariables: x, y\nf: x\nomega: x, y\n",
        "nonsense line\n",
    ],
)
def test_parse_problem_file_rejects(text):
    with pytest.raises(ValueError):
        parse_problem_file(text)


# ---- analyze ------------------------------------------------------------------

def test_analyze_smooth_line(tmp_path):
    path = tmp_path / "smooth.txt"
    path.write_text(SMOOTH)
    code, out, _ = run_cli(["analyze", str(path)])
    assert code == EXIT_OK
    assert "nu: 1" in out
    assert "rank_qa: 1" in out
    assert "signature_qa: 1" in out
    assert "all_checks: pass" in out


def test_analyze_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("variables x y\n")
    assert run_cli(["analyze", str(bad)])[0] == EXIT_INPUT

    noniso = tmp_path / "noniso.txt"
    noniso.write_text(NON_ISOLATED)
    code, _, err = run_cli(["analyze", str(noniso)])
    assert code == EXIT_NON_ISOLATED
    assert "INFINITE" in err

    missing = tmp_path / "missing.txt"
    assert run_cli(["analyze", str(missing)])[0] == EXIT_INPUT


def test_analyze_non_convergent_radii(tmp_path):
    """An unreachable agreement tolerance reports the limit failure path."""
    path = tmp_path / "ex1.txt"
    path.write_text(EX1_N2)
    code, _, err = run_cli(
        ["analyze", str(path), "--tol-match", "1e-18"]
    )
    assert code == EXIT_SOLVER
    assert "circle means disagree" in err


def test_report_deterministic_and_round_trip(tmp_path):
    path = tmp_path / "ex1.txt"
    path.write_text(EX1_N2)
    out1 = tmp_path / "r1.txt"
    out2 = tmp_path / "r2.txt"
    assert run_cli(["analyze", str(path), "--out", str(out1)])[0] == EXIT_OK
    assert run_cli(["analyze", str(path), "--out", str(out2)])[0] == EXIT_OK
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    # exact Gram entries round-trip through the fraction parser
    text = b1.decode()
    lines = text.splitlines()
    start = lines.index("gram_qa_exact:") + 1
    rows = []
    while lines[start].startswith("  "):
        rows.append([Fraction(v) for v in lines[start].split()])
        start += 1
    assert rows[1][1] == Fraction(1, 2)
    assert rows[0][3] == Fraction(-1, 2)


def test_report_identical_across_thread_counts(tmp_path):
    path = tmp_path / "ex1.txt"
    path.write_text(EX1_N2)
    out1 = tmp_path / "t1.txt"
    out2 = tmp_path / "t2.txt"
    assert (
        run_cli(["analyze", str(path), "--threads", "1", "--out", str(out1)])[0]
        == EXIT_OK
    )
    assert (
        run_cli(["analyze", str(path), "--threads", "2", "--out", str(out2)])[0]
        == EXIT_OK
    )
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_corpus_single(tmp_path):
    code, out, _ = run_cli(["verify-corpus", "--only", "smooth_line"])
    assert code == EXIT_OK
    assert "claims+checks pass" in out
    assert "corpus: all pass" in out


def test_verify_corpus_seed_independent():
    """Exact claims hold along a different generic ray."""
    code, out, _ = run_cli(["verify-corpus", "--only", "cusp", "--seed", "7"])
    assert code == EXIT_OK
    assert "corpus: all pass" in out
