import json
import subprocess
import sys

import pytest

from genrules.cli import main
from genrules.errors import GrammarError, GrammarSyntaxError
from genrules.grammar import BUNDLED, bundled_path, check_grammar, load_grammar, loads
from genrules.terms import alpha_eq, parse_term

GAPPING = "John met Jane yesterday and Chris today"


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize("name", [n for n in BUNDLED if n != "fig1-illformed"])
def test_bundled_grammars_check_clean(name):
    report = check_grammar(name)
    assert report.ok, report.problems


@pytest.mark.parametrize("name", [n for n in BUNDLED if n != "fig1-illformed"])
def test_round_trip(name):
    g = load_grammar(name)
    text = g.dumps()
    again = loads(text)
    assert again == g
    assert again.dumps() == text


def test_bundled_lookup_forms():
    assert load_grammar("ncc") == load_grammar("ncc.gr") == load_grammar(str(bundled_path("ncc")))


def test_illformed_report():
    report = check_grammar("fig1-illformed")
    assert not report.ok
    assert len(report.conflicts) == 1
    assert "⟨possessive, count-noun⟩" in report.problems[0]
    with pytest.raises(GrammarError):
        load_grammar("fig1-illformed")
    g = load_grammar("fig1-illformed", strict=False)
    assert g.generic["SYN"].bind("her", "sign").signature == ("pronoun", "sign")


def test_cycle_reported():
    report = check_grammar("[types]\na < b\nb < a\n")
    assert not report.ok
    assert any("cycle" in p for p in report.problems)


def test_bounded_completeness_reported():
    text = "[types]\nd1 < b\nd1 < c\nd2 < b\nd2 < c\n"
    report = check_grammar(text)
    assert any("d1" in p and "d2" in p for p in report.problems)


def test_duplicate_signature_reported():
    text = "[types]\nA\nS\n[generic SYN]\nA A : first\nA A : second\n"
    report = check_grammar(text)
    assert any("A⊗A" in p for p in report.problems)


def test_undeclared_type_reported():
    report = check_grammar("[types]\nA\n[generic SYN]\nA B : first\n")
    assert any("'B'" in p or "B" in p for p in report.problems)
    assert not report.ok


def test_duplicate_section_has_line_number():
    with pytest.raises(GrammarSyntaxError) as info:
        loads("[types]\nA\n\n[types]\nB\n")
    assert info.value.line == 4


@pytest.mark.parametrize("text, line", [
    ("[types]\nA\n[lexicon]\nword\n", 4),
    ("[types]\nA\n[generic SYN]\nA A first\n", 4),
    ("# comment\n[nonsense]\n", 2),
    ("A < B\n", 1),
    ("[types]\nA\n[generic SYN]\nA A : comp(fa\n", 4),
    ("[types]\nA\n[generic]\n", 3),
])
def test_syntax_errors_carry_lines(text, line):
    with pytest.raises(GrammarSyntaxError) as info:
        loads(text)
    assert info.value.line == line


def test_comments_are_ignored():
    g = loads("[types]\nA  # an atom\nS\n[lexicon]\na : A\n[generic SYN]\nA A : S\n[goal]\nS # sentence\n")
    assert g.goal == "S"


def test_user_rules_via_registry():
    from genrules.generic_rule import BASE_REGISTRY
    reg = BASE_REGISTRY.copy()
    reg.register_rule("glue", lambda x, y: "%s+%s" % (x, y))
    g = loads("[types]\nA\n[lexicon]\na : A\n[generic SEM]\nA A : glue\n", registry=reg)
    assert g.generic["SEM"].apply("A", "x", "A", "y") == ("x+y",)
    assert not check_grammar("[types]\nA\n[generic SEM]\nA A : glue\n").ok


def test_cli_check(capsys):
    code, out, _ = run(["check", "ncc.gr"], capsys)
    assert code == 0 and out.startswith("ok:")
    code, out, _ = run(["check", "fig1-illformed.gr"], capsys)
    assert code == 2
    assert "⟨possessive, count-noun⟩" in out
    assert out.count("error:") == 1


def test_cli_check_cycle(tmp_path, capsys):
    path = tmp_path / "cycle.gr"
    path.write_text("[types]\na < b\nb < a\n")
    code, out, _ = run(["check", str(path)], capsys)
    assert code == 2 and "cycle" in out


def test_cli_check_missing_file(tmp_path, capsys):
    code, _, err = run(["check", str(tmp_path / "nope.gr")], capsys)
    assert code == 2 and err.startswith("error:")


def test_cli_parse_accept_and_reject(capsys):
    code, out, _ = run(["parse", "ncc.gr", GAPPING], capsys)
    assert code == 0
    assert out.splitlines()[:2] == ["accepted: 1 derivation", "result: s"]
    code, out, _ = run(["parse", "ncc.gr", "today and"], capsys)
    assert code == 1 and "rejected: no derivation" in out


def test_cli_unknown_word(capsys):
    code, out, err = run(["parse", "ncc.gr", "John met Bob"], capsys)
    assert code == 1
    assert "unknown word 'Bob' at position 2" in err


def test_cli_trace_betty(capsys):
    code, out, _ = run(["parse", "betty.gr", "Betty got+angry", "--trace"], capsys)
    assert code == 0
    assert "ANGRY(Betty) & ANGRY(Pete)" in out
    assert "SYN_{NP⊗VP_i}, SEM_{Proper-Noun⊗VP}" in out
    assert "[ S_i •, 2 ]" in out


def test_cli_trace_gapping(capsys):
    code, out, _ = run(["parse", "ncc.gr", GAPPING, "--trace"], capsys)
    assert code == 0
    assert out.count("reduce SYN_{C⊗c<>}") == 2
    assert "<np, (np\\s)\\(np\\s)>\\<np, (np\\s)\\(np\\s)>" in out


def test_cli_json_stable(capsys):
    argv = ["parse", "ncc.gr", "John met Jane yesterday and Chris today and Mary tomorrow", "--json", "--all", "--count"]
    code, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert code == 0 and first == second
    doc = json.loads(first)
    assert set(doc) == {"sentence", "goal", "status", "results", "derivations", "stats"}
    assert doc["status"] == "accepted" and len(doc["derivations"]) == 3
    step = doc["derivations"][0]["steps"][0]
    assert {"step", "kind", "rule", "consumed", "produced", "span"} <= set(step)
    # derivations come out in the canonical step order
    result = load_grammar("ncc").parse(argv[2])
    canonical = sorted(result.derivations, key=lambda d: [s.sort_key() for s in d.steps])
    expected = [[[s.kind, list(s.rules) if s.kind == "reduce" else None, list(s.span)] for s in d.steps]
                for d in canonical]
    got = [[[s["kind"], s["rule"], s["span"]] for s in d["steps"]] for d in doc["derivations"]]
    assert got == expected


def test_cli_json_rejected(capsys):
    code, out, _ = run(["parse", "ncc.gr", "today and", "--json"], capsys)
    assert code == 1
    assert json.loads(out)["status"] == "no derivation"


def test_cli_count(capsys):
    code, out, _ = run(["parse", "ncc.gr", GAPPING, "--count"], capsys)
    assert "attempted reduces: 27" in out and "items: 22" in out


def test_cli_goal(capsys):
    code, _, _ = run(["parse", "ncc.gr", "John", "--goal", "np"], capsys)
    assert code == 0
    code, _, _ = run(["parse", "ncc.gr", "John", "--goal", "s"], capsys)
    assert code == 1


def test_cli_all(capsys):
    code, out, _ = run(["parse", "ncc.gr", "John met Jane yesterday and Chris today and Mary tomorrow", "--all"], capsys)
    assert out.count("derivation ") == 3


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["parse", "ncc.gr"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        main(["parse", "ncc.gr", "John", "--bogus"])
    assert info.value.code == 3


def test_cli_bad_grammar_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.gr"
    path.write_text("[types]\nA\n[lexicon]\nword\n")
    code, _, err = run(["parse", str(path), "word"], capsys)
    assert code == 2 and "bad.gr:4:" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genrules", "parse", "betty.gr", "Betty got+angry", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert alpha_eq(parse_term(doc["results"][0].split(" : ", 1)[1]), parse_term("ANGRY(Betty) & ANGRY(Pete)"))
