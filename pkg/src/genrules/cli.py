"""Command line: ``genrules check FILE`` and ``genrules parse FILE SENTENCE``.

Exit status: 0 clean or accepted, 1 rejected, 2 grammar error, 3 usage error.
FILE may also name a bundled grammar such as ``ncc.gr``.
"""
import argparse
import json
import sys

from .errors import GenericRuleError, GrammarError, GrammarSyntaxError, LexiconError, SearchLimitError
from .grammar import BUNDLED, check_grammar, load_grammar

EXIT_OK, EXIT_REJECTED, EXIT_GRAMMAR, EXIT_USAGE = 0, 1, 2, 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


# record and text formatting

def entry_record(e):
    return {"syn": str(e.syn), "sem": None if e.sem is None else str(e.sem), "span": list(e.span)}


def step_records(derivation):
    """The derivation's steps as plain dicts with stable field names."""
    out = []
    for i, s in enumerate(derivation.steps, 1):
        out.append({
            "step": i,
            "kind": s.kind,
            "j": s.j,
            "rule": list(s.rules) if s.kind == "reduce" else None,
            "word": s.word,
            "consumed": [entry_record(e) for e in s.consumed],
            "produced": [entry_record(e) for e in s.produced],
            "span": list(s.span),
        })
    return out


def show_entry(e):
    text = "%s [%d,%d]" % (e.syn, e.span[0], e.span[1])
    return text if e.sem is None else "%s : %s" % (text, e.sem)


def show_result(e):
    return str(e.syn) if e.sem is None else "%s : %s" % (e.syn, e.sem)


def trace_lines(derivation):
    lines = ["  0. %s" % derivation.items[0]]
    for rec, s, item in zip(step_records(derivation), derivation.steps, derivation.items[1:]):
        if s.kind == "shift":
            what = "shift %s" % (s.word if s.word is not None else "(pending)")
            detail = show_entry(s.produced[0])
        else:
            what = "reduce %s" % ", ".join(s.rules)
            detail = "%s + %s => %s" % (show_entry(s.consumed[0]), show_entry(s.consumed[1]),
                                         " ".join(show_entry(e) for e in s.produced))
        lines.append("  %d. %s   %s" % (rec["step"], item, what))
        lines.append("       %s" % detail)
    return lines


def _report_parse(result, args, out):
    derivs = result.derivations if (args.all or args.trace or args.json) else []
    if not args.all:
        derivs = derivs[:1]
    if args.json:
        doc = {
            "sentence": " ".join(result.tokens),
            "goal": None if result.goal is None else str(result.goal),
            "status": "accepted" if result.accepted else "no derivation",
            "results": [show_result(e) for e in result.results],
            "derivations": [{"result": entry_record(d.result), "steps": step_records(d)} for d in derivs],
        }
        if args.count:
            doc["stats"] = result.stats.as_dict()
        out.write(json.dumps(doc, ensure_ascii=False, indent=2) + "\n")
        return
    if not result.accepted:
        out.write("rejected: no derivation\n")
    else:
        n = len(result.derivations)
        out.write("accepted: %d derivation%s\n" % (n, "" if n == 1 else "s"))
        for e in result.results:
            out.write("result: %s\n" % show_result(e))
    for k, d in enumerate(derivs, 1):
        out.write("derivation %d\n" % k)
        if args.trace:
            out.write("\n".join(trace_lines(d)) + "\n")
        else:
            fired = ["/".join(r) for r in d.fired()]
            out.write("  rules: %s\n" % " ".join(fired))
            out.write("  result: %s\n" % show_result(d.result))
    if args.count:
        st = result.stats
        out.write("attempted reduces: %d\nfired reduces: %d\nitems: %d\nlinks: %d\nshifts: %d\n" % (
            st.attempted, st.fired, st.items, st.links, st.shifts))


# commands

def cmd_check(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        report = check_grammar(args.file)
    except (GrammarSyntaxError, OSError) as exc:
        err.write("error: %s\n" % exc)
        return EXIT_GRAMMAR
    for p in report.problems:
        out.write("error: %s\n" % p)
    if report.ok:
        out.write("ok: %s\n" % args.file)
        return EXIT_OK
    out.write("%d problem%s, %d well-formedness conflict%s\n" % (
        len(report.problems), "" if len(report.problems) == 1 else "s",
        len(report.conflicts), "" if len(report.conflicts) == 1 else "s"))
    return EXIT_GRAMMAR


def cmd_parse(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        grammar = load_grammar(args.file)
        goal = grammar.resolve_goal(args.goal) if args.goal else None
        parser = grammar.make_parser(max_items=args.max_items)
    except (GrammarSyntaxError, GrammarError, OSError) as exc:
        err.write("error: %s\n" % exc)
        return EXIT_GRAMMAR
    try:
        result = parser.parse(args.sentence.split(), goal)
    except LexiconError as exc:
        err.write("error: %s\n" % exc)
        if not args.json:
            out.write("rejected: no derivation\n")
        return EXIT_REJECTED
    except SearchLimitError as exc:
        err.write("error: %s\n" % exc)
        return EXIT_REJECTED
    except GenericRuleError as exc:
        err.write("error: %s\n" % exc)
        return EXIT_GRAMMAR
    _report_parse(result, args, out)
    return EXIT_OK if result.accepted else EXIT_REJECTED


def build_arg_parser():
    ap = _ArgumentParser(prog="genrules", description="Check grammars and parse sentences with generic rules.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    sub.required = True

    check = sub.add_parser("check", help="load a grammar and report compile-time problems")
    check.add_argument("file", help="grammar file, or one of: %s" % ", ".join(BUNDLED))
    check.set_defaults(func=cmd_check)

    parse = sub.add_parser("parse", help="parse a sentence")
    parse.add_argument("file", help="grammar file or bundled grammar name")
    parse.add_argument("sentence", help="whitespace separated tokens; join multiword items with '+'")
    parse.add_argument("--all", action="store_true", help="print every derivation")
    parse.add_argument("--trace", action="store_true", help="print each step with the rule that fired")
    parse.add_argument("--json", action="store_true", help="structured output")
    parse.add_argument("--goal", metavar="G", help="goal category or type instead of the grammar's [goal]")
    parse.add_argument("--count", action="store_true", help="print the reduce-attempt tally")
    parse.add_argument("--max-items", type=int, default=500_000, help=argparse.SUPPRESS)
    parse.set_defaults(func=cmd_parse)
    return ap


def main(argv=None):
    args = build_arg_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
