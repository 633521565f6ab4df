"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or rule errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import deque
from typing import Iterable, List, Optional, Sequence, TextIO

from . import verify
from .dsl import parse_rule, to_dsl
from .dyck import dyck_stream
from .graylist import Word, format_word, iter_advance, iter_bfs, iter_init
from .rules import (
    BUILTIN_NAMES,
    RuleError,
    SuccessionRule,
    check_stability,
    iter_builtins,
    reachable_values,
    resolve_builtin,
)

MAX_TREE_DEPTH = 10


class UsageError(Exception):
    pass


def _load_rule(args: argparse.Namespace) -> SuccessionRule:
    if getattr(args, "rule_file", None):
        with open(args.rule_file, encoding="utf-8") as fh:
            return parse_rule(fh.read())
    if not getattr(args, "rule", None):
        raise UsageError("a rule is required: --rule NAME or --rule-file PATH")
    return resolve_builtin(args.rule)


def _production_summary(rule: SuccessionRule, count: int = 2) -> str:
    parts = []
    for v in reachable_values(rule, 16)[:count]:
        parts.append(str(rule.production_of(v)))
    return "; ".join(parts) + "; ..."


def cmd_rules(args: argparse.Namespace, out: TextIO) -> int:
    for rule in iter_builtins():
        if rule.stability is not None:
            c = rule.stability
            status = f"stable (c1={c.c1}, c2={c.c2})"
        else:
            status = f"NOT stable ({check_stability(rule)})"
        out.write(f"{rule.name:<16} axiom ({rule.axiom})  {_production_summary(rule):<44}  {status}\n")
        if args.dsl:
            try:
                text = to_dsl(rule)
            except RuleError:
                continue
            out.write("".join(f"    {line}\n" for line in text.splitlines()))
    return 0


def _format(word: Word, fmt: str) -> str:
    return format_word(word, compact=(fmt == "compact"))


def cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    rule = _load_rule(args)
    if args.order == "bfs":
        for index, word in enumerate(iter_bfs(rule, args.n)):
            if args.format == "records":
                out.write(json.dumps({"index": index, "word": format_word(word), "changed_position": None,
                                      "old": None, "new": None}) + "\n")
            else:
                out.write(_format(word, args.format) + "\n")
        return 0
    state = iter_init(rule, args.n)
    index = 0
    change = None
    while True:
        word = state.word
        if args.format == "records":
            record = {
                "index": index,
                "word": format_word(word),
                "changed_position": change.position if change else None,
                "old": str(change.old) if change else None,
                "new": str(change.new) if change else None,
            }
            out.write(json.dumps(record) + "\n")
        else:
            out.write(_format(word, args.format) + "\n")
        change = iter_advance(state)
        if change is None:
            return 0
        index += 1


def cmd_dyck(args: argparse.Namespace, out: TextIO) -> int:
    for word, bits, delta in dyck_stream(args.n):
        if args.emit == "bits":
            out.write(bits + "\n")
        elif args.emit == "pairs":
            out.write(f"{format_word(word, compact=all(d.value <= 9 for d in word))}\t{bits}\n")
        elif delta is not None:
            out.write(f"{delta[0]}\t{delta[1]}\n")
    return 0


def _reports(args: argparse.Namespace) -> Iterable[verify.CheckReport]:
    if args.all:
        return verify.run_all()
    if args.check in ("naive-fails",):
        return [verify.check_naive_fails(args.n or 6)]
    if args.check in ("dyck-two-bit", "theta-partition", "theta-labels", "theta-ascent"):
        if args.n is None:
            raise UsageError(f"--check {args.check} needs -n")
        return [verify.CHECKS[args.check](args.n)]
    rule = _load_rule(args)
    if args.n is None:
        raise UsageError("-n is required with --rule")
    if args.check in ("gray", "completeness"):
        return [verify.CHECKS[args.check](rule, args.n)]
    if args.check is not None:
        raise UsageError(f"unknown check {args.check!r}")
    if rule.stability is None:
        return [verify.check_refuses(rule)]
    return verify.sweep_rule(rule, args.n) if args.upto else verify.run_pair(rule, args.n)


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    failed = 0
    for report in _reports(args):
        out.write((report.to_record() if args.format == "records" else str(report)) + "\n")
        failed += not report.passed
    return 1 if failed else 0


def tree_dot(rule: SuccessionRule, depth: int) -> str:
    lines = [f'digraph "{rule.name}" {{']
    ids = 0
    lines.append(f'  n0 [label="{rule.axiom}"];')
    queue = deque([(0, rule.axiom, 0)])
    while queue:
        node, label, level = queue.popleft()
        if level == depth:
            continue
        for child in rule.children(label.value):
            ids += 1
            lines.append(f'  n{ids} [label="{child}"];')
            lines.append(f"  n{node} -> n{ids};")
            queue.append((ids, child, level + 1))
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_tree(args: argparse.Namespace, out: TextIO) -> int:
    if args.depth < 0 or args.depth > args.max_depth:
        raise UsageError(f"depth must be between 0 and {args.max_depth}")
    out.write(tree_dot(_load_rule(args), args.depth))
    return 0


def _add_rule_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--rule", help=f"built-in rule ({', '.join(BUILTIN_NAMES)}); e.g. t_ary(3)")
    src.add_argument("--rule-file", metavar="PATH", help="rule definition in the rule DSL")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graystruct", description="Gray codes for stable succession rules")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rules", help="list built-in rules")
    p.add_argument("--dsl", action="store_true", help="also print each rule in the DSL")
    p.set_defaults(func=cmd_rules)

    p = sub.add_parser("gen", help="generate all words of length n")
    _add_rule_args(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--order", choices=("gray", "bfs"), default="gray")
    p.add_argument("--format", choices=("compact", "tokens", "records"), default="tokens")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dyck", help="Dyck bit strings along the Catalan Gray list")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--emit", choices=("bits", "pairs", "deltas"), default="bits")
    p.set_defaults(func=cmd_dyck)

    p = sub.add_parser("verify", help="run exhaustive checks")
    _add_rule_args(p)
    p.add_argument("--all", action="store_true", help="every check within the default bounds")
    p.add_argument("--check", choices=sorted(verify.CHECKS))
    p.add_argument("-n", type=int)
    p.add_argument("--upto", action="store_true", help="sweep every length 1..n")
    p.add_argument("--format", choices=("records", "text"), default="records")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tree", help="export the first levels of the generating tree")
    _add_rule_args(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--format", choices=("dot",), default="dot")
    p.add_argument("--max-depth", type=int, default=MAX_TREE_DEPTH)
    p.set_defaults(func=cmd_tree)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("-n must be >= 1")
    try:
        return args.func(args, out)
    except BrokenPipeError:  # pragma: no cover - e.g. piped into head
        return 0
    except (UsageError, RuleError, ValueError, OSError) as exc:
        # NotStableError lands here too: the message carries the stability witness
        print(f"graystruct: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
