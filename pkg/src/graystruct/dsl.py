"""A small line-oriented language for user-defined succession rules.

Example (the Catalan rule)::

    name: catalan
    axiom: 2
    case k>=2: range(2,k), k+1
    stable: i=1 j=2

Exact cases ``case k=<int>:`` are tried before the single general case
``case k>=<int>:``.  Terms are integer literals, ``k``, ``k+c``, ``k-c``,
``range(a,b)`` (a..b inclusive, empty when b < a) and ``rep(x,m)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .rules import (
    DEFAULT_LABEL_BOUND,
    Label,
    RuleError,
    StabilityCertificate,
    SuccessionRule,
    check_stability,
)


class DSLSyntaxError(RuleError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Affine:
    """``coef * k + const`` with coef in {0, 1}."""

    coef: int
    const: int

    def at(self, k: int) -> int:
        return self.coef * k + self.const

    def __str__(self) -> str:
        if not self.coef:
            return str(self.const)
        if self.const > 0:
            return f"k+{self.const}"
        if self.const < 0:
            return f"k-{-self.const}"
        return "k"


@dataclass(frozen=True)
class Single:
    expr: Affine

    def expand(self, k: int) -> List[int]:
        return [self.expr.at(k)]

    def __str__(self) -> str:
        return str(self.expr)


@dataclass(frozen=True)
class Range:
    lo: Affine
    hi: Affine

    def expand(self, k: int) -> List[int]:
        return list(range(self.lo.at(k), self.hi.at(k) + 1))

    def __str__(self) -> str:
        return f"range({self.lo},{self.hi})"


@dataclass(frozen=True)
class Rep:
    expr: Affine
    mult: Affine

    def expand(self, k: int) -> List[int]:
        return [self.expr.at(k)] * max(self.mult.at(k), 0)

    def __str__(self) -> str:
        return f"rep({self.expr},{self.mult})"


Term = Union[Single, Range, Rep]


@dataclass(frozen=True)
class RuleSpec:
    """Parsed form of a rule definition; ``str()`` gives the canonical text."""

    name: str
    axiom: int
    exact: Tuple[Tuple[int, Tuple[Term, ...]], ...]
    general_from: int
    general: Tuple[Term, ...]
    stable: Optional[Tuple[int, int]] = None

    def values_of(self, k: int) -> List[int]:
        for key, terms in self.exact:
            if key == k:
                return _expand(terms, k)
        if k >= self.general_from:
            return _expand(self.general, k)
        raise RuleError(f"rule {self.name!r}: no case matches label ({k})")

    def defines(self, k: int) -> bool:
        return k >= self.general_from or any(key == k for key, _ in self.exact)

    def __str__(self) -> str:
        lines = [f"name: {self.name}", f"axiom: {self.axiom}"]
        for key, terms in self.exact:
            lines.append(f"case k={key}: {_terms_str(terms)}")
        lines.append(f"case k>={self.general_from}: {_terms_str(self.general)}")
        if self.stable is not None:
            lines.append(f"stable: i={self.stable[0]} j={self.stable[1]}")
        return "\n".join(lines) + "\n"


def _expand(terms: Sequence[Term], k: int) -> List[int]:
    out: List[int] = []
    for term in terms:
        out.extend(term.expand(k))
    return out


def _terms_str(terms: Sequence[Term]) -> str:
    return ", ".join(str(t) for t in terms)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<k>k)|(?P<name>range|rep)|(?P<op>[-+(),]))")


class _Terms:
    """Recursive-descent parser over the term list of one ``case`` line."""

    def __init__(self, text: str, line: int, offset: int):
        self.line = line
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                col = offset + pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise DSLSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
            kind = m.lastgroup
            assert kind is not None
            self.tokens.append((kind, m.group(kind), offset + m.start(kind) + 1))
            pos = m.end()
        self.end_col = offset + len(text) + 1
        self.i = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _fail(self, message: str):
        tok = self._peek()
        col = tok[2] if tok else self.end_col
        raise DSLSyntaxError(message, self.line, col)

    def _expect(self, value: str) -> None:
        tok = self._peek()
        if tok is None or tok[1] != value:
            self._fail(f"expected {value!r}")
        self.i += 1

    def expr(self) -> Affine:
        tok = self._peek()
        if tok is None:
            self._fail("expected an integer or k")
        kind, text, _ = tok
        if kind == "int":
            self.i += 1
            return Affine(0, int(text))
        if kind == "k":
            self.i += 1
            nxt = self._peek()
            if nxt is not None and nxt[1] in "+-":
                self.i += 1
                num = self._peek()
                if num is None or num[0] != "int":
                    self._fail("expected an integer after k" + nxt[1])
                self.i += 1
                c = int(num[1])
                return Affine(1, c if nxt[1] == "+" else -c)
            return Affine(1, 0)
        self._fail("expected an integer or k")
        raise AssertionError  # unreachable

    def term(self) -> Term:
        tok = self._peek()
        if tok is not None and tok[0] == "name":
            self.i += 1
            self._expect("(")
            first = self.expr()
            self._expect(",")
            second = self.expr()
            self._expect(")")
            return Range(first, second) if tok[1] == "range" else Rep(first, second)
        return Single(self.expr())

    def terms(self) -> Tuple[Term, ...]:
        out = [self.term()]
        while self._peek() is not None:
            self._expect(",")
            out.append(self.term())
        return tuple(out)


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_()]*$")
_CASE = re.compile(r"case\s+k\s*(>=|=)\s*(\d+)\s*:")
_STABLE = re.compile(r"i\s*=\s*(\d+)\s+j\s*=\s*(\d+)\s*$")


def parse_spec(source: str) -> RuleSpec:
    name = "custom"
    axiom: Optional[int] = None
    exact: Dict[int, Tuple[Term, ...]] = {}
    general: Optional[Tuple[int, Tuple[Term, ...]]] = None
    stable: Optional[Tuple[int, int]] = None
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        if not stripped:
            continue
        m = _CASE.match(stripped)
        if m:
            key = int(m.group(2))
            body_at = indent + m.end()
            terms = _Terms(line[body_at:], lineno, body_at).terms()
            if m.group(1) == "=":
                if key in exact:
                    raise DSLSyntaxError(f"duplicate case k={key}", lineno, indent + 1)
                exact[key] = terms
            else:
                if general is not None:
                    raise DSLSyntaxError("more than one general case", lineno, indent + 1)
                general = (key, terms)
            continue
        keyword, sep, rest = stripped.partition(":")
        keyword = keyword.strip()
        value_col = indent + len(keyword) + 2 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if not sep:
            raise DSLSyntaxError(f"unrecognized line {stripped!r}", lineno, indent + 1)
        if keyword == "name":
            if not _NAME.match(rest):
                raise DSLSyntaxError("expected an identifier", lineno, value_col)
            name = rest
        elif keyword == "axiom":
            if not rest.isdigit() or int(rest) < 1:
                raise DSLSyntaxError("axiom must be a positive integer", lineno, value_col)
            axiom = int(rest)
        elif keyword == "stable":
            sm = _STABLE.match(rest)
            if sm is None:
                raise DSLSyntaxError("expected 'i=<int> j=<int>'", lineno, value_col)
            stable = (int(sm.group(1)), int(sm.group(2)))
            if not 1 <= stable[0] < stable[1]:
                raise DSLSyntaxError("stability positions need 1 <= i < j", lineno, value_col)
        else:
            raise DSLSyntaxError(f"unknown keyword {keyword!r}", lineno, indent + 1)
    last = len(source.splitlines()) + 1
    if axiom is None:
        raise DSLSyntaxError("missing 'axiom:' line", last, 1)
    if general is None:
        raise DSLSyntaxError("missing general case 'case k>=<int>:'", last, 1)
    return RuleSpec(
        name=name,
        axiom=axiom,
        exact=tuple(sorted(exact.items())),
        general_from=general[0],
        general=general[1],
        stable=stable,
    )


def fixed_positions(terms: Sequence[Term], general_from: int) -> Dict[int, int]:
    """Positions holding the same constant value for every k >= general_from.

    Walks the terms while every preceding term has a length independent of k;
    a constant-valued term contributes its guaranteed (minimum-length) prefix.
    """
    fixed: Dict[int, int] = {}
    offset = 0
    for term in terms:
        if isinstance(term, Single):
            if term.expr.coef == 0:
                fixed[offset + 1] = term.expr.const
            offset += 1
            continue
        if isinstance(term, Range):
            slope = term.hi.coef - term.lo.coef
            length_at_min = max(term.hi.at(general_from) - term.lo.at(general_from) + 1, 0)
            min_len = length_at_min if slope >= 0 else 0
            if term.lo.coef == 0:
                for q in range(min_len):
                    fixed[offset + q + 1] = term.lo.const + q
        else:
            slope = term.mult.coef
            min_len = max(term.mult.at(general_from), 0) if slope >= 0 else 0
            if term.expr.coef == 0:
                for q in range(min_len):
                    fixed[offset + q + 1] = term.expr.const
        if slope != 0:
            break
        offset += min_len
    return fixed


def _bfs_defined(spec: RuleSpec, bound: int) -> set:
    seen = {spec.axiom}
    stack = [spec.axiom]
    while stack:
        v = stack.pop()
        if not spec.defines(v):
            raise RuleError(f"rule {spec.name!r}: no case matches reachable label ({v})")
        children = spec.values_of(v)
        if len(children) != v:
            raise RuleError(
                f"rule {spec.name!r}: production of ({v}) has {len(children)} children, expected {v}"
            )
        for c in children:
            if c < 1:
                raise RuleError(f"rule {spec.name!r}: production of ({v}) has a non-positive label")
            if c <= bound and c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def build_rule(spec: RuleSpec, label_bound: int = DEFAULT_LABEL_BOUND) -> SuccessionRule:
    bound = max([label_bound, spec.general_from, spec.axiom] + [k for k, _ in spec.exact])
    reachable = frozenset(_bfs_defined(spec, bound))

    def is_reachable(k: int) -> bool:
        return k in reachable or (k > bound and k >= spec.general_from)

    rule = SuccessionRule(
        spec.name,
        Label(spec.axiom),
        spec.values_of,
        is_reachable,
        fixed_positions=fixed_positions(spec.general, spec.general_from),
        general_from=spec.general_from,
        exact_keys=tuple(k for k, _ in spec.exact if k in reachable),
        source=str(spec),
    )
    verdict = check_stability(rule, label_bound, positions=spec.stable)
    if spec.stable is not None and not isinstance(verdict, StabilityCertificate):
        i, j = spec.stable
        raise RuleError(f"rule {spec.name!r}: declared stability i={i} j={j} does not hold ({verdict})")
    return rule.with_stability(verdict if isinstance(verdict, StabilityCertificate) else None)


def parse_rule(source: str, label_bound: int = DEFAULT_LABEL_BOUND) -> SuccessionRule:
    """Parse rule-DSL text into a :class:`SuccessionRule`.

    Raises :class:`DSLSyntaxError` (with line/column) for malformed text and
    :class:`RuleError` for arity violations or reachable labels with no case.
    """
    return build_rule(parse_spec(source), label_bound)


def to_dsl(rule: SuccessionRule) -> str:
    """Canonical DSL text for a rule that has one (parsed rules and most built-ins)."""
    if rule.source is not None:
        return rule.source
    text = BUILTIN_DSL.get(rule.name)
    if text is None:
        raise RuleError(f"rule {rule.name!r} has no DSL form")
    return str(parse_spec(text))


def _t_ary_text(t: int) -> str:
    return f"name: t_ary({t})\naxiom: {t}\ncase k>={t}: range({t},k+{t - 1})\nstable: i=1 j=2\n"


def _omega_r_text(r: int, name: str) -> str:
    return f"name: {name}\naxiom: {r}\ncase k>={r}: range({r},k), rep(k+1,{r - 1})\nstable: i=1 j=2\n"


BUILTIN_DSL: Dict[str, str] = {
    "catalan": "name: catalan\naxiom: 2\ncase k>=2: range(2,k), k+1\nstable: i=1 j=2\n",
    "odd_fibonacci": "name: odd_fibonacci\naxiom: 2\ncase k=2: 2, 3\ncase k>=3: 2, 3, 3\n",
    "fibonacci": "name: fibonacci\naxiom: 2\ncase k=1: 2\ncase k>=2: 1, 2\n",
    "motzkin": "name: motzkin\naxiom: 1\ncase k>=1: range(1,k-1), k+1\n",
    "schroder_s": _omega_r_text(3, "schroder_s"),
    "grand_dyck": (
        "name: grand_dyck\naxiom: 2\ncase k=2: rep(3,2)\ncase k=3: rep(3,2), 4\n"
        "case k>=4: rep(3,2), range(4,k), k+1\n"
    ),
    "factorial_naive": "name: factorial_naive\naxiom: 1\ncase k>=1: rep(k+1,k)\n",
}
for _t in (2, 3, 4, 5):
    BUILTIN_DSL[f"t_ary({_t})"] = _t_ary_text(_t)
    BUILTIN_DSL[f"omega_r({_t})"] = _omega_r_text(_t, f"omega_r({_t})")
