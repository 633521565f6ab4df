"""Succession rules, colored labels and the stability property.

A succession rule is an axiom label plus a production for every reachable
label: ``(k) -> (e_1(k)) ... (e_k(k))``.  Productions here depend only on the
numeric value of the parent; colors are attached afterwards so that repeated
values inside one production stay distinguishable (``(4#1)(4#2)``).
"""
from __future__ import annotations

import threading
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from math import comb, factorial
from typing import Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

DEFAULT_LABEL_BOUND = 64


class RuleError(ValueError):
    """A rule is malformed or was asked about a label it does not define."""


class NotStableError(RuleError):
    """Gray generation was requested for a rule without the stability property."""

    def __init__(self, rule_name: str, refusal: "StabilityRefusal"):
        super().__init__(f"rule {rule_name!r} is not stable: {refusal}")
        self.refusal = refusal


class Label(NamedTuple):
    value: int
    color: int = 0

    def __str__(self) -> str:
        return str(self.value) if self.color == 0 else f"{self.value}#{self.color}"

    @classmethod
    def parse(cls, text: str) -> "Label":
        text = text.strip()
        value, sep, color = text.partition("#")
        if not value.isdigit() or (sep and not color.isdigit()):
            raise ValueError(f"bad label {text!r}")
        try:
            label = cls(int(value), int(color) if color else 0)
        except ValueError:
            raise ValueError(f"bad label {text!r}") from None
        if label.value < 1 or label.color < 0:
            raise ValueError(f"bad label {text!r}")
        return label


LabelLike = Union[Label, int]


def as_label(k: LabelLike) -> Label:
    return k if isinstance(k, Label) else Label(int(k))


def same_digit(a: Label, b: Label) -> bool:
    """Digit equality used for Hamming distance.

    Colors only disambiguate repeated values inside a single production, so
    an uncolored label matches any color of the same value.
    """
    return a == b or (a.value == b.value and (a.color == 0 or b.color == 0))


def colorize(values: Sequence[int]) -> Tuple[Label, ...]:
    counts = Counter(values)
    seen: Counter = Counter()
    out = []
    for v in values:
        if counts[v] > 1:
            seen[v] += 1
            out.append(Label(v, seen[v]))
        else:
            out.append(Label(v))
    return tuple(out)


@dataclass(frozen=True)
class Production:
    parent: Label
    children: Tuple[Label, ...]

    def __str__(self) -> str:
        return f"({self.parent.value}) -> " + "".join(f"({c})" for c in self.children)


@dataclass(frozen=True)
class StabilityCertificate:
    """Fixed positions ``i < j`` (1-based) holding ``c1`` and ``c2`` in every production.

    A color of 0 on ``c1``/``c2`` means the color of that fixed label varies
    with the parent (e.g. ``4#1`` under ``(3)`` but plain ``4`` under ``(4)``).
    """

    i: int
    j: int
    c1: Label
    c2: Label
    symbolic: bool = False

    def __str__(self) -> str:
        return f"i={self.i}, j={self.j}, c1={self.c1}, c2={self.c2}"


@dataclass(frozen=True)
class StabilityRefusal:
    witness: Tuple[Label, ...]
    reason: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"witness {' '.join(f'({w})' for w in self.witness)}: {self.reason}"


@dataclass(frozen=True, eq=False)
class SuccessionRule:
    """An immutable succession rule; productions are evaluated lazily and cached."""

    name: str
    axiom: Label
    values_of: Callable[[int], Sequence[int]] = field(repr=False)
    reachable: Callable[[int], bool] = field(repr=False)
    stability: Optional[StabilityCertificate] = None
    child_at_fn: Optional[Callable[[int, int], Label]] = field(default=None, repr=False)
    index_of_fn: Optional[Callable[[int, Label], int]] = field(default=None, repr=False)
    # DSL rules: positions whose label is the same constant for every k >= general_from
    fixed_positions: Optional[Mapping[int, int]] = field(default=None, repr=False)
    general_from: Optional[int] = None
    exact_keys: Tuple[int, ...] = ()
    source: Optional[str] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_children", {})
        object.__setattr__(self, "_index", {})
        object.__setattr__(self, "_lock", threading.Lock())

    @property
    def is_stable(self) -> bool:
        return self.stability is not None

    def children(self, k: LabelLike) -> Tuple[Label, ...]:
        v = k.value if isinstance(k, Label) else k
        cached = self._children.get(v)
        if cached is not None:
            return cached
        if not self.reachable(v):
            raise RuleError(f"label ({v}) is not reachable in rule {self.name!r}")
        kids = colorize(list(self.values_of(v)))
        if len(kids) != v:
            raise RuleError(
                f"rule {self.name!r}: production of ({v}) has {len(kids)} children, expected {v}"
            )
        if any(c.value < 1 for c in kids):
            raise RuleError(f"rule {self.name!r}: production of ({v}) has a non-positive label")
        with self._lock:
            return self._children.setdefault(v, kids)

    def production_of(self, k: LabelLike) -> Production:
        k = as_label(k)
        return Production(k, self.children(k.value))

    def child_at(self, k: int, q: int) -> Label:
        """The ``q``-th child (1-based) of a label with value ``k``."""
        if self.child_at_fn is not None:
            return self.child_at_fn(k, q)
        return self.children(k)[q - 1]

    def index_of(self, k: int, label: Label) -> int:
        """Position (1-based) of ``label`` in the production of ``(k)``."""
        if self.index_of_fn is not None:
            return self.index_of_fn(k, label)
        index = self._index.get(k)
        if index is None:
            index = {c: q for q, c in enumerate(self.children(k), 1)}
            with self._lock:
                index = self._index.setdefault(k, index)
        try:
            return index[label]
        except KeyError:
            raise RuleError(f"({label}) is not a child of ({k}) in rule {self.name!r}") from None

    def fixed_child(self, k: int, high: bool) -> Label:
        """The child of ``(k)`` sitting at the certificate's position ``j`` (high) or ``i``."""
        cert = self.stability
        if cert is None:
            raise NotStableError(self.name, check_stability(self))
        return self.child_at(k, cert.j if high else cert.i)

    def with_stability(self, cert: Optional[StabilityCertificate]) -> "SuccessionRule":
        return replace(self, stability=cert)


def reachable_values(rule: SuccessionRule, bound: int = DEFAULT_LABEL_BOUND) -> List[int]:
    """Values reachable from the axiom through labels of value <= bound, in BFS order."""
    start = rule.axiom.value
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for child in rule.children(v):
            if child.value <= bound and child.value not in seen:
                seen.add(child.value)
                order.append(child.value)
                queue.append(child.value)
    return order


def _pairs(kids: Sequence[Label]) -> Dict[Tuple[int, int], Tuple[int, int]]:
    return {
        (i, j): (kids[i - 1].value, kids[j - 1].value)
        for i in range(1, len(kids) + 1)
        for j in range(i + 1, len(kids) + 1)
        if kids[i - 1].value <= kids[j - 1].value
    }


def _fits(kids: Sequence[Label], ij: Tuple[int, int], values: Tuple[int, int]) -> bool:
    i, j = ij
    return j <= len(kids) and kids[i - 1].value == values[0] and kids[j - 1].value == values[1]


def check_stability(
    rule: SuccessionRule,
    label_bound: int = DEFAULT_LABEL_BOUND,
    positions: Optional[Tuple[int, int]] = None,
) -> Union[StabilityCertificate, StabilityRefusal]:
    """Search for fixed positions ``i < j`` shared by every reachable production.

    Exhaustive over reachable labels with value <= ``label_bound``.  DSL rules
    whose general case pins constant labels at fixed positions are also
    certified for every larger label (``symbolic=True``).  ``positions``
    restricts the search to one declared pair.
    """
    values = reachable_values(rule, label_bound)
    candidates: Optional[Dict[Tuple[int, int], Tuple[int, int]]] = None
    colors: Dict[Tuple[int, int], Tuple[set, set]] = {}
    for v in values:
        kids = rule.children(v)
        if len(kids) < 2:
            noun = "child" if len(kids) == 1 else "children"
            return StabilityRefusal(
                (Label(v),),
                f"production {Production(Label(v), kids)} has {len(kids)} {noun}; "
                "it cannot host two fixed positions",
            )
        if candidates is None:
            candidates = _pairs(kids)
            if positions is not None:
                candidates = {ij: vals for ij, vals in candidates.items() if ij == tuple(positions)}
        else:
            candidates = {ij: vals for ij, vals in candidates.items() if _fits(kids, ij, vals)}
        if not candidates:
            return StabilityRefusal(_witness_pair(rule, values, v), "no fixed-position pair is common to these productions")
        for ij in candidates:
            c1s, c2s = colors.setdefault(ij, (set(), set()))
            c1s.add(kids[ij[0] - 1].color)
            c2s.add(kids[ij[1] - 1].color)

    assert candidates is not None
    symbolic_ok = _symbolic_pairs(rule, label_bound)
    if symbolic_ok:
        preferred = [ij for ij in candidates if ij in symbolic_ok]
        if preferred:
            candidates = {ij: candidates[ij] for ij in preferred}
    (i, j) = min(candidates)
    v1, v2 = candidates[(i, j)]
    c1s, c2s = colors[(i, j)]
    c1 = Label(v1, c1s.pop() if len(c1s) == 1 else 0)
    c2 = Label(v2, c2s.pop() if len(c2s) == 1 else 0)
    return StabilityCertificate(i, j, c1, c2, symbolic=(i, j) in symbolic_ok)


def _witness_pair(rule: SuccessionRule, values: Sequence[int], bad: int) -> Tuple[Label, ...]:
    bad_pairs = _pairs(rule.children(bad))
    for u in values:
        if u == bad:
            break
        kids = rule.children(u)
        if not any(_fits(kids, ij, vals) for ij, vals in bad_pairs.items()):
            return (Label(u), Label(bad))
    return (Label(values[0]), Label(bad))


def _symbolic_pairs(rule: SuccessionRule, label_bound: int) -> set:
    """Pairs of positions whose constancy is proven for all k >= general_from."""
    fixed = rule.fixed_positions
    if not fixed or rule.general_from is None:
        return set()
    if rule.general_from > label_bound or any(e > label_bound for e in rule.exact_keys):
        return set()
    ok = set()
    for i in fixed:
        for j in fixed:
            if i < j and fixed[i] <= fixed[j]:
                ok.add((i, j))
    return ok


def verify_certificate(
    rule: SuccessionRule, cert: StabilityCertificate, label_bound: int = DEFAULT_LABEL_BOUND
) -> Optional[Label]:
    """Return the first reachable label violating ``cert``, or None."""
    for v in reachable_values(rule, label_bound):
        kids = rule.children(v)
        if not (cert.i < cert.j <= len(kids)):
            return Label(v)
        a, b = kids[cert.i - 1], kids[cert.j - 1]
        if a.value != cert.c1.value or b.value != cert.c2.value:
            return Label(v)
        if (cert.c1.color and a.color != cert.c1.color) or (cert.c2.color and b.color != cert.c2.color):
            return Label(v)
    return None


# ---------------------------------------------------------------------------
# built-in families


def _t_ary_indexer(t: int):
    def child_at(k: int, q: int) -> Label:
        if not 1 <= q <= k:
            raise RuleError(f"({k}) has no child at position {q}")
        return Label(t + q - 1)

    def index_of(k: int, label: Label) -> int:
        q = label.value - t + 1
        if label.color or not 1 <= q <= k:
            raise RuleError(f"({label}) is not a child of ({k})")
        return q

    return child_at, index_of


def _omega_r_indexer(r: int):
    tail_colored = r - 1 >= 2

    def child_at(k: int, q: int) -> Label:
        m = k - r + 1
        if not 1 <= q <= k:
            raise RuleError(f"({k}) has no child at position {q}")
        if q <= m:
            return Label(r + q - 1)
        return Label(k + 1, q - m if tail_colored else 0)

    def index_of(k: int, label: Label) -> int:
        m = k - r + 1
        v, c = label
        if r <= v <= k and c == 0:
            return v - r + 1
        if v == k + 1 and (1 <= c <= r - 1 if tail_colored else c == 0):
            return m + (c or 1)
        raise RuleError(f"({label}) is not a child of ({k})")

    return child_at, index_of


def _grand_dyck_child_at(k: int, q: int) -> Label:
    if not 1 <= q <= k:
        raise RuleError(f"({k}) has no child at position {q}")
    return Label(3, q) if q <= 2 else Label(q + 1)


def _grand_dyck_index_of(k: int, label: Label) -> int:
    v, c = label
    if v == 3 and c in (1, 2):
        return c
    if 4 <= v <= k + 1 and c == 0:
        return v - 1
    raise RuleError(f"({label}) is not a child of ({k})")


def _factorial_p_child_at(k: int, q: int) -> Label:
    h = k // 2
    if not 1 <= q <= k:
        raise RuleError(f"({k}) has no child at position {q}")
    if q <= h:
        return Label(2 * q)
    return Label(k + 2, q - h if h >= 2 else 0)


def _factorial_p_index_of(k: int, label: Label) -> int:
    h = k // 2
    v, c = label
    if c == 0 and v % 2 == 0 and 2 <= v <= k:
        return v // 2
    if v == k + 2 and (1 <= c <= h if h >= 2 else c == 0):
        return h + (c or 1)
    raise RuleError(f"({label}) is not a child of ({k})")


def _table(productions: Mapping[int, Sequence[int]]) -> Callable[[int], Sequence[int]]:
    def values_of(k: int) -> Sequence[int]:
        return productions[k]

    return values_of


def _catalan(_: Optional[int]) -> SuccessionRule:
    child_at, index_of = _t_ary_indexer(2)
    return SuccessionRule(
        "catalan", Label(2), lambda k: range(2, k + 2), lambda k: k >= 2,
        child_at_fn=child_at, index_of_fn=index_of,
    )


def _t_ary(t: Optional[int]) -> SuccessionRule:
    if t is None or t < 2:
        raise RuleError(f"t_ary needs t >= 2, got {t}")
    child_at, index_of = _t_ary_indexer(t)
    return SuccessionRule(
        f"t_ary({t})", Label(t), lambda k: range(t, k + t), lambda k: k >= t,
        child_at_fn=child_at, index_of_fn=index_of,
    )


def _omega_r(r: Optional[int], name: Optional[str] = None) -> SuccessionRule:
    if r is None or r < 2:
        raise RuleError(f"omega_r needs r >= 2, got {r}")
    child_at, index_of = _omega_r_indexer(r)
    return SuccessionRule(
        name or f"omega_r({r})", Label(r),
        lambda k: list(range(r, k + 1)) + [k + 1] * (r - 1), lambda k: k >= r,
        child_at_fn=child_at, index_of_fn=index_of,
    )


def _schroder_s(_: Optional[int]) -> SuccessionRule:
    # Same productions as omega_r(3); the axiom is (3) because the worked
    # construction starts from <3>.
    return _omega_r(3, name="schroder_s")


def _grand_dyck(_: Optional[int]) -> SuccessionRule:
    return SuccessionRule(
        "grand_dyck", Label(2), lambda k: [3, 3] + list(range(4, k + 2)), lambda k: k >= 2,
        child_at_fn=_grand_dyck_child_at, index_of_fn=_grand_dyck_index_of,
    )


def _odd_fibonacci(_: Optional[int]) -> SuccessionRule:
    table = {2: (2, 3), 3: (2, 3, 3)}
    return SuccessionRule("odd_fibonacci", Label(2), _table(table), table.__contains__)


def _fibonacci(_: Optional[int]) -> SuccessionRule:
    table = {2: (1, 2), 1: (2,)}
    return SuccessionRule("fibonacci", Label(2), _table(table), table.__contains__)


def _motzkin(_: Optional[int]) -> SuccessionRule:
    return SuccessionRule(
        "motzkin", Label(1), lambda k: list(range(1, k)) + [k + 1], lambda k: k >= 1
    )


def _factorial_p(_: Optional[int]) -> SuccessionRule:
    return SuccessionRule(
        "factorial_p", Label(2),
        lambda k: list(range(2, k + 1, 2)) + [k + 2] * (k // 2),
        lambda k: k >= 2 and k % 2 == 0,
        child_at_fn=_factorial_p_child_at, index_of_fn=_factorial_p_index_of,
    )


def _factorial_naive(_: Optional[int]) -> SuccessionRule:
    return SuccessionRule("factorial_naive", Label(1), lambda k: [k + 1] * k, lambda k: k >= 1)


_FAMILIES: Dict[str, Callable[[Optional[int]], SuccessionRule]] = {
    "catalan": _catalan,
    "odd_fibonacci": _odd_fibonacci,
    "fibonacci": _fibonacci,
    "motzkin": _motzkin,
    "t_ary": _t_ary,
    "omega_r": _omega_r,
    "schroder_s": _schroder_s,
    "grand_dyck": _grand_dyck,
    "factorial_p": _factorial_p,
    "factorial_naive": _factorial_naive,
}

PARAMETRIC = {"t_ary": "t", "omega_r": "r"}

BUILTIN_NAMES = tuple(_FAMILIES)

_builtin_cache: Dict[Tuple[str, Optional[int]], SuccessionRule] = {}
_builtin_lock = threading.Lock()


def builtin(name: str, param: Optional[int] = None, **params: int) -> SuccessionRule:
    """Return a built-in rule family, with its stability certificate when it has one.

    >>> builtin("t_ary", t=3).name
    't_ary(3)'
    """
    if name not in _FAMILIES:
        raise RuleError(f"unknown rule family {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if params:
        expected = PARAMETRIC.get(name)
        if expected is None or set(params) != {expected}:
            raise RuleError(f"invalid parameters for {name}: {params}")
        param = params[expected]
    if name in PARAMETRIC and param is None:
        raise RuleError(f"{name} needs the parameter {PARAMETRIC[name]}")
    if name not in PARAMETRIC and param is not None:
        raise RuleError(f"{name} takes no parameter")
    key = (name, param)
    with _builtin_lock:
        rule = _builtin_cache.get(key)
    if rule is None:
        rule = _FAMILIES[name](param)
        verdict = check_stability(rule)
        if verdict:
            rule = rule.with_stability(verdict)
        with _builtin_lock:
            rule = _builtin_cache.setdefault(key, rule)
    return rule


def resolve_builtin(spec: str) -> SuccessionRule:
    """Parse ``catalan``, ``t_ary(3)``, ``t_ary:3`` or ``t_ary=3``."""
    spec = spec.strip()
    for sep in ("(", ":", "="):
        if sep in spec:
            name, _, rest = spec.partition(sep)
            rest = rest.rstrip(")").strip()
            try:
                return builtin(name.strip(), int(rest))
            except ValueError as exc:
                if isinstance(exc, RuleError):
                    raise
                raise RuleError(f"bad rule parameter in {spec!r}") from None
    return builtin(spec)


# Level sizes |L_n| for families whose counting sequence is known.
def _t_ary_count(t: int) -> Callable[[int], int]:
    return lambda n: comb(t * n, n) // ((t - 1) * n + 1)


def _little_schroder(n: int) -> int:
    # s_1 = s_2 = 1, (n+1) s_{n+1} = 3(2n-1) s_n - (n-2) s_{n-1}
    s = [0, 1, 1]
    for m in range(2, n):
        s.append((3 * (2 * m - 1) * s[m] - (m - 2) * s[m - 1]) // (m + 1))
    return s[n]


def _odd_fib(n: int) -> int:
    a, b = 1, 1
    for _ in range(2 * n - 2):
        a, b = b, a + b
    return a


def expected_count(rule_name: str) -> Optional[Callable[[int], int]]:
    """Closed-form number of length-n words for a registered family, if known."""
    if rule_name == "catalan":
        return _t_ary_count(2)
    if rule_name.startswith("t_ary("):
        return _t_ary_count(int(rule_name[6:-1]))
    if rule_name in ("schroder_s", "omega_r(3)"):
        return lambda n: _little_schroder(n + 1)
    if rule_name == "omega_r(2)":
        return _t_ary_count(2)
    return {
        "factorial_p": factorial,
        "grand_dyck": lambda n: comb(2 * n - 2, n - 1),
        "odd_fibonacci": _odd_fib,
    }.get(rule_name)


def iter_builtins() -> Iterator[SuccessionRule]:
    """One representative per family (parametric families at their smallest interesting value)."""
    for name in BUILTIN_NAMES:
        if name == "t_ary":
            yield builtin(name, 3)
        elif name == "omega_r":
            yield builtin(name, 3)
        else:
            yield builtin(name)
