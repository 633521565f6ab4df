"""Gray-code lists of generating-tree words.

``build_list`` follows the recursive construction literally: every word of
the previous level is extended by a shifted list of its last label's sons,
the list starting where the previous sublist ended.  ``GrayIterState`` walks
the same sequence looplessly with focus pointers: a position whose shifted
list is exhausted goes passive until a position to its left changes, and its
branch flips so the next list restarts from the value already in place.
"""
from __future__ import annotations

import logging
from operator import itemgetter, ne
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .rules import Label, NotStableError, RuleError, SuccessionRule, check_stability, same_digit
from .shifted import Branch, next_index, shifted_general

log = logging.getLogger(__name__)

Word = Tuple[Label, ...]

_value = itemgetter(0)


# ---------------------------------------------------------------------------
# serialization


def format_word(word: Sequence[Label], compact: bool = False) -> str:
    """``2,3#1,4`` (tokens) or ``2234`` (compact; uncolored single-digit labels only)."""
    if compact:
        if any(d.color or d.value > 9 for d in word):
            raise ValueError(f"word {format_word(word)} has no compact form")
        return "".join(str(d.value) for d in word)
    return ",".join(str(d) for d in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if "," in text:
        return tuple(Label.parse(tok) for tok in text.split(","))
    if text.isdigit() and len(text) > 1:
        return tuple(Label(int(ch)) for ch in text)
    return (Label.parse(text),)


def hamming(u: Sequence[Label], v: Sequence[Label]) -> int:
    """Number of positions whose digits differ (see :func:`same_digit`)."""
    if len(u) != len(v):
        raise ValueError("words of different lengths")
    strict = sum(map(ne, u, v))
    if strict == sum(map(ne, map(_value, u), map(_value, v))):
        return strict
    return sum(1 for a, b in zip(u, v) if a != b and not same_digit(a, b))


def is_valid_word(rule: SuccessionRule, word: Sequence[Label]) -> bool:
    if not word or word[0] != rule.axiom:
        return False
    try:
        return all(b in rule.children(a.value) for a, b in zip(word, word[1:]))
    except RuleError:
        return False


def _require_stable(rule: SuccessionRule, n: int) -> None:
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    if rule.stability is None:
        refusal = check_stability(rule)
        log.info("refusing Gray generation for %s: %s", rule.name, refusal)
        raise NotStableError(rule.name, refusal)


# ---------------------------------------------------------------------------
# recursive construction


def build_list(rule: SuccessionRule, n: int) -> List[Word]:
    """The Gray list of all length-``n`` words, built level by level."""
    _require_stable(rule, n)
    shifted: Dict[Tuple[int, Label], Tuple[Label, ...]] = {}
    level: List[Word] = [(rule.axiom,)]
    for _ in range(n - 1):
        out: List[Word] = []
        last: Optional[Label] = None
        for u in level:
            k = u[-1].value
            start = rule.fixed_child(k, high=False) if last is None else last
            items = shifted.get((k, start))
            if items is None:
                items = shifted[(k, start)] = shifted_general(rule, k, start).items
            out.extend([u + (x,) for x in items])
            last = items[-1]
        level = out
    return level


# ---------------------------------------------------------------------------
# loopless iteration


class Change(NamedTuple):
    position: int  # 1-based
    old: Label
    new: Label


@dataclass
class GrayIterState:
    """Loopless generator state.

    ``w``, ``e`` and ``d`` are 1-based (slot 0 unused).  ``e[n+1]`` is the
    focus: the position to change next.  Position 1 (the root) never changes;
    reaching it means the list is complete.
    """

    rule: SuccessionRule
    n: int
    w: List[Optional[Label]]
    e: List[int]
    d: List[Branch]
    finished: bool = False
    steps: int = 0
    last_digits_changed: int = 0
    last_slot_touches: int = 0
    digits_changed_min: int = 0
    digits_changed_max: int = 0
    slot_touches_max: int = 0
    # (parent, branch, digit) -> (next digit, list exhausted); filled on first use
    _steps_memo: Dict[Tuple[int, int, Label], Tuple[Label, bool]] = field(default_factory=dict, repr=False)
    _seat_memo: Dict[Tuple[int, int], Label] = field(default_factory=dict, repr=False)

    @property
    def word(self) -> Word:
        return tuple(self.w[1:])  # type: ignore[arg-type]

    @property
    def counters(self) -> Dict[str, int]:
        return {
            "steps": self.steps,
            "digits_changed_min": self.digits_changed_min,
            "digits_changed_max": self.digits_changed_max,
            "slot_touches_max": self.slot_touches_max,
        }

    def advance(self) -> Optional[Change]:
        return iter_advance(self)

    def __iter__(self) -> Iterator[Word]:
        yield self.word
        while iter_advance(self) is not None:
            yield self.word


def iter_init(rule: SuccessionRule, n: int) -> GrayIterState:
    _require_stable(rule, n)
    cert = rule.stability
    assert cert is not None
    w: List[Optional[Label]] = [None, rule.axiom]
    for _ in range(n - 1):
        w.append(rule.child_at(w[-1].value, cert.i))  # type: ignore[union-attr]
    return GrayIterState(rule, n, w, [q - 1 for q in range(n + 2)], [Branch.LOW] * (n + 1))


_FLIP = (Branch.HIGH, Branch.LOW)


def iter_advance(state: GrayIterState) -> Optional[Change]:
    """Change one digit; return what changed, or None once the list is complete."""
    if state.finished:
        raise RuntimeError("advancing a finished Gray iterator")
    rule, n, w, e, d = state.rule, state.n, state.w, state.e, state.d
    cert = rule.stability
    assert cert is not None
    p = e[n + 1]
    e[n + 1] = n
    touches = 2
    if p <= 1:
        state.finished = True
        return None
    parent = w[p - 1].value  # type: ignore[union-attr]
    old = w[p]
    branch = d[p]
    touches += 1
    key = (parent, branch, old)
    hit = state._steps_memo.get(key)
    if hit is None:
        q = next_index(cert.i, cert.j, parent, branch, rule.index_of(parent, old))  # type: ignore[arg-type]
        if q is None:
            raise AssertionError(f"focus landed on exhausted position {p}")
        nxt = rule.child_at(parent, q)
        hit = state._steps_memo[key] = (nxt, nxt == rule.child_at(parent, cert.i if branch else cert.j))
    new, exhausted = hit
    w[p] = new
    changed = 1
    if p < n:
        # the son keeps its role (c1 or c2) but takes the color it has under the new parent
        child = w[p + 1]
        role = d[p + 1]
        seated = state._seat_memo.get((new.value, role))
        if seated is None:
            seated = state._seat_memo[(new.value, role)] = rule.child_at(new.value, cert.j if role else cert.i)
        touches += 1
        if child != seated:
            w[p + 1] = seated
            if not same_digit(child, seated):  # type: ignore[arg-type]
                changed += 1
    if exhausted:
        d[p] = _FLIP[branch]
        e[p + 1] = e[p]
        e[p] = p - 1
        touches += 3

    state.steps += 1
    state.last_digits_changed = changed
    state.last_slot_touches = touches
    if state.steps == 1:
        state.digits_changed_min = state.digits_changed_max = changed
    elif changed != 1:
        state.digits_changed_min = min(state.digits_changed_min, changed)
        state.digits_changed_max = max(state.digits_changed_max, changed)
    if touches > state.slot_touches_max:
        state.slot_touches_max = touches
    return Change(p, old, new)  # type: ignore[arg-type]


def iter_gray(rule: SuccessionRule, n: int) -> Iterator[Word]:
    return iter(iter_init(rule, n))


# ---------------------------------------------------------------------------
# level order (the oracle ordering)


def iter_bfs(rule: SuccessionRule, n: int) -> Iterator[Word]:
    """Length-``n`` words left to right along level ``n-1`` of the generating tree."""
    if n < 1:
        raise ValueError(f"word length must be >= 1, got {n}")
    if n == 1:
        yield (rule.axiom,)
        return
    prefix = [rule.axiom]
    stack = [iter(rule.children(rule.axiom.value))]
    while stack:
        if len(prefix) == n - 1:
            base = tuple(prefix)
            for c in rule.children(prefix[-1].value):
                yield base + (c,)
            stack.pop()
            prefix.pop()
            continue
        c = next(stack[-1], None)
        if c is None:
            stack.pop()
            prefix.pop()
            continue
        prefix.append(c)
        stack.append(iter(rule.children(c.value)))


def bfs_list(rule: SuccessionRule, n: int) -> List[Word]:
    return list(iter_bfs(rule, n))
