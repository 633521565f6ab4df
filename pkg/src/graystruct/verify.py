"""Exhaustive checks of the Gray, completeness, Dyck and theta claims at small sizes."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from math import factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .dyck import next_dyck, word_to_dyck
from .graylist import Word, build_list, format_word, hamming, iter_advance, iter_bfs, iter_init
from .perm import format_permutation, label_of, theta
from .rules import Label, SuccessionRule, builtin, check_stability, expected_count


@dataclass
class CheckReport:
    name: str
    rule: str
    n: int
    passed: bool
    witness: Optional[Tuple[str, ...]] = None
    counters: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.passed and self.witness is None:
            raise ValueError(f"failing check {self.name} needs a witness")

    def to_record(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "rule": self.rule,
                "n": self.n,
                "pass": self.passed,
                "witness": list(self.witness) if self.witness is not None else None,
                "counters": self.counters,
            }
        )

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" witness={' -> '.join(self.witness)}" if self.witness else ""
        return f"{status} {self.name} rule={self.rule} n={self.n}{extra}"


def _first_non_adjacent(words: Sequence[Word]) -> Optional[Tuple[Word, Word]]:
    for u, v in zip(words, words[1:]):
        if hamming(u, v) != 1:
            return u, v
    return None


def check_gray(rule: SuccessionRule, n: int, words: Optional[List[Word]] = None) -> CheckReport:
    """Hamming distance 1 between neighbours in the built list and the loopless stream,
    and the two streams equal element for element."""
    words = build_list(rule, n) if words is None else words
    counters = {"words": len(words)}
    bad = _first_non_adjacent(words)
    if bad is not None:
        return CheckReport("gray", rule.name, n, False, tuple(format_word(w) for w in bad), counters)

    state = iter_init(rule, n)
    prev = state.word
    if prev != words[0]:
        return CheckReport("gray", rule.name, n, False, ("iterator", format_word(prev), format_word(words[0])), counters)
    index = 1
    while iter_advance(state) is not None:
        cur = state.word
        if index >= len(words) or cur != words[index]:
            expected = format_word(words[index]) if index < len(words) else "<end>"
            return CheckReport("gray", rule.name, n, False, ("iterator", format_word(cur), expected), counters)
        if hamming(prev, cur) != 1 or state.last_digits_changed != 1:
            return CheckReport("gray", rule.name, n, False, (format_word(prev), format_word(cur)), counters)
        prev = cur
        index += 1
    if index != len(words):
        return CheckReport("gray", rule.name, n, False, ("iterator stopped early", format_word(prev)), counters)
    counters.update(state.counters)
    return CheckReport("gray", rule.name, n, True, None, counters)


def check_completeness(rule: SuccessionRule, n: int, words: Optional[List[Word]] = None) -> CheckReport:
    """The Gray list is a permutation of the level-order list, with the registered count."""
    words = build_list(rule, n) if words is None else words
    seen = set(words)
    counters = {"words": len(words), "distinct": len(seen)}
    if len(seen) != len(words):
        dup = next(w for i, w in enumerate(words) if w in words[:i])
        return CheckReport("completeness", rule.name, n, False, ("duplicate", format_word(dup)), counters)
    bfs_count = 0
    for w in iter_bfs(rule, n):
        bfs_count += 1
        if w not in seen:
            return CheckReport("completeness", rule.name, n, False, ("missing", format_word(w)), counters)
    counters["bfs"] = bfs_count
    if bfs_count != len(words):
        return CheckReport("completeness", rule.name, n, False, ("count", str(len(words)), str(bfs_count)), counters)
    count = expected_count(rule.name)
    if count is not None:
        counters["expected"] = count(n)
        if count(n) != len(words):
            return CheckReport("completeness", rule.name, n, False, ("expected", str(count(n)), str(len(words))), counters)
    return CheckReport("completeness", rule.name, n, True, None, counters)


def check_dyck_two_bit(n: int) -> CheckReport:
    """Neighbouring Catalan words encode to strings two bits apart; the delta stream
    matches the full encoder at every step."""
    state = iter_init(builtin("catalan"), n)
    word = state.word
    bits = word_to_dyck(word)
    pairs = 0
    while iter_advance(state) is not None:
        nxt = state.word
        full = word_to_dyck(nxt)
        distance = sum(a != b for a, b in zip(bits, full))
        delta = next_dyck(bits, word, nxt)
        if distance != 2 or delta != full:
            return CheckReport(
                "dyck-two-bit", "catalan", n, False,
                (format_word(word), format_word(nxt), bits, full, delta), {"pairs": pairs},
            )
        pairs += 1
        word, bits = nxt, full
    return CheckReport("dyck-two-bit", "catalan", n, True, None, {"pairs": pairs})


def check_theta_partition(n: int) -> CheckReport:
    """The sets theta(pi), pi in S_n, are disjoint and cover S_{n+1}."""
    union: set = set()
    total = 0
    for pi in permutations(range(1, n + 1)):
        children = theta(pi)
        total += len(children)
        for child in children:
            if child in union:
                return CheckReport("theta-partition", "factorial_p", n, False,
                                   ("duplicate", format_permutation(child)), {"children": total})
            union.add(child)
    target = set(permutations(range(1, n + 2)))
    counters = {"children": total, "target": len(target)}
    if union != target:
        odd = sorted(union ^ target)[0]
        return CheckReport("theta-partition", "factorial_p", n, False,
                           ("mismatch", format_permutation(odd)), counters)
    return CheckReport("theta-partition", "factorial_p", n, True, None, counters)


def check_theta_labels(n: int) -> CheckReport:
    """Doubling first entries turns theta into the factorial_p productions."""
    rule = builtin("factorial_p")
    checked = 0
    for pi in permutations(range(1, n + 1)):
        got = sorted(label_of(c).value for c in theta(pi))
        want = sorted(c.value for c in rule.children(label_of(pi).value))
        if got != want:
            return CheckReport("theta-labels", "factorial_p", n, False, (format_permutation(pi),), {"checked": checked})
        checked += 1
    return CheckReport("theta-labels", "factorial_p", n, True, None, {"checked": checked})


def check_theta_ascent(n: int) -> CheckReport:
    """The first k children start with an ascent, the last k with a descent."""
    checked = 0
    for pi in permutations(range(1, n + 1)):
        k = pi[0]
        for idx, child in enumerate(theta(pi), 1):
            ascent = child[0] < child[1]
            if ascent != (idx <= k):
                return CheckReport("theta-ascent", "factorial_p", n, False,
                                   (format_permutation(pi), format_permutation(child)), {"checked": checked})
            checked += 1
    return CheckReport("theta-ascent", "factorial_p", n, True, None, {"checked": checked})


def naive_catalan_list(n: int) -> List[Word]:
    """The Catalan construction with ``<2, 3, ..., k+1>`` in place of ``s(k, 2)``.

    A sublist that should start at a label the new parent does not produce
    also falls back to that classical order.
    """
    level: List[Tuple[int, ...]] = [(2,)]
    for _ in range(n - 1):
        out: List[Tuple[int, ...]] = []
        last: Optional[int] = None
        for u in level:
            k = u[-1]
            start = 2 if last is None else last
            if start == 2 or not 2 <= start <= k + 1:
                order = list(range(2, k + 2))
            else:
                order = list(range(start, k + 2)) + list(range(2, start))
            out.extend(u + (x,) for x in order)
            last = order[-1]
        level = out
    return [tuple(Label(v) for v in w) for w in level]


def check_naive_fails(n: int = 6) -> CheckReport:
    """Expected-failure check: the naive order breaks the Gray property, the real one does not."""
    naive = naive_catalan_list(n)
    bad = _first_non_adjacent(naive)
    real = check_gray(builtin("catalan"), n)
    counters = {"naive_words": len(naive), "true_words": real.counters.get("words", 0)}
    if bad is None:
        return CheckReport("naive-fails", "catalan", n, False, ("naive order has no violation",), counters)
    witness = tuple(format_word(w, compact=True) for w in bad)
    counters["naive_distance"] = hamming(*bad)
    return CheckReport("naive-fails", "catalan", n, real.passed, witness, counters)


def check_refuses(rule: SuccessionRule) -> CheckReport:
    """A rule expected to lack the stability property is refused with a witness."""
    verdict = check_stability(rule)
    if verdict:
        return CheckReport("refuses-stability", rule.name, 0, False, ("certificate", str(verdict)))
    return CheckReport("refuses-stability", rule.name, 0, True, tuple(f"({w})" for w in verdict.witness))


# Desk-scale bounds: largest n swept per rule.
DEFAULT_BOUNDS: Dict[str, int] = {
    "catalan": 12,
    "odd_fibonacci": 16,
    "t_ary(3)": 8,
    "omega_r(3)": 8,
    "schroder_s": 8,
    "grand_dyck": 10,
    "factorial_p": 7,
}
DYCK_BOUND = 10
THETA_BOUND = 6
NEGATIVE_RULES = ("fibonacci", "motzkin", "factorial_naive")


def run_pair(rule: SuccessionRule, n: int) -> List[CheckReport]:
    words = build_list(rule, n)
    return [check_gray(rule, n, words), check_completeness(rule, n, words)]


def sweep_rule(rule: SuccessionRule, n_max: int) -> Iterator[CheckReport]:
    for n in range(1, n_max + 1):
        words = build_list(rule, n)
        yield check_gray(rule, n, words)
        yield check_completeness(rule, n, words)
        del words


def run_all(
    bounds: Optional[Dict[str, int]] = None,
    dyck_bound: int = DYCK_BOUND,
    theta_bound: int = THETA_BOUND,
) -> Iterator[CheckReport]:
    from .rules import resolve_builtin

    for spec, n_max in (bounds or DEFAULT_BOUNDS).items():
        yield from sweep_rule(resolve_builtin(spec), n_max)
    for n in range(2, dyck_bound + 1):
        yield check_dyck_two_bit(n)
    for n in range(1, theta_bound + 1):
        yield check_theta_partition(n)
        yield check_theta_labels(n)
        yield check_theta_ascent(n)
    for name in NEGATIVE_RULES:
        yield check_refuses(builtin(name))
    yield check_naive_fails(6)


CHECKS: Dict[str, Callable[..., CheckReport]] = {
    "gray": check_gray,
    "completeness": check_completeness,
    "dyck-two-bit": check_dyck_two_bit,
    "theta-partition": check_theta_partition,
    "theta-labels": check_theta_labels,
    "theta-ascent": check_theta_ascent,
    "naive-fails": check_naive_fails,
}
