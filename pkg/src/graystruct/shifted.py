"""Shifted productions: reorderings of a label's children used to join sublists.

For a stable rule with fixed positions ``i < j`` the two orderings of the
children of ``(k)`` are, by production index::

    low  (starts at c1): i, i-1..1, k..j+1, j-1..i+1, j
    high (starts at c2): j, j+1..k, 1..i-1, i+1..j-1, i

Each is a concatenation of at most five monotone runs, so the successor of an
element is found with constant work once the rule can map labels to indices.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import chain
from typing import Optional, Tuple

from .rules import Label, LabelLike, NotStableError, RuleError, SuccessionRule, as_label, check_stability


class Branch(enum.IntEnum):
    LOW = 0
    HIGH = 1


@dataclass(frozen=True)
class ShiftedList:
    parent: Label
    start: Label
    items: Tuple[Label, ...]

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "<" + ",".join(str(x) for x in self.items) + ">"


def shifted_catalan(k: int, start: int) -> ShiftedList:
    """The Catalan list of the sons of ``k`` beginning with ``start``.

    ``start == 2`` gives ``<2, k+1, k, ..., 3>``; any other start is a cyclic
    rotation of ``<2, ..., k+1>``.
    """
    if k < 2:
        raise RuleError(f"Catalan labels are >= 2, got {k}")
    if not 2 <= start <= k + 1:
        raise RuleError(f"start {start} is not a son of ({k}); expected 2..{k + 1}")
    if start == 2:
        values = chain([2], range(k + 1, 2, -1))
    else:
        values = chain(range(start, k + 2), range(2, start))
    return ShiftedList(Label(k), Label(start), tuple(Label(v) for v in values))


def _runs(i: int, j: int, k: int, branch: Branch) -> Tuple[range, ...]:
    if not branch:
        return (range(i, i - 1, -1), range(i - 1, 0, -1), range(k, j, -1), range(j - 1, i, -1), range(j, j - 1, -1))
    return (range(j, j + 1), range(j + 1, k + 1), range(1, i), range(i + 1, j), range(i, i + 1))


def next_index(i: int, j: int, k: int, branch: Branch, q: int) -> Optional[int]:
    """Production index following ``q`` in the shifted order, or None at the end."""
    runs = _runs(i, j, k, branch)
    for n, run in enumerate(runs):
        if q in run:
            pos = run.index(q)
            if pos + 1 < len(run):
                return run[pos + 1]
            for later in runs[n + 1:]:
                if later:
                    return later[0]
            return None
    raise RuleError(f"index {q} is outside the production of size {k}")


def _certificate(rule: SuccessionRule):
    cert = rule.stability
    if cert is None:
        raise NotStableError(rule.name, check_stability(rule))
    return cert


def branch_of(rule: SuccessionRule, k: LabelLike, start: Label) -> Branch:
    """Which shifted list of ``(k)`` begins with ``start``.

    Matching is by value, as the list depends only on values; when both fixed
    labels share a value (``3#1``/``3#2``) the color decides.
    """
    cert = _certificate(rule)
    kv = as_label(k).value
    low, high = rule.child_at(kv, cert.i), rule.child_at(kv, cert.j)
    if low.value != high.value:
        if start.value == low.value:
            return Branch.LOW
        if start.value == high.value:
            return Branch.HIGH
    else:
        if start == low:
            return Branch.LOW
        if start == high:
            return Branch.HIGH
    raise RuleError(f"start ({start}) is neither fixed label of ({kv}): expected ({low}) or ({high})")


def shifted_general(rule: SuccessionRule, k: LabelLike, start: LabelLike) -> ShiftedList:
    k, start = as_label(k), as_label(start)
    cert = _certificate(rule)
    branch = branch_of(rule, k, start)
    indices = chain.from_iterable(_runs(cert.i, cert.j, k.value, branch))
    items = tuple(rule.child_at(k.value, q) for q in indices)
    # start is matched by value; report it as it appears under this parent
    return ShiftedList(k, items[0], items)


def next_in_shifted(rule: SuccessionRule, k: LabelLike, branch: Branch, current: Label) -> Optional[Label]:
    """The element after ``current`` in the ``branch`` list of ``(k)``; None when exhausted."""
    cert = _certificate(rule)
    kv = as_label(k).value
    q = next_index(cert.i, cert.j, kv, Branch(branch), rule.index_of(kv, current))
    return None if q is None else rule.child_at(kv, q)
