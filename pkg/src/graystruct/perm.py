"""An ECO construction of permutations following the stable factorial rule.

``theta`` maps a permutation ``pi`` of length n with first entry k to 2k
permutations of length n+1; their first entries are 1..k and then k+1
(k times), so doubling first entries reproduces the productions
``(2k) -> (2)(4)...(2k)(2k+2)^k``.
"""
from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .rules import Label

Permutation = Tuple[int, ...]


def _replace(seq: Iterable[int], old: int, new: int) -> List[int]:
    return [new if x == old else x for x in seq]


def is_permutation(entries: Sequence[int]) -> bool:
    return sorted(entries) == list(range(1, len(entries) + 1))


def theta(pi: Sequence[int]) -> List[Permutation]:
    """The 2*pi[0] children of ``pi``, in index order."""
    pi = tuple(pi)
    if not pi:
        raise ValueError("theta needs a non-empty permutation")
    if not is_permutation(pi):
        raise ValueError(f"{pi} is not a permutation of 1..{len(pi)}")
    n, k = len(pi), pi[0]
    out: List[Permutation] = []
    for i in range(1, k + 1):
        out.append((i, *_replace(pi, i, n + 1)))
    if k != n:
        swapped = _replace(_replace(pi, k + 1, 0), k, k + 1)
        rho = _replace(swapped, 0, k)[1:]
        big = n + 1
    else:
        rho = list(pi[1:])
        big = n
    for j in range(1, k + 1):
        out.append((k + 1, j, *_replace(rho, j, big)))
    return out


def label_of(pi: Sequence[int]) -> Label:
    return Label(2 * pi[0])


def generate_sn(n: int) -> List[Permutation]:
    """All of S_n by iterating theta from the permutation ``1``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    level: List[Permutation] = [(1,)]
    for _ in range(n - 1):
        level = [child for pi in level for child in theta(pi)]
    return level


def word_to_permutation(word: Sequence[Label]) -> Permutation:
    """Follow a factorial_p word down the theta tree.

    The q-th son in a production corresponds to the q-th child of theta.
    """
    if not word or word[0].value != 2:
        raise ValueError("a factorial_p word starts with the axiom 2")
    pi: Permutation = (1,)
    for parent, child in zip(word, word[1:]):
        k = parent.value // 2
        if child.value <= parent.value:
            q = child.value // 2
        else:
            q = k + (child.color or 1)
        pi = theta(pi)[q - 1]
    return pi


def format_permutation(pi: Sequence[int]) -> str:
    return "".join(map(str, pi)) if len(pi) <= 9 else ",".join(map(str, pi))


def parse_permutation(text: str) -> Permutation:
    text = text.strip()
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return tuple(int(ch) for ch in text)
