"""Dyck-path bit strings for Catalan-rule words.

Each digit of a word inserts one peak into the last descent of the path
built so far, so the 1 bits read left to right belong to digits 1..n in
order.  Changing digit ``q`` by ``j`` slides the ``q``-th 1 bit ``j`` places
(left when ``j > 0``) across zeros and leaves every other bit alone.
"""
from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .graylist import Word, iter_init, iter_advance
from .rules import Label, builtin

DyckString = str
WordLike = Union[Sequence[Label], Sequence[int], str]


def _values(word: WordLike) -> List[int]:
    if isinstance(word, str):
        return [int(ch) for ch in word]
    out = []
    for d in word:
        if isinstance(d, Label):
            if d.color:
                raise ValueError(f"Catalan words are uncolored, got ({d})")
            out.append(d.value)
        else:
            out.append(int(d))
    return out


def _check_catalan(values: Sequence[int]) -> None:
    if not values or values[0] != 2:
        raise ValueError("a Catalan word starts with the axiom 2")
    for prev, cur in zip(values, values[1:]):
        if not 2 <= cur <= prev + 1:
            raise ValueError(f"{cur} is not a son of ({prev}) in the Catalan rule")


def is_dyck(bits: Union[str, Sequence[int]]) -> bool:
    height = 0
    for b in bits:
        if b in ("1", 1):
            height += 1
        elif b in ("0", 0):
            height -= 1
            if height < 0:
                return False
        else:
            return False
    return height == 0


def word_to_dyck(word: WordLike) -> DyckString:
    """Encode a Catalan-rule word as a Dyck path (1 = up, 0 = down).

    >>> word_to_dyck("2334")
    '11011000'
    """
    values = _values(word)
    _check_catalan(values)
    bits = "10"
    for prev, cur in zip(values, values[1:]):
        # the last descent has prev-1 down steps; a peak goes in at height cur-2
        bits = bits[: len(bits) - (prev - 1)] + "0" * (prev - cur + 1) + "1" + "0" * (cur - 1)
    return bits


def _one_from_left(bits: str, q: int, ones: int) -> int:
    """Index of the q-th 1 bit from the left, scanning from the right end."""
    need = ones - q + 1
    seen = 0
    for idx in range(len(bits) - 1, -1, -1):
        if bits[idx] == "1":
            seen += 1
            if seen == need:
                return idx
    raise ValueError("bit string has too few 1 bits")


def dyck_delta(u: WordLike, u_next: WordLike) -> Tuple[int, int, int]:
    """(changed digit position q, 1-based; j = new - old; which 1 moves, counted from the right)."""
    a, b = _values(u), _values(u_next)
    if len(a) != len(b):
        raise ValueError("words of different lengths")
    diff = [q for q, (x, y) in enumerate(zip(a, b), 1) if x != y]
    if len(diff) != 1:
        raise ValueError(f"words differ in {len(diff)} digits; adjacent words differ in exactly one")
    q = diff[0]
    return q, b[q - 1] - a[q - 1], len(a) - q + 1


def next_dyck(p: DyckString, u: WordLike, u_next: WordLike) -> DyckString:
    """Encoding of ``u_next`` from the encoding ``p`` of ``u`` by moving one 1 bit."""
    n = len(_values(u))
    if len(p) != 2 * n:
        raise ValueError(f"bit string has length {len(p)}, expected {2 * n}")
    q, j, _ = dyck_delta(u, u_next)
    src = _one_from_left(p, q, n)
    dst = src - j
    lo, hi = (dst, src) if j > 0 else (src + 1, dst + 1)
    if not 0 <= dst < len(p) or "1" in p[lo:hi]:
        raise ValueError("bit string is inconsistent with the word")
    bits = list(p)
    bits[src], bits[dst] = "0", "1"
    return "".join(bits)


def moved_bit(p: DyckString, p_next: DyckString) -> Tuple[int, int]:
    """(old, new) position of the moved 1 bit, counted from the right (1-based)."""
    diff = [i for i, (x, y) in enumerate(zip(p, p_next)) if x != y]
    if len(diff) != 2:
        raise ValueError(f"strings differ in {len(diff)} bits")
    old = next(i for i in diff if p[i] == "1")
    new = next(i for i in diff if p_next[i] == "1")
    return len(p) - old, len(p) - new


def dyck_stream(n: int) -> Iterator[Tuple[Word, DyckString, Optional[Tuple[int, int]]]]:
    """Walk the Catalan Gray list, updating the bit string by one-bit moves.

    Yields ``(word, bits, delta)`` where delta is the moved bit's (old, new)
    position from the right, or None for the first word.
    """
    state = iter_init(builtin("catalan"), n)
    word = state.word
    bits = word_to_dyck(word)
    yield word, bits, None
    while True:
        change = iter_advance(state)
        if change is None:
            return
        nxt = state.word
        new_bits = next_dyck(bits, word, nxt)
        yield nxt, new_bits, moved_bit(bits, new_bits)
        word, bits = nxt, new_bits
