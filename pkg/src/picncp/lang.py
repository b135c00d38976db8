"""Finite formal-language helpers over the letters ``p`` and ``i``.

Words are plain strings.  Infinite languages are handled through truncated
``Language`` values that carry the length bound they were cut at.  These are
test-scale tools: enumeration is exponential in the length bound.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

import numpy as np

from .maxplus import DimensionError, identity, mat_otimes, zeros

ALPHABET = ("p", "i")


@dataclass(frozen=True)
class Language:
    """A finite set of words, all of length ``<= max_len`` (None: unbounded)."""

    words: frozenset[str]
    max_len: int | None = None

    def __post_init__(self):
        if self.max_len is not None and any(len(w) > self.max_len for w in self.words):
            raise ValueError("word longer than the declared bound")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.words, key=lambda w: (len(w), w)))

    def __len__(self) -> int:
        return len(self.words)

    def __or__(self, other: Language) -> Language:
        bound = None if self.max_len is None or other.max_len is None else max(self.max_len, other.max_len)
        return Language(self.words | other.words, bound)

    def concat(self, other: Language, max_len: int | None = None) -> Language:
        joint = None if self.max_len is None or other.max_len is None else self.max_len + other.max_len
        bound = _min_bound(max_len, joint)
        words = {a + b for a in self.words for b in other.words if bound is None or len(a) + len(b) <= bound}
        return Language(frozenset(words), bound)

    def truncate(self, max_len: int) -> Language:
        return Language(frozenset(w for w in self.words if len(w) <= max_len), _min_bound(max_len, self.max_len))


def _min_bound(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def lang(*words: str, max_len: int | None = None) -> Language:
    return Language(frozenset(words), max_len)


def is_balanced(s: str) -> tuple[bool, bool, bool]:
    """``(balanced, x*x-balanced, x*y-balanced)``.

    The empty word counts as all three.
    """
    if not s:
        return True, True, True
    balanced = s.count("p") == s.count("i")
    same_ends = s[0] == s[-1]
    return balanced, balanced and same_ends, balanced and not same_ends


def all_words(max_len: int, alphabet: Iterable[str] = ALPHABET) -> Iterator[str]:
    letters = tuple(alphabet)
    for length in range(max_len + 1):
        for t in itertools.product(letters, repeat=length):
            yield "".join(t)


def enumerate_balanced(max_len: int) -> Language:
    return Language(frozenset(w for w in all_words(max_len) if is_balanced(w)[0]), max_len)


def enumerate_xy_balanced(max_len: int) -> Language:
    """Every x*y-balanced word of length ``<= max_len``, the empty word included."""
    return Language(frozenset(w for w in all_words(max_len) if is_balanced(w)[2]), max_len)


def expand_s_language(k: int, max_len: int | None = None, first: str = "p", second: str = "i") -> Language:
    """``S(k) = first·S(k-1)²·second + second·S(k-1)²·first + e`` with ``S(0) = {e}``.

    Words longer than ``max_len`` are dropped at every step, which is exact
    because the recursion never shortens a word.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    S = lang("", max_len=max_len)
    a, b = lang(first), lang(second)
    for _ in range(k):
        inner = max_len - 2 if max_len is not None else None
        if inner is not None and inner < 0:
            break
        S2 = S.concat(S, inner)
        S = a.concat(S2).concat(b, max_len) | b.concat(S2).concat(a, max_len) | lang("", max_len=max_len)
    return S


def star_closure(L: Language, max_len: int) -> Language:
    """All concatenations of words of ``L`` (including none) up to ``max_len``."""
    base = L.truncate(max_len)
    closure = lang("", max_len=max_len)
    frontier = closure
    while True:
        grown = closure | frontier.concat(base, max_len)
        if grown.words == closure.words:
            return closure
        frontier = Language(grown.words - closure.words, max_len)
        closure = grown


def split_xx_balanced(s: str) -> tuple[str, str]:
    """Split an x*x-balanced word of positive length into two x*y-balanced halves.

    Uses the first zero of the running ``#first - #other`` balance strictly
    inside the word, where the balance crosses from one sign to the other.
    """
    if not s or not is_balanced(s)[1]:
        raise ValueError(f"{s!r} is not an x*x-balanced word of positive length")
    h = 0
    for pos, ch in enumerate(s[:-1], start=1):
        h += 1 if ch == s[0] else -1
        if h == 0 and s[pos] != s[0]:
            return s[:pos], s[pos:]
    raise AssertionError("no split point; the word was not x*x-balanced")


def decompose(s: str, majority: str = "p") -> list[str]:
    """Write ``s`` (with at least as many ``majority`` letters) as ``t1 x t2 x ... x tr``.

    Returns ``[t1, x, t2, x, ..., tr]`` where every ``t`` is balanced (possibly
    empty) and each ``x`` is a single ``majority`` letter.
    """
    excess = sum(1 if ch == majority else -1 for ch in s)
    if excess < 0:
        raise ValueError(f"{s!r} has fewer {majority!r} than other letters")
    blocks: list[str] = []
    rest = s
    while excess > 0:
        h = 0
        for pos, ch in enumerate(rest):
            h += 1 if ch == majority else -1
            if h == 1:
                break
        blocks += [rest[:pos], majority]
        rest = rest[pos + 1:]
        excess -= 1
    blocks.append(rest)
    return blocks


def mu_eval(s: str, assignment: Mapping[str, np.ndarray]) -> np.ndarray:
    """``μ(s) = μ(s(1)) ⊗ ... ⊗ μ(s(|s|))``, with ``μ(e) = E⊗``."""
    shapes = {np.shape(M) for M in assignment.values()}
    if len(shapes) != 1:
        raise DimensionError("assigned matrices must share one shape")
    n = shapes.pop()[0]
    out = identity(n)
    for ch in s:
        out = mat_otimes(out, assignment[ch])
    return out


def mu_language(L: Iterable[str], assignment: Mapping[str, np.ndarray]) -> np.ndarray:
    """``μ(L) = ⊕_{s in L} μ(s)``; the empty language maps to 𝓔."""
    n = np.shape(next(iter(assignment.values())))[0]
    out = zeros(n)
    for s in L:
        out = np.maximum(out, mu_eval(s, assignment))
    return out
