"""Occurrence counting and Brooks-style counting quasimorphisms.

``count_big`` counts all (possibly overlapping) occurrences of a pattern in a
host word; ``count_small`` counts a maximum set of pairwise disjoint
occurrences.  The signed versions subtract the count of the inverted pattern,
giving alternating integer-valued functions on the free group.  For
non-self-overlapping patterns the two signed versions agree, and the cyclic
(conjugation-invariant) variant has a finite exact formula.
"""

from __future__ import annotations

from .words import Word, cyclic_analysis, is_self_overlapping


def _chars(word: Word) -> str:
    return "".join(letter.to_char() for letter in word)


def occurrence_positions(pattern: Word, host: Word) -> tuple[int, ...]:
    """Sorted start indices of every occurrence of pattern inside host."""
    if pattern.is_identity:
        raise ValueError("pattern must be nonempty")
    p, h = _chars(pattern), _chars(host)
    positions = []
    i = h.find(p)
    while i != -1:
        positions.append(i)
        i = h.find(p, i + 1)
    return tuple(positions)


def count_big(pattern: Word, host: Word) -> int:
    """Number of occurrences of pattern as a subword of host (overlaps allowed)."""
    return len(occurrence_positions(pattern, host))


def count_small(pattern: Word, host: Word) -> int:
    """Maximum number of pairwise disjoint occurrences of pattern in host.

    Occurrences are equal-length intervals, so taking each earliest-ending
    available occurrence is optimal.
    """
    if pattern.is_identity:
        raise ValueError("pattern must be nonempty")
    p, h = _chars(pattern), _chars(host)
    count = 0
    i = h.find(p)
    while i != -1:
        count += 1
        i = h.find(p, i + len(p))
    return count


def eval_brooks(kind: str, pattern: Word, g: Word) -> int:
    """The signed count: occurrences of pattern minus occurrences of its inverse.

    ``kind`` selects the counting mode: "big" (all occurrences) or "small"
    (maximal disjoint).  Both are alternating in g, and inverting the pattern
    negates the function.
    """
    if kind == "big":
        count = count_big
    elif kind == "small":
        count = count_small
    else:
        raise ValueError(f"kind must be 'big' or 'small', got {kind!r}")
    return count(pattern, g) - count(pattern.inverse(), g)


class CyclicWord:
    """A cyclically reduced word considered up to rotation.

    Equality and hashing go through the lexicographically minimal rotation, so
    two CyclicWords are equal exactly when their representatives are cyclic
    permutations of each other.
    """

    __slots__ = ("_representative", "_canonical")

    def __init__(self, representative: Word):
        letters = representative.letters
        if len(letters) >= 2 and letters[0] == letters[-1].inverse():
            raise ValueError(f"{representative} is not cyclically reduced")
        self._representative = representative
        n = len(letters)
        if n:
            doubled = letters + letters
            self._canonical = min(
                Word(doubled[i : i + n]) for i in range(n)
            )
        else:
            self._canonical = representative

    @property
    def representative(self) -> Word:
        return self._representative

    def __len__(self) -> int:
        return len(self._representative)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash((CyclicWord, self._canonical))

    def __repr__(self) -> str:
        return f"CyclicWord({str(self._representative)!r})"

    def count(self, pattern: Word) -> int:
        """Occurrences of pattern in the cyclic word: matches in the doubled
        representative starting at positions 0..len-1, provided the pattern is
        no longer than the cycle (longer patterns never fit)."""
        if pattern.is_identity:
            raise ValueError("pattern must be nonempty")
        n = len(self._representative)
        if len(pattern) > n:
            return 0
        doubled = _chars(self._representative) * 2
        p = _chars(pattern)
        count = 0
        i = doubled.find(p)
        while i != -1 and i < n:
            count += 1
            i = doubled.find(p, i + 1)
        return count


def eval_homogenized_brooks(pattern: Word, g: Word) -> int:
    """The conjugation-invariant signed count on the cyclic word of g.

    Defined for non-self-overlapping patterns only: counts occurrences of the
    pattern minus occurrences of its inverse around the cyclic core of g.  The
    result is invariant under conjugation and scales linearly on powers.
    """
    if pattern.is_identity:
        raise ValueError("pattern must be nonempty")
    if is_self_overlapping(pattern):
        raise ValueError(
            f"pattern {pattern} is self-overlapping; the cyclic count formula requires "
            "a non-self-overlapping pattern"
        )
    cycle = CyclicWord(cyclic_analysis(g).core)
    return cycle.count(pattern) - cycle.count(pattern.inverse())
