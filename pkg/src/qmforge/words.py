"""Exact free-group word algebra over a fixed finite basis.

Words are freely reduced sequences of signed generator letters.  Generators are
written ``a``-``z`` (by basis index) and their inverses ``A``-``Z``; the empty
word is the identity and serializes as ``"1"``.  Every value in this module is
immutable and every operation is a pure function, so words can be shared freely
between threads and enumeration work can be partitioned without locking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence

MAX_RANK = 26

LetterKey = Callable[["Letter"], tuple]


class Letter(NamedTuple):
    """One signed generator: ``generator`` indexes the basis, ``sign`` is +1 or -1."""

    generator: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.generator, -self.sign)

    def to_char(self) -> str:
        char = chr(ord("a") + self.generator)
        return char if self.sign > 0 else char.upper()


def default_letter_key(letter: Letter) -> tuple:
    """The fixed total order on signed generators: a < b < ... < A < B < ...

    All generators precede all inverses; ties break by basis index.  Reports and
    enumerations use this order so output is byte-stable across runs.
    """
    return (0 if letter.sign > 0 else 1, letter.generator)


def letter_from_char(char: str, rank: int) -> Letter:
    if len(char) != 1 or not char.isalpha() or not char.isascii():
        raise ValueError(f"invalid letter {char!r}")
    index = ord(char.lower()) - ord("a")
    if index >= rank:
        raise ValueError(f"letter {char!r} exceeds rank {rank}")
    return Letter(index, 1 if char.islower() else -1)


class Word:
    """An immutable, freely reduced word.

    The constructor requires an already-reduced letter sequence; use
    :func:`reduce` to normalize raw input.  Words compare, hash, and sort by
    value (length first, then the fixed letter order).
    """

    __slots__ = ("_letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        letters = tuple(letters)
        for left, right in zip(letters, letters[1:]):
            if left == right.inverse():
                raise ValueError(
                    f"not freely reduced: {left.to_char()}{right.to_char()} at adjacent positions"
                )
        self._letters = letters
        self._hash = hash(letters)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self._letters

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self._letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self._letters[item])
        return self._letters[item]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._letters == other._letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __str__(self) -> str:
        if not self._letters:
            return "1"
        return "".join(letter.to_char() for letter in self._letters)

    def sort_key(self, letter_key: LetterKey = default_letter_key) -> tuple:
        return (len(self._letters), tuple(letter_key(l) for l in self._letters))

    @property
    def is_identity(self) -> bool:
        return not self._letters

    def inverse(self) -> "Word":
        return Word(tuple(letter.inverse() for letter in reversed(self._letters)))

    def prefix(self, k: int) -> "Word":
        return Word(self._letters[:k])

    def suffix(self, k: int) -> "Word":
        return Word(self._letters[len(self._letters) - k :] if k else ())

    def max_generator(self) -> int:
        """Largest basis index used, or -1 for the identity."""
        return max((l.generator for l in self._letters), default=-1)


IDENTITY = Word()


def parse_word(text: str, rank: int) -> Word:
    """Parse a word literal; whitespace is ignored, ``"1"`` and ``""`` are the identity."""
    if not 2 <= rank <= MAX_RANK:
        raise ValueError(f"rank must be between 2 and {MAX_RANK}, got {rank}")
    stripped = "".join(text.split())
    if stripped in ("", "1"):
        return IDENTITY
    return reduce(letter_from_char(c, rank) for c in stripped)


def reduce(raw: Iterable[Letter]) -> Word:
    """Freely reduce a raw letter sequence (stack-based, single pass)."""
    stack: list[Letter] = []
    for letter in raw:
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return Word(stack)


def multiply(a: Word, b: Word) -> Word:
    """The reduced product a*b."""
    left = a.letters
    right = b.letters
    i = len(left)
    j = 0
    while i > 0 and j < len(right) and left[i - 1] == right[j].inverse():
        i -= 1
        j += 1
    return Word(left[:i] + right[j:])


def multiply_all(words: Iterable[Word]) -> Word:
    product = IDENTITY
    for word in words:
        product = multiply(product, word)
    return product


def invert(a: Word) -> Word:
    return a.inverse()


def cancellation_length(a: Word, b: Word) -> int:
    """Number of letters cancelled when forming the product a*b."""
    left = a.letters
    right = b.letters
    k = 0
    while k < len(left) and k < len(right) and left[len(left) - 1 - k] == right[k].inverse():
        k += 1
    return k


def is_reduced_pair(a: Word, b: Word) -> bool:
    """True when a*b concatenates without cancellation."""
    return cancellation_length(a, b) == 0


@dataclass(frozen=True)
class ReducedExpression:
    """A cancellation-free factorization ``left * right`` of a word."""

    left: Word
    right: Word

    def __post_init__(self):
        if not is_reduced_pair(self.left, self.right):
            raise ValueError(
                f"{self.left} | {self.right} is not a reduced expression (the juncture cancels)"
            )

    @property
    def word(self) -> Word:
        return Word(self.left.letters + self.right.letters)


@dataclass(frozen=True)
class CyclicReport:
    """Cyclic-reduction data for one word.

    ``core`` is the cyclically reduced part, ``conjugator`` the word x with
    input = x * core * x^-1 as a reduced product.  ``simple`` records whether
    the core is not a proper power, which holds exactly when the core has as
    many distinct cyclic permutations as letters.
    """

    core: Word
    conjugator: Word
    cyclic_permutations: frozenset[Word]
    simple: bool


def cyclic_analysis(g: Word) -> CyclicReport:
    letters = g.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == letters[j].inverse():
        i += 1
        j -= 1
    conjugator = Word(letters[:i])
    core = Word(letters[i : j + 1])
    permutations = frozenset(cyclic_rotations(core))
    simple = len(core) > 0 and len(permutations) == len(core)
    return CyclicReport(core, conjugator, permutations, simple)


def cyclic_rotations(core: Word) -> list[Word]:
    """All rotations of a cyclically reduced word (each again cyclically reduced)."""
    letters = core.letters
    if not letters:
        return [IDENTITY]
    return [Word(letters[i:] + letters[:i]) for i in range(len(letters))]


def is_cyclically_reduced(w: Word) -> bool:
    letters = w.letters
    return len(letters) < 2 or letters[0] != letters[-1].inverse()


def is_conjugate(a: Word, b: Word) -> bool:
    """True iff the cyclic cores are cyclic permutations of each other."""
    core_a = cyclic_analysis(a).core
    core_b = cyclic_analysis(b).core
    if len(core_a) != len(core_b):
        return False
    if not core_a.letters:
        return True
    doubled = core_a.letters + core_a.letters
    target = core_b.letters
    return any(doubled[i : i + len(target)] == target for i in range(len(core_a)))


def _occurs(pattern: tuple[Letter, ...], host: tuple[Letter, ...]) -> bool:
    if len(pattern) > len(host):
        return False
    return any(
        host[i : i + len(pattern)] == pattern for i in range(len(host) - len(pattern) + 1)
    )


@dataclass(frozen=True)
class OverlapReport:
    """All subword and proper-overlap relations between an ordered pair of words.

    ``proper_overlap_lengths_lr`` collects the lengths k (with both residues
    nonempty) for which the length-k suffix of the left word equals the
    length-k prefix of the right word; ``_rl`` is the mirror set.  When any
    proper overlap exists, ``minimal_overlap`` is the shortest overlapping
    word, which is always non-self-overlapping.
    """

    left_is_subword: bool
    right_is_subword: bool
    proper_overlap_lengths_lr: frozenset[int]
    proper_overlap_lengths_rl: frozenset[int]
    minimal_overlap: Optional[Word]

    @property
    def overlaps_properly(self) -> bool:
        return bool(self.proper_overlap_lengths_lr or self.proper_overlap_lengths_rl)

    @property
    def overlaps(self) -> bool:
        return self.overlaps_properly or self.left_is_subword or self.right_is_subword


def overlap_report(w: Word, w2: Word) -> OverlapReport:
    if w.is_identity or w2.is_identity:
        raise ValueError("overlap_report requires nonempty words")
    left = w.letters
    right = w2.letters
    bound = min(len(left), len(right))
    lr = frozenset(k for k in range(1, bound) if left[len(left) - k :] == right[:k])
    rl = frozenset(k for k in range(1, bound) if right[len(right) - k :] == left[:k])
    left_sub = len(left) < len(right) and _occurs(left, right)
    right_sub = len(right) < len(left) and _occurs(right, left)
    minimal: Optional[Word] = None
    if lr or rl:
        k_min = min(lr | rl)
        minimal = Word(right[:k_min]) if k_min in lr else Word(left[:k_min])
    return OverlapReport(left_sub, right_sub, lr, rl, minimal)


def is_self_overlapping(w: Word) -> bool:
    """True when some proper nonempty prefix of w equals the same-length suffix."""
    letters = w.letters
    return any(letters[:k] == letters[len(letters) - k :] for k in range(1, len(letters)))


def self_overlap_witness(w: Word) -> Optional[Word]:
    """The shortest x with w = x*y*x as a reduced product (None when w is
    non-self-overlapping).  The witness is nonempty, non-self-overlapping, and
    has length at most |w|/2."""
    letters = w.letters
    for k in range(1, len(letters)):
        if letters[:k] == letters[len(letters) - k :]:
            return Word(letters[:k])
    return None


def is_lyndon(w: Word, letter_key: LetterKey = default_letter_key) -> bool:
    """True iff w is cyclically reduced, simple, and lexicographically minimal
    among its cyclic permutations under the given letter order."""
    if w.is_identity or not is_cyclically_reduced(w):
        return False
    rotations = cyclic_rotations(w)
    if len(set(rotations)) != len(w):
        return False
    return all(w.sort_key(letter_key) <= r.sort_key(letter_key) for r in rotations)


def _lyndon_words(rank: int, length: int, letter_key: LetterKey) -> list[Word]:
    return [w for w in enumerate_sphere(rank, length) if is_lyndon(w, letter_key)]


def generate_fundamental_set(
    rank: int, max_len: int, letter_key: LetterKey = default_letter_key
) -> list[Word]:
    """A symmetric set of cyclically reduced, non-self-overlapping, simple
    conjugacy-class representatives of each length in [2, max_len].

    The positive half picks, for each pair {class, inverse class}, the
    lexicographically smaller of the two Lyndon representatives; the symmetric
    closure (all inverses) is appended after the positive half, so the result
    lists each represented class pair exactly once up to inversion.
    """
    if max_len < 2:
        raise ValueError(f"max_len must be at least 2, got {max_len}")
    positive: list[Word] = []
    for length in range(2, max_len + 1):
        for word in _lyndon_words(rank, length, letter_key):
            partner = min(
                cyclic_rotations(word.inverse()), key=lambda r: r.sort_key(letter_key)
            )
            if word.sort_key(letter_key) < partner.sort_key(letter_key):
                positive.append(word)
    return positive + [word.inverse() for word in positive]


def juncture_family(expression: ReducedExpression, max_len: int) -> set[Word]:
    """All words u'v' with u' a nonempty suffix of the left part, v' a nonempty
    prefix of the right part, and |u'v'| <= max_len.  Every such concatenation
    is automatically reduced because the juncture itself is."""
    u = expression.left.letters
    v = expression.right.letters
    family: set[Word] = set()
    for i in range(1, min(len(u), max_len - 1) + 1):
        for j in range(1, min(len(v), max_len - i) + 1):
            family.add(Word(u[len(u) - i :] + v[:j]))
    return family


def letters_of_rank(rank: int, letter_key: LetterKey = default_letter_key) -> list[Letter]:
    """All 2*rank signed generators, sorted by the letter order."""
    if not 2 <= rank <= MAX_RANK:
        raise ValueError(f"rank must be between 2 and {MAX_RANK}, got {rank}")
    alphabet = [Letter(i, s) for i in range(rank) for s in (1, -1)]
    return sorted(alphabet, key=letter_key)


def enumerate_sphere(
    rank: int, length: int, letter_key: LetterKey = default_letter_key
) -> Iterator[Word]:
    """All reduced words of exactly the given length, in lexicographic order."""
    alphabet = letters_of_rank(rank, letter_key)
    if length == 0:
        yield IDENTITY
        return

    def extend(prefix: list[Letter]) -> Iterator[Word]:
        if len(prefix) == length:
            yield Word(tuple(prefix))
            return
        forbidden = prefix[-1].inverse() if prefix else None
        for letter in alphabet:
            if letter != forbidden:
                prefix.append(letter)
                yield from extend(prefix)
                prefix.pop()

    yield from extend([])


def enumerate_ball(
    rank: int, radius: int, letter_key: LetterKey = default_letter_key
) -> list[Word]:
    """All reduced words of length <= radius, each exactly once, ordered by
    length and then lexicographically."""
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    ball: list[Word] = []
    for length in range(radius + 1):
        ball.extend(enumerate_sphere(rank, length, letter_key))
    return ball


def ball_size(rank: int, radius: int) -> int:
    """1 + sum over k of 2n(2n-1)^(k-1) reduced words of length k <= radius."""
    total = 1
    for k in range(1, radius + 1):
        total += 2 * rank * (2 * rank - 1) ** (k - 1)
    return total


def load_word_set(path: str) -> tuple[int, list[Word]]:
    """Read a word-set file: a ``rank=N`` header, then one word per line.

    Blank lines are skipped and ``#`` starts a comment (full-line or trailing).
    """
    rank: Optional[int] = None
    words: list[Word] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if rank is None:
                if not line.startswith("rank="):
                    raise ValueError(f"{path}:{line_no}: expected a rank=N header first")
                rank = int(line[len("rank=") :])
                if not 2 <= rank <= MAX_RANK:
                    raise ValueError(f"{path}:{line_no}: rank {rank} out of range")
                continue
            words.append(parse_word(line, rank))
    if rank is None:
        raise ValueError(f"{path}: missing rank=N header")
    return rank, words


def save_word_set(path: str, rank: int, words: Sequence[Word]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"rank={rank}\n")
        for word in words:
            handle.write(f"{word}\n")
