"""Quasimorphism specs on free groups: evaluation, defect certification,
alternating parts, homogenization diagnostics, finite-ball expansion into
signed pattern counts, and the compatibility-tail classification report.

A quasimorphism spec is an immutable object with an ``evaluate`` method and
optional knowledge of its own theoretical defect bounds.  Defects are never
claimed exactly: ``estimate_defect`` reports a certified lower bound from a
finite pair scan next to the best available theoretical upper bound.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .brooks import count_big, count_small, eval_brooks, eval_homogenized_brooks
from .graphs import (
    DEFAULT_EXACT_LIMIT,
    SigmaIndCertificate,
    sigma_ind_certificate,
)
from .words import (
    IDENTITY,
    Word,
    enumerate_ball,
    enumerate_sphere,
    is_reduced_pair,
    is_self_overlapping,
    multiply,
)

THREADS_ENV_VAR = "QMFORGE_THREADS"


def resolve_threads(threads: Optional[int] = None) -> int:
    """Thread count: explicit argument, else the QMFORGE_THREADS variable, else 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if raw:
            try:
                threads = int(raw)
            except ValueError as exc:
                raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
        else:
            threads = 1
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


@dataclass(frozen=True)
class DefectBound:
    """A theoretical upper bound on a defect, with the argument that yields it."""

    value: float
    reason: str


class Quasimorphism:
    """Base interface: an immutable map from words to reals with bounded defect."""

    def evaluate(self, g: Word) -> float:
        raise NotImplementedError

    def __call__(self, g: Word) -> float:
        return self.evaluate(g)

    def min_scan_radius(self) -> int:
        """Smallest ball radius whose pair scan can see this spec's support."""
        return 1

    def natural_rank(self) -> int:
        """Smallest ambient rank containing every generator the spec mentions."""
        return 2

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        """Theoretical defect upper bound for the given pair mode, if known."""
        _check_mode(mode)
        return None

    def describe(self) -> str:
        return type(self).__name__

    def __repr__(self) -> str:
        return f"<{self.describe()}>"


def _check_mode(mode: str) -> None:
    if mode not in ("all", "reduced"):
        raise ValueError(f"pair mode must be 'all' or 'reduced', got {mode!r}")


class BrooksBig(Quasimorphism):
    """Signed count of all occurrences of a pattern (minus its inverse)."""

    def __init__(self, pattern: Word):
        if pattern.is_identity:
            raise ValueError("pattern must be nonempty")
        self._pattern = pattern

    @property
    def pattern(self) -> Word:
        return self._pattern

    def evaluate(self, g: Word) -> float:
        return float(eval_brooks("big", self._pattern, g))

    def min_scan_radius(self) -> int:
        return len(self._pattern)

    def natural_rank(self) -> int:
        return max(2, self._pattern.max_generator() + 1)

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        length = len(self._pattern)
        if length == 1:
            return DefectBound(0.0, "a single-letter signed count is a homomorphism")
        if mode == "reduced":
            return DefectBound(
                float(length - 1),
                "on cancellation-free pairs only occurrences crossing the junction "
                f"change the count: at most pattern length - 1 = {length - 1}",
            )
        return DefectBound(
            float(3 * (length - 1)),
            "an alternating map has defect at most three times its "
            f"cancellation-free defect: 3 * (pattern length - 1) = {3 * (length - 1)}",
        )

    def describe(self) -> str:
        return f"brooks-big:{self._pattern}"


class BrooksSmall(Quasimorphism):
    """Signed count of a maximal set of disjoint occurrences of a pattern."""

    def __init__(self, pattern: Word):
        if pattern.is_identity:
            raise ValueError("pattern must be nonempty")
        self._pattern = pattern

    @property
    def pattern(self) -> Word:
        return self._pattern

    def evaluate(self, g: Word) -> float:
        return float(eval_brooks("small", self._pattern, g))

    def min_scan_radius(self) -> int:
        return len(self._pattern)

    def natural_rank(self) -> int:
        return max(2, self._pattern.max_generator() + 1)

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        if len(self._pattern) == 1:
            return DefectBound(0.0, "a single-letter signed count is a homomorphism")
        if mode == "reduced":
            return DefectBound(
                1.0,
                "a cancellation-free junction changes a maximal disjoint-occurrence "
                "count by at most one",
            )
        return DefectBound(3.0, "three times the cancellation-free bound 1")

    def describe(self) -> str:
        return f"brooks-small:{self._pattern}"


class BrooksHomogenized(Quasimorphism):
    """Signed occurrence count in the cyclic word on the cyclic core."""

    def __init__(self, pattern: Word):
        if pattern.is_identity:
            raise ValueError("pattern must be nonempty")
        if is_self_overlapping(pattern):
            raise ValueError(f"pattern {pattern} is self-overlapping")
        self._pattern = pattern

    @property
    def pattern(self) -> Word:
        return self._pattern

    def evaluate(self, g: Word) -> float:
        return float(eval_homogenized_brooks(self._pattern, g))

    def min_scan_radius(self) -> int:
        return len(self._pattern)

    def natural_rank(self) -> int:
        return max(2, self._pattern.max_generator() + 1)

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        if len(self._pattern) == 1:
            return DefectBound(0.0, "the exponent-sum homomorphism is already homogeneous")
        return DefectBound(
            12.0,
            "homogenization at most quadruples the defect of the disjoint-occurrence "
            "count, which is at most 3",
        )

    def describe(self) -> str:
        return f"brooks-hom:{self._pattern}"


class ExponentTable:
    """A bounded alternating map on nonzero integers: finite exceptions plus a
    default value for unlisted positive exponents (negated on negatives)."""

    __slots__ = ("_entries", "_default")

    def __init__(self, entries: Optional[Mapping[int, float]] = None, default: float = 0.0):
        folded: dict[int, float] = {}
        for exponent, value in (entries or {}).items():
            if exponent == 0:
                raise ValueError("exponent 0 cannot carry a value")
            value = float(value)
            for m, v in ((exponent, value), (-exponent, -value)):
                if m in folded and folded[m] != v:
                    raise ValueError(
                        f"conflicting values for exponent {m}: {folded[m]} vs {v}"
                    )
                folded[m] = v
        self._entries = dict(sorted(folded.items()))
        self._default = float(default)

    @property
    def default(self) -> float:
        return self._default

    @property
    def entries(self) -> dict[int, float]:
        return dict(self._entries)

    def value(self, exponent: int) -> float:
        if exponent == 0:
            raise ValueError("exponent 0 has no value")
        if exponent in self._entries:
            return self._entries[exponent]
        return self._default if exponent > 0 else -self._default

    @property
    def sup_bound(self) -> float:
        bounds = [abs(v) for v in self._entries.values()]
        bounds.append(abs(self._default))
        return max(bounds)

    def __repr__(self) -> str:
        return f"ExponentTable({self._entries}, default={self._default})"


def sign_table() -> ExponentTable:
    """The sign map on nonzero integers."""
    return ExponentTable(default=1.0)


class Rolli(Quasimorphism):
    """Sum of per-generator exponent-table values over the syllables of a word."""

    def __init__(self, tables: Sequence[ExponentTable]):
        tables = tuple(tables)
        if not tables:
            raise ValueError("need at least one exponent table")
        self._tables = tables

    @property
    def tables(self) -> tuple[ExponentTable, ...]:
        return self._tables

    def evaluate(self, g: Word) -> float:
        total = 0.0
        current_gen = -1
        exponent = 0
        for letter in g:
            if letter.generator != current_gen:
                if exponent:
                    total += self._tables[current_gen].value(exponent)
                if letter.generator >= len(self._tables):
                    raise ValueError(
                        f"word uses generator #{letter.generator} but only "
                        f"{len(self._tables)} tables are declared"
                    )
                current_gen = letter.generator
                exponent = 0
            exponent += letter.sign
        if exponent:
            total += self._tables[current_gen].value(exponent)
        return total

    def natural_rank(self) -> int:
        return max(2, len(self._tables))

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        worst = max(table.sup_bound for table in self._tables)
        return DefectBound(
            3.0 * worst,
            "merging one syllable across a junction changes at most three table "
            f"values, each bounded by the largest sup bound {worst}",
        )

    def describe(self) -> str:
        return f"rolli[{len(self._tables)} tables]"


class CoefficientMap:
    """A finitely supported alternating coefficient assignment on nonempty words.

    Both signs of each supported word are stored; construction closes the input
    under alternation and rejects conflicting values.  Zero coefficients are
    dropped from the support.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping[Word, float]] = None):
        folded: dict[Word, float] = {}
        for word, value in (entries or {}).items():
            if word.is_identity:
                raise ValueError("the identity cannot carry a coefficient")
            value = float(value)
            for w, v in ((word, value), (word.inverse(), -value)):
                if w in folded and folded[w] != v:
                    raise ValueError(
                        f"conflicting coefficients for {w}: {folded[w]} vs {v}"
                    )
                folded[w] = v
        self._entries = {w: v for w, v in sorted(folded.items()) if v != 0.0}

    @property
    def support(self) -> tuple[Word, ...]:
        """All supported words, both signs, in canonical order."""
        return tuple(self._entries)

    @property
    def positive_support(self) -> tuple[Word, ...]:
        """One representative per {word, inverse} pair (the smaller word)."""
        return tuple(w for w in self._entries if w < w.inverse())

    def get(self, word: Word) -> float:
        return self._entries.get(word, 0.0)

    def items(self):
        return self._entries.items()

    def as_dict(self) -> dict[Word, float]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientMap):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    @property
    def max_length(self) -> int:
        """The support ceiling: the longest supported word's length (0 if empty)."""
        return max((len(w) for w in self._entries), default=0)

    @property
    def sup_norm(self) -> float:
        return max((abs(v) for v in self._entries.values()), default=0.0)

    @property
    def l1_norm(self) -> float:
        """Sum of |coefficient| over the whole group (both signs)."""
        return float(sum(abs(v) for v in self._entries.values()))

    @property
    def weighted_l1_norm(self) -> float:
        """Sum of length * |coefficient| over one representative per pair."""
        return float(sum(len(w) * abs(self._entries[w]) for w in self.positive_support))

    @property
    def is_nso_supported(self) -> bool:
        return all(not is_self_overlapping(w) for w in self.positive_support)

    def restricted(self, max_length: int) -> "CoefficientMap":
        """The truncation keeping only support words of length <= max_length."""
        return CoefficientMap(
            {w: v for w, v in self._entries.items() if len(w) <= max_length}
        )

    def __repr__(self) -> str:
        return f"CoefficientMap({len(self._entries)} entries, ceiling {self.max_length})"


def load_coefficient_map(path, rank: int = 26) -> CoefficientMap:
    """Read a coefficient map from a text file of "word<TAB>value" lines.

    Blank lines and lines starting with "#" are skipped.  An optional
    "rank=N" header restricts the allowed letters.  The alternation closure
    is applied, so listing one sign of a word is enough; listing both with
    inconsistent values is an error.
    """
    from .words import parse_word

    raw: dict[Word, float] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("rank="):
                rank = int(line[len("rank="):])
                continue
            parts = line.split("\t") if "\t" in line else line.split(None, 1)
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'word<TAB>value', got {line!r}")
            word = parse_word(parts[0], rank)
            value = float(parts[1])
            if word in raw and raw[word] != value:
                raise ValueError(
                    f"{path}:{lineno}: conflicting values for {word}: {raw[word]} vs {value}"
                )
            raw[word] = value
    return CoefficientMap(raw)


class CoefficientSum(Quasimorphism):
    """The quasimorphism summing coefficient-weighted signed pattern counts.

    Folding the alternating coefficients over both signs, the value is simply
    the sum of coefficient * plain occurrence count over every supported word
    (occurrences of the inverse pattern are handled by its own entry).
    """

    def __init__(self, coefficients: CoefficientMap, kind: str = "small"):
        if kind not in ("big", "small"):
            raise ValueError(f"kind must be 'big' or 'small', got {kind!r}")
        if kind == "small":
            for w in coefficients.positive_support:
                if is_self_overlapping(w):
                    raise ValueError(
                        f"kind 'small' requires non-self-overlapping support, but "
                        f"{w} overlaps itself"
                    )
        self._coefficients = coefficients
        self._kind = kind
        self._kappa_one: Optional[float] = None

    @property
    def coefficients(self) -> CoefficientMap:
        return self._coefficients

    @property
    def kind(self) -> str:
        return self._kind

    def evaluate(self, g: Word) -> float:
        counter = count_big if self._kind == "big" else count_small
        length = len(g)
        total = 0.0
        for w, coefficient in self._coefficients.items():
            if len(w) <= length:
                total += coefficient * counter(w, g)
        return total

    def min_scan_radius(self) -> int:
        return max(1, self._coefficients.max_length)

    def natural_rank(self) -> int:
        return max(
            [2] + [w.max_generator() + 1 for w in self._coefficients.support]
        )

    def _kappa_at_one(self) -> float:
        if self._kappa_one is None:
            report = kappa_alpha(self._coefficients)
            self._kappa_one = report.kappa[1] if len(report.kappa) > 1 else 0.0
        return self._kappa_one

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        if not self._coefficients:
            return DefectBound(0.0, "empty support: the zero map")
        if self._kind == "small":
            kappa_one = self._kappa_at_one()
            if mode == "reduced":
                return DefectBound(
                    kappa_one,
                    "a cancellation-free junction meets each compatible family once, "
                    f"so the defect is at most the tail weight kappa(1) = {kappa_one}",
                )
            return DefectBound(
                3.0 * kappa_one,
                f"three times the cancellation-free bound kappa(1) = {kappa_one}",
            )
        per_word = sum(
            abs(self._coefficients.get(w)) * (len(w) - 1)
            for w in self._coefficients.positive_support
        )
        if mode == "reduced":
            return DefectBound(
                float(per_word),
                "termwise cancellation-free bounds (pattern length - 1) summed "
                "against |coefficient|",
            )
        return DefectBound(
            float(3 * per_word),
            "three times the termwise cancellation-free bound",
        )

    def describe(self) -> str:
        return f"sum[{self._kind}, {len(self._coefficients.positive_support)} patterns]"


class LinearCombination(Quasimorphism):
    """A finite real linear combination of quasimorphism specs."""

    def __init__(self, terms: Iterable[tuple[float, Quasimorphism]]):
        self._terms = tuple((float(c), spec) for c, spec in terms)
        if not self._terms:
            raise ValueError("need at least one term")

    @property
    def terms(self) -> tuple[tuple[float, Quasimorphism], ...]:
        return self._terms

    def evaluate(self, g: Word) -> float:
        return sum(c * spec.evaluate(g) for c, spec in self._terms)

    def min_scan_radius(self) -> int:
        return max(spec.min_scan_radius() for _, spec in self._terms)

    def natural_rank(self) -> int:
        return max(spec.natural_rank() for _, spec in self._terms)

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        total = 0.0
        for c, spec in self._terms:
            bound = spec.defect_bound(mode)
            if bound is None:
                return None
            total += abs(c) * bound.value
        return DefectBound(total, "triangle inequality over the terms' bounds")

    def describe(self) -> str:
        return " + ".join(f"{c}*{spec.describe()}" for c, spec in self._terms)


class RawFunction(Quasimorphism):
    """Wrap an arbitrary word-to-real callable as a spec (for tables and tests)."""

    def __init__(
        self,
        fn: Callable[[Word], float],
        label: str = "raw",
        scan_radius: int = 1,
        rank: int = 2,
        bound: Optional[DefectBound] = None,
    ):
        self._fn = fn
        self._label = label
        self._scan_radius = scan_radius
        self._rank = rank
        self._bound = bound

    def evaluate(self, g: Word) -> float:
        return float(self._fn(g))

    def min_scan_radius(self) -> int:
        return self._scan_radius

    def natural_rank(self) -> int:
        return self._rank

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        return self._bound

    def describe(self) -> str:
        return self._label


class AlternatingPart(Quasimorphism):
    """The alternating part (phi(g) - phi(g^-1)) / 2 of another spec."""

    def __init__(self, base: Quasimorphism):
        self._base = base

    @property
    def base(self) -> Quasimorphism:
        return self._base

    def evaluate(self, g: Word) -> float:
        return (self._base.evaluate(g) - self._base.evaluate(g.inverse())) / 2.0

    def min_scan_radius(self) -> int:
        return self._base.min_scan_radius()

    def natural_rank(self) -> int:
        return self._base.natural_rank()

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        _check_mode(mode)
        bound = self._base.defect_bound(mode)
        if bound is None:
            return None
        return DefectBound(
            bound.value, f"taking the alternating part does not increase the defect ({bound.reason})"
        )

    def describe(self) -> str:
        return f"alt({self._base.describe()})"


def coboundary(spec: Quasimorphism, g: Word, h: Word) -> float:
    """The defect term phi(g) + phi(h) - phi(gh)."""
    return spec.evaluate(g) + spec.evaluate(h) - spec.evaluate(multiply(g, h))


def alternating_part(spec: Quasimorphism) -> AlternatingPart:
    return AlternatingPart(spec)


@dataclass(frozen=True)
class DefectEstimate:
    """A certified lower bound on the defect from a finite pair scan, bracketed
    by a theoretical upper bound when one is available."""

    certified_lower: float
    scan_radius: int
    rank: int
    pair_mode: str
    pairs_scanned: int
    theoretical_upper: Optional[float]
    upper_reason: Optional[str]
    witness: Optional[tuple[Word, Word]]

    def __post_init__(self):
        if (
            self.theoretical_upper is not None
            and self.certified_lower > self.theoretical_upper + 1e-9
        ):
            raise AssertionError(
                f"certified lower bound {self.certified_lower} exceeds the "
                f"theoretical upper bound {self.theoretical_upper}"
            )

    def to_dict(self) -> dict:
        return {
            "certified_lower": self.certified_lower,
            "scan_radius": self.scan_radius,
            "rank": self.rank,
            "pair_mode": self.pair_mode,
            "pairs_scanned": self.pairs_scanned,
            "theoretical_upper": self.theoretical_upper,
            "upper_reason": self.upper_reason,
            "witness": [str(self.witness[0]), str(self.witness[1])] if self.witness else None,
        }


def _scan_chunk(
    spec: Quasimorphism,
    ball: Sequence[Word],
    values: Sequence[float],
    g_range: range,
    mode: str,
) -> tuple[float, int, int, int]:
    best = -1.0
    best_g = best_h = -1
    scanned = 0
    product_cache: dict[Word, float] = {}
    n = len(ball)
    for gi in g_range:
        g = ball[gi]
        vg = values[gi]
        for hi in range(n):
            h = ball[hi]
            if mode == "reduced" and not is_reduced_pair(g, h):
                continue
            scanned += 1
            product = multiply(g, h)
            vp = product_cache.get(product)
            if vp is None:
                vp = spec.evaluate(product)
                product_cache[product] = vp
            defect = abs(vg + values[hi] - vp)
            if defect > best:
                best = defect
                best_g, best_h = gi, hi
    return best, best_g, best_h, scanned


def estimate_defect(
    spec: Quasimorphism,
    radius: int,
    mode: str = "all",
    *,
    rank: Optional[int] = None,
    threads: Optional[int] = None,
) -> DefectEstimate:
    """Scan every pair (reduced pairs only in mode 'reduced') in the ball of the
    given radius and certify the largest coboundary magnitude found.

    The scan is deterministic: the witness is the first maximizing pair in ball
    enumeration order, regardless of thread count.
    """
    _check_mode(mode)
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    if radius < spec.min_scan_radius():
        raise ValueError(
            f"radius {radius} is too small to contain the spec's support "
            f"(need at least {spec.min_scan_radius()})"
        )
    if rank is None:
        rank = spec.natural_rank()
    threads = resolve_threads(threads)

    ball = enumerate_ball(rank, radius)
    values = [spec.evaluate(g) for g in ball]

    n = len(ball)
    if threads == 1 or n < 2 * threads:
        chunks = [range(n)]
    else:
        step = (n + threads - 1) // threads
        chunks = [range(start, min(start + step, n)) for start in range(0, n, step)]

    if len(chunks) == 1:
        results = [_scan_chunk(spec, ball, values, chunks[0], mode)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda r: _scan_chunk(spec, ball, values, r, mode), chunks)
            )

    best, best_g, best_h = -1.0, -1, -1
    scanned = 0
    for chunk_best, gi, hi, chunk_scanned in results:
        scanned += chunk_scanned
        if chunk_best > best or (chunk_best == best and (gi, hi) < (best_g, best_h)):
            best, best_g, best_h = chunk_best, gi, hi

    bound = spec.defect_bound(mode)
    witness = (ball[best_g], ball[best_h]) if best_g >= 0 else None
    return DefectEstimate(
        certified_lower=max(best, 0.0),
        scan_radius=radius,
        rank=rank,
        pair_mode=mode,
        pairs_scanned=scanned,
        theoretical_upper=None if bound is None else bound.value,
        upper_reason=None if bound is None else bound.reason,
        witness=witness,
    )


@dataclass(frozen=True)
class HomogenizationReport:
    """The normalized power sequence phi(g^n)/n with Cauchy diagnostics."""

    values: tuple[float, ...]
    defect_bound_used: Optional[float]
    cauchy_violations: tuple[tuple[int, int], ...]

    @property
    def last(self) -> float:
        return self.values[-1]


def homogenize_sequence(
    spec: Quasimorphism,
    g: Word,
    n_max: int,
    *,
    defect_bound: Optional[float] = None,
) -> HomogenizationReport:
    """Evaluate phi(g^n)/n for n = 1..n_max and flag violations of the Cauchy
    inequality |phi(g^n)/n - phi(g^m)/m| <= (1/n + 1/m) * D."""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    if defect_bound is None:
        bound = spec.defect_bound("all")
        defect_bound = bound.value if bound is not None else None

    values = []
    power = IDENTITY
    for n in range(1, n_max + 1):
        power = multiply(power, g)
        values.append(spec.evaluate(power) / n)

    violations = []
    if defect_bound is not None:
        for n in range(1, n_max + 1):
            for m in range(n + 1, n_max + 1):
                allowed = (1.0 / n + 1.0 / m) * defect_bound
                if abs(values[n - 1] - values[m - 1]) > allowed + 1e-9:
                    violations.append((n, m))
    return HomogenizationReport(tuple(values), defect_bound, tuple(violations))


def grigorchuk_expand(
    values: Mapping[Word, float], radius: int, rank: Optional[int] = None
) -> CoefficientMap:
    """Expand an alternating value table on a ball into pattern coefficients.

    Processing lengths from 1 up to the radius, each sphere word receives the
    coefficient still missing after the shorter patterns' contributions; the
    resulting signed-count sum (kind big, with the both-signs folding of
    CoefficientSum) reproduces the table exactly on the whole ball, and the
    coefficients are the unique ones that do so.
    """
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    if rank is None:
        rank = max(
            [2] + [w.max_generator() + 1 for w in values if not w.is_identity]
        )

    ball = enumerate_ball(rank, radius)
    missing = [g for g in ball if g not in values]
    if missing:
        raise ValueError(
            f"table does not cover the whole ball of radius {radius} in rank {rank}: "
            f"missing {missing[0]} and {len(missing) - 1} more"
        )
    if abs(values[IDENTITY]) > 1e-9:
        raise ValueError("alternating tables must vanish on the identity")
    for g in ball:
        if abs(values[g] + values[g.inverse()]) > 1e-9:
            raise ValueError(f"table is not alternating at {g}")

    coefficients: dict[Word, float] = {}
    for length in range(1, radius + 1):
        for g in enumerate_sphere(rank, length):
            if g.inverse() < g:
                continue
            partial = sum(
                c * count_big(w, g) for w, c in coefficients.items() if len(w) < length
            )
            alpha = float(values[g]) - partial
            if alpha != 0.0:
                coefficients[g] = alpha
                coefficients[g.inverse()] = -alpha
    return CoefficientMap(coefficients)


@dataclass(frozen=True)
class KappaReport:
    """Compatibility tail weights of a coefficient map and the summability /
    independence classification they support."""

    kappa: tuple[float, ...]
    support_ceiling: int
    l1_norm: float
    weighted_l1_norm: float
    sup_norm: float
    s_kappa: float
    is_calegari: bool
    in_ell1_br: bool
    in_wl1_br: bool
    in_kappa_ell1: bool
    in_sigma_ind: bool
    certificate: Optional[SigmaIndCertificate]

    def __post_init__(self):
        for n in range(1, len(self.kappa)):
            if self.kappa[n] > self.kappa[n - 1] + 1e-12:
                raise AssertionError("kappa must be nonincreasing")
        if len(self.kappa) > 1 and abs(self.kappa[0] - self.kappa[1]) > 1e-12:
            raise AssertionError("kappa(0) must equal kappa(1)")

    def to_dict(self) -> dict:
        return {
            "kappa": list(self.kappa),
            "support_ceiling": self.support_ceiling,
            "l1_norm": self.l1_norm,
            "weighted_l1_norm": self.weighted_l1_norm,
            "sup_norm": self.sup_norm,
            "s_kappa": self.s_kappa,
            "is_calegari": self.is_calegari,
            "in_ell1_br": self.in_ell1_br,
            "in_wl1_br": self.in_wl1_br,
            "in_kappa_ell1": self.in_kappa_ell1,
            "in_sigma_ind": self.in_sigma_ind,
            "sigma_ind_classes": None
            if self.certificate is None or not self.certificate.success
            else [sorted(str(w) for w in family) for family in self.certificate.classes],
            "certificate_note": None if self.certificate is None else self.certificate.note,
        }


def _kappa_chunk(
    support: Sequence[Word],
    weights: Sequence[float],
    prefixes: Sequence[Word],
    suffixes: Sequence[Word],
    ceiling: int,
    x_range: range,
) -> list[float]:
    kappa = [0.0] * (ceiling + 1)
    splits = []
    for w, weight in zip(support, weights):
        splits.append(
            (
                len(w),
                weight,
                [(w.prefix(k), w.suffix(len(w) - k)) for k in range(1, len(w))],
            )
        )
    for xi in x_range:
        x = prefixes[xi]
        for y in suffixes:
            if not is_reduced_pair(x, y):
                continue
            members = []
            for length, weight, pieces in splits:
                for head, tail in pieces:
                    if (
                        len(head) <= len(x)
                        and x.suffix(len(head)) == head
                        and len(tail) <= len(y)
                        and y.prefix(len(tail)) == tail
                    ):
                        members.append((length, weight))
                        break
            if not members:
                continue
            for n in range(ceiling + 1):
                tail_weight = sum(weight for length, weight in members if length > n)
                if tail_weight > kappa[n]:
                    kappa[n] = tail_weight
    return kappa


def kappa_alpha(
    coefficients: CoefficientMap,
    *,
    threads: Optional[int] = None,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> KappaReport:
    """Exact compatibility tail weights kappa(n) for n = 0..ceiling, plus the
    classification flags they certify.

    Every cancellation-free junction u|v is dominated by the pair (longest
    supported-word prefix that is a suffix of u, longest supported-word suffix
    that is a prefix of v), so scanning those finitely many pairs is exhaustive.
    """
    threads = resolve_threads(threads)
    support = coefficients.support
    ceiling = coefficients.max_length
    weights = [abs(coefficients.get(w)) for w in support]

    prefixes = sorted({w.prefix(k) for w in support for k in range(1, len(w))})
    suffixes = sorted({w.suffix(k) for w in support for k in range(1, len(w))})

    kappa = [0.0] * (ceiling + 1)
    if prefixes and suffixes:
        n = len(prefixes)
        if threads == 1 or n < 2 * threads:
            chunks = [range(n)]
        else:
            step = (n + threads - 1) // threads
            chunks = [range(start, min(start + step, n)) for start in range(0, n, step)]
        if len(chunks) == 1:
            partials = [
                _kappa_chunk(support, weights, prefixes, suffixes, ceiling, chunks[0])
            ]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                partials = list(
                    pool.map(
                        lambda r: _kappa_chunk(
                            support, weights, prefixes, suffixes, ceiling, r
                        ),
                        chunks,
                    )
                )
        for partial in partials:
            for n_value in range(ceiling + 1):
                kappa[n_value] = max(kappa[n_value], partial[n_value])

    if not coefficients:
        certificate: Optional[SigmaIndCertificate] = SigmaIndCertificate(
            True, (), 0, "empty support"
        )
    elif not coefficients.is_nso_supported:
        offender = next(
            w for w in coefficients.positive_support if is_self_overlapping(w)
        )
        certificate = SigmaIndCertificate(
            False,
            (),
            None,
            f"support contains the self-overlapping word {offender}, which no "
            "independent family can hold",
        )
    else:
        certificate = sigma_ind_certificate(support, exact_limit)

    return KappaReport(
        kappa=tuple(kappa),
        support_ceiling=ceiling,
        l1_norm=coefficients.l1_norm,
        weighted_l1_norm=coefficients.weighted_l1_norm,
        sup_norm=coefficients.sup_norm,
        s_kappa=float(sum(kappa)),
        is_calegari=True,
        in_ell1_br=True,
        in_wl1_br=True,
        in_kappa_ell1=True,
        in_sigma_ind=certificate.success,
        certificate=certificate,
    )
