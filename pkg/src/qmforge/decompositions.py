"""Word decompositions into piece sequences, their triangles, and continuity.

A decomposition assigns every word a reduced factorization into pieces,
compatibly with inversion and with taking contiguous subranges.  Pairs of
words then yield a triangle whose three r-parts control the defect of any
piece-weighted quasimorphism, and whose c-parts measure how long two pairs
"travel together" — the basis of the continuity profile.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .brooks import occurrence_positions
from .quasimorphisms import (
    BrooksBig,
    BrooksSmall,
    CoefficientSum,
    DefectBound,
    DefectEstimate,
    ExponentTable,
    Quasimorphism,
    kappa_alpha,
    resolve_threads,
)
from .words import (
    IDENTITY,
    Word,
    enumerate_ball,
    is_self_overlapping,
    multiply,
    multiply_all,
    overlap_report,
)


def invert_sequence(pieces: Sequence[Word]) -> tuple[Word, ...]:
    """Reversed inverses: the piece sequence of the inverse word."""
    return tuple(piece.inverse() for piece in reversed(pieces))


class Decomposition:
    """An immutable decomposition strategy: a pure piece-splitting function,
    a piece-membership predicate, and a declared defect (metadata, checked
    against scans rather than trusted)."""

    def __init__(
        self,
        name: str,
        decompose_fn: Callable[[Word], tuple[Word, ...]],
        piece_membership: Callable[[Word], bool],
        declared_defect: Optional[int] = None,
        declared_reason: str = "",
        rank_hint: int = 2,
    ):
        self._name = name
        self._decompose_fn = decompose_fn
        self._piece_membership = piece_membership
        self._declared_defect = declared_defect
        self._declared_reason = declared_reason
        self._rank_hint = rank_hint

    @property
    def name(self) -> str:
        return self._name

    @property
    def declared_defect(self) -> Optional[int]:
        return self._declared_defect

    @property
    def declared_reason(self) -> str:
        return self._declared_reason

    def decompose(self, g: Word) -> tuple[Word, ...]:
        return self._decompose_fn(g)

    def is_piece(self, piece: Word) -> bool:
        return self._piece_membership(piece)

    def natural_rank(self) -> int:
        return self._rank_hint

    def __repr__(self) -> str:
        return f"<Decomposition {self._name}>"


# ---------------------------------------------------------------------------
# Built-in decompositions


def _decompose_letters(g: Word) -> tuple[Word, ...]:
    return tuple(Word((letter,)) for letter in g)


def _decompose_whole(g: Word) -> tuple[Word, ...]:
    return () if g.is_identity else (g,)


def _decompose_syllables(g: Word) -> tuple[Word, ...]:
    pieces: list[Word] = []
    run: list = []
    for letter in g:
        if run and letter.generator != run[0].generator:
            pieces.append(Word(tuple(run)))
            run = []
        run.append(letter)
    if run:
        pieces.append(Word(tuple(run)))
    return tuple(pieces)


def _isolating_decomposer(patterns: Sequence[Word]) -> Callable[[Word], tuple[Word, ...]]:
    """Split a word by isolating occurrences of the given patterns.

    For lawful inputs (non-self-overlapping, pairwise non-overlapping patterns
    closed under inversion) all occurrences are pairwise disjoint; a
    deterministic earliest-end selection handles unlawful inputs so that the
    axiom checker can exhibit their violations.
    """

    def decompose(g: Word) -> tuple[Word, ...]:
        occurrences = []
        for pattern in patterns:
            for start in occurrence_positions(pattern, g):
                occurrences.append((start + len(pattern), start, pattern))
        occurrences.sort()
        pieces: list[Word] = []
        cursor = 0
        for end, start, pattern in occurrences:
            if start < cursor:
                continue  # unlawful overlap: keep the earlier-ending occurrence
            if start > cursor:
                pieces.append(g[cursor:start])
            pieces.append(pattern)
            cursor = end
        if cursor < len(g):
            pieces.append(g[cursor:len(g)])
        return tuple(pieces)

    return decompose


def trivial_decomposition() -> Decomposition:
    return Decomposition(
        "triv",
        _decompose_letters,
        lambda piece: len(piece) == 1,
        declared_defect=0,
        declared_reason="single letters leave nothing to a triangle's r-parts",
    )


def block_decomposition() -> Decomposition:
    return Decomposition(
        "blocks",
        _decompose_whole,
        lambda piece: not piece.is_identity,
        declared_defect=1,
        declared_reason="each side of a triangle is a single piece",
    )


def rolli_decomposition() -> Decomposition:
    def is_power(piece: Word) -> bool:
        return not piece.is_identity and all(
            letter.generator == piece[0].generator for letter in piece
        )

    return Decomposition(
        "rolli",
        _decompose_syllables,
        is_power,
        declared_defect=1,
        declared_reason="at most the merged syllable enters an r-part",
    )


def brooks_decomposition(pattern: Word) -> Decomposition:
    if pattern.is_identity:
        raise ValueError("pattern must be nonempty")
    if is_self_overlapping(pattern):
        raise ValueError(f"pattern {pattern} is self-overlapping")
    patterns = (pattern, pattern.inverse())

    def membership(piece: Word) -> bool:
        if piece.is_identity:
            return False
        if piece in patterns:
            return True
        return all(not occurrence_positions(p, piece) for p in patterns)

    return Decomposition(
        f"brooks:{pattern}",
        _isolating_decomposer(patterns),
        membership,
        declared_defect=3,
        declared_reason="residues next to the junction plus one straddling occurrence",
        rank_hint=max(2, pattern.max_generator() + 1),
    )


def independent_decomposition(
    family: Iterable[Word], verify_family: bool = True
) -> Decomposition:
    members = tuple(sorted(set(family)))
    if verify_family:
        if any(member.is_identity for member in members):
            raise ValueError("family members must be nonempty")
        if {member.inverse() for member in members} != set(members):
            raise ValueError("family must be closed under inversion")
        for member in members:
            if is_self_overlapping(member):
                raise ValueError(f"family member {member} is self-overlapping")
        for i, left in enumerate(members):
            for right in members[i + 1 :]:
                if overlap_report(left, right).overlaps:
                    raise ValueError(
                        f"family members {left} and {right} overlap; "
                        "an isolating decomposition needs an independent family"
                    )

    def membership(piece: Word) -> bool:
        if piece.is_identity:
            return False
        if piece in members:
            return True
        return all(not occurrence_positions(m, piece) for m in members)

    rank_hint = max([2] + [m.max_generator() + 1 for m in members])
    return Decomposition(
        f"independent[{len(members)} words]",
        _isolating_decomposer(members),
        membership,
        declared_defect=5,
        declared_reason="two residues per short side and up to five pieces opposite",
        rank_hint=rank_hint,
    )


def make_decomposition(
    kind: str,
    pattern: Optional[Word] = None,
    family: Optional[Iterable[Word]] = None,
    verify_family: bool = True,
) -> Decomposition:
    """Factory for the built-in decompositions: 'triv', 'blocks', 'rolli',
    'brooks' (with a pattern), or 'independent' (with a family)."""
    if kind == "triv":
        return trivial_decomposition()
    if kind == "blocks":
        return block_decomposition()
    if kind == "rolli":
        return rolli_decomposition()
    if kind == "brooks":
        if pattern is None:
            raise ValueError("kind 'brooks' requires a pattern")
        return brooks_decomposition(pattern)
    if kind == "independent":
        if family is None:
            raise ValueError("kind 'independent' requires a family")
        return independent_decomposition(family, verify_family)
    raise ValueError(f"unknown decomposition kind {kind!r}")


# ---------------------------------------------------------------------------
# Axiom validation


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of checking the decomposition axioms over a ball."""

    passed: bool
    radius: int
    rank: int
    words_checked: int
    failed_axiom: Optional[int] = None
    witness: Optional[Word] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "radius": self.radius,
            "rank": self.rank,
            "words_checked": self.words_checked,
            "failed_axiom": self.failed_axiom,
            "witness": None if self.witness is None else str(self.witness),
            "detail": self.detail,
        }


def validate_axioms(
    delta: Decomposition, radius: int, *, rank: Optional[int] = None
) -> AxiomReport:
    """Check reduced concatenation, inversion compatibility, and infix closure
    for every word in the ball; the first counterexample stops the scan."""
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    if rank is None:
        rank = delta.natural_rank()

    checked = 0
    for g in enumerate_ball(rank, radius):
        checked += 1
        pieces = delta.decompose(g)
        if g.is_identity:
            if pieces != ():
                return AxiomReport(
                    False, radius, rank, checked, 1, g,
                    "identity must decompose into the empty sequence",
                )
            continue

        letters: list = []
        for piece in pieces:
            if piece.is_identity:
                return AxiomReport(
                    False, radius, rank, checked, 1, g, "empty piece in decomposition"
                )
            if not delta.is_piece(piece):
                return AxiomReport(
                    False, radius, rank, checked, 1, g,
                    f"piece {piece} fails the membership predicate",
                )
            letters.extend(piece)
        if tuple(letters) != tuple(g):
            return AxiomReport(
                False, radius, rank, checked, 1, g,
                "pieces do not concatenate to the word without cancellation",
            )

        if delta.decompose(g.inverse()) != invert_sequence(pieces):
            return AxiomReport(
                False, radius, rank, checked, 2, g,
                "decomposition of the inverse is not the reversed inverse sequence",
            )

        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces) + 1):
                sub = pieces[i:j]
                if delta.decompose(multiply_all(sub)) != sub:
                    return AxiomReport(
                        False, radius, rank, checked, 3, g,
                        f"subrange {i}:{j} is not infix closed",
                    )
    return AxiomReport(True, radius, rank, checked)


# ---------------------------------------------------------------------------
# Triangles


@dataclass(frozen=True)
class DeltaTriangle:
    """The triangle of a pair (g, h): three shared c-parts (each stored
    oriented away from the triangle center) and three r-parts satisfying
    pieces(g) = c1^-1 r1 c2, pieces(h) = c2^-1 r2 c3, pieces(gh) = c1^-1 r3^-1 c3,
    with the r-part products multiplying to the identity."""

    c1: tuple[Word, ...]
    c2: tuple[Word, ...]
    c3: tuple[Word, ...]
    r1: tuple[Word, ...]
    r2: tuple[Word, ...]
    r3: tuple[Word, ...]

    @property
    def r_parts(self) -> tuple[tuple[Word, ...], ...]:
        return (self.r1, self.r2, self.r3)

    @property
    def max_r_length(self) -> int:
        return max(len(self.r1), len(self.r2), len(self.r3))

    def to_dict(self) -> dict:
        def strs(pieces):
            return [str(piece) for piece in pieces]

        return {
            "c1": strs(self.c1),
            "c2": strs(self.c2),
            "c3": strs(self.c3),
            "r1": strs(self.r1),
            "r2": strs(self.r2),
            "r3": strs(self.r3),
        }


def _common_prefix_length(left: Sequence[Word], right: Sequence[Word]) -> int:
    bound = min(len(left), len(right))
    for k in range(bound):
        if left[k] != right[k]:
            return k
    return bound


def delta_triangle(delta: Decomposition, g: Word, h: Word) -> DeltaTriangle:
    pieces_g = delta.decompose(g)
    pieces_h = delta.decompose(h)
    pieces_gh = delta.decompose(multiply(g, h))

    n1 = _common_prefix_length(pieces_g, pieces_gh)

    bound = min(len(pieces_g), len(pieces_h))
    n2 = 0
    while n2 < bound and pieces_g[len(pieces_g) - 1 - n2].inverse() == pieces_h[n2]:
        n2 += 1

    bound = min(len(pieces_h), len(pieces_gh))
    n3 = 0
    while (
        n3 < bound
        and pieces_h[len(pieces_h) - 1 - n3] == pieces_gh[len(pieces_gh) - 1 - n3]
    ):
        n3 += 1

    if (
        n1 + n2 > len(pieces_g)
        or n2 + n3 > len(pieces_h)
        or n1 + n3 > len(pieces_gh)
    ):
        raise ValueError(
            f"c-ranges overlap on the pair ({g}, {h}): "
            f"{delta.name} is not a lawful decomposition"
        )

    prefix = pieces_g[:n1]
    c1 = invert_sequence(prefix)
    c2 = pieces_g[len(pieces_g) - n2 :]
    c3 = pieces_h[len(pieces_h) - n3 :]
    r1 = pieces_g[n1 : len(pieces_g) - n2]
    r2 = pieces_h[n2 : len(pieces_h) - n3]
    middle = pieces_gh[n1 : len(pieces_gh) - n3]
    r3 = invert_sequence(middle)

    relation = multiply_all(
        [multiply_all(r1), multiply_all(r2), multiply_all(r3)]
    )
    if not relation.is_identity:
        raise ValueError(
            f"triangle r-parts do not close up on the pair ({g}, {h}): "
            f"{delta.name} is not a lawful decomposition"
        )
    return DeltaTriangle(c1, c2, c3, r1, r2, r3)


def estimate_decomposition_defect(
    delta: Decomposition,
    radius: int,
    *,
    rank: Optional[int] = None,
    threads: Optional[int] = None,
) -> DefectEstimate:
    """Certified lower bound on the decomposition defect: the largest r-part
    piece count over all pairs in the ball, next to the declared defect."""
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    if rank is None:
        rank = delta.natural_rank()
    threads = resolve_threads(threads)
    ball = enumerate_ball(rank, radius)
    n = len(ball)

    def scan(g_range: range) -> tuple[int, int, int, int]:
        best, best_g, best_h, scanned = -1, -1, -1, 0
        for gi in g_range:
            for hi in range(n):
                scanned += 1
                size = delta_triangle(delta, ball[gi], ball[hi]).max_r_length
                if size > best:
                    best, best_g, best_h = size, gi, hi
        return best, best_g, best_h, scanned

    if threads == 1 or n < 2 * threads:
        chunks = [range(n)]
    else:
        step = (n + threads - 1) // threads
        chunks = [range(start, min(start + step, n)) for start in range(0, n, step)]
    if len(chunks) == 1:
        results = [scan(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, chunks))

    best, best_g, best_h, scanned = -1, -1, -1, 0
    for chunk_best, gi, hi, chunk_scanned in results:
        scanned += chunk_scanned
        if chunk_best > best or (chunk_best == best and (gi, hi) < (best_g, best_h)):
            best, best_g, best_h = chunk_best, gi, hi

    return DefectEstimate(
        certified_lower=float(max(best, 0)),
        scan_radius=radius,
        rank=rank,
        pair_mode="all",
        pairs_scanned=scanned,
        theoretical_upper=(
            None if delta.declared_defect is None else float(delta.declared_defect)
        ),
        upper_reason=delta.declared_reason or None,
        witness=(ball[best_g], ball[best_h]) if best_g >= 0 else None,
    )


# ---------------------------------------------------------------------------
# Piece weights and decomposable quasimorphisms


class PieceWeights:
    """A bounded alternating weight on pieces, from a finite map (with a
    default) or from an arbitrary function with a declared sup bound."""

    def __init__(
        self,
        weight_fn: Callable[[Word], float],
        sup_bound: float,
        label: str = "weights",
    ):
        self._weight_fn = weight_fn
        self._sup_bound = float(sup_bound)
        self._label = label

    @classmethod
    def from_map(
        cls,
        mapping: Mapping[Word, float],
        default: Optional[float] = 0.0,
        label: str = "table",
    ) -> "PieceWeights":
        folded: dict[Word, float] = {}
        for piece, value in mapping.items():
            if piece.is_identity:
                raise ValueError("the identity is never a piece")
            value = float(value)
            for p, v in ((piece, value), (piece.inverse(), -value)):
                if p in folded and folded[p] != v:
                    raise ValueError(f"conflicting weights for {p}")
                folded[p] = v

        def weight(piece: Word) -> float:
            if piece in folded:
                return folded[piece]
            if default is None:
                raise ValueError(f"weight undefined on piece {piece}")
            return default

        bound = max([abs(v) for v in folded.values()] + [abs(default or 0.0)], default=0.0)
        return cls(weight, bound, label)

    @classmethod
    def from_exponent_tables(
        cls, tables: Sequence[ExponentTable], label: str = "rolli-weights"
    ) -> "PieceWeights":
        tables = tuple(tables)

        def weight(piece: Word) -> float:
            first = piece[0]
            if any(letter.generator != first.generator for letter in piece):
                raise ValueError(f"weight undefined on piece {piece}")
            if first.generator >= len(tables):
                raise ValueError(f"no table for generator #{first.generator}")
            exponent = sum(letter.sign for letter in piece)
            return tables[first.generator].value(exponent)

        bound = max(table.sup_bound for table in tables)
        return cls(weight, bound, label)

    def weight(self, piece: Word) -> float:
        return float(self._weight_fn(piece))

    @property
    def sup_bound(self) -> float:
        return self._sup_bound

    def __repr__(self) -> str:
        return f"<PieceWeights {self._label}, sup {self._sup_bound}>"


def eval_decomposable(weights: PieceWeights, delta: Decomposition, g: Word) -> float:
    return sum(weights.weight(piece) for piece in delta.decompose(g))


class Decomposable(Quasimorphism):
    """The quasimorphism summing piece weights over a word's decomposition."""

    def __init__(self, weights: PieceWeights, decomposition: Decomposition):
        self._weights = weights
        self._decomposition = decomposition

    @property
    def weights(self) -> PieceWeights:
        return self._weights

    @property
    def decomposition(self) -> Decomposition:
        return self._decomposition

    def evaluate(self, g: Word) -> float:
        return eval_decomposable(self._weights, self._decomposition, g)

    def natural_rank(self) -> int:
        return self._decomposition.natural_rank()

    def defect_bound(self, mode: str = "all") -> Optional[DefectBound]:
        if mode not in ("all", "reduced"):
            raise ValueError(f"pair mode must be 'all' or 'reduced', got {mode!r}")
        declared = self._decomposition.declared_defect
        if declared is None:
            return None
        value = 3.0 * self._weights.sup_bound * declared
        return DefectBound(
            value,
            "a coboundary reads off at most three r-parts of a triangle, each "
            f"holding at most {declared} pieces weighted by at most "
            f"{self._weights.sup_bound}",
        )

    def describe(self) -> str:
        return f"decomposable[{self._decomposition.name}]"


def coboundary_from_triangle(
    weights: PieceWeights, delta: Decomposition, g: Word, h: Word
) -> float:
    """The coboundary computed from the r-parts alone."""
    triangle = delta_triangle(delta, g, h)
    return sum(
        weights.weight(piece) for part in triangle.r_parts for piece in part
    )


# ---------------------------------------------------------------------------
# Continuity


def n_delta(
    delta: Decomposition,
    pair1: tuple[Word, Word],
    pair2: tuple[Word, Word],
) -> float:
    """How many pieces two pairs' triangles travel together: 0 when the
    r-parts differ, infinity exactly for equal pairs, else the smallest
    common-prefix length of corresponding center-outward c-parts."""
    if pair1 == pair2:
        return math.inf
    t1 = delta_triangle(delta, *pair1)
    t2 = delta_triangle(delta, *pair2)
    return _n_delta_from_triangles(t1, t2)


def _n_delta_from_triangles(t1: DeltaTriangle, t2: DeltaTriangle) -> float:
    if t1.r_parts != t2.r_parts:
        return 0.0
    steps = []
    for c_own, c_other in ((t1.c1, t2.c1), (t1.c2, t2.c2), (t1.c3, t2.c3)):
        if c_own == c_other:
            steps.append(math.inf)
        else:
            steps.append(float(_common_prefix_length(c_own, c_other)))
    return min(steps)


@dataclass(frozen=True)
class ContinuityProfile:
    """Observed continuity profile: for each finite travel distance N, the
    largest coboundary gap seen between scanned pairs at that distance."""

    x_hat: tuple[tuple[int, float], ...]
    scan_radius: int
    rank: int
    pairs_scanned: int
    comparisons: int
    budget: int
    theoretical: Optional[tuple[tuple[int, float], ...]]
    theoretical_reason: Optional[str]

    def __post_init__(self):
        if self.theoretical is not None:
            bound = dict(self.theoretical)
            for n, value in self.x_hat:
                if n in bound and value > bound[n] + 1e-9:
                    raise AssertionError(
                        f"observed gap {value} at distance {n} exceeds the "
                        f"theoretical profile value {bound[n]}"
                    )

    @property
    def x_hat_dict(self) -> dict[int, float]:
        return dict(self.x_hat)

    @property
    def s_hat(self) -> float:
        return float(sum(value for _, value in self.x_hat))

    def to_dict(self) -> dict:
        return {
            "x_hat": {str(n): value for n, value in self.x_hat},
            "scan_radius": self.scan_radius,
            "rank": self.rank,
            "pairs_scanned": self.pairs_scanned,
            "comparisons": self.comparisons,
            "budget": self.budget,
            "s_hat": self.s_hat,
            "theoretical": None
            if self.theoretical is None
            else {str(n): value for n, value in self.theoretical},
            "theoretical_reason": self.theoretical_reason,
        }


def _theoretical_profile(
    spec: Quasimorphism, delta: Decomposition, distances: Sequence[int]
) -> tuple[Optional[dict[int, float]], Optional[str]]:
    if isinstance(spec, Decomposable) and spec.decomposition is delta:
        return (
            {n: 0.0 for n in distances if n >= 1},
            "a decomposable map's coboundary depends only on the r-part, which "
            "pairs at positive travel distance share",
        )
    if isinstance(spec, BrooksSmall) and not is_self_overlapping(spec.pattern):
        length = len(spec.pattern)
        return (
            {n: (6.0 if n < length else 0.0) for n in distances},
            "disjoint-occurrence coboundaries are determined within the pattern "
            "length of the center and are bounded by 3 in magnitude",
        )
    if isinstance(spec, BrooksBig):
        length = len(spec.pattern)
        ceiling = 2.0 * 3.0 * (length - 1)
        return (
            {n: (ceiling if n < length else 0.0) for n in distances},
            "all-occurrence coboundaries are determined within the pattern "
            "length of the center",
        )
    if isinstance(spec, CoefficientSum) and spec.kind == "small":
        report = kappa_alpha(spec.coefficients)
        kappa = report.kappa

        def tail(n: int) -> float:
            return 36.0 * (kappa[n] if n < len(kappa) else 0.0)

        return (
            {n: tail(n) for n in distances},
            "junction sensitivity at travel distance N is controlled by the "
            "compatibility tail weight kappa(N) times a universal constant 36",
        )
    return None, None


def continuity_profile(
    spec: Quasimorphism,
    delta: Decomposition,
    radius: int,
    *,
    rank: Optional[int] = None,
    budget: int = 200_000,
    threads: Optional[int] = None,
) -> ContinuityProfile:
    """Scan all pairs in the ball, group them by triangle r-part, and record
    the largest coboundary gap at each finite travel distance.

    Cross-group comparisons (travel distance 0) are aggregated exactly from
    per-group extremes; within-group comparisons are capped by the comparison
    budget using deterministic stride sampling.
    """
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    if rank is None:
        rank = max(spec.natural_rank(), delta.natural_rank())
    threads = resolve_threads(threads)

    ball = enumerate_ball(rank, radius)
    values: dict[Word, float] = {}
    for g in ball:
        values[g] = spec.evaluate(g)
    for g in ball:
        if abs(values[g] + values[g.inverse()]) > 1e-9:
            raise ValueError(f"spec is not alternating at {g}")

    pairs = [(g, h) for g in ball for h in ball]

    def build(chunk: range):
        built = []
        for idx in chunk:
            g, h = pairs[idx]
            product = multiply(g, h)
            value = values.get(product)
            if value is None:
                value = spec.evaluate(product)
            triangle = delta_triangle(delta, g, h)
            built.append((triangle, values[g] + values[h] - value))
        return built

    if threads == 1 or len(pairs) < 2 * threads:
        chunks = [range(len(pairs))]
    else:
        step = (len(pairs) + threads - 1) // threads
        chunks = [
            range(start, min(start + step, len(pairs)))
            for start in range(0, len(pairs), step)
        ]
    if len(chunks) == 1:
        built_chunks = [build(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            built_chunks = list(pool.map(build, chunks))

    groups: dict[tuple, list[tuple[DeltaTriangle, float]]] = {}
    order: list[tuple] = []
    for chunk in built_chunks:
        for triangle, value in chunk:
            key = triangle.r_parts
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append((triangle, value))

    x_hat: dict[int, float] = {}

    def record(distance: float, gap: float) -> None:
        if math.isinf(distance):
            return
        n = int(distance)
        if gap > x_hat.get(n, -1.0):
            x_hat[n] = gap

    # distance 0 across groups: only per-group extremes matter
    if len(order) > 1:
        extremes = [
            (min(v for _, v in groups[key]), max(v for _, v in groups[key]))
            for key in order
        ]
        lows = sorted(range(len(extremes)), key=lambda i: extremes[i][0])[:2]
        highs = sorted(range(len(extremes)), key=lambda i: -extremes[i][1])[:2]
        best_gap = 0.0
        for i in highs:
            for j in lows:
                if i != j:
                    best_gap = max(best_gap, extremes[i][1] - extremes[j][0])
        record(0.0, best_gap)

    comparisons = 0
    multi = [key for key in order if len(groups[key]) > 1]
    if multi:
        share = max(1, budget // len(multi))
        for key in multi:
            bucket = groups[key]
            size = len(bucket)
            if size * (size - 1) // 2 > share:
                keep = max(2, int((1 + math.isqrt(1 + 8 * share)) // 2))
                stride = max(1, (size + keep - 1) // keep)
                bucket = bucket[::stride]
            for i in range(len(bucket)):
                t1, v1 = bucket[i]
                for j in range(i + 1, len(bucket)):
                    t2, v2 = bucket[j]
                    comparisons += 1
                    record(_n_delta_from_triangles(t1, t2), abs(v1 - v2))

    distances = sorted(x_hat)
    theoretical, reason = _theoretical_profile(spec, delta, distances)
    return ContinuityProfile(
        x_hat=tuple((n, x_hat[n]) for n in distances),
        scan_radius=radius,
        rank=rank,
        pairs_scanned=len(pairs),
        comparisons=comparisons,
        budget=budget,
        theoretical=None
        if theoretical is None
        else tuple(sorted(theoretical.items())),
        theoretical_reason=reason,
    )
