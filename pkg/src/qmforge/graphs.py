"""Directed overlap graphs on word sets and exact small-graph analytics.

Three graphs are built on a set of non-self-overlapping words: one recording
proper suffix/prefix overlaps (directed), one recording strict subword
containment (directed, transitive), and their union.  Identifying each word
with its inverse yields quotient graphs.  The module also provides exact
clique-number and chromatic-number solvers sized for these instances, longest
directed paths, the compatibility number of a word set, and certificates
partitioning a word set into symmetric independent families.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .words import (
    ReducedExpression,
    Word,
    is_reduced_pair,
    is_self_overlapping,
    overlap_report,
)

DEFAULT_EXACT_LIMIT = 24

# Classical two-color Ramsey numbers R(k, k) for small k, used as a
# consistency fixture: any graph on >= R(k) vertices contains a clique or an
# independent set of size k.
RAMSEY_NUMBERS = {1: 1, 2: 2, 3: 6, 4: 18}


@dataclass(frozen=True)
class Digraph:
    """A finite digraph with hashable vertex labels in a fixed order.

    ``directed=False`` marks a symmetric edge set standing for an undirected
    graph; clique and coloring metrics always read the underlying undirected
    adjacency, while longest-path analysis uses edge directions.
    """

    vertices: tuple
    edges: frozenset
    directed: bool = True

    def __post_init__(self):
        n = len(self.vertices)
        if len(set(self.vertices)) != n:
            raise ValueError("duplicate vertex labels")
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range")
        if not self.directed:
            for i, j in self.edges:
                if (j, i) not in self.edges:
                    raise ValueError("undirected graph requires a symmetric edge set")

    def index(self, label) -> int:
        return self.vertices.index(label)

    def has_edge(self, u, v) -> bool:
        return (self.index(u), self.index(v)) in self.edges

    @property
    def has_loops(self) -> bool:
        return any(i == j for i, j in self.edges)

    def undirected_pairs(self) -> frozenset:
        """Edges of the underlying undirected graph, as index pairs (i, j) with i < j."""
        return frozenset(
            (min(i, j), max(i, j)) for i, j in self.edges if i != j
        )

    def adjacency(self) -> list[set]:
        """Underlying undirected adjacency sets."""
        adj: list[set] = [set() for _ in self.vertices]
        for i, j in self.undirected_pairs():
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def edge_labels(self) -> list[tuple]:
        return sorted(
            ((self.vertices[i], self.vertices[j]) for i, j in self.edges),
            key=lambda pair: (self.vertices.index(pair[0]), self.vertices.index(pair[1])),
        )

    def to_edge_list_text(self) -> str:
        arrow = "->" if self.directed else "--"
        lines = [f"vertices: {len(self.vertices)}"]
        for label in self.vertices:
            lines.append(f"  {label}")
        pairs = (
            sorted(self.edges)
            if self.directed
            else sorted(self.undirected_pairs())
        )
        lines.append(f"edges: {len(pairs)}")
        for i, j in pairs:
            lines.append(f"  {self.vertices[i]} {arrow} {self.vertices[j]}")
        return "\n".join(lines) + "\n"


def make_undirected(vertices: tuple, index_pairs: Iterable[tuple]) -> Digraph:
    edges = set()
    for i, j in index_pairs:
        edges.add((i, j))
        edges.add((j, i))
    return Digraph(vertices, frozenset(edges), directed=False)


# ---------------------------------------------------------------------------
# Exact solvers


def _max_clique_exact(adj: list[set]) -> int:
    """Maximum clique via branch and bound with pivoting."""
    best = 1 if adj else 0

    def expand(size: int, candidates: set, excluded: set) -> None:
        nonlocal best
        if not candidates and not excluded:
            best = max(best, size)
            return
        if size + len(candidates) <= best:
            return
        pivot = max(candidates | excluded, key=lambda u: (len(adj[u] & candidates), -u))
        for v in sorted(candidates - adj[pivot]):
            expand(size + 1, candidates & adj[v], excluded & adj[v])
            candidates = candidates - {v}
            excluded = excluded | {v}
            if size + len(candidates) <= best:
                return

    if adj:
        expand(0, set(range(len(adj))), set())
    return best


def _greedy_clique_lower(adj: list[set]) -> int:
    if not adj:
        return 0
    start_order = sorted(range(len(adj)), key=lambda v: (-len(adj[v]), v))
    best = 1
    for start in start_order[:8]:
        clique = {start}
        candidates = set(adj[start])
        while candidates:
            v = min(candidates, key=lambda u: (-len(adj[u] & candidates), u))
            clique.add(v)
            candidates &= adj[v]
        best = max(best, len(clique))
    return best


def _dsatur_coloring(adj: list[set]) -> list[int]:
    """Greedy coloring by descending saturation; returns a color per vertex."""
    n = len(adj)
    colors = [-1] * n
    neighbor_colors: list[set] = [set() for _ in range(n)]
    for _ in range(n):
        v = max(
            (u for u in range(n) if colors[u] == -1),
            key=lambda u: (len(neighbor_colors[u]), len(adj[u]), -u),
        )
        color = 0
        while color in neighbor_colors[v]:
            color += 1
        colors[v] = color
        for u in adj[v]:
            neighbor_colors[u].add(color)
    return colors


def _chromatic_exact(adj: list[set], lower: int) -> tuple[int, list[int]]:
    """Exact chromatic number and a witness coloring, by DSATUR-guided backtracking."""
    n = len(adj)
    if n == 0:
        return 0, []
    greedy = _dsatur_coloring(adj)
    best_count = max(greedy) + 1
    best_assignment = list(greedy)
    colors = [-1] * n

    def choose_vertex() -> int:
        return max(
            (u for u in range(n) if colors[u] == -1),
            key=lambda u: (
                len({colors[x] for x in adj[u] if colors[x] != -1}),
                len(adj[u]),
                -u,
            ),
        )

    def search(colored: int, used: int) -> None:
        nonlocal best_count, best_assignment
        if used >= best_count:
            return
        if colored == n:
            best_count = used
            best_assignment = list(colors)
            return
        if best_count <= lower:
            return
        v = choose_vertex()
        forbidden = {colors[x] for x in adj[v] if colors[x] != -1}
        for color in range(min(used + 1, best_count - 1)):
            if color in forbidden:
                continue
            colors[v] = color
            search(colored + 1, max(used, color + 1))
            colors[v] = -1
            if best_count <= lower:
                return

    search(0, 0)
    return best_count, best_assignment


def _longest_directed_path(graph: Digraph) -> tuple[Optional[int], str]:
    """Longest directed path, counted in edges."""
    n = len(graph.vertices)
    successors: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for i, j in sorted(graph.edges):
        if i == j:
            return None, "unavailable (loop)"
        successors[i].append(j)
        indegree[j] += 1

    order = [v for v in range(n) if indegree[v] == 0]
    seen = 0
    topo: list[int] = []
    pending = list(order)
    remaining = list(indegree)
    while pending:
        v = pending.pop()
        topo.append(v)
        seen += 1
        for u in successors[v]:
            remaining[u] -= 1
            if remaining[u] == 0:
                pending.append(u)
    if seen == n:
        longest_to = [0] * n
        for v in topo:
            for u in successors[v]:
                longest_to[u] = max(longest_to[u], longest_to[v] + 1)
        return (max(longest_to) if n else 0), "exact (acyclic, dynamic programming)"

    if n <= 12:
        best = 0

        def extend(v: int, visited: set, length: int) -> None:
            nonlocal best
            best = max(best, length)
            for u in successors[v]:
                if u not in visited:
                    extend(u, visited | {u}, length + 1)

        for start in range(n):
            extend(start, {start}, 0)
        return best, "exact (exhaustive search on a small cyclic digraph)"
    return None, "unavailable (cyclic digraph too large for exhaustive search)"


@dataclass(frozen=True)
class GraphMetrics:
    """Clique number, chromatic number (exact values or bounds), and longest path."""

    omega_lower: int
    omega_upper: int
    chi_lower: int
    chi_upper: int
    exact: bool
    lp: Optional[int]
    lp_note: str

    def __post_init__(self):
        if self.omega_lower > self.omega_upper or self.chi_lower > self.chi_upper:
            raise ValueError("metric bounds are inverted")
        if self.omega_lower > self.chi_upper:
            raise ValueError("clique number cannot exceed chromatic number")

    @property
    def omega(self) -> Optional[int]:
        return self.omega_lower if self.omega_lower == self.omega_upper else None

    @property
    def chi(self) -> Optional[int]:
        return self.chi_lower if self.chi_lower == self.chi_upper else None


def graph_metrics(graph: Digraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> GraphMetrics:
    """Compute clique and chromatic numbers (exactly up to exact_limit vertices,
    otherwise as greedy bounds) and the longest directed path."""
    adj = graph.adjacency()
    n = len(adj)
    lp, lp_note = _longest_directed_path(graph)
    if not graph.directed:
        lp, lp_note = None, "unavailable (undirected graph)"
    if n <= exact_limit:
        omega = _max_clique_exact(adj)
        chi, _ = _chromatic_exact(adj, omega)
        return GraphMetrics(omega, omega, chi, chi, True, lp, lp_note)
    omega_lower = _greedy_clique_lower(adj)
    chi_upper = max(_dsatur_coloring(adj), default=-1) + 1
    return GraphMetrics(
        omega_lower=omega_lower,
        omega_upper=chi_upper,
        chi_lower=omega_lower,
        chi_upper=chi_upper,
        exact=False,
        lp=lp,
        lp_note=lp_note,
    )


def exact_coloring(graph: Digraph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> Optional[list[int]]:
    """An optimal proper coloring of the underlying undirected graph, or None
    when the instance exceeds the exact-solver limit."""
    adj = graph.adjacency()
    if len(adj) > exact_limit:
        return None
    omega = _max_clique_exact(adj)
    _, assignment = _chromatic_exact(adj, omega)
    return assignment


# ---------------------------------------------------------------------------
# Overlap graphs on word sets


@dataclass(frozen=True)
class OverlapGraphBundle:
    """The three overlap graphs on a word set, plus inversion quotients.

    Quotient vertices are labeled by the lexicographically smaller of each
    {word, inverse} pair.  Quotients are None when the input set was allowed
    to be asymmetric.
    """

    og: Digraph
    sg: Digraph
    osg: Digraph
    og_bar: Optional[Digraph]
    sg_bar: Optional[Digraph]
    osg_bar: Optional[Digraph]

    @property
    def words(self) -> tuple[Word, ...]:
        return self.og.vertices


def build_overlap_graphs(
    V: Iterable[Word], allow_asymmetric: bool = False
) -> OverlapGraphBundle:
    words = sorted(set(V))
    for word in words:
        if word.is_identity:
            raise ValueError("overlap graphs require nonempty words")
        if is_self_overlapping(word):
            raise ValueError(f"{word} is self-overlapping and cannot be a vertex")
    symmetric = {w.inverse() for w in words} == set(words)
    if not symmetric and not allow_asymmetric:
        raise ValueError(
            "vertex set is not closed under inversion (pass allow_asymmetric=True "
            "to build the directed graphs without quotients)"
        )

    vertices = tuple(words)
    n = len(vertices)
    og_edges: set[tuple[int, int]] = set()
    sg_edges: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            report = overlap_report(vertices[i], vertices[j])
            if report.proper_overlap_lengths_lr:
                og_edges.add((i, j))
            if report.proper_overlap_lengths_rl:
                og_edges.add((j, i))
            if report.left_is_subword:
                sg_edges.add((i, j))
            if report.right_is_subword:
                sg_edges.add((j, i))

    og = Digraph(vertices, frozenset(og_edges))
    sg = Digraph(vertices, frozenset(sg_edges))
    osg = Digraph(vertices, frozenset(og_edges | sg_edges))

    og_bar = sg_bar = osg_bar = None
    if symmetric:
        representative = {}
        for word in vertices:
            representative[word] = min(word, word.inverse())
        class_labels = tuple(sorted(set(representative.values())))
        class_index = {label: k for k, label in enumerate(class_labels)}
        to_class = [class_index[representative[word]] for word in vertices]

        og_bar_pairs = set()
        sg_bar_edges = set()
        for i, j in og_edges:
            a, b = to_class[i], to_class[j]
            if a == b:
                raise ValueError("unexpected quotient loop from an overlap edge")
            og_bar_pairs.add((min(a, b), max(a, b)))
        for i, j in sg_edges:
            a, b = to_class[i], to_class[j]
            if a == b:
                raise ValueError("unexpected quotient loop from a subword edge")
            sg_bar_edges.add((a, b))
        og_bar = make_undirected(class_labels, og_bar_pairs)
        sg_bar = Digraph(class_labels, frozenset(sg_bar_edges))
        osg_bar_pairs = og_bar_pairs | {
            (min(a, b), max(a, b)) for a, b in sg_bar_edges
        }
        osg_bar = make_undirected(class_labels, osg_bar_pairs)

    return OverlapGraphBundle(og, sg, osg, og_bar, sg_bar, osg_bar)


def transitive_tournament_line_graph(n: int) -> Digraph:
    """The line digraph of the transitive tournament on n players: vertices are
    pairs (i, j) with i < j <= n, and (i, j) points to (j, k)."""
    if n < 2:
        raise ValueError(f"need at least 2 players, got {n}")
    vertices = tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    index = {pair: k for k, pair in enumerate(vertices)}
    edges = set()
    for i, j in vertices:
        for k in range(j + 1, n + 1):
            edges.add((index[(i, j)], index[(j, k)]))
    return Digraph(vertices, frozenset(edges))


def kappa_of_set(V: Iterable[Word]) -> int:
    """The largest number of members of V lying in one compatible family.

    Every full compatible family relevant to V is induced by a cancellation-free
    junction x|y where x is a proper prefix and y a proper suffix of members of
    V, so scanning those pairs is exhaustive.
    """
    words = [w for w in set(V) if len(w) >= 2]
    if not words:
        return 0
    prefixes = {w.prefix(k) for w in words for k in range(1, len(w))}
    suffixes = {w.suffix(k) for w in words for k in range(1, len(w))}

    def straddles(w: Word, x: Word, y: Word) -> bool:
        for k in range(1, len(w)):
            head, tail = w.prefix(k), w.suffix(len(w) - k)
            if len(head) <= len(x) and x.suffix(len(head)) == head:
                if len(tail) <= len(y) and y.prefix(len(tail)) == tail:
                    return True
        return False

    best = 0
    for x in sorted(prefixes):
        for y in sorted(suffixes):
            if not is_reduced_pair(x, y):
                continue
            count = sum(1 for w in words if straddles(w, x, y))
            best = max(best, count)
    return best


@dataclass(frozen=True)
class SigmaIndCertificate:
    """A partition of a symmetric word set into symmetric independent families,
    obtained by properly coloring the quotient overlap graph, or a failure
    diagnosis when no exact coloring was computed."""

    success: bool
    classes: tuple[frozenset[Word], ...]
    chromatic_number: Optional[int]
    note: str


def sigma_ind_certificate(
    V: Iterable[Word], exact_limit: int = DEFAULT_EXACT_LIMIT
) -> SigmaIndCertificate:
    words = sorted(set(V))
    if not words:
        return SigmaIndCertificate(True, (), 0, "empty set")
    bundle = build_overlap_graphs(words)
    quotient = bundle.osg_bar
    assert quotient is not None
    coloring = exact_coloring(quotient, exact_limit)
    if coloring is None:
        return SigmaIndCertificate(
            False,
            (),
            None,
            f"quotient has {len(quotient.vertices)} classes, beyond the exact "
            f"coloring limit {exact_limit}",
        )
    color_count = max(coloring) + 1 if coloring else 0
    classes: list[set[Word]] = [set() for _ in range(color_count)]
    for k, label in enumerate(quotient.vertices):
        classes[coloring[k]].update({label, label.inverse()})

    osg_index = {word: i for i, word in enumerate(bundle.words)}
    for family in classes:
        members = sorted(family)
        for a in members:
            for b in members:
                if a != b and (osg_index[a], osg_index[b]) in bundle.osg.edges:
                    return SigmaIndCertificate(
                        False,
                        (),
                        color_count,
                        f"coloring produced a non-independent class: {a} and {b} overlap",
                    )
    ordered = tuple(
        frozenset(family) for family in sorted(classes, key=lambda f: min(f))
    )
    return SigmaIndCertificate(
        True,
        ordered,
        color_count,
        f"partitioned into {color_count} symmetric independent families",
    )


def bundle_to_dict(bundle: OverlapGraphBundle, exact_limit: int = DEFAULT_EXACT_LIMIT) -> dict:
    """A JSON-ready dictionary with vertices, edges, and metrics for each graph."""

    def graph_dict(graph: Optional[Digraph]) -> Optional[dict]:
        if graph is None:
            return None
        metrics = graph_metrics(graph, exact_limit)
        return {
            "directed": graph.directed,
            "vertices": [str(v) for v in graph.vertices],
            "edges": sorted(
                [str(graph.vertices[i]), str(graph.vertices[j])]
                for i, j in (
                    graph.edges if graph.directed else graph.undirected_pairs()
                )
            ),
            "metrics": {
                "omega": metrics.omega,
                "omega_bounds": [metrics.omega_lower, metrics.omega_upper],
                "chi": metrics.chi,
                "chi_bounds": [metrics.chi_lower, metrics.chi_upper],
                "exact": metrics.exact,
                "longest_path": metrics.lp,
                "longest_path_note": metrics.lp_note,
            },
        }

    return {
        "overlap": graph_dict(bundle.og),
        "subword": graph_dict(bundle.sg),
        "union": graph_dict(bundle.osg),
        "overlap_quotient": graph_dict(bundle.og_bar),
        "subword_quotient": graph_dict(bundle.sg_bar),
        "union_quotient": graph_dict(bundle.osg_bar),
    }
