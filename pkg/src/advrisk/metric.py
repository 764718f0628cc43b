"""Finite metric spaces, decision regions and the expansion algebra.

Everything in this package runs on an explicit finite point set with a
validated distance matrix.  Points are their indices ``0..n-1``; an optional
label per point keeps grid coordinates readable in reports.

On a finite space the three textbook set expansions (union of closed balls,
closed ``{x : d(x, A) <= eps}``, open ``{x : d(x, A) < eps}``-closure
variants) collapse to a single notion, because infima over finitely many
distances are attained.  The module therefore exposes one :func:`expand` and
its erosion dual :func:`contract`.

Distances compare exactly when the space was built from rational data
(integer grids, rational matrices); spaces with irrational geometry
(Euclidean point clouds) carry an absolute comparison tolerance instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import EmptySpace, NonMetric

Number = Union[int, Fraction, float]

#: Comparison tolerance used for spaces with non-rational distance data.
DEFAULT_FLOAT_TOL = 1e-9


def _is_exact(x: Number) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite point set with an explicit distance matrix.

    ``dist`` must be square, nonnegative, zero on the diagonal, symmetric
    and satisfy the triangle inequality; all four axioms are checked at
    construction.  ``tol`` is the absolute tolerance used by every
    threshold comparison on this space (0 means exact arithmetic).
    """

    dist: tuple
    labels: tuple = ()
    tol: Number = 0

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.dist)
        object.__setattr__(self, "dist", rows)
        n = len(rows)
        if n == 0:
            raise EmptySpace("a metric space needs at least one point")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise NonMetric("shape", (i,), f"row {i} has length {len(row)}, expected {n}")
        tol = self.tol
        for i in range(n):
            if rows[i][i] != 0:
                raise NonMetric("identity", (i, i), f"d({i},{i}) = {rows[i][i]} != 0")
            for j in range(n):
                if rows[i][j] < 0:
                    raise NonMetric("nonnegativity", (i, j), f"d({i},{j}) = {rows[i][j]} < 0")
                if abs(rows[i][j] - rows[j][i]) > tol:
                    raise NonMetric(
                        "symmetry", (i, j), f"d({i},{j}) = {rows[i][j]} != d({j},{i}) = {rows[j][i]}"
                    )
        for k in range(n):
            rk = rows[k]
            for i in range(n):
                dik = rows[i][k]
                ri = rows[i]
                for j in range(n):
                    if ri[j] > dik + rk[j] + tol:
                        raise NonMetric(
                            "triangle",
                            (i, k, j),
                            f"d({i},{j}) = {ri[j]} > d({i},{k}) + d({k},{j}) = {dik + rk[j]}",
                        )
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        else:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
            if len(self.labels) != n:
                raise ValueError("labels length does not match point count")

    @property
    def n(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Number:
        return self.dist[i][j]

    def le(self, a: Number, b: Number) -> bool:
        """``a <= b`` under this space's comparison tolerance."""
        return a <= b + self.tol

    def eq(self, a: Number, b: Number) -> bool:
        return abs(a - b) <= self.tol

    def set_distance(self, i: int, members: Iterable[int]) -> Optional[Number]:
        """min over ``members`` of ``d(i, .)``; None for the empty set."""
        best = None
        row = self.dist[i]
        for j in members:
            if best is None or row[j] < best:
                best = row[j]
        return best

    @property
    def is_exact(self) -> bool:
        return self.tol == 0


@dataclass(frozen=True)
class DecisionRegion:
    """A subset of the space: the points a binary classifier labels 1."""

    space: FiniteMetricSpace
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, "members", members)
        n = self.space.n
        for i in members:
            if not isinstance(i, int) or not 0 <= i < n:
                raise ValueError(f"region member {i!r} out of range 0..{n - 1}")

    @classmethod
    def empty(cls, space: FiniteMetricSpace) -> "DecisionRegion":
        return cls(space, frozenset())

    @classmethod
    def full(cls, space: FiniteMetricSpace) -> "DecisionRegion":
        return cls(space, frozenset(range(space.n)))

    def complement(self) -> "DecisionRegion":
        return DecisionRegion(self.space, frozenset(range(self.space.n)) - self.members)

    def indices(self) -> tuple:
        return tuple(sorted(self.members))

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __len__(self) -> int:
        return len(self.members)


def expand(region: DecisionRegion, eps: Number) -> DecisionRegion:
    """All points within ``eps`` of the region: ``{x : d(x, A) <= eps}``.

    ``expand(A, 0) == A`` and the result always contains ``A``.  The empty
    region expands to itself.
    """
    if eps < 0:
        raise ValueError("expansion radius must be >= 0")
    space = region.space
    members = region.members
    if not members:
        return DecisionRegion.empty(space)
    out = set()
    for x in range(space.n):
        row = space.dist[x]
        for a in members:
            if space.le(row[a], eps):
                out.add(x)
                break
    return DecisionRegion(space, frozenset(out))


def contract(region: DecisionRegion, eps: Number) -> DecisionRegion:
    """Erosion: complement of the expanded complement."""
    return expand(region.complement(), eps).complement()


@dataclass(frozen=True)
class MidpointReport:
    """Outcome of the per-epsilon midpoint completeness scan.

    ``complete`` is true iff every pair at distance <= 2*eps admits a point
    within eps of both endpoints.  Otherwise ``witness`` is the first
    violating pair in lexicographic order and ``radius_achieved`` the best
    max-leg distance any point achieves for that pair.
    """

    complete: bool
    witness: Optional[tuple] = None
    radius_achieved: Optional[Number] = None

    def __post_init__(self):
        if self.complete != (self.witness is None):
            raise ValueError("complete must hold exactly when there is no witness")


def midpoint(space: FiniteMetricSpace, x: int, y: int) -> tuple:
    """Best approximate midpoint: minimizes max(d(x,m), d(m,y)).

    Ties break to the lowest point index.  Returns ``(m, radius)``.
    """
    dx, dy = space.dist[x], space.dist[y]
    best_m, best_r = 0, max(dx[0], dy[0])
    for m in range(1, space.n):
        r = max(dx[m], dy[m])
        if r < best_r:
            best_m, best_r = m, r
    return best_m, best_r


def is_midpoint_complete(space: FiniteMetricSpace, eps: Number) -> MidpointReport:
    """Scan all pairs for the midpoint completeness predicate at ``eps``."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    two_eps = 2 * eps
    for x in range(space.n):
        for y in range(x + 1, space.n):
            if not space.le(space.dist[x][y], two_eps):
                continue
            _, r = midpoint(space, x, y)
            if not space.le(r, eps):
                return MidpointReport(False, (x, y), r)
    return MidpointReport(True)


# ---------------------------------------------------------------------------
# bitmask helpers (used by the brute-force oracles and the check suite)

def ball_masks(space: FiniteMetricSpace, eps: Number) -> list:
    """Per point ``i``, the bitmask of points within ``eps`` of ``i``."""
    masks = []
    for i in range(space.n):
        row = space.dist[i]
        m = 0
        for j in range(space.n):
            if space.le(row[j], eps):
                m |= 1 << j
        masks.append(m)
    return masks


def mask_expand(masks: Sequence[int], amask: int) -> int:
    """Expansion of the region ``amask`` given precomputed ball masks."""
    out = 0
    m = amask
    while m:
        low = m & -m
        out |= masks[low.bit_length() - 1]
        m ^= low
    return out


def expansion_table(space: FiniteMetricSpace, radius: Number) -> list:
    """``table[mask]`` = expansion of the region ``mask`` by ``radius``,
    for every one of the 2^n regions.  Built incrementally; used by the
    exhaustive oracles."""
    masks = ball_masks(space, radius)
    size = 1 << space.n
    table = [0] * size
    for m in range(1, size):
        low = m & -m
        table[m] = table[m ^ low] | masks[low.bit_length() - 1]
    return table


def region_from_mask(space: FiniteMetricSpace, mask: int) -> DecisionRegion:
    return DecisionRegion(space, frozenset(i for i in range(space.n) if mask >> i & 1))


def mask_from_region(region: DecisionRegion) -> int:
    m = 0
    for i in region.members:
        m |= 1 << i
    return m


def mask_lex_key(mask: int, n: int) -> tuple:
    """Sorted member tuple of a region mask; the tie-break order for
    'lexicographically least' argmax/argmin reporting."""
    return tuple(i for i in range(n) if mask >> i & 1)


# ---------------------------------------------------------------------------
# space builders

def grid_1d(n: int) -> FiniteMetricSpace:
    """Integer grid ``{0, .., n-1}`` with ``d(i, j) = |i - j|``."""
    if n < 1:
        raise EmptySpace("grid needs at least one point")
    dist = tuple(tuple(abs(i - j) for j in range(n)) for i in range(n))
    return FiniteMetricSpace(dist, labels=tuple(str(i) for i in range(n)), tol=0)


def grid_2d(width: int, height: int, norm: str = "l1") -> FiniteMetricSpace:
    """``width x height`` integer lattice under l1, linf or l2 distance.

    l1 and linf grids are exact; l2 distances are irrational, so the space
    carries the default float tolerance.
    """
    if width < 1 or height < 1:
        raise EmptySpace("grid needs at least one point")
    if norm not in ("l1", "linf", "l2"):
        raise ValueError(f"unknown grid norm {norm!r}")
    pts = [(x, y) for x in range(width) for y in range(height)]
    n = len(pts)
    rows = []
    for ax, ay in pts:
        row = []
        for bx, by in pts:
            dx, dy = abs(ax - bx), abs(ay - by)
            if norm == "l1":
                row.append(dx + dy)
            elif norm == "linf":
                row.append(max(dx, dy))
            else:
                row.append(math.sqrt(dx * dx + dy * dy))
        rows.append(tuple(row))
    tol = 0 if norm in ("l1", "linf") else DEFAULT_FLOAT_TOL
    labels = tuple(f"({x},{y})" for x, y in pts)
    return FiniteMetricSpace(tuple(rows), labels=labels, tol=tol)


def space_from_matrix(dist, labels=None, tol: Optional[Number] = None) -> FiniteMetricSpace:
    """Validate an explicit matrix into a space.

    When ``tol`` is omitted it defaults to 0 when every entry is an
    int/Fraction and to :data:`DEFAULT_FLOAT_TOL` otherwise.
    """
    rows = tuple(tuple(row) for row in dist)
    if tol is None:
        exact = all(_is_exact(v) for row in rows for v in row)
        tol = 0 if exact else DEFAULT_FLOAT_TOL
    return FiniteMetricSpace(rows, labels=tuple(labels) if labels else (), tol=tol)


def space_from_points(coords, p: Union[Number, str] = 2, tol: Optional[Number] = None) -> FiniteMetricSpace:
    """Point cloud in R^d under a p-norm (``p`` >= 1 or ``"inf"``).

    p = 1 and p = "inf" with rational coordinates stay exact; any other p
    goes through floats.
    """
    pts = [tuple(c) for c in coords]
    if not pts:
        raise EmptySpace("point cloud is empty")
    dim = len(pts[0])
    for c in pts:
        if len(c) != dim:
            raise ValueError("all points must share one dimension")
    is_inf = p == "inf" or p == math.inf
    if not is_inf and (not isinstance(p, (int, Fraction, float)) or p < 1):
        raise ValueError("p must be >= 1 or 'inf'")
    exactable = (is_inf or p == 1) and all(_is_exact(v) for c in pts for v in c)

    def d(a, b):
        diffs = [abs(u - v) for u, v in zip(a, b)]
        if is_inf:
            return max(diffs)
        if p == 1:
            return sum(diffs)
        return sum(float(x) ** p for x in diffs) ** (1.0 / p)

    rows = tuple(tuple(d(a, b) for b in pts) for a in pts)
    if tol is None:
        tol = 0 if exactable else DEFAULT_FLOAT_TOL
    labels = tuple(str(c) for c in pts)
    return FiniteMetricSpace(rows, labels=labels, tol=tol)


def build_space(spec: Mapping, tol: Optional[Number] = None) -> FiniteMetricSpace:
    """Build a space from a declarative spec (the CLI/service wire format).

    Kinds: ``grid1d`` (n), ``grid2d`` (width, height, norm), ``matrix``
    (dist, labels), ``points`` (coords, p).
    """
    kind = spec.get("kind")
    if kind == "grid1d":
        return grid_1d(int(spec["n"]))
    if kind == "grid2d":
        return grid_2d(int(spec["width"]), int(spec["height"]), spec.get("norm", "l1"))
    if kind == "matrix":
        return space_from_matrix(spec["dist"], labels=spec.get("labels"), tol=tol)
    if kind == "points":
        return space_from_points(spec["coords"], p=spec.get("p", 2), tol=tol)
    raise ValueError(f"unknown space kind {kind!r}")
