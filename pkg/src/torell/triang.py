"""Lattice simplices, unimodular triangulations, flips, cone fans.

The fan of an affine quotient singularity is the cone over a lattice
simplex sitting at height one; unimodular triangulations of that simplex
are exactly the crepant resolutions, and flipping a diagonal of a unit
quadrilateral exchanges two of them while keeping them derived equivalent.
A certificate records the common simplex together with a replayable flip
path between two triangulations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    IllegalFlip,
    NotDim2,
    NotInSL,
    NotUnimodular,
)
from .fan import Fan
from .lattice import IntMatrix, _hnf_transform, determinant

Point = tuple


def _orient(p: Point, q: Point, r: Point) -> int:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


@dataclass(frozen=True)
class LatticeSimplex:
    """A lattice simplex with its lattice points enumerated.

    Coordinates live in the height-one hyperplane of the resolved lattice,
    identified with Z^dim; the cone construction reinstates the height.
    """

    dim: int
    vertices: tuple[Point, ...]
    points: tuple[Point, ...]          # all lattice points, sorted
    boundary_points: tuple[Point, ...]
    interior_points: tuple[Point, ...]

    @classmethod
    def from_vertices(cls, vertices: Sequence[Sequence[int]]) -> "LatticeSimplex":
        vertices = tuple(tuple(int(x) for x in v) for v in vertices)
        if not vertices:
            raise DimensionMismatch("a simplex needs vertices")
        dim = len(vertices[0])
        if len(vertices) != dim + 1 or any(len(v) != dim for v in vertices):
            raise DimensionMismatch("a simplex in Z^d has exactly d+1 vertices")
        edges = IntMatrix.from_rows(
            [tuple(v[i] - vertices[0][i] for i in range(dim)) for v in vertices[1:]])
        if determinant(edges) == 0:
            raise DimensionMismatch("simplex vertices are affinely dependent")
        points, boundary, interior = _enumerate_points(vertices, dim)
        return cls(dim, tuple(sorted(vertices)), points, boundary, interior)

    def normalized_volume(self) -> int:
        base = self.vertices[0]
        edges = IntMatrix.from_rows(
            [tuple(v[i] - base[i] for i in range(self.dim)) for v in self.vertices[1:]])
        return abs(determinant(edges))

    def point_index(self, p: Sequence[int]) -> int:
        return self.points.index(tuple(p))


def _enumerate_points(vertices, dim):
    lows = [min(v[i] for v in vertices) for i in range(dim)]
    highs = [max(v[i] for v in vertices) for i in range(dim)]
    base = vertices[0]
    cols = [[Fraction(v[i] - base[i]) for v in vertices[1:]] for i in range(dim)]
    points, boundary, interior = [], [], []
    for candidate in _box(lows, highs):
        rhs = [Fraction(candidate[i] - base[i]) for i in range(dim)]
        lam = _solve_fractions(cols, rhs)
        coords = [Fraction(1) - sum(lam)] + lam
        if all(c >= 0 for c in coords):
            p = tuple(candidate)
            points.append(p)
            (boundary if any(c == 0 for c in coords) else interior).append(p)
    return tuple(sorted(points)), tuple(sorted(boundary)), tuple(sorted(interior))


def _box(lows, highs):
    if not lows:
        yield ()
        return
    for head in range(lows[0], highs[0] + 1):
        for tail in _box(lows[1:], highs[1:]):
            yield (head,) + tail


def _solve_fractions(rows, rhs):
    """Solve the square rational system given by rows (list of lists)."""
    n = len(rows)
    a = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        scale = a[col][col]
        a[col] = [x / scale for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


@dataclass(frozen=True)
class Triangulation:
    """A unimodular triangulation of a lattice simplex using all its points."""

    simplex: LatticeSimplex
    cells: tuple[tuple[int, ...], ...]   # sorted point-index tuples

    def __post_init__(self):
        dim = self.simplex.dim
        pts = self.simplex.points
        used = set()
        volume = 0
        for cell in self.cells:
            if len(cell) != dim + 1 or tuple(sorted(cell)) != cell:
                raise NotUnimodular(f"cell {cell} is not a sorted (dim+1)-tuple")
            base = pts[cell[0]]
            edges = IntMatrix.from_rows(
                [tuple(pts[i][k] - base[k] for k in range(dim)) for i in cell[1:]])
            if abs(determinant(edges)) != 1:
                raise NotUnimodular(f"cell {cell} has normalized volume != 1")
            used.update(cell)
            volume += 1
        if volume != self.simplex.normalized_volume():
            raise NotUnimodular("cells do not fill the simplex")
        if used != set(range(len(pts))):
            raise NotUnimodular("triangulation must use every lattice point")
        if dim == 2:
            tris = [tuple(pts[i] for i in cell) for cell in self.cells]
            for t1, t2 in combinations(tris, 2):
                if _triangles_overlap(t1, t2):
                    raise NotUnimodular("cells overlap")
        elif dim == 1:
            segs = sorted((pts[c[0]][0], pts[c[1]][0]) for c in self.cells)
            for (a1, b1), (a2, _) in zip(segs, segs[1:]):
                if b1 != a2:
                    raise NotUnimodular("cells overlap")

    def interior_edges(self) -> dict[tuple[int, int], tuple]:
        """Facets shared by exactly two cells, with the sharing cells."""
        facets: dict[tuple, list] = {}
        for cell in self.cells:
            for facet in combinations(cell, len(cell) - 1):
                facets.setdefault(facet, []).append(cell)
        return {f: tuple(cs) for f, cs in facets.items() if len(cs) == 2}


def _ccw(tri):
    return tri if _orient(*tri) > 0 else (tri[0], tri[2], tri[1])


def _triangles_overlap(t1, t2) -> bool:
    """Exact test for positive-area intersection of two triangles."""
    t1, t2 = _ccw(t1), _ccw(t2)

    def separates(tri, other):
        for k in range(3):
            p, q = tri[k], tri[(k + 1) % 3]
            if all(_orient(p, q, x) <= 0 for x in other):
                return True
        return False

    return not (separates(t1, t2) or separates(t2, t1))


@dataclass(frozen=True)
class FlipMove:
    """Exchange the diagonal of the unit quadrilateral formed by two cells."""

    cells_before: tuple[tuple[int, ...], tuple[int, ...]]
    cells_after: tuple[tuple[int, ...], tuple[int, ...]]
    removed_edge: tuple[int, int]
    added_edge: tuple[int, int]


def flips(t: Triangulation) -> tuple[FlipMove, ...]:
    """All legal diagonal flips preserving unimodularity."""
    if t.simplex.dim != 2:
        raise NotDim2("flips are implemented for two-dimensional simplices")
    pts = t.simplex.points
    moves = []
    for edge, (c1, c2) in sorted(t.interior_edges().items()):
        p, q = edge
        (r,) = set(c1) - set(edge)
        (s,) = set(c2) - set(edge)
        # The union is a strictly convex quadrilateral exactly when p and q
        # lie on opposite sides of the line through the other diagonal.
        if _orient(pts[r], pts[s], pts[p]) * _orient(pts[r], pts[s], pts[q]) >= 0:
            continue
        new1 = tuple(sorted((r, s, p)))
        new2 = tuple(sorted((r, s, q)))
        moves.append(FlipMove(
            cells_before=tuple(sorted((c1, c2))),
            cells_after=tuple(sorted((new1, new2))),
            removed_edge=edge,
            added_edge=tuple(sorted((r, s))),
        ))
    return tuple(moves)


@dataclass(frozen=True)
class DerivedEquivalenceCertificate:
    """Two triangulations of one simplex plus a replayable flip path.

    The shared simplex alone carries the equivalence; the flip path is kept
    as human-checkable provenance and is verified on construction.
    """

    source: Triangulation
    target: Triangulation
    moves: tuple[FlipMove, ...]

    def __post_init__(self):
        if self.source.simplex != self.target.simplex:
            raise IllegalFlip("certificate endpoints live on different simplices")
        cells = set(self.source.cells)
        for move in self.moves:
            if not set(move.cells_before) <= cells:
                raise IllegalFlip("flip path does not replay on the source")
            cells = (cells - set(move.cells_before)) | set(move.cells_after)
        if cells != set(self.target.cells):
            raise IllegalFlip("flip path does not reach the target")


def apply_flip(t: Triangulation, move: FlipMove):
    """The flipped triangulation plus the certificate pairing it with t."""
    if move not in flips(t):
        raise IllegalFlip(f"move removing edge {move.removed_edge} does not apply")
    cells = (set(t.cells) - set(move.cells_before)) | set(move.cells_after)
    flipped = Triangulation(t.simplex, tuple(sorted(cells)))
    return flipped, DerivedEquivalenceCertificate(source=t, target=flipped,
                                                  moves=(move,))


def compose_certificates(c1: DerivedEquivalenceCertificate,
                         c2: DerivedEquivalenceCertificate) -> DerivedEquivalenceCertificate:
    if c1.target != c2.source:
        raise IllegalFlip("certificates do not compose")
    return DerivedEquivalenceCertificate(source=c1.source, target=c2.target,
                                         moves=c1.moves + c2.moves)


def cone_fan(t: Triangulation) -> Fan:
    """The smooth good fan whose rays are the simplex points at height one."""
    rays = [p + (1,) for p in t.simplex.points]
    return Fan.from_cones(t.simplex.dim + 1, rays, t.cells)


def quotient_simplex(generators: Iterable[Sequence], rank: Optional[int] = None) -> LatticeSimplex:
    """The height-one simplex of the abelian quotient of affine space.

    Generators are weight vectors modulo one for a finite subgroup of the
    torus; their coordinate sums must be integers (the special-linear
    condition), which makes the coordinate-sum height integral on the
    refined lattice.  The simplex spanned by the images of the standard
    basis vectors is returned in coordinates for the height-zero sublattice.
    """
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if rank is None:
        if not gens:
            raise DimensionMismatch("rank is required for the trivial group")
        rank = len(gens[0])
    n = rank
    if n < 2:
        raise DimensionMismatch("the quotient construction needs rank >= 2")
    if any(len(g) != n for g in gens):
        raise DimensionMismatch("generator weight vectors of unequal rank")
    for g in gens:
        if sum(g).denominator != 1:
            raise NotInSL(f"weights {g} do not sum to an integer")
    denom = lcm(1, *(x.denominator for g in gens for x in g)) if gens else 1
    rows = [[denom if i == j else 0 for j in range(n)] for i in range(n)]
    rows += [[int(x * denom) for x in g] for g in gens]
    h, _, pivots = _hnf_transform(rows, n)
    assert len(pivots) == n
    basis = [tuple(Fraction(x, denom) for x in h[i]) for i in range(n)]
    heights = [sum(b) for b in basis]
    assert all(x.denominator == 1 for x in heights)
    transform = _height_normalizer([int(x) for x in heights])
    new_basis = [tuple(sum(transform[j][k] * basis[j][i] for j in range(n))
                       for i in range(n))
                 for k in range(n)]
    cols = [[new_basis[k][i] for k in range(n)] for i in range(n)]
    vertices = []
    for i in range(n):
        coords = _solve_fractions(cols, [Fraction(1 if j == i else 0) for j in range(n)])
        assert all(c.denominator == 1 for c in coords) and coords[-1] == 1
        vertices.append(tuple(int(c) for c in coords[:-1]))
    # Normalize the translation freedom: put the componentwise minimum at 0.
    lows = [min(v[i] for v in vertices) for i in range(n - 1)]
    vertices = [tuple(v[i] - lows[i] for i in range(n - 1)) for v in vertices]
    return LatticeSimplex.from_vertices(vertices)


def simplices_equivalent(s1: LatticeSimplex, s2: LatticeSimplex) -> bool:
    """True when an integral-affine unimodular map carries one simplex,
    with all its lattice points, onto the other."""
    from itertools import permutations

    if s1.dim != s2.dim or len(s1.points) != len(s2.points):
        return False
    d = s1.dim
    v1 = s1.vertices
    base1 = v1[0]
    e1_cols = [[Fraction(v1[j + 1][i] - base1[i]) for j in range(d)] for i in range(d)]
    for perm in permutations(range(d + 1)):
        v2 = [s2.vertices[i] for i in perm]
        base2 = v2[0]
        rows_a = []
        integral = True
        for i in range(d):
            rhs = [Fraction(v2[k + 1][i] - base2[i]) for k in range(d)]
            cols_t = [[e1_cols[j][k] for j in range(d)] for k in range(d)]
            sol = _solve_fractions(cols_t, rhs)
            if any(x.denominator != 1 for x in sol):
                integral = False
                break
            rows_a.append([int(x) for x in sol])
        if not integral:
            continue
        if abs(determinant(IntMatrix.from_rows(rows_a))) != 1:
            continue

        def image(p):
            return tuple(sum(rows_a[i][j] * (p[j] - base1[j]) for j in range(d)) + base2[i]
                         for i in range(d))

        if sorted(image(p) for p in s1.points) == list(s2.points):
            return True
    return False


def _height_normalizer(heights: list[int]) -> list[list[int]]:
    """Unimodular U (as U[j][k]) with sum-row . U = (0, ..., 0, 1)."""
    n = len(heights)
    h, u, pivots = _hnf_transform([[x] for x in heights], 1)
    assert pivots == [0] and h[0][0] == 1
    # u rows combine the heights: row 0 reaches gcd 1, the rest reach 0.
    # Columns of the result are the new basis coefficient vectors, with the
    # gcd row moved to the last position.
    order = list(range(1, n)) + [0]
    return [[u[order[k]][j] for k in range(n)] for j in range(n)]


def unimodular_triangulations(simplex: LatticeSimplex, limit: int = 10000) -> tuple[Triangulation, ...]:
    """Exhaustively enumerate unimodular triangulations of a small simplex."""
    if simplex.dim == 1:
        order = [simplex.point_index(p) for p in sorted(simplex.points)]
        cells = tuple(tuple(sorted((order[i], order[i + 1])))
                      for i in range(len(order) - 1))
        return (Triangulation(simplex, tuple(sorted(cells))),)
    if simplex.dim != 2:
        raise NotDim2("enumeration is implemented for dimensions 1 and 2")
    if len(simplex.points) > 12:
        raise DimensionMismatch("enumeration is limited to small simplices")
    pts = simplex.points
    verts = list(simplex.vertices)
    if _orient(*verts) < 0:
        verts[1], verts[2] = verts[2], verts[1]
    pending0 = set()
    for a, b in ((0, 1), (1, 2), (2, 0)):
        va, vb = verts[a], verts[b]
        on_side = [p for p in pts
                   if _orient(va, vb, p) == 0
                   and min(va[0], vb[0]) <= p[0] <= max(va[0], vb[0])
                   and min(va[1], vb[1]) <= p[1] <= max(va[1], vb[1])]
        on_side.sort(key=lambda p: ((p[0] - va[0]) ** 2 + (p[1] - va[1]) ** 2))
        for p, q in zip(on_side, on_side[1:]):
            pending0.add((simplex.point_index(p), simplex.point_index(q)))
    results: list[Triangulation] = []

    def search(pending, placed):
        if len(results) >= limit:
            return
        if not pending:
            results.append(Triangulation(simplex, tuple(sorted(placed))))
            return
        a, b = min(pending)
        pa, pb = pts[a], pts[b]
        for w in range(len(pts)):
            if w in (a, b):
                continue
            pw = pts[w]
            if _orient(pa, pb, pw) != 1:
                continue
            tri = (pa, pb, pw)
            if any(_triangles_overlap(tri, old) for old in placed_tris):
                continue
            new_pending = set(pending)
            new_pending.discard((a, b))
            ok = True
            for e in ((b, w), (w, a)):
                if e in new_pending:
                    new_pending.discard(e)
                else:
                    rev = (e[1], e[0])
                    assert rev not in new_pending
                    new_pending.add(rev)
            placed.append(tuple(sorted((a, b, w))))
            placed_tris.append(tri)
            search(new_pending, placed)
            placed.pop()
            placed_tris.pop()

    placed_tris: list = []
    search(pending0, [])
    return tuple(sorted(results, key=lambda t: t.cells))


# --- built-in quotient example --------------------------------------------

def mu2_kernel_generators() -> tuple[tuple[Fraction, ...], ...]:
    """Weights of the rank-two two-torsion subgroup with trivial product."""
    half = Fraction(1, 2)
    return ((half, half, Fraction(0)), (half, Fraction(0), half))


def antidiagonal_generators(order: int) -> tuple[tuple[Fraction, ...], ...]:
    """Weights of the cyclic group acting with opposite characters on the plane."""
    return ((Fraction(1, order), Fraction(order - 1, order)),)


def mu2_kernel_simplex() -> LatticeSimplex:
    """The quotient triangle in standard coordinates: side-two right triangle."""
    return LatticeSimplex.from_vertices([(0, 0), (2, 0), (0, 2)])


def mu2_kernel_triangulations() -> tuple[Triangulation, Triangulation]:
    """The two flop-related triangulations of the quotient triangle.

    The first keeps the medial triangle; flipping the medial edge between
    (0,1) and (1,1) to the diagonal between (1,0) and (0,2) gives the
    second.
    """
    s = mu2_kernel_simplex()
    idx = s.point_index
    p00, p01, p02 = idx((0, 0)), idx((0, 1)), idx((0, 2))
    p10, p11, p20 = idx((1, 0)), idx((1, 1)), idx((2, 0))
    medial = Triangulation(s, tuple(sorted([
        tuple(sorted((p00, p10, p01))),
        tuple(sorted((p01, p10, p11))),
        tuple(sorted((p01, p11, p02))),
        tuple(sorted((p10, p20, p11))),
    ])))
    flipped = Triangulation(s, tuple(sorted([
        tuple(sorted((p00, p10, p01))),
        tuple(sorted((p01, p10, p02))),
        tuple(sorted((p10, p11, p02))),
        tuple(sorted((p10, p20, p11))),
    ])))
    return medial, flipped


def flip_aliases(t: Triangulation) -> dict[str, FlipMove]:
    """Colour names for the flips of the built-in quotient triangle."""
    s = mu2_kernel_simplex()
    if t.simplex != s:
        return {}
    green = (s.point_index((0, 1)), s.point_index((1, 1)))
    red = (s.point_index((1, 0)), s.point_index((0, 2)))
    out = {}
    for move in flips(t):
        if move.removed_edge == tuple(sorted(green)):
            out["green"] = move
        elif move.removed_edge == tuple(sorted(red)):
            out["red"] = move
    return out
