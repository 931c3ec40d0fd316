"""Fans of toric varieties: validation, walls, chart bases, isomorphism.

A fan is stored as primitive ray generators plus the set of all its cones,
each cone a sorted tuple of ray indices (the zero cone is the empty tuple).
Fans are simplicial by construction and immutable after validation; all
queries are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .errors import MalformedFan, NotGood, NotTopCone, NotUnimodular
from .lattice import (
    IntMatrix,
    SublatticeClass,
    integer_rank,
    inverse_unimodular,
    is_primitive,
    is_unimodular_basis,
    saturate,
)

Cone = tuple  # sorted tuple of ray indices


def _normalize_cone(cone: Sequence[int], nrays: int) -> Cone:
    cone = tuple(sorted(int(i) for i in cone))
    if len(set(cone)) != len(cone):
        raise MalformedFan(f"repeated ray index in cone {cone}")
    if cone and (cone[0] < 0 or cone[-1] >= nrays):
        raise MalformedFan(f"ray index out of range in cone {cone}")
    return cone


@dataclass(frozen=True)
class Fan:
    """A simplicial fan in Z^ambient_rank, closed under taking faces."""

    ambient_rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: frozenset[Cone]

    def __post_init__(self):
        n = self.ambient_rank
        if n < 1:
            raise MalformedFan("ambient rank must be at least 1")
        seen = set()
        for ray in self.rays:
            if len(ray) != n:
                raise MalformedFan(f"ray {ray} does not live in Z^{n}")
            if not any(ray):
                raise MalformedFan("zero vector is not a ray")
            if not is_primitive(ray):
                raise MalformedFan(f"ray {ray} is not primitive")
            if ray in seen:
                raise MalformedFan(f"repeated ray {ray}")
            seen.add(ray)
        if () not in self.cones:
            raise MalformedFan("the zero cone is missing")
        used = set()
        for cone in self.cones:
            if _normalize_cone(cone, len(self.rays)) != cone:
                raise MalformedFan(f"cone {cone} is not a sorted index tuple")
            if len(cone) > n:
                raise MalformedFan(f"cone {cone} has too many rays")
            used.update(cone)
            for k in range(len(cone)):
                for face in combinations(cone, k):
                    if face not in self.cones:
                        raise MalformedFan(f"face {face} of {cone} is missing")
            vectors = [self.rays[i] for i in cone]
            if integer_rank(vectors, n) != len(cone):
                raise MalformedFan(f"rays of cone {cone} are linearly dependent")
        if used != set(range(len(self.rays))):
            raise MalformedFan("some listed ray appears in no cone")

    @classmethod
    def from_cones(cls, ambient_rank: int, rays: Iterable[Sequence[int]],
                   cones: Iterable[Sequence[int]]) -> "Fan":
        """Build a fan from generating cones; faces are completed."""
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        closed = {()}
        for cone in cones:
            cone = _normalize_cone(cone, len(rays))
            for k in range(len(cone) + 1):
                closed.update(combinations(cone, k))
        return cls(ambient_rank, rays, frozenset(closed))

    # -- queries ----------------------------------------------------------

    def cones_of_dim(self, d: int) -> tuple[Cone, ...]:
        return tuple(sorted(c for c in self.cones if len(c) == d))

    def top_cones(self) -> tuple[Cone, ...]:
        return self.cones_of_dim(self.ambient_rank)

    def maximal_cones(self) -> tuple[Cone, ...]:
        sets = {c: set(c) for c in self.cones}
        return tuple(sorted(
            c for c in self.cones
            if not any(c != d and sets[c] < sets[d] for d in self.cones)))

    def ray_matrix(self, cone: Cone) -> IntMatrix:
        """Columns are the cone's ray generators in sorted index order."""
        return IntMatrix.from_columns([self.rays[i] for i in cone])

    def is_smooth(self) -> bool:
        return all(is_unimodular_basis([self.rays[i] for i in c])
                   for c in self.top_cones())

    def is_good(self) -> bool:
        tops = [set(c) for c in self.top_cones()]
        if not self.is_smooth():
            return False
        return all(any(set(c) <= t for t in tops) for c in self.cones)

    def is_proper(self) -> bool:
        """True when the fan's support is all of R^n.

        For a valid fan this is equivalent to every (n-1)-dimensional cone
        lying on exactly two top-dimensional cones: a wall seen by only one
        top cone is a facet of the support's boundary.
        """
        tops = self.top_cones()
        if not tops:
            return False
        top_sets = [set(c) for c in tops]
        for wall in self.cones_of_dim(self.ambient_rank - 1):
            if sum(1 for t in top_sets if set(wall) <= t) != 2:
                return False
        return True


@dataclass(frozen=True)
class FanReport:
    smooth: bool
    good: bool
    proper: bool


@dataclass(frozen=True)
class Wall:
    """An (n-1)-dimensional cone with its neighbouring top cones."""

    cone: Cone
    upper: tuple[Cone, ...]
    span: SublatticeClass

    @property
    def interior(self) -> bool:
        return len(self.upper) == 2


@dataclass(frozen=True)
class ChartBasis:
    """The lattice automorphism taking a top cone to the first quadrant.

    The matrix sends the cone's rays, in sorted index order, to the
    standard basis vectors, and so carries the wall omitting the j-th ray
    onto the j-th coordinate hyperplane.
    """

    top_cone: Cone
    matrix: IntMatrix


def validate(fan: Fan) -> FanReport:
    """Classify a structurally valid fan as smooth / good / proper."""
    smooth = fan.is_smooth()
    return FanReport(smooth=smooth, good=fan.is_good(), proper=fan.is_proper())


def walls(fan: Fan) -> tuple[Wall, ...]:
    """All (n-1)-dimensional cones with their containing top cones and spans."""
    if not fan.is_good():
        raise NotGood("walls are only enumerated for good fans")
    tops = fan.top_cones()
    out = []
    for cone in fan.cones_of_dim(fan.ambient_rank - 1):
        upper = tuple(t for t in tops if set(cone) <= set(t))
        if len(upper) > 2:
            raise MalformedFan(f"wall {cone} lies on {len(upper)} top cones")
        span = saturate([fan.rays[i] for i in cone], fan.ambient_rank)
        out.append(Wall(cone=cone, upper=upper, span=span))
    return tuple(out)


def chart(fan: Fan, top_cone: Sequence[int]) -> ChartBasis:
    """The unique chart automorphism for a top cone of a smooth fan."""
    cone = tuple(sorted(top_cone))
    if cone not in fan.cones or len(cone) != fan.ambient_rank:
        raise NotTopCone(f"{cone} is not a top-dimensional cone of the fan")
    v = fan.ray_matrix(cone)
    if not v.is_unimodular():
        raise NotUnimodular(f"rays of {cone} are not a lattice basis")
    return ChartBasis(top_cone=cone, matrix=inverse_unimodular(v))


def fan_isomorphic(f: Fan, g: Fan) -> Optional[IntMatrix]:
    """A unimodular matrix carrying f onto g (rays to rays, cones to cones).

    The search maps the ray basis of one chart of f to every ordered ray
    tuple of a top cone of g; that exhausts all candidate lattice maps.
    Returns None when no isomorphism exists.
    """
    for fan in (f, g):
        if not fan.is_good():
            raise NotGood("fan isomorphism search requires good fans")
    if f.ambient_rank != g.ambient_rank:
        return None
    if len(f.rays) != len(g.rays) or len(f.cones) != len(g.cones):
        return None
    if len(f.top_cones()) != len(g.top_cones()):
        return None
    sigma0 = f.top_cones()[0]
    vinv = inverse_unimodular(f.ray_matrix(sigma0))
    ray_index = {ray: i for i, ray in enumerate(g.rays)}
    for tau in g.top_cones():
        for image in permutations(tau):
            w = IntMatrix.from_columns([g.rays[i] for i in image])
            m = w @ vinv
            mapping = {}
            for i, ray in enumerate(f.rays):
                j = ray_index.get(m.apply(ray))
                if j is None:
                    break
                mapping[i] = j
            else:
                mapped = {tuple(sorted(mapping[i] for i in cone)) for cone in f.cones}
                if mapped == set(g.cones):
                    return m
    return None
