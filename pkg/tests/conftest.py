"""Shared fixtures: corpus access, random surface fans, fan shuffling."""

from __future__ import annotations

import random

import pytest

from torell.errors import TorellError
from torell.fan import Fan, validate
from torell.fan_io import complete_surface_fan, corpus_names, load_corpus_fan

CORPUS = (
    "affine1", "affine2", "affine3",
    "p1", "p2", "p1xp1", "hirzebruch1",
    "ray_reversal_a", "ray_reversal_b",
    "flop3_a", "flop3_b",
)


@pytest.fixture(scope="session")
def corpus_fans() -> dict[str, Fan]:
    return {name: load_corpus_fan(name) for name in CORPUS}


@pytest.fixture(scope="session")
def p1(corpus_fans):
    return corpus_fans["p1"]


@pytest.fixture(scope="session")
def p2(corpus_fans):
    return corpus_fans["p2"]


def test_corpus_is_complete():
    assert set(CORPUS) <= set(corpus_names())


def shuffled_fan(fan: Fan, rng: random.Random) -> Fan:
    """The same fan with rays relabelled and cone list reordered."""
    perm = list(range(len(fan.rays)))
    rng.shuffle(perm)
    new_rays = [None] * len(fan.rays)
    for old, new in enumerate(perm):
        new_rays[new] = fan.rays[old]
    cones = [tuple(sorted(perm[i] for i in cone)) for cone in fan.maximal_cones()]
    rng.shuffle(cones)
    return Fan.from_cones(fan.ambient_rank, new_rays, cones)


def random_blowup_rays(rng: random.Random, steps: int) -> list[tuple[int, int]]:
    """Rays of a random smooth complete surface fan.

    Starting from one of the minimal smooth complete surfaces, repeatedly
    insert the sum of two adjacent rays (a toric blow-up), which preserves
    smoothness and completeness.
    """
    bases = [
        [(1, 0), (0, 1), (-1, -1)],
        [(1, 0), (0, 1), (-1, 0), (0, -1)],
        [(1, 0), (0, 1), (-1, 1), (0, -1)],
        [(1, 0), (0, 1), (-1, 2), (0, -1)],
    ]
    rays = list(rng.choice(bases))
    for _ in range(steps):
        fan = complete_surface_fan(rays)
        cone = rng.choice(fan.top_cones())
        u, v = (fan.rays[i] for i in cone)
        rays.append((u[0] + v[0], u[1] + v[1]))
    return rays


def single_reversal_pairs(rng: random.Random, want: int,
                          max_tries: int = 400) -> list[tuple[Fan, Fan, tuple]]:
    """Random pairs of proper smooth surfaces differing by one reversed ray."""
    pairs = []
    tries = 0
    while len(pairs) < want and tries < max_tries:
        tries += 1
        rays = random_blowup_rays(rng, rng.randint(1, 4))
        ray_set = set(rays)
        try:
            fan = complete_surface_fan(rays)
        except TorellError:
            continue
        if not validate(fan).proper:
            continue
        for idx, ray in enumerate(rays):
            neg = (-ray[0], -ray[1])
            if neg in ray_set:
                continue
            candidate = list(rays)
            candidate[idx] = neg
            try:
                flipped = complete_surface_fan(candidate)
            except TorellError:
                continue
            report = validate(flipped)
            if report.smooth and report.good and report.proper:
                pairs.append((fan, flipped, ray))
                break
    return pairs
