"""Shadow invariants, comparison verdicts, incidence matrices, certificates."""

import random
from collections import Counter

import pytest

from torell.ellinv import (
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    UNKNOWN,
    compare,
    ell_shadow,
    flip_certificate,
    incidence_matrix,
    mv_ladder,
)
from torell.errors import NotProper, NotSingleFlip, NotSurface, RankMismatch
from torell.fan import fan_isomorphic, walls
from torell.lattice import IntMatrix, determinant

from conftest import single_reversal_pairs


class TestEllShadow:
    def test_projective_line(self, p1):
        s = ell_shadow(p1)
        assert s.rank == 2
        assert len(s.wall_spans) == 1 and s.wall_spans[0].rank == 0
        assert s.det_divisor == ((-1, s.wall_spans[0]),)
        assert s.det_divisor_degree() == -1

    def test_projective_plane(self, p2):
        s = ell_shadow(p2)
        assert s.rank == 3
        assert sorted(c.basis for c in s.wall_spans) == \
            [((0, 1),), ((1, 0),), ((1, 1),)]

    def test_rank_is_top_cone_count(self, corpus_fans):
        for name, fan in corpus_fans.items():
            assert ell_shadow(fan).rank == len(fan.top_cones()), name

    def test_flop_pair_differs_in_one_span(self, corpus_fans):
        sa = ell_shadow(corpus_fans["flop3_a"])
        sb = ell_shadow(corpus_fans["flop3_b"])
        ca, cb = Counter(sa.wall_spans), Counter(sb.wall_spans)
        assert sum((ca - cb).values()) == 1
        assert sum((cb - ca).values()) == 1

    def test_det_divisor_counts_interior_walls(self, corpus_fans):
        for name, fan in corpus_fans.items():
            s = ell_shadow(fan)
            interior = sum(1 for w in walls(fan) if w.interior)
            assert s.det_divisor_degree() == -interior, name

    def test_det_divisor_is_minus_span_multiset(self, corpus_fans):
        # opposite rays give the same line class, so coefficients track
        # multiplicities
        s = ell_shadow(corpus_fans["p1xp1"])
        assert [coeff for coeff, _ in s.det_divisor] == [-2, -2]
        for name, fan in corpus_fans.items():
            s = ell_shadow(fan)
            counts = Counter(s.wall_spans)
            assert dict((cls, -coeff) for coeff, cls in s.det_divisor) == dict(counts)


class TestLadder:
    def test_projective_line(self, p1):
        ladder = mv_ladder(p1)
        assert ladder.terms[0] == ()
        assert [s.span.rank for s in ladder.terms[1]] == [1, 1]
        assert [s.span.rank for s in ladder.terms[2]] == [0]
        assert not ladder.terms[2][0].vanishes_in_codim2

    def test_projective_plane(self, p2):
        ladder = mv_ladder(p2)
        assert len(ladder.terms[2]) == 3
        assert all(s.span.corank == 1 and not s.vanishes_in_codim2
                   for s in ladder.terms[2])
        assert len(ladder.terms[3]) == 1
        assert ladder.terms[3][0].span.corank == 2
        assert ladder.terms[3][0].vanishes_in_codim2

    def test_affine_space_has_single_term(self, corpus_fans):
        for name in ("affine1", "affine2", "affine3"):
            ladder = mv_ladder(corpus_fans[name])
            assert len(ladder.terms) == 2
            assert len(ladder.terms[1]) == 1

    def test_summand_counts_are_binomial(self, p2):
        from math import comb
        ladder = mv_ladder(p2)
        for k, term in enumerate(ladder.terms[1:], start=1):
            assert len(term) == comb(3, k)


class TestCompare:
    def test_reversal_pair_isomorphic(self, corpus_fans):
        a, b = corpus_fans["ray_reversal_a"], corpus_fans["ray_reversal_b"]
        verdict = compare(ell_shadow(a), ell_shadow(b), fans=(a, b))
        assert verdict.outcome == ISOMORPHIC
        assert verdict.witness.kind == "surface-ray-line-bijection"
        pairs = verdict.witness.detail
        assert sorted(p[0] for p in pairs) == sorted(a.rays)
        assert sorted(p[1] for p in pairs) == sorted(b.rays)
        assert fan_isomorphic(a, b) is None

    def test_flop_pair_not_isomorphic(self, corpus_fans):
        a, b = corpus_fans["flop3_a"], corpus_fans["flop3_b"]
        verdict = compare(ell_shadow(a), ell_shadow(b), fans=(a, b))
        assert verdict.outcome == NOT_ISOMORPHIC
        assert verdict.witness.kind == "wall-span-mismatch"
        only_a, only_b = verdict.witness.detail
        assert len(only_a) == 1 and len(only_b) == 1

    def test_threefold_self_compare_unknown(self, corpus_fans):
        a = corpus_fans["flop3_a"]
        verdict = compare(ell_shadow(a), ell_shadow(a), fans=(a, a))
        assert verdict.outcome == UNKNOWN
        # without surface data the necessary conditions alone never conclude
        assert compare(ell_shadow(a), ell_shadow(a)).outcome == UNKNOWN

    def test_rank_mismatch_is_not_isomorphic(self, corpus_fans):
        verdict = compare(ell_shadow(corpus_fans["p2"]),
                          ell_shadow(corpus_fans["p1xp1"]))
        assert verdict.outcome == NOT_ISOMORPHIC
        assert verdict.witness.kind == "rank-mismatch"

    def test_ambient_rank_mismatch_raises(self, corpus_fans, p1):
        with pytest.raises(RankMismatch):
            compare(ell_shadow(p1), ell_shadow(corpus_fans["p2"]))

    def test_symmetric_outcomes(self, corpus_fans):
        fans = list(corpus_fans.values())
        for a in fans:
            for b in fans:
                if a.ambient_rank != b.ambient_rank:
                    continue
                va = compare(ell_shadow(a), ell_shadow(b), fans=(a, b))
                vb = compare(ell_shadow(b), ell_shadow(a), fans=(b, a))
                assert va.outcome == vb.outcome


class TestIncidence:
    def test_projective_plane(self, p2):
        inc = incidence_matrix(p2, 0)
        assert inc.m == 3
        for j in range(3):
            col = inc.matrix.column(j)
            assert sorted(col) == [-1, 0, 1]
            assert sum(col) == 0
        assert inc.ray_order[0] == (1, 0)

    def test_product_surface(self, corpus_fans):
        inc = incidence_matrix(corpus_fans["p1xp1"], 0)
        assert inc.m == 4
        for j in range(4):
            assert sorted(inc.matrix.column(j)) == [-1, 0, 0, 1]

    def test_column_property_random(self):
        rng = random.Random(303)
        for fan, _, _ in single_reversal_pairs(rng, 5):
            inc = incidence_matrix(fan, 0)
            for j in range(inc.m):
                col = inc.matrix.column(j)
                assert sum(col) == 0
                assert sum(1 for x in col if x == 1) == 1
                assert sum(1 for x in col if x == -1) == 1

    def test_ray_order_is_clockwise(self, corpus_fans):
        # consecutive rays of a complete smooth surface satisfy
        # det(r_k, r_{k+1}) = -1 when listed clockwise
        for name in ("p2", "p1xp1", "hirzebruch1", "ray_reversal_a"):
            order = incidence_matrix(corpus_fans[name], 0).ray_order
            for u, v in zip(order, order[1:] + order[:1]):
                assert u[0] * v[1] - u[1] * v[0] == -1

    def test_rejects_non_surfaces(self, corpus_fans, p1):
        with pytest.raises(NotSurface):
            incidence_matrix(corpus_fans["affine3"], 0)
        with pytest.raises(NotSurface):
            incidence_matrix(p1, 0)
        with pytest.raises(NotProper):
            incidence_matrix(corpus_fans["affine2"], 0)


class TestFlipCertificate:
    def test_identity_for_equal_fans(self, p2):
        assert flip_certificate(p2, p2) == IntMatrix.identity(3)

    def test_reversal_pair(self, corpus_fans):
        a, b = corpus_fans["ray_reversal_a"], corpus_fans["ray_reversal_b"]
        cert = flip_certificate(a, b)
        assert abs(determinant(cert)) == 1
        a_inc = incidence_matrix(a, a.rays.index((-1, 0))).matrix
        b_inc = incidence_matrix(b, b.rays.index((1, 0))).matrix
        assert b_inc @ cert == a_inc

    def test_round_trip_composes(self, corpus_fans):
        # A_a = A_b . there and A_b = A_a . back, so back . there fixes A_a.
        a, b = corpus_fans["ray_reversal_a"], corpus_fans["ray_reversal_b"]
        there = flip_certificate(a, b)
        back = flip_certificate(b, a)
        a_inc = incidence_matrix(a, a.rays.index((-1, 0))).matrix
        assert a_inc @ (back @ there) == a_inc
        assert abs(determinant(back @ there)) == 1

    def test_rejects_unrelated_fans(self, corpus_fans):
        with pytest.raises(NotSingleFlip):
            flip_certificate(corpus_fans["p2"], corpus_fans["p1xp1"])

    def test_random_pairs(self):
        rng = random.Random(808)
        pairs = single_reversal_pairs(rng, 6)
        assert len(pairs) == 6
        for f, g, ray in pairs:
            cert = flip_certificate(f, g)
            assert abs(determinant(cert)) == 1
            neg = (-ray[0], -ray[1])
            a_inc = incidence_matrix(f, f.rays.index(ray)).matrix
            b_inc = incidence_matrix(g, g.rays.index(neg)).matrix
            assert b_inc @ cert == a_inc
