"""Quotient simplices, triangulations, flips, certificates, cone fans."""

from fractions import Fraction

import pytest

from torell.ellinv import NOT_ISOMORPHIC, compare, ell_shadow
from torell.errors import IllegalFlip, NotDim2, NotInSL, NotUnimodular
from torell.fan import validate
from torell.triang import (
    LatticeSimplex,
    Triangulation,
    antidiagonal_generators,
    apply_flip,
    compose_certificates,
    cone_fan,
    flip_aliases,
    flips,
    mu2_kernel_generators,
    mu2_kernel_simplex,
    mu2_kernel_triangulations,
    quotient_simplex,
    simplices_equivalent,
    unimodular_triangulations,
)


class TestQuotientSimplex:
    def test_trivial_group_is_unit_simplex(self):
        s = quotient_simplex([], rank=2)
        assert s.vertices == ((0,), (1,))
        assert s.points == ((0,), (1,))

    def test_antidiagonal_intervals(self):
        for order in (2, 3, 4, 5):
            s = quotient_simplex(antidiagonal_generators(order))
            assert s.vertices == ((0,), (order,))
            assert len(s.points) == order + 1

    def test_two_torsion_kernel_triangle(self):
        s = quotient_simplex(mu2_kernel_generators())
        assert len(s.points) == 6
        assert len(s.boundary_points) == 6 and not s.interior_points
        assert s == mu2_kernel_simplex()
        assert simplices_equivalent(s, mu2_kernel_simplex())

    def test_non_special_linear_rejected(self):
        with pytest.raises(NotInSL):
            quotient_simplex([(Fraction(1, 2), Fraction(1, 3))])

    def test_string_weights_accepted(self):
        s = quotient_simplex([("1/2", "1/2", "0"), ("1/2", "0", "1/2")])
        assert s == mu2_kernel_simplex()


class TestTriangulation:
    def test_non_unimodular_cell_rejected(self):
        s = LatticeSimplex.from_vertices([(0, 0), (2, 0), (0, 2)])
        cells_skipping_points = (
            (s.point_index((0, 0)), s.point_index((2, 0)), s.point_index((0, 2))),
        )
        with pytest.raises(NotUnimodular):
            Triangulation(s, cells_skipping_points)

    def test_overlapping_cells_rejected(self):
        s = LatticeSimplex.from_vertices([(0, 0), (2, 0), (0, 2)])
        i = s.point_index
        cells = tuple(sorted([
            tuple(sorted((i((0, 0)), i((1, 0)), i((0, 1))))),
            tuple(sorted((i((0, 0)), i((1, 0)), i((0, 1))))),
            tuple(sorted((i((1, 0)), i((1, 1)), i((0, 1))))),
            tuple(sorted((i((0, 1)), i((1, 1)), i((0, 2))))),
        ]))
        with pytest.raises(NotUnimodular):
            Triangulation(s, cells)

    def test_interval_cells(self):
        s = quotient_simplex(antidiagonal_generators(2))
        (t,) = unimodular_triangulations(s)
        assert t.cells == ((0, 1), (1, 2))


class TestConeFan:
    def test_resolved_a1_surface(self):
        s = quotient_simplex(antidiagonal_generators(2))
        (t,) = unimodular_triangulations(s)
        fan = cone_fan(t)
        assert fan.rays == ((0, 1), (1, 1), (2, 1))
        assert len(fan.top_cones()) == 2
        report = validate(fan)
        assert report.smooth and report.good

    def test_flop_pair_fans(self, corpus_fans):
        t, tp = mu2_kernel_triangulations()
        assert cone_fan(t).rays == corpus_fans["flop3_a"].rays
        assert cone_fan(t).cones == corpus_fans["flop3_a"].cones
        assert cone_fan(tp).cones == corpus_fans["flop3_b"].cones
        for fan in (cone_fan(t), cone_fan(tp)):
            report = validate(fan)
            assert report.smooth and report.good and not report.proper
            # crepancy: every ray at height one, every point used
            assert all(r[-1] == 1 for r in fan.rays)
            assert len(fan.rays) == len(t.simplex.points)


class TestFlips:
    def test_medial_triangulation_has_three_flips(self):
        t, _ = mu2_kernel_triangulations()
        moves = flips(t)
        assert len(moves) == 3
        assert "green" in flip_aliases(t)

    def test_interval_rejected(self):
        s = quotient_simplex(antidiagonal_generators(3))
        (t,) = unimodular_triangulations(s)
        with pytest.raises(NotDim2):
            flips(t)

    def test_unit_triangle_has_none(self):
        s = LatticeSimplex.from_vertices([(0, 0), (1, 0), (0, 1)])
        (t,) = unimodular_triangulations(s)
        assert flips(t) == ()

    def test_green_flip_produces_partner(self):
        t, tp = mu2_kernel_triangulations()
        flipped, cert = apply_flip(t, flip_aliases(t)["green"])
        assert flipped == tp
        assert len(cert.moves) == 1
        assert cert.source == t and cert.target == tp

    def test_flip_is_involution(self):
        t, _ = mu2_kernel_triangulations()
        for move in flips(t):
            once, cert1 = apply_flip(t, move)
            back_moves = [m for m in flips(once)
                          if m.removed_edge == move.added_edge]
            assert len(back_moves) == 1
            twice, cert2 = apply_flip(once, back_moves[0])
            assert twice == t
            combined = compose_certificates(cert1, cert2)
            assert len(combined.moves) == 2
            assert combined.source == t and combined.target == t

    def test_illegal_flip_rejected(self):
        t, tp = mu2_kernel_triangulations()
        move = flip_aliases(t)["green"]
        with pytest.raises(IllegalFlip):
            apply_flip(tp, move)


class TestEnumeration:
    def test_quotient_triangle_has_four(self):
        triangulations = unimodular_triangulations(mu2_kernel_simplex())
        assert len(triangulations) == 4
        t, tp = mu2_kernel_triangulations()
        assert t in triangulations and tp in triangulations

    def test_intervals_unique(self):
        for order in (2, 3, 5):
            s = quotient_simplex(antidiagonal_generators(order))
            assert len(unimodular_triangulations(s)) == 1

    def test_cell_count_equals_volume(self):
        for t in unimodular_triangulations(mu2_kernel_simplex()):
            assert len(t.cells) == t.simplex.normalized_volume()

    def test_enumeration_agrees_with_flip_reachability(self):
        # the flip graph of the quotient triangle is a star centred at the
        # medial triangulation, so enumeration and flips must agree
        t, _ = mu2_kernel_triangulations()
        reachable = {t} | {apply_flip(t, m)[0] for m in flips(t)}
        assert reachable == set(unimodular_triangulations(t.simplex))


class TestFlopInvariants:
    def test_rank_preserved_by_flips(self):
        t, _ = mu2_kernel_triangulations()
        for move in flips(t):
            flipped, cert = apply_flip(t, move)
            ra = ell_shadow(cone_fan(cert.source)).rank
            rb = ell_shadow(cone_fan(cert.target)).rank
            assert ra == rb == len(t.cells)

    def test_flop_pair_end_to_end(self):
        # Derived-equivalent by the shared simplex and one flip, yet the
        # sheaf invariant tells them apart through the flopped wall span.
        t, tp = mu2_kernel_triangulations()
        flipped, cert = apply_flip(t, flip_aliases(t)["green"])
        assert flipped == tp
        fa, fb = cone_fan(t), cone_fan(tp)
        verdict = compare(ell_shadow(fa), ell_shadow(fb), fans=(fa, fb))
        assert verdict.outcome == NOT_ISOMORPHIC
        only_a, only_b = verdict.witness.detail
        # the dropped span comes from the removed diagonal, the new one
        # from the added diagonal
        pts = t.simplex.points
        removed = [pts[i] + (1,) for i in cert.moves[0].removed_edge]
        from torell.lattice import saturate
        assert only_a == (saturate(removed),)
