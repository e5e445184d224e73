import networkx as nx
import pytest

from tamefill import (
    CayleyBall,
    FlowFunction,
    ac_flow,
    ac_presentation,
    build_ball,
    check_almost_convex,
    export_triples,
    fellow_presentation,
    flow_presentation,
    preset,
    rewriting_flow,
    verify_flow,
)
from tamefill.error import DanglingEdge, NotAlmostConvex
from tamefill.flow import check_midpoint_descent, descending_region, descent_relation


@pytest.fixture
def ball() -> CayleyBall:
    rs = preset("Z2").rewriting
    assert rs is not None
    return build_ball(rs.oracle(), rs.alphabet, 4)


@pytest.fixture
def ff(ball: CayleyBall) -> FlowFunction:
    rs = preset("Z2").rewriting
    assert rs is not None
    return rewriting_flow(rs, ball)


def with_label(ff: FlowFunction, edge: tuple[int, int], label: tuple[int, ...]) -> FlowFunction:
    assignment = dict(ff.assignment)
    assignment[edge] = label
    return FlowFunction(ff.ball, assignment, ff.bound_k, "edited")


class TestRewritingFlow:
    def test_commuting_edge_is_replaced(self, ball: CayleyBall, ff: FlowFunction) -> None:
        b = ball.element((2,))
        assert ball.alphabet.render(ff.label(b, 0)) == "B a b"

    def test_tree_edges_keep_their_letter(self, ball: CayleyBall, ff: FlowFunction) -> None:
        a = ball.element((0,))
        assert ff.label(0, 0) == (0,)
        assert ff.label(a, 1) == (1,)

    def test_bound_and_name(self, ff: FlowFunction) -> None:
        assert ff.bound_k == 3
        assert ff.name == "rewriting"

    def test_passes_verification(self, ff: FlowFunction) -> None:
        report = verify_flow(ff)
        assert report.passed
        assert report.radius == 4
        assert report.cycle is None
        assert report.descent_pairs > 0

    def test_dangling_edges_are_unusable(self, ball: CayleyBall, ff: FlowFunction) -> None:
        report = verify_flow(ff)
        assert set(ball.dangling()) <= set(report.unusable)

    def test_label_of_dangling_edge(self, ball: CayleyBall, ff: FlowFunction) -> None:
        outer = ball.element((0, 0, 0, 0))
        with pytest.raises(DanglingEdge):
            ff.label(outer, 0)

    def test_descent_relation_is_acyclic(self, ff: FlowFunction) -> None:
        relation = descent_relation(ff)
        assert nx.is_directed_acyclic_graph(relation)
        assert set(relation.nodes) <= set(ff.recursive_edges())

    def test_presentation_is_the_commutator(self, ff: FlowFunction) -> None:
        p = flow_presentation(ff)
        assert len(p.relators) == 8
        assert p.longest_relator == 4

    def test_export_triples(self, ff: FlowFunction) -> None:
        rows = export_triples(ff)
        assert rows[0] == "\ta\ta"
        assert len(rows) == len(ff.assignment)
        assert "b\ta\tB a b" in rows


class TestVerifyFlow:
    def test_moved_tree_edge(self, ff: FlowFunction) -> None:
        bad = with_label(ff, (0, 0), (2, 0, 3))
        report = verify_flow(bad)
        assert (0, 0) in report.f2d_failures
        assert not report.passed

    def test_wrong_endpoint(self, ball: CayleyBall, ff: FlowFunction) -> None:
        b = ball.element((2,))
        report = verify_flow(with_label(ff, (b, 0), (2,)))
        assert (b, 0) in report.f1_failures

    def test_overlong_label(self, ball: CayleyBall, ff: FlowFunction) -> None:
        b = ball.element((2,))
        report = verify_flow(with_label(ff, (b, 0), (3, 0, 2, 0, 1)))
        assert (b, 0) in report.f3_failures

    def test_self_referencing_edge_is_a_cycle(self, ball: CayleyBall, ff: FlowFunction) -> None:
        b = ball.element((2,))
        report = verify_flow(with_label(ff, (b, 0), (0, 1, 0)))
        assert report.cycle is not None
        assert (b, 0) in report.cycle

    def test_strict_raises_on_leaving_path(self, ball: CayleyBall, ff: FlowFunction) -> None:
        edge = (ball.element((0, 0, 0)), 2)
        leaving = with_label(ff, edge, (0, 2, 1))
        with pytest.raises(DanglingEdge):
            verify_flow(leaving, strict=True)
        assert edge in verify_flow(leaving).unusable


class TestAcFlow:
    def test_z2_is_almost_convex_with_two(self, ball: CayleyBall) -> None:
        ff = ac_flow(ball, 2)
        assert ff.bound_k == 3
        assert verify_flow(ff).passed
        assert check_midpoint_descent(ff) == []

    def test_constant_too_small(self, ball: CayleyBall) -> None:
        with pytest.raises(NotAlmostConvex) as exc_info:
            ac_flow(ball, 1)

        assert exc_info.value.pair is not None

    def test_presentations_contain_short_identity_words(self, ball: CayleyBall) -> None:
        assert (0, 1) in ac_presentation(ball, 2)
        assert ball.alphabet.parse("a b A B") in ac_presentation(ball, 2)
        assert fellow_presentation(ball, 1).longest_relator == 4


class TestDescendingRegion:
    @pytest.fixture
    def z3(self) -> CayleyBall:
        rs = preset("Z3").rewriting
        assert rs is not None
        return build_ball(rs.oracle(), rs.alphabet, 2)

    def test_drops_sphere_edges(self, z3: CayleyBall) -> None:
        region = descending_region(z3, 1)
        assert z3.graph(inside=1).number_of_edges() == 3
        assert sorted(tuple(sorted(e)) for e in region.edges()) == [(0, 1), (0, 2)]

    def test_sphere_edge_is_replaced_through_lower_levels(self, z3: CayleyBall) -> None:
        a = z3.element(z3.alphabet.parse("a"))
        assert z3.alphabet.render(ac_flow(z3, 2).label(a, 0)) == "A A"

    def test_narrower_than_the_almost_convexity_check(self, z3: CayleyBall) -> None:
        assert check_almost_convex(z3, 1, 1).witness is None
        with pytest.raises(NotAlmostConvex):
            ac_flow(z3, 1)
