import pytest

from tamefill import (
    BoundSuite,
    CayleyBall,
    DiagramCombing,
    FlowFunction,
    NDiagramBuilder,
    StepFunction,
    build_ball,
    check_diameter_bound,
    compute_Le,
    compute_kappas,
    compute_mus,
    compute_t_functions,
    enumerate_identity_words,
    k_r_prime,
    measure_tameness,
    preset,
    rewriting_flow,
    rsgrowth_bound,
    seashell,
)
from tamefill.error import RadiusExceeded, RangeExceeded
from tamefill.tameness import (
    mu_at,
    quarters_ceil,
    rsgrowth_quarters,
    tameness_csv,
    trace_constraints,
)


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


@pytest.fixture
def commutator(ball: CayleyBall, ff: FlowFunction) -> DiagramCombing:
    return seashell(ball.alphabet.parse("b a B A"), NDiagramBuilder(ff).filling, ball)


class TestStepFunction:
    def test_least_function_above_constraints(self) -> None:
        f = StepFunction.from_constraints(trace_constraints([0, 4, 2, 6]), 6)
        assert f.breakpoints == ((2, 4),)
        assert [f(x) for x in (0, 1, 2, 5, 6)] == [0, 0, 4, 4, 4]
        assert f.label == "empirical"

    def test_constraints_at_the_same_argument_keep_the_largest(self) -> None:
        f = StepFunction.from_constraints([(4, 1), (4, 3), (8, 2)])
        assert f.breakpoints == ((4, 3),)

    def test_breakpoints_must_increase(self) -> None:
        with pytest.raises(ValueError):
            StepFunction(((2, 4), (3, 4)))

    def test_violations_and_domination(self) -> None:
        f = StepFunction(((2, 4),), verified_to=6)
        assert f.violations(lambda x: x) == [2, 3]
        assert f.dominated_by(lambda x: x + 4)
        assert f.as_rows() == [(2, 4)]

    def test_csv(self) -> None:
        f = StepFunction(((2, 4),), verified_to=2)
        assert tameness_csv(f) == "x_quarters,f_quarters,bound_quarters\n0,0,\n1,0,\n2,4,\n"
        assert tameness_csv(f, lambda x: 8).splitlines()[1] == "0,0,8"


class TestTraceConstraints:
    def test_pairs_each_position_with_the_earlier_maximum(self) -> None:
        assert trace_constraints([0, 4, 2, 6]) == [(4, 0), (2, 4), (6, 4)]

    def test_short_traces(self) -> None:
        assert trace_constraints([]) == []
        assert trace_constraints([0]) == []

    def test_quarters_ceil(self) -> None:
        assert [quarters_ceil(q) for q in (0, 1, 4, 5, 8)] == [0, 1, 1, 2, 2]


class TestMeasureTameness:
    def test_commutator_is_observed_to_its_diameter(self, commutator: DiagramCombing) -> None:
        f = measure_tameness([commutator], "intrinsic")
        assert f.verified_to == 8
        assert f.label == "empirical"

    def test_extrinsic_measurement(self, ball: CayleyBall, commutator: DiagramCombing) -> None:
        f = measure_tameness([commutator], "extrinsic", ball)
        assert f.verified_to == 8

    def test_no_combings(self) -> None:
        f = measure_tameness([], "intrinsic")
        assert f.breakpoints == ()
        assert f.verified_to == 0

    def test_values_within_observed_range(self, ball: CayleyBall, ff: FlowFunction) -> None:
        builder = NDiagramBuilder(ff)
        combings = [seashell(w, builder.filling, ball) for w in enumerate_identity_words(ball, 6)]
        f = measure_tameness(combings, "intrinsic")
        values = [f(x) for x in range(f.verified_to + 1)]
        assert values == sorted(values)
        assert max(values) <= f.verified_to
        assert f.verified_to >= 8

    def test_diameter_bound(self, commutator: DiagramCombing) -> None:
        assert check_diameter_bound([commutator], StepFunction(((0, 8),))).passed
        report = check_diameter_bound([commutator], StepFunction(((0, 4),)))
        assert report.failures == ((commutator.word, 2, 1),)
        assert report.checked == 1


class TestBounds:
    def test_growth_bound(self) -> None:
        rs = preset("Z2").rewriting
        assert rs is not None
        assert rsgrowth_bound(rs, 3) == 8
        assert rsgrowth_bound(rs, 2.5) == 8

    def test_growth_bound_on_the_quarter_grid(self) -> None:
        rs = preset("Z2").rewriting
        assert rs is not None
        bound = rsgrowth_quarters(rs, 8)
        assert bound(8) == 28
        with pytest.raises(RangeExceeded):
            bound(9)

    def test_t_functions_of_geodesic_normal_forms(self, ball: CayleyBall) -> None:
        assert compute_t_functions(ball, 3) == ((0, 1, 2, 3), (0, 1, 2, 3))

    def test_kappas(self, ball: CayleyBall, ff: FlowFunction) -> None:
        built = NDiagramBuilder(ff).build_recursive(3)
        suite = compute_kappas(ball, built, 3)
        assert suite.k_ti == (0, 1, 2, 3)
        assert suite.k_te == (0, 1, 2, 3)
        assert list(suite.k_xi) == sorted(suite.k_xi)
        assert all(e <= i for e, i in zip(suite.k_xe, suite.k_xi))

    def test_kappas_beyond_the_ball(self, ball: CayleyBall, ff: FlowFunction) -> None:
        with pytest.raises(RadiusExceeded):
            compute_kappas(ball, {}, 5)

    def test_mus(self) -> None:
        suite = BoundSuite(
            k_ti=(0, 1, 2, 3, 4, 5, 6),
            k_te=(0, 1, 2, 3, 4, 5, 6),
            k_xi=(0, 1, 1, 2, 2, 3, 3),
            k_xe=(0, 1, 1, 2, 2, 3, 3),
        )
        filled = compute_mus(suite, 1)
        assert filled.mu_i == (2, 3, 4, 5, 6)
        assert filled.rho == 1
        assert mu_at(filled, 4) == 12
        assert mu_at(filled, 5) == 16

    def test_mus_need_enough_kappas(self) -> None:
        suite = BoundSuite(k_ti=(0, 1), k_te=(0, 1), k_xi=(0, 0), k_xe=(0, 0))
        with pytest.raises(RangeExceeded):
            compute_mus(suite, 4)

    def test_edge_words(self, ff: FlowFunction) -> None:
        found = compute_Le((2,), 0, ff)
        assert found.words == frozenset({(), (0,), (2,), (0, 2)})
        assert found.k == 2

    def test_k_r_prime(self, ff: FlowFunction) -> None:
        assert k_r_prime(ff, 2) == 3
        with pytest.raises(RadiusExceeded):
            k_r_prime(ff, 4)
