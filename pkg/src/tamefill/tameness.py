"""Measured tame filling functions and the bound functions they are checked against.

All coarse distances are kept in quarters, so a value ``q`` stands for
``q / 4``. Bound tables such as the kappas are indexed by whole ``n`` and
hold whole lengths; the ``*_quarters`` helpers convert them to the quarter
grid with the ``⌈n⌉`` alignment used by the bounds.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Literal, Mapping, NamedTuple, Sequence

from .cayley import CayleyBall
from .diagram import (
    CoarseProfile,
    VanKampenDiagram,
    coarse_profile_extrinsic,
    coarse_profile_intrinsic,
)
from .error import (
    BallTooSmall,
    BudgetExceeded,
    DanglingEdge,
    MissingDiagram,
    RadiusExceeded,
    RangeExceeded,
)
from .filling import DiagramCombing, EdgeCombing
from .flow import DirectedEdge, FlowFunction
from .rewriting import DEFAULT_NODE_BUDGET, RewritingSystem, gamma_table, longest_rule
from .words import Word

logger = logging.getLogger(__name__)

ProfileKind = Literal["intrinsic", "extrinsic"]
QuarterBound = Callable[[int], int]


def quarters_ceil(q: int) -> int:
    """``⌈q / 4⌉``."""
    return -(-q // 4)


@dataclass(frozen=True)
class StepFunction:
    """Nondecreasing step function on the quarter grid.

    ``f(x)`` is the value of the largest breakpoint at or below ``x``, and 0
    below the first breakpoint. Measured functions carry the largest
    observed argument in ``verified_to`` and say nothing beyond it.

    Attributes:
        breakpoints: ``(x, y)`` pairs in quarters, strictly increasing in both.
        verified_to: Largest observed argument, in quarters.
        label: ``"empirical"`` for measured functions.
    """

    breakpoints: tuple[tuple[int, int], ...] = ()
    verified_to: int = 0
    label: str = "empirical"

    def __post_init__(self) -> None:
        for (x0, y0), (x1, y1) in zip(self.breakpoints, self.breakpoints[1:]):
            if x1 <= x0 or y1 <= y0:
                raise ValueError("breakpoints must increase in both coordinates")

    @classmethod
    def from_constraints(
        cls, constraints: Iterable[tuple[int, int]], verified_to: int = 0
    ) -> "StepFunction":
        """Least nondecreasing function with ``f(x) >= y`` for every ``(x, y)``."""
        points: list[tuple[int, int]] = []
        for x, y in sorted(constraints):
            if y > (points[-1][1] if points else 0):
                if points and points[-1][0] == x:
                    points[-1] = (x, y)
                else:
                    points.append((x, y))
        return cls(tuple(points), verified_to)

    def evaluate(self, x: int) -> int:
        value = 0
        for bx, by in self.breakpoints:
            if bx > x:
                break
            value = by
        return value

    def __call__(self, x: int) -> int:
        return self.evaluate(x)

    def violations(self, bound: QuarterBound, xs: Iterable[int] | None = None) -> list[int]:
        """Arguments where ``f(x) > bound(x)``; all of ``0..verified_to`` by default."""
        grid = range(self.verified_to + 1) if xs is None else xs
        return [x for x in grid if self.evaluate(x) > bound(x)]

    def dominated_by(self, bound: QuarterBound, xs: Iterable[int] | None = None) -> bool:
        return not self.violations(bound, xs)

    def as_rows(self) -> list[tuple[int, int]]:
        return list(self.breakpoints)


def _profile(
    d: VanKampenDiagram,
    kind: ProfileKind,
    ball: CayleyBall | None,
    cache: dict[int, CoarseProfile],
) -> CoarseProfile:
    cached = cache.get(id(d))
    if cached is None:
        if kind == "intrinsic":
            cached = coarse_profile_intrinsic(d)
        else:
            cached = coarse_profile_extrinsic(d, d.ball if ball is None else ball)
        cache[id(d)] = cached
    return cached


def trace_constraints(trace: Sequence[int]) -> list[tuple[int, int]]:
    """``(td(t), max td(s) for s < t)`` for every later position ``t`` of one path."""
    constraints: list[tuple[int, int]] = []
    highest = None
    for value in trace:
        if highest is not None:
            constraints.append((value, highest))
            highest = max(highest, value)
        else:
            highest = value
    return constraints


def measure_tameness(
    combings: Iterable[EdgeCombing | DiagramCombing],
    profile: ProfileKind = "intrinsic",
    ball: CayleyBall | None = None,
) -> StepFunction:
    """Least step function f with ``td(c_s) <= f(td(c_t))`` along every path, for ``s < t``.

    Args:
        combings: Combed diagrams whose sample paths are measured.
        profile: Which coarse distance to measure.
        ball: Ball the extrinsic profile is taken in; the diagram's own by default.

    Example:
        >>> trace_constraints([0, 4, 2, 6])
        [(4, 0), (2, 4), (6, 4)]
    """
    cache: dict[int, CoarseProfile] = {}
    constraints: list[tuple[int, int]] = []
    observed = 0
    paths = 0
    for combing in combings:
        prof = _profile(combing.diagram, profile, ball, cache)
        for path in combing.paths:
            trace = prof.trace(path)
            observed = max(observed, *trace)
            constraints.extend(trace_constraints(trace))
            paths += 1
    f = StepFunction.from_constraints(constraints, observed)
    logger.info(
        "%s tameness over %d paths: %d breakpoints, verified to %s",
        profile,
        paths,
        len(f.breakpoints),
        observed / 4,
    )
    return f


# Bound functions


@dataclass(frozen=True)
class BoundSuite:
    """Kappa and mu tables indexed by whole ``n``.

    Attributes:
        k_ti: Longest normal form over B(n).
        k_te: Farthest normal-form prefix over B(n).
        k_xi: Largest intrinsic N-diagram diameter over recursive edges from B(n).
        k_xe: The same for extrinsic diameters.
        rho: Longest relator of the working presentation.
        mu_i: Intrinsic tameness bound, filled by ``compute_mus``.
        mu_e: Extrinsic tameness bound, filled by ``compute_mus``.
    """

    k_ti: tuple[int, ...]
    k_te: tuple[int, ...]
    k_xi: tuple[int, ...]
    k_xe: tuple[int, ...]
    rho: int = 0
    mu_i: tuple[int, ...] = ()
    mu_e: tuple[int, ...] = ()


def _cumulative(values: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for value in values:
        out.append(max(value, out[-1]) if out else value)
    return tuple(out)


def compute_kappas(
    ball: CayleyBall, ndiagrams: Mapping[DirectedEdge, EdgeCombing], n_max: int
) -> BoundSuite:
    """Kappa tables for ``0..n_max``.

    Raises:
        RadiusExceeded: If ``n_max`` exceeds the ball radius.
        MissingDiagram: If a recursive edge from B(n_max) has no N-diagram.
    """
    if n_max > ball.radius:
        raise RadiusExceeded(ball.radius, n_max)
    k_ti = [0] * (n_max + 1)
    k_te = [0] * (n_max + 1)
    k_xi = [0] * (n_max + 1)
    k_xe = [0] * (n_max + 1)
    for v in ball.ball_vertices(n_max):
        n = ball.dist(v)
        nf = ball.nf(v)
        k_ti[n] = max(k_ti[n], len(nf))
        k_te[n] = max(k_te[n], max(ball.dist(p) for p in ball.walk(0, nf)))
    for v, letter, _ in ball.edges():
        n = ball.dist(v)
        if n > n_max or ball.is_degenerate(v, letter):
            continue
        combing = ndiagrams.get((v, letter))
        if combing is None:
            raise MissingDiagram(f"no N-diagram for edge ({v}, {letter})", (v, letter))
        d = combing.diagram
        k_xi[n] = max(k_xi[n], coarse_profile_intrinsic(d).diameter)
        k_xe[n] = max(k_xe[n], coarse_profile_extrinsic(d, ball).diameter)
    return BoundSuite(_cumulative(k_ti), _cumulative(k_te), _cumulative(k_xi), _cumulative(k_xe))


def compute_mus(suite: BoundSuite, rho: int) -> BoundSuite:
    """Fills ``mu_i``/``mu_e`` for every whole ``n`` the kappa tables reach.

    ``μ(n) = max{k_t(n+1)+1, n+1, k_x(n+ρ+1)+1}``.

    Raises:
        RangeExceeded: If the kappa tables do not reach ``ρ+1``.
    """
    top = len(suite.k_ti) - 1 - (rho + 1)
    if top < 0:
        raise RangeExceeded(f"kappas to {len(suite.k_ti) - 1} cannot give μ with ρ = {rho}")

    def mu(k_t: Sequence[int], k_x: Sequence[int]) -> tuple[int, ...]:
        return tuple(max(k_t[n + 1] + 1, n + 1, k_x[n + rho + 1] + 1) for n in range(top + 1))

    return replace(
        suite, rho=rho, mu_i=mu(suite.k_ti, suite.k_xi), mu_e=mu(suite.k_te, suite.k_xe)
    )


def mu_at(suite: BoundSuite, x: int, profile: ProfileKind = "intrinsic") -> int:
    """``μ(x/4)`` in quarters, with whole-number terms taken at ``⌈x/4⌉``.

    Raises:
        RangeExceeded: If ``⌈x/4⌉`` lies beyond the mu table.
    """
    k_t, k_x = (suite.k_ti, suite.k_xi) if profile == "intrinsic" else (suite.k_te, suite.k_xe)
    n = quarters_ceil(x)
    if n + suite.rho + 1 >= len(k_x):
        raise RangeExceeded(f"kappas reach {len(k_x) - 1}, μ asked at {x / 4}")
    return max(4 * (k_t[n + 1] + 1), x + 4, 4 * (k_x[n + suite.rho + 1] + 1))


class EdgeWords(NamedTuple):
    """Normal forms met while unfolding one edge, and the longest of them."""

    words: frozenset[Word]
    k: int


def compute_Le(
    w: Word, letter: int, ff: FlowFunction, *, node_budget: int = DEFAULT_NODE_BUDGET
) -> EdgeWords:
    """Normal forms of every vertex reached while unfolding the flow from edge ``(w, letter)``.

    Raises:
        BallTooSmall: If the unfolding leaves the ball.
        BudgetExceeded: If more than ``node_budget`` edges are unfolded.
    """
    ball = ff.ball
    start = (ball.element(w), letter)
    seen = {start}
    stack = [start]
    found: set[Word] = set()
    while stack:
        v, a = stack.pop()
        t = ball.step(v, a)
        if t is None:
            raise BallTooSmall(f"edge ({v}, {a}) leaves the ball", ball.radius)
        found.update((ball.nf(v), ball.nf(t)))
        if ball.is_degenerate(v, a):
            continue
        try:
            path = ff.trace(v, a)
        except DanglingEdge as e:
            raise BallTooSmall(f"flow path of edge ({v}, {a}) leaves the ball", ball.radius) from e
        for step in path:
            found.add(ball.nf(step[0]))
            if step not in seen and not ball.is_degenerate(*step):
                seen.add(step)
                stack.append(step)
        if len(seen) > node_budget:
            raise BudgetExceeded("edge unfolding too large", node_budget)
    return EdgeWords(frozenset(found), max(len(y) for y in found))


def k_r_prime(ff: FlowFunction, n: int, *, node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Largest ``k(w, a)`` over words of length at most ``n`` and all letters.

    ``k(w, a)`` depends on the element of ``w`` only, so B(n) is scanned.

    Raises:
        RadiusExceeded: If edges from B(n) can leave the ball.
    """
    ball = ff.ball
    if n + 1 > ball.radius:
        raise RadiusExceeded(ball.radius, n + 1)
    return max(
        compute_Le(ball.nf(v), letter, ff, node_budget=node_budget).k
        for v in ball.ball_vertices(n)
        for letter in ball.alphabet
    )


def rsgrowth_bound(
    rs: RewritingSystem, n: float, *, prefix: bool = False, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """``γ(⌈n⌉+ρ+2)+1`` with ρ the longest rule, or the prefix-rewriting ``γ_p``.

    Raises:
        BudgetExceeded: If the growth search exceeds ``node_budget``.

    Example:
        >>> rsgrowth_bound(preset("Z2").rewriting, 3)
        8
    """
    m = math.ceil(n) + longest_rule(rs) + 2
    return gamma_table(rs, m, prefix=prefix, node_budget=node_budget)[m] + 1


def rsgrowth_quarters(
    rs: RewritingSystem,
    x_max: int,
    *,
    prefix: bool = False,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> QuarterBound:
    """The growth bound on the quarter grid up to ``x_max``, from one growth search."""
    rho = longest_rule(rs)
    table = gamma_table(
        rs, quarters_ceil(x_max) + rho + 2, prefix=prefix, node_budget=node_budget
    )

    def bound(x: int) -> int:
        m = quarters_ceil(x) + rho + 2
        if m >= len(table):
            raise RangeExceeded(f"growth bound is tabulated to {x_max / 4}, asked at {x / 4}")
        return 4 * (table[m] + 1)

    return bound


def compute_t_functions(ball: CayleyBall, n_max: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(t^i, t^e)`` for ``0..n_max`` over the normal forms found in the ball.

    ``t^i(n)`` is the longest normal-form prefix ending in B(n); ``t^e(n)``
    the farthest point passed by such a prefix. Only normal forms of ball
    elements are seen, so both are lower bounds verified to the ball radius.

    Raises:
        BallTooSmall: If ``n_max`` exceeds the ball radius.
    """
    if n_max > ball.radius:
        raise BallTooSmall(f"t-functions to {n_max} need a larger ball", ball.radius)
    t_i = [0] * (n_max + 1)
    t_e = [0] * (n_max + 1)
    for v in range(len(ball)):
        points = ball.walk(0, ball.nf(v))
        farthest = 0
        for length, p in enumerate(points):
            farthest = max(farthest, ball.dist(p))
            n = ball.dist(p)
            if n <= n_max:
                t_i[n] = max(t_i[n], length)
                t_e[n] = max(t_e[n], farthest)
    return _cumulative(t_i), _cumulative(t_e)


@dataclass(frozen=True)
class DiameterReport:
    checked: int
    failures: tuple[tuple[Word, int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def check_diameter_bound(
    combings: Iterable[DiagramCombing],
    f: StepFunction,
    profile: ProfileKind = "intrinsic",
    ball: CayleyBall | None = None,
) -> DiameterReport:
    """Checks ``diam(D_w) <= ⌈f(l(w)/2)⌉`` for every diagram.

    Failures are ``(w, diameter, bound)`` triples.
    """
    failures: list[tuple[Word, int, int]] = []
    checked = 0
    for combing in combings:
        d = combing.diagram
        if profile == "intrinsic":
            diameter = coarse_profile_intrinsic(d).diameter
        else:
            diameter = coarse_profile_extrinsic(d, d.ball if ball is None else ball).diameter
        bound = quarters_ceil(f.evaluate(2 * len(combing.word)))
        if diameter > bound:
            failures.append((combing.word, diameter, bound))
        checked += 1
    return DiameterReport(checked, tuple(failures))


def tameness_csv(f: StepFunction, bound: QuarterBound | None = None) -> str:
    """CSV over every quarter up to ``f.verified_to``; the bound column is empty without a bound."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x_quarters", "f_quarters", "bound_quarters"])
    for x in range(f.verified_to + 1):
        writer.writerow([x, f.evaluate(x), "" if bound is None else bound(x)])
    return buffer.getvalue()
