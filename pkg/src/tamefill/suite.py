"""The ``check-all`` acceptance run.

Each criterion returns a :class:`CriterionResult`; shared inputs such as
the Z² combing suite are built once and reused across criteria.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Sequence

from .cayley import (
    CayleyBall,
    build_ball,
    check_almost_convex,
    enumerate_identity_words,
    geodesic_words,
)
from .config import DEFAULT_BUDGETS, Budgets
from .diagram import (
    VanKampenDiagram,
    check_normal_form_paths,
    coarse_profile_extrinsic,
    coarse_profile_intrinsic,
    validate,
)
from .error import TaggedError, panic
from .filling import (
    DiagramCombing,
    NDiagramBuilder,
    build_catalog,
    build_finite_filling,
    check_combing,
    seashell,
)
from .flow import ac_flow, flow_presentation, rewriting_flow, verify_flow
from .presets import (
    BS_ALPHABET,
    THOMPSON_ALPHABET,
    PresetEntry,
    bs1p_nf_member,
    preset,
    thompson_nf_member,
)
from .rewriting import (
    RewritingSystem,
    check_minimal,
    check_unique_normal_forms,
    critical_pairs,
    gamma_table,
)
from .tameness import (
    ProfileKind,
    StepFunction,
    check_diameter_bound,
    compute_kappas,
    compute_mus,
    measure_tameness,
    mu_at,
    quarters_ceil,
    rsgrowth_quarters,
)
from .words import Presentation, Word, formal_inverse

logger = logging.getLogger(__name__)

PROFILE_KINDS: tuple[ProfileKind, ...] = ("intrinsic", "extrinsic")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{self.number:2d} {'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def rewriting_of(entry: PresetEntry) -> RewritingSystem:
    if entry.rewriting is None:
        panic(f"preset {entry.name} has no rewriting system")
    return entry.rewriting


@dataclass
class FlowSuite:
    """Seashell diagrams of every short identity word over one flow function."""

    ball: CayleyBall
    presentation: Presentation
    combings: list[DiagramCombing]


def flow_suite(
    ball: CayleyBall, builder: NDiagramBuilder, max_len: int
) -> FlowSuite:
    words = enumerate_identity_words(ball, max_len)
    combings = [seashell(w, builder.filling, ball) for w in words]
    return FlowSuite(ball, flow_presentation(builder.ff), combings)


def audit(
    combings: Sequence[DiagramCombing], presentation: Presentation
) -> list[str]:
    """Validation and combing failures, prefixed by the word they concern."""
    failures: list[str] = []
    for c in combings:
        word = c.diagram.alphabet.render(c.word) or "ε"
        report = validate(c.diagram, presentation, c.word)
        failures.extend(f"{word}: {f}" for f in report.failures)
        failures.extend(f"{word}: {f}" for f in check_combing(c))
    return failures


class _Lab:
    """Lazily built inputs shared by several criteria."""

    def __init__(self, budgets: Budgets) -> None:
        self.node_budget = budgets.get("node_budget", DEFAULT_BUDGETS["node_budget"])

    @cached_property
    def z2(self) -> RewritingSystem:
        return rewriting_of(preset("Z2"))

    @cached_property
    def z2_ball(self) -> CayleyBall:
        return build_ball(self.z2.oracle(), self.z2.alphabet, 6)

    @cached_property
    def z2_suite(self) -> FlowSuite:
        builder = NDiagramBuilder(rewriting_flow(self.z2, self.z2_ball))
        return flow_suite(self.z2_ball, builder, 8)

    @cached_property
    def z2_tameness(self) -> tuple[StepFunction, StepFunction]:
        combings = self.z2_suite.combings
        return (measure_tameness(combings, "intrinsic"), measure_tameness(combings, "extrinsic"))

    @cached_property
    def s3_suite(self) -> FlowSuite:
        rs = rewriting_of(preset("S3"))
        ball = build_ball(rs.oracle(), rs.alphabet, 6)
        return flow_suite(ball, NDiagramBuilder(rewriting_flow(rs, ball)), 6)

    @cached_property
    def ac_suite(self) -> FlowSuite:
        ball = build_ball(self.z2.oracle(), self.z2.alphabet, 6)
        return flow_suite(ball, NDiagramBuilder(ac_flow(ball, 4)), 8)

    def finite(self, name: str) -> tuple[PresetEntry, list[DiagramCombing], int]:
        """Finite fillings of identity words up to length 8 and the largest catalog diameter."""
        return self._finite[name]

    @cached_property
    def _finite(self) -> dict[str, tuple[PresetEntry, list[DiagramCombing], int]]:
        found: dict[str, tuple[PresetEntry, list[DiagramCombing], int]] = {}
        for name in ("Z3", "S3"):
            entry = preset(name)
            rs = rewriting_of(entry)
            order = entry.order or 0
            ball = build_ball(rs.oracle(), rs.alphabet, max(order, 4))
            catalog = build_catalog(rs, ball)
            fillings = [
                build_finite_filling(w, catalog, ball)
                for w in enumerate_identity_words(ball, 8)
            ]
            widest = max(
                (coarse_profile_intrinsic(c.diagram).diameter for c in catalog.values()), default=0
            )
            found[name] = (entry, fillings, widest)
        return found


def _crs_validity(lab: _Lab) -> CriterionResult:
    problems: list[str] = []
    for name in ("Z2", "F2", "Z3", "Z5", "S3"):
        rs = rewriting_of(preset(name))
        if check_minimal(rs):
            problems.append(f"{name} not minimal")
        if critical_pairs(rs):
            problems.append(f"{name} has unresolved critical pairs")
        if check_unique_normal_forms(rs, 5, node_budget=lab.node_budget):
            problems.append(f"{name} has words with several normal forms")
    return CriterionResult(
        1,
        "rewriting systems",
        not problems,
        "; ".join(problems) or "5 presets minimal and complete",
    )


def _bfs_distances(d: VanKampenDiagram) -> list[int]:
    distance = [-1] * d.num_vertices
    distance[d.basepoint] = 0
    queue = deque([d.basepoint])
    while queue:
        v = queue.popleft()
        for dart in d.out_darts[v]:
            t = d.dst(dart)
            if distance[t] < 0:
                distance[t] = distance[v] + 1
                queue.append(t)
    return distance


def _coarse_distance(lab: _Lab) -> CriterionResult:
    diagrams = [c.diagram for c in (lab.z2_suite.combings + lab.s3_suite.combings)[:50]]
    problems: list[str] = []
    for i, d in enumerate(diagrams):
        intrinsic = coarse_profile_intrinsic(d)
        extrinsic = coarse_profile_extrinsic(d, d.ball)
        if list(intrinsic.vertices) != [4 * x for x in _bfs_distances(d)]:
            problems.append(f"diagram {i}: vertex distances disagree with BFS")
        residues = (
            all(v % 4 == 0 for v in intrinsic.vertices)
            and all(e % 4 == 2 for e in intrinsic.edges)
            and all(f % 4 == 1 for f in intrinsic.faces)
        )
        if not residues:
            problems.append(f"diagram {i}: quarter residues broken")
        for inner, outer in (
            (intrinsic.vertices, extrinsic.vertices),
            (intrinsic.edges, extrinsic.edges),
            (intrinsic.faces, extrinsic.faces),
        ):
            if any(o > n for n, o in zip(inner, outer)):
                problems.append(f"diagram {i}: extrinsic exceeds intrinsic")
                break
    return CriterionResult(
        2, "coarse distance", not problems, "; ".join(problems[:3]) or f"{len(diagrams)} diagrams"
    )


def _flow_verification(lab: _Lab) -> CriterionResult:
    problems: list[str] = []
    built = 0
    for name, radius in (("Z2", 5), ("F2", 6)):
        rs = rewriting_of(preset(name))
        ball = build_ball(rs.oracle(), rs.alphabet, radius)
        ff = rewriting_flow(rs, ball)
        if not verify_flow(ff).passed:
            problems.append(f"{name} flow fails verification")
            continue
        presentation = flow_presentation(ff)
        builder = NDiagramBuilder(ff)
        for edge, combing in builder.build_recursive(radius - 1).items():
            d = combing.diagram
            built += 1
            if not validate(d, presentation).passed:
                problems.append(f"{name} N-diagram of {edge} invalid")
            if check_normal_form_paths(d):
                problems.append(f"{name} N-diagram of {edge} misses a normal-form path")
            if check_combing(combing):
                problems.append(f"{name} N-diagram of {edge} has a broken combing")
    return CriterionResult(
        3, "flow functions", not problems, "; ".join(problems[:3]) or f"{built} N-diagrams"
    )


def _seashell_soundness(lab: _Lab) -> CriterionResult:
    problems: list[str] = []
    counted = 0
    for suite in (lab.z2_suite, lab.s3_suite):
        problems.extend(audit(suite.combings, suite.presentation))
        counted += len(suite.combings)
    return CriterionResult(
        4, "seashell diagrams", not problems, "; ".join(problems[:3]) or f"{counted} words"
    )


def _flow_bound(lab: _Lab) -> CriterionResult:
    f_i, f_e = lab.z2_tameness
    presentation = lab.z2_suite.presentation
    rho = presentation.longest_relator
    reach = quarters_ceil(max(f_i.verified_to, f_e.verified_to)) + rho + 1
    ball = build_ball(lab.z2.oracle(), lab.z2.alphabet, reach + 1)
    builder = NDiagramBuilder(rewriting_flow(lab.z2, ball))
    suite = compute_mus(compute_kappas(ball, builder.build_recursive(reach), reach), rho)
    bad_i = f_i.violations(lambda x: mu_at(suite, x, "intrinsic"))
    bad_e = f_e.violations(lambda x: mu_at(suite, x, "extrinsic"))
    passed = not bad_i and not bad_e
    detail = (
        f"dominated to {max(f_i.verified_to, f_e.verified_to) / 4}"
        if passed
        else f"violations at quarters {bad_i[:3]} / {bad_e[:3]}"
    )
    return CriterionResult(5, "flow tameness bound", passed, detail)


def _growth_bound(lab: _Lab) -> CriterionResult:
    table = gamma_table(lab.z2, 7, node_budget=lab.node_budget)
    f_i, f_e = lab.z2_tameness
    bound = rsgrowth_quarters(
        lab.z2, max(f_i.verified_to, f_e.verified_to), node_budget=lab.node_budget
    )
    problems: list[str] = []
    if table != list(range(8)):
        problems.append(f"γ table {table}")
    if not f_i.dominated_by(bound) or not f_e.dominated_by(bound):
        problems.append("measured tameness exceeds the growth bound")
    return CriterionResult(
        6, "rewriting growth bound", not problems, "; ".join(problems) or "γ(n) = n to 7"
    )


def _almost_convex(lab: _Lab) -> CriterionResult:
    ball = lab.ac_suite.ball
    problems = [
        f"not 4-almost convex at {n}"
        for n in range(1, 5)
        if not check_almost_convex(ball, n, 4).passed
    ]
    combings = lab.ac_suite.combings
    problems.extend(audit(combings, lab.ac_suite.presentation)[:3])
    for kind in PROFILE_KINDS:
        f = measure_tameness(combings, kind)
        if not f.dominated_by(lambda x: x + 4):
            problems.append(f"{kind} tameness exceeds x + 1")
    return CriterionResult(
        7, "almost convex flow", not problems, "; ".join(problems) or f"{len(combings)} words"
    )


def _finite_groups(lab: _Lab) -> CriterionResult:
    problems: list[str] = []
    for name in ("Z3", "S3"):
        entry, fillings, widest = lab.finite(name)
        order = entry.order or 0
        f_i = measure_tameness(fillings, "intrinsic")
        f_e = measure_tameness(fillings, "extrinsic")
        if f_i.evaluate(f_i.verified_to) > 4 * (order + widest) + 2:
            problems.append(f"{name} intrinsic tameness above |G| + {widest} + 1/2")
        if f_e.evaluate(f_e.verified_to) > 4 * order + 2:
            problems.append(f"{name} extrinsic tameness above |G| + 1/2")
        problems.extend(f"{name} {p}" for p in _finite_audit(entry, fillings)[:3])
    return CriterionResult(
        8, "finite groups", not problems, "; ".join(problems) or "constant bounds hold"
    )


def _finite_audit(entry: PresetEntry, fillings: Sequence[DiagramCombing]) -> list[str]:
    if not fillings:
        return []
    ff = rewriting_flow(rewriting_of(entry), fillings[0].diagram.ball)
    return audit(fillings, flow_presentation(ff))


def _diameter_bound(lab: _Lab) -> CriterionResult:
    groups: list[list[DiagramCombing]] = [
        lab.z2_suite.combings,
        lab.s3_suite.combings,
        lab.ac_suite.combings,
    ]
    groups.extend(lab.finite(name)[1] for name in ("Z3", "S3"))
    checked = 0
    failures = 0
    for combings in groups:
        for kind in PROFILE_KINDS:
            report = check_diameter_bound(combings, measure_tameness(combings, kind), kind)
            checked += report.checked
            failures += len(report.failures)
    return CriterionResult(
        9, "diameter bound", failures == 0, f"{failures} failures in {checked} checks"
    )


def _lower_bound(lab: _Lab) -> CriterionResult:
    ball = lab.z2_ball
    builder = NDiagramBuilder(rewriting_flow(lab.z2, ball))
    diagrams = [
        seashell(w + formal_inverse(w, ball.alphabet), builder.filling, ball)
        for w in geodesic_words(ball, 6)
    ]
    f = measure_tameness(diagrams, "intrinsic")
    short = [m for m in range(1, 7) if f.evaluate(4 * m) < 4 * m - 3]
    return CriterionResult(
        10, "tameness lower bound", not short, f"short at {short}" if short else "f(n) ≥ n - 3/4"
    )


def _thompson_reference(text: str) -> bool:
    # x = x0, X = x0^-1, y = x1, Y = x1^-1
    if re.search(r"xX|Xx|yY|Yy|xx[yY]", text):
        return False
    return all(
        text[:i].count("x") - text[:i].count("X") <= 0 for i in range(len(text) + 1)
    )


def _bs_reference(text: str, p: int) -> bool:
    match = re.fullmatch(r"(T*)(a*|A*)(t*)", text)
    if match is None:
        return False
    i, middle, k = len(match[1]), match[2], len(match[3])
    return len(middle) % p != 0 or i == 0 or k == 0


# Baumslag-Solitar bases whose normal-form predicate is checked against the reference.
PREDICATE_BASES = (2, 3)

# Longest word compared; p = 3 needs ``T a a a t`` to separate the bases.
PREDICATE_LENGTH = 5


def predicate_mismatches(
    max_length: int = PREDICATE_LENGTH, bases: Sequence[int] = PREDICATE_BASES
) -> tuple[list[str], int]:
    """Compares both normal-form predicates with regex references on all short words.

    Returns:
        The mismatching words, and the number of comparisons made.
    """
    mismatches: list[str] = []
    checked = 0
    for length in range(max_length + 1):
        for letters in product(range(4), repeat=length):
            w: Word = tuple(letters)
            checked += 1
            if thompson_nf_member(w) != _thompson_reference("".join("xXyY"[x] for x in w)):
                mismatches.append(THOMPSON_ALPHABET.render(w))
            text = "".join("aAtT"[x] for x in w)
            for p in bases:
                checked += 1
                if bs1p_nf_member(w, p) != _bs_reference(text, p):
                    mismatches.append(f"p={p}: {BS_ALPHABET.render(w)}")
    return mismatches, checked


def _predicates(lab: _Lab) -> CriterionResult:
    mismatches, checked = predicate_mismatches()
    return CriterionResult(
        11, "normal-form predicates", not mismatches, f"{len(mismatches)} mismatches in {checked}"
    )


CRITERIA: tuple[Callable[[_Lab], CriterionResult], ...] = (
    _crs_validity,
    _coarse_distance,
    _flow_verification,
    _seashell_soundness,
    _flow_bound,
    _growth_bound,
    _almost_convex,
    _finite_groups,
    _diameter_bound,
    _lower_bound,
    _predicates,
)


def run_all(budgets: Budgets = DEFAULT_BUDGETS) -> list[CriterionResult]:
    """Runs every criterion in order.

    A criterion that raises a check failure is reported as failed; budget
    and oracle errors propagate.
    """
    lab = _Lab(budgets)
    results: list[CriterionResult] = []
    for number, criterion in enumerate(CRITERIA, start=1):
        try:
            result = criterion(lab)
        except TaggedError as e:
            if e.exit_code == 3:
                raise
            result = CriterionResult(number, criterion.__name__.strip("_"), False, f"{e.tag}: {e}")
        logger.info(result.line())
        results.append(result)
    return results
