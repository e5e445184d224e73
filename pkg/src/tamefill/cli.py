"""Command-line front end.

Every subcommand returns 0 when its checks pass and 1 when one fails.
Errors are printed to stderr as a JSON report and exit with the code of
their error class: 2 for bad input, 3 for exhausted budgets.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence, TypeAlias

from . import __version__
from .cayley import (
    CayleyBall,
    ball_stabilizes,
    build_ball,
    check_almost_convex,
    enumerate_identity_words,
    sphere,
)
from .config import (
    DEFAULT_BUDGETS,
    EXPORT_FORMATS,
    Budgets,
    ExportFormat,
    RunConfig,
    budgets,
    budgets_from_env,
    check_run_config,
)
from .diagram import (
    VanKampenDiagram,
    check_normal_form_paths,
    coarse_profile_extrinsic,
    coarse_profile_intrinsic,
    validate,
)
from .error import BallTooSmall, ConfigError, Panic, ParseError, RadiusExceeded, TaggedError
from .export import (
    ball_dot,
    ball_json,
    combing_json,
    diagram_json,
    diagram_svg,
    dumps,
    write_artifacts,
)
from .filling import (
    DiagramCombing,
    EdgeCombing,
    NDiagramBuilder,
    Supplier,
    build_catalog,
    build_finite_filling,
    check_combing,
    seashell,
    thin_supplier,
)
from .flow import (
    FlowFunction,
    ac_flow,
    ac_presentation,
    export_triples,
    fellow_presentation,
    flow_presentation,
    rewriting_flow,
    verify_flow,
)
from .presets import PresetEntry, catalog, preset
from .result import Result
from .rewriting import (
    RewritingSystem,
    check_minimal,
    critical_pairs,
    gamma_table,
    normal_form,
    rewriting_presentation,
)
from .safe import grow, growth_config, safe
from .suite import run_all
from .tameness import (
    QuarterBound,
    compute_kappas,
    compute_mus,
    compute_t_functions,
    k_r_prime,
    measure_tameness,
    rsgrowth_bound,
    rsgrowth_quarters,
    tameness_csv,
)
from .textformat import format_presentation, parse_presentation_file
from .words import Presentation, Word

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1

METHODS = ("auto", "flow", "ac", "finite", "thin")

# Extra radius attempts before a diagram construction gives up.
GROW_TIMES = 4

# Largest radius searched for an empty sphere when a group's order is unknown.
FINITE_SEARCH_RADIUS = 16

# Errors that a larger ball may cure.
RETRYABLE = (BallTooSmall, RadiusExceeded)

BOUNDS_HEADER = "n,k_ti,k_te,k_xi,k_xe,mu_i,mu_e,t_i,t_e,k_r,gamma_bound"

Filled: TypeAlias = Result[DiagramCombing, TaggedError]


def _quarters(q: int) -> str:
    return f"{q / 4:g}"


def _status(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_FAILED


def _int(args: Mapping[str, object], key: str) -> int:
    value = args.get(key)
    if not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _optional_int(args: Mapping[str, object], key: str) -> int | None:
    return None if args.get(key) is None else _int(args, key)


# Group loading


@dataclass(frozen=True)
class Group:
    """The group a command works on, with the budgets to work under."""

    presentation: Presentation
    rewriting: RewritingSystem | None
    entry: PresetEntry | None
    budgets: Budgets

    @property
    def node_budget(self) -> int:
        return self.budgets.get("node_budget", DEFAULT_BUDGETS["node_budget"])

    @property
    def rs(self) -> RewritingSystem:
        """The rewriting system.

        Raises:
            ConfigError: If the group was given by relators only.
        """
        if self.rewriting is None:
            raise ConfigError("this command needs a rewriting system; add 'rule:' lines")
        return self.rewriting

    def parse(self, text: str) -> Word:
        return self.presentation.alphabet.parse(text)

    def render(self, w: Word) -> str:
        return self.presentation.alphabet.render(w) or "ε"

    def ball(self, radius: int) -> CayleyBall:
        return build_ball(self.rs.oracle(), self.presentation.alphabet, radius)


def load_group(config: RunConfig) -> Group:
    """Loads the preset or presentation file named by ``config``.

    Raises:
        UnknownPreset: If the preset does not exist.
        ConfigError: If the input file cannot be read.
        ParseError: If the input file is malformed.
    """
    limits = config.get("budgets", DEFAULT_BUDGETS)
    entry: PresetEntry | None = None
    if "preset" in config:
        entry = preset(config["preset"])
        presentation, rs = entry.presentation, entry.rewriting
    else:
        path = Path(config["input"])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read {path}: {e.strerror}", e) from e
        presentation, rs = parse_presentation_file(text)
        if rs is not None:
            _warn_if_incomplete(rs)
    if rs is not None and "step_budget" in limits:
        rs = replace(rs, step_budget=limits["step_budget"])
    return Group(presentation, rs, entry, limits)


def _warn_if_incomplete(rs: RewritingSystem) -> None:
    violations = check_minimal(rs)
    if violations:
        logger.warning("rewriting system is not minimal: %d violations", len(violations))
    pairs = critical_pairs(rs)
    if pairs:
        logger.warning("rewriting system has %d unresolved critical pairs", len(pairs))


# Artifacts


def _emit(config: RunConfig, artifacts: Mapping[str, Callable[[], str]]) -> None:
    """Writes the artifacts whose suffix is among the requested formats."""
    formats = set(config.get("formats", []))
    chosen = {
        name: render() for name, render in artifacts.items() if name.rsplit(".", 1)[-1] in formats
    }
    if chosen:
        write_artifacts(Path(config.get("out_dir", ".")), chosen)


# Diagram construction


@dataclass(frozen=True)
class Filler:
    """Diagram constructions over one ball."""

    ball: CayleyBall
    presentation: Presentation
    supplier: Supplier
    fill: Callable[[Word], DiagramCombing]


def _order(group: Group) -> int:
    if group.entry is not None and group.entry.order is not None:
        return group.entry.order
    order = ball_stabilizes(group.rs.oracle(), group.presentation.alphabet, FINITE_SEARCH_RADIUS)
    if order is None:
        raise ConfigError(f"no empty sphere up to radius {FINITE_SEARCH_RADIUS}; not finite")
    return order


def _resolve(group: Group, method: str) -> str:
    if method != "auto":
        return method
    finite = group.entry is not None and group.entry.order is not None
    return "finite" if finite else "flow"


def make_filler(group: Group, method: str, radius: int, k: int | None) -> Filler:
    """Builds the ball and the filling construction for ``method``.

    Raises:
        ConfigError: If ``ac`` or ``thin`` is asked for without a constant.
    """
    if method in ("ac", "thin") and k is None:
        raise ConfigError(f"method {method} needs --k")
    if method == "finite":
        ball = group.ball(_order(group))
        ff = rewriting_flow(group.rs, ball)
        catalog_ = build_catalog(group.rs, ball)
        return Filler(
            ball,
            flow_presentation(ff),
            NDiagramBuilder(ff).filling,
            lambda w: build_finite_filling(w, catalog_, ball),
        )
    ball = group.ball(radius)
    presentation: Presentation
    supplier: Supplier
    match method:
        case "flow":
            ff = rewriting_flow(group.rs, ball)
            supplier, presentation = NDiagramBuilder(ff).filling, flow_presentation(ff)
        case "ac":
            assert k is not None
            supplier = NDiagramBuilder(ac_flow(ball, k)).filling
            presentation = ac_presentation(ball, k)
        case "thin":
            assert k is not None
            supplier, presentation = thin_supplier(k, ball), fellow_presentation(ball, k)
        case _:
            raise ConfigError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    return Filler(ball, presentation, supplier, lambda w: seashell(w, supplier, ball))


def grown[T](
    group: Group, method: str, k: int | None, start: int, work: Callable[[Filler], T]
) -> T:
    """Runs ``work`` on ever larger balls until the construction fits.

    Raises:
        TaggedError: The last error when no radius in the schedule works.
    """
    if method == "finite":
        return work(make_filler(group, method, 0, k))
    result = grow(
        lambda radius: work(make_filler(group, method, radius, k)),
        growth_config(start=start, times=GROW_TIMES, backoff="linear"),
    )
    if result.is_err():
        raise result.unwrap_err()
    return result.unwrap()


def _diagram_problems(
    d: VanKampenDiagram, combing: EdgeCombing | DiagramCombing, presentation: Presentation
) -> list[str]:
    word = combing.word if isinstance(combing, DiagramCombing) else None
    return list(validate(d, presentation, word).failures) + check_combing(combing)


# Commands


def _nf(config: RunConfig, group: Group) -> int:
    w = group.parse(str(config["args"]["word"]))
    print(group.render(normal_form(group.rs, w)))
    return EXIT_OK


def _gamma(config: RunConfig, group: Group) -> int:
    n = _int(config["args"], "n")
    prefix = bool(config["args"].get("prefix"))
    print(gamma_table(group.rs, n, prefix=prefix, node_budget=group.node_budget)[n])
    return EXIT_OK


def _ball(config: RunConfig, group: Group) -> int:
    n = _int(config["args"], "n")
    ball = group.ball(n)
    print(f"B({n}): {len(ball)} {'vertex' if len(ball) == 1 else 'vertices'}")
    for m in range(n + 1):
        print(f"  S({m}) {len(sphere(ball, m))}")
    if not ball.prefix_closed:
        print("  normal forms are not prefix-closed")
    _emit(
        config,
        {"ball.json": lambda: dumps(ball_json(ball)), "ball.dot": lambda: ball_dot(ball)},
    )
    return EXIT_OK


def _ac_check(config: RunConfig, group: Group) -> int:
    n = _int(config["args"], "n")
    k = _int(config["args"], "k")
    ball = group.ball(n + 1)
    passed = True
    for m in range(1, n + 1):
        report = check_almost_convex(ball, m, k)
        if report.witness is None:
            print(f"n={m} PASS ({report.pairs_checked} pairs)")
            continue
        passed = False
        g, h = report.witness
        gap = "disconnected" if report.inside_distance is None else report.inside_distance
        print(
            f"n={m} FAIL {group.render(ball.nf(g))} ~ {group.render(ball.nf(h))} "
            f"inside distance {gap} > {k}"
        )
    return _status(passed)


def _flow_function(group: Group, kind: str, ball: CayleyBall, k: int | None) -> FlowFunction:
    if kind == "rewriting":
        return rewriting_flow(group.rs, ball)
    if k is None:
        raise ConfigError("the ac flow function needs --k")
    return ac_flow(ball, k)


def _flow(config: RunConfig, group: Group) -> int:
    args = config["args"]
    radius = _optional_int(args, "radius") or 4
    ball = group.ball(radius)
    ff = _flow_function(group, str(args["kind"]), ball, _optional_int(args, "k"))
    _emit(config, {"flow.txt": lambda: "\n".join(export_triples(ff)) + "\n"})
    if args["action"] == "verify":
        report = verify_flow(ff)
        print(f"{ff.name} flow, {len(ff.assignment)} edges, k = {ff.bound_k}")
        print(f"  F1 failures {len(report.f1_failures)}")
        print(f"  F2d failures {len(report.f2d_failures)}")
        print(f"  F3 failures {len(report.f3_failures)}")
        print(f"  unusable near the boundary {len(report.unusable)}")
        if report.cycle is not None:
            print(f"  descent cycle through {len(report.cycle)} edges")
        else:
            print(f"  descent relation acyclic, verified to radius {report.radius}")
        return _status(report.passed)

    presentation = flow_presentation(ff)
    builder = NDiagramBuilder(ff)
    built = builder.build_recursive(radius - 1)
    problems: list[str] = []
    rows: list[dict[str, object]] = []
    for (v, letter), combing in sorted(built.items()):
        d = combing.diagram
        edge = f"{group.render(ball.nf(v))}:{ball.alphabet.names[letter]}"
        problems.extend(f"{edge}: {p}" for p in _diagram_problems(d, combing, presentation))
        if args["kind"] == "rewriting" and check_normal_form_paths(d):
            problems.append(f"{edge}: a vertex misses its normal-form path")
        rows.append(
            {
                "edge": edge,
                "faces": len(d.faces),
                "idiam": coarse_profile_intrinsic(d).diameter,
                "ediam": coarse_profile_extrinsic(d, ball).diameter,
            }
        )
    print(f"{len(built)} N-diagrams over B({radius - 1})")
    for problem in problems:
        print(f"  {problem}")
    _emit(config, {"ndiagrams.json": lambda: dumps(rows)})
    return _status(not problems)


def _parse_target(group: Group, target: str) -> tuple[Word, int | None]:
    word, sep, letter = target.rpartition(":")
    if not sep:
        return group.parse(target), None
    return group.parse(word), group.presentation.alphabet.index(letter.strip())


def _diagram(config: RunConfig, group: Group) -> int:
    args = config["args"]
    w, letter = _parse_target(group, str(args["target"]))
    method = _resolve(group, str(args.get("method") or "auto"))
    k = _optional_int(args, "k")

    def work(filler: Filler) -> tuple[Filler, EdgeCombing | DiagramCombing]:
        if letter is None:
            return filler, filler.fill(w)
        return filler, filler.supplier(filler.ball.element(w), letter)

    filler, combing = grown(group, method, k, len(w) // 2 + 2, work)
    d = combing.diagram
    intrinsic = coarse_profile_intrinsic(d)
    extrinsic = coarse_profile_extrinsic(d, filler.ball)
    problems = _diagram_problems(d, combing, filler.presentation)
    print(f"boundary {group.render(d.word)} ({method})")
    print(f"  vertices {d.num_vertices}, edges {len(d.edges)}, faces {len(d.faces)}")
    print(f"  idiam {intrinsic.diameter}, ediam {extrinsic.diameter}")
    if extrinsic.collapsed:
        print(f"  collapsed faces {len(extrinsic.collapsed)}")
    for problem in problems:
        print(f"  {problem}")
    print("  valid" if not problems else f"  {len(problems)} problems")
    _emit(
        config,
        {
            "diagram.json": lambda: dumps(diagram_json(d, intrinsic)),
            "diagram.svg": lambda: diagram_svg(d),
            "combing.json": lambda: dumps(combing_json(combing)),
        },
    )
    return _status(not problems)


def _read_words(group: Group, path: Path) -> list[Word]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}", e) from e
    words: list[Word] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        try:
            words.append(group.parse(content))
        except ParseError as e:
            raise ParseError(e.message, number) from e
    return words


def _report(error: TaggedError) -> None:
    sys.stderr.write(dumps(error.report()))


def _tameness(config: RunConfig, group: Group) -> int:
    args = config["args"]
    kind = "extrinsic" if args.get("kind") == "extrinsic" else "intrinsic"
    method = _resolve(group, str(args.get("method") or "auto"))
    k = _optional_int(args, "k")
    words_file = args.get("words")
    all_to = args.get("length")
    if (words_file is None) == (all_to is None):
        raise ConfigError("tameness needs exactly one of --words and --all-to")
    given = _read_words(group, Path(str(words_file))) if words_file is not None else None
    longest = int(all_to) if isinstance(all_to, int) else max(map(len, given or [()]))

    def work(filler: Filler) -> tuple[Filler, list[Word], list[Filled]]:
        words = given if given is not None else enumerate_identity_words(filler.ball, longest)
        results = [safe(lambda: filler.fill(w)) for w in words]
        for result in results:
            if result.is_err() and isinstance(result.unwrap_err(), RETRYABLE):
                raise result.unwrap_err()
        return filler, list(words), results

    filler, words, results = grown(group, method, k, longest // 2 + 2, work)
    combings, errors = Result.partition(results)
    for error in errors:
        _report(error)
    f = measure_tameness(combings, kind, filler.ball)
    bound = _tameness_bound(group, method, kind, filler, f.verified_to, args)
    print(
        f"{kind} tameness over {len(combings)} diagrams "
        f"({f.label}, verified to {_quarters(f.verified_to)})"
    )
    for x, y in f.as_rows():
        print(f"  f({_quarters(x)}) = {_quarters(y)}")
    passed = not errors
    if bound is not None:
        violations = f.violations(bound)
        passed = passed and not violations
        verdict = "holds" if not violations else f"fails at x = {_quarters(violations[0])}"
        print(f"  bound {verdict}")
    _emit(
        config,
        {
            f"tameness_{kind}.csv": lambda: tameness_csv(f, bound),
            f"tameness_{kind}.json": lambda: dumps(
                _word_records(group, filler.ball, words, results)
            ),
        },
    )
    return _status(passed)


def _word_records(
    group: Group,
    ball: CayleyBall,
    words: Sequence[Word],
    results: Sequence[Filled],
) -> list[dict[str, object]]:
    """One record per input word: its diagram summary, or the error report."""

    def summary(combing: DiagramCombing) -> dict[str, object]:
        d = combing.diagram
        return {
            "faces": len(d.faces),
            "idiam": coarse_profile_intrinsic(d).diameter,
            "ediam": coarse_profile_extrinsic(d, ball).diameter,
        }

    return [
        {"word": group.render(w), **result.map(summary).serialize()}
        for w, result in zip(words, results)
    ]


def _tameness_bound(
    group: Group,
    method: str,
    kind: str,
    filler: Filler,
    x_max: int,
    args: Mapping[str, object],
) -> QuarterBound | None:
    if not args.get("bound"):
        return None
    if method == "finite":
        order = len(filler.ball)
        widest = 0
        if kind == "intrinsic":
            catalog_ = build_catalog(group.rs, filler.ball)
            widest = max(
                (coarse_profile_intrinsic(c.diagram).diameter for c in catalog_.values()),
                default=0,
            )
        constant = 4 * (order + widest) + 2
        return lambda x: constant
    if method == "flow":
        return rsgrowth_quarters(group.rs, x_max, node_budget=group.node_budget)
    raise ConfigError(f"no bound function for method {method}")


def _bounds(config: RunConfig, group: Group) -> int:
    n = _int(config["args"], "n")
    rho = rewriting_presentation(group.rs).longest_relator
    n_max = n + rho + 1

    def work(filler: Filler) -> list[list[int]]:
        ball = filler.ball
        ff = rewriting_flow(group.rs, ball)
        builder = NDiagramBuilder(ff)
        suite = compute_mus(compute_kappas(ball, builder.build_recursive(n_max), n_max), rho)
        t_i, t_e = compute_t_functions(ball, n)
        rows: list[list[int]] = []
        for m in range(n + 1):
            rows.append(
                [
                    m,
                    suite.k_ti[m],
                    suite.k_te[m],
                    suite.k_xi[m],
                    suite.k_xe[m],
                    suite.mu_i[m],
                    suite.mu_e[m],
                    t_i[m],
                    t_e[m],
                    k_r_prime(ff, m, node_budget=group.node_budget),
                    rsgrowth_bound(group.rs, m, node_budget=group.node_budget),
                ]
            )
        return rows

    rows = grown(group, "flow", None, n_max + 2, work)
    lines = [BOUNDS_HEADER] + [",".join(map(str, row)) for row in rows]
    print(f"ρ = {rho}")
    for line in lines:
        print(line)
    _emit(config, {"bounds.csv": lambda: "\n".join(lines) + "\n"})
    return EXIT_OK


def _show(config: RunConfig, group: Group) -> int:
    text = format_presentation(group.presentation, group.rewriting)
    sys.stdout.write(text)
    _emit(config, {"presentation.txt": lambda: text})
    return EXIT_OK


def _check_all(config: RunConfig) -> int:
    results = run_all(config.get("budgets", DEFAULT_BUDGETS))
    for result in results:
        print(result.line())
    return _status(all(r.passed for r in results))


def _presets() -> int:
    for name in catalog():
        entry = preset(name)
        order = "∞" if entry.order is None else str(entry.order)
        flag = " (experimental)" if entry.experimental else ""
        print(f"{name}\torder {order}{flag}\t{entry.notes}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, Group], int]] = {
    "nf": _nf,
    "gamma": _gamma,
    "ball": _ball,
    "ac-check": _ac_check,
    "flow": _flow,
    "diagram": _diagram,
    "tameness": _tameness,
    "bounds": _bounds,
    "show": _show,
}


def _dispatch(config: RunConfig) -> int:
    command = config["command"]
    if command == "check-all":
        return _check_all(config)
    if command == "presets":
        return _presets()
    handler = COMMANDS.get(command)
    if handler is None:
        raise ConfigError(f"unknown command {command!r}")
    return handler(config, load_group(config))


def run(config: RunConfig) -> int:
    """Runs one command and returns its exit status.

    Raised errors become a JSON report on stderr and the error's exit code.

    Raises:
        Panic: If an internal invariant breaks.

    Example:
        >>> run({"command": "gamma", "preset": "Z2", "args": {"n": 4}})
        4
        0
    """
    return (
        safe(lambda: check_run_config(config))
        .and_then(lambda checked: safe(lambda: _dispatch(checked)))
        .match({"ok": lambda code: code, "err": lambda error: _failed(config["command"], error)})
    )


def _failed(command: str, error: TaggedError) -> int:
    logger.debug("command %s failed", command, exc_info=error)
    _report(error)
    return error.exit_code


# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tamefill",
        description="Van Kampen diagrams, flow functions and tame filling functions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--preset", help="named example group (see `tamefill presets`)")
    source.add_argument("--input", help="presentation file")
    parser.add_argument("--budget", type=int, help="step and node budget, overriding the env")
    parser.add_argument("--out", default=".", help="artifact directory")
    parser.add_argument(
        "--format",
        default="",
        help=f"comma-separated artifact formats among {', '.join(EXPORT_FORMATS)}",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    nf = commands.add_parser("nf", help="normal form of a word")
    nf.add_argument("word")

    gamma = commands.add_parser("gamma", help="string growth complexity γ(N)")
    gamma.add_argument("n", type=int)
    gamma.add_argument("--prefix", action="store_true", help="prefix rewriting only")

    ball = commands.add_parser("ball", help="enumerate B(N)")
    ball.add_argument("n", type=int)

    ac = commands.add_parser("ac-check", help="almost convexity up to radius N with constant K")
    ac.add_argument("n", type=int)
    ac.add_argument("k", type=int)

    flow = commands.add_parser("flow", help="verify a flow function or build its N-diagrams")
    flow.add_argument("action", choices=("verify", "build"))
    flow.add_argument("kind", choices=("rewriting", "ac"))
    flow.add_argument("--radius", type=int, default=4)
    flow.add_argument("--k", type=int)

    diagram = commands.add_parser("diagram", help="diagram of a word, or of an edge W:a")
    diagram.add_argument("target")
    diagram.add_argument("--method", choices=METHODS, default="auto")
    diagram.add_argument("--k", type=int, help="constant for the ac and thin methods")

    tameness = commands.add_parser("tameness", help="measure a tame filling function")
    tameness.add_argument("kind", choices=("intrinsic", "extrinsic"))
    words = tameness.add_mutually_exclusive_group(required=True)
    words.add_argument("--words", help="file with one word per line")
    words.add_argument("--all-to", type=int, dest="length", help="all identity words up to L")
    tameness.add_argument("--method", choices=METHODS, default="auto")
    tameness.add_argument("--k", type=int)
    tameness.add_argument("--bound", action="store_true", help="check against the bound function")

    bounds = commands.add_parser("bounds", help="kappa, mu, k_r and growth bound tables")
    bounds.add_argument("n", type=int)

    commands.add_parser("show", help="print the presentation in file format")
    commands.add_parser("check-all", help="run the acceptance suite")
    commands.add_parser("presets", help="list the preset groups")
    return parser


_GLOBAL_OPTIONS = ("preset", "input", "budget", "out", "format", "verbose", "command")


def config_from_args(ns: argparse.Namespace, env: Mapping[str, str] | None = None) -> RunConfig:
    """Turns parsed arguments into a ``RunConfig``.

    Raises:
        ConfigError: On a malformed budget or format list.
    """
    options = vars(ns)
    limits = budgets_from_env(env)
    if ns.budget is not None:
        limits = budgets(step_budget=ns.budget, node_budget=ns.budget)
    formats: list[ExportFormat] = []
    for fmt in filter(None, (part.strip() for part in str(ns.format).split(","))):
        if fmt not in EXPORT_FORMATS:
            raise ConfigError(f"Unknown export format: {fmt}")
        formats.append(fmt)
    config = RunConfig(
        command=ns.command,
        args={key: value for key, value in options.items() if key not in _GLOBAL_OPTIONS},
        budgets=limits,
        out_dir=ns.out,
        formats=formats,
    )
    if ns.preset is not None:
        config["preset"] = ns.preset
    if ns.input is not None:
        config["input"] = ns.input
    return config


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(ns.verbose, 2)]
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        return safe(lambda: config_from_args(ns)).match(
            {"ok": run, "err": lambda error: _failed(str(ns.command), error)}
        )
    except Panic as e:
        _report(e)
        return e.exit_code
