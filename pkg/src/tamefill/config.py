import os
from typing import Literal, Mapping, NotRequired, TypeAlias, TypedDict

from .error import ConfigError

BUDGET_ENV = "TAMEFILL_BUDGET"

ExportFormat: TypeAlias = Literal["json", "dot", "svg", "csv", "txt"]
EXPORT_FORMATS: tuple[ExportFormat, ...] = ("json", "dot", "svg", "csv", "txt")

# Commands that run without a group source.
SOURCELESS_COMMANDS = ("check-all", "presets")


class Budgets(TypedDict, total=False):
    """Guards for searches that are not known to terminate quickly.

    Attributes:
        step_budget: Rewrite steps allowed per normalization.
        node_budget: Nodes allowed per reachability or enumeration search.
    """

    step_budget: int
    node_budget: int


DEFAULT_BUDGETS: Budgets = {"step_budget": 10_000, "node_budget": 200_000}


class RunConfig(TypedDict):
    """One CLI invocation.

    Exactly one of ``preset`` and ``input`` is set, except for
    ``SOURCELESS_COMMANDS``, which take neither.
    """

    command: str
    args: dict[str, object]
    preset: NotRequired[str]
    input: NotRequired[str]
    budgets: NotRequired[Budgets]
    out_dir: NotRequired[str]
    formats: NotRequired[list[ExportFormat]]


def budgets(*, step_budget: int | None = None, node_budget: int | None = None) -> Budgets:
    """Budgets with defaults for anything not given."""
    cfg = Budgets(**DEFAULT_BUDGETS)
    if step_budget is not None:
        cfg["step_budget"] = step_budget
    if node_budget is not None:
        cfg["node_budget"] = node_budget
    _check_budgets(cfg)
    return cfg


def budgets_from_env(env: Mapping[str, str] | None = None) -> Budgets:
    """Reads budget overrides from ``TAMEFILL_BUDGET``.

    The value is either one integer applied to both budgets, or
    comma-separated ``step=N`` / ``node=M`` pairs.

    Raises:
        ConfigError: If the value cannot be parsed or is not positive.

    Example:
        >>> budgets_from_env({"TAMEFILL_BUDGET": "step=500,node=9000"})
        {'step_budget': 500, 'node_budget': 9000}
    """
    source = os.environ if env is None else env
    raw = source.get(BUDGET_ENV, "").strip()
    if not raw:
        return budgets()
    if raw.isdigit():
        return budgets(step_budget=int(raw), node_budget=int(raw))
    values: dict[str, int] = {}
    for part in raw.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("step", "node") or not value.strip().isdigit():
            raise ConfigError(f"Malformed {BUDGET_ENV} entry: {part!r}")
        values[key] = int(value)
    return budgets(step_budget=values.get("step"), node_budget=values.get("node"))


def _check_budgets(cfg: Budgets) -> None:
    for key, value in cfg.items():
        if not isinstance(value, int) or value <= 0:
            raise ConfigError(f"{key} must be a positive integer, got {value!r}")


def check_run_config(config: RunConfig) -> RunConfig:
    """Validates a RunConfig, returning it unchanged.

    Raises:
        ConfigError: On a missing or duplicated group source, a negative
            radius-like argument, non-positive budgets or unknown formats.
    """
    has_source = ("preset" in config) or ("input" in config)
    if config["command"] in SOURCELESS_COMMANDS:
        if has_source:
            raise ConfigError(f"{config['command']} takes no --preset or --input")
    elif ("preset" in config) == ("input" in config):
        raise ConfigError("Exactly one of --preset and --input is required")
    for key in ("radius", "n", "k", "length"):
        value = config["args"].get(key)
        if isinstance(value, int) and value < 0:
            raise ConfigError(f"{key} must be >= 0, got {value}")
    if "budgets" in config:
        _check_budgets(config["budgets"])
    for fmt in config.get("formats", []):
        if fmt not in EXPORT_FORMATS:
            raise ConfigError(f"Unknown export format: {fmt}")
    return config
