"""Named example groups and the normal-form predicates of Thompson's F and BS(1,p).

Every non-experimental rewriting system is checked for minimality and
critical pairs the first time it is loaded.
"""

import logging
from dataclasses import dataclass
from functools import cache
from itertools import groupby
from typing import Callable

from .cayley import build_ball
from .error import ConfigError, UnknownPreset, WrongAlphabet, panic
from .rewriting import (
    CriticalPair,
    RewritingSystem,
    check_minimal,
    critical_pairs,
    rewriting_presentation,
)
from .words import Alphabet, Presentation, Word, symmetrize

logger = logging.getLogger(__name__)

# Largest m in the truncated BS(1,2) rules T a^{2m} t -> a^m.
BS12_TRUNCATION = 8

# Radius on which an experimental system's normal forms are matched against their language.
AUDIT_RADIUS = 4


@dataclass(frozen=True)
class PresetEntry:
    """A named group.

    Attributes:
        name: Catalog key.
        presentation: Symmetrized presentation.
        rewriting: Complete rewriting system, when one ships.
        order: Group order for finite groups.
        experimental: Set when the rewriting system is not known to be complete.
        notes: Expected properties, for listings.
        nf_language: Membership test the normal forms are expected to satisfy.
    """

    name: str
    presentation: Presentation
    rewriting: RewritingSystem | None = None
    order: int | None = None
    experimental: bool = False
    notes: str = ""
    nf_language: Callable[[Word], bool] | None = None

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet


def _cancellations(alphabet: Alphabet) -> list[tuple[str, str]]:
    names = alphabet.names
    return [(f"{names[x]} {names[alphabet.inverse(x)]}", "") for x in alphabet]


def _from_rules(
    name: str,
    alphabet: Alphabet,
    rules: list[tuple[str, str]],
    order: int | None = None,
    experimental: bool = False,
    notes: str = "",
    nf_language: Callable[[Word], bool] | None = None,
) -> PresetEntry:
    rs = RewritingSystem.from_rules(alphabet, _cancellations(alphabet) + rules)
    return PresetEntry(
        name, rewriting_presentation(rs), rs, order, experimental, notes, nf_language
    )


def free_preset(rank: int) -> PresetEntry:
    return _from_rules(
        f"F{rank}",
        Alphabet.standard(rank),
        [],
        notes="free group; length-reducing rules, so γ(n) = n",
    )


def cyclic_preset(n: int) -> PresetEntry:
    """Z/n for odd n with the shortlex rules ``a^{m+1} -> A^m`` and ``A^{m+1} -> a^m``.

    Raises:
        ConfigError: If ``n`` is even or less than 3.
    """
    if n < 3 or n % 2 == 0:
        raise ConfigError(f"cyclic presets need an odd order of at least 3, got {n}")
    m = (n - 1) // 2

    def power(x: str, e: int) -> str:
        return " ".join(x * e)

    return _from_rules(
        f"Z{n}",
        Alphabet.standard(1),
        [(power("a", m + 1), power("A", m)), (power("A", m + 1), power("a", m))],
        order=n,
        notes=f"finite of order {n}; the ball stabilizes at radius {m}",
    )


def _z2() -> PresetEntry:
    return _from_rules(
        "Z2",
        Alphabet.standard(2),
        [("b a", "a b"), ("b A", "A b"), ("B a", "a B"), ("B A", "A B")],
        notes="free abelian of rank 2; normal forms a^i b^j are geodesic, γ(n) = n",
    )


def _s3() -> PresetEntry:
    alphabet = Alphabet.pairs(["a", "b", "B"], [("a", "a"), ("b", "B")])
    rs = RewritingSystem.from_rules(
        alphabet,
        [
            ("a a", ""),
            ("b B", ""),
            ("B b", ""),
            ("b b", "B"),
            ("B B", "b"),
            ("b a", "a B"),
            ("B a", "a b"),
        ],
    )
    relators = (alphabet.parse("a a"), alphabet.parse("b b b"), alphabet.parse("a b a b"))
    return PresetEntry(
        "S3",
        symmetrize(Presentation(alphabet, relators)),
        rs,
        order=6,
        notes="symmetric group on three letters, a of order 2 and b of order 3",
    )


def _bs12() -> PresetEntry:
    rules = [("t a", "a a t"), ("t A", "A A t"), ("a T", "T a a"), ("A T", "T A A")]
    for m in range(1, BS12_TRUNCATION + 1):
        for x in ("a", "A"):
            rules.append((f"T {' '.join(x * (2 * m))} t", " ".join(x * m)))
    return _from_rules(
        "BS12",
        Alphabet.pairs(["a", "A", "t", "T"], [("a", "A"), ("t", "T")]),
        rules,
        experimental=True,
        notes=(
            f"BS(1,2) = <a, t | t a T = a a>; the infinite rule family is cut at m = "
            f"{BS12_TRUNCATION}, so words needing a longer collapse stay unreduced"
        ),
        nf_language=lambda w: bs1p_nf_member(w, 2),
    )


_BUILDERS: dict[str, Callable[[], PresetEntry]] = {
    "F1": lambda: free_preset(1),
    "F2": lambda: free_preset(2),
    "Z2": _z2,
    "Z3": lambda: cyclic_preset(3),
    "Z5": lambda: cyclic_preset(5),
    "S3": _s3,
    "BS12": _bs12,
}


def catalog() -> list[str]:
    return list(_BUILDERS)


@cache
def preset(name: str) -> PresetEntry:
    """Loads a named preset.

    Raises:
        UnknownPreset: If no preset has this name.

    Example:
        >>> len(preset("Z2").rewriting.rules)
        8
    """
    builder = _BUILDERS.get(name)
    if builder is None:
        raise UnknownPreset(name)
    entry = builder()
    rs = entry.rewriting
    if rs is not None and not entry.experimental:
        if check_minimal(rs) or critical_pairs(rs):
            panic(f"preset {name} ships a rewriting system that is not minimal and complete")
    if entry.experimental:
        audit = audit_experimental(entry)
        for pair in audit.pairs:
            logger.warning(
                "preset %s: unresolved critical pair on %r (%r vs %r)",
                name,
                entry.alphabet.render(pair.overlap),
                entry.alphabet.render(pair.left),
                entry.alphabet.render(pair.right),
            )
        if audit.outside_language:
            logger.warning(
                "preset %s: %d normal forms in B(%d) fall outside the expected language",
                name,
                len(audit.outside_language),
                audit.radius,
            )
    logger.debug("loaded preset %s", name)
    return entry


@dataclass(frozen=True)
class ExperimentalAudit:
    """What an experimental preset's system gets wrong, as far as it was looked at."""

    radius: int
    pairs: list[CriticalPair]
    outside_language: list[Word]


def audit_experimental(entry: PresetEntry, radius: int = AUDIT_RADIUS) -> ExperimentalAudit:
    """Critical pairs of the system and normal forms in B(radius) outside ``nf_language``.

    Raises:
        BudgetExceeded: If a normalization runs past the step budget.
    """
    rs = entry.rewriting
    if rs is None:
        return ExperimentalAudit(radius, [], [])
    outside: list[Word] = []
    if entry.nf_language is not None:
        ball = build_ball(rs.oracle(), rs.alphabet, radius)
        outside = [ball.nf(v) for v in range(len(ball)) if not entry.nf_language(ball.nf(v))]
    return ExperimentalAudit(radius, critical_pairs(rs), outside)


# Normal-form languages

THOMPSON_NAMES = ("x0", "X0", "x1", "X1")
BS_NAMES = ("a", "A", "t", "T")

THOMPSON_ALPHABET = Alphabet.pairs(THOMPSON_NAMES, [("x0", "X0"), ("x1", "X1")])
BS_ALPHABET = Alphabet.pairs(BS_NAMES, [("a", "A"), ("t", "T")])


def _require(alphabet: Alphabet, names: tuple[str, ...]) -> None:
    if alphabet.names != names:
        raise WrongAlphabet(names, alphabet.names)


def thompson_nf_member(w: Word, alphabet: Alphabet = THOMPSON_ALPHABET) -> bool:
    """Membership in the normal-form language of Thompson's group F.

    No ``x0^η x0^-η``, ``x1^η x1^-η`` or ``x0 x0 x1^η`` factor, and every
    prefix has ``x0``-exponent sum at most 0.

    Raises:
        WrongAlphabet: Unless the alphabet is ``x0 X0 x1 X1``.
    """
    _require(alphabet, THOMPSON_NAMES)
    x0, big_x0, x1, big_x1 = range(4)
    for left, right in zip(w, w[1:]):
        if right == alphabet.inverse(left):
            return False
    for first, second, third in zip(w, w[1:], w[2:]):
        if first == second == x0 and third in (x1, big_x1):
            return False
    expsum = 0
    for letter in w:
        expsum += 1 if letter == x0 else -1 if letter == big_x0 else 0
        if expsum > 0:
            return False
    return True


def bs1p_nf_member(w: Word, p: int, alphabet: Alphabet = BS_ALPHABET) -> bool:
    """Membership in ``{t^-i a^m t^k : p ∤ m or 0 ∈ {i, k}}`` for BS(1,p).

    Raises:
        WrongAlphabet: Unless the alphabet is ``a A t T``.
    """
    _require(alphabet, BS_NAMES)
    a, big_a, t, big_t = range(4)
    runs = [(letter, len(list(group))) for letter, group in groupby(w)]
    i = k = m = 0
    if runs and runs[0][0] == big_t:
        i = runs.pop(0)[1]
    if runs and runs[-1][0] == t:
        k = runs.pop()[1]
    if len(runs) > 1 or (runs and runs[0][0] not in (a, big_a)):
        return False
    if runs:
        m = runs[0][1] if runs[0][0] == a else -runs[0][1]
    return m % p != 0 or i == 0 or k == 0
