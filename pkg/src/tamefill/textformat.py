"""The line-oriented presentation file format.

::

    # Z^2
    generators: a A b B
    inverses: a A, b B
    rule: b a -> a b
    relator: a b A B

``#`` starts a comment. ``generators:`` and ``inverses:`` are required and
come first. With ``relator:`` lines the presentation is their symmetric
closure; otherwise it is derived from the rules.
"""

from .error import ParseError
from .rewriting import Rule, RewritingSystem, rewriting_presentation
from .words import Alphabet, Presentation, Word, symmetrize

_DIRECTIVES = ("generators", "inverses", "relator", "rule")


def _parse_word(alphabet: Alphabet, text: str, line: int) -> Word:
    try:
        return alphabet.parse(text)
    except ParseError as e:
        raise ParseError(e.message, line) from e


def parse_presentation_file(text: str) -> tuple[Presentation, RewritingSystem | None]:
    """Parses a presentation file.

    Raises:
        ParseError: On a malformed line, with its 1-based line number, or
            with line 0 when the generators are missing.

    Example:
        >>> p, rs = parse_presentation_file("generators: a A\\ninverses: a A\\nrule: a a a -> ")
        >>> len(rs.rules)
        1
    """
    names: list[str] | None = None
    alphabet: Alphabet | None = None
    relators: list[Word] = []
    rules: list[Rule] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        directive, sep, rest = content.partition(":")
        directive = directive.strip()
        if not sep or directive not in _DIRECTIVES:
            raise ParseError(f"expected one of {', '.join(_DIRECTIVES)}", number)
        rest = rest.strip()
        match directive:
            case "generators":
                if names is not None:
                    raise ParseError("generators declared twice", number)
                names = rest.split()
                if not names:
                    raise ParseError("no generators given", number)
            case "inverses":
                if names is None:
                    raise ParseError("inverses before generators", number)
                if alphabet is not None:
                    raise ParseError("inverses declared twice", number)
                pairs: list[tuple[str, str]] = []
                for chunk in rest.split(","):
                    pair = chunk.split()
                    if len(pair) != 2:
                        raise ParseError(f"inverse pair {chunk.strip()!r} is not two names", number)
                    pairs.append((pair[0], pair[1]))
                try:
                    alphabet = Alphabet.pairs(names, pairs)
                except ParseError as e:
                    raise ParseError(e.message, number) from e
            case "relator":
                if alphabet is None:
                    raise ParseError("relator before inverses", number)
                word = _parse_word(alphabet, rest, number)
                if not word:
                    raise ParseError("empty relator", number)
                relators.append(word)
            case _:
                if alphabet is None:
                    raise ParseError("rule before inverses", number)
                lhs, arrow, rhs = rest.partition("->")
                if not arrow:
                    raise ParseError("rule needs 'LHS -> RHS'", number)
                left, right = _parse_word(alphabet, lhs, number), _parse_word(alphabet, rhs, number)
                try:
                    rules.append(Rule(left, right))
                except ParseError as e:
                    raise ParseError(e.message, number) from e
    if names is None:
        raise ParseError("generators required", 0)
    if alphabet is None:
        raise ParseError("inverses required", 0)

    rs = None
    if rules:
        try:
            rs = RewritingSystem(alphabet, tuple(rules))
        except ParseError as e:
            raise ParseError(e.message, 0) from e
    if relators or rs is None:
        presentation = symmetrize(Presentation(alphabet, tuple(relators)))
    else:
        presentation = rewriting_presentation(rs)
    return presentation, rs


def format_presentation(p: Presentation, rs: RewritingSystem | None = None) -> str:
    """Writes ``p`` and ``rs`` in the file format; parsing the result gives them back."""
    alphabet = p.alphabet
    lines = [f"generators: {' '.join(alphabet.names)}"]
    pairs = [
        f"{alphabet.names[x]} {alphabet.names[alphabet.inverse(x)]}"
        for x in alphabet
        if x <= alphabet.inverse(x)
    ]
    lines.append(f"inverses: {', '.join(pairs)}")
    if rs is not None:
        lines.extend(
            f"rule: {alphabet.render(rule.lhs)} -> {alphabet.render(rule.rhs)}".rstrip()
            for rule in rs.rules
        )
    if rs is None or p != rewriting_presentation(rs):
        lines.extend(f"relator: {alphabet.render(r)}" for r in p.relators)
    return "\n".join(lines) + "\n"
