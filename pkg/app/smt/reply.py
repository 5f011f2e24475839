import pyparsing as pp

from app.errors import SolverError

_QUOTED = pp.QuotedString('"', esc_quote='""', unquote_results=False) | pp.QuotedString(
    "|", unquote_results=False
)
_SEXPR = pp.nested_expr("(", ")", ignore_expr=_QUOTED)
_REPLY = _SEXPR | pp.Word(pp.printables, exclude_chars="()")


def parse_reply(text: str):
    """One solver reply as nested lists of strings."""
    text = text.strip()
    if text.startswith("(error"):
        raise SolverError(text)
    try:
        return _REPLY.parse_string(text, parse_all=True).as_list()[0]
    except pp.ParseException as exc:
        raise SolverError(f"Unreadable solver reply {text!r}: {exc}") from exc


def normalize_value(value) -> str:
    """Strip ``(as X Sort)`` wrappers and |quotes| from a model value."""
    if isinstance(value, list):
        if len(value) == 3 and value[0] == "as":
            return normalize_value(value[1])
        return " ".join(normalize_value(v) for v in value)
    if len(value) > 1 and value[0] == "|" and value[-1] == "|":
        return value[1:-1]
    return value


def parse_values(text: str) -> list[tuple[object, str]]:
    """The (term, value) pairs of a get-value reply, in request order."""
    reply = parse_reply(text)
    if not isinstance(reply, list):
        raise SolverError(f"Expected a get-value reply, got {text!r}")
    pairs = []
    for entry in reply:
        if not isinstance(entry, list) or len(entry) != 2:
            raise SolverError(f"Malformed get-value entry {entry!r}")
        pairs.append((entry[0], normalize_value(entry[1])))
    return pairs


def balanced(text: str) -> bool:
    """Whether ``text`` holds at least one complete reply."""
    depth = 0
    seen = False
    in_quote = None
    for ch in text:
        if in_quote:
            if ch == in_quote:
                in_quote = None
            continue
        if ch in "\"|":
            in_quote = ch
        elif ch == "(":
            depth += 1
            seen = True
        elif ch == ")":
            depth -= 1
        elif not ch.isspace():
            seen = True
    return seen and depth == 0
