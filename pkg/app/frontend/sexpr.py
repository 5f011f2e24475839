"""Positioned s-expression reader for configuration files."""
from dataclasses import dataclass

import pyparsing as pp

from app.errors import ParseError


@dataclass(frozen=True)
class Symbol:
    text: str
    line: int
    column: int

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    column: int

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def head(self) -> str | None:
        if self.items and isinstance(self.items[0], Symbol):
            return self.items[0].text
        return None


def _symbol(s: str, loc: int, toks: pp.ParseResults) -> Symbol:
    return Symbol(toks[0], pp.lineno(loc, s), pp.col(loc, s))


def _slist(s: str, loc: int, toks: pp.ParseResults) -> SList:
    return SList(tuple(toks[1]), pp.lineno(loc, s), pp.col(loc, s))


_ATOM = pp.Regex(r"[^\s();]+").set_parse_action(_symbol)
_SEXPR = pp.Forward()
_LIST = (pp.Literal("(") + pp.Group(pp.ZeroOrMore(_SEXPR)) + pp.Suppress(")")).set_parse_action(_slist)
_SEXPR <<= _ATOM | _LIST
_DOCUMENT = pp.ZeroOrMore(_SEXPR)
_DOCUMENT.ignore(";" + pp.rest_of_line)


def read_all(text: str) -> list:
    try:
        return list(_DOCUMENT.parse_string(text, parse_all=True))
    except pp.ParseException as exc:
        raise ParseError(f"syntax error: {exc.msg}", exc.lineno, exc.col) from exc


def read_one(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one expression, found {len(forms)}", 1, 1)
    return forms[0]
