"""Minimal S-expression reader/writer with positions for error messages."""

from __future__ import annotations

from .errors import ParseError


class Atom(str):
    """A bare symbol; carries its 1-based source position."""

    line: int
    col: int

    def __new__(cls, value: str, line: int = 0, col: int = 0):
        out = super().__new__(cls, value)
        out.line = line
        out.col = col
        return out


SExpr = Atom | list


def tokenize(text: str) -> list[Atom]:
    tokens: list[Atom] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(Atom(ch, line, col))
            col += 1
            i += 1
        else:
            start, sl, sc = i, line, col
            while i < len(text) and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            tokens.append(Atom(text[start:i], sl, sc))
    return tokens


def parse(text: str) -> list[SExpr]:
    """Parse a sequence of top-level S-expressions."""
    tokens = tokenize(text)
    out: list[SExpr] = []
    stack: list[list] = []
    for tok in tokens:
        if tok == "(":
            lst: list = []
            setattr_pos(lst, tok)
            if stack:
                stack[-1].append(lst)
            else:
                out.append(lst)
            stack.append(lst)
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", tok.line, tok.col)
            stack.pop()
        else:
            if stack:
                stack[-1].append(tok)
            else:
                out.append(tok)
    if stack:
        pos = _POSITIONS.get(id(stack[-1]), (0, 0))
        raise ParseError("unbalanced '('", *pos)
    return out


_POSITIONS: dict[int, tuple[int, int]] = {}


def setattr_pos(lst: list, tok: Atom) -> None:
    _POSITIONS[id(lst)] = (tok.line, tok.col)


def position(node: SExpr) -> tuple[int, int]:
    if isinstance(node, Atom):
        return node.line, node.col
    return _POSITIONS.get(id(node), (0, 0))


def fail(node: SExpr, message: str) -> ParseError:
    line, col = position(node)
    return ParseError(message, line, col)


def expect_list(node: SExpr, head: str | None = None) -> list:
    if not isinstance(node, list):
        raise fail(node, f"expected a list{' starting with ' + head if head else ''}")
    if head is not None:
        if not node or node[0] != head:
            raise fail(node, f"expected a ({head} ...) form")
    return node


def expect_atom(node: SExpr) -> Atom:
    if not isinstance(node, Atom):
        raise fail(node, "expected an atom")
    return node


def keywords(items: list) -> tuple[dict[str, SExpr], list[SExpr]]:
    """Split ``:key value`` pairs from positional entries."""
    opts: dict[str, SExpr] = {}
    rest: list[SExpr] = []
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, Atom) and node.startswith(":"):
            if i + 1 >= len(items):
                raise fail(node, f"keyword {node} lacks a value")
            opts[str(node[1:])] = items[i + 1]
            i += 2
        else:
            rest.append(node)
            i += 1
    return opts, rest


def to_text(node: SExpr | str) -> str:
    if isinstance(node, list):
        return "(" + " ".join(to_text(c) for c in node) + ")"
    return str(node)
