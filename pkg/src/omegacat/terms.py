"""Inductive terms of the free self-dual reflexive globular magma over a
globular set: generators, identities, binary compositions and involutions.

Size counts generator, composition and involution nodes; identity wrappers
are free because the dimension truncation already bounds them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .config import Mode
from .errors import DomainError
from .globular import CellRef, GlobularSet, Side


@dataclass(frozen=True)
class Gen:
    cell: CellRef


@dataclass(frozen=True)
class Id:
    body: "Term"


@dataclass(frozen=True)
class Comp:
    level: int
    left: "Term"   # later factor: target side
    right: "Term"  # earlier factor: source side


@dataclass(frozen=True)
class Inv:
    level: int
    body: "Term"


Term = Union[Gen, Id, Comp, Inv]


def gen(cell: CellRef) -> Term:
    return Gen(cell)


def idt(body: Term) -> Term:
    return Id(body)


def comp(level: int, left: Term, right: Term) -> Term:
    dl, dr = dim_of(left), dim_of(right)
    if dl != dr:
        raise DomainError(f"comp: factor dimensions differ ({dl} vs {dr})")
    if not 0 <= level < dl:
        raise DomainError(f"comp: level {level} not below dimension {dl}")
    return Comp(level, left, right)


def inv(level: int, body: Term) -> Term:
    """Involution former; levels at or above the dimension ground away."""
    if level < 0:
        raise DomainError("inv: negative level")
    if level >= dim_of(body):
        return body
    return Inv(level, body)


@lru_cache(maxsize=None)
def dim_of(t: Term) -> int:
    if isinstance(t, Gen):
        return t.cell.dim
    if isinstance(t, Id):
        return dim_of(t.body) + 1
    if isinstance(t, Comp):
        return dim_of(t.left)
    return dim_of(t.body)


@lru_cache(maxsize=None)
def term_size(t: Term) -> int:
    if isinstance(t, Gen):
        return 1
    if isinstance(t, Id):
        return term_size(t.body)
    if isinstance(t, Comp):
        return 1 + term_size(t.left) + term_size(t.right)
    return 1 + term_size(t.body)


def render(t: Term) -> str:
    if isinstance(t, Gen):
        return f"(gen {t.cell.id})"
    if isinstance(t, Id):
        return f"(id {render(t.body)})"
    if isinstance(t, Comp):
        return f"(comp {t.level} {render(t.left)} {render(t.right)})"
    return f"(inv {t.level} {render(t.body)})"


def boundary_of_term(gs: GlobularSet, t: Term, side: Side) -> Term:
    """One-step boundary by the structural rules.

    Composites at the top level project to a factor; involutions at the top
    level swap sides; everything else pushes inside. Generator leaves
    resolve against ``gs``.
    """
    n = dim_of(t)
    if n < 1:
        raise DomainError("0-dimensional term has no boundary")
    if isinstance(t, Gen):
        return Gen(gs.boundary(t.cell, side))
    if isinstance(t, Id):
        return t.body
    if isinstance(t, Comp):
        if t.level == n - 1:
            factor = t.right if side == "source" else t.left
            return boundary_of_term(gs, factor, side)
        return Comp(t.level, boundary_of_term(gs, t.left, side),
                    boundary_of_term(gs, t.right, side))
    if isinstance(t, Inv):
        if t.level == n - 1:
            flipped: Side = "target" if side == "source" else "source"
            return boundary_of_term(gs, t.body, flipped)
        return Inv(t.level, boundary_of_term(gs, t.body, side))
    raise DomainError("unknown term node")


def iterated_term_boundary(gs: GlobularSet, t: Term, k: int, side: Side) -> Term:
    for _ in range(k):
        t = boundary_of_term(gs, t, side)
    return t


@dataclass(frozen=True)
class TermViolation:
    path: tuple[int, ...]
    detail: str

    def as_dict(self) -> dict:
        return {"path": list(self.path), "detail": self.detail}


def well_formed(t: Term, gs: GlobularSet, mode: Mode) -> list[TermViolation]:
    """Check generators, mode discipline and composability of every Comp.

    Boundary agreement is semantic: the two p-boundaries are compared in
    the free category, not syntactically.
    """
    from .normalizer import equal_terms  # local import: the checker is semantic

    out: list[TermViolation] = []

    def walk(node: Term, path: tuple[int, ...]) -> None:
        if isinstance(node, Gen):
            if not gs.has(node.cell):
                out.append(TermViolation(path, f"generator {node.cell.id!r} not in base set"))
            return
        if isinstance(node, Id):
            walk(node.body, path + (0,))
            return
        if isinstance(node, Inv):
            if mode is Mode.STRICT:
                out.append(TermViolation(path, "involution in strict mode"))
            if node.level >= dim_of(node.body):
                out.append(TermViolation(path, "involution level at or above dimension"))
            walk(node.body, path + (0,))
            return
        n = dim_of(node)
        if dim_of(node.left) != dim_of(node.right) or not 0 <= node.level < n:
            out.append(TermViolation(path, "malformed composition levels"))
            return
        walk(node.left, path + (0,))
        walk(node.right, path + (1,))
        if any(v.path[: len(path)] == path for v in out):
            return
        k = n - node.level
        lhs = iterated_term_boundary(gs, node.left, k, "source")
        rhs = iterated_term_boundary(gs, node.right, k, "target")
        if not equal_terms(gs, lhs, rhs, mode):
            out.append(TermViolation(path, f"composition boundary mismatch at level {node.level}"))

    walk(t, ())
    return out


def enumerate_terms(gs: GlobularSet, mode: Mode, max_nodes: int, dim: int
                    ) -> Iterator[Term]:
    """Every well-formed term of the given dimension with size ≤ max_nodes,
    exactly once, ordered by size then rendered text."""
    if dim > gs.max_dim:
        raise DomainError(f"dimension {dim} above truncation {gs.max_dim}")
    for size in range(1, max_nodes + 1):
        yield from _terms_exact(gs, mode, size, dim)


@lru_cache(maxsize=None)
def _terms_exact_cached(gs: GlobularSet, mode: Mode, size: int, dim: int
                        ) -> tuple[Term, ...]:
    from .pasting import eval_term, pcell_boundary

    found: set[Term] = set()
    if size == 1:
        for cid in gs.ids(dim):
            found.add(Gen(CellRef(dim, cid)))
    if dim >= 1:
        for body in _terms_exact_cached(gs, mode, size, dim - 1):
            found.add(Id(body))
    if size >= 2:
        for body in _terms_exact_cached(gs, mode, size - 1, dim):
            if mode is Mode.INVOLUTIVE:
                for q in range(dim):
                    found.add(Inv(q, body))
        for ls in range(1, size - 1):
            rs = size - 1 - ls
            for left in _terms_exact_cached(gs, mode, ls, dim):
                lcell = eval_term(gs, left)
                for right in _terms_exact_cached(gs, mode, rs, dim):
                    rcell = eval_term(gs, right)
                    for p in range(dim):
                        if pcell_boundary(lcell, "source", dim - p) == \
                           pcell_boundary(rcell, "target", dim - p):
                            found.add(Comp(p, left, right))
    return tuple(sorted(found, key=render))


def _terms_exact(gs: GlobularSet, mode: Mode, size: int, dim: int) -> Iterator[Term]:
    if size < 1 or dim < 0:
        return
    yield from _terms_exact_cached(gs, mode, size, dim)
