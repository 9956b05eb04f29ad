"""Finite, dimension-truncated globular sets, morphisms and pull-backs.

Cells are opaque string identifiers; per-dimension tuples keep iteration
order deterministic so that reports are reproducible. Values are immutable
after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Literal, NamedTuple, Sequence

from .errors import DomainError

Side = Literal["source", "target"]


class CellRef(NamedTuple):
    dim: int
    id: str


@dataclass(frozen=True)
class GlobularSet:
    """Cells per dimension 0..max_dim with source/target maps.

    ``cells[n]`` is a tuple of ``(id, src_id, tgt_id)`` triples; at
    dimension 0 the boundary slots are ``None``. Construction is lenient:
    arbitrary candidate data is accepted and inspected by
    :func:`validate_globular`.
    """

    max_dim: int
    cells: tuple[tuple[tuple[str, str | None, str | None], ...], ...]

    @staticmethod
    def build(max_dim: int, by_dim: dict[int, Sequence] | None = None) -> "GlobularSet":
        """Build from ``{0: ["a", ...], 1: [("f", "a", "b"), ...], ...}``."""
        by_dim = by_dim or {}
        levels = []
        for n in range(max_dim + 1):
            level = []
            for entry in by_dim.get(n, ()):
                if n == 0:
                    if isinstance(entry, (tuple, list)):
                        entry = entry[0]
                    level.append((str(entry), None, None))
                else:
                    cid, src, tgt = entry
                    level.append((str(cid), str(src), str(tgt)))
            levels.append(tuple(level))
        return GlobularSet(max_dim, tuple(levels))

    def ids(self, n: int) -> tuple[str, ...]:
        if not 0 <= n <= self.max_dim:
            return ()
        return tuple(c[0] for c in self.cells[n])

    def all_cells(self) -> Iterator[CellRef]:
        for n in range(self.max_dim + 1):
            for cid in self.ids(n):
                yield CellRef(n, cid)

    def has(self, ref: CellRef) -> bool:
        return 0 <= ref.dim <= self.max_dim and ref.id in set(self.ids(ref.dim))

    def src(self, ref: CellRef) -> CellRef:
        return self._bnd(ref, 1)

    def tgt(self, ref: CellRef) -> CellRef:
        return self._bnd(ref, 2)

    def boundary(self, ref: CellRef, side: Side) -> CellRef:
        return self.src(ref) if side == "source" else self.tgt(ref)

    def _bnd(self, ref: CellRef, slot: int) -> CellRef:
        if ref.dim < 1:
            raise DomainError(f"0-cell {ref.id} has no boundary")
        row = _index(self)[ref.dim].get(ref.id)
        if row is None or row[slot] is None:
            raise DomainError(f"unknown cell {ref.id} at dimension {ref.dim}")
        return CellRef(ref.dim - 1, row[slot])


@lru_cache(maxsize=None)
def _index(gs: GlobularSet) -> tuple[dict[str, tuple], ...]:
    return tuple({c[0]: c for c in level} for level in gs.cells)


@dataclass(frozen=True)
class Violation:
    kind: str
    dim: int
    cell: str
    detail: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "cell": self.cell, "detail": self.detail}


def validate_globular(gs: GlobularSet) -> list[Violation]:
    """Report structural errors and globularity violations; empty iff valid."""
    out: list[Violation] = []
    for n in range(gs.max_dim + 1):
        seen: set[str] = set()
        for cid, src, tgt in gs.cells[n]:
            if cid in seen:
                out.append(Violation("structural", n, cid, "duplicate identifier"))
            seen.add(cid)
            if n == 0:
                continue
            lower = set(gs.ids(n - 1))
            for side, ref in (("src", src), ("tgt", tgt)):
                if ref not in lower:
                    out.append(
                        Violation("structural", n, cid, f"{side} {ref!r} not a {n - 1}-cell")
                    )
    if any(v.kind == "structural" for v in out):
        return out
    for n in range(2, gs.max_dim + 1):
        for cid, _, _ in gs.cells[n]:
            ref = CellRef(n, cid)
            ss, st = gs.src(gs.src(ref)), gs.src(gs.tgt(ref))
            ts, tt = gs.tgt(gs.src(ref)), gs.tgt(gs.tgt(ref))
            if ss != st:
                out.append(Violation("globularity", n, cid, "src∘src ≠ src∘tgt"))
            if ts != tt:
                out.append(Violation("globularity", n, cid, "tgt∘src ≠ tgt∘tgt"))
    return out


def iterated_boundary(gs: GlobularSet, x: CellRef, k: int, side: Side) -> CellRef:
    """Apply the chosen boundary map k times."""
    if k > x.dim or k < 0:
        raise DomainError(f"cannot take {k} boundaries of a {x.dim}-cell")
    for _ in range(k):
        x = gs.boundary(x, side)
    return x


def parallel(gs: GlobularSet, x: CellRef, y: CellRef) -> bool:
    """Parallel cells: dimension 0, or equal sources and targets."""
    if x.dim != y.dim:
        raise DomainError(f"parallel undefined across dimensions {x.dim} and {y.dim}")
    if x.dim == 0:
        return True
    return gs.src(x) == gs.src(y) and gs.tgt(x) == gs.tgt(y)


@dataclass(frozen=True)
class GlobularMorphism:
    domain: GlobularSet
    codomain: GlobularSet
    maps: tuple[tuple[tuple[str, str], ...], ...]  # per dim, (cell -> image)

    @staticmethod
    def build(domain: GlobularSet, codomain: GlobularSet,
              assign: dict[int, dict[str, str]]) -> "GlobularMorphism":
        maps = tuple(
            tuple(sorted(assign.get(n, {}).items()))
            for n in range(domain.max_dim + 1)
        )
        return GlobularMorphism(domain, codomain, maps)

    def mapping(self, n: int) -> dict[str, str]:
        if not 0 <= n <= self.domain.max_dim:
            return {}
        return dict(self.maps[n])

    def apply(self, ref: CellRef) -> CellRef:
        img = self.mapping(ref.dim).get(ref.id)
        if img is None:
            raise DomainError(f"morphism undefined on {ref.id} at dimension {ref.dim}")
        return CellRef(ref.dim, img)

    def is_valid(self) -> bool:
        return not self.violations()

    def violations(self) -> list[str]:
        out = []
        for n in range(self.domain.max_dim + 1):
            m = self.mapping(n)
            if set(m) != set(self.domain.ids(n)):
                out.append(f"dimension {n}: map not total")
                continue
            cod = set(self.codomain.ids(n))
            for cid, img in m.items():
                if img not in cod:
                    out.append(f"dimension {n}: image {img!r} missing")
        if out:
            return out
        for n in range(1, self.domain.max_dim + 1):
            for cid in self.domain.ids(n):
                ref = CellRef(n, cid)
                for side in ("source", "target"):
                    lhs = self.codomain.boundary(self.apply(ref), side)  # type: ignore[arg-type]
                    rhs = self.apply(self.domain.boundary(ref, side))  # type: ignore[arg-type]
                    if lhs != rhs:
                        out.append(f"{side} square fails at {cid} (dim {n})")
        return out


def identity_morphism(gs: GlobularSet) -> GlobularMorphism:
    return GlobularMorphism.build(
        gs, gs, {n: {c: c for c in gs.ids(n)} for n in range(gs.max_dim + 1)}
    )


def compose_morphisms(f: GlobularMorphism, g: GlobularMorphism) -> GlobularMorphism:
    """Componentwise composite f∘g; requires codomain(g) = domain(f)."""
    if g.codomain != f.domain:
        raise DomainError("compose_morphisms: codomain(g) ≠ domain(f)")
    assign = {
        n: {c: f.apply(g.apply(CellRef(n, c))).id for c in g.domain.ids(n)}
        for n in range(g.domain.max_dim + 1)
    }
    return GlobularMorphism.build(g.domain, f.codomain, assign)


def terminal_set(max_dim: int) -> GlobularSet:
    """One cell per dimension; all boundary maps forced."""
    by_dim: dict[int, list] = {0: ["pt0"]}
    for n in range(1, max_dim + 1):
        by_dim[n] = [(f"pt{n}", f"pt{n - 1}", f"pt{n - 1}")]
    return GlobularSet.build(max_dim, by_dim)


def terminal_morphism(gs: GlobularSet, target: GlobularSet | None = None) -> GlobularMorphism:
    tgt = target if target is not None else terminal_set(gs.max_dim)
    assign = {n: {c: f"pt{n}" for c in gs.ids(n)} for n in range(gs.max_dim + 1)}
    return GlobularMorphism.build(gs, tgt, assign)


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def pullback(f: GlobularMorphism, g: GlobularMorphism
             ) -> tuple[GlobularSet, GlobularMorphism, GlobularMorphism]:
    """Dimensionwise fiber product of f: A→X and g: B→X with projections."""
    if f.codomain != g.codomain:
        raise DomainError("pullback: morphisms must share a codomain")
    if f.domain.max_dim != g.domain.max_dim:
        raise DomainError("pullback: domains must share max_dim")
    a, b = f.domain, g.domain
    by_dim: dict[int, list] = {}
    keep: dict[int, list[tuple[str, str]]] = {}
    for n in range(a.max_dim + 1):
        keep[n] = [
            (x, y)
            for x in a.ids(n)
            for y in b.ids(n)
            if f.apply(CellRef(n, x)) == g.apply(CellRef(n, y))
        ]
        level = []
        for x, y in keep[n]:
            if n == 0:
                level.append(pair_id(x, y))
            else:
                sx, sy = a.src(CellRef(n, x)).id, b.src(CellRef(n, y)).id
                tx, ty = a.tgt(CellRef(n, x)).id, b.tgt(CellRef(n, y)).id
                level.append((pair_id(x, y), pair_id(sx, sy), pair_id(tx, ty)))
        by_dim[n] = level
    prod = GlobularSet.build(a.max_dim, by_dim)
    p1 = GlobularMorphism.build(
        prod, a, {n: {pair_id(x, y): x for x, y in keep[n]} for n in keep}
    )
    p2 = GlobularMorphism.build(
        prod, b, {n: {pair_id(x, y): y for x, y in keep[n]} for n in keep}
    )
    return prod, p1, p2


def factorizations(span_left: GlobularMorphism, span_right: GlobularMorphism,
                   p1: GlobularMorphism, p2: GlobularMorphism) -> list[GlobularMorphism]:
    """All morphisms u with p1∘u = span_left and p2∘u = span_right.

    Exhaustive search over candidate cell maps; intended for desk-scale
    universal-property checks.
    """
    w = span_left.domain
    prod = p1.domain
    choices: list[list[tuple[str, str]]] = []
    for n in range(w.max_dim + 1):
        for c in w.ids(n):
            ref = CellRef(n, c)
            opts = [
                pc
                for pc in prod.ids(n)
                if p1.apply(CellRef(n, pc)) == span_left.apply(ref)
                and p2.apply(CellRef(n, pc)) == span_right.apply(ref)
            ]
            choices.append([(c, o) for o in opts])
    dims = [n for n in range(w.max_dim + 1) for _ in w.ids(n)]
    out = []
    for combo in itertools.product(*choices) if choices else [()]:
        assign: dict[int, dict[str, str]] = {}
        for (cid, img), n in zip(combo, dims):
            assign.setdefault(n, {})[cid] = img
        cand = GlobularMorphism.build(w, prod, assign)
        if cand.is_valid():
            out.append(cand)
    return out
