"""Seeded random generators for property checks and law sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .config import Mode
from .errors import DomainError
from .globular import CellRef, GlobularMorphism, GlobularSet, parallel
from .terms import Comp, Gen, Id, Inv, Term, dim_of
from .pasting import eval_term


@dataclass(frozen=True)
class SampleSpec:
    count: int = 200
    seed: int = 0
    max_size: int = 4


def random_gset(rng: random.Random, max_dim: int, max_cells: int) -> GlobularSet:
    """A random valid globular set with 1..max_cells cells per dimension."""
    by_dim: dict[int, list] = {0: [f"c0_{i}" for i in range(rng.randint(1, max_cells))]}
    gs = GlobularSet.build(max_dim, by_dim)
    for n in range(1, max_dim + 1):
        level = []
        lower = gs.ids(n - 1)
        for i in range(rng.randint(0, max_cells)):
            cid = f"c{n}_{i}"
            if n == 1:
                level.append((cid, rng.choice(lower), rng.choice(lower)))
            else:
                pairs = [
                    (a, b)
                    for a in lower
                    for b in lower
                    if parallel(gs, CellRef(n - 1, a), CellRef(n - 1, b))
                ]
                if not pairs:
                    break
                a, b = rng.choice(pairs)
                level.append((cid, a, b))
        by_dim[n] = level
        gs = GlobularSet.build(max_dim, by_dim)
    return gs


def random_morphism_into(rng: random.Random, codomain: GlobularSet,
                         max_cells: int) -> GlobularMorphism:
    """A random globular set with a random morphism into ``codomain``."""
    max_dim = codomain.max_dim
    by_dim: dict[int, list] = {}
    assign: dict[int, dict[str, str]] = {}
    by_dim[0] = [f"a0_{i}" for i in range(rng.randint(1, max_cells))]
    assign[0] = {c: rng.choice(codomain.ids(0)) for c in by_dim[0]}
    dom = GlobularSet.build(max_dim, by_dim)
    for n in range(1, max_dim + 1):
        level: list[tuple[str, str, str]] = []
        amap: dict[str, str] = {}
        lower = dom.ids(n - 1)
        for i in range(rng.randint(0, max_cells)):
            if not codomain.ids(n) or not lower:
                break
            img = rng.choice(codomain.ids(n))
            ref = CellRef(n, img)
            srcs = [a for a in lower
                    if assign[n - 1][a] == codomain.src(ref).id]
            tgts = [a for a in lower
                    if assign[n - 1][a] == codomain.tgt(ref).id]
            if n >= 2:
                pairs = [(a, b) for a in srcs for b in tgts
                         if parallel(dom, CellRef(n - 1, a), CellRef(n - 1, b))]
                if not pairs:
                    continue
                s, t = rng.choice(pairs)
            else:
                if not srcs or not tgts:
                    continue
                s, t = rng.choice(srcs), rng.choice(tgts)
            cid = f"a{n}_{i}"
            level.append((cid, s, t))
            amap[cid] = img
        by_dim[n] = level
        assign[n] = amap
        dom = GlobularSet.build(max_dim, by_dim)
    return GlobularMorphism.build(dom, codomain, assign)


def random_term(gs: GlobularSet, mode: Mode, rng: random.Random, dim: int,
                size: int) -> Term:
    """A random well-formed term of the requested dimension.

    Grown from a pool of already-built terms; composition partners are found
    by boundary matching in the diagram model.
    """
    if dim > gs.max_dim:
        raise DomainError("dimension above truncation")
    pools: dict[int, list[Term]] = {d: [Gen(CellRef(d, c)) for c in gs.ids(d)]
                                    for d in range(gs.max_dim + 1)}
    for d in range(1, gs.max_dim + 1):
        pools[d].extend(Id(t) for t in pools[d - 1])
    if not pools[dim]:
        raise DomainError(f"base set has no {dim}-cells to grow terms from")

    def grow() -> None:
        d = rng.randint(0, gs.max_dim)
        if not pools[d]:
            return
        op = rng.random()
        if op < 0.25 and d < gs.max_dim:
            pools[d + 1].append(Id(rng.choice(pools[d])))
        elif op < 0.5 and mode is Mode.INVOLUTIVE and d >= 1:
            t = rng.choice(pools[d])
            pools[d].append(Inv(rng.randint(0, d - 1), t))
        elif d >= 1:
            left = rng.choice(pools[d])
            p = rng.randint(0, d - 1)
            lv = eval_term(gs, left)
            from .pasting import pcell_boundary
            want = pcell_boundary(lv, "source", d - p)
            partners = [r for r in pools[d]
                        if pcell_boundary(eval_term(gs, r), "target", d - p) == want]
            if partners:
                pools[d].append(Comp(p, left, rng.choice(partners)))

    for _ in range(size * 6):
        grow()
    candidates = [t for t in pools[dim]]
    weights = [1 + len(str(t)) // 8 for t in candidates]
    return rng.choices(candidates, weights=weights, k=1)[0]
