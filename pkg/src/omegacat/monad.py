"""The free strict (involutive) globular omega-category monad on normal
forms: unit, substitution, shape extraction, the decorated-tree codec for
pasting diagrams over the terminal set, and Cartesianity checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from .config import Mode
from .errors import DomainError, ResourceBudgetError
from .globular import CellRef, GlobularMorphism, GlobularSet, terminal_set
from .normalizer import normalize
from .pasting import (
    EMPTY,
    Label,
    PCell,
    Pos,
    Tree,
    eval_term_prov,
    eval_term,
    label_boundary,
    leaf_positions,
    pcell_boundary,
    pos_boundary,
    pos_dim,
    positions,
    reify,
    reify_with_leaves,
    tree_height,
    tree_size,
)
from .report import Report
from .sampling import SampleSpec, random_term
from .terms import Gen, Id, Inv, Term, dim_of, render


# ---------------------------------------------------------------------------
# free cells


@dataclass(frozen=True)
class FreeCell:
    """An element of the free (involutive) category over ``base``."""

    base: GlobularSet
    mode: Mode
    nf: Term

    @property
    def dim(self) -> int:
        return dim_of(self.nf)

    def value(self) -> PCell:
        return _value(self)

    def name(self) -> str:
        return render(self.nf)


@lru_cache(maxsize=None)
def _value(fc: FreeCell) -> PCell:
    return eval_term(fc.base, fc.nf)


def free_cell(base: GlobularSet, mode: Mode, term: Term) -> FreeCell:
    return FreeCell(base, mode, normalize(base, term, mode))


def from_value(mode: Mode, cell: PCell) -> FreeCell:
    return FreeCell(cell.base, mode, reify(cell))


def unit_embed(base: GlobularSet, x: CellRef, mode: Mode) -> FreeCell:
    if not base.has(x):
        raise DomainError(f"unit_embed: {x.id!r} is not a {x.dim}-cell of the base")
    return FreeCell(base, mode, Gen(x))


def free_boundary(fc: FreeCell, side: str, k: int = 1) -> FreeCell:
    return from_value(fc.mode, pcell_boundary(fc.value(), side, k))  # type: ignore[arg-type]


def functor_apply(phi: GlobularMorphism, mode: Mode, c: FreeCell) -> FreeCell:
    """Relabel generators along ``phi`` and renormalize."""
    if c.base != phi.domain:
        raise DomainError("functor_apply: cell is not based on the morphism's domain")
    val = c.value()
    labels = {
        pos: (phi.apply(CellRef(pos_dim(pos), cid)).id, dec)
        for pos, (cid, dec) in val.labels
    }
    return from_value(mode, PCell.make(phi.codomain, val.dim, val.tree, labels))


def shape_of(c: FreeCell) -> FreeCell:
    """Image over the terminal set (the arity / pasting shape)."""
    from .globular import terminal_morphism

    if _is_terminal(c.base):
        return c
    return functor_apply(terminal_morphism(c.base), c.mode, c)


def _is_terminal(gs: GlobularSet) -> bool:
    return gs == terminal_set(gs.max_dim)


# ---------------------------------------------------------------------------
# staged cells and monad multiplication


def staged_base(named: Mapping[str, FreeCell]
                ) -> tuple[GlobularSet, dict[str, FreeCell]]:
    """A globular set whose cells are the given free cells (plus their
    boundaries, auto-named by normal form)."""
    if not named:
        raise DomainError("staged_base: no cells")
    cells = dict(named)
    bases = {fc.base for fc in cells.values()}
    modes = {fc.mode for fc in cells.values()}
    if len(bases) != 1 or len(modes) != 1:
        raise DomainError("staged_base: cells disagree on base or mode")
    by_nf: dict[Term, str] = {}
    for name, fc in sorted(cells.items()):
        by_nf.setdefault(fc.nf, name)
    queue = list(cells.values())
    while queue:
        fc = queue.pop()
        if fc.dim == 0:
            continue
        for side in ("source", "target"):
            b = free_boundary(fc, side)
            if b.nf not in by_nf:
                by_nf[b.nf] = b.name()
                cells[b.name()] = b
                queue.append(b)
    max_dim = next(iter(bases)).max_dim
    by_dim: dict[int, list] = {n: [] for n in range(max_dim + 1)}
    names = {nf: nm for nf, nm in by_nf.items()}
    seen_names: dict[str, int] = {}
    for name, fc in sorted(cells.items()):
        if seen_names.setdefault(name, fc.dim) != fc.dim:
            raise DomainError(f"staged_base: name {name!r} used at two dimensions")
        if fc.dim == 0:
            by_dim[0].append(name)
        else:
            s, t = free_boundary(fc, "source"), free_boundary(fc, "target")
            by_dim[fc.dim].append((name, names[s.nf], names[t.nf]))
    gs = GlobularSet.build(max_dim, by_dim)
    return gs, cells


def multiply_flatten(outer: FreeCell, inner: Mapping[str, FreeCell]) -> FreeCell:
    """Substitute each generator of ``outer`` by its inner cell, renormalize.

    ``inner`` must name every generator occurring in ``outer``; decorated
    generators act through the involution of the inner cell.
    """
    if not inner:
        raise DomainError("multiply_flatten: empty inner assignment")
    target = next(iter(inner.values())).base
    mode = next(iter(inner.values())).mode
    env = {CellRef(fc.dim, name): fc.value() for name, fc in inner.items()}
    flat = eval_term(target, outer.nf, env)
    if flat.dim > target.max_dim:
        raise ResourceBudgetError("flattened cell exceeds the truncation level")
    return from_value(mode, flat)


def flatten_with_positions(outer: PCell, env: Mapping[CellRef, PCell]
                           ) -> tuple[PCell, dict[Pos, dict[Pos, Pos]]]:
    """Flatten a staged diagram; also return, per leaf position of the outer
    diagram, the map from that label's positions into the result."""
    term, leaves = reify_with_leaves(outer)
    target = next(iter(env.values())).base
    flat, maps = eval_term_prov(target, term, env)
    assert len(maps) == len(leaves)
    return flat, dict(zip(leaves, maps))


# ---------------------------------------------------------------------------
# decorated trees (codec for cells over the terminal set)


LeafPath = tuple[int, ...]


@dataclass(frozen=True)
class DecoratedTree:
    """Batanin tree with per-leaf involution decorations; size is the edge
    count. Interior decorations are derived, not stored."""

    dim: int
    tree: Tree
    decor: tuple[tuple[LeafPath, frozenset], ...]

    @property
    def size(self) -> int:
        return tree_size(self.tree)

    def leaf_decor(self) -> dict[LeafPath, frozenset]:
        return dict(self.decor)

    @staticmethod
    def make(dim: int, tree: Tree, decor: Mapping[LeafPath, Iterable[int]]
             ) -> "DecoratedTree":
        packed = tuple(sorted((tuple(p), frozenset(s)) for p, s in decor.items()))
        return DecoratedTree(dim, tree, packed)


def _leaf_paths(tree: Tree, prefix: LeafPath = ()) -> Iterator[LeafPath]:
    if not tree:
        yield prefix
        return
    for i, sub in enumerate(tree, 1):
        yield from _leaf_paths(sub, prefix + (i,))


def _path_pos(path: LeafPath) -> Pos:
    pos: Pos = ("g", 0)
    for seg in reversed(path):
        pos = ("i", seg, pos)
    return pos


def tree_encode(c: FreeCell, mode: Mode | None = None) -> DecoratedTree:
    """Canonical decorated tree of a cell over the terminal set."""
    if not _is_terminal(c.base):
        raise DomainError("tree_encode: cell is not based on the terminal set")
    val = c.value()
    decor = {
        path: val.label(_path_pos(path))[1]
        for path in _leaf_paths(val.tree)
    }
    return DecoratedTree.make(val.dim, val.tree, decor)


def tree_decode(dt: DecoratedTree, max_dim: int | None = None,
                mode: Mode | None = None) -> FreeCell:
    """Rebuild the cell; raises DomainError on inconsistent decorations."""
    cell = decode_to_pcell(dt, max_dim)
    if mode is None:
        mode = Mode.INVOLUTIVE if any(s for _, s in dt.decor) else Mode.STRICT
    return from_value(mode, cell)


def decode_to_pcell(dt: DecoratedTree, max_dim: int | None = None) -> PCell:
    n = max_dim if max_dim is not None else max(dt.dim, tree_height(dt.tree))
    if dt.dim > n:
        raise DomainError("decoded dimension exceeds the truncation level")
    if tree_height(dt.tree) > dt.dim:
        raise DomainError("tree height exceeds the declared dimension")
    base = terminal_set(max(n, dt.dim))
    want = set(_leaf_paths(dt.tree))
    got = {p for p, _ in dt.decor}
    if want != got:
        raise DomainError("decorations must cover exactly the leaves")
    labels: dict[Pos, Label] = {}

    def assign(pos: Pos, lab: Label) -> None:
        prev = labels.get(pos)
        if prev is not None:
            if prev != lab:
                raise DomainError(f"inconsistent decorations at position {pos}")
            return
        labels[pos] = lab
        d = pos_dim(pos)
        if d >= 1:
            for side in ("source", "target"):
                assign(pos_boundary(pos, side),
                       label_boundary(base, d, lab, side))  # type: ignore[arg-type]

    for path, dec in dt.decor:
        d = len(path)
        if any(q >= d for q in dec):
            raise DomainError(f"decoration at {path} not strictly below level {d}")
        assign(_path_pos(path), (f"pt{d}", frozenset(dec)))
    return PCell.make(base, dt.dim, dt.tree, labels)


def node_decorations(dt: DecoratedTree) -> dict[LeafPath, frozenset]:
    """Decoration of every node (derived for interior nodes)."""
    cell = decode_to_pcell(dt)
    out: dict[LeafPath, frozenset] = {}

    def walk(tree: Tree, path: LeafPath) -> None:
        out[path] = cell.label(_path_pos(path) if not tree
                               else _gap0(path))[1]
        for i, sub in enumerate(tree, 1):
            walk(sub, path + (i,))

    def _gap0(path: LeafPath) -> Pos:
        pos: Pos = ("g", 0)
        for seg in reversed(path):
            pos = ("i", seg, pos)
        return pos

    walk(dt.tree, ())
    return out


def render_tree(dt: DecoratedTree) -> str:
    decor = dt.leaf_decor()

    def node(tree: Tree, path: LeafPath) -> str:
        inner = "".join(node(sub, path + (i,)) for i, sub in enumerate(tree, 1))
        if not tree and decor.get(path):
            inner += "{" + ",".join(str(q) for q in sorted(decor[path])) + "}"
        return f"({inner})"

    return node(dt.tree, ())


def parse_tree(text: str, dim: int) -> DecoratedTree:
    from .errors import ParseError

    pos = 0
    decor: dict[LeafPath, frozenset] = {}

    def parse_node(path: LeafPath) -> Tree:
        nonlocal pos
        if pos >= len(text) or text[pos] != "(":
            raise ParseError(f"expected '(' at offset {pos}")
        pos += 1
        children: list[Tree] = []
        dec: frozenset = EMPTY
        while True:
            if pos >= len(text):
                raise ParseError("unbalanced parenthesis in tree")
            ch = text[pos]
            if ch == ")":
                pos += 1
                break
            if ch == "(":
                children.append(parse_node(path + (len(children) + 1,)))
            elif ch == "{":
                end = text.find("}", pos)
                if end < 0:
                    raise ParseError("unterminated decoration")
                body = text[pos + 1:end].strip()
                dec = frozenset(int(x) for x in body.split(",") if x.strip())
                pos = end + 1
            elif ch.isspace():
                pos += 1
            else:
                raise ParseError(f"unexpected character {ch!r} in tree")
        if children and dec:
            raise ParseError("decorations may only annotate leaves")
        if not children:
            decor[path] = dec
        return tuple(children)

    tree = parse_node(())
    if text[pos:].strip():
        raise ParseError("trailing input after tree")
    dt = DecoratedTree.make(dim, tree, decor)
    decode_to_pcell(dt)
    return dt


# ---------------------------------------------------------------------------
# enumerations


@lru_cache(maxsize=None)
def plane_trees(edges: int, height: int) -> tuple[Tree, ...]:
    """All plane trees with exactly ``edges`` edges and height ≤ ``height``."""
    if edges == 0:
        return ((),)
    if height == 0:
        return ()
    out = []
    for k in range(1, edges + 1):
        for first in plane_trees(k - 1, height - 1):
            for rest in plane_trees(edges - k, height):
                out.append((first,) + rest)
    return tuple(out)


def enumerate_decorated_trees(dim: int, max_size: int, mode: Mode
                              ) -> Iterator[DecoratedTree]:
    """Valid decorated trees of the given dimension, by size then text."""
    for e in range(max_size + 1):
        batch = []
        for tree in plane_trees(e, dim):
            paths = list(_leaf_paths(tree))
            if mode is Mode.STRICT:
                combos: Iterable[tuple[frozenset, ...]] = [tuple(EMPTY for _ in paths)]
            else:
                per_leaf = [
                    [frozenset(s) for r in range(len(path) + 1)
                     for s in itertools.combinations(range(len(path)), r)]
                    for path in paths
                ]
                combos = itertools.product(*per_leaf)
            for combo in combos:
                dt = DecoratedTree.make(dim, tree, dict(zip(paths, combo)))
                try:
                    decode_to_pcell(dt)
                except DomainError:
                    continue
                batch.append(dt)
        yield from sorted(batch, key=render_tree)


def enumerate_labelings(gs: GlobularSet, mode: Mode, tree: Tree, dim: int,
                        shape: PCell | None = None,
                        leaf_weight: Callable[[int, Label], int] | None = None,
                        weight_bound: int | None = None) -> Iterator[PCell]:
    """All consistent labelings of ``tree`` as a dim-cell over ``gs``.

    With ``shape`` given (a cell over the terminal set with the same tree),
    decorations are pinned to the shape's and only base cells vary.

    ``leaf_weight``/``weight_bound`` prune partial assignments whose total
    weight must already exceed the bound: weights add exactly across root
    segments (level-0 grafting concatenates) and at least the per-segment
    maximum survives within a segment.
    """
    if tree_height(tree) > dim:
        return
    paths = list(_leaf_paths(tree))

    def candidates(path: LeafPath) -> list[Label]:
        d = len(path)
        cells = gs.ids(d)
        if shape is not None:
            dec = shape.label(_path_pos(path))[1]
            return [(c, dec) for c in cells]
        if mode is Mode.STRICT:
            return [(c, EMPTY) for c in cells]
        out = []
        for c in cells:
            for r in range(d + 1):
                for s in itertools.combinations(range(d), r):
                    out.append((c, frozenset(s)))
        return out

    def too_heavy(seg_max: dict[int, int]) -> bool:
        return (weight_bound is not None
                and sum(seg_max.values()) > weight_bound)

    def extend(i: int, labels: dict[Pos, Label], seg_max: dict[int, int]
               ) -> Iterator[PCell]:
        if i == len(paths):
            yield PCell.make(gs, dim, tree, labels)
            return
        path = paths[i]
        for lab in candidates(path):
            if leaf_weight is not None:
                seg = path[0] if path else 0
                w = leaf_weight(len(path), lab)
                new_max = dict(seg_max)
                new_max[seg] = max(new_max.get(seg, 0), w)
                if too_heavy(new_max):
                    continue
            else:
                new_max = seg_max
            new = dict(labels)
            ok = True
            stack = [(_path_pos(path), lab)]
            while stack and ok:
                pos, cur = stack.pop()
                prev = new.get(pos)
                if prev is not None:
                    ok = prev == cur
                    continue
                new[pos] = cur
                d = pos_dim(pos)
                if d >= 1:
                    for side in ("source", "target"):
                        stack.append((pos_boundary(pos, side),
                                      label_boundary(gs, d, cur, side)))  # type: ignore[arg-type]
            if ok:
                yield from extend(i + 1, new, new_max)

    yield from extend(0, {}, {})


def enumerate_cells(gs: GlobularSet, mode: Mode, dim: int, max_size: int
                    ) -> Iterator[PCell]:
    """Bounded free-category cells over gs: all labeled diagrams of the
    given dimension with at most ``max_size`` edges."""
    for e in range(max_size + 1):
        for tree in plane_trees(e, dim):
            yield from enumerate_labelings(gs, mode, tree, dim)


# ---------------------------------------------------------------------------
# law checks


def check_monad_laws(base: GlobularSet, mode: Mode, samples: SampleSpec,
                     flatten_impl: Callable[[FreeCell, Mapping[str, FreeCell]],
                                            FreeCell] = multiply_flatten) -> Report:
    """Sampled verification of both unit laws and associativity."""
    rng = random.Random(samples.seed)
    rep = Report("monad-laws", meta={"seed": samples.seed, "count": samples.count})
    dims = [d for d in range(base.max_dim + 1) if base.ids(d)] or [0]
    for i in range(samples.count):
        dim = rng.choice(dims)
        try:
            t = random_term(base, mode, rng, dim, samples.max_size)
        except DomainError:
            continue
        c = free_cell(base, mode, t)
        rep.checked += 1
        # left unit: flatten the unit embedding of c
        b1, env1 = staged_base({"c": c})
        outer = unit_embed(b1, CellRef(c.dim, "c"), mode)
        got = flatten_impl(outer, env1)
        if got != c:
            rep.add(law="left-unit", cell=c.name(), got=got.name())
        # right unit: flatten c's own term against unit embeddings
        units = {cid: unit_embed(base, CellRef(d, cid), mode)
                 for d in range(base.max_dim + 1) for cid in base.ids(d)}
        got = flatten_impl(FreeCell(base, mode, c.nf), units)
        if got != c:
            rep.add(law="right-unit", cell=c.name(), got=got.name())
        # associativity on a random double stage
        pool = {}
        for j in range(3):
            dd = rng.choice(dims)
            try:
                pool[f"q{j}"] = free_cell(base, mode,
                                          random_term(base, mode, rng, dd,
                                                      samples.max_size))
            except DomainError:
                pass
        if not pool:
            continue
        b1, env1 = staged_base(pool)
        try:
            mid_term = random_term(b1, mode, rng, rng.choice(dims), 2)
        except DomainError:
            continue
        mid = free_cell(b1, mode, mid_term)
        b2, env2 = staged_base({"m": mid})
        try:
            outer_term = random_term(b2, mode, rng, rng.choice(dims), 2)
        except DomainError:
            continue
        outer = free_cell(b2, mode, outer_term)
        inner_flat = {name: flatten_impl(fc, env1) for name, fc in env2.items()}
        lhs = flatten_impl(outer, inner_flat)
        rhs = flatten_impl(flatten_impl(outer, env2), env1)
        if lhs != rhs:
            rep.add(law="associativity", outer=outer.name(),
                    lhs=lhs.name(), rhs=rhs.name())
    return rep


# ---------------------------------------------------------------------------
# Cartesianity of the unit and multiplication squares


def _tphi(phi: GlobularMorphism, cell: PCell) -> PCell:
    labels = {
        pos: (phi.apply(CellRef(pos_dim(pos), cid)).id, dec)
        for pos, (cid, dec) in cell.labels
    }
    return PCell.make(phi.codomain, cell.dim, cell.tree, labels)


def _staged_cells(gs: GlobularSet, mode: Mode, dim: int, outer_size: int,
                  inner_size: int) -> Iterator[tuple[PCell, dict[CellRef, PCell]]]:
    """Bounded elements of T(T(gs)): outer diagrams labeled by bounded cells."""
    inner: dict[int, list[PCell]] = {}
    for d in range(gs.max_dim + 1):
        inner[d] = list(enumerate_cells(gs, mode, d, inner_size))
    named: dict[str, FreeCell] = {}
    for d, cells in inner.items():
        for cell in cells:
            fc = from_value(mode, cell)
            named[fc.name()] = fc
    if not named:
        return
    sbase, env_fc = staged_base(named)
    env = {CellRef(fc.dim, name): fc.value() for name, fc in env_fc.items()}
    for e in range(outer_size + 1):
        for tree in plane_trees(e, dim):
            for outer in enumerate_labelings(sbase, mode, tree, dim):
                yield outer, env


def check_cartesian(square: str, phi: GlobularMorphism, bound: int) -> Report:
    """Exhaustive bounded pull-back check of the unit or multiplication
    naturality square at ``phi``."""
    if square == "unit":
        return _check_unit_square(phi, bound)
    if square == "mult":
        return _check_mult_square(phi, bound)
    raise DomainError("square must be 'unit' or 'mult'")


def _default_eta(gs: GlobularSet, ref: CellRef) -> PCell:
    return eval_term(gs, Gen(ref))


def _check_unit_square(phi: GlobularMorphism, bound: int,
                       eta_impl: Callable[[GlobularSet, CellRef], PCell] = _default_eta
                       ) -> Report:
    q, r = phi.domain, phi.codomain
    mode = Mode.INVOLUTIVE
    rep = Report("cartesian-unit", meta={"bound": bound})
    for n in range(q.max_dim + 1):
        tq = [c for c in enumerate_cells(q, mode, n, bound)]
        for a in tq:
            for b in r.ids(n):
                if _tphi(phi, a) != eta_impl(r, CellRef(n, b)):
                    continue
                rep.checked += 1
                sols = [
                    x for x in q.ids(n)
                    if eta_impl(q, CellRef(n, x)) == a
                    and phi.apply(CellRef(n, x)).id == b
                ]
                if len(sols) != 1:
                    rep.add(square="unit", dim=n, a=render(reify(a)), b=b,
                            solutions=len(sols))
    return rep


def _check_mult_square(phi: GlobularMorphism, bound: int) -> Report:
    q, r = phi.domain, phi.codomain
    mode = Mode.INVOLUTIVE
    rep = Report("cartesian-mult", meta={"bound": bound})
    inner_size = max(1, bound - 1)
    for n in range(q.max_dim + 1):
        tq = list(enumerate_cells(q, mode, n, bound * 2))
        # enumerate staged cells over R and their flattenings
        for beta, env_r in _staged_cells(r, mode, n, bound, inner_size):
            term, _ = reify_with_leaves(beta)
            flat_r, _ = eval_term_prov(r, term, env_r)
            candidates_a = [a for a in tq if _tphi(phi, a) == flat_r]
            for a in candidates_a:
                rep.checked += 1
                sols = _lift_staged(phi, beta, env_r, a, mode)
                if len(sols) != 1:
                    rep.add(square="mult", dim=n, a=render(reify(a)),
                            beta=render(reify(beta)), solutions=len(sols))
    return rep


def _lift_staged(phi: GlobularMorphism, beta: PCell, env_r: Mapping[str, PCell],
                 a: PCell, mode: Mode) -> list:
    """Staged cells over Q that push to ``beta`` under T(T(phi)) and flatten
    to ``a``.

    Lifts are chosen per leaf position (a lift keeps the tree of the label);
    boundary labels follow by propagation and the whole candidate is checked
    against ``beta`` and ``a``.
    """
    from .pasting import validate_pcell

    q = phi.domain
    leaf_pos = list(leaf_positions(beta.tree))
    lift_options: dict[CellRef, list[FreeCell]] = {}
    for pos, (name, _dec) in beta.labels:
        ref = CellRef(pos_dim(pos), name)
        if ref in lift_options:
            continue
        target = env_r[ref]
        lift_options[ref] = [
            from_value(mode, c)
            for c in enumerate_labelings(q, mode, target.tree, target.dim)
            if _tphi(phi, c) == target
        ]
    sols = []
    per_leaf = [lift_options[CellRef(pos_dim(p), beta.label(p)[0])]
                for p in leaf_pos]
    for combo in itertools.product(*per_leaf):
        named = {fc.name(): fc for fc in combo}
        try:
            sbase, env_fc = staged_base(named)
            labels: dict[Pos, Label] = {}
            ok = True
            for p, fc in zip(leaf_pos, combo):
                stack = [(p, (fc.name(), beta.label(p)[1]))]
                while stack and ok:
                    pos, lab = stack.pop()
                    prev = labels.get(pos)
                    if prev is not None:
                        ok = prev == lab
                        continue
                    labels[pos] = lab
                    d = pos_dim(pos)
                    if d >= 1:
                        for side in ("source", "target"):
                            stack.append((pos_boundary(pos, side),
                                          label_boundary(sbase, d, lab, side)))  # type: ignore[arg-type]
            if not ok:
                continue
            gamma = PCell.make(sbase, beta.dim, beta.tree, labels)
            if validate_pcell(gamma):
                continue
            # push forward along T(T(phi)) and compare with beta
            pushed = {
                pos: (from_value(mode, _tphi(phi, env_fc[name].value())).name(), dec)
                for pos, (name, dec) in gamma.labels
            }
            if pushed != beta.label_dict():
                continue
            env = {CellRef(fc.dim, nm): fc.value() for nm, fc in env_fc.items()}
            term, _ = reify_with_leaves(gamma)
            flat, _ = eval_term_prov(q, term, env)
        except DomainError:
            continue
        if flat == a:
            sols.append(gamma)
    return sols
