"""Labeled pasting diagrams: the working model of free (involutive) strict
globular omega-categories at finite truncation.

A cell is a plane tree (nested tuples) of height at most its dimension,
together with a total labeling of the tree's globular positions by
decorated base cells. Decorations are finite sets of involution levels;
strict-mode cells simply keep every decoration empty.

Positions are ``("g", j)`` for the j-th gap of the root's child list and
``("i", seg, pos)`` for a position inside the suspension over segment
``seg`` (1-based). The gap list of a depth-k node holds the dimension-k
positions; suspended cells of a segment share the segment's endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Mapping

from .errors import DomainError
from .globular import CellRef, GlobularSet, Side
from .terms import Comp, Gen, Id, Inv, Term, dim_of

Tree = tuple  # nested tuples of tuples
Pos = tuple
Label = tuple  # (cell id, frozenset of involution levels)

EMPTY: frozenset = frozenset()


# ---------------------------------------------------------------------------
# plane trees


def tree_height(tree: Tree) -> int:
    return 0 if not tree else 1 + max(tree_height(c) for c in tree)


def tree_size(tree: Tree) -> int:
    """Edge count."""
    return len(tree) + sum(tree_size(c) for c in tree)


def prune(tree: Tree, n: int) -> Tree:
    """Remove all depth-n nodes (n ≥ 1)."""
    if n < 1:
        raise DomainError("prune needs n ≥ 1")
    if n == 1:
        return ()
    return tuple(prune(c, n - 1) for c in tree)


def positions(tree: Tree) -> Iterator[Pos]:
    for j in range(len(tree) + 1):
        yield ("g", j)
    for i, sub in enumerate(tree, 1):
        for p in positions(sub):
            yield ("i", i, p)


def pos_dim(pos: Pos) -> int:
    d = 0
    while pos[0] == "i":
        d += 1
        pos = pos[2]
    return d


def pos_boundary(pos: Pos, side: Side) -> Pos:
    """Boundary position; independent of the tree."""
    if pos[0] == "g":
        raise DomainError("0-dimensional position has no boundary")
    _, i, inner = pos
    if inner[0] == "g":
        return ("g", i - 1 if side == "source" else i)
    return ("i", i, pos_boundary(inner, side))


def boundary_inclusion(tree: Tree, n: int, side: Side) -> Callable[[Pos], Pos]:
    """Map positions of ``prune(tree, n)`` into positions of ``tree``."""

    def incl(pos: Pos, t: Tree, k: int) -> Pos:
        if k == 1:
            assert pos == ("g", 0)
            return ("g", 0) if side == "source" else ("g", len(t))
        if pos[0] == "g":
            return pos
        _, i, inner = pos
        return ("i", i, incl(inner, t[i - 1], k - 1))

    return lambda p: incl(p, tree, n)


def graft_tree(p: int, later: Tree, earlier: Tree) -> Tree:
    if p == 0:
        return earlier + later
    if len(later) != len(earlier):
        raise DomainError("graft: trees disagree below the composition level")
    return tuple(graft_tree(p - 1, l, e) for l, e in zip(later, earlier))


def graft_forward(p: int, later: Tree, earlier: Tree
                  ) -> tuple[Callable[[Pos], Pos], Callable[[Pos], Pos]]:
    """Position maps of both factors into the graft."""
    if p == 0:
        m = len(earlier)

        def fwd_l(pos: Pos) -> Pos:
            if pos[0] == "g":
                return ("g", m + pos[1])
            return ("i", m + pos[1], pos[2])

        return fwd_l, lambda pos: pos

    subs = [graft_forward(p - 1, l, e) for l, e in zip(later, earlier)]

    def mk(which: int) -> Callable[[Pos], Pos]:
        def fwd(pos: Pos) -> Pos:
            if pos[0] == "g":
                return pos
            _, i, inner = pos
            return ("i", i, subs[i - 1][which](inner))

        return fwd

    return mk(0), mk(1)


def mirror_tree(tree: Tree, q: int) -> Tree:
    """Reverse the child lists of every depth-q node."""
    if q == 0:
        return tuple(reversed(tree))
    return tuple(mirror_tree(c, q - 1) for c in tree)


def mirror_forward(tree: Tree, q: int) -> Callable[[Pos], Pos]:
    """Position map from ``tree`` to ``mirror_tree(tree, q)``."""

    def fwd(pos: Pos, t: Tree, k: int) -> Pos:
        if pos[0] == "g":
            return ("g", len(t) - pos[1]) if k == 0 else pos
        _, i, inner = pos
        if k == 0:
            return ("i", len(t) + 1 - i, inner)
        return ("i", i, fwd(inner, t[i - 1], k - 1))

    return lambda p: fwd(p, tree, q)


# ---------------------------------------------------------------------------
# decorated base cells


def label_boundary(gs: GlobularSet, dim: int, label: Label, side: Side) -> Label:
    """Boundary of a decorated cell: the top involution level flips sides."""
    cid, dec = label
    ref = CellRef(dim, cid)
    if dim - 1 in dec:
        flipped: Side = "target" if side == "source" else "source"
        return (gs.boundary(ref, flipped).id, dec - {dim - 1})
    return (gs.boundary(ref, side).id, dec)


def iterated_label_boundary(gs: GlobularSet, dim: int, label: Label, k: int,
                            side: Side) -> Label:
    for step in range(k):
        label = label_boundary(gs, dim - step, label, side)
    return label


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class PCell:
    """A labeled pasting diagram of a definite dimension."""

    base: GlobularSet
    dim: int
    tree: Tree
    labels: tuple[tuple[Pos, Label], ...]  # sorted by position

    def label(self, pos: Pos) -> Label:
        return _label_index(self)[pos]

    @staticmethod
    def make(base: GlobularSet, dim: int, tree: Tree,
             labels: Mapping[Pos, Label]) -> "PCell":
        return PCell(base, dim, tree, tuple(sorted(labels.items())))

    def label_dict(self) -> dict[Pos, Label]:
        return dict(self.labels)

    def leaf_count(self) -> int:
        return sum(1 for pos, _ in self.labels if _is_leaf_pos(self.tree, pos))


@lru_cache(maxsize=None)
def _label_index(cell: PCell) -> dict[Pos, Label]:
    return dict(cell.labels)


def _is_leaf_pos(tree: Tree, pos: Pos) -> bool:
    while pos[0] == "i":
        tree = tree[pos[1] - 1]
        pos = pos[2]
    return not tree and pos == ("g", 0)


def leaf_positions(tree: Tree) -> Iterator[Pos]:
    if not tree:
        yield ("g", 0)
        return
    for i, sub in enumerate(tree, 1):
        for p in leaf_positions(sub):
            yield ("i", i, p)


def spine(height: int) -> Tree:
    t: Tree = ()
    for _ in range(height):
        t = (t,)
    return t


def make_globe(gs: GlobularSet, ref: CellRef, dec: frozenset = EMPTY) -> PCell:
    """The single-generator cell: a spine tree labeled by iterated boundaries."""
    if not gs.has(ref):
        raise DomainError(f"generator {ref.id!r} not in base set at dimension {ref.dim}")
    bad = [q for q in dec if q >= ref.dim]
    if bad:
        raise DomainError(f"decoration levels {sorted(bad)} not below dimension {ref.dim}")
    d = ref.dim
    labels: dict[Pos, Label] = {}

    def embed(depth: int, pos: Pos) -> Pos:
        for _ in range(depth):
            pos = ("i", 1, pos)
        return pos

    labels[embed(d, ("g", 0))] = (ref.id, frozenset(dec))
    for k in range(d):
        for j, side in ((0, "source"), (1, "target")):
            lab = iterated_label_boundary(gs, d, (ref.id, frozenset(dec)), d - k, side)  # type: ignore[arg-type]
            labels[embed(k, ("g", j))] = lab
    return PCell.make(gs, d, spine(d), labels)


def pcell_id(cell: PCell) -> PCell:
    """Identity: the same diagram one dimension up."""
    return PCell(cell.base, cell.dim + 1, cell.tree, cell.labels)


def pcell_boundary(cell: PCell, side: Side, k: int = 1) -> PCell:
    for _ in range(k):
        cell = _pcell_boundary1(cell, side)
    return cell


def _pcell_boundary1(cell: PCell, side: Side) -> PCell:
    n = cell.dim
    if n < 1:
        raise DomainError("0-cell has no boundary")
    if tree_height(cell.tree) < n:
        return PCell(cell.base, n - 1, cell.tree, cell.labels)
    pruned = prune(cell.tree, n)
    incl = boundary_inclusion(cell.tree, n, side)
    labels = {p: cell.label(incl(p)) for p in positions(pruned)}
    return PCell.make(cell.base, n - 1, pruned, labels)


def pcell_compose(p: int, later: PCell, earlier: PCell) -> PCell:
    n = later.dim
    if earlier.dim != n:
        raise DomainError("compose: dimensions differ")
    if not 0 <= p < n:
        raise DomainError(f"compose: level {p} not below dimension {n}")
    if pcell_boundary(later, "source", n - p) != pcell_boundary(earlier, "target", n - p):
        raise DomainError(f"compose: boundaries disagree at level {p}")
    tree = graft_tree(p, later.tree, earlier.tree)
    fwd_l, fwd_e = graft_forward(p, later.tree, earlier.tree)
    labels: dict[Pos, Label] = {}
    for pos, lab in earlier.labels:
        labels[fwd_e(pos)] = lab
    for pos, lab in later.labels:
        tgt = fwd_l(pos)
        if labels.get(tgt, lab) != lab:
            raise DomainError("compose: inconsistent labels at the glue")
        labels[tgt] = lab
    return PCell.make(later.base, n, tree, labels)


def pcell_involute(cell: PCell, q: int) -> PCell:
    if q >= cell.dim:
        return cell
    fwd = mirror_forward(cell.tree, q)
    tree = mirror_tree(cell.tree, q)
    labels: dict[Pos, Label] = {}
    for pos, (cid, dec) in cell.labels:
        new_dec = dec ^ {q} if pos_dim(pos) > q else dec
        labels[fwd(pos)] = (cid, frozenset(new_dec))
    return PCell.make(cell.base, cell.dim, tree, labels)


def validate_pcell(cell: PCell) -> list[str]:
    out = []
    want = set(positions(cell.tree))
    have = {pos for pos, _ in cell.labels}
    if want != have:
        out.append("labeling is not total over the diagram's positions")
        return out
    if tree_height(cell.tree) > cell.dim:
        out.append("tree height exceeds the cell dimension")
    for pos, (cid, dec) in cell.labels:
        d = pos_dim(pos)
        if not cell.base.has(CellRef(d, cid)):
            out.append(f"label {cid!r} at {pos} is not a {d}-cell of the base")
            return out
        if any(q >= d for q in dec):
            out.append(f"decoration at {pos} not below its dimension {d}")
    for pos, lab in cell.labels:
        d = pos_dim(pos)
        if d == 0:
            continue
        for side in ("source", "target"):
            expect = label_boundary(cell.base, d, lab, side)  # type: ignore[arg-type]
            got = cell.label(pos_boundary(pos, side))  # type: ignore[arg-type]
            if expect != got:
                out.append(f"label at {pos} fails the {side} square")
    return out


# ---------------------------------------------------------------------------
# evaluation and reification


def eval_term(gs: GlobularSet, t: Term, env: Mapping[CellRef, PCell] | None = None
              ) -> PCell:
    cell, _ = eval_term_prov(gs, t, env)
    return cell


def eval_term_prov(gs: GlobularSet, t: Term, env: Mapping[CellRef, PCell] | None = None
                   ) -> tuple[PCell, list[dict[Pos, Pos]]]:
    """Evaluate; also return, per generator leaf in left-to-right term order,
    the map from that leaf's cell positions into the result."""
    if isinstance(t, Gen):
        if env is not None and t.cell in env:
            cell = env[t.cell]
            if cell.dim != t.cell.dim:
                raise DomainError(f"environment cell {t.cell.id!r} has wrong dimension")
        else:
            cell = make_globe(gs, t.cell)
        return cell, [{p: p for p in positions(cell.tree)}]
    if isinstance(t, Id):
        cell, maps = eval_term_prov(gs, t.body, env)
        return pcell_id(cell), maps
    if isinstance(t, Inv):
        cell, maps = eval_term_prov(gs, t.body, env)
        fwd = mirror_forward(cell.tree, t.level)
        out = pcell_involute(cell, t.level)
        if t.level >= cell.dim:
            return out, maps
        return out, [{src: fwd(dst) for src, dst in m.items()} for m in maps]
    if isinstance(t, Comp):
        lcell, lmaps = eval_term_prov(gs, t.left, env)
        rcell, rmaps = eval_term_prov(gs, t.right, env)
        composed = pcell_compose(t.level, lcell, rcell)
        fwd_l, fwd_e = graft_forward(t.level, lcell.tree, rcell.tree)
        lmaps = [{s: fwd_l(d) for s, d in m.items()} for m in lmaps]
        rmaps = [{s: fwd_e(d) for s, d in m.items()} for m in rmaps]
        return composed, lmaps + rmaps
    raise DomainError("unknown term node")


def reify(cell: PCell) -> Term:
    term, _ = reify_with_leaves(cell)
    return term


def reify_with_leaves(cell: PCell) -> tuple[Term, list[Pos]]:
    """Canonical term plus its leaf positions, listed in the generator order
    of :func:`eval_term_prov` (later factors first)."""

    def embed(segs: tuple[int, ...], pos: Pos) -> Pos:
        for s in reversed(segs):
            pos = ("i", s, pos)
        return pos

    def go(tree: Tree, segs: tuple[int, ...], n: int, off: int
           ) -> tuple[Term, list[Pos]]:
        if n == 0:
            pos = embed(segs, ("g", 0))
            cid, dec = cell.label(pos)
            t: Term = Gen(CellRef(off, cid))
            for q in sorted(dec, reverse=True):
                t = Inv(q, t)
            return t, [pos]
        if tree_height(tree) < n:
            body, lv = go(tree, segs, n - 1, off)
            return Id(body), lv
        parts = [go(sub, segs + (i,), n - 1, off + 1)
                 for i, sub in enumerate(tree, 1)]
        term = parts[0][0]
        for part, _ in parts[1:]:
            term = Comp(off, part, term)
        leaves: list[Pos] = []
        for _, lv in reversed(parts):
            leaves.extend(lv)
        return term, leaves

    return go(cell.tree, (), cell.dim, 0)
