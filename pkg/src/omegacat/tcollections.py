"""Globular collections over the terminal set: parallel triples and
contractions, span composition with unitor/associator witnesses, and
structure-preserving congruences with quotients.

Shapes (arities) are cells over the terminal set, handled as labeled
pasting diagrams; the projection of a span composite is recomputed by
flattening, elementwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

from .config import Mode
from .errors import DomainError, ResourceBudgetError
from .globular import (
    CellRef,
    GlobularMorphism,
    GlobularSet,
    pair_id,
    parallel,
    terminal_set,
)
from .monad import (
    DecoratedTree,
    decode_to_pcell,
    enumerate_decorated_trees,
    enumerate_labelings,
    flatten_with_positions,
    from_value,
    render_tree,
    tree_encode,
)
from .pasting import (
    PCell,
    Pos,
    Label,
    label_boundary,
    leaf_positions,
    pcell_boundary,
    pcell_id,
    pcell_involute,
    pos_boundary,
    pos_dim,
    positions,
    reify,
    spine,
    tree_height,
)
from .report import Report
from .terms import render


def spine_cell(n: int, max_dim: int) -> PCell:
    """The unit shape: one cell per level, no decorations."""
    base = terminal_set(max_dim)
    tree = spine(n)
    labels = {p: (f"pt{pos_dim(p)}", frozenset()) for p in positions(tree)}
    return PCell.make(base, n, tree, labels)


@dataclass(frozen=True)
class TCollection:
    """A globular set with an arity projection into the terminal free
    category."""

    carrier: GlobularSet
    proj: tuple[tuple[CellRef, PCell], ...]
    mode: Mode = Mode.INVOLUTIVE

    @staticmethod
    def make(carrier: GlobularSet, proj: Mapping[CellRef, PCell],
             mode: Mode = Mode.INVOLUTIVE) -> "TCollection":
        return TCollection(carrier, tuple(sorted(proj.items())), mode)

    def proj_of(self, ref: CellRef) -> PCell:
        return _proj_index(self)[ref]

    def cells(self, dim: int | None = None) -> list[CellRef]:
        return [r for r in self.carrier.all_cells()
                if dim is None or r.dim == dim]

    @property
    def max_dim(self) -> int:
        return self.carrier.max_dim

    def violations(self) -> list[str]:
        out = []
        idx = _proj_index(self)
        for ref in self.carrier.all_cells():
            if ref not in idx:
                out.append(f"projection missing on {ref.id}")
                continue
            sh = idx[ref]
            if sh.dim != ref.dim:
                out.append(f"projection of {ref.id} has wrong dimension")
        if out:
            return out
        for ref in self.carrier.all_cells():
            if ref.dim == 0:
                continue
            for side in ("source", "target"):
                want = pcell_boundary(idx[ref], side)  # type: ignore[arg-type]
                got = idx[self.carrier.boundary(ref, side)]  # type: ignore[arg-type]
                if want != got:
                    out.append(f"projection fails the {side} square at {ref.id}")
        return out


from functools import lru_cache


@lru_cache(maxsize=None)
def _proj_index(c: TCollection) -> dict[CellRef, PCell]:
    return dict(c.proj)


def identity_collection(gs: GlobularSet, mode: Mode = Mode.INVOLUTIVE) -> TCollection:
    proj = {ref: spine_cell(ref.dim, gs.max_dim) for ref in gs.all_cells()}
    return TCollection.make(gs, proj, mode)


def shape_name(cell: PCell) -> str:
    return render_tree(tree_encode(from_value(Mode.INVOLUTIVE, cell)))


def terminal_collection(max_dim: int, bound: int,
                        mode: Mode = Mode.INVOLUTIVE) -> TCollection:
    """Bounded window of the terminal collection: every shape of size up to
    ``bound`` projecting to itself."""
    shapes: dict[int, list[PCell]] = {}
    names: dict[PCell, str] = {}
    for n in range(max_dim + 1):
        shapes[n] = []
        for dt in enumerate_decorated_trees(n, bound, mode):
            cell = decode_to_pcell(dt, max_dim)
            shapes[n].append(cell)
            names[cell] = render_tree(dt)
    by_dim: dict[int, list] = {}
    for n, cells in shapes.items():
        level = []
        for cell in cells:
            if n == 0:
                level.append(names[cell])
            else:
                s = pcell_boundary(cell, "source")
                t = pcell_boundary(cell, "target")
                level.append((names[cell], names[s], names[t]))
        by_dim[n] = level
    carrier = GlobularSet.build(max_dim, by_dim)
    proj = {CellRef(n, names[c]): c for n, cells in shapes.items() for c in cells}
    return TCollection.make(carrier, proj, mode)


# ---------------------------------------------------------------------------
# parallel triples and contractions


class ParTriple(NamedTuple):
    plus: CellRef
    shape: PCell
    minus: CellRef

    @property
    def dim(self) -> int:
        return self.shape.dim


def par_set(c: TCollection, dim: int, shape_bound: int) -> list[ParTriple]:
    """All parallel triples at the given dimension with bounded shape."""
    if dim < 1:
        raise DomainError("parallel triples start at dimension 1")
    out = []
    lower = c.cells(dim - 1)
    for dt in enumerate_decorated_trees(dim, shape_bound, c.mode):
        y = decode_to_pcell(dt, c.max_dim)
        ty = pcell_boundary(y, "target") if dim >= 1 else None
        sy = pcell_boundary(y, "source")
        plus_fiber = [x for x in lower if c.proj_of(x) == ty]
        minus_fiber = [x for x in lower if c.proj_of(x) == sy]
        for xp in plus_fiber:
            for xm in minus_fiber:
                if dim - 1 == 0 or parallel(c.carrier, xp, xm):
                    out.append(ParTriple(xp, y, xm))
    return sorted(out, key=lambda t: (t.plus, shape_name(t.shape), t.minus))


Contraction = Mapping[ParTriple, CellRef]


def validate_contraction(c: TCollection, kappa: Contraction,
                         shape_bound: int) -> Report:
    """Check the three contraction equations on every bounded triple."""
    rep = Report("contraction", meta={"shape_bound": shape_bound})
    for dim in range(1, c.max_dim + 1):
        for triple in par_set(c, dim, shape_bound):
            rep.checked += 1
            got = kappa.get(triple)
            if got is None:
                rep.add(kind="missing", dim=dim, plus=triple.plus.id,
                        shape=shape_name(triple.shape), minus=triple.minus.id)
                continue
            if c.carrier.src(got) != triple.minus:
                rep.add(kind="source", dim=dim, cell=got.id, minus=triple.minus.id)
            if c.carrier.tgt(got) != triple.plus:
                rep.add(kind="target", dim=dim, cell=got.id, plus=triple.plus.id)
            if c.proj_of(got) != triple.shape:
                rep.add(kind="projection", dim=dim, cell=got.id,
                        shape=shape_name(triple.shape))
    return rep


def is_collection_morphism(phi: GlobularMorphism, c1: TCollection,
                           c2: TCollection) -> bool:
    if phi.domain != c1.carrier or phi.codomain != c2.carrier:
        return False
    if phi.violations():
        return False
    return all(c2.proj_of(phi.apply(r)) == c1.proj_of(r)
               for r in c1.carrier.all_cells())


def par_pushforward(phi: GlobularMorphism, c1: TCollection, c2: TCollection,
                    triples: Iterable[ParTriple]) -> list[ParTriple]:
    """Image triples (φ(x⁺), y, φ(x⁻)); requires projection preservation."""
    if not is_collection_morphism(phi, c1, c2):
        raise DomainError("par_pushforward: not a projection-preserving morphism")
    return [ParTriple(phi.apply(t.plus), t.shape, phi.apply(t.minus))
            for t in triples]


# ---------------------------------------------------------------------------
# span composition


class PairedCell(NamedTuple):
    ref: CellRef          # cell of the composite carrier
    left: CellRef         # cell of the left collection
    tau: PCell            # labeled diagram over the right collection's carrier


@dataclass(frozen=True)
class ComposedCollection:
    collection: TCollection
    left: TCollection
    right: TCollection
    pairs: tuple[tuple[CellRef, tuple[CellRef, PCell]], ...]

    def pair_of(self, ref: CellRef) -> tuple[CellRef, PCell]:
        return _pair_index(self)[ref]

    def find(self, left: CellRef, tau: PCell) -> CellRef | None:
        return _find_index(self).get((left, tau))


@lru_cache(maxsize=None)
def _pair_index(c: ComposedCollection) -> dict[CellRef, tuple[CellRef, PCell]]:
    return dict(c.pairs)


@lru_cache(maxsize=None)
def _find_index(c: ComposedCollection) -> dict[tuple[CellRef, PCell], CellRef]:
    return {(l, t): ref for ref, (l, t) in c.pairs}


def element_name(left: CellRef, tau: PCell) -> str:
    return pair_id(left.id, render(reify(tau)))


@lru_cache(maxsize=None)
def compose_collections(p1: TCollection, p2: TCollection, bound: int
                        ) -> ComposedCollection:
    """Horizontal (span) composite: pairs of a left cell with a right-labeled
    diagram of matching shape; the projection is recomputed by flattening.

    Bound-relative: only pairs whose flattened arity stays within ``bound``
    edges are kept, so the result is a window of the full composite, closed
    under boundaries.
    """
    if p1.max_dim != p2.max_dim:
        raise DomainError("compose_collections: truncation levels differ")
    mode = p1.mode
    env = {ref: p2.proj_of(ref) for ref in p2.carrier.all_cells()}
    big = {ref for ref, sh in env.items() if _size(sh) > bound}
    elements: dict[CellRef, tuple[CellRef, PCell]] = {}
    proj: dict[CellRef, PCell] = {}
    by_dim: dict[int, list] = {n: [] for n in range(p1.max_dim + 1)}
    budget = 500_000

    def weight(depth: int, lab) -> int:
        cid, _ = lab
        return _size(env[CellRef(depth, cid)])

    for n in range(p1.max_dim + 1):
        for p in p1.cells(n):
            shape = p1.proj_of(p)
            if shape.dim != n:
                continue
            for tau in enumerate_labelings(p2.carrier, mode, shape.tree, n,
                                           shape=shape, leaf_weight=weight,
                                           weight_bound=bound):
                budget -= 1
                if budget < 0:
                    raise ResourceBudgetError("compose_collections: bound exhausted")
                flat, _ = flatten_with_positions(tau, env)
                if _size(flat) > bound:
                    continue
                ref = CellRef(n, element_name(p, tau))
                elements[ref] = (p, tau)
                proj[ref] = flat
    for ref, (p, tau) in elements.items():
        n = ref.dim
        if n == 0:
            by_dim[0].append(ref.id)
        else:
            sp = (p1.carrier.src(p), pcell_boundary(tau, "source"))
            tp = (p1.carrier.tgt(p), pcell_boundary(tau, "target"))
            by_dim[n].append((ref.id, element_name(*sp), element_name(*tp)))
    carrier = GlobularSet.build(p1.max_dim, by_dim)
    coll = TCollection.make(carrier, proj, mode)
    return ComposedCollection(coll, p1, p2,
                              tuple(sorted(elements.items())))


def _size(cell: PCell) -> int:
    from .pasting import tree_size

    return tree_size(cell.tree)


def right_unitor(p: TCollection, bound: int) -> tuple[Report, dict[CellRef, CellRef]]:
    """Bijection P∘ι(•) ≅ P on the bounded window."""
    dot = identity_collection(terminal_set(p.max_dim), p.mode)
    comp = compose_collections(p, dot, bound)
    rep = Report("right-unitor")
    mapping: dict[CellRef, CellRef] = {}
    for ref, (left, tau) in comp.pairs:
        rep.checked += 1
        mapping[ref] = left
        if comp.collection.proj_of(ref) != p.proj_of(left):
            rep.add(kind="projection", element=ref.id)
    window = {r for r in p.carrier.all_cells() if _size(p.proj_of(r)) <= bound}
    _check_bijection(rep, mapping, window)
    return rep, mapping


def left_unitor(p: TCollection, bound: int) -> tuple[Report, dict[CellRef, CellRef]]:
    """Bijection ι(•)∘P ≅ P: spine-shaped diagrams are single labels."""
    dot = identity_collection(terminal_set(p.max_dim), p.mode)
    comp = compose_collections(dot, p, bound)
    rep = Report("left-unitor")
    mapping: dict[CellRef, CellRef] = {}
    for ref, (left, tau) in comp.pairs:
        rep.checked += 1
        top = _top_label(tau)
        mapping[ref] = top
        if comp.collection.proj_of(ref) != p.proj_of(top):
            rep.add(kind="projection", element=ref.id)
    window = {r for r in p.carrier.all_cells() if _size(p.proj_of(r)) <= bound}
    _check_bijection(rep, mapping, window)
    return rep, mapping


def _top_label(tau: PCell) -> CellRef:
    """Top label of a spine-shaped diagram."""
    pos: Pos = ("g", 0)
    depth = tree_height(tau.tree)
    for _ in range(depth):
        pos = ("i", 1, pos)
    cid, dec = tau.label(pos)
    if dec:
        raise DomainError("spine diagram with decorated top label")
    return CellRef(depth, cid)


def _check_bijection(rep: Report, mapping: dict, codomain: set) -> None:
    values = list(mapping.values())
    if len(set(values)) != len(values):
        rep.add(kind="not-injective")
    missing = codomain - set(values)
    if missing:
        rep.add(kind="not-surjective", missing=sorted(str(m) for m in missing)[:5])


# ---------------------------------------------------------------------------
# associator


def carve(tau12: PCell, proj2: Mapping[CellRef, PCell], flat_target: PCell,
          prov: dict[Pos, dict[Pos, Pos]] | None = None) -> dict[Pos, PCell]:
    """Split a diagram shaped like the flattening of ``tau12``'s projections
    into one piece per leaf position of ``tau12``.

    The piece at a decorated leaf comes back un-mirrored, so its shape is
    the label's own projection. ``prov`` may carry a precomputed flatten
    provenance for ``tau12``.
    """
    if prov is None:
        flat, prov = flatten_with_positions(tau12, proj2)
        if flat.tree != flat_target.tree:
            raise DomainError("carve: shape mismatch with the flattening")
    pieces: dict[Pos, PCell] = {}
    for leaf, posmap in prov.items():
        cid, dec = tau12.label(leaf)
        shape = proj2[CellRef(pos_dim(leaf), cid)]
        # the provenance is already keyed by the label's own (un-mirrored)
        # positions; a decorated leaf only needs its decorations toggled back
        labels: dict[Pos, Label] = {}
        for q, target_pos in posmap.items():
            lab_id, lab_dec = flat_target.label(target_pos)
            d = pos_dim(q)
            toggled = frozenset(lab_dec ^ {s for s in dec if s < d})
            labels[q] = (lab_id, toggled)
        pieces[leaf] = PCell.make(flat_target.base, shape.dim, shape.tree, labels)
    return pieces


def associator_witness(p1: TCollection, p2: TCollection, p3: TCollection,
                       bound: int) -> tuple[Report, dict[CellRef, CellRef]]:
    """Canonical re-pairing bijection ((P1∘P2)∘P3) → (P1∘(P2∘P3))."""
    rep = Report("associator")
    c12 = compose_collections(p1, p2, bound)
    c12_3 = compose_collections(c12.collection, p3, bound)
    c23 = compose_collections(p2, p3, bound)
    c1_23 = compose_collections(p1, c23.collection, bound)
    proj2 = {ref: p2.proj_of(ref) for ref in p2.carrier.all_cells()}
    mapping: dict[CellRef, CellRef] = {}
    prov_cache: dict[PCell, dict] = {}
    for ref, (pair12, sigma) in c12_3.pairs:
        rep.checked += 1
        p1cell, tau12 = c12.pair_of(pair12)
        if tau12 not in prov_cache:
            _, prov_cache[tau12] = flatten_with_positions(tau12, proj2)
        pieces = carve(tau12, proj2, sigma, prov_cache[tau12])
        # relabel tau12: each leaf becomes a (p2, piece) pair-cell
        labels: dict[Pos, Label] = {}
        ok = True
        for leaf, piece in pieces.items():
            p2cid, dec = tau12.label(leaf)
            p2ref = CellRef(pos_dim(leaf), p2cid)
            inner = c23.find(p2ref, piece)
            if inner is None:
                rep.add(kind="missing-inner-pair", element=ref.id)
                ok = False
                break
            labels[leaf] = (inner.id, dec)
        if not ok:
            continue
        # derive boundary labels by propagation in the composite carrier
        full = _propagate(c23.collection.carrier, tau12.tree, labels)
        if full is None:
            rep.add(kind="label-propagation", element=ref.id)
            continue
        tau_new = PCell.make(c23.collection.carrier, tau12.dim, tau12.tree, full)
        target = c1_23.find(p1cell, tau_new)
        if target is None:
            rep.add(kind="missing-target", element=ref.id)
            continue
        mapping[ref] = target
        if c12_3.collection.proj_of(ref) != c1_23.collection.proj_of(target):
            rep.add(kind="projection", element=ref.id)
    # the matching window on the target side: elements whose middle arity
    # (recovered by projecting pairs to their left components) fits the bound
    env_mid = {ref: p2.proj_of(left)
               for ref, (left, _) in c23.pairs}
    window = set()
    for ref, (p1cell, tau_new) in c1_23.pairs:
        mid, _ = flatten_with_positions(tau_new, env_mid)
        if _size(mid) <= bound:
            window.add(ref)
    _check_bijection(rep, mapping, window)
    return rep, mapping


def _propagate(carrier: GlobularSet, tree, leaf_labels: dict[Pos, Label]
               ) -> dict[Pos, Label] | None:
    labels: dict[Pos, Label] = {}
    for pos, lab in leaf_labels.items():
        stack = [(pos, lab)]
        while stack:
            cur_pos, cur = stack.pop()
            prev = labels.get(cur_pos)
            if prev is not None:
                if prev != cur:
                    return None
                continue
            labels[cur_pos] = cur
            d = pos_dim(cur_pos)
            if d >= 1:
                for side in ("source", "target"):
                    stack.append((pos_boundary(cur_pos, side),
                                  label_boundary(carrier, d, cur, side)))  # type: ignore[arg-type]
    if set(labels) != set(positions(tree)):
        return None
    return labels


def reassociate(x12_pair: tuple[CellRef, PCell], tau12: PCell, sigma: PCell,
                left_proj: Mapping[CellRef, PCell], inner: ComposedCollection,
                prov: dict | None = None) -> PCell | None:
    """One associator step on raw element data: split ``sigma`` along
    ``tau12`` and relabel with pairs of ``inner``; None when a pair falls
    outside the bounded window."""
    pieces = carve(tau12, left_proj, sigma, prov)
    labels: dict[Pos, Label] = {}
    for leaf, piece in pieces.items():
        cid, dec = tau12.label(leaf)
        found = inner.find(CellRef(pos_dim(leaf), cid), piece)
        if found is None:
            return None
        labels[leaf] = (found.id, dec)
    full = _propagate(inner.collection.carrier, tau12.tree, labels)
    if full is None:
        return None
    return PCell.make(inner.collection.carrier, tau12.dim, tau12.tree, full)


def pentagon_check(p1: TCollection, p2: TCollection, p3: TCollection,
                   p4: TCollection, bound: int) -> Report:
    """Both re-bracketing routes ((12)3)4 → 1(2(34)) agree, elementwise on
    the bounded window, without materialising the large right-nested
    composites."""
    rep = Report("pentagon", meta={"bound": bound})
    c12 = compose_collections(p1, p2, bound)
    c23 = compose_collections(p2, p3, bound)
    c34 = compose_collections(p3, p4, bound)
    c12_3 = compose_collections(c12.collection, p3, bound)
    e0 = compose_collections(c12_3.collection, p4, bound)
    c23_4 = compose_collections(c23.collection, p4, bound)
    c2_34 = compose_collections(p2, c34.collection, bound)
    _, a234 = associator_witness(p2, p3, p4, bound)

    proj2 = {ref: p2.proj_of(ref) for ref in p2.carrier.all_cells()}
    proj3 = {ref: p3.proj_of(ref) for ref in p3.carrier.all_cells()}
    proj23 = {ref: c23.collection.proj_of(ref)
              for ref in c23.collection.carrier.all_cells()}

    prov12: dict[PCell, dict] = {}
    prov3: dict[PCell, dict] = {}
    prov_grid: dict[PCell, dict] = {}
    grid_of: dict[CellRef, PCell | None] = {}

    def prov_for(tau: PCell, env, cache: dict) -> dict:
        if tau not in cache:
            _, cache[tau] = flatten_with_positions(tau, env)
        return cache[tau]

    agree = 0
    for e, (y, sigma4) in e0.pairs:
        x12, sigma3 = c12_3.pair_of(y)
        p1cell, tau12 = c12.pair_of(x12)
        # route A: alpha_{12,3,4} then alpha_{1,2,34}
        tau_b = reassociate((x12, sigma3), sigma3, sigma4, proj3, c34,
                            prov_for(sigma3, proj3, prov3))
        via_a = None
        if tau_b is not None:
            via_a = reassociate((p1cell, tau12), tau12, tau_b, proj2, c2_34,
                                prov_for(tau12, proj2, prov12))
        # route B: alpha_{1,2,3} inside, alpha_{1,23,4}, then 1 * alpha_{2,3,4}
        if y not in grid_of:
            grid_of[y] = reassociate((p1cell, tau12), tau12, sigma3, proj2, c23,
                                     prov_for(tau12, proj2, prov12))
        tau_grid = grid_of[y]
        via_b = None
        if tau_grid is not None:
            split4 = reassociate((p1cell, tau_grid), tau_grid, sigma4, proj23,
                                 c23_4, prov_for(tau_grid, proj23, prov_grid))
            if split4 is not None:
                labels: dict[Pos, Label] = {}
                ok = True
                for pos, (cid, dec) in split4.labels:
                    ref = CellRef(pos_dim(pos), cid)
                    mapped = a234.get(ref)
                    if mapped is None:
                        ok = False
                        break
                    labels[pos] = (mapped.id, dec)
                if ok:
                    full = _propagate(c2_34.collection.carrier, split4.tree,
                                      {pos: lab for pos, lab in labels.items()
                                       if _is_leaf(split4.tree, pos)})
                    via_b = (PCell.make(c2_34.collection.carrier, split4.dim,
                                        split4.tree, full)
                             if full is not None else None)
        if via_a is None or via_b is None:
            continue
        rep.checked += 1
        if via_a != via_b:
            rep.add(kind="pentagon-mismatch", element=e.id)
        else:
            agree += 1
    rep.meta["agreed"] = agree
    if rep.checked == 0:
        rep.add(kind="empty-window")
    return rep


def _is_leaf(tree, pos: Pos) -> bool:
    while pos[0] == "i":
        tree = tree[pos[1] - 1]
        pos = pos[2]
    return not tree and pos == ("g", 0)


# ---------------------------------------------------------------------------
# congruences and quotients


@dataclass
class Congruence:
    """A graded, boundary- and projection-preserving equivalence relation,
    stored as union-find over carrier cells."""

    collection: TCollection
    level: str = "collection"  # collection | contracted | magma
    parent: dict[CellRef, CellRef] = field(default_factory=dict)

    def find(self, x: CellRef) -> CellRef:
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def related(self, x: CellRef, y: CellRef) -> bool:
        return self.find(x) == self.find(y)

    def merge(self, x: CellRef, y: CellRef) -> bool:
        """Union + boundary closure; rejects projection violations."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.collection.proj_of(x) != self.collection.proj_of(y):
            raise DomainError(
                f"congruence would break projection preservation: {x.id} ~ {y.id}")
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if x.dim >= 1:
            gs = self.collection.carrier
            self.merge(gs.src(x), gs.src(y))
            self.merge(gs.tgt(x), gs.tgt(y))
        return True

    def classes(self) -> list[list[CellRef]]:
        groups: dict[CellRef, list[CellRef]] = {}
        for ref in self.collection.carrier.all_cells():
            groups.setdefault(self.find(ref), []).append(ref)
        return [sorted(g) for _, g in sorted(groups.items())]


def diagonal_congruence(c: TCollection, level: str = "collection") -> Congruence:
    return Congruence(c, level)


def congruence_from_pairs(c: TCollection, pairs: Iterable[tuple[CellRef, CellRef]],
                          level: str = "collection",
                          kappa: Contraction | None = None,
                          par_bound: int = 0,
                          mu: Mapping | None = None) -> Congruence:
    """Smallest congruence of the requested level containing the pairs.

    ``kappa`` with ``par_bound`` enables the contraction clause; ``mu`` (a
    mapping from (cell, diagram) to cells) enables the multiplication
    clause.
    """
    cong = Congruence(c, level)
    for x, y in pairs:
        cong.merge(x, y)
    changed = True
    while changed:
        changed = False
        if level in ("contracted", "magma") and kappa is not None:
            by_shape: dict[PCell, list[ParTriple]] = {}
            for t in kappa:
                by_shape.setdefault(t.shape, []).append(t)
            for group in by_shape.values():
                for t1, t2 in itertools.combinations(group, 2):
                    if (cong.related(t1.plus, t2.plus)
                            and cong.related(t1.minus, t2.minus)):
                        if cong.merge(kappa[t1], kappa[t2]):
                            changed = True
        if level == "magma" and mu is not None:
            buckets: dict[tuple, list] = {}
            for (x, tau), out in mu.items():
                sig = (cong.find(x), tau.tree,
                       tuple(sorted((pos, cong.find(CellRef(pos_dim(pos), cid)), dec)
                                    for pos, (cid, dec) in tau.labels)))
                buckets.setdefault(sig, []).append(out)
            for outs in buckets.values():
                for a, b in zip(outs, outs[1:]):
                    if cong.merge(a, b):
                        changed = True
    return cong


def induced_congruence(phi: GlobularMorphism, c1: TCollection, c2: TCollection,
                       other: Congruence, level: str = "collection") -> Congruence:
    """Pull a congruence back along a structure morphism."""
    if not is_collection_morphism(phi, c1, c2):
        raise DomainError("induced_congruence: not a collection morphism")
    cong = Congruence(c1, level)
    for n in range(c1.max_dim + 1):
        cells = c1.cells(n)
        for x, y in itertools.combinations(cells, 2):
            if other.related(phi.apply(x), phi.apply(y)):
                cong.merge(x, y)
    return cong


def quotient_collection(c: TCollection, cong: Congruence
                        ) -> tuple[TCollection, GlobularMorphism]:
    """Carrier of classes with the descended projection and quotient map."""
    reps: dict[CellRef, CellRef] = {}
    for group in cong.classes():
        for member in group:
            reps[member] = group[0]
    by_dim: dict[int, list] = {n: [] for n in range(c.max_dim + 1)}
    proj: dict[CellRef, PCell] = {}
    seen = set()
    for ref in c.carrier.all_cells():
        rep = reps[ref]
        if rep in seen:
            continue
        seen.add(rep)
        proj[rep] = c.proj_of(ref)
        if rep.dim == 0:
            by_dim[0].append(rep.id)
        else:
            by_dim[rep.dim].append((rep.id,
                                    reps[c.carrier.src(ref)].id,
                                    reps[c.carrier.tgt(ref)].id))
    carrier = GlobularSet.build(c.max_dim, by_dim)
    quot = TCollection.make(carrier, proj, c.mode)
    phi = GlobularMorphism.build(
        c.carrier, carrier,
        {n: {r.id: reps[r].id for r in c.cells(n)} for n in range(c.max_dim + 1)},
    )
    return quot, phi
