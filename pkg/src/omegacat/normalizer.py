"""Equality in the free strict (involutive) globular omega-category.

``normalize`` evaluates a term into its labeled pasting diagram and reads
the canonical term back off; ``equal_terms`` compares canonical forms.
``trace_normalize`` explains the same reduction as oriented rewrite steps
(the interchange ordering is applied as one final pass, since the exchange
axiom is not orientable as a terminating rule).

``congruence_closure_oracle`` is the independent ground truth: it closes
the generating equation instances inside a bounded term universe using
only union-find and signature congruence, never consulting the diagram
model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .config import Mode
from .errors import DomainError, ResourceBudgetError
from .globular import CellRef, GlobularSet
from .pasting import PCell, eval_term, pcell_boundary, reify, tree_height
from .terms import (
    Comp,
    Gen,
    Id,
    Inv,
    Term,
    boundary_of_term,
    dim_of,
    iterated_term_boundary,
    render,
    term_size,
)

CanonicalForm = Term


def _check_mode(t: Term, mode: Mode) -> None:
    if mode is Mode.INVOLUTIVE:
        return
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Inv):
            raise DomainError("involution node in strict mode")
        if isinstance(node, Id):
            stack.append(node.body)
        elif isinstance(node, Comp):
            stack.extend((node.left, node.right))


def normalize(gs: GlobularSet, t: Term, mode: Mode) -> CanonicalForm:
    """Canonical representative of t's class; idempotent."""
    _check_mode(t, mode)
    return reify(eval_term(gs, t))


def equal_terms(gs: GlobularSet, t1: Term, t2: Term, mode: Mode) -> bool:
    if dim_of(t1) != dim_of(t2):
        raise DomainError("equal_terms: dimensions differ")
    _check_mode(t1, mode)
    _check_mode(t2, mode)
    return eval_term(gs, t1) == eval_term(gs, t2)


# ---------------------------------------------------------------------------
# oriented rewrite rules (used for traces and rule-level tests)


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: str
    rhs: str
    apply: Callable[[GlobularSet, Mode, Term], Optional[Term]] = field(compare=False)

    def __repr__(self) -> str:  # pragma: no cover
        return f"RewriteRule({self.name}: {self.lhs} -> {self.rhs})"


def _is_unit_for(gs: GlobularSet, cand: PCell, other: PCell, p: int, side: str) -> bool:
    """Is ``cand`` the identity padding of ``other``'s p-boundary?"""
    n = cand.dim
    if tree_height(cand.tree) > p:
        return False
    low = PCell(cand.base, p, cand.tree, cand.labels)
    return low == pcell_boundary(other, side, n - p)  # type: ignore[arg-type]


def _r_assoc(gs, mode, t):
    if isinstance(t, Comp) and isinstance(t.left, Comp) and t.left.level == t.level:
        return Comp(t.level, t.left.left, Comp(t.level, t.left.right, t.right))
    return None


def _r_unit_left(gs, mode, t):
    if isinstance(t, Comp):
        cl, cr = eval_term(gs, t.left), eval_term(gs, t.right)
        if _is_unit_for(gs, cl, cr, t.level, "target"):
            return t.right
    return None


def _r_unit_right(gs, mode, t):
    if isinstance(t, Comp):
        cl, cr = eval_term(gs, t.left), eval_term(gs, t.right)
        if _is_unit_for(gs, cr, cl, t.level, "source"):
            return t.left
    return None


def _r_id_functor(gs, mode, t):
    if (isinstance(t, Comp) and isinstance(t.left, Id) and isinstance(t.right, Id)
            and t.level < dim_of(t) - 1):
        return Id(Comp(t.level, t.left.body, t.right.body))
    return None


def _r_inv_double(gs, mode, t):
    if isinstance(t, Inv) and isinstance(t.body, Inv) and t.body.level == t.level:
        return t.body.body
    return None


def _r_inv_sort(gs, mode, t):
    if isinstance(t, Inv) and isinstance(t.body, Inv) and t.body.level < t.level:
        return Inv(t.body.level, Inv(t.level, t.body.body))
    return None


def _r_inv_id(gs, mode, t):
    if isinstance(t, Inv) and isinstance(t.body, Id):
        inner = t.body.body
        if t.level >= dim_of(inner):
            return Id(inner)
        return Id(Inv(t.level, inner))
    return None


def _r_inv_comp(gs, mode, t):
    if isinstance(t, Inv) and isinstance(t.body, Comp):
        q, c = t.level, t.body
        if q == c.level:
            return Comp(c.level, Inv(q, c.right), Inv(q, c.left))
        return Comp(c.level, Inv(q, c.left), Inv(q, c.right))
    return None


RULES: tuple[RewriteRule, ...] = (
    RewriteRule("inv-double", "γq(γq(x))", "x", _r_inv_double),
    RewriteRule("inv-sort", "γq(γp(x)), p<q", "γp(γq(x))", _r_inv_sort),
    RewriteRule("inv-id", "γq(ι(x))", "ι(γq(x))", _r_inv_id),
    RewriteRule("inv-comp", "γq(x ∘p y)", "γq(x) ∘p γq(y) (swapped at q=p)", _r_inv_comp),
    RewriteRule("id-functoriality", "ι(x) ∘p ι(y)", "ι(x ∘p y)", _r_id_functor),
    RewriteRule("unit-left", "ι…(t(x)) ∘p x", "x", _r_unit_left),
    RewriteRule("unit-right", "x ∘p ι…(s(x))", "x", _r_unit_right),
    RewriteRule("assoc", "(x ∘p y) ∘p z", "x ∘p (y ∘p z)", _r_assoc),
)


@dataclass
class TraceStep:
    rule: str
    path: tuple[int, ...]
    before: Term
    after: Term

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "path": list(self.path),
            "before": render(self.before),
            "after": render(self.after),
        }


def _rewrite_once(gs: GlobularSet, mode: Mode, t: Term, path: tuple[int, ...] = ()
                  ) -> Optional[tuple[Term, TraceStep]]:
    """Innermost-leftmost single step."""
    children: tuple[tuple[int, Term], ...]
    if isinstance(t, Gen):
        children = ()
    elif isinstance(t, (Id, Inv)):
        children = ((0, t.body),)
    else:
        children = ((0, t.left), (1, t.right))
    for idx, child in children:
        hit = _rewrite_once(gs, mode, child, path + (idx,))
        if hit is not None:
            new_child, step = hit
            if isinstance(t, Id):
                return Id(new_child), step
            if isinstance(t, Inv):
                return Inv(t.level, new_child), step
            assert isinstance(t, Comp)
            if idx == 0:
                return Comp(t.level, new_child, t.right), step
            return Comp(t.level, t.left, new_child), step
    for rule in RULES:
        out = rule.apply(gs, mode, t)
        if out is not None:
            return out, TraceStep(rule.name, path, t, out)
    return None


def trace_normalize(gs: GlobularSet, t: Term, mode: Mode,
                    budget: int = 100_000) -> tuple[CanonicalForm, list[TraceStep]]:
    """Normalize with a replayable step log; agrees with :func:`normalize`."""
    _check_mode(t, mode)
    steps: list[TraceStep] = []
    current = t
    for _ in range(budget):
        hit = _rewrite_once(gs, mode, current)
        if hit is None:
            break
        current, step = hit
        steps.append(step)
    else:
        raise ResourceBudgetError(
            f"rewrite budget {budget} exhausted at {render(current)}")
    final = normalize(gs, t, mode)
    if final != current:
        steps.append(TraceStep("interchange-order", (), current, final))
    return final, steps


# ---------------------------------------------------------------------------
# bounded congruence-closure oracle


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass
class OraclePartition:
    """Equivalence classes of all terms of size ≤ max_nodes, per dimension."""

    base: GlobularSet
    mode: Mode
    max_nodes: int
    class_of: dict[Term, int]
    universes: dict[int, tuple[Term, ...]]

    def same_class(self, t1: Term, t2: Term) -> bool:
        if t1 not in self.class_of or t2 not in self.class_of:
            raise DomainError("term outside the oracle universe")
        return self.class_of[t1] == self.class_of[t2]

    def classes(self, dim: int | None = None) -> list[list[Term]]:
        groups: dict[int, list[Term]] = {}
        for t, c in self.class_of.items():
            if dim is None or dim_of(t) == dim:
                groups.setdefault(c, []).append(t)
        return [sorted(g, key=render) for _, g in sorted(groups.items())]


def _idpad(w: Term, upto: int) -> Term:
    t = w
    for _ in range(upto - dim_of(w)):
        t = Id(t)
    return t


def congruence_closure_oracle(gs: GlobularSet, mode: Mode, max_nodes: int,
                              slack: int = 2, max_universe: int = 400_000
                              ) -> OraclePartition:
    """Worklist closure of the generating equations inside the bounded term
    universe.

    Equalities between terms of size ≤ max_nodes can need intermediates a
    little larger (distributing an involution through nested compositions
    grows a term before it shrinks), so the closure runs over terms of size
    ≤ max_nodes + slack and reports classes for size ≤ max_nodes only.
    """
    bound = max_nodes + slack
    universes: dict[int, tuple[Term, ...]] = {}
    final_cls: dict[Term, int] = {}
    next_class = itertools.count()
    total = 0

    for n in range(gs.max_dim + 1):
        terms = _universe(gs, mode, bound, n, final_cls, max_universe - total)
        total += len(terms)
        universes[n] = terms
        index = {t: i for i, t in enumerate(terms)}
        uf = _UnionFind(len(terms))

        def bnd_cls(t: Term, k: int, side: str) -> int:
            w = iterated_term_boundary(gs, t, k, side)  # type: ignore[arg-type]
            return final_cls[w]

        # generating pairs (root instances whose partner is in the universe)
        for t in terms:
            partners: list[Term] = []
            if isinstance(t, Comp):
                p, n_t = t.level, dim_of(t)
                if isinstance(t.left, Comp) and t.left.level == p:
                    partners.append(Comp(p, t.left.left, Comp(p, t.left.right, t.right)))
                if (isinstance(t.left, Comp) and isinstance(t.right, Comp)
                        and t.left.level == t.right.level != p):
                    q = t.left.level
                    partners.append(Comp(q,
                                         Comp(p, t.left.left, t.right.left),
                                         Comp(p, t.left.right, t.right.right)))
                if (isinstance(t.left, Id) and isinstance(t.right, Id)
                        and p < n_t - 1):
                    partners.append(Id(Comp(p, t.left.body, t.right.body)))
            if isinstance(t, Inv):
                q, body = t.level, t.body
                if isinstance(body, Inv):
                    if body.level == q:
                        partners.append(body.body)
                    else:
                        partners.append(Inv(body.level, Inv(q, body.body)))
                if isinstance(body, Comp):
                    if body.level == q:
                        partners.append(Comp(q, Inv(q, body.right), Inv(q, body.left)))
                    else:
                        partners.append(Comp(body.level, Inv(q, body.left),
                                             Inv(q, body.right)))
                if isinstance(body, Id):
                    inner = body.body
                    partners.append(Id(inner) if q >= dim_of(inner)
                                    else Id(Inv(q, inner)))
            # unit laws, stated with the literal boundary padding
            n_t = dim_of(t)
            for p in range(n_t):
                tgt = iterated_term_boundary(gs, t, n_t - p, "target")
                src = iterated_term_boundary(gs, t, n_t - p, "source")
                partners.append(Comp(p, _idpad(tgt, n_t), t))
                partners.append(Comp(p, t, _idpad(src, n_t)))
            for other in partners:
                j = index.get(other)
                if j is not None:
                    uf.union(index[t], j)

        # signature congruence until fixpoint
        changed = True
        while changed:
            changed = False
            buckets: dict[tuple, int] = {}
            for i, t in enumerate(terms):
                if isinstance(t, Gen):
                    sig = ("gen", t.cell.id)
                elif isinstance(t, Id):
                    sig = ("id", final_cls[t.body])
                elif isinstance(t, Inv):
                    sig = ("inv", t.level, uf.find(index[t.body]))
                else:
                    sig = ("comp", t.level, uf.find(index[t.left]),
                           uf.find(index[t.right]))
                first = buckets.setdefault(sig, i)
                if first != i and uf.union(first, i):
                    changed = True

        # freeze this dimension
        root_to_cls: dict[int, int] = {}
        for i, t in enumerate(terms):
            r = uf.find(i)
            if r not in root_to_cls:
                root_to_cls[r] = next(next_class)
            final_cls[t] = root_to_cls[r]

    keep = {t: c for t, c in final_cls.items() if term_size(t) <= max_nodes}
    restricted = {
        n: tuple(t for t in ts if term_size(t) <= max_nodes)
        for n, ts in universes.items()
    }
    return OraclePartition(gs, mode, max_nodes, keep, restricted)


def _universe(gs: GlobularSet, mode: Mode, bound: int, dim: int,
              lower_cls: dict[Term, int], remaining: int) -> tuple[Term, ...]:
    """All well-formed dim-terms of size ≤ bound, composability decided by
    the already-closed lower-dimensional classes."""
    by_size: dict[int, list[Term]] = {s: [] for s in range(bound + 1)}
    seen: set[Term] = set()

    def add(t: Term, s: int) -> None:
        if t not in seen:
            seen.add(t)
            by_size[s].append(t)
            if len(seen) > remaining:
                raise ResourceBudgetError(
                    f"oracle universe exceeds budget at dimension {dim}")

    for cid in gs.ids(dim):
        add(Gen(CellRef(dim, cid)), 1)
    if dim >= 1:
        for w in lower_cls:
            if dim_of(w) == dim - 1 and term_size(w) <= bound:
                add(Id(w), term_size(w))
    # boundary class cache for composability
    bcls: dict[tuple[Term, int, str], int] = {}

    def bc(t: Term, p: int, side: str) -> int:
        key = (t, p, side)
        if key not in bcls:
            w = iterated_term_boundary(gs, t, dim - p, side)  # type: ignore[arg-type]
            bcls[key] = lower_cls[w]
        return bcls[key]

    for size in range(2, bound + 1):
        for body in by_size[size - 1][:]:
            if mode is Mode.INVOLUTIVE:
                for q in range(dim):
                    add(Inv(q, body), size)
        for ls in range(1, size - 1):
            rs = size - 1 - ls
            for left in list(by_size[ls]):
                for right in list(by_size[rs]):
                    for p in range(dim):
                        if bc(left, p, "source") == bc(right, p, "target"):
                            add(Comp(p, left, right), size)
    out: list[Term] = []
    for s in range(bound + 1):
        out.extend(sorted(by_size[s], key=render))
    return tuple(out)
