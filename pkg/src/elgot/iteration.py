"""Unguarded iteration on resumption trees.

A recursive definition f : X -> Trees(Y+X) is guarded when no first layer
exposes a bare recursive variable: every Inr(x) leaf must sit under an
operation node.  Guarded definitions have unique corecursive solutions; an
arbitrary f is first made guarded by pre-iterating its first layer inside
the base monad, with operation nodes frozen as opaque atoms, and then
solved.  The resulting operator extends base-monad iteration exactly on
trees that never use operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .core import Inl, Inr, KleisliFn, case_sum, render_elem
from .resumption import OpNode, ResumptionMonad, Thunk


class UnguardedError(ValueError):
    def __init__(self, variable, leaf):
        self.variable = variable
        self.leaf = leaf
        super().__init__(
            "definition is unguarded: variable %s exposes the bare recursive "
            "leaf %s in its first layer" % (render_elem(variable), render_elem(leaf)))


@dataclass
class GuardednessWitness:
    guarded: bool
    factor: Optional[dict]      # x -> base value over Y + Sigma Trees(Y+Z)
    variable: Any = None        # first offending variable, when unguarded
    leaf: Any = None            # the bare right-summand leaf it exposes


def check_guarded(rm: ResumptionMonad, f: KleisliFn) -> GuardednessWitness:
    """Decide guardedness of f : X -> Trees(Y+Z) by inspecting first layers.

    When guarded, the factorization witness u is obtained by retagging
    left-summand leaves; T(inl+id) . u recovers out . f exactly.
    """
    base = rm.base
    factor = {}
    for x in f.dom.elements:
        step = rm.out(f(x))
        for e in base.elements(step):
            if isinstance(e, Inl) and isinstance(e.value, Inr):
                return GuardednessWitness(False, None, x, e.value.value)
        factor[x] = base.map(step, lambda e: case_sum(
            e, lambda yz: Inl(yz.value), lambda node: Inr(node)))
    return GuardednessWitness(True, factor)


def guard_transform(rm: ResumptionMonad, f: KleisliFn) -> KleisliFn:
    """Make f : X -> Trees(Y+X) guarded without changing its solutions.

    The first layer of f, with operation nodes frozen as atoms, is a
    base-monad definition over X; its least fixpoint removes every bare
    recursive leaf.  The fixpoint runs over a finite effective lattice
    because the frozen nodes are never inspected, only carried along.
    Guarded inputs come back bisimilar to themselves.
    """
    base = rm.base
    cache = {}

    def pre_iterated():
        if "dag" not in cache:
            def pi(e):
                # ((Y+X) + Sigma) -> ((Y + Sigma) + X)
                if isinstance(e, Inr):
                    return Inl(Inr(e.value))
                return case_sum(e.value,
                                lambda y: Inl(Inl(y)),
                                lambda x: Inr(x))
            w = KleisliFn(base, f.dom, None,
                          {x: base.map(rm.out(f(x)), pi) for x in f.dom.elements})
            cache["dag"] = base.iterate(w)
        return cache["dag"]

    def transformed(x):
        return rm.tree_lazy(lambda: base.map(
            pre_iterated()(x),
            lambda e: case_sum(e, lambda y: Inl(Inl(y)), lambda node: Inr(node))))

    return KleisliFn(rm, f.dom, f.cod, {x: transformed(x) for x in f.dom.elements})


def solve_guarded(rm: ResumptionMonad, f: KleisliFn) -> KleisliFn:
    """The unique solution of a guarded f : X -> Trees(Y+X).

    Each solution tree unfolds one layer of the witness and re-enters the
    solver through the children: out(sol(x)) = T(id + Sigma glue)(u(x))
    where glue substitutes results by pure leaves and recursive calls by
    the solution itself.
    """
    wit = check_guarded(rm, f)
    if not wit.guarded:
        raise UnguardedError(wit.variable, wit.leaf)
    base = rm.base
    u = wit.factor
    y_car = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None
    memo = {}

    def glue(e):
        return case_sum(e, rm.unit, sol)

    def wrap(e):
        if isinstance(e, Inl):
            return Inl(e.value)
        node = e.value
        kids = tuple((a, Thunk(lambda th=th: rm.bind(th.force(), glue)))
                     for a, th in node.children)
        return Inr(OpNode(node.op, node.param, kids))

    def sol(x):
        t = memo.get(x)
        if t is None:
            # setdefault keeps the first tree if two forcings race here
            t = memo.setdefault(x, rm.tree_lazy(lambda x=x: base.map(u[x], wrap)))
        return t

    return KleisliFn(rm, f.dom, y_car, {x: sol(x) for x in f.dom.elements})


def iterate_res(rm: ResumptionMonad, f: KleisliFn) -> KleisliFn:
    """Iteration of an arbitrary f : X -> Trees(Y+X).

    Equals solve_guarded(guard_transform(f)); the per-layer base fixpoint is
    computed on first demand, when some node of the result is observed, and
    shared by every layer of the solution.
    """
    if f.cod is not None and f.cod.kind == "sum":
        if f.cod.parts[1].elements != f.dom.elements:
            raise ValueError(
                "recursive summand %s does not match the domain %s"
                % (f.cod.parts[1].name, f.dom.name))
    y_car = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None
    cache = {}

    def solved() -> KleisliFn:
        if "sol" not in cache:
            cache["sol"] = solve_guarded(rm, guard_transform(rm, f))
        return cache["sol"]

    table = {x: rm.tree_lazy(lambda x=x: rm.out(solved()(x)))
             for x in f.dom.elements}
    return KleisliFn(rm, f.dom, y_car, table)
