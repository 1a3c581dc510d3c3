"""Coinductive resumption trees over a base monad and an operation signature.

A tree is observed one layer at a time: out(t) is a base-monad value whose
elements are either Inl(leaf) or Inr(operation node); an operation node keeps
its children as memoized suspensions.  Nodes and suspensions carry unique
identity tokens, which is what lets base-monad fixpoints treat subtrees as
opaque atoms, and what makes memoized forcing observable in tests.

Equality of trees is undecidable in general; the package works with
depth-indexed bisimilarity via finite truncations.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional

from .core import (Carrier, ConfigError, ElgotMonad, Inl, Inr, KleisliFn,
                   Pair, canon_key, case_sum, render_elem)

_tokens = itertools.count(1)


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpDecl:
    name: str
    param: Carrier
    arity: Carrier

    def __post_init__(self):
        if not self.param.elements or not self.arity.elements:
            raise ConfigError("operation %s needs nonempty parameter and arity "
                              "carriers" % self.name)


@dataclass(frozen=True)
class Signature:
    ops: tuple

    def __post_init__(self):
        names = [o.name for o in self.ops]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate operation names in signature")

    def op(self, name: str) -> OpDecl:
        for o in self.ops:
            if o.name == name:
                return o
        raise KeyError(name)

    def __contains__(self, name: str):
        return any(o.name == name for o in self.ops)


@dataclass(frozen=True)
class SigVal:
    """A flat signature element over seed values, used to feed coit."""

    op: str
    param: Any
    args: tuple    # ((arity atom, seed), ...) in arity order

    def arg(self, a):
        for atom, seed in self.args:
            if atom == a:
                return seed
        raise KeyError(a)

    def _canon_key_(self):
        return (20, self.op, canon_key(self.param),
                tuple((canon_key(a), canon_key(s)) for a, s in self.args))


def sig_val(decl: OpDecl, param, args: Mapping) -> SigVal:
    return SigVal(decl.name, param,
                  tuple((a, args[a]) for a in decl.arity.elements))


# ---------------------------------------------------------------------------
# Suspensions and nodes
# ---------------------------------------------------------------------------

class Thunk:
    """Memoized suspension of a tree; forcing twice yields the same node."""

    __slots__ = ("token", "_fn", "_value", "_lock")

    def __init__(self, fn: Callable[[], "ResTree"]):
        self.token = next(_tokens)
        self._fn = fn
        self._value = None
        self._lock = threading.Lock()

    @classmethod
    def ready(cls, tree: "ResTree") -> "Thunk":
        t = cls(lambda: tree)
        t._value = tree
        return t

    def force(self) -> "ResTree":
        v = self._value
        if v is None:
            with self._lock:
                if self._value is None:
                    self._value = self._fn()
                    self._fn = None
                v = self._value
        return v


class OpNode:
    """One operation layer: name, parameter, suspended children per arity atom.

    Equality and hashing go through the child suspension tokens, never the
    child structure, so these nodes can sit inside base-monad set values.
    """

    __slots__ = ("op", "param", "children")

    def __init__(self, op: str, param, children):
        self.op = op
        self.param = param
        self.children = tuple(children)   # ((arity atom, Thunk), ...)

    def child(self, a) -> Thunk:
        for atom, th in self.children:
            if atom == a:
                return th
        raise KeyError(a)

    def _ident(self):
        return (self.op, self.param,
                tuple((a, th.token) for a, th in self.children))

    def __eq__(self, other):
        return isinstance(other, OpNode) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def _canon_key_(self):
        return (21, self.op, canon_key(self.param),
                tuple(th.token for _a, th in self.children))

    def _render_(self):
        return "(node %s %s)" % (self.op, render_elem(self.param))


class ResTree:
    """A resumption tree; out() materializes and memoizes the first layer."""

    __slots__ = ("token", "_step", "_fn", "_lock")

    def __init__(self, step=None, fn: Optional[Callable] = None):
        self.token = next(_tokens)
        self._step = step
        self._fn = fn
        self._lock = threading.Lock()

    def out(self):
        v = self._step
        if v is None:
            with self._lock:
                if self._step is None:
                    self._step = self._fn()
                    self._fn = None
                v = self._step
        return v

    def _canon_key_(self):
        return (22, self.token)

    def _render_(self):
        return "(tree #%d)" % self.token


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TLeaf:
    value: Any

    def _canon_key_(self):
        return (30, canon_key(self.value))

    def _render_(self):
        return "(leaf %s)" % render_elem(self.value)


class _TCut:
    __slots__ = ()

    def _canon_key_(self):
        return (31,)

    def _render_(self):
        return "(cut)"


TCUT = _TCut()


@dataclass(frozen=True)
class TOp:
    op: str
    param: Any
    children: tuple   # truncated values in arity order

    def _canon_key_(self):
        return (32, self.op, canon_key(self.param),
                tuple(canon_key(c) for c in self.children))

    def _render_(self):
        parts = " ".join(render_elem(c) for c in self.children)
        return "(op %s %s %s)" % (self.op, render_elem(self.param), parts)


# ---------------------------------------------------------------------------
# The monad instance
# ---------------------------------------------------------------------------

class ResumptionMonad(ElgotMonad):
    """Trees over a base monad with free operations from a signature.

    Values are ResTree objects; equal() is bisimilarity at the configured
    depth.  Iteration is the guarding-transform construction from the
    companion iteration module.
    """

    def __init__(self, base: ElgotMonad, sig: Signature, depth: int = 6):
        self.base = base
        self.sig = sig
        self.depth = depth
        self.name = "resumption(%s; %s)" % (base.name,
                                            ",".join(o.name for o in sig.ops))

    # -- coalgebra structure ------------------------------------------------

    def out(self, t: ResTree):
        return t.out()

    def out_inv(self, value) -> ResTree:
        return ResTree(step=value)

    def tree_lazy(self, fn: Callable) -> ResTree:
        return ResTree(fn=fn)

    def unit(self, x) -> ResTree:
        return self.out_inv(self.base.unit(Inl(x)))

    def ext(self, m) -> ResTree:
        """Embed a base-monad value as a leaf-only tree."""
        return self.out_inv(self.base.map(m, Inl))

    def op_call(self, op: str, param, children: Mapping) -> ResTree:
        """The free operation applied to continuation trees."""
        decl = self.sig.op(op)
        kids = []
        for a in decl.arity.elements:
            child = children[a]
            kids.append((a, child if isinstance(child, Thunk) else Thunk.ready(child)))
        return self.out_inv(self.base.unit(Inr(OpNode(op, param, kids))))

    def iota(self, op: str, param, k: Mapping) -> ResTree:
        """Generic operation with pure continuations k : arity -> X."""
        decl = self.sig.op(op)
        return self.op_call(op, param,
                            {a: Thunk.ready(self.unit(k[a])) for a in decl.arity.elements})

    def coit(self, g: KleisliFn) -> KleisliFn:
        """Final-coalgebra unfolding of g : Y -> T(X + Sigma Y).

        Signature positions in g's output carry SigVal seeds; children are
        suspensions re-invoking the unfolding on the seed.  Seeds are shared,
        so revisiting one yields the identical node.
        """
        memo = {}

        def go(y) -> ResTree:
            t = memo.get(y)
            if t is None:
                t = memo.setdefault(
                    y, self.tree_lazy(lambda y=y: self.base.map(g(y), step_elem)))
            return t

        def step_elem(e):
            return case_sum(
                e,
                lambda x: Inl(x),
                lambda sv: Inr(OpNode(
                    sv.op, sv.param,
                    tuple((a, Thunk(lambda s=s: go(s))) for a, s in sv.args))))

        return KleisliFn(self, g.dom, None, {y: go(y) for y in g.dom.elements})

    # -- monad structure ----------------------------------------------------

    def bind(self, t: ResTree, f: Callable) -> ResTree:
        """Kleisli lifting: rewrite leaves by f, corecursively under nodes."""

        def step():
            def elem(e):
                if isinstance(e, Inl):
                    return self.out(f(e.value))
                node = e.value
                kids = tuple(
                    (a, Thunk(lambda th=th: self.bind(th.force(), f)))
                    for a, th in node.children)
                return self.base.unit(Inr(OpNode(node.op, node.param, kids)))
            return self.base.bind(self.out(t), elem)

        return self.tree_lazy(step)

    def strength(self, c, t: ResTree) -> ResTree:
        def step():
            def elem(e):
                if isinstance(e, Inl):
                    return Inl(Pair(c, e.value))
                node = e.value
                kids = tuple(
                    (a, Thunk(lambda th=th: self.strength(c, th.force())))
                    for a, th in node.children)
                return Inr(OpNode(node.op, node.param, kids))
            return self.base.map(self.out(t), elem)
        return self.tree_lazy(step)

    # -- order and iteration -------------------------------------------------

    @property
    def has_bottom(self):
        return self.base.has_bottom

    def bottom(self) -> ResTree:
        return self.out_inv(self.base.bottom())

    def iterate(self, f: KleisliFn) -> KleisliFn:
        from .iteration import iterate_res
        return iterate_res(self, f)

    # -- observation ----------------------------------------------------------

    def truncate(self, t: ResTree, depth: int):
        """Finite observation: cut every operation layer below `depth`."""
        if depth < 0:
            raise ValueError("depth must be nonnegative")

        def elem(e):
            if isinstance(e, Inl):
                return TLeaf(e.value)
            node = e.value
            if depth == 0:
                return TCUT
            kids = tuple(self.truncate(th.force(), depth - 1)
                         for _a, th in node.children)
            return TOp(node.op, node.param, kids)

        # base.map rebuilds the layer, so set layers come out canonically
        # sorted by the structural key of the truncated elements
        return self.base.map(self.out(t), elem)

    def bisimilar(self, t1: ResTree, t2: ResTree, depth: int) -> bool:
        if t1 is t2:
            return True
        return self.truncate(t1, depth) == self.truncate(t2, depth)

    def equal(self, a, b) -> bool:
        return self.bisimilar(a, b, self.depth)

    def render(self, t: ResTree, depth: Optional[int] = None) -> str:
        return render_truncation(self.base, self.truncate(t, self.depth if depth is None else depth))

    def sample_value(self, rng, gen_elem, branch):
        raise NotImplementedError("tree generation lives in the law harness")


def render_truncation(base: ElgotMonad, trunc) -> str:
    return base.render(trunc)
