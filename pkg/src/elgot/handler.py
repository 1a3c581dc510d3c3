"""Evaluation of resumption trees into a target iteration monad.

Given a monad morphism sigma from the base into the target and a generic
effect for every signature operation, a tree is consumed one layer per step:
leaves pass through, operation nodes are replaced by their generic effect
returning the child trees.  Iterating that step from bottom gives a monotone
chain of approximants; on trees whose reachable node set is finite the chain
stabilizes and the result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

from .core import ElgotMonad, Inl, Inr, KleisliFn, render_elem
from .resumption import ResTree, ResumptionMonad


class InterpretationError(ValueError):
    """An operation the interpretation cannot handle."""


@dataclass
class MonadMorphism:
    """A natural family of maps between two monads' values.

    component must be element-agnostic: it may rearrange the effect
    structure but never inspect result elements.
    """

    name: str
    source: ElgotMonad
    target: ElgotMonad
    component: Callable


def identity_morphism(m: ElgotMonad) -> MonadMorphism:
    return MonadMorphism("identity", m, m, lambda v: v)


def maybe_to_finset(source, target) -> MonadMorphism:
    from .base_monads import NOTHING, finset
    def comp(v):
        return finset(() if v is NOTHING else (v.value,))
    return MonadMorphism("maybe-to-finset", source, target, comp)


def finset_to_nondetstate(source, target) -> MonadMorphism:
    from .core import Pair
    from .base_monads import finset
    def comp(v):
        return target._value(lambda s: finset(Pair(x, s) for x in v.elems))
    return MonadMorphism("finset-to-nondetstate", source, target, comp)


def maybe_to_nondetstate(source, target) -> MonadMorphism:
    from .core import Pair
    from .base_monads import NOTHING, finset
    def comp(v):
        elems = () if v is NOTHING else (v.value,)
        return target._value(lambda s: finset(Pair(x, s) for x in elems))
    return MonadMorphism("maybe-to-nondetstate", source, target, comp)


class EffectInterpretation:
    """Generic effects u_op : param -> S(arity) for every signature op."""

    def __init__(self, sig, target: ElgotMonad, effects: dict):
        self.sig = sig
        self.target = target
        self.effects = effects
        for op in sig.ops:
            u = effects.get(op.name)
            if u is None:
                raise InterpretationError("no generic effect for operation %s" % op.name)
            if u.dom.elements != op.param.elements:
                raise InterpretationError(
                    "generic effect for %s is defined on %s, expected the "
                    "parameter carrier %s" % (op.name, u.dom.name, op.param.name))
            for p in u.dom.elements:
                for a in target.elements(u(p)):
                    if a not in op.arity.elements:
                        raise InterpretationError(
                            "generic effect for %s yields %s outside its arity "
                            "carrier %s" % (op.name, render_elem(a), op.arity.name))

    def effect(self, op_name: str) -> KleisliFn:
        u = self.effects.get(op_name)
        if u is None:
            raise InterpretationError("unknown operation %s" % op_name)
        return u


def zeta(rm: ResumptionMonad, t: ResTree, sigma: MonadMorphism,
         upsilon: EffectInterpretation):
    """One handling step: a target value over (result + remaining tree)."""
    S = sigma.target
    v = sigma.component(rm.out(t))

    def elem(e):
        if isinstance(e, Inl):
            return S.unit(Inl(e.value))
        node = e.value
        u = upsilon.effect(node.op)
        def to_child(a):
            try:
                return Inr(node.child(a).force())
            except KeyError:
                raise InterpretationError(
                    "operation %s has no child at %s" % (node.op, render_elem(a)))
        return S.map(u(node.param), to_child)

    return S.bind(v, elem)


@dataclass
class HandleResult:
    value: Any
    converged: bool
    rounds: int


def handle(rm: ResumptionMonad, t: ResTree, sigma: MonadMorphism,
           upsilon: EffectInterpretation, fuel: int) -> HandleResult:
    """The fuel-th approximant of evaluating t, with convergence detection.

    Approximants start at bottom and apply one handling step per round;
    convergence is exact equality on the set of nodes actually reached, so
    a converged result is the final value, and an unconverged one is a
    sound under-approximation in the target's order.
    """
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    S = sigma.target
    if S is not upsilon.target:
        raise InterpretationError("morphism and effects target different monads")
    if not S.has_bottom:
        raise InterpretationError(
            "target %s has no bottom; approximants need one" % S.name)
    trees = {t.token: t}
    table = {t.token: S.bottom()}
    steps = {}

    def expand(tok) -> bool:
        grew = False
        zv = zeta(rm, trees[tok], sigma, upsilon)
        steps[tok] = zv
        for e in S.elements(zv):
            if isinstance(e, Inr) and e.value.token not in trees:
                trees[e.value.token] = e.value
                table[e.value.token] = S.bottom()
                grew = True
        return grew

    expand(t.token)
    rounds = 0
    converged = False
    bot = S.bottom()

    def one_round(prev):
        grew = False
        for tok in list(trees):
            if tok not in steps:
                grew = expand(tok) or grew

        def step(e):
            if isinstance(e, Inl):
                return S.unit(e.value)
            return prev.get(e.value.token, bot)

        new = {tok: (S.bind(steps[tok], step) if tok in steps else bot)
               for tok in trees}
        stable = not grew and all(S.equal(new[tok], prev.get(tok, bot))
                                  for tok in new)
        return new, stable

    for _ in range(fuel):
        rounds += 1
        table, stable = one_round(table)
        if stable:
            converged = True
            break
    if not converged:
        # one probe round, not returned: converged means the next
        # approximant agrees with this one on every reached node
        _probe, stable = one_round(table)
        converged = stable
    return HandleResult(table[t.token], converged, rounds)


# ---------------------------------------------------------------------------
# Universality checks
# ---------------------------------------------------------------------------

@dataclass
class TriangleReport:
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def note(self, law: str, witness: str):
        self.failures.append((law, witness))


def check_universal_triangles(rm: ResumptionMonad, sigma: MonadMorphism,
                              upsilon: EffectInterpretation, *,
                              base_values: Iterable = (),
                              op_samples: Iterable = (),
                              bind_samples: Iterable = (),
                              iter_samples: Iterable = (),
                              fuel: int = 10) -> TriangleReport:
    """Check that handling extends sigma, interprets ops by upsilon, and is a
    morphism for Kleisli lifting and iteration on converged samples."""
    S = sigma.target
    rep = TriangleReport()

    def evaluate(t: ResTree) -> Optional[Any]:
        r = handle(rm, t, sigma, upsilon, fuel)
        return r.value if r.converged else None

    for m in base_values:
        rep.checked += 1
        got = evaluate(rm.ext(m))
        want = sigma.component(m)
        if got is None or not S.equal(got, want):
            rep.note("handle.ext", "%s handled to %s, sigma gives %s" %
                     (rm.base.render(m), "divergence" if got is None else S.render(got),
                      S.render(want)))

    for (op, param, k) in op_samples:
        rep.checked += 1
        got = evaluate(rm.iota(op, param, k))
        u = upsilon.effect(op)
        want = S.map(u(param), lambda a: k[a])
        if got is None or not S.equal(got, want):
            rep.note("handle.iota", "op %s(%s) handled to %s, want %s" %
                     (op, render_elem(param),
                      "divergence" if got is None else S.render(got), S.render(want)))

    for (t, f) in bind_samples:
        rep.checked += 1
        lhs = evaluate(rm.bind(t, f))
        handled_f = {x: evaluate(f(x)) for x in f.dom.elements}
        rhs_t = evaluate(t)
        if lhs is None or rhs_t is None or any(v is None for v in handled_f.values()):
            rep.skipped += 1
            continue
        rhs = S.bind(rhs_t, lambda x: handled_f[x])
        if not S.equal(lhs, rhs):
            rep.note("handle.kleisli", "lifting law failed: %s vs %s" %
                     (S.render(lhs), S.render(rhs)))

    for g in iter_samples:
        rep.checked += 1
        handled_g = {x: evaluate(g(x)) for x in g.dom.elements}
        if any(v is None for v in handled_g.values()):
            rep.skipped += 1
            continue
        xi_g = KleisliFn(S, g.dom, g.cod, handled_g)
        lhs = S.iterate(xi_g)
        g_dag = rm.iterate(g)
        for x in g.dom.elements:
            rhs = evaluate(g_dag(x))
            if rhs is None:
                continue
            if not S.equal(lhs(x), rhs):
                rep.note("handle.iteration", "at %s: %s vs %s" %
                         (render_elem(x), S.render(lhs(x)), S.render(rhs)))

    return rep
