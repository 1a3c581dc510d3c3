"""The three omega-continuous base monads: partiality (Maybe), finite
nondeterminism (FinSet), and nondeterministic state over a finite state set.

Iteration on all three is the least fixpoint of h |-> [unit, h]* . f,
computed by Kleene iteration from bottom; the hom-lattices are finite so the
chain is detected to stabilize by exact equality, never by a step budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from .core import (Carrier, ConfigError, ElgotMonad, Inl, Inr, KleisliFn, Pair,
                   canon_key, carrier, render_elem)


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

class _Nothing:
    __slots__ = ()

    def __repr__(self):
        return "nothing"

    def _canon_key_(self):
        return (10,)

    def _render_(self):
        return "(bot)"


NOTHING = _Nothing()


@dataclass(frozen=True)
class Just:
    value: Any

    def _canon_key_(self):
        return (11, canon_key(self.value))

    def _render_(self):
        return render_elem(self.value)


@dataclass(frozen=True)
class FinSet:
    """Canonical finite set: sorted by canon_key, deduplicated."""

    elems: tuple

    def _canon_key_(self):
        return (12,) + tuple(canon_key(e) for e in self.elems)

    def _render_(self):
        return "{%s}" % " ".join(render_elem(e) for e in self.elems)

    def __contains__(self, e):
        return e in self.elems

    def __len__(self):
        return len(self.elems)


def finset(elems: Iterable) -> FinSet:
    return FinSet(tuple(sorted(dict.fromkeys(elems), key=canon_key)))


EMPTY_SET = finset(())


@dataclass(frozen=True)
class NdState:
    """Total map from state atoms to sets of (result, next state) pairs."""

    table: tuple   # ((state, FinSet of Pair(x, state')), ...) in state order

    def at(self, s) -> FinSet:
        for state, v in self.table:
            if state == s:
                return v
        raise KeyError(s)

    def _canon_key_(self):
        return (13,) + tuple((canon_key(s), canon_key(v)) for s, v in self.table)

    def _render_(self):
        return "(states %s)" % " ".join(
            "(%s %s)" % (s, render_elem(v)) for s, v in self.table)


# ---------------------------------------------------------------------------
# Kleene iteration (shared by all three instances)
# ---------------------------------------------------------------------------

def kleene_iterate(f: KleisliFn) -> KleisliFn:
    """Least solution of h = [unit, h]* . f for f : X -> T(Y+X).

    Iterates from the bottom function until two successive iterates agree;
    stabilization is guaranteed on the finite lattice and asserted against a
    generous structural bound rather than cut off by fuel.
    """
    m = f.monad
    dom = f.dom
    cod = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None

    # every non-stable step strictly grows some point of the lattice, so the
    # chain length is at most the total capacity: one slot per domain point,
    # reachable element, and state pair (squared: result and successor state)
    universe = set()
    for x in dom.elements:
        universe.update(m.elements(f(x)))
    states = len(getattr(m, "states", ())) + 1
    bound = (len(dom.elements) + 1) * (len(universe) + 2) * states * states + 8

    cur = {x: m.bottom() for x in dom.elements}
    steps = 0
    while True:
        new = {}
        for x in dom.elements:
            def step(e, _cur=cur):
                if isinstance(e, Inl):
                    return m.unit(e.value)
                if isinstance(e, Inr):
                    return _cur[e.value]
                raise TypeError("iteration over a non-sum element %r" % (e,))
            new[x] = m.bind(f(x), step)
        steps += 1
        assert steps <= bound, "Kleene iteration failed to stabilize"
        if all(m.equal(new[x], cur[x]) for x in dom.elements):
            return KleisliFn(m, dom, cod, new)
        cur = new


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

class MaybeMonad(ElgotMonad):
    name = "maybe"
    has_bottom = True

    def unit(self, x):
        return Just(x)

    def bind(self, v, f):
        if v is NOTHING:
            return NOTHING
        return f(v.value)

    def elements(self, v):
        return () if v is NOTHING else (v.value,)

    def bottom(self):
        return NOTHING

    def leq(self, a, b):
        return a is NOTHING or a == b

    def iterate(self, f):
        return kleene_iterate(f)

    def render(self, v):
        return render_elem(v) if v is NOTHING else render_elem(v.value)

    def sample_value(self, rng, gen_elem, branch):
        if rng.random() < 0.3:
            return NOTHING
        return Just(gen_elem())


class FinSetMonad(ElgotMonad):
    name = "finset"
    has_bottom = True

    def unit(self, x):
        return FinSet((x,))

    def bind(self, v, f):
        out = []
        for e in v.elems:
            out.extend(f(e).elems)
        return finset(out)

    def elements(self, v):
        return v.elems

    def bottom(self):
        return EMPTY_SET

    def leq(self, a, b):
        return all(e in b.elems for e in a.elems)

    def iterate(self, f):
        return kleene_iterate(f)

    def render(self, v):
        return render_elem(v)

    def sample_value(self, rng, gen_elem, branch):
        return finset(gen_elem() for _ in range(rng.randint(0, branch)))


class NondetStateMonad(ElgotMonad):
    """P(X x S)^S for a finite state carrier S."""

    has_bottom = True

    def __init__(self, states: Carrier):
        if not states.elements:
            raise ConfigError("nondetstate needs a nonempty state carrier")
        self.states = states.elements
        self.name = "nondetstate[%s]" % ",".join(states.elements)

    def _value(self, per_state: Callable):
        return NdState(tuple((s, per_state(s)) for s in self.states))

    def unit(self, x):
        return self._value(lambda s: finset((Pair(x, s),)))

    def bind(self, v, f):
        def per_state(s):
            out = []
            for p in v.at(s).elems:
                out.extend(f(p.fst).at(p.snd).elems)
            return finset(out)
        return self._value(per_state)

    def elements(self, v):
        seen = {}
        for _s, fs in v.table:
            for p in fs.elems:
                seen[p.fst] = None
        return tuple(seen)

    def bottom(self):
        return self._value(lambda _s: EMPTY_SET)

    def leq(self, a, b):
        return all(all(e in b.at(s).elems for e in a.at(s).elems)
                   for s, _ in a.table)

    def iterate(self, f):
        return kleene_iterate(f)

    def render(self, v):
        return render_elem(v)

    def sample_value(self, rng, gen_elem, branch):
        def per_state(_s):
            return finset(Pair(gen_elem(), rng.choice(self.states))
                          for _ in range(rng.randint(0, branch)))
        return self._value(per_state)


def elgot_instance(kind: str, state_set: Optional[Iterable[str]] = None) -> ElgotMonad:
    """A fully populated instance from the closed family."""
    if kind == "maybe":
        return MaybeMonad()
    if kind == "finset":
        return FinSetMonad()
    if kind == "nondetstate":
        states = tuple(state_set or ())
        if not states:
            raise ConfigError("nondetstate requires a state set")
        return NondetStateMonad(carrier("S", states))
    raise ConfigError("unknown monad kind %r" % kind)


# ---------------------------------------------------------------------------
# Partition-based iteration for Maybe
# ---------------------------------------------------------------------------

def partition_iterate_maybe(f: KleisliFn) -> KleisliFn:
    """Iteration on Maybe by partitioning the domain into preimage layers.

    X1 is the preimage of results, X_{i+1} the preimage of X_i; everything
    else (immediate nothing, or a cycle of variables) diverges.  Must agree
    extensionally with kleene_iterate.
    """
    if not isinstance(f.monad, MaybeMonad):
        raise ConfigError("partition iteration is defined on Maybe only, got %s"
                          % f.monad.name)
    m = f.monad
    cod = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None
    table = {}
    for x0 in f.dom.elements:
        seen = set()
        x = x0
        result = NOTHING
        while True:
            if x in seen:          # cycle of variables, no operations: diverge
                break
            seen.add(x)
            v = f(x)
            if v is NOTHING:
                break
            if isinstance(v.value, Inl):
                result = Just(v.value.value)
                break
            x = v.value.value
        table[x0] = result
    return KleisliFn(m, f.dom, cod, table)
