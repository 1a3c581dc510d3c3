"""Finite carriers, tagged sums and products, Kleisli functions, and the
interface every iteration monad in this package implements.

Atoms are plain interned strings; every composite value (sum tags, pairs,
operation nodes, truncated tree layers) carries a canonical sort key so that
finite sets over mixed element types have a stable, deterministic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional


class CarrierMismatchError(TypeError):
    """Composition of Kleisli functions whose carriers do not line up."""


class ConfigError(ValueError):
    """Invalid instance configuration (empty state carrier etc.)."""


# ---------------------------------------------------------------------------
# Tagged values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inl:
    value: Any

    def _canon_key_(self):
        return (2, canon_key(self.value))

    def _render_(self):
        return "(inl %s)" % render_elem(self.value)


@dataclass(frozen=True)
class Inr:
    value: Any

    def _canon_key_(self):
        return (3, canon_key(self.value))

    def _render_(self):
        return "(inr %s)" % render_elem(self.value)


@dataclass(frozen=True)
class Pair:
    fst: Any
    snd: Any

    def _canon_key_(self):
        return (4, canon_key(self.fst), canon_key(self.snd))

    def _render_(self):
        return "(pair %s %s)" % (render_elem(self.fst), render_elem(self.snd))


def canon_key(v):
    """Total order key over every element type used in monadic values."""
    if isinstance(v, str):
        return (0, v)
    if isinstance(v, int):
        return (1, v)
    key = getattr(v, "_canon_key_", None)
    if key is None:
        raise TypeError("no canonical order for %r" % (v,))
    return key()


def render_elem(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    render = getattr(v, "_render_", None)
    if render is None:
        return repr(v)
    return render()


def case_sum(v, on_left: Callable, on_right: Callable):
    if isinstance(v, Inl):
        return on_left(v.value)
    if isinstance(v, Inr):
        return on_right(v.value)
    raise TypeError("expected a sum value, got %r" % (v,))


def dist_elem(p: Pair):
    """C x (Y+X)  ->  (C x Y) + (C x X), the distributivity isomorphism."""
    return case_sum(p.snd,
                    lambda y: Inl(Pair(p.fst, y)),
                    lambda x: Inr(Pair(p.fst, x)))


# ---------------------------------------------------------------------------
# Carriers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Carrier:
    """A named finite set of elements with a stable enumeration order."""

    name: str
    elements: tuple
    kind: str = "atoms"       # "atoms" | "sum" | "prod"
    parts: tuple = ()

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ConfigError("carrier %s has duplicate elements" % self.name)

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)


def carrier(name: str, atoms: Iterable[str]) -> Carrier:
    return Carrier(name, tuple(atoms))


def sum_carrier(left: Carrier, right: Carrier) -> Carrier:
    elems = tuple(Inl(x) for x in left.elements) + tuple(Inr(x) for x in right.elements)
    return Carrier("(%s+%s)" % (left.name, right.name), elems, "sum", (left, right))


def prod_carrier(left: Carrier, right: Carrier) -> Carrier:
    elems = tuple(Pair(a, b) for a in left.elements for b in right.elements)
    return Carrier("(%sx%s)" % (left.name, right.name), elems, "prod", (left, right))


def unit_carrier() -> Carrier:
    return carrier("1", ("*",))


def empty_carrier() -> Carrier:
    return carrier("0", ())


# ---------------------------------------------------------------------------
# Monad interface
# ---------------------------------------------------------------------------

class ElgotMonad:
    """A strong monad with a chosen iteration operator.

    Concrete instances supply unit, Kleisli lifting (bind), value equality,
    and iteration; map and strength are the canonical derived forms.  The
    order-theoretic members (bottom, leq) exist exactly for the
    omega-continuous instances.
    """

    name: str = "?"
    has_bottom: bool = False

    def unit(self, x):
        raise NotImplementedError

    def bind(self, v, f: Callable):
        raise NotImplementedError

    def map(self, v, g: Callable):
        return self.bind(v, lambda x: self.unit(g(x)))

    def strength(self, c, v):
        return self.map(v, lambda x: Pair(c, x))

    def equal(self, a, b) -> bool:
        return a == b

    def elements(self, v) -> tuple:
        """The result elements a value can yield (its support)."""
        raise NotImplementedError

    def bottom(self):
        raise NotImplementedError("%s has no bottom" % self.name)

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def iterate(self, f: "KleisliFn") -> "KleisliFn":
        raise NotImplementedError

    def render(self, v) -> str:
        raise NotImplementedError

    def sample_value(self, rng, gen_elem: Callable, branch: int):
        """One random value whose elements come from gen_elem()."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Kleisli functions
# ---------------------------------------------------------------------------

class KleisliFn:
    """A total function from a finite carrier into monadic values.

    The table is materialized up front, so repeated application is pure by
    construction.  cod is the carrier of result elements inside the monadic
    value; it may be None for internal morphisms whose elements are not
    drawn from a declared carrier (frozen operation nodes, for instance).
    """

    __slots__ = ("monad", "dom", "cod", "table")

    def __init__(self, monad, dom: Carrier, cod: Optional[Carrier], table: dict):
        self.monad = monad
        self.dom = dom
        self.cod = cod
        self.table = table

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise CarrierMismatchError(
                "%s is not an element of carrier %s" % (render_elem(x), self.dom.name))

    def __repr__(self):
        return "KleisliFn(%s -> T %s over %s)" % (
            self.dom.name, self.cod.name if self.cod else "?", self.monad.name)


def make_kleisli(monad, dom: Carrier, cod: Optional[Carrier], fn: Callable) -> KleisliFn:
    return KleisliFn(monad, dom, cod, {x: fn(x) for x in dom.elements})


def kleisli_unit(monad, car: Carrier) -> KleisliFn:
    return make_kleisli(monad, car, car, monad.unit)


def bottom_kleisli(monad, dom: Carrier, cod: Optional[Carrier]) -> KleisliFn:
    return make_kleisli(monad, dom, cod, lambda _x: monad.bottom())


def compose_kleisli(g: KleisliFn, f: KleisliFn) -> KleisliFn:
    """The Kleisli composite g* . f."""
    if f.monad is not g.monad:
        raise CarrierMismatchError(
            "cannot compose across monads %s and %s" % (f.monad.name, g.monad.name))
    if f.cod is not None and f.cod.elements != g.dom.elements:
        raise CarrierMismatchError(
            "codomain carrier %s of the first argument does not match domain "
            "carrier %s of the second" % (f.cod.name, g.dom.name))
    m = f.monad
    return KleisliFn(m, f.dom, g.cod, {x: m.bind(f(x), g) for x in f.dom.elements})


def copair(f: KleisliFn, g: KleisliFn) -> KleisliFn:
    """[f, g] on the sum of the two domains."""
    if f.monad is not g.monad:
        raise CarrierMismatchError("copairing across different monads")
    dom = sum_carrier(f.dom, g.dom)
    table = {}
    for x in f.dom.elements:
        table[Inl(x)] = f(x)
    for x in g.dom.elements:
        table[Inr(x)] = g(x)
    return KleisliFn(f.monad, dom, f.cod, table)


def map_kleisli(f: KleisliFn, cod: Optional[Carrier], g: Callable) -> KleisliFn:
    """Postcompose f with T g for a pure g on elements."""
    m = f.monad
    return KleisliFn(m, f.dom, cod, {x: m.map(f(x), g) for x in f.dom.elements})


def strong_iterate(f: KleisliFn) -> KleisliFn:
    """Iteration with a parameter carried around the loop.

    For f : Z x X -> T(Y + X) this is the composite
    (T(snd + id) . T dist . strength . <fst, f>) iterated over Z x X,
    yielding Z x X -> T Y.
    """
    if f.dom.kind != "prod":
        raise CarrierMismatchError("strong_iterate needs a product domain")
    if f.cod is None or f.cod.kind != "sum":
        raise CarrierMismatchError("strong_iterate needs a sum codomain")
    m = f.monad
    y_car, _x_car = f.cod.parts
    inner_cod = sum_carrier(y_car, f.dom)

    def step(zx: Pair):
        paired = m.strength(zx.fst, f(zx))
        return m.map(paired, lambda p: case_sum(
            dist_elem(p),
            lambda cy: Inl(cy.snd),
            lambda cx: Inr(cx)))

    inner = make_kleisli(m, f.dom, inner_cod, step)
    return m.iterate(inner)


# ---------------------------------------------------------------------------
# Bekic identity checker
# ---------------------------------------------------------------------------

@dataclass
class BekicFailure:
    index: int
    point: Any
    lhs: str
    rhs: str


@dataclass
class BekicReport:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_bekic(instance: ElgotMonad, pairs: Iterable) -> BekicReport:
    """Check the mutual-recursion identity on pairs (f, g).

    f : Y -> T((Z+Y)+X) and g : X -> T((Z+Y)+X); the identity equates
    iterating the combined system [f, g] over Y+X with solving g first and
    substituting its solution into f.
    """
    checked = 0
    failures = []
    for idx, (f, g) in enumerate(pairs):
        m = instance
        zy_car, x_car = f.cod.parts
        z_car, y_car = zy_car.parts
        alpha_cod = sum_carrier(z_car, sum_carrier(y_car, x_car))

        def alpha(e):
            return case_sum(e,
                            lambda zy: case_sum(zy, Inl, lambda y: Inr(Inl(y))),
                            lambda x: Inr(Inr(x)))

        combined = map_kleisli(copair(f, g), alpha_cod, alpha)
        lhs = m.iterate(combined)

        g_dag = m.iterate(g)                      # X -> T(Z+Y)
        h = compose_kleisli(copair(kleisli_unit(m, zy_car), g_dag), f)
        h_dag = m.iterate(h)                      # Y -> T Z
        outer = copair(kleisli_unit(m, z_car), h_dag)
        eta_inr = make_kleisli(m, y_car, zy_car, lambda y: m.unit(Inr(y)))
        # rhs = [eta, h_dag]* . [eta . inr, g_dag]
        rhs = compose_kleisli(outer, copair(eta_inr, g_dag))

        for p in lhs.dom.elements:
            checked += 1
            if not m.equal(lhs(p), rhs(p)):
                failures.append(BekicFailure(idx, render_elem(p),
                                             m.render(lhs(p)), m.render(rhs(p))))
    return BekicReport(checked, failures)
