"""Random finite carriers, Kleisli morphisms and trees, plus reusable suites
for every identity the package is expected to satisfy.

All generation is driven by one seeded random stream, so a fixed seed and
configuration reproduce the exact sample sequence.  Counterexamples are
rendered in the canonical truncation format so they can be pasted into
regression tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (ElgotMonad, Inl, Inr, KleisliFn, Pair, Carrier,
                   carrier, sum_carrier, prod_carrier, case_sum, dist_elem,
                   compose_kleisli, copair, kleisli_unit, make_kleisli,
                   map_kleisli, render_elem, check_bekic)
from .handler import (EffectInterpretation, MonadMorphism,
                      check_universal_triangles, handle)
from .iteration import guard_transform, solve_guarded
from .resumption import OpNode, ResumptionMonad, Thunk


@dataclass
class GenConfig:
    seed: int = 42
    min_carrier: int = 1
    max_carrier: int = 3
    branch: int = 2
    node_budget: int = 15
    depth: int = 6
    samples: int = 100


class Gen:
    """Deterministic sample stream for one suite run."""

    def __init__(self, config: GenConfig):
        self.cfg = config
        self.rng = random.Random(config.seed)

    def carrier(self, prefix: str, size: Optional[int] = None) -> Carrier:
        n = size or self.rng.randint(self.cfg.min_carrier, self.cfg.max_carrier)
        return carrier(prefix, tuple("%s%d" % (prefix, i) for i in range(n)))

    def elem(self, car: Carrier):
        return self.rng.choice(car.elements)

    def pure_fn(self, dom: Carrier, cod: Carrier) -> dict:
        return {x: self.elem(cod) for x in dom.elements}

    def injection(self, dom: Carrier, cod: Carrier) -> dict:
        image = self.rng.sample(cod.elements, len(dom.elements))
        return dict(zip(dom.elements, image))

    def value(self, monad: ElgotMonad, cod: Carrier):
        return monad.sample_value(self.rng, lambda: self.elem(cod), self.cfg.branch)

    def sub_value(self, monad: ElgotMonad, v):
        """A random value below v in the pointwise order."""
        from .base_monads import FinSet, Just, NdState, NOTHING, finset
        if v is NOTHING or isinstance(v, Just):
            return NOTHING if self.rng.random() < 0.5 else v
        if isinstance(v, FinSet):
            return finset(e for e in v.elems if self.rng.random() < 0.6)
        if isinstance(v, NdState):
            return NdState(tuple(
                (s, finset(e for e in fs.elems if self.rng.random() < 0.6))
                for s, fs in v.table))
        raise TypeError("no sub-value generator for %r" % (v,))

    def kleisli(self, inst, dom: Carrier, cod: Carrier) -> KleisliFn:
        if isinstance(inst, ResumptionMonad):
            return KleisliFn(inst, dom, cod,
                             {x: self.tree(inst, cod) for x in dom.elements})
        return KleisliFn(inst, dom, cod,
                         {x: self.value(inst, cod) for x in dom.elements})

    def tree(self, rm: ResumptionMonad, cod: Carrier,
             guard_first_layer: bool = False):
        """A finite random tree prefix within the node budget."""
        budget = [self.cfg.node_budget]

        def gen(first=False):
            budget[0] -= 1
            if budget[0] <= 0:
                return rm.unit(self.elem(cod))

            def gen_elem():
                if budget[0] > 1 and self.rng.random() < 0.5:
                    return op_elem()
                x = self.elem(cod)
                if first and guard_first_layer and isinstance(x, Inr):
                    return op_elem()
                return Inl(x)

            def op_elem():
                op = self.rng.choice(rm.sig.ops)
                kids = tuple((a, Thunk.ready(gen()))
                             for a in op.arity.elements)
                return Inr(OpNode(op.name, self.elem(op.param), kids))

            return rm.out_inv(rm.base.sample_value(self.rng, gen_elem, self.cfg.branch))

        return gen(first=True)

    def guarded_kleisli(self, rm: ResumptionMonad, dom: Carrier, cod: Carrier) -> KleisliFn:
        """f : X -> Trees(Y+X) with no bare recursive leaf in any first layer."""
        return KleisliFn(rm, dom, cod,
                         {x: self.tree(rm, cod, guard_first_layer=True)
                          for x in dom.elements})

    def effect_interpretation(self, sig, target: ElgotMonad) -> EffectInterpretation:
        effects = {op.name: self.kleisli(target, op.param, op.arity)
                   for op in sig.ops}
        return EffectInterpretation(sig, target, effects)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _first_mismatch(inst, f: KleisliFn, g: KleisliFn) -> Optional[str]:
    for x in f.dom.elements:
        if not inst.equal(f(x), g(x)):
            return "at %s: %s vs %s" % (render_elem(x),
                                        inst.render(f(x)), inst.render(g(x)))
    return None


def _eta_into(inst, part: Carrier, cod: Carrier, tag) -> KleisliFn:
    return make_kleisli(inst, part, cod, lambda v: inst.unit(tag(v)))


# ---------------------------------------------------------------------------
# Law checkers.  Each draws its own sample from the generator and returns a
# witness string on failure.
# ---------------------------------------------------------------------------

def law_monad_left_unit(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.kleisli(inst, x_car, y_car)
    x = gen.elem(x_car)
    lhs = inst.bind(inst.unit(x), f)
    if not inst.equal(lhs, f(x)):
        return "bind(unit %s, f) = %s but f(%s) = %s" % (
            render_elem(x), inst.render(lhs), render_elem(x), inst.render(f(x)))


def law_monad_right_unit(gen: Gen, inst):
    x_car = gen.carrier("x")
    f = gen.kleisli(inst, carrier("d", ("d0",)), x_car)
    v = f("d0")
    lhs = inst.bind(v, inst.unit)
    if not inst.equal(lhs, v):
        return "bind(v, unit) = %s, v = %s" % (inst.render(lhs), inst.render(v))


def law_monad_assoc(gen: Gen, inst):
    x_car, y_car, z_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("z")
    f = gen.kleisli(inst, x_car, y_car)
    g = gen.kleisli(inst, y_car, z_car)
    v = gen.kleisli(inst, carrier("d", ("d0",)), x_car)("d0")
    lhs = inst.bind(inst.bind(v, f), g)
    rhs = inst.bind(v, lambda x: inst.bind(f(x), g))
    if not inst.equal(lhs, rhs):
        return "associativity: %s vs %s" % (inst.render(lhs), inst.render(rhs))


def law_str1(gen: Gen, inst):
    x_car, c_car = gen.carrier("x"), gen.carrier("c")
    v = gen.kleisli(inst, carrier("d", ("d0",)), x_car)("d0")
    c = gen.elem(c_car)
    lhs = inst.map(inst.strength(c, v), lambda p: p.snd)
    if not inst.equal(lhs, v):
        return "snd . strength: %s vs %s" % (inst.render(lhs), inst.render(v))


def law_str2(gen: Gen, inst):
    x_car = gen.carrier("x")
    c1, c2 = gen.elem(gen.carrier("c")), gen.elem(gen.carrier("b"))
    v = gen.kleisli(inst, carrier("d", ("d0",)), x_car)("d0")
    lhs = inst.map(inst.strength(Pair(c1, c2), v),
                   lambda p: Pair(p.fst.fst, Pair(p.fst.snd, p.snd)))
    rhs = inst.strength(c1, inst.strength(c2, v))
    if not inst.equal(lhs, rhs):
        return "assoc . strength: %s vs %s" % (inst.render(lhs), inst.render(rhs))


def law_str3(gen: Gen, inst):
    x_car, c_car = gen.carrier("x"), gen.carrier("c")
    x, c = gen.elem(x_car), gen.elem(c_car)
    lhs = inst.strength(c, inst.unit(x))
    rhs = inst.unit(Pair(c, x))
    if not inst.equal(lhs, rhs):
        return "strength on unit: %s vs %s" % (inst.render(lhs), inst.render(rhs))


def law_str4(gen: Gen, inst):
    x_car, y_car, c_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("c")
    f = gen.kleisli(inst, x_car, y_car)
    v = gen.kleisli(inst, carrier("d", ("d0",)), x_car)("d0")
    c = gen.elem(c_car)
    lhs = inst.bind(inst.strength(c, v), lambda p: inst.strength(p.fst, f(p.snd)))
    rhs = inst.strength(c, inst.bind(v, f))
    if not inst.equal(lhs, rhs):
        return "strength vs lifting: %s vs %s" % (inst.render(lhs), inst.render(rhs))


def law_unfolding(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.kleisli(inst, x_car, sum_carrier(y_car, x_car))
    fd = inst.iterate(f)
    lhs = compose_kleisli(copair(kleisli_unit(inst, y_car), fd), f)
    return _first_mismatch(inst, lhs, fd)


def law_naturality(gen: Gen, inst):
    x_car, y_car, z_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("z")
    f = gen.kleisli(inst, x_car, sum_carrier(y_car, x_car))
    g = gen.kleisli(inst, y_car, z_car)
    lhs = compose_kleisli(g, inst.iterate(f))
    zx = sum_carrier(z_car, x_car)
    retagged = copair(map_kleisli(g, zx, Inl), _eta_into(inst, x_car, zx, Inr))
    rhs = inst.iterate(compose_kleisli(retagged, f))
    return _first_mismatch(inst, lhs, rhs)


def law_dinaturality(gen: Gen, inst):
    x_car, y_car, z_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("z")
    g = gen.kleisli(inst, x_car, sum_carrier(y_car, z_car))
    h = gen.kleisli(inst, z_car, sum_carrier(y_car, x_car))
    eta_inl_x = _eta_into(inst, y_car, sum_carrier(y_car, x_car), Inl)
    eta_inl_z = _eta_into(inst, y_car, sum_carrier(y_car, z_car), Inl)
    s = compose_kleisli(copair(eta_inl_x, h), g)
    t = compose_kleisli(copair(eta_inl_z, g), h)
    lhs = inst.iterate(s)
    rhs = compose_kleisli(copair(kleisli_unit(inst, y_car), inst.iterate(t)), g)
    return _first_mismatch(inst, lhs, rhs)


def law_codiagonal(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    yx = sum_carrier(y_car, x_car)
    g = gen.kleisli(inst, x_car, sum_carrier(yx, x_car))
    collapsed = map_kleisli(g, yx, lambda e: case_sum(e, lambda yx_: yx_, Inr))
    lhs = inst.iterate(collapsed)
    rhs = inst.iterate(inst.iterate(g))
    return _first_mismatch(inst, lhs, rhs)


def law_uniformity(gen: Gen, inst):
    """Two sample families: injective h with g free on Z, and arbitrary h
    with g factored through it; both satisfy the premise by construction."""
    y_car = gen.carrier("y")
    x_car = gen.carrier("x")
    if gen.rng.random() < 0.5:
        z_car = gen.carrier("z", gen.rng.randint(1, len(x_car.elements)))
        h = gen.injection(z_car, x_car)
        g = gen.kleisli(inst, z_car, sum_carrier(y_car, z_car))
        f_free = gen.kleisli(inst, x_car, sum_carrier(y_car, x_car))
        image = {h[z]: z for z in z_car.elements}

        def f_at(x):
            if x in image:
                return inst.map(g(image[x]),
                                lambda e: case_sum(e, Inl, lambda z: Inr(h[z])))
            return f_free(x)
    else:
        z_car = gen.carrier("z")
        h = gen.pure_fn(z_car, x_car)
        g0 = gen.kleisli(inst, x_car, sum_carrier(y_car, z_car))
        g = KleisliFn(inst, z_car, g0.cod, {z: g0(h[z]) for z in z_car.elements})

        def f_at(x):
            return inst.map(g0(x),
                            lambda e: case_sum(e, Inl, lambda z: Inr(h[z])))

    f = make_kleisli(inst, x_car, sum_carrier(y_car, x_car), f_at)
    fd = inst.iterate(f)
    gd = inst.iterate(g)
    for z in z_car.elements:
        if not inst.equal(fd(h[z]), gd(z)):
            return "at %s: f-dagger(h z) = %s, g-dagger(z) = %s" % (
                render_elem(z), inst.render(fd(h[z])), inst.render(gd(z)))


def law_strength_compat(gen: Gen, inst):
    x_car, y_car, c_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("c")
    f = gen.kleisli(inst, x_car, sum_carrier(y_car, x_car))
    fd = inst.iterate(f)
    cx = prod_carrier(c_car, x_car)
    inner_cod = sum_carrier(prod_carrier(c_car, y_car), cx)
    inner = make_kleisli(inst, cx, inner_cod,
                         lambda p: inst.map(inst.strength(p.fst, f(p.snd)), dist_elem))
    rhs = inst.iterate(inner)
    for p in cx.elements:
        lhs = inst.strength(p.fst, fd(p.snd))
        if not inst.equal(lhs, rhs(p)):
            return "at %s: %s vs %s" % (render_elem(p), inst.render(lhs),
                                        inst.render(rhs(p)))


def law_bekic(gen: Gen, inst):
    x_car, y_car, z_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("z")
    cod = sum_carrier(sum_carrier(z_car, y_car), x_car)
    f = gen.kleisli(inst, y_car, cod)
    g = gen.kleisli(inst, x_car, cod)
    report = check_bekic(inst, [(f, g)])
    if not report.ok:
        fail = report.failures[0]
        return "at %s: %s vs %s" % (fail.point, fail.lhs, fail.rhs)


def law_divergence_constant(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    loop = _eta_into(inst, x_car, sum_carrier(y_car, x_car), Inr)
    bot = inst.iterate(loop)
    for x in x_car.elements:
        if not inst.equal(bot(x), inst.bottom()):
            return "self-loop at %s solved to %s, not bottom" % (
                render_elem(x), inst.render(bot(x)))


def law_bottom_postcomp(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.kleisli(inst, x_car, y_car)
    lhs = inst.bind(inst.bottom(), f)
    if not inst.equal(lhs, inst.bottom()):
        return "lifting does not preserve bottom: %s" % inst.render(lhs)


def law_bottom_strength(gen: Gen, inst):
    c = gen.elem(gen.carrier("c"))
    lhs = inst.strength(c, inst.bottom())
    if not inst.equal(lhs, inst.bottom()):
        return "strength does not preserve bottom: %s" % inst.render(lhs)


def law_bind_monotone(gen: Gen, inst):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.kleisli(inst, x_car, y_car)
    big = gen.value(inst, x_car)
    small = gen.sub_value(inst, big)
    if not inst.leq(inst.bind(small, f), inst.bind(big, f)):
        return "lifting is not monotone: %s below %s" % (
            inst.render(small), inst.render(big))


def law_bind_join(gen: Gen, inst):
    """Lifting preserves finite joins where the order has them."""
    from .base_monads import FinSet, NdState, finset
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.kleisli(inst, x_car, y_car)
    v1, v2 = gen.value(inst, x_car), gen.value(inst, x_car)
    if isinstance(v1, FinSet):
        join = finset(v1.elems + v2.elems)
        join_out = finset(inst.bind(v1, f).elems + inst.bind(v2, f).elems)
    elif isinstance(v1, NdState):
        join = NdState(tuple((s, finset(a.elems + v2.at(s).elems))
                             for s, a in v1.table))
        b1, b2 = inst.bind(v1, f), inst.bind(v2, f)
        join_out = NdState(tuple((s, finset(a.elems + b2.at(s).elems))
                                 for s, a in b1.table))
    else:
        return None   # flat order: no binary joins to preserve
    if not inst.equal(inst.bind(join, f), join_out):
        return "lifting does not preserve joins at %s and %s" % (
            inst.render(v1), inst.render(v2))


# -- resumption-specific checks ---------------------------------------------

def _eager_bind_trunc(rm: ResumptionMonad, t, f: KleisliFn, depth: int):
    """Independent substitution oracle, computed directly on truncations."""
    from .resumption import TCUT, TOp

    def elem(e):
        if isinstance(e, Inl):
            return rm.truncate(f(e.value), depth)
        node = e.value
        if depth == 0:
            return rm.base.unit(TCUT)
        kids = tuple(_eager_bind_trunc(rm, th.force(), f, depth - 1)
                     for _a, th in node.children)
        return rm.base.unit(TOp(node.op, node.param, kids))

    return rm.base.bind(rm.out(t), elem)


def _eager_strength_trunc(rm: ResumptionMonad, c, t, depth: int):
    from .resumption import TCUT, TLeaf, TOp

    def elem(e):
        if isinstance(e, Inl):
            return TLeaf(Pair(c, e.value))
        node = e.value
        if depth == 0:
            return TCUT
        kids = tuple(_eager_strength_trunc(rm, c, th.force(), depth - 1)
                     for _a, th in node.children)
        return TOp(node.op, node.param, kids)

    return rm.base.map(rm.out(t), elem)


def law_res_kleisli_eq(gen: Gen, rm):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    t = gen.tree(rm, x_car)
    f = gen.kleisli(rm, x_car, y_car)
    d = gen.cfg.depth
    lhs = rm.truncate(rm.bind(t, f), d)
    rhs = _eager_bind_trunc(rm, t, f, d)
    if lhs != rhs:
        return "lifting characteristic equation: %s vs %s" % (
            rm.base.render(lhs), rm.base.render(rhs))


def law_res_strength_eq(gen: Gen, rm):
    x_car, c_car = gen.carrier("x"), gen.carrier("c")
    t = gen.tree(rm, x_car)
    c = gen.elem(c_car)
    d = gen.cfg.depth
    lhs = rm.truncate(rm.strength(c, t), d)
    rhs = _eager_strength_trunc(rm, c, t, d)
    if lhs != rhs:
        return "strength characteristic equation: %s vs %s" % (
            rm.base.render(lhs), rm.base.render(rhs))


def law_res_extension(gen: Gen, rm):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    g = gen.kleisli(rm.base, x_car, sum_carrier(y_car, x_car))
    f = KleisliFn(rm, x_car, sum_carrier(y_car, x_car),
                  {x: rm.ext(g(x)) for x in x_car.elements})
    fd = rm.iterate(f)
    gd = rm.base.iterate(g)
    for x in x_car.elements:
        want = rm.base.map(gd(x), Inl)
        got = rm.out(fd(x))
        if got != want:
            return "first layer at %s: %s vs %s" % (
                render_elem(x), rm.base.render(got), rm.base.render(want))


def law_res_guard_fixes_guarded(gen: Gen, rm):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.guarded_kleisli(rm, x_car, sum_carrier(y_car, x_car))
    fg = guard_transform(rm, f)
    for x in x_car.elements:
        if not rm.bisimilar(f(x), fg(x), gen.cfg.depth):
            return "guarding changed a guarded definition at %s" % render_elem(x)


def law_res_guarded_unfolding(gen: Gen, rm):
    x_car, y_car = gen.carrier("x"), gen.carrier("y")
    f = gen.guarded_kleisli(rm, x_car, sum_carrier(y_car, x_car))
    sol = solve_guarded(rm, f)
    glue = copair(kleisli_unit(rm, y_car), sol)
    for x in x_car.elements:
        unfolded = rm.bind(f(x), glue)
        for d in range(1, gen.cfg.depth + 1):
            if not rm.bisimilar(unfolded, sol(x), d):
                return "solution not a fixpoint at %s, depth %d" % (render_elem(x), d)


# ---------------------------------------------------------------------------
# Registry and suites
# ---------------------------------------------------------------------------

LAW_CHECKS = {
    "monad.left_unit": (law_monad_left_unit, "all"),
    "monad.right_unit": (law_monad_right_unit, "all"),
    "monad.assoc": (law_monad_assoc, "all"),
    "strength.str1": (law_str1, "all"),
    "strength.str2": (law_str2, "all"),
    "strength.str3": (law_str3, "all"),
    "strength.str4": (law_str4, "all"),
    "elgot.unfolding": (law_unfolding, "all"),
    "elgot.naturality": (law_naturality, "all"),
    "elgot.dinaturality": (law_dinaturality, "all"),
    "elgot.codiagonal": (law_codiagonal, "all"),
    "elgot.uniformity": (law_uniformity, "all"),
    "elgot.strength": (law_strength_compat, "all"),
    "elgot.bekic": (law_bekic, "base"),
    "elgot.divergence": (law_divergence_constant, "all"),
    "omega.bottom_postcomp": (law_bottom_postcomp, "all"),
    "omega.bottom_strength": (law_bottom_strength, "all"),
    "omega.bind_monotone": (law_bind_monotone, "base"),
    "omega.bind_join": (law_bind_join, "base"),
    "resumption.kleisli_eq": (law_res_kleisli_eq, "resumption"),
    "resumption.strength_eq": (law_res_strength_eq, "resumption"),
    "resumption.extension": (law_res_extension, "resumption"),
    "resumption.guard_fix": (law_res_guard_fixes_guarded, "resumption"),
    "resumption.guarded_unfolding": (law_res_guarded_unfolding, "resumption"),
}

MORPHISM_LAWS = ("morphism.unit", "morphism.kleisli", "morphism.strength",
                 "morphism.iteration")
HANDLER_LAWS = ("handle.ext", "handle.iota", "handle.kleisli",
                "handle.iteration", "handle.fuel_monotone")

# every identity in scope must be reachable from some suite
REQUIRED_IDENTITIES = frozenset({
    "monad.left_unit", "monad.right_unit", "monad.assoc",
    "strength.str1", "strength.str2", "strength.str3", "strength.str4",
    "elgot.unfolding", "elgot.naturality", "elgot.dinaturality",
    "elgot.codiagonal", "elgot.uniformity", "elgot.strength", "elgot.bekic",
    "elgot.divergence",
    "omega.bottom_postcomp", "omega.bottom_strength", "omega.bind_monotone",
    "omega.bind_join",
    "resumption.kleisli_eq", "resumption.strength_eq", "resumption.extension",
    "resumption.guard_fix", "resumption.guarded_unfolding",
}) | frozenset(MORPHISM_LAWS) | frozenset(HANDLER_LAWS)

_covered = set(LAW_CHECKS) | set(MORPHISM_LAWS) | set(HANDLER_LAWS)
missing = REQUIRED_IDENTITIES - _covered
assert not missing, "identities without a registered check: %s" % sorted(missing)
del missing, _covered

ELGOT_AXIOMS = ("elgot.unfolding", "elgot.naturality", "elgot.dinaturality",
                "elgot.codiagonal", "elgot.uniformity", "elgot.strength")


@dataclass
class LawResult:
    law: str
    samples: int
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


@dataclass
class SuiteReport:
    instance: str
    seed: int
    results: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def to_dict(self):
        return {
            "instance": self.instance,
            "seed": self.seed,
            "ok": self.ok,
            "laws": {r.law: {"samples": r.samples, "failures": r.failures}
                     for r in self.results},
        }

    def text(self) -> str:
        lines = ["suite for %s (seed %d)" % (self.instance, self.seed)]
        for r in self.results:
            status = "ok" if r.ok else "FAIL(%d)" % len(r.failures)
            lines.append("  %-32s %-8s samples=%d" % (r.law, status, r.samples))
            for w in r.failures[:3]:
                lines.append("    counterexample: %s" % w)
        return "\n".join(lines)


def _applicable(kind: str, inst) -> bool:
    if kind == "all":
        return True
    if kind == "resumption":
        return isinstance(inst, ResumptionMonad)
    return not isinstance(inst, ResumptionMonad)


def run_axiom_suite(inst, config: GenConfig,
                    laws: Optional[Iterable[str]] = None) -> SuiteReport:
    """Per-law pass/fail counts on fresh random samples for one instance."""
    names = list(laws) if laws is not None else [
        name for name, (_fn, kind) in LAW_CHECKS.items() if _applicable(kind, inst)]
    report = SuiteReport(inst.name, config.seed)
    for name in names:
        fn, kind = LAW_CHECKS[name]
        if not _applicable(kind, inst):
            continue
        gen = Gen(GenConfig(**{**config.__dict__, "seed": _subseed(config.seed, name)}))
        res = LawResult(name, config.samples)
        for _ in range(config.samples):
            witness = fn(gen, inst)
            if witness is not None:
                res.failures.append(witness)
        report.results.append(res)
    return report


def _subseed(seed: int, name: str) -> int:
    h = 0
    for ch in name:
        h = (h * 131 + ord(ch)) % (2 ** 31)
    return (seed * 2654435761 + h) % (2 ** 63)


def run_morphism_suite(mor: MonadMorphism, config: GenConfig,
                       partial: bool = False) -> SuiteReport:
    """The four morphism laws on random samples.

    With partial=True the component may return None on a sample (an
    unconverged evaluation); such samples are skipped.
    """
    src, tgt = mor.source, mor.target
    gen = Gen(config)
    report = SuiteReport("morphism %s: %s -> %s" % (mor.name, src.name, tgt.name),
                         config.seed)

    def apply(v):
        r = mor.component(v)
        if r is None and not partial:
            raise ValueError("morphism %s returned no value" % mor.name)
        return r

    unit_res = LawResult("morphism.unit", config.samples)
    kleisli_res_ = LawResult("morphism.kleisli", config.samples)
    strength_res_ = LawResult("morphism.strength", config.samples)
    iter_res = LawResult("morphism.iteration", config.samples)

    for _ in range(config.samples):
        x_car, y_car, c_car = gen.carrier("x"), gen.carrier("y"), gen.carrier("c")
        x, c = gen.elem(x_car), gen.elem(c_car)

        lhs = apply(src.unit(x))
        if lhs is not None and not tgt.equal(lhs, tgt.unit(x)):
            unit_res.failures.append("unit at %s: %s" % (render_elem(x), tgt.render(lhs)))

        f = gen.kleisli(src, x_car, y_car)
        v = gen.kleisli(src, carrier("d", ("d0",)), x_car)("d0")
        applied_v = apply(v)
        lhs = apply(src.bind(v, f))
        mapped = {xx: apply(f(xx)) for xx in x_car.elements}
        if lhs is not None and applied_v is not None \
                and all(m is not None for m in mapped.values()):
            rhs = tgt.bind(applied_v, lambda xx: mapped[xx])
            if not tgt.equal(lhs, rhs):
                kleisli_res_.failures.append(
                    "lifting: %s vs %s" % (tgt.render(lhs), tgt.render(rhs)))

        lhs = apply(src.strength(c, v))
        if lhs is not None and applied_v is not None:
            rhs = tgt.strength(c, applied_v)
            if not tgt.equal(lhs, rhs):
                strength_res_.failures.append(
                    "strength: %s vs %s" % (tgt.render(lhs), tgt.render(rhs)))

        g = gen.kleisli(src, x_car, sum_carrier(y_car, x_car))
        gd = src.iterate(g)
        mapped_g = {xx: apply(g(xx)) for xx in x_car.elements}
        if all(m is not None for m in mapped_g.values()):
            tg = KleisliFn(tgt, x_car, sum_carrier(y_car, x_car), mapped_g)
            tgd = tgt.iterate(tg)
            for xx in x_car.elements:
                lhs = apply(gd(xx))
                if lhs is None:
                    continue
                if not tgt.equal(lhs, tgd(xx)):
                    iter_res.failures.append(
                        "iteration at %s: %s vs %s" % (render_elem(xx),
                                                       tgt.render(lhs),
                                                       tgt.render(tgd(xx))))
                    break

    report.results.extend([unit_res, kleisli_res_, strength_res_, iter_res])
    return report


def run_handler_suite(rm: ResumptionMonad, sigma: MonadMorphism,
                      upsilon: EffectInterpretation, config: GenConfig,
                      fuel: int = 10) -> SuiteReport:
    """Universal-property triangles plus fuel monotonicity."""
    gen = Gen(config)
    S = sigma.target
    x_car = gen.carrier("x", config.max_carrier)

    base_values = [gen.value(rm.base, x_car) for _ in range(config.samples)]
    op_samples = []
    for _ in range(config.samples):
        op = gen.rng.choice(rm.sig.ops)
        k = {a: gen.elem(x_car) for a in op.arity.elements}
        op_samples.append((op.name, gen.elem(op.param), k))
    bind_samples = []
    iter_samples = []
    for _ in range(max(1, config.samples // 4)):
        y_car = gen.carrier("y")
        f = gen.kleisli(rm, x_car, y_car)
        bind_samples.append((gen.tree(rm, x_car), f))
        iter_samples.append(gen.kleisli(rm, x_car, sum_carrier(y_car, x_car)))

    tri = check_universal_triangles(rm, sigma, upsilon,
                                    base_values=base_values,
                                    op_samples=op_samples,
                                    bind_samples=bind_samples,
                                    iter_samples=iter_samples,
                                    fuel=fuel)
    report = SuiteReport("handler into %s" % S.name, config.seed)
    by_law = {}
    for law, witness in tri.failures:
        by_law.setdefault(law, []).append(witness)
    for law in ("handle.ext", "handle.iota", "handle.kleisli", "handle.iteration"):
        report.results.append(LawResult(law, config.samples, by_law.get(law, [])))

    mono = LawResult("handle.fuel_monotone", config.samples)
    for _ in range(config.samples):
        t = gen.tree(rm, x_car)
        n = gen.rng.randint(0, fuel)
        lo = handle(rm, t, sigma, upsilon, n)
        hi = handle(rm, t, sigma, upsilon, n + 1 + gen.rng.randint(0, 3))
        if not S.leq(lo.value, hi.value):
            mono.failures.append("fuel %d gave %s, more fuel gave %s" %
                                 (n, S.render(lo.value), S.render(hi.value)))
    report.results.append(mono)
    return report
