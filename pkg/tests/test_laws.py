import json

from elgot.core import Inr, KleisliFn, bottom_kleisli
from elgot.base_monads import FinSetMonad, elgot_instance
from elgot.laws import (ELGOT_AXIOMS, HANDLER_LAWS, MORPHISM_LAWS, Gen,
                        GenConfig, LAW_CHECKS, REQUIRED_IDENTITIES,
                        run_axiom_suite, run_morphism_suite)

from conftest import resumption


def test_registry_covers_the_checklist():
    covered = set(LAW_CHECKS) | set(MORPHISM_LAWS) | set(HANDLER_LAWS)
    assert REQUIRED_IDENTITIES <= covered
    assert set(ELGOT_AXIOMS) <= REQUIRED_IDENTITIES


def test_generation_is_deterministic():
    def stream(seed):
        gen = Gen(GenConfig(seed=seed))
        inst = elgot_instance("finset")
        out = []
        for _ in range(10):
            x, y = gen.carrier("x"), gen.carrier("y")
            f = gen.kleisli(inst, x, y)
            out.append(tuple(sorted(f.table.items())))
        return out

    assert stream(42) == stream(42)
    assert stream(42) != stream(43)


def test_tree_generation_is_deterministic():
    rm = resumption("finset")

    def trunc_stream(seed):
        gen = Gen(GenConfig(seed=seed))
        x = gen.carrier("x", 2)
        return [rm.base.render(rm.truncate(gen.tree(rm, x), 4))
                for _ in range(10)]

    assert trunc_stream(42) == trunc_stream(42)


def test_budget_zero_gives_leaf_only_trees():
    rm = resumption("finset")
    gen = Gen(GenConfig(seed=1, node_budget=0))
    x = gen.carrier("x", 2)
    for _ in range(20):
        t = gen.tree(rm, x)
        assert all(not isinstance(e, Inr)
                   for e in rm.base.elements(rm.out(t)))


def test_generated_sets_respect_branch_bound():
    inst = elgot_instance("finset")
    gen = Gen(GenConfig(seed=2, branch=2))
    x = gen.carrier("x", 3)
    for _ in range(50):
        v = gen.value(inst, x)
        assert len(v) <= 2


def test_reports_are_machine_readable_and_stable():
    inst = elgot_instance("maybe")
    cfg = GenConfig(samples=10, seed=5)
    first = run_axiom_suite(inst, cfg).to_dict()
    second = run_axiom_suite(inst, cfg).to_dict()
    assert first == second
    json.dumps(first)   # serializable
    assert first["ok"] is True
    assert "elgot.unfolding" in first["laws"]


def test_suite_clean_on_all_base_instances():
    cfg = GenConfig(samples=25, seed=6)
    for kind, kw in [("maybe", {}), ("finset", {}),
                     ("nondetstate", {"state_set": ("s0", "s1")})]:
        rep = run_axiom_suite(elgot_instance(kind, **kw), cfg)
        assert rep.ok, rep.text()


def test_suite_clean_on_resumption_instances():
    cfg = GenConfig(samples=10, seed=8)
    for kind in ("maybe", "finset"):
        rep = run_axiom_suite(resumption(kind), cfg)
        assert rep.ok, rep.text()


def test_constant_bottom_iteration_is_caught():
    class Bottomed(FinSetMonad):
        name = "finset-bottomed"

        def iterate(self, f):
            cod = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None
            return bottom_kleisli(self, f.dom, cod)

    rep = run_axiom_suite(Bottomed(), GenConfig(samples=20, seed=9))
    failing = {r.law for r in rep.results if not r.ok}
    assert "elgot.unfolding" in failing


def test_counterexamples_render_truncations():
    rm = resumption("finset")

    class Broken(type(rm)):
        def iterate(self, f):
            cod = f.cod.parts[0] if f.cod is not None and f.cod.kind == "sum" else None
            return KleisliFn(self, f.dom, cod,
                             {x: self.bottom() for x in f.dom.elements})

    broken = Broken(rm.base, rm.sig, depth=4)
    rep = run_axiom_suite(broken, GenConfig(samples=10, seed=10, depth=4),
                          laws=("elgot.unfolding",))
    assert not rep.ok
    witness = rep.results[0].failures[0]
    assert "{" in witness or "(bot)" in witness or "(leaf" in witness


def test_morphism_suite_catches_non_morphism():
    from elgot.handler import MonadMorphism
    maybe = elgot_instance("maybe")
    fs = elgot_instance("finset")
    from elgot.base_monads import finset
    # discards every result: well typed but breaks the unit law
    bad = MonadMorphism("bad", maybe, fs, lambda v: finset([]))
    rep = run_morphism_suite(bad, GenConfig(samples=20, seed=12))
    failing = {r.law for r in rep.results if not r.ok}
    assert "morphism.unit" in failing
