import pytest

from elgot.core import Inl, Inr, carrier, make_kleisli, sum_carrier, \
    unit_carrier
from elgot.base_monads import Just, NOTHING, elgot_instance, finset
from elgot.handler import (EffectInterpretation, InterpretationError,
                           MonadMorphism, handle, identity_morphism,
                           maybe_to_finset, maybe_to_nondetstate,
                           finset_to_nondetstate, zeta)
from elgot.resumption import Thunk

from conftest import resumption


def _setup_finset_target():
    rm = resumption("maybe")
    target = elgot_instance("finset")
    sigma = maybe_to_finset(rm.base, target)
    u_act = make_kleisli(target, rm.sig.op("act").param, unit_carrier(),
                         lambda p: target.unit("*"))
    u_ask = make_kleisli(target, unit_carrier(), rm.sig.op("ask").arity,
                         lambda p: finset(["l", "r"]))
    upsilon = EffectInterpretation(rm.sig, target,
                                   {"act": u_act, "ask": u_ask})
    return rm, target, sigma, upsilon


def test_zeta_on_unit():
    rm, S, sigma, ups = _setup_finset_target()
    assert zeta(rm, rm.unit("x"), sigma, ups) == finset([Inl("x")])


def test_zeta_on_ext():
    rm, S, sigma, ups = _setup_finset_target()
    m = Just("v")
    assert zeta(rm, rm.ext(m), sigma, ups) == S.map(sigma.component(m), Inl)


def test_zeta_on_operation_returns_child_trees():
    rm, S, sigma, ups = _setup_finset_target()
    t = rm.iota("ask", "*", {"l": "x", "r": "y"})
    v = zeta(rm, t, sigma, ups)
    els = S.elements(v)
    assert len(els) == 2 and all(isinstance(e, Inr) for e in els)
    results = sorted(rm.out(e.value).value.value for e in els)
    assert results == ["x", "y"]


def test_zeta_unknown_operation_is_an_error():
    rm, S, sigma, ups = _setup_finset_target()
    stripped = EffectInterpretation.__new__(EffectInterpretation)
    stripped.sig, stripped.target, stripped.effects = ups.sig, S, {"act": ups.effects["act"]}
    t = rm.iota("ask", "*", {"l": "x", "r": "y"})
    with pytest.raises(InterpretationError):
        zeta(rm, t, sigma, stripped)


def test_broken_interpretation_wrong_arity_rejected():
    rm, S, sigma, ups = _setup_finset_target()
    bad_ask = make_kleisli(S, unit_carrier(), rm.sig.op("ask").arity,
                           lambda p: finset(["l", "zzz"]))
    with pytest.raises(InterpretationError):
        EffectInterpretation(rm.sig, S, {"act": ups.effects["act"], "ask": bad_ask})


def test_handle_ext_is_sigma_from_fuel_one():
    rm, S, sigma, ups = _setup_finset_target()
    for fuel in (1, 3, 10):
        for m in (Just("a"), NOTHING):
            r = handle(rm, rm.ext(m), sigma, ups, fuel)
            assert r.converged and S.equal(r.value, sigma.component(m))


def test_handle_unit_from_fuel_one():
    rm, S, sigma, ups = _setup_finset_target()
    for fuel in (1, 2):
        r = handle(rm, rm.unit("x"), sigma, ups, fuel)
        assert r.converged and r.value == S.unit("x")


def test_handle_fuel_zero_is_bottom():
    rm, S, sigma, ups = _setup_finset_target()
    r = handle(rm, rm.unit("x"), sigma, ups, 0)
    assert not r.converged and r.value == S.bottom()


def test_infinite_fresh_spine_stays_approximate():
    rm = resumption("maybe")
    base = rm.base
    sigma = identity_morphism(base)
    u_act = make_kleisli(base, rm.sig.op("act").param, unit_carrier(),
                         lambda p: base.unit("*"))
    u_ask = make_kleisli(base, unit_carrier(), rm.sig.op("ask").arity,
                         lambda p: base.unit("l"))
    ups = EffectInterpretation(rm.sig, base, {"act": u_act, "ask": u_ask})

    def spine():
        return rm.op_call("act", "p0", {"*": Thunk(lambda: spine())})

    for fuel in (1, 3, 8):
        r = handle(rm, spine(), sigma, ups, fuel)
        assert r.value is NOTHING and not r.converged


def test_memoized_spine_converges_to_bottom():
    # when the reachable node set is finite the fixpoint is exact
    rm, S, sigma, ups = _setup_finset_target()
    x = carrier("x", ("a",))
    y = carrier("y", ("y0",))
    f = make_kleisli(rm, x, sum_carrier(y, x),
                     lambda v: rm.op_call("act", "p0", {"*": rm.unit(Inr(v))}))
    spine = rm.iterate(f)("a")
    r = handle(rm, spine, sigma, ups, 10)
    assert r.converged and r.value == S.bottom()


def _fold_oracle(rm, t, sigma, ups):
    """Direct structural fold; only terminates on finite trees."""
    S = sigma.target

    def go(tree):
        def elem(e):
            if isinstance(e, Inl):
                return S.unit(e.value)
            node = e.value
            u = ups.effect(node.op)
            return S.bind(u(node.param),
                          lambda a: go(node.child(a).force()))
        return S.bind(sigma.component(rm.out(tree)), elem)

    return go(t)


def test_converged_values_match_structural_fold():
    from elgot.laws import Gen, GenConfig
    rm, S, sigma, ups = _setup_finset_target()
    gen = Gen(GenConfig(seed=57, node_budget=8))
    x = gen.carrier("x", 3)
    for _ in range(40):
        t = gen.tree(rm, x)
        r = handle(rm, t, sigma, ups, 12)
        assert r.converged
        assert S.equal(r.value, _fold_oracle(rm, t, sigma, ups))


def test_nothing_interpretation_swallows_operations():
    # interpreting an operation by divergence makes any op-rooted tree diverge
    rm = resumption("maybe")
    base = rm.base
    sigma = identity_morphism(base)
    u_act = make_kleisli(base, rm.sig.op("act").param, unit_carrier(),
                         lambda p: NOTHING)
    u_ask = make_kleisli(base, unit_carrier(), rm.sig.op("ask").arity,
                         lambda p: NOTHING)
    ups = EffectInterpretation(rm.sig, base, {"act": u_act, "ask": u_ask})
    t = rm.iota("act", "p0", {"*": "x"})
    r = handle(rm, t, sigma, ups, 6)
    assert r.value is NOTHING and r.converged


def test_triangles_clean_run():
    from elgot.laws import GenConfig, run_handler_suite
    rm, S, sigma, ups = _setup_finset_target()
    rep = run_handler_suite(rm, sigma, ups, GenConfig(samples=40, seed=61))
    assert rep.ok, rep.text()


def test_morphism_suite_detects_mutated_evaluator():
    from elgot.laws import GenConfig, run_morphism_suite
    rm, S, sigma, ups = _setup_finset_target()
    # an evaluator whose first step drops the base effect instead of
    # translating it: well typed, semantically wrong
    dropped = MonadMorphism("dropped", rm.base, S, lambda v: finset([]))

    def eval_broken(t):
        r = handle(rm, t, dropped, ups, 8)
        return r.value if r.converged else None

    xi_broken = MonadMorphism("xi-mutant", rm, S, eval_broken)
    rep = run_morphism_suite(xi_broken, GenConfig(samples=15, seed=63),
                             partial=True)
    assert not rep.ok


def test_morphism_suite_accepts_true_evaluator():
    from elgot.laws import GenConfig, run_morphism_suite
    rm, S, sigma, ups = _setup_finset_target()

    def eval_ok(t):
        r = handle(rm, t, sigma, ups, 10)
        return r.value if r.converged else None

    xi = MonadMorphism("xi", rm, S, eval_ok)
    rep = run_morphism_suite(xi, GenConfig(samples=15, seed=63), partial=True)
    assert rep.ok, rep.text()


def test_state_morphisms_compose_consistently():
    maybe = elgot_instance("maybe")
    fs = elgot_instance("finset")
    nd = elgot_instance("nondetstate", state_set=("s0", "s1"))
    m2f = maybe_to_finset(maybe, fs)
    f2n = finset_to_nondetstate(fs, nd)
    m2n = maybe_to_nondetstate(maybe, nd)
    for v in (Just("a"), NOTHING):
        assert f2n.component(m2f.component(v)) == m2n.component(v)
