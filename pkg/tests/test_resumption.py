import pytest

from elgot.core import ConfigError, Inl, Inr, Pair, carrier, sum_carrier, \
    make_kleisli
from elgot.base_monads import Just, NOTHING, finset
from elgot.resumption import (OpDecl, Signature, Thunk, TLeaf, TCUT, TOp,
                              sig_val)

from conftest import resumption, two_op_signature


def test_signature_validation():
    with pytest.raises(ConfigError):
        Signature((OpDecl("a", carrier("p", ("p",)), carrier("e", ())),))
    with pytest.raises(ConfigError):
        sig = two_op_signature()
        Signature(sig.ops + sig.ops)


def test_out_of_unit(rm_maybe):
    assert rm_maybe.out(rm_maybe.unit("x")) == Just(Inl("x"))


def test_out_of_ext(rm_finset):
    m = finset(["a", "b"])
    assert rm_finset.out(rm_finset.ext(m)) == finset([Inl("a"), Inl("b")])


def test_out_of_iota(rm_maybe):
    t = rm_maybe.iota("ask", "*", {"l": "x", "r": "y"})
    step = rm_maybe.out(t)
    assert isinstance(step, Just) and isinstance(step.value, Inr)
    node = step.value.value
    assert node.op == "ask" and node.param == "*"
    assert rm_maybe.out(node.child("l").force()) == Just(Inl("x"))
    assert rm_maybe.out(node.child("r").force()) == Just(Inl("y"))


def test_out_inv_roundtrip(rm_maybe):
    v = Just(Inl("x"))
    assert rm_maybe.out(rm_maybe.out_inv(v)) == v
    t = rm_maybe.iota("act", "p0", {"*": "x"})
    again = rm_maybe.out_inv(rm_maybe.out(t))
    assert rm_maybe.bisimilar(t, again, 6)


def test_coit_leaf_only_equals_ext(rm_maybe):
    y = carrier("y", ("a", "b"))
    x = carrier("x", ("r",))
    h = {"a": Just("r"), "b": NOTHING}
    g = make_kleisli(rm_maybe.base, y, None, lambda v: rm_maybe.base.map(h[v], Inl))
    unfold = rm_maybe.coit(g)
    for v in y.elements:
        assert rm_maybe.bisimilar(unfold(v), rm_maybe.ext(h[v]), 6)


def test_coit_self_seeding_spine(rm_maybe):
    seeds = carrier("s", ("s",))
    decl = rm_maybe.sig.op("act")
    g = make_kleisli(rm_maybe.base, seeds, None,
                     lambda s: Just(Inr(sig_val(decl, "p0", {"*": "s"}))))
    t = rm_maybe.coit(g)("s")
    got = rm_maybe.truncate(t, 3)
    want = Just(TOp("act", "p0", (Just(TOp("act", "p0",
                                            (Just(TOp("act", "p0", (Just(TCUT),))),))),)))
    assert got == want


def test_coit_deadlock(rm_maybe):
    seeds = carrier("s", ("s",))
    g = make_kleisli(rm_maybe.base, seeds, None, lambda s: NOTHING)
    assert rm_maybe.out(rm_maybe.coit(g)("s")) is NOTHING


def test_bind_unit_laws(rm_finset):
    x = carrier("x", ("a", "b"))
    y = carrier("y", ("c",))
    f = make_kleisli(rm_finset, x, y,
                     lambda v: rm_finset.iota("act", "p0", {"*": "c"}))
    t = rm_finset.unit("a")
    assert rm_finset.bisimilar(rm_finset.bind(t, f), f("a"), 8)
    deep = rm_finset.iota("ask", "*", {"l": "a", "r": "b"})
    assert rm_finset.bisimilar(rm_finset.bind(deep, rm_finset.unit), deep, 8)


def test_bind_hand_substitution(rm_maybe):
    # one operation layer over leaves x, y; f sends both to one-op trees
    t = rm_maybe.iota("ask", "*", {"l": "x", "r": "y"})
    conts = {"x": rm_maybe.iota("act", "p0", {"*": "done"}),
             "y": rm_maybe.iota("act", "p1", {"*": "done"})}
    f = make_kleisli(rm_maybe, carrier("x", ("x", "y")), carrier("d", ("done",)),
                     conts.__getitem__)
    # at depth 2 both operation layers fit; leaves are never cut
    got = rm_maybe.truncate(rm_maybe.bind(t, f), 2)
    full = lambda p: Just(TOp("act", p, (Just(TLeaf("done")),)))
    assert got == Just(TOp("ask", "*", (full("p0"), full("p1"))))
    # at depth 1 the substituted operations are cut off
    shallow = rm_maybe.truncate(rm_maybe.bind(t, f), 1)
    assert shallow == Just(TOp("ask", "*", (Just(TCUT), Just(TCUT))))


def test_strength_on_unit(rm_maybe):
    lhs = rm_maybe.strength("c", rm_maybe.unit("x"))
    assert rm_maybe.bisimilar(lhs, rm_maybe.unit(Pair("c", "x")), 6)


def test_strength_then_snd_is_identity(rm_finset):
    t = rm_finset.iota("ask", "*", {"l": "x", "r": "y"})
    roundtrip = rm_finset.map(rm_finset.strength("c", t), lambda p: p.snd)
    assert rm_finset.bisimilar(roundtrip, t, 6)


def test_truncate_leaf_at_depth_zero(rm_maybe):
    assert rm_maybe.truncate(rm_maybe.unit("x"), 0) == Just(TLeaf("x"))


def test_truncate_spine_cuts(rm_maybe):
    x = carrier("x", ("a",))
    y = carrier("y", ("y0",))
    f = make_kleisli(rm_maybe, x, sum_carrier(y, x),
                     lambda v: rm_maybe.op_call("act", "p0", {"*": rm_maybe.unit(Inr("a"))}))
    spine = rm_maybe.iterate(f)("a")
    assert rm_maybe.truncate(spine, 2) == \
        Just(TOp("act", "p0", (Just(TOp("act", "p0", (Just(TCUT),))),)))


def test_truncate_monotone_in_depth(rm_finset):
    from elgot.laws import Gen, GenConfig
    gen = Gen(GenConfig(seed=77, node_budget=12))
    x = gen.carrier("x")
    for _ in range(20):
        t = gen.tree(rm_finset, x)
        shallow = rm_finset.truncate(t, 2)
        deep = rm_finset.truncate(t, 5)
        assert _is_prefix(shallow, deep, rm_finset.base)


def _is_prefix(shallow, deep, base):
    els_s = base.elements(shallow)
    els_d = base.elements(deep)
    if len(els_s) != len(els_d):
        return False
    for a, b in zip(els_s, els_d):
        if a is TCUT:
            continue
        if isinstance(a, TLeaf):
            if a != b:
                return False
        else:
            if not (isinstance(b, TOp) and a.op == b.op and a.param == b.param):
                return False
            for ca, cb in zip(a.children, b.children):
                if not _is_prefix(ca, cb, base):
                    return False
    return True


def test_bisimilar_reflexive(rm_finset):
    from elgot.laws import Gen, GenConfig
    gen = Gen(GenConfig(seed=3))
    x = gen.carrier("x")
    for d in (0, 1, 4):
        for _ in range(10):
            t = gen.tree(rm_finset, x)
            assert rm_finset.bisimilar(t, t, d)


def test_memoized_forcing_is_stable():
    rm = resumption("maybe")
    calls = []

    def build():
        calls.append(1)
        return rm.unit("x")

    th = Thunk(build)
    first = th.force()
    assert th.force() is first and len(calls) == 1


def test_forcing_is_at_most_once_under_contention():
    import threading
    import time
    rm = resumption("maybe")
    calls = []

    def build():
        calls.append(1)
        time.sleep(0.01)   # widen the race window
        return rm.unit("x")

    th = Thunk(build)
    results = []
    barrier = threading.Barrier(8)

    def worker():
        barrier.wait()
        results.append(th.force())

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert all(r is results[0] for r in results)


def test_shared_tree_truncation_across_threads():
    import threading
    rm = resumption("finset")
    x = carrier("x", ("a",))
    y = carrier("y", ("y0",))
    f = make_kleisli(rm, x, sum_carrier(y, x),
                     lambda v: rm.op_call("act", "p0", {"*": rm.unit(Inr(v))}))
    spine = rm.iterate(f)("a")
    outs = []
    barrier = threading.Barrier(6)

    def worker():
        barrier.wait()
        outs.append(rm.base.render(rm.truncate(spine, 4)))

    threads = [threading.Thread(target=worker) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(outs)) == 1


def test_ext_is_monad_morphism():
    from elgot.laws import GenConfig, run_morphism_suite
    from elgot.handler import MonadMorphism
    rm = resumption("finset")
    mor = MonadMorphism("ext", rm.base, rm, rm.ext)
    rep = run_morphism_suite(mor, GenConfig(samples=40, seed=19))
    assert rep.ok, rep.text()


def test_rendering_is_canonical(rm_finset):
    t = rm_finset.ext(finset(["b", "a"]))
    assert rm_finset.base.render(rm_finset.truncate(t, 1)) == "{(leaf a) (leaf b)}"
    t2 = rm_finset.iota("act", "p1", {"*": "v"})
    assert rm_finset.base.render(rm_finset.truncate(t2, 2)) == "{(op act p1 {(leaf v)})}"
    assert rm_finset.base.render(rm_finset.truncate(rm_finset.bottom(), 3)) == "{}"
