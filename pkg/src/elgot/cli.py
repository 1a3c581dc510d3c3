"""Command line interface: run while programs, solve process definitions,
run the law suites, and evaluate serialized trees under an interpretation.

Exit codes: 0 success, 1 check failures, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import CarrierMismatchError, ConfigError, carrier, make_kleisli
from .base_monads import Just, NOTHING, NdState, elgot_instance, finset
from .core import Pair
from .handler import (EffectInterpretation, InterpretationError, MonadMorphism,
                      handle, identity_morphism, finset_to_nondetstate,
                      maybe_to_finset, maybe_to_nondetstate)
from .bsp import BspLoadError, load_bsp, lts_to_csv, lts_to_dot, lts_to_text, \
    solve_and_unfold
from .laws import GenConfig, run_axiom_suite, run_handler_suite, run_morphism_suite
from .resumption import OpDecl, ResumptionMonad, Signature, Thunk
from .while_lang import SemanticError, WhileSyntaxError, make_env, parse, run


def _default_seed() -> int:
    env = os.environ.get("ELGOT_SEED")
    return int(env) if env else 42


def _add_seed(p):
    p.add_argument("--seed", type=int, default=_default_seed(),
                   help="random seed (default: ELGOT_SEED or 42)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="elgot")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="interpret a while program")
    p_run.add_argument("program", help="program file")
    p_run.add_argument("--base", choices=("maybe", "finset", "nondetstate"),
                       default="finset")
    p_run.add_argument("--state-set", default=None,
                       help="comma separated states for nondetstate")
    p_run.add_argument("--alphabet", default=None,
                       help="comma separated channel alphabet (default 0..7)")
    p_run.add_argument("--input", required=True, help="initial channel value")
    p_run.add_argument("--depth", type=int, default=3)
    p_run.add_argument("--trace", action="store_true",
                       help="echo the parsed program before the result")

    p_bsp = sub.add_parser("bsp", help="solve a process definition")
    p_bsp.add_argument("spec", help="definition file (key/value text or JSON)")
    p_bsp.add_argument("--depth", type=int, default=1)
    p_bsp.add_argument("--format", choices=("text", "dot", "csv"), default="text")

    p_laws = sub.add_parser("laws", help="run law suites")
    p_laws.add_argument("--suite", choices=("all", "base", "resumption",
                                            "morphism", "handler"),
                        default="all")
    _add_seed(p_laws)
    p_laws.add_argument("--samples", type=int, default=50)
    p_laws.add_argument("--depth", type=int, default=6)
    p_laws.add_argument("--report", default=None,
                        help="also write the structured report to this file")

    p_handle = sub.add_parser("handle", help="evaluate a serialized tree")
    p_handle.add_argument("file", help="JSON description of tree and interpretation")
    p_handle.add_argument("--fuel", type=int, default=None)

    return ap


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def cmd_run(args) -> int:
    try:
        source = open(args.program).read()
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    alphabet = tuple(args.alphabet.split(",")) if args.alphabet else None
    states = tuple(args.state_set.split(",")) if args.state_set else None
    if args.base == "nondetstate" and not states:
        print("error: --state-set is required for nondetstate", file=sys.stderr)
        return 2
    try:
        stmt = parse(source)
        env = make_env(args.base, alphabet=alphabet, state_set=states,
                       depth=args.depth)
        if args.trace:
            print("# %s" % (stmt,))
        print(run(stmt, env, args.input, args.depth))
    except (WhileSyntaxError, SemanticError, ConfigError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# bsp
# ---------------------------------------------------------------------------

def cmd_bsp(args) -> int:
    try:
        spec = load_bsp(open(args.spec).read())
        lts = solve_and_unfold(spec, args.depth)
    except (OSError, BspLoadError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    render = {"text": lts_to_text, "dot": lts_to_dot, "csv": lts_to_csv}[args.format]
    sys.stdout.write(render(lts))
    return 0


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------

def _standard_resumption(base_kind: str, depth: int) -> ResumptionMonad:
    from .core import unit_carrier
    params = carrier("p", ("p0", "p1"))
    two = carrier("2", ("l", "r"))
    sig = Signature((OpDecl("act", params, unit_carrier()),
                     OpDecl("ask", unit_carrier(), two)))
    return ResumptionMonad(elgot_instance(base_kind), sig, depth=depth)


def cmd_laws(args) -> int:
    config = GenConfig(seed=args.seed, samples=args.samples, depth=args.depth)
    reports = []
    if args.suite in ("all", "base"):
        for kind in ("maybe", "finset"):
            reports.append(run_axiom_suite(elgot_instance(kind), config))
        reports.append(run_axiom_suite(
            elgot_instance("nondetstate", state_set=("s0", "s1")), config))
    if args.suite in ("all", "resumption"):
        for kind in ("maybe", "finset"):
            reports.append(run_axiom_suite(_standard_resumption(kind, args.depth),
                                           config))
    if args.suite in ("all", "morphism"):
        for kind in ("maybe", "finset"):
            rm = _standard_resumption(kind, args.depth)
            mor = MonadMorphism("ext", rm.base, rm, rm.ext)
            reports.append(run_morphism_suite(mor, config))
    if args.suite in ("all", "handler"):
        rm = _standard_resumption("maybe", args.depth)
        target = elgot_instance("finset")
        sigma = maybe_to_finset(rm.base, target)
        gen_cfg = GenConfig(seed=config.seed + 1, samples=config.samples,
                            depth=config.depth)
        from .laws import Gen
        upsilon = Gen(gen_cfg).effect_interpretation(rm.sig, target)
        reports.append(run_handler_suite(rm, sigma, upsilon, config))

    for rep in reports:
        print(rep.text())
    if args.report:
        with open(args.report, "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2, sort_keys=True)
    return 0 if all(r.ok for r in reports) else 1


# ---------------------------------------------------------------------------
# handle
# ---------------------------------------------------------------------------

def _parse_value(monad, data, parse_elem):
    kind = monad.name.split("[")[0]
    if kind == "maybe":
        if data == "nothing":
            return NOTHING
        if isinstance(data, dict) and "just" in data:
            return Just(parse_elem(data["just"]))
    elif kind == "finset":
        if isinstance(data, dict) and "set" in data:
            return finset(parse_elem(e) for e in data["set"])
    elif kind == "nondetstate":
        if isinstance(data, dict) and "states" in data:
            table = []
            for s in monad.states:
                rows = data["states"].get(s, [])
                table.append((s, finset(Pair(parse_elem(x), s2) for x, s2 in rows)))
            return NdState(tuple(table))
    raise InterpretationError("malformed %s value: %r" % (kind, data))


def _parse_tree(rm, data):
    def parse_payload(p):
        if isinstance(p, dict) and "leaf" in p:
            from .core import Inl
            return Inl(p["leaf"])
        if isinstance(p, dict) and "op" in p:
            from .core import Inr
            from .resumption import OpNode
            decl = rm.sig.op(p["op"])
            kids = tuple((a, Thunk.ready(_parse_tree(rm, p["children"][a])))
                         for a in decl.arity.elements)
            return Inr(OpNode(p["op"], p["param"], kids))
        raise InterpretationError("malformed tree payload: %r" % (p,))

    return rm.out_inv(_parse_value(rm.base, data, parse_payload))


_SIGMAS = {"identity": lambda s, t: identity_morphism(s),
           "maybe-to-finset": maybe_to_finset,
           "maybe-to-nondetstate": maybe_to_nondetstate,
           "finset-to-nondetstate": finset_to_nondetstate}


def cmd_handle(args) -> int:
    try:
        data = json.load(open(args.file))
    except (OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    try:
        ops = []
        for entry in data["signature"]:
            ops.append(OpDecl(entry["name"],
                              carrier(entry["name"] + ".param", tuple(entry["param"])),
                              carrier(entry["name"] + ".arity", tuple(entry["arity"]))))
        sig = Signature(tuple(ops))
        base = elgot_instance(data["base"])
        target = elgot_instance(data["target"],
                                state_set=tuple(data.get("state_set", ())) or None)
        rm = ResumptionMonad(base, sig)
        sigma_name = data.get("sigma", "identity")
        if sigma_name not in _SIGMAS:
            raise InterpretationError("unknown morphism %r" % sigma_name)
        sigma = _SIGMAS[sigma_name](base, target)
        effects = {}
        for op in sig.ops:
            table = data["effects"][op.name]
            effects[op.name] = make_kleisli(
                target, op.param, op.arity,
                lambda p, _t=table: _parse_value(target, _t[p], lambda a: a))
        upsilon = EffectInterpretation(sig, target, effects)
        tree = _parse_tree(rm, data["tree"])
        fuel = args.fuel if args.fuel is not None else int(data.get("fuel", 10))
        result = handle(rm, tree, sigma, upsilon, fuel)
    except (KeyError, InterpretationError, ConfigError, CarrierMismatchError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    print(target.render(result.value))
    print("converged" if result.converged else "approximate")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    commands = {"run": cmd_run, "bsp": cmd_bsp, "laws": cmd_laws,
                "handle": cmd_handle}
    return commands[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
