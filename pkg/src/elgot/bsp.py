"""Finite process definitions with action prefixing over nondeterministic
choice, solved by unguarded iteration and exported as depth-bounded
labelled transition systems.

A definition gives each state i a chain of variables (i,0), (i,1), ...;
variable (i,k) either takes the k-th transition (action b[i][k] to state
j[i][k]) or falls through to (i,k+1), without any guard.  Solving collapses
each chain so state i's outgoing edges are exactly its table rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .core import Inl, Inr, KleisliFn, Pair, carrier, empty_carrier, \
    prod_carrier, sum_carrier, unit_carrier
from .base_monads import FinSetMonad, finset
from .resumption import OpDecl, OpNode, ResumptionMonad, Signature, Thunk


class BspLoadError(ValueError):
    pass


@dataclass(frozen=True)
class BspSpec:
    actions: tuple
    states: int
    widths: tuple
    b: tuple          # b[i][k]: action label of the k-th transition of state i
    j: tuple          # j[i][k]: target state of that transition

    def __post_init__(self):
        if self.states < 1:
            raise BspLoadError("need at least one state")
        if len(self.widths) != self.states or len(self.b) != self.states \
                or len(self.j) != self.states:
            raise BspLoadError("tables must have one row per state")
        for i in range(self.states):
            if len(self.b[i]) != self.widths[i] or len(self.j[i]) != self.widths[i]:
                raise BspLoadError("row %d does not match its declared width" % i)
            for lbl in self.b[i]:
                if lbl not in self.actions:
                    raise BspLoadError("unknown action %r in row %d" % (lbl, i))
            for tgt in self.j[i]:
                if not (0 <= tgt < self.states):
                    raise BspLoadError("target %r out of range in row %d" % (tgt, i))


def parse_bsp_text(text: str) -> BspSpec:
    """Flat key/value format: actions, states, then width/b/j rows."""
    actions = None
    states = None
    widths = {}
    b_rows = {}
    j_rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "actions":
                actions = tuple(parts[1:])
            elif key == "states":
                states = int(parts[1])
            elif key == "width":
                widths[int(parts[1])] = int(parts[2])
            elif key == "b":
                b_rows[int(parts[1])] = tuple(parts[2:])
            elif key == "j":
                j_rows[int(parts[1])] = tuple(int(t) for t in parts[2:])
            else:
                raise BspLoadError("line %d: unknown key %r" % (lineno, key))
        except (IndexError, ValueError) as exc:
            if isinstance(exc, BspLoadError):
                raise
            raise BspLoadError("line %d: malformed entry %r" % (lineno, raw))
    if actions is None or states is None:
        raise BspLoadError("actions and states are required")
    def row(table, i, default):
        return table.get(i, default)
    return BspSpec(actions, states,
                   tuple(row(widths, i, len(row(b_rows, i, ()))) for i in range(states)),
                   tuple(row(b_rows, i, ()) for i in range(states)),
                   tuple(row(j_rows, i, ()) for i in range(states)))


def parse_bsp_json(text: str) -> BspSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BspLoadError("invalid JSON: %s" % exc)
    try:
        b = tuple(tuple(row) for row in data["b"])
        j = tuple(tuple(int(t) for t in row) for row in data["j"])
        widths = tuple(data.get("width", [len(row) for row in b]))
        return BspSpec(tuple(data["actions"]), int(data["states"]), widths, b, j)
    except (KeyError, TypeError, ValueError) as exc:
        raise BspLoadError("malformed spec object: %s" % exc)


def load_bsp(text: str) -> BspSpec:
    if text.lstrip().startswith("{"):
        return parse_bsp_json(text)
    return parse_bsp_text(text)


# ---------------------------------------------------------------------------
# Equations and solving
# ---------------------------------------------------------------------------

def build_equations(spec: BspSpec, depth: int = 6):
    """The recursive definition over variables (state, transition index).

    Variable (i,k) with k < width(i) is the choice of the k-th prefixed
    transition and the bare fall-through variable (i,k+1); past the width
    the chain ends in the empty choice.  The fall-through summand is
    unguarded by construction.
    """
    base = FinSetMonad()
    act_car = carrier("a", spec.actions)
    sig = Signature((OpDecl("act", act_car, unit_carrier()),))
    rm = ResumptionMonad(base, sig, depth=depth)

    k_count = max(spec.widths) + 1 if spec.widths else 1
    st_car = carrier("st", tuple(str(i) for i in range(spec.states)))
    k_car = carrier("k", tuple(str(k) for k in range(k_count)))
    var_car = prod_carrier(st_car, k_car)
    cod = sum_carrier(empty_carrier(), var_car)

    def equation(v: Pair):
        i, k = int(v.fst), int(v.snd)
        if k >= spec.widths[i]:
            return rm.out_inv(base.bottom())
        cont = rm.unit(Inr(Pair(str(spec.j[i][k]), "0")))
        node = OpNode("act", spec.b[i][k], (("*", Thunk.ready(cont)),))
        return rm.out_inv(finset((Inl(Inr(Pair(str(i), str(k + 1)))), Inr(node))))

    table = {v: equation(v) for v in var_car.elements}
    return rm, KleisliFn(rm, var_car, cod, table)


@dataclass
class LtsNode:
    name: str
    state: int
    depth: int
    cut: bool = False


@dataclass
class Lts:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)   # (src name, label, dst name)
    initial: Optional[str] = None

    def edge_states(self):
        """Edges with occurrence names replaced by their state indices."""
        by_name = {n.name: n.state for n in self.nodes}
        return [(by_name[s], lbl, by_name[d]) for s, lbl, d in self.edges]


def solve_and_unfold(spec: BspSpec, depth: int) -> Lts:
    """Solve the definition and unfold every state's root to the given depth.

    Roots are named s<i>; deeper occurrences get fresh numeric suffixes.
    Occurrences are identified with states by first-layer value identity
    against the root layers; deadlocked states all share the empty layer and
    normalize to the least such index.
    """
    rm, g = build_equations(spec, depth=max(depth, 1))
    sol = rm.iterate(g)
    roots = {i: sol(Pair(str(i), "0")) for i in range(spec.states)}

    identify = {}
    for i in range(spec.states):
        identify.setdefault(rm.out(roots[i]), i)

    lts = Lts(initial="s0")
    counters = {i: 0 for i in range(spec.states)}
    frontier = []
    for i in range(spec.states):
        lts.nodes.append(LtsNode("s%d" % i, i, 0))
        frontier.append((lts.nodes[-1], roots[i]))

    for level in range(depth):
        nxt = []
        for node, tree in frontier:
            for e in rm.base.elements(rm.out(tree)):
                assert isinstance(e, Inr), "solved system still has bare leaves"
                opnode = e.value
                child = opnode.child("*").force()
                state = identify.get(rm.out(child))
                assert state is not None, "child layer does not match any state"
                counters[state] += 1
                child_node = LtsNode("s%d_%d" % (state, counters[state]),
                                     state, level + 1)
                lts.nodes.append(child_node)
                lts.edges.append((node.name, opnode.param, child_node.name))
                nxt.append((child_node, child))
        frontier = nxt

    for node, tree in frontier:
        if rm.base.elements(rm.out(tree)):
            node.cut = True
    return lts


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def lts_to_dot(lts: Lts) -> str:
    lines = ["digraph {"]
    for n in lts.nodes:
        if n.cut:
            lines.append('  %s [style=dashed];' % n.name)
    for src, lbl, dst in lts.edges:
        lines.append('  %s -> %s [label="%s"];' % (src, dst, lbl))
    lines.append("}")
    return "\n".join(lines) + "\n"


def lts_to_csv(lts: Lts) -> str:
    lines = ["src,label,dst"]
    lines.extend("%s,%s,%s" % e for e in lts.edges)
    return "\n".join(lines) + "\n"


def lts_to_text(lts: Lts) -> str:
    lines = ["initial %s" % lts.initial]
    for n in lts.nodes:
        if n.cut:
            lines.append("cut %s" % n.name)
    for src, lbl, dst in lts.edges:
        lines.append("%s -%s-> %s" % (src, lbl, dst))
    return "\n".join(lines) + "\n"
