"""A while-language with atomic actions, interpreted in resumption trees
over a configurable base monad.

The single channel value ranges over a finite alphabet.  read and write are
the built-in input/output operations; predicates are true, false, and (for
nondeterministic bases) coin, a visible binary choice operation.  Loops
need no guardedness: the while rule iterates the loop step directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .core import (Carrier, Inl, Inr, KleisliFn, carrier, compose_kleisli,
                   dist_elem, make_kleisli, sum_carrier, unit_carrier)
from .base_monads import MaybeMonad, elgot_instance
from .resumption import OpDecl, ResumptionMonad, Signature

FALSE = Inl("*")
TRUE = Inr("*")

RESERVED = frozenset({"skip", "if", "then", "else", "while", "do",
                      "true", "false", "read", "write", "coin"})


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Act:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class If:
    pred: str
    then: "Stmt"
    orelse: "Stmt"


@dataclass(frozen=True)
class While:
    pred: str
    body: "Stmt"


Stmt = Union[Skip, Act, Seq, If, While]


class WhileSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__("%d:%d: %s" % (line, col, msg))


class SemanticError(ValueError):
    pass


def _tokenize(source: str):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(source):
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == "#":
            while i < len(source) and source[i] != "\n":
                i += 1
        elif ch in ";{}":
            tokens.append((ch, ch, line, col))
            col += 1
            i += 1
        elif ch.isalpha() and ch.islower():
            start = i
            startcol = col
            while i < len(source) and (source[i].isalnum() or source[i] == "_"):
                if not (source[i].islower() or source[i].isdigit() or source[i] == "_"):
                    break
                i += 1
                col += 1
            word = source[start:i]
            tokens.append(("ident", word, line, startcol))
        else:
            raise WhileSyntaxError("unexpected character %r" % ch, line, col)
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg):
        kind, text, line, col = self.peek()
        raise WhileSyntaxError(msg + (", got %r" % (text or kind)), line, col)

    def expect_word(self, word):
        kind, text, line, col = self.peek()
        if kind != "ident" or text != word:
            self.fail("expected %r" % word)
        self.next()

    def predicate(self) -> str:
        kind, text, line, col = self.peek()
        if kind != "ident":
            self.fail("expected a predicate name")
        if text in RESERVED and text not in ("true", "false", "coin"):
            self.fail("%r cannot be used as a predicate" % text)
        self.next()
        return text

    def stmt(self) -> Stmt:
        first = self.atom()
        if self.peek()[0] == ";":
            self.next()
            return Seq(first, self.stmt())
        return first

    def atom(self) -> Stmt:
        kind, text, line, col = self.peek()
        if kind == "{":
            self.next()
            inner = self.stmt()
            if self.peek()[0] != "}":
                self.fail("expected '}'")
            self.next()
            return inner
        if kind != "ident":
            self.fail("expected a statement")
        if text == "skip":
            self.next()
            return Skip()
        if text == "if":
            self.next()
            pred = self.predicate()
            self.expect_word("then")
            then = self.atom()
            self.expect_word("else")
            orelse = self.atom()
            return If(pred, then, orelse)
        if text == "while":
            self.next()
            pred = self.predicate()
            self.expect_word("do")
            return While(pred, self.atom())
        if text in RESERVED and text not in ("read", "write"):
            self.fail("%r cannot start a statement" % text)
        self.next()
        return Act(text)


def parse(source: str) -> Stmt:
    parser = _Parser(_tokenize(source))
    stmt = parser.stmt()
    if parser.peek()[0] != "eof":
        parser.fail("trailing input")
    return stmt


# ---------------------------------------------------------------------------
# Environments
# ---------------------------------------------------------------------------

BOOL2 = carrier("2", ("ff", "tt"))


@dataclass
class Env:
    rm: ResumptionMonad
    alphabet: Carrier
    actions: dict
    predicates: dict


def make_env(base_kind: str = "finset", alphabet=None, state_set=None,
             depth: int = 6, actions: Optional[dict] = None,
             predicates: Optional[dict] = None) -> Env:
    """The standard environment: read/write actions over the alphabet, the
    true/false predicates, and coin on nondeterministic bases."""
    base = elgot_instance(base_kind, state_set=state_set)
    alpha = alphabet if isinstance(alphabet, Carrier) else carrier(
        "n", tuple(alphabet) if alphabet else tuple(str(i) for i in range(8)))
    deterministic = isinstance(base, MaybeMonad)
    ops = [OpDecl("write", alpha, unit_carrier()),
           OpDecl("read", unit_carrier(), alpha)]
    if not deterministic:
        ops.append(OpDecl("coin", unit_carrier(), BOOL2))
    rm = ResumptionMonad(base, Signature(tuple(ops)), depth=depth)

    def do_write(v):
        return rm.op_call("write", v, {"*": rm.unit(v)})

    def do_read(_v):
        return rm.op_call("read", "*", {a: rm.unit(a) for a in alpha.elements})

    action_table = {"write": do_write, "read": do_read}
    action_table.update(actions or {})

    pred_table = {"true": lambda v: rm.unit(TRUE),
                  "false": lambda v: rm.unit(FALSE)}
    if not deterministic:
        pred_table["coin"] = lambda v: rm.op_call(
            "coin", "*", {"ff": rm.unit(FALSE), "tt": rm.unit(TRUE)})
    pred_table.update(predicates or {})
    return Env(rm, alpha, action_table, pred_table)


# ---------------------------------------------------------------------------
# Denotations
# ---------------------------------------------------------------------------

def _lookup_action(env: Env, name: str) -> Callable:
    fn = env.actions.get(name)
    if fn is None:
        raise SemanticError("unknown action %r" % name)
    return fn


def _lookup_pred(env: Env, name: str) -> Callable:
    fn = env.predicates.get(name)
    if fn is None:
        if name == "coin":
            raise SemanticError(
                "coin needs a nondeterministic base monad, not %s" % env.rm.base.name)
        raise SemanticError("unknown predicate %r" % name)
    return fn


def _branch(env: Env, pred: str, on_true: Callable, on_false: Callable):
    """The predicate composite: pair the value through the test, distribute,
    then take the false branch on the left and the true branch on the right."""
    rm = env.rm
    test = _lookup_pred(env, pred)

    def at(v):
        split = rm.map(rm.strength(v, test(v)), dist_elem)
        return rm.bind(split, lambda e: (on_false if isinstance(e, Inl) else on_true)(e.value.fst))

    return at


def interpret(stmt: Stmt, env: Env) -> KleisliFn:
    rm = env.rm
    alpha = env.alphabet
    if isinstance(stmt, Skip):
        return make_kleisli(rm, alpha, alpha, rm.unit)
    if isinstance(stmt, Act):
        return make_kleisli(rm, alpha, alpha, _lookup_action(env, stmt.name))
    if isinstance(stmt, Seq):
        return compose_kleisli(interpret(stmt.second, env), interpret(stmt.first, env))
    if isinstance(stmt, If):
        then_f = interpret(stmt.then, env)
        else_f = interpret(stmt.orelse, env)
        return make_kleisli(rm, alpha, alpha,
                            _branch(env, stmt.pred, then_f, else_f))
    if isinstance(stmt, While):
        body_f = interpret(stmt.body, env)
        exit_ = lambda v: rm.unit(Inl(v))
        again = lambda v: rm.map(body_f(v), Inr)
        step = make_kleisli(rm, alpha, sum_carrier(alpha, alpha),
                            _branch(env, stmt.pred, again, exit_))
        return rm.iterate(step)
    raise SemanticError("unknown statement %r" % (stmt,))


def run(program: Union[str, Stmt], env: Env, value: str, depth: int) -> str:
    """Parse if needed, interpret, truncate at the given depth, render."""
    stmt = parse(program) if isinstance(program, str) else program
    if value not in env.alphabet.elements:
        raise SemanticError("input %r is not in the alphabet" % value)
    sem = interpret(stmt, env)
    return env.rm.base.render(env.rm.truncate(sem(value), depth))
