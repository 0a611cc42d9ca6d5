"""Session language: a line-oriented DSL for declaring structures and
running checks, shared by batch files and the REPL.

Statements are newline-terminated at brace depth zero; inside ``{ ... }``
entries may be separated by commas, semicolons or newlines.  ``#`` starts a
comment.  Element expressions follow the grammar

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*      # '/' only before an integer
    factor := atom ['^' ['-'] INT]
    atom   := INT | NAME | '(' expr ')'

where a NAME resolves, in order, to the imaginary unit ``i``, a declared
formal parameter, a generator, a basis section of the context pair, or a
derivation.  Reports are deterministic given (session, seed).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import __version__
from .algebra import AlgebraElement, AlgebraPresentation, GeneratorSpec
from .carroll import (CarrollStructure, carroll_connection_check,
                      carroll_distribution, check_involutive, check_stationary,
                      flow, quotient_metric, verify_carroll)
from .catalog import BUILDERS, CatalogError, build, catalog_keys
from .coefficients import CoefficientRing, LaurentCoefficient
from .derivation import DerivationCombo, RhoDerivation, verify_derivation
from .geometry import Connection, Metric, check_tensoriality, curvature, torsion
from .grading import CommutationFactor, GradeGroup, check_commutation_axioms
from .report import FAIL, INFO, CheckResult, VerificationReport
from .rinehart import LieRinehartPair, Section, verify_pair

RECORD_SCHEMA = "rho-carroll-records/1"


class DslSyntaxError(ValueError):
    def __init__(self, message, line, column, expected=None):
        self.line = line
        self.column = column
        self.expected = expected or []
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{exp}")


class DslEvalError(ValueError):
    def __init__(self, message, pos=None):
        if pos:
            message = f"line {pos[0]}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# tokenizer

_PUNCT = ("->", "(", ")", "[", "]", "{", "}", ",", ";", "=", "^", "*", "/",
          "+", "-")


@dataclass
class Token:
    kind: str  # NAME INT PUNCT NEWLINE EOF
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == "\n":
            tokens.append(Token("NEWLINE", "\n", line, col))
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("->", i):
            tokens.append(Token("PUNCT", "->", line, col))
            i += 2
            col += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("NAME", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "()[]{},;=^*/+-":
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# statement AST

@dataclass
class Stmt:
    kind: str
    pos: tuple
    fields: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.fields[k]

    def get(self, k, default=None):
        return self.fields.get(k, default)


@dataclass
class SessionAst:
    statements: list[Stmt]


# expression AST nodes: ("int", v) ("name", s) ("neg", e) ("pow", e, k)
# ("mul", a, b) ("div", a, k) ("add", a, b) ("sub", a, b)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.k = 0

    def peek(self) -> Token:
        return self.tokens[self.k]

    def next(self) -> Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def error(self, message, expected=None):
        t = self.peek()
        raise DslSyntaxError(message, t.line, t.column, expected)

    def expect(self, kind, text=None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            self.error(f"found {t.text!r}", [text or kind])
        return self.next()

    def accept(self, kind, text=None):
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    def skip_newlines(self):
        while self.peek().kind == "NEWLINE":
            self.next()

    def skip_separators(self):
        while self.peek().kind == "NEWLINE" or \
                (self.peek().kind == "PUNCT" and self.peek().text in (",", ";")):
            self.next()

    def end_statement(self):
        t = self.peek()
        if t.kind == "EOF":
            return
        if t.kind == "NEWLINE" or (t.kind == "PUNCT" and t.text == ";"):
            self.next()
            return
        self.error(f"unexpected {t.text!r} after statement", ["newline"])

    # -- atoms ------------------------------------------------------------

    def signed_int(self) -> int:
        neg = self.accept("PUNCT", "-") is not None
        t = self.expect("INT")
        return -int(t.text) if neg else int(t.text)

    def int_tuple(self) -> tuple:
        self.expect("PUNCT", "(")
        vals = [self.signed_int()]
        while self.accept("PUNCT", ","):
            vals.append(self.signed_int())
        self.expect("PUNCT", ")")
        return tuple(vals)

    def int_matrix(self) -> list:
        self.expect("PUNCT", "[")
        rows = []
        while True:
            self.expect("PUNCT", "[")
            row = [self.signed_int()]
            while self.accept("PUNCT", ","):
                row.append(self.signed_int())
            self.expect("PUNCT", "]")
            rows.append(row)
            if not self.accept("PUNCT", ","):
                break
        self.expect("PUNCT", "]")
        return rows

    # -- expressions --------------------------------------------------------

    def expression(self):
        node = ("neg", self.term()) if self.accept("PUNCT", "-") else self.term()
        while True:
            if self.accept("PUNCT", "+"):
                node = ("add", node, self.term())
            elif self.accept("PUNCT", "-"):
                node = ("sub", node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            if self.accept("PUNCT", "*"):
                node = ("mul", node, self.factor())
            elif self.accept("PUNCT", "/"):
                t = self.peek()
                if t.kind != "INT":
                    self.error("division is only by integer literals", ["INT"])
                node = ("div", node, int(self.next().text))
            else:
                return node

    def factor(self):
        node = self.atom()
        if self.accept("PUNCT", "^"):
            node = ("pow", node, self.signed_int())
        return node

    def atom(self):
        t = self.peek()
        if t.kind == "INT":
            return ("int", int(self.next().text))
        if t.kind == "NAME":
            return ("name", self.next().text)
        if t.kind == "PUNCT" and t.text == "(":
            self.next()
            node = self.expression()
            self.expect("PUNCT", ")")
            return node
        self.error(f"expected an operand, found {t.text!r}",
                   ["INT", "NAME", "("])

    # -- statements -----------------------------------------------------------

    def parse_session(self) -> SessionAst:
        statements = []
        self.skip_newlines()
        while self.peek().kind != "EOF":
            statements.append(self.statement())
            self.skip_newlines()
        return SessionAst(statements)

    def statement(self) -> Stmt:
        t = self.peek()
        if t.kind != "NAME":
            self.error(f"expected a statement keyword, found {t.text!r}",
                       ["group", "params", "factor", "algebra", "derivation",
                        "pair", "metric", "connection", "carroll", "use",
                        "eval", "check", "curvature", "torsion", "flow",
                        "catalog", "report"])
        handler = getattr(self, "stmt_" + t.text, None)
        if handler is None:
            self.error(f"unknown statement {t.text!r}")
        return handler()

    def _kwarg_int(self, name, default=None):
        if self.peek().kind == "NAME" and self.peek().text == name:
            self.next()
            self.expect("PUNCT", "=")
            return self.signed_int()
        return default

    def stmt_params(self) -> Stmt:
        t = self.expect("NAME", "params")
        names = []
        while self.peek().kind == "NAME":
            names.append(self.next().text)
        self.end_statement()
        return Stmt("params", (t.line, t.column), {"names": names})

    def stmt_group(self) -> Stmt:
        t = self.expect("NAME", "group")
        free = 0
        torsion = 0
        while True:
            name = self.expect("NAME")
            if name.text not in ("Z", "Z2"):
                self.error(f"unknown group factor {name.text!r}", ["Z", "Z2"])
            rank = 1
            if self.accept("PUNCT", "^"):
                rank = self.signed_int()
            if name.text == "Z":
                free += rank
            else:
                torsion += rank
            if not (self.peek().kind == "NAME" and self.peek().text == "x"):
                break
            self.next()
        self.end_statement()
        return Stmt("group", (t.line, t.column), {"free": free, "torsion": torsion})

    def stmt_factor(self) -> Stmt:
        t = self.expect("NAME", "factor")
        q_form = sign_form = None
        while self.peek().kind == "NAME":
            key = self.next().text
            self.expect("PUNCT", "=")
            if key == "q_form":
                q_form = self.int_matrix()
            elif key == "sign_form":
                sign_form = self.int_matrix()
            else:
                self.error(f"unknown factor field {key!r}", ["q_form", "sign_form"])
        self.end_statement()
        return Stmt("factor", (t.line, t.column),
                    {"q_form": q_form, "sign_form": sign_form})

    def stmt_algebra(self) -> Stmt:
        t = self.expect("NAME", "algebra")
        name = self.expect("NAME").text
        integral = False
        if self.peek().kind == "NAME" and self.peek().text == "integral_domain":
            self.next()
            integral = True
        gens = []
        self.expect("PUNCT", "{")
        self.skip_separators()
        while not self.accept("PUNCT", "}"):
            self.expect("NAME", "generator")
            gname = self.expect("NAME").text
            self.expect("NAME", "deg")
            self.expect("PUNCT", "=")
            deg = self.int_tuple()
            invertible = False
            if self.peek().kind == "NAME" and self.peek().text == "invertible":
                self.next()
                invertible = True
            gens.append({"name": gname, "deg": deg, "invertible": invertible})
            self.skip_separators()
        self.end_statement()
        return Stmt("algebra", (t.line, t.column),
                    {"name": name, "integral_domain": integral, "generators": gens})

    def _arrow_block(self, key_parser):
        """{ key -> expr, ... } with keys produced by key_parser."""
        entries = []
        self.expect("PUNCT", "{")
        self.skip_separators()
        while not self.accept("PUNCT", "}"):
            key = key_parser()
            self.expect("PUNCT", "->")
            entries.append((key, self.expression()))
            self.skip_separators()
        return entries

    def stmt_derivation(self) -> Stmt:
        t = self.expect("NAME", "derivation")
        name = self.expect("NAME").text
        self.expect("NAME", "deg")
        self.expect("PUNCT", "=")
        deg = self.int_tuple()
        entries = self._arrow_block(lambda: self.expect("NAME").text)
        self.end_statement()
        return Stmt("derivation", (t.line, t.column),
                    {"name": name, "deg": deg, "action": entries})

    def stmt_pair(self) -> Stmt:
        t = self.expect("NAME", "pair")
        name = self.expect("NAME").text
        basis = []
        anchors = []
        brackets = []
        self.expect("PUNCT", "{")
        self.skip_separators()
        while not self.accept("PUNCT", "}"):
            kw = self.expect("NAME")
            if kw.text == "basis":
                bname = self.expect("NAME").text
                self.expect("NAME", "deg")
                self.expect("PUNCT", "=")
                basis.append((bname, self.int_tuple()))
            elif kw.text == "anchor":
                bname = self.expect("NAME").text
                self.expect("PUNCT", "->")
                anchors.append((bname, self.expression()))
            elif kw.text == "bracket":
                self.expect("PUNCT", "[")
                a = self.expect("NAME").text
                self.expect("PUNCT", ",")
                b = self.expect("NAME").text
                self.expect("PUNCT", "]")
                self.expect("PUNCT", "->")
                brackets.append(((a, b), self.expression()))
            else:
                self.error(f"unknown pair field {kw.text!r}",
                           ["basis", "anchor", "bracket"])
            self.skip_separators()
        self.end_statement()
        return Stmt("pair", (t.line, t.column),
                    {"name": name, "basis": basis, "anchors": anchors,
                     "brackets": brackets})

    def _pair_key(self):
        self.expect("PUNCT", "(")
        a = self.expect("NAME").text
        self.expect("PUNCT", ",")
        b = self.expect("NAME").text
        self.expect("PUNCT", ")")
        return (a, b)

    def _named_table(self, kind):
        t = self.expect("NAME", kind)
        name = self.expect("NAME").text
        pair_name = None
        if self.peek().kind == "NAME" and self.peek().text == "pair":
            self.next()
            self.expect("PUNCT", "=")
            pair_name = self.expect("NAME").text
        entries = self._arrow_block(self._pair_key)
        self.end_statement()
        return Stmt(kind, (t.line, t.column),
                    {"name": name, "pair": pair_name, "entries": entries})

    def stmt_metric(self) -> Stmt:
        return self._named_table("metric")

    def stmt_connection(self) -> Stmt:
        return self._named_table("connection")

    def stmt_carroll(self) -> Stmt:
        t = self.expect("NAME", "carroll")
        name = self.expect("NAME").text
        fields = {}
        self.expect("PUNCT", "{")
        self.skip_separators()
        while not self.accept("PUNCT", "}"):
            key = self.expect("NAME").text
            self.expect("PUNCT", "=")
            if key in ("pair", "metric"):
                fields[key] = self.expect("NAME").text
            elif key == "sigma":
                fields["sigma"] = self.expression()
            else:
                self.error(f"unknown carroll field {key!r}",
                           ["pair", "metric", "sigma"])
            self.skip_separators()
        self.end_statement()
        missing = {"pair", "metric", "sigma"} - set(fields)
        if missing:
            raise DslSyntaxError(f"carroll {name} missing {sorted(missing)}",
                                 t.line, t.column)
        return Stmt("carroll", (t.line, t.column), {"name": name, **fields})

    def stmt_use(self) -> Stmt:
        t = self.expect("NAME", "use")
        self.expect("NAME", "builtin")
        key = self.expect("NAME").text
        self.end_statement()
        return Stmt("use", (t.line, t.column), {"key": key})

    def stmt_eval(self) -> Stmt:
        t = self.expect("NAME", "eval")
        expr = self.expression()
        self.end_statement()
        return Stmt("eval", (t.line, t.column), {"expr": expr})

    def stmt_check(self) -> Stmt:
        t = self.expect("NAME", "check")
        what = self.expect("NAME").text
        st = {"what": what}
        if what == "factor":
            st["samples"] = self._kwarg_int("samples")
        elif what in ("derivation", "pair", "metric", "tensoriality"):
            st["name"] = self.expect("NAME").text
            st["samples"] = self._kwarg_int("samples")
        elif what == "carroll":
            st["name"] = self.expect("NAME").text
            if self.peek().kind == "NAME" and self.peek().text == "with":
                self.next()
                self.expect("NAME", "connection")
                st["connection"] = self.expect("NAME").text
        else:
            self.error(f"cannot check {what!r}",
                       ["factor", "derivation", "pair", "metric", "carroll",
                        "tensoriality"])
        self.end_statement()
        return Stmt("check", (t.line, t.column), st)

    def stmt_curvature(self) -> Stmt:
        t = self.expect("NAME", "curvature")
        conn = self.expect("NAME").text
        args = [self.expect("NAME").text for _ in range(3)]
        self.end_statement()
        return Stmt("curvature", (t.line, t.column), {"connection": conn, "args": args})

    def stmt_torsion(self) -> Stmt:
        t = self.expect("NAME", "torsion")
        conn = self.expect("NAME").text
        args = [self.expect("NAME").text for _ in range(2)]
        self.end_statement()
        return Stmt("torsion", (t.line, t.column), {"connection": conn, "args": args})

    def stmt_flow(self) -> Stmt:
        t = self.expect("NAME", "flow")
        deriv = self.expect("NAME").text
        expr = self.expression()
        order = self._kwarg_int("order", 6)
        self.end_statement()
        return Stmt("flow", (t.line, t.column),
                    {"derivation": deriv, "expr": expr, "order": order})

    def stmt_catalog(self) -> Stmt:
        t = self.expect("NAME", "catalog")
        action = self.expect("NAME").text
        if action == "list":
            self.end_statement()
            return Stmt("catalog", (t.line, t.column), {"action": "list"})
        if action == "build":
            key = self.expect("NAME").text
            self.end_statement()
            return Stmt("catalog", (t.line, t.column), {"action": "build", "key": key})
        self.error(f"unknown catalog action {action!r}", ["list", "build"])

    def stmt_report(self) -> Stmt:
        t = self.expect("NAME", "report")
        self.end_statement()
        return Stmt("report", (t.line, t.column), {})


def parse(source: str) -> SessionAst:
    return Parser(tokenize(source)).parse_session()


def parse_expression(source: str):
    """Parse a standalone element/section/combo expression to its AST."""
    p = Parser(tokenize(source))
    node = p.expression()
    p.skip_newlines()
    if p.peek().kind != "EOF":
        p.error(f"trailing input {p.peek().text!r}", ["end of input"])
    return node


# ---------------------------------------------------------------------------
# evaluation

@dataclass
class Report:
    session: str
    seed: int
    engine: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def extend(self, title: str, rep: VerificationReport):
        for c in rep.checks:
            self.checks.append(CheckResult(
                c.check, f"{title}: {c.target}", c.status, c.witness, c.value))

    def info(self, check, target, witness=None):
        self.checks.append(CheckResult(check, target, INFO, witness))

    def render_text(self) -> str:
        lines = [f"session {self.session} (seed {self.seed}, engine {self.engine})"]
        lines += [c.line() for c in self.checks]
        n_fail = sum(1 for c in self.checks if c.status == FAIL)
        lines.append(f"-- {'OK' if n_fail == 0 else 'FAILED'} "
                     f"({len(self.checks)} records, {n_fail} failures)")
        return "\n".join(lines)

    def render_records(self) -> str:
        lines = [json.dumps({"record": "meta", "schema": RECORD_SCHEMA,
                             "engine": self.engine, "seed": self.seed,
                             "session": self.session}, sort_keys=True)]
        for c in self.checks:
            lines.append(json.dumps(
                {"record": "check", "check": c.check, "target": c.target,
                 "status": c.status, "witness": c.witness}, sort_keys=True))
        n_fail = sum(1 for c in self.checks if c.status == FAIL)
        lines.append(json.dumps(
            {"record": "summary", "checks": len(self.checks),
             "failures": n_fail, "status": "pass" if n_fail == 0 else "fail"},
            sort_keys=True))
        return "\n".join(lines)


class Environment:
    """Mutable session state: one algebra context plus named objects."""

    def __init__(self):
        self.ring: CoefficientRing | None = None
        self.group: GradeGroup | None = None
        self.factor: CommutationFactor | None = None
        self.algebra: AlgebraPresentation | None = None
        self.derivations: dict[str, object] = {}
        self.pairs: dict[str, LieRinehartPair] = {}
        self.metrics: dict[str, Metric] = {}
        self.connections: dict[str, Connection] = {}
        self.carrolls: dict[str, CarrollStructure] = {}
        self.current_pair: LieRinehartPair | None = None

    def need(self, attr, what, pos):
        v = getattr(self, attr)
        if v is None:
            raise DslEvalError(f"no {what} declared yet", pos)
        return v

    def lookup(self, table, name, what, pos):
        try:
            return getattr(self, table)[name]
        except KeyError:
            raise DslEvalError(f"unknown {what} {name!r}", pos) from None


def bind_entry(env: Environment, entry):
    """Bind a catalog entry into an environment under standard aliases:
    its algebra becomes current; the pair, metric, connection and carroll
    structure bind as P, G (plus G_aux), C and CS."""
    env.ring = entry.algebra.ring
    env.group = entry.algebra.group
    env.factor = entry.algebra.factor
    env.algebra = entry.algebra
    env.derivations.update(entry.derivations)
    if entry.pair is not None:
        env.pairs["P"] = entry.pair
        env.current_pair = entry.pair
    if entry.metric is not None:
        env.metrics["G"] = entry.metric
    if entry.aux_metric is not None:
        env.metrics["G_aux"] = entry.aux_metric
    if entry.connection is not None:
        env.connections["C"] = entry.connection
    if entry.carroll is not None:
        env.carrolls["CS"] = entry.carroll
    return env


class ExpressionEvaluator:
    """Evaluates expression ASTs to scalars, elements, sections or combos."""

    def __init__(self, env: Environment, pair: LieRinehartPair | None = None,
                 pos=None):
        self.env = env
        self.pair = pair
        self.pos = pos

    def error(self, message):
        raise DslEvalError(message, self.pos)

    def name_value(self, name):
        env = self.env
        if name == "i":
            return ("scalar", env.need("ring", "params/ring", self.pos).i())
        if env.ring is not None and name in env.ring.params:
            return ("scalar", env.ring.param(name))
        if env.algebra is not None and name in env.algebra._index:
            return ("element", env.algebra.gen(name))
        if self.pair is not None and name in self.pair.basis_index:
            return ("section", self.pair.basis_section(name))
        if name in env.derivations:
            d = env.derivations[name]
            return ("combo", d if isinstance(d, DerivationCombo)
                    else DerivationCombo(d.presentation, {d: d.presentation.one()}))
        self.error(f"unknown name {name!r}")

    def eval(self, node):
        op = node[0]
        if op == "int":
            ring = self.env.need("ring", "coefficient ring", self.pos)
            return ("scalar", ring.gauss(node[1]))
        if op == "name":
            return self.name_value(node[1])
        if op == "neg":
            kind, v = self.eval(node[1])
            if kind in ("scalar", "element"):
                return (kind, -v)
            return (kind, v.scaled(-1) if kind == "section" else v.scaled(-1))
        if op == "pow":
            kind, v = self.eval(node[1])
            k = node[2]
            if kind == "scalar":
                return (kind, v ** k)
            if kind == "element":
                return (kind, v ** k)
            self.error("only scalars and elements can be raised to powers")
        if op == "div":
            kind, v = self.eval(node[1])
            k = node[2]
            if k == 0:
                self.error("division by zero")
            from fractions import Fraction
            from .coefficients import GaussianRational
            s = GaussianRational(Fraction(1, k))
            if kind == "scalar":
                return (kind, v * s)
            if kind == "element":
                return (kind, v * s)
            return (kind, v.scaled(s))
        if op in ("add", "sub"):
            ka, va = self.eval(node[1])
            kb, vb = self.eval(node[2])
            ka, va, kb, vb = self._promote(ka, va, kb, vb)
            if ka != kb:
                self.error(f"cannot {'add' if op == 'add' else 'subtract'} "
                           f"{ka} and {kb}")
            return (ka, va + vb if op == "add" else va - vb)
        if op == "mul":
            ka, va = self.eval(node[1])
            kb, vb = self.eval(node[2])
            return self._mul(ka, va, kb, vb)
        self.error(f"bad expression node {op!r}")

    def _promote(self, ka, va, kb, vb):
        alg = self.env.algebra
        if ka == "scalar" and kb == "element":
            return "element", va * alg.one(), kb, vb
        if kb == "scalar" and ka == "element":
            return ka, va, "element", vb * alg.one()
        return ka, va, kb, vb

    def _mul(self, ka, va, kb, vb):
        if ka == "scalar" and kb == "scalar":
            return ("scalar", va * vb)
        if ka == "scalar" and kb == "element":
            return ("element", va * vb)
        if ka == "element" and kb == "scalar":
            return ("element", va * vb)
        if ka == "element" and kb == "element":
            return ("element", va * vb)
        if ka in ("scalar", "element") and kb in ("section", "combo"):
            return (kb, vb.scaled(va))
        self.error(f"cannot multiply {ka} by {kb} (left module actions only)")


class Session:
    """Executes statements in order, accumulating a deterministic report."""

    def __init__(self, seed: int = 0, name: str = "<session>"):
        self.env = Environment()
        self.seed = seed
        self.master = random.Random(seed)
        self.report = Report(name, seed, __version__)
        self.printed: list[str] = []

    def subseed(self) -> int:
        return self.master.randrange(2 ** 31)

    def echo(self, text: str):
        self.printed.append(text)

    def run_statement(self, stmt: Stmt):
        handler = getattr(self, "exec_" + stmt.kind, None)
        if handler is None:
            raise DslEvalError(f"no handler for statement {stmt.kind!r}", stmt.pos)
        handler(stmt)

    def run(self, ast: SessionAst) -> Report:
        for stmt in ast.statements:
            self.run_statement(stmt)
        return self.report

    # -- declaration handlers ------------------------------------------------

    def exec_params(self, stmt):
        self.env.ring = CoefficientRing(tuple(stmt["names"]))

    def exec_group(self, stmt):
        self.env.group = GradeGroup(stmt["free"], stmt["torsion"])

    def exec_factor(self, stmt):
        group = self.env.need("group", "group", stmt.pos)
        if self.env.ring is None:
            # default ring: q when a q_form is present, none otherwise
            self.env.ring = CoefficientRing(("q",) if stmt["q_form"] else ())
        self.env.factor = CommutationFactor(
            group, self.env.ring, q_form=stmt["q_form"],
            sign_form=stmt["sign_form"])

    def exec_algebra(self, stmt):
        group = self.env.need("group", "group", stmt.pos)
        factor = self.env.need("factor", "factor", stmt.pos)
        gens = []
        for g in stmt["generators"]:
            try:
                deg = group.degree(*g["deg"])
            except Exception as exc:
                raise DslEvalError(str(exc), stmt.pos)
            gens.append(GeneratorSpec(g["name"], deg, invertible=g["invertible"]))
        self.env.algebra = AlgebraPresentation(
            stmt["name"], self.env.ring, group, factor, gens,
            integral_domain=stmt["integral_domain"])

    def _eval_expr(self, node, pair=None, pos=None):
        return ExpressionEvaluator(self.env, pair=pair, pos=pos).eval(node)

    def _as_element(self, node, pos) -> AlgebraElement:
        kind, v = self._eval_expr(node, pos=pos)
        if kind == "scalar":
            return self.env.need("algebra", "algebra", pos).scalar(v)
        if kind == "element":
            return v
        raise DslEvalError(f"expected an element, got a {kind}", pos)

    def exec_derivation(self, stmt):
        alg = self.env.need("algebra", "algebra", stmt.pos)
        degree = alg.group.degree(*stmt["deg"])
        action = {}
        for gname, node in stmt["action"]:
            action[gname] = self._as_element(node, stmt.pos)
        self.env.derivations[stmt["name"]] = RhoDerivation(
            alg, stmt["name"], degree, action)

    def exec_pair(self, stmt):
        alg = self.env.need("algebra", "algebra", stmt.pos)
        basis = [(n, alg.group.degree(*d)) for n, d in stmt["basis"]]
        anchors = {}
        for bname, node in stmt["anchors"]:
            kind, v = self._eval_expr(node, pos=stmt.pos)
            if kind == "scalar" and not v:
                v = DerivationCombo(alg, {})
            elif kind != "combo":
                raise DslEvalError(
                    f"anchor of {bname} must be a derivation combination", stmt.pos)
            anchors[bname] = v
        pair = LieRinehartPair(stmt["name"], alg, basis, anchors=anchors)
        # brackets may reference basis sections, so evaluate against the pair
        # and rebuild when any are declared
        if stmt["brackets"]:
            structure = {}
            for (a, b), node in stmt["brackets"]:
                kind, v = self._eval_expr(node, pair=pair, pos=stmt.pos)
                if kind == "scalar" and not v:
                    v = {}
                elif kind == "section":
                    v = dict(v.terms)
                else:
                    raise DslEvalError(
                        f"bracket [{a},{b}] must be a section", stmt.pos)
                structure[(a, b)] = v
            pair = LieRinehartPair(stmt["name"], alg, basis, anchors=anchors,
                                   structure=structure)
        self.env.pairs[stmt["name"]] = pair
        self.env.current_pair = pair

    def _context_pair(self, stmt):
        if stmt.get("pair"):
            return self.env.lookup("pairs", stmt["pair"], "pair", stmt.pos)
        if self.env.current_pair is None:
            raise DslEvalError("no pair in scope", stmt.pos)
        return self.env.current_pair

    def exec_metric(self, stmt):
        pair = self._context_pair(stmt)
        entries = {}
        for (a, b), node in stmt["entries"]:
            entries[(a, b)] = self._as_element(node, stmt.pos)
        self.env.metrics[stmt["name"]] = Metric(pair, entries)

    def exec_connection(self, stmt):
        pair = self._context_pair(stmt)
        entries = {}
        for (a, b), node in stmt["entries"]:
            kind, v = self._eval_expr(node, pair=pair, pos=stmt.pos)
            if kind == "scalar" and not v:
                v = pair.zero_section()
            elif kind != "section":
                raise DslEvalError(
                    f"connection entry ({a},{b}) must be a section", stmt.pos)
            entries[(a, b)] = v
        self.env.connections[stmt["name"]] = Connection(pair, entries)

    def exec_carroll(self, stmt):
        pair = self.env.lookup("pairs", stmt["pair"], "pair", stmt.pos)
        metric = self.env.lookup("metrics", stmt["metric"], "metric", stmt.pos)
        kind, sigma = self._eval_expr(stmt["sigma"], pair=pair, pos=stmt.pos)
        if kind != "section":
            raise DslEvalError("sigma must be a section", stmt.pos)
        self.env.carrolls[stmt["name"]] = CarrollStructure(
            stmt["name"], pair, metric, sigma)

    def exec_use(self, stmt):
        try:
            entry = build(stmt["key"])
        except CatalogError as exc:
            raise DslEvalError(str(exc), stmt.pos)
        bind_entry(self.env, entry)
        self.report.info("use builtin", stmt["key"],
                         "bound as P/G/C/CS" if entry.carroll else "bound as P/G")

    # -- command handlers -------------------------------------------------------

    def exec_eval(self, stmt):
        kind, v = self._eval_expr(stmt["expr"], pair=self.env.current_pair,
                                  pos=stmt.pos)
        rendered = v.render() if hasattr(v, "render") else str(v)
        self.report.info("eval", rendered, None)
        self.echo(rendered)

    def exec_check(self, stmt):
        what = stmt["what"]
        if what == "factor":
            factor = self.env.need("factor", "factor", stmt.pos)
            rep = check_commutation_axioms(
                factor, stmt.get("samples") or 500, seed=self.subseed())
            self.report.extend("factor", rep)
        elif what == "derivation":
            d = self.env.lookup("derivations", stmt["name"], "derivation", stmt.pos)
            if not isinstance(d, RhoDerivation):
                raise DslEvalError(
                    f"{stmt['name']} is a combination; check its base derivations",
                    stmt.pos)
            self.report.extend(f"derivation {stmt['name']}", verify_derivation(d))
        elif what == "pair":
            p = self.env.lookup("pairs", stmt["name"], "pair", stmt.pos)
            rep = verify_pair(p, samples=stmt.get("samples") or 200,
                              seed=self.subseed())
            self.report.extend(f"pair {stmt['name']}", rep)
        elif what == "metric":
            m = self.env.lookup("metrics", stmt["name"], "metric", stmt.pos)
            try:
                m.validate()
                rep = VerificationReport("metric")
                rep.passed("metric axioms", stmt["name"])
            except Exception as exc:
                rep = VerificationReport("metric")
                rep.failed("metric axioms", stmt["name"], str(exc))
            self.report.extend(f"metric {stmt['name']}", rep)
        elif what == "tensoriality":
            c = self.env.lookup("connections", stmt["name"], "connection", stmt.pos)
            rep = check_tensoriality(c, samples=stmt.get("samples") or 100,
                                     seed=self.subseed())
            self.report.extend(f"connection {stmt['name']}", rep)
        elif what == "carroll":
            cs = self.env.lookup("carrolls", stmt["name"], "carroll structure",
                                 stmt.pos)
            title = f"carroll {stmt['name']}"
            self.report.extend(title, verify_carroll(cs, seed=self.subseed()))
            gen, cls, witness = carroll_distribution(cs)
            status = {"non-singular": "pass", "singular": "pass"}.get(cls, "uncertified")
            self.report.checks.append(CheckResult(
                "distribution classification", f"{title}: generator {gen.render()}",
                status,
                cls if witness is None else f"{cls} with witness {witness}"))
            self.report.extend(title, check_involutive(cs, seed=self.subseed()))
            self.report.extend(title, check_stationary(cs, seed=self.subseed()))
            try:
                _, _, qstatus, qrep = quotient_metric(cs, seed=self.subseed())
                self.report.extend(title, qrep)
            except Exception as exc:
                self.report.checks.append(CheckResult(
                    "quotient metric", title, "uncertified", str(exc)))
            if stmt.get("connection"):
                conn = self.env.lookup("connections", stmt["connection"],
                                       "connection", stmt.pos)
                self.report.extend(title, carroll_connection_check(cs, conn))

    def exec_curvature(self, stmt):
        conn = self.env.lookup("connections", stmt["connection"], "connection",
                               stmt.pos)
        pair = conn.pair
        secs = [pair.basis_section(n) if n in pair.basis_index else
                self._section_by_name(pair, n, stmt.pos) for n in stmt["args"]]
        val = curvature(conn, *secs)
        self.report.info("curvature", f"R({','.join(stmt['args'])})",
                         val.render())
        self.echo(val.render())

    def exec_torsion(self, stmt):
        conn = self.env.lookup("connections", stmt["connection"], "connection",
                               stmt.pos)
        pair = conn.pair
        secs = [self._section_by_name(pair, n, stmt.pos) for n in stmt["args"]]
        val = torsion(conn, *secs)
        self.report.info("torsion", f"T({','.join(stmt['args'])})", val.render())
        self.echo(val.render())

    def _section_by_name(self, pair, name, pos) -> Section:
        if name in pair.basis_index:
            return pair.basis_section(name)
        raise DslEvalError(f"unknown basis section {name!r}", pos)

    def exec_flow(self, stmt):
        d = self.env.lookup("derivations", stmt["derivation"], "derivation",
                            stmt.pos)
        f = self._as_element(stmt["expr"], stmt.pos)
        poly = flow(d, f, stmt["order"])
        self.report.info("flow", f"{stmt['derivation']} order {stmt['order']}",
                         poly.render())
        self.echo(poly.render())

    def exec_catalog(self, stmt):
        if stmt["action"] == "list":
            listing = ", ".join(catalog_keys())
            self.report.info("catalog list", listing)
            self.echo(listing)
        else:
            try:
                entry = build(stmt["key"])
            except CatalogError as exc:
                raise DslEvalError(str(exc), stmt.pos)
            rep = entry.verify_all(samples=50, seed=self.subseed())
            self.report.extend(f"catalog {stmt['key']}", rep)
            self.echo(f"built {entry.key}: {entry.description}")

    def exec_report(self, stmt):
        self.echo(self.report.render_text())


def run(ast: SessionAst, seed: int = 0, name: str = "<session>") -> Report:
    return Session(seed=seed, name=name).run(ast)


def run_source(source: str, seed: int = 0, name: str = "<session>"):
    session = Session(seed=seed, name=name)
    report = session.run(parse(source))
    return report, session
