"""Reader and printer for domain (.alpd) and agent program (.alp) files.

The syntax is Prolog-like: clauses end with a period, `%` starts a line
comment, lowercase names are atoms, capitalized names are variables, and
`_` is a fresh anonymous variable at each occurrence. Integers are atoms
with numeric names. The only infix operators are `/` in arity
declarations and `=` between terms; `-` is the prefix sign of a negative
fluent literal. Clause bodies may additionally contain `!` (cut),
`do(Action)`, and `?(Query)`.

A domain file is a set of directives plus auxiliary clauses:

    fluents([at/2, conn/2]).         actions([go/1, grab/0]).
    sensors([breeze]).               objects(room, [1,2,3]).
    initial_state([at(gold,1), [at(gold,4),at(gold,5)], -conn(1,3)]).
    action(go(Y), Precondition, [case(Condition, Effects), ...]).
    sensor_axiom(breeze(_), [case(Result, Index, Meaning), ...]).
    adj(1,2).                        % anything else: aux clauses

A state property is a list of clauses; a clause is a literal or a list
of literals; a literal is a fluent atom, `-` before a fluent atom, or a
positive aux atom. `?(L)` with a bare literal L abbreviates `?([L])`,
and `?(s(X))` for a declared sensor s triggers sensing instead.
"""

import re

from .auxdb import BUILTINS
from .errors import ParseError
from .model import (
    CUT,
    ActionCase,
    ActionSpec,
    CallGoal,
    DoGoal,
    DomainFile,
    Program,
    ProgramClause,
    PropClause,
    QueryGoal,
    SenseGoal,
    SensorAxiom,
    SensorCase,
    StateProperty,
)
from .pi import prime_closure
from .terms import (
    NIL,
    Clause,
    Literal,
    Term,
    Var,
    format_clause,
    format_literal,
    format_term,
    list_parts,
    mk_list,
    normalize_clause,
    variables,
)

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>%[^\n]*)"
    r"|(?P<neck>:-)"
    r"|(?P<num>\d+)"
    r"|(?P<atom>[a-z][A-Za-z0-9_]*)"
    r"|(?P<var>[A-Z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[()\[\],.|!?=/-])"
)

_DIRECTIVES = {
    ("fluents", 1),
    ("actions", 1),
    ("sensors", 1),
    ("aux", 1),
    ("objects", 2),
    ("initial_state", 1),
    ("action", 3),
    ("sensor_axiom", 2),
}

_BUILTIN_NAMES = {name for name, _ in BUILTINS}

RESERVED_NAMES = (
    {name for name, _ in _DIRECTIVES}
    | _BUILTIN_NAMES
    | {"do", "case", "-", "=", "/", ".", "[]"}
)


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}({self.text!r})@{self.line}:{self.col}"


def _describe(tok):
    if tok.kind == "eof":
        return "end of input"
    return f"{tok.text!r}"


def _tokenize(text, filename):
    tokens = []
    pos = 0
    line = 1
    bol = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - bol + 1, filename
            )
        kind = m.lastgroup
        s = m.group()
        if kind in ("ws", "comment"):
            if "\n" in s:
                line += s.count("\n")
                bol = pos + s.rfind("\n") + 1
        else:
            if kind == "punct":
                kind = s
            tokens.append(Token(kind, s, line, pos - bol + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - bol + 1))
    return tokens


class _RawClause:
    """One read clause before semantic checks: head term, body item list
    (None for a fact), and the token it started at."""

    __slots__ = ("head", "body", "tok")

    def __init__(self, head, body, tok):
        self.head = head
        self.body = body
        self.tok = tok


class _Reader:
    def __init__(self, text, filename):
        self.filename = filename
        self.toks = _tokenize(text, filename)
        self.i = 0
        self.anon = 0

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def err(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col, self.filename)

    def expect(self, kind, where):
        tok = self.advance()
        if tok.kind != kind:
            self.err(f"expected {kind!r} in {where}, found {_describe(tok)}", tok)
        return tok

    def term(self):
        t = self.primary()
        nxt = self.peek()
        if nxt.kind == "/":
            self.advance()
            t = Term("/", (t, self.primary()))
        elif nxt.kind == "=":
            self.advance()
            t = Term("=", (t, self.term()))
        return t

    def primary(self):
        tok = self.advance()
        if tok.kind == "num":
            return Term(tok.text)
        if tok.kind == "var":
            if tok.text == "_":
                self.anon += 1
                return Var(f"_#{self.anon}")
            return Var(tok.text)
        if tok.kind == "atom":
            if self.peek().kind == "(":
                self.advance()
                args = [self.term()]
                while self.peek().kind == ",":
                    self.advance()
                    args.append(self.term())
                self.expect(")", "argument list")
                return Term(tok.text, tuple(args))
            return Term(tok.text)
        if tok.kind == "[":
            return self.list_term()
        if tok.kind == "-":
            return Term("-", (self.primary(),))
        self.err(f"unexpected {_describe(tok)} in term", tok)

    def list_term(self):
        if self.peek().kind == "]":
            self.advance()
            return NIL
        items = [self.term()]
        while self.peek().kind == ",":
            self.advance()
            items.append(self.term())
        tail = NIL
        if self.peek().kind == "|":
            self.advance()
            tail = self.term()
        self.expect("]", "list")
        return mk_list(items, tail)

    def body_item(self):
        tok = self.peek()
        if tok.kind == "!":
            self.advance()
            return ("cut", None, tok)
        if tok.kind == "?":
            self.advance()
            self.expect("(", "query")
            arg = self.term()
            self.expect(")", "query")
            return ("query", arg, tok)
        return ("goal", self.term(), tok)

    def clause(self):
        self.anon = 0
        start = self.peek()
        head = self.term()
        if not isinstance(head, Term) or head.functor in ("-", "/", "=", "."):
            self.err("clause head must be an atom or compound term", start)
        if head.functor.isdigit():
            self.err("clause head cannot be a number", start)
        tok = self.advance()
        if tok.kind == ".":
            return _RawClause(head, None, start)
        if tok.kind != "neck":
            self.err(f"expected '.' or ':-' after clause head, found {_describe(tok)}", tok)
        body = [self.body_item()]
        while self.peek().kind == ",":
            self.advance()
            body.append(self.body_item())
        self.expect(".", "clause")
        return _RawClause(head, body, start)

    def clauses(self):
        out = []
        while self.peek().kind != "eof":
            out.append(self.clause())
        return out

    def body(self):
        """A bare goal sequence (for query strings), optional final period."""
        self.anon = 0
        items = [self.body_item()]
        while self.peek().kind == ",":
            self.advance()
            items.append(self.body_item())
        if self.peek().kind == ".":
            self.advance()
        if self.peek().kind != "eof":
            self.err(f"trailing input after query: {_describe(self.peek())}")
        return items


def _as_list(term):
    """Python list of a proper list term's items, or None."""
    if isinstance(term, Var):
        return None
    items, tail = list_parts(term)
    if not (isinstance(tail, Term) and tail.functor == "[]" and not tail.args):
        return None
    return items


def _signed(term):
    if isinstance(term, Term) and term.functor == "-" and len(term.args) == 1:
        return False, term.args[0]
    return True, term


def _pred_str(functor, arity):
    return f"{functor}/{arity}"


class _Decls:
    """Declared names of one domain, as the parser accumulates them."""

    def __init__(self):
        self.fluents = {}
        self.actions = {}
        self.sensors = []
        self.aux = {}
        self.objects = {}

    def taken(self, name):
        return (
            name in self.fluents
            or name in self.actions
            or name in self.sensors
            or name in self.aux
        )


def _decl_items(rd, raw, what):
    items = _as_list(raw.head.args[0])
    if items is None:
        rd.err(f"{what} takes a list", raw.tok)
    return items


def _add_pred_decls(rd, raw, table, decls, what):
    for item in _decl_items(rd, raw, what):
        if not (
            isinstance(item, Term)
            and item.functor == "/"
            and len(item.args) == 2
            and isinstance(item.args[0], Term)
            and not item.args[0].args
            and isinstance(item.args[1], Term)
            and item.args[1].functor.isdigit()
        ):
            rd.err(f"{what} items must look like name/arity", raw.tok)
        name = item.args[0].functor
        arity = int(item.args[1].functor)
        if name in RESERVED_NAMES:
            rd.err(f"{name!r} is reserved and cannot be declared", raw.tok)
        if decls.taken(name):
            rd.err(f"{name!r} is declared twice", raw.tok)
        table[name] = arity


def _fluent_literal(rd, tok, decls, term, where, require_ground=False):
    positive, atom = _signed(term)
    if not isinstance(atom, Term) or atom.functor in ("-", "/", "=", "."):
        rd.err(f"expected a fluent literal in {where}", tok)
    arity = decls.fluents.get(atom.functor)
    if arity is None:
        rd.err(f"{atom.functor!r} is not a declared fluent ({where})", tok)
    if arity != len(atom.args):
        rd.err(
            f"fluent {atom.functor} has arity {arity}, "
            f"not {len(atom.args)} ({where})",
            tok,
        )
    if require_ground and not atom.ground:
        rd.err(f"literals must be ground in {where}", tok)
    return Literal(atom, positive)


def _clause_spec(rd, tok, decls, term, where, require_ground=False):
    """A clause written as a literal or a list of literals. Returns the
    normalized Clause, or None for a tautology."""
    items = _as_list(term)
    if items is None:
        items = [term]
    lits = [
        _fluent_literal(rd, tok, decls, el, where, require_ground) for el in items
    ]
    return normalize_clause(lits)


def _prop_clause(rd, tok, decls, aux_preds, term, where):
    items = _as_list(term)
    if items is None:
        items = [term]
    if not items:
        rd.err(f"empty clause in {where}", tok)
    fluents = []
    aux = []
    for el in items:
        positive, atom = _signed(el)
        if not isinstance(atom, Term) or atom.functor in ("-", "/", "."):
            rd.err(f"expected a literal in {where}", tok)
        pred = (atom.functor, len(atom.args))
        fl_arity = decls.fluents.get(atom.functor)
        if fl_arity == len(atom.args):
            fluents.append(Literal(atom, positive))
        elif pred in aux_preds or pred in BUILTINS:
            if not positive:
                rd.err(f"aux atoms cannot be negated ({where})", tok)
            aux.append(atom)
        elif fl_arity is not None:
            rd.err(
                f"fluent {atom.functor} has arity {fl_arity}, "
                f"not {len(atom.args)} ({where})",
                tok,
            )
        else:
            rd.err(
                f"{_pred_str(*pred)} is neither a declared fluent nor "
                f"an aux predicate ({where})",
                tok,
            )
    return PropClause(tuple(fluents), tuple(aux))


def _property(rd, tok, decls, aux_preds, term, where):
    items = _as_list(term)
    if items is None:
        rd.err(f"{where} must be a list of clauses", tok)
    return StateProperty(
        tuple(_prop_clause(rd, tok, decls, aux_preds, item, where) for item in items)
    )


def _case_args(rd, tok, term, arity, where):
    if not (
        isinstance(term, Term) and term.functor == "case" and len(term.args) == arity
    ):
        rd.err(f"expected case/{arity} terms in {where}", tok)
    return term.args


def parse_domain(text, filename="<domain>"):
    """Read and validate a domain file. Returns a DomainFile whose initial
    state is already in prime implicate form."""
    rd = _Reader(text, filename)
    raws = rd.clauses()
    warnings = []

    directives = []
    aux_raws = []
    for raw in raws:
        key = (raw.head.functor, len(raw.head.args))
        if key in _DIRECTIVES:
            if raw.body is not None:
                rd.err(f"{_pred_str(*key)} directives cannot have bodies", raw.tok)
            directives.append(raw)
        else:
            aux_raws.append(raw)

    decls = _Decls()
    for raw in directives:
        key = (raw.head.functor, len(raw.head.args))
        if key == ("fluents", 1):
            _add_pred_decls(rd, raw, decls.fluents, decls, "fluents")
        elif key == ("actions", 1):
            _add_pred_decls(rd, raw, decls.actions, decls, "actions")
        elif key == ("sensors", 1):
            for item in _decl_items(rd, raw, "sensors"):
                if not (isinstance(item, Term) and not item.args):
                    rd.err("sensors items are bare names", raw.tok)
                name = item.functor
                if name in RESERVED_NAMES:
                    rd.err(f"{name!r} is reserved and cannot be declared", raw.tok)
                if decls.taken(name):
                    rd.err(f"{name!r} is declared twice", raw.tok)
                decls.sensors.append(name)
        elif key == ("aux", 1):
            _add_pred_decls(rd, raw, decls.aux, decls, "aux")
        elif key == ("objects", 2):
            sort = raw.head.args[0]
            if not (isinstance(sort, Term) and not sort.args):
                rd.err("object sort must be an atom", raw.tok)
            items = _as_list(raw.head.args[1])
            if items is None:
                rd.err("objects takes a list of ground terms", raw.tok)
            for item in items:
                if isinstance(item, Var) or not item.ground:
                    rd.err("object terms must be ground", raw.tok)
            if sort.functor in decls.objects:
                rd.err(f"objects({sort.functor}, ...) appears twice", raw.tok)
            decls.objects[sort.functor] = tuple(items)

    # Aux predicates may also be declared implicitly, by defining clauses.
    aux_arity = dict(decls.aux)
    for raw in aux_raws:
        name = raw.head.functor
        if name in RESERVED_NAMES:
            rd.err(f"{name!r} is reserved and cannot be defined", raw.tok)
        if name in decls.fluents or name in decls.actions or name in decls.sensors:
            rd.err(
                f"{name!r} is declared as a fluent, action, or sensor "
                "and cannot have clauses",
                raw.tok,
            )
        arity = len(raw.head.args)
        if aux_arity.setdefault(name, arity) != arity:
            rd.err(f"{name!r} is used with two different arities", raw.tok)
    aux_preds = {(n, a) for n, a in aux_arity.items()}

    initial_clauses = []
    action_specs = {}
    sensor_axioms = {}
    for raw in directives:
        key = (raw.head.functor, len(raw.head.args))
        if key == ("initial_state", 1):
            items = _as_list(raw.head.args[0])
            if items is None:
                rd.err("initial_state takes a list of clauses", raw.tok)
            for item in items:
                c = _clause_spec(
                    rd, raw.tok, decls, item, "the initial state", require_ground=True
                )
                if c is None:
                    warnings.append(
                        f"{filename}:{raw.tok.line}: tautologous initial clause dropped"
                    )
                else:
                    initial_clauses.append(c)
        elif key == ("action", 3):
            head, precond_t, cases_t = raw.head.args
            if not isinstance(head, Term) or head.functor.isdigit():
                rd.err("action head must be an atom or compound term", raw.tok)
            arity = decls.actions.get(head.functor)
            if arity is None:
                rd.err(f"{head.functor!r} is not a declared action", raw.tok)
            if arity != len(head.args):
                rd.err(
                    f"action {head.functor} has arity {arity}, not {len(head.args)}",
                    raw.tok,
                )
            akey = (head.functor, len(head.args))
            if akey in action_specs:
                rd.err(f"action {_pred_str(*akey)} is specified twice", raw.tok)
            precond = _property(
                rd, raw.tok, decls, aux_preds, precond_t, f"{head.functor} precondition"
            )
            case_terms = _as_list(cases_t)
            if case_terms is None:
                rd.err("action cases must be a list", raw.tok)
            cases = []
            for ct in case_terms:
                cond_t, eff_t = _case_args(rd, raw.tok, ct, 2, "action cases")
                cond = _property(
                    rd, raw.tok, decls, aux_preds, cond_t, f"{head.functor} case condition"
                )
                eff_items = _as_list(eff_t)
                if eff_items is None:
                    rd.err("case effects must be a list of literals", raw.tok)
                effects = tuple(
                    _fluent_literal(rd, raw.tok, decls, el, f"{head.functor} effects")
                    for el in eff_items
                )
                cases.append(ActionCase(cond, effects))
            spec = ActionSpec(head, precond, tuple(cases))
            if not cases:
                warnings.append(
                    f"{filename}:{raw.tok.line}: action {head.functor} has no "
                    "effect cases; executing it will always fail"
                )
            covered = variables_of_spec_sources(spec)
            loose = sorted(
                n
                for case in spec.cases
                for l in case.effects
                for n in _var_names(l.fluent)
                if n not in covered
            )
            if loose:
                warnings.append(
                    f"{filename}:{raw.tok.line}: action {head.functor} effect "
                    f"variables {', '.join(dict.fromkeys(loose))} are not bound "
                    "by the head, precondition, or case condition"
                )
            action_specs[akey] = spec
        elif key == ("sensor_axiom", 2):
            head, cases_t = raw.head.args
            if not (
                isinstance(head, Term)
                and len(head.args) == 1
                and isinstance(head.args[0], Var)
            ):
                rd.err("sensor axiom head must look like sensor(Var)", raw.tok)
            name = head.functor
            if name not in decls.sensors:
                rd.err(f"{name!r} is not a declared sensor", raw.tok)
            if name in sensor_axioms:
                rd.err(f"sensor {name} has two axioms", raw.tok)
            case_terms = _as_list(cases_t)
            if case_terms is None:
                rd.err("sensor cases must be a list", raw.tok)
            cases = []
            for ct in case_terms:
                result_t, index_t, meaning_t = _case_args(
                    rd, raw.tok, ct, 3, "sensor cases"
                )
                if isinstance(result_t, Var) or not result_t.ground:
                    rd.err("sensor case results must be ground", raw.tok)
                index = _property(
                    rd, raw.tok, decls, aux_preds, index_t, f"{name} index"
                )
                meaning_items = _as_list(meaning_t)
                if meaning_items is None:
                    rd.err("sensor case meaning must be a list of clauses", raw.tok)
                meaning = []
                for item in meaning_items:
                    c = _clause_spec(rd, raw.tok, decls, item, f"{name} meaning")
                    if c is None:
                        warnings.append(
                            f"{filename}:{raw.tok.line}: tautologous meaning "
                            f"clause dropped from sensor {name}"
                        )
                    else:
                        meaning.append(c)
                cases.append(SensorCase(result_t, index, tuple(meaning)))
            sensor_axioms[name] = SensorAxiom(name, cases)

    aux_clauses = []
    for raw in aux_raws:
        body = []
        for kind, payload, tok in raw.body or ():
            if kind == "cut":
                rd.err("cut is not available in domain clauses", tok)
            if kind == "query":
                rd.err("domain clauses cannot query or sense", tok)
            positive, atom = _signed(payload)
            if not positive or not isinstance(atom, Term) or atom.functor.isdigit():
                rd.err("domain clause bodies are conjunctions of aux atoms", tok)
            pred = (atom.functor, len(atom.args))
            if atom.functor == "do" or pred == ("?", 1):
                rd.err("domain clauses cannot act or query", tok)
            if pred not in aux_preds and pred not in BUILTINS:
                rd.err(
                    f"{_pred_str(*pred)} is not an aux predicate or builtin", tok
                )
            body.append(CallGoal(atom))
        aux_clauses.append(ProgramClause(raw.head, tuple(body)))

    for name in decls.actions:
        if (name, decls.actions[name]) not in action_specs:
            warnings.append(f"action {name}/{decls.actions[name]} has no specification")
    for name in decls.sensors:
        if name not in sensor_axioms:
            warnings.append(f"sensor {name} has no axiom")

    initial = prime_closure(initial_clauses)
    if initial.inconsistent:
        raise ParseError("the initial state is inconsistent", filename=filename)

    return DomainFile(
        fluents=decls.fluents,
        actions=decls.actions,
        sensors=decls.sensors,
        aux=aux_arity,
        objects=decls.objects,
        initial=initial,
        action_specs=action_specs,
        sensor_axioms=sensor_axioms,
        aux_program=Program(tuple(aux_clauses)),
        warnings=warnings,
    )


def _var_names(term, acc=None):
    from .terms import variables

    return variables(term, acc)


def variables_of_spec_sources(spec):
    """Names that executing a matched action specification can bind:
    head, precondition, and case condition variables."""
    acc = _var_names(spec.head)
    spec.precond.variables(acc)
    for case in spec.cases:
        case.cond.variables(acc)
    return acc


def _classify_goal(rd, domain, aux_preds, kind, payload, tok):
    if kind == "cut":
        return CUT
    if kind == "query":
        term = payload
        if (
            isinstance(term, Term)
            and term.functor in domain.sensors
            and len(term.args) == 1
        ):
            return SenseGoal(term.functor, term.args[0])
        items = _as_list(term)
        if items is None:
            prop = StateProperty(
                (_prop_clause(rd, tok, _DomainDecls(domain), aux_preds, term, "query"),)
            )
        else:
            prop = _property(
                rd, tok, _DomainDecls(domain), aux_preds, term, "query"
            )
        return QueryGoal(prop)
    term = payload
    positive, atom = _signed(term)
    if not positive:
        rd.err("goals cannot be negated", tok)
    if not isinstance(atom, Term) or atom.functor.isdigit():
        rd.err("goals must be atoms or compound terms", tok)
    if atom.functor == "do" and len(atom.args) == 1:
        act = atom.args[0]
        if isinstance(act, Term):
            arity = domain.actions.get(act.functor)
            if arity is None:
                rd.err(f"{act.functor!r} is not a declared action", tok)
            if arity != len(act.args):
                rd.err(
                    f"action {act.functor} has arity {arity}, not {len(act.args)}",
                    tok,
                )
        return DoGoal(act)
    if atom.functor == "do":
        rd.err("do takes exactly one action argument", tok)
    return CallGoal(atom)


class _DomainDecls:
    """Adapter giving property builders the declarations of a parsed
    DomainFile (they only look at `.fluents`)."""

    __slots__ = ("fluents",)

    def __init__(self, domain):
        self.fluents = domain.fluents


def _aux_pred_set(domain):
    return {(n, a) for n, a in domain.aux.items()}


def parse_program(text, domain, filename="<program>"):
    """Read and validate an agent program against a parsed domain."""
    rd = _Reader(text, filename)
    raws = rd.clauses()
    aux_preds = _aux_pred_set(domain)

    for raw in raws:
        pred = (raw.head.functor, len(raw.head.args))
        if raw.head.functor in RESERVED_NAMES:
            rd.err(
                f"{raw.head.functor!r} is reserved and cannot be defined", raw.tok
            )
        if pred in aux_preds:
            rd.err(
                f"{_pred_str(*pred)} is already defined in the domain", raw.tok
            )
        if raw.head.functor in domain.sensors:
            rd.err(f"{raw.head.functor!r} is a sensor, not a predicate", raw.tok)

    clauses = []
    for raw in raws:
        body = tuple(
            _classify_goal(rd, domain, aux_preds, kind, payload, tok)
            for kind, payload, tok in raw.body or ()
        )
        clauses.append(ProgramClause(raw.head, body))
    return Program(tuple(clauses))


def parse_query(text, domain, filename="<query>"):
    """Read a goal sequence (the CLI's --query string)."""
    rd = _Reader(text, filename)
    items = rd.body()
    aux_preds = _aux_pred_set(domain)
    return tuple(
        _classify_goal(rd, domain, aux_preds, kind, payload, tok)
        for kind, payload, tok in items
    )


def parse_ground_terms(text, filename="<terms>"):
    """Period-terminated ground terms, e.g. a replay script. Variables
    are rejected."""
    rd = _Reader(text, filename)
    out = []
    while rd.peek().kind != "eof":
        rd.anon = 0
        start = rd.peek()
        term = rd.term()
        if variables(term, set()):
            rd.err("ground term expected", start)
        rd.expect(".", "term list")
        out.append(term)
    return out


# ---------------------------------------------------------------- printing


def format_prop_clause(pc):
    parts = [format_literal(l) for l in pc.fluents] + [
        format_term(a) for a in pc.aux
    ]
    if len(parts) == 1:
        return parts[0]
    return "[" + ",".join(parts) + "]"


def format_property(prop):
    return "[" + ",".join(format_prop_clause(c) for c in prop.clauses) + "]"


def format_goal(goal):
    from .model import CallGoal, Cut, DoGoal, QueryGoal, SenseGoal

    if isinstance(goal, Cut):
        return "!"
    if isinstance(goal, DoGoal):
        return f"do({format_term(goal.action)})"
    if isinstance(goal, SenseGoal):
        return f"?({goal.functor}({format_term(goal.arg)}))"
    if isinstance(goal, QueryGoal):
        return f"?({format_property(goal.property)})"
    return format_term(goal.atom)


def format_program_clause(clause):
    head = format_term(clause.head)
    if not clause.body:
        return f"{head}."
    return f"{head} :- " + ", ".join(format_goal(g) for g in clause.body) + "."


def format_program(program):
    return "\n".join(format_program_clause(c) for c in program.clauses) + "\n"


def _fmt_decl_list(table):
    return "[" + ",".join(f"{n}/{a}" for n, a in table.items()) + "]"


def format_action_spec(spec):
    cases = ",\n    ".join(
        f"case({format_property(c.cond)}, "
        f"[{','.join(format_literal(l) for l in c.effects)}])"
        for c in spec.cases
    )
    return (
        f"action({format_term(spec.head)},\n"
        f"  {format_property(spec.precond)},\n"
        f"  [{cases}])."
    )


def format_sensor_axiom(axiom):
    cases = ",\n    ".join(
        f"case({format_term(c.result)}, {format_property(c.index)}, "
        f"[{','.join(format_clause(cl) for cl in c.meaning)}])"
        for c in axiom.cases
    )
    return f"sensor_axiom({axiom.functor}(_), [\n    {cases}])."


def format_domain(domain):
    """Canonical text of a domain file; parsing it back yields an equal
    DomainFile (the initial state prints in prime implicate form)."""
    out = []
    if domain.fluents:
        out.append(f"fluents({_fmt_decl_list(domain.fluents)}).")
    if domain.actions:
        out.append(f"actions({_fmt_decl_list(domain.actions)}).")
    if domain.sensors:
        out.append(f"sensors([{','.join(domain.sensors)}]).")
    declared_aux = {
        n: a
        for n, a in domain.aux.items()
        if not domain.aux_program.defines(n, a)
    }
    if declared_aux:
        out.append(f"aux({_fmt_decl_list(declared_aux)}).")
    for sort, items in domain.objects.items():
        out.append(f"objects({sort}, [{','.join(format_term(t) for t in items)}]).")
    out.append("")
    out.append(
        "initial_state([\n  "
        + ",\n  ".join(format_clause(c) for c in domain.initial)
        + "\n])."
    )
    for spec in domain.action_specs.values():
        out.append("")
        out.append(format_action_spec(spec))
    for axiom in domain.sensor_axioms.values():
        out.append("")
        out.append(format_sensor_axiom(axiom))
    if domain.aux_program.clauses:
        out.append("")
        for clause in domain.aux_program.clauses:
            out.append(format_program_clause(clause))
    return "\n".join(out) + "\n"
