"""Term representation, unification, ordering, and clause normal form.

Terms are either variables or compounds (atoms are compounds of arity 0).
Atoms whose name is all digits denote integers and compare numerically;
everything else compares by name. Fluent literals wrap a term with a sign,
and a clause is a sorted, duplicate-free bundle of literals.

Substitutions are plain dicts mapping variable names to terms. `unify`
returns a fresh, idempotent substitution (occurs check on by default).
"""

from .errors import NonGroundError

_NUM = 0
_SYM = 1
_VAR = 2


class Var:
    """A logic variable, identified by name."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return hash(("var", self.name))

    def __repr__(self):
        return self.name


def _functor_class(functor):
    if functor.isdigit():
        return _NUM, int(functor)
    return _SYM, functor


def _term_key(term):
    cls, val = _functor_class(term.functor)
    return (cls, val, len(term.args), tuple(a.key for a in term.args))


class Term:
    """A compound term: functor plus argument tuple. Arity 0 is an atom.

    The sort key is cached at construction for ground terms, so ordering
    and clause operations on belief states stay cheap.
    """

    __slots__ = ("functor", "args", "ground", "key", "_hash")

    def __init__(self, functor, args=()):
        self.functor = functor
        self.args = args
        ground = True
        for a in args:
            if isinstance(a, Var) or not a.ground:
                ground = False
                break
        self.ground = ground
        self.key = _term_key(self) if ground else None
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term):
            return False
        if self.ground and other.ground:
            return self.key == other.key
        return self.functor == other.functor and self.args == other.args

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.functor, self.args))
        return h

    def __repr__(self):
        return format_term(self)


NIL = Term("[]")
TRUE = Term("true")
FALSE = Term("false")


def Atom(name):
    """Convenience constructor for a 0-ary term."""
    return Term(name, ())


def Num(value):
    """An integer as an atom with a numeric name."""
    return Term(str(int(value)), ())


def syntactic_key(term):
    """A total order key that also covers non-ground terms.

    Agrees with the ground key on ground terms; variables sort after all
    ground terms of the same nesting position, by name.
    """
    if isinstance(term, Var):
        return (_VAR, term.name, 0, ())
    if term.ground:
        return term.key
    cls, val = _functor_class(term.functor)
    return (cls, val, len(term.args), tuple(syntactic_key(a) for a in term.args))


def compare(t1, t2):
    """Three-way compare of two ground terms in the canonical order."""
    for t in (t1, t2):
        if isinstance(t, Var) or not t.ground:
            raise NonGroundError(f"cannot compare non-ground term {format_term(t)}")
    if t1.key < t2.key:
        return -1
    if t1.key > t2.key:
        return 1
    return 0


def variables(term, acc=None):
    """The set of variable names occurring in a term (or iterable of terms)."""
    if acc is None:
        acc = set()
    if isinstance(term, Var):
        acc.add(term.name)
    elif isinstance(term, Term):
        if not term.ground:
            for a in term.args:
                variables(a, acc)
    else:
        for t in term:
            variables(t, acc)
    return acc


def walk(term, bindings):
    """Chase variable bindings until an unbound variable or a term."""
    while isinstance(term, Var):
        nxt = bindings.get(term.name)
        if nxt is None:
            return term
        term = nxt
    return term


def apply_subst(term, bindings):
    """Substitute through a term, resolving chains of bindings."""
    term = walk(term, bindings)
    if isinstance(term, Var):
        return term
    if term.ground or not bindings:
        return term
    changed = False
    args = []
    for a in term.args:
        b = apply_subst(a, bindings)
        changed = changed or b is not a
        args.append(b)
    return Term(term.functor, tuple(args)) if changed else term


def occurs(name, term, bindings):
    term = walk(term, bindings)
    if isinstance(term, Var):
        return term.name == name
    if term.ground:
        return False
    return any(occurs(name, a, bindings) for a in term.args)


def _unify_into(t1, t2, bindings, occurs_check):
    t1 = walk(t1, bindings)
    t2 = walk(t2, bindings)
    if isinstance(t1, Var):
        if isinstance(t2, Var) and t2.name == t1.name:
            return True
        if occurs_check and occurs(t1.name, t2, bindings):
            return False
        bindings[t1.name] = t2
        return True
    if isinstance(t2, Var):
        if occurs_check and occurs(t2.name, t1, bindings):
            return False
        bindings[t2.name] = t1
        return True
    if t1.functor != t2.functor or len(t1.args) != len(t2.args):
        return False
    if t1.ground and t2.ground:
        return t1.key == t2.key
    for a, b in zip(t1.args, t2.args):
        if not _unify_into(a, b, bindings, occurs_check):
            return False
    return True


def unify(t1, t2, bindings=None, occurs_check=True):
    """Most general unifier of two terms, or None.

    An existing substitution can be passed in; it is not mutated. The
    returned substitution is idempotent.
    """
    out = {} if bindings is None else dict(bindings)
    if not _unify_into(t1, t2, out, occurs_check):
        return None
    if occurs_check:
        # Cyclic bindings are only possible without the occurs check, and
        # resolving through them would not terminate.
        for name in out:
            out[name] = apply_subst(out[name], out)
    return out


def restrict(bindings, names):
    """Keep only the entries for the given variable names."""
    return {n: t for n, t in bindings.items() if n in names}


def rename_term(term, mapping):
    """Replace variables via a name->Var mapping, building fresh structure."""
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if term.ground:
        return term
    return Term(term.functor, tuple(rename_term(a, mapping) for a in term.args))


class Literal:
    """A signed fluent atom. Negative literals sort right after the
    positive literal of the same fluent."""

    __slots__ = ("positive", "fluent", "key")

    def __init__(self, fluent, positive=True):
        self.positive = positive
        self.fluent = fluent
        self.key = (fluent.key, 0 if positive else 1) if fluent.ground else None

    @property
    def ground(self):
        return self.fluent.ground

    def negated(self):
        return Literal(self.fluent, not self.positive)

    def skey(self):
        return (syntactic_key(self.fluent), 0 if self.positive else 1)

    def __eq__(self, other):
        return (
            isinstance(other, Literal)
            and other.positive == self.positive
            and other.fluent == self.fluent
        )

    def __hash__(self):
        return hash((self.positive, self.fluent))

    def __repr__(self):
        return format_literal(self)


def apply_literal(lit, bindings):
    fluent = apply_subst(lit.fluent, bindings)
    return lit if fluent is lit.fluent else Literal(fluent, lit.positive)


class Clause:
    """A disjunction of literals, kept sorted and duplicate-free.

    The empty clause stands for falsum. Use `normalize_clause` to build
    one from raw literals; it returns None for tautologies.
    """

    __slots__ = ("literals", "ground", "key", "keyset", "_hash")

    def __init__(self, literals):
        self.literals = literals
        self.ground = all(l.ground for l in literals)
        if self.ground:
            self.key = (len(literals), tuple(l.key for l in literals))
            self.keyset = frozenset(l.key for l in literals)
        else:
            self.key = (len(literals), tuple(l.skey() for l in literals))
            self.keyset = None
        self._hash = None

    def __len__(self):
        return len(self.literals)

    @property
    def is_unit(self):
        return len(self.literals) == 1

    def subsumes(self, other):
        """True when every literal of this clause occurs in `other` (ground only)."""
        if len(self.literals) > len(other.literals):
            return False
        return self.keyset <= other.keyset

    def fluent_keys(self):
        """Keys of the fluents (unsigned) this ground clause mentions."""
        return [l.key[0] for l in self.literals]

    def __eq__(self, other):
        return isinstance(other, Clause) and other.key == self.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.key)
        return h

    def __repr__(self):
        return format_clause(self)


EMPTY_CLAUSE = Clause(())


def normalize_clause(literals):
    """Sort, deduplicate, and tautology-check a bundle of literals.

    Returns the normalized Clause, or None when the bundle contains a
    complementary pair (the clause is trivially true). Works on ground and
    non-ground literals alike; non-ground ones sort by structure.
    """
    lits = sorted(set(literals), key=Literal.skey)
    seen = {}
    for l in lits:
        k = syntactic_key(l.fluent)
        if k in seen and seen[k] != l.positive:
            return None
        seen[k] = l.positive
    return Clause(tuple(lits))


def mk_list(items, tail=NIL):
    """Build a list term from Python items (cons cells, '.'/2 and '[]')."""
    out = tail
    for item in reversed(items):
        out = Term(".", (item, out))
    return out


def list_parts(term):
    """Split a list term into (items, tail); tail is NIL for proper lists."""
    items = []
    while isinstance(term, Term) and term.functor == "." and len(term.args) == 2:
        items.append(term.args[0])
        term = term.args[1]
    return items, term


def format_term(term):
    if isinstance(term, Var):
        # Anonymous variables get unreadable fresh names at parse time;
        # print them back as written.
        return "_" if term.name.startswith("_#") else term.name
    if term.functor == "." and len(term.args) == 2:
        items, tail = list_parts(term)
        inner = ",".join(format_term(i) for i in items)
        if isinstance(tail, Term) and tail.functor == "[]" and not tail.args:
            return f"[{inner}]"
        return f"[{inner}|{format_term(tail)}]"
    if not term.args:
        return term.functor
    return f"{term.functor}({','.join(format_term(a) for a in term.args)})"


def format_literal(lit):
    text = format_term(lit.fluent)
    return text if lit.positive else f"-{text}"


def format_clause(clause):
    if clause.is_unit:
        return format_literal(clause.literals[0])
    return "[" + ",".join(format_literal(l) for l in clause.literals) + "]"


def format_subst(bindings, names=None):
    """Render an answer substitution as `X = t` pairs in name order."""
    keys = sorted(bindings) if names is None else sorted(n for n in names if n in bindings)
    return ", ".join(f"{n} = {format_term(apply_subst(bindings[n], bindings))}" for n in keys)
