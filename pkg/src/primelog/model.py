"""Validated in-memory form of domain and program files.

These are dumb records; the parser builds and validates them, the engine
and interpreter consume them. Properties keep their clause-internal split
into fluent literals and aux atoms because entailment treats the two
parts differently.
"""

from .terms import Clause, Term, Var, rename_term, variables


def rename_clause(clause, mapping):
    if clause.ground:
        return clause
    lits = tuple(
        l if l.ground else type(l)(rename_term(l.fluent, mapping), l.positive)
        for l in clause.literals
    )
    return Clause(lits)


class PropClause:
    """One disjunction inside a state property: fluent literals plus
    positive aux atoms, both in source order."""

    __slots__ = ("fluents", "aux")

    def __init__(self, fluents, aux=()):
        self.fluents = tuple(fluents)
        self.aux = tuple(aux)

    def variables(self, acc=None):
        acc = variables([l.fluent for l in self.fluents], acc)
        return variables(self.aux, acc)

    def __repr__(self):
        from .terms import format_literal, format_term

        parts = [format_literal(l) for l in self.fluents]
        parts += [format_term(a) for a in self.aux]
        if len(parts) == 1:
            return parts[0]
        return "[" + ", ".join(parts) + "]"


class StateProperty:
    """A conjunction of PropClauses (the shape `?(...)` takes)."""

    __slots__ = ("clauses",)

    def __init__(self, clauses):
        self.clauses = tuple(clauses)

    def variables(self, acc=None):
        if acc is None:
            acc = set()
        for c in self.clauses:
            c.variables(acc)
        return acc

    def __repr__(self):
        return "[" + ", ".join(repr(c) for c in self.clauses) + "]"


EMPTY_PROPERTY = StateProperty(())


class ActionCase:
    """One conditional effect: if `cond` holds, `effects` are brought about."""

    __slots__ = ("cond", "effects")

    def __init__(self, cond, effects):
        self.cond = cond
        self.effects = tuple(effects)


class ActionSpec:
    """Head term, precondition property, and effect cases of one action."""

    __slots__ = ("head", "precond", "cases")

    def __init__(self, head, precond, cases):
        self.head = head
        self.precond = precond
        self.cases = tuple(cases)

    def variables(self):
        acc = variables(self.head)
        self.precond.variables(acc)
        for case in self.cases:
            case.cond.variables(acc)
            variables([l.fluent for l in case.effects], acc)
        return acc


class SensorCase:
    """One sensing outcome: observed `result`, locating `index` (a property
    of unit clauses), and the `meaning` adjoined to the belief (a list of
    fluent Clauses, units or disjunctions)."""

    __slots__ = ("result", "index", "meaning")

    def __init__(self, result, index, meaning):
        self.result = result
        self.index = index
        self.meaning = tuple(meaning)

    def variables(self):
        acc = set()
        self.index.variables(acc)
        for c in self.meaning:
            if not c.ground:
                variables([l.fluent for l in c.literals], acc)
        return acc


class SensorAxiom:
    """All outcomes of one unary sense fluent."""

    __slots__ = ("functor", "cases", "results")

    def __init__(self, functor, cases):
        self.functor = functor
        self.cases = tuple(cases)
        seen = []
        for c in self.cases:
            if c.result not in seen:
                seen.append(c.result)
        self.results = tuple(seen)


class Cut:
    __slots__ = ()

    def __repr__(self):
        return "!"


CUT = Cut()


class CallGoal:
    """An ordinary program/aux atom in a clause body."""

    __slots__ = ("atom",)

    def __init__(self, atom):
        self.atom = atom

    def __repr__(self):
        return repr(self.atom)


class DoGoal:
    """`do(Action)`: execute an action against the environment."""

    __slots__ = ("action",)

    def __init__(self, action):
        self.action = action

    def __repr__(self):
        from .terms import format_term

        return f"do({format_term(self.action)})"


class QueryGoal:
    """`?(Property)`: ask whether the belief state entails a property."""

    __slots__ = ("property",)

    def __init__(self, property):
        self.property = property

    def __repr__(self):
        return f"?({self.property!r})"


class SenseGoal:
    """`?(s(X))` for a declared sense fluent: trigger sensing, bind X."""

    __slots__ = ("functor", "arg")

    def __init__(self, functor, arg):
        self.functor = functor
        self.arg = arg

    def __repr__(self):
        from .terms import format_term

        return f"?({self.functor}({format_term(self.arg)}))"


class ProgramClause:
    __slots__ = ("head", "body")

    def __init__(self, head, body):
        self.head = head
        self.body = tuple(body)


class Program:
    """Program clauses indexed by head functor/arity, textual order kept."""

    def __init__(self, clauses):
        self.clauses = tuple(clauses)
        self.index = {}
        for c in self.clauses:
            self.index.setdefault((c.head.functor, len(c.head.args)), []).append(c)

    def clauses_for(self, functor, arity):
        return self.index.get((functor, arity), ())

    def defines(self, functor, arity):
        return (functor, arity) in self.index


class DomainFile:
    """Everything one `.alpd` file declares."""

    def __init__(
        self,
        fluents,
        actions,
        sensors,
        aux,
        objects,
        initial,
        action_specs,
        sensor_axioms,
        aux_program,
        warnings=(),
    ):
        self.fluents = dict(fluents)          # functor -> arity
        self.actions = dict(actions)          # functor -> arity
        self.sensors = tuple(sensors)         # functor names (all unary)
        self.aux = dict(aux)                  # functor -> arity
        self.objects = dict(objects)          # sort -> tuple of ground terms
        self.initial = initial                # PIList
        self.action_specs = dict(action_specs)      # (functor, arity) -> ActionSpec
        self.sensor_axioms = dict(sensor_axioms)    # functor -> SensorAxiom
        self.aux_program = aux_program        # Program over aux predicates
        self.warnings = list(warnings)


def _mapping_for(names, suffix):
    return {n: Var(f"{n}~{suffix}") for n in names}


def rename_property(prop, mapping):
    clauses = []
    for c in prop.clauses:
        fl = tuple(
            l if l.ground else type(l)(rename_term(l.fluent, mapping), l.positive)
            for l in c.fluents
        )
        aux = tuple(rename_term(a, mapping) for a in c.aux)
        clauses.append(PropClause(fl, aux))
    return StateProperty(clauses)


def rename_spec(spec, suffix):
    """Fresh-variable copy of an ActionSpec for one activation."""
    mapping = _mapping_for(spec.variables(), suffix)
    head = rename_term(spec.head, mapping)
    precond = rename_property(spec.precond, mapping)
    cases = []
    for case in spec.cases:
        cond = rename_property(case.cond, mapping)
        effects = tuple(
            l if l.ground else type(l)(rename_term(l.fluent, mapping), l.positive)
            for l in case.effects
        )
        cases.append(ActionCase(cond, effects))
    return ActionSpec(head, precond, tuple(cases))


def rename_sensor_case(case, suffix):
    """Fresh-variable copy of one sensor triple."""
    mapping = _mapping_for(case.variables(), suffix)
    if not mapping:
        return case
    index = rename_property(case.index, mapping)
    meaning = tuple(rename_clause(c, mapping) for c in case.meaning)
    return SensorCase(case.result, index, meaning)
