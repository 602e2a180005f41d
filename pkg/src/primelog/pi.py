"""Belief states as prime implicate lists, and the operations on them.

A belief state is the set of prime implicates of a propositional formula
over ground fluent atoms: every entailed clause is subsumed by a member,
no member subsumes another, and no member is a tautology. That shape
reduces entailment checks to subsumption lookups, keeps progression a
local operation, and stays stable under the saturation used here.

The public operations:

- `prime_closure`: clause set -> PIList (worklist resolution saturation
  with forward/backward subsumption; detects inconsistency).
- `is_prime`: decide whether a clause tuple already has the shape.
- `entails_clause` / `entails_property`: enumerate answer substitutions
  for possibly non-ground query clauses with embedded aux atoms.
- `update`: progression through a set of ground effect literals.
- `applicable_cases`: which effect cases of an action spec fire.
- `integrate_sensing`: fold one observed sensing result into the state.
"""

import itertools
from collections import deque

from .errors import EngineError, NonGroundError, SensingError
from .model import rename_sensor_case
from .terms import (
    EMPTY_CLAUSE,
    Clause,
    apply_literal,
    apply_subst,
    format_clause,
    format_term,
    normalize_clause,
    syntactic_key,
    unify,
    variables,
)

_fresh_suffix = itertools.count(1)


class PIList:
    """An immutable, sorted, duplicate-free tuple of ground clauses.

    The single empty clause (`INCONSISTENT`) represents an unsatisfiable
    state; an empty tuple represents a tautologous (information-free) one.
    """

    __slots__ = ("clauses", "_by_pred")

    def __init__(self, clauses):
        unique = {}
        for c in clauses:
            if not c.ground:
                raise NonGroundError(f"belief clauses must be ground: {format_clause(c)}")
            unique[c.key] = c
        if EMPTY_CLAUSE.key in unique:
            self.clauses = (EMPTY_CLAUSE,)
        else:
            self.clauses = tuple(sorted(unique.values(), key=lambda c: c.key))
        self._by_pred = None

    @property
    def inconsistent(self):
        return bool(self.clauses) and len(self.clauses[0]) == 0

    def __len__(self):
        return len(self.clauses)

    def __eq__(self, other):
        return isinstance(other, PIList) and other.clauses == self.clauses

    def __hash__(self):
        return hash(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __repr__(self):
        return "[" + ", ".join(format_clause(c) for c in self.clauses) + "]"

    def units_for(self, functor, arity, positive):
        """Unit clauses on a given predicate and sign, in sorted order."""
        if self._by_pred is None:
            table = {}
            for c in self.clauses:
                if len(c) != 1:
                    break
                lit = c.literals[0]
                f = lit.fluent
                table.setdefault((f.functor, len(f.args), lit.positive), []).append(c)
            self._by_pred = table
        return self._by_pred.get((functor, arity, positive), ())


INCONSISTENT = PIList((EMPTY_CLAUSE,))
TOP = PIList(())


def _complement_key(lit_key):
    fk, sign = lit_key
    return (fk, 1 - sign)


class _Saturator:
    """Given-clause saturation with subsumption, over ground clauses."""

    def __init__(self):
        self.clauses = {}   # clause.key -> Clause
        self.by_lit = {}    # literal.key -> {clause.key: Clause}
        self.work = deque()
        self.inconsistent = False

    def seed(self, clause):
        """Install a clause assumed mutually irredundant with other seeds."""
        self.clauses[clause.key] = clause
        for l in clause.literals:
            self.by_lit.setdefault(l.key, {})[clause.key] = clause

    def _remove(self, clause):
        del self.clauses[clause.key]
        for l in clause.literals:
            bucket = self.by_lit.get(l.key)
            if bucket:
                bucket.pop(clause.key, None)

    def add(self, clause):
        if len(clause) == 0:
            self.inconsistent = True
            return
        if clause.key in self.clauses:
            return
        # forward subsumption: is the newcomer already implied?
        candidates = None
        for l in clause.literals:
            bucket = self.by_lit.get(l.key)
            keys = set(bucket) if bucket else set()
            candidates = keys if candidates is None else candidates | keys
        for key in candidates or ():
            other = self.clauses.get(key)
            if other is not None and other.subsumes(clause):
                return
        # backward subsumption: the newcomer may simplify the set
        doomed = [
            c
            for key in (candidates or ())
            if (c := self.clauses.get(key)) is not None and clause.subsumes(c)
        ]
        for c in doomed:
            self._remove(c)
        self.seed(clause)
        self.work.append(clause)

    def run(self):
        while self.work:
            if self.inconsistent:
                return
            given = self.work.popleft()
            if given.key not in self.clauses:
                continue  # subsumed away while queued
            for lit in given.literals:
                partners = self.by_lit.get(_complement_key(lit.key))
                if not partners:
                    continue
                for partner in list(partners.values()):
                    if given.key not in self.clauses:
                        break
                    resolvent = normalize_clause(
                        [l for l in given.literals if l.key != lit.key]
                        + [m for m in partner.literals if m.key != _complement_key(lit.key)]
                    )
                    if resolvent is None:
                        continue
                    self.add(resolvent)
                    if self.inconsistent:
                        return

    def result(self):
        if self.inconsistent:
            return INCONSISTENT
        return PIList(self.clauses.values())


def prime_closure(clauses, base=None):
    """Saturate a set of ground clauses into its prime implicates.

    `base` may carry an already-prime PIList whose clauses are taken as
    mutually resolved, so only the new clauses (and whatever they spawn)
    get processed. Returns INCONSISTENT when the empty clause derives.
    """
    sat = _Saturator()
    if base is not None:
        if base.inconsistent:
            return INCONSISTENT
        for c in base.clauses:
            sat.seed(c)
    pending = sorted(clauses, key=lambda c: c.key)
    for c in pending:
        if not c.ground:
            raise NonGroundError(f"closure needs ground clauses: {format_clause(c)}")
        sat.add(c)
        if sat.inconsistent:
            return INCONSISTENT
    sat.run()
    return sat.result()


def is_prime(clauses):
    """True iff the clause tuple is sorted, duplicate- and tautology-free,
    pairwise non-subsuming, and closed under non-redundant resolution."""
    cs = list(clauses)
    keys = [c.key for c in cs]
    if keys != sorted(keys) or len(set(keys)) != len(keys):
        return False
    for c in cs:
        if normalize_clause(c.literals) is None or normalize_clause(c.literals) != c:
            return False
    for i, c in enumerate(cs):
        for j, d in enumerate(cs):
            if i != j and c.subsumes(d):
                return False
    for i, c in enumerate(cs):
        for d in cs[i + 1 :]:
            for lit in c.literals:
                comp = _complement_key(lit.key)
                if not any(m.key == comp for m in d.literals):
                    continue
                resolvent = normalize_clause(
                    [l for l in c.literals if l.key != lit.key]
                    + [m for m in d.literals if m.key != comp]
                )
                if resolvent is None:
                    continue
                if len(resolvent) == 0:
                    return False
                if not any(e.subsumes(resolvent) for e in cs):
                    return False
    return True


def update(state, effects):
    """Progress a prime state through ground effect literals.

    Every clause mentioning an effect fluent (in either sign) is dropped,
    then the effects are adjoined as unit clauses. The result is prime
    again, because survivors share no fluent with the new units.
    """
    if state.inconsistent:
        raise EngineError("cannot update an inconsistent belief state")
    seen = {}
    for lit in effects:
        if not lit.ground:
            raise NonGroundError(f"effect literal not ground: {lit!r}")
        fk = lit.key[0]
        if fk in seen and seen[fk] != lit.positive:
            raise EngineError(f"contradictory effects on {format_term(lit.fluent)}")
        seen[fk] = lit.positive
    if not seen:
        return state
    doomed = set(seen)
    kept = [c for c in state.clauses if not any(fk in doomed for fk in c.fluent_keys())]
    units = [Clause((l,)) for l in {(l.key): l for l in effects}.values()]
    return PIList(kept + units)


def _subst_signature(bindings, names):
    sig = []
    for n in sorted(names):
        t = bindings.get(n)
        if t is not None:
            sig.append((n, syntactic_key(apply_subst(t, bindings))))
    return tuple(sig)


def _cover(state_lits, i, query_lits, bindings):
    """Match every literal of a candidate implicate against the query
    clause, left to right with backtracking."""
    if i == len(state_lits):
        yield bindings
        return
    target = state_lits[i]
    for q in query_lits:
        if q.positive != target.positive:
            continue
        u = unify(q.fluent, target.fluent, bindings)
        if u is None:
            continue
        yield from _cover(state_lits, i + 1, query_lits, u)


def entails_clause(state, pclause, aux, bindings=None):
    """Enumerate substitutions under which the belief state entails one
    query clause (fluent literals and/or positive aux atoms).

    A single fluent literal must unify with a unit prime implicate; a
    multi-literal fluent part must instantiate to a superset of some
    prime implicate; failing those, each aux atom is tried in order.
    Distinct substitutions are yielded once, deterministic order.
    """
    base = {} if bindings is None else bindings
    if state.inconsistent:
        raise EngineError("cannot query an inconsistent belief state")
    names = pclause.variables()
    seen = set()

    def emit(b):
        sig = _subst_signature(b, names)
        if sig in seen:
            return False
        seen.add(sig)
        return True

    fluents = [apply_literal(l, base) for l in pclause.fluents]
    if len(fluents) == 1:
        lit = fluents[0]
        f = lit.fluent
        for unit in state.units_for(f.functor, len(f.args), lit.positive):
            u = unify(f, unit.literals[0].fluent, base)
            if u is not None and emit(u):
                yield u
    elif len(fluents) > 1:
        limit = len(fluents)
        for cand in state.clauses:
            if len(cand) > limit:
                break
            for u in _cover(cand.literals, 0, fluents, base):
                if emit(u):
                    yield u
    for atom in pclause.aux:
        shared = None
        for sol in aux.solve(apply_subst(atom, base), base):
            if shared is None:
                shared = variables(atom) & variables([l.fluent for l in pclause.fluents])
            for name in shared:
                val = sol.get(name)
                if val is None or not apply_subst(val, sol).ground:
                    raise EngineError(
                        f"non-ground aux answer for {format_term(atom)} "
                        f"on variable {name} shared with fluent literals"
                    )
            if emit(sol):
                yield sol


def entails_property(state, prop, aux, bindings=None):
    """Enumerate substitutions entailing a whole property (clause
    conjunction), threading bindings left to right."""
    base = {} if bindings is None else bindings

    def rec(i, b):
        if i == len(prop.clauses):
            yield b
            return
        for b2 in entails_clause(state, prop.clauses[i], aux, b):
            yield from rec(i + 1, b2)

    yield from rec(0, base)


def first_entailment(state, prop, aux, bindings=None):
    for sol in entails_property(state, prop, aux, bindings):
        return sol
    return None


def applicable_case_solutions(state, spec, aux, bindings=None):
    """(index, condition substitution) for every case whose condition the
    state entails under the given grounding."""
    out = []
    for i, case in enumerate(spec.cases):
        sol = first_entailment(state, case.cond, aux, bindings)
        if sol is not None:
            out.append((i, sol))
    return out


def applicable_cases(state, spec, aux, bindings=None):
    """Indices of the effect cases that fire; more than one is a
    domain-authoring fault and raises."""
    found = [i for i, _ in applicable_case_solutions(state, spec, aux, bindings)]
    if len(found) > 1:
        from .errors import NondeterministicActionError

        raise NondeterministicActionError(
            f"action {format_term(spec.head)} has {len(found)} applicable effect cases"
        )
    return found


def integrate_sensing(state, axiom, observed, aux):
    """Fold one observed result of a sense fluent into the belief state.

    Filters the axiom's cases by the observed result, locates the unique
    case whose index the state entails, adjoins its meaning under the
    located bindings, and re-closes to prime form.

    Returns (new PIList, index substitution). Raises SensingError when no
    case or more than one case applies, or when the meaning contradicts
    the state.
    """
    if not observed.ground:
        raise NonGroundError("sensing results must be ground")
    if observed not in axiom.results:
        raise SensingError(
            f"environment answered {axiom.functor} with {format_term(observed)}, "
            "which no sensor case declares"
        )
    matches = []
    for case in axiom.cases:
        if case.result != observed:
            continue
        renamed = rename_sensor_case(case, f"s{next(_fresh_suffix)}")
        sol = first_entailment(state, renamed.index, aux)
        if sol is not None:
            matches.append((renamed, sol))
    if not matches:
        raise SensingError(f"no sensor case for {axiom.functor}={format_term(observed)} applies")
    if len(matches) > 1:
        raise SensingError(
            f"ambiguous sensing: {len(matches)} cases for "
            f"{axiom.functor}={format_term(observed)} apply"
        )
    case, sol = matches[0]
    additions = []
    for clause in case.meaning:
        lits = [apply_literal(l, sol) for l in clause.literals]
        for l in lits:
            if not l.ground:
                raise NonGroundError(
                    f"sensing meaning for {axiom.functor} not ground after index match"
                )
        norm = normalize_clause(lits)
        if norm is not None and len(norm) > 0:
            additions.append(norm)
    new_state = prime_closure(additions, base=state)
    if new_state.inconsistent:
        raise SensingError(
            f"sensing result {axiom.functor}={format_term(observed)} contradicts the belief state"
        )
    return new_state, sol
