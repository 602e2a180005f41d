"""Environments: the ground truth an agent program runs against.

An environment implements two calls. `execute(action)` either acknowledges
a ground action (returns None) or raises EnvironmentRejected; once
acknowledged the action has happened and cannot be undone. `sense(functor)`
answers a sense fluent with a ground term. `snapshot()` exposes the true
state for tests and instrumentation; agents never see it.
"""

import random
from dataclasses import dataclass, field

from .errors import EngineError, EnvironmentRejected
from .terms import FALSE, TRUE, Num, Term, format_term


def cell(row, col):
    return Term("c", (Num(row), Num(col)))


def cell_coords(term):
    """(row, col) of a c(R,C) term, or None if it is not one."""
    if (
        isinstance(term, Term)
        and term.functor == "c"
        and len(term.args) == 2
        and all(a.ground and not a.args and a.functor.isdigit() for a in term.args)
    ):
        return int(term.args[0].functor), int(term.args[1].functor)
    return None


def _grid_neighbours(row, col, size):
    for r, c in ((row - 1, col), (row + 1, col), (row, col - 1), (row, col + 1)):
        if 1 <= r <= size and 1 <= c <= size:
            yield r, c


# ---------------------------------------------------------------- maze


class MazeEnv:
    """A corridor of cells 1..k. The agent starts in cell 1; go(Y) is
    legal between adjacent cells. There is nothing to sense."""

    def __init__(self, length):
        if length < 2:
            raise ValueError("a maze needs at least 2 cells")
        self.length = length
        self.position = 1
        self.log = []

    def execute(self, action):
        if action.functor == "go" and len(action.args) == 1:
            target = action.args[0]
            if target.ground and not target.args and target.functor.isdigit():
                cell_no = int(target.functor)
                if 1 <= cell_no <= self.length and abs(cell_no - self.position) == 1:
                    self.position = cell_no
                    self.log.append(action)
                    return
        raise EnvironmentRejected(
            f"maze rejected {format_term(action)} (agent is in cell {self.position})"
        )

    def sense(self, functor):
        raise EngineError(f"the maze has no sensor named {functor}")

    def snapshot(self):
        return {"position": self.position, "log": tuple(self.log)}


def emit_maze_domain(length):
    """Domain text for a corridor maze: the agent in cell 1, gold one
    cell from the far end, full adjacency both ways."""
    if length < 2:
        raise ValueError("a maze needs at least 2 cells")
    gold = max(1, length - 1)
    lines = [
        "fluents([at/2]).",
        "actions([go/1]).",
        "",
        f"initial_state([at(agent,1), at(gold,{gold})]).",
        "",
        "action(go(Y),",
        "  [at(agent,X), adj(X,Y)],",
        "  [case([], [at(agent,Y), -at(agent,X)])]).",
        "",
    ]
    pairs = []
    for i in range(1, length):
        pairs.append(f"adj({i},{i + 1}).")
        pairs.append(f"adj({i + 1},{i}).")
    lines.extend(pairs)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- wumpus


@dataclass(frozen=True)
class WumpusConfig:
    """Parameters of a generated wumpus world.

    Sizes from 4 to 32 are the supported envelope; 2 and 3 work but are
    cramped. `threats` defaults to about a tenth of the board. With
    `solvable` set, generation resamples until the gold is provably
    reachable for a cautious agent (never entering a cell it cannot prove
    safe), so generated instances are fair by construction.
    """

    size: int = 8
    threats: int = -1
    seed: int = 0
    solvable: bool = True

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("wumpus worlds need size >= 2")
        if self.threats < 0:
            object.__setattr__(self, "threats", max(1, (self.size * self.size) // 10))
        free = self.size * self.size - 2
        if self.threats > free:
            raise ValueError(
                f"{self.threats} threats do not fit a {self.size}x{self.size} board"
            )

    @classmethod
    def from_mapping(cls, mapping):
        kwargs = {}
        for key, raw in mapping.items():
            if key in ("size", "threats", "seed"):
                kwargs[key] = int(raw)
            elif key == "solvable":
                low = str(raw).strip().lower()
                if low not in ("true", "false"):
                    raise ValueError(f"solvable must be true or false, not {raw!r}")
                kwargs[key] = low == "true"
            else:
                raise ValueError(f"unknown wumpus config key {key!r}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        """Read `key = value` lines; # starts a comment."""
        mapping = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, value = line.partition("=")
                mapping[key.strip()] = value.strip()
        return cls.from_mapping(mapping)


@dataclass(frozen=True)
class WumpusWorld:
    config: WumpusConfig
    gold: tuple
    threats: frozenset = field(default_factory=frozenset)

    @property
    def size(self):
        return self.config.size

    @property
    def start(self):
        return (1, 1)


def provably_safe_cells(size, threats, start=(1, 1)):
    """Fixpoint of cautious exploration: a cell is provably safe once some
    reachable safe cell adjacent to it smells nothing. Returns the set of
    cells a cautious agent can ever visit."""
    if start in threats:
        return set()
    safe = {start}
    while True:
        frontier = [start]
        reachable = {start}
        while frontier:
            here = frontier.pop()
            for nb in _grid_neighbours(*here, size):
                if nb in safe and nb not in reachable:
                    reachable.add(nb)
                    frontier.append(nb)
        grew = False
        for here in reachable:
            if any(nb in threats for nb in _grid_neighbours(*here, size)):
                continue
            for nb in _grid_neighbours(*here, size):
                if nb not in safe:
                    safe.add(nb)
                    grew = True
        if not grew:
            return reachable


def generate_wumpus(config, max_attempts=1000):
    """Sample a world for the given configuration. With `solvable` set,
    rejection-samples until the gold lies in the provably safe region."""
    rng = random.Random(config.seed)
    size = config.size
    cells = [(r, c) for r in range(1, size + 1) for c in range(1, size + 1)]
    start = (1, 1)
    for _ in range(max_attempts):
        gold = start
        while gold == start:
            gold = cells[rng.randrange(len(cells))]
        candidates = [c for c in cells if c != start and c != gold]
        threats = frozenset(rng.sample(candidates, config.threats))
        if not config.solvable or gold in provably_safe_cells(size, threats):
            return WumpusWorld(config, gold, threats)
    raise ValueError(
        f"no solvable {size}x{size} world with {config.threats} threats found "
        f"in {max_attempts} attempts (seed {config.seed})"
    )


class WumpusEnv:
    """Ground truth for one wumpus world.

    Moving is legal between grid neighbours. Walking into a threat cell is
    acknowledged (the world does not protect the agent) and kills: every
    later action or sensing attempt is rejected. grab succeeds exactly
    when the agent stands on the gold. perceiveSmell answers true when a
    grid neighbour of the agent's cell holds a threat.
    """

    def __init__(self, world):
        self.world = world
        self.position = world.start
        self.alive = True
        self.carrying = False
        self.log = []

    def _reject(self, action, why):
        raise EnvironmentRejected(f"wumpus world rejected {format_term(action)}: {why}")

    def execute(self, action):
        if not self.alive:
            self._reject(action, "the agent is dead")
        if action.functor == "go" and len(action.args) == 1:
            target = cell_coords(action.args[0])
            if target is None:
                self._reject(action, "not a board cell")
            if target not in _grid_neighbours(*self.position, self.world.size):
                self._reject(
                    action, f"not adjacent to c({self.position[0]},{self.position[1]})"
                )
            self.position = target
            self.log.append(action)
            if target in self.world.threats:
                self.alive = False
            return
        if action.functor == "grab" and not action.args:
            if self.carrying:
                self._reject(action, "the gold is already taken")
            if self.position != self.world.gold:
                self._reject(action, "no gold here")
            self.carrying = True
            self.log.append(action)
            return
        self._reject(action, "unknown action")

    def sense(self, functor):
        if functor != "perceiveSmell":
            raise EngineError(f"the wumpus world has no sensor named {functor}")
        if not self.alive:
            raise EnvironmentRejected("a dead agent senses nothing")
        smelly = any(
            nb in self.world.threats
            for nb in _grid_neighbours(*self.position, self.world.size)
        )
        return TRUE if smelly else FALSE

    def snapshot(self):
        return {
            "position": self.position,
            "alive": self.alive,
            "carrying": self.carrying,
            "gold": self.world.gold,
            "threats": set(self.world.threats),
            "log": tuple(self.log),
        }


def _smell_cases(size, threats_of):
    out = []
    for r in range(1, size + 1):
        for c in range(1, size + 1):
            nbs = [cell(*nb) for nb in _grid_neighbours(r, c, size)]
            here = f"[at(agent,{format_term(cell(r, c))})]"
            disj = ", ".join(f"threatAt({format_term(n)})" for n in nbs)
            units = ", ".join(f"-threatAt({format_term(n)})" for n in nbs)
            out.append(f"  case(true,  {here}, [[{disj}]]),")
            out.append(f"  case(false, {here}, [{units}]),")
    out[-1] = out[-1].rstrip(",")
    return out


def emit_wumpus_domain(world, variant):
    """Domain text for a generated world.

    `ground2` keeps the board wiring as auxiliary adj/2 facts; `ground3`
    writes it into the initial belief state as conn/2 fluent units, which
    the agent then reads back with `?(conn(X,Y))`.
    """
    if variant not in ("ground2", "ground3"):
        raise ValueError(f"unknown wumpus domain variant {variant!r}")
    size = world.size
    gold = cell(*world.gold)
    start = cell(*world.start)

    fluents = ["at/2", "threatAt/1", "carrying/0"]
    if variant == "ground3":
        fluents.append("conn/2")
    initial = [
        f"at(agent,{format_term(start)})",
        f"at(gold,{format_term(gold)})",
        f"-threatAt({format_term(start)})",
    ]
    wiring = []
    for r in range(1, size + 1):
        for c in range(1, size + 1):
            here = format_term(cell(r, c))
            for nb in _grid_neighbours(r, c, size):
                there = format_term(cell(*nb))
                if variant == "ground3":
                    initial.append(f"conn({here},{there})")
                else:
                    wiring.append(f"adj({here},{there}).")
    link = "conn(X,Y)" if variant == "ground3" else "adj(X,Y)"

    lines = [
        f"% {size}x{size} wumpus world, seed {world.config.seed}, {variant} wiring.",
        f"fluents([{', '.join(fluents)}]).",
        "actions([go/1, grab/0]).",
        "sensors([perceiveSmell]).",
        "",
        "initial_state([",
    ]
    lines.extend(f"  {entry}," for entry in initial[:-1])
    lines.append(f"  {initial[-1]}")
    lines.append("]).")
    lines.extend(
        [
            "",
            "action(go(Y),",
            f"  [at(agent,X), {link}],",
            "  [case([], [at(agent,Y), -at(agent,X)])]).",
            "",
            "action(grab,",
            "  [at(agent,X), at(gold,X)],",
            "  [case([], [carrying])]).",
            "",
            "sensor_axiom(perceiveSmell(_), [",
        ]
    )
    lines.extend(_smell_cases(size, world.threats))
    lines.append("]).")
    if wiring:
        lines.append("")
        lines.extend(wiring)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- replay


class ReplayEnv:
    """Deterministic playback of a recorded run. Actions must arrive in
    the recorded order; senses answer from the recording. Any deviation
    is rejected with a description of what was expected."""

    def __init__(self, events):
        self.events = tuple(events)
        self.cursor = 0
        self.log = []

    @classmethod
    def from_script(cls, text, filename="<script>"):
        from .parser import parse_ground_terms

        events = []
        for term in parse_ground_terms(text, filename):
            if term.functor == "did" and len(term.args) == 1:
                events.append(("act", term.args[0]))
            elif term.functor == "saw" and len(term.args) == 2:
                sensor = term.args[0]
                if sensor.args:
                    raise ValueError(
                        f"{filename}: sensor name must be a plain atom, "
                        f"not {format_term(sensor)}"
                    )
                events.append(("sense", sensor.functor, term.args[1]))
            else:
                raise ValueError(
                    f"{filename}: replay scripts contain did(Action) and "
                    f"saw(Sensor, Result) entries, not {format_term(term)}"
                )
        return cls(events)

    def _next(self):
        if self.cursor >= len(self.events):
            return None
        return self.events[self.cursor]

    def execute(self, action):
        expected = self._next()
        if (
            expected is None
            or expected[0] != "act"
            or expected[1].key != action.key
        ):
            if expected is None:
                want = "end of script"
            elif expected[0] == "sense":
                want = f"sense {expected[1]}"
            else:
                want = f"act {format_term(expected[1])}"
            raise EnvironmentRejected(
                f"replay script expected {want}, got action {format_term(action)}"
            )
        self.cursor += 1
        self.log.append(action)

    def sense(self, functor):
        expected = self._next()
        if expected is None or expected[0] != "sense" or expected[1] != functor:
            if expected is None:
                want = "end of script"
            elif expected[0] == "sense":
                want = f"sense {expected[1]}"
            else:
                want = f"act {format_term(expected[1])}"
            raise EnvironmentRejected(
                f"replay script expected {want}, got sense {functor}"
            )
        self.cursor += 1
        return expected[2]

    def snapshot(self):
        return {"cursor": self.cursor, "log": tuple(self.log)}


def format_replay_script(events):
    """Write an agent's event log in the replay script syntax."""
    lines = []
    for event in events:
        if event[0] == "act":
            lines.append(f"did({format_term(event[1])}).")
        elif event[0] == "sense":
            lines.append(f"saw({event[1]}, {format_term(event[2])}).")
        else:
            raise ValueError(f"unknown event kind {event[0]!r}")
    return "\n".join(lines) + ("\n" if lines else "")
