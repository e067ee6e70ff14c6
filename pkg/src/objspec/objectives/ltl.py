"""LTL over transition atoms: parser, fragment compiler and exact evaluation.

Atoms are ``(triple s a s')``, ``(state s)`` and ``(act a)``.  A state atom
holds on a transition that starts or ends in that state; an action atom
holds on a transition taking that action.

The compiler accepts boolean combinations of *leaves*, where a leaf is a
local formula ``g`` (booleans and ``next`` over atoms), or ``eventually g``,
``always g`` or ``until g h`` with local ``g`` and ``h``.  Each leaf becomes
a small monitor with a status (pending, true, false); the product monitor
is minimised and given Reach, Safe or CoBuchi acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ..errors import UnsupportedFragment, ValidationError
from ..mdp_core import Environment, Policy, chain_decomposition, check_policy_shape
from ..trajectory import Lasso

# --- syntax -----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    kind: str  # "state", "act" or "triple"
    names: tuple

    def holds(self, s: str, a: str, t: str) -> bool:
        if self.kind == "state":
            return self.names[0] in (s, t)
        if self.kind == "act":
            return self.names[0] == a
        return self.names == (s, a, t)

    def __str__(self):
        return f"({self.kind} {' '.join(self.names)})"


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Op:
    name: str  # not and or implies next eventually always until
    args: tuple

    def __str__(self):
        return f"({self.name} {' '.join(str(a) for a in self.args)})"


Formula = Union[Atom, Const, Op]

_ARITY = {"not": 1, "next": 1, "eventually": 1, "always": 1, "implies": 2, "until": 2}
_ALIASES = {"!": "not", "X": "next", "F": "eventually", "G": "always", "U": "until",
            "->": "implies", "&": "and", "|": "or", "action": "act"}
TEMPORAL = {"eventually", "always", "until"}


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_formula(text: str) -> Formula:
    """Parse s-expression text such as ``(and (eventually (act a_A)) (eventually (act a_B)))``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValidationError("empty formula")
    pos = 0

    def parse() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise ValidationError("unexpected end of formula")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ValidationError("unexpected ')'")
        if tok != "(":
            if tok in ("true", "false"):
                return Const(tok == "true")
            raise ValidationError(f"bare symbol {tok!r}; atoms are written (state s), (act a) or (triple s a s')")
        if pos >= len(tokens):
            raise ValidationError("unexpected end of formula")
        head = _ALIASES.get(tokens[pos], tokens[pos])
        pos += 1
        if head in ("state", "act", "triple"):
            want = 3 if head == "triple" else 1
            names = tuple(tokens[pos:pos + want])
            if len(names) != want or any(n in "()" for n in names):
                raise ValidationError(f"malformed ({head} ...) atom")
            pos += want
            node: Formula = Atom(head, names)
        else:
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(parse())
            if head not in _ARITY and head not in ("and", "or"):
                raise ValidationError(f"unknown operator {head!r}")
            if head in _ARITY and len(args) != _ARITY[head]:
                raise ValidationError(f"{head} takes {_ARITY[head]} argument(s), got {len(args)}")
            if head in ("and", "or") and not args:
                raise ValidationError(f"{head} needs at least one argument")
            node = Op(head, tuple(args))
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValidationError("missing ')'")
        pos += 1
        return node

    node = parse()
    if pos != len(tokens):
        raise ValidationError("trailing tokens after formula")
    return node


def atoms_of(formula: Formula) -> list[Atom]:
    out: list[Atom] = []

    def visit(node):
        if isinstance(node, Atom):
            if node not in out:
                out.append(node)
        elif isinstance(node, Op):
            for arg in node.args:
                visit(arg)

    visit(formula)
    return out


def _is_local(node: Formula) -> bool:
    if isinstance(node, (Atom, Const)):
        return True
    return node.name not in TEMPORAL and all(_is_local(a) for a in node.args)


def _depth(node: Formula) -> int:
    if isinstance(node, (Atom, Const)):
        return 0
    inner = max(_depth(a) for a in node.args)
    return inner + 1 if node.name == "next" else inner


def _eval_local(node: Formula, window: Sequence[tuple], atom_pos: dict, t: int = 0) -> bool:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Atom):
        return window[t][atom_pos[node]]
    name, args = node.name, node.args
    if name == "not":
        return not _eval_local(args[0], window, atom_pos, t)
    if name == "and":
        return all(_eval_local(a, window, atom_pos, t) for a in args)
    if name == "or":
        return any(_eval_local(a, window, atom_pos, t) for a in args)
    if name == "implies":
        return (not _eval_local(args[0], window, atom_pos, t)) or _eval_local(args[1], window, atom_pos, t)
    if name == "next":
        return _eval_local(args[0], window, atom_pos, t + 1)
    raise UnsupportedFragment(f"temporal operator {name} inside a local formula")


# --- monitors ---------------------------------------------------------------

ACCEPTANCE_KINDS = ("Reach", "Safe", "Buchi", "CoBuchi")


def alphabet(atoms: Sequence[Atom]) -> tuple[tuple[bool, ...], ...]:
    """Atom valuations realisable by some transition of some environment."""
    states = sorted({n for at in atoms if at.kind == "state" for n in at.names}
                    | {at.names[0] for at in atoms if at.kind == "triple"}
                    | {at.names[2] for at in atoms if at.kind == "triple"})
    actions = sorted({at.names[0] for at in atoms if at.kind == "act"}
                     | {at.names[1] for at in atoms if at.kind == "triple"})
    other = "\0other"
    letters: list[tuple[bool, ...]] = []
    for s in states + [other]:
        for a in actions + [other]:
            for t in states + [other]:
                val = tuple(at.holds(s, a, t) for at in atoms)
                if val not in letters:
                    letters.append(val)
    return tuple(letters)


@dataclass(frozen=True, eq=False)
class DeterministicMonitor:
    """Deterministic automaton reading one letter per environment transition.

    ``letters`` lists atom valuations; ``delta[q, l]`` is the successor of
    monitor state ``q`` on letter ``l``.  ``accepting`` is the Reach target,
    the Safe allowed set, the Buchi accepting set or the CoBuchi rejected set.
    """

    atoms: tuple
    letters: tuple
    delta: np.ndarray
    start: int
    acceptance: str
    accepting: frozenset

    def __post_init__(self):
        delta = np.array(self.delta, dtype=np.int64)
        if delta.ndim != 2 or delta.shape[1] != len(self.letters):
            raise ValidationError("delta must have shape [states × letters]")
        if delta.size and (delta.min() < 0 or delta.max() >= delta.shape[0]):
            raise ValidationError("delta refers to an unknown monitor state")
        if self.acceptance not in ACCEPTANCE_KINDS:
            raise ValidationError(f"acceptance must be one of {ACCEPTANCE_KINDS}")
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "letters", tuple(tuple(bool(v) for v in l) for l in self.letters))
        object.__setattr__(self, "accepting", frozenset(int(q) for q in self.accepting))

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def letter_table(self, env: Environment) -> np.ndarray:
        """Letter index of every environment triple."""
        names_s, names_a = set(env.states), set(env.actions)
        for at in self.atoms:
            if at.kind == "state" and at.names[0] not in names_s:
                raise ValidationError(f"atom {at} names an unknown state")
            if at.kind == "act" and at.names[0] not in names_a:
                raise ValidationError(f"atom {at} names an unknown action")
            if at.kind == "triple" and (at.names[0] not in names_s or at.names[1] not in names_a
                                        or at.names[2] not in names_s):
                raise ValidationError(f"atom {at} names an unknown triple")
        lookup = {l: i for i, l in enumerate(self.letters)}
        table = np.zeros(env.transition.shape, dtype=np.int64)
        for s, a, t in env.triples():
            val = tuple(at.holds(env.states[s], env.actions[a], env.states[t]) for at in self.atoms)
            if val not in lookup:
                raise ValidationError(f"monitor has no letter for transition {env.triple_name((s, a, t))}")
            table[s, a, t] = lookup[val]
        return table

    def accepts(self, visited_stem: Iterable[int], cycle_states: Iterable[int]) -> bool:
        """Acceptance of a run given its transient states and its recurring states."""
        stem, cycle = set(visited_stem), set(cycle_states)
        if self.acceptance == "Reach":
            return bool((stem | cycle) & self.accepting)
        if self.acceptance == "Safe":
            return (stem | cycle) <= self.accepting
        if self.acceptance == "Buchi":
            return bool(cycle & self.accepting)
        return not (cycle & self.accepting)

    def accepts_lasso(self, env: Environment, lasso: Lasso) -> bool:
        letters = self.letter_table(env)
        run = lasso.run(lambda q, x: int(self.delta[q, letters[x]]), self.start)
        stem = [self.start] + [v for _, _, v in run.stem]
        cycle = [v for _, _, v in run.cycle]
        return self.accepts(stem, cycle)


_PENDING, _TRUE, _FALSE = 0, 1, 2
_LIMIT = {"init": False, "eventually": False, "always": True, "until": False}


def _split_top(node: Formula, leaves: list) -> tuple:
    """Boolean skeleton over leaf indices."""
    if _is_local(node):
        leaves.append(("init", node))
        return ("leaf", len(leaves) - 1)
    name, args = node.name, node.args
    if name in ("eventually", "always") and _is_local(args[0]):
        leaves.append((name, args[0]))
        return ("leaf", len(leaves) - 1)
    if name == "until" and _is_local(args[0]) and _is_local(args[1]):
        leaves.append(("until", args[0], args[1]))
        return ("leaf", len(leaves) - 1)
    if name in ("not", "and", "or", "implies"):
        return (name,) + tuple(_split_top(a, leaves) for a in args)
    raise UnsupportedFragment(f"{node} is outside the supported fragment; supply a DeterministicMonitor instead")


def _eval_skeleton(sk: tuple, values: Sequence[bool]) -> bool:
    kind = sk[0]
    if kind == "leaf":
        return values[sk[1]]
    parts = [_eval_skeleton(s, values) for s in sk[1:]]
    if kind == "not":
        return not parts[0]
    if kind == "and":
        return all(parts)
    if kind == "or":
        return any(parts)
    return (not parts[0]) or parts[1]


def _minimise(delta: np.ndarray, labels: Sequence[bool], start: int) -> tuple[np.ndarray, list, int]:
    block = [int(b) for b in labels]
    while True:
        sig = {}
        new = []
        for q in range(len(block)):
            key = (block[q],) + tuple(block[r] for r in delta[q])
            new.append(sig.setdefault(key, len(sig)))
        if len(set(new)) == len(set(block)):
            break
        block = new
    # Renumber blocks in order of discovery from the start state.
    order: dict[int, int] = {}
    queue = [start]
    order[block[start]] = 0
    while queue:
        q = queue.pop(0)
        for r in delta[q]:
            if block[r] not in order:
                order[block[r]] = len(order)
                queue.append(int(r))
    k = len(order)
    out = np.zeros((k, delta.shape[1]), dtype=np.int64)
    out_labels = [False] * k
    for q in range(len(block)):
        if block[q] in order:
            i = order[block[q]]
            out[i] = [order[block[r]] for r in delta[q]]
            out_labels[i] = bool(labels[q])
    return out, out_labels, 0


def compile_ltl(formula: Formula | str) -> DeterministicMonitor:
    """Compile a fragment formula into a minimal deterministic monitor."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    leaves: list = []
    skeleton = _split_top(formula, leaves)
    atoms = atoms_of(formula)
    atom_pos = {at: i for i, at in enumerate(atoms)}
    letters = alphabet(atoms)
    depths = [max(_depth(x) for x in leaf[1:]) for leaf in leaves]
    horizon = max(depths)

    def successor(state, letter):
        buffer, count, status = state
        window = buffer + (letter,)
        count = min(count + 1, horizon + 1)
        status = list(status)
        for i, leaf in enumerate(leaves):
            d = depths[i]
            if status[i] != _PENDING or count < d + 1:
                continue
            view = [letters[l] for l in window[-(d + 1):]]
            kind = leaf[0]
            if kind == "init":
                status[i] = _TRUE if _eval_local(leaf[1], view, atom_pos) else _FALSE
            elif kind == "eventually":
                if _eval_local(leaf[1], view, atom_pos):
                    status[i] = _TRUE
            elif kind == "always":
                if not _eval_local(leaf[1], view, atom_pos):
                    status[i] = _FALSE
            else:
                if _eval_local(leaf[2], view, atom_pos):
                    status[i] = _TRUE
                elif not _eval_local(leaf[1], view, atom_pos):
                    status[i] = _FALSE
        if _PENDING not in status:
            return ((), horizon + 1, tuple(status))
        return (window[-horizon:] if horizon else (), count, tuple(status))

    def verdict(state):
        values = [st == _TRUE if st != _PENDING else _LIMIT[leaf[0]]
                  for st, leaf in zip(state[2], leaves)]
        return _eval_skeleton(skeleton, values)

    start_state = ((), 0, (_PENDING,) * len(leaves))
    index = {start_state: 0}
    states = [start_state]
    rows = []
    i = 0
    while i < len(states):
        row = []
        for l in range(len(letters)):
            nxt = successor(states[i], l)
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            row.append(index[nxt])
        rows.append(row)
        i += 1
    delta, labels, start = _minimise(np.array(rows, dtype=np.int64), [verdict(s) for s in states], 0)

    good = {q for q, ok in enumerate(labels) if ok}
    bad = set(range(len(labels))) - good
    closed = lambda group: all(int(r) in group for q in group for r in delta[q])
    if closed(good):
        acceptance, accepting = "Reach", good
    elif closed(bad):
        acceptance, accepting = "Safe", good
    else:
        acceptance, accepting = "CoBuchi", bad
    return DeterministicMonitor(tuple(atoms), letters, delta, start, acceptance, frozenset(accepting))


def as_monitor(formula_or_monitor) -> DeterministicMonitor:
    if isinstance(formula_or_monitor, DeterministicMonitor):
        return formula_or_monitor
    return compile_ltl(formula_or_monitor)


def eval_ltl(env: Environment, policy: Policy, formula_or_monitor) -> float:
    """Exact probability that a trajectory satisfies the formula."""
    check_policy_shape(env, policy)
    monitor = as_monitor(formula_or_monitor)
    letters = monitor.letter_table(env)
    step = policy.action_probs[:, :, None] * env.transition

    index: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    starts = [int(s) for s in np.flatnonzero(env.initial > 0)]
    queue = []
    for s in starts:
        key = (s, monitor.start)
        if key not in index:
            index[key] = len(pairs)
            pairs.append(key)
            queue.append(key)
    entries = []
    while queue:
        s, q = queue.pop(0)
        i = index[(s, q)]
        for a, t in zip(*np.nonzero(step[s])):
            key = (int(t), int(monitor.delta[q, letters[s, a, t]]))
            if key not in index:
                index[key] = len(pairs)
                pairs.append(key)
                queue.append(key)
            entries.append((i, index[key], step[s, a, t]))
    m = len(pairs)
    chain = np.zeros((m, m))
    for i, j, p in entries:
        chain[i, j] += p
    in_set = np.array([q in monitor.accepting for _, q in pairs])

    kind = monitor.acceptance
    if kind in ("Reach", "Safe"):
        stop = in_set if kind == "Reach" else ~in_set
        chain[stop] = 0.0
        chain[stop, np.flatnonzero(stop)] = 1.0
    decomposition = chain_decomposition(chain)
    good_class = []
    for members in decomposition.classes:
        hits = in_set[list(members)]
        if kind in ("Reach", "Safe"):
            good_class.append(bool(hits.all()))
        elif kind == "Buchi":
            good_class.append(bool(hits.any()))
        else:
            good_class.append(not hits.any())
    accept = decomposition.absorption[:, good_class].sum(axis=1)
    value = sum(env.initial[s] * accept[index[(s, monitor.start)]] for s in starts)
    return float(min(max(value, 0.0), 1.0))
