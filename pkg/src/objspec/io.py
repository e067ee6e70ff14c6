"""JSON encodings of environments, policies, reward machines and objectives.

Environment::

    {"states": [...], "actions": [...],
     "transition": {"s,a": [{"to": "s'", "p": 0.5}, ...]},
     "initial": [p_0, ..., p_{n-1}]}          # or {"s": p}

Every (state, action) row must be listed.  Policies are
``{state: {action: p}}`` or ``{state: action}``.  Reward tables are
``{"s,a,s'": value}`` with ``*`` wildcards (see
:func:`objspec.mdp_core.reward_from_mapping`).
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import objectives as O
from .errors import ValidationError
from .mdp_core import Environment, Policy, reward_from_mapping, validate_environment, validate_policy
from .objectives.preorders import ComparatorPreorder, Preorder
from .objectives.reward_machine import RewardMachine
from .objectives.wrappers import resolve_preorder, resolve_wrapper


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from exc


def _require(doc: Mapping, key: str, what: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise ValidationError(f"{what} is missing field {key!r}")
    return doc[key]


# --- environments and policies ------------------------------------------------


def environment_from_json(doc: Mapping) -> Environment:
    states = [str(s) for s in _require(doc, "states", "environment")]
    actions = [str(a) for a in _require(doc, "actions", "environment")]
    rows = _require(doc, "transition", "environment")
    n, a = len(states), len(actions)
    if n == 0 or a == 0:
        raise ValidationError("environment needs at least one state and one action")
    transition = np.zeros((n, a, n))
    seen = set()
    for key, entries in rows.items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2 or parts[0] not in states or parts[1] not in actions:
            raise ValidationError(f"transition key {key!r} must be 'state,action' over declared names")
        s, b = states.index(parts[0]), actions.index(parts[1])
        for entry in entries:
            target = str(_require(entry, "to", f"transition {key!r}"))
            if target not in states:
                raise ValidationError(f"transition {key!r} leads to unknown state {target!r}")
            transition[s, b, states.index(target)] += float(_require(entry, "p", f"transition {key!r}"))
        seen.add((s, b))
    missing = [f"{states[s]},{actions[b]}" for s in range(n) for b in range(a) if (s, b) not in seen]
    if missing:
        raise ValidationError(f"transition rows missing for {', '.join(missing)}")
    init = _require(doc, "initial", "environment")
    if isinstance(init, Mapping):
        initial = np.zeros(n)
        for state, p in init.items():
            if state not in states:
                raise ValidationError(f"initial distribution names unknown state {state!r}")
            initial[states.index(state)] = float(p)
    else:
        initial = np.asarray(init, dtype=float)
        if initial.shape != (n,):
            raise ValidationError(f"initial must list {n} probabilities")
    return validate_environment(Environment(tuple(states), tuple(actions), transition, initial))


def environment_to_json(env: Environment) -> dict:
    rows = {}
    for s, state in enumerate(env.states):
        for b, action in enumerate(env.actions):
            rows[f"{state},{action}"] = [{"to": env.states[t], "p": float(p)}
                                         for t, p in enumerate(env.transition[s, b]) if p > 0]
    return {"states": list(env.states), "actions": list(env.actions), "transition": rows,
            "initial": [float(p) for p in env.initial]}


def policy_from_json(env: Environment, doc: Mapping, name: str = "") -> Policy:
    if not isinstance(doc, Mapping):
        raise ValidationError("policy must be a JSON object {state: {action: p}}")
    doc = doc.get("policy", doc)
    unknown = [s for s in doc if s not in env.states]
    if unknown:
        raise ValidationError(f"policy names unknown states {unknown}")
    try:
        policy = Policy.from_mapping(env, doc, name=name)
    except ValueError as exc:
        raise ValidationError(f"policy: {exc}") from exc
    return validate_policy(env, policy)


def policy_to_json(env: Environment, policy: Policy) -> dict:
    return policy.to_mapping(env)


# --- reward machines ----------------------------------------------------------


def _matches(pattern, value: str) -> bool:
    return pattern == "*" or str(pattern) == value


def reward_machine_from_json(env: Environment, doc: Mapping) -> RewardMachine:
    """Machine from JSON; ``delta_u`` entries may use ``*`` and later entries win.

    ``delta_u`` must cover every (u, s, a, s'); ``delta_r`` entries are
    ``{"from": u, "to": u', "reward": {"s,a,s'": value}}``.
    """
    states = [str(u) for u in _require(doc, "machine_states", "reward machine")]
    start = str(_require(doc, "start", "reward machine"))
    if start not in states:
        raise ValidationError(f"start state {start!r} is not a machine state")
    delta_u = np.full((len(states),) + env.transition.shape, -1, dtype=np.int64)
    for entry in _require(doc, "delta_u", "reward machine"):
        target = str(_require(entry, "to", "delta_u entry"))
        if target not in states:
            raise ValidationError(f"delta_u leads to unknown machine state {target!r}")
        fields = [entry.get(k, "*") for k in ("u", "s", "a", "s'")]
        for u, uname in enumerate(states):
            if not _matches(fields[0], uname):
                continue
            for s, a, t in env.triples():
                if (_matches(fields[1], env.states[s]) and _matches(fields[2], env.actions[a])
                        and _matches(fields[3], env.states[t])):
                    delta_u[u, s, a, t] = states.index(target)
    if (delta_u < 0).any():
        u, s, a, t = (int(i) for i in np.argwhere(delta_u < 0)[0])
        raise ValidationError(f"delta_u undefined at ({states[u]}, {env.states[s]}, {env.actions[a]}, "
                              f"{env.states[t]})")
    delta_r = {}
    for entry in doc.get("delta_r", []):
        u, v = str(_require(entry, "from", "delta_r entry")), str(_require(entry, "to", "delta_r entry"))
        if u not in states or v not in states:
            raise ValidationError(f"delta_r names unknown machine states ({u}, {v})")
        delta_r[(states.index(u), states.index(v))] = reward_from_mapping(env, entry.get("reward", {}))
    gamma = float(_require(doc, "gamma", "reward machine"))
    machine = RewardMachine(tuple(states), states.index(start), delta_u, delta_r, gamma)
    # Fail early on reachable machine transitions without a reward table.
    O.compile_rm_product(env, machine)
    return machine


# --- objectives ---------------------------------------------------------------

VECTOR_WRAPPERS = {"sum": np.sum, "max": np.max, "min": np.min}


def _scalar_wrapper(name: str):
    f = resolve_wrapper(name)
    if isinstance(f, Preorder):
        raise ValidationError(f"{name!r} is a preorder, not a real-valued wrapper")
    return f


def _vector_wrapper(name: str):
    if name in VECTOR_WRAPPERS:
        fn = VECTOR_WRAPPERS[name]
        return lambda v: float(fn(v))
    raise ValidationError(f"vector wrapper must be one of {sorted(VECTOR_WRAPPERS)}, got {name!r}")


def _flat_lexicographic(name: str):
    pre = resolve_preorder(name)
    return ComparatorPreorder(lambda x, y: pre.compare(np.ravel(np.asarray(x)), np.ravel(np.asarray(y))))


def objective_from_json(env: Environment, doc: Mapping):
    """Objective specification from ``{"kind": ..., ...}``.

    Callback fields take built-in wrapper names.  ``{"kind": X, "embed": {...}}``
    embeds the nested objective into formalism X, which is how trajectory,
    lottery and policy formalisms are reached from configuration files.
    """
    kind = str(_require(doc, "kind", "objective")).upper()
    if kind not in {f.value for f in O.Formalism}:
        raise ValidationError(f"unknown objective kind {kind!r}")
    if "embed" in doc:
        source = objective_from_json(env, doc["embed"])
        path = O.embedding_path(source.formalism, O.Formalism(kind))
        if path is None:
            raise ValidationError(f"no embedding chain from {source.formalism} to {kind}")
        return O.embed_chain(source, path, env)

    def reward(key="reward"):
        return reward_from_mapping(env, _require(doc, key, f"{kind} objective"))

    def rewards():
        return [reward_from_mapping(env, r) for r in _require(doc, "rewards", f"{kind} objective")]

    def gamma():
        return float(_require(doc, "gamma", f"{kind} objective"))

    def wrapper():
        return _scalar_wrapper(str(doc.get("f", "identity")))

    if kind == "MR":
        return O.MR(reward(), gamma())
    if kind == "LAR":
        return O.LAR(reward())
    if kind == "LTL":
        return O.LTL(O.parse_formula(str(_require(doc, "formula", "LTL objective"))))
    if kind == "RM":
        return O.RM(reward_machine_from_json(env, doc.get("machine", doc)))
    if kind == "INMR":
        return O.INMR(reward(), wrapper(), gamma())
    if kind == "ONMR":
        return O.ONMR(reward(), wrapper(), gamma())
    if kind == "IMORL":
        return O.IMORL(rewards(), _vector_wrapper(str(doc.get("f", "sum"))), gamma())
    if kind == "OMORL":
        return O.OMORL(rewards(), _vector_wrapper(str(doc.get("f", "sum"))), gamma())
    if kind == "RRL":
        return O.RRL(reward(), float(_require(doc, "alpha", "RRL objective")),
                     _scalar_wrapper(str(_require(doc, "F", "RRL objective"))), gamma())
    if kind == "GOMORL":
        return O.GOMORL(rewards(), gamma(), resolve_preorder(str(doc.get("preorder", "lexicographic"))))
    if kind == "OMO":
        return O.OMO(gamma(), _flat_lexicographic(str(doc.get("preorder", "lexicographic"))))
    raise ValidationError(f"{kind} objectives are reached through {{\"kind\": \"{kind}\", \"embed\": ...}}")


def with_gamma(spec, gamma: float):
    """Copy of ``spec`` with its discount (and its machine's) replaced."""
    if isinstance(spec, O.RM):
        m = spec.machine
        return O.RM(RewardMachine(m.machine_states, m.start, m.delta_u, m.delta_r, gamma))
    if any(f.name == "gamma" for f in dataclasses.fields(spec)):
        return dataclasses.replace(spec, gamma=gamma)
    raise ValidationError(f"{spec.formalism} objectives have no discount to override")
