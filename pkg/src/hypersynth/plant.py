"""Plant data model, frame classification, and trace/lasso extraction.

A plant is a finite state graph whose transitions are partitioned into
controllable and uncontrollable sets, with a propositional labeling on
states.  Every state must have at least one outgoing transition, so every
maximal path is infinite and traces are infinite words over letters
(letter = set of proposition names).  Tree and acyclic frames only loop
via self-loops on terminal states, which makes their trace sets finite
and exactly representable as lassos with a one-letter loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Mapping

from .errors import (
    DanglingReference,
    DeadlockState,
    NotAcyclic,
    OverlappingEdge,
    PlantFormatError,
)

Edge = tuple[str, str]
Letter = frozenset[str]


class FrameKind(Enum):
    TREE = "tree"
    ACYCLIC = "acyclic"
    GENERAL = "general"


def _letter(props: Iterable[str]) -> Letter:
    return frozenset(props)


@dataclass(frozen=True)
class Plant:
    """Finite plant with controllable (c_edges) and uncontrollable (u_edges)
    transitions.  Instances are immutable; construction normalizes the field
    containers but does not validate, call :func:`validate` for that."""

    states: frozenset[str]
    init: str
    c_edges: frozenset[Edge]
    u_edges: frozenset[Edge]
    labeling: Mapping[str, Letter] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(
            self, "c_edges", frozenset((a, b) for a, b in self.c_edges)
        )
        object.__setattr__(
            self, "u_edges", frozenset((a, b) for a, b in self.u_edges)
        )
        # canonical form: states with the empty letter are simply absent
        labels = {
            s: letter
            for s, letter in (
                (s, _letter(ps)) for s, ps in dict(self.labeling).items()
            )
            if letter
        }
        object.__setattr__(self, "labeling", labels)

    @property
    def edges(self) -> frozenset[Edge]:
        return self.c_edges | self.u_edges

    def label(self, state: str) -> Letter:
        return self.labeling.get(state, frozenset())

    def successors(self, state: str) -> list[str]:
        return sorted(t for (s, t) in self.edges if s == state)

    def atomic_propositions(self) -> frozenset[str]:
        props: set[str] = set()
        for letter in self.labeling.values():
            props |= letter
        return frozenset(props)


def validate(plant: Plant) -> None:
    """Check the plant invariants; raises on the first violation.

    Raises:
        DanglingReference: init, an edge endpoint, or a labeling key is
            not a declared state.
        OverlappingEdge: an edge is both controllable and uncontrollable.
        DeadlockState: a state has no outgoing transition.
    """
    if plant.init not in plant.states:
        raise DanglingReference(plant.init)
    for a, b in sorted(plant.edges):
        if a not in plant.states:
            raise DanglingReference(a)
        if b not in plant.states:
            raise DanglingReference(b)
    for s in sorted(plant.labeling):
        if s not in plant.states:
            raise DanglingReference(s)
    overlap = plant.c_edges & plant.u_edges
    if overlap:
        raise OverlappingEdge(min(overlap))
    out = {s: 0 for s in plant.states}
    for a, _ in plant.edges:
        out[a] += 1
    for s in sorted(plant.states):
        if out[s] == 0:
            raise DeadlockState(s)


def _adjacency(plant: Plant) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {s: [] for s in plant.states}
    for a, b in plant.edges:
        adj[a].append(b)
    for lst in adj.values():
        lst.sort()
    return adj


def terminal_states(plant: Plant) -> frozenset[str]:
    """States whose only outgoing transition is a self-loop."""
    adj = _adjacency(plant)
    return frozenset(s for s, succ in adj.items() if succ == [s])


def classify_frame(plant: Plant) -> FrameKind:
    """Classify the frame as the most specific of tree, acyclic, general.

    Acyclic means the only loops are self-loops on terminal states.  Tree
    additionally requires a unique predecessor for every state except the
    root (terminal self-loops do not count as predecessors); the root must
    be the initial state.  A single state with a self-loop is a tree whose
    root and leaf coincide.
    """
    adj = _adjacency(plant)
    terminals = frozenset(s for s, succ in adj.items() if succ == [s])

    for s, succ in adj.items():
        if s in succ and s not in terminals:
            return FrameKind.GENERAL

    # Cycle check on the frame without terminal self-loops (Kahn).
    indeg = {s: 0 for s in plant.states}
    proper = [(a, b) for a, b in plant.edges if not (a == b and a in terminals)]
    for _, b in proper:
        indeg[b] += 1
    queue = [s for s in plant.states if indeg[s] == 0]
    seen = 0
    while queue:
        s = queue.pop()
        seen += 1
        for a, b in proper:
            if a == s:
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
    if seen != len(plant.states):
        return FrameKind.GENERAL

    preds: dict[str, int] = {s: 0 for s in plant.states}
    for a, b in proper:
        preds[b] += 1
    if preds[plant.init] != 0:
        return FrameKind.ACYCLIC
    if any(preds[s] != 1 for s in plant.states if s != plant.init):
        return FrameKind.ACYCLIC
    return FrameKind.TREE


@dataclass(frozen=True, eq=False)
class Lasso:
    """Ultimately periodic word stem . loop^omega, loop nonempty.

    Two lassos are semantically equal when they denote the same infinite
    word; :func:`canonical` computes the unique reduced representative
    (primitive loop, shortest stem), and equality of canonical forms is
    exactly word equality.  The hash is precomputed: lassos are used as
    dictionary keys on hot paths.
    """

    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(_letter(x) for x in self.stem))
        object.__setattr__(self, "loop", tuple(_letter(x) for x in self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be nonempty")
        object.__setattr__(self, "_hash", hash((self.stem, self.loop)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lasso):
            return NotImplemented
        return self.stem == other.stem and self.loop == other.loop

    def letter_at(self, i: int) -> Letter:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def prefix(self, n: int) -> tuple[Letter, ...]:
        return tuple(self.letter_at(i) for i in range(n))

    def suffix(self, n: int) -> "Lasso":
        """The lasso denoting positions n, n+1, ... of this word."""
        if n <= len(self.stem):
            return Lasso(self.stem[n:], self.loop)
        k = (n - len(self.stem)) % len(self.loop)
        return Lasso((), self.loop[k:] + self.loop[:k])

    def sort_key(self):
        return (
            tuple(tuple(sorted(l)) for l in self.stem),
            tuple(tuple(sorted(l)) for l in self.loop),
        )


def canonical(lasso: Lasso) -> Lasso:
    loop = list(lasso.loop)
    # primitive period of the loop
    n = len(loop)
    for p in range(1, n + 1):
        if n % p == 0 and loop == loop[:p] * (n // p):
            loop = loop[:p]
            break
    stem = list(lasso.stem)
    # absorb stem letters that merely pre-rotate the loop
    while stem and stem[-1] == loop[-1]:
        stem.pop()
        loop = [loop[-1]] + loop[:-1]
    return Lasso(tuple(stem), tuple(loop))


def lasso_equal(x: Lasso, y: Lasso) -> bool:
    """True iff x and y denote the same infinite word."""
    return canonical(x) == canonical(y)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def unroll_equal(x: Lasso, y: Lasso) -> bool:
    """Decide word equality by explicit unrolling; used to cross-check
    :func:`lasso_equal`.  From position max(|stems|) onward both words are
    periodic with period lcm(|loops|), so agreement on the prefix up to
    that horizon plus one full joint period decides equality."""
    s = max(len(x.stem), len(y.stem))
    p = _lcm(len(x.loop), len(y.loop))
    return x.prefix(s + p) == y.prefix(s + p)


def enumerate_traces(plant: Plant) -> frozenset[Lasso]:
    """The exact, finite trace set of a tree or acyclic plant.

    Every maximal path ends in a terminal self-loop, so each trace is a
    lasso with a one-letter loop.  Traces are words: paths with identical
    label sequences collapse.  Raises NotAcyclic on general frames.
    """
    if classify_frame(plant) is FrameKind.GENERAL:
        raise NotAcyclic()
    adj = _adjacency(plant)
    terminals = frozenset(s for s, succ in adj.items() if succ == [s])
    out: set[Lasso] = set()
    stack: list[tuple[str, tuple[Letter, ...]]] = [(plant.init, ())]
    while stack:
        state, labels = stack.pop()
        if state in terminals:
            out.add(canonical(Lasso(labels, (plant.label(state),))))
            continue
        for nxt in adj[state]:
            if nxt == state:
                continue  # cannot happen on non-terminals of acyclic frames
            stack.append((nxt, labels + (plant.label(state),)))
    return frozenset(out)


def enumerate_lassos(
    plant: Plant, stem_bound: int, loop_bound: int
) -> frozenset[Lasso]:
    """Bounded under-approximation of the trace set for arbitrary frames.

    Returns every word (as a canonical lasso) realizable by a walk from
    init of length <= stem_bound followed by a closed walk of length in
    [1, loop_bound] at the reached state.  For tree/acyclic frames with
    stem_bound >= |S| and loop_bound >= 1 this equals enumerate_traces.
    """
    if stem_bound < 0 or loop_bound < 1:
        raise ValueError("bounds must be nonnegative / positive")
    adj = _adjacency(plant)

    # walk prefixes up to the stem bound, deduplicated by (state, labels)
    stems: set[tuple[str, tuple[Letter, ...]]] = {(plant.init, ())}
    frontier = [(plant.init, ())]
    for _ in range(stem_bound):
        nxt_frontier = []
        for state, labels in frontier:
            step = labels + (plant.label(state),)
            for nxt in adj[state]:
                key = (nxt, step)
                if key not in stems:
                    stems.add(key)
                    nxt_frontier.append(key)
        frontier = nxt_frontier

    cycle_cache: dict[str, list[tuple[Letter, ...]]] = {}

    def cycles_at(anchor: str) -> list[tuple[Letter, ...]]:
        if anchor in cycle_cache:
            return cycle_cache[anchor]
        found: set[tuple[Letter, ...]] = set()
        seen: set[tuple[str, tuple[Letter, ...]]] = {(anchor, ())}
        walk = [(anchor, ())]
        for _ in range(loop_bound):
            nxt_walk = []
            for state, labels in walk:
                step = labels + (plant.label(state),)
                for nxt in adj[state]:
                    if nxt == anchor:
                        found.add(step)
                    key = (nxt, step)
                    if key not in seen:
                        seen.add(key)
                        nxt_walk.append(key)
            walk = nxt_walk
        cycle_cache[anchor] = sorted(found, key=lambda ls: tuple(map(sorted, ls)))
        return cycle_cache[anchor]

    out: set[Lasso] = set()
    for state, labels in stems:
        for loop in cycles_at(state):
            out.add(canonical(Lasso(labels, loop)))
    return frozenset(out)


def default_bounds(plant: Plant) -> tuple[int, int]:
    """Default lasso bounds for general frames: (|S|, |S|)."""
    n = len(plant.states)
    return (n, n)


# --- JSON interchange ----------------------------------------------------

_PLANT_KEYS = {"states", "init", "labels", "controllable", "uncontrollable"}


def plant_from_dict(data: dict) -> Plant:
    if not isinstance(data, dict):
        raise PlantFormatError("plant document must be a JSON object")
    unknown = set(data) - _PLANT_KEYS
    if unknown:
        raise PlantFormatError(f"unknown keys: {sorted(unknown)}")
    missing = _PLANT_KEYS - set(data)
    if missing:
        raise PlantFormatError(f"missing keys: {sorted(missing)}")
    states = data["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise PlantFormatError("states must be an array of strings")
    if not isinstance(data["init"], str):
        raise PlantFormatError("init must be a string")
    labels = data["labels"]
    if not isinstance(labels, dict):
        raise PlantFormatError("labels must be an object")
    for s, props in labels.items():
        if not isinstance(props, list) or not all(isinstance(p, str) for p in props):
            raise PlantFormatError(f"labels[{s!r}] must be an array of strings")

    def edges(key: str) -> list[Edge]:
        raw = data[key]
        if not isinstance(raw, list):
            raise PlantFormatError(f"{key} must be an array of [from, to] pairs")
        pairs = []
        for item in raw:
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not all(isinstance(x, str) for x in item)
            ):
                raise PlantFormatError(f"{key} entries must be [from, to] pairs")
            pairs.append((item[0], item[1]))
        return pairs

    return Plant(
        states=frozenset(states),
        init=data["init"],
        c_edges=frozenset(edges("controllable")),
        u_edges=frozenset(edges("uncontrollable")),
        labeling={s: frozenset(props) for s, props in labels.items()},
    )


def plant_to_dict(plant: Plant) -> dict:
    return {
        "states": sorted(plant.states),
        "init": plant.init,
        "labels": {s: sorted(plant.label(s)) for s in sorted(plant.states)},
        "controllable": [list(e) for e in sorted(plant.c_edges)],
        "uncontrollable": [list(e) for e in sorted(plant.u_edges)],
    }


def load_plant(text: str) -> Plant:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlantFormatError(f"invalid JSON: {exc}") from exc
    return plant_from_dict(data)


def dump_plant(plant: Plant) -> str:
    return json.dumps(plant_to_dict(plant), indent=2, sort_keys=True) + "\n"


def to_dot(plant: Plant) -> str:
    """Plain structural DOT dump; controllable edges solid, uncontrollable
    dashed.  No layout logic."""
    lines = ["digraph plant {"]
    for s in sorted(plant.states):
        props = ",".join(sorted(plant.label(s)))
        shape = ' shape="doublecircle"' if s == plant.init else ""
        lines.append(f'  "{s}" [label="{s}\\n{{{props}}}"{shape}];')
    for a, b in sorted(plant.c_edges):
        lines.append(f'  "{a}" -> "{b}";')
    for a, b in sorted(plant.u_edges):
        lines.append(f'  "{a}" -> "{b}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
