"""Synthesis engine: decide whether the controllable transitions of a
plant can be restricted so the pruned plant satisfies a closed formula,
and produce a witness controller.

Three routes:

* synth_generic - guess-and-check over the valid candidate space, in
  decreasing retained-edge order (the full plant first, so existential
  formulas are settled by a single model-checking call and the returned
  witness is maximally permissive).  For purely universal prefixes a
  failed candidate yields a falsifying trace tuple, and any later
  candidate whose trace set contains that tuple is skipped without
  re-evaluation.
* synth_tree_exists_forall - trees with an E*A prefix: enumerate
  existential witness tuples from the full plant's trace set, then decide
  bottom-up which subtrees can be kept (nodes with an uncontrollable
  out-edge need every uncontrollable child to succeed; all-controllable
  nodes need some child).
* synth_tree_marking - trees with an AE* prefix: mark all leaves, then
  repeatedly unmark leaves whose universal instantiation has no
  existential witnesses among the marked leaves; on stabilization prune
  to the marked branches, re-checking that uncontrollable transitions do
  not force unmarked leaves back in.

dispatch() routes to the specialized algorithm when frame and fragment
match, otherwise to synth_generic.  Tree/acyclic verdicts are exact;
general frames are checked against bounded lasso enumeration and marked
not exact (Realizable with a bounded certificate, BoundedUnknown instead
of Unrealizable).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from math import log2
from typing import Iterator, Optional

from .errors import (
    CandidateSpaceExceeded,
    DeadlockIntroduced,
    FragmentMismatch,
    FrameMismatch,
    SynthesisError,
)
from .formula import (
    Formula,
    FragmentKind,
    Quantifier,
    classify_fragment,
)
from .plant import (
    Edge,
    FrameKind,
    Lasso,
    Plant,
    canonical,
    classify_frame,
    default_bounds,
    enumerate_lassos,
    validate,
)
from .semantics import (
    DEFAULT_HORIZON,
    eval_body,
    eval_quantified,
    eval_quantified_witness,
)

DEFAULT_MAX_CANDIDATE_BITS = 24


@dataclass(frozen=True)
class ControllerSolution:
    """Retained subset of the plant's controllable edges."""

    retained: frozenset[Edge]

    def __post_init__(self):
        object.__setattr__(
            self, "retained", frozenset((a, b) for a, b in self.retained)
        )


class Verdict(Enum):
    REALIZABLE = "realizable"
    UNREALIZABLE = "unrealizable"
    BOUNDED_UNKNOWN = "bounded-unknown"


@dataclass(frozen=True)
class SynthesisResult:
    verdict: Verdict
    solution: Optional[ControllerSolution]
    exact: bool

    @property
    def realizable(self) -> bool:
        return self.verdict is Verdict.REALIZABLE


def apply_solution(plant: Plant, sol: ControllerSolution) -> Plant:
    """Prune the plant to the retained controllable edges.

    States, init, labeling, and uncontrollable edges are unchanged.
    Raises DeadlockIntroduced if some state loses its last outgoing edge,
    and SynthesisError if retained is not a subset of the plant's
    controllable edges.
    """
    if not sol.retained <= plant.c_edges:
        extra = min(sol.retained - plant.c_edges)
        raise SynthesisError(f"retained edge {extra!r} is not controllable")
    pruned = Plant(
        states=plant.states,
        init=plant.init,
        c_edges=sol.retained,
        u_edges=plant.u_edges,
        labeling=plant.labeling,
    )
    out = {s: 0 for s in pruned.states}
    for a, _ in pruned.edges:
        out[a] += 1
    for s in sorted(pruned.states):
        if out[s] == 0:
            raise DeadlockIntroduced(s)
    return pruned


# --- candidate enumeration --------------------------------------------------


def _choice_points(plant: Plant) -> list[tuple[str, list[Edge], bool]]:
    """Per state: its controllable out-edges (sorted) and whether it also
    has an uncontrollable out-edge.  Only states with controllable
    out-edges are choice points."""
    c_out: dict[str, list[Edge]] = {}
    for a, b in sorted(plant.c_edges):
        c_out.setdefault(a, []).append((a, b))
    has_u = {a for a, _ in plant.u_edges}
    return [(s, edges, s in has_u) for s, edges in sorted(c_out.items())]


def candidate_space_bits(plant: Plant) -> float:
    """log2 of the number of deadlock-free retained-edge subsets."""
    bits = 0.0
    for _, edges, has_u in _choice_points(plant):
        count = 2 ** len(edges) if has_u else 2 ** len(edges) - 1
        bits += log2(count)
    return bits


def _removals(plant: Plant) -> Iterator[frozenset[Edge]]:
    """All edge-removal sets that keep every state deadlock-free, in
    increasing order of removal count (hence decreasing retained size),
    deterministic within each size."""
    points = _choice_points(plant)
    buckets: list[list[list[frozenset[Edge]]]] = []
    for _, edges, has_u in points:
        max_k = len(edges) if has_u else len(edges) - 1
        buckets.append(
            [[frozenset(c) for c in combinations(edges, k)] for k in range(max_k + 1)]
        )

    def rec(idx: int, remaining: int) -> Iterator[tuple[frozenset[Edge], ...]]:
        if idx == len(points):
            if remaining == 0:
                yield ()
            return
        for k in range(min(remaining, len(buckets[idx]) - 1) + 1):
            for combo in buckets[idx][k]:
                for rest in rec(idx + 1, remaining - k):
                    yield (combo,) + rest

    total_max = sum(len(b) - 1 for b in buckets)
    for size in range(total_max + 1):
        for parts in rec(0, size):
            yield frozenset().union(*parts) if parts else frozenset()


def _exact_path_table(plant: Plant) -> list[tuple[frozenset[Edge], Lasso]]:
    """For tree/acyclic frames: every maximal path with the controllable
    edges it crosses and its trace.  Pruning never rewrites a surviving
    path, so a candidate's trace set is exactly the lassos of the paths
    whose controllable edges are all retained."""
    adj: dict[str, list[str]] = {s: [] for s in plant.states}
    for a, b in sorted(plant.edges):
        adj[a].append(b)
    terminals = {s for s, succ in adj.items() if succ == [s]}
    out: list[tuple[frozenset[Edge], Lasso]] = []
    stack: list[tuple[str, tuple, frozenset[Edge]]] = [
        (plant.init, (), frozenset())
    ]
    while stack:
        state, labels, used = stack.pop()
        if state in terminals:
            loop_edge = (state, state)
            if loop_edge in plant.c_edges:
                used = used | {loop_edge}
            out.append((used, canonical(Lasso(labels, (plant.label(state),)))))
            continue
        here = labels + (plant.label(state),)
        for nxt in adj[state]:
            if nxt == state:
                continue
            edge = (state, nxt)
            nxt_used = used | {edge} if edge in plant.c_edges else used
            stack.append((nxt, here, nxt_used))
    return out


def synth_generic(
    plant: Plant,
    f: Formula,
    bounds: Optional[tuple[int, int]] = None,
    max_candidate_bits: Optional[int] = DEFAULT_MAX_CANDIDATE_BITS,
    horizon: int = DEFAULT_HORIZON,
) -> SynthesisResult:
    """Candidate search realizing the guess-and-check membership bound.

    Searches valid prunings in decreasing retained-set size; the first
    passing candidate (which is the most permissive one) wins.  For
    existential prefixes only the full plant is relevant: pruning shrinks
    the trace set, which can never help an E* formula.  The candidate
    space guard refuses searches beyond 2**max_candidate_bits candidates
    (pass None to disable).
    """
    validate(plant)
    frame = classify_frame(plant)
    exact = frame is not FrameKind.GENERAL
    fragment = classify_fragment(f)
    purely_universal = all(q is Quantifier.FORALL for q, _ in f.prefix)

    if exact:
        paths = _exact_path_table(plant)

        def trace_set(retained: frozenset[Edge]) -> frozenset[Lasso]:
            return frozenset(
                lasso for used, lasso in paths if used <= retained
            )

    else:
        lasso_bounds = bounds if bounds is not None else default_bounds(plant)

        def trace_set(retained: frozenset[Edge]) -> frozenset[Lasso]:
            pruned = Plant(
                plant.states, plant.init, retained, plant.u_edges, plant.labeling
            )
            return enumerate_lassos(pruned, *lasso_bounds)

    existential_only = fragment.kind is FragmentKind.E_STAR
    if not existential_only and max_candidate_bits is not None:
        bits = candidate_space_bits(plant)
        if bits > max_candidate_bits:
            raise CandidateSpaceExceeded(bits, max_candidate_bits)

    cache: dict = {}
    cores: list[frozenset[Lasso]] = []
    first = True
    for removed in _removals(plant):
        retained = plant.c_edges - removed
        traces = trace_set(retained)
        if purely_universal and any(core <= traces for core in cores):
            ok = False
        elif purely_universal:
            ok, witness = eval_quantified_witness(f, traces, horizon, cache)
            if not ok and witness is not None:
                cores.append(frozenset(witness))
        else:
            ok = eval_quantified(f, traces, horizon, cache)
        if ok:
            return SynthesisResult(
                Verdict.REALIZABLE, ControllerSolution(retained), exact
            )
        if first and existential_only:
            break  # smaller trace sets cannot satisfy an existential formula
        first = False
    if exact:
        return SynthesisResult(Verdict.UNREALIZABLE, None, True)
    return SynthesisResult(Verdict.BOUNDED_UNKNOWN, None, False)


# --- tree structure ----------------------------------------------------------


@dataclass
class _TreeIndex:
    root: str
    u_children: dict[str, list[str]]
    c_children: dict[str, list[str]]  # terminal self-loops excluded
    terminals: frozenset[str]
    leaf_trace: dict[str, Lasso]  # canonical trace per terminal state


def _tree_index(plant: Plant) -> _TreeIndex:
    succ_u: dict[str, list[str]] = {s: [] for s in plant.states}
    succ_c: dict[str, list[str]] = {s: [] for s in plant.states}
    for a, b in sorted(plant.u_edges):
        succ_u[a].append(b)
    for a, b in sorted(plant.c_edges):
        succ_c[a].append(b)
    terminals = frozenset(
        s for s in plant.states if succ_u[s] + succ_c[s] == [s]
    )
    leaf_trace: dict[str, Lasso] = {}
    stack: list[tuple[str, tuple]] = [(plant.init, ())]
    while stack:
        state, labels = stack.pop()
        if state in terminals:
            leaf_trace[state] = canonical(Lasso(labels, (plant.label(state),)))
            continue
        here = labels + (plant.label(state),)
        for nxt in succ_u[state] + succ_c[state]:
            if nxt != state:
                stack.append((nxt, here))
    c_children = {s: [t for t in succ_c[s] if t != s] for s in plant.states}
    u_children = {s: [t for t in succ_u[s] if t != s] for s in plant.states}
    return _TreeIndex(plant.init, u_children, c_children, terminals, leaf_trace)


def _keepable_fn(idx: _TreeIndex, leaf_ok):
    """Memoized bottom-up feasibility: a subtree can be kept iff it can be
    pruned so that every remaining leaf passes leaf_ok.  With
    uncontrollable children all of them must succeed; with only
    controllable children some child must."""
    memo: dict[str, bool] = {}

    def rec(s: str) -> bool:
        got = memo.get(s)
        if got is not None:
            return got
        if s in idx.terminals:
            result = leaf_ok(idx.leaf_trace[s])
        elif idx.u_children[s]:
            result = all(rec(c) for c in idx.u_children[s])
        else:
            result = any(rec(c) for c in idx.c_children[s])
        memo[s] = result
        return result

    return rec


def _kept_states(idx: _TreeIndex, keepable) -> set[str]:
    """States reachable when every keepable controllable child is retained
    (maximally permissive pruning)."""
    kept: set[str] = set()
    stack = [idx.root]
    while stack:
        s = stack.pop()
        if s in kept:
            continue
        kept.add(s)
        if s in idx.terminals:
            continue
        for c in idx.u_children[s]:
            stack.append(c)
        for c in idx.c_children[s]:
            if keepable(c):
                stack.append(c)
    return kept


def _retained_for(
    plant: Plant, idx: _TreeIndex, keepable, kept: set[str]
) -> frozenset[Edge]:
    """Maximal retained edge set for the kept subtree: keep everything at
    unreachable states (totality), terminal self-loops, and controllable
    edges into keepable subtrees."""
    retained: set[Edge] = set()
    for a, b in plant.c_edges:
        if a not in kept:
            retained.add((a, b))
        elif a == b and a in idx.terminals:
            retained.add((a, b))
        elif b != a and keepable(b):
            retained.add((a, b))
    return frozenset(retained)


# --- specialized tree algorithms ----------------------------------------------


def synth_tree_exists_forall(
    plant: Plant, f: Formula, horizon: int = DEFAULT_HORIZON
) -> SynthesisResult:
    """Trees, prefix E*A (existentials then exactly one universal).

    Enumerates assignments of the existential variables over the full
    plant's traces.  An assignment is first rejected when handing one of
    its own traces to the universal variable already violates the body.
    The tree is then evaluated bottom-up to find the maximal pruning whose
    remaining leaves all satisfy the body; the assignment succeeds when
    the root survives and every existential witness trace is still
    present.
    """
    frame = classify_frame(plant)
    if frame is not FrameKind.TREE:
        raise FrameMismatch("tree", frame.value)
    fragment = classify_fragment(f)
    if fragment.kind is not FragmentKind.E_STAR_A:
        raise FragmentMismatch("E*A", str(fragment))
    idx = _tree_index(plant)
    traces = sorted(set(idx.leaf_trace.values()), key=Lasso.sort_key)
    names = f.variables
    evars, uvar = names[:-1], names[-1]

    for witness in product(traces, repeat=len(evars)):
        base = dict(zip(evars, witness))
        good_memo: dict[Lasso, bool] = {}

        def good(tr: Lasso) -> bool:
            got = good_memo.get(tr)
            if got is None:
                got = eval_body(f.body, {**base, uvar: tr}, horizon)
                good_memo[tr] = got
            return got

        if not all(good(t) for t in set(witness)):
            continue
        keepable = _keepable_fn(idx, good)
        if not keepable(idx.root):
            continue
        kept = _kept_states(idx, keepable)
        kept_traces = {idx.leaf_trace[s] for s in kept if s in idx.terminals}
        if not all(t in kept_traces for t in witness):
            continue
        retained = _retained_for(plant, idx, keepable, kept)
        return SynthesisResult(Verdict.REALIZABLE, ControllerSolution(retained), True)
    return SynthesisResult(Verdict.UNREALIZABLE, None, True)


def synth_tree_marking(
    plant: Plant, f: Formula, horizon: int = DEFAULT_HORIZON
) -> SynthesisResult:
    """Trees, prefix AE* (one universal then existentials): marking
    algorithm.

    All leaves start marked.  Rounds unmark every leaf whose trace, fed to
    the universal variable, has no satisfying joint instantiation of the
    existential variables by marked-leaf traces; the rounds stop at a
    fixed point.  Pruning then keeps the branches of marked leaves; if
    uncontrollable transitions force an unmarked leaf to survive (or force
    a subtree that cannot reach any marked leaf), the surviving leaf set
    shrinks and the marking rounds rerun on it, until the marked set and
    the realizable leaf set coincide (Realizable) or no leaf survives
    (Unrealizable).
    """
    frame = classify_frame(plant)
    if frame is not FrameKind.TREE:
        raise FrameMismatch("tree", frame.value)
    fragment = classify_fragment(f)
    if fragment.kind is not FragmentKind.A_E_STAR:
        raise FragmentMismatch("AE*", str(fragment))
    idx = _tree_index(plant)
    names = f.variables
    uvar, evars = names[0], names[1:]
    body_memo: dict[tuple, bool] = {}

    def holds(utrace: Lasso, etuple: tuple[Lasso, ...]) -> bool:
        key = (utrace, etuple)
        got = body_memo.get(key)
        if got is None:
            asg = {uvar: utrace, **dict(zip(evars, etuple))}
            got = eval_body(f.body, asg, horizon)
            body_memo[key] = got
        return got

    marked = sorted(set(idx.leaf_trace.values()), key=Lasso.sort_key)
    while True:
        # marking rounds: greatest set of traces that support each other
        while True:
            survivors = [
                t
                for t in marked
                if any(holds(t, e) for e in product(marked, repeat=len(evars)))
            ]
            if survivors == marked:
                break
            marked = survivors
        if not marked:
            return SynthesisResult(Verdict.UNREALIZABLE, None, True)
        marked_set = set(marked)
        keepable = _keepable_fn(idx, lambda tr: tr in marked_set)
        if not keepable(idx.root):
            return SynthesisResult(Verdict.UNREALIZABLE, None, True)
        kept = _kept_states(idx, keepable)
        kept_traces = {idx.leaf_trace[s] for s in kept if s in idx.terminals}
        if kept_traces == marked_set:
            retained = _retained_for(plant, idx, keepable, kept)
            return SynthesisResult(
                Verdict.REALIZABLE, ControllerSolution(retained), True
            )
        marked = sorted(kept_traces, key=Lasso.sort_key)


def dispatch(
    plant: Plant,
    f: Formula,
    bounds: Optional[tuple[int, int]] = None,
    max_candidate_bits: Optional[int] = DEFAULT_MAX_CANDIDATE_BITS,
    horizon: int = DEFAULT_HORIZON,
) -> SynthesisResult:
    """Route to the specialized tree algorithm matching the (frame,
    fragment) pair, falling back to generic candidate search."""
    validate(plant)
    frame = classify_frame(plant)
    fragment = classify_fragment(f)
    if frame is FrameKind.TREE and fragment.kind is FragmentKind.E_STAR_A:
        return synth_tree_exists_forall(plant, f, horizon)
    if frame is FrameKind.TREE and fragment.kind is FragmentKind.A_E_STAR:
        return synth_tree_marking(plant, f, horizon)
    return synth_generic(plant, f, bounds, max_candidate_bits, horizon)
