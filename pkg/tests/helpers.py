"""Shared test utilities: independent brute-force oracles and random
instance generators.

The oracles deliberately avoid the code paths they are used to check:
the truncation evaluator decides bodies on an explicit finite unrolling
with three-valued unknowns instead of the lasso fixed-point, satisfiability
is decided by assignment enumeration, and the synthesis oracle enumerates
every subset of the controllable edges.
"""

from __future__ import annotations

import random
from itertools import product
from typing import Optional, Sequence

from hypersynth.formula import (
    And,
    Atom,
    Body,
    Eventually,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Quantifier,
    Release,
    TrueBool,
    Until,
)
from hypersynth.plant import Lasso, Plant, enumerate_traces
from hypersynth.reductions import CnfInput, NormalizedHorn, QbfInput
from hypersynth.semantics import eval_quantified

# --- three-valued truncation evaluator -----------------------------------

_T, _F, _U = True, False, None


def _or3(a, b):
    if a is _T or b is _T:
        return _T
    if a is _F and b is _F:
        return _F
    return _U


def _and3(a, b):
    if a is _F or b is _F:
        return _F
    if a is _T and b is _T:
        return _T
    return _U


def _not3(a):
    return _U if a is _U else (not a)


def naive_eval(body: Body, asg: dict[str, Lasso], length: int) -> Optional[bool]:
    """Evaluate on the explicit unrolling of the given length; positions at
    or beyond the horizon are unknown, and unknowns propagate by Kleene
    three-valued logic.  Conclusive verdicts agree with the infinite-word
    semantics."""
    words = {v: [l.letter_at(i) for i in range(length)] for v, l in asg.items()}

    def ev(node: Body, i: int):
        if i >= length:
            return _U
        if isinstance(node, TrueBool):
            return _T
        if isinstance(node, Atom):
            return node.prop in words[node.var][i]
        if isinstance(node, Not):
            return _not3(ev(node.operand, i))
        if isinstance(node, Or):
            return _or3(ev(node.left, i), ev(node.right, i))
        if isinstance(node, And):
            return _and3(ev(node.left, i), ev(node.right, i))
        if isinstance(node, Implies):
            return _or3(_not3(ev(node.left, i)), ev(node.right, i))
        if isinstance(node, Iff):
            a, b = ev(node.left, i), ev(node.right, i)
            if a is _U or b is _U:
                return _U
            return a == b
        if isinstance(node, Next):
            return ev(node.operand, i + 1)
        if isinstance(node, Until):
            acc = _U
            for j in range(length - 1, i - 1, -1):
                acc = _or3(ev(node.right, j), _and3(ev(node.left, j), acc))
            return acc
        if isinstance(node, Release):
            acc = _U
            for j in range(length - 1, i - 1, -1):
                acc = _and3(ev(node.right, j), _or3(ev(node.left, j), acc))
            return acc
        if isinstance(node, Eventually):
            acc = _U
            for j in range(length - 1, i - 1, -1):
                acc = _or3(ev(node.operand, j), acc)
            return acc
        if isinstance(node, Globally):
            acc = _U
            for j in range(length - 1, i - 1, -1):
                acc = _and3(ev(node.operand, j), acc)
            return acc
        raise TypeError(node)

    return ev(body, 0)


# --- SAT / QBF oracles -----------------------------------------------------


def sat_brute(cnf: CnfInput) -> bool:
    for bits in product((False, True), repeat=cnf.num_vars):
        asg = {v: bits[v - 1] for v in range(1, cnf.num_vars + 1)}
        if all(any((l > 0) == asg[abs(l)] for l in c) for c in cnf.clauses):
            return True
    return False


def cnf_satisfied(cnf: CnfInput, asg: dict[int, bool]) -> bool:
    return all(any((l > 0) == asg[abs(l)] for l in c) for c in cnf.clauses)


def horn_sat_brute(norm: NormalizedHorn) -> bool:
    """Satisfiability with bot forced false and top forced true."""
    free = [v for v in range(1, norm.num_vars + 1) if v not in (norm.bot, norm.top)]
    for bits in product((False, True), repeat=len(free)):
        asg = dict(zip(free, bits))
        asg[norm.bot] = False
        asg[norm.top] = True
        if cnf_satisfied(norm, asg):
            return True
    return False


def qbf_brute(qbf: QbfInput, asg: Optional[dict[int, bool]] = None, i: int = 0) -> bool:
    if asg is None:
        asg = {}
    if i == len(qbf.prefix):
        return all(any((l > 0) == asg[abs(l)] for l in c) for c in qbf.clauses)
    quant, v = qbf.prefix[i]
    branches = (qbf_brute(qbf, {**asg, v: b}, i + 1) for b in (False, True))
    return any(branches) if quant is Quantifier.EXISTS else all(branches)


def qbf_brute_fixed(qbf: QbfInput, fixed: dict[int, bool]) -> bool:
    """Truth of the QBF with some variables pinned (their quantifiers are
    dropped)."""
    rest = tuple((q, v) for q, v in qbf.prefix if v not in fixed)

    def rec(asg: dict[int, bool], i: int) -> bool:
        if i == len(rest):
            return all(any((l > 0) == asg[abs(l)] for l in c) for c in qbf.clauses)
        quant, v = rest[i]
        branches = (rec({**asg, v: b}, i + 1) for b in (False, True))
        return any(branches) if quant is Quantifier.EXISTS else all(branches)

    return rec(dict(fixed), 0)


# --- exhaustive synthesis oracle ---------------------------------------------


def synth_brute(plant: Plant, f: Formula) -> tuple[bool, Optional[frozenset]]:
    """Enumerate all 2^|c| retained subsets, keep the deadlock-free ones,
    and exactly model-check each pruning.  Returns (realizable, one maximal
    witness or None)."""
    edges = sorted(plant.c_edges)
    best: Optional[frozenset] = None
    for mask in range(2 ** len(edges)):
        retained = frozenset(e for k, e in enumerate(edges) if mask >> k & 1)
        out: dict[str, int] = {s: 0 for s in plant.states}
        for a, _ in retained | plant.u_edges:
            out[a] += 1
        if any(n == 0 for n in out.values()):
            continue
        pruned = Plant(plant.states, plant.init, retained, plant.u_edges, plant.labeling)
        if eval_quantified(f, enumerate_traces(pruned)):
            if best is None or len(retained) > len(best):
                best = retained
    return best is not None, best


# --- random generators -------------------------------------------------------

PROPS = ("a", "b")


def random_letter(rng: random.Random, props: Sequence[str] = PROPS) -> frozenset[str]:
    return frozenset(p for p in props if rng.random() < 0.5)


def random_lasso(
    rng: random.Random,
    props: Sequence[str] = PROPS,
    max_stem: int = 4,
    max_loop: int = 3,
) -> Lasso:
    stem = tuple(random_letter(rng, props) for _ in range(rng.randint(0, max_stem)))
    loop = tuple(random_letter(rng, props) for _ in range(rng.randint(1, max_loop)))
    return Lasso(stem, loop)


def random_body(
    rng: random.Random,
    variables: Sequence[str],
    budget: int = 6,
    props: Sequence[str] = PROPS,
) -> Body:
    if budget <= 1:
        if rng.random() < 0.1:
            return TrueBool()
        return Atom(rng.choice(props), rng.choice(list(variables)))
    kind = rng.choice(
        ("atom", "not", "or", "and", "implies", "iff", "next", "until", "ev", "glob")
    )
    if kind == "atom":
        return Atom(rng.choice(props), rng.choice(list(variables)))
    if kind in ("not", "next", "ev", "glob"):
        sub = random_body(rng, variables, budget - 1, props)
        return {"not": Not, "next": Next, "ev": Eventually, "glob": Globally}[kind](sub)
    left_budget = rng.randint(1, budget - 2) if budget > 2 else 1
    left = random_body(rng, variables, left_budget, props)
    right = random_body(rng, variables, budget - 1 - left_budget, props)
    ctor = {"or": Or, "and": And, "implies": Implies, "iff": Iff, "until": Until}[kind]
    return ctor(left, right)


def random_prefix_formula(
    rng: random.Random,
    quants: Sequence[Quantifier],
    budget: int = 6,
    props: Sequence[str] = PROPS,
) -> Formula:
    names = tuple(f"t{i}" for i in range(len(quants)))
    body = random_body(rng, names, budget, props)
    return Formula(tuple(zip(quants, names)), body)


def random_tree_plant(
    rng: random.Random,
    max_states: int = 10,
    max_c_edges: int = 8,
    props: Sequence[str] = PROPS,
) -> Plant:
    """Grow a labeled tree; each edge (including the mandatory leaf
    self-loops) is flipped controllable while the budget lasts."""
    total = rng.randint(2, max_states)
    parents = {0: None}
    for s in range(1, total):
        parents[s] = rng.randint(0, s - 1)
    children: dict[int, list[int]] = {s: [] for s in range(total)}
    for s in range(1, total):
        children[parents[s]].append(s)
    labels = {f"n{s}": random_letter(rng, props) for s in range(total)}
    c_edges: set[tuple[str, str]] = set()
    u_edges: set[tuple[str, str]] = set()
    c_budget = rng.randint(max_c_edges // 2, max_c_edges)

    def place(edge: tuple[str, str]) -> None:
        nonlocal c_budget
        if c_budget > 0 and rng.random() < 0.8:
            c_edges.add(edge)
            c_budget -= 1
        else:
            u_edges.add(edge)

    for s in range(total):
        if children[s]:
            for child in children[s]:
                place((f"n{s}", f"n{child}"))
        else:
            place((f"n{s}", f"n{s}"))
    return Plant(
        states=frozenset(labels),
        init="n0",
        c_edges=frozenset(c_edges),
        u_edges=frozenset(u_edges),
        labeling=labels,
    )


def random_acyclic_plant(
    rng: random.Random,
    max_states: int = 8,
    max_c_edges: int = 8,
    props: Sequence[str] = PROPS,
) -> Plant:
    """Random DAG over an ordered state list; sinks get self-loops."""
    total = rng.randint(2, max_states)
    labels = {f"n{s}": random_letter(rng, props) for s in range(total)}
    forward: dict[int, list[int]] = {s: [] for s in range(total)}
    for s in range(total - 1):
        fanout = rng.randint(1, min(3, total - 1 - s))
        targets = rng.sample(range(s + 1, total), fanout)
        forward[s] = sorted(targets)
    c_edges: set[tuple[str, str]] = set()
    u_edges: set[tuple[str, str]] = set()
    c_budget = rng.randint(0, max_c_edges)

    def place(edge: tuple[str, str]) -> None:
        nonlocal c_budget
        if c_budget > 0 and rng.random() < 0.6:
            c_edges.add(edge)
            c_budget -= 1
        else:
            u_edges.add(edge)

    for s in range(total):
        if forward[s]:
            for t in forward[s]:
                place((f"n{s}", f"n{t}"))
        else:
            place((f"n{s}", f"n{s}"))
    return Plant(
        states=frozenset(labels),
        init="n0",
        c_edges=frozenset(c_edges),
        u_edges=frozenset(u_edges),
        labeling=labels,
    )


def random_general_plant(
    rng: random.Random,
    max_states: int = 6,
    props: Sequence[str] = PROPS,
) -> Plant:
    total = rng.randint(1, max_states)
    labels = {f"n{s}": random_letter(rng, props) for s in range(total)}
    u_edges: set[tuple[str, str]] = set()
    for s in range(total):
        fanout = rng.randint(1, 2)
        for t in rng.sample(range(total), min(fanout, total)):
            u_edges.add((f"n{s}", f"n{t}"))
    return Plant(
        states=frozenset(labels),
        init="n0",
        c_edges=frozenset(),
        u_edges=frozenset(u_edges),
        labeling=labels,
    )


def random_horn_cnf(rng: random.Random, max_vars: int = 4, max_clauses: int = 4) -> CnfInput:
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        size = rng.randint(1, 4)
        body_vars = [rng.randint(1, n) for _ in range(size)]
        lits: list[int] = []
        if rng.random() < 0.5:
            lits.append(body_vars[0])
            body_vars = body_vars[1:]
        lits.extend(-v for v in body_vars)
        if not lits:
            lits = [-rng.randint(1, n)]
        clauses.append(tuple(lits))
    return CnfInput(n, tuple(clauses))


def random_3cnf(rng: random.Random, num_vars: int, num_clauses: int) -> CnfInput:
    clauses = tuple(
        tuple(rng.choice((1, -1)) * rng.randint(1, num_vars) for _ in range(3))
        for _ in range(num_clauses)
    )
    return CnfInput(num_vars, clauses)


def random_qbf(
    rng: random.Random,
    num_vars: int,
    alternations: int,
    max_clauses: int = 3,
) -> QbfInput:
    """Exists-leading prefix over num_vars variables with exactly the given
    number of quantifier switches; clauses use three distinct variables."""
    assert num_vars >= 3 and 0 <= alternations < num_vars
    switches = sorted(rng.sample(range(1, num_vars), alternations))
    quants = []
    current = Quantifier.EXISTS
    j = 0
    for i in range(num_vars):
        if j < len(switches) and i == switches[j]:
            current = (
                Quantifier.FORALL
                if current is Quantifier.EXISTS
                else Quantifier.EXISTS
            )
            j += 1
        quants.append(current)
    prefix = tuple((q, i + 1) for i, q in enumerate(quants))
    clauses = tuple(
        tuple(
            v if rng.random() < 0.5 else -v
            for v in rng.sample(range(1, num_vars + 1), 3)
        )
        for _ in range(rng.randint(1, max_clauses))
    )
    return QbfInput(prefix, clauses)
