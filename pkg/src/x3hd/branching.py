"""Branching rules and the detector that chooses between them.

A branch op returns the list of children produced for one parent state,
already passed through the simplification fixpoint; None entries are
children whose subtree evaluates to the zero polynomial. The parent's
value is always the exact sum of the children's values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import MutableMapping

from .errors import InternalError
from .model import (
    Clause,
    PairState,
    clause_classes,
    clause_satisfied,
    clause_vars,
)
from .poly import ONE, ZERO
from .simplify import (
    _substitute_const,
    eliminate_determined,
    simplify_fixpoint,
)

Counts = MutableMapping[str, int] | None


def assign_value(st: PairState, x: int, i: int, j: int) -> PairState:
    """Fix variable x to i in phi1 and j in phi2: scale p_main by the
    matching weight entry, substitute the constants, drop x."""
    weights = dict(st.weights)
    factor = weights.pop(x)[2 * i + j]
    return replace(
        st,
        phi1=_substitute_const(st.phi1, x, i),
        phi2=_substitute_const(st.phi2, x, j),
        s1={k: v for k, v in st.s1.items() if k != x},
        s2={k: v for k, v in st.s2.items() if k != x},
        V=st.V - {x},
        p_main=st.p_main * factor,
        weights=weights,
    )


def value_combos(st: PairState, x: int) -> list[tuple[int, int]]:
    """The (phi1, phi2) value pairs for x consistent with s1/s2, in the
    fixed order (0,0), (0,1), (1,0), (1,1)."""
    ivals = (st.s1[x],) if x in st.s1 else (0, 1)
    jvals = (st.s2[x],) if x in st.s2 else (0, 1)
    return [(i, j) for i in ivals for j in jvals]


def _finish_children(
    parent: PairState,
    children: list[PairState],
    floors: list[int] | None,
    counts: Counts,
    debug: bool,
) -> list[PairState | None]:
    out: list[PairState | None] = []
    for pos, child in enumerate(children):
        simplified = simplify_fixpoint(child, counts, debug)
        if debug and simplified is not None and floors is not None:
            removed = len(parent.V) - len(simplified.V)
            if removed < floors[pos]:
                raise InternalError(
                    f"child eliminated {removed} variables, expected >= {floors[pos]}"
                )
        out.append(simplified)
    return out


def _class_info(clauses: tuple[Clause, ...]):
    classes = clause_classes(clauses)
    class_vars = [sorted(clause_vars(clauses[members[0]])) for members in classes]
    var_to_classes: dict[int, set[int]] = {}
    for k, vs in enumerate(class_vars):
        for v in vs:
            var_to_classes.setdefault(v, set()).add(k)
    return classes, class_vars, var_to_classes


def pick_high_degree_var(st: PairState) -> int | None:
    """A variable occurring in at least four dissimilar clause classes,
    preferring the highest class count, then the smallest id."""
    _, _, var_to_classes = _class_info(st.phi1)
    candidates = [v for v, ks in var_to_classes.items() if len(ks) >= 4]
    if not candidates:
        return None
    return min(candidates, key=lambda v: (-len(var_to_classes[v]), v))


def branch_high_degree_var(
    st: PairState, x: int, counts: Counts = None, debug: bool = False
) -> list[PairState | None]:
    """Four-way (or fewer) split on a variable in >= 4 dissimilar classes.
    Each child then links away one further variable per class of x."""
    children = [assign_value(st, x, i, j) for i, j in value_combos(st, x)]
    return _finish_children(st, children, [5] * len(children), counts, debug)


@dataclass(frozen=True)
class SemiIsolated:
    """Variable block I reachable from the rest only through J: every
    clause uses only I | J variables or no I variable at all."""

    I: frozenset[int]
    J: frozenset[int]
    touching: tuple[int, ...] = ()


@dataclass(frozen=True)
class SevenNeighbourPattern:
    """A clause with >= 4 dissimilar neighbour classes, plus the pivot
    variable sitting in two of them. Shape is informational; 'generic'
    marks a defensive match that skips the elimination-floor assertions."""

    clause: int
    pivot: int
    neighbours: tuple[int, ...]
    shape: str


def _touching_indices(clauses: tuple[Clause, ...], block: frozenset[int]) -> tuple[int, ...]:
    return tuple(k for k, cl in enumerate(clauses) if clause_vars(cl) & block)


def _extract_semiisolated(st: PairState, block: frozenset[int]) -> SemiIsolated:
    boundary = set()
    for cl in st.phi1:
        vs = clause_vars(cl)
        outside = vs - block
        if outside:
            boundary |= vs & block
    I = frozenset(block - boundary)
    J = frozenset(boundary)
    for k in _touching_indices(st.phi1, I):
        if not clause_vars(st.phi1[k]) <= block:
            raise InternalError("semiisolated block leaks outside its boundary")
    return SemiIsolated(I, J, _touching_indices(st.phi1, I))


def _match_pattern(st: PairState, classes, class_vars, var_to_classes, k: int):
    """One step of the constructive search around a class with >= 4
    dissimilar neighbours: either a branchable pattern, or the context
    (block, a, b, next-class) for the semiisolated fallback."""
    clauses = st.phi1
    rep = classes[k][0]
    order = []
    for lit in clauses[rep]:
        if lit >= 2 and lit >> 1 not in order:
            order.append(lit >> 1)
    if len(order) != 3:
        raise InternalError("pattern search on a degenerate clause")
    pivot = next((v for v in order if len(var_to_classes[v] - {k}) >= 2), None)
    if pivot is None:
        raise InternalError("no pivot variable with two further classes")
    further = sorted(var_to_classes[pivot] - {k})
    if len(further) != 2:
        raise InternalError("pivot variable in more than three classes")
    n1_cls, n2_cls = further
    n1, n2 = classes[n1_cls][0], classes[n2_cls][0]
    ab = sorted(set(class_vars[n1_cls]) - {pivot})
    cd = sorted(set(class_vars[n2_cls]) - {pivot})
    y, z = [v for v in order if v != pivot]
    side_classes = sorted((var_to_classes[y] | var_to_classes[z]) - {k})
    reps = [classes[q][0] for q in side_classes]
    if len(reps) < 2:
        raise InternalError("fewer side neighbours than the class count promises")
    known = {pivot, y, z, *ab, *cd}
    fresh = {r: clause_vars(clauses[r]) - known for r in reps}

    def shape_label(r1: int, r2: int, base: str, alt: str) -> str:
        via = lambda r: y in clause_vars(clauses[r])
        return base if via(r1) == via(r2) else alt

    for ra, rb in combinations(reps, 2):
        if fresh[ra] and fresh[rb] and len(fresh[ra] | fresh[rb]) >= 2:
            label = shape_label(ra, rb, "vii.2", "vii.4")
            return SevenNeighbourPattern(rep, pivot, (n1, n2, ra, rb), label)
    rich = next((r for r in reps if len(fresh[r]) >= 2), None)
    if rich is not None:
        other = next(r for r in reps if r != rich)
        label = shape_label(other, rich, "vii.1", "vii.3")
        return SevenNeighbourPattern(rep, pivot, (n1, n2, other, rich), label)
    extra = set().union(*fresh.values()) if fresh else set()
    if len(extra) > 1:
        raise InternalError("distinct fresh variables escaped the pattern match")
    return frozenset(known | extra), ab[0], ab[1], n1_cls


def _generic_pattern(st: PairState, classes, class_vars, var_to_classes, k: int) -> SevenNeighbourPattern:
    clauses = st.phi1
    rep = classes[k][0]
    neigh = sorted(
        {q for v in class_vars[k] for q in var_to_classes[v]} - {k}
    )
    pivot = next(
        v for v in sorted(clause_vars(clauses[rep]))
        if len(var_to_classes[v] - {k}) >= 2
    )
    return SevenNeighbourPattern(
        rep, pivot, tuple(classes[q][0] for q in neigh[:4]), "generic"
    )


def find_config(st: PairState):
    """Decide how to handle a clause with >= 4 dissimilar neighbour
    classes: a branchable pattern, or a small semiisolated block to
    eliminate. None when no clause qualifies (the decomposition case)."""
    if not st.phi1:
        return None
    classes, class_vars, var_to_classes = _class_info(st.phi1)

    def neighbour_count(k: int) -> int:
        return len({q for v in class_vars[k] for q in var_to_classes[v]} - {k})

    start = next((k for k in range(len(classes)) if neighbour_count(k) >= 4), None)
    if start is None:
        return None
    k = start
    visited = set()
    while True:
        found = _match_pattern(st, classes, class_vars, var_to_classes, k)
        if isinstance(found, SevenNeighbourPattern):
            return found
        block, a, b, n1_cls = found
        has_outside = any(
            {a, b} & clause_vars(cl) and clause_vars(cl) - block
            for cl in st.phi1
        )
        if not has_outside:
            si = _extract_semiisolated(st, block)
            if len(si.J) <= 3:
                return si
            return _generic_pattern(st, classes, class_vars, var_to_classes, start)
        visited.add(k)
        k = n1_cls
        if k in visited or neighbour_count(k) < 4:
            return _generic_pattern(st, classes, class_vars, var_to_classes, start)


def eliminate_semiisolated_1(st: PairState, si: SemiIsolated) -> PairState:
    """Eliminate the block I through its single boundary variable (or none):
    enumerate block assignments satisfying every I-touching clause, fold
    the summed weight products into the boundary variable's table (into
    p_main when the boundary is empty), then drop the block and its
    clauses. Empty enumerations leave zero weight entries, which evaluate
    the affected branch to zero downstream."""
    I = set(si.I)
    J = sorted(si.J)
    if len(J) > 1:
        raise InternalError("single-boundary elimination needs |J| <= 1")
    xvar = J[0] if J else None
    touching = [k for k, cl in enumerate(st.phi1) if clause_vars(cl) & I]
    domain = sorted(I | set(J))
    ivars = sorted(I)

    def grouped(clauses, s):
        groups: dict[int | None, list[dict[int, int]]] = {}
        touch = [clauses[k] for k in touching]
        for bits in product((0, 1), repeat=len(domain)):
            values = dict(zip(domain, bits))
            if any(values[v] != s[v] for v in domain if v in s):
                continue
            if all(clause_satisfied(cl, values) for cl in touch):
                key = values[xvar] if xvar is not None else None
                groups.setdefault(key, []).append(values)
        return groups

    g1 = grouped(st.phi1, st.s1)
    g2 = grouped(st.phi2, st.s2)

    def block_sum(list1, list2):
        acc = ZERO
        for b1 in list1:
            for b2 in list2:
                term = ONE
                for v in ivars:
                    term = term * st.weights[v][2 * b1[v] + b2[v]]
                acc = acc + term
        return acc

    weights = dict(st.weights)
    p_main = st.p_main
    if xvar is not None:
        old = weights.pop(xvar)
        weights[xvar] = tuple(
            old[2 * i + j] * block_sum(g1.get(i, []), g2.get(j, []))
            for i in (0, 1) for j in (0, 1)
        )
    else:
        p_main = p_main * block_sum(g1.get(None, []), g2.get(None, []))
    for v in ivars:
        weights.pop(v)
    drop = set(touching)
    st = replace(
        st,
        phi1=tuple(cl for idx, cl in enumerate(st.phi1) if idx not in drop),
        phi2=tuple(cl for idx, cl in enumerate(st.phi2) if idx not in drop),
        s1={k: v for k, v in st.s1.items() if k not in I},
        s2={k: v for k, v in st.s2.items() if k not in I},
        V=st.V - I,
        p_main=p_main,
        weights=weights,
    )
    if xvar is not None and xvar not in st.occurring():
        st = eliminate_determined(st, xvar)
    return st


def branch_semiisolated_2(
    st: PairState, si: SemiIsolated, counts: Counts = None, debug: bool = False
) -> list[PairState | None]:
    """|J| = 2: branch on the boundary variable that also sits in an
    outside clause, then eliminate I through the remaining one."""
    block = si.I | si.J
    x = cidx = None
    for v in sorted(si.J):
        for kdx, cl in enumerate(st.phi1):
            vs = clause_vars(cl)
            if v in vs and vs - block:
                x, cidx = v, kdx
                break
        if x is not None:
            break
    if x is None:
        raise InternalError("no boundary variable with an outside clause")
    wvar = next(v for v in sorted(si.J) if v != x)
    children = []
    for i, j in value_combos(st, x):
        child = assign_value(st, x, i, j)
        child = eliminate_semiisolated_1(child, SemiIsolated(si.I, frozenset({wvar})))
        children.append(child)
    return _finish_children(st, children, [5] * len(children), counts, debug)


def _true_position_values(clause: Clause, pos: int) -> dict[int, int] | None:
    """Variable values making exactly the literal at `pos` true. None when
    the clause's own structure rules the position out."""
    values: dict[int, int] = {}
    for t, lit in enumerate(clause):
        want = 1 if t == pos else 0
        if lit < 2:
            if lit != want:
                return None
            continue
        v, g = lit >> 1, lit & 1
        val = want ^ g
        if values.get(v, val) != val:
            return None
        values[v] = val
    return values


def branch_semiisolated_3(
    st: PairState, si: SemiIsolated, counts: Counts = None, debug: bool = False
) -> list[PairState | None]:
    """|J| = 3: nine-way (or fewer) split on the clause joining two
    boundary variables with a block variable, then block elimination."""
    cidx = next(
        (
            k
            for k, cl in enumerate(st.phi1)
            if len(clause_vars(cl) & si.J) == 2 and len(clause_vars(cl) & si.I) == 1
        ),
        None,
    )
    if cidx is None:
        raise InternalError("no clause joins two boundary variables with the block")
    c1, c2 = st.phi1[cidx], st.phi2[cidx]
    trio = sorted(clause_vars(c1))
    jpair = clause_vars(c1) & si.J
    evar = (clause_vars(c1) & si.I).pop()
    rest = frozenset(si.J - jpair)
    inner = frozenset(si.I - {evar})
    children = []
    for p1 in range(3):
        vals1 = _true_position_values(c1, p1)
        if vals1 is None or any(st.s1.get(v, vals1[v]) != vals1[v] for v in trio):
            continue
        for p2 in range(3):
            vals2 = _true_position_values(c2, p2)
            if vals2 is None or any(st.s2.get(v, vals2[v]) != vals2[v] for v in trio):
                continue
            child = st
            for v in trio:
                child = assign_value(child, v, vals1[v], vals2[v])
            child = eliminate_semiisolated_1(child, SemiIsolated(inner, rest))
            children.append(child)
    return _finish_children(st, children, [8] * len(children), counts, debug)


def branch_four_neighbour(
    st: PairState, pattern: SevenNeighbourPattern, counts: Counts = None, debug: bool = False
) -> list[PairState | None]:
    """Six-way (or fewer) split on a clause with four dissimilar neighbour
    classes: one child makes the pivot literal false on both sides, the
    other five make it true on at least one side."""
    c1, c2 = st.phi1[pattern.clause], st.phi2[pattern.clause]
    pivot = pattern.pivot
    ppos = next(t for t, lit in enumerate(c1) if lit >= 2 and lit >> 1 == pivot)
    others = [t for t in range(len(c1)) if t != ppos]
    trio = sorted(clause_vars(c1))
    generic = pattern.shape == "generic"
    children: list[PairState] = []
    floors: list[int] = []

    i0 = c1[ppos] & 1
    j0 = c2[ppos] & 1
    if st.s1.get(pivot, i0) == i0 and st.s2.get(pivot, j0) == j0:
        children.append(assign_value(st, pivot, i0, j0))
        floors.append(4)

    for p1, p2 in [(ppos, ppos), (ppos, others[0]), (ppos, others[1]),
                   (others[0], ppos), (others[1], ppos)]:
        vals1 = _true_position_values(c1, p1)
        vals2 = _true_position_values(c2, p2)
        if vals1 is None or vals2 is None:
            continue
        if any(st.s1.get(v, vals1[v]) != vals1[v] for v in trio):
            continue
        if any(st.s2.get(v, vals2[v]) != vals2[v] for v in trio):
            continue
        child = st
        for v in trio:
            child = assign_value(child, v, vals1[v], vals2[v])
        children.append(child)
        floors.append(7)

    return _finish_children(st, children, None if generic else floors, counts, debug)
