"""Non-branching rewrites, applied to a fixpoint in priority order.

Every function here preserves the state's defining sum exactly (the
conservation property); a return value of None means the state evaluates
to the zero polynomial.

Priority inside the fixpoint: unsatisfiable clause detection, duplicate
clause removal, elimination of variables determined on both sides (or in
no clause), small-clause normalisation, then resolution of clause pairs
sharing exactly two variables.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import MutableMapping

from .errors import InternalError
from .model import (
    Clause,
    PairState,
    check_structure,
    clause_satisfied,
    clause_vars,
)


def _substitute_const(clauses: tuple[Clause, ...], var: int, value: int) -> tuple[Clause, ...]:
    lo, hi = 2 * var, 2 * var + 1
    return tuple(
        tuple((value ^ (lit & 1)) if lo <= lit <= hi else lit for lit in cl)
        if any(lo <= lit <= hi for lit in cl) else cl
        for cl in clauses
    )


def _substitute_var(clauses: tuple[Clause, ...], old: int, new: int, pol: int) -> tuple[Clause, ...]:
    # value(old) = value(new) ^ pol, so literal (old, g) becomes (new, g ^ pol)
    lo, hi = 2 * old, 2 * old + 1
    return tuple(
        tuple((2 * new + ((lit & 1) ^ pol)) if lo <= lit <= hi else lit for lit in cl)
        if any(lo <= lit <= hi for lit in cl) else cl
        for cl in clauses
    )


def _drop_clauses(st: PairState, indices: set[int]) -> PairState:
    phi1 = tuple(cl for idx, cl in enumerate(st.phi1) if idx not in indices)
    phi2 = tuple(cl for idx, cl in enumerate(st.phi2) if idx not in indices)
    return replace(st, phi1=phi1, phi2=phi2)


def _clause_satisfiable(clause: Clause, s: dict[int, int]) -> bool:
    variables = sorted(clause_vars(clause))
    free = [v for v in variables if v not in s]
    fixed = {v: s[v] for v in variables if v in s}
    for bits in product((0, 1), repeat=len(free)):
        values = fixed | dict(zip(free, bits))
        if clause_satisfied(clause, values):
            return True
    return False


def detect_unsat(st: PairState) -> bool:
    """True iff some clause cannot be satisfied by any assignment that is
    consistent with the corresponding side's forced values."""
    for clauses, s in ((st.phi1, st.s1), (st.phi2, st.s2)):
        for clause in clauses:
            if not _clause_satisfiable(clause, s):
                return True
    return False


def eliminate_determined(st: PairState, x: int) -> PairState:
    """Fold variable x into p_main. Applies when x is determined on both
    sides, or occurs in no clause; the weight entries consistent with the
    forced values are summed and x leaves the state."""
    i = st.s1.get(x)
    j = st.s2.get(x)
    weights = dict(st.weights)
    table = weights.pop(x)
    factor = sum(
        table[2 * a + b]
        for a in ((i,) if i is not None else (0, 1))
        for b in ((j,) if j is not None else (0, 1))
    )
    phi1, phi2 = st.phi1, st.phi2
    if i is not None and j is not None:
        phi1 = _substitute_const(phi1, x, i)
        phi2 = _substitute_const(phi2, x, j)
    s1 = {k: v for k, v in st.s1.items() if k != x}
    s2 = {k: v for k, v in st.s2.items() if k != x}
    return replace(st, phi1=phi1, phi2=phi2, s1=s1, s2=s2,
                   V=st.V - {x}, p_main=st.p_main * factor, weights=weights)


def link_variables(st: PairState, keep: int, drop: int, pol1: int, pol2: int) -> PairState | None:
    """Replace `drop` by `keep` everywhere; value(drop) = value(keep) ^ pol
    per side. The dropped variable's weight folds into the kept one. None
    when a forced value of drop contradicts one already recorded for keep.
    """
    if keep == drop or keep not in st.V or drop not in st.V:
        raise InternalError(f"bad link {keep}~{drop}")
    weights = dict(st.weights)
    kept = weights[keep]
    dropped = weights.pop(drop)
    weights[keep] = tuple(
        kept[2 * i + j] * dropped[2 * (i ^ pol1) + (j ^ pol2)]
        for i in (0, 1) for j in (0, 1)
    )
    s1, s2 = dict(st.s1), dict(st.s2)
    for s, pol in ((s1, pol1), (s2, pol2)):
        if drop in s:
            implied = s.pop(drop) ^ pol
            if s.get(keep, implied) != implied:
                return None
            s[keep] = implied
    return replace(
        st,
        phi1=_substitute_var(st.phi1, drop, keep, pol1),
        phi2=_substitute_var(st.phi2, drop, keep, pol2),
        s1=s1, s2=s2, V=st.V - {drop}, weights=weights,
    )


@dataclass(frozen=True)
class SmallClauseAction:
    """Joint effect of a clause pair with at most two distinct variables.

    The clause is always dropped from both formulas unless unsat. Forces
    are (side, variable, value) records; the link, when present, carries a
    per-side polarity (value(drop) = value(keep) ^ pol).
    """

    unsat: bool
    forces: tuple[tuple[int, int, int], ...] = ()
    link: tuple[int, int, int, int] | None = None


def _classify_side(clause: Clause):
    """Satisfying set of one small clause, summarised as one of
    'unsat', 'drop', 'force' (forced: var -> value) or 'link' (pol)."""
    variables = sorted(clause_vars(clause))
    sat = []
    for bits in product((0, 1), repeat=len(variables)):
        if clause_satisfied(clause, dict(zip(variables, bits))):
            sat.append(bits)
    if not sat:
        return "unsat", {}, None
    if not variables:
        return "drop", {}, None
    forced = {}
    for idx, v in enumerate(variables):
        seen = {bits[idx] for bits in sat}
        if len(seen) == 1:
            forced[v] = seen.pop()
    if len(forced) == len(variables):
        return "force", forced, None
    if len(variables) == 1:
        return "drop", {}, None
    if forced:
        return "force", forced, None
    # two free coupled variables: the satisfying set is a diagonal
    if len(sat) != 2:
        raise InternalError(f"unexpected satisfying set for {clause}")
    return "link", {}, sat[0][0] ^ sat[0][1]


def normalize_small_clause(c1: Clause, c2: Clause) -> SmallClauseAction:
    """Classify an aligned clause pair with <= 2 distinct variables into
    the joint action to apply to both formulas."""
    kind1, forced1, pol1 = _classify_side(c1)
    kind2, forced2, pol2 = _classify_side(c2)
    if kind1 == "unsat" or kind2 == "unsat":
        return SmallClauseAction(True)
    forces = tuple((1, v, val) for v, val in sorted(forced1.items()))
    forces += tuple((2, v, val) for v, val in sorted(forced2.items()))
    link = None
    if kind1 == "link" or kind2 == "link":
        variables = sorted(clause_vars(c1))
        if len(variables) != 2 or clause_vars(c2) != set(variables):
            raise InternalError("link action on misaligned clause pair")
        keep, drop = variables
        pols = []
        for kind, forced, pol in ((kind1, forced1, pol1), (kind2, forced2, pol2)):
            if kind == "link":
                pols.append(pol)
            elif len(forced) == 2:
                # a fully forced side is consistent with the link that
                # passes through its single satisfying point
                pols.append(forced[keep] ^ forced[drop])
            else:
                raise InternalError("link paired with a partially free side")
        link = (keep, drop, pols[0], pols[1])
    return SmallClauseAction(False, forces, link)


def apply_small_clause(st: PairState, idx: int, action: SmallClauseAction) -> PairState | None:
    if action.unsat:
        return None
    st = _drop_clauses(st, {idx})
    s1, s2 = dict(st.s1), dict(st.s2)
    for side, var, val in action.forces:
        s = s1 if side == 1 else s2
        if s.get(var, val) != val:
            return None
        s[var] = val
    st = replace(st, s1=s1, s2=s2)
    if action.link is not None:
        return link_variables(st, *action.link)
    return st


def _sign_of(clause: Clause, var: int) -> int:
    for lit in clause:
        if lit >= 2 and lit >> 1 == var:
            return lit & 1
    raise InternalError(f"variable {var} not in clause")


def resolve_shared_pair(st: PairState, i: int, j: int) -> PairState | None:
    """Resolve two clauses (3 distinct variables each) sharing exactly two
    variables: the two non-shared variables are always linked, and the
    polarity pattern of the shared literals may force values first."""
    vi = clause_vars(st.phi1[i])
    vj = clause_vars(st.phi1[j])
    shared = sorted(vi & vj)
    if len(shared) != 2 or len(vi) != 3 or len(vj) != 3:
        raise InternalError("shared-pair resolution needs 3-variable clauses sharing 2")
    w = (vi - set(shared)).pop()
    z = (vj - set(shared)).pop()
    forces: list[tuple[int, int, int]] = []
    pols = []
    for side, (ci, cj) in ((1, (st.phi1[i], st.phi1[j])), (2, (st.phi2[i], st.phi2[j]))):
        flips = [_sign_of(ci, v) != _sign_of(cj, v) for v in shared]
        gw = _sign_of(ci, w)
        gz = _sign_of(cj, z)
        if flips[0] and flips[1]:
            # both shared literals flipped: the two extra literals must be false
            rel = 0
            forces.append((side, w, gw))
            forces.append((side, z, gz))
        elif not flips[0] and not flips[1]:
            rel = 0
        else:
            # one flipped: the unflipped shared literal must be false
            rel = 1
            u = shared[0] if not flips[0] else shared[1]
            forces.append((side, u, _sign_of(ci, u)))
        pols.append(gw ^ gz ^ rel)
    s1, s2 = dict(st.s1), dict(st.s2)
    for side, var, val in forces:
        s = s1 if side == 1 else s2
        if s.get(var, val) != val:
            return None
        s[var] = val
    st = replace(st, s1=s1, s2=s2)
    keep, drop = (w, z) if w < z else (z, w)
    return link_variables(st, keep, drop, pols[0], pols[1])


def _first_duplicates(st: PairState) -> set[int]:
    seen: dict = {}
    dups: set[int] = set()
    for idx in range(len(st.phi1)):
        key = (tuple(sorted(st.phi1[idx])), tuple(sorted(st.phi2[idx])))
        if key in seen:
            dups.add(idx)
        else:
            seen[key] = idx
    return dups


def simplify_fixpoint(
    st: PairState,
    counts: MutableMapping[str, int] | None = None,
    debug: bool = False,
) -> PairState | None:
    """Apply the non-branching rules in priority order until none fires.

    Each application removes a variable, a clause, or determines a value,
    so the loop terminates. Returns None when the state evaluates to zero.
    """

    def bump(key: str) -> None:
        if counts is not None:
            counts[key] = counts.get(key, 0) + 1

    while True:
        if detect_unsat(st):
            bump("case1_i")
            return None
        dups = _first_duplicates(st)
        if dups:
            st = _drop_clauses(st, dups)
            bump("dedup")
            continue
        occ = st.occurring()
        target = next(
            (v for v in sorted(st.V) if (v in st.s1 and v in st.s2) or v not in occ),
            None,
        )
        if target is not None:
            st = eliminate_determined(st, target)
            bump("case1_ii")
            if debug:
                check_structure(st)
            continue
        small = next(
            (k for k, cl in enumerate(st.phi1) if len(clause_vars(cl)) <= 2), None
        )
        if small is not None:
            bump("case1_iii")
            action = normalize_small_clause(st.phi1[small], st.phi2[small])
            nxt = apply_small_clause(st, small, action)
            if nxt is None:
                return None
            st = nxt
            if debug:
                check_structure(st)
            continue
        pair = None
        varsets = [clause_vars(cl) for cl in st.phi1]
        for a in range(len(varsets)):
            for b in range(a + 1, len(varsets)):
                if len(varsets[a] & varsets[b]) == 2:
                    pair = (a, b)
                    break
            if pair:
                break
        if pair is not None:
            bump("case1_iv")
            nxt = resolve_shared_pair(st, *pair)
            if nxt is None:
                return None
            st = nxt
            if debug:
                check_structure(st)
            continue
        return st
