"""Recursion driver: priority dispatch over all rules, result assembly and
search-tree instrumentation."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .branching import (
    SemiIsolated,
    SevenNeighbourPattern,
    branch_four_neighbour,
    branch_high_degree_var,
    branch_semiisolated_2,
    branch_semiisolated_3,
    eliminate_semiisolated_1,
    find_config,
    pick_high_degree_var,
)
from .decompose import (
    balanced_bisection,
    branch_cut_variables,
    brute_force_base,
    build_clause_graph,
    connected_components,
)
from .model import Formula, PairState, check_state, initial_state
from .poly import ZERO, HDPoly
from .simplify import simplify_fixpoint

RULE_KEYS = (
    "case1_i",
    "dedup",
    "case1_ii",
    "case1_iii",
    "case1_iv",
    "case1_v",
    "case1_vi1",
    "case1_vi2",
    "case1_vi3",
    "case1_vii",
    "prop3_fallback",
    "case2_split",
    "component_split",
    "base",
)


@dataclass
class SolveOptions:
    base_threshold: int = 16
    seed: int = 0
    debug: bool = False


@dataclass
class SolveStats:
    """Search-tree accounting.

    `leaves` counts the leaves of the sequentialised search tree: sums add
    child leaf counts, independent component factors multiply them (as if
    the components were solved nested). With `branched_vars` the total
    number of variables branched on anywhere in the tree, this keeps
    leaves <= 4**branched_vars an exact invariant.
    """

    nodes: int = 0
    leaves: int = 0
    max_depth: int = 0
    branched_vars: int = 0
    rules: dict[str, int] = field(default_factory=lambda: {k: 0 for k in RULE_KEYS})

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "max_depth": self.max_depth,
            "branched_vars": self.branched_vars,
            "rules": {k: self.rules.get(k, 0) for k in RULE_KEYS},
        }


@dataclass(frozen=True)
class SolveReport:
    poly: HDPoly
    max_hd: int | None
    solutions: int
    stats: SolveStats


def _sum_children(children, opts, stats, depth) -> tuple[HDPoly, int]:
    total = ZERO
    leaves = 0
    for child in children:
        if child is None:
            stats.nodes += 1
            leaves += 1
            continue
        poly, sub_leaves = _node(child, opts, stats, depth + 1)
        total = total + poly
        leaves += sub_leaves
    return total, max(leaves, 1)


def _node(st: PairState, opts: SolveOptions, stats: SolveStats, depth: int) -> tuple[HDPoly, int]:
    stats.nodes += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    simplified = simplify_fixpoint(st, stats.rules, opts.debug)
    if simplified is None:
        return ZERO, 1
    st = simplified
    if opts.debug:
        check_state(st)
    if not st.V:
        return st.p_main, 1

    x = pick_high_degree_var(st)
    if x is not None:
        stats.rules["case1_v"] += 1
        stats.branched_vars += 1
        return _sum_children(
            branch_high_degree_var(st, x, stats.rules, opts.debug), opts, stats, depth
        )

    config = find_config(st)
    if isinstance(config, SemiIsolated):
        if len(config.J) <= 1:
            stats.rules["case1_vi1"] += 1
            return _node(eliminate_semiisolated_1(st, config), opts, stats, depth + 1)
        if len(config.J) == 2:
            stats.rules["case1_vi2"] += 1
            stats.branched_vars += 1
            return _sum_children(
                branch_semiisolated_2(st, config, stats.rules, opts.debug),
                opts, stats, depth,
            )
        stats.rules["case1_vi3"] += 1
        stats.branched_vars += 3
        return _sum_children(
            branch_semiisolated_3(st, config, stats.rules, opts.debug),
            opts, stats, depth,
        )
    if isinstance(config, SevenNeighbourPattern):
        if config.shape == "generic":
            stats.rules["prop3_fallback"] += 1
        stats.rules["case1_vii"] += 1
        stats.branched_vars += 3
        return _sum_children(
            branch_four_neighbour(st, config, stats.rules, opts.debug),
            opts, stats, depth,
        )

    components = connected_components(st)
    if len(components) > 1:
        stats.rules["component_split"] += 1
        components.sort(key=lambda c: (len(c.V), min(c.V)))
        poly = st.p_main
        leaves = 1
        for comp in components:
            sub_poly, sub_leaves = _node(comp, opts, stats, depth + 1)
            poly = poly * sub_poly
            leaves *= sub_leaves
            if poly.is_zero() and not opts.debug:
                break
        return poly, leaves

    if len(st.V) <= opts.base_threshold:
        stats.rules["base"] += 1
        return brute_force_base(st), 1
    graph = build_clause_graph(st, opts.debug)
    if graph.n_vertices() < 2:
        stats.rules["base"] += 1
        return brute_force_base(st), 1
    stats.rules["case2_split"] += 1
    bisection = balanced_bisection(graph, opts.seed)
    stats.branched_vars += len(bisection.cut_vars)
    return _sum_children(
        branch_cut_variables(st, bisection, stats.rules, opts.debug),
        opts, stats, depth,
    )


def mhd(st: PairState, opts: SolveOptions | None = None) -> tuple[HDPoly, SolveStats]:
    """Evaluate a recursion state exactly; returns the polynomial together
    with the search statistics."""
    opts = opts or SolveOptions()
    stats = SolveStats()
    limit = sys.getrecursionlimit()
    if limit < 20000:
        sys.setrecursionlimit(20000)
    poly, leaves = _node(st, opts, stats, 0)
    stats.leaves = leaves
    return poly, stats


def solve(f: Formula, opts: SolveOptions | None = None) -> SolveReport:
    """Compute the Hamming-distance polynomial of a formula's solution
    pairs: coefficient of u^k counts ordered pairs at distance k, the
    degree is the maximum distance, the constant term the solution count."""
    poly, stats = mhd(initial_state(f), opts)
    return SolveReport(
        poly=poly,
        max_hd=poly.degree(),
        solutions=poly.coeff(0),
        stats=stats,
    )
