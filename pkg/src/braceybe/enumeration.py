"""Enumeration drivers and the completeness oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .basic import is_basic
from .braces import Brace, enumerate_braces, mul_subgroups, orbit_decomposition
from .config import DEFAULT_BOUNDS, Bounds
from .groups import additive_generates, core, symmetric_group
from .isomorphism import (
    _point_invariants,
    config_invariant,
    solutions_isomorphic_bruteforce,
    solutions_isomorphic_thm,
)
from .solutions import Solution, SolutionConfig, construct_solution, permutation_group, verify_solution


def _multisets(items: list, budget: int, distinct: bool):
    """Non-empty multisets of ``(weight, subgroup)`` items with total weight
    within ``budget``, as sorted index tuples."""

    def rec(start: int, left: int, chosen: tuple):
        if chosen:
            yield chosen
        for k in range(start, len(items)):
            w = items[k][0]
            if w <= left:
                yield from rec(k + 1 if distinct else k, left - w, chosen + (k,))

    yield from rec(0, budget, ())


def iter_configs(B: Brace, max_points: int, basic_only: bool = False, bounds: Bounds = DEFAULT_BOUNDS):
    """Every valid configuration over the canonical orbit representatives with
    at most ``max_points`` points.

    Families are multisets of subgroups (sets when ``basic_only``, since a
    repeated subgroup can always be deleted).  Configs come out in a fixed
    order; callers sort by point count when they need to.
    """
    bounds.check("max_points", max_points)
    od = orbit_decomposition(B)
    n = B.order
    lattice = mul_subgroups(B, bounds)
    cores = {K.elements: frozenset(core(B.mul, K).elements) for K in lattice}
    options = []
    for stab in od.stabilizers:
        inside = set(stab.elements)
        opts = [(n // K.order, K) for K in lattice if set(K.elements) <= inside]
        opts.sort(key=lambda wk: (wk[0], wk[1].elements))
        options.append(opts)
    everything = frozenset(range(n))
    orbit_ids = range(len(od.orbits))
    for size in range(1, len(od.orbits) + 1):
        for chosen in itertools.combinations(orbit_ids, size):
            if sum(len(od.orbits[i]) for i in chosen) > max_points:
                continue
            support = [x for i in chosen for x in od.orbits[i]]
            if not additive_generates(B.add, support):
                continue

            def fill(pos: int, budget: int, fams: tuple, common: frozenset):
                if pos == len(chosen):
                    if common == {0}:
                        yield fams
                    return
                i = chosen[pos]
                reserve = sum(len(od.orbits[r]) for r in chosen[pos + 1:])
                for combo in _multisets(options[i], budget - reserve, basic_only):
                    weight = sum(options[i][k][0] for k in combo)
                    c = common
                    for k in combo:
                        c = c & cores[options[i][k][1].elements]
                    yield from fill(pos + 1, budget - weight, fams + (tuple(options[i][k][1] for k in combo),), c)

            for fams in fill(0, max_points, (), everything):
                cfg = SolutionConfig(B, tuple(od.reps[i] for i in chosen), fams)
                if basic_only and not is_basic(cfg, bounds):
                    continue
                yield cfg


def enumerate_solutions(
    B: Brace, max_points: int, basic_only: bool = False, bounds: Bounds = DEFAULT_BOUNDS
) -> list[tuple[SolutionConfig, Solution]]:
    """One (config, solution) per isomorphism class, ordered by point count
    and then by config key."""
    configs = sorted(iter_configs(B, max_points, basic_only, bounds), key=lambda c: (c.size, c.key()))
    classes: dict[tuple, list[SolutionConfig]] = {}
    out = []
    for cfg in configs:
        bucket = classes.setdefault(config_invariant(cfg), [])
        if any(solutions_isomorphic_thm(cfg, other, bounds) is not None for other in bucket):
            continue
        bucket.append(cfg)
        out.append((cfg, construct_solution(cfg)))
    return out


def _partial_braid_ok(sigma: list, inv: list, k: int) -> bool:
    """Check ``sigma_x sigma_{sigma_x^-1(y)} = sigma_y sigma_{sigma_y^-1(x)}``
    wherever every map involved is already assigned (indices <= k)."""
    for x in range(k + 1):
        for y in range(k + 1):
            a, b = inv[x][y], inv[y][x]
            if a > k or b > k:
                continue
            sa, sb = sigma[a], sigma[b]
            sx, sy = sigma[x], sigma[y]
            if any(sx[sa[p]] != sy[sb[p]] for p in range(len(sx))):
                return False
    return True


def brute_force_all_solutions(m: int, bounds: Bounds = DEFAULT_BOUNDS) -> list[Solution]:
    """Every solution on ``m`` points up to isomorphism, by exhaustive search
    over the assignments ``y -> sigma_y``."""
    bounds.check("bruteforce_points", m)
    _, perms = symmetric_group(m) if m > 1 else (None, [tuple(range(m))])
    inverses = {p: tuple(np.argsort(p).tolist()) for p in perms}
    found: list[Solution] = []
    buckets: dict[tuple, list[Solution]] = {}

    def rec(k: int, sigma: list):
        if k == m:
            s = Solution(np.array(sigma, dtype=np.int64).reshape(m, m))
            if not verify_solution(s).ok:
                return
            key = tuple(sorted(_point_invariants(s)))
            bucket = buckets.setdefault(key, [])
            if any(solutions_isomorphic_bruteforce(s, t, bounds) is not None for t in bucket):
                return
            bucket.append(s)
            found.append(s)
            return
        for p in perms:
            sigma.append(p)
            if _partial_braid_ok(sigma, [inverses[q] for q in sigma], k):
                rec(k + 1, sigma)
            sigma.pop()

    rec(0, [])
    return found


@dataclass
class CompletenessRow:
    solution: Solution
    group_order: int
    brace_index: int | None
    config: SolutionConfig | None
    bijection: tuple[int, ...] | None


@dataclass
class CompletenessReport:
    points: int
    rows: list[CompletenessRow] = field(default_factory=list)

    @property
    def matched(self) -> int:
        return sum(r.bijection is not None for r in self.rows)

    @property
    def complete(self) -> bool:
        return self.matched == len(self.rows)


class CompletenessFailure(AssertionError):
    """A brute-force solution has no counterpart among the constructed ones."""


def completeness_check(m: int, bounds: Bounds = DEFAULT_BOUNDS, strict: bool = True) -> CompletenessReport:
    """Match every solution on ``m`` points against the constructions over
    all braces whose order is the solution's permutation group order."""
    bounds.check("completeness_points", m)
    report = CompletenessReport(m)
    census: dict[int, list[tuple[Brace, list]]] = {}
    for s in brute_force_all_solutions(m, bounds):
        q = permutation_group(s, bounds).order
        if q not in census:
            census[q] = [(B, enumerate_solutions(B, m, False, bounds)) for B in enumerate_braces(q, bounds)]
        row = CompletenessRow(s, q, None, None, None)
        for b, (B, sols) in enumerate(census[q]):
            for cfg, t in sols:
                if t.size != m:
                    continue
                F = solutions_isomorphic_bruteforce(s, t, bounds)
                if F is not None:
                    row.brace_index, row.config, row.bijection = b, cfg, F
                    break
            if row.bijection is not None:
                break
        report.rows.append(row)
    if strict and not report.complete:
        raise CompletenessFailure(f"{len(report.rows) - report.matched} solutions on {m} points were not matched")
    return report
