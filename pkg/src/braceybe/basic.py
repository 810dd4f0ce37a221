"""Basic configurations: nothing can be deleted or enlarged.

``is_basic`` is the operational definition on configurations.
``is_basic_oracle`` looks only at the solution and searches all of its
quotients that keep the permutation group order.
"""

from __future__ import annotations

from sympy.utilities.iterables import multiset_partitions

import numpy as np

from .braces import mul_subgroups, stabilizer
from .config import DEFAULT_BOUNDS, Bounds
from .solutions import Solution, SolutionConfig, config_violation, is_valid_config, permutation_group, verify_solution


def deletions(cfg: SolutionConfig):
    """Every config obtained by removing one ``K_{i,j}`` (and orbit ``i`` when
    its family empties), tagged with ``(i, j)``.  Removing the last point
    leaves no solution at all, so that case is skipped."""
    if cfg.size == 1:
        return
    for i, j, _ in cfg.pairs():
        fam = cfg.families[i][:j] + cfg.families[i][j + 1:]
        if fam:
            reps, fams = cfg.reps, cfg.families[:i] + (fam,) + cfg.families[i + 1:]
        else:
            reps = cfg.reps[:i] + cfg.reps[i + 1:]
            fams = cfg.families[:i] + cfg.families[i + 1:]
        yield (i, j), SolutionConfig(cfg.brace, reps, fams)


def enlargements(cfg: SolutionConfig, bounds: Bounds = DEFAULT_BOUNDS):
    """Every config obtained by replacing one ``K_{i,j}`` with a strictly larger
    subgroup of the stabilizer of ``x_i``."""
    lattice = mul_subgroups(cfg.brace, bounds)
    for i, j, K in cfg.pairs():
        stab = set(stabilizer(cfg.brace, cfg.reps[i]).elements)
        inner = set(K.elements)
        for L in lattice:
            if L.order > K.order and inner <= set(L.elements) <= stab:
                fam = cfg.families[i][:j] + (L,) + cfg.families[i][j + 1:]
                yield (i, j, L), SolutionConfig(cfg.brace, cfg.reps, cfg.families[:i] + (fam,) + cfg.families[i + 1:])


def is_basic(cfg: SolutionConfig, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    err = config_violation(cfg)
    if err is not None:
        raise err
    if any(is_valid_config(c) for _, c in deletions(cfg)):
        return False
    return not any(is_valid_config(c) for _, c in enlargements(cfg, bounds))


def quotient(s: Solution, blocks) -> Solution | None:
    """The solution induced on a partition of the points, or None when
    ``sigma`` does not respect it."""
    cls = np.empty(s.size, dtype=np.int64)
    for b, block in enumerate(blocks):
        cls[list(block)] = b
    q = np.full((len(blocks), len(blocks)), -1, dtype=np.int64)
    image = cls[s.sigma]
    for x in range(s.size):
        for y in range(s.size):
            a, b = cls[x], cls[y]
            if q[a, b] < 0:
                q[a, b] = image[x, y]
            elif q[a, b] != image[x, y]:
                return None
    return Solution(q)


def proper_quotients(s: Solution, bounds: Bounds = DEFAULT_BOUNDS):
    """Non-trivial partitions on which ``s`` descends to a solution with a
    permutation group of the same order."""
    order = permutation_group(s, bounds).order
    for blocks in multiset_partitions(list(range(s.size))):
        if len(blocks) == s.size:
            continue
        t = quotient(s, blocks)
        if t is None or not verify_solution(t).ok:
            continue
        if permutation_group(t, bounds).order == order:
            yield blocks, t


def is_basic_oracle(s: Solution, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    bounds.check("basic_oracle_points", s.size)
    return next(proper_quotients(s, bounds), None) is None
