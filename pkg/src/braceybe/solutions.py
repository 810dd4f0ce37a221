"""Solutions of the YBE built from a brace, and their verification.

A solution on points ``0..m-1`` is stored by its left maps only:
``sigma[x]`` is the permutation ``y -> sigma_x(y)``.  The right maps are the
ones forced by involutivity, ``gamma_y(x) = sigma^{-1}_{sigma_x(y)}(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .braces import Brace, orbit, orbit_decomposition, stabilizer
from .config import DEFAULT_BOUNDS, BoundExceeded, Bounds
from .groups import FiniteGroup, Subgroup, additive_generates, close_permutations, core, make_subgroup, permutation_closure


class ConfigError(ValueError):
    """A solution configuration violates a hypothesis of the construction."""

    def __init__(self, reason: str, message: str, witness: tuple = ()):
        super().__init__(f"{reason}: {message}")
        self.reason = reason
        self.witness = witness


@dataclass(frozen=True)
class SolutionConfig:
    """Chosen orbit representatives ``reps[i]`` and, for each, a non-empty
    family of subgroups of the stabilizer of ``reps[i]``."""

    brace: Brace = field(compare=False, repr=False)
    reps: tuple[int, ...]
    families: tuple[tuple[Subgroup, ...], ...]
    memo: dict = field(init=False, compare=False, repr=False, hash=False, default_factory=dict)

    @classmethod
    def build(cls, brace: Brace, reps: Sequence[int], families: Sequence[Sequence]) -> "SolutionConfig":
        fams = tuple(
            tuple(k if isinstance(k, Subgroup) else make_subgroup(brace.mul, k) for k in fam) for fam in families
        )
        return cls(brace, tuple(int(r) for r in reps), fams)

    @property
    def size(self) -> int:
        n = self.brace.order
        return sum(n // K.order for fam in self.families for K in fam)

    def pairs(self):
        for i, fam in enumerate(self.families):
            for j, K in enumerate(fam):
                yield i, j, K

    def key(self) -> tuple:
        return (self.reps, tuple(tuple(K.elements for K in fam) for fam in self.families))

    def support(self) -> tuple[int, ...]:
        """The subset X: union of the chosen orbits."""
        return tuple(sorted(set().union(*(orbit(self.brace, x) for x in self.reps)))) if self.reps else ()


def config_violation(cfg: SolutionConfig) -> ConfigError | None:
    B = cfg.brace
    if len(cfg.reps) != len(cfg.families):
        return ConfigError("shape", "one family is needed per chosen orbit")
    seen: dict[tuple, int] = {}
    for i, x in enumerate(cfg.reps):
        if not 0 <= x < B.order:
            return ConfigError("range", f"representative {x} outside the brace", (i,))
        orb = orbit(B, x)
        if orb in seen:
            return ConfigError("orbit", f"representatives {cfg.reps[seen[orb]]} and {x} lie in one orbit", (seen[orb], i))
        seen[orb] = i
    for i, fam in enumerate(cfg.families):
        if not fam:
            return ConfigError("family", f"family {i} is empty", (i,))
        stab = set(stabilizer(B, cfg.reps[i]).elements)
        for j, K in enumerate(fam):
            if not set(K.elements) <= stab:
                return ConfigError("stabilizer", f"K[{i}][{j}] is not inside St({cfg.reps[i]})", (i, j))
    if not _generates(B, cfg.support()):
        return ConfigError("generation", "the chosen orbits do not generate the additive group")
    common = set(range(B.order))
    for _, _, K in cfg.pairs():
        common &= _core(B, K)
    if common != {0}:
        return ConfigError("core", f"cores intersect in {sorted(common)}", tuple(sorted(common)))
    return None


def _generates(B: Brace, support: tuple[int, ...]) -> bool:
    key = ("generates", support)
    if key not in B.memo:
        B.memo[key] = additive_generates(B.add, support)
    return B.memo[key]


def _core(B: Brace, K: Subgroup) -> frozenset:
    key = ("core", K.elements)
    if key not in B.memo:
        B.memo[key] = frozenset(core(B.mul, K).elements)
    return B.memo[key]


def is_valid_config(cfg: SolutionConfig) -> bool:
    return config_violation(cfg) is None


def validate_config(cfg: SolutionConfig) -> SolutionConfig:
    err = config_violation(cfg)
    if err is not None:
        raise err
    return cfg


@dataclass(frozen=True, eq=False)
class Solution:
    sigma: np.ndarray
    labels: tuple[str, ...] = ()
    config: SolutionConfig | None = field(default=None, repr=False)
    memo: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=np.int64).reshape(len(self.sigma), -1)
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(k) for k in range(len(sigma))))

    @property
    def size(self) -> int:
        return self.sigma.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Solution):
            return NotImplemented
        return np.array_equal(self.sigma, other.sigma) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.sigma.tobytes())


@dataclass(frozen=True)
class CosetLayout:
    """Point numbering of the disjoint union of the coset spaces ``G/K``.

    ``point[(i, j)][g]`` is the point holding ``g K_{i,j}``.
    """

    blocks: tuple[tuple[int, int], ...]
    point: dict
    reps: tuple[tuple[int, ...], ...]


def _cosets(B: Brace, K: Subgroup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``owner[g]`` numbers the coset ``gK`` (by first appearance), ``reps``
    lists the minimal element of each coset and ``act[g]`` is left
    translation by ``g`` on the coset numbers."""
    key = ("cosets", K.elements)
    if key not in B.memo:
        M = B.mul.table
        elems = np.array(K.elements)
        owner = np.full(B.order, -1, dtype=np.int64)
        reps = []
        for g in range(B.order):
            if owner[g] < 0:
                owner[M[g, elems]] = len(reps)
                reps.append(g)
        reps = np.array(reps, dtype=np.int64)
        act = owner[M[:, reps]]
        for arr in (owner, reps, act):
            arr.setflags(write=False)
        B.memo[key] = (owner, reps, act)
    return B.memo[key]


def coset_layout(cfg: SolutionConfig) -> CosetLayout:
    point, blocks, reps = {}, [], []
    offset = 0
    for i, j, K in cfg.pairs():
        owner, block_reps, _ = _cosets(cfg.brace, K)
        point[(i, j)] = owner + offset
        blocks.append((i, j))
        reps.append(tuple(block_reps.tolist()))
        offset += len(block_reps)
    return CosetLayout(tuple(blocks), point, tuple(reps))


def action_table(cfg: SolutionConfig) -> np.ndarray:
    """Row ``g`` is left translation by ``g`` on all coset points."""
    if "actions" in cfg.memo:
        return cfg.memo["actions"]
    parts, offset = [], 0
    for _, _, K in cfg.pairs():
        act = _cosets(cfg.brace, K)[2]
        parts.append(act + offset)
        offset += act.shape[1]
    table = np.concatenate(parts, axis=1) if parts else np.zeros((cfg.brace.order, 0), dtype=np.int64)
    table.flags.writeable = False
    cfg.memo["actions"] = table
    return table


def action_permutation(cfg: SolutionConfig, layout: CosetLayout, g: int) -> np.ndarray:
    """Left translation by ``g`` on all coset points."""
    M = cfg.brace.mul.table
    perm = []
    for block, reps in zip(layout.blocks, layout.reps):
        owner = layout.point[block]
        perm.extend(int(owner[M[g, r]]) for r in reps)
    return np.array(perm, dtype=np.int64)


def point_h(cfg: SolutionConfig, layout: CosetLayout | None = None) -> np.ndarray:
    """``h(g K_{i,j}) = lambda_g(x_i)`` for every point."""
    if "h" in cfg.memo:
        return cfg.memo["h"]
    lam = cfg.brace.lam
    parts = [lam[_cosets(cfg.brace, K)[1], cfg.reps[i]] for i, _, K in cfg.pairs()]
    h = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    h.flags.writeable = False
    cfg.memo["h"] = h
    return h


def construct_solution(cfg: SolutionConfig) -> Solution:
    """The solution on the cosets: ``sigma_{gK}(g'K') = (lambda_g(x_i) g')K'``."""
    validate_config(cfg)
    h = point_h(cfg)
    sigma = action_table(cfg)[h]
    labels = tuple(
        f"orbit:{i}/family:{j}/coset:{g}"
        for i, j, K in cfg.pairs()
        for g in _cosets(cfg.brace, K)[1].tolist()
    )
    return Solution(sigma, labels, cfg)


# --- verification --------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    involutive: bool | None
    nondegenerate: bool
    braid: bool | None
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.involutive and self.nondegenerate and self.braid)


def _check_well_formed(sigma: np.ndarray) -> None:
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError("sigma must be an m x m array")
    m = sigma.shape[0]
    if m and (sigma.min() < 0 or sigma.max() >= m):
        raise ValueError("sigma entries must be point indices")


def _inverse_rows(sigma: np.ndarray) -> np.ndarray:
    inv = np.empty_like(sigma)
    np.put_along_axis(inv, sigma, np.arange(sigma.shape[0])[None, :], axis=1)
    return inv


def gamma_table(sigma: np.ndarray) -> np.ndarray:
    """``gamma[y, x] = sigma^{-1}_{sigma_x(y)}(x)``."""
    inv = _inverse_rows(sigma)
    m = sigma.shape[0]
    x = np.arange(m)[None, :]
    return inv[sigma.T, x]


def gamma_map(s: Solution, y: int) -> tuple[int, ...]:
    rep = verify_solution(s, braid=False)
    if not rep.nondegenerate:
        raise ValueError(f"degenerate solution: {rep.witness}")
    return tuple(int(v) for v in gamma_table(s.sigma)[y])


def verify_solution(s: Solution | np.ndarray, braid: bool = True) -> VerifyReport:
    """Check that ``r(x,y) = (sigma_x(y), gamma_y(x))`` is an involutive,
    non-degenerate solution of the braid relation, on every pair and triple."""
    sigma = s.sigma if isinstance(s, Solution) else np.asarray(s, dtype=np.int64)
    _check_well_formed(sigma)
    m = sigma.shape[0]
    ar = np.arange(m)
    ok_rows = (np.sort(sigma, axis=1) == ar).all(axis=1)
    if not ok_rows.all():
        x = int(np.argmin(ok_rows))
        row = sigma[x].tolist()
        y1 = next(y for y in range(m) if row.count(row[y]) > 1)
        y2 = next(y for y in range(y1 + 1, m) if row[y] == row[y1])
        return VerifyReport(None, False, None, {"sigma_not_bijective": (x, y1, y2)})
    gamma = gamma_table(sigma)
    witness: dict = {}
    ok_rows = (np.sort(gamma, axis=1) == ar).all(axis=1)
    nondeg = bool(ok_rows.all())
    if not nondeg:
        witness["gamma_not_bijective"] = (int(np.argmin(ok_rows)),)
    # r o r with r(x,y) = (sigma_x(y), gamma_y(x))
    X, Y = ar[:, None], ar[None, :]
    u, v = sigma[X, Y], gamma[Y, X]
    u2, v2 = sigma[u, v], gamma[v, u]
    bad = np.argwhere((u2 != X) | (v2 != Y))
    involutive = not len(bad)
    if not involutive:
        witness["not_involutive"] = tuple(map(int, bad[0]))
    braid_ok = None
    if braid:
        braid_ok = True
        a, b, c = ar[:, None, None], ar[None, :, None], ar[None, None, :]

        def r12(p, q, t):
            return sigma[p, q], gamma[q, p], t

        def r23(p, q, t):
            return p, sigma[q, t], gamma[t, q]

        lhs = r12(*r23(*r12(a, b, c)))
        rhs = r23(*r12(*r23(a, b, c)))
        mask = (lhs[0] != rhs[0]) | (lhs[1] != rhs[1]) | (lhs[2] != rhs[2])
        bad = np.argwhere(mask)
        if len(bad):
            braid_ok = False
            witness["braid"] = tuple(map(int, bad[0]))
    return VerifyReport(involutive, nondeg, braid_ok, witness)


@dataclass(frozen=True)
class PermutationGroup:
    group: FiniteGroup
    perms: tuple[tuple[int, ...], ...]
    generator_index: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.group.order


def permutation_group(s: Solution, bounds: Bounds = DEFAULT_BOUNDS) -> PermutationGroup:
    """The group generated by the ``sigma_y``; ``generator_index[y]`` is the
    element index of ``sigma_y``."""
    gens = [tuple(int(v) for v in row) for row in s.sigma]
    G, perms = permutation_closure(gens, s.size, limit=bounds.perm_group_order)
    index = {p: k for k, p in enumerate(perms)}
    return PermutationGroup(G, tuple(perms), tuple(index[g] for g in gens))


@dataclass(frozen=True)
class PermBraceCertificate:
    injective: bool
    sigma_agrees: bool
    image_is_generated: bool
    addition_compatible: bool
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.injective and self.sigma_agrees and self.image_is_generated and self.addition_compatible


def check_perm_brace_iso(s: Solution, cfg: SolutionConfig | None = None) -> PermBraceCertificate:
    """Exhaustively confirm that ``g -> (left translation on cosets)`` identifies
    the brace with the permutation group of ``s``, including the additive
    structure through ``action(h(y)+h(z)) = sigma_y o sigma_{sigma_y^-1(z)}``."""
    cfg = cfg if cfg is not None else s.config
    if cfg is None:
        raise ValueError("solution carries no configuration")
    B = cfg.brace
    actions = action_table(cfg)
    sigma = s.sigma
    m = s.size
    witness: dict = {}
    keys = {tuple(row): g for g, row in enumerate(actions.tolist())}
    injective = len(keys) == B.order
    if not injective:
        witness["injective"] = "two brace elements act identically"
    h = point_h(cfg)
    sigma_agrees = actions.shape[1] == m and len(h) == m
    if sigma_agrees:
        diff = np.argwhere(actions[h] != sigma)
        sigma_agrees = not len(diff)
        if not sigma_agrees:
            witness["sigma"] = tuple(map(int, diff[0]))
    else:
        witness["sigma"] = "configuration and solution sizes differ"
    try:
        perms = close_permutations(sigma.tolist(), m, limit=2 * B.order)
    except BoundExceeded:
        perms = None
    image = set(perms) if perms is not None else None
    image_is_generated = image is not None and image == set(keys)
    if not image_is_generated:
        witness["image"] = (len(image) if image is not None else None, len(keys))
    add_ok = sigma_agrees
    if add_ok:
        sig_inv = _inverse_rows(sigma)
        # lhs[y, z] = action(h(y) + h(z)); rhs[y, z] = sigma_y o sigma_{sigma_y^-1(z)}
        lhs = actions[B.add.table[h[:, None], h[None, :]]]
        rhs = sigma[np.arange(m)[:, None, None], sigma[sig_inv]]
        bad = np.argwhere((lhs != rhs).any(axis=2))
        if len(bad):
            add_ok = False
            witness["addition"] = tuple(map(int, bad[0]))
    return PermBraceCertificate(injective, sigma_agrees, image_is_generated, add_ok, witness)


def action_kernel(cfg: SolutionConfig) -> tuple[int, ...]:
    """Elements fixing every coset point."""
    actions = action_table(cfg)
    ident = np.arange(actions.shape[1])
    return tuple(int(g) for g in np.nonzero((actions == ident).all(axis=1))[0])


def core_intersection(cfg: SolutionConfig) -> tuple[int, ...]:
    common = set(range(cfg.brace.order))
    for _, _, K in cfg.pairs():
        common &= _core(cfg.brace, K)
    return tuple(sorted(common))


def relabel_solution(s: Solution, perm: Sequence[int]) -> Solution:
    """Move point ``x`` to ``perm[x]``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    sigma = perm[s.sigma[np.ix_(inv, inv)]]
    labels = tuple(s.labels[k] for k in inv)
    return Solution(sigma, labels)
