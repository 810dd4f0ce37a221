"""Finite left braces: validation, lambda maps, socle, orbits, automorphisms.

A brace is stored as two Cayley tables on the same carrier with the shared
identity at index 0.  ``lam[x, y]`` is ``x*y - x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
import sympy
from sympy.utilities.iterables import partitions

from .config import DEFAULT_BOUNDS, Bounds
from .groups import (
    FiniteGroup,
    GroupAxiomError,
    GroupMap,
    Subgroup,
    _check_shape_and_range,
    _find_identity,
    _identity_swap,
    abelian_group,
    extend_additive_maps,
    generating_set,
    holomorph,
    regular_subgroups,
    relabel_table,
    subgroups,
    validate_group,
)


class BraceAxiomError(ValueError):
    def __init__(self, axiom: str, witness: tuple, message: str):
        super().__init__(f"{axiom}: {message} (witness {witness})")
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True, eq=False)
class Brace:
    add: FiniteGroup
    mul: FiniteGroup
    lam: np.ndarray = field(init=False, repr=False)
    # derived data keyed by (kind, argument); never part of equality
    memo: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        neg = self.add.inv
        lam = self.add.table[self.mul.table, neg[:, None]]
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def order(self) -> int:
        return self.add.order

    @property
    def neg(self) -> np.ndarray:
        return self.add.inv

    @property
    def inv(self) -> np.ndarray:
        return self.mul.inv

    def lambda_map(self, x: int) -> tuple[int, ...]:
        return tuple(int(y) for y in self.lam[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Brace):
            return NotImplemented
        return self.add == other.add and self.mul == other.mul

    def __hash__(self) -> int:
        return hash((self.add, self.mul))


def first_brace_failure(add: np.ndarray, mul: np.ndarray) -> tuple[int, int, int] | None:
    """First (x, y, z) with x(y+z)+x != xy+xz, scanning x, then y, then z."""
    n = add.shape[0]
    dtype = np.int16 if n < 2**15 else np.int64
    add, mul = add.astype(dtype), mul.astype(dtype)
    chunk = max(1, 2**20 // max(1, n * n))
    for start in range(0, n, chunk):
        xs = np.arange(start, min(n, start + chunk))
        lhs = add[mul[xs[:, None, None], add[None, :, :]], xs[:, None, None]]
        rhs = add[mul[xs][:, :, None], mul[xs][:, None, :]]
        diff = lhs != rhs
        if diff.any():
            i, y, z = map(int, np.argwhere(diff)[0])
            return int(xs[i]), y, z
    return None


def validate_brace(add_table, mul_table) -> Brace:
    """Check both group structures and the brace identity.

    Raises :class:`GroupAxiomError` for a failing group table and
    :class:`BraceAxiomError` (axiom ``abelian``, ``identity`` or ``brace``)
    otherwise.  Both tables are relabelled together so the shared identity
    becomes 0.
    """
    add = _check_shape_and_range(add_table)
    mul = _check_shape_and_range(mul_table)
    if add.shape != mul.shape:
        raise BraceAxiomError("shape", (add.shape[0], mul.shape[0]), "tables have different orders")
    e_add, e_mul = _find_identity(add), _find_identity(mul)
    if e_add is not None and e_mul is not None and e_add != e_mul:
        raise BraceAxiomError("identity", (e_add, e_mul), "additive and multiplicative identities differ")
    if e_add not in (None, 0):
        perm = _identity_swap(add.shape[0], e_add)
        add, mul = relabel_table(add, perm), relabel_table(mul, perm)
    A = validate_group(add, normalize=False)
    M = validate_group(mul, normalize=False)
    if not A.is_abelian():
        x, y = map(int, np.argwhere(add != add.T)[0])
        raise BraceAxiomError("abelian", (x, y), f"{x}+{y} != {y}+{x}")
    bad = first_brace_failure(A.table, M.table)
    if bad is not None:
        raise BraceAxiomError("brace", bad, "x*(y+z)+x != x*y+x*z")
    return Brace(A, M)


def lambda_map(B: Brace, x: int) -> tuple[int, ...]:
    return B.lambda_map(x)


def socle(B: Brace) -> Subgroup:
    ident = np.arange(B.order)
    elems = tuple(x for x in range(B.order) if np.array_equal(B.lam[x], ident))
    return Subgroup(B.mul, elems)


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple[tuple[int, ...], ...]
    reps: tuple[int, ...]
    stabilizers: tuple[Subgroup, ...]

    def orbit_of(self, x: int) -> int:
        for i, orb in enumerate(self.orbits):
            if x in orb:
                return i
        raise KeyError(x)


def stabilizer(B: Brace, x: int) -> Subgroup:
    key = ("stab", x)
    if key not in B.memo:
        B.memo[key] = Subgroup(B.mul, tuple(int(g) for g in np.nonzero(B.lam[:, x] == x)[0]))
    return B.memo[key]


def orbit(B: Brace, x: int) -> tuple[int, ...]:
    key = ("orbit", x)
    if key not in B.memo:
        B.memo[key] = tuple(int(y) for y in np.unique(B.lam[:, x]))
    return B.memo[key]


def orbit_decomposition(B: Brace) -> OrbitDecomposition:
    """Orbits of ``g -> lambda_g``, ordered by their minimal element, which is
    also the representative."""
    seen: set[int] = set()
    orbits, reps, stabs = [], [], []
    for x in range(B.order):
        if x in seen:
            continue
        orb = orbit(B, x)
        seen.update(orb)
        orbits.append(orb)
        reps.append(x)
        stabs.append(stabilizer(B, x))
    return OrbitDecomposition(tuple(orbits), tuple(reps), tuple(stabs))


# --- automorphisms and isomorphisms -----------------------------------------


def _profile(B: Brace) -> np.ndarray:
    """Per-element invariants preserved by brace isomorphisms."""
    soc = np.zeros(B.order, dtype=np.int64)
    soc[list(socle(B).elements)] = 1
    orbit_sizes = np.array([len(set(B.lam[:, x].tolist())) for x in range(B.order)])
    stab_sizes = np.array([int((B.lam[:, x] == x).sum()) for x in range(B.order)])
    return np.stack([B.add.element_orders(), B.mul.element_orders(), soc, orbit_sizes, stab_sizes], axis=1)


def brace_key(B: Brace) -> tuple:
    """Isomorphism invariant: socle order plus the multiset of element profiles."""
    if "key" not in B.memo:
        prof = _profile(B)
        B.memo["key"] = (B.order, int(prof[:, 2].sum()), tuple(sorted(map(tuple, prof.tolist()))))
    return B.memo["key"]


def mul_subgroups(B: Brace, bounds: Bounds = DEFAULT_BOUNDS) -> list[Subgroup]:
    """Subgroups of the multiplicative group, sorted by (order, elements)."""
    if "lattice" not in B.memo:
        B.memo["lattice"] = subgroups(B.mul, bounds)
    return B.memo["lattice"]


def _brace_maps(B1: Brace, B2: Brace) -> Iterator[np.ndarray]:
    if B1.order != B2.order:
        return
    p1, p2 = _profile(B1), _profile(B2)
    gens = generating_set(B1.add)
    candidates = [[y for y in range(B2.order) if np.array_equal(p1[g], p2[y])] for g in gens]
    m1, m2 = B1.mul.table, B2.mul.table
    for f in extend_additive_maps(B1.add, B2.add, gens, candidates):
        if np.array_equal(f[m1], m2[np.ix_(f, f)]):
            yield f


def brace_automorphisms(B: Brace, bounds: Bounds = DEFAULT_BOUNDS) -> list[tuple[int, ...]]:
    """All brace automorphisms as image tuples, sorted (identity first)."""
    bounds.check("brace_order", B.order)
    if "auts" not in B.memo:
        B.memo["auts"] = sorted(tuple(int(v) for v in f) for f in _brace_maps(B, B))
    return list(B.memo["auts"])


def brace_isomorphic(B1: Brace, B2: Brace, bounds: Bounds = DEFAULT_BOUNDS) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``f(x+y)=f(x)+f(y)`` and ``f(xy)=f(x)f(y)``, or None."""
    bounds.check("brace_order", max(B1.order, B2.order))
    if B1.order != B2.order or brace_key(B1) != brace_key(B2):
        return None
    key = ("iso", B2)
    if key not in B1.memo:
        B1.memo[key] = next((tuple(int(v) for v in f) for f in _brace_maps(B1, B2)), None)
    return B1.memo[key]


def relabel_brace(B: Brace, perm: Sequence[int]) -> Brace:
    """Rename elements with ``perm[new] = old``; ``perm[0]`` must be 0."""
    if perm[0] != 0:
        raise ValueError("relabelling must fix the identity")
    return Brace(FiniteGroup(relabel_table(B.add.table, perm)), FiniteGroup(relabel_table(B.mul.table, perm)))


# --- constructors ------------------------------------------------------------


def trivial_brace(A: FiniteGroup) -> Brace:
    if not A.is_abelian():
        raise ValueError("trivial brace needs an abelian group")
    return Brace(A, A)


def rump_brace(p: int, n: int, i: int) -> Brace:
    """Brace on Z/(p^n) with ``x*y = x + y + p^i x y``."""
    if not sympy.isprime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1:
        raise ValueError(f"n = {n} must be at least 1")
    low = 2 if p == 2 else 1
    if not low <= i <= n:
        raise ValueError(f"i = {i} outside admissible range {low}..{n} for p = {p}")
    m = p**n
    ar = np.arange(m)
    add = (ar[:, None] + ar[None, :]) % m
    mul = (ar[:, None] + ar[None, :] + p**i * (ar[:, None] * ar[None, :])) % m
    return validate_brace(add, mul)


def extension_brace(B: Brace, H: FiniteGroup, sigma, h: GroupMap | Sequence[int]) -> Brace:
    """Brace on ``H`` with ``x*y = x + sigma[h(x)](y)``.

    ``sigma[g]`` is the automorphism of ``H`` assigned to ``g`` in ``B``;
    ``h`` is a map from ``H`` onto ``(B, +)``.  Every hypothesis is checked and
    a failure raises ValueError with a witness.  The result is also checked
    to have socle ``ker h`` and ``h`` to be a brace morphism.
    """
    if not H.is_abelian():
        raise ValueError("H must be abelian")
    sig = np.asarray(sigma, dtype=np.int64)
    hm = np.asarray(h.images if isinstance(h, GroupMap) else h, dtype=np.int64)
    nB, nH = B.order, H.order
    if sig.shape != (nB, nH):
        raise ValueError(f"sigma must have shape ({nB}, {nH})")
    if hm.shape != (nH,):
        raise ValueError(f"h must have {nH} entries")
    for g in range(nB):
        if sorted(sig[g].tolist()) != list(range(nH)):
            raise ValueError(f"sigma({g}) is not a permutation")
        bad = np.argwhere(sig[g][H.table] != H.table[np.ix_(sig[g], sig[g])])
        if len(bad):
            raise ValueError(f"sigma({g}) is not additive at pair {tuple(map(int, bad[0]))}")
    for g1 in range(nB):
        for g2 in range(nB):
            if not np.array_equal(sig[B.mul.table[g1, g2]], sig[g1][sig[g2]]):
                raise ValueError(f"sigma is not multiplicative at pair ({g1}, {g2})")
    if len({tuple(r) for r in sig.tolist()}) != nB:
        raise ValueError("sigma is not injective")
    bad = np.argwhere(hm[H.table] != B.add.table[np.ix_(hm, hm)])
    if len(bad):
        raise ValueError(f"h is not additive at pair {tuple(map(int, bad[0]))}")
    if len(set(hm.tolist())) != nB:
        raise ValueError("h is not surjective")
    for g in range(nB):
        bad = np.nonzero(hm[sig[g]] != B.lam[g][hm])[0]
        if len(bad):
            raise ValueError(f"h(sigma(g)(m)) != lambda_g(h(m)) at (g, m) = ({g}, {int(bad[0])})")
    mul = H.table[np.arange(nH)[:, None], sig[hm]]
    E = validate_brace(H.table, mul)
    kernel = tuple(int(x) for x in np.nonzero(hm == 0)[0])
    if socle(E).elements != kernel:
        raise ValueError("socle of the extension differs from ker h")
    if not np.array_equal(hm[E.mul.table], B.mul.table[np.ix_(hm, hm)]):
        raise ValueError("h is not multiplicative on the extension")
    return E


# --- census ------------------------------------------------------------------


def abelian_group_types(n: int) -> list[tuple[int, ...]]:
    """Cyclic factor lists (prime-power factors) of every abelian group of order n."""
    per_prime = []
    for p, e in sorted(sympy.factorint(n).items()):
        opts = []
        for part in partitions(e):
            sizes = sorted((k for k, c in part.items() for _ in range(c)))
            opts.append(tuple(p**s for s in sizes))
        per_prime.append(sorted(opts, key=lambda t: (len(t), t), reverse=True))
    types = [tuple(x for grp in combo for x in grp) for combo in itertools.product(*per_prime)]
    return types or [(1,)]


def brace_from_regular_subgroup(hol, S: Subgroup) -> Brace:
    """``a*b := s_a(b)`` with ``s_a`` the unique element of S sending 0 to a."""
    n = hol.base.order
    section = np.empty(n, dtype=np.int64)
    for h in S.elements:
        section[hol.translation(h)] = h
    mul = hol.action[section]
    return Brace(hol.base, FiniteGroup(mul))


def enumerate_braces(n: int, bounds: Bounds = DEFAULT_BOUNDS) -> list[Brace]:
    """One brace per isomorphism class of braces of order ``n``."""
    bounds.check("census_order", n)
    classes: dict[tuple, list[Brace]] = {}
    result: list[Brace] = []
    for factors in abelian_group_types(n):
        hol = holomorph(abelian_group(factors), bounds)
        for S in regular_subgroups(hol):
            B = brace_from_regular_subgroup(hol, S)
            bucket = classes.setdefault(brace_key(B), [])
            if any(brace_isomorphic(B, C, bounds) is not None for C in bucket):
                continue
            bucket.append(B)
            result.append(B)
    return result


def additive_type(B: Brace) -> tuple[int, ...]:
    """Prime-power cyclic factors of ``(B, +)``.  A finite abelian group is
    determined by how many elements it has of each order."""
    profile = np.unique(B.add.element_orders(), return_counts=True)
    for factors in abelian_group_types(B.order):
        other = np.unique(abelian_group(factors).element_orders(), return_counts=True)
        if all(np.array_equal(a, b) for a, b in zip(profile, other)):
            return factors
    raise AssertionError("no abelian group type matches the element orders")
