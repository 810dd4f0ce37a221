"""Finite groups given by explicit Cayley tables on the carrier ``0..n-1``.

Element 0 is always the identity.  Most routines work on the raw numpy table
for speed; the small dataclasses here only bundle a table with the derived data
(inverses, element orders) every caller ends up needing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import DEFAULT_BOUNDS, BoundExceeded, Bounds


class GroupAxiomError(ValueError):
    """A table failed a group axiom.

    ``axiom`` names the failed check and ``witness`` holds the offending element
    indices (a triple for associativity, a cell for range errors, ...).
    """

    def __init__(self, axiom: str, witness: tuple, message: str):
        super().__init__(f"{axiom}: {message} (witness {witness})")
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group on ``range(order)`` with identity 0.

    The constructor trusts its input; use :func:`validate_group` for tables
    coming from outside.
    """

    table: np.ndarray
    inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        n = table.shape[0]
        rows, cols = np.nonzero(table == 0)
        inv = np.empty(n, dtype=np.int64)
        inv[rows] = cols
        inv.setflags(write=False)
        object.__setattr__(self, "inv", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.ones(n, dtype=np.int64)
        power = np.arange(n)
        alive = power != 0
        k = 1
        while alive.any():
            k += 1
            power = self.table[power, np.arange(n)]
            newly = alive & (power == 0)
            orders[newly] = k
            alive &= ~newly
        return orders

    def power(self, a: int, k: int) -> int:
        result = 0
        for _ in range(k):
            result = int(self.table[result, a])
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())


def _find_identity(table: np.ndarray) -> int | None:
    n = table.shape[0]
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar):
            return e
    return None


def relabel_table(table: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Table of the same operation after renaming element ``perm[new] = old``."""
    perm = np.asarray(perm, dtype=np.int64)
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(len(perm))
    return inverse[table[np.ix_(perm, perm)]]


def _identity_swap(n: int, e: int) -> np.ndarray:
    perm = np.arange(n)
    perm[0], perm[e] = e, 0
    return perm


def _check_shape_and_range(table) -> np.ndarray:
    try:
        arr = np.asarray(table)
    except ValueError:
        raise GroupAxiomError("shape", (), "rows have different lengths") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise GroupAxiomError("shape", tuple(arr.shape), "table must be a non-empty square array")
    if not np.issubdtype(arr.dtype, np.integer):
        raise GroupAxiomError("range", (), "table entries must be integers")
    arr = arr.astype(np.int64)
    n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        r, c = map(int, bad[0])
        raise GroupAxiomError("range", (r, c), f"entry {int(arr[r, c])} outside 0..{n - 1}")
    return arr


def first_associativity_failure(table: np.ndarray, chunk: int = 64) -> tuple[int, int, int] | None:
    n = table.shape[0]
    table = table.astype(np.int16 if n < 2**15 else np.int64)  # narrower gathers are faster
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        left = table[table[a], :]  # (ab)c, indexed [a, b, c]
        right = table[a[:, None, None], table[None, :, :]]  # a(bc)
        diff = left != right
        if diff.any():
            bad = np.argwhere(diff)
            i, b, c = map(int, bad[0])
            return int(a[i]), b, c
    return None


def validate_group(table, normalize: bool = True) -> FiniteGroup:
    """Check the group axioms and return the group with identity moved to 0.

    Raises :class:`GroupAxiomError` naming the first violated axiom: range,
    identity, associativity, inverse (checked in that order).
    """
    arr = _check_shape_and_range(table)
    n = arr.shape[0]
    e = _find_identity(arr)
    if e is None:
        raise GroupAxiomError("identity", (), "no two-sided identity element")
    if e != 0:
        if not normalize:
            raise GroupAxiomError("identity", (e,), "identity is not element 0")
        arr = relabel_table(arr, _identity_swap(n, e))
    bad = first_associativity_failure(arr)
    if bad is not None:
        a, b, c = bad
        raise GroupAxiomError(
            "associativity", bad, f"({a}*{b})*{c} = {arr[arr[a, b], c]} but {a}*({b}*{c}) = {arr[a, arr[b, c]]}"
        )
    for a in range(n):
        if not (arr[a] == 0).any() or not (arr[:, a] == 0).any():
            raise GroupAxiomError("inverse", (a,), f"element {a} has no inverse")
    return FiniteGroup(arr)


# --- standard groups -------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n)


def abelian_group(factors: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups; element index is the mixed-radix number
    of the coordinates with the last factor varying fastest."""
    factors = [int(f) for f in factors if int(f) != 1] or [1]
    coords = np.array(list(itertools.product(*(range(f) for f in factors))), dtype=np.int64)
    mods = np.array(factors)
    strides = np.array([int(np.prod(factors[i + 1:])) for i in range(len(factors))])
    summed = (coords[:, None, :] + coords[None, :, :]) % mods
    return FiniteGroup(summed @ strides)


def abelian_coordinates(factors: Sequence[int], index: int) -> tuple[int, ...]:
    factors = [int(f) for f in factors if int(f) != 1] or [1]
    out = []
    for f in reversed(factors):
        out.append(index % f)
        index //= f
    return tuple(reversed(out))


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q``: apply ``q`` first."""
    return tuple(p[x] for x in q)


def _row_keys(P: np.ndarray) -> np.ndarray:
    """One scalar per row, injective on rows with entries below the row length,
    for sorting and lookup.  Base-``d`` integers while ``d**d`` fits in 64 bits,
    raw row bytes beyond that."""
    d = P.shape[-1]
    if d <= 15:
        return P @ (np.int64(d) ** np.arange(d, dtype=np.int64))
    P = np.ascontiguousarray(P, dtype=np.int64)
    return P.view(np.dtype((np.void, d * 8))).reshape(P.shape[:-1])


def close_permutations(generators: Iterable[Sequence[int]], degree: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All products of the generators, identity first, then breadth-first
    discovery order (frontier element, then generator)."""
    gens = sorted({tuple(int(x) for x in g) for g in generators})
    identity = tuple(range(degree))
    perms = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple([g[x] for x in p])
                if q not in seen:
                    seen.add(q)
                    perms.append(q)
                    nxt.append(q)
                    if limit is not None and len(perms) > limit:
                        raise BoundExceeded("perm_group_order", len(perms), limit)
        frontier = nxt
    return perms


def permutation_closure(generators: Iterable[Sequence[int]], degree: int, limit: int | None = None):
    """Close a set of permutations under composition.

    Returns ``(group, perms)`` where ``perms[k]`` is the permutation of element
    ``k``; elements are numbered in breadth-first discovery order with the
    identity first.
    """
    perms = close_permutations(generators, degree, limit)
    if degree == 0:
        return FiniteGroup(np.zeros((1, 1), dtype=np.int64)), perms
    P = np.array(perms, dtype=np.int64)
    keys = _row_keys(P)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    N = len(P)
    table = np.empty((N, N), dtype=np.int64)
    chunk = max(1, 2**22 // (N * degree))
    for lo in range(0, N, chunk):
        rows = P[lo:lo + chunk]
        # products[i, j] = p_i o p_j
        products = rows[np.arange(len(rows))[:, None, None], P[None, :, :]]
        table[lo:lo + chunk] = order[np.searchsorted(sorted_keys, _row_keys(products))]
    return FiniteGroup(table), perms


def symmetric_group(k: int):
    """Sym(k) with ``perms[i]`` the permutation of element ``i``."""
    gens = [tuple(range(1, k)) + (0,), (1, 0) + tuple(range(2, k))] if k > 1 else []
    return permutation_closure(gens, k)


# --- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form: its sorted element tuple."""

    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, x) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def is_trivial(self) -> bool:
        return self.elements == (0,)

    def is_normal(self) -> bool:
        return core(self.parent, self).elements == self.elements


def closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    seen = {0}
    frontier = [0]
    table = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)))


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Validate that ``elements`` form a subgroup of ``G``."""
    elems = sorted(set(int(e) for e in elements))
    if not elems or elems[0] != 0:
        raise ValueError(f"subgroup must contain the identity: {elems}")
    if elems[-1] >= G.order:
        raise ValueError(f"element {elems[-1]} outside group of order {G.order}")
    arr = np.array(elems)
    products = G.table[np.ix_(arr, arr)]
    if not np.isin(products, arr).all():
        raise ValueError(f"{elems} is not closed under the group operation")
    return Subgroup(G, tuple(elems))


def subgroups(G: FiniteGroup, bounds: Bounds = DEFAULT_BOUNDS) -> list[Subgroup]:
    """All subgroups of ``G`` sorted by (order, elements).

    Every subgroup is reached from the trivial one by repeatedly adjoining an
    element; adjoining ``g`` or any ``g*s`` with ``s`` in the current subgroup
    gives the same result, so only one element per left coset is tried.
    """
    bounds.check("subgroup_order", G.order)
    trivial = Subgroup(G, (0,))
    found = {trivial.elements: [0]}
    queue = [trivial.elements]
    table = G.table
    while queue:
        elems = queue.pop()
        gens = found[elems]
        covered = set(elems)
        for g in range(G.order):
            if g in covered:
                continue
            covered.update(int(x) for x in table[g, list(elems)])
            sub = closure(G, gens + [g])
            if sub.elements not in found:
                found[sub.elements] = gens + [g]
                queue.append(sub.elements)
    return sorted((Subgroup(G, e) for e in found), key=lambda s: (s.order, s.elements))


def conjugate(G: FiniteGroup, K: Subgroup | Iterable[int], g: int) -> tuple[int, ...]:
    """Elements of ``g K g^-1``, sorted."""
    elems = np.array(list(K), dtype=np.int64)
    return tuple(sorted(int(x) for x in G.table[G.table[g, elems], G.inv[g]]))


def _require_subgroup(G: FiniteGroup, K) -> Subgroup:
    if isinstance(K, Subgroup) and K.parent is G:
        return K
    return make_subgroup(G, K)


def core(G: FiniteGroup, K: Subgroup | Iterable[int]) -> Subgroup:
    """Largest normal subgroup of ``G`` contained in ``K``."""
    K = _require_subgroup(G, K)
    keep = np.zeros(G.order, dtype=bool)
    keep[list(K.elements)] = True
    elems = np.array(K.elements)
    for g in range(G.order):
        conj = np.zeros(G.order, dtype=bool)
        conj[G.table[G.table[g, elems], G.inv[g]]] = True
        keep &= conj
    return Subgroup(G, tuple(int(x) for x in np.nonzero(keep)[0]))


def intersect(G: FiniteGroup, subs: Iterable[Subgroup | Iterable[int]]) -> Subgroup:
    common = set(G.elements())
    for s in subs:
        common &= set(s)
    return Subgroup(G, tuple(sorted(common)))


def additive_generates(A: FiniteGroup, S: Iterable[int]) -> bool:
    if not A.is_abelian():
        raise ValueError("additive_generates needs an abelian group")
    return closure(A, S).order == A.order


def generating_set(A: FiniteGroup) -> list[int]:
    """Greedy generating set: repeatedly adjoin an element of largest order
    outside the current span (smallest index on ties)."""
    orders = A.element_orders()
    by_order = sorted(range(A.order), key=lambda x: (-orders[x], x))
    gens: list[int] = []
    span = {0}
    for x in by_order:
        if x in span:
            continue
        gens.append(x)
        span = set(closure(A, gens).elements)
        if len(span) == A.order:
            break
    return gens


# --- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class GroupMap:
    source: FiniteGroup = field(compare=False, repr=False)
    target: FiniteGroup = field(compare=False, repr=False)
    images: tuple[int, ...]

    @property
    def injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    @property
    def surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    def __call__(self, x: int) -> int:
        return self.images[x]

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(x for x, y in enumerate(self.images) if y == 0))


def group_map(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> GroupMap:
    """Validate a homomorphism; raises ValueError with a witness pair."""
    f = np.asarray(images, dtype=np.int64)
    if f.shape != (source.order,) or f.min() < 0 or f.max() >= target.order:
        raise ValueError("images must list one target element per source element")
    bad = np.argwhere(f[source.table] != target.table[np.ix_(f, f)])
    if len(bad):
        a, b = map(int, bad[0])
        raise ValueError(f"not a homomorphism at pair ({a}, {b})")
    return GroupMap(source, target, tuple(int(x) for x in f))


def extend_additive_maps(
    src: FiniteGroup,
    tgt: FiniteGroup,
    gens: Sequence[int],
    candidates: Sequence[Sequence[int]],
) -> Iterator[np.ndarray]:
    """Yield every injective homomorphism ``src -> tgt`` of abelian groups with
    ``gens[k]`` sent into ``candidates[k]``.

    Generators are assigned one at a time; after each assignment the map is
    propagated over the span so far, which catches relation conflicts and
    collisions early.  ``gens`` must generate ``src``.
    """
    n = src.order
    st, tt = src.table, tgt.table

    def extend(f: dict, rev: dict, assigned: list[tuple[int, int]]):
        f = dict(f)
        rev = dict(rev)
        queue = list(f)
        while queue:
            x = queue.pop()
            fx = f[x]
            for g, fg in assigned:
                y = int(st[x, g])
                fy = int(tt[fx, fg])
                if y in f:
                    if f[y] != fy:
                        return None
                    continue
                if fy in rev:
                    return None
                f[y] = fy
                rev[fy] = y
                queue.append(y)
        return f, rev

    def search(k: int, f: dict, rev: dict, assigned: list):
        if k == len(gens):
            if len(f) == n:
                out = np.empty(n, dtype=np.int64)
                for x, y in f.items():
                    out[x] = y
                yield out
            return
        for c in candidates[k]:
            nxt = assigned + [(gens[k], int(c))]
            res = extend(f, rev, nxt)
            if res is not None:
                yield from search(k + 1, res[0], res[1], nxt)

    yield from search(0, {0: 0}, {0: 0}, [])


def abelian_automorphisms(A: FiniteGroup, bounds: Bounds = DEFAULT_BOUNDS) -> list[GroupMap]:
    """All automorphisms of an abelian group, sorted by image tuple."""
    if not A.is_abelian():
        raise ValueError("abelian_automorphisms needs an abelian group")
    bounds.check("subgroup_order", A.order)
    gens = generating_set(A)
    orders = A.element_orders()
    candidates = [[y for y in range(A.order) if orders[y] == orders[g]] for g in gens]
    maps = sorted(tuple(int(v) for v in f) for f in extend_additive_maps(A, A, gens, candidates))
    return [GroupMap(A, A, m) for m in maps]


# --- holomorph ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Holomorph:
    """``A x| Aut(A)`` with element ``(a, phi_k)`` stored at index ``a*len(auts) + k``.

    ``action[h]`` is the permutation ``x -> a + phi_k(x)`` of the carrier of A.
    """

    group: FiniteGroup
    base: FiniteGroup
    automorphisms: tuple[tuple[int, ...], ...]
    action: np.ndarray

    def element(self, a: int, k: int) -> int:
        return a * len(self.automorphisms) + k

    def split(self, h: int) -> tuple[int, int]:
        return divmod(h, len(self.automorphisms))

    def translation(self, h: int) -> int:
        return h // len(self.automorphisms)


def holomorph(A: FiniteGroup, bounds: Bounds = DEFAULT_BOUNDS) -> Holomorph:
    auts = [m.images for m in abelian_automorphisms(A, bounds)]
    n, k = A.order, len(auts)
    bounds.check("holomorph_order", n * k)
    aut_arr = np.array(auts, dtype=np.int64)
    aut_index = {a: i for i, a in enumerate(auts)}
    comp = np.array([[aut_index[compose(p, q)] for q in auts] for p in auts], dtype=np.int64)
    a_part = np.repeat(np.arange(n), k)
    f_part = np.tile(np.arange(k), n)
    table = A.table[a_part[:, None], aut_arr[f_part[:, None], a_part[None, :]]] * k + comp[f_part[:, None], f_part[None, :]]
    action = A.table[a_part[:, None], aut_arr[f_part]]
    action.setflags(write=False)
    return Holomorph(FiniteGroup(table), A, tuple(auts), action)


def regular_subgroups(hol: Holomorph) -> list[Subgroup]:
    """Subgroups of the holomorph acting regularly on A.

    A regular subgroup contains exactly one element over each translation, so
    it is searched as a partial section ``a -> (a, phi_a)`` grown by closure;
    a closure that repeats a translation part is abandoned.
    """
    H = hol.group.table
    n = hol.base.order
    k = len(hol.automorphisms)
    found: set[tuple[int, ...]] = set()
    visited: set[frozenset] = set()

    def close(elems: frozenset, g: int):
        members = set(elems)
        members.add(g)
        trans = {h // k for h in members}
        if len(trans) != len(members):
            return None
        frontier = list(members)
        gens = list(members)
        while frontier:
            nxt = []
            for x in frontier:
                for y in gens:
                    z = int(H[x, y])
                    if z not in members:
                        t = z // k
                        if t in trans:
                            return None
                        trans.add(t)
                        members.add(z)
                        nxt.append(z)
            frontier = nxt
        return frozenset(members)

    def search(elems: frozenset):
        if len(elems) == n:
            found.add(tuple(sorted(elems)))
            return
        covered = {h // k for h in elems}
        a = min(x for x in range(n) if x not in covered)
        for f in range(k):
            nxt = close(elems, a * k + f)
            if nxt is None or nxt in visited:
                continue
            visited.add(nxt)
            search(nxt)

    search(frozenset([0]))
    return [Subgroup(hol.group, e) for e in sorted(found)]
