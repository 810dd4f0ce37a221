"""Isomorphism of solutions: a direct bijection search and the decision
procedure through brace automorphisms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .braces import Brace, brace_automorphisms, brace_isomorphic, mul_subgroups, orbit, stabilizer
from .config import DEFAULT_BOUNDS, Bounds
from .solutions import Solution, SolutionConfig, coset_layout


def cycle_type(perm) -> tuple[int, ...]:
    perm = list(perm)
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def _point_invariants(s: Solution) -> list[tuple]:
    """Per point: cycle type of ``sigma_x``, how many points share that map,
    and how many of the maps fix the point."""
    if "invariants" not in s.memo:
        rows = [tuple(r) for r in s.sigma.tolist()]
        mult = Counter(rows)
        fixers = (s.sigma == np.arange(s.size)[None, :]).sum(axis=0).tolist()
        s.memo["invariants"] = [(cycle_type(r), mult[r], f) for r, f in zip(rows, fixers)]
    return s.memo["invariants"]


def invariant_key(s: Solution) -> tuple:
    """Sorted point invariants; unequal keys rule out isomorphism."""
    if "invariant_key" not in s.memo:
        s.memo["invariant_key"] = (s.size, tuple(sorted(_point_invariants(s))))
    return s.memo["invariant_key"]


def is_solution_morphism(s: Solution, t: Solution, F) -> bool:
    """``F(sigma_x(y)) = sigma_{F(x)}(F(y))`` for all x, y."""
    F = np.asarray(F, dtype=np.int64)
    return bool(np.array_equal(F[s.sigma], t.sigma[np.ix_(F, F)]))


def is_solution_isomorphism(s: Solution, t: Solution, F) -> bool:
    return s.size == t.size and len(set(int(v) for v in F)) == s.size and is_solution_morphism(s, t, F)


def solutions_isomorphic_bruteforce(s: Solution, t: Solution, bounds: Bounds = DEFAULT_BOUNDS) -> tuple[int, ...] | None:
    """Search bijections point by point; every assigned pair forces the image of
    ``sigma_x(y)``, which is propagated before branching again."""
    bounds.check("iso_points", max(s.size, t.size))
    if s.size != t.size:
        return None
    m = s.size
    inv_s, inv_t = _point_invariants(s), _point_invariants(t)
    if invariant_key(s) != invariant_key(t):
        return None
    S, T = s.sigma.tolist(), t.sigma.tolist()
    candidates = [[y for y in range(m) if inv_t[y] == inv_s[x]] for x in range(m)]

    def assign(F: dict, used: set, x: int, y: int) -> bool:
        """Add ``x -> y`` and everything it forces through
        ``F(sigma_a(b)) = sigma_{F(a)}(F(b))``."""
        queue = [(x, y)]
        while queue:
            a, fa = queue.pop()
            if a in F:
                if F[a] != fa:
                    return False
                continue
            if fa in used or inv_t[fa] != inv_s[a]:
                return False
            F[a] = fa
            used.add(fa)
            for b, fb in list(F.items()):
                queue.append((S[a][b], T[fa][fb]))
                queue.append((S[b][a], T[fb][fa]))
        return True

    def search(F: dict, used: set):
        if len(F) == m:
            return F
        x = min((p for p in range(m) if p not in F), key=lambda p: len(candidates[p]))
        for y in candidates[x]:
            if y in used:
                continue
            F2, used2 = dict(F), set(used)
            if assign(F2, used2, x, y):
                res = search(F2, used2)
                if res is not None:
                    return res
        return None

    res = search({}, set())
    if res is None:
        return None
    F = tuple(res[x] for x in range(m))
    assert is_solution_isomorphism(s, t, F)
    return F


@dataclass(frozen=True)
class IsoWitness:
    """``psi`` maps the first brace onto the second; ``alpha[i]`` is the target
    orbit of orbit ``i``; ``beta[i][k]`` the target family member of
    ``K[i][k]``; ``z[i][k]`` the conjugating element."""

    psi: tuple[int, ...]
    alpha: tuple[int, ...]
    beta: tuple[tuple[int, ...], ...]
    z: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class _PairOrbits:
    """``G`` acts on pairs ``(x, K)`` with ``K <= St(x)`` by
    ``g.(x, K) = (lambda_g(x), gKg^-1)``.  ``label[(x, K)]`` is the orbit of a
    pair; ``aut_perm[a]`` is how automorphism ``auts[a]`` moves the labels."""

    label: dict
    auts: np.ndarray
    aut_perm: np.ndarray


def _image(f, K) -> tuple[int, ...]:
    return tuple(sorted(int(f[k]) for k in K))


def _pair_orbits(B: Brace, bounds: Bounds) -> _PairOrbits:
    if "pair_orbits" in B.memo:
        return B.memo["pair_orbits"]
    M, inv, lam = B.mul.table, B.inv, B.lam
    lattice = mul_subgroups(B, bounds)
    label: dict = {}
    reps: list = []
    for x in range(B.order):
        stab = set(stabilizer(B, x).elements)
        for K in lattice:
            if (x, K.elements) in label or not set(K.elements) <= stab:
                continue
            elems = np.array(K.elements)
            for g in range(B.order):
                pair = (int(lam[g, x]), tuple(sorted(int(v) for v in M[M[g, elems], inv[g]])))
                label.setdefault(pair, len(reps))
            reps.append((x, K.elements))
    auts = np.array(brace_automorphisms(B, bounds), dtype=np.int64)
    aut_perm = np.array([[label[(int(f[x]), _image(f, K))] for x, K in reps] for f in auts], dtype=np.int64)
    B.memo["pair_orbits"] = _PairOrbits(label, auts, aut_perm)
    return B.memo["pair_orbits"]


def config_invariant(cfg: SolutionConfig) -> tuple:
    if "invariant" in cfg.memo:
        return cfg.memo["invariant"]
    n = cfg.brace.order
    parts = sorted(
        (len(orbit(cfg.brace, x)), tuple(sorted(n // K.order for K in fam))) for x, fam in zip(cfg.reps, cfg.families)
    )
    cfg.memo["invariant"] = (cfg.size, tuple(parts))
    return cfg.memo["invariant"]


def solutions_isomorphic_thm(
    cfg1: SolutionConfig, cfg2: SolutionConfig, bounds: Bounds = DEFAULT_BOUNDS
) -> IsoWitness | None:
    """Decide isomorphism of the two constructed solutions.

    Looks for a brace automorphism ``psi`` (composed with a brace isomorphism
    when the configs live on different brace objects) together with an orbit
    bijection ``alpha``, family bijections ``beta_i`` and elements ``z`` such
    that ``psi(x_i) = lambda_z(y_alpha(i))`` and
    ``psi(K_{i,k}) = z L_{alpha(i), beta_i(k)} z^-1``.

    Both conditions together say that ``(psi(x_i), psi(K_{i,k}))`` and
    ``(y_j, L_{j,l})`` lie in one orbit of pairs, so ``psi`` works exactly
    when it carries the multiset of pair orbits of the first config onto that
    of the second.  All automorphisms are tested at once on these labels and
    the witness is assembled for the first one that fits.
    """
    B1, B2 = cfg1.brace, cfg2.brace
    if B1 is B2 or B1 == B2:
        phi = np.arange(B1.order)
    else:
        found = brace_isomorphic(B1, B2, bounds)
        if found is None:
            raise ValueError("configurations live on non-isomorphic braces")
        phi = np.array(found, dtype=np.int64)
    if config_invariant(cfg1) != config_invariant(cfg2):
        return None
    po = _pair_orbits(B2, bounds)
    target = _own_labels(cfg2, po).tobytes()
    if B1 is B2:
        hit = _moved_labels(cfg1, po).get(target)
    else:
        first = _labels(cfg1, po, phi)
        moved = np.sort(po.aut_perm[:, first], axis=1)
        hits = [a for a, row in enumerate(moved) if row.tobytes() == target]
        hit = hits[0] if hits else None
    if hit is None:
        return None
    psi = po.auts[hit][phi]
    return _assemble_witness(cfg1, cfg2, psi)


def _labels(cfg: SolutionConfig, po: _PairOrbits, phi: np.ndarray) -> np.ndarray:
    """Sorted pair-orbit labels of the config carried along ``phi``."""
    return np.sort(np.array([po.label[(int(phi[cfg.reps[i]]), _image(phi, K.elements))] for i, _, K in cfg.pairs()], dtype=np.int64))


def _own_labels(cfg: SolutionConfig, po: _PairOrbits) -> np.ndarray:
    if "labels" not in cfg.memo:
        cfg.memo["labels"] = _labels(cfg, po, np.arange(cfg.brace.order))
    return cfg.memo["labels"]


def _moved_labels(cfg: SolutionConfig, po: _PairOrbits) -> dict:
    """Label multiset of ``psi(cfg)`` for every automorphism ``psi``, keyed by
    bytes, mapped to the first such automorphism.  Cached per config."""
    if "moved" not in cfg.memo:
        moved = np.sort(po.aut_perm[:, _own_labels(cfg, po)], axis=1)
        table: dict = {}
        for a, row in enumerate(moved):
            table.setdefault(row.tobytes(), a)
        cfg.memo["moved"] = table
    return cfg.memo["moved"]


def _assemble_witness(cfg1: SolutionConfig, cfg2: SolutionConfig, psi: np.ndarray) -> IsoWitness:
    B2 = cfg2.brace
    M, inv, lam = B2.mul.table, B2.inv, B2.lam
    orbit_index = {e: j for j, y in enumerate(cfg2.reps) for e in orbit(B2, y)}
    alpha = tuple(orbit_index[int(psi[x])] for x in cfg1.reps)
    beta, zs = [], []
    for i, fam in enumerate(cfg1.families):
        j = alpha[i]
        y, target = cfg2.reps[j], cfg2.families[j]
        movers = [z for z in range(B2.order) if lam[z, y] == psi[cfg1.reps[i]]]
        free = list(range(len(target)))
        row_b, row_z = [], []
        for K in fam:
            image = _image(psi, K.elements)
            # members in one pair orbit are interchangeable, so greedy matching is enough
            for l in free:
                elems = np.array(target[l].elements)
                z = next((z for z in movers if tuple(sorted(M[M[z, elems], inv[z]].tolist())) == image), None)
                if z is not None:
                    free.remove(l)
                    row_b.append(l)
                    row_z.append(z)
                    break
            else:
                raise AssertionError("pair orbits matched but no family bijection exists")
        beta.append(tuple(row_b))
        zs.append(tuple(row_z))
    return IsoWitness(tuple(int(v) for v in psi), alpha, tuple(beta), tuple(zs))


def expand_witness(w: IsoWitness, cfg1: SolutionConfig, cfg2: SolutionConfig) -> tuple[int, ...]:
    """The point bijection ``g K_{i,k} -> psi(g) z_{i,k} L_{alpha(i), beta_i(k)}``."""
    M2 = cfg2.brace.mul.table
    lay1, lay2 = coset_layout(cfg1), coset_layout(cfg2)
    F = []
    for (i, k), reps in zip(lay1.blocks, lay1.reps):
        owner = lay2.point[(w.alpha[i], w.beta[i][k])]
        z = w.z[i][k]
        F.extend(int(owner[M2[w.psi[g], z]]) for g in reps)
    return tuple(F)
