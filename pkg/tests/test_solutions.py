import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braceybe.braces import enumerate_braces, rump_brace, trivial_brace
from braceybe.corpus import corpus
from braceybe.groups import cyclic_group
from braceybe.solutions import (
    ConfigError,
    Solution,
    SolutionConfig,
    action_kernel,
    check_perm_brace_iso,
    config_violation,
    construct_solution,
    core_intersection,
    gamma_map,
    gamma_table,
    permutation_group,
    relabel_solution,
    verify_solution,
)

SMALL_CORPUS = [e.config for e in corpus(5)]


def _z(p):
    return trivial_brace(cyclic_group(p))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_prime_cyclic_example(p):
    """X = {1} with K = 0: every sigma_x is the same p-cycle."""
    s = construct_solution(SolutionConfig.build(_z(p), [1], [[[0]]]))
    cycle = [(y + 1) % p for y in range(p)]
    assert s.sigma.tolist() == [cycle] * p
    assert verify_solution(s).ok
    assert s.labels[0] == "orbit:0/family:0/coset:0"


@pytest.mark.parametrize(
    "reps, families, reason",
    [
        ([1], [], "shape"),
        ([7], [[[0]]], "range"),
        ([1, 1], [[[0]], [[0]]], "orbit"),
        ([1], [[]], "family"),
        ([0], [[[0]]], "generation"),
        ([1], [[[0, 1, 2]]], "core"),
    ],
)
def test_config_violations(reps, families, reason):
    cfg = SolutionConfig.build(_z(3), reps, families)
    err = config_violation(cfg)
    assert err is not None and err.reason == reason
    with pytest.raises(ConfigError):
        construct_solution(cfg)


def test_stabilizer_violation():
    # in Rump (3,2,1) the stabilizer of 1 is {0,3,6}; the whole group is too big
    B = rump_brace(3, 2, 1)
    cfg = SolutionConfig.build(B, [1], [[list(range(9))]])
    assert config_violation(cfg).reason == "stabilizer"


@given(st.sampled_from(SMALL_CORPUS))
@settings(max_examples=60, deadline=None)
def test_constructed_solutions_verify(cfg):
    s = construct_solution(cfg)
    assert s.size == cfg.size
    assert verify_solution(s).ok
    cert = check_perm_brace_iso(s)
    assert cert, cert.witness
    assert permutation_group(s).order == cfg.brace.order


@given(st.sampled_from(SMALL_CORPUS))
@settings(max_examples=60, deadline=None)
def test_action_kernel_is_core_intersection(cfg):
    assert action_kernel(cfg) == core_intersection(cfg)


def test_action_kernel_of_invalid_config():
    # K = G on Z/3: every element acts trivially on the single coset
    cfg = SolutionConfig.build(_z(3), [1], [[[0, 1, 2]]])
    assert action_kernel(cfg) == core_intersection(cfg) == (0, 1, 2)


def test_gamma_is_forced_by_involutivity():
    s = construct_solution(SolutionConfig.build(_z(3), [0, 1], [[[0]], [[0, 1, 2]]]))
    sig = s.sigma
    gam = gamma_table(sig)
    for x in range(s.size):
        for y in range(s.size):
            u, v = sig[x, y], gam[y, x]
            assert sig[u, v] == x and gam[v, u] == y
    assert gamma_map(s, 0) == tuple(int(v) for v in gam[0])


def test_verify_detects_each_failure():
    rep = verify_solution(np.array([[0, 0], [0, 1]]))
    assert rep.nondegenerate is False and "sigma_not_bijective" in rep.witness
    # sigma_0 = swap, sigma_1 = identity: gamma_0 is not a bijection
    rep = verify_solution(np.array([[1, 0], [0, 1]]))
    assert not rep.ok
    # a braid failure on three points with bijective maps
    rep = verify_solution(np.array([[1, 2, 0], [0, 1, 2], [0, 1, 2]]))
    assert not rep.ok
    with pytest.raises(ValueError):
        verify_solution(np.array([[0, 3], [1, 0]]))


def test_gamma_map_rejects_degenerate():
    with pytest.raises(ValueError):
        gamma_map(Solution([[1, 0], [0, 1]]), 0)


def test_check_perm_brace_iso_flags_a_foreign_solution():
    cfg = SolutionConfig.build(_z(3), [1], [[[0]]])
    s = Solution([[0, 1, 2]] * 3, config=cfg)
    cert = check_perm_brace_iso(s)
    assert not cert and not cert.sigma_agrees


@given(st.sampled_from(SMALL_CORPUS), st.data())
@settings(max_examples=30, deadline=None)
def test_relabelling_keeps_a_solution(cfg, data):
    s = construct_solution(cfg)
    perm = data.draw(st.permutations(range(s.size)))
    t = relabel_solution(s, perm)
    assert verify_solution(t).ok
    # sigma_{perm x}(perm y) = perm sigma_x(y)
    p = np.array(perm)
    assert np.array_equal(t.sigma[np.ix_(p, p)], p[s.sigma])
    assert t.labels[perm[0]] == s.labels[0]


def test_order_one_brace_gives_identity_solutions():
    B = enumerate_braces(1)[0]
    s = construct_solution(SolutionConfig.build(B, [0], [[[0]], ] * 1))
    assert s.sigma.tolist() == [[0]]
    s3 = construct_solution(SolutionConfig.build(B, [0], [[[0], [0], [0]]]))
    assert s3.sigma.tolist() == [[0, 1, 2]] * 3
