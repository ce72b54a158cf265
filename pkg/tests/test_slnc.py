from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randnet import random_network
from snc.errors import (DimensionMismatch, FieldTooSmall, InvalidChoice, NotIndependent,
                        RateExhausted, SecurityLevelTooHigh, Singular)
from snc.gf import FieldSpec, Subspace, matrix_rank
from snc.lnc import global_kernels, is_decodable, load_kernels
from snc.network import Network, primary_subsets
from snc.oracle import (all_wiretap_sets, exhaustive_decodability, exhaustive_secrecy,
                        valid_k_oracle)
from snc.slnc import (SecureCode, build_family, check_security, construct_Q, failing_set,
                      field_size_bound, kappa_set, partition_wiretap_sets, reduce_rate)

K_E1 = {(0, 4), (4, 4), (3, 4), (2, 4), (1, 4)}
K_E4 = {(0, 2), (2, 2), (4, 2), (1, 2), (3, 2)}


@pytest.fixture()
def fig3_sc(fig3_code, fig3_q):
    return SecureCode(fig3_code, fig3_q, 2, 1)


def _truncated(code):
    gk = global_kernels(code)
    n = code.dimension
    return {e: v[:n - 1] for e, v in gk.items()}, {e: int(v[n - 1]) for e, v in gk.items()}


def test_secure_code_validation(fig3_code):
    with pytest.raises(DimensionMismatch):
        SecureCode(fig3_code, np.eye(3, dtype=int), 2, 2)
    with pytest.raises(Singular):
        SecureCode(fig3_code, np.zeros((3, 3), dtype=int), 2, 1)
    with pytest.raises(DimensionMismatch):
        SecureCode(fig3_code, np.eye(2, dtype=int), 2, 1)


def test_check_security_fig3(fig3, fig3_code, fig3_q):
    net, _ = fig3
    a1 = primary_subsets(net, 1)
    assert check_security(fig3_code, fig3_q, 2, 1, a1)
    # a message column equal to f_{e1} leaks on e1
    q = np.array([[0, 1, 0], [1, 0, 0], [1, 0, 1]])
    assert failing_set(fig3_code, q, 1, 1, a1) == ("e1",)
    assert not check_security(fig3_code, fig3_q, 2, 2, primary_subsets(net, 2))
    assert check_security(fig3_code, fig3_q, 0, 1, a1)
    with pytest.raises(DimensionMismatch):
        check_security(fig3_code, fig3_q, 2, 2, a1)


def test_construct_q_fig3(fig3, fig3_code):
    net, f = fig3
    a1 = primary_subsets(net, 1)
    q = construct_Q(fig3_code, 2, 1, a1)
    assert matrix_rank(q, f) == 3
    assert check_security(fig3_code, q, 2, 1, a1)
    assert exhaustive_secrecy(SecureCode(fig3_code, q, 2, 1), all_wiretap_sets(net, 1))
    with pytest.raises(DimensionMismatch):
        construct_Q(fig3_code, 2, 2, a1)


def test_construct_q_security_zero_is_anti_identity(fig3, fig3_code):
    q = construct_Q(fig3_code, 3, 0, primary_subsets(fig3[0], 0))
    assert q.tolist() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_construct_q_field_too_small():
    # over F_2 the three nonzero vectors of F_2^2 are all wiretapped
    net = Network(["s", "a", "b", "c", "t"],
                  [("e1", "s", "a"), ("e2", "s", "b"), ("e3", "s", "c"), ("x", "a", "t"),
                   ("y", "b", "t"), ("z", "c", "t")], "s", ["t"])
    f = FieldSpec(2)
    code = load_kernels(net, 2, {"s": [[1, 0, 1], [0, 1, 1]], "a": [[1]], "b": [[1]],
                                 "c": [[1]]}, f)
    with pytest.raises(FieldTooSmall):
        construct_Q(code, 1, 1, primary_subsets(net, 1))


def test_partition_golden(fig3, fig3_code):
    net, f = fig3
    trunc, _ = _truncated(fig3_code)
    dep, ind = partition_wiretap_sets(np.array([[1], [0]]), trunc, primary_subsets(net, 1), f)
    assert dep == (("e2",), ("e3",), ("e9",))
    assert ind == (("e1",), ("e4",))


def test_kappa_sets_golden(fig3, fig3_code):
    _, f = fig3
    trunc, last = _truncated(fig3_code)
    b = np.array([[1], [0]])
    assert kappa_set(("e1",), b, [0], trunc, last, f) == K_E1
    assert kappa_set(("e4",), b, [0], trunc, last, f) == K_E4
    with pytest.raises(NotIndependent):
        kappa_set(("e2",), b, [0], trunc, last, f)


def test_reduce_pinned_golden(fig3, fig3_sc):
    net, _ = fig3
    a1 = primary_subsets(net, 1)
    out, ctx = reduce_rate(fig3_sc, a1, h=[0, 1], theta=3)
    assert ctx.k == (0, 3)
    assert ctx.theta_table == {("e1",): 1, ("e4",): 2}
    assert out.code.source_kernel.tolist() == [[0, 1, 1, 0], [4, 3, 1, 2]]
    assert out.Q.tolist() == [[1, 0], [0, 1]]
    assert (out.rate, out.security_level) == (1, 1)
    for v in ("v1", "v2", "v3", "v4"):
        assert out.code.kernels[v] is fig3_sc.code.kernels[v]
    assert check_security(out.code, out.Q, 1, 1, a1) and is_decodable(out.code)


def test_reduce_default_choices(fig3, fig3_sc):
    out, ctx = reduce_rate(fig3_sc, primary_subsets(fig3[0], 1))
    assert ctx.h == (0, 1) and ctx.theta == 1 and ctx.k == (0, 1)
    assert ctx.removed_column == 2


@pytest.mark.parametrize("pins", [{"h": [1, 0]}, {"h": [0, 0]}, {"h": [0, 1, 0]},
                                  {"h": [0, 1], "theta": 2}, {"h": [0, 1], "theta": 0},
                                  {"h": [0, 1], "theta": 4}])
def test_reduce_rejects_illegal_pins(fig3, fig3_sc, pins):
    with pytest.raises(InvalidChoice):
        reduce_rate(fig3_sc, primary_subsets(fig3[0], 1), **pins)


def test_reduce_rate_zero(fig3, fig3_code):
    coll = primary_subsets(fig3[0], 3)
    with pytest.raises(RateExhausted):
        reduce_rate(SecureCode(fig3_code, np.eye(3, dtype=int), 0, 3), coll)


def test_valid_k_matches_kappa_complement(fig3, fig3_code, fig3_sc):
    """Admissible k are exactly those outside every forbidden span and every K_A."""
    net, f = fig3
    a1 = primary_subsets(net, 1)
    trunc, last = _truncated(fig3_code)
    b = np.array([[1], [0]])
    dep, ind = partition_wiretap_sets(b, trunc, a1, f)
    bad = set()
    for a in dep:
        bad |= Subspace.span([b[:, 0]] + [trunc[e] for e in a], 2, f).elements()
    for a in ind:
        bad |= kappa_set(a, b, [0], trunc, last, f)
    expected = sorted(set(itertools.product(range(5), repeat=2)) - bad)
    assert valid_k_oracle(fig3_sc, a1) == expected


def test_family_fig3(fig3, fig3_code):
    net, f = fig3
    with pytest.raises(FieldTooSmall, match="max"):
        build_family(net, 1, f)
    fam = build_family(net, 1, f, base_code=fig3_code, best_effort=True)
    assert fam.rates() == [2, 1, 0]
    assert fam.shares_kernels()
    assert field_size_bound(net, fam.collection) == 5
    with pytest.raises(SecurityLevelTooHigh):
        build_family(net, 4, FieldSpec(7))


def test_family_security_zero_and_full(fig3):
    net, _ = fig3
    fam0 = build_family(net, 0, FieldSpec(5), seed=2)
    assert fam0.rates() == [3, 2, 1, 0]
    fam3 = build_family(net, 3, FieldSpec(7), seed=2, best_effort=True)
    assert fam3.rates() == [0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_random_families_pass_the_oracle(seed, r):
    rng = np.random.default_rng(seed)
    net = random_network(rng, max_nodes=6, max_edges=8, min_cmin=r)
    coll = primary_subsets(net, r)
    bound = field_size_bound(net, coll)
    p = next(q for q in (3, 5, 7, 11, 13, 17, 19, 23, 29) if q > bound)
    fam = build_family(net, r, FieldSpec(p), seed=seed, collection=coll)
    assert fam.shares_kernels()
    for m, ctx in zip(fam.members, fam.contexts):
        if p ** (m.dimension - 1) * max(1, len(coll)) <= 20_000:
            assert ctx.k in valid_k_oracle(m, coll, kept=ctx.kept)
    scope = all_wiretap_sets(net, r)
    for m in fam.members:
        if p ** m.dimension * len(scope) > 2_000_000:
            continue
        assert exhaustive_secrecy(m, scope)
        assert exhaustive_decodability(m)
