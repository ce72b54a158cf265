"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are echoed in the
pytest terminal summary and printed as they happen (visible with ``-s``).
"""

from __future__ import annotations

import contextlib
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from randnet import random_code, random_full_row_rank, random_invertible, random_network
from snc.errors import ConstructionFailed, FieldTooSmall
from snc.gf import FieldSpec, matrix_rank
from snc.lnc import (construct_decodable, global_kernels, is_decodable, load_kernels,
                     sink_matrix, transform)
from snc.network import primary_subsets
from snc.oracle import (all_wiretap_sets, exhaustive_decodability, exhaustive_secrecy,
                        admissible_lower_bound, valid_k_oracle)
from snc.slnc import (SecureCode, build_family, check_security, construct_Q, field_size_bound,
                      kappa_set, partition_wiretap_sets, reduce_rate)

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)

FIG3_GLOBAL = {
    "e1": [0, 1, 1], "e2": [1, 0, 1], "e3": [1, 0, 2], "e4": [0, 1, 2],
    "e5": [1, 0, 1], "e6": [1, 0, 1], "e7": [1, 0, 2], "e8": [1, 0, 2],
    "e9": [0, 0, 1], "e10": [0, 0, 1], "e11": [0, 0, 1],
}
FIG3_KERNELS = {"s": [[0, 1, 1, 0], [1, 0, 0, 1], [1, 1, 2, 2]], "v1": [[1, 1]],
                "v2": [[1, 1]], "v3": [[4], [1]], "v4": [[1, 1]]}


@contextlib.contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    """Record a PASS/FAIL line for the enclosed checks, enforcing a runtime limit."""
    info: dict[str, str] = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        detail = f" [{info['detail']}]" if "detail" in info else ""
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f} s){detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def _fig3_sc(fig3_code, fig3_q):
    return SecureCode(fig3_code, fig3_q, 2, 1)


def test_criterion_1_golden_kernels(fig3):
    with criterion(1, "fig3 global kernels reproduced exactly", limit=1.0) as info:
        net, f = fig3
        code = load_kernels(net, 3, FIG3_KERNELS, f)
        gk = {e: v.tolist() for e, v in global_kernels(code).items()}
        assert gk == FIG3_GLOBAL
        info["detail"] = "11/11 vectors"


def test_criterion_2_golden_collection(fig3, fig3_code):
    with criterion(2, "A_1 and its partition match the fig3 golden values", limit=1.0):
        net, f = fig3
        a1 = primary_subsets(net, 1)
        assert a1.sets == (("e1",), ("e2",), ("e3",), ("e4",), ("e9",))
        gk = global_kernels(fig3_code)
        trunc = {e: v[:2] for e, v in gk.items()}
        dep, ind = partition_wiretap_sets(np.array([[1], [0]]), trunc, a1, f)
        assert dep == (("e2",), ("e3",), ("e9",))
        assert ind == (("e1",), ("e4",))


def test_criterion_3_golden_kappa_sets(fig3, fig3_code):
    with criterion(3, "K_{e1} and K_{e4} match the fig3 golden values, |K_A| = q^(n-2)"):
        _, f = fig3
        gk = global_kernels(fig3_code)
        trunc = {e: v[:2] for e, v in gk.items()}
        last = {e: int(v[2]) for e, v in gk.items()}
        b = np.array([[1], [0]])
        k1 = kappa_set(("e1",), b, [0], trunc, last, f)
        k4 = kappa_set(("e4",), b, [0], trunc, last, f)
        assert k1 == {(0, 4), (4, 4), (3, 4), (2, 4), (1, 4)}
        assert k4 == {(0, 2), (2, 2), (4, 2), (1, 2), (3, 2)}
        assert len(k1) == len(k4) == 5 ** (3 - 2)


def test_criterion_4_golden_reduction(fig3, fig3_code, fig3_q):
    with criterion(4, "pinned h=[0,1], theta=3 reproduces the fig3 golden trace"):
        net, _ = fig3
        out, ctx = reduce_rate(_fig3_sc(fig3_code, fig3_q), primary_subsets(net, 1),
                               h=[0, 1], theta=3)
        assert ctx.k == (0, 3)
        assert out.code.source_kernel.tolist() == [[0, 1, 1, 0], [4, 3, 1, 2]]
        assert out.Q.tolist() == [[1, 0], [0, 1]]


def test_criterion_5_admissible_k(fig3, fig3_code, fig3_q):
    with criterion(5, "admissible k set on fig3") as info:
        net, f = fig3
        a1 = primary_subsets(net, 1)
        ks = valid_k_oracle(_fig3_sc(fig3_code, fig3_q), a1)
        assert len(ks) == 10
        assert {k[1] for k in ks} == {1, 3}
        assert (0, 3) in ks
        bound = admissible_lower_bound(f.p, 3, len(a1))
        assert bound == 0 < len(ks)
        info["detail"] = f"{len(ks)} vectors, lower bound {bound}"


def test_criterion_6_family(fig3, fig3_code):
    with criterion(6, "family at rates 2,1,0 verified by algebra and oracle", limit=5.0) as info:
        net, f = fig3
        fam = build_family(net, 1, f, seed=0, best_effort=True)
        assert fam.rates() == [2, 1, 0]
        scope = all_wiretap_sets(net, 1)
        assert len(scope) == 12
        for m in fam.members:
            assert check_security(m.code, m.Q, m.rate, 1, fam.collection)
            assert is_decodable(m.code)
            assert exhaustive_secrecy(m, scope)
            assert exhaustive_decodability(m)
        base = fam.members[0].code
        for m in fam.members[1:]:
            for v in ("v1", "v2", "v3", "v4"):
                a, b = m.code.kernels[v], base.kernels[v]
                assert a.dtype == b.dtype and a.shape == b.shape and a.tobytes() == b.tobytes()
        # the same holds starting from the displayed kernels
        fam2 = build_family(net, 1, f, base_code=fig3_code, best_effort=True)
        assert fam2.rates() == [2, 1, 0] and fam2.shares_kernels()
        for m in fam2.members:
            assert exhaustive_secrecy(m, scope) and exhaustive_decodability(m)
        info["detail"] = "2 families x 3 members"


def test_criterion_7_oracle_equivalence():
    with criterion(7, "check_security on A_r agrees with the exhaustive oracle",
                   limit=120.0) as info:
        rng = np.random.default_rng(20240607)
        instances = comparisons = secure = disagreements = 0
        while instances < 200:
            net = random_network(rng, max_nodes=7, max_edges=10)
            r = int(rng.integers(1, 3))
            if r > net.c_min:
                continue
            f = FieldSpec(int(rng.choice([3, 5, 7])))
            rate = int(rng.integers(1, max(1, net.c_min - r) + 1))
            n = rate + r
            if f.p ** n > 20000:
                continue
            instances += 1
            if n <= net.c_min and rng.random() < 0.5:
                try:
                    code = construct_decodable(net, n, f, seed=int(rng.integers(2**31)))
                except ConstructionFailed:
                    code = random_code(rng, net, n, f)
            else:
                code = random_code(rng, net, n, f)
            coll = primary_subsets(net, r)
            scope = all_wiretap_sets(net, r)
            qs = [random_invertible(rng, n, f)]
            try:
                qs.append(construct_Q(code, rate, r, coll))
            except FieldTooSmall:
                pass
            for q in qs:
                algebra = check_security(code, q, rate, r, coll)
                oracle = exhaustive_secrecy(SecureCode(code, q, rate, r), scope).passed
                comparisons += 1
                secure += oracle
                disagreements += algebra != oracle
        info["detail"] = (f"{instances} networks, {comparisons} codes, {secure} secure, "
                          f"{disagreements} disagreements")
        assert disagreements == 0


def test_criterion_8_field_size_guarantee():
    with criterion(8, "q > max(|T|, |A_r|) never raises FieldTooSmall") as info:
        rng = np.random.default_rng(8)
        trials = failures = resampled = 0
        while trials < 120:
            net = random_network(rng, max_nodes=7, max_edges=10)
            r = int(rng.integers(1, 3))
            if r > net.c_min:
                continue
            coll = primary_subsets(net, r)
            bound = field_size_bound(net, coll)
            above = [p for p in PRIMES if p > bound]
            f = FieldSpec(int(rng.choice(above[:3])))
            try:
                code = construct_decodable(net, net.c_min, f, seed=int(rng.integers(2**31)))
            except ConstructionFailed:
                resampled += 1
                continue
            trials += 1
            try:
                sc = SecureCode(code, construct_Q(code, net.c_min - r, r, coll),
                                net.c_min - r, r)
                while sc.rate > 0:
                    sc, _ = reduce_rate(sc, coll)
                    assert check_security(sc.code, sc.Q, sc.rate, r, coll)
                    assert is_decodable(sc.code)
            except FieldTooSmall:
                failures += 1
        info["detail"] = (f"{trials} trials, {failures} FieldTooSmall, "
                          f"{resampled} resampled for lack of a decodable base code")
        assert failures == 0


def test_criterion_9_transformation():
    with criterion(9, "transformed global kernels equal Q f_e, decodability kept") as info:
        rng = np.random.default_rng(9)
        counterexamples = decodable_cases = 0
        for _ in range(250):
            net = random_network(rng)
            f = FieldSpec(int(rng.choice([2, 3, 5, 7, 11])))
            n = int(rng.integers(1, min(4, net.c_min) + 1))
            if rng.random() < 0.5:
                try:
                    code = construct_decodable(net, n, f, seed=int(rng.integers(2**31)))
                except ConstructionFailed:
                    code = random_code(rng, net, n, f)
            else:
                code = random_code(rng, net, n, f)
            m = int(rng.integers(1, n + 1))
            q = random_full_row_rank(rng, m, n, f)
            t = transform(q, code)
            gk, gt = global_kernels(code), global_kernels(t)
            bad = any(not np.array_equal(gt[e], f.matmul(q, gk[e])) for e in net.edge_ids)
            if is_decodable(code):
                decodable_cases += 1
                bad = bad or not is_decodable(t)
                bad = bad or any(matrix_rank(sink_matrix(t, s), f) != m for s in net.sinks)
            counterexamples += bad
        info["detail"] = (f"250 trials, {decodable_cases} with decodable codes, "
                          f"{counterexamples} counterexamples")
        assert counterexamples == 0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
