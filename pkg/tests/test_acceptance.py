"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py).
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import ACCEPTANCE_LOG
from test_designs import brute_kappas, brute_tensor_sum

from gsmkit import reference as ref
from gsmkit.applications import (
    Verdict, c_max, dual_frame, eur_bound, probabilities, purity_from_probabilities,
    random_separable_state, separability_test, shannon_renyi_check,
)
from gsmkit.basis import gell_mann_basis, partition_basis, random_partition
from gsmkit.cli import main
from gsmkit.construction import (
    ALL_VARIANTS, Variant, block_t_range, build_measurement_block, match_elements, max_feasible_r,
    max_feasible_x, recover_basis_block, t_from_x, variant_coincidence,
)
from gsmkit.designs import DesignKind, certify_design
from gsmkit.exceptions import NotInformationallyCompleteError
from gsmkit.gsm import ClassTag, classify, construct_gsm, is_informationally_complete, r_class_gsm, verify_gsm
from gsmkit.operator_algebra import max_entangled_projector, random_density_matrix, random_pure_state

# Frozen output of tools/bell_oracle.py (independent brute-force code path).
BELL_TRACE_NORM = {
    (2, (2, 3)): 1.3333333333333324,
    (3, (3, 3, 3, 3)): 2.222222222222223,
}

UP = Variant(False, 1)


@contextmanager
def criterion(name):
    info = {}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE_LOG.append((name, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"))
        raise
    info.setdefault("elapsed", f"{time.perf_counter() - t0:.2f}s")
    ACCEPTANCE_LOG.append((name, True, ", ".join(f"{k}={v}" for k, v in info.items())))


def test_c01_projective_qubit_pair(capsys, tmp_path):
    with criterion("1 projective qubit pair golden") as info:
        t0 = time.perf_counter()
        path = tmp_path / "p.json"
        assert main(["construct", "-d", "2", "--blocks", "2,3", "--projective", "-o", str(path)]) == 0
        assert main(["verify", str(path)]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["valid"] and rep["informationally_complete"]["value"]

        res = verify_gsm(ref.qubit_projective_2_3(), 2)
        assert res.ok and res.max_deviation <= 1e-10
        assert_allclose(res.gsm.params.w, [1, 2 / 3], atol=1e-10)
        assert_allclose(res.gsm.params.z[0, 1], 1 / 3, atol=1e-10)
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0
        info.update(max_dev=f"{res.max_deviation:.1e}", elapsed=f"{elapsed:.3f}s")


def test_c02_qutrit_diagonal():
    with criterion("2 qutrit diagonal golden") as info:
        p = partition_basis(list(ref.qutrit_diagonal_pair()), [3])
        golden = ref.qutrit_diagonal_povms()
        worst = 0.0
        for name, v, t, x in (("t_max", UP, ref.QUTRIT_T_MAX, 1.0),
                              ("t_min", Variant(False, -1), ref.QUTRIT_T_MIN, 0.5),
                              ("plus_abs_t_min", UP, -ref.QUTRIT_T_MIN, 0.5)):
            e = build_measurement_block(p, 0, v, t)
            worst = max(worst, np.max(np.abs(e - golden[name])))
            g = verify_gsm([e], 3).gsm
            assert_allclose(g.params.x[0], x, atol=1e-10)
        assert worst <= 1e-10
        info["max_entry_err"] = f"{worst:.1e}"


def test_c03_qubit_sic_families():
    with criterion("3 qubit SIC families") as info:
        p = partition_basis(gell_mann_basis(2), [4])
        assert_allclose(np.array(gell_mann_basis(2)), ref.PAULI_BASIS, atol=1e-15)
        lo, hi = block_t_range(p, 0, False)
        lop, hip = block_t_range(p, 0, True)
        assert_allclose([1 / hi, -1 / lo], 6 * np.sqrt(6), rtol=1e-12)
        assert_allclose([1 / hip, -1 / lop], 2 * np.sqrt(6), rtol=1e-12)

        fams = ref.qubit_sic_families()
        sigma, g_alt = ref.PAULI_BASIS, ref.qubit_g_basis()
        worst = 0.0
        for v in ALL_VARIANTS:
            t = v.sign * (hip if v.primed else hi)
            e = build_measurement_block(p, 0, v, t)
            worst = max(worst, np.max(np.abs(e - fams[str(v)])))
            res = verify_gsm([e], 2)
            assert res.ok and res.gsm.n_povms == 1 and res.gsm.block_sizes == (4,)
            assert_allclose(res.gsm.params.x[0], 1 / 4, atol=1e-10)
            for w in ALL_VARIANTS:
                tw = w.sign * (hip if w.primed else hi)
                rec = recover_basis_block(fams[str(v)], tw, w)
                assert any(np.allclose(rec, b, atol=1e-10) for b in (sigma, -sigma, g_alt, -g_alt))
        assert worst <= 1e-10

        # the duplicated second element as typeset does not give a POVM
        misprint = fams["unprimed:-"].copy()
        misprint[1] = ref.MISPRINTED_UNPRIMED_MINUS_2
        bad = verify_gsm([misprint], 2)
        assert not bad.ok and "completeness" in {v.condition for v in bad.violations}
        info["max_entry_err"] = f"{worst:.1e}"


def _coincidence_partitions():
    rng = np.random.default_rng(1234)
    layouts = {2: [[2, 3], [4], [2, 2, 2]], 3: [[2, 3, 4, 3]], 4: [[2, 3, 4, 4, 5]], 5: [[2, 3, 4, 5, 5, 6]]}
    for i in range(50):
        d = 2 + i % 4
        sizes = layouts[d][(i // 4) % len(layouts[d])]
        yield random_partition(d, sizes, seed=int(rng.integers(2**31)))


def test_c04_variant_coincidence():
    with criterion("4 variant coincidence") as info:
        t0 = time.perf_counter()
        checked = {2: 0, 3: 0, 4: 0}
        for p in _coincidence_partitions():
            d = p.dim
            for a, m in enumerate(p.block_sizes):
                if m not in checked:
                    continue
                hi_x = min(max_feasible_x(p, a, UP), max_feasible_x(p, a, Variant(True, -1)))
                x = d / m**2 + 0.6 * (hi_x - d / m**2)
                rep = variant_coincidence(p, a, x)
                if m == 2:
                    assert rep.equal_sets and rep.pairing == [0, 1]
                elif m == 3:
                    assert rep.equal_sets and rep.pairing == [1, 0, 2]
                else:
                    assert not rep.equal_sets
                if m in (2, 3):
                    # the other opposite-sign pair coincides too
                    vm, vp = Variant(False, -1), Variant(True, 1)
                    em = build_measurement_block(p, a, vm, t_from_x(x, m, d, vm))
                    ep = build_measurement_block(p, a, vp, t_from_x(x, m, d, vp))
                    assert match_elements(em, ep) is not None
                checked[m] += 1
        elapsed = time.perf_counter() - t0
        assert min(checked.values()) > 0 and elapsed < 10
        info.update(blocks=checked, elapsed=f"{elapsed:.2f}s")


def _r_class_suite():
    out = [r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3)]
    for d, sizes, seed in ((2, [4], 1), (2, [2, 2, 2], 2), (3, [3, 3, 3, 3], 3), (3, [4, 4, 3], 4),
                           (3, [5, 3, 3], 5), (4, [6, 6, 6], 6), (4, [4, 4, 4, 4, 4], 7), (4, [9, 8], 8)):
        p = random_partition(d, sizes, seed=seed)
        variants = [ALL_VARIANTS[(seed + a) % 4] for a in range(len(sizes))]
        out.append(r_class_gsm(p, 0.8 * max_feasible_r(p, variants), variants))
    return out


def test_c05_conical_designs(qubit_sic):
    with criterion("5 conical 2-design certification") as info:
        worst = 0.0
        for g in _r_class_suite():
            r = classify(g).r
            cert = certify_design(g)
            assert cert.kind is DesignKind.CONICAL_2_DESIGN
            assert_allclose([cert.kappa_plus, cert.kappa_minus], [g.mu - r / g.dim, r], atol=1e-9)
            assert cert.residual_operator <= 1e-8 and cert.residual_map <= 1e-8
            assert cert.choi_discrepancy <= 1e-9
            assert_allclose(cert.kappa_map, [cert.kappa_plus, cert.kappa_minus], atol=1e-9)
            worst = max(worst, cert.residual_operator, cert.residual_map)

        g = r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3)
        cert = certify_design(g)
        assert_allclose([cert.kappa_plus, cert.kappa_minus], [2 / 3, 1 / 3], atol=1e-9)
        assert_allclose(brute_kappas(brute_tensor_sum(g), 2), [2 / 3, 1 / 3], atol=1e-9)
        cert = certify_design(qubit_sic)
        assert_allclose([cert.kappa_plus, cert.kappa_minus], [1 / 6, 1 / 6], atol=1e-9)
        assert_allclose(brute_kappas(brute_tensor_sum(qubit_sic), 2), [1 / 6, 1 / 6], atol=1e-9)
        info["max_residual"] = f"{worst:.1e}"


def _ic_suite():
    """Ten informationally complete measurements, most outside the constant-r class."""
    out = [verify_gsm(ref.qubit_projective_2_3(), 2).gsm,
           r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3)]
    rng = np.random.default_rng(99)
    for d, sizes in ((2, [4]), (2, [2, 2, 2]), (3, [3, 3, 3, 3]), (3, [5, 3, 3]), (3, [9]),
                     (4, [6, 6, 6]), (4, [5, 5, 5, 4]), (5, [9, 9, 9])):
        p = random_partition(d, sizes, seed=int(rng.integers(2**31)))
        variants = [ALL_VARIANTS[int(i)] for i in rng.integers(0, 4, len(sizes))]
        ts = []
        for a, v in enumerate(variants):
            lo, hi = block_t_range(p, a, v.primed)
            ts.append(rng.uniform(0.3, 1.0) * (hi if v.sign > 0 else lo))
        out.append(construct_gsm(p, variants, ts))
    return out


def test_c06_purity_identity():
    with criterion("6 purity from probabilities") as info:
        suite = _ic_suite()
        assert len(suite) == 10
        non_r = sum(ClassTag.R_CLASS not in classify(g) for g in suite)
        worst = 0.0
        for i, g in enumerate(suite):
            assert is_informationally_complete(g)
            for s in range(50):
                rho = random_density_matrix(g.dim, seed=1000 * i + s)
                est = purity_from_probabilities(g, probabilities(g, rho))
                worst = max(worst, abs(est - np.trace(rho @ rho).real))
        assert worst <= 1e-9 and non_r >= 5
        info.update(states=500, non_r_class=non_r, max_err=f"{worst:.1e}")


def test_c07_coincidence_bound():
    with criterion("7 coincidence bound") as info:
        suite = _r_class_suite()
        over, gap = -np.inf, 0.0
        for i in range(500):
            g = suite[i % len(suite)]
            c = probabilities(g, random_density_matrix(g.dim, seed=i)).index_of_coincidence
            over = max(over, c - c_max(g))
        for i in range(100):
            g = suite[i % len(suite)]
            psi = random_pure_state(g.dim, seed=10_000 + i)
            c = probabilities(g, np.outer(psi, psi.conj())).index_of_coincidence
            gap = max(gap, abs(c - c_max(g)))
        assert over <= 1e-9 and gap <= 1e-9
        info.update(max_excess=f"{over:.1e}", pure_gap=f"{gap:.1e}")


def test_c08_entropic_chain(qubit_sic, qubit_mub):
    with criterion("8 entropic bound chain") as info:
        pair = r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3)
        b_sic, b_pair, b_mub = (eur_bound(g).nats for g in (qubit_sic, pair, qubit_mub))
        assert abs(b_sic - np.log(3)) <= 1e-12
        assert abs(b_pair - np.log(2)) <= 1e-12
        assert abs(b_mub - np.log(1.5)) <= 1e-12
        assert b_sic >= b_pair >= b_mub
        worst = np.inf
        for i in range(200):
            g = (qubit_sic, pair, qubit_mub)[i % 3]
            rep = shannon_renyi_check(probabilities(g, random_density_matrix(2, seed=i)), tol=1e-10)
            assert rep.ok
            worst = min(worst, rep.mean_shannon - rep.state_bound)
        assert worst >= -1e-10
        info["min_slack"] = f"{worst:.1e}"


def test_c09_separability():
    with criterion("9 separability screening") as info:
        t0 = time.perf_counter()
        gsms = {2: r_class_gsm(partition_basis(gell_mann_basis(2), [2, 3]), 1 / 3),
                3: r_class_gsm(partition_basis(gell_mann_basis(3), [3, 3, 3, 3]), 1 / 3)}
        flagged = 0
        for d, g in gsms.items():
            rng = np.random.default_rng(d)
            for _ in range(500):
                rho = random_separable_state(d, d, int(rng.integers(1, 11)), rng)
                flagged += separability_test(g, g, rho).verdict is Verdict.ENTANGLED
        assert flagged == 0

        margins = {}
        for d, g in gsms.items():
            rep = separability_test(g, g, max_entangled_projector(d))
            frozen = BELL_TRACE_NORM[(d, g.block_sizes)]
            assert abs(rep.trace_norm - frozen) <= 1e-9
            assert rep.verdict is Verdict.ENTANGLED and "trace_norm" in rep.violations
            assert rep.trace_norm_margin > 0
            margins[d] = round(rep.trace_norm_margin, 6)
        elapsed = time.perf_counter() - t0
        assert elapsed < 60
        info.update(separable_flagged=flagged, bell_margins=margins, elapsed=f"{elapsed:.2f}s")


def test_c10_dual_frame():
    with criterion("10 dual-frame reconstruction") as info:
        worst = 0.0
        suite = _ic_suite()
        for i, g in enumerate(suite):
            frame = dual_frame(g)
            for s in range(200):
                rho = random_density_matrix(g.dim, seed=(i, s))
                worst = max(worst, np.max(np.abs(frame.reconstruct(probabilities(g, rho)) - rho)))
        assert worst <= 1e-8

        partial = construct_gsm(partition_basis(gell_mann_basis(3), [3, 3]), [UP, UP], [0.05, 0.05])
        with pytest.raises(NotInformationallyCompleteError) as err:
            dual_frame(partial)
        assert err.value.rank < err.value.required == 9
        info.update(gsms=len(suite), max_err=f"{worst:.1e}", rejected_rank=f"{err.value.rank}/9")
