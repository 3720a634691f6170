"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

The lines are printed as the tests run (visible with -s) and repeated in the
terminal summary by conftest.py.
"""
import math
import time
from fractions import Fraction

import numpy as np

from strichartz_gap.cli import contraction_campaign
from strichartz_gap.functional import GAMMA_PROVEN, CoeffSeq, evaluate, margin_campaign, strichartz_margin_for_f
from strichartz_gap.hatcheck import verify_hatcheck_identity
from strichartz_gap.kernelk import (
    kappa_binomial,
    kappa_integral,
    verify_kappa_entry_bound,
    verify_step3_bridge,
    verify_stirling_bound,
)
from strichartz_gap.laguerre import check_summation_formula
from strichartz_gap.exactnum import is_symmetric
from strichartz_gap.qcore import (
    PI_SQ_LOWER,
    PI_SQ_UPPER,
    build_q_matrix,
    check_min_entry_conjecture,
    verify_doubly_stochastic,
)
from strichartz_gap.spectra import char_poly, conjectured_eigenvalue, psd_certificate, verify_eig_conjecture

RESULTS = []
S_RANGE = range(1, 31)


def record(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


_reports = {}


def eig_report(S):
    if S not in _reports:
        _reports[S] = verify_eig_conjecture(S)
    return _reports[S]


def test_criterion_1_eigenvalue_conjecture():
    t0 = time.perf_counter()
    bad = []
    for S in S_RANGE:
        rep = eig_report(S)
        eigs = [conjectured_eigenvalue(n) for n in range(S // 2 + 1)]
        if not (rep.passed and rep.conjectured_eigs == eigs
                and all(rep.multiplicities[l] == 1 for l in eigs)
                and rep.zero_multiplicity == math.ceil(S / 2)):
            bad.append(S)
    elapsed = time.perf_counter() - t0
    record(1, "eigenvalues of Q_S exact for 1 <= S <= 30", not bad and elapsed <= 600,
           f"failures {bad}, {elapsed:.1f}s")


def test_criterion_2_min_entry_conjecture():
    bad = [S for S in S_RANGE if not check_min_entry_conjecture(build_q_matrix(S))["passed"]]
    record(2, "min entry of Q_S equals Q(S//2, S-S//2, S, 0) for 1 <= S <= 30", not bad, f"failures {bad}")


def test_criterion_3_gap_values():
    bad = []
    for S in S_RANGE:
        rep = eig_report(S)
        want = Fraction(1) if S == 1 else Fraction(3, 4)
        if rep.gap_exact != want or abs(rep.gap_float - float(want)) > 1e-6:
            bad.append(S)
    record(3, "gap 1 at S = 1, 3/4 for 2 <= S <= 30, float within 1e-6", not bad, f"failures {bad}")


def test_criterion_4_proven_bound():
    literal = all(eig_report(S).gap_exact * PI_SQ_UPPER >= 4 for S in S_RANGE)
    certified = all(eig_report(S).gap_exact * PI_SQ_LOWER >= 4 for S in S_RANGE)
    entry = [S for S in S_RANGE if not verify_kappa_entry_bound(S).ok]
    record(4, "gap >= 4/pi^2 certified and kappa entry bound for 1 <= S <= 30",
           literal and certified and not entry,
           f"upper-pi^2 form {literal}, lower-pi^2 form {certified}, entry-bound failures {entry}")


def test_criterion_5_structure():
    bad = []
    for S in range(31):
        Q = build_q_matrix(S).entries
        if not (is_symmetric(Q) and verify_doubly_stochastic(Q).ok
                and all(x > 0 for row in Q for x in row) and psd_certificate(char_poly(Q))):
            bad.append(S)
    record(5, "Q_S symmetric, doubly stochastic, positive, PSD for S <= 30", not bad, f"failures {bad}")


def test_criterion_6_dual_route_and_bridge():
    routes = [(S, m, n) for S in range(13) for m in range(S + 1) for n in range(S + 1)
              if kappa_binomial(S, m, n) != kappa_integral(S, m, n)]
    bridge = [S for S in range(21) if not verify_step3_bridge(S)]
    record(6, "kappa routes agree for S <= 12, Q^2 = P kappa P^T for S <= 20",
           not routes and not bridge, f"route mismatches {routes[:3]}, bridge failures {bridge}")


def test_criterion_7_hatcheck():
    t0 = time.perf_counter()
    ok, records, witness = verify_hatcheck_identity(8)
    elapsed = time.perf_counter() - t0
    record(7, "signed hat-check count = 2^n Q and positive for n <= 8", ok and elapsed <= 300,
           f"{len(records)} tuples, {elapsed:.1f}s, witness {witness}")


def test_criterion_8_extremal_equality():
    e11 = evaluate(CoeffSeq.basis(1, 1), 0.75).margin
    e00 = evaluate(CoeffSeq.basis(0, 0), GAMMA_PROVEN).margin
    lhs, rhs = strichartz_margin_for_f([1.0], GAMMA_PROVEN)
    sharp = (1 / math.sqrt(2)) ** 4 * 0.5 ** 2
    ok = abs(e11) <= 1e-9 and abs(e00) <= 1e-9 and abs(lhs - rhs) <= 1e-12 and abs(lhs - sharp) <= 1e-12
    record(8, "equality at e_(1,1) with gamma 3/4 and at the Gaussian", ok,
           f"e11 margin {e11:.2e}, e00 margin {e00:.2e}, |lhs-rhs| {abs(lhs - rhs):.2e}")


def test_criterion_9_property_suites():
    campaign = margin_campaign(100_000, 12, GAMMA_PROVEN, seed=0)
    contraction = contraction_campaign(10_000, seed=0)
    summation = [S for S in range(21) if not check_summation_formula(S)]
    stirling = verify_stirling_bound(200)
    ok = campaign["passed"] and contraction["passed"] and not summation and stirling
    record(9, "margin campaign, contraction lemmas, summation formula, Stirling bound", ok,
           f"min margin {campaign['min_margin']:.2e}, contraction failures {contraction['failures']}, "
           f"summation failures {summation}, stirling {stirling}")
