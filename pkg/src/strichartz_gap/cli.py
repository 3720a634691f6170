"""Command line front end: verification campaigns and module dumps.

Exit status: 0 when every check passes, 1 when a mathematical check fails
(the witness is in the output), 2 for usage or I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import functional, hatcheck, kernelk, laguerre, qcore, spectra
from .exactnum import is_symmetric, render_rational

log = logging.getLogger("strichartz_gap")

JOBS_ENV = "STRICHARTZ_GAP_JOBS"
S_HARD_LIMIT = 64
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class CampaignConfig:
    command: str = "verify-all"
    S_min: int = 1
    S_max: int = 30
    cross_check_ceiling: int = kernelk.DEFAULT_CROSS_CHECK_CEILING
    hatcheck_max_n: int = 6
    gamma: float = functional.GAMMA_PROVEN
    seed: int = 0
    output_path: str | None = None
    format: str = "json"
    parallelism: int = 1
    functional_samples: int = 10_000
    functional_max_S: int = 12
    contraction_samples: int = 1_000
    summation_max_S: int = 20
    stirling_max_p: int = 200
    first_column_max: int = 60

    def validate(self) -> None:
        if self.S_min < 1 or self.S_min > self.S_max:
            raise ValueError(f"need 1 <= s-min <= s-max, got {self.S_min}..{self.S_max}")
        if self.S_max > S_HARD_LIMIT:
            raise ValueError(f"s-max {self.S_max} above hard limit {S_HARD_LIMIT}")
        if not 0 <= self.hatcheck_max_n <= hatcheck.HARD_CEILING:
            raise ValueError(f"hatcheck-max-n must be in [0, {hatcheck.HARD_CEILING}]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.parallelism < 1:
            raise ValueError("jobs must be >= 1")


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in ("elapsed_ms", "timings")}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def per_s_checks(S: int, cross_check_ceiling: int) -> dict:
    """Every exact check attached to one antidiagonal block size S."""
    t0 = time.perf_counter()
    Q = qcore.build_q_matrix(S)
    ds = qcore.verify_doubly_stochastic(Q.entries)
    spec_report = spectra.verify_eig_conjecture(S, Q)
    cp = spectra.char_poly(Q.entries)
    min_rec = qcore.check_min_entry_conjecture(Q)

    kappa_rec: dict = {"dual_route_checked": S <= cross_check_ceiling}
    try:
        K = kernelk.build_kappa(S, cross_check_ceiling)
        kappa_rec["dual_route_equal"] = True if S <= cross_check_ceiling else None
    except kernelk.KernelMismatch as exc:
        K = kernelk.build_kappa(S, cross_check_ceiling=-1)
        kappa_rec["dual_route_equal"] = False
        kappa_rec["mismatch"] = str(exc)
    struct = kernelk.kappa_structure(K)
    bound = kernelk.verify_kappa_entry_bound(S)
    kappa_rec.update({
        "symmetric": struct["symmetric"],
        "doubly_stochastic": struct["doubly_stochastic"],
        "fixes_ones_vector": struct["fixes_ones_vector"],
        "entry_bound_certified": bound.ok,
        **bound.witness,
    })
    P = kernelk.build_connection(S)

    gap = spec_report.gap_exact
    gap_rec = {
        "gap_exact": None if gap is None else render_rational(gap),
        "gap_float": spec_report.gap_float,
        "exact_float_agree": gap is not None and abs(spec_report.gap_float - float(gap)) <= 1e-6,
        "certified_ge_4_over_pi_sq": gap is not None and gap * qcore.PI_SQ_LOWER >= 4,
        "suggested_value_3_4": gap == (Fraction(1) if S == 1 else Fraction(3, 4)),
    }
    rec = {
        "S": S,
        "q_symmetric": is_symmetric(Q.entries),
        "q_doubly_stochastic": ds.ok,
        "q_doubly_stochastic_witness": ds.witness,
        "q_strictly_positive": all(x > 0 for row in Q.entries for x in row),
        "psd_certificate": spectra.psd_certificate(cp),
        "char_poly_vanishes_at_one": cp.poly(1) == 0,
        "spectral": spec_report.to_json(),
        "spectral_failure": spec_report.failure,
        "min_entry": min_rec,
        "step3_bridge": kernelk.verify_step3_bridge(S),
        "connection_rows_sum_one": kernelk.connection_rows_sum_to_one(P),
        "kappa": kappa_rec,
        "gap": gap_rec,
    }
    rec["passed"] = all([
        rec["q_symmetric"], rec["q_doubly_stochastic"], rec["q_strictly_positive"],
        rec["psd_certificate"], rec["char_poly_vanishes_at_one"], spec_report.passed,
        min_rec["passed"], rec["step3_bridge"], rec["connection_rows_sum_one"],
        kappa_rec["dual_route_equal"] is not False, kappa_rec["symmetric"],
        kappa_rec["doubly_stochastic"], kappa_rec["entry_bound_certified"],
        gap_rec["exact_float_agree"], gap_rec["certified_ge_4_over_pi_sq"],
    ])
    rec["elapsed_ms"] = int((time.perf_counter() - t0) * 1000)
    return rec


def _per_s_task(args):
    return per_s_checks(*args)


def contraction_campaign(n_samples: int, seed: int) -> dict:
    """Both doubly-stochastic contraction lemmas on seeded random (A, v)."""
    rng = np.random.default_rng(seed)
    failures = 0
    witness = None
    for i in range(n_samples):
        n = int(rng.integers(2, 9))
        if i % 2:
            A = spectra.random_symmetric_doubly_stochastic(n, rng)
        else:
            S = int(rng.integers(1, 11))
            A = functional.q_matrix_float(S).copy()
            n = S + 1
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ok = spectra.check_ds_contraction(A, v) and spectra.check_sg_contraction(A, v)
        if not ok:
            failures += 1
            if witness is None:
                witness = {"A": A.tolist(), "v_re": v.real.tolist(), "v_im": v.imag.tolist()}
    return {"samples": n_samples, "seed": seed, "failures": failures,
            "passed": failures == 0, "witness": witness}


def cmd_verify_all(config: CampaignConfig) -> dict:
    config.validate()
    t0 = time.perf_counter()
    timings: dict = {}
    s_values = list(range(config.S_min, config.S_max + 1))
    tasks = [(S, config.cross_check_ceiling) for S in s_values]
    if config.parallelism > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            per_s = list(pool.map(_per_s_task, tasks))
    else:
        per_s = [_per_s_task(t) for t in tasks]
    for rec in per_s:
        log.info("S=%d passed=%s (%d ms)", rec["S"], rec["passed"], rec["elapsed_ms"])
    timings["per_S_ms"] = int((time.perf_counter() - t0) * 1000)

    t1 = time.perf_counter()
    hc_ok, hc_records, hc_witness = hatcheck.verify_hatcheck_identity(config.hatcheck_max_n)
    lb_ok, lb_witness = hatcheck.verify_hatcheck_lower_bound(config.hatcheck_max_n)
    hatcheck_rec = {
        "max_n": config.hatcheck_max_n,
        "tuples": len(hc_records),
        "identity_passed": hc_ok,
        "all_positive": all(r["positive"] for r in hc_records),
        "witness": hc_witness,
        "lower_bound_conjectural_evidence": {"passed": lb_ok, "witness": lb_witness},
        "records": hc_records,
    }
    hatcheck_rec["passed"] = hc_ok and lb_ok
    timings["hatcheck_ms"] = int((time.perf_counter() - t1) * 1000)

    t2 = time.perf_counter()
    proven = functional.margin_campaign(config.functional_samples, config.functional_max_S,
                                        config.gamma, config.seed)
    probe = functional.margin_campaign(config.functional_samples, config.functional_max_S,
                                       functional.GAMMA_CONJECTURED, config.seed)
    extremal = functional.evaluate(functional.CoeffSeq.basis(1, 1), functional.GAMMA_CONJECTURED)
    functional_rec = {
        "campaign": proven,
        "conjectured_gamma_probe": probe,
        "extremal_e11_margin_at_3_4": extremal.margin,
        "passed": proven["passed"] and probe["passed"]
                  and abs(extremal.margin) <= functional.NUMERICAL_ZERO,
    }
    contraction = contraction_campaign(config.contraction_samples, config.seed)
    timings["functional_ms"] = int((time.perf_counter() - t2) * 1000)

    identities = {
        "summation_formula_max_S": config.summation_max_S,
        "summation_formula": all(laguerre.check_summation_formula(S)
                                 for S in range(config.summation_max_S + 1)),
        "stirling_max_p": config.stirling_max_p,
        "stirling_bound": kernelk.verify_stirling_bound(config.stirling_max_p),
        "first_column_max": config.first_column_max,
        "first_column_bound": all(qcore.verify_first_column_bound(a, b)
                                  for a in range(config.first_column_max + 1)
                                  for b in range(config.first_column_max + 1 - a)),
    }
    identities["passed"] = (identities["summation_formula"] and identities["stirling_bound"]
                            and identities["first_column_bound"])

    passed = (all(r["passed"] for r in per_s) and hatcheck_rec["passed"]
              and functional_rec["passed"] and contraction["passed"] and identities["passed"])
    timings["total_ms"] = int((time.perf_counter() - t0) * 1000)
    cfg = asdict(config)
    cfg.pop("output_path")
    return {
        "config": cfg,
        "pi_bounds": qcore.pi_bounds_record(),
        "per_S": per_s,
        "hatcheck": hatcheck_rec,
        "functional": functional_rec,
        "contraction_lemmas": contraction,
        "identities": identities,
        "passed": passed,
        "timings": timings,
    }


def report_to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["S", "passed", "eig_conjecture", "gap_exact", "gap_float", "min_entry_conjecture",
                "step3_bridge", "kappa_min_times_S_plus_1", "kappa_bound_certified"])
    for r in report["per_S"]:
        w.writerow([r["S"], r["passed"], r["spectral"]["passed"], r["gap"]["gap_exact"],
                    repr(r["gap"]["gap_float"]), r["min_entry"]["passed"], r["step3_bridge"],
                    r["kappa"]["min_entry_times_S_plus_1"], r["kappa"]["entry_bound_certified"]])
    return buf.getvalue()


def render_report(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return report_to_csv(report)
    return json.dumps(report, indent=2) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename over it."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_qmatrix(S: int, fmt: str = "json") -> str:
    Q = qcore.build_q_matrix(S)
    return qcore.dump_matrix(S, Q.entries, fmt)


def cmd_kappa(S: int, fmt: str = "json") -> str:
    K = kernelk.build_kappa(S, cross_check_ceiling=-1)
    return qcore.dump_matrix(S, K.entries, fmt)


def cmd_charpoly(S: int) -> dict:
    cp = spectra.char_poly(qcore.build_q_matrix(S).entries)
    return {
        "S": S,
        "coefficients": [render_rational(c) for c in cp.poly.coeffs],
        "polynomial": cp.poly.render("l"),
        "provenance": cp.provenance,
    }


def cmd_evaluate(coeff_file, gamma: float) -> dict:
    phi = functional.CoeffSeq.load(coeff_file)
    verdict = functional.evaluate(phi, gamma)
    out = verdict.to_json()
    out["passed"] = verdict.margin >= -functional.NUMERICAL_ZERO
    if not out["passed"]:
        out["witness"] = phi.to_json()
    return out


def cmd_hatcheck(a: int, b: int, c: int, d: int) -> dict:
    return hatcheck.hatcheck_record(a, b, c, d, ceiling=hatcheck.HARD_CEILING)


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="strichartz-gap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    va = sub.add_parser("verify-all", help="run the full verification campaign")
    va.add_argument("--s-min", type=int, default=1)
    va.add_argument("--s-max", type=int, default=30)
    va.add_argument("--hatcheck-max-n", type=int, default=6)
    va.add_argument("--gamma", type=float, default=functional.GAMMA_PROVEN)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--out", default=None, help="report path (default: stdout)")
    va.add_argument("--format", choices=("json", "csv"), default="json")
    va.add_argument("--jobs", type=int, default=None,
                    help=f"worker processes (default: ${JOBS_ENV} or 1)")

    for name in ("qmatrix", "kappa"):
        p = sub.add_parser(name, help=f"dump the exact {name} matrix for block size S")
        p.add_argument("S", type=int)
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("charpoly", help="exact characteristic polynomial of Q_S")
    p.add_argument("S", type=int)

    p = sub.add_parser("evaluate", help="evaluate the sharpened inequality on a coefficient file")
    p.add_argument("file")
    p.add_argument("--gamma", type=float, default=functional.GAMMA_PROVEN)

    p = sub.add_parser("hatcheck", help="signed hat-check count against 2^n Q(a,b,c,d)")
    for name in ("a", "b", "c", "d"):
        p.add_argument(name, type=int)
    return parser


def _emit(text: str, out_path) -> None:
    if out_path:
        atomic_write(out_path, text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "verify-all":
            config = CampaignConfig(
                S_min=args.s_min, S_max=args.s_max, hatcheck_max_n=args.hatcheck_max_n,
                gamma=args.gamma, seed=args.seed, output_path=args.out, format=args.format,
                parallelism=args.jobs if args.jobs is not None else _default_jobs(),
            )
            try:
                config.validate()
            except ValueError as exc:
                parser.error(str(exc))
            if args.out and not Path(args.out).parent.is_dir():
                raise OSError(f"output directory does not exist: {Path(args.out).parent}")
            report = cmd_verify_all(config)
            _emit(render_report(report, config.format), args.out)
            return EXIT_OK if report["passed"] else EXIT_FAIL

        if args.command in ("qmatrix", "kappa", "charpoly"):
            if not 0 <= args.S <= S_HARD_LIMIT:
                parser.error(f"S must be in [0, {S_HARD_LIMIT}]")
        if args.command == "qmatrix":
            _emit(cmd_qmatrix(args.S, args.format) + ("" if args.format == "csv" else "\n"), None)
            return EXIT_OK
        if args.command == "kappa":
            _emit(cmd_kappa(args.S, args.format) + ("" if args.format == "csv" else "\n"), None)
            return EXIT_OK
        if args.command == "charpoly":
            _emit(json.dumps(cmd_charpoly(args.S)) + "\n", None)
            return EXIT_OK
        if args.command == "evaluate":
            if not 0.0 <= args.gamma <= 1.0:
                parser.error("gamma must lie in [0, 1]")
            out = cmd_evaluate(args.file, args.gamma)
            _emit(json.dumps(out) + "\n", None)
            return EXIT_OK if out["passed"] else EXIT_FAIL
        if args.command == "hatcheck":
            try:
                rec = cmd_hatcheck(args.a, args.b, args.c, args.d)
            except ValueError as exc:
                parser.error(str(exc))
            _emit(json.dumps(rec) + "\n", None)
            return EXIT_OK if rec["match"] else EXIT_FAIL
    except (OSError, ValueError, KeyError) as exc:
        print(f"strichartz-gap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
