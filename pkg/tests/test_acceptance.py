"""The seven acceptance criteria, one test each; results are summarised at the end of the run."""

from __future__ import annotations

import time

from conftest import record

from endoscope import endo, padic, sscchar
from endoscope.cli import RunConfig, run_suite
from endoscope.gf import make_tower
from endoscope.sums import appendix_suite


def _finish(name: str, ok: bool, detail: str, started: float, budget: float) -> None:
    elapsed = time.perf_counter() - started
    within = elapsed < budget
    record(name, ok and within, f"{detail}; {elapsed:.1f}s (budget {budget:.0f}s)")
    print(f"{'PASS' if ok and within else 'FAIL'} {name}")
    assert ok, detail
    assert within, f"took {elapsed:.1f}s"


def test_1_appendix_identities():
    t0 = time.perf_counter()
    reports = appendix_suite(3, 1) + appendix_suite(5, 1)
    checks = {(r.check, r.inputs.get("p"), r.inputs.get("r")) for r in reports}
    covered = {("hasse_davenport", 3, 2), ("hasse_davenport", 5, 2), ("hasse_davenport", 3, 3), ("kl_fourier", 3, 2), ("kl_collapse", 3, 2)}
    bad = [r.to_json() for r in reports if r.outcome != "pass"]
    ok = not bad and covered <= checks
    _finish("1 appendix suite", ok, f"{len(reports)} reports, {len(bad)} not passing", t0, 60)


def test_2_closed_form_matches_torus_sum():
    t0 = time.perf_counter()
    reports = [sscchar.oracle_check(make_tower(q), op, n, samples=100, seed=0) for q in (3, 5) for n in (1, 2) for op in sscchar.OPERATIONS]
    bad = [r.inputs for r in reports if not r.passed]
    _finish("2 oracle equivalence", not bad, f"{len(reports)} operation/q/n cases, failures {bad}", t0, 300)


def test_3_torus_representatives():
    t0 = time.perf_counter()
    reports = [sscchar.validate_torus_reps(v, 1, 3, u, 4) for v in sscchar.GL_VARIANTS for u in (1, 2)]
    bad = [r.inputs for r in reports if not r.passed]
    _finish("3 torus representatives", not bad, f"{len(reports)} variant/u cases, failures {bad}", t0, 120)


def test_4_norm_witnesses():
    t0 = time.perf_counter()
    bad = []
    count = 0
    for parity in endo.PARITIES:
        for q in (3, 5):
            for n in (1, 2):
                r4 = endo.witness_certificates(parity, n, q, 4)
                r6 = endo.witness_certificates(parity, n, q, 6)
                count += len(r4.rows)
                if not (r4.passed and r6.passed and r4.rows == r6.rows):
                    bad.append((parity, q, n))
    _finish("4 norm witnesses", not bad, f"{count} witnesses at precisions 4 and 6, failures {bad}", t0, 300)


def test_5_character_relation():
    t0 = time.perf_counter()
    bad = []
    rows = 0
    for parity in endo.PARITIES:
        for q in (3, 5):
            for n in (1, 2):
                for b in range(1, q):
                    for j in range(q + 1):
                        rep = endo.verify_ecr(parity, n, q, b, j)
                        rows += len(rep.rows)
                        if not rep.passed:
                            bad.append((parity, q, n, b, j))
                uniq = endo.fourier_uniqueness_check(parity, n, q)
                if not uniq.passed or len(uniq.rows) != q - 2:
                    bad.append(("uniqueness", parity, q, n))
    _finish("5 character relation", not bad, f"{rows} rows, failures {bad}", t0, 600)


def test_6_key_lemma():
    t0 = time.perf_counter()
    reports = [padic.key_lemma_report(3, N, 1, 4) for N in (2, 3)]
    tested = sum(r.values["tested"] for r in reports)
    ok = all(r.passed for r in reports)
    _finish("6 key lemma probe", ok, f"{tested} conjugates tested", t0, 300)


def test_7_deterministic_reports():
    t0 = time.perf_counter()
    a = run_suite(RunConfig(jobs=1))
    b = run_suite(RunConfig(jobs=4))
    _finish("7 determinism", a == b and a[0] == 0, f"{len(a[1])} bytes, identical={a == b}", t0, 300)
