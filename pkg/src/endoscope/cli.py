"""Command-line front end: ``endoscope <group> <command> [options]``.

Every command prints reports (JSON by default) and exits with 0 when nothing
failed, 1 when some check failed, and 2 on invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import endo, padic, sscchar, sums
from .chars import AddChar, CharError, MultChar, U1Char, parse_char
from .cyclo import CycloError, cyc_ring, cyclotomic_poly
from .gf import FieldError, QuadExt, is_prime, make_tower
from .report import FAIL, SCHEMA_VERSION, SKIPPED, VerifyReport, dumps, jsonable, verdict

DEFAULT_TERM_CAP = 10**8


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    f: int = 1
    r: int = 2
    n: int = 1
    parity: str = "even"
    precision: int = 4
    window_low: int = -2
    method: str = "both"
    fmt: str = "json"
    term_cap: int = DEFAULT_TERM_CAP
    jobs: int = 1
    samples: int = 100
    seed: int = 0

    def validate(self) -> None:
        if not is_prime(self.p) or self.p == 2:
            raise ConfigError(f"p must be an odd prime, got {self.p}")
        if self.f < 1 or self.r < 1:
            raise ConfigError("degrees must be positive")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.parity not in endo.PARITIES:
            raise ConfigError(f"parity must be one of {endo.PARITIES}")
        if self.precision < 2:
            raise ConfigError("precision must be at least 2")
        if self.window_low > 0:
            raise ConfigError("window_low must be <= 0")
        if self.method not in ("closed", "brute", "both"):
            raise ConfigError("method must be closed, brute or both")
        if self.fmt not in ("json", "text", "csv"):
            raise ConfigError("format must be json, text or csv")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        try:
            make_tower(self.p, self.f, self.r)
        except FieldError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def tower(self) -> QuadExt:
        return make_tower(self.p, self.f, self.r)


# -- output ------------------------------------------------------------------------


def _exit_code(reports: Sequence[VerifyReport]) -> int:
    return 1 if any(r.outcome == FAIL for r in reports) else 0


def _render(command: str, reports: Sequence[VerifyReport], fmt: str, extra: dict | None = None) -> str:
    if fmt == "text":
        lines = []
        for r in reports:
            reason = f"  ({r.reason})" if r.reason else ""
            lines.append(f"{r.outcome.upper():7s} {r.check} {_compact(r.inputs)}{reason}")
            if r.values:
                lines.append(f"        {_compact(r.values)}")
        return "\n".join(lines) + "\n"
    payload: dict[str, Any] = {"schema": SCHEMA_VERSION, "command": command, "reports": [r.to_json() for r in reports]}
    if extra:
        payload.update(extra)
    return dumps(payload)


def _compact(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, ensure_ascii=False)


def _emit(args: argparse.Namespace, command: str, reports: Sequence[VerifyReport], extra: dict | None = None) -> int:
    sys.stdout.write(_render(command, reports, args.format, extra))
    return _exit_code(reports)


def _value_report(check: str, inputs: dict, values: dict) -> VerifyReport:
    return VerifyReport(check, inputs, "pass", values)


# -- parsing helpers -----------------------------------------------------------------


def _field_size(args: argparse.Namespace) -> int:
    if getattr(args, "p", None) is not None:
        if not is_prime(args.p):
            raise ConfigError(f"{args.p} is not prime")
        return args.p ** (args.f or 1)
    return args.q


def _tower(args: argparse.Namespace) -> QuadExt:
    p, f = _prime_power(_field_size(args))
    try:
        return make_tower(p, f, getattr(args, "r", 2) or 2)
    except FieldError as exc:
        raise ConfigError(str(exc)) from None


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            f, m = 0, q
            while m % p == 0:
                m //= p
                f += 1
            if m != 1 or not is_prime(p):
                raise ConfigError(f"{q} is not a prime power")
            if p == 2:
                raise ConfigError("characteristic 2 is not supported")
            return p, f
    raise ConfigError(f"{q} is not a prime power")


def _elem_code(fld, text: str) -> int:
    try:
        return fld.parse(text).code
    except (FieldError, ValueError) as exc:
        raise ConfigError(f"bad field element {text!r}: {exc}") from None


def _comps(fld, text: str) -> list[int]:
    return [_elem_code(fld, t) for t in text.split(",") if t.strip()]


def _psi(tower: QuadExt, text: str | None) -> AddChar:
    if not text:
        return AddChar(tower.base, 1)
    ch = _char(tower, text)
    if not isinstance(ch, AddChar) or ch.field is not tower.base:
        raise ConfigError("ψ must be an additive character of k_F")
    return ch


def _char(tower: QuadExt, text: str):
    try:
        return parse_char(tower, text)
    except CharError as exc:
        raise ConfigError(str(exc)) from None


def _omega_prime(tower: QuadExt, text: str) -> U1Char:
    text = text if text.startswith("mul:") else f"mul:U1:{text}"
    ch = _char(tower, text)
    if not isinstance(ch, U1Char):
        raise ConfigError("ω′ must be a character of U(1)")
    return ch


def _omega(tower: QuadExt, text: str) -> MultChar:
    ch = _char(tower, text)
    if not isinstance(ch, MultChar) or ch.field is not tower.ext:
        raise ConfigError("ω must be a multiplicative character of k_E (mul:E:j=...)")
    return ch


def _local_matrix(ring: padic.LocalRing, args: argparse.Namespace) -> padic.LocalMatrix:
    if args.matrix:
        try:
            rows = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"matrix is not valid JSON: {exc}") from None
        return padic.matrix_from_json(ring, rows)
    if args.witness:
        tower = ring.tower
        u = tower.embed_code(_elem_code(tower.base, args.u))
        g = padic.one_plus_phi(ring, u, args.N)
        if args.witness == "phi-one-plus-phi":
            g = padic.phi(ring, u, args.N) @ g
        return g
    raise ConfigError("give --matrix or --witness")


# -- command handlers ---------------------------------------------------------------


def cmd_sums_kl(args: argparse.Namespace) -> int:
    tower = _tower(args)
    psi = _psi(tower, args.psi)
    a = _elem_code(tower.base, args.a)
    count = sums.kl_term_count(tower, args.n, args.m)
    inputs = {"q": tower.q, "r": tower.r, "n": args.n, "m": args.m, "a": tower.base.name(a), "psi": psi.label, "method": args.method}
    if count > args.term_cap:
        return _emit(args, "sums kl", [VerifyReport("kl", inputs, SKIPPED, {"terms": count}, "term cap exceeded")])
    value = sums.kloosterman(sums.KlSpec(tower, psi, args.n, args.m, a), args.method)
    return _emit(args, "sums kl", [_value_report("kl", inputs, {"value": value, "terms": count})])


def cmd_sums_gauss(args: argparse.Namespace) -> int:
    tower = _tower(args)
    psi = _psi(tower, args.psi)
    chi = _char(tower, args.chi)
    if not isinstance(chi, MultChar):
        raise ConfigError("χ must be multiplicative")
    fld = chi.field
    psi_f = psi if fld is tower.base else psi.compose_trace(tower)
    value = sums.gauss_sum(fld, chi, psi_f)
    inputs = {"q": tower.q, "chi": chi.label, "psi": psi_f.label}
    return _emit(args, "sums gauss", [_value_report("gauss", inputs, {"value": value})])


def cmd_sums_appendix(args: argparse.Namespace) -> int:
    p, f = _prime_power(_field_size(args))
    reports = sums.appendix_suite(p, f, max_n=args.max_n, max_total=args.max_total)
    if args.table_csv:
        tower = make_tower(p, f)
        grid = [(n, 0) for n in range(1, args.max_n + 1)]
        with open(args.table_csv, "w", encoding="utf-8") as fh:
            fh.write(emit_kl_table(tower, grid, AddChar(tower.base, 1), args.term_cap))
    return _emit(args, "sums verify-appendix", reports)


def kl_table_rows(tower: QuadExt, grid: Sequence[tuple[int, int]], psi: AddChar, term_cap: int = DEFAULT_TERM_CAP) -> list[dict]:
    """One row per a ∈ k_F^× (code order), one column per (n, m)."""
    rows = []
    highlight: dict[tuple[int, int], tuple[int, int]] = {}
    for n, m in grid:
        if (n, m) != (0, 0) and sums.kl_term_count(tower, n, m) <= term_cap and tower.q > 2:
            try:
                highlight[(n, m)] = sums.kl_nonconstancy_witness(tower, psi, n, m)
            except Exception:
                pass
    for a in range(1, tower.q):
        row: dict[str, Any] = {"a": tower.base.name(a)}
        for n, m in grid:
            key = f"Kl^{n},{m}"
            if sums.kl_term_count(tower, n, m) > term_cap:
                row[key] = "skipped"
                continue
            v = sums.kloosterman(sums.KlSpec(tower, psi, n, m, a))
            z = v.complex_approx()
            mark = "*" if a in highlight.get((n, m), ()) else ""
            row[key] = f"{list(v.coeffs)}≈{z.real:.6f}{z.imag:+.6f}i{mark}"
        rows.append(row)
    return rows


def emit_kl_table(tower: QuadExt, grid: Sequence[tuple[int, int]], psi: AddChar, term_cap: int = DEFAULT_TERM_CAP) -> str:
    rows = kl_table_rows(tower, grid, psi, term_cap)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _parse_grid(args: argparse.Namespace) -> list[tuple[int, int]]:
    if args.grid:
        out = []
        for g in args.grid:
            try:
                n, m = (int(x) for x in g.split(","))
            except ValueError:
                raise ConfigError(f"bad grid entry {g!r}; expected n,m") from None
            out.append((n, m))
        return out
    return [(n, m) for n in range(args.max_n + 1) for m in range(args.max_m + 1)]


def cmd_sums_table(args: argparse.Namespace) -> int:
    tower = _tower(args)
    psi = _psi(tower, args.psi)
    grid = _parse_grid(args)
    if args.format == "csv" or args.format == "text":
        sys.stdout.write(emit_kl_table(tower, grid, psi, args.term_cap))
        return 0
    rows = kl_table_rows(tower, grid, psi, args.term_cap)
    rep = VerifyReport("kl-table", {"q": tower.q, "grid": grid, "psi": psi.label}, "pass", rows=rows)
    return _emit(args, "sums table", [rep])


def _ring(args: argparse.Namespace) -> padic.LocalRing:
    tower = _tower(args)
    if tower.r != 2:
        raise ConfigError("p-adic commands need the quadratic tower")
    return padic.local_ring(tower.p, tower.f, args.precision, args.window_low)


def cmd_padic(args: argparse.Namespace) -> int:
    ring = _ring(args)
    g = _local_matrix(ring, args)
    inputs = {"q": ring.tower.q, "precision": ring.k, "N": g.n_size}
    if args.padic_cmd == "theta":
        values = {"theta": padic.theta(g)}
    elif args.padic_cmd == "norm":
        h = padic.norm_elem(g)
        values = {"norm": h, "unitary": padic.is_unitary(h), "theta_commutes": padic.theta_commutes(g)}
    elif args.padic_cmd == "classify":
        values = {"level": padic.classify_iwahori(g, args.variant), "regular_elliptic": padic.is_regular_elliptic(g)}
    else:
        x = g
        center = None
        if args.variant == "U" or padic.classify_iwahori(g, "GL") == "outside":
            center, x = padic.strip_center(g)
        comps = padic.affine_components(x, args.variant)
        values = {"components": comps, "generic": padic.is_affine_generic(comps)}
        if center is not None:
            values["center"] = ring.tower.ext.name(center)
    return _emit(args, f"padic {args.padic_cmd}", [_value_report(args.padic_cmd, inputs, values)])


def cmd_padic_key_lemma(args: argparse.Namespace) -> int:
    tower = _tower(args)
    rep = padic.key_lemma_report(tower.q, args.N, args.bound, args.precision, _elem_code(tower.base, args.u))
    return _emit(args, "padic key-lemma", [rep])


_GL_OPS = {
    "gl-even": (sscchar.theta_gl_even, False, False),
    "gl-even-phi": (sscchar.theta_gl_even_phi, False, True),
    "gl-odd": (sscchar.theta_gl_odd, True, False),
    "gl-odd-phi": (sscchar.theta_gl_odd_phi, True, True),
}


def _methods(method: str) -> list[str]:
    return ["closed", "brute"] if method == "both" else [method]


def cmd_char(args: argparse.Namespace) -> int:
    tower = _tower(args)
    psi = _psi(tower, args.psi)
    op = args.char_cmd
    comps = _comps(tower.ext, args.comps)
    z = _elem_code(tower.ext, args.z) if args.z else None
    inputs: dict[str, Any] = {"q": tower.q, "n": args.n, "comps": args.comps, "method": args.method}
    values: dict[str, Any] = {}
    try:
        if op in _GL_OPS:
            fn, odd, twisted = _GL_OPS[op]
            if len(comps) != 2 * args.n + (1 if odd else 0):
                raise ConfigError(f"{op} needs {2 * args.n + (1 if odd else 0)} components")
            omega = _omega(tower, args.omega)
            if args.zeta not in (1, -1):
                raise ConfigError("ζ must be ±1")
            pi = sscchar.ssc_gl(tower, tower.eps.code if odd else 1, args.zeta, omega, psi)
            extra = (_elem_code(tower.base, args.u),) if twisted else ()
            inputs.update(zeta=args.zeta, omega=omega.label)
            for m in _methods(args.method):
                values[m] = fn(comps, *extra, pi, m, z=z).value
        else:
            odd = op == "u-odd"
            wp = _omega_prime(tower, args.omega_prime)
            b = _elem_code(tower.base, args.b)
            pi_u = sscchar.ssc_u(tower, b, wp, odd, args.n, psi)
            fn = sscchar.theta_u_odd if odd else sscchar.theta_u_even
            inputs.update(b=args.b, omega_prime=wp.label)
            for m in _methods(args.method):
                values[m] = fn(comps, pi_u, m, z=z).value
    except sscchar.SscError as exc:
        raise ConfigError(str(exc)) from None
    outcome = "pass"
    if len(values) == 2:
        values["equal"] = values["closed"] == values["brute"]
        outcome = verdict(values["equal"])
    return _emit(args, f"char {op}", [VerifyReport(op, inputs, outcome, values)])


def cmd_char_validate(args: argparse.Namespace) -> int:
    tower = _tower(args)
    rep = sscchar.validate_torus_reps(args.variant, args.n, tower, _elem_code(tower.base, args.u), args.precision)
    return _emit(args, "char validate-reps", [rep])


def cmd_endo_lift(args: argparse.Namespace) -> int:
    tower = _tower(args)
    wp = _omega_prime(tower, args.omega_prime)
    b = _elem_code(tower.base, args.b)
    res = endo.lift(sscchar.ssc_u(tower, b, wp, args.parity == "odd", args.n), args.kappa)
    inputs = {"parity": args.parity, "n": args.n, "q": tower.q, "b": args.b, "omega_prime": wp.label, "kappa": args.kappa}
    return _emit(args, "endo lift", [_value_report("lift", inputs, {"lift": res})])


def cmd_endo_ecr(args: argparse.Namespace) -> int:
    tower = _tower(args)
    if tower.f != 1:
        raise ConfigError("character relation checks run over prime residue fields")
    bs = range(1, tower.q) if args.all or args.b is None else [_elem_code(tower.base, args.b)]
    if args.all or args.omega_prime is None:
        wps = list(range(tower.q + 1))
    else:
        wps = [_omega_prime(tower, args.omega_prime).j]
    tasks = [(b, j) for b in bs for j in wps]
    reports = _map(args.jobs, lambda t: endo.verify_ecr(args.parity, args.n, tower.q, t[0], t[1], args.kappa, args.precision), tasks)
    reports.append(endo.fourier_uniqueness_check(args.parity, args.n, tower.q))
    return _emit(args, "endo verify-ecr", reports)


def cmd_endo_uniqueness(args: argparse.Namespace) -> int:
    tower = _tower(args)
    return _emit(args, "endo uniqueness", [endo.fourier_uniqueness_check(args.parity, args.n, tower.q)])


def cmd_endo_parity(args: argparse.Namespace) -> int:
    tower = _tower(args)
    return _emit(args, "endo parity", [endo.parity_report(tower.q, args.parity)])


# -- the suite ------------------------------------------------------------------------


def _map(jobs: int, fn: Callable, items: Sequence) -> list:
    """Ordered map; results come back in input order regardless of ``jobs``."""
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def self_test_fields(p: int, f: int) -> VerifyReport:
    tower = make_tower(p, f)
    F, E = tower.base, tower.ext
    checks = {
        "generator_order": len(set(E._exp)) == E.q - 1,
        "frobenius_involution": all(tower.frob_code(tower.frob_code(x)) == x for x in range(E.q)),
        "norm_multiplicative": all(
            tower.norm_code(E.mul(x, y)) == F.mul(tower.norm_code(x), tower.norm_code(y)) for x in range(1, E.q, 3) for y in range(1, E.q, 5)
        ),
        "trace_additive": all(tower.trace_code(E.add(x, y)) == F.add(tower.trace_code(x), tower.trace_code(y)) for x in range(E.q) for y in range(0, E.q, 7)),
        "eps_trace_zero": tower.trace_code(tower.eps.code) == 0,
    }
    return VerifyReport("field-self-test", {"p": p, "f": f}, verdict(all(checks.values())), checks)


def self_test_cyclo(orders: Sequence[int]) -> VerifyReport:
    checks = {}
    for M in orders:
        ring = cyc_ring(M)
        z = ring.root_of_unity(1)
        checks[str(M)] = (z**M) == ring.one() and len(cyclotomic_poly(M)) - 1 == ring.dim
    return VerifyReport("cyclotomic-self-test", {"orders": list(orders)}, verdict(all(checks.values())), checks)


def suite_tasks(cfg: RunConfig) -> list[tuple[str, Callable[[], list[VerifyReport]]]]:
    tower = cfg.tower
    q = tower.q
    n = cfg.n
    odd = cfg.parity == "odd"
    tasks: list[tuple[str, Callable[[], list[VerifyReport]]]] = []
    tasks.append(("fields", lambda: [self_test_fields(cfg.p, cfg.f)]))
    tasks.append(("cyclo", lambda: [self_test_cyclo([cfg.p, q - 1, q * q - 1, sums.value_ring(tower).M])]))
    tasks.append(("appendix", lambda: sums.appendix_suite(cfg.p, cfg.f)))
    if cfg.f != 1:
        return tasks
    tasks.append(("witnesses", lambda: [endo.witness_certificates(cfg.parity, n, q, cfg.precision)]))
    ops = ["gl-odd", "gl-odd-phi", "u-odd"] if odd else ["gl-even", "gl-even-phi", "u-even"]
    N = 2 * n + (1 if odd else 0)
    for op in ops:
        brute_terms = (q * q - 1) ** n
        if brute_terms * (cfg.samples + q) > cfg.term_cap:
            tasks.append((op, lambda op=op, t=brute_terms: [VerifyReport("closed-vs-brute", {"operation": op, "q": q, "n": n}, SKIPPED, {"terms": t * (cfg.samples + q)}, "term cap exceeded")]))
        else:
            tasks.append((op, lambda op=op: [sscchar.oracle_check(tower, op, n, cfg.samples, cfg.seed)]))
    for variant in (["gl-odd", "gl-odd-phi"] if odd else ["gl-even", "gl-even-phi"]):
        reps_terms = (q * q - 1) ** (N - 1)
        for u in range(1, q):
            if reps_terms * N**3 > cfg.term_cap:
                tasks.append((variant, lambda v=variant, u=u: [VerifyReport("torus-representatives", {"variant": v, "n": n, "q": q, "u": u}, SKIPPED, {}, "term cap exceeded")]))
            else:
                tasks.append((variant, lambda v=variant, u=u: [sscchar.validate_torus_reps(v, n, tower, u, cfg.precision)]))
    if N <= 3:
        tasks.append(("key-lemma", lambda: [padic.key_lemma_report(q, N, 1, cfg.precision)]))
    for b in range(1, q):
        for j in range(q + 1):
            tasks.append(("ecr", lambda b=b, j=j: [endo.verify_ecr(cfg.parity, n, q, b, j, 1, cfg.precision)]))
            tasks.append(("ecr-kappa", lambda b=b, j=j: [endo.verify_ecr(cfg.parity, n, q, b, j, -1, cfg.precision)]))
    tasks.append(("uniqueness", lambda: [endo.fourier_uniqueness_check(cfg.parity, n, q)]))
    tasks.append(("parity", lambda: [endo.parity_report(q, cfg.parity)]))
    return tasks


def run_suite(cfg: RunConfig) -> tuple[int, str]:
    """Run every check for the configuration; returns (exit code, report text)."""
    try:
        cfg.validate()
    except ConfigError as exc:
        return 2, _render("suite", [VerifyReport("config", {}, FAIL, reason=str(exc))], cfg.fmt if cfg.fmt != "csv" else "json")
    tasks = suite_tasks(cfg)
    results = _map(cfg.jobs, lambda t: t[1](), tasks)
    reports = [r for group in results for r in group]
    config = {"p": cfg.p, "f": cfg.f, "n": cfg.n, "parity": cfg.parity, "precision": cfg.precision, "samples": cfg.samples, "seed": cfg.seed}
    fmt = cfg.fmt if cfg.fmt != "csv" else "json"
    return _exit_code(reports), _render("suite", reports, fmt, {"config": config})


def cmd_suite(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        p=args.p, f=args.f, n=args.n, parity=args.parity, precision=args.precision,
        fmt=args.format, term_cap=args.term_cap, jobs=args.jobs, samples=args.samples, seed=args.seed,
    )
    code, text = run_suite(cfg)
    sys.stdout.write(text)
    return code


# -- argument parser ------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker threads (output order is fixed)")
    p.add_argument("--term-cap", type=int, default=DEFAULT_TERM_CAP, help="skip computations with more terms")


def _add_q(p: argparse.ArgumentParser, r: bool = False) -> None:
    p.add_argument("--q", type=int, default=3, help="size of k_F")
    p.add_argument("--p", type=int, help="residue characteristic (with --f, overrides --q)")
    p.add_argument("--f", type=int, default=1, help="degree of k_F over GF(p)")
    if r:
        p.add_argument("--r", type=int, default=2, help="degree of k_E over k_F")


def _add_lift(p: argparse.ArgumentParser) -> None:
    _add_common(p)
    _add_q(p)
    p.add_argument("--parity", choices=endo.PARITIES, default="even")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--b", default="1")
    p.add_argument("--omega-prime", default="j=0")
    p.add_argument("--kappa", type=int, choices=(1, -1), default=1)
    p.set_defaults(func=cmd_endo_lift)


def _add_ecr(p: argparse.ArgumentParser) -> None:
    _add_common(p)
    _add_q(p)
    p.add_argument("--parity", choices=endo.PARITIES, default="even")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--b")
    p.add_argument("--omega-prime")
    p.add_argument("--kappa", type=int, choices=(1, -1), default=1)
    p.add_argument("--precision", type=int, default=4)
    p.add_argument("--all", action="store_true", help="every b and every ω′")
    p.set_defaults(func=cmd_endo_ecr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="endoscope", description="Exact checks for simple supercuspidal characters and their endoscopic lifts.")
    groups = parser.add_subparsers(dest="group", required=True)

    s = groups.add_parser("sums", help="Gauss and Kloosterman sums").add_subparsers(dest="sums_cmd", required=True)
    p = s.add_parser("kl", help="one Kloosterman sum")
    _add_common(p)
    _add_q(p, r=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--a", default="1")
    p.add_argument("--psi")
    p.add_argument("--method", choices=sums.METHODS, default="convolve")
    p.set_defaults(func=cmd_sums_kl)
    p = s.add_parser("gauss", help="one Gauss sum")
    _add_common(p)
    _add_q(p, r=True)
    p.add_argument("--chi", required=True, help="mul:F:j=.. or mul:E:j=..")
    p.add_argument("--psi")
    p.set_defaults(func=cmd_sums_gauss)
    p = s.add_parser("verify-appendix", help="Hasse-Davenport, Fourier and collapse identities")
    _add_common(p)
    _add_q(p)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--max-total", type=int, default=4)
    p.add_argument("--table-csv", help="also write Kl^{n,0} values indexed by a to this CSV file")
    p.set_defaults(func=cmd_sums_appendix)
    p = s.add_parser("table", help="Kl_a^{n,m} for every a")
    _add_common(p)
    _add_q(p, r=True)
    p.add_argument("--grid", action="append", help="n,m (repeatable)")
    p.add_argument("--max-n", type=int, default=1)
    p.add_argument("--max-m", type=int, default=0)
    p.add_argument("--psi")
    p.set_defaults(func=cmd_sums_table, format="csv")

    s = groups.add_parser("padic", help="matrices over the truncated local ring").add_subparsers(dest="padic_cmd", required=True)
    for name in ("theta", "norm", "classify", "components"):
        p = s.add_parser(name)
        _add_common(p)
        _add_q(p)
        p.add_argument("--precision", type=int, default=4)
        p.add_argument("--window-low", type=int, default=-2)
        p.add_argument("--matrix", help='JSON rows of {"v": int, "u": [coeffs]} or integers')
        p.add_argument("--witness", choices=("one-plus-phi", "phi-one-plus-phi"))
        p.add_argument("--N", type=int, default=2)
        p.add_argument("--u", default="1")
        p.add_argument("--variant", choices=("GL", "U"), default="GL")
        p.set_defaults(func=cmd_padic)
    p = s.add_parser("key-lemma")
    _add_common(p)
    _add_q(p)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--precision", type=int, default=4)
    p.add_argument("--u", default="1")
    p.set_defaults(func=cmd_padic_key_lemma)

    s = groups.add_parser("char", help="character values").add_subparsers(dest="char_cmd", required=True)
    for name in ("gl-even", "gl-even-phi", "gl-odd", "gl-odd-phi", "u-even", "u-odd"):
        p = s.add_parser(name)
        _add_common(p)
        _add_q(p)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--comps", required=True, help="comma-separated k_E elements")
        p.add_argument("--method", choices=("closed", "brute", "both"), default="both")
        p.add_argument("--psi")
        p.add_argument("--z", help="central residue")
        if name.startswith("gl"):
            p.add_argument("--zeta", type=int, default=1)
            p.add_argument("--omega", default="mul:E:j=0")
            if name.endswith("-phi"):
                p.add_argument("--u", default="1")
        else:
            p.add_argument("--b", default="1")
            p.add_argument("--omega-prime", default="j=0")
        p.set_defaults(func=cmd_char)
    p = s.add_parser("validate-reps")
    _add_common(p)
    _add_q(p)
    p.add_argument("--variant", choices=sscchar.GL_VARIANTS, default="gl-even")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--u", default="1")
    p.add_argument("--precision", type=int, default=4)
    p.set_defaults(func=cmd_char_validate)

    s = groups.add_parser("endo", help="lifting and the character relation").add_subparsers(dest="endo_cmd", required=True)
    _add_lift(s.add_parser("lift"))
    _add_ecr(s.add_parser("verify-ecr"))
    p = s.add_parser("uniqueness")
    _add_common(p)
    _add_q(p)
    p.add_argument("--parity", choices=endo.PARITIES, default="even")
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_endo_uniqueness)
    p = s.add_parser("parity")
    _add_common(p)
    _add_q(p)
    p.add_argument("--parity", choices=endo.PARITIES, default="even")
    p.set_defaults(func=cmd_endo_parity)
    # short forms: `endoscope lift ...` and `endoscope verify ecr ...`
    _add_lift(groups.add_parser("lift", help="same as endo lift"))
    v = groups.add_parser("verify", help="same as endo verify-ecr").add_subparsers(dest="verify_cmd", required=True)
    _add_ecr(v.add_parser("ecr"))

    p = groups.add_parser("suite", help="run every check for one configuration")
    _add_common(p)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--parity", choices=endo.PARITIES, default="even")
    p.add_argument("--precision", type=int, default=4)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"endoscope: error: {exc}", file=sys.stderr)
        return 2
    except (FieldError, CharError, CycloError, sums.SumError, padic.PadicError, sscchar.SscError, endo.EndoError) as exc:
        print(f"endoscope: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
