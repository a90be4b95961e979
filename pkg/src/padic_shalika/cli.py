"""Command line: verify | euler | stab | measure.

Every command reads one JSON config (see scripts/configs/) and writes one JSON
document. Flags override config keys. Exit codes: 0 pass, 1 verification
failure, 2 config or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import sympy

from . import zeta
from .chars import all_characters, trivial_char
from .euler import (LValueProvider, LocalDatum, MissingLValue, e_factor, eprime, euler_closed, euler_row,
                    interpolation_rhs, local_L)
from .measure import (UnboundedTower, boundedness_diagnostic, build_tower, compat_check, Lp_eval)
from .padic import PAdicMatrix, PAdicNum
from .reps import (PSData, Stabilization, WeightData, critical_points, enumerate_stabilizations, gl2_weight, hecke_roots,
                   integral_check, purity_check, sample_delta_identities, shalika_compatible,
                   standard_stabilization, sym_cube_from_hecke, weakly_ordinary)
from .scalar import CycScalar, as_scalar, complex_embed, padic_ord

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    n: int = 1
    K: int = 40
    L: int = 2
    T: int = 30
    tol: float = 1e-9
    alphas: list | None = None
    gl2: dict | None = None  # {"a_p": ..., "k": form weight}
    sym_cube: dict | None = None  # {"a_p": ..., "k": ...}
    weight: list | None = None  # mu, 2n entries
    eta: str = "1"
    m_max: int = 2
    s_values: list = field(default_factory=lambda: ["0"])
    provider: str | None = None
    samples: int = 40
    seed: int = 0
    jobs: int = 1
    lp_points: list = field(default_factory=list)
    lp_precision: int = 12
    perturb_alpha: str = "1"  # multiplies alpha_Theta in the closed forms only; for negative controls

    def validate(self) -> "RunConfig":
        if not sympy.isprime(self.p):
            raise ConfigError(f"p = {self.p} is not prime")
        specs = [x is not None for x in (self.alphas, self.gl2, self.sym_cube)]
        if sum(specs) != 1:
            raise ConfigError("give exactly one of alphas, gl2, sym_cube")
        if self.alphas is not None and len(self.alphas) != 2 * self.n:
            raise ConfigError(f"alphas must have 2n = {2 * self.n} entries")
        if self.gl2 is not None and self.n != 1:
            raise ConfigError("gl2 input requires n = 1")
        if self.sym_cube is not None and self.n != 2:
            raise ConfigError("sym_cube input requires n = 2")
        if self.m_max < 0 or self.L < 1 or self.T < 1:
            raise ConfigError("m_max >= 0, L >= 1 and T >= 1 are required")
        try:
            ps = self.ps_data()
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc)) from exc
        if not shalika_compatible(ps, self.eta_value()):
            raise ConfigError("alphas are not Shalika-compatible: alpha_i alpha_(2n+1-i) != eta(p)")
        for s in self.s_values:
            Fraction(s)
        return self

    def ps_data(self) -> PSData:
        if self.alphas is not None:
            return PSData(self.p, tuple(as_scalar(self.p, a) for a in self.alphas))
        if self.gl2 is not None:
            unit_root, other = hecke_roots(self.gl2["a_p"], int(self.gl2["k"]), self.p)
            return PSData(self.p, (other * Fraction(1, self.p), unit_root))
        ps, _ = sym_cube_from_hecke(self.sym_cube["a_p"], int(self.sym_cube["k"]), self.p)
        return ps

    def weight_data(self) -> WeightData | None:
        if self.weight is not None:
            return WeightData(self.n, tuple(self.weight))
        if self.gl2 is not None:
            return gl2_weight(int(self.gl2["k"]) - 2)
        if self.sym_cube is not None:
            return sym_cube_from_hecke(self.sym_cube["a_p"], int(self.sym_cube["k"]), self.p)[1]
        return None

    def eta_value(self) -> CycScalar:
        if self.alphas is None:
            ps = self.ps_data()
            return ps.alphas[0] * ps.alphas[-1]
        return as_scalar(self.p, self.eta)

    def truncation(self) -> zeta.Truncation:
        return zeta.Truncation(self.L, self.T, self.tol)

    def provider_obj(self) -> LValueProvider:
        if self.provider is None:
            return LValueProvider.one(self.p)
        try:
            return LValueProvider.from_file(self.p, self.provider)
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise ConfigError(f"cannot read provider {self.provider}: {exc}") from exc


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = RunConfig.__dataclass_fields__
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.alphas is None and cfg.gl2 is None and cfg.sym_cube is None:
        cfg.alphas = ["1/2", "2"] if cfg.n == 1 else ["1/3", "1/2", "2", "3"]
    return cfg.validate()


# ---------------------------------------------------------------- verify

def _row(lemma, params, expected, got, exact, t0, ok) -> dict:
    out = zeta.report(lemma, params, expected, got, exact, (time.perf_counter() - t0) * 1000)
    out["ok"] = bool(ok)
    return out


def _group_computation(cfg: RunConfig) -> list[dict]:
    stab = standard_stabilization(cfg.ps_data())
    p, n = cfg.p, cfg.n
    rows = []
    m_top = cfg.m_max if n == 1 else max(1, min(cfg.m_max, 2 if p == 2 else 1))
    trunc = zeta.Truncation(max(cfg.L, m_top + 1), cfg.T if n == 1 else 1, cfg.tol)
    t0 = time.perf_counter()
    c = zeta.determine_constant(stab, trunc)
    closed_stab = _perturbed(stab, as_scalar(p, cfg.perturb_alpha))
    rows.append(_row("constant", {"p": p, "n": n}, None, c, True, t0, c.is_rational() and not c.is_zero()))
    for m in range(1, m_top + 1):
        for chi in all_characters(p, m):
            t0 = time.perf_counter()
            got = zeta.euler_bruteforce(stab, chi, Fraction(1, 2), trunc).value
            expected = euler_closed(closed_stab, chi, Fraction(1, 2), c)
            rows.append(_row("computation", {"p": p, "n": n, "character": list(chi.key())},
                             expected, got, True, t0, got == expected))
    ratios = zeta.convergence_ratios(stab, trivial_char(p))
    if max(ratios) <= 0.5:
        t0 = time.perf_counter()
        chi = trivial_char(p)
        res = zeta.euler_bruteforce(stab, chi, Fraction(1, 2), zeta.Truncation(cfg.L, cfg.T, cfg.tol))
        expected = complex_embed(euler_closed(closed_stab, chi, Fraction(1, 2), c))
        err = abs(res.value - expected)
        rows.append(_row("computation_unramified", {"p": p, "n": n, "T": cfg.T, "tail_bound": res.tail_bound},
                         expected, res.value, False, t0, err <= max(cfg.tol, res.tail_bound)))
    return rows


def _perturbed(stab, factor: CycScalar):
    if factor == 1:
        return stab
    alphas = list(stab.base.alphas)
    alphas[stab.second[0]] = alphas[stab.second[0]] * factor
    return Stabilization(PSData(stab.p, tuple(alphas)), stab.first, stab.second)


def _unit_matrix(p: int, n: int, scale: Fraction, unit: int, K: int) -> PAdicMatrix:
    if n == 1:
        return PAdicMatrix(p, [[scale * unit]], K)
    return PAdicMatrix(p, [[scale * unit, scale], [0, Fraction(1)]], K)


def _group_vanishing(cfg: RunConfig) -> list[dict]:
    stab = standard_stabilization(cfg.ps_data())
    p, n = cfg.p, cfg.n
    rows = []
    units = [u for u in (1, 2, p + 1) if u % p][:2]
    top = 4 if n == 1 else 2
    for k in range(2, top + 1):
        for u in units:
            A = _unit_matrix(p, n, Fraction(1, p ** k), u, cfg.K)
            for m in range(1, k):
                t0 = time.perf_counter()
                ok = zeta.verify_vanish(stab, A, m)
                rows.append(_row("vanish", {"p": p, "n": n, "ord": -k, "unit": u, "m": m}, 0, int(not ok), True, t0, ok))
    chis = [trivial_char(p)] + [c for m in range(1, (cfg.m_max if n == 1 else 1) + 1) for c in all_characters(p, m)]
    if n == 2 and p == 2:
        chis = [trivial_char(p)]
    for chi in chis:
        for extra in (1, 2) if n == 1 else (1,):
            for u in units:
                k = max(chi.m, 1) + extra
                A = _unit_matrix(p, n, Fraction(1, p ** k), u, cfg.K)
                t0 = time.perf_counter()
                ok = zeta.verify_vanish2(stab, A, chi)
                rows.append(_row("vanish2", {"p": p, "n": n, "character": list(chi.key()), "ord": -k, "unit": u},
                                 0, int(not ok), True, t0, ok))
        if chi.m >= 1:
            for e in range(-chi.m + 1, 2):
                for u in units:
                    A = _unit_matrix(p, n, Fraction(p) ** e, u, cfg.K)
                    t0 = time.perf_counter()
                    ok = zeta.verify_gauss_lemma(stab, A, chi)
                    rows.append(_row("gauss", {"p": p, "n": n, "character": list(chi.key()), "ord": e, "unit": u},
                                     0, int(not ok), True, t0, ok))
            shifts = [(-chi.m + 1,), (-chi.m - 1,), (0,), (1,)] if n == 1 else \
                [(-chi.m, 0), (0, -chi.m), (-chi.m - 1, -chi.m), (-chi.m, -chi.m + 1)]
            for r in shifts:
                r = tuple(x for x in r)
                if all(x == -chi.m for x in r):
                    continue
                t0 = time.perf_counter()
                value, ok = zeta.verify_cond(stab, r, chi)
                rows.append(_row("cond", {"p": p, "n": n, "character": list(chi.key()), "r": list(r)},
                                 0, value, True, t0, ok))
            t0 = time.perf_counter()
            value, ok = zeta.verify_cond(stab, [-chi.m] * n, chi)
            rows.append(_row("cond_diagonal", {"p": p, "n": n, "character": list(chi.key())},
                             zeta.cond_formula(stab, chi), value, True, t0, ok))
    return rows


def _group_twist(cfg: RunConfig) -> list[dict]:
    if cfg.n != 1:
        return []
    stab = standard_stabilization(cfg.ps_data())
    p = cfg.p
    chars = [c for m in range(1, min(cfg.m_max, 2) + 1) for c in all_characters(p, m)][:6]
    rows = []
    for a in chars:
        for b in [trivial_char(p)] + chars:
            if (a * b).m == 0:
                continue
            t0 = time.perf_counter()
            ok = zeta.verify_twist(stab, a, b, trunc=zeta.Truncation(3, 3))
            rows.append(_row("twist", {"p": p, "chi_prime": list(a.key()), "chi": list(b.key())},
                             True, ok, True, t0, ok))
    return rows


def _group_delta(cfg: RunConfig) -> list[dict]:
    stab = standard_stabilization(cfg.ps_data())
    rows = []
    for i, name in enumerate(("equi", "addequi", "scaling")):
        t0 = time.perf_counter()
        passed, nonzero, count = sample_delta_identities(stab, name, cfg.samples, cfg.seed + i)
        rows.append(_row(f"delta_{name}", {"p": cfg.p, "n": cfg.n, "samples": count, "nonzero": nonzero,
                                           "seed": cfg.seed + i}, count, passed, True, t0, passed == count))
    return rows


GROUPS = {"computation": _group_computation, "vanishing": _group_vanishing, "twist": _group_twist,
          "delta": _group_delta}


def _run_group(args):
    name, cfg = args
    return GROUPS[name](cfg)


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    ratios = zeta.convergence_ratios(standard_stabilization(cfg.ps_data()), trivial_char(cfg.p))
    jobs = [(name, cfg) for name in GROUPS]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_group, jobs))
    else:
        results = [_run_group(j) for j in jobs]
    rows = [r for group in results for r in group]
    ok = all(r["ok"] for r in rows)
    doc = {"command": "verify", "config": _config_json(cfg), "guard_ratios": ratios,
           "rows": rows, "passed": sum(r["ok"] for r in rows), "total": len(rows), "ok": ok}
    return doc, EXIT_OK if ok else EXIT_FAIL


def human_table(doc: dict) -> str:
    lines = [f"{'lemma':<24}{'parameters':<60}{'exact':<7}result"]
    for r in doc["rows"]:
        params = json.dumps(r["parameters"], sort_keys=True)
        lines.append(f"{r['lemma']:<24}{params[:58]:<60}{str(r['exact']):<7}{'PASS' if r['ok'] else 'FAIL'}")
    lines.append(f"{doc['passed']}/{doc['total']} passed")
    return "\n".join(lines)


# ---------------------------------------------------------------- euler

def cmd_euler(cfg: RunConfig) -> tuple[dict, int]:
    stab = standard_stabilization(cfg.ps_data())
    p = cfg.p
    provider = cfg.provider_obj()
    chars = [trivial_char(p)] + [c for m in range(1, cfg.m_max + 1) for c in all_characters(p, m)]
    rows = []
    for s in cfg.s_values:
        s = Fraction(s)
        for chi in chars:
            row = euler_row(stab, chi, s + Fraction(1, 2), euler_closed(stab, chi, s + Fraction(1, 2)))
            row["eprime"] = eprime(stab, trivial_char(p), chi, s).serialize()
            try:
                row["rhs"] = interpolation_rhs([LocalDatum(stab)], [chi], s, provider).serialize()
            except MissingLValue as exc:
                raise ConfigError(str(exc)) from exc
            if chi.m == 0:
                row["e_over_L"] = e_factor(stab, chi, s + Fraction(1, 2)).to_json()
                row["local_L"] = local_L(stab.ordered, chi, s + Fraction(1, 2)).serialize()
            rows.append(row)
    return {"command": "euler", "config": _config_json(cfg), "rows": rows}, EXIT_OK


# ---------------------------------------------------------------- stab

def cmd_stab(cfg: RunConfig) -> tuple[dict, int]:
    ps = cfg.ps_data()
    w = cfg.weight_data()
    out = []
    for st in enumerate_stabilizations(ps):
        entry = {"label": st.label(), "alpha_theta": st.alpha_theta.serialize(),
                 "ord_alpha_theta": str(padic_ord(st.alpha_theta)), "integral": integral_check(st)}
        if w is not None:
            entry["weakly_ordinary"] = weakly_ordinary(st, w)
        out.append(entry)
    doc = {"command": "stab", "config": _config_json(cfg), "count": len(out), "stabilizations": out,
           "weakly_ordinary_count": sum(e.get("weakly_ordinary", False) for e in out)}
    if w is not None:
        doc["weight"] = list(w.mu)
        doc["pure"] = purity_check(w)
        doc["critical_points"] = list(critical_points(w))
    return doc, EXIT_OK


# ---------------------------------------------------------------- measure

def _local_json(x) -> dict:
    return {"B": x.B, "K": x.K, "parts": [None if q is None else [q[0], list(q[1])] for q in x.parts]}


def cmd_measure(cfg: RunConfig) -> tuple[dict, int]:
    stab = standard_stabilization(cfg.ps_data())
    provider = cfg.provider_obj()
    s = Fraction(cfg.s_values[0])
    depth = max(cfg.m_max, 1)
    try:
        tower = build_tower([LocalDatum(stab)], s, depth, provider)
    except MissingLValue as exc:
        raise ConfigError(str(exc)) from exc
    report = boundedness_diagnostic(tower)
    doc = {"command": "measure", "config": _config_json(cfg), "tower": tower.to_json(),
           "compatible": compat_check(tower), "diagnostic": report.to_json()}
    lp = []
    for xv in cfg.lp_points:
        x = PAdicNum.from_rational(cfg.p, Fraction(xv), cfg.lp_precision)
        try:
            value, bound = Lp_eval(tower, x, cfg.lp_precision)
            lp.append({"x": str(xv), "value": _local_json(value), "error_exponent": bound})
        except UnboundedTower as exc:
            lp.append({"x": str(xv), "refused": str(exc)})
    doc["lp"] = lp
    return doc, EXIT_OK


# ---------------------------------------------------------------- entry point

def _config_json(cfg: RunConfig) -> dict:
    return asdict(cfg)


COMMANDS = {"verify": cmd_verify, "euler": cmd_euler, "stab": cmd_stab, "measure": cmd_measure}


def _parse_override(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep:
        raise ConfigError(f"--set expects KEY=VALUE, got {text!r}")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-shalika", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--out", help="write the JSON result here instead of stdout")
    ap.add_argument("--seed", type=int, help="seed for sampled property checks")
    ap.add_argument("--jobs", type=int, help="worker processes for verify")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a config key (value parsed as JSON when possible)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = dict(_parse_override(t) for t in args.set)
        overrides.update(seed=args.seed, jobs=args.jobs)
        cfg = load_config(args.config, overrides)
        doc, code = COMMANDS[args.command](cfg)
    except (ConfigError, zeta.GuardViolation, zeta.TruncationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(doc, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.command == "verify":
        print(human_table(doc), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
