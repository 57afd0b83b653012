"""Command-line front end: `pi1 generate ...` and `pi1 verify ...`."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .exact import MultiPoly, Q, X, p_atom, q_atom, rational_text, t_atom

DEFAULT_MAX_G_SUITE = 4
DEFAULT_MAX_G_POINT = 6


class UsageError(Exception):
    pass


def _text(v) -> str:
    if isinstance(v, MultiPoly):
        return v.canonical() if hasattr(v, "canonical") else str(v)
    try:
        return rational_text(v)
    except (TypeError, ValueError):
        return str(v)


def trial_seed(seed: int, check: str, g: int, trial: int) -> int:
    """Independent 64-bit seed per (run seed, check, genus, trial)."""
    digest = hashlib.sha256(f"{seed}/{check}/{g}/{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# -- checks -----------------------------------------------------------------------
# Each trial function returns None on success or a JSON-ready witness.


def _zero_curvature(g: int, _seed: int, _literal: bool):
    from .minimal import zero_curvature_checks

    rep = zero_curvature_checks(g)
    if rep.ok:
        return None
    return {
        "kdv_compat": {str(k): v for k, v in rep.kdv_compat.items() if not v},
        "string_compat_constant": _text(rep.string_compat_constant),
        "lambda_s_compat": {str(k): v for k, v in rep.lambda_s_compat.items() if not v},
        "s_s_compat": {str(k): v for k, v in rep.s_s_compat.items() if not v},
    }


def _toeplitz(g: int, seed: int, literal: bool):
    from .minimal import I_equals_CH, spectral_data, toeplitz_relation_check
    from .poisson import random_physical_jet

    if not toeplitz_relation_check(g):
        return {"beta_relation": False}
    jet = random_physical_jet(g, random.Random(seed))
    sd = spectral_data(g, at=jet)
    factor = 1 if literal else 2
    if not I_equals_CH(sd, g, factor=factor):
        return {"I": [_text(v) for v in sd.I], "H": [_text(v) for v in sd.H], "factor": factor}
    return None


def _poisson_canonical(g: int, seed: int, _literal: bool):
    from .poisson import canonical_check

    r = canonical_check(g, [seed])
    return None if r["ok"] else r


def _casimir(g: int, seed: int, _literal: bool):
    from .poisson import casimir_check

    ok = casimir_check(g, symbolic=False, seeds=[seed])
    return None if ok else {"casimir": False}


def _ad_flow(g: int, seed: int, literal: bool):
    from .poisson import ad_flow_check

    r = ad_flow_check(g, seed, literal=literal)
    return None if r["ok"] else r


def _residue_lemma(g: int, seed: int, _literal: bool):
    from .minimal import correction_residue_sides

    rng = random.Random(seed)
    lams = [Q(v) for v in rng.sample(range(-4 * g - 5, 4 * g + 6), g)]
    mus = [Q(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(g)]
    for k in range(1, g + 1):
        a, b = correction_residue_sides(g, k, lams, mus)
        if a != b:
            return {"k": k, "residue": _text(a), "sum": _text(b)}
    return None


def _identify(fn_name: str, literal_aware: bool) -> Callable:
    def run(g: int, seed: int, literal: bool):
        from . import identify

        fn = getattr(identify, fn_name)
        r = fn(g, [seed], literal) if literal_aware else fn(g, [seed])
        return None if r.ok else r.witness

    return run


def _string_operator(g: int, _seed: int, _literal: bool):
    from .psido import string_operator_check

    ok, residual = string_operator_check(g)
    return None if ok else {"residual": str(residual)}


def _g2_ode(_g: int, _seed: int, _literal: bool):
    from .diffjet import g2_ode_elimination_check

    ok, residual = g2_ode_elimination_check()
    return None if ok else {"residual": str(residual)}


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable
    seeded: bool = True
    point_check: bool = False
    max_g: int | None = None
    fixed_g: int | None = None


CHECKS = {
    c.name: c
    for c in (
        Check("zero-curvature", _zero_curvature, seeded=False),
        Check("toeplitz", _toeplitz),
        Check("poisson-canonical", _poisson_canonical, point_check=True),
        Check("casimir", _casimir),
        Check("ad-flow", _ad_flow),
        Check("residue-lemma", _residue_lemma, point_check=True),
        Check("lax-identity", _identify("lax_identity_check", False)),
        Check("invariants", _identify("invariants_check", False)),
        Check("hamiltonians", _identify("hamiltonian_checks", True)),
        Check("symmetric-correction", _identify("symmetric_correction_check", True)),
        Check("string-operator", _string_operator, seeded=False, max_g=3),
        Check("g2-ode", _g2_ode, seeded=False, fixed_g=2),
    )
}


def max_genus(point_check: bool) -> int:
    env = os.environ.get("PI1_MAX_G")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"PI1_MAX_G must be an integer, got {env!r}") from None
    return DEFAULT_MAX_G_POINT if point_check else DEFAULT_MAX_G_SUITE


def _one_trial(args: tuple):
    name, g, seed, literal = args
    try:
        return CHECKS[name].run(g, seed, literal), None
    except Exception as exc:  # reported, not raised: one broken trial must not hide the rest
        return None, f"{type(exc).__name__}: {exc}"


def run_check(name: str, g: int, seed: int, trials: int, literal: bool, timing: bool, jobs: int) -> dict:
    check = CHECKS[name]
    eff_g = check.fixed_g or g
    started = time.perf_counter()
    n = trials if check.seeded else 1
    tasks = [(name, eff_g, trial_seed(seed, name, eff_g, t), literal) for t in range(n)]
    if jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one_trial, tasks))
    else:
        results = [_one_trial(t) for t in tasks]
    failures, errors = [], []
    for t, (witness, err) in enumerate(results):
        if err is not None:
            errors.append({"trial": t, "trial_seed": tasks[t][2], "error": err})
        elif witness is not None:
            failures.append({"trial": t, "trial_seed": tasks[t][2], "witness": witness})
    status = "error" if errors else ("fail" if failures else "pass")
    return {
        "check": name,
        "g": eff_g,
        "seed": seed,
        "trials": n,
        "form": "literal" if literal else "corrected",
        "status": status,
        "failures": failures + errors,
        "elapsed_ms": round((time.perf_counter() - started) * 1000, 3) if timing else None,
    }


def _report_line(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True)
    line = f"{rep['check']:<22} g={rep['g']} seed={rep['seed']} trials={rep['trials']} {rep['status'].upper()}"
    if rep["failures"]:
        line += " " + json.dumps(rep["failures"][0], sort_keys=True)
    return line


def cmd_verify(ns, out) -> int:
    names = list(CHECKS) if "all" in ns.checks else ns.checks
    for n in names:
        if n not in CHECKS:
            raise UsageError(f"unknown check {n!r}; choose from {', '.join(list(CHECKS) + ['all'])}")
    if ns.g < 1:
        raise UsageError("--g must be at least 1")
    if ns.trials < 1:
        raise UsageError("--trials must be at least 1")
    if ns.format not in ("json", "text"):
        raise UsageError("verify supports --format json or text")
    if ns.replay:
        return replay(ns, out)
    if all("all" != n for n in ns.checks):
        for n in names:
            c = CHECKS[n]
            if c.fixed_g is None and ns.g > max_genus(c.point_check):
                raise UsageError(f"g={ns.g} exceeds the ceiling {max_genus(c.point_check)} for {n}")
    elif ns.g > max_genus(False):
        raise UsageError(f"g={ns.g} exceeds the suite ceiling {max_genus(False)}")
    code = 0
    for n in names:
        c = CHECKS[n]
        if c.max_g is not None and ns.g > c.max_g and "all" in ns.checks:
            continue
        rep = run_check(n, ns.g, ns.seed, ns.trials, ns.literal, ns.timing, ns.jobs)
        print(_report_line(rep, ns.format), file=out, flush=True)
        if rep["status"] != "pass":
            code = 1
    return code


def replay(ns, out) -> int:
    """Re-run every witness in a report file; exit 0 iff each reproduces exactly."""
    try:
        with open(ns.replay, encoding="utf-8") as fh:
            reports = [json.loads(line) for line in fh if line.strip()]
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read replay file: {exc}") from None
    code = 0
    for rep in reports:
        name = rep.get("check")
        if name not in CHECKS:
            raise UsageError(f"replay file names unknown check {name!r}")
        literal = rep.get("form") == "literal"
        for f in rep.get("failures", []):
            witness, err = _one_trial((name, rep["g"], f["trial_seed"], literal))
            again = witness if err is None else err
            stored = f.get("witness", f.get("error"))
            same = json.loads(json.dumps(again, sort_keys=True)) == stored
            line = {"check": name, "g": rep["g"], "trial": f["trial"], "trial_seed": f["trial_seed"], "reproduced": same}
            print(json.dumps(line, sort_keys=True), file=out)
            if not same:
                code = 1
    return code


# -- generate -----------------------------------------------------------------------


def _render_poly(p, fmt: str) -> str:
    if fmt == "latex":
        return p.latex() if hasattr(p, "latex") else _text(p)
    return str(p)


def _gen_lenard(ns) -> list:
    from .diffjet import R

    lmax = 3 if ns.lmax is None else ns.lmax
    if lmax < 0:
        raise UsageError("--lmax must be non-negative")
    lines = []
    for l in range(lmax + 1):
        k = 2 * l + 1
        lhs = f"R_{{{k}}}" if ns.format == "latex" else f"R_{k}"
        lines.append(f"{lhs} = {_render_poly(R(k), ns.format)}")
    return lines


def _mat_text(m, fmt: str) -> str:
    if fmt == "latex":
        return m.latex()
    return "[[{}, {}], [{}, {}]]".format(*(str(e) for e in m.entries()))


def _gen_U(ns) -> list:
    from .minimal import build_U2n1

    n = 0 if ns.n is None else ns.n
    if n < 0:
        raise UsageError("--n must be non-negative")
    name = f"\\mathcal{{U}}_{{{2 * n + 1}}}(\\lambda)" if ns.format == "latex" else f"U_{2 * n + 1}"
    return [f"{name} = {_mat_text(build_U2n1(n), ns.format)}"]


def _gen_Ag(ns) -> list:
    from .minimal import build_Ag

    name = f"\\mathcal{{A}}^{{({ns.g})}}(\\lambda)" if ns.format == "latex" else f"A^({ns.g})"
    return [f"{name} = {_mat_text(build_Ag(ns.g), ns.format)}"]


def _symbolic_times(g: int):
    from .isomono import IrregularTimes

    return IrregularTimes(g, tuple(X(t_atom(2 * i + 1)) for i in range(g)))


def _gen_oper_L(ns) -> list:
    from .identify import random_oper_point
    from .isomono import OperPoint, oper_L

    g = ns.g
    if g == 1:
        pt = OperPoint((X(q_atom(1)),), (X(p_atom(1)),), _symbolic_times(1))
        note = "symbolic"
    else:
        pt = random_oper_point(g, random.Random(trial_seed(ns.seed, "oper-L", g, 0)))
        note = "q=({}) p=({}) t=({})".format(
            ", ".join(map(_text, pt.q)), ", ".join(map(_text, pt.p)), ", ".join(map(_text, pt.times.free))
        )
    L = oper_L(pt)
    if ns.format == "latex":
        from .isomono import latex_oper_L

        return [f"% {note}", latex_oper_L(pt)]
    return [f"# {note}", f"L21 = ({L.L21.num}) / ({L.L21.den})", f"L22 = ({L.L22.num}) / ({L.L22.den})"]


def _gen_hatL(ns) -> list:
    from .isomono import hatL_symmetric, symbolic_sym_point

    m = hatL_symmetric(symbolic_sym_point(ns.g, _symbolic_times(ns.g)))
    if ns.format == "latex":
        return ["\\hat{L}(\\lambda) = " + m.latex()]
    return ["hatL = " + _mat_text(m, ns.format)]


def _gen_hamiltonians(ns) -> list:
    from .exact import Psym_atom, Qsym_atom
    from .isomono import e_dir, ham_symmetric, symbolic_sym_point

    g = ns.g
    sym = symbolic_sym_point(g, _symbolic_times(g))
    lines = []
    for k in range(1, g + 1):
        H = ham_symmetric(sym, e_dir(k))
        if g == 1:
            # one apparent singularity: Q_1 = q_1 and P_1 = p_1
            H = H.subs({Qsym_atom(1): X(q_atom(1)), Psym_atom(1): X(p_atom(1))})
        name = f"\\mathrm{{Ham}}^{{(e_{{{2 * k - 1}}})}}" if ns.format == "latex" else f"Ham^(e_{2 * k - 1})"
        lines.append(f"{name} = {_render_poly(H, ns.format)}")
    return lines


def _gen_dictionary(ns) -> list:
    from .identify import dictionary

    return [json.dumps(dictionary(ns.g), indent=2, sort_keys=True)]


GENERATORS = {
    "lenard": _gen_lenard,
    "U": _gen_U,
    "Ag": _gen_Ag,
    "oper-L": _gen_oper_L,
    "hatL": _gen_hatL,
    "hamiltonians": _gen_hamiltonians,
    "dictionary": _gen_dictionary,
}


def cmd_generate(ns, out) -> int:
    if ns.what not in GENERATORS:
        raise UsageError(f"unknown target {ns.what!r}; choose from {', '.join(GENERATORS)}")
    if ns.g < 1:
        raise UsageError("--g must be at least 1")
    if ns.g > max_genus(True):
        raise UsageError(f"g={ns.g} exceeds the ceiling {max_genus(True)}")
    if ns.format not in ("text", "latex", "json"):
        raise UsageError("generate supports --format text, latex or json")
    lines = GENERATORS[ns.what](ns)
    if ns.format == "json" and ns.what != "dictionary":
        print(json.dumps({"target": ns.what, "g": ns.g, "lines": lines}, sort_keys=True), file=out)
    else:
        for line in lines:
            print(line, file=out)
    return 0


# -- entry point -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pi1", description="Exact formulas and identity checks for the PI hierarchy.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--g", type=int, default=1, help="genus (default 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--depth", type=int, default=None, help="series depth override")
    common.add_argument("--out", default=None, help="write to FILE instead of stdout")

    gen = sub.add_parser("generate", parents=[common], help="print formulas")
    gen.add_argument("what", help=", ".join(GENERATORS))
    gen.add_argument("--lmax", type=int, default=None)
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--format", default="text")

    ver = sub.add_parser("verify", parents=[common], help="run identity checks")
    ver.add_argument("checks", nargs="*", default=["all"], help=", ".join(list(CHECKS) + ["all"]))
    ver.add_argument("--trials", type=int, default=5)
    ver.add_argument("--format", default="json")
    ver.add_argument("--replay", default=None, metavar="FILE")
    ver.add_argument("--timing", action="store_true", help="record elapsed_ms (breaks byte-identity)")
    ver.add_argument("--literal", action="store_true", help="check the closed forms literally, without the known corrections")
    ver.add_argument("--jobs", type=int, default=1)
    return p


def main(argv: list | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.depth is not None and ns.depth < 1:
            raise UsageError("--depth must be positive")
        out = open(ns.out, "w", encoding="utf-8") if ns.out else sys.stdout
        try:
            if ns.command == "generate":
                return cmd_generate(ns, out)
            return cmd_verify(ns, out)
        finally:
            if ns.out:
                out.close()
    except UsageError as exc:
        print(f"pi1: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
