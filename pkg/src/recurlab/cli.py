"""Command line runner: ``recurlab <group> <command> [options]``.

Every subcommand is deterministic for a fixed configuration.  Options can
also come from ``--config FILE`` holding ``key = value`` lines (``#``
comments allowed); command line flags override the file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from recurlab import acceptance, circle, detect, funcalg, hardy, lacunary, mobius, omega
from recurlab.mobius import MobiusMap, ParabolicParam


class SchemaError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 1
    output: Optional[str] = None


# -- parsing helpers ----------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """``"re,im"`` or any Python complex literal such as ``1+2j``."""
    text = str(text).strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace("i", "j"))


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational number: {text!r}") from exc


def parse_map(spec: str, a: Optional[complex] = None) -> MobiusMap:
    """``parabolic:N`` (with ``--a``), ``hyperbolic:R``, ``rotation:THETA``,
    ``rotation-frac:P/Q`` (angle ``2 pi P/Q``), ``identity`` or four
    complex coefficients ``a;b;c;d``."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    try:
        if kind == "parabolic":
            return mobius.parabolic_family(ParabolicParam(a if a is not None else 1, int(arg or 1)))
        if kind == "hyperbolic":
            return MobiusMap.hyperbolic(float(arg))
        if kind == "rotation":
            return MobiusMap.rotation(float(arg))
        if kind == "rotation-frac":
            return MobiusMap.rotation(2 * math.pi * float(Fraction(arg)))
        if kind == "identity":
            return MobiusMap.identity()
        parts = spec.split(";")
        if len(parts) == 4:
            return MobiusMap(*(parse_complex(p) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad map spec {spec!r}: {exc}") from exc
    raise SchemaError(f"unknown map spec {spec!r}")


def read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SchemaError(f"{path}:{lineno}: expected key = value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def load_dense(path: str) -> np.ndarray:
    """``{"rows": [[[re, im], ...], ...]}`` for matrices and ``{"rows": [[re, im], ...]}`` for vectors."""
    doc = _read_json(path)
    try:
        arr = np.asarray(doc["rows"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: expected {{'rows': [[re, im], ...]}}") from exc
    if arr.shape[-1] != 2:
        raise SchemaError(f"{path}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_sparse(path: str) -> omega.RowFiniteMatrix:
    """``{"size": n, "entries": [{"i":, "j":, "re":, "im":}, ...]}`` with 1-based labels;
    rows past ``size`` are identity rows."""
    doc = _read_json(path)
    try:
        entries = [(int(e["i"]), int(e["j"]), complex(float(e.get("re", 0)), float(e.get("im", 0))))
                   for e in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: expected entries of {{i, j, re, im}}") from exc
    return omega.RowFiniteMatrix.from_entries(entries, doc.get("size"))


# -- emitters ------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def emit_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def _cplx(z):
    return [z.real, z.imag] if not np.isinf(z) else "inf"


# -- subcommands ------------------------------------------------------------------------
# each returns (text, ok)


def cmd_mobius_classify(args):
    a = parse_complex(args.a) if args.a else None
    m = parse_map(args.map, a)
    return emit_json(mobius.classify(m).to_dict()), True


def cmd_hardy_parabolic_scan(args):
    a = parse_complex(args.a)
    nu, kmax, horizon = float(args.nu), int(args.kmax), int(args.horizon)
    coeffs = [parse_complex(c) for c in args.coeffs.split(";")] if args.coeffs else [0, 1]
    f = hardy.WeightedCoefficientVector(np.array(coeffs), hardy.WeightSequence.dirichlet(nu))
    rows = []
    for m in range(1, kmax + 1):
        bound_M = None
        if (1 - 2 * m) / 2 < nu < 0:
            dec = hardy.decay_sequence(a, nu, m, f, horizon)
            bound_M, expo = dec.M, dec.exponent
        for n in range(1, horizon + 1):
            val = hardy.parabolic_composite_derivative(f, ParabolicParam(a, n), m)
            bound = "" if bound_M is None else bound_M * (n * a.real) ** expo
            src = "faa-di-bruno" if bound_M is None else "faa-di-bruno;decay-bound"
            rows.append((n, m, val.real, val.imag, bound, src))
    return emit_csv(["n", "m", "value_re", "value_im", "bound", "source"], rows), True


def cmd_detect_scan(args):
    T = load_dense(args.op)
    x = load_dense(args.vec)
    res = detect.recurrence_search(T, x, int(args.horizon), float(args.tol))
    if res:
        out = {"found": True, "indices": res.indices, "residuals": res.residuals, "norm_kind": res.norm_kind}
    else:
        out = {"found": False, "min_residual": res.min_residual, "argmin": res.argmin}
    return emit_json(out), True


def cmd_omega_decide(args):
    A = load_sparse(args.matrix)
    v = omega.recurrence_decide_lower_triangular(A, int(args.window), float(args.eps), int(args.horizon))
    if isinstance(v, omega.Recurrent):
        out = {"verdict": "recurrent", "n": v.n, "raw_residual": v.raw_residual,
               "conjugated_residual": v.conjugated_residual, "kronecker_eps": v.kronecker_eps}
    elif isinstance(v, omega.NotRecurrent):
        out = {"verdict": "not-recurrent", "reason": v.reason}
        if v.witness is not None:
            out.update(position=list(v.witness.position), w=_cplx(v.witness.w),
                       slope=v.witness.lower_bound_slope)
        if v.position is not None:
            out["position"] = v.position
    else:
        out = {"verdict": "undecided", "best_n": v.best_n, "best_residual": v.best_residual}
    return emit_json(out), True


def cmd_circle_cantor(args):
    c = parse_fraction(args.c)
    if not 0 < c < 1:
        raise SchemaError("c must lie in (0, 1)")
    k = int(args.level)
    if k < 1:
        raise SchemaError("level must be >= 1")
    cs = circle.fat_cantor(c, k)
    rows = [
        ("piece_length", str(cs.piece_length), "level-k middle removal"),
        ("level_identity_lhs", str(2 ** k * cs.piece_length), "2^k |F_1k|"),
        ("level_identity_rhs", str(cs.level_identity_rhs()), "1 - c(1 - (2/3)^k)"),
        ("remaining_measure", str(cs.remaining_measure()), "sum of level-k pieces"),
    ]
    ok = 2 ** k * cs.piece_length == cs.level_identity_rhs()
    if args.delta:
        delta = parse_fraction(args.delta)
        if not 0 < delta < Fraction(1, 2):
            raise SchemaError("delta must lie in (0, 1/2)")
        r = circle.multiplier_nonreturn(cs, delta, int(args.horizon))
        rows += [("nonreturn_min", str(r.minimum), "exact escaping mass"),
                 ("nonreturn_argmin", str(r.argmin), "exact escaping mass"),
                 ("nonreturn_lower_bound", str(r.lower_bound), "(1-c)(1-2 delta)")]
        ok &= r.ok
    return emit_csv(["quantity", "value", "source"], rows), ok


def cmd_lacunary_build(args):
    nu = float(args.nu)
    eps = float(parse_fraction(args.eps))
    f = lacunary.select_exponents(nu, eps, int(args.terms))
    rows, ok = [], True
    for p in range(1, f.P + 1):
        au = lacunary.annulus_audit(f, p)
        ok &= au.ok
        rows.append((p, f.exponents[p - 1], au.bound, au.min_partial, au.certified_min, au.ok, "annulus-bound"))
    return emit_csv(["p", "m", "bound", "min_partial", "certified_min", "ok", "source"], rows), ok


def cmd_algebra_decide(args):
    vals = [parse_complex(v) for v in args.values.split(";")]
    a = funcalg.AlgebraElement(vals)
    v = funcalg.mult_recurrence_decide(a, float(args.eps), int(args.horizon))
    if isinstance(v, funcalg.Recurrent):
        rows = [("recurrent", v.n, v.residual, "")]
    elif isinstance(v, funcalg.NotRecurrent):
        rows = [("not-recurrent", "", "", v.index)]
    else:
        rows = [("undecided", v.best_n, v.best_residual, "")]
    return emit_csv(["verdict", "n", "residual", "witness_index"], rows), True


def cmd_algebra_comp(args):
    a = parse_complex(args.a) if args.a else None
    m = parse_map(args.map, a)
    f = funcalg.GridDiskFunction.identity()
    r = funcalg.composition_supnorm_residual(m, f, int(args.horizon))
    rows = [(n, val) for n, val in enumerate(r, start=1)]
    return emit_csv(["n", "residual"], rows), True


def cmd_paper_suite(args):
    results = acceptance.run_all(int(args.seed))
    rows = [(r.number, r.name, "pass" if r.passed else "fail", r.detail) for r in results]
    return emit_csv(["criterion", "name", "status", "detail"], rows), all(r.passed for r in results)


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recurlab", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("--config", help="key = value file supplying defaults")
    p.add_argument("--output", help="write the artifact here instead of stdout")
    p.add_argument("--seed", type=int, default=1)
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group_parsers, name, fn, **opts):
        sp = group_parsers.add_parser(name, allow_abbrev=False)
        for flag, kw in opts.items():
            sp.add_argument("--" + flag.replace("_", "-"), dest=flag, **kw)
        sp.set_defaults(func=fn)
        return sp

    g = groups.add_parser("mobius").add_subparsers(dest="command", required=True)
    sub(g, "classify", cmd_mobius_classify, a=dict(default=None), map=dict(default="parabolic:1"))

    g = groups.add_parser("hardy").add_subparsers(dest="command", required=True)
    sub(g, "parabolic-scan", cmd_hardy_parabolic_scan, a=dict(default="1,0"), nu=dict(default="-0.25"),
        kmax=dict(default="1"), horizon=dict(default="100"), coeffs=dict(default=None))

    g = groups.add_parser("detect").add_subparsers(dest="command", required=True)
    sub(g, "scan", cmd_detect_scan, op=dict(default=None), vec=dict(default=None),
        horizon=dict(default="1000"), tol=dict(default="1e-9"))

    g = groups.add_parser("omega").add_subparsers(dest="command", required=True)
    sub(g, "decide", cmd_omega_decide, matrix=dict(default=None), window=dict(default="8"),
        eps=dict(default="0.05"), horizon=dict(default="1000000"))

    g = groups.add_parser("circle").add_subparsers(dest="command", required=True)
    sub(g, "cantor", cmd_circle_cantor, c=dict(default="1/2"), level=dict(default="10"),
        delta=dict(default=None), horizon=dict(default="1000"))

    g = groups.add_parser("lacunary").add_subparsers(dest="command", required=True)
    sub(g, "build", cmd_lacunary_build, nu=dict(default="1"), eps=dict(default="1/5"), terms=dict(default="4"))

    g = groups.add_parser("algebra").add_subparsers(dest="command", required=True)
    sub(g, "decide", cmd_algebra_decide, values=dict(default="1"), eps=dict(default="0.05"),
        horizon=dict(default="1000000"))
    sub(g, "comp", cmd_algebra_comp, map=dict(default="parabolic:1"), a=dict(default=None),
        horizon=dict(default="1000"))

    sp = groups.add_parser("paper-suite")
    sp.set_defaults(func=cmd_paper_suite)
    return p


def _apply_config(parser, argv):
    """Two-pass parse so ``--config`` values act as defaults for the chosen subcommand."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        cfg = read_config(known.config)
        explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
        for k, v in cfg.items():
            if k in explicit:
                continue
            if k == "seed":
                args.seed = int(v)
            elif k == "output":
                args.output = v
            elif hasattr(args, k):
                setattr(args, k, v)
            else:
                raise SchemaError(f"config key {k!r} does not apply to this command")
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        text, ok = args.func(args)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"recurlab: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {args.output}: {'ok' if ok else 'FAILED'}")
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def run(config: ExperimentConfig) -> int:
    """Programmatic entry point; ``experiment`` is e.g. ``"circle cantor"``."""
    argv = ["--seed", str(config.seed)]
    if config.output:
        argv += ["--output", config.output]
    argv += config.experiment.split()
    for k, v in config.params.items():
        argv += ["--" + k.replace("_", "-"), str(v)]
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
