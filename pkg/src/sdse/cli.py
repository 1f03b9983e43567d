"""Command-line front end: ``sdse compute --input system.json --mode ... --form ...``.

Exit codes: 0 on success, 2 for invalid input, 3 when the numerics fail
(singular Stein operator or ill-conditioning), 4 when ``--check`` fails.
"""

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .companion import to_companion
from .companion_sdse import (companion_sdse_finite, companion_sdse_infinite,
                             mi_finite_decomposition)
from .errors import NumericalError, ScopeError, ValidationError
from .general import sdse_finite, sdse_infinite
from .inverse import inverse_sdse_finite, inverse_sdse_infinite
from .multiplicity import multi_sdse_companion, multi_sdse_general
from .oracle import DEFAULT_TOLERANCE, audit
from .report import dumps, matrix
from .spectral import (SOLVABILITY_TOL, cluster_spectrum, declared_spectrum,
                       default_cluster_tol, eig_simple, partial_fractions)
from .system import LtiSystem

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4

MODES = ("infinite", "finite", "inverse-infinite", "inverse-finite",
         "multi-infinite", "multi-finite")
FORMS = ("general", "companion")
DETAILS = ("totals", "components", "full")


class InputError(ValidationError):
    pass


def _load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from None


def _matrix_field(doc, key, required):
    if key not in doc or doc[key] is None:
        if required:
            raise InputError(f"missing required field {key!r}")
        return None
    val = doc[key]
    if not isinstance(val, list) or not all(isinstance(r, list) for r in val):
        raise InputError(f"field {key!r} must be an array of arrays")
    widths = {len(r) for r in val}
    if len(widths) > 1:
        raise InputError(f"field {key!r} has rows of unequal length")
    for r in val:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InputError(f"field {key!r} must contain only real numbers")
    return np.array(val, dtype=float).reshape(len(val), widths.pop() if widths else 0)


def _spectrum_field(doc):
    declared = doc.get("spectrum")
    if declared is None:
        return None
    if not isinstance(declared, list) or not declared:
        raise InputError("field 'spectrum' must be a non-empty array")
    vals, mult = [], []
    for k, item in enumerate(declared):
        if not isinstance(item, dict) or "re" not in item:
            raise InputError(f"spectrum[{k}] must be an object with 're'")
        m = item.get("multiplicity", 1)
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise InputError(f"spectrum[{k}].multiplicity must be a positive integer")
        vals.append(complex(float(item["re"]), float(item.get("im", 0.0))))
        mult.append(m)
    return vals, mult


def _tolerances(doc, args):
    tol = doc.get("tolerances") or {}
    if not isinstance(tol, dict):
        raise InputError("field 'tolerances' must be an object")
    out = {"solvability": tol.get("solvability", SOLVABILITY_TOL),
           "cluster": tol.get("cluster"),
           "residual": tol.get("residual", DEFAULT_TOLERANCE)}
    for key, flag in (("solvability", args.tol_solvability), ("cluster", args.tol_cluster),
                      ("residual", args.tol_residual)):
        if flag is not None:
            out[key] = flag
    for key, val in out.items():
        if val is not None and (not isinstance(val, (int, float)) or not val > 0):
            raise InputError(f"tolerance {key!r} must be a positive number")
    return out


class Job:
    """Validated input document plus command-line options."""

    def __init__(self, args):
        doc = _load_json(args.input)
        if not isinstance(doc, dict):
            raise InputError("top-level JSON value must be an object")
        A = _matrix_field(doc, "A", True)
        B = _matrix_field(doc, "B", True)
        P0 = _matrix_field(doc, "P0", False)
        if args.p0 is not None:
            p0doc = _load_json(args.p0)
            P0 = _matrix_field(p0doc if isinstance(p0doc, dict) else {"P0": p0doc}, "P0", True)
        self.system = LtiSystem(A, B, P0)
        horizon = args.horizon if args.horizon is not None else doc.get("horizon")
        if horizon is not None and (isinstance(horizon, bool) or not isinstance(horizon, int)
                                    or horizon < 0):
            raise InputError("horizon must be a nonnegative integer")
        self.mode, self.form = args.mode, args.form
        if self.mode.endswith("finite") and not self.mode.endswith("infinite") and horizon is None:
            raise InputError(f"mode {self.mode!r} needs a horizon (--horizon or 'horizon')")
        self.horizon = horizon if not self.mode.endswith("infinite") else None
        self.declared = _spectrum_field(doc)
        if self.declared and sum(self.declared[1]) != self.system.n:
            raise InputError(f"declared multiplicities sum to {sum(self.declared[1])}, "
                             f"but A is {self.system.n}x{self.system.n}")
        self.tol = _tolerances(doc, args)
        self.detail = args.detail
        self.check = args.check

    def echo(self):
        s = self.system
        out = {"A": s.A.tolist(), "B": s.B.tolist()}
        if s.P0 is not None:
            out["P0"] = s.P0.tolist()
        if self.horizon is not None:
            out["horizon"] = self.horizon
        if self.declared:
            out["spectrum"] = [{"re": z.real, "im": z.imag, "multiplicity": m}
                               for z, m in zip(*self.declared)]
        out["tolerances"] = {k: v for k, v in self.tol.items() if v is not None}
        return out


def _cluster_tol(job, A):
    return job.tol["cluster"] if job.tol["cluster"] is not None else default_cluster_tol(A)


def _simple_spectrum(job, A):
    if job.declared and any(m > 1 for m in job.declared[1]):
        raise ScopeError("declared spectrum has repeated eigenvalues; use a multi-* mode")
    return eig_simple(A, _cluster_tol(job, A), job.tol["solvability"])


def _multi_spectrum(job, A, allow_clustering):
    clustered = None
    if allow_clustering or job.declared:
        clustered = cluster_spectrum(np.linalg.eigvals(A), _cluster_tol(job, A),
                                     job.tol["solvability"])
    if not job.declared:
        if not allow_clustering:
            raise ScopeError("general-form multi modes need declared multiplicities "
                             "('spectrum' in the input file)")
        return clustered
    declared = declared_spectrum(*job.declared, solvability_tol=job.tol["solvability"])
    if sorted(clustered.multiplicities) != sorted(declared.multiplicities):
        warnings.warn(f"declared multiplicities {list(declared.multiplicities)} differ from "
                      f"clustered ones {list(clustered.multiplicities)}; using the declared ones")
    return declared


def _pairs_list(pairs):
    if pairs is None:
        return []
    r = pairs.shape[0]
    return [{"i": i, "j": j, "matrix": matrix(pairs[i, j])} for i in range(r) for j in range(r)]


class Result:
    def __init__(self, spectrum, total, audit_args, sub=(), pairs=None, inverse_parts=(),
                 extra=None):
        self.spectrum = spectrum
        self.total = total
        self.audit_args = audit_args
        self.sub = sub
        self.pairs = pairs
        self.inverse_parts = inverse_parts
        self.extra = extra or {}


def _companion_p0(real, P0):
    if P0 is None:
        return None
    Tinv = np.linalg.inv(real.T)
    return Tinv @ P0 @ Tinv.T


def _run_general(job):
    s = job.system
    if job.mode.startswith("inverse"):
        raise ScopeError("inverse modes are available in companion form only (--form companion)")
    if job.mode.startswith("multi"):
        spectrum = _multi_spectrum(job, s.A, allow_clustering=False)
        pf = partial_fractions(s.A, spectrum)
        d = multi_sdse_general(s, pf, t=job.horizon)
        return Result(spectrum, d.total, (s.A, s.Q, None, job.horizon), sub=d.sub)
    spectrum = _simple_spectrum(job, s.A)
    if job.mode == "infinite":
        d = sdse_infinite(s.with_initial(None), spectrum)
    else:
        d = sdse_finite(s, job.horizon, spectrum)
    extra = {}
    if d.initial:
        extra["initial_terms"] = [matrix(M) for M in d.initial]
    return Result(spectrum, d.total, (s.A, s.Q, s.P0 if d.initial else None, d.horizon),
                  sub=d.sub, pairs=d.pairs, extra=extra)


def _run_companion(job):
    s = job.system
    if s.m > 1:
        if job.mode not in ("infinite", "finite"):
            raise ScopeError(f"mode {job.mode!r} in companion form needs a single input (m = {s.m})")
        spectrum = _simple_spectrum(job, s.A)
        d = mi_finite_decomposition(s, t=job.horizon, spectrum=spectrum)
        return Result(spectrum, d.total, (s.A, s.Q, s.P0 if d.initial else None, d.horizon),
                      sub=d.sub, extra={"lift_asymmetry": d.meta.get("lift_asymmetry")})
    real = to_companion(s)
    Q_C = np.outer(real.b_C, real.b_C)
    P0_C = _companion_p0(real, s.P0) if job.horizon is not None else None
    lift = lambda P: real.T @ P @ real.T.T  # noqa: E731
    if job.mode.startswith("multi"):
        if job.mode == "multi-finite":
            raise ScopeError("multi-finite is available in general form only")
        spectrum = _multi_spectrum(job, s.A, allow_clustering=True)
        d = multi_sdse_companion(real, spectrum, cluster_tol=job.tol["cluster"])
        return Result(spectrum, d.total, (real.A_C, Q_C, None, None), sub=d.sub,
                      extra={"lifted_total": lift(d.total),
                             "eigenparts": [matrix(M) for M in d.eigenparts]})
    spectrum = _simple_spectrum(job, s.A)
    if job.mode == "infinite":
        d = companion_sdse_infinite(real, spectrum)
        return Result(spectrum, d.total, (real.A_C, Q_C, None, None), sub=d.sub, pairs=d.pairs,
                      extra={"lifted_total": lift(d.total), "toeplitz": d.toeplitz})
    if job.mode == "finite":
        d = companion_sdse_finite(real, job.horizon, spectrum, P0_C)
        extra = {"lifted_total": lift(d.total)}
        if d.initial:
            extra["initial_terms"] = [matrix(M) for M in d.initial]
        return Result(spectrum, d.total, (real.A_C, Q_C, P0_C, job.horizon), sub=d.sub,
                      pairs=d.pairs, extra=extra)
    if job.mode == "inverse-infinite":
        d = inverse_sdse_infinite(real, spectrum)
        return Result(spectrum, d.total, (real.A_C, Q_C, None, None), pairs=d.pairs,
                      inverse_parts=d.sub, extra={"forward_condition": d.forward_condition})
    d = inverse_sdse_finite(real, job.horizon, spectrum, P0_C)
    return Result(spectrum, d.total, (real.A_C, Q_C, P0_C, job.horizon), pairs=d.pairs,
                  inverse_parts=d.sub,
                  extra={"forward_condition": d.forward_condition, "G": d.G,
                         "total_symmetric": d.total_symmetric})


def _report(job, res):
    meta = {"version": __version__, "mode": job.mode, "form": job.form,
            "horizon": job.horizon, "detail": job.detail,
            "tolerances": {k: v for k, v in job.tol.items() if v is not None}}
    comps = {"sub_gramians": [], "pair_sub_gramians": [], "inverse_parts": []}
    if job.detail != "totals":
        comps["sub_gramians"] = [matrix(M) for M in res.sub]
        comps["inverse_parts"] = [matrix(M) for M in res.inverse_parts]
    if job.detail == "full":
        comps["pair_sub_gramians"] = _pairs_list(res.pairs)
        for key, val in res.extra.items():
            if val is not None:
                comps[key] = matrix(val) if isinstance(val, np.ndarray) else val
    spectrum = [{"re": float(z.real), "im": float(z.imag), "multiplicity": int(m)}
                for z, m in zip(res.spectrum.eigenvalues, res.spectrum.multiplicities)]
    out = {"meta": meta, "system": job.echo(), "spectrum": spectrum, "components": comps,
           "total": matrix(res.total)}
    if "lifted_total" in res.extra:
        out["lifted_total"] = matrix(res.extra["lifted_total"])
    return out


def run(job):
    """Execute a validated job; returns ``(report_dict, exit_code)``."""
    res = _run_companion(job) if job.form == "companion" else _run_general(job)
    report = _report(job, res)
    code = EXIT_OK
    if job.check:
        A, Q, P0, t = res.audit_args
        rep = audit(res.total, A, Q, P0=P0, horizon=t, tolerance=job.tol["residual"],
                    inverse=job.mode.startswith("inverse"))
        report["audit"] = rep.as_dict()
        if not rep.passed:
            code = EXIT_CHECK
    return report, code


def _parser():
    p = argparse.ArgumentParser(prog="sdse", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="decompose the Gramian of one system")
    c.add_argument("--input", required=True, help="system description (JSON)")
    c.add_argument("--mode", required=True, choices=MODES)
    c.add_argument("--form", default="general", choices=FORMS)
    c.add_argument("--horizon", type=int)
    c.add_argument("--p0", help="JSON file holding the initial Gramian")
    c.add_argument("--check", action="store_true", help="audit the total against the oracle")
    c.add_argument("--tol-residual", type=float)
    c.add_argument("--tol-solvability", type=float)
    c.add_argument("--tol-cluster", type=float)
    c.add_argument("--output", help="report path, '-' for standard output")
    c.add_argument("--detail", default="components", choices=DETAILS)
    return p


def _emit_warnings(caught):
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)


def main(argv=None):
    args = _parser().parse_args(argv)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            job = Job(args)
            report, code = run(job)
        except ValidationError as exc:
            _emit_warnings(caught)
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        except NumericalError as exc:
            _emit_warnings(caught)
            print(f"numerical error: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
    _emit_warnings(caught)
    text = dumps(report)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        out = Path(args.output) if args.output else Path(args.input).with_suffix(".report.json")
        out.write_text(text, encoding="utf-8")
    if code == EXIT_CHECK:
        print("check failed: audit of the total exceeds the residual tolerance", file=sys.stderr)
    return code
