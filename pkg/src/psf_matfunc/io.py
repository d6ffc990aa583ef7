"""File formats: matrices, vectors, plans, reports, and RFC-4180 CSV.

Dense matrices travel as JSON ({rows, cols, re[], im[]}, row-major) or
Matrix Market coordinate files; vectors as JSON arrays of [re, im] pairs.
Floats are rendered with repr() everywhere so identical inputs produce
byte-identical outputs (the determinism contract for sweeps).
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Callable, NamedTuple

import numpy as np
import scipy.io

from .contour import ContourPlan
from .costmodel import CostReport
from .errors import PrecondError
from .fourier import FourierPlan, lcu_coefficients
from .kernels import SpectralProfile
from .operators import ConvergenceRecord


# ---------------------------------------------------------------------------
# matrices and vectors

def load_matrix(path: str) -> np.ndarray:
    """Dense complex matrix from .json ({rows, cols, re[], im[]}) or a
    Matrix Market file (any other extension)."""
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        try:
            rows, cols = int(obj["rows"]), int(obj["cols"])
            re = np.asarray(obj["re"], dtype=float)
            im = np.asarray(obj["im"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise PrecondError(f"matrix JSON in {path} needs rows/cols/re/im: {exc}")
        if re.size != rows * cols or im.size != rows * cols:
            raise PrecondError(
                f"matrix JSON in {path}: {rows}x{cols} declared but "
                f"{re.size} re / {im.size} im entries")
        M = (re + 1j * im).reshape(rows, cols)
    else:
        try:
            M = scipy.io.mmread(path)
        except Exception as exc:
            raise PrecondError(f"cannot read Matrix Market file {path}: {exc}")
        M = np.asarray(getattr(M, "todense", lambda: M)(), dtype=complex)
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise PrecondError(f"matrix in {path} contains non-finite entries")
    return M


def save_matrix(path: str, M: np.ndarray) -> None:
    M = np.asarray(M, dtype=complex)
    obj = {"rows": M.shape[0], "cols": M.shape[1],
           "re": M.real.ravel().tolist(), "im": M.imag.ravel().tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)


def load_vector(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        v = np.array([complex(re, im) for re, im in obj])
    except (TypeError, ValueError) as exc:
        raise PrecondError(f"vector JSON in {path} must be [[re, im], ...]: {exc}")
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise PrecondError(f"vector in {path} contains non-finite entries")
    return v


def save_vector(path: str, v: np.ndarray) -> None:
    v = np.asarray(v, dtype=complex)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([[float(z.real), float(z.imag)] for z in v], fh)


# ---------------------------------------------------------------------------
# plans and reports

def fourier_plan_json(plan: FourierPlan) -> dict:
    prof = plan.profile
    return {"alpha": prof.alpha, "T": prof.T, "mode": prof.mode,
            "a": plan.a, "K": plan.K, "eps_internal": plan.eps_internal,
            "spectral_scale": plan.spectral_scale,
            "c": [float(x) for x in lcu_coefficients(plan)]}


def fourier_plan_from_json(obj: dict) -> FourierPlan:
    prof = SpectralProfile(alpha=obj["alpha"], T=obj["T"], mode=obj["mode"])
    plan = FourierPlan(profile=prof, a=obj["a"], K=obj["K"],
                       eps_internal=obj["eps_internal"], regime=prof.regime,
                       spectral_scale=obj.get("spectral_scale", 0.0))
    if "c" in obj:
        plan.coefficients = np.asarray(obj["c"], dtype=float)
    return plan


def contour_plan_json(plan: ContourPlan) -> dict:
    return {"R1": plan.r1, "R2": plan.r2, "m": plan.m, "mu": plan.mu,
            "quad_n": plan.quad_n, "B1": plan.b1, "B2": plan.b2,
            "kappa_S": plan.kappa_s}


def contour_plan_from_json(obj: dict) -> ContourPlan:
    return ContourPlan(r1=obj["R1"], r2=obj["R2"], m=obj["m"],
                       quad_n=obj["quad_n"], b1=obj["B1"], b2=obj["B2"],
                       kappa_s=obj.get("kappa_S", 1.0))


def cost_report_json(report: CostReport) -> dict:
    return {"path": report.path, "matrix_queries": report.matrix_queries,
            "state_queries": report.state_queries, "lcu_terms": report.lcu_terms,
            "amplification": report.amplification, "l1_norm": report.l1_norm,
            "u_r": report.u_r, "assumptions": list(report.assumptions)}


def record_row(rec: ConvergenceRecord) -> list:
    params = ";".join(f"{k}={_fmt(v)}" for k, v in rec.params.items())
    return [rec.app, rec.d, rec.n, rec.h, rec.T, rec.eps, params,
            rec.error_measured, rec.error_bound, rec.wall_time_ms]


RECORD_HEADER = ["app", "d", "n", "h", "T", "eps", "params",
                 "error_measured", "error_bound", "wall_time_ms"]


def write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


# ---------------------------------------------------------------------------
# CSV (RFC 4180: CRLF records, minimal quoting)

def _fmt(v) -> str:
    # np.float64 subclasses float, so cast before repr to keep the plain
    # 17-significant-digit form on numpy >= 2.
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def csv_text(header: list, rows: list) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(header, rows))


# ---------------------------------------------------------------------------
# function specs (closed enum) and range specs

class FunctionSpec(NamedTuple):
    label: str
    fn: Callable[[np.ndarray], np.ndarray]
    sup: Callable[[float], float]     # sup |f| on |z| = R
    kind: str                         # entire | polynomial | rational
    degree: int | None                # polynomial degree, when applicable
    pole_radius: float | None         # nearest singularity, when applicable


def parse_function_spec(spec: str) -> FunctionSpec:
    """Closed enum: exp-neg, exp-neg-i, poly:a0,a1,..., inv-shift:c."""
    spec = spec.strip()
    if spec == "exp-neg":
        return FunctionSpec("exp-neg", lambda z: np.exp(-z),
                            lambda r: math.exp(r), "entire", None, None)
    if spec == "exp-neg-i":
        return FunctionSpec("exp-neg-i", lambda z: np.exp(-1j * z),
                            lambda r: math.exp(r), "entire", None, None)
    if spec.startswith("poly:"):
        try:
            coeffs = np.array([float(t) for t in spec[5:].split(",")], dtype=float)
        except ValueError as exc:
            raise PrecondError(f"bad polynomial coefficients in {spec!r}: {exc}")
        if coeffs.size == 0:
            raise PrecondError("polynomial needs at least one coefficient")
        deg = int(np.max(np.nonzero(coeffs)[0])) if np.any(coeffs) else 0
        a = np.abs(coeffs)
        return FunctionSpec(spec, lambda z: np.polynomial.polynomial.polyval(z, coeffs),
                            lambda r: float(np.polynomial.polynomial.polyval(r, a)),
                            "polynomial", deg, None)
    if spec.startswith("inv-shift:"):
        try:
            c = float(spec[10:])
        except ValueError as exc:
            raise PrecondError(f"bad shift in {spec!r}: {exc}")
        if c == 0.0:
            raise PrecondError("inv-shift needs a nonzero shift")
        def sup(r: float, c: float = c) -> float:
            if r >= abs(c):
                raise PrecondError(
                    f"circle radius {r} reaches the pole of 1/(z+{c}) at |z| = {abs(c)}")
            return 1.0 / (abs(c) - r)
        return FunctionSpec(spec, lambda z: 1.0 / (z + c), sup,
                            "rational", None, abs(c))
    raise PrecondError(
        f"unknown function spec {spec!r}; use exp-neg, exp-neg-i, "
        "poly:a0,a1,..., or inv-shift:c")


def parse_range(spec: str, integer: bool = False) -> np.ndarray:
    """lo:hi:step with inclusive endpoints (hi kept when it lands on the
    lattice); a bare number is a single-point range."""
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            vals = [float(parts[0])]
        elif len(parts) == 3:
            lo, hi, step = (float(t) for t in parts)
            if step <= 0 or hi < lo:
                raise PrecondError(f"range {spec!r} needs hi >= lo and step > 0")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            vals = [lo + i * step for i in range(count)]
        else:
            raise PrecondError(f"range {spec!r} must be lo:hi:step or a number")
    except ValueError as exc:
        raise PrecondError(f"bad range {spec!r}: {exc}")
    if integer:
        out = np.array([int(round(v)) for v in vals], dtype=int)
        if np.any(np.abs(out - np.asarray(vals)) > 1e-9):
            raise PrecondError(f"range {spec!r} must contain integers")
        return out
    return np.asarray(vals, dtype=float)
