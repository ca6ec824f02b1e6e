"""Deterministic JSON/CSV encoding for grids, spectra, and reports.

Numbers are rendered with fixed 17-significant-digit formatting and exact
integers as decimal strings, so rerunning a command byte-reproduces its
output.  Exact integers in the ledgers can run to hundreds of thousands of
digits; they are always serialized as strings, never through floats.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import DomainError
from .group import GroupPattern, GroupSpec, build_group_spec, parse_group_text
from .kernels import AtomReport
from .transform import CylinderFunction, Spectrum
from .counterexample import (
    BoundLedger,
    DivergenceReport,
    KernelBoundReport,
    LevelCertificate,
    RegionBound,
)

__all__ = [
    "int_str",
    "float_str",
    "dumps_canonical",
    "encode_group",
    "decode_group",
    "function_to_doc",
    "doc_to_function",
    "function_to_csv",
    "load_function_file",
    "atom_report_to_doc",
    "certificate_to_doc",
    "kernel_report_to_doc",
    "ledger_to_doc",
    "divergence_to_doc",
    "summary_csv",
    "plot_csv",
]


def int_str(n: int) -> str:
    """Decimal string of an exact integer, raising the interpreter's
    conversion limit when the value genuinely needs it."""
    n = int(n)
    try:
        return str(n)
    except ValueError:
        bump = getattr(sys, "set_int_max_str_digits", None)
        if bump is None:
            raise
        bump(max(sys.get_int_max_str_digits(), n.bit_length() // 3 + 16))
        return str(n)


def float_str(x: float) -> str:
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        raise DomainError(f"refusing to serialize non-finite value {x}")
    return format(x, ".17g")


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, Fraction):
        out.append('{"num":')
        _emit(int_str(obj.numerator), out)
        out.append(',"den":')
        _emit(int_str(obj.denominator), out)
        out.append("}")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(float_str(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {type(key).__name__}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _emit(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, val in enumerate(obj):
            if i:
                out.append(",")
            _emit(val, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj: Any) -> str:
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


def encode_group(group: GroupSpec) -> dict:
    return {"digits": list(group.digits), "resolution": group.resolution}


def decode_group(raw, resolution: int | None = None) -> GroupSpec:
    """Accepts ``{"digits": [...], "resolution": N}`` or a shorthand string
    like ``"const:2^13"`` / ``"2,3,2,4"``.

    A digit list shorter than the resolution repeats cyclically.  The
    ``resolution`` argument fills in when the value itself carries none.
    """
    if isinstance(raw, GroupSpec):
        return raw
    if isinstance(raw, str):
        pattern, own_res = parse_group_text(raw)
        res = own_res if own_res is not None else resolution
        if res is None:
            raise DomainError(
                f"group {raw!r} carries no resolution; pass one (e.g. const:2^8)"
            )
        return pattern.group(res)
    if isinstance(raw, dict):
        try:
            digits = [int(d) for d in raw["digits"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"bad group object: {raw!r}") from exc
        res = raw.get("resolution", resolution)
        res = len(digits) if res is None else int(res)
        if res < len(digits):
            digits = digits[:res]
        if res > len(digits):
            return GroupPattern(tuple(digits)).group(res)
        return build_group_spec(digits)
    raise DomainError(f"cannot interpret {raw!r} as a group")


# ---------------------------------------------------------------------------
# Functions and spectra
# ---------------------------------------------------------------------------


def function_to_doc(obj) -> dict:
    if isinstance(obj, CylinderFunction):
        kind, data = "values", obj.values
    elif isinstance(obj, Spectrum):
        kind, data = "coeffs", obj.coeffs
    else:
        raise TypeError(f"expected CylinderFunction or Spectrum, got {type(obj).__name__}")
    return {
        "group": encode_group(obj.group),
        "kind": kind,
        "re": [float(v) for v in data.real],
        "im": [float(v) for v in data.imag],
    }


def doc_to_function(doc):
    if not isinstance(doc, dict):
        raise DomainError("function file must contain a JSON object")
    try:
        group = decode_group(doc["group"])
        kind = doc["kind"]
        re = np.asarray(doc["re"], dtype=np.float64)
        im = np.asarray(doc["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed function file: {exc}") from exc
    if kind not in ("values", "coeffs"):
        raise DomainError(f'kind must be "values" or "coeffs", got {kind!r}')
    if re.shape != (group.size,) or im.shape != (group.size,):
        raise DomainError(
            f"group of size {group.size} with {re.size} real / {im.size} imaginary entries"
        )
    data = re + 1j * im
    return CylinderFunction(group, data) if kind == "values" else Spectrum(group, data)


def function_to_csv(obj) -> str:
    doc = function_to_doc(obj)
    lines = ["index,re,im"]
    for i, (re, im) in enumerate(zip(doc["re"], doc["im"])):
        lines.append(f"{i},{float_str(re)},{float_str(im)}")
    return "\n".join(lines) + "\n"


def load_function_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from exc
    return doc_to_function(doc)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def atom_report_to_doc(report: AtomReport) -> dict:
    return {
        "interval": {
            "prefix": list(report.interval.prefix),
            "measure": report.interval.measure,
        },
        "p": report.p,
        "mean_abs": report.mean_abs,
        "sup_norm": report.sup_norm,
        "sup_allowed": report.sup_allowed,
        "outside_sup": report.outside_sup,
        "mean_ok": report.mean_ok,
        "support_ok": report.support_ok,
        "size_ok": report.size_ok,
        "is_atom": report.is_atom,
    }


def certificate_to_doc(cert: LevelCertificate) -> dict:
    return {
        "k": cert.k,
        "alpha": int_str(cert.alpha),
        "vacuous": cert.vacuous,
        "doubling_ok": cert.doubling_ok,
        "history_growth_lhs": cert.history_growth_lhs,
        "history_growth_rhs": cert.history_growth_rhs,
        "history_growth_ok": cert.history_growth_ok,
        "history_gap_lhs": cert.history_gap_lhs,
        "history_gap_rhs": cert.history_gap_rhs,
        "history_gap_ok": cert.history_gap_ok,
        "all_ok": cert.all_ok,
    }


def kernel_report_to_doc(report: KernelBoundReport) -> dict:
    return {
        "group": encode_group(report.group),
        "level": report.level,
        "kernel_order": int_str(report.kernel_order),
        "threshold": report.threshold,
        "global_min_ratio": report.global_min_ratio,
        "passed": report.passed,
        "regions": [
            {
                "eta": r.eta,
                "s": r.s,
                "point_count": r.point_count,
                "measure": r.measure,
                "min_ratio": r.min_ratio,
            }
            for r in report.regions
        ],
    }


def _region_to_doc(region: RegionBound) -> dict:
    return {
        "eta": region.eta,
        "s": region.s,
        "product": int_str(region.product),
        "separation_ok": region.separation_ok,
        "measure": region.measure,
        "sqrt_term": region.sqrt_term,
    }


def ledger_to_doc(ledger: BoundLedger) -> dict:
    return {
        "k": ledger.k,
        "alpha": int_str(ledger.alpha),
        "bound": ledger.bound,
        "m_alpha": int_str(ledger.m_alpha),
        "q_index": int_str(ledger.q_index),
        "q_inner": int_str(ledger.q_inner),
        "q_doubling_ok": ledger.q_doubling_ok,
        "low_part_bound": ledger.low_part_bound,
        "carried_history_bound": ledger.carried_history_bound,
        "threshold": ledger.threshold,
        "history_ok": ledger.history_ok,
        "eta_lo": ledger.eta_lo,
        "eta_hi": ledger.eta_hi,
        "region_pair_count": int_str(ledger.region_pair_count),
        "corner": _region_to_doc(ledger.corner),
        "monotone_certified": ledger.monotone_certified,
        "regions": (
            None
            if ledger.regions is None
            else [_region_to_doc(r) for r in ledger.regions]
        ),
        "separation_all_ok": ledger.separation_all_ok,
        "lb_squared": ledger.lb_squared,
        "region_sum_squared": ledger.region_sum_squared,
        "c_certified": ledger.c_certified,
        "all_ok": ledger.all_ok,
    }


def divergence_to_doc(report: DivergenceReport) -> dict:
    return {
        "pattern": list(report.pattern.base),
        "alpha0": report.alpha0,
        "k_range": list(report.k_range),
        "ledgers": [ledger_to_doc(led) for led in report.ledgers],
        "rows": [
            {
                "k": row.k,
                "alpha": int_str(row.alpha),
                "q_index": int_str(row.q_index),
                "lb_squared": row.lb_squared,
                "region_pair_count": int_str(row.region_pair_count),
                "region_sum_squared": row.region_sum_squared,
                "materialized_resolution": row.materialized_resolution,
                "direct_integral": row.direct_integral,
                "pointwise_ok": row.pointwise_ok,
                "integral_dominates_ok": row.integral_dominates_ok,
            }
            for row in report.rows
        ],
        "lb_strictly_increasing": report.lb_strictly_increasing,
        "rate_certified_from": report.rate_certified_from,
        "series": {
            "weight_sqrt_sum": report.series.weight_sqrt_sum,
            "geometric_majorant": report.series.geometric_majorant,
            "doubling_ok": report.series.doubling_ok,
            "hardy_upper": report.series.hardy_upper,
            "atoms_validated": report.series.atoms_validated,
            "atoms_ok": report.series.atoms_ok,
            "atom_maximal_ok": report.series.atom_maximal_ok,
            "hardy_estimate_on_grid": report.series.hardy_estimate_on_grid,
            "grid_estimate_ok": report.series.grid_estimate_ok,
            "ok": report.series.ok,
        },
        "passed": report.passed,
    }


def summary_csv(report: DivergenceReport) -> str:
    lines = ["k,alpha_k,q_alpha_k,LB_k_squared_num,LB_k_squared_den,direct_integral"]
    for row in report.rows:
        direct = "" if row.direct_integral is None else float_str(row.direct_integral)
        lines.append(
            f"{row.k},{int_str(row.alpha)},{int_str(row.q_index)},"
            f"{int_str(row.lb_squared.numerator)},{int_str(row.lb_squared.denominator)},"
            f"{direct}"
        )
    return "\n".join(lines) + "\n"


def plot_csv(report: DivergenceReport) -> str:
    lines = ["k,sqrt_alpha_k,lb_squared"]
    for row in report.rows:
        lines.append(
            f"{row.k},{float_str(row.alpha ** 0.5)},{float_str(float(row.lb_squared))}"
        )
    return "\n".join(lines) + "\n"
