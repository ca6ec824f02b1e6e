"""Command-line front end.

Subcommands::

    transform       forward/inverse transform of a function file (or random data)
    kernel          Dirichlet / Fejer kernel values with a value-at-zero self-check
    lemma2          brute-force kernel lower bound on digit-pattern regions
    counterexample  certified level sequence, exact bound ledgers, divergence report
    selftest        quick end-to-end invariant sweep

Exit codes: 0 success, 2 usage or domain precondition, 3 resource cap
exceeded, 4 verification failure.  Results go to stdout or ``--out``;
standard error carries diagnostics only.  Given the same config and seed,
every command rewrites byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, DomainError, VerificationError
from .group import build_group_spec, digit_compose, digit_decompose, parse_group_text, q_number
from .transform import (
    NAIVE_ORACLE_CAP,
    Spectrum,
    forward_transform,
    inverse_transform,
    naive_transform_oracle,
    random_cylinder_function,
    sup_rel_error,
)
from .kernels import (
    dirichlet_kernel,
    fejer_kernel,
    fejer_mean_direct,
    fejer_mean_multiplier,
    maximal_function,
    validate_p_atom,
    zero_cylinder_indicator,
)
from .counterexample import (
    MATERIALIZE_CAP_ENV,
    atom_function,
    lemma2_verify,
    plan_counterexample,
    divergence_report,
)
from . import serialize
from fractions import Fraction

__all__ = ["RunConfig", "main"]

ORACLE_TOLERANCE = 1e-9
ZERO_CHECK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on, in serializable form."""

    command: str
    group: str | None = None
    resolution: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    threads: int | None = None
    params: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "command": self.command,
            "group": self.group,
            "resolution": self.resolution,
            "seed": self.seed,
            "out": self.out,
            "format": self.format,
            "threads": self.threads,
            "params": dict(sorted(self.params.items())),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "RunConfig":
        return cls(
            command=doc["command"],
            group=doc.get("group"),
            resolution=doc.get("resolution"),
            seed=doc.get("seed", 0),
            out=doc.get("out"),
            format=doc.get("format", "json"),
            threads=doc.get("threads"),
            params=dict(doc.get("params", {})),
        )


def _apply_threads(threads: int | None) -> None:
    # results never depend on this; it only sizes the BLAS worker pools
    if threads is None:
        return
    if threads < 1:
        raise DomainError(f"--threads must be >= 1, got {threads}")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(threads)


def _emit_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_function(obj, out: str | None, fmt: str) -> None:
    if fmt == "csv":
        _emit_output(serialize.function_to_csv(obj), out)
    else:
        _emit_output(serialize.dumps_canonical(serialize.function_to_doc(obj)), out)


def _load_group(config: RunConfig):
    if config.group is None:
        return None
    return serialize.decode_group(config.group, config.resolution)


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------


def cmd_transform(config: RunConfig) -> int:
    group = _load_group(config)
    p = config.params
    if p.get("input") is not None:
        data = serialize.load_function_file(p["input"])
        if group is not None and data.group.digits != group.digits:
            raise DomainError(
                f"--group {config.group!r} disagrees with the input file's group "
                f"{list(data.group.digits)}"
            )
    elif p.get("random"):
        if group is None:
            raise DomainError("--random needs --group")
        data = random_cylinder_function(group, seed=config.seed)
    else:
        raise DomainError("nothing to transform: pass --input FILE or --random")

    if isinstance(data, Spectrum):
        result = inverse_transform(data)
    else:
        result = forward_transform(data)

    checked = False
    if p.get("check_oracle"):
        if isinstance(data, Spectrum):
            raise DomainError("--check-oracle applies to value-side input only")
        cap = p.get("oracle_cap") or NAIVE_ORACLE_CAP
        oracle = naive_transform_oracle(data, cap=cap)
        err = sup_rel_error(result.coeffs, oracle.coeffs)
        line = f"max relative error vs naive oracle = {serialize.float_str(err)} (tolerance {ORACLE_TOLERANCE})"
        if err > ORACLE_TOLERANCE:
            raise VerificationError(line)
        print(line + ": ok")
        checked = True

    if config.out is not None or not checked:
        _write_function(result, config.out, config.format)
    return 0


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


def cmd_kernel(config: RunConfig) -> int:
    group = _load_group(config)
    if group is None:
        raise DomainError("kernel needs --group")
    p = config.params
    kind, n = p["kind"], p["n"]
    if kind == "dirichlet":
        kernel = dirichlet_kernel(n, group)
        expected = Fraction(n)
        label = f"D_{n}(0)"
    else:
        kernel = fejer_kernel(n, group)
        expected = Fraction(n - 1, 2)
        label = f"K_{n}(0)"
    value = kernel.values[0].real
    line = f"{label} = {serialize.float_str(value)} (expected {expected})"
    ok = abs(value - float(expected)) <= ZERO_CHECK_TOLERANCE * max(1.0, float(expected))
    print(line + (": ok" if ok else ": MISMATCH"))
    if p.get("check_zero") and not ok:
        raise VerificationError(line)
    if config.out is not None:
        _write_function(kernel, config.out, config.format)
    return 0


# ---------------------------------------------------------------------------
# lemma2
# ---------------------------------------------------------------------------


def cmd_lemma2(config: RunConfig) -> int:
    if config.group is None:
        raise DomainError("lemma2 needs --group")
    pattern, own_res = parse_group_text(config.group)
    p = config.params
    report = lemma2_verify(pattern, p["A"], cap=p.get("cap") or (1 << 20))
    _emit_output(serialize.dumps_canonical(serialize.kernel_report_to_doc(report)), config.out)
    if not report.passed:
        print(
            f"kernel floor fails: global min ratio {report.global_min_ratio} < 0.25",
            file=sys.stderr,
        )
        return 4
    return 0


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------


def cmd_counterexample(config: RunConfig) -> int:
    if config.group is None:
        raise DomainError("counterexample needs --group")
    pattern, own_res = parse_group_text(config.group)
    p = config.params
    cap = p.get("materialize_cap")
    spec = plan_counterexample(
        pattern, p["kmax"], alpha0=p.get("alpha0", 6), resolution=config.resolution
    )
    report = divergence_report(
        spec,
        region_detail_cap=p.get("region_detail_cap", 4096),
        cap=cap,
    )
    plot_target = p.get("emit_plot_data")
    if p.get("json"):
        _emit_output(serialize.dumps_canonical(serialize.divergence_to_doc(report)), config.out)
    elif plot_target == "-":
        _emit_output(serialize.plot_csv(report), config.out)
    else:
        _emit_output(serialize.summary_csv(report), config.out)
    if plot_target and plot_target != "-":
        with open(plot_target, "w", encoding="utf-8") as fh:
            fh.write(serialize.plot_csv(report))
    if not report.passed:
        print(f"verification failed: {report.first_failure()}", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def _selftest_checks():
    def digits_round_trip():
        g = build_group_spec([2, 3, 2, 4, 5])
        assert all(digit_compose(digit_decompose(n, g).digits, g) == n for n in range(g.size))

    def q_recursion():
        for base in ((2,), (3,), (2, 3)):
            from .group import GroupPattern

            pat = GroupPattern(base)
            for a in range(1, 8):
                assert pat.q_number(a) == pat.scale(2 * a) + pat.q_number(a - 1)
                assert pat.q_number(a) <= 2 * pat.scale(2 * a)

    def transform_round_trip():
        g = build_group_spec([2, 3, 2, 4])
        f = random_cylinder_function(g, seed=11)
        spec = forward_transform(f)
        back = inverse_transform(spec)
        assert sup_rel_error(back.values, f.values) < 1e-12
        energy_f = float(np.mean(np.abs(f.values) ** 2))
        energy_c = float(np.sum(np.abs(spec.coeffs) ** 2))
        assert abs(energy_f - energy_c) <= 1e-9 * max(1.0, energy_f)

    def oracle_agreement():
        g = build_group_spec([2, 3, 2, 4])
        f = random_cylinder_function(g, seed=5)
        assert sup_rel_error(forward_transform(f).coeffs, naive_transform_oracle(f).coeffs) < 1e-9

    def dirichlet_block_form():
        g = build_group_spec([2, 3, 2])
        for n in range(g.resolution + 1):
            d = dirichlet_kernel(g.scales[n], g)
            ind = zero_cylinder_indicator(g, n)
            assert np.max(np.abs(d.values - g.scales[n] * ind.values)) < 1e-10

    def fejer_dual_routes():
        g = serialize.decode_group("const:2^6")
        s = forward_transform(random_cylinder_function(g, seed=3))
        a = fejer_mean_direct(s, 21).values.values
        b = fejer_mean_multiplier(s, 21).values.values
        assert np.max(np.abs(a - b)) < 1e-10
        k = fejer_kernel(21, g)
        assert abs(k.values[0].real - 10.0) < 1e-10

    def kernel_floor():
        report = lemma2_verify(parse_group_text("const:2")[0], 3)
        assert report.passed

    def counterexample_ledgers():
        spec = plan_counterexample(parse_group_text("const:2")[0], 2)
        report = divergence_report(spec)
        assert report.passed
        atom, interval = atom_function(spec, 0)
        atom_report = validate_p_atom(atom, interval, Fraction(1, 2))
        assert atom_report.is_atom
        star = maximal_function(atom)
        assert float(np.mean(np.sqrt(np.abs(star.values)))) <= 1 + 1e-9
        assert q_number(6, spec.pattern.group(13)) == 5461

    return [
        ("digit round trip", digits_round_trip),
        ("sparse order recursion and doubling", q_recursion),
        ("transform round trip and energy identity", transform_round_trip),
        ("transform vs naive oracle", oracle_agreement),
        ("Dirichlet kernel block form", dirichlet_block_form),
        ("Fejer dual routes and value at zero", fejer_dual_routes),
        ("kernel floor on regions", kernel_floor),
        ("counterexample ledgers and atom checks", counterexample_ledgers),
    ]


def cmd_selftest(config: RunConfig) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except Exception as exc:  # noqa: BLE001 - report and keep sweeping
            failures += 1
            print(f"fail - {name}: {exc}")
        else:
            print(f"ok - {name}")
    if failures:
        print(f"{failures} selftest check(s) failed", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="Fourier analysis on bounded Vilenkin groups "
        "and an exactly verified Cesaro divergence counterexample.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads for array backends (results are independent of this)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("transform", help="forward/inverse transform of a function file")
    tr.add_argument("--group", help='group, e.g. const:2^8 or "2,3,2,4"')
    tr.add_argument("--resolution", type=int, help="digit count when the group text has none")
    tr.add_argument("--input", help="function/spectrum JSON file")
    tr.add_argument("--random", action="store_true", help="transform seeded random values")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--check-oracle", action="store_true", help="compare against the naive-sum oracle")
    tr.add_argument("--oracle-cap", type=int, default=None, help=f"oracle size cap (default {NAIVE_ORACLE_CAP})")
    tr.add_argument("--out", help="output path (default: stdout)")
    tr.add_argument("--format", choices=("json", "csv"), default="json")

    ke = sub.add_parser("kernel", help="Dirichlet or Fejer kernel values")
    ke.add_argument("--kind", choices=("dirichlet", "fejer"), required=True)
    ke.add_argument("--n", type=int, required=True)
    ke.add_argument("--group", required=True)
    ke.add_argument("--resolution", type=int)
    ke.add_argument("--check-zero", action="store_true", help="fail unless the value at zero matches the closed form")
    ke.add_argument("--out", help="write kernel values here")
    ke.add_argument("--format", choices=("json", "csv"), default="json")

    le = sub.add_parser("lemma2", help="brute-force kernel floor over digit-pattern regions")
    le.add_argument("--group", required=True, help="base pattern, e.g. const:2 or 2,3")
    le.add_argument("--A", type=int, required=True, help="region level (needs A > 2)")
    le.add_argument("--cap", type=int, default=None, help="grid point cap (default 2^20)")
    le.add_argument("--out")

    ce = sub.add_parser("counterexample", help="build and audit the divergence example")
    ce.add_argument("--group", required=True, help="base pattern, e.g. const:2")
    ce.add_argument("--alpha0", type=int, default=6)
    ce.add_argument("--kmax", type=int, required=True)
    ce.add_argument("--resolution", type=int, help="grid depth for desk-scale checks")
    ce.add_argument("--json", action="store_true", help="emit the full JSON report instead of CSV")
    ce.add_argument(
        "--emit-plot-data",
        nargs="?",
        const="-",
        default=None,
        metavar="PATH",
        help="emit (k, sqrt(alpha_k), LB_k^2) CSV to PATH (bare flag: stdout)",
    )
    ce.add_argument("--materialize-cap", type=int, default=None, help=f"grid cap (or set {MATERIALIZE_CAP_ENV})")
    ce.add_argument("--region-detail-cap", type=int, default=4096)
    ce.add_argument("--out", help="write the primary table here instead of stdout")

    sub.add_parser("selftest", help="run the quick invariant sweep")
    return parser


_PARAM_KEYS = {
    "transform": ("input", "random", "check_oracle", "oracle_cap"),
    "kernel": ("kind", "n", "check_zero"),
    "lemma2": ("A", "cap"),
    "counterexample": (
        "alpha0",
        "kmax",
        "json",
        "emit_plot_data",
        "materialize_cap",
        "region_detail_cap",
    ),
    "selftest": (),
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {}
    for key in _PARAM_KEYS[args.command]:
        value = getattr(args, key)
        if value is not None and value is not False:
            params[key] = value
    return RunConfig(
        command=args.command,
        group=getattr(args, "group", None),
        resolution=getattr(args, "resolution", None),
        seed=getattr(args, "seed", 0),
        out=getattr(args, "out", None),
        format=getattr(args, "format", "json"),
        threads=args.threads,
        params=params,
    )


_DISPATCH = {
    "transform": cmd_transform,
    "kernel": cmd_kernel,
    "lemma2": cmd_lemma2,
    "counterexample": cmd_counterexample,
    "selftest": cmd_selftest,
}


def run(config: RunConfig) -> int:
    _apply_threads(config.threads)
    return _DISPATCH[config.command](config)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
