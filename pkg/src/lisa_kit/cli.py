"""Command line interface.

Four subcommands: ``compute`` writes the per-unit table in all three
formulations, ``verify`` runs the identity suite and the refutation audit,
``plot`` emits scatter data comparing the Moran formulations (optionally
as a static SVG), and ``demo`` exports the built-in dataset as the two
documented CSV files.

Exit codes: 0 success, 2 input or parse error, 3 validation error
(asymmetric distances, constant attribute, label mismatch), 4 verification
did not come out as expected (an identity failed or a refuted claim
unexpectedly held).

Output is deterministic: the same invocation on the same input produces
byte-identical bytes. csv and json carry full precision; text rounds to
LISA_KIT_PRECISION decimals (default 4).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .datasets import DEMO_NAMES, bth_dataset, export_bth_csv
from .errors import (
    CsvFormatError,
    DimensionMismatch,
    LisaKitError,
    ValidationError,
    WrongNormalization,
)
from .global_stats import GlobalStats, compute_global_stats
from .io import fmt, read_distance_csv, read_values_csv
from .lisa import LisaTable, compute_lisa_table
from .matrices import ContiguityMatrix, Kernel, build_contiguity, normalize_global
from .plotting import ScatterData, build_scatter, render_svg
from .variables import TransformSet, transform
from .verification import Dataset, random_instance, run_identity_suite, run_refutation_audit

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_VERIFICATION = 4

FORMATS = ("csv", "json", "text")

#: Column order of the full per-unit table.
ALL_COLUMNS = (
    "MI1", "MI2", "MI3", "MI1/MI2", "MI1/MI3",
    "GC1", "GC2", "GC3", "GC1/GC2", "GC1/GC3",
)

_JSON_KEYS = {
    "MI1": "mi1", "MI2": "mi2", "MI3": "mi3",
    "MI1/MI2": "ratio_mi1_mi2", "MI1/MI3": "ratio_mi1_mi3",
    "GC1": "gc1", "GC2": "gc2", "GC3": "gc3",
    "GC1/GC2": "ratio_gc1_gc2", "GC1/GC3": "ratio_gc1_gc3",
}


class InputError(Exception):
    """Bad invocation or unreadable input; maps to exit code 2."""


def precision_from_env() -> int:
    raw = os.environ.get("LISA_KIT_PRECISION")
    if raw is None:
        return 4
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"LISA_KIT_PRECISION must be an integer, got {raw!r}") from None
    if not 0 <= value <= 17:
        raise InputError(f"LISA_KIT_PRECISION must be between 0 and 17, got {value}")
    return value


@dataclass(frozen=True)
class Analysis:
    """One full run: dataset, intermediate pieces, per-unit table, globals."""

    dataset: Dataset
    contiguity: ContiguityMatrix
    transforms: TransformSet
    table: LisaTable
    stats: GlobalStats

    @property
    def gamma(self) -> float:
        return self.transforms.sigma2 * self.contiguity.v0

    @property
    def gamma_c(self) -> float:
        n = self.transforms.n
        return 2.0 * n * self.contiguity.v0 / (n - 1)


def run_analysis(dataset: Dataset) -> Analysis:
    v = build_contiguity(dataset.distances, dataset.kernel)
    t = transform(dataset.values)
    return Analysis(
        dataset=dataset,
        contiguity=v,
        transforms=t,
        table=compute_lisa_table(v, t),
        stats=compute_global_stats(normalize_global(v), t),
    )


# ---------------------------------------------------------------- input


def _parse_random(tokens: list[str]) -> tuple[int, int]:
    pairs = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or key not in ("n", "seed"):
            raise InputError(f"--random takes n=N seed=S, got {token!r}")
        try:
            pairs[key] = int(value)
        except ValueError:
            raise InputError(f"--random {key} must be an integer, got {value!r}") from None
    if set(pairs) != {"n", "seed"}:
        raise InputError("--random needs both n=N and seed=S")
    if pairs["n"] < 3:
        raise InputError(f"--random needs n >= 3, got {pairs['n']}")
    return pairs["n"], pairs["seed"]


def _parse_variants(text: str) -> tuple[int, ...]:
    if text.strip() == "all":
        return (1, 2, 3)
    chosen = set()
    for part in text.split(","):
        part = part.strip()
        if part not in ("set1", "set2", "set3"):
            raise InputError(
                f"bad variant {part!r}: expected 'all' or a comma list of set1,set2,set3"
            )
        chosen.add(int(part[3]))
    return tuple(sorted(chosen))


def _parse_kernel(text: str) -> Kernel:
    try:
        return Kernel.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def resolve_dataset(args: argparse.Namespace) -> Dataset:
    """Pick exactly one input source: CSV pair, demo name, or random spec."""
    kernel = _parse_kernel(args.kernel)
    has_files = args.distances is not None or args.values is not None
    sources = sum([has_files, args.demo is not None, args.random is not None])
    if sources == 0:
        raise InputError("no input: give --distances/--values, --demo, or --random")
    if sources > 1:
        raise InputError("give only one of --distances/--values, --demo, --random")
    if args.demo is not None:
        if args.column is not None:
            raise InputError("--column only applies to --values input")
        return bth_dataset(args.demo, kernel)
    if args.random is not None:
        if args.column is not None:
            raise InputError("--column only applies to --values input")
        n, seed = _parse_random(args.random)
        return random_instance(n, seed, kernel)
    if args.distances is None or args.values is None:
        raise InputError("need both --distances and --values")
    distances = read_distance_csv(args.distances)
    try:
        values = read_values_csv(args.values).column(args.column)
    except ValueError as exc:
        raise InputError(f"{args.values}: {exc}") from None
    return Dataset(distances, values, kernel)


def _config_dict(args: argparse.Namespace) -> dict:
    random_spec = None
    if getattr(args, "random", None) is not None:
        n, seed = _parse_random(args.random)
        random_spec = {"n": n, "seed": seed}
    return {
        "command": args.command,
        "distances": getattr(args, "distances", None),
        "values": getattr(args, "values", None),
        "column": getattr(args, "column", None),
        "demo": getattr(args, "demo", None),
        "random": random_spec,
        "kernel": str(_parse_kernel(args.kernel)),
        "variants": getattr(args, "variants", "all"),
        "format": getattr(args, "format", "text"),
    }


def _emit(payload: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(payload)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(payload)


# ---------------------------------------------------------------- tables


def _columns_for(variants: tuple[int, ...]) -> tuple[str, ...]:
    sel = set(variants)
    cols = []
    for name in ALL_COLUMNS:
        if "/" in name:
            a, b = name.split("/")
            wanted = {int(a[-1]), int(b[-1])}
        else:
            wanted = {int(name[-1])}
        if wanted <= sel:
            cols.append(name)
    return tuple(cols)


def _cell_value(analysis: Analysis, col: str, i: int) -> float:
    lt = analysis.table
    per_unit = {
        "MI1": lt.mi1, "MI2": lt.mi2, "MI3": lt.mi3,
        "GC1": lt.gc1, "GC2": lt.gc2, "GC3": lt.gc3,
    }
    if col in per_unit:
        return float(per_unit[col][i])
    if col in ("MI1/MI2", "GC1/GC2"):
        return float(lt.ratio12[i])
    if col == "MI1/MI3":
        return lt.ratio13
    return lt.gratio13  # GC1/GC3


def _sum_row(analysis: Analysis, columns: tuple[str, ...]) -> dict[str, float]:
    lt = analysis.table
    n = lt.n
    sums = {
        "MI1": float(lt.mi1.sum()), "MI2": float(lt.mi2.sum()), "MI3": float(lt.mi3.sum()),
        "GC1": float(lt.gc1.sum()), "GC2": float(lt.gc2.sum()), "GC3": float(lt.gc3.sum()),
        "MI1/MI2": float(lt.ratio12.sum()),
        "MI1/MI3": n * lt.ratio13,
        "GC1/GC2": float(lt.ratio12.sum()),
        "GC1/GC3": n * lt.gratio13,
    }
    return {c: sums[c] for c in columns}


def _expected_row(analysis: Analysis, columns: tuple[str, ...]) -> dict[str, float | None]:
    s = analysis.stats
    n = s.n
    moran_i, geary_c = s.moran_i, s.geary_c
    expected = {
        "MI1": analysis.gamma * moran_i,
        "MI2": n * moran_i,
        "MI3": moran_i,
        "GC1": analysis.gamma_c * analysis.transforms.sigma2 * geary_c,
        "GC2": 2.0 * n * n * geary_c / (n - 1),
        "GC3": geary_c,
        # the ratio columns have no separate expected value
        "MI1/MI2": None, "MI1/MI3": None, "GC1/GC2": None, "GC1/GC3": None,
    }
    return {c: expected[c] for c in columns}


def _globals_dict(analysis: Analysis) -> dict:
    t, s = analysis.transforms, analysis.stats
    return {
        "n": t.n,
        "V0": analysis.contiguity.v0,
        "sigma2": t.sigma2,
        "s2": t.s2,
        "gamma": analysis.gamma,
        "gamma_c": analysis.gamma_c,
        "I": s.moran_i,
        "C": s.geary_c,
        "I0": s.expected_i,
        "C0": s.expected_c,
    }


def _text_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    lines = []
    for row in [header, *rows]:
        first = row[0].ljust(widths[0])
        rest = [cell.rjust(widths[k + 1]) for k, cell in enumerate(row[1:])]
        lines.append("  ".join([first, *rest]).rstrip())
    return "\n".join(lines) + "\n"


def render_compute_text(analysis: Analysis, variants: tuple[int, ...], precision: int) -> str:
    columns = _columns_for(variants)
    g = _globals_dict(analysis)
    p = precision

    def f(x: float) -> str:
        return f"{x:.{p}f}"

    head = [
        f"n={g['n']}  V0={f(g['V0'])}  kernel={analysis.dataset.kernel}",
        f"sigma2={f(g['sigma2'])}  s2={f(g['s2'])}  gamma={f(g['gamma'])}  gamma_c={f(g['gamma_c'])}",
        f"I={f(g['I'])}  C={f(g['C'])}  I0={f(g['I0'])}  C0={f(g['C0'])}",
    ]
    if not -1.0 <= g["I"] <= 1.0:
        head.append(f"note: I={f(g['I'])} lies outside the usual [-1, 1] range")
    if not 0.0 <= g["C"] <= 2.0:
        head.append(f"note: C={f(g['C'])} lies outside the usual [0, 2] range")
    body = []
    for i, label in enumerate(analysis.table.labels):
        body.append([label, *(f(_cell_value(analysis, c, i)) for c in columns)])
    sums = _sum_row(analysis, columns)
    body.append(["Sum", *(f(sums[c]) for c in columns)])
    expected = _expected_row(analysis, columns)
    body.append(["Expected", *("" if expected[c] is None else f(expected[c]) for c in columns)])
    return "\n".join(head) + "\n\n" + _text_table(["label", *columns], body)


def render_compute_csv(analysis: Analysis, variants: tuple[int, ...]) -> str:
    columns = _columns_for(variants)
    lines = [",".join(["label", *columns])]
    for i, label in enumerate(analysis.table.labels):
        lines.append(",".join([label, *(fmt(_cell_value(analysis, c, i)) for c in columns)]))
    sums = _sum_row(analysis, columns)
    lines.append(",".join(["Sum", *(fmt(sums[c]) for c in columns)]))
    expected = _expected_row(analysis, columns)
    lines.append(
        ",".join(["Expected", *("" if expected[c] is None else fmt(expected[c]) for c in columns)])
    )
    return "\n".join(lines) + "\n"


def render_compute_json(analysis: Analysis, variants: tuple[int, ...], config: dict,
                        checks: list[dict] | None = None) -> str:
    columns = _columns_for(variants)
    units = []
    for i, label in enumerate(analysis.table.labels):
        record: dict = {"label": label}
        for c in columns:
            record[_JSON_KEYS[c]] = _cell_value(analysis, c, i)
        units.append(record)
    doc = {
        "config": config,
        "globals": _globals_dict(analysis),
        "lisa": units,
        "checks": checks or [],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------- commands


def cmd_compute(args: argparse.Namespace) -> int:
    dataset = resolve_dataset(args)
    variants = _parse_variants(args.variants)
    analysis = run_analysis(dataset)
    if args.format == "text":
        payload = render_compute_text(analysis, variants, precision_from_env())
    elif args.format == "csv":
        payload = render_compute_csv(analysis, variants)
    else:
        payload = render_compute_json(analysis, variants, _config_dict(args))
    _emit(payload, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    dataset = resolve_dataset(args)
    identity = run_identity_suite(dataset)
    audit = run_refutation_audit(dataset)
    ok = identity.all_as_expected and audit.all_as_expected
    if args.format == "text":
        p = precision_from_env()
        payload = (
            "identity suite:\n" + identity.to_text(p)
            + "\nrefutation audit:\n" + audit.to_text(p, header=False)
            + f"\nresult: {'all checks as expected' if ok else 'UNEXPECTED OUTCOMES PRESENT'}\n"
        )
    elif args.format == "csv":
        header = "check_id,relation,lhs,rhs,abs_gap,rel_gap,tolerance,verdict"
        lines = [header]
        for check in [*identity.checks, *audit.checks]:
            lines.append(",".join([
                check.check_id,
                '"' + check.relation.replace('"', '""') + '"',
                fmt(check.lhs), fmt(check.rhs), fmt(check.abs_gap), fmt(check.rel_gap),
                fmt(check.tolerance), check.verdict,
            ]))
        payload = "\n".join(lines) + "\n"
    else:
        analysis = run_analysis(dataset)
        checks = [c.as_dict() for c in [*identity.checks, *audit.checks]]
        payload = render_compute_json(analysis, (1, 2, 3), _config_dict(args), checks)
    _emit(payload, args.out)
    return EXIT_OK if ok else EXIT_VERIFICATION


def _render_plot_csv(scatter: ScatterData) -> str:
    lines = ["label,mi1,mi2,mi3,mi2_fit,mi2_residual,mi3_fit"]
    for i, label in enumerate(scatter.labels):
        lines.append(",".join([
            label,
            fmt(scatter.mi1[i]), fmt(scatter.mi2[i]), fmt(scatter.mi3[i]),
            fmt(scatter.fit_mi2.fitted[i]), fmt(scatter.fit_mi2.residuals[i]),
            fmt(scatter.fit_mi3.fitted[i]),
        ]))
    return "\n".join(lines) + "\n"


def cmd_plot(args: argparse.Namespace) -> int:
    dataset = resolve_dataset(args)
    analysis = run_analysis(dataset)
    scatter = build_scatter(analysis.table)
    if args.format == "csv":
        payload = _render_plot_csv(scatter)
    elif args.format == "json":
        doc = {
            "config": _config_dict(args),
            "gamma": analysis.gamma,
            "fit_mi1_mi2": {
                "slope": scatter.fit_mi2.slope,
                "max_abs_residual": scatter.fit_mi2.max_abs_residual,
                "r_squared": scatter.fit_mi2.r_squared,
            },
            "fit_mi1_mi3": {
                "slope": scatter.fit_mi3.slope,
                "max_abs_residual": scatter.fit_mi3.max_abs_residual,
                "r_squared": scatter.fit_mi3.r_squared,
            },
            "points": [
                {
                    "label": label,
                    "mi1": float(scatter.mi1[i]),
                    "mi2": float(scatter.mi2[i]),
                    "mi3": float(scatter.mi3[i]),
                }
                for i, label in enumerate(scatter.labels)
            ],
        }
        payload = json.dumps(doc, indent=2) + "\n"
    else:
        p = precision_from_env()
        lines = [
            f"MI1 vs MI3: slope={scatter.fit_mi3.slope:.10e} (1/gamma={1.0 / analysis.gamma:.10e})"
            f"  max|residual|={scatter.fit_mi3.max_abs_residual:.3e}",
            f"MI1 vs MI2: slope={scatter.fit_mi2.slope:.10e}"
            f"  max|residual|={scatter.fit_mi2.max_abs_residual:.3e}"
            f"  r2={scatter.fit_mi2.r_squared:.6f}",
            "",
        ]
        body = [
            [label, f"{scatter.mi1[i]:.{p}f}", f"{scatter.mi2[i]:.{p}f}", f"{scatter.mi3[i]:.{p}f}"]
            for i, label in enumerate(scatter.labels)
        ]
        lines.append(_text_table(["label", "MI1", "MI2", "MI3"], body))
        payload = "\n".join(lines)
    _emit(payload, args.out)
    if args.plot is not None:
        render_svg(scatter, args.plot)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    directory = args.out or "."
    os.makedirs(directory, exist_ok=True)
    dist_path, pop_path = export_bth_csv(directory)
    sys.stdout.write(dist_path + "\n" + pop_path + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_input_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--distances", metavar="F", help="distance matrix CSV")
    sub.add_argument("--values", metavar="F", help="attribute values CSV")
    sub.add_argument("--column", metavar="NAME", help="values column to analyze")
    sub.add_argument("--kernel", default="inverse", metavar="K",
                     help="inverse | power:B | threshold:R (default inverse)")
    sub.add_argument("--demo", choices=DEMO_NAMES, help="built-in dataset")
    sub.add_argument("--random", nargs=2, metavar=("n=N", "seed=S"),
                     help="deterministic random instance")


def _add_output_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=FORMATS, default="text")
    sub.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lisa-kit",
        description="Local spatial autocorrelation statistics in three formulations, "
                    "with verification of the identities that connect them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="per-unit Moran/Geary table")
    _add_input_options(compute)
    compute.add_argument("--variants", default="all", metavar="V",
                         help="all or comma list of set1,set2,set3 (default all)")
    _add_output_options(compute)
    compute.set_defaults(func=cmd_compute)

    verify = sub.add_parser("verify", help="identity suite and refutation audit")
    _add_input_options(verify)
    _add_output_options(verify)
    verify.set_defaults(func=cmd_verify)

    plot = sub.add_parser("plot", help="scatter data comparing Moran formulations")
    _add_input_options(plot)
    _add_output_options(plot)
    plot.add_argument("--plot", metavar="PATH", help="also render a static SVG here")
    plot.set_defaults(func=cmd_plot)

    demo = sub.add_parser("demo", help="export the built-in dataset as CSV")
    demo.add_argument("--out", metavar="DIR", help="directory to write into (default .)")
    demo.set_defaults(func=cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValidationError, DimensionMismatch, WrongNormalization) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LisaKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
