"""Command-line interface: analyze corpora, run simulations, compare files.

All outputs are deterministic for fixed inputs, options, and seed: reports
are JSON with sorted keys, CSV rows are emitted in a defined order, floats
are rendered with repr (shortest round-trip decimal), and nothing
time- or environment-dependent is ever written.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DegenerateTable, InsufficientSupport, NoRoot, NoteZipfError
from .fit import SimonFit, fit_nu, predict_n
from .notes import DEFAULT_GRID, DurationGrid, TokenizeOptions, tokenize
from .simulate import SimConfig, simulate, verify_zipf
from .smf import extract_notes
from .stats import (
    OccurrenceSpectrum,
    RankTable,
    count_tokens,
    dense_spectrum_window,
    fit_rank_slope,
    fit_spectrum_gamma,
    spectrum,
)
from .text import tokenize_text


@dataclass
class AnalysisReport:
    """Everything one analyzed file produced, ready for serialization."""

    path: str
    kind: str
    options: dict
    table: RankTable
    spec: OccurrenceSpectrum
    fit: SimonFit | None
    spectrum_fit: dict | None
    rank_tail: dict | None
    diagnostics: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "source": {"path": self.path, "kind": self.kind},
            "options": self.options,
            "corpus": {"V": self.table.V, "T": self.table.T},
            "fit": self.fit.to_dict() if self.fit is not None else None,
            "spectrum_fit": self.spectrum_fit,
            "rank_tail": self.rank_tail,
            "diagnostics": self.diagnostics,
            "warnings": self.warnings,
        }


def _detect_kind(data: bytes, forced: str) -> str:
    if forced != "auto":
        return forced
    return "midi" if data.startswith(b"MThd") else "text"


def _decode_utf8(data: bytes, path: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise NoteZipfError(f"{path} is not valid UTF-8: {exc}") from exc


def analyze_file(
    path: str,
    kind: str = "auto",
    min_ticks: int = 0,
    grid_path: str | None = None,
    residuals: str = "log",
    n_max: int | None = None,
) -> AnalysisReport:
    """Run the full pipeline on one file: parse, tokenize, count, fit, test.

    Raises NoteZipfError subclasses (or OSError) when no report can be
    produced at all; recoverable estimation failures are recorded as
    warnings on the report instead.
    """
    data = Path(path).read_bytes()
    resolved_kind = _detect_kind(data, kind)
    grid = DurationGrid.from_file(grid_path) if grid_path else DEFAULT_GRID
    diagnostics: dict = {}

    if resolved_kind == "midi":
        header, notes, diag = extract_notes(data)
        result = tokenize(
            notes, header.division, TokenizeOptions(min_ticks=min_ticks, grid=grid)
        )
        tokens: list = list(result.tokens)
        diagnostics = dict(diag.to_dict())
        diagnostics["dropped_short"] = result.dropped_short
        diagnostics["out_of_grid"] = result.out_of_grid
    elif resolved_kind == "text":
        tokens = tokenize_text(_decode_utf8(data, path))
    elif resolved_kind == "tokens":
        tokens = [line.strip() for line in _decode_utf8(data, path).splitlines()]
        tokens = [t for t in tokens if t]
    else:
        raise ValueError(f"unknown kind {resolved_kind!r}")

    table = count_tokens(tokens)
    spec = spectrum(table)
    warnings: list[str] = []

    fitted: SimonFit | None = None
    try:
        fitted = fit_nu(table, residuals=residuals)
        if fitted.boundary_warning:
            warnings.append(f"fitted exponent {fitted.nu} touches the search bounds")
    except (DegenerateTable, NoRoot) as exc:
        warnings.append(f"rank-law fit skipped: {exc}")

    spectrum_fit: dict | None = None
    spec_window = n_max if n_max is not None else dense_spectrum_window(spec)
    try:
        gamma = fit_spectrum_gamma(spec, n_max=spec_window)
        spectrum_fit = {"gamma": gamma.slope, "stderr": gamma.stderr, "n_max": spec_window}
    except InsufficientSupport as exc:
        warnings.append(f"spectrum fit skipped: {exc}")

    rank_tail: dict | None = None
    try:
        tail = fit_rank_slope(table)
        rank_tail = {"z": tail.slope, "stderr": tail.stderr}
    except InsufficientSupport as exc:
        warnings.append(f"rank-tail fit skipped: {exc}")

    options = {
        "kind": kind,
        "min_ticks": min_ticks,
        "grid": grid_path if grid_path else "default",
        "residuals": residuals,
        "spectrum_n_max": spec_window,
    }
    return AnalysisReport(
        path=path,
        kind=resolved_kind,
        options=options,
        table=table,
        spec=spec,
        fit=fitted,
        spectrum_fit=spectrum_fit,
        rank_tail=rank_tail,
        diagnostics=diagnostics,
        warnings=warnings,
    )


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _ranks_csv(report: AnalysisReport) -> str:
    lines = ["rank,observed,predicted"]
    for rank, (_, observed) in enumerate(report.table.entries, start=1):
        if report.fit is not None:
            lines.append(f"{rank},{observed},{predict_n(rank, report.fit)!r}")
        else:
            lines.append(f"{rank},{observed},")
    return "\n".join(lines) + "\n"


def _write_analysis(report: AnalysisReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "report.json", report.to_dict())
    (out_dir / "ranks.csv").write_text(_ranks_csv(report), encoding="utf-8")
    (out_dir / "spectrum.csv").write_text(report.spec.to_csv(), encoding="utf-8")


def _summary_line(report: AnalysisReport) -> str:
    parts = [f"{report.path}: kind={report.kind} V={report.table.V} T={report.table.T}"]
    if report.fit is not None:
        parts.append(f"nu={report.fit.nu!r} p={report.fit.p_value!r}")
    for warning in report.warnings:
        parts.append(f"[{warning}]")
    return " ".join(parts)


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        report = analyze_file(
            args.path,
            kind=args.kind,
            min_ticks=args.min_ticks,
            grid_path=args.grid,
            residuals=args.residuals,
            n_max=args.n_max,
        )
    except (NoteZipfError, OSError, ValueError) as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return 1
    _write_analysis(report, Path(args.out))
    print(_summary_line(report))
    return 0


_FIT_COLUMNS = ["nu", "z", "n0", "a", "b", "sse_log", "chi2", "dof", "p_value", "boundary_warning"]
_COMPARE_COLUMNS = ["path", "kind", "V", "T"] + _FIT_COLUMNS


def _compare_row(report: AnalysisReport) -> dict:
    row = {
        "path": report.path,
        "kind": report.kind,
        "V": report.table.V,
        "T": report.table.T,
    }
    fit_dict = report.fit.to_dict() if report.fit is not None else {}
    for column in _FIT_COLUMNS:
        row[column] = fit_dict.get(column)
    return row


def _cmd_compare(args: argparse.Namespace) -> int:
    rows: list[dict] = []
    errors: list[dict] = []
    for path in args.paths:
        try:
            report = analyze_file(
                path,
                kind=args.kind,
                min_ticks=args.min_ticks,
                grid_path=args.grid,
                residuals=args.residuals,
                n_max=args.n_max,
            )
            rows.append(_compare_row(report))
        except (NoteZipfError, OSError, ValueError) as exc:
            errors.append({"path": path, "error": str(exc)})
            print(f"error: {path}: {exc}", file=sys.stderr)
    rows.sort(key=lambda r: (r["nu"] is None, r["nu"] if r["nu"] is not None else 0.0, r["path"]))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "compare.json", {"rows": rows, "errors": errors})
    lines = [",".join(_COMPARE_COLUMNS)]
    for row in rows:
        cells = []
        for col in _COMPARE_COLUMNS:
            value = row[col]
            if value is None:
                cells.append("")
            elif isinstance(value, float):
                cells.append(repr(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    (out_dir / "compare.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for row in rows:
        nu = row["nu"]
        print(f"{row['path']}: V={row['V']} T={row['T']} nu={nu!r}")
    return 0 if rows else 1


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = SimConfig(
            mode=args.mode, steps=args.steps, seed=args.seed, alpha=args.alpha, nu=args.nu
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = simulate(config)
    warnings: list[str] = []
    verify_dict: dict | None = None
    try:
        verify_dict = verify_zipf(result, n_max=args.n_max).to_dict()
    except (InsufficientSupport, DegenerateTable, NoRoot) as exc:
        warnings.append(f"verification skipped: {exc}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "config": config.to_dict(),
        "V": result.V,
        "T": result.T,
        "verify": verify_dict,
        "warnings": warnings,
    }
    _write_json(out_dir / "sim_report.json", payload)
    if args.emit_tokens:
        stream = "\n".join(str(token) for token in result.tokens) + "\n"
        (out_dir / "tokens.txt").write_text(stream, encoding="utf-8")
    summary = f"mode={config.mode} steps={config.steps} seed={config.seed} V={result.V}"
    if verify_dict is not None:
        summary += f" nu_hat={verify_dict['nu_hat']!r} gamma_hat={verify_dict['gamma_hat']!r}"
    print(summary)
    return 0


def _add_analysis_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--kind", choices=["auto", "midi", "text", "tokens"], default="auto",
        help="input kind; auto detects MIDI by magic bytes and falls back to text",
    )
    parser.add_argument("--min-ticks", type=int, default=0, help="drop notes shorter than this")
    parser.add_argument("--grid", default=None, help="duration grid file, one rational per line")
    parser.add_argument("--residuals", choices=["log", "linear"], default="log")
    parser.add_argument(
        "--n-max", type=int, default=None,
        help="spectrum fit cutoff (default: adaptive dense window)",
    )
    parser.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="notezipf",
        description="Rank-frequency analysis of note and word usage, with a "
        "one-parameter rank-law fit and a generative simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one MIDI/text/token file")
    p_analyze.add_argument("path")
    _add_analysis_options(p_analyze)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_compare = sub.add_parser("compare", help="analyze several files and rank them by nu")
    p_compare.add_argument("paths", nargs="+")
    _add_analysis_options(p_compare)
    p_compare.set_defaults(func=_cmd_compare)

    p_sim = sub.add_parser("simulate", help="run the generative process and verify its statistics")
    p_sim.add_argument("--mode", choices=["constant", "sublinear"], required=True)
    p_sim.add_argument("--alpha", type=float, default=None, help="innovation rate (constant mode)")
    p_sim.add_argument("--nu", type=float, default=None, help="growth exponent (sublinear mode)")
    p_sim.add_argument("--steps", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--n-max", type=int, default=None)
    p_sim.add_argument("--out", default=".", help="output directory")
    p_sim.add_argument("--emit-tokens", action="store_true", help="also write the token stream")
    p_sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
