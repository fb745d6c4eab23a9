"""Command-line front end: decompose, verify, compress, info.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 I/O error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .decompose import (PhaseTimer, TruncationSpec, error_report, l_qhosvd,
                        r_qhosvd, reconstruct, ts_qhosvd)
from .errors import (ConvergenceError, DataError, QhosvdError, RankSpecError,
                     TensorFormatError)
from .media import (frames_to_tensor, read_frames, read_tensor,
                    tensor_to_frames, write_frames, write_tensor)
from .qtensor import QTensor
from .verify import run_paper_examples, run_random_battery

VARIANTS = {"ts": ts_qhosvd, "l": l_qhosvd, "r": r_qhosvd}

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _parse_list(text, cast, flag):
    try:
        return tuple(cast(t) for t in text.split(","))
    except ValueError:
        raise RankSpecError(f"{flag} expects a comma-separated list, got {text!r}")


def _truncation_from_args(args) -> TruncationSpec | None:
    if args.ranks and args.ratios:
        raise RankSpecError("give --ranks or --ratios, not both")
    if args.ranks:
        return TruncationSpec(ranks=_parse_list(args.ranks, int, "--ranks"))
    if args.ratios:
        return TruncationSpec(ratios=_parse_list(args.ratios, float, "--ratios"))
    return None


def _print_error_report(report, fmt, stream=None):
    stream = stream if stream is not None else sys.stdout
    if fmt == "json":
        print(json.dumps({
            "abs_error": report.abs_error,
            "rel_error": report.rel_error,
            "sq_error": report.sq_error,
            "tail_bound": report.tail_bound,
            "per_mode_tails": [[m, t] for m, t in report.per_mode_tails],
        }, sort_keys=True), file=stream)
    elif fmt == "csv":
        writer = csv.writer(stream)
        writer.writerow(["abs_error", "rel_error", "sq_error", "tail_bound"])
        writer.writerow([report.abs_error, report.rel_error,
                         report.sq_error, report.tail_bound])
    else:
        print(f"abs_error  {report.abs_error:.6e}", file=stream)
        print(f"rel_error  {report.rel_error:.6e}", file=stream)
        print(f"sq_error   {report.sq_error:.6e}", file=stream)
        print(f"tail_bound {report.tail_bound:.6e}", file=stream)


def _write_decomposition(D, out: Path, timings, rep=None):
    out.mkdir(parents=True, exist_ok=True)
    write_tensor(D.core, out / "core.qtn")
    files = {"core": "core.qtn"}
    for k in range(1, len(D.left_factors) + 1):
        name = f"U{k}.qtn"
        write_tensor(QTensor.from_matrix(D.left_factor(k)), out / name)
        files[f"U{k}"] = name
    first = D.order - len(D.right_factors) + 1
    for q in range(first, D.order + 1):
        name = f"V{q}.qtn"
        write_tensor(QTensor.from_matrix(D.right_factor(q)), out / name)
        files[f"V{q}"] = name
    manifest = {
        "variant": D.variant,
        "dims": list(D.original_dims),
        "ranks": list(D.ranks),
        "files": files,
        "spectra": [{"mode": sp.mode, "side": sp.side,
                     "sigma": [float(s) for s in sp.sigma]}
                    for sp in D.spectra],
        "timings": timings,
    }
    if rep is not None:
        manifest["error"] = {
            "abs_error": rep.abs_error, "rel_error": rep.rel_error,
            "sq_error": rep.sq_error, "tail_bound": rep.tail_bound,
        }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    from .reporting import save_spectra_figure
    save_spectra_figure(D, out / "spectra.png")


def cmd_decompose(args) -> int:
    spec = _truncation_from_args(args)
    timer = PhaseTimer()
    T = timer.timed("ingest", read_tensor, args.input)
    D = VARIANTS[args.variant](T, spec, **(
        {"threads": args.threads} if args.variant == "ts" else {}), timer=timer)
    rep = timer.timed("product", error_report, T, D)
    if args.out:
        t0 = time.perf_counter()
        _write_decomposition(D, Path(args.out), dict(timer.seconds), rep)
        timer.add("emit", time.perf_counter() - t0)
    _print_error_report(rep, args.report)
    if args.report == "text":
        for phase in ("ingest", "svd", "product", "emit"):
            if phase in timer.seconds:
                print(f"time[{phase}] {timer.seconds[phase]:.3f}s")
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = []
    run_all = not args.paper_examples and not args.random
    if args.paper_examples or run_all:
        reports.extend(run_paper_examples())
    if args.random or run_all:
        reports.extend(run_random_battery(args.seed, args.count, threads=args.threads))
    if args.report == "json":
        for rep in reports:
            print(rep.to_json())
    elif args.report == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["name", "residual", "tolerance", "passed"])
        for rep in reports:
            writer.writerow([rep.name, rep.residual, rep.tolerance, rep.passed])
    else:
        for rep in reports:
            print(rep)
    failures = [rep for rep in reports if not rep.passed]
    if failures:
        worst = max(failures, key=lambda r: r.residual / max(r.tolerance, 1e-300))
        print(f"{len(failures)} of {len(reports)} properties failed; "
              f"worst: {worst.name} residual {worst.residual:.3e} "
              f"(tolerance {worst.tolerance:.3e})", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_compress(args) -> int:
    spec = _truncation_from_args(args)
    timer = PhaseTimer()
    src = Path(args.input)
    t0 = time.perf_counter()
    if src.is_dir():
        frames = read_frames(src)
        T = frames_to_tensor(frames)
        frame_input = True
    else:
        T = read_tensor(src)
        frame_input = False
    timer.add("ingest", time.perf_counter() - t0)

    D = VARIANTS[args.variant](T, spec, **(
        {"threads": args.threads} if args.variant == "ts" else {}), timer=timer)
    That = reconstruct(D, timer=timer)
    rep = error_report(T, D)
    total = sum(timer.seconds.values())

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        if frame_input:
            write_frames(out / "frames", tensor_to_frames(That))
        else:
            write_tensor(That, out / "reconstructed.qtn")
        ratios = args.ratios if args.ratios else ""
        row = [args.variant, ratios, "x".join(map(str, D.ranks)),
               f"{rep.rel_error:.6e}", f"{rep.sq_error:.6e}",
               f"{rep.tail_bound:.6e}", f"{total:.3f}"]
        report_path = out / "report.csv"
        new = not report_path.exists()
        with open(report_path, "a", newline="") as fh:
            writer = csv.writer(fh)
            if new:
                writer.writerow(["variant", "ratios", "ranks", "rel_error",
                                 "sq_error", "tail_bound", "seconds"])
            writer.writerow(row)
        from .reporting import save_error_figure, save_spectra_figure
        save_spectra_figure(D, out / "spectra.png")
        save_error_figure(rep, out / "error_summary.png")
        timer.add("emit", time.perf_counter() - t0)

    _print_error_report(rep, args.report)
    if args.report == "text":
        for phase in ("ingest", "svd", "product", "emit"):
            if phase in timer.seconds:
                print(f"time[{phase}] {timer.seconds[phase]:.3f}s")
    return EXIT_OK


def cmd_info(args) -> int:
    T = read_tensor(args.input)
    info = {
        "dims": list(T.dims),
        "order": T.order,
        "entries": T.size,
        "frobenius_norm": T.frobenius_norm(),
        "pure": T.is_pure,
    }
    if args.report == "json":
        print(json.dumps(info, sort_keys=True))
    else:
        for key, val in info.items():
            print(f"{key}: {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhosvd",
        description="Quaternion tensor decompositions for color image and video data")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, ranks=True):
        if ranks:
            p.add_argument("--ranks", help="per-mode target ranks a,b,...")
            p.add_argument("--ratios", help="per-mode truncation ratios in (0,1]")
            p.add_argument("--variant", choices=sorted(VARIANTS), default="ts")
        p.add_argument("--report", choices=("text", "csv", "json"), default="text")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", help="output directory for artifacts")

    p = sub.add_parser("decompose", help="decompose a QTN1 tensor")
    p.add_argument("input")
    add_common(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("verify", help="run the property-verification suites")
    p.add_argument("--paper-examples", action="store_true",
                   help="only the embedded worked-example checks")
    p.add_argument("--random", action="store_true",
                   help="only the seeded random battery")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=20)
    add_common(p, ranks=False)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("compress", help="compress a frame directory or QTN1 tensor")
    p.add_argument("input")
    add_common(p)
    p.set_defaults(fn=cmd_compress)

    p = sub.add_parser("info", help="describe a QTN1 tensor file")
    p.add_argument("input")
    p.add_argument("--report", choices=("text", "csv", "json"), default="text")
    p.set_defaults(fn=cmd_info)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except RankSpecError as exc:
        print(f"qhosvd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TensorFormatError, FileNotFoundError, IsADirectoryError, OSError) as exc:
        print(f"qhosvd: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConvergenceError, DataError, np.linalg.LinAlgError) as exc:
        print(f"qhosvd: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QhosvdError as exc:
        print(f"qhosvd: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
