"""``edgebench`` command line: detect, roc, sweep, report, manifest."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import (
    DEFAULT_GT_CUTOFF,
    Manifest,
    ManifestEntry,
    SampleError,
    biped_manifest,
    default_root,
    load_pair,
    read_manifest,
    write_checksums,
    write_manifest,
)
from .evaluation import canny_roc, sweep_log_sigma, sweep_log_stepsize
from .experiments import (
    DETECTORS,
    GAUSSIAN_DETECTORS,
    VARIANTS,
    DetectorConfig,
    detector_roc,
    edge_map,
)
from .kernels import gaussian_kernel
from .reports import AucReport, atomic_write_text, rows_csv, run_metadata, write_curve_csv

class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _onoff(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _add_common(p: argparse.ArgumentParser) -> None:
    src = p.add_argument_group("input")
    src.add_argument("--manifest", type=Path,
                     help="tab-separated id/image/gt manifest (default: $EDGEBENCH_DATA)")
    src.add_argument("--image", type=Path, help="single image (with --gt) instead of a manifest")
    src.add_argument("--gt", type=Path, help="ground truth for --image")
    src.add_argument("--gt-cutoff", type=float, default=DEFAULT_GT_CUTOFF,
                     help="ground-truth pixels above this value are edges (default 127)")
    p.add_argument("--out-dir", type=Path, default=Path("edgebench-out"),
                   help="output directory (default: edgebench-out)")
    p.add_argument("--jobs", type=int, default=1, help="samples processed concurrently")
    prm = p.add_argument_group("detector parameters")
    prm.add_argument("--sigma", type=float, help="Gaussian standard deviation (fog, log, canny)")
    prm.add_argument("--stepsize", type=int, help="Gaussian half-width in pixels")
    prm.add_argument("--threshold", type=float, help="score cutoff for binary edge maps (detect)")
    prm.add_argument("--low", type=float, help="Canny weak-edge threshold")
    prm.add_argument("--high", type=float, help="Canny strong-edge threshold")
    prm.add_argument("--nms", type=_onoff, metavar="on|off", help="Canny non-maximum suppression")
    prm.add_argument("--numtrials", type=int, default=80,
                     help="Canny threshold trials per curve (default 80)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgebench", description="Edge detectors evaluated by ROC/AUC against ground truth.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="write binary edge maps")
    _add_common(p)
    p.add_argument("--detector", required=True, choices=DETECTORS)

    p = sub.add_parser("roc", help="ROC curves and AUC table")
    _add_common(p)
    p.add_argument("--detector", default=",".join(DETECTORS),
                   help="comma-separated detectors (default: all)")
    p.add_argument("--variant", choices=VARIANTS, default="custom",
                   help="score construction (default: custom)")

    p = sub.add_parser("sweep", help="LoG sigma/stepsize sweeps or the Canny threshold sweep")
    _add_common(p)
    p.add_argument("--detector", required=True, choices=("log", "canny"))
    p.add_argument("--sigmas", type=_floats, help="comma-separated LoG sigmas")
    p.add_argument("--stepsizes", type=_ints, help="comma-separated LoG stepsizes")

    p = sub.add_parser("report", help="render an AUC report as a table and a figure")
    p.add_argument("reports", nargs="+", type=Path, help="auc_*.json files written by 'roc'")
    p.add_argument("--out-dir", type=Path, help="where to write outputs (default: next to input)")
    p.add_argument("--digits", type=int, default=2, help="decimals in the printed table")

    p = sub.add_parser("manifest", help="write a manifest (and checksums) for a BIPED tree")
    p.add_argument("root", type=Path, nargs="?", help="BIPED root (default: $EDGEBENCH_DATA)")
    p.add_argument("--ids", default="RGB_001,RGB_002,RGB_003", help="comma-separated sample ids")
    p.add_argument("--split", default="test", help="BIPED split directory (default: test)")
    p.add_argument("--output", type=Path, help="manifest path (default: <root>/manifest.tsv)")
    return parser


def _config(args) -> DetectorConfig:
    return DetectorConfig(sigma=args.sigma, stepsize=args.stepsize, threshold=args.threshold,
                          low=args.low, high=args.high, nms=args.nms, numtrials=args.numtrials)


def _validate(args, detectors) -> None:
    if (args.sigma is not None or args.stepsize is not None) and not (
            set(detectors) & set(GAUSSIAN_DETECTORS)):
        raise UsageError("--sigma/--stepsize apply only to fog, log and canny")
    if (args.low is not None or args.high is not None or args.nms is not None) \
            and "canny" not in detectors:
        raise UsageError("--low/--high/--nms apply only to canny")
    if args.low is not None and args.high is not None and args.low > args.high:
        raise UsageError("--low must not exceed --high")
    if args.sigma is not None and args.sigma <= 0:
        raise UsageError("--sigma must be positive")
    if args.stepsize is not None and args.stepsize < 1:
        raise UsageError("--stepsize must be >= 1")
    if args.numtrials < 2:
        raise UsageError("--numtrials must be >= 2")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")


def _manifest(args) -> Manifest:
    if args.image is not None or args.gt is not None:
        if args.image is None or args.gt is None:
            raise UsageError("--image and --gt go together")
        if args.manifest is not None:
            raise UsageError("use either --manifest or --image/--gt")
        for p in (args.image, args.gt):
            if not p.is_file():
                raise FileNotFoundError(f"missing {p}")
        return Manifest(args.image.parent, [ManifestEntry(args.image.stem, args.image, args.gt)])
    if args.manifest is not None:
        return read_manifest(args.manifest)
    root = default_root()
    if root is None:
        raise UsageError("no input: pass --manifest, --image/--gt, or set EDGEBENCH_DATA")
    if (root / "manifest.tsv").is_file():
        return read_manifest(root / "manifest.tsv", root)
    return biped_manifest(root)


def _run_samples(manifest: Manifest, args, work):
    """Run ``work(sample)`` per manifest entry; returns ``(results, n_failed)``.

    A failing sample is reported on stderr and skipped; results keep manifest order.
    """
    def one(entry):
        try:
            return work(load_pair(entry, args.gt_cutoff))
        except Exception as exc:  # reported per sample, run continues
            msg = str(exc) if isinstance(exc, SampleError) else f"{entry.id}: {exc}"
            print(f"edgebench: error: {msg}", file=sys.stderr)
            return exc

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            out = list(pool.map(one, manifest.entries))
    else:
        out = [one(e) for e in manifest.entries]
    ok = [r for r in out if not isinstance(r, Exception)]
    return ok, len(out) - len(ok)


def cmd_detect(args) -> int:
    _validate(args, [args.detector])
    if args.detector != "canny" and args.threshold is None:
        raise UsageError(f"--threshold is required for {args.detector}")
    if args.detector == "canny" and args.threshold is not None:
        raise UsageError("canny takes --low/--high, not --threshold")
    from .plotting import save_edge_map

    cfg = _config(args)
    manifest = _manifest(args)

    def work(sample):
        edges = edge_map(args.detector, sample.image, cfg)
        save_edge_map(edges, args.out_dir / f"{sample.id}_{args.detector}.png")
        return sample.id, float(edges.mean())

    results, failed = _run_samples(manifest, args, work)
    for sid, density in results:
        print(f"{sid}\t{args.detector}\t{density!r}")
    return 1 if failed else 0


def cmd_roc(args) -> int:
    dets = [d.strip() for d in args.detector.split(",") if d.strip()]
    for d in dets:
        if d not in DETECTORS:
            raise UsageError(f"unknown detector {d!r}")
    _validate(args, dets)
    if args.threshold is not None:
        raise UsageError("--threshold has no meaning for ROC sweeps")
    from .plotting import plot_roc

    cfg = _config(args)
    manifest = _manifest(args)
    variant = args.variant
    curve_dir = args.out_dir / "curves"

    def work(sample):
        curves = {}
        for d in dets:
            curve = detector_roc(d, sample.image, sample.gt, variant, cfg)
            write_curve_csv(curve, curve_dir / f"{sample.id}_{d}_{variant}.csv")
            curves[d] = curve
        plot_roc(curves, args.out_dir / f"{sample.id}_roc_{variant}.svg",
                 title=f"{sample.id} ({variant})")
        return sample.id, {d: c.auc for d, c in curves.items()}

    results, failed = _run_samples(manifest, args, work)
    report = AucReport(metadata=run_metadata(
        "roc", variant=variant, detectors={d: cfg.params(d) for d in dets},
        gt_cutoff=args.gt_cutoff))
    for sid, aucs in results:
        for d, v in aucs.items():
            report.add(sid, d, v)
    atomic_write_text(args.out_dir / f"auc_{variant}.json", report.to_json())
    atomic_write_text(args.out_dir / f"auc_{variant}.csv", report.to_csv())
    sys.stdout.write(report.to_csv())
    return 1 if failed else 0


def cmd_sweep(args) -> int:
    _validate(args, [args.detector])
    from .plotting import plot_auc_series, plot_roc

    cfg = _config(args)
    det = args.detector
    if det == "log":
        if (args.sigmas is None) == (args.stepsizes is None):
            raise UsageError("give exactly one of --sigmas or --stepsizes")
        if args.sigmas is not None and args.sigma is not None:
            raise UsageError("--sigmas sweeps sigma; fix the mask with --stepsize instead")
        if args.stepsizes is not None and args.stepsize is not None:
            raise UsageError("--stepsizes sweeps the mask; fix sigma with --sigma instead")
        if args.threshold is not None:
            raise UsageError("--threshold has no meaning for ROC sweeps")
    elif args.sigmas is not None or args.stepsizes is not None:
        raise UsageError("canny sweeps over hysteresis thresholds; --sigmas/--stepsizes do not apply")
    manifest = _manifest(args)

    def work(sample):
        if det == "canny":
            nms = False if cfg.nms is None else cfg.nms
            curve = canny_roc(sample.image, gaussian_kernel(cfg.gauss("canny")), sample.gt,
                              cfg.numtrials, nms)
            label = "nms=" + ("on" if nms else "off")
            param, rows = "nms", [(label, curve)]
        elif args.sigmas is not None:
            stepsize = cfg.gauss("log").stepsize
            param = "sigma"
            rows = sweep_log_sigma(sample.image, sample.gt, args.sigmas, stepsize)
        else:
            sigma = cfg.gauss("log").sigma
            param = "stepsize"
            rows = sweep_log_stepsize(sample.image, sample.gt, sigma, args.stepsizes)

        stem = f"{sample.id}_sweep_{det}_{param}"
        for value, curve in rows:
            write_curve_csv(curve, args.out_dir / "curves" / f"{stem}_{value}.csv")
        atomic_write_text(args.out_dir / f"{stem}.csv",
                          rows_csv([param, "auc"], [(v, c.auc) for v, c in rows]))
        plot_roc({f"{param}={v}": c for v, c in rows}, args.out_dir / f"{stem}.svg",
                 title=f"{sample.id}: {det} by {param}")
        if det == "log":
            plot_auc_series([v for v, _ in rows], [c.auc for _, c in rows],
                            args.out_dir / f"{stem}_auc.svg", xlabel=param, title=sample.id)
        return sample.id, param, [(v, c.auc) for v, c in rows]

    results, failed = _run_samples(manifest, args, work)
    for sid, param, rows in results:
        for v, a in rows:
            print(f"{sid}\t{param}={v}\t{a!r}")
    return 1 if failed else 0


def cmd_report(args) -> int:
    from .plotting import plot_auc_table

    for path in args.reports:
        report = AucReport.from_json(path.read_text(encoding="utf-8"))
        out_dir = args.out_dir or path.parent
        atomic_write_text(out_dir / f"{path.stem}_table.csv", report.to_csv())
        plot_auc_table(report, out_dir / f"{path.stem}.svg", title=path.stem)
        variant = report.metadata.get("parameters", {}).get("variant")
        print(f"# {path.name}" + (f" (variant: {variant})" if variant else ""))
        sys.stdout.write(report.format_table(args.digits))
    return 0


def cmd_manifest(args) -> int:
    root = args.root or default_root()
    if root is None:
        raise UsageError("give a BIPED root or set EDGEBENCH_DATA")
    ids = [i.strip() for i in args.ids.split(",") if i.strip()]
    manifest = biped_manifest(root, ids, args.split)
    out = args.output or Path(root) / "manifest.tsv"
    write_manifest(manifest, out)
    write_checksums(manifest, out.with_suffix(".sha256"))
    print(out)
    return 0


COMMANDS = {
    "detect": cmd_detect,
    "roc": cmd_roc,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "manifest": cmd_manifest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    np.seterr(all="ignore")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (FileNotFoundError, ValueError, OSError) as exc:
        print(f"edgebench: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
