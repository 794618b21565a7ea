"""Command-line entry point.

Subcommands: extract, fit, predict, eval, synth.  Exit codes: 0 success,
1 runtime failure, 2 usage error, 3 refusal to overwrite existing output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import PipelineConfig
from .errors import FwlbpError
from .evaluate import (
    Dataset,
    cross_validate,
    dataset_descriptors,
    image_descriptor,
    invariance_report,
    load_dataset,
    noise_sweep,
    rmax_sweep,
    write_descriptor_csv,
    write_invariance_csv,
)
from .features import (
    FeatureMatrix,
    pca_fit,
    pca_from_json,
    pca_to_json,
    pca_transform,
    sqrt_transform,
)
from .image import load_pgm_file, write_pgm_file
from .nsc import SubspacePolicy, nsc_fit, nsc_from_json, nsc_residuals, nsc_to_json
from .synth import make_class_sample


def _add_config_args(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("pipeline configuration")
    g.add_argument("--config", type=Path, help="JSON config file; flags override it")
    g.add_argument("--r-min", type=int, help="smallest DBC scale (default 2)")
    g.add_argument("--r-max", type=int, help="largest DBC scale (default 7)")
    g.add_argument("--radii", help="comma-separated LBP radii, e.g. 1,2,3 (default)")
    g.add_argument("--samples", type=int, help="LBP samples per radius (default 8)")
    g.add_argument("--pca-k", type=int, help="PCA dimensionality target (default 300)")
    g.add_argument("--subspace-energy", type=float,
                   help="NSC energy fraction policy (default 0.95)")
    g.add_argument("--subspace-dim", type=int, help="fixed NSC subspace dimension")
    g.add_argument("--norm-mean", type=float, help="intensity normalization mean (default 128)")
    g.add_argument("--norm-std", type=float, help="intensity normalization std (default 20)")
    g.add_argument("--seed", type=int, help="seed for all randomized steps (default 0)")
    g.add_argument("--fd-regression", choices=["loglog", "linear"],
                   help="FD slope regression coordinates (default loglog)")
    g.add_argument("--no-sqrt", action="store_true", help="skip the sqrt preprocessing")
    g.add_argument("--sqrt-after-pca", action="store_true",
                   help="apply (signed) sqrt after PCA instead of before")
    g.add_argument("--noise-before-norm", action="store_true",
                   help="add evaluation noise before intensity normalization")
    g.add_argument("--folds", type=int, help="cross-validation folds (default 10)")
    g.add_argument("--jobs", type=int, default=None,
                   help="parallel workers (default: FWLBP_JOBS or core count)")


def _build_config(args) -> PipelineConfig:
    if args.config:
        config = PipelineConfig.from_json(args.config.read_text())
    else:
        config = PipelineConfig()
    overrides = {
        "r_min": args.r_min,
        "r_max": args.r_max,
        "pca_k": args.pca_k,
        "subspace_energy": args.subspace_energy,
        "subspace_dim": args.subspace_dim,
        "norm_mean": args.norm_mean,
        "norm_std": args.norm_std,
        "seed": args.seed,
        "regression_mode": args.fd_regression,
        "folds": args.folds,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if args.radii:
        n = args.samples if args.samples else 8
        config.radii = tuple((float(r), n) for r in args.radii.split(","))
    elif args.samples:
        config.radii = tuple((r, args.samples) for r, _ in config.radii)
    if args.no_sqrt:
        config.sqrt_placement = "none"
    elif args.sqrt_after_pca:
        config.sqrt_placement = "after"
    if args.noise_before_norm:
        config.noise_before_normalize = True
    config.__post_init__()
    return config


def _num_jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("FWLBP_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _extract_one(task):
    path, config_json = task
    config = PipelineConfig.from_json(config_json)
    img = load_pgm_file(path)
    return image_descriptor(img, config)


# ---------------------------------------------------------------------------
# extract
# ---------------------------------------------------------------------------

def cmd_extract(args) -> int:
    config = _build_config(args)
    jobs = _num_jobs(args)
    paths = [Path(p) for p in args.inputs]
    tasks = [(str(p), config.to_json()) for p in paths]
    entries = []
    failures = 0
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = []
            for path, future in [(p, pool.submit(_extract_one, t)) for p, t in zip(paths, tasks)]:
                results.append((path, future))
            for path, future in results:
                try:
                    values = future.result()
                except Exception as exc:
                    print(f"error: {path}: {exc}", file=sys.stderr)
                    failures += 1
                    if not args.keep_going:
                        return 1
                    continue
                entries.append((str(path), path.parent.name, values))
    else:
        for path, task in zip(paths, tasks):
            try:
                values = _extract_one(task)
            except Exception as exc:
                print(f"error: {path}: {exc}", file=sys.stderr)
                failures += 1
                if not args.keep_going:
                    return 1
                continue
            entries.append((str(path), path.parent.name, values))
    write_descriptor_csv(args.out, entries, config.descriptor_length)
    print(f"wrote {len(entries)} descriptor rows to {args.out}")
    return 1 if failures and not entries else 0


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------

def _policy(config: PipelineConfig) -> SubspacePolicy:
    if config.subspace_dim is not None:
        return SubspacePolicy.fixed(config.subspace_dim)
    return SubspacePolicy.energy(config.subspace_energy)


def cmd_fit(args) -> int:
    config = _build_config(args)
    out = Path(args.out)
    bundle_files = [out / "pca.json", out / "nsc.json", out / "config.json"]
    if any(f.exists() for f in bundle_files) and not args.force:
        print(f"error: model bundle already exists in {out}; use --force to overwrite",
              file=sys.stderr)
        return 3
    ds = load_dataset(args.dataset)
    features = dataset_descriptors(ds, config)
    x = features.data
    if config.sqrt_placement == "before":
        x = sqrt_transform(x)
    k = min(config.pca_k, x.shape[0] - 1, x.shape[1])
    if k < config.pca_k:
        print(f"note: pca_k clamped from {config.pca_k} to {k} "
              f"({x.shape[0]} samples, {x.shape[1]} features)", file=sys.stderr)
    pca = pca_fit(FeatureMatrix(x), k)
    z = pca_transform(pca, x)
    model = nsc_fit(FeatureMatrix(z, labels=features.labels), _policy(config))
    out.mkdir(parents=True, exist_ok=True)
    (out / "pca.json").write_text(pca_to_json(pca))
    (out / "nsc.json").write_text(nsc_to_json(model))
    config_obj = json.loads(config.to_json())
    config_obj["class_names"] = ds.class_names
    (out / "config.json").write_text(json.dumps(config_obj, indent=2))
    print(f"fit {len(ds.class_names)} classes from {len(ds)} images -> {out}")
    return 0


# ---------------------------------------------------------------------------
# predict
# ---------------------------------------------------------------------------

def cmd_predict(args) -> int:
    bundle = Path(args.model)
    config_obj = json.loads((bundle / "config.json").read_text())
    class_names = config_obj.get("class_names", [])
    config = PipelineConfig.from_json(json.dumps(config_obj))
    pca = pca_from_json((bundle / "pca.json").read_text())
    model = nsc_from_json((bundle / "nsc.json").read_text())
    img = load_pgm_file(args.image)
    values = image_descriptor(img, config)
    if len(values) != pca.num_features:
        print(f"error: descriptor length {len(values)} does not match the "
              f"model's {pca.num_features} features (check radii/samples)", file=sys.stderr)
        return 1
    if config.sqrt_placement == "before":
        values = sqrt_transform(values)
    z = pca_transform(pca, values)
    residuals = nsc_residuals(model, z)
    ordered = sorted(residuals.items(), key=lambda kv: (kv[1], kv[0]))
    best = ordered[0][0]

    def name(c):
        return class_names[c] if 0 <= c < len(class_names) else str(c)

    print(json.dumps({
        "label": name(best),
        "residuals": [{"class": name(c), "residual": r} for c, r in ordered],
    }, indent=2))
    return 0


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _write_report(report, path):
    Path(path).write_text(report.to_json())


def cmd_eval(args) -> int:
    from . import plots

    config = _build_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ds = load_dataset(args.dataset)

    if args.mode == "cv":
        report = cross_validate(ds, config)
        _write_report(report, out / "cv_report.json")
        plots.plot_confusion(report.confusion, ds.class_names, out / "cv_confusion.png")
        print(f"cv mean accuracy {100 * report.mean_accuracy:.2f}% "
              f"(+/- {100 * report.std_accuracy:.2f}) -> {out}")
    elif args.mode == "noise":
        levels = [float(v) for v in args.snr.split(",")]
        reports = noise_sweep(ds, levels, config)
        for report in reports:
            _write_report(report, out / f"noise_snr{report.extra['snr_db']:g}.json")
        accs = [r.mean_accuracy for r in reports]
        plots.plot_accuracy_sweep(levels, accs, "SNR (dB)", out / "noise_sweep.png",
                                  title="noise robustness")
        with open(out / "noise_sweep.csv", "w") as fh:
            fh.write("snr_db,mean_accuracy\n")
            for level, acc in zip(levels, accs):
                fh.write(f"{level:g},{acc:.17g}\n")
        print(f"noise sweep over {levels} -> {out}")
    elif args.mode == "rmax":
        values = [int(v) for v in args.rmax_values.split(",")]
        results = rmax_sweep(ds, values, config)
        summary = []
        for entry in results:
            if entry["error"]:
                summary.append({"r_max": entry["r_max"], "error": entry["error"]})
                continue
            report = entry["report"]
            _write_report(report, out / f"rmax_{entry['r_max']}.json")
            summary.append({"r_max": entry["r_max"],
                            "mean_accuracy": report.mean_accuracy})
        (out / "rmax_sweep.json").write_text(json.dumps(summary, indent=2))
        ok = [(e["r_max"], e["mean_accuracy"]) for e in summary if "mean_accuracy" in e]
        if ok:
            plots.plot_accuracy_sweep([x for x, _ in ok], [a for _, a in ok],
                                      "r_max", out / "rmax_sweep.png", title="r_max sweep")
        print(f"r_max sweep over {values} -> {out}")
    elif args.mode == "invariance":
        if args.image:
            img = load_pgm_file(args.image)
        else:
            img = ds.image(0)
        rows = invariance_report(img, config)
        write_invariance_csv(rows, out / "invariance.csv")
        plots.plot_invariance(rows, out / "invariance.png")
        print(f"invariance report ({len(rows)} rows) -> {out}")
    (out / "config.json").write_text(config.to_json())
    return 0


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jitters = set((args.jitter or "").split(",")) - {""}
    unknown = jitters - {"scale", "rotation"}
    if unknown:
        print(f"error: unknown jitter kinds {sorted(unknown)}", file=sys.stderr)
        return 2
    scale_jitter = (0.7, 1.4) if "scale" in jitters else None
    rotation_jitter = (0.0, 90.0) if "rotation" in jitters else None
    manifest = {
        "seed": args.seed,
        "size": args.size,
        "classes": args.classes,
        "per_class": args.per_class,
        "jitter": sorted(jitters),
        "samples": [],
    }
    from .synth import CLASS_SPECS

    if args.classes > len(CLASS_SPECS):
        print(f"error: at most {len(CLASS_SPECS)} classes are defined", file=sys.stderr)
        return 2
    for c in range(args.classes):
        class_name = CLASS_SPECS[c][0]
        class_dir = out / class_name
        class_dir.mkdir(exist_ok=True)
        for i in range(args.per_class):
            img, record = make_class_sample(c, i, args.size, args.seed,
                                            scale_jitter, rotation_jitter)
            path = class_dir / f"{class_name}_{i:03d}.pgm"
            write_pgm_file(img, path)
            record.update({"path": str(path.relative_to(out)), "sample": i})
            manifest["samples"].append(record)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    print(f"wrote {args.classes * args.per_class} images to {out}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fwlbp",
        description="Fractal-weighted local binary pattern texture toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract descriptors from PGM images to CSV")
    p.add_argument("inputs", nargs="+", help="input PGM files")
    p.add_argument("--out", required=True, type=Path, help="output CSV path")
    p.add_argument("--keep-going", action="store_true",
                   help="report per-file failures and continue")
    _add_config_args(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fit", help="fit PCA + NSC models from a dataset directory")
    p.add_argument("dataset", help="dataset root (root/class_name/*.pgm)")
    p.add_argument("--out", required=True, type=Path, help="model bundle directory")
    p.add_argument("--force", action="store_true", help="overwrite an existing bundle")
    _add_config_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="classify one image with a fitted bundle")
    p.add_argument("model", help="model bundle directory from `fwlbp fit`")
    p.add_argument("image", help="PGM image to classify")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="run an evaluation protocol on a dataset")
    p.add_argument("dataset", help="dataset root (root/class_name/*.pgm)")
    p.add_argument("--mode", required=True, choices=["cv", "noise", "rmax", "invariance"])
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--snr", default="100,30,15,10,5",
                   help="comma-separated SNR levels in dB (noise mode)")
    p.add_argument("--rmax-values", default="3,4,5,6,7",
                   help="comma-separated r_max values (rmax mode)")
    p.add_argument("--image", type=Path,
                   help="image for the invariance report (default: first dataset image)")
    _add_config_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic dataset on disk")
    p.add_argument("--out", required=True, type=Path, help="output dataset directory")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=20)
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--seed", type=int, default=11)
    p.add_argument("--jitter", help="comma-separated: scale,rotation")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FwlbpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
