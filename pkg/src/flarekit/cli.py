"""Command line interface.

Subcommands:
    synth    batch-generate flare-corrupted/flare-free training pairs
    recover  blend a deflared image back toward its input at light sources
    analyze  exact-vs-convex tone blend residual series and weight sweep
    hist     intensity histogram of one image
    eval     PSNR/SSIM over paired prediction/ground-truth directories

Report commands write CSV (stable column order, documented per command) and
render a matplotlib figure alongside the CSV unless --no-fig is given.

Exit codes: 0 success, 2 user/input error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import blend_analysis, metrics, recovery, synthesis
from .color import gamma_decode, gamma_encode, histogram, DEFAULT_GAMMA
from .fileio import ImageReadError, read_png, write_png

EXIT_OK = 0
EXIT_USER_ERROR = 2
EXIT_IO_ERROR = 3

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def _env_seed() -> int:
    return int(os.environ.get("FLAREKIT_SEED", "0"))


def _list_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise ValueError(f"not a directory: {directory}")
    return sorted(p for p in directory.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES)


def _open_report(path: Path | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _figure_path(out: Path | None, fig: str | None, no_fig: bool) -> Path | None:
    if no_fig:
        return None
    if fig is not None:
        return Path(fig)
    if out is not None:
        return out.with_suffix(".png")
    return None


# ---------------------------------------------------------------- synth


def _synthesize_one(
    index: int,
    scenes: list[Path],
    flares: list[Path],
    out_dir: Path,
    master_seed: int,
    policy: synthesis.SamplingPolicy,
    depth: int,
) -> synthesis.PairRecord:
    pair_seed = synthesis.derive_pair_seed(master_seed, index)
    select = synthesis.stream_rng(pair_seed, synthesis.SELECT_STREAM)
    scene_path = scenes[int(select.integers(len(scenes)))]
    flare_path = flares[int(select.integers(len(flares)))]
    params = synthesis.sample_params(master_seed, index, policy)

    scene_enc = read_png(scene_path)
    flare_enc = read_png(flare_path)
    if (flare_enc.height, flare_enc.width) != (scene_enc.height, scene_enc.width):
        # center the flare on a scene-sized canvas
        flare_lin = gamma_decode(flare_enc, params.gamma)
        placed = synthesis.place_flare(
            flare_lin,
            scene_enc.width,
            scene_enc.height,
            offset_x=(scene_enc.width - flare_enc.width) // 2,
            offset_y=(scene_enc.height - flare_enc.height) // 2,
        )
        flare_enc = gamma_encode(placed, params.gamma, flare_enc.depth)

    composite, scene_gt, flare_gt = synthesis.synthesize_pair(
        scene_enc, flare_enc, params, out_depth=depth
    )
    names = {
        "composite": f"{index:06d}_composite.png",
        "scene_gt": f"{index:06d}_scene.png",
        "flare_gt": f"{index:06d}_flare.png",
    }
    write_png(out_dir / names["composite"], composite)
    write_png(out_dir / names["scene_gt"], scene_gt)
    write_png(out_dir / names["flare_gt"], flare_gt)
    return synthesis.PairRecord(
        scene=str(scene_path),
        flare=str(flare_path),
        composite=names["composite"],
        scene_gt=names["scene_gt"],
        flare_gt=names["flare_gt"],
        mode=params.mode,
        p=params.p,
        q=params.q,
        sigma2=params.noise_variance,
        gamma=params.gamma,
        seed=params.master_seed,
        pair_index=index,
    )


def cmd_synth(args) -> int:
    scenes = _list_images(Path(args.scenes))
    flares = _list_images(Path(args.flares))
    if not scenes:
        raise ValueError(f"no images found in scenes directory {args.scenes}")
    if not flares:
        raise ValueError(f"no images found in flares directory {args.flares}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    policy = synthesis.SamplingPolicy(
        p_min=args.p_min,
        p_max=args.p_max,
        q=args.q,
        noise_scale=args.noise_scale,
        chi_df=args.chi_df,
        gamma=args.gamma,
        mode=synthesis.MODE_CONVEX if args.mode == "convex" else synthesis.MODE_DIRECT_ADD,
    )

    def work(i: int) -> synthesis.PairRecord:
        return _synthesize_one(i, scenes, flares, out_dir, args.seed, policy, args.depth)

    indices = range(args.count)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(work, indices))
    else:
        records = [work(i) for i in indices]

    manifest = out_dir / "manifest.jsonl"
    with open(manifest, "w") as fh:
        for rec in records:  # pool.map preserves pair-index order
            fh.write(json.dumps(rec.to_dict()) + "\n")
    print(manifest)
    return EXIT_OK


# ---------------------------------------------------------------- recover


def cmd_recover(args) -> int:
    input_enc = read_png(Path(args.input))
    deflared_enc = read_png(Path(args.deflared))
    if (input_enc.height, input_enc.width) != (deflared_enc.height, deflared_enc.width):
        raise ValueError(
            f"deflared image {deflared_enc.width}x{deflared_enc.height} does not match "
            f"input {input_enc.width}x{input_enc.height}"
        )
    input_lin = gamma_decode(input_enc, args.gamma)
    deflared_lin = gamma_decode(deflared_enc, args.gamma)
    result = recovery.recover(input_lin, deflared_lin, args.alpha)
    write_png(Path(args.out), gamma_encode(result, args.gamma, args.depth))
    return EXIT_OK


# ---------------------------------------------------------------- analyze


def _halving_sequence(start: float, stop: float) -> list[float]:
    seq = []
    e = start
    while e > stop:
        seq.append(e)
        e /= 2.0
    seq.append(stop)
    return seq


def cmd_analyze(args) -> int:
    from .tonemap import SmoothStep

    tmo = SmoothStep()
    b_values = args.b_rgb or [0.99]
    eps_values = _halving_sequence(args.eps1_max, args.eps1_min)
    rows = []
    for b in b_values:
        for e1 in eps_values:
            rep = blend_analysis.bright_regime_residual(b, e1, tmo)
            rows.append(
                {
                    "b_rgb": b,
                    "eps1": e1,
                    "exact": rep.exact,
                    "approx": rep.approx,
                    "residual": rep.residual,
                }
            )
    out = Path(args.out) if args.out else None
    fh, close = _open_report(out)
    try:
        writer = csv.DictWriter(fh, fieldnames=["b_rgb", "eps1", "exact", "approx", "residual"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if close:
            fh.close()

    sweep_rows = blend_analysis.regime_weight_sweep(tmo, args.grid_step, args.scene_raw)
    sweep_out = Path(args.sweep_out) if args.sweep_out else (
        out.with_name(out.stem + "_sweep.csv") if out else None
    )
    sfh, sclose = _open_report(sweep_out)
    try:
        if not sclose:
            sfh.write("\n")  # blank line between the two stdout tables
        w = csv.writer(sfh)
        w.writerow(["flare_raw", "scene_weight", "flare_weight"])
        for r in sweep_rows:
            w.writerow([r.flare_raw, r.scene_weight, r.flare_weight])
    finally:
        if sclose:
            sfh.close()

    fig_path = _figure_path(out, args.fig, args.no_fig)
    if fig_path is not None:
        from . import plotting

        plotting.save_residual_figure(rows, fig_path)
        if sweep_out is not None:
            plotting.save_sweep_figure(sweep_rows, sweep_out.with_suffix(".png"))
    return EXIT_OK


# ---------------------------------------------------------------- hist


def cmd_hist(args) -> int:
    img = gamma_decode(read_png(Path(args.input)), args.gamma)
    hist = histogram(img, args.bins)
    out = Path(args.out) if args.out else None
    fh, close = _open_report(out)
    try:
        fh.write(
            f"# mean={hist.mean:.9g} p10={hist.p10:.9g} p50={hist.p50:.9g} p90={hist.p90:.9g}\n"
        )
        writer = csv.writer(fh)
        writer.writerow(["bin_index", "bin_lo", "bin_hi", "count"])
        for i in range(hist.bins):
            writer.writerow([i, hist.edges[i], hist.edges[i + 1], int(hist.counts[i])])
    finally:
        if close:
            fh.close()
    fig_path = _figure_path(out, args.fig, args.no_fig)
    if fig_path is not None:
        from . import plotting

        plotting.save_histogram_figure(hist, fig_path, title=Path(args.input).name)
    return EXIT_OK


# ---------------------------------------------------------------- eval


def cmd_eval(args) -> int:
    pred_dir, gt_dir = Path(args.pred), Path(args.gt)
    pred_files = {p.name: p for p in _list_images(pred_dir)}
    gt_files = {p.name: p for p in _list_images(gt_dir)}
    shared = sorted(set(pred_files) & set(gt_files))
    if not shared:
        raise ValueError(f"no matching image names between {pred_dir} and {gt_dir}")
    rows = []
    for name in shared:
        pred = gamma_decode(read_png(pred_files[name]), args.gamma)
        gt = gamma_decode(read_png(gt_files[name]), args.gamma)
        rows.append(
            {"name": name, "psnr": metrics.psnr(pred, gt), "ssim": metrics.ssim(pred, gt)}
        )
    rows.append(
        {
            "name": "mean",
            "psnr": sum(r["psnr"] for r in rows) / len(rows),
            "ssim": sum(r["ssim"] for r in rows) / len(rows),
        }
    )
    out = Path(args.out) if args.out else None
    fh, close = _open_report(out)
    try:
        writer = csv.DictWriter(fh, fieldnames=["name", "psnr", "ssim"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if close:
            fh.close()
    fig_path = _figure_path(out, args.fig, args.no_fig)
    if fig_path is not None:
        from . import plotting

        plotting.save_eval_figure(rows, fig_path)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_report_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.add_argument("--fig", help="figure output path (default: CSV path with .png suffix)")
    p.add_argument("--no-fig", action="store_true", help="disable figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flarekit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("synth", help="generate flare-corrupted training pairs")
    ps.add_argument("--scenes", required=True, help="directory of flare-free scene images")
    ps.add_argument("--flares", required=True, help="directory of flare-only images")
    ps.add_argument("--out", required=True, help="output directory (created if absent)")
    ps.add_argument("--count", type=int, default=1, help="number of pairs to generate")
    ps.add_argument("--seed", type=int, default=_env_seed(),
                    help="master seed (default: $FLAREKIT_SEED or 0)")
    ps.add_argument("--mode", choices=["convex", "direct"], default="convex")
    ps.add_argument("--p-min", type=float, default=4.0, help="sigmoid steepness lower bound")
    ps.add_argument("--p-max", type=float, default=7.0, help="sigmoid steepness upper bound")
    ps.add_argument("--q", type=float, default=0.5, help="sigmoid midpoint")
    ps.add_argument("--noise-scale", type=float, default=0.01,
                    help="scale of the chi-square noise variance draw")
    ps.add_argument("--chi-df", type=int, default=1, help="chi-square degrees of freedom")
    ps.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    ps.add_argument("--depth", type=int, choices=[8, 16], default=16, help="output PNG bit depth")
    ps.add_argument("--jobs", type=int, default=1, help="parallel worker threads")
    ps.set_defaults(func=cmd_synth)

    pr = sub.add_parser("recover", help="recover light sources after deflaring")
    pr.add_argument("--input", required=True, help="flare-corrupted input image")
    pr.add_argument("--deflared", required=True, help="deflaring operator output image")
    pr.add_argument("--alpha", type=float, default=recovery.DEFAULT_ALPHA,
                    help="recovery weight exponent")
    pr.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    pr.add_argument("--out", required=True, help="output image path")
    pr.add_argument("--depth", type=int, choices=[8, 16], default=16, help="output PNG bit depth")
    pr.set_defaults(func=cmd_recover)

    pa = sub.add_parser(
        "analyze",
        help="exact vs convex tone blend residuals",
        description="Residual CSV columns: b_rgb, eps1, exact, approx, residual. "
        "Sweep CSV columns: flare_raw, scene_weight, flare_weight. On stdout the "
        "two tables are separated by a blank line.",
    )
    pa.add_argument("--b-rgb", type=float, action="append",
                    help="bright layer display value (repeatable; default 0.99)")
    pa.add_argument("--eps1-max", type=float, default=0.1, help="largest raw-ratio value")
    pa.add_argument("--eps1-min", type=float, default=1e-4, help="smallest raw-ratio value")
    pa.add_argument("--grid-step", type=float, default=0.05, help="weight sweep grid step")
    pa.add_argument("--scene-raw", type=float, default=0.2, help="fixed dim scene raw value")
    pa.add_argument("--sweep-out", help="weight sweep CSV path "
                    "(default: residual CSV path with _sweep suffix)")
    _add_report_flags(pa)
    pa.set_defaults(func=cmd_analyze)

    ph = sub.add_parser(
        "hist",
        help="intensity histogram of one image",
        description="CSV columns: bin_index, bin_lo, bin_hi, count. The first line is a "
        "'#' comment with mean and p10/p50/p90 quantiles.",
    )
    ph.add_argument("--input", required=True, help="image path")
    ph.add_argument("--bins", type=int, default=64)
    ph.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    _add_report_flags(ph)
    ph.set_defaults(func=cmd_hist)

    pe = sub.add_parser(
        "eval",
        help="PSNR/SSIM between paired directories",
        description="CSV columns: name, psnr, ssim. Files are paired by identical name; "
        "a trailing 'mean' row averages all pairs.",
    )
    pe.add_argument("--pred", required=True, help="directory of predictions")
    pe.add_argument("--gt", required=True, help="directory of ground truth images")
    pe.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    _add_report_flags(pe)
    pe.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ImageReadError, ValueError) as exc:
        print(f"flarekit: error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except OSError as exc:
        print(f"flarekit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    app()
