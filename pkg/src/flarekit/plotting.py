"""Figure rendering for the CLI report commands (headless matplotlib)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .color import Histogram


def save_histogram_figure(hist: Histogram, path: str | Path, title: str = "Intensity distribution"):
    fig, ax = plt.subplots(figsize=(7, 4))
    centers = (hist.edges[:-1] + hist.edges[1:]) / 2.0
    ax.bar(centers, hist.counts, width=(hist.edges[1] - hist.edges[0]) * 0.92, color="#4878cf")
    for q, style in ((hist.p10, ":"), (hist.p50, "--"), (hist.p90, ":")):
        ax.axvline(q, color="#d65f5f", linestyle=style, linewidth=1)
    ax.set_xlabel("intensity")
    ax.set_ylabel("pixel count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_residual_figure(rows: list[dict], path: str | Path):
    """Residual vs eps1 curves, one line per bright-layer value."""
    fig, ax = plt.subplots(figsize=(7, 4))
    by_b: dict[float, list[tuple[float, float]]] = {}
    for r in rows:
        by_b.setdefault(r["b_rgb"], []).append((r["eps1"], r["residual"]))
    for b_val, pts in sorted(by_b.items()):
        pts.sort()
        ax.loglog([p[0] for p in pts], [max(p[1], 1e-18) for p in pts], marker="o",
                  markersize=3, label=f"bright={b_val:g}")
    ax.set_xlabel("dim-to-bright raw ratio")
    ax.set_ylabel("absolute residual")
    ax.set_title("Convex approximation residual")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_sweep_figure(rows, path: str | Path):
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r.flare_raw for r in rows], [r.flare_weight for r in rows],
            marker=".", label="flare weight")
    ax.plot([r.flare_raw for r in rows], [r.scene_weight for r in rows],
            marker=".", label="scene weight")
    ax.set_xlabel("flare raw value")
    ax.set_ylabel("effective convex weight")
    ax.set_title("Exact-composite effective weights")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_eval_figure(rows: list[dict], path: str | Path):
    """Per-image PSNR / SSIM bars (the trailing mean row included)."""
    names = [r["name"] for r in rows]
    idx = range(len(names))
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(max(7, len(names) * 0.5), 6), sharex=True)
    ax1.bar(idx, [r["psnr"] for r in rows], color="#4878cf")
    ax1.set_ylabel("PSNR (dB)")
    ax2.bar(idx, [r["ssim"] for r in rows], color="#6acc65")
    ax2.set_ylabel("SSIM")
    ax2.set_xticks(list(idx))
    ax2.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
