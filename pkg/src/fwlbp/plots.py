"""Matplotlib figure rendering for the report paths.

Every eval output directory gets PNG figures next to the JSON/CSV files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_invariance(rows, path):
    """Grouped bars of chi-square distances, one panel per transform."""
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, kind, unit in ((axes[0], "scale", "factor"), (axes[1], "rotation", "degrees")):
        subset = [r for r in rows if r["transform"] == kind]
        params = [r["param"] for r in subset]
        x = np.arange(len(subset))
        width = 0.38
        ax.bar(x - width / 2, [r["chi2_fwlbp"] for r in subset], width, label="FWLBP")
        ax.bar(x + width / 2, [r["chi2_lbp"] for r in subset], width, label="LBP")
        ax.set_xticks(x)
        ax.set_xticklabels([f"{p:g}" for p in params], rotation=45)
        ax.set_xlabel(unit)
        ax.set_ylabel(r"$\chi^2$ distance")
        ax.set_title(f"{kind} invariance")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_confusion(confusion, class_names, path):
    confusion = np.asarray(confusion)
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(confusion, cmap="Blues")
    ax.set_xticks(range(len(class_names)))
    ax.set_yticks(range(len(class_names)))
    ax.set_xticklabels(class_names, rotation=45, ha="right")
    ax.set_yticklabels(class_names)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    for i in range(confusion.shape[0]):
        for j in range(confusion.shape[1]):
            ax.text(j, i, str(confusion[i, j]), ha="center", va="center",
                    color="white" if confusion[i, j] > confusion.max() / 2 else "black")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_accuracy_sweep(xs, accuracies, xlabel, path, title=""):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, [100.0 * a for a in accuracies], marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("mean CV accuracy (%)")
    ax.set_ylim(0, 105)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
