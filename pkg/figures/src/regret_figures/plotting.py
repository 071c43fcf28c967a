"""Regret-curve rendering from the simulation harness's CSV output.

Input files follow the schema
``scenario,policy,round,mean_regret,stderr,replications``; each policy
becomes one mean curve with a shaded band of plus/minus one standard
error. A panel column (usually ``scenario``) splits the data into
side-by-side subplots, which is how a parameter sweep such as the Pareto
tail exponents is laid out. Rendering never touches the input files.
"""

from __future__ import annotations

import math
import os
import zlib
from dataclasses import dataclass
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd

__all__ = ["MalformedCSVError", "FigureSpec", "load_results", "render", "plot_regret"]

REQUIRED_COLUMNS = ("scenario", "policy", "round", "mean_regret", "stderr", "replications")

# One fixed style per policy so every figure colors them identically.
POLICY_COLORS = {"ts": "tab:blue", "se": "tab:orange", "ducb1": "tab:green"}
POLICY_LABELS = {"ts": "TS", "se": "SE", "ducb1": "Delayed-UCB1"}
_FALLBACK = ("tab:red", "tab:purple", "tab:brown", "tab:pink", "tab:gray", "tab:olive", "tab:cyan")


class MalformedCSVError(ValueError):
    """An input file is missing, lacks schema columns, or fails to parse."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, policy display order, title, output image path."""

    csv_paths: tuple[str, ...]
    out_path: str
    policies: tuple[str, ...] | None = None
    title: str | None = None
    panel_by: str | None = None


def _policy_color(name: str) -> str:
    return POLICY_COLORS.get(name, _FALLBACK[zlib.crc32(name.encode()) % len(_FALLBACK)])


def _policy_label(name: str) -> str:
    return POLICY_LABELS.get(name, name)


def load_results(paths: Sequence[str]) -> pd.DataFrame:
    """Read and validate harness CSVs, concatenated into one frame."""
    if not paths:
        raise MalformedCSVError("no input CSVs given")
    frames = []
    for path in paths:
        try:
            frame = pd.read_csv(path)
        except FileNotFoundError as exc:
            raise MalformedCSVError(f"input CSV not found: {path}") from exc
        except Exception as exc:
            raise MalformedCSVError(f"cannot parse {path}: {exc}") from exc
        missing = set(REQUIRED_COLUMNS) - set(frame.columns)
        if missing:
            raise MalformedCSVError(f"{path} lacks required columns: {sorted(missing)}")
        if frame.empty:
            raise MalformedCSVError(f"{path} has no data rows")
        for column in ("round", "mean_regret", "stderr", "replications"):
            converted = pd.to_numeric(frame[column], errors="coerce")
            if converted.isna().any():
                raise MalformedCSVError(f"{path}: non-numeric values in column {column!r}")
            frame[column] = converted
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def render(spec: FigureSpec):
    """Build the matplotlib figure for a spec (caller owns closing it)."""
    data = load_results(spec.csv_paths)

    if spec.panel_by is not None:
        if spec.panel_by not in data.columns:
            raise MalformedCSVError(f"panel column {spec.panel_by!r} not in the data")
        panels = [(str(v), g) for v, g in data.groupby(spec.panel_by, sort=True)]
    else:
        panels = [(None, data)]

    policies = spec.policies or tuple(dict.fromkeys(data["policy"]))
    known = set(data["policy"])
    unknown = [p for p in policies if p not in known]
    if unknown:
        raise MalformedCSVError(f"policies {unknown} absent from the data")

    ncols = min(len(panels), 3)
    nrows = math.ceil(len(panels) / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.0 * ncols, 3.8 * nrows), squeeze=False, sharey=True
    )
    flat = axes.ravel()
    for ax in flat[len(panels):]:
        ax.set_visible(False)

    for ax, (panel_name, group) in zip(flat, panels):
        for policy in policies:
            rows = group[group["policy"] == policy].sort_values("round")
            if rows.empty:
                continue
            color = _policy_color(policy)
            ax.plot(rows["round"], rows["mean_regret"], color=color, label=_policy_label(policy))
            ax.fill_between(
                rows["round"],
                rows["mean_regret"] - rows["stderr"],
                rows["mean_regret"] + rows["stderr"],
                color=color,
                alpha=0.25,
                linewidth=0,
            )
        ax.set_xlabel("round")
        ax.set_ylabel("cumulative regret")
        if panel_name is not None:
            ax.set_title(panel_name)
    flat[0].legend()
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def plot_regret(spec: FigureSpec) -> str:
    """Render the spec and write the image; return the image path."""
    fig = render(spec)
    try:
        out_dir = os.path.dirname(spec.out_path)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)
    return spec.out_path
