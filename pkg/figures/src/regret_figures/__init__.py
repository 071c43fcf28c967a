"""Regret-figure rendering for delayed-bandit experiment CSVs."""

from .plotting import FigureSpec, MalformedCSVError, load_results, plot_regret, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "MalformedCSVError", "load_results", "plot_regret", "render"]
