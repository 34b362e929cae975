"""Render shapecurrents experiment artifacts (CSV/JSON) into figures."""

from .spec import KIND_FOR_PRESET, FIGURE_KINDS, FigureSpec, SpecError
from .render import render

__all__ = ["FigureSpec", "FIGURE_KINDS", "KIND_FOR_PRESET", "SpecError",
           "render"]
