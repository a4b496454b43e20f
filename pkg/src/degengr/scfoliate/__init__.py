"""Schwarz-Christoffel maps of the strip ``0 <= Im z <= 1`` onto polygons,
and foliations of the polygon by images of horizontal lines."""
from .config import PRESETS, StripConfig, preset, trivial_config, validate_config
from .mapping import (
    DELTA,
    TOL,
    Polyline,
    PolylineSet,
    PolygonVertex,
    end_limit,
    foliation,
    integration_path,
    interior_angles,
    polygon_vertices,
    sc_integrand,
    sc_map,
    sc_map_along,
)
from .render import render, render_csv, render_svg

__all__ = [
    "DELTA", "PRESETS", "TOL", "Polyline", "PolylineSet", "PolygonVertex", "StripConfig",
    "end_limit", "foliation", "integration_path", "interior_angles", "polygon_vertices",
    "preset", "render", "render_csv", "render_svg", "sc_integrand", "sc_map", "sc_map_along",
    "trivial_config", "validate_config",
]
