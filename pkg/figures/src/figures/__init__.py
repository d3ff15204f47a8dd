from .plot import (
    DEFAULT_BOUND,
    FigureInputError,
    PlotSpec,
    load_overlay,
    log_ratios,
    ratio_colors,
    render_scatter,
)

__all__ = [
    "DEFAULT_BOUND",
    "FigureInputError",
    "PlotSpec",
    "load_overlay",
    "log_ratios",
    "ratio_colors",
    "render_scatter",
]
