"""Figure rendering for squintsel sweep CSVs."""

from .figures import (
    Curve,
    FigureSpec,
    GapDominanceWarning,
    SchemaError,
    build_figure,
    load_curves,
    read_rows,
    render,
)

__version__ = "0.1.0"
