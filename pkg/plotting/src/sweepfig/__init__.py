"""Render sweep result csv files into the standard experiment figures.

This package reads only the documented per-trial result schema (the
14-column csv the sweep harness writes) and knows nothing about the
library that produced it.
"""

from .figures import FigureSpec, SchemaError, load_results, plot_disagreement, plot_success

__version__ = "0.1.0"
