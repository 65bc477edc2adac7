"""Figure generation from neck CLI output files.

This package never computes any geometry itself: every figure is drawn
from the CSV/JSON artifacts the ``neck`` command writes.
"""

from .figures import FigureSpec, SchemaError, load_table, render

__version__ = "0.1.0"
