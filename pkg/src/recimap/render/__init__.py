"""Figuras SVG do recimap."""

from .base import PALETTE, BaseFigure, SvgCanvas
from .maharam import MaharamFigure, render_maharam
from .suspension import SuspensionData, SuspensionFigure, render_suspension
from .two_row import RowFigure, Segment, render_composition, render_first_return, render_two_row

__all__ = [
    "PALETTE",
    "BaseFigure",
    "SvgCanvas",
    "MaharamFigure",
    "render_maharam",
    "SuspensionData",
    "SuspensionFigure",
    "render_suspension",
    "RowFigure",
    "Segment",
    "render_composition",
    "render_first_return",
    "render_two_row",
]
