"""Esquema em níveis da extensão de Maharam discreta."""

from __future__ import annotations

from ..maharam import MaharamSystem
from ..numeric import format_scalar
from .base import BaseFigure, SvgCanvas, shade
from .two_row import _branch_labels

MARGIN = 30
ROW_HEIGHT = 70


class MaharamFigure(BaseFigure):
    """Uma linha por nível n, com largura proporcional a ρ⁻ⁿ e setas para o nível n ± 1."""

    def __init__(self, maharam: MaharamSystem, levels: range, width: int = 700):
        if len(levels) == 0:
            raise ValueError("Intervalo de níveis vazio")
        self.maharam = maharam
        self.levels = levels
        self._width = width
        rho = float(maharam.rho)
        weights = {n: rho ** (-n) for n in levels}
        top = max(weights.values())
        self._scale = {n: weight / top for n, weight in weights.items()}

    @property
    def name(self) -> str:
        return f"Maharam {self.maharam.base.name}".strip()

    @property
    def size(self) -> tuple[int, int]:
        return self._width, 2 * MARGIN + len(self.levels) * ROW_HEIGHT

    def x(self, level: int, value: float) -> float:
        return MARGIN + value * self._scale[level] * (self._width - 2 * MARGIN)

    def y(self, level: int) -> float:
        return MARGIN + (self.levels[-1] - level) * ROW_HEIGHT + ROW_HEIGHT / 2

    def draw(self, canvas: SvgCanvas) -> None:
        F = self.maharam.base.F
        names = _branch_labels(self.maharam.base)
        rho = self.maharam.rho
        for level in self.levels:
            y = self.y(level)
            canvas.text(MARGIN - 6, y + 4, str(level), anchor="end", attrs={"class": "level"})
            for index, branch in enumerate(F.branches):
                lo, hi = float(branch.domain.lo), float(branch.domain.hi)
                moves_up = branch.slope == rho
                canvas.line(
                    self.x(level, lo), y, self.x(level, hi), y,
                    stroke=shade(index), width=6,
                    attrs={
                        "class": "up" if moves_up else "down",
                        "data-level": str(level),
                        "data-label": names[index],
                        "data-lo": format_scalar(branch.domain.lo),
                        "data-hi": format_scalar(branch.domain.hi),
                    },
                )
                target = level + (1 if moves_up else -1)
                if target not in self.levels:
                    continue
                image = branch.image
                source_x = self.x(level, (lo + hi) / 2)
                target_x = self.x(target, (float(image.lo) + float(image.hi)) / 2)
                offset = -8 if moves_up else 8
                canvas.line(
                    source_x, y + offset, target_x, self.y(target) - offset,
                    width=0.8, arrow=True,
                    attrs={"class": "arrow", "data-from": str(level), "data-to": str(target)},
                )


def render_maharam(
    maharam: MaharamSystem,
    levels: range = range(-1, 2),
    width: int = 700,
) -> str:
    """Desenha os níveis `levels` da extensão de Maharam com setas entre níveis."""
    return MaharamFigure(maharam, levels, width).render()
