"""Diagramas em linhas: domínios em cima, imagens embaixo, sombreamento por ramo."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..models import ReturnMapResult
from ..numeric import Scalar, format_scalar
from ..pamap import Interval, IntervalSet, PAMap
from ..systems import ReciprocalSystem, default_labels
from .base import BaseFigure, SvgCanvas, fmt, shade

MARGIN = 30


@dataclass(frozen=True)
class Segment:
    interval: Interval
    label: str
    color: str


def _labels_for(count: int, labels: Optional[Sequence[str]]) -> list[str]:
    if count > 26:
        raise ValueError(f"No máximo 26 ramos podem ser rotulados, recebidos {count}")
    labels = list(labels or ())
    return labels + list(default_labels(count))[len(labels):]


def _extent_of(*sets: IntervalSet) -> Interval:
    intervals = [interval for E in sets for interval in E]
    return Interval(min(i.lo for i in intervals), max(i.hi for i in intervals))


class RowFigure(BaseFigure):
    """Figura com linhas horizontais de segmentos sobre um mesmo intervalo `extent`.

    Regiões de `extent` não cobertas por uma linha são tracejadas.
    """

    def __init__(
        self,
        title: str,
        rows: Sequence[Sequence[Segment]],
        extent: Interval,
        width: int = 700,
        height: int = 200,
    ):
        self._title = title
        self._rows = [list(row) for row in rows]
        self._extent = extent
        self._width = width
        self._height = height

    @property
    def name(self) -> str:
        return self._title

    @property
    def size(self) -> tuple[int, int]:
        return self._width, self._height

    def x(self, value: Scalar) -> float:
        fraction = (value - self._extent.lo) / self._extent.measure
        return MARGIN + float(fraction) * (self._width - 2 * MARGIN)

    def y(self, row: int) -> float:
        if len(self._rows) == 1:
            return self._height / 2
        return MARGIN + row * (self._height - 2 * MARGIN) / (len(self._rows) - 1)

    def draw(self, canvas: SvgCanvas) -> None:
        last = len(self._rows) - 1
        for index, row in enumerate(self._rows):
            y = self.y(index)
            label_dy = -10 if index < last else 20
            covered = IntervalSet(tuple(segment.interval for segment in row))
            for gap in covered.complement(self._extent):
                canvas.line(
                    self.x(gap.lo), y, self.x(gap.hi), y,
                    width=1.5, dashed=True,
                    attrs={"class": "missing", "data-lo": format_scalar(gap.lo), "data-hi": format_scalar(gap.hi)},
                )
            for segment in row:
                lo, hi = segment.interval.lo, segment.interval.hi
                canvas.line(
                    self.x(lo), y, self.x(hi), y,
                    stroke=segment.color, width=6,
                    attrs={
                        "class": f"row-{index}",
                        "data-label": segment.label,
                        "data-lo": format_scalar(lo),
                        "data-hi": format_scalar(hi),
                    },
                )
                canvas.text((self.x(lo) + self.x(hi)) / 2, y + label_dy, segment.label)
            points = sorted({p for segment in row for p in (segment.interval.lo, segment.interval.hi)})
            for point in points:
                canvas.line(
                    self.x(point), y - 5, self.x(point), y + 5,
                    attrs={"class": f"tick row-{index}", "data-value": fmt(float(point))},
                )


def two_row_figure(
    m: PAMap,
    labels: Optional[Sequence[str]] = None,
    extent: Optional[Interval] = None,
    title: str = "",
    width: int = 700,
    height: int = 200,
) -> RowFigure:
    names = _labels_for(len(m), labels)
    extent = extent or _extent_of(m.domain_support, m.image_support)
    top = [Segment(b.domain, names[i], shade(i)) for i, b in enumerate(m.branches)]
    bottom = [Segment(b.image, names[i], shade(i)) for i, b in enumerate(m.branches)]
    return RowFigure(title or "mapa", [top, bottom], extent, width, height)


def render_two_row(
    m: PAMap,
    labels: Optional[Sequence[str]] = None,
    extent: Optional[Interval] = None,
    title: str = "",
    width: int = 700,
    height: int = 200,
) -> str:
    """Desenha um mapa afim por partes com domínios em cima e imagens embaixo.

    Args:
        m: Mapa com no máximo 26 ramos
        labels: Rótulos por ramo (padrão A, B, C, ...)
        extent: Intervalo desenhado (padrão envoltória de domínio e imagem)
        title: Título do documento
        width: Largura em pixels
        height: Altura em pixels

    Returns:
        Documento SVG
    """
    return two_row_figure(m, labels, extent, title, width, height).render()


def _branch_labels(system: ReciprocalSystem) -> list[str]:
    """Rótulo de cada ramo de F pelos intervalos de T que ele cobre."""
    names = []
    for branch in system.F.branches:
        covering = [
            label
            for label, domain in zip(system.labels, system.iet.domains)
            if domain.intersect(branch.domain) is not None
        ]
        names.append("".join(covering))
    return names


def render_composition(system: ReciprocalSystem, width: int = 700, height: int = 300) -> str:
    """Desenha F = Φ∘T em três linhas: domínios, imagens por T e imagens por F."""
    names = _branch_labels(system)
    rows: list[list[Segment]] = [[], [], []]
    for i, branch in enumerate(system.F.branches):
        color = shade(i)
        t_image = system.T.image_set(branch.domain)
        rows[0].append(Segment(branch.domain, names[i], color))
        rows[1].extend(Segment(piece, names[i], color) for piece in t_image)
        rows[2].append(Segment(branch.image, names[i], color))
    return RowFigure(system.name or "composição", rows, Interval(0, 1), width, height).render()


def render_first_return(
    result: ReturnMapResult,
    labels: Optional[Sequence[str]] = None,
    width: int = 700,
    height: int = 200,
) -> str:
    """Desenha F_S sobre S; partes de S fora da imagem aparecem tracejadas."""
    return render_two_row(result.as_map, labels, extent=result.S, title="F_S", width=width, height=height)
