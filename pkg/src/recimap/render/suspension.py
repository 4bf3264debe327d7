"""Polígono de suspensão de uma IET a partir de um vetor complexo ζ."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..exceptions import SuspensionError
from ..numeric import ZERO, Scalar, format_scalar
from ..systems import IETSpec, default_labels
from .base import BaseFigure, SvgCanvas, shade

MARGIN = 30

Complex = tuple[Scalar, Scalar]


def _add(p: Complex, q: Complex) -> Complex:
    return (p[0] + q[0], p[1] + q[1])


def _partial_sums(vectors: Sequence[Complex]) -> list[Complex]:
    points: list[Complex] = [(ZERO, ZERO)]
    for vector in vectors:
        points.append(_add(points[-1], vector))
    return points


def shoelace(points: Sequence[Complex]) -> Scalar:
    """Dobro da área orientada do polígono, exata."""
    total = ZERO
    for (x1, y1), (x2, y2) in zip(points, [*points[1:], points[0]]):
        total = total + x1 * y2 - x2 * y1
    return total


@dataclass(frozen=True)
class SuspensionData:
    """IET e vetor ζ com Re(ζᵢ) igual ao comprimento do intervalo i.

    Admissibilidade: somas parciais interiores de Im(ζ) estritamente positivas
    na linha de cima (ordem do domínio) e estritamente negativas na de baixo
    (ordem da imagem), com área do polígono positiva.
    """

    iet: IETSpec
    zeta: tuple[Complex, ...]

    def __post_init__(self) -> None:
        zeta = tuple((Scalar.coerce(re), Scalar.coerce(im)) for re, im in self.zeta)
        object.__setattr__(self, "zeta", zeta)
        if len(zeta) != self.iet.size:
            raise SuspensionError(f"ζ tem {len(zeta)} entradas para {self.iet.size} intervalos")
        for index, ((re, _), length) in enumerate(zip(zeta, self.iet.lengths)):
            if re != length:
                raise SuspensionError(f"Re(ζ[{index}]) = {re} difere do comprimento {length}")
        for j, (_, im) in enumerate(self.top[1:-1], start=1):
            if im.sign() <= 0:
                raise SuspensionError(f"Soma parcial {j} da linha de cima não é positiva: {im}")
        for j, (_, im) in enumerate(self.bottom[1:-1], start=1):
            if im.sign() >= 0:
                raise SuspensionError(f"Soma parcial {j} da linha de baixo não é negativa: {im}")
        if shoelace(self.polygon).sign() <= 0:
            raise SuspensionError("Polígono de suspensão degenerado (área não positiva)")

    @property
    def top(self) -> list[Complex]:
        """Vértices da linha de cima, em ordem do domínio."""
        return _partial_sums(self.zeta)

    @property
    def bottom_order(self) -> list[int]:
        return sorted(range(self.iet.size), key=lambda i: self.iet.permutation[i])

    @property
    def bottom(self) -> list[Complex]:
        """Vértices da linha de baixo, com ζ permutado pela troca."""
        return _partial_sums([self.zeta[i] for i in self.bottom_order])

    @property
    def polygon(self) -> list[Complex]:
        """Polígono em sentido anti-horário: linha de baixo e linha de cima invertida."""
        return [*self.bottom, *reversed(self.top[1:-1])]


class SuspensionFigure(BaseFigure):
    def __init__(
        self,
        data: SuspensionData,
        labels: Sequence[str] = (),
        title: str = "suspensão",
        width: int = 700,
        height: int = 400,
    ):
        self.data = data
        self.labels = list(labels) or list(default_labels(data.iet.size))
        self._title = title
        self._width = width
        self._height = height

    @property
    def name(self) -> str:
        return self._title

    @property
    def size(self) -> tuple[int, int]:
        return self._width, self._height

    def draw(self, canvas: SvgCanvas) -> None:
        top = [(float(x), float(y)) for x, y in self.data.top]
        bottom = [(float(x), float(y)) for x, y in self.data.bottom]
        xs = [x for x, _ in top + bottom]
        ys = [y for _, y in top + bottom]
        span = max(max(xs) - min(xs), max(ys) - min(ys))
        scale = min(self._width - 2 * MARGIN, self._height - 2 * MARGIN) / span

        def project(point: tuple[float, float]) -> tuple[float, float]:
            return MARGIN + (point[0] - min(xs)) * scale, self._height - MARGIN - (point[1] - min(ys)) * scale

        polygon = [project((float(x), float(y))) for x, y in self.data.polygon]
        canvas.polygon(polygon, fill="#f2f2f2", stroke="none", attrs={"class": "surface"})

        order = self.data.bottom_order
        for index in range(self.data.iet.size):
            color = shade(index)
            label = self.labels[index]
            re, im = self.data.zeta[index]
            attrs = {"data-label": label, "data-zeta": f"{format_scalar(re)};{format_scalar(im)}"}
            start, end = project(top[index]), project(top[index + 1])
            canvas.line(*start, *end, stroke=color, width=3, attrs={"class": "edge-top", **attrs})
            canvas.text((start[0] + end[0]) / 2, (start[1] + end[1]) / 2 - 8, label)
            position = order.index(index)
            start, end = project(bottom[position]), project(bottom[position + 1])
            canvas.line(*start, *end, stroke=color, width=3, attrs={"class": "edge-bottom", **attrs})
            canvas.text((start[0] + end[0]) / 2, (start[1] + end[1]) / 2 + 16, label)


def render_suspension(
    data: SuspensionData,
    labels: Sequence[str] = (),
    width: int = 700,
    height: int = 400,
) -> str:
    """Desenha o polígono de suspensão; segmentos identificados compartilham cor e rótulo."""
    return SuspensionFigure(data, labels, width=width, height=height).render()
