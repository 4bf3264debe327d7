"""Interface base e tela SVG para as figuras do recimap."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

# Escala de cinzas 25%, 50%, 75% e preto, usada ciclicamente
PALETTE = ("#bfbfbf", "#808080", "#404040", "#000000")


def shade(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def fmt(value: float) -> str:
    """Formata coordenadas com 6 casas decimais fixas."""
    return f"{value:.6f}"


def _attributes(attrs: Optional[dict[str, str]]) -> str:
    if not attrs:
        return ""
    return "".join(f" {key}={quoteattr(value)}" for key, value in attrs.items())


class SvgCanvas:
    """Acumula elementos SVG em ordem fixa e serializa um documento SVG 1.1."""

    def __init__(self, width: int, height: int, title: str = ""):
        self.width = width
        self.height = height
        self.title = title
        self._elements: list[str] = []
        self._uses_arrows = False

    def line(
        self,
        x1: float,
        y1: float,
        x2: float,
        y2: float,
        stroke: str = "#000000",
        width: float = 1.0,
        dashed: bool = False,
        arrow: bool = False,
        attrs: Optional[dict[str, str]] = None,
    ) -> None:
        extra = ' stroke-dasharray="4 3"' if dashed else ""
        if arrow:
            self._uses_arrows = True
            extra += ' marker-end="url(#arrow)"'
        self._elements.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"{extra}{_attributes(attrs)}/>'
        )

    def polyline(
        self,
        points: Sequence[tuple[float, float]],
        stroke: str = "#000000",
        width: float = 1.0,
        attrs: Optional[dict[str, str]] = None,
    ) -> None:
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self._elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}"{_attributes(attrs)}/>'
        )

    def polygon(
        self,
        points: Sequence[tuple[float, float]],
        fill: str = "none",
        stroke: str = "#000000",
        attrs: Optional[dict[str, str]] = None,
    ) -> None:
        coords = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self._elements.append(
            f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}"{_attributes(attrs)}/>'
        )

    def text(
        self,
        x: float,
        y: float,
        content: str,
        anchor: str = "middle",
        size: int = 12,
        attrs: Optional[dict[str, str]] = None,
    ) -> None:
        self._elements.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-size="{size}" text-anchor="{anchor}"'
            f"{_attributes(attrs)}>{escape(content)}</text>"
        )

    def to_svg(self) -> str:
        header = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        )
        parts = [header]
        if self.title:
            parts.append(f"<title>{escape(self.title)}</title>")
        if self._uses_arrows:
            parts.append(
                '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" '
                'markerWidth="6" markerHeight="6" orient="auto">'
                '<path d="M 0 0 L 10 5 L 0 10 z" fill="#000000"/></marker></defs>'
            )
        parts.extend(self._elements)
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


class BaseFigure(ABC):
    """Interface abstrata para figuras SVG."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Retorna o nome da figura."""
        pass

    @property
    @abstractmethod
    def size(self) -> tuple[int, int]:
        """Retorna (largura, altura) em pixels."""
        pass

    @abstractmethod
    def draw(self, canvas: SvgCanvas) -> None:
        """Desenha a figura na tela.

        Args:
            canvas: Tela SVG de destino
        """
        pass

    def render(self) -> str:
        """Gera o documento SVG completo.

        Returns:
            Texto SVG determinístico
        """
        width, height = self.size
        canvas = SvgCanvas(width, height, title=self.name)
        self.draw(canvas)
        return canvas.to_svg()
