"""Aritmética exata em ℚ e em extensões quadráticas reais ℚ(√d).

Todo comprimento, ponto de quebra e medida do recimap é um `Scalar`, de modo que
qualquer comparação feita pela dinâmica é decidível. Os valores são imutáveis e
canonicalizados após cada operação.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Union

import mpmath
from sympy import factorint

from .exceptions import FieldMismatchError, ScalarParseError

Rational = Union[int, Fraction]

# rational := ['-'] digits ['/' digits]
# unsigned := digits ['/' digits]
# scalar   := rational [('+'|'-') unsigned '*sqrt(' digits ')']
_UNSIGNED = r"\d+(?:/\d+)?"
_RATIONAL = rf"-?{_UNSIGNED}"
SCALAR_PATTERN = re.compile(
    rf"^\s*(?P<a>{_RATIONAL})"
    rf"(?:\s*(?P<sign>[+-])\s*(?P<b>{_UNSIGNED})\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


class Comparison(str, Enum):
    """Resultado de uma comparação exata."""

    LT = "LT"
    EQ = "EQ"
    GT = "GT"


@lru_cache(maxsize=None)
def is_squarefree(d: int) -> bool:
    """Verifica se `d >= 2` é livre de quadrados."""
    if d < 2:
        return False
    return all(exponent == 1 for exponent in factorint(d).values())


def _join_fields(d1: int, d2: int) -> int:
    """Retorna o corpo comum de dois escalares (promovendo racionais)."""
    if d1 == d2 or d2 == 0:
        return d1
    if d1 == 0:
        return d2
    raise FieldMismatchError(f"Corpos incompatíveis: Q(sqrt({d1})) e Q(sqrt({d2}))")


def _sign(a: Fraction, b: Fraction, d: int) -> int:
    """Sinal exato de a + b·√d."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # Sinais opostos: a² ≠ b²d pois √d é irracional
    return sa if a * a > b * b * d else sb


@total_ordering
class Scalar:
    """Elemento exato a + b·√d de ℚ ou de ℚ(√d).

    Forma canônica: `b == 0` implica `d == 0`, de modo que racionais não pertencem
    a nenhum corpo específico e são promovidos livremente.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a: Rational | str = 0, b: Rational = 0, d: int = 0) -> None:
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError(f"Radicando negativo: {d}")
        if b == 0:
            d = 0
        elif d == 0:
            raise ValueError("Coeficiente irracional não nulo exige d > 0")
        elif not is_squarefree(d):
            raise ValueError(f"Radicando {d} deve ser livre de quadrados e diferente de 1")
        self._a = a
        self._b = b
        self._d = d

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> Scalar:
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d if b else 0
        return obj

    @classmethod
    def coerce(cls, value: Scalar | Rational) -> Scalar:
        """Converte inteiros e frações em `Scalar`."""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(Fraction(value), Fraction(0), 0)
        raise TypeError(f"Não é possível converter {type(value).__name__} em Scalar")

    @staticmethod
    def _other(value: object) -> Scalar | None:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar._raw(Fraction(value), Fraction(0), 0)
        return None

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def sign(self) -> int:
        """Retorna -1, 0 ou 1."""
        return _sign(self._a, self._b, self._d)

    def conjugate(self) -> Scalar:
        return Scalar._raw(self._a, -self._b, self._d)

    def inverse(self) -> Scalar:
        """Inverso multiplicativo exato."""
        if not self:
            raise ZeroDivisionError("Divisão por zero em Scalar")
        norm = self._a * self._a - self._b * self._b * self._d
        return Scalar._raw(self._a / norm, -self._b / norm, self._d)

    def to_mpf(self, prec: int = 128) -> mpmath.mpf:
        """Avaliação em ponto flutuante de alta precisão (bits)."""
        with mpmath.workprec(prec):
            value = mpmath.mpf(self._a.numerator) / self._a.denominator
            if self._b:
                value += mpmath.mpf(self._b.numerator) / self._b.denominator * mpmath.sqrt(self._d)
            return +value

    def __float__(self) -> float:
        if not self._b:
            return float(self._a)
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __neg__(self) -> Scalar:
        return Scalar._raw(-self._a, -self._b, self._d)

    def __pos__(self) -> Scalar:
        return self

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    def __add__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = _join_fields(self._d, o._d)
        return Scalar._raw(self._a + o._a, self._b + o._b, d)

    __radd__ = __add__

    def __sub__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = _join_fields(self._d, o._d)
        return Scalar._raw(self._a - o._a, self._b - o._b, d)

    def __rsub__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = _join_fields(self._d, o._d)
        if not self._b and not o._b:
            return Scalar._raw(self._a * o._a, Fraction(0), 0)
        return Scalar._raw(
            self._a * o._a + self._b * o._b * d,
            self._a * o._b + self._b * o._a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o._b:
            if not o._a:
                raise ZeroDivisionError("Divisão por zero em Scalar")
            return Scalar._raw(self._a / o._a, self._b / o._a, self._d)
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> Scalar:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int) -> Scalar:
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        n = abs(exponent)
        result = Scalar._raw(Fraction(1), Fraction(0), 0)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __lt__(self, other: object) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        d = _join_fields(self._d, o._d)
        return _sign(self._a - o._a, self._b - o._b, d) < 0

    def __hash__(self) -> int:
        if not self._b:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __repr__(self) -> str:
        return f"Scalar('{format_scalar(self)}')"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)


def compare(x: Scalar | Rational, y: Scalar | Rational) -> Comparison:
    """Compara dois escalares exatamente.

    Raises:
        FieldMismatchError: Se os escalares vivem em extensões distintas
    """
    x = Scalar.coerce(x)
    y = Scalar.coerce(y)
    sign = (x - y).sign()
    if sign < 0:
        return Comparison.LT
    if sign > 0:
        return Comparison.GT
    return Comparison.EQ


def is_rational(x: Scalar | Rational) -> bool:
    """Retorna True se `x` pertence a ℚ (forma canônica com b = 0)."""
    return Scalar.coerce(x).is_rational


def common_field(values: Iterable[Scalar | Rational]) -> int:
    """Retorna o radicando comum de uma coleção de escalares (0 se todos racionais)."""
    d = 0
    for value in values:
        d = _join_fields(d, Scalar.coerce(value).d)
    return d


def format_scalar(x: Scalar | Rational) -> str:
    """Formata um escalar na gramática textual canônica."""
    x = Scalar.coerce(x)
    head = str(x.a)
    if not x.b:
        return head
    sign = "+" if x.b > 0 else "-"
    return f"{head}{sign}{abs(x.b)}*sqrt({x.d})"


def parse_scalar(text: str) -> Scalar:
    """Lê um escalar da forma `a` ou `a±b*sqrt(d)`.

    Args:
        text: Texto na gramática de escalares

    Returns:
        Escalar canônico

    Raises:
        ScalarParseError: Se o texto for malformado ou o radicando não for livre de quadrados
    """
    match = SCALAR_PATTERN.match(text)
    if match is None:
        raise ScalarParseError(f"Escalar malformado: {text!r}")
    try:
        a = Fraction(match["a"])
        if match["b"] is None:
            return Scalar._raw(a, Fraction(0), 0)
        b = Fraction(match["b"])
    except ZeroDivisionError:
        raise ScalarParseError(f"Denominador zero em {text!r}") from None
    if match["sign"] == "-":
        b = -b
    d = int(match["d"])
    if not is_squarefree(d):
        raise ScalarParseError(f"Radicando {d} deve ser livre de quadrados e maior que 1: {text!r}")
    return Scalar._raw(a, b, d)
