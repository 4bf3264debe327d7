"""Mapas afins por partes injetivos entre uniões finitas de intervalos semiabertos.

Convenção: todo intervalo é semiaberto `[lo, hi)`; um ponto de quebra pertence
ao ramo da direita.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Union

from .exceptions import SupportError
from .numeric import ONE, ZERO, Rational, Scalar


@dataclass(frozen=True)
class Interval:
    """Intervalo semiaberto [lo, hi) com lo < hi."""

    lo: Scalar
    hi: Scalar

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Scalar.coerce(self.lo))
        object.__setattr__(self, "hi", Scalar.coerce(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"Intervalo vazio ou invertido: [{self.lo}, {self.hi})")

    @property
    def measure(self) -> Scalar:
        return self.hi - self.lo

    def contains(self, x: Scalar | Rational) -> bool:
        return self.lo <= x < self.hi

    def contains_interval(self, other: Interval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: Interval) -> Optional[Interval]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def _merge_sorted(intervals: list[Interval]) -> tuple[Interval, ...]:
    """Une intervalos ordenados por `lo`, fundindo sobreposições e adjacências."""
    merged: list[Interval] = []
    for interval in intervals:
        if merged and interval.lo <= merged[-1].hi:
            last = merged[-1]
            if interval.hi > last.hi:
                merged[-1] = Interval(last.lo, interval.hi)
        else:
            merged.append(interval)
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet:
    """União finita normalizada de intervalos disjuntos e não adjacentes."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        ordered = sorted(self.intervals, key=lambda interval: interval.lo)
        object.__setattr__(self, "intervals", _merge_sorted(ordered))

    @classmethod
    def _trusted(cls, intervals: Iterable[Interval]) -> IntervalSet:
        """Constrói a partir de intervalos já normalizados."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "intervals", tuple(intervals))
        return obj

    @classmethod
    def of(cls, *intervals: Interval) -> IntervalSet:
        return cls(tuple(intervals))

    @classmethod
    def from_bounds(cls, *bounds: tuple[Scalar | Rational, Scalar | Rational]) -> IntervalSet:
        return cls(tuple(Interval(lo, hi) for lo, hi in bounds))

    @classmethod
    def empty(cls) -> IntervalSet:
        return cls._trusted(())

    @cached_property
    def measure(self) -> Scalar:
        total = ZERO
        for interval in self.intervals:
            total = total + interval.measure
        return total

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __str__(self) -> str:
        if not self.intervals:
            return "∅"
        return " ∪ ".join(str(interval) for interval in self.intervals)

    def contains_point(self, x: Scalar | Rational) -> bool:
        x = Scalar.coerce(x)
        index = bisect_right([interval.lo for interval in self.intervals], x) - 1
        return index >= 0 and x < self.intervals[index].hi

    def union(self, other: IntervalSet) -> IntervalSet:
        return IntervalSet(self.intervals + other.intervals)

    def intersection(self, other: IntervalSet) -> IntervalSet:
        result: list[Interval] = []
        left, right = self.intervals, other.intervals
        i = j = 0
        while i < len(left) and j < len(right):
            lo = max(left[i].lo, right[j].lo)
            hi = min(left[i].hi, right[j].hi)
            if lo < hi:
                result.append(Interval(lo, hi))
            if left[i].hi < right[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet._trusted(result)

    def intersect_interval(self, interval: Interval) -> IntervalSet:
        return self.intersection(IntervalSet._trusted((interval,)))

    def difference(self, other: IntervalSet) -> IntervalSet:
        result: list[Interval] = []
        removed = other.intervals
        j = 0
        for interval in self.intervals:
            lo = interval.lo
            while j < len(removed) and removed[j].hi <= lo:
                j += 1
            k = j
            while k < len(removed) and removed[k].lo < interval.hi:
                if removed[k].lo > lo:
                    result.append(Interval(lo, removed[k].lo))
                if removed[k].hi > lo:
                    lo = removed[k].hi
                if lo >= interval.hi:
                    break
                k += 1
            if lo < interval.hi:
                result.append(Interval(lo, interval.hi))
        return IntervalSet._trusted(result)

    def complement(self, within: Interval) -> IntervalSet:
        return IntervalSet._trusted((within,)).difference(self)

    def issubset(self, other: IntervalSet) -> bool:
        return self.difference(other).is_empty

    def isdisjoint(self, other: IntervalSet) -> bool:
        return self.intersection(other).is_empty


SetLike = Union[Interval, IntervalSet]


def as_interval_set(value: SetLike) -> IntervalSet:
    if isinstance(value, Interval):
        return IntervalSet._trusted((value,))
    return value


@dataclass(frozen=True)
class AffineBranch:
    """Ramo afim x ↦ slope·x + offset definido em `domain`, com slope > 0."""

    domain: Interval
    slope: Scalar
    offset: Scalar

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", Scalar.coerce(self.slope))
        object.__setattr__(self, "offset", Scalar.coerce(self.offset))
        if self.slope.sign() <= 0:
            raise ValueError(f"Inclinação deve ser positiva: {self.slope}")

    @cached_property
    def image(self) -> Interval:
        return Interval(self.apply(self.domain.lo), self.apply(self.domain.hi))

    def apply(self, x: Scalar | Rational) -> Scalar:
        return self.slope * x + self.offset

    def apply_inverse(self, y: Scalar | Rational) -> Scalar:
        return (Scalar.coerce(y) - self.offset) / self.slope

    def map_interval(self, interval: Interval) -> Interval:
        return Interval(self.apply(interval.lo), self.apply(interval.hi))

    def restrict(self, interval: Interval) -> AffineBranch:
        return AffineBranch(interval, self.slope, self.offset)

    def inverse(self) -> AffineBranch:
        return AffineBranch(self.image, self.slope.inverse(), -self.offset / self.slope)

    def after(self, inner: AffineBranch, domain: Interval) -> AffineBranch:
        """Retorna self ∘ inner restrito a `domain`."""
        return AffineBranch(domain, self.slope * inner.slope, self.slope * inner.offset + self.offset)

    def same_formula(self, other: AffineBranch) -> bool:
        return self.slope == other.slope and self.offset == other.offset


def _normalize_branches(branches: list[AffineBranch]) -> tuple[AffineBranch, ...]:
    """Funde ramos adjacentes com a mesma fórmula afim."""
    merged: list[AffineBranch] = []
    for branch in branches:
        if merged:
            last = merged[-1]
            if last.domain.hi == branch.domain.lo and last.same_formula(branch):
                merged[-1] = last.restrict(Interval(last.domain.lo, branch.domain.hi))
                continue
        merged.append(branch)
    return tuple(merged)


class PAMap:
    """Mapa afim por partes injetivo, com ramos ordenados por `domain.lo`.

    A igualdade é a igualdade das sequências normalizadas de ramos, o que torna
    decidíveis testes como Φ² = id.
    """

    def __init__(self, branches: Iterable[AffineBranch]):
        ordered = sorted(branches, key=lambda branch: branch.domain.lo)
        for previous, current in zip(ordered, ordered[1:]):
            if current.domain.lo < previous.domain.hi:
                raise ValueError(f"Domínios sobrepostos: {previous.domain} e {current.domain}")
        images = sorted((branch.image for branch in ordered), key=lambda interval: interval.lo)
        for previous, current in zip(images, images[1:]):
            if current.lo < previous.hi:
                raise ValueError(f"Mapa não injetivo: imagens {previous} e {current} se sobrepõem")
        self._branches = _normalize_branches(ordered)
        self._los = [branch.domain.lo for branch in self._branches]
        self._inverse: Optional[PAMap] = None

    @property
    def branches(self) -> tuple[AffineBranch, ...]:
        return self._branches

    def __len__(self) -> int:
        return len(self._branches)

    def __iter__(self) -> Iterator[AffineBranch]:
        return iter(self._branches)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAMap):
            return NotImplemented
        return self._branches == other._branches

    def __hash__(self) -> int:
        return hash(self._branches)

    def __repr__(self) -> str:
        parts = ", ".join(f"{b.domain}→{b.image} (×{b.slope})" for b in self._branches)
        return f"PAMap({parts})"

    @cached_property
    def domain_support(self) -> IntervalSet:
        return IntervalSet(tuple(branch.domain for branch in self._branches))

    @cached_property
    def image_support(self) -> IntervalSet:
        return IntervalSet(tuple(branch.image for branch in self._branches))

    @cached_property
    def breakpoints(self) -> tuple[Scalar, ...]:
        """Extremos dos domínios dos ramos, em ordem crescente."""
        points: list[Scalar] = []
        for branch in self._branches:
            if not points or points[-1] != branch.domain.lo:
                points.append(branch.domain.lo)
            points.append(branch.domain.hi)
        return tuple(points)

    def branch_index(self, x: Scalar | Rational) -> int:
        """Índice do ramo que contém `x`.

        Raises:
            SupportError: Se `x` estiver fora do domínio
        """
        x = Scalar.coerce(x)
        index = bisect_right(self._los, x) - 1
        if index < 0 or not x < self._branches[index].domain.hi:
            raise SupportError(f"Ponto {x} fora do domínio do mapa")
        return index

    def branch_at(self, x: Scalar | Rational) -> AffineBranch:
        return self._branches[self.branch_index(x)]

    def apply(self, x: Scalar | Rational) -> Scalar:
        return self.branch_at(x).apply(x)

    def slope_at(self, x: Scalar | Rational) -> Scalar:
        """Derivada de Radon-Nikodym do mapa em `x`."""
        return self.branch_at(x).slope

    def overlapping(self, interval: Interval) -> Iterator[AffineBranch]:
        start = max(bisect_right(self._los, interval.lo) - 1, 0)
        for branch in self._branches[start:]:
            if not branch.domain.lo < interval.hi:
                break
            if branch.domain.hi > interval.lo:
                yield branch

    def compose(self, inner: PAMap) -> PAMap:
        """Retorna self ∘ inner.

        Raises:
            SupportError: Se a imagem de `inner` não estiver contida no domínio de self
        """
        if not inner.image_support.issubset(self.domain_support):
            raise SupportError("Imagem do mapa interno não está contida no domínio do externo")
        pieces: list[AffineBranch] = []
        for branch in inner.branches:
            image = branch.image
            for outer in self.overlapping(image):
                lo = max(image.lo, outer.domain.lo)
                hi = min(image.hi, outer.domain.hi)
                domain = Interval(branch.apply_inverse(lo), branch.apply_inverse(hi))
                pieces.append(outer.after(branch, domain))
        return PAMap(pieces)

    def invert(self) -> PAMap:
        if self._inverse is None:
            self._inverse = PAMap(branch.inverse() for branch in self._branches)
            self._inverse._inverse = self
        return self._inverse

    def power(self, n: int) -> PAMap:
        """Retorna a n-ésima iterada (n = 0 dá a identidade no domínio)."""
        if n < 0:
            return self.invert().power(-n)
        result = identity_map(self.domain_support)
        base = self
        for _ in range(n):
            result = base.compose(result)
        return result

    def restrict(self, subset: SetLike) -> PAMap:
        """Restringe o mapa a um subconjunto do domínio.

        Raises:
            SupportError: Se o subconjunto não estiver contido no domínio
        """
        subset = as_interval_set(subset)
        if not subset.issubset(self.domain_support):
            raise SupportError(f"Conjunto {subset} fora do domínio do mapa")
        pieces = [
            branch.restrict(piece)
            for branch in self._branches
            for piece in subset.intersect_interval(branch.domain)
        ]
        return PAMap(pieces)

    def image_set(self, subset: SetLike) -> IntervalSet:
        """Imagem exata de um conjunto (pontos fora do domínio são ignorados)."""
        subset = as_interval_set(subset)
        pieces = [
            branch.map_interval(piece)
            for branch in self._branches
            for piece in subset.intersect_interval(branch.domain)
        ]
        return IntervalSet(tuple(pieces))

    def preimage_set(self, subset: SetLike) -> IntervalSet:
        return self.invert().image_set(subset)

    def is_bijection_on(self, interval: Interval) -> bool:
        target = IntervalSet.of(interval)
        return self.domain_support == target and self.image_support == target

    def is_measure_preserving(self) -> bool:
        return all(branch.slope == ONE for branch in self._branches)


UNIT = Interval(ZERO, ONE)


def identity_map(support: SetLike = UNIT) -> PAMap:
    """Identidade sobre um intervalo ou união de intervalos."""
    return PAMap(AffineBranch(interval, ONE, ZERO) for interval in as_interval_set(support))
