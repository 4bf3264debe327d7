"""Construtores e validadores de IETs, involuções de escala e transformações recíprocas."""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Optional, Sequence

import numpy as np

from .exceptions import InvariantViolation
from .numeric import ONE, ZERO, Rational, Scalar, common_field
from .pamap import UNIT, AffineBranch, Interval, PAMap

logger = logging.getLogger(__name__)


def default_labels(count: int) -> tuple[str, ...]:
    """Rótulos A, B, C, ... para os intervalos de continuidade."""
    if count > len(string.ascii_uppercase):
        raise ValueError(f"No máximo {len(string.ascii_uppercase)} rótulos disponíveis, pedidos {count}")
    return tuple(string.ascii_uppercase[:count])


@dataclass(frozen=True)
class IETSpec:
    """Comprimentos e permutação de uma troca de intervalos.

    `permutation[i]` é a posição do intervalo i na linha de imagens. Para a IET
    de comprimentos (3/10, 1/2, 1/5) com ordem invertida, permutation = (2, 1, 0)
    e T(A) = [7/10, 1), T(B) = [1/5, 7/10), T(C) = [0, 1/5).
    """

    lengths: tuple[Scalar, ...]
    permutation: tuple[int, ...]

    def __post_init__(self) -> None:
        lengths = tuple(Scalar.coerce(length) for length in self.lengths)
        permutation = tuple(int(p) for p in self.permutation)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "permutation", permutation)

        if not lengths:
            raise ValueError("IET precisa de ao menos um intervalo")
        if len(permutation) != len(lengths):
            raise ValueError(
                f"Permutação com {len(permutation)} entradas para {len(lengths)} intervalos"
            )
        if sorted(permutation) != list(range(len(lengths))):
            raise ValueError(f"Permutação não é bijetiva em 0..{len(lengths) - 1}: {list(permutation)}")
        for index, length in enumerate(lengths):
            if length.sign() <= 0:
                raise ValueError(f"Comprimento do intervalo {index} deve ser positivo: {length}")
        total = sum(lengths, ZERO)
        if total != ONE:
            raise ValueError(f"Comprimentos devem somar 1, somam {total}")
        common_field(lengths)

    @property
    def size(self) -> int:
        return len(self.lengths)

    @cached_property
    def domains(self) -> tuple[Interval, ...]:
        """Intervalos de continuidade na ordem do domínio."""
        result = []
        lo = ZERO
        for length in self.lengths:
            result.append(Interval(lo, lo + length))
            lo = lo + length
        return tuple(result)

    @cached_property
    def images(self) -> tuple[Interval, ...]:
        """Imagem de cada intervalo, indexada pelo intervalo de origem."""
        order = sorted(range(self.size), key=lambda i: self.permutation[i])
        result: list[Optional[Interval]] = [None] * self.size
        lo = ZERO
        for index in order:
            result[index] = Interval(lo, lo + self.lengths[index])
            lo = lo + self.lengths[index]
        return tuple(result)  # type: ignore[arg-type]

    @property
    def translations(self) -> tuple[Scalar, ...]:
        return tuple(image.lo - domain.lo for domain, image in zip(self.domains, self.images))


def make_iet(spec: IETSpec) -> PAMap:
    """Constrói a troca de intervalos como `PAMap` de inclinação 1 em [0, 1)."""
    branches = [
        AffineBranch(domain, ONE, translation)
        for domain, translation in zip(spec.domains, spec.translations)
    ]
    return PAMap(branches)


@dataclass(frozen=True)
class ScalingInvolution:
    """Involução Φ que troca S = [0, s) e Φ(S) = [s, 1) com razão ρ = (1 − s)/s."""

    s: Scalar
    rho: Scalar
    as_map: PAMap

    @property
    def S(self) -> Interval:
        return Interval(ZERO, self.s)

    @property
    def phi_S(self) -> Interval:
        return Interval(self.s, ONE)


def make_scaling_involution(s: Scalar | Rational) -> ScalingInvolution:
    """Constrói a involução de escala para s racional com 0 < s < 1/2.

    Raises:
        ValueError: Se s for irracional ou não estiver em (0, 1/2)
        InvariantViolation: Se Φ² ≠ id
    """
    s = Scalar.coerce(s)
    if not s.is_rational:
        raise ValueError(f"s deve ser racional para que ρ seja racional: {s}")
    if s.sign() <= 0:
        raise ValueError(f"s deve ser positivo: {s}")
    if not s < Fraction(1, 2):
        raise ValueError(f"s deve ser menor que 1/2 (S é o conjunto menor): {s}")

    rho = (ONE - s) / s
    as_map = PAMap(
        [
            AffineBranch(Interval(ZERO, s), rho, s),
            AffineBranch(Interval(s, ONE), rho.inverse(), -s / rho),
        ]
    )
    if as_map.compose(as_map) != PAMap([AffineBranch(UNIT, ONE, ZERO)]):
        raise InvariantViolation(f"Φ² ≠ id para s = {s}")
    return ScalingInvolution(s=s, rho=rho, as_map=as_map)


@dataclass(frozen=True)
class ReciprocalSystem:
    """Transformação recíproca F = Φ∘T sobre [0, 1)."""

    T: PAMap
    phi: ScalingInvolution
    F: PAMap
    iet: IETSpec
    field_d: int = 0
    name: str = ""
    labels: tuple[str, ...] = field(default_factory=tuple)

    @property
    def s(self) -> Scalar:
        return self.phi.s

    @property
    def rho(self) -> Scalar:
        return self.phi.rho

    @property
    def S(self) -> Interval:
        return self.phi.S

    @property
    def phi_S(self) -> Interval:
        return self.phi.phi_S

    @cached_property
    def G(self) -> PAMap:
        """Composição alternativa G = T∘Φ, conjugada de F por Φ."""
        return self.T.compose(self.phi.as_map)


def make_reciprocal(
    spec: IETSpec,
    s: Scalar | Rational,
    name: str = "",
    labels: Optional[Sequence[str]] = None,
) -> ReciprocalSystem:
    """Monta F = Φ∘T e verifica suas propriedades estruturais.

    Args:
        spec: Comprimentos e permutação da IET
        s: Medida de S = [0, s)
        name: Nome do sistema
        labels: Rótulos dos intervalos (padrão A, B, C, ...)

    Returns:
        Sistema recíproco validado

    Raises:
        ValueError: Se os dados forem inválidos
        FieldMismatchError: Se os escalares pertencerem a corpos distintos
        InvariantViolation: Se F violar inclinações, bijetividade ou contagem de ramos
    """
    s = Scalar.coerce(s)
    field_d = common_field([*spec.lengths, s])
    phi = make_scaling_involution(s)
    T = make_iet(spec)
    F = phi.as_map.compose(T)

    allowed = {phi.rho, phi.rho.inverse()}
    for branch in F.branches:
        if branch.slope not in allowed:
            raise InvariantViolation(f"Inclinação {branch.slope} de F fora de {{ρ, ρ⁻¹}}")
    if not F.is_bijection_on(UNIT):
        raise InvariantViolation("F não é uma bijeção de [0, 1)")
    if len(F) > spec.size + 1:
        raise InvariantViolation(f"F tem {len(F)} ramos, esperado no máximo {spec.size + 1}")

    labels = tuple(labels) if labels else default_labels(spec.size)
    if len(labels) != spec.size:
        raise ValueError(f"{len(labels)} rótulos para {spec.size} intervalos")

    logger.debug("Sistema %s: %d ramos em T, %d em F, ρ = %s", name or "?", spec.size, len(F), phi.rho)
    return ReciprocalSystem(T=T, phi=phi, F=F, iet=spec, field_d=field_d, name=name, labels=labels)


def check_conjugacy(system: ReciprocalSystem) -> bool:
    """Verifica ΦF = GΦ com G = TΦ, como igualdade exata de mapas."""
    phi = system.phi.as_map
    return phi.compose(system.F) == system.G.compose(phi)


def random_system(
    rng: np.random.Generator,
    k: int,
    s: Scalar | Rational,
    field_d: int = 0,
    denominator: int = 997,
) -> ReciprocalSystem:
    """Sorteia um sistema recíproco com k intervalos.

    Os cortes são racionais de denominador `denominator`; com `field_d` > 0 cada
    corte recebe uma perturbação irracional menor que metade do espaçamento.
    """
    if k < 1:
        raise ValueError(f"k deve ser positivo: {k}")
    if denominator < k:
        raise ValueError(f"Denominador {denominator} pequeno demais para {k} intervalos")

    numerators = sorted(int(n) for n in rng.choice(np.arange(1, denominator), size=k - 1, replace=False))
    cuts = [Scalar(Fraction(n, denominator)) for n in numerators]
    if field_d:
        # frac(√d) ∈ (0, 1), perturbação < 1/(2·denominator)
        frac_sqrt = Scalar(-isqrt(field_d), 1, field_d)
        cuts = [
            cut + frac_sqrt * Fraction(int(rng.integers(1, 7)), 14 * denominator)
            for cut in cuts
        ]
    points = [ZERO, *cuts, ONE]
    lengths = tuple(hi - lo for lo, hi in zip(points, points[1:]))
    permutation = tuple(int(p) for p in rng.permutation(k))
    return make_reciprocal(IETSpec(lengths, permutation), s, name=f"random-{k}")
