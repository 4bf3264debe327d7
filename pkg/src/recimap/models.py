"""Modelos de resultado das análises do recimap."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .numeric import ZERO, Scalar, format_scalar
from .pamap import AffineBranch, Interval, IntervalSet, PAMap

UNRESOLVED = "unresolved"


def interval_to_dict(interval: Interval) -> dict:
    return {"lo": format_scalar(interval.lo), "hi": format_scalar(interval.hi)}


def interval_set_to_list(intervals: IntervalSet) -> list[dict]:
    return [interval_to_dict(interval) for interval in intervals]


@dataclass(frozen=True)
class ReturnBranch:
    """Ramo do mapa de primeiro retorno: F_S = F^n em `domain`."""

    domain: Interval
    return_time: int
    map: AffineBranch
    derivative_exponent: int

    @property
    def image(self) -> Interval:
        return self.map.image

    def to_dict(self) -> dict:
        return {
            "domain": interval_to_dict(self.domain),
            "return_time": self.return_time,
            "slope": format_scalar(self.map.slope),
            "offset": format_scalar(self.map.offset),
            "image": interval_to_dict(self.image),
            "derivative_exponent": self.derivative_exponent,
        }


@dataclass(frozen=True)
class ReturnMapResult:
    """Resultado exato do refinamento do primeiro retorno a S."""

    S: Interval
    branches: tuple[ReturnBranch, ...]
    resolved_measure: Scalar
    residual: IntervalSet
    budget_used: int

    @property
    def as_map(self) -> PAMap:
        """F_S como `PAMap` (parcial quando há resíduo)."""
        return PAMap(branch.map for branch in self.branches)

    @property
    def image_support(self) -> IntervalSet:
        return IntervalSet(tuple(branch.image for branch in self.branches))

    def measure_of_return_time(self, n: int) -> Scalar:
        total = ZERO
        for branch in self.branches:
            if branch.return_time == n:
                total = total + branch.domain.measure
        return total

    def to_dict(self) -> dict:
        return {
            "S": interval_to_dict(self.S),
            "branches": [branch.to_dict() for branch in self.branches],
            "resolved_measure": format_scalar(self.resolved_measure),
            "residual": interval_set_to_list(self.residual),
            "budget_used": self.budget_used,
        }


@dataclass(frozen=True)
class EntryPartition:
    """Tempos de primeira entrada em S para todo [0, 1)."""

    measures: dict[int, Scalar]
    residual: IntervalSet
    budget_used: int

    def to_dict(self) -> dict:
        return {
            "measures": {str(n): format_scalar(m) for n, m in self.measures.items()},
            "residual": interval_set_to_list(self.residual),
            "budget_used": self.budget_used,
        }


@dataclass(frozen=True)
class SurjectivityCheck:
    """Conjunto S \\ F_S(S); `exact` é falso quando há resíduo não resolvido."""

    missing: IntervalSet
    exact: bool

    @property
    def surjective(self) -> bool:
        return self.exact and self.missing.is_empty

    def to_dict(self) -> dict:
        return {
            "missing": interval_set_to_list(self.missing),
            "missing_measure": format_scalar(self.missing.measure),
            "exact": self.exact,
        }


class ConservativityKind(str, Enum):
    """Desfechos do certificado de conservatividade."""

    CONSERVATIVE_CERTIFIED = "conservative_certified"
    WANDERING_SET_FOUND = "wandering_set_found"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConservativityCertificate:
    """Certificado de conservatividade ou de conjunto errante para F_S."""

    kind: ConservativityKind
    reason: str
    wandering: Optional[Interval] = None
    absorbing: Optional[IntervalSet] = None
    steps_to_absorb: Optional[int] = None
    horizon: int = 0
    verified_iterates: int = 0
    f_verified_iterates: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "reason": self.reason,
            "wandering": interval_to_dict(self.wandering) if self.wandering else None,
            "absorbing": interval_set_to_list(self.absorbing) if self.absorbing is not None else None,
            "steps_to_absorb": self.steps_to_absorb,
            "horizon": self.horizon,
            "verified_iterates": self.verified_iterates,
            "f_verified_iterates": self.f_verified_iterates,
        }


@dataclass(frozen=True)
class OracleReport:
    """Comparação entre ramos exatos e órbitas em ponto flutuante."""

    checked: int
    agreed: int
    skipped: int

    @property
    def agreement(self) -> float:
        return self.agreed / self.checked if self.checked else 1.0

    def to_dict(self) -> dict:
        return {"checked": self.checked, "agreed": self.agreed, "skipped": self.skipped}


@dataclass(frozen=True)
class RotationClassification:
    """Classificação de F_S como rotação rígida de S (reescalado para [0, 1))."""

    is_rotation: bool
    rotation_number: Optional[Scalar] = None
    irrational: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "is_rotation": self.is_rotation,
            "rotation_number": format_scalar(self.rotation_number) if self.rotation_number is not None else None,
            "irrational": self.irrational,
        }


@dataclass(frozen=True)
class InvariantSearchReport:
    """Conjuntos invariantes exatos encontrados pela busca por saturação."""

    found: tuple[IntervalSet, ...]
    exhausted: bool
    refinement_depth: int
    aborted_seeds: int = 0

    def to_dict(self) -> dict:
        return {
            "found": [interval_set_to_list(E) for E in self.found],
            "exhausted": self.exhausted,
            "refinement_depth": self.refinement_depth,
            "aborted_seeds": self.aborted_seeds,
        }


class ErgodicityKind(str, Enum):
    """Veredictos de ergodicidade."""

    ERGODIC_CERTIFIED = "ergodic_certified"
    NOT_ERGODIC_CERTIFIED = "not_ergodic_certified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ErgodicityVerdict:
    kind: ErgodicityKind
    reason: str
    witness: Optional[IntervalSet] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "reason": self.reason,
            "witness": interval_set_to_list(self.witness) if self.witness is not None else None,
        }


class ProportionKind(str, Enum):
    CONSISTENT = "consistent"
    REFUTED = "refuted"
    NOT_INVARIANT = "not_invariant"


@dataclass(frozen=True)
class ProportionCheck:
    """Comparação exata de μ(E ∩ S)/μ(E) com μ(S)."""

    kind: ProportionKind
    lhs: Optional[Scalar] = None
    rhs: Optional[Scalar] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "lhs": format_scalar(self.lhs) if self.lhs is not None else None,
            "rhs": format_scalar(self.rhs) if self.rhs is not None else None,
        }


@dataclass(frozen=True)
class LevelRange:
    """Níveis mínimo e máximo de uma órbita de F̃ partindo do nível 0."""

    min_level: int
    max_level: int
    steps: int
    mode: str
    uncertain: bool = False

    def to_dict(self) -> dict:
        return {
            "min_level": self.min_level,
            "max_level": self.max_level,
            "steps": self.steps,
            "mode": self.mode,
            "uncertain": self.uncertain,
        }


@dataclass(frozen=True)
class ProbeExponents:
    probe: Interval
    exponents: frozenset[int]
    returns: int

    def to_dict(self) -> dict:
        return {
            "probe": interval_to_dict(self.probe),
            "exponents": sorted(self.exponents),
            "returns": self.returns,
        }


@dataclass(frozen=True)
class RatioSetEstimate:
    """Expoentes q (derivada ρ^q) testemunhados em todas as sondas."""

    exponents: frozenset[int]
    per_probe: tuple[ProbeExponents, ...]
    steps: int
    exact_steps: int = 0

    @property
    def inconclusive(self) -> bool:
        return not self.exponents

    def to_dict(self) -> dict:
        return {
            "exponents": sorted(self.exponents),
            "inconclusive": self.inconclusive,
            "steps": self.steps,
            "exact_steps": self.exact_steps,
            "per_probe": [probe.to_dict() for probe in self.per_probe],
        }


@dataclass(frozen=True)
class MaharamDiagnostic:
    """Relatório sobre a (não) ergodicidade da extensão de Maharam."""

    claimed_non_ergodic: bool
    consistent_with_ergodic: bool
    reasons: tuple[str, ...]
    krieger: str
    measure_preserving_power: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "claimed_non_ergodic": self.claimed_non_ergodic,
            "consistent_with_ergodic": self.consistent_with_ergodic,
            "reasons": list(self.reasons),
            "krieger": self.krieger,
            "measure_preserving_power": self.measure_preserving_power,
        }


ReturnPartition = dict[Union[int, str], Scalar]
