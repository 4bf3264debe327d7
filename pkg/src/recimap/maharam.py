"""Extensão de Maharam discreta F̃ em X × ℤ com a medida μ̃ = Σ ρ⁻ⁿ μ no nível n.

O nível sobe exatamente nos pontos de T⁻¹(S), onde a derivada de F é ρ; após
n passos, dFⁿ✻μ/dμ(x₀) = ρ^(nível final − nível inicial).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .exceptions import InvariantViolation
from .models import (
    ConservativityCertificate,
    ConservativityKind,
    ErgodicityKind,
    ErgodicityVerdict,
    LevelRange,
    MaharamDiagnostic,
    ProbeExponents,
    RatioSetEstimate,
    ReturnMapResult,
)
from .numeric import ZERO, Rational, Scalar
from .pamap import UNIT, Interval, IntervalSet
from .systems import ReciprocalSystem

logger = logging.getLogger(__name__)

DEFAULT_EXACT_CAP = 10_000
DEFAULT_PROXIMITY = 1e-12


@dataclass(frozen=True)
class MaharamSystem:
    """F̃(x, n) = (F(x), n + 1) em up_set e (F(x), n − 1) em down_set."""

    base: ReciprocalSystem
    up_set: IntervalSet
    down_set: IntervalSet

    @property
    def rho(self) -> Scalar:
        return self.base.rho


@dataclass(frozen=True)
class SkewState:
    """Ponto (x, nível) de X × ℤ."""

    x: Scalar
    level: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Scalar.coerce(self.x))
        if not UNIT.contains(self.x):
            raise ValueError(f"x deve estar em [0, 1): {self.x}")


class LeveledSet:
    """Subconjunto de X × ℤ com finitos níveis não vazios."""

    def __init__(self, levels: Optional[Mapping[int, IntervalSet]] = None):
        self._levels = {
            int(n): E for n, E in sorted((levels or {}).items()) if not E.is_empty
        }

    @classmethod
    def rectangle(cls, interval: Interval, level: int = 0) -> LeveledSet:
        return cls({level: IntervalSet.of(interval)})

    @property
    def levels(self) -> dict[int, IntervalSet]:
        return dict(self._levels)

    def __getitem__(self, level: int) -> IntervalSet:
        return self._levels.get(level, IntervalSet.empty())

    def __iter__(self) -> Iterator[tuple[int, IntervalSet]]:
        return iter(self._levels.items())

    def __len__(self) -> int:
        return len(self._levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeveledSet):
            return NotImplemented
        return self._levels == other._levels

    def __repr__(self) -> str:
        parts = ", ".join(f"{n}: {E}" for n, E in self._levels.items())
        return f"LeveledSet({{{parts}}})"

    @property
    def is_empty(self) -> bool:
        return not self._levels

    def union(self, other: LeveledSet) -> LeveledSet:
        merged = dict(self._levels)
        for n, E in other:
            merged[n] = merged[n].union(E) if n in merged else E
        return LeveledSet(merged)


def extend(system: ReciprocalSystem) -> MaharamSystem:
    """Constrói a extensão de Maharam discreta de F.

    Raises:
        InvariantViolation: Se up_set e down_set não particionarem [0, 1) ou μ(up_set) ≠ s
    """
    up = system.T.preimage_set(system.S)
    down = system.T.preimage_set(system.phi_S)
    whole = IntervalSet.of(UNIT)
    if not up.isdisjoint(down) or up.union(down) != whole:
        raise InvariantViolation("T⁻¹(S) e T⁻¹(Φ(S)) não particionam [0, 1)")
    if up.measure != system.s:
        raise InvariantViolation(f"μ(T⁻¹(S)) = {up.measure} ≠ s = {system.s}")
    expanding = IntervalSet(tuple(b.domain for b in system.F.branches if b.slope == system.rho))
    if expanding != up:
        raise InvariantViolation("Pontos de inclinação ρ não coincidem com T⁻¹(S)")
    return MaharamSystem(base=system, up_set=up, down_set=down)


def step(maharam: MaharamSystem, state: SkewState) -> SkewState:
    branch = maharam.base.F.branch_at(state.x)
    delta = 1 if branch.slope == maharam.rho else -1
    return SkewState(branch.apply(state.x), state.level + delta)


def step_inverse(maharam: MaharamSystem, state: SkewState) -> SkewState:
    x = maharam.base.F.invert().apply(state.x)
    # imagem em Φ(S) veio de T⁻¹(S), onde o nível subiu
    delta = -1 if state.x >= maharam.base.s else 1
    return SkewState(x, state.level + delta)


def orbit(maharam: MaharamSystem, state: SkewState, steps: int) -> Iterator[SkewState]:
    """Gera os `steps` estados seguintes da órbita exata."""
    for _ in range(steps):
        state = step(maharam, state)
        yield state


def mu_tilde(maharam: MaharamSystem, E: LeveledSet) -> Scalar:
    """μ̃(E) = Σ ρ⁻ⁿ μ(E_n), exato."""
    total = ZERO
    for n, En in E:
        total = total + maharam.rho ** (-n) * En.measure
    return total


def image_leveled(maharam: MaharamSystem, E: LeveledSet) -> LeveledSet:
    """F̃(E): a parte em up_set sobe um nível e a parte em down_set desce."""
    F = maharam.base.F
    result = LeveledSet()
    for n, En in E:
        up = F.image_set(En.intersection(maharam.up_set))
        down = F.image_set(En.intersection(maharam.down_set))
        result = result.union(LeveledSet({n + 1: up, n - 1: down}))
    return result


def preimage_leveled(maharam: MaharamSystem, E: LeveledSet) -> LeveledSet:
    """F̃⁻¹(E)."""
    F = maharam.base.F
    system = maharam.base
    result = LeveledSet()
    for n, En in E:
        from_up = F.preimage_set(En.intersect_interval(system.phi_S))
        from_down = F.preimage_set(En.intersect_interval(system.S))
        result = result.union(LeveledSet({n - 1: from_up, n + 1: from_down}))
    return result


def random_leveled_set(
    rng: np.random.Generator,
    levels: Sequence[int] = range(-2, 3),
    pieces: int = 3,
    denominator: int = 240,
) -> LeveledSet:
    """Sorteia até `pieces` intervalos racionais por nível."""
    result: dict[int, IntervalSet] = {}
    for n in levels:
        cuts = sorted(int(c) for c in rng.choice(np.arange(0, denominator + 1), size=2 * pieces, replace=False))
        intervals = [
            Interval(Fraction(lo, denominator), Fraction(hi, denominator))
            for lo, hi in zip(cuts[::2], cuts[1::2])
        ]
        result[n] = IntervalSet(tuple(intervals))
    return LeveledSet(result)


def measure_preservation_check(maharam: MaharamSystem, count: int, rng: np.random.Generator) -> int:
    """Verifica μ̃(F̃(E)) = μ̃(E) e F̃⁻¹(F̃(E)) = E em `count` conjuntos aleatórios.

    Returns:
        Número de verificações exatas realizadas

    Raises:
        InvariantViolation: Se alguma igualdade falhar
    """
    for _ in range(count):
        E = random_leveled_set(rng)
        image = image_leveled(maharam, E)
        if mu_tilde(maharam, image) != mu_tilde(maharam, E):
            raise InvariantViolation(f"μ̃ não preservada em {E!r}")
        if preimage_leveled(maharam, image) != E:
            raise InvariantViolation(f"F̃ não inverteu {E!r}")
    return count


def _float_tables(maharam: MaharamSystem) -> tuple[np.ndarray, ...]:
    F = maharam.base.F
    los = np.array([float(b.domain.lo) for b in F.branches])
    his = np.array([float(b.domain.hi) for b in F.branches])
    slopes = np.array([float(b.slope) for b in F.branches])
    offsets = np.array([float(b.offset) for b in F.branches])
    ups = np.array([1 if b.slope == maharam.rho else -1 for b in F.branches])
    return los, his, slopes, offsets, ups


def float_level_ranges(
    maharam: MaharamSystem,
    xs: np.ndarray,
    steps: int,
    proximity: float = DEFAULT_PROXIMITY,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Órbitas de F̃ em ponto flutuante, vetorizadas sobre `xs`.

    Returns:
        (nível mínimo, nível máximo, órbita passou perto de um ponto de quebra)
    """
    los, his, slopes, offsets, ups = _float_tables(maharam)
    x = np.asarray(xs, dtype=float).copy()
    level = np.zeros(x.shape, dtype=int)
    low = level.copy()
    high = level.copy()
    uncertain = np.zeros(x.shape, dtype=bool)

    for _ in range(steps):
        idx = np.clip(np.searchsorted(los, x, side="right") - 1, 0, len(los) - 1)
        distance = np.minimum(np.abs(x - los[idx]), np.abs(his[idx] - x))
        uncertain |= distance < proximity
        x = slopes[idx] * x + offsets[idx]
        out = (x < 0.0) | (x >= 1.0)
        if out.any():
            uncertain |= out
            x = np.clip(x, 0.0, np.nextafter(1.0, 0.0))
        level += ups[idx]
        np.minimum(low, level, out=low)
        np.maximum(high, level, out=high)

    return low, high, uncertain


def level_range(
    maharam: MaharamSystem,
    x0: Scalar | Rational,
    steps: int,
    exact_cap: int = DEFAULT_EXACT_CAP,
    proximity: float = DEFAULT_PROXIMITY,
) -> LevelRange:
    """Níveis extremos da órbita de (x0, 0); exata até `exact_cap` passos, flutuante além."""
    if steps < 0:
        raise ValueError(f"steps deve ser >= 0: {steps}")

    if steps <= exact_cap:
        low = high = 0
        for state in orbit(maharam, SkewState(x0, 0), steps):
            low = min(low, state.level)
            high = max(high, state.level)
        return LevelRange(min_level=low, max_level=high, steps=steps, mode="exact")

    lows, highs, uncertain = float_level_ranges(maharam, np.array([float(Scalar.coerce(x0))]), steps, proximity)
    if uncertain[0]:
        logger.debug("Órbita de %s passou a menos de %g de um ponto de quebra", x0, proximity)
    return LevelRange(
        min_level=int(lows[0]),
        max_level=int(highs[0]),
        steps=steps,
        mode="float",
        uncertain=bool(uncertain[0]),
    )


def probe_intervals(count: int) -> list[Interval]:
    """Divide [0, 1) em `count` sondas de mesmo comprimento."""
    return [Interval(Fraction(i, count), Fraction(i + 1, count)) for i in range(count)]


def _float_probe_levels(
    maharam: MaharamSystem,
    probe: Interval,
    state: SkewState,
    steps: int,
    proximity: float,
) -> tuple[set[int], int]:
    """Continua a órbita em ponto flutuante e registra os níveis nos retornos à sonda."""
    los, his, slopes, offsets, ups = _float_tables(maharam)
    lo, hi = float(probe.lo), float(probe.hi)
    x = float(state.x)
    level = state.level
    witnessed: set[int] = set()
    returns = 0
    for _ in range(steps):
        i = int(np.clip(np.searchsorted(los, x, side="right") - 1, 0, len(los) - 1))
        if min(x - los[i], his[i] - x) < proximity:
            logger.debug("Órbita flutuante interrompida perto de um ponto de quebra em %g", x)
            break
        x = slopes[i] * x + offsets[i]
        level += int(ups[i])
        if lo + proximity <= x < hi - proximity:
            witnessed.add(level)
            returns += 1
    return witnessed, returns


def ratio_set_estimate(
    system: ReciprocalSystem,
    probes: Sequence[Interval],
    steps: int,
    starts: int = 6,
    exact_cap: int = DEFAULT_EXACT_CAP,
    proximity: float = DEFAULT_PROXIMITY,
) -> RatioSetEstimate:
    """Estima o conjunto de razões pelos expoentes q com Fⁿ(x) ∈ E e derivada ρ^q.

    As órbitas partem de `starts` pontos interiores de cada sonda e são exatas
    até `exact_cap` passos; o restante segue em ponto flutuante. O resultado é
    a interseção sobre as sondas.
    """
    maharam = extend(system)
    exact_steps = min(steps, exact_cap)
    per_probe: list[ProbeExponents] = []
    common: Optional[set[int]] = None

    for probe in probes:
        if not IntervalSet.of(probe).issubset(IntervalSet.of(UNIT)):
            raise ValueError(f"Sonda {probe} fora de [0, 1)")
        witnessed: set[int] = set()
        returns = 0
        for i in range(1, starts + 1):
            state = SkewState(probe.lo + probe.measure * Fraction(i, starts + 1), 0)
            for state in orbit(maharam, state, exact_steps):
                if probe.contains(state.x):
                    witnessed.add(state.level)
                    returns += 1
            if steps > exact_steps:
                levels, count = _float_probe_levels(maharam, probe, state, steps - exact_steps, proximity)
                witnessed |= levels
                returns += count
        per_probe.append(ProbeExponents(probe=probe, exponents=frozenset(witnessed), returns=returns))
        common = witnessed if common is None else common & witnessed

    exponents = frozenset(common or ())
    if not exponents:
        logger.info("Estimativa do conjunto de razões inconclusiva")
    return RatioSetEstimate(
        exponents=exponents,
        per_probe=tuple(per_probe),
        steps=steps,
        exact_steps=exact_steps,
    )


def krieger_evidence(exponents: Iterable[int], K: int = 1) -> str:
    """Rotula a evidência de tipo de Krieger contida nos expoentes observados."""
    Q = set(exponents)
    if not Q:
        return "inconclusive"
    if Q == {0}:
        return "II"
    if set(range(-K, K + 1)) <= Q:
        return "III_1/rho candidate"
    return "partial"


def measure_preserving_power(system: ReciprocalSystem, bound: int) -> Optional[int]:
    """Menor n <= bound com Fⁿ preservando a medida."""
    power = system.F
    for n in range(1, bound + 1):
        if n > 1:
            power = system.F.compose(power)
        if power.is_measure_preserving():
            return n
    return None


def ergodicity_diagnostic(
    system: ReciprocalSystem,
    exponents: Iterable[int],
    verdict: ErgodicityVerdict,
    returns: Optional[ReturnMapResult] = None,
    conservativity: Optional[ConservativityCertificate] = None,
    power_bound: int = 4,
    K: int = 1,
) -> MaharamDiagnostic:
    """Reúne as razões pelas quais F̃ não é ergódica, ou a evidência compatível com ergodicidade.

    Nunca afirma que F̃ é ergódica.
    """
    Q = set(exponents)
    reasons: list[str] = []

    if verdict.kind == ErgodicityKind.NOT_ERGODIC_CERTIFIED:
        reasons.append("F não é ergódica: conjunto invariante não trivial")
    if conservativity is not None and conservativity.kind == ConservativityKind.WANDERING_SET_FOUND:
        reasons.append("F não é conservativa, logo não é ergódica")
    power = measure_preserving_power(system, power_bound)
    if power is not None:
        reasons.append(f"F^{power} preserva a medida: os níveis ficam limitados")
    if returns is not None and returns.residual.is_empty and returns.measure_of_return_time(1) == ZERO:
        reasons.append("μ(S₁) = 0: a extensão de Maharam não é ergódica")

    claimed = bool(reasons)
    consistent = (
        not claimed
        and verdict.kind == ErgodicityKind.ERGODIC_CERTIFIED
        and set(range(-K, K + 1)) <= Q
    )
    return MaharamDiagnostic(
        claimed_non_ergodic=claimed,
        consistent_with_ergodic=consistent,
        reasons=tuple(reasons),
        krieger=krieger_evidence(Q, K),
        measure_preserving_power=power,
    )
