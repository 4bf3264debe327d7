"""Mapa de primeiro retorno F_S, partição por tempo de retorno e certificados de conservatividade."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import BranchCapExceeded, InvariantViolation
from .models import (
    UNRESOLVED,
    ConservativityCertificate,
    ConservativityKind,
    EntryPartition,
    OracleReport,
    ReturnBranch,
    ReturnMapResult,
    ReturnPartition,
    SurjectivityCheck,
)
from .numeric import ONE, ZERO, Scalar
from .pamap import UNIT, AffineBranch, Interval, IntervalSet, PAMap
from .systems import ReciprocalSystem

logger = logging.getLogger(__name__)

DEFAULT_BRANCH_CAP = 1_000_000


@dataclass(frozen=True)
class _Arrival:
    """Peça do domínio inicial que atingiu S pela primeira vez em `steps` passos."""

    map: AffineBranch
    steps: int
    exponent: int


def _refine(
    system: ReciprocalSystem,
    start: Interval,
    budget: int,
    branch_cap: int,
) -> tuple[list[_Arrival], list[Interval], int]:
    """Refina `start` nos pontos de quebra de F até cada peça cair em S.

    Cada ramo de F tem imagem inteiramente em S ou em Φ(S), então uma peça
    nunca precisa ser partida pelo ponto s.
    """
    if budget < 1:
        raise ValueError(f"budget deve ser >= 1: {budget}")

    s = system.s
    rho = system.rho
    worklist: deque[tuple[AffineBranch, int, int]] = deque([(AffineBranch(start, ONE, ZERO), 0, 0)])
    arrivals: list[_Arrival] = []
    residual: list[Interval] = []
    budget_used = 0

    while worklist:
        piece, steps, exponent = worklist.popleft()
        image = piece.image
        for outer in system.F.overlapping(image):
            lo = max(image.lo, outer.domain.lo)
            hi = min(image.hi, outer.domain.hi)
            domain = Interval(piece.apply_inverse(lo), piece.apply_inverse(hi))
            advanced = outer.after(piece, domain)
            next_steps = steps + 1
            next_exponent = exponent + (1 if outer.slope == rho else -1)
            budget_used = max(budget_used, next_steps)

            if advanced.image.hi <= s:
                arrivals.append(_Arrival(advanced, next_steps, next_exponent))
            elif next_steps >= budget:
                residual.append(domain)
            else:
                worklist.append((advanced, next_steps, next_exponent))

        pieces = len(worklist) + len(arrivals) + len(residual)
        if pieces > branch_cap:
            logger.warning("Limite de ramos atingido com %d peças", pieces)
            raise BranchCapExceeded(branch_cap, pieces)

    return arrivals, residual, budget_used


def _check_distortion(arrival: _Arrival, rho: Scalar) -> None:
    expected = arrival.steps - 2
    if arrival.exponent != expected or arrival.map.slope != rho**expected:
        raise InvariantViolation(
            f"Lei de distorção violada em {arrival.map.domain}: n = {arrival.steps}, "
            f"inclinação {arrival.map.slope}, esperado ρ^{expected}"
        )


def _merge_returns(branches: list[ReturnBranch]) -> tuple[ReturnBranch, ...]:
    branches = sorted(branches, key=lambda branch: branch.domain.lo)
    merged: list[ReturnBranch] = []
    for branch in branches:
        if merged:
            last = merged[-1]
            if (
                last.domain.hi == branch.domain.lo
                and last.return_time == branch.return_time
                and last.map.same_formula(branch.map)
            ):
                domain = Interval(last.domain.lo, branch.domain.hi)
                merged[-1] = ReturnBranch(domain, last.return_time, last.map.restrict(domain), last.derivative_exponent)
                continue
        merged.append(branch)
    return tuple(merged)


def first_return(
    system: ReciprocalSystem,
    budget: int,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> ReturnMapResult:
    """Calcula exatamente o mapa de primeiro retorno F_S.

    Args:
        system: Sistema recíproco
        budget: Número máximo de aplicações de F por peça
        branch_cap: Número máximo de peças vivas durante o refinamento

    Returns:
        Ramos de F_S ordenados por domínio e o resíduo não resolvido

    Raises:
        ValueError: Se budget < 1
        BranchCapExceeded: Se o refinamento exceder `branch_cap` peças
        InvariantViolation: Se a lei de distorção ou a injetividade falharem
    """
    arrivals, residual_pieces, budget_used = _refine(system, system.S, budget, branch_cap)

    branches = []
    for arrival in arrivals:
        _check_distortion(arrival, system.rho)
        branches.append(ReturnBranch(arrival.map.domain, arrival.steps, arrival.map, arrival.exponent))
    merged = _merge_returns(branches)

    images = sorted((branch.image for branch in merged), key=lambda interval: interval.lo)
    for previous, current in zip(images, images[1:]):
        if current.lo < previous.hi:
            raise InvariantViolation(f"F_S não injetivo: imagens {previous} e {current} se sobrepõem")

    residual = IntervalSet(tuple(residual_pieces))
    resolved = ZERO
    for branch in merged:
        resolved = resolved + branch.domain.measure
    if resolved + residual.measure != system.s:
        raise InvariantViolation("Ramos e resíduo não particionam S")

    if residual:
        logger.warning("Resíduo de medida %s após %d passos", residual.measure, budget)
    logger.debug("F_S com %d ramos, budget usado %d", len(merged), budget_used)
    return ReturnMapResult(
        S=system.S,
        branches=merged,
        resolved_measure=resolved,
        residual=residual,
        budget_used=budget_used,
    )


def entry_partition(
    system: ReciprocalSystem,
    budget: int,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> EntryPartition:
    """Mede, para cada n >= 1, o conjunto de pontos de [0, 1) que entram em S no passo n."""
    arrivals, residual_pieces, budget_used = _refine(system, UNIT, budget, branch_cap)
    measures: dict[int, Scalar] = {}
    for arrival in arrivals:
        measures[arrival.steps] = measures.get(arrival.steps, ZERO) + arrival.map.domain.measure
    return EntryPartition(
        measures=dict(sorted(measures.items())),
        residual=IntervalSet(tuple(residual_pieces)),
        budget_used=budget_used,
    )


def return_time_partition(result: ReturnMapResult) -> ReturnPartition:
    """Mapeia n ↦ μ(S_n); o resíduo aparece na chave "unresolved" quando não vazio."""
    partition: ReturnPartition = {}
    for branch in result.branches:
        n = branch.return_time
        partition[n] = partition.get(n, ZERO) + branch.domain.measure
    partition = dict(sorted(partition.items()))
    if result.residual:
        partition[UNRESOLVED] = result.residual.measure
    return partition


def check_surjective(result: ReturnMapResult, S: Optional[Interval] = None) -> SurjectivityCheck:
    """Calcula S \\ F_S(S) exatamente."""
    S = S or result.S
    missing = IntervalSet.of(S).difference(result.image_support)
    return SurjectivityCheck(missing=missing, exact=result.residual.is_empty)


def _absorbing_candidates(result: ReturnMapResult) -> list[tuple[Interval, IntervalSet]]:
    """Pares (W, W′) candidatos a conjunto errante e região absorvente."""
    candidates: list[tuple[Interval, IntervalSet]] = []
    for branch in result.branches:
        image = branch.image
        if branch.domain.contains_interval(image) and image != branch.domain:
            absorbing = IntervalSet.of(image)
            for piece in IntervalSet.of(branch.domain).difference(absorbing):
                candidates.append((piece, absorbing))
    if result.residual.is_empty:
        image_support = result.image_support
        for piece in IntervalSet.of(result.S).difference(image_support):
            candidates.append((piece, image_support))
    return candidates


def _verify_wandering(
    fs: PAMap,
    wandering: Interval,
    absorbing: IntervalSet,
    horizon: int,
) -> Optional[int]:
    """Retorna p com F_S^p(W) ⊆ W′ e F_S^j(W) ∩ W = ∅ para 0 < j <= p, ou None."""
    domain = fs.domain_support
    W = IntervalSet.of(wandering)
    if not W.isdisjoint(absorbing) or not absorbing.issubset(domain):
        return None
    if not fs.image_set(absorbing).issubset(absorbing):
        return None

    current = W
    for p in range(1, horizon + 1):
        if not current.issubset(domain):
            return None
        current = fs.image_set(current)
        if not current.isdisjoint(W):
            return None
        if current.issubset(absorbing):
            return p
    return None


def _count_disjoint_iterates(m: PAMap, wandering: Interval, horizon: int) -> int:
    """Confere m^k(W) ∩ W = ∅ para k = 1..horizon, parando no domínio de m."""
    W = IntervalSet.of(wandering)
    current = W
    for k in range(1, horizon + 1):
        if not current.issubset(m.domain_support):
            return k - 1
        current = m.image_set(current)
        if not current.isdisjoint(W):
            raise InvariantViolation(f"Conjunto {wandering} certificado como errante retorna no passo {k}")
    return horizon


def conservativity_certificate(
    system: ReciprocalSystem,
    result: ReturnMapResult,
    horizon: int = 20,
) -> ConservativityCertificate:
    """Certifica a conservatividade de F (via μ(S₁) = 0) ou exibe um intervalo errante.

    Um intervalo W é certificado quando existe uma região W′ disjunta de W com
    F_S(W′) ⊆ W′ e F_S^p(W) ⊆ W′ para algum p, sem retornos a W antes disso;
    pela injetividade de F_S todas as iteradas são então disjuntas.
    """
    if result.residual.is_empty and result.measure_of_return_time(1) == ZERO:
        return ConservativityCertificate(
            kind=ConservativityKind.CONSERVATIVE_CERTIFIED,
            reason="μ(S₁) = 0: F_S e F são conservativas",
            horizon=horizon,
        )

    fs = result.as_map
    for wandering, absorbing in _absorbing_candidates(result):
        steps = _verify_wandering(fs, wandering, absorbing, horizon)
        if steps is None:
            continue
        logger.debug("Intervalo errante %s absorvido em %d passos", wandering, steps)
        return ConservativityCertificate(
            kind=ConservativityKind.WANDERING_SET_FOUND,
            reason="intervalo errante para F_S (logo para F)",
            wandering=wandering,
            absorbing=absorbing,
            steps_to_absorb=steps,
            horizon=horizon,
            verified_iterates=_count_disjoint_iterates(fs, wandering, horizon),
            f_verified_iterates=_count_disjoint_iterates(system.F, wandering, horizon),
        )

    return ConservativityCertificate(
        kind=ConservativityKind.UNKNOWN,
        reason="nenhum certificado encontrado dentro do horizonte",
        horizon=horizon,
    )


def float_first_return(
    system: ReciprocalSystem,
    xs: np.ndarray,
    max_steps: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Itera F em ponto flutuante até o retorno a S, vetorizado sobre `xs`.

    Returns:
        (tempos de retorno, imagens, distância mínima a um ponto de quebra);
        tempo 0 indica ausência de retorno em `max_steps` passos
    """
    los = np.array([float(b.domain.lo) for b in system.F.branches])
    his = np.array([float(b.domain.hi) for b in system.F.branches])
    slopes = np.array([float(b.slope) for b in system.F.branches])
    offsets = np.array([float(b.offset) for b in system.F.branches])
    s = float(system.s)

    x = np.asarray(xs, dtype=float).copy()
    times = np.zeros(x.shape, dtype=int)
    proximity = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)

    for step in range(1, max_steps + 1):
        if not active.any():
            break
        idx = np.clip(np.searchsorted(los, x[active], side="right") - 1, 0, len(los) - 1)
        current = x[active]
        distance = np.minimum(np.abs(current - los[idx]), np.abs(his[idx] - current))
        proximity[active] = np.minimum(proximity[active], distance)
        x[active] = slopes[idx] * current + offsets[idx]
        arrived = active.copy()
        arrived[active] = x[active] < s
        times[arrived] = step
        active &= ~arrived

    return times, x, proximity


def oracle_agreement(
    system: ReciprocalSystem,
    result: ReturnMapResult,
    rng: np.random.Generator,
    count: int = 1000,
    margin: float = 1e-9,
    tolerance: float = 1e-6,
) -> OracleReport:
    """Compara os ramos exatos com órbitas em ponto flutuante de pontos aleatórios de S."""
    xs = rng.uniform(0.0, float(system.s), size=count)
    exact_los = np.array([float(b.domain.lo) for b in result.branches])
    exact_his = np.array([float(b.domain.hi) for b in result.branches])
    max_time = max((b.return_time for b in result.branches), default=1)
    times, images, proximity = float_first_return(system, xs, max_time)

    checked = agreed = skipped = 0
    for x, time, image, near in zip(xs, times, images, proximity):
        index = int(np.searchsorted(exact_los, x, side="right")) - 1
        inside = 0 <= index < len(result.branches) and x < exact_his[index]
        if not inside or near < margin or min(x - exact_los[index], exact_his[index] - x) < margin:
            skipped += 1
            continue
        branch = result.branches[index]
        expected = float(branch.map.slope) * x + float(branch.map.offset)
        checked += 1
        if time == branch.return_time and abs(image - expected) < tolerance:
            agreed += 1
    return OracleReport(checked=checked, agreed=agreed, skipped=skipped)
