"""Diagnósticos de ergodicidade de F: rotações, busca de invariantes e proporções."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exceptions import InvariantViolation
from .models import (
    ErgodicityKind,
    ErgodicityVerdict,
    InvariantSearchReport,
    ProportionCheck,
    ProportionKind,
    ReturnMapResult,
    RotationClassification,
)
from .numeric import ONE, ZERO, is_rational
from .pamap import Interval, IntervalSet, PAMap
from .systems import ReciprocalSystem

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 40
DEFAULT_PIECE_CAP = 10_000


def classify_rotation(result: ReturnMapResult, S: Optional[Interval] = None) -> RotationClassification:
    """Decide se F_S é uma rotação rígida x ↦ x + α (mod 1) após reescalar S para [0, 1).

    Ramos adjacentes com a mesma translação são fundidos antes da contagem, de
    modo que a identidade aparece como um único ramo com α = 0.
    """
    S = S or result.S
    not_rotation = RotationClassification(is_rotation=False)
    if result.residual or any(branch.map.slope != ONE for branch in result.branches):
        return not_rotation

    fs = result.as_map
    if not fs.is_bijection_on(S):
        return not_rotation

    if len(fs) == 1:
        if fs.branches[0].offset != ZERO:
            return not_rotation
        alpha = ZERO
    elif len(fs) == 2:
        left, right = fs.branches
        cut = left.domain.hi
        if left.offset != S.hi - cut or right.offset != S.lo - cut:
            return not_rotation
        alpha = (S.hi - cut) / S.measure
    else:
        return not_rotation

    return RotationClassification(is_rotation=True, rotation_number=alpha, irrational=not is_rational(alpha))


def default_seeds(m: PAMap, extra: Iterable[Interval] = ()) -> list[IntervalSet]:
    """Sementes para a busca: intervalos dados, domínios dos ramos e suas frações iniciais 1/2 e 1/8."""
    seeds: list[IntervalSet] = []
    candidates = list(extra)
    for branch in m.branches:
        domain = branch.domain
        candidates.append(domain)
        for fraction in (Fraction(1, 2), Fraction(1, 8)):
            candidates.append(Interval(domain.lo, domain.lo + domain.measure * fraction))
    for interval in candidates:
        seed = IntervalSet.of(interval)
        if seed not in seeds:
            seeds.append(seed)
    return seeds


def invariant_search(
    m: PAMap,
    seed_sets: Sequence[IntervalSet],
    max_depth: int = DEFAULT_MAX_DEPTH,
    piece_cap: int = DEFAULT_PIECE_CAP,
) -> InvariantSearchReport:
    """Satura cada semente sob m e m⁻¹ até um ponto fixo exato.

    Args:
        m: Mapa bijetivo sobre o próprio suporte
        seed_sets: Conjuntos iniciais
        max_depth: Número máximo de iterações por semente
        piece_cap: Número máximo de intervalos antes de abortar a semente

    Returns:
        Conjuntos invariantes de medida estritamente entre 0 e a do suporte
    """
    support = m.domain_support
    total = support.measure
    found: list[IntervalSet] = []
    exhausted = True
    aborted = 0
    deepest = 0

    for seed in seed_sets:
        E = seed.intersection(support)
        if E.is_empty:
            continue
        fixed = False
        for depth in range(1, max_depth + 1):
            deepest = max(deepest, depth)
            saturated = E.union(m.image_set(E)).union(m.preimage_set(E))
            if saturated == E:
                fixed = True
                break
            E = saturated
            if len(E) > piece_cap:
                logger.debug("Semente %s abortada com %d peças", seed, len(E))
                break
        if not fixed:
            exhausted = False
            aborted += 1
            continue
        if ZERO < E.measure < total and E not in found:
            if m.image_set(E) != E:
                raise InvariantViolation(f"Conjunto saturado {E} não é invariante")
            found.append(E)

    return InvariantSearchReport(
        found=tuple(found),
        exhausted=exhausted,
        refinement_depth=deepest,
        aborted_seeds=aborted,
    )


def ergodicity_verdict(
    system: ReciprocalSystem,
    classification: RotationClassification,
    transformation: Optional[PAMap] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
    piece_cap: int = DEFAULT_PIECE_CAP,
) -> ErgodicityVerdict:
    """Certifica ergodicidade via rotação irracional de F_S, ou a refuta com um invariante.

    Args:
        system: Sistema recíproco
        classification: Classificação de F_S
        transformation: Mapa a examinar (padrão F); a via da rotação vale só para F
        max_depth: Profundidade da busca de invariantes
        piece_cap: Limite de peças da busca

    Returns:
        Veredicto com testemunha quando não ergódico
    """
    m = transformation if transformation is not None else system.F
    if m == system.F and classification.is_rotation and classification.irrational:
        return ErgodicityVerdict(
            kind=ErgodicityKind.ERGODIC_CERTIFIED,
            reason=f"F_S é rotação irracional (α = {classification.rotation_number}), logo F é ergódica",
        )

    seeds = default_seeds(m, system.iet.domains)
    report = invariant_search(m, seeds, max_depth=max_depth, piece_cap=piece_cap)
    if report.found:
        witness = report.found[0]
        return ErgodicityVerdict(
            kind=ErgodicityKind.NOT_ERGODIC_CERTIFIED,
            reason=f"conjunto invariante de medida {witness.measure}",
            witness=witness,
        )
    return ErgodicityVerdict(kind=ErgodicityKind.UNKNOWN, reason="nenhum certificado encontrado")


def check_invariant_proportion(system: ReciprocalSystem, E: IntervalSet) -> ProportionCheck:
    """Compara μ(E ∩ S)/μ(E) com μ(S) para um conjunto F-invariante E.

    Raises:
        ValueError: Se μ(E) = 0
    """
    if E.measure == ZERO:
        raise ValueError("Conjunto de medida nula")
    if system.F.image_set(E) != E:
        return ProportionCheck(kind=ProportionKind.NOT_INVARIANT)

    lhs = E.intersect_interval(system.S).measure / E.measure
    rhs = system.s
    phi_lhs = E.intersect_interval(system.phi_S).measure / E.measure
    if lhs == rhs and phi_lhs == ONE - rhs:
        return ProportionCheck(kind=ProportionKind.CONSISTENT, lhs=lhs, rhs=rhs)
    return ProportionCheck(kind=ProportionKind.REFUTED, lhs=lhs, rhs=rhs)


def contains_S_check(system: ReciprocalSystem, E: IntervalSet) -> bool:
    """Retorna True se S ⊆ E."""
    return IntervalSet.of(system.S).issubset(E)


def phi_and_t_images_differ(system: ReciprocalSystem, E: IntervalSet) -> bool:
    """Retorna True se Φ(E) ≠ T(E)."""
    return system.phi.as_map.image_set(E) != system.T.image_set(E)
