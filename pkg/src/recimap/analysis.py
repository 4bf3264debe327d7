"""Pipeline de análise: primeiro retorno → conservatividade → ergodicidade → Maharam."""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from typing import Any, Iterator, Optional

import numpy as np
from pydantic import BaseModel, Field

from .config import AppConfig, SystemConfig
from .ergodicity import check_invariant_proportion, classify_rotation, ergodicity_verdict
from .first_return import (
    check_surjective,
    conservativity_certificate,
    entry_partition,
    first_return,
    oracle_agreement,
    return_time_partition,
)
from .maharam import (
    ergodicity_diagnostic,
    extend,
    level_range,
    measure_preservation_check,
    probe_intervals,
    ratio_set_estimate,
)
from .models import ConservativityKind, ErgodicityKind, interval_set_to_list
from .numeric import format_scalar

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"


class AnalysisReport(BaseModel):
    """Relatório JSON da análise de um sistema."""

    schema_version: str = SCHEMA_VERSION
    system: dict[str, Any]
    first_return: dict[str, Any]
    conservativity: dict[str, Any]
    rotation: dict[str, Any]
    ergodicity: dict[str, Any]
    maharam: dict[str, Any]
    oracle: dict[str, Any]
    timing: dict[str, float] = Field(default_factory=dict)

    @property
    def has_unknown(self) -> bool:
        """True se algum veredicto terminou como desconhecido."""
        return (
            self.conservativity["kind"] == ConservativityKind.UNKNOWN.value
            or self.ergodicity["kind"] == ErgodicityKind.UNKNOWN.value
        )

    def to_json(self, include_timing: bool = True) -> str:
        data = self.model_dump(exclude=None if include_timing else {"timing"})
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


class _Stopwatch:
    def __init__(self) -> None:
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = round(time.perf_counter() - start, 6)
            logger.debug("Etapa %s: %.3fs", name, self.phases[name])


def analyze(
    config: SystemConfig,
    settings: AppConfig,
    budget: Optional[int] = None,
    orbit_steps: Optional[int] = None,
    probes: Optional[int] = None,
) -> AnalysisReport:
    """Executa a análise completa de um sistema.

    Args:
        config: Sistema a analisar
        settings: Configuração da aplicação
        budget: Sobrescreve analysis.budget
        orbit_steps: Sobrescreve maharam.orbit_steps
        probes: Sobrescreve maharam.probes

    Returns:
        Relatório com todos os veredictos

    Raises:
        InvariantViolation: Se alguma verificação exata falhar
    """
    analysis = settings.analysis
    maharam_settings = settings.maharam
    budget = budget or analysis.budget
    orbit_steps = orbit_steps if orbit_steps is not None else maharam_settings.orbit_steps
    probes = probes or maharam_settings.probes
    rng = np.random.default_rng(maharam_settings.seed)
    clock = _Stopwatch()

    with clock.phase("system"):
        system = config.to_system()

    with clock.phase("first_return"):
        returns = first_return(system, budget, analysis.branch_cap)
        partition = return_time_partition(returns)
        surjectivity = check_surjective(returns)
        entry = entry_partition(system, budget, analysis.branch_cap)

    with clock.phase("conservativity"):
        conservativity = conservativity_certificate(system, returns, analysis.wandering_horizon)

    with clock.phase("ergodicity"):
        rotation = classify_rotation(returns)
        verdict = ergodicity_verdict(
            system,
            rotation,
            max_depth=analysis.invariant_max_depth,
            piece_cap=analysis.invariant_piece_cap,
        )
        proportion = check_invariant_proportion(system, verdict.witness) if verdict.witness else None

    with clock.phase("maharam"):
        maharam = extend(system)
        mu_checks = measure_preservation_check(maharam, maharam_settings.mu_checks, rng)
        levels = level_range(
            maharam,
            system.s / 2,
            orbit_steps,
            exact_cap=maharam_settings.exact_orbit_cap,
            proximity=maharam_settings.proximity,
        )
        ratio = ratio_set_estimate(
            system,
            probe_intervals(probes),
            maharam_settings.ratio_steps,
            starts=maharam_settings.probe_starts,
            exact_cap=maharam_settings.exact_orbit_cap,
            proximity=maharam_settings.proximity,
        )
        diagnostic = ergodicity_diagnostic(
            system,
            ratio.exponents,
            verdict,
            returns=returns,
            conservativity=conservativity,
            power_bound=analysis.power_bound,
            K=maharam_settings.krieger_k,
        )

    with clock.phase("oracle"):
        oracle = oracle_agreement(system, returns, rng, count=analysis.oracle_points)

    return AnalysisReport(
        system=config.model_dump(exclude_none=True),
        first_return={
            **returns.to_dict(),
            "return_times": {str(n): format_scalar(m) for n, m in partition.items()},
            "surjectivity": surjectivity.to_dict(),
            "entry_times": entry.to_dict(),
        },
        conservativity=conservativity.to_dict(),
        rotation=rotation.to_dict(),
        ergodicity={
            **verdict.to_dict(),
            "proportion": proportion.to_dict() if proportion else None,
        },
        maharam={
            "up_set": interval_set_to_list(maharam.up_set),
            "mu_checks_passed": mu_checks,
            "level_range": levels.to_dict(),
            "ratio_set": ratio.to_dict(),
            "diagnostic": diagnostic.to_dict(),
        },
        oracle=oracle.to_dict(),
        timing=clock.phases,
    )
