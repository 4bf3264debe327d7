"""Fixtures compartilhadas: os sistemas de exemplo e uma configuração rápida."""

from fractions import Fraction
from pathlib import Path

import pytest

from recimap.fixtures import FIXTURES, get_fixture
from recimap.systems import IETSpec, ReciprocalSystem, make_reciprocal

FAST_CONFIG = """\
analysis:
  budget: 64
  branch_cap: 100000
  wandering_horizon: 20
  invariant_max_depth: 20
  invariant_piece_cap: 2000
  power_bound: 2
  oracle_points: 200
maharam:
  orbit_steps: 500
  exact_orbit_cap: 500
  probes: 4
  probe_starts: 2
  ratio_steps: 60
  mu_checks: 5
  seed: 0
render:
  width: 700
  height: 200
"""


def system_named(name: str) -> ReciprocalSystem:
    return get_fixture(name).to_system()


@pytest.fixture(params=list(FIXTURES))
def any_system(request) -> ReciprocalSystem:
    return system_named(request.param)


@pytest.fixture
def scaling_third() -> ReciprocalSystem:
    return system_named("scaling_third")


@pytest.fixture
def identity() -> ReciprocalSystem:
    return system_named("identity")


@pytest.fixture
def pair_rotation() -> ReciprocalSystem:
    return system_named("pair_rotation")


@pytest.fixture
def pair_rotation_sqrt2() -> ReciprocalSystem:
    return system_named("pair_rotation_sqrt2")


@pytest.fixture
def wandering() -> ReciprocalSystem:
    return system_named("wandering")


@pytest.fixture
def nonsurjective() -> ReciprocalSystem:
    return system_named("nonsurjective")


@pytest.fixture
def figure1() -> ReciprocalSystem:
    return system_named("figure1")


@pytest.fixture
def rational_rotation() -> ReciprocalSystem:
    """Rotação por pares com α = (1/12 + (1/4)/2)/(1/3) = 5/8."""
    spec = IETSpec(
        (Fraction(1, 4), Fraction(1, 12), Fraction(5, 12), Fraction(1, 4)),
        (1, 0, 3, 2),
    )
    return make_reciprocal(spec, Fraction(1, 3), name="rational_rotation")


@pytest.fixture
def fast_config(tmp_path: Path) -> Path:
    path = tmp_path / "config.yaml"
    path.write_text(FAST_CONFIG, encoding="utf-8")
    return path
