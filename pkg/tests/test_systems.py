"""Testes para IETs, involuções de escala e transformações recíprocas."""

from fractions import Fraction

import numpy as np
import pytest

from recimap.exceptions import FieldMismatchError
from recimap.numeric import Scalar
from recimap.pamap import UNIT, Interval, IntervalSet, identity_map
from recimap.systems import (
    IETSpec,
    check_conjugacy,
    default_labels,
    make_iet,
    make_reciprocal,
    make_scaling_involution,
    random_system,
)

THIRD = Fraction(1, 3)


class TestIETSpec:
    def test_reversed_three_intervals(self):
        spec = IETSpec((Fraction(3, 10), Fraction(1, 2), Fraction(1, 5)), (2, 1, 0))
        assert spec.images == (
            Interval(Fraction(7, 10), 1),
            Interval(Fraction(1, 5), Fraction(7, 10)),
            Interval(0, Fraction(1, 5)),
        )

    def test_images_follow_permutation_positions(self):
        spec = IETSpec((Fraction(1, 9), Fraction(2, 9), Fraction(4, 9), Fraction(2, 9)), (1, 3, 2, 0))
        assert spec.images == (
            Interval(Fraction(2, 9), THIRD),
            Interval(Fraction(7, 9), 1),
            Interval(THIRD, Fraction(7, 9)),
            Interval(0, Fraction(2, 9)),
        )

    def test_lengths_must_sum_to_one(self):
        with pytest.raises(ValueError, match="somar 1"):
            IETSpec((Fraction(1, 2), Fraction(1, 3)), (0, 1))

    def test_permutation_must_be_bijective(self):
        with pytest.raises(ValueError, match="bijetiva"):
            IETSpec((Fraction(1, 2), Fraction(1, 2)), (0, 0))

    def test_permutation_size(self):
        with pytest.raises(ValueError):
            IETSpec((Fraction(1, 2), Fraction(1, 2)), (0, 1, 2))

    def test_lengths_must_be_positive(self):
        with pytest.raises(ValueError, match="positivo"):
            IETSpec((Fraction(3, 2), Fraction(-1, 2)), (1, 0))

    def test_empty(self):
        with pytest.raises(ValueError):
            IETSpec((), ())

    def test_mixed_fields(self):
        with pytest.raises(FieldMismatchError):
            IETSpec(
                (Scalar(Fraction(1, 2), Fraction(-1, 10), 2), Scalar(Fraction(1, 2), Fraction(1, 10), 3)),
                (1, 0),
            )


class TestMakeIET:
    def test_identity_permutation(self):
        spec = IETSpec((Fraction(1, 4), Fraction(3, 4)), (0, 1))
        assert make_iet(spec) == identity_map()

    def test_translations(self):
        spec = IETSpec((Fraction(3, 10), Fraction(1, 2), Fraction(1, 5)), (2, 1, 0))
        T = make_iet(spec)
        assert T.apply(0) == Fraction(7, 10)
        assert T.apply(Fraction(9, 10)) == Fraction(1, 10)
        assert T.is_bijection_on(UNIT)
        assert T.is_measure_preserving()


class TestScalingInvolution:
    @pytest.mark.parametrize(
        "s, rho",
        [(THIRD, 2), (Fraction(1, 4), 3), (Fraction(2, 5), Fraction(3, 2))],
    )
    def test_rho(self, s, rho):
        assert make_scaling_involution(s).rho == rho

    def test_involution(self):
        phi = make_scaling_involution(Fraction(1, 4)).as_map
        assert phi.power(2) == identity_map()
        assert phi.image_set(Interval(0, Fraction(1, 4))) == IntervalSet.from_bounds((Fraction(1, 4), 1))

    def test_rejects_irrational_s(self):
        s = Scalar(Fraction(-1, 2), Fraction(1, 2), 2)  # (√2 − 1)/2
        with pytest.raises(ValueError, match="racional"):
            make_scaling_involution(s)

    def test_rational_s_in_quadratic_system(self):
        # ρ racional, comprimentos em ℚ(√2)
        lengths = (Scalar(0, Fraction(1, 2), 2), Scalar(1, Fraction(-1, 2), 2))
        system = make_reciprocal(IETSpec(lengths, (1, 0)), THIRD)
        assert system.rho == 2
        assert system.phi.as_map.power(2) == identity_map()

    @pytest.mark.parametrize("s", [0, Fraction(1, 2), Fraction(3, 5), Fraction(-1, 3)])
    def test_rejects_out_of_range(self, s):
        with pytest.raises(ValueError):
            make_scaling_involution(s)


class TestMakeReciprocal:
    def test_identity_iet_gives_phi(self, scaling_third):
        assert scaling_third.F == scaling_third.phi.as_map
        assert scaling_third.T == identity_map()

    def test_nonsurjective_images(self, nonsurjective):
        F = nonsurjective.F
        domains = nonsurjective.iet.domains
        assert F.image_set(domains[0]) == IntervalSet.from_bounds((Fraction(2, 3), 1))
        assert F.image_set(domains[1]) == IntervalSet.from_bounds((Fraction(1, 4), THIRD))
        assert F.image_set(domains[2]) == IntervalSet.from_bounds((THIRD, Fraction(2, 3)))
        assert F.image_set(domains[3]) == IntervalSet.from_bounds((0, Fraction(1, 4)))

    def test_pair_rotation_image_row(self, pair_rotation):
        F = pair_rotation.F
        expected = {
            3: (0.0, 0.14628),
            2: (0.14628, 0.333),
            1: (0.333, 0.5153),
            0: (0.5153, 1.0),
        }
        for index, (lo, hi) in expected.items():
            (image,) = F.image_set(pair_rotation.iet.domains[index]).intervals
            assert float(image.lo) == pytest.approx(lo, abs=1e-3)
            assert float(image.hi) == pytest.approx(hi, abs=1e-3)

    def test_slopes_follow_preimage_of_S(self, any_system):
        S = IntervalSet.of(any_system.S)
        for branch in any_system.F.branches:
            lands_in_S = any_system.T.image_set(branch.domain).issubset(S)
            assert branch.slope == (any_system.rho if lands_in_S else any_system.rho.inverse())

    def test_branch_count(self, any_system):
        assert len(any_system.F) <= any_system.iet.size + 1
        assert any_system.F.is_bijection_on(UNIT)

    def test_field(self, pair_rotation_sqrt2, pair_rotation):
        assert pair_rotation_sqrt2.field_d == 2
        assert pair_rotation.field_d == 0

    def test_labels(self, figure1):
        assert figure1.labels == ("A", "B", "C")

    def test_label_count_mismatch(self):
        spec = IETSpec((Fraction(1, 2), Fraction(1, 2)), (1, 0))
        with pytest.raises(ValueError):
            make_reciprocal(spec, THIRD, labels=["A"])

    def test_default_labels_limit(self):
        assert default_labels(3) == ("A", "B", "C")
        with pytest.raises(ValueError):
            default_labels(27)


class TestConjugacy:
    def test_fixtures(self, any_system):
        assert check_conjugacy(any_system)

    def test_g_is_t_after_phi(self, figure1):
        x = Fraction(1, 10)
        assert figure1.G.apply(x) == figure1.T.apply(figure1.phi.as_map.apply(x))

    def test_random_rational_systems(self):
        rng = np.random.default_rng(2024)
        for _ in range(150):
            k = int(rng.integers(2, 7))
            s = Fraction(int(rng.integers(1, 50)), 101)
            system = random_system(rng, k, s)
            assert system.phi.as_map.power(2) == identity_map()
            assert check_conjugacy(system)

    def test_random_quadratic_systems(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            k = int(rng.integers(2, 6))
            s = Fraction(int(rng.integers(1, 50)), 101)
            system = random_system(rng, k, s, field_d=2)
            assert system.field_d == 2
            assert system.phi.as_map.power(2) == identity_map()
            assert check_conjugacy(system)

    def test_random_system_is_deterministic(self):
        first = random_system(np.random.default_rng(5), 4, THIRD)
        second = random_system(np.random.default_rng(5), 4, THIRD)
        assert first.F == second.F
