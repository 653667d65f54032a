"""Critical systems, resultant elimination, and parameter-space counts.

Pinned eliminants for the (1,2,1), (2,2,2), and (3,3,3) two-one systems are
spelled out term by term from the Lagrange derivation, so the elimination
pipeline is checked against hand-expanded forms, not against itself.
"""

import dataclasses
import random

import pytest

from mldeg.critical import (
    DegenerateEliminationError,
    ObservationCounts,
    build_critical_system,
    eliminate,
    faithful_report,
    ml_degree_faithful,
    solve_critical_numeric,
)
from mldeg.model import (
    EquilibriumConstant,
    build_model,
    build_parameterization,
)
from mldeg.poly import MPoly
from mldeg.reaction import parse_reaction


def system_for(text, ke="generic", counts=None):
    model = build_model(parse_reaction(text), EquilibriumConstant.parse(str(ke)))
    monomial_map = build_parameterization(model)
    if counts is None:
        counts = ObservationCounts.symbolic(len(model.species))
    return build_critical_system(monomial_map, counts)


def model_of(text, ke="generic"):
    return build_model(parse_reaction(text), EquilibriumConstant.parse(str(ke)))


def equal_up_to_scalar(f, g):
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    (ef, cf) = f.items()[0]
    (eg, cg) = g.items()[0]
    return ef == eg and f * cg == g * cf


class TestObservationCounts:
    def test_symbolic(self):
        counts = ObservationCounts.symbolic(3)
        assert counts.is_symbolic
        assert counts.symbols() == ("u0", "u1", "u2")
        assert counts.sample_size is None

    def test_numeric(self):
        counts = ObservationCounts.numeric((3, 5, 7))
        assert not counts.is_symbolic
        assert counts.sample_size == 15

    def test_validation(self):
        with pytest.raises(ValueError):
            ObservationCounts.numeric((1, -1))
        with pytest.raises(ValueError):
            ObservationCounts.numeric((0, 0))
        with pytest.raises(ValueError):
            ObservationCounts.symbolic(0)


class TestSystemConstruction:
    def test_unit_pair_equation(self):
        system = system_for("A <-> B")
        assert len(system.equations) == 1
        assert str(system.equations[0]) == "p0*lam*K_e + p0*lam - u0 - u1"
        assert system.survivor == "p0"

    def test_pair_with_radical(self):
        system = system_for("2A <-> 3B")
        ctx = system.ctx
        p0, lam, s, u0, u1 = (MPoly.var(ctx, n) for n in ("p0", "lam", "s", "u0", "u1"))
        expected = 3 * lam * p0 ** 3 + 2 * lam * s * p0 ** 2 - (3 * u0 + 2 * u1)
        assert system.equations[0] == expected

    def test_two_one_weights(self):
        system = system_for("A + B <-> 2C")
        ctx = system.ctx
        u = [MPoly.var(ctx, f"u{i}") for i in range(3)]
        assert system.weights[0] == 2 * u[0] + u[2]
        assert system.weights[1] == 2 * u[1] + u[2]
        assert system.survivor == "t1"

    def test_numeric_counts_become_constants(self):
        system = system_for("A + B <-> 2C", "5", ObservationCounts.numeric((2, 3, 5)))
        assert system.weights[0].is_constant()
        assert system.weights[0].constant_value() == 2 * 2 + 5

    def test_count_size_mismatch(self):
        monomial_map = build_parameterization(model_of("A + B <-> 2C"))
        with pytest.raises(ValueError):
            build_critical_system(monomial_map, ObservationCounts.symbolic(2))

    def test_lagrange_structure(self):
        # f_i = lam * t_i * dg/dt_i - w_i, checked against a manual rebuild
        system = system_for("A + B <-> 3C", "1")
        ctx = system.ctx
        lam = MPoly.var(ctx, "lam")
        g = system.constraint_pullback
        for t_name, eq, w in zip(("t0", "t1"), system.equations, system.weights):
            t = MPoly.var(ctx, t_name)
            assert eq == lam * t * g.partial_derivative(t_name) - w


class TestPinnedEliminants:
    def test_unit_pair_eliminant_is_the_single_equation(self):
        system = system_for("A <-> B")
        assert eliminate(system) == system.equations[0]
        assert ml_degree_faithful(system) == 1

    def test_one_two_one_printed_form(self):
        # A + 2B <-> C at K_e = 1: the 2x2 Sylvester resultant expands to
        # lam^2*t1 + lam*b + lam^2*t1^3 + lam*t1^2*b - 2a*lam*t1^2
        # with a = -(u0 + u2), b = -(u1 + 2u2)
        system = system_for("A + 2B <-> C", "1")
        ctx = system.ctx
        lam = MPoly.var(ctx, "lam")
        t1 = MPoly.var(ctx, "t1")
        a = -system.weights[0]
        b = -system.weights[1]
        printed = (
            lam ** 2 * t1 + lam * b + lam ** 2 * t1 ** 3
            + lam * t1 ** 2 * b - 2 * a * lam * t1 ** 2
        )
        eliminant = eliminate(system)
        assert eliminant == printed
        assert eliminant.degree_in("t1") == 3
        assert eliminant.valuation_in("t1") == 0
        assert ml_degree_faithful(system) == 3

    def test_two_two_two_printed_form(self):
        # 2A + 2B <-> 2C at K_e = 1, fourteen printed terms
        system = system_for("2A + 2B <-> 2C", "1")
        ctx = system.ctx
        lam = MPoly.var(ctx, "lam")
        t1 = MPoly.var(ctx, "t1")
        a = -system.weights[0]
        b = -system.weights[1]
        printed = (
            16 * lam ** 4 * t1 ** 4 + 16 * lam ** 3 * t1 ** 2 * b
            + 4 * lam ** 2 * b ** 2 + 32 * lam ** 4 * t1 ** 6
            + 32 * lam ** 3 * t1 ** 4 * b + 8 * lam ** 2 * t1 ** 2 * b ** 2
            - 16 * lam ** 3 * t1 ** 4 * a - 8 * lam ** 2 * t1 ** 2 * a * b
            + 16 * lam ** 4 * t1 ** 8 + 16 * lam ** 3 * t1 ** 6 * b
            + 4 * lam ** 2 * t1 ** 4 * b ** 2 - 16 * lam ** 3 * t1 ** 6 * a
            - 8 * lam ** 2 * t1 ** 4 * a * b + 4 * lam ** 2 * t1 ** 4 * a ** 2
        )
        assert equal_up_to_scalar(eliminate(system), printed)
        assert ml_degree_faithful(system) == 8

    def test_three_three_three_printed_cube(self):
        system = system_for("3A + 3B <-> 3C", "1")
        ctx = system.ctx
        lam = MPoly.var(ctx, "lam")
        t1 = MPoly.var(ctx, "t1")
        a = -system.weights[0]
        b = -system.weights[1]
        inner = (
            9 * lam ** 2 * t1 ** 3 + 3 * lam * b + 9 * lam ** 2 * t1 ** 6
            + 3 * lam * t1 ** 3 * b - 3 * a * lam * t1 ** 3
        )
        eliminant = eliminate(system)
        assert equal_up_to_scalar(eliminant, inner ** 3)
        assert eliminant.degree_in("t1") == 18
        assert eliminant.valuation_in("t1") == 0

    def test_degenerate_elimination_reported(self):
        system = system_for("A + B <-> 2C", "5")
        ctx = system.ctx
        t0 = MPoly.var(ctx, "t0")
        t1 = MPoly.var(ctx, "t1")
        broken = dataclasses.replace(
            system, equations=(t0 * t1, t0 * (t1 + 1))
        )
        with pytest.raises(DegenerateEliminationError) as info:
            eliminate(broken)
        assert info.value.variable == "t0"
        assert info.value.gcd_degree == 1
        assert "share a factor" in str(info.value)


class TestFaithfulCounts:
    # (reaction, ke, parameter count, fiber degree, variety quotient)
    TABLE = [
        ("A <-> B", "generic", 1, 1, 1),
        ("A <-> B", "-1", 0, 1, 0),
        ("A + B <-> 2C", "generic", 4, 2, 2),
        ("A + B <-> 2C", "4", 2, 2, 1),
        ("2A <-> 2B", "generic", 1, 1, 1),
        ("3A <-> 3B", "generic", 1, 1, 1),
        ("2A <-> 3B", "generic", 3, 1, 3),
        ("A + B <-> 3C", "generic", 9, 3, 3),
        ("2A + 2B <-> 2C", "generic", 8, 4, 2),
        ("2A + 2B <-> C", "generic", 4, 1, 4),
        ("A + 2B <-> C", "generic", 3, 1, 3),
        ("3A + 3B <-> 3C", "generic", 18, 9, 2),
        ("N2 + 3H2 <-> 2NH3", "generic", 8, 2, 4),
        ("A + B + C <-> D + E + F", "generic", 1, 1, 1),
    ]

    @pytest.mark.parametrize("text, ke, count, fiber, quotient", TABLE)
    def test_parameter_space_counts(self, text, ke, count, fiber, quotient):
        report = faithful_report(model_of(text, ke))
        assert report.parameter_space_count == count
        assert report.fiber_degree == fiber
        assert report.variety_count_quotient == quotient

    def test_segre_closed_form_entry(self):
        report = faithful_report(model_of("A + B <-> C + D"))
        assert report.parameter_space_count == 1
        assert report.fiber_degree is None
        assert report.eliminant is None
        assert any("closed-form" in c for c in report.caveats)

    def test_ke_zero_collapses(self):
        report = faithful_report(model_of("A + B <-> 2C", "0"))
        assert report.parameter_space_count == 0
        assert report.degeneracy
        assert "drops" in report.degeneracy_description

    def test_degenerate_square_ke_detected(self):
        report = faithful_report(model_of("A + B <-> 2C", "4"))
        assert report.degeneracy
        assert "from 4 to 2" in report.degeneracy_description
        assert report.generic_parameter_space_count == 4

    def test_ordinary_ke_not_degenerate(self):
        report = faithful_report(model_of("A + B <-> 2C", "5"))
        assert not report.degeneracy
        assert report.parameter_space_count == 4

    def test_negative_pair_ke_degenerate(self):
        # K_e = -1 makes the pullback constraint constant: count drops to 0
        report = faithful_report(model_of("A <-> B", "-1"))
        assert report.degeneracy
        assert report.parameter_space_count == 0
        assert report.generic_parameter_space_count == 1

    def test_chain_does_not_cover(self):
        report = faithful_report(model_of("A + B + C <-> D + E + F"))
        assert not report.covers_model
        assert report.parameter_space_count == 1

    def test_report_dict_round_trip(self):
        d = faithful_report(model_of("A + B <-> 3C")).to_dict()
        assert d["parameter_space_count"] == 9
        assert d["fiber_degree"] == 3
        assert d["variety_count_quotient"] == 3
        assert d["degeneracy"] == "none"
        assert d["method"] == "faithful"

    def test_numeric_counts_give_same_degree_profile(self):
        counts = ObservationCounts.numeric((2, 3, 5))
        report = faithful_report(model_of("A + B <-> 2C"), counts)
        assert report.parameter_space_count == 4

    def test_u_scaling_leaves_counts_unchanged(self):
        for text in ("A + B <-> 2C", "2A <-> 3B", "A + B <-> 3C"):
            base = None
            for scale in (1, 2, 7):
                counts = ObservationCounts.numeric((2 * scale, 3 * scale, 5 * scale))
                counts = ObservationCounts.numeric(counts.values[: len(model_of(text).species)])
                report = faithful_report(model_of(text), counts)
                if base is None:
                    base = report.parameter_space_count
                assert report.parameter_space_count == base


class TestNumericSolve:
    def test_quartic_count_and_residuals(self):
        system = system_for(
            "A + B <-> 2C", "5", ObservationCounts.numeric((3, 5, 7))
        )
        points = solve_critical_numeric(system)
        assert len(points) == 4
        for p in points:
            assert p["residual_max"] < 1e-9
            assert set(p) >= {"t0", "t1", "lam", "residual_max"}

    def test_pair_cubic_roots(self):
        system = system_for("2A <-> 3B", "1", ObservationCounts.numeric((3, 5)))
        points = solve_critical_numeric(system)
        assert len(points) == 3
        reals = [p for p in points if abs(p["p0"].imag) < 1e-9]
        assert len(reals) == 1
        # the positive branch solves p0^3 + p0^2 = 1
        r = reals[0]["p0"].real
        assert abs(r ** 3 + r ** 2 - 1) < 1e-9

    def test_u_scaling_leaves_points_unchanged(self):
        def t1_values(scale):
            system = system_for(
                "A + B <-> 2C", "5",
                ObservationCounts.numeric((3 * scale, 5 * scale, 7 * scale)),
            )
            return [p["t1"] for p in solve_critical_numeric(system)]

        base = t1_values(1)
        for scale in (2, 7):
            scaled = t1_values(scale)
            assert len(scaled) == len(base)
            remaining = list(scaled)
            for z in base:
                match = min(remaining, key=lambda w: abs(w - z))
                assert abs(match - z) < 1e-8
                remaining.remove(match)

    def test_rejects_symbolic_inputs(self):
        with pytest.raises(ValueError):
            solve_critical_numeric(system_for("A + B <-> 2C", "5"))
        with pytest.raises(ValueError):
            solve_critical_numeric(
                system_for("A + B <-> 2C", "generic",
                           ObservationCounts.numeric((1, 1, 1)))
            )
