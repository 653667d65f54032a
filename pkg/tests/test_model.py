"""Model construction, shape classification, and monomial parameterizations.

The load-bearing check is composition: every parameterization must pull the
defining relation back to zero exactly, for generic and for rational K_e.
"""

import random
from fractions import Fraction

import pytest

from mldeg.model import (
    EquilibriumConstant,
    MonomialMap,
    ReactionShape,
    UnsupportedReactionError,
    build_model,
    build_parameterization,
    classify_ke,
    classify_shape,
    exact_root,
    fiber_degree,
    reduce_radical,
    species_var_names,
)
from mldeg.poly import MPoly, VarContext
from mldeg.reaction import parse_reaction


def model_of(text, ke="generic"):
    return build_model(parse_reaction(text), EquilibriumConstant.parse(str(ke)))


class TestEquilibriumConstant:
    def test_parse(self):
        assert EquilibriumConstant.parse("generic").is_generic
        assert EquilibriumConstant.parse(" GENERIC ").is_generic
        assert EquilibriumConstant.parse("4").value == 4
        assert EquilibriumConstant.parse("1/2").value == Fraction(1, 2)
        assert EquilibriumConstant.parse("-3").value == -3

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            EquilibriumConstant.parse("big")
        with pytest.raises(ValueError):
            EquilibriumConstant.parse("1/0")

    def test_positivity_flag(self):
        assert EquilibriumConstant.generic().positivity_flag
        assert EquilibriumConstant.of(3).positivity_flag
        assert not EquilibriumConstant.of(0).positivity_flag
        assert not EquilibriumConstant.of(-1).positivity_flag

    def test_str(self):
        assert str(EquilibriumConstant.generic()) == "generic"
        assert str(EquilibriumConstant.of(Fraction(1, 2))) == "1/2"


class TestBuildModel:
    def test_pair_generic(self):
        m = model_of("A <-> B")
        assert m.species_vars == ("x", "y")
        assert str(m.F_affine) == "x*K_e - y"
        assert str(m.F_hom) == "x*K_e - y"
        assert str(m.constraint) == "x + y - 1"
        assert m.degree == 1

    def test_two_one_generic(self):
        m = model_of("A + B <-> 2C")
        assert str(m.F_affine) == "x*y*K_e - z^2"
        assert str(m.F_hom) == "x*y*K_e - z^2"
        assert m.degree == 2

    def test_two_one_numeric_ke(self):
        m = model_of("A + B <-> 2C", 4)
        assert str(m.F_affine) == "4*x*y - z^2"
        assert "K_e" not in m.ctx

    def test_homogenization_pads_lower_side(self):
        # 2A <-> 3B: reactant side has degree 2, padded by L = x + y
        m = model_of("2A <-> 3B")
        assert m.degree == 3
        assert str(m.F_hom) == "x^3*K_e + x^2*y*K_e - y^3"
        # dehomogenizing on the constraint recovers the affine relation
        assert m.F_hom.substitute({"y": 1 - MPoly.var(m.ctx, "x")}) != m.F_affine

    def test_f_hom_is_homogeneous(self):
        for text in ("A <-> B", "A + B <-> 2C", "2A <-> 3B", "N2 + 3H2 <-> 2NH3"):
            m = model_of(text)
            degrees = {
                sum(e[m.ctx.index(v)] for v in m.species_vars)
                for e, _ in m.F_hom.items()
            }
            assert degrees == {m.degree}

    def test_species_variable_mapping(self):
        m = model_of("N2 + 3H2 <-> 2NH3")
        assert m.var_of("N2") == "x"
        assert m.var_of("H2") == "y"
        assert m.var_of("NH3") == "z"

    def test_five_species_names(self):
        assert species_var_names(5) == ("x0", "x1", "x2", "x3", "x4")
        m = model_of("A + B + C <-> D + E + F")
        assert m.species_vars == ("x0", "x1", "x2", "x3", "x4", "x5")

    def test_reserved_species_names_rejected(self):
        for bad in ("lam", "s", "u0", "u12"):
            with pytest.raises(ValueError):
                model_of(f"{bad} <-> B")

    def test_directed_arrow_rejected(self):
        with pytest.raises(ValueError):
            model_of("A -> B")


class TestShapeClassification:
    @pytest.mark.parametrize(
        "text, shape",
        [
            ("A <-> B", ReactionShape.PAIR),
            ("3A <-> 2B", ReactionShape.PAIR),
            ("A + B <-> C", ReactionShape.TWO_ONE),
            ("2A + 2B <-> 2C", ReactionShape.TWO_ONE),
            ("A + B <-> C + D", ReactionShape.SEGRE),
            ("A + B + C <-> D + E + F", ReactionShape.CHAIN),
            ("A + B + C + D <-> E + F + G + H", ReactionShape.CHAIN),
            ("A + B <-> 2C + D", ReactionShape.UNSUPPORTED),
            ("2A + B <-> C + D", ReactionShape.UNSUPPORTED),
            ("A + B + C <-> D + E", ReactionShape.UNSUPPORTED),
            ("A <-> B + C", ReactionShape.UNSUPPORTED),
        ],
    )
    def test_classification(self, text, shape):
        assert classify_shape(parse_reaction(text)) is shape

    def test_two_two_with_units_is_segre_not_chain(self):
        assert classify_shape(parse_reaction("A + B <-> C + D")) is ReactionShape.SEGRE


class TestExactRoot:
    def test_values(self):
        assert exact_root(Fraction(8), 3) == 2
        assert exact_root(Fraction(1, 4), 2) == Fraction(1, 2)
        assert exact_root(Fraction(-8), 3) == -2
        assert exact_root(Fraction(2), 2) is None
        assert exact_root(Fraction(-4), 2) is None
        assert exact_root(Fraction(0), 5) == 0

    def test_random_perfect_powers(self):
        rng = random.Random(31)
        for _ in range(100):
            base = Fraction(rng.randrange(1, 20), rng.randrange(1, 20))
            power = rng.randrange(1, 5)
            assert exact_root(base ** power, power) == base


def pullback_is_zero(model, monomial_map):
    images = dict(monomial_map.images)
    if model.ke.is_generic:
        images["K_e"] = MPoly.var(monomial_map.ctx, "K_e")
    composed = model.F_affine.compose(images, monomial_map.ctx)
    return reduce_radical(composed, monomial_map.radical).is_zero()


class TestParameterization:
    SHAPES = ("A <-> B", "2A <-> 3B", "2A <-> 2B", "A + B <-> 2C",
              "A + 2B <-> C", "2A + 2B <-> 2C", "N2 + 3H2 <-> 2NH3",
              "A + B + C <-> D + E + F")

    def test_composition_check_all_shapes_and_constants(self):
        for text in self.SHAPES:
            for ke in ("generic", "1", "2", "3", "5", "1/2"):
                m = model_of(text, ke)
                monomial_map = build_parameterization(m)
                assert pullback_is_zero(m, monomial_map), (text, ke)

    def test_pair_images(self):
        monomial_map = build_parameterization(model_of("2A <-> 3B"))
        assert monomial_map.param_vars == ("p0",)
        assert str(monomial_map.images["x"]) == "p0^3"
        assert str(monomial_map.images["y"]) == "p0^2*s"
        assert monomial_map.radical is not None
        assert (monomial_map.radical.symbol, monomial_map.radical.power) == ("s", 3)
        assert monomial_map.covers_model

    def test_unit_pair_absorbs_ke_directly(self):
        monomial_map = build_parameterization(model_of("A <-> B"))
        assert monomial_map.radical is None
        assert str(monomial_map.images["y"]) == "p0*K_e"

    def test_two_one_images(self):
        monomial_map = build_parameterization(model_of("A + B <-> 2C"))
        assert monomial_map.param_vars == ("t0", "t1")
        assert str(monomial_map.images["x"]) == "t0^2"
        assert str(monomial_map.images["y"]) == "t1^2"
        assert str(monomial_map.images["z"]) == "t0*t1*s"
        assert monomial_map.exponent_matrix == ((2, 0, 1), (0, 2, 1))

    def test_exact_radical_absorbed(self):
        # K_e = 4 with square radical: s = 2 exactly, no symbol left
        monomial_map = build_parameterization(model_of("A + B <-> 2C", 4))
        assert monomial_map.radical is None
        assert str(monomial_map.images["z"]) == "2*t0*t1"

    def test_inexact_radical_kept_symbolic(self):
        monomial_map = build_parameterization(model_of("A + B <-> 2C", 5))
        assert monomial_map.radical is not None
        assert str(monomial_map.radical) == "s^2 = 5"

    def test_chain_does_not_cover(self):
        monomial_map = build_parameterization(model_of("A + B + C <-> D + E + F"))
        assert not monomial_map.covers_model
        assert any("does not cover" in c for c in monomial_map.caveats)
        assert monomial_map.param_vars == ("p0",)

    def test_non_coprime_shapes_flag_branch(self):
        monomial_map = build_parameterization(model_of("2A <-> 2B"))
        assert not monomial_map.covers_model
        assert any("irreducible branch" in c for c in monomial_map.caveats)

    def test_segre_has_closed_form(self):
        assert build_parameterization(model_of("A + B <-> C + D")) is None

    def test_unsupported_raises_with_shape_list(self):
        with pytest.raises(UnsupportedReactionError) as info:
            build_parameterization(model_of("A + B <-> 2C + D"))
        assert "supported shapes" in str(info.value)
        assert "(IV)" in str(info.value)

    def test_ke_zero_has_no_parameterization(self):
        with pytest.raises(ValueError):
            build_parameterization(model_of("A + B <-> 2C", 0))


class TestFiberDegree:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("A <-> B", 1),
            ("2A <-> 3B", 1),
            ("2A <-> 2B", 1),
            ("A + B <-> 2C", 2),
            ("A + B <-> 3C", 3),
            ("2A + 2B <-> 2C", 4),
            ("2A + 2B <-> C", 1),
            ("A + 2B <-> C", 1),
            ("N2 + 3H2 <-> 2NH3", 2),
            ("A + B + C <-> D + E + F", 1),
        ],
    )
    def test_values(self, text, expected):
        monomial_map = build_parameterization(model_of(text))
        assert fiber_degree(monomial_map) == expected


class TestReduceRadical:
    def test_folding(self):
        monomial_map = build_parameterization(model_of("A + B <-> 2C", 5))
        ctx = monomial_map.ctx
        s = MPoly.var(ctx, "s")
        assert reduce_radical(s ** 2, monomial_map.radical) == MPoly.const(ctx, 5)
        assert reduce_radical(s ** 3, monomial_map.radical) == 5 * s
        assert reduce_radical(s ** 7, monomial_map.radical) == 125 * s

    def test_generic_folds_into_ke(self):
        monomial_map = build_parameterization(model_of("A + B <-> 2C"))
        ctx = monomial_map.ctx
        s = MPoly.var(ctx, "s")
        k = MPoly.var(ctx, "K_e")
        assert reduce_radical(s ** 2, monomial_map.radical) == k
        assert reduce_radical(s ** 5, monomial_map.radical) == k ** 2 * s

    def test_no_relation_is_identity(self):
        ctx = VarContext.of(("x", "unknown"))
        f = MPoly.var(ctx, "x") + 1
        assert reduce_radical(f, None) == f


class TestClassifyKe:
    def test_generic(self):
        c = classify_ke(model_of("A + B <-> 2C"))
        assert c.kind == "generic"
        assert not c.nonphysical_warning

    def test_degenerate_square(self):
        c = classify_ke(model_of("A + B <-> 2C", 4))
        assert c.kind == "degenerate"
        assert "drops" in c.description

    def test_zero(self):
        c = classify_ke(model_of("A <-> B", 0))
        assert c.kind == "degenerate"
        assert c.nonphysical_warning

    def test_negative_pair(self):
        c = classify_ke(model_of("A <-> B", -1))
        assert c.kind == "degenerate"
        assert c.nonphysical_warning

    def test_ordinary_value_is_generic(self):
        c = classify_ke(model_of("A + B <-> 2C", 5))
        assert c.kind == "generic"
