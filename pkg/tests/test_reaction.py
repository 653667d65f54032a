"""Reaction grammar: parse/format round trips and fault offsets."""

import random

import pytest

from mldeg.reaction import (
    Arrow,
    Reaction,
    ReactionParseError,
    SpeciesTerm,
    format_reaction,
    parse_reaction,
    reaction_order,
)


def random_reaction(rng):
    names = rng.sample(
        ["A", "B", "C", "D", "E2", "NH3", "H2O", "Xy", "n2o", "q0"],
        rng.randrange(2, 6),
    )
    cut = rng.randrange(1, len(names))
    arrow = rng.choice(list(Arrow))
    left = tuple(SpeciesTerm(n, rng.randrange(1, 7)) for n in names[:cut])
    right = tuple(SpeciesTerm(n, rng.randrange(1, 7)) for n in names[cut:])
    return Reaction(left, right, arrow)


class TestRoundTrip:
    def test_random_round_trips(self):
        rng = random.Random(21)
        for _ in range(200):
            r = random_reaction(rng)
            assert parse_reaction(format_reaction(r)) == r

    def test_whitespace_and_coefficients(self):
        r = parse_reaction("  2A+3 B2 <->   C ")
        assert r == Reaction(
            (SpeciesTerm("A", 2), SpeciesTerm("B2", 3)),
            (SpeciesTerm("C", 1),),
            Arrow.EQUILIBRIUM,
        )
        assert format_reaction(r) == "2A + 3B2 <-> C"

    def test_unit_coefficients_not_printed(self):
        r = parse_reaction("1A <-> 2B")
        assert format_reaction(r) == "A <-> 2B"

    def test_all_arrows(self):
        assert parse_reaction("A -> B").arrow is Arrow.FORWARD
        assert parse_reaction("A <- B").arrow is Arrow.BACKWARD
        assert parse_reaction("A <-> B").arrow is Arrow.EQUILIBRIUM


class TestFaults:
    @pytest.mark.parametrize(
        "text, offset",
        [
            ("A + <-> B", 4),       # empty term where the arrow sits
            ("A + B", 5),           # missing arrow, fault at end of text
            ("<-> B", 0),           # empty left side
            ("A <->", 5),           # empty right side
            ("A ? B", 2),           # unrecognized token
            ("0A <-> B", 0),        # zero coefficient
            ("A <-> B C", 8),       # trailing input
        ],
    )
    def test_offsets(self, text, offset):
        with pytest.raises(ReactionParseError) as info:
            parse_reaction(text)
        assert info.value.offset == offset
        assert f"at offset {offset}" in str(info.value)

    def test_duplicate_on_one_side(self):
        with pytest.raises(ReactionParseError) as info:
            parse_reaction("A + A <-> B")
        assert "duplicate" in info.value.reason

    def test_species_on_both_sides(self):
        with pytest.raises(ReactionParseError) as info:
            parse_reaction("A + B <-> A")
        assert "both sides" in info.value.reason
        assert info.value.offset == 10

    def test_error_is_value_error(self):
        with pytest.raises(ValueError):
            parse_reaction("")


class TestDataModel:
    def test_species_order(self):
        r = parse_reaction("2H2 + O2 <-> 2H2O")
        assert r.species == ("H2", "O2", "H2O")

    def test_reaction_order(self):
        assert reaction_order(parse_reaction("2A + 3B <-> C")) == 5
        assert reaction_order(parse_reaction("A <-> 4B")) == 1

    def test_term_validation(self):
        with pytest.raises(ValueError):
            SpeciesTerm("A", 0)
        with pytest.raises(ValueError):
            SpeciesTerm("2bad", 1)

    def test_reaction_validation(self):
        a, b = SpeciesTerm("A"), SpeciesTerm("B")
        with pytest.raises(ValueError):
            Reaction((), (b,), Arrow.EQUILIBRIUM)
        with pytest.raises(ValueError):
            Reaction((a, a), (b,), Arrow.EQUILIBRIUM)
        with pytest.raises(ValueError):
            Reaction((a,), (a,), Arrow.EQUILIBRIUM)
