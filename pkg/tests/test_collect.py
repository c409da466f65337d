"""Collection and presentation level tests."""

import pytest
from hypothesis import given, settings, strategies as st

from mindeg.errors import InconsistentPresentation, MalformedRule
from mindeg.pcpres import Collector, PcPresentation, overlap_witness


def cyclic(p, n):
    """Z_{p^n} on pc generators a_k = a^(p^k)."""
    powers = {k: {k + 1: 1} for k in range(n - 1)}
    return PcPresentation.make(p, n, powers, {})


def heisenberg(p):
    return PcPresentation.make(p, 3, {}, {(1, 0): {2: 1}})


def modular27():
    """Order 27 with an element of order 9: g1^3 = g2, [g1, g0] = g2."""
    return PcPresentation.make(3, 3, {1: {2: 1}}, {(1, 0): {2: 1}})


def word_of(digits):
    return [(g, e) for g, e in enumerate(digits) if e]


class TestMake:
    def test_rejects_composite_prime(self):
        with pytest.raises(MalformedRule):
            PcPresentation.make(4, 1, {}, {})

    def test_rejects_low_support(self):
        # a power rule for generator 1 may only mention generators > 1
        with pytest.raises(MalformedRule):
            PcPresentation.make(3, 2, {1: {0: 1}}, {})

    def test_rejects_self_support(self):
        with pytest.raises(MalformedRule):
            PcPresentation.make(3, 2, {0: {0: 1}}, {})

    def test_rejects_bad_commutator_key(self):
        with pytest.raises(MalformedRule):
            PcPresentation.make(3, 2, {}, {(0, 1): {1: 1}})

    def test_rejects_commutator_support_at_small_index(self):
        with pytest.raises(MalformedRule):
            PcPresentation.make(3, 3, {}, {(2, 0): {0: 1}})

    def test_exponents_reduced_mod_p(self):
        pres = PcPresentation.make(3, 2, {0: {1: 5}}, {})
        assert pres.power_rules[0] == ((1, 2),)

    def test_zero_exponent_dropped(self):
        pres = PcPresentation.make(3, 2, {0: {1: 3}}, {})
        assert pres.power_rules[0] == ()

    def test_labels_default(self):
        pres = heisenberg(3)
        assert pres.labels == ("g1", "g2", "g3")


class TestCollect:
    def test_cyclic_carry(self):
        # multiplying by a walks through all 27 elements before wrapping
        pres = cyclic(3, 3)
        col = Collector(pres)
        digits = (0, 0, 0)
        for _ in range(5):
            digits = col.collect(word_of(digits) + [(0, 1)])
        assert digits == (2, 1, 0)
        total = (0, 0, 0)
        for _ in range(27):
            total = col.collect(word_of(total) + [(0, 1)])
        assert total == (0, 0, 0)

    def test_heisenberg_commutator(self):
        pres = heisenberg(5)
        col = Collector(pres)
        # g2 g1 = g1 g2 g3
        assert col.collect([(1, 1), (0, 1)]) == (1, 1, 1)
        # and the commutator is central: g3 commutes with both
        assert col.collect([(2, 1), (0, 1)]) == (1, 0, 1)
        assert col.collect([(2, 1), (1, 1)]) == (0, 1, 1)

    def test_heisenberg_exponent_p(self):
        pres = heisenberg(3)
        col = Collector(pres)
        word = [(0, 1), (1, 1)]
        assert col.collect(word * 3) == (0, 0, 0)

    def test_modular_order9_element(self):
        # g0 g1 has order 9 even though every generator has order 3 or 9
        pres = modular27()
        col = Collector(pres)
        x = [(0, 1), (1, 1)]
        cube = col.collect(x * 3)
        assert any(cube), "g0 g1 should not cube to the identity"
        assert col.collect(word_of(cube) * 3) == (0, 0, 0)

    def test_commutator_via_complement_exponents(self):
        # cubes vanish in the Heisenberg group, so g^2 = g^-1 and the word
        # g1^2 g0^2 g1 g0 collects to the commutator [g1, g0] = g2
        col = Collector(heisenberg(3))
        assert col.collect([(1, 2), (0, 2), (1, 1), (0, 1)]) == (0, 0, 1)

    def test_exponent_overflow_folds_through_powers(self):
        pres = modular27()
        col = Collector(pres)
        assert col.collect([(1, 3)]) == (0, 0, 1)
        assert col.collect([(1, 7)]) == col.collect([(1, 1), (2, 2)])

    def test_negative_exponent_rejected(self):
        col = Collector(heisenberg(3))
        with pytest.raises(ValueError):
            col.collect([(0, -1)])


@st.composite
def words(draw, ngens, p, maxlen=8):
    n = draw(st.integers(min_value=0, max_value=maxlen))
    return [
        (draw(st.integers(0, ngens - 1)), draw(st.integers(0, p + 2)))
        for _ in range(n)
    ]


@settings(max_examples=60, deadline=None)
@given(w=words(3, 3), v=words(3, 3))
def test_collection_respects_concatenation(w, v):
    """collect(w + v) == collect(collect(w) + collect(v))."""
    col = Collector(modular27())
    lhs = col.collect(w + v)
    rhs = col.collect(word_of(col.collect(w)) + word_of(col.collect(v)))
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(w=words(3, 3))
def test_collected_word_times_reversed_complement_is_identity(w):
    col = Collector(heisenberg(3))
    inv = [(g, (-e) % 3) for g, e in reversed(w)]
    assert col.collect(w + inv) == (0, 0, 0)


class TestOverlapWitness:
    def test_consistent_presentations_pass(self):
        for pres in (cyclic(3, 3), heisenberg(3), heisenberg(5), modular27()):
            assert overlap_witness(pres) is None

    def test_commutator_out_of_step_with_powers(self):
        # [b,a] = b forces b^(a^p) = b^(2^p) != b
        pres = PcPresentation.make(3, 2, {}, {(1, 0): {1: 1}})
        msg = overlap_witness(pres)
        assert msg is not None
        assert "!=" in msg

    def test_wreath_like_rule_after_dropping_a_power(self):
        # [g2,g1] = g2^2 g3 looks plausible but fails the mixed overlap
        pres = PcPresentation.make(3, 3, {}, {(1, 0): {1: 2, 2: 1}})
        assert overlap_witness(pres) is not None

    def test_central_cube_is_fine(self):
        pres = PcPresentation.make(3, 3, {0: {2: 1}}, {(1, 0): {2: 2}})
        assert overlap_witness(pres) is None

    def test_witness_mentions_labels(self):
        pres = PcPresentation.make(
            3, 2, {}, {(1, 0): {1: 1}}, labels=("aa", "bb")
        )
        msg = overlap_witness(pres)
        assert "bb" in msg


class TestSpecDict:
    def test_round_trip(self):
        pres = PcPresentation.make(
            5, 3, {0: {1: 1}}, {(1, 0): {2: 3}}, labels=("x", "y", "z")
        )
        again = PcPresentation.from_spec_dict(pres.to_spec_dict())
        assert again == pres

    def test_unknown_field_rejected(self):
        with pytest.raises(MalformedRule):
            PcPresentation.from_spec_dict(
                {"prime": 3, "generators": ["a"], "powerz": {}}
            )

    def test_bad_commutator_key_rejected(self):
        with pytest.raises(MalformedRule):
            PcPresentation.from_spec_dict(
                {
                    "prime": 3,
                    "generators": ["a", "b"],
                    "commutators": {"b,a": {"b": 1}},
                }
            )

    def test_duplicate_generator_rejected(self):
        with pytest.raises(MalformedRule):
            PcPresentation.from_spec_dict({"prime": 3, "generators": ["a", "a"]})


def test_collector_guard_raises_instead_of_spinning():
    col = Collector(modular27(), max_steps=5)
    with pytest.raises(InconsistentPresentation):
        col.collect([(2, 2), (1, 2), (0, 2), (2, 1), (1, 1), (0, 1)])
