"""Subgroup machinery: echelon generators, enumeration, cores, invariants."""

import numpy as np
import pytest

from mindeg.catalog import build_group
from mindeg.errors import BoundExceeded, NotAbelian
from mindeg.groups import build_pc_group, generated_bits
from mindeg.lattice import (
    LatticeIndex,
    abelian_invariants,
    all_subgroups,
    center,
    core,
    echelon_gens,
    has_abelian_normal_of_order,
    is_normal,
    normalizer,
    omega1_center,
    pc_presentation_from_subgroup,
    sift,
    socle_minimal_normals,
    subgroup_from_gens,
    subgroup_from_words,
)


@pytest.fixture(scope="module")
def q8():
    return build_group("q8", 2)


@pytest.fixture(scope="module")
def heis3():
    return build_group("p3_heis", 3)


@pytest.fixture(scope="module")
def e2():
    return build_group("p5_exc_b", 3)


class TestSubgroupBasics:
    def test_from_words(self, heis3):
        h = subgroup_from_words(heis3, ["x", "z"])
        assert h.order == 9
        assert h.contains(heis3.gen("z").id)
        assert not h.contains(heis3.gen("y").id)

    def test_whole_group_and_trivial(self, heis3):
        g = subgroup_from_gens(heis3, range(heis3.order))
        assert g.order == 27
        t = subgroup_from_gens(heis3, [])
        assert t.order == 1
        assert t.index == 27

    def test_gens_regenerate(self, e2):
        h = subgroup_from_words(e2, ["x*y^2", "n"])
        again = subgroup_from_gens(e2, h.gens)
        assert h == again

    def test_word_with_star_and_caret(self, e2):
        h = subgroup_from_words(e2, ["xp*n^2"])
        assert h.order == 3
        zp = e2.evaluate_word((("z", 3),))
        assert h.contains(zp), "xp*n^2 generates the same line as z^p"


class TestEchelonAndSift:
    def test_echelon_gens_generate(self, heis3):
        sub = subgroup_from_words(heis3, ["x*y", "z"])
        ech = echelon_gens(heis3, sub.members)
        bits = generated_bits(heis3, ech)
        assert (bits == sub.bits).all()

    def test_sift_membership(self, heis3):
        sub = subgroup_from_words(heis3, ["x*y", "z"])
        ech = echelon_gens(heis3, sub.members)
        for x in range(27):
            exps = sift(heis3, ech, x)
            assert (exps is not None) == bool(sub.bits[x])
            if exps is not None:
                y = 0
                for q, e in zip(ech, exps):
                    y = heis3.mult(y, heis3.power(q, e))
                assert y == x

    def test_echelon_size_is_log(self, e2):
        for words in (["x"], ["x", "y"], ["z", "n"], ["x", "y", "z", "n"]):
            sub = subgroup_from_words(e2, words)
            ech = echelon_gens(e2, sub.members)
            assert 3 ** len(ech) == sub.order


class TestCenters:
    def test_center_q8(self, q8):
        assert center(q8).order == 2

    def test_center_heis(self, heis3):
        z = center(heis3)
        assert z.order == 3
        assert z.contains(heis3.gen("z").id)

    def test_center_e2(self, e2):
        z = center(e2)
        assert z.order == 9
        assert abelian_invariants(z) == (3, 3)

    def test_omega1_center(self, e2):
        w = omega1_center(e2)
        assert w.order == 9  # the center has exponent 3 here

    def test_omega1_center_of_modular(self):
        g = build_group("p3_modular", 3)
        assert center(g).order == 3
        assert omega1_center(g).order == 3

    def test_socle_line_count(self, e2):
        lines = socle_minimal_normals(e2)
        assert len(lines) == 4  # (3^2 - 1) / (3 - 1)
        for line in lines:
            assert line.order == 3
            assert is_normal(e2, line)

    def test_socle_of_q8(self, q8):
        lines = socle_minimal_normals(q8)
        assert len(lines) == 1


class TestNormalizersAndCores:
    def test_normalizer_of_normal_is_whole(self, heis3):
        sub = subgroup_from_words(heis3, ["z"])
        assert normalizer(heis3, sub).order == 27

    def test_normalizer_proper(self):
        d8 = build_group("d8", 2)
        s = subgroup_from_words(d8, ["s"])
        n = normalizer(d8, s)
        assert n.order == 4

    def test_core_of_nonnormal(self):
        d8 = build_group("d8", 2)
        s = subgroup_from_words(d8, ["s"])
        assert core(d8, s).order == 1

    def test_core_is_largest_normal_inside(self, e2):
        h = subgroup_from_words(e2, ["y", "z"])
        c = core(e2, h)
        assert c.order == 3
        assert is_normal(e2, c)
        assert all(h.contains(m) for m in c.members)

    def test_core_of_normal_is_itself(self, e2):
        h = subgroup_from_words(e2, ["x", "y"])
        assert is_normal(e2, h)
        assert core(e2, h) == h


class TestAbelianInvariants:
    def test_cyclic(self):
        g = build_group("cyc3", 3)
        full = subgroup_from_gens(g, g.digit_gens)
        assert abelian_invariants(full) == (27,)

    def test_mixed(self):
        g = build_group("cyc2", 3)
        h = build_group("cyc1", 3)
        from mindeg.groups import DirectProductGroup

        prod = DirectProductGroup(g, h)
        full = subgroup_from_gens(prod, prod.digit_gens)
        assert abelian_invariants(full) == (9, 3)

    def test_elementary(self):
        g = build_group("elem3", 3)
        full = subgroup_from_gens(g, g.digit_gens)
        assert abelian_invariants(full) == (3, 3, 3)

    def test_nonabelian_rejected(self, heis3):
        full = subgroup_from_gens(heis3, heis3.digit_gens)
        with pytest.raises(NotAbelian):
            abelian_invariants(full)


class TestDerivedPresentations:
    def test_round_trip_on_subgroup(self, e2):
        sub = subgroup_from_words(e2, ["y", "z"])
        pres = pc_presentation_from_subgroup(sub)
        again = build_pc_group(pres)
        assert again.order == sub.order
        assert sorted(again.order_vec.tolist()) == sorted(
            int(e2.order_vec[m]) for m in sub.members
        )

    def test_nonabelian_section(self, e2):
        sub = subgroup_from_words(e2, ["x", "y", "xp", "n"])
        pres = pc_presentation_from_subgroup(sub)
        again = build_pc_group(pres)
        assert again.order == 81
        commutes = all(
            e2.comm(int(a), int(b)) == 0 for a in sub.members for b in sub.members
        )
        assert again.is_abelian == commutes


class TestEnumeration:
    def test_q8_has_six_subgroups(self, q8):
        assert len(all_subgroups(q8)) == 6

    def test_heis_has_nineteen(self, heis3):
        lat = all_subgroups(heis3)
        assert len(lat) == 19
        by_order = {o: len(ps) for o, ps in lat.by_order.items()}
        assert by_order == {1: 1, 3: 13, 9: 4, 27: 1}

    def test_elem2_has_six(self):
        g = build_group("elem2", 3)
        assert len(all_subgroups(g)) == 6  # 1 + 4 lines + 1

    def test_elem4_count(self):
        g = build_group("elem4", 3)
        lat = all_subgroups(g)
        # Gaussian binomials for (4 choose k) at q = 3: 1, 40, 130, 40, 1
        assert [len(lat.by_order.get(3 ** k, [])) for k in range(5)] == [
            1,
            40,
            130,
            40,
            1,
        ]
        assert len(lat) == 212

    def test_all_subgroups_closed_under_conjugacy(self, q8):
        lat = all_subgroups(q8)
        assert all(lat.normal_flags), "every subgroup of q8 is normal"

    def test_d8_classes(self):
        d8 = build_group("d8", 2)
        lat = all_subgroups(d8)
        assert len(lat) == 10
        sizes = sorted(len(c) for c in lat.classes)
        assert sizes == [1, 1, 1, 1, 1, 1, 2, 2]

    def test_bound_exceeded(self, e2):
        with pytest.raises(BoundExceeded):
            all_subgroups(e2, bound=100)

    def test_lattice_memoized(self, q8):
        assert all_subgroups(q8) is all_subgroups(q8)

    def test_disk_cache_round_trip(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MINDEG_CACHE_DIR", str(tmp_path))
        g1 = build_pc_group(build_group("p3_heis", 3).pres)
        lat1 = all_subgroups(g1)
        files = list(tmp_path.iterdir())
        assert files, "expected a cache file to be written"
        # a fresh group object with the same table loads from disk
        g2 = build_pc_group(g1.pres)
        assert g2 is not g1
        lat2 = all_subgroups(g2)
        assert len(lat2) == len(lat1)
        assert [s.key for s in lat2.subgroups] == [s.key for s in lat1.subgroups]

    def test_e2_lattice_size(self, e2):
        lat = all_subgroups(e2)
        assert len(lat) == 99

    def test_normal_positions_match_flags(self, heis3):
        lat = all_subgroups(heis3)
        for pos in lat.normal_positions():
            assert is_normal(heis3, lat.subgroups[pos])

    def test_core_pos_shared_across_class(self):
        d8 = build_group("d8", 2)
        lat = all_subgroups(d8)
        for cls in lat.classes:
            cores = {lat.core_pos(pos) for pos in cls}
            assert len(cores) == 1


def test_has_abelian_normal_of_order(e2):
    ok, witness = has_abelian_normal_of_order(e2, 27)
    assert ok
    assert witness.order == 27
    assert is_normal(e2, witness)
    ok, witness = has_abelian_normal_of_order(e2, 243)
    assert not ok and witness is None


def test_subgroup_equality_and_hash(heis3):
    a = subgroup_from_words(heis3, ["z"])
    b = subgroup_from_words(heis3, ["z^2"])
    assert a == b
    assert hash(a) == hash(b)
    assert a != subgroup_from_words(heis3, ["x"])
