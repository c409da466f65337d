"""End-to-end acceptance checks.

Each test prints exactly one line

    ACCEPTANCE <id>: PASS|FAIL

with the verdict computed before the assertion, so the tally survives in the
terminal log either way.  Slow-tier checks carry the usual marker.
"""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mindeg.catalog import ENTRIES, build_group
from mindeg.exceptional import (
    exceptional_scan,
    quaternion_power_example,
    verify_distinguished_entry,
)
from mindeg.groups import DirectProductGroup, quotient_group
from mindeg.lattice import (
    abelian_invariants,
    all_subgroups,
    center,
    core,
    has_abelian_normal_of_order,
    subgroup_from_gens,
    subgroup_from_words,
)
from mindeg.mu import minimal_degree, minimal_family, mu_bruteforce_oracle


@pytest.fixture
def report(capsys):
    def _report(label, ok):
        with capsys.disabled():
            print("ACCEPTANCE %s: %s" % (label, "PASS" if ok else "FAIL"))
        return ok

    return _report


def _entry_prime(entry, odd=3):
    return 2 if entry.primes == "2" else odd


def test_exceptional_trio_p3(report):
    checks = []
    for name in ("p5_exc_a", "p5_exc_b", "p5_exc_c"):
        res = verify_distinguished_entry(name, 3)
        checks.append(res["mu"] == 18)
        checks.append(res["mu_quotient"] == 27)
        checks.append(res["normal_order"] == 3)
        checks.append(res["distinguished"])
        rep = exceptional_scan(build_group(name, 3))
        checks.append(rep.exceptional)
    assert report("exc-trio-p3", all(checks))


def test_quartic_sibling_and_small_orders(report):
    g4 = build_group("p4_heis_x_zp", 3)
    ok = minimal_degree(g4) == 12 == 3 ** 2 + 3
    ok = ok and not exceptional_scan(g4).exceptional
    # no catalog group below order p^5 admits a distinguished quotient
    for name, entry in sorted(ENTRIES.items()):
        if entry.order_exp >= 5:
            continue
        p = _entry_prime(entry)
        ok = ok and not exceptional_scan(build_group(name, p)).exceptional
    assert report("quartic-sibling-p3", ok)


def test_order32_pair(report):
    checks = []
    for name in ("exc32_split", "exc32_nonsplit"):
        res = verify_distinguished_entry(name, 2)
        checks.append(res["mu"] == 12)
        checks.append(res["mu_quotient"] == 16)
        checks.append(res["distinguished"])
    assert report("order32-pair", all(checks))


def test_cores_and_centers(report):
    e2 = build_group("p5_exc_b", 3)
    zp = e2.evaluate_word((("z", 3),))
    got_core = core(e2, subgroup_from_words(e2, ["y", "z"]))
    ok = got_core == subgroup_from_gens(e2, [zp])
    ok = ok and center(e2) == subgroup_from_words(e2, ["xp", "n"])
    e3 = build_group("p5_exc_c", 3)
    got_core = core(e3, subgroup_from_words(e3, ["x", "y"]))
    ok = ok and got_core == subgroup_from_words(e3, ["xp", "y"])
    assert report("cores-and-centers", ok)


def test_additivity(report):
    pairs = [
        (("cyc1", 3), ("cyc1", 3)),
        (("cyc2", 3), ("cyc1", 3)),
        (("d8", 2), ("q8", 2)),
        (("p3_heis", 3), ("cyc1", 3)),
        (("p3_modular", 3), ("cyc1", 3)),
        (("q8", 2), ("q8", 2)),
    ]
    ok = True
    for (na, pa), (nb, pb) in pairs:
        a = build_group(na, pa)
        b = build_group(nb, pb)
        ok = ok and minimal_degree(DirectProductGroup(a, b)) == minimal_degree(
            a
        ) + minimal_degree(b)
    q8 = build_group("q8", 2)
    ok = ok and minimal_degree(DirectProductGroup(q8, q8)) == 16
    heis = build_group("p3_heis", 3)
    c3 = build_group("cyc1", 3)
    ok = ok and minimal_degree(DirectProductGroup(heis, c3)) == 12
    mod = build_group("p3_modular", 3)
    ok = ok and minimal_degree(DirectProductGroup(mod, c3)) == 12
    assert report("additivity", ok)


def test_central_product_square(report):
    res = quaternion_power_example(2)
    ok = res["mu_quotient"] == 8 == 2 ** (2 + 1)
    ok = ok and res["mu"] == 16
    ok = ok and not res["distinguished"]
    assert report("central-product-square", ok)


def test_oracle_equivalence(report):
    seen = set()
    queue = []
    for name, entry in sorted(ENTRIES.items()):
        p = _entry_prime(entry)
        g = build_group(name, p)
        if g.order <= 81:
            queue.append(g)
    queue.append(DirectProductGroup(build_group("cyc2", 3), build_group("cyc1", 3)))
    queue.append(DirectProductGroup(build_group("elem2", 3), build_group("cyc1", 3)))

    ok = True
    count = 0
    for g in queue:
        lat = all_subgroups(g)
        quotients = []
        for pos in lat.normal_positions():
            sub = lat.subgroups[pos]
            if sub.order in (1, g.order):
                continue
            q, _ = quotient_group(g, sub.bits)
            quotients.append(q)
        for h in [g] + quotients:
            if h.order == 1 or h.cayley_hash in seen:
                continue
            seen.add(h.cayley_hash)
            ok = ok and minimal_degree(h) == mu_bruteforce_oracle(h).degree
            count += 1
    assert count >= 30
    assert report("oracle-equivalence", ok)


def _rank_and_bounds(p):
    ok = True
    bound_groups = 0
    for name, entry in sorted(ENTRIES.items()):
        if entry.primes == "2":
            continue
        g = build_group(name, p)
        z = center(g)
        d = len(abelian_invariants(z))
        ok = ok and len(minimal_family(g)) == d
        if g.is_abelian or name == "p4_heis_x_zp":
            # the two-sided center bound needs the center inside a proper
            # Frattini-closed piece; direct products with central factors
            # and abelian groups fall outside it
            continue
        mu_z = int(sum(abelian_invariants(z)))
        mu_g = minimal_degree(g)
        ok = ok and p * mu_z <= mu_g <= (g.order // z.order) * mu_z // p
        bound_groups += 1
    return ok and bound_groups >= 8


def test_rank_and_center_bounds_p3(report):
    assert report("rank-and-center-bounds-p3", _rank_and_bounds(3))


def test_quotient_isomorphisms_p3(report):
    ok = True
    for name, partner in (
        ("p5_exc_a", "p4_heis_cp_zp2"),
        ("p5_exc_b", "p4_fused_res"),
        ("p5_exc_c", "p4_fused_nonres"),
    ):
        res = verify_distinguished_entry(name, 3)
        ok = ok and res["quotient_isomorphic"]
        ok = ok and res["partner"] == "%s@p=3" % partner
        ok = ok and res["mu_partner"] == 27
    assert report("quotient-isomorphisms-p3", ok)


def test_abelian_normal_witness(report):
    ok = True
    for name, entry in sorted(ENTRIES.items()):
        if entry.primes == "2" or entry.order_exp != 5:
            continue
        g = build_group(name, 3)
        found, witness = has_abelian_normal_of_order(g, 27)
        ok = ok and found and witness is not None and witness.order == 27
    assert report("abelian-normal-witness", ok)


def test_determinism(report, tmp_path):
    outputs = []
    for tag in ("one", "two"):
        cache = tmp_path / tag
        cache.mkdir()
        env = dict(os.environ, MINDEG_CACHE_DIR=str(cache))
        proc = subprocess.run(
            [sys.executable, "-m", "mindeg.cli", "verify", "--p", "3", "--json"],
            capture_output=True,
            env=env,
            timeout=900,
        )
        outputs.append((proc.returncode, proc.stdout))
    ok = (
        outputs[0][0] == 0
        and outputs[0] == outputs[1]
        and json.loads(outputs[0][1])["ok"] is True
    )
    assert report("determinism", ok)


@pytest.mark.slow
def test_exceptional_trio_p5(report):
    checks = []
    for name in ("p5_exc_a", "p5_exc_b", "p5_exc_c"):
        res = verify_distinguished_entry(name, 5)
        checks.append(res["mu"] == 50)
        checks.append(res["mu_quotient"] == 125)
        checks.append(res["distinguished"])
    assert report("exc-trio-p5", all(checks))


@pytest.mark.slow
def test_rank_and_center_bounds_p5(report):
    assert report("rank-and-center-bounds-p5", _rank_and_bounds(5))


@pytest.mark.slow
def test_quotient_isomorphisms_p5(report):
    ok = True
    for name in ("p5_exc_a", "p5_exc_b", "p5_exc_c"):
        res = verify_distinguished_entry(name, 5)
        ok = ok and res["quotient_isomorphic"]
    assert report("quotient-isomorphisms-p5", ok)


@pytest.mark.slow
def test_central_product_cube_q8(report):
    # the quotient of the cube of the quaternion group by the identifying
    # normal subgroup: the engine computes 32, not the recorded 16, so this
    # check fails; the dihedral cube is the variant that does come out at 16
    res = quaternion_power_example(3)
    ok = res["mu"] == 24 and res["mu_quotient"] == 16
    report("central-product-cube-q8", ok)
    assert ok, (
        "computed mu(quotient) = %d (and mu(power) = %d); the recorded "
        "value 16 does not match the exact computation"
        % (res["mu_quotient"], res["mu"])
    )
