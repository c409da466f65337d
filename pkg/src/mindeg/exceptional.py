"""Detecting quotients that need more permutation points than the group.

A normal subgroup N is distinguished when the minimal faithful degree of
G/N exceeds that of G itself.  The scanner walks every nontrivial proper
normal subgroup and reports the quotient degrees; a group is exceptional
when at least one normal subgroup is distinguished.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotNormal
from .groups import quotient_group
from .lattice import Subgroup, all_subgroups, is_normal
from .mu import minimal_degree
from . import catalog


@dataclass
class ExceptionalEntry:
    normal_order: int
    normal_gens: list
    mu_quotient: int
    distinguished: bool


@dataclass
class ExceptionalReport:
    group_label: str
    group_order: int
    mu: int
    entries: list
    exceptional: bool

    def to_dict(self):
        return {
            "schema": 1,
            "group": self.group_label,
            "order": self.group_order,
            "mu": self.mu,
            "exceptional": self.exceptional,
            "quotients": [
                {
                    "normal_order": e.normal_order,
                    "normal_gens": e.normal_gens,
                    "mu_quotient": e.mu_quotient,
                    "distinguished": e.distinguished,
                }
                for e in self.entries
            ],
        }


def check_distinguished(group, normal_bits, lat=None, bound=3125):
    """Degrees of the group and of the quotient by the given normal subgroup.

    Returns (mu_group, mu_quotient, distinguished).  Raises NotNormal if the
    mask is not a normal subgroup.
    """
    sub = Subgroup(group, normal_bits)
    if not is_normal(group, sub):
        raise NotNormal("the given subgroup is not normal")
    mu_g = minimal_degree(group, lat, bound=bound)
    if sub.order == group.order:
        return mu_g, 0, False
    q, _ = quotient_group(group, sub.bits)
    mu_q = minimal_degree(q, bound=bound)
    return mu_g, mu_q, mu_q > mu_g


def exceptional_scan(group, bound=3125):
    """Examine the quotient by every nontrivial proper normal subgroup."""
    lat = all_subgroups(group, bound=bound)
    mu_g = minimal_degree(group, lat, bound=bound)
    entries = []
    for pos in lat.normal_positions():
        sub = lat.subgroups[pos]
        if sub.order in (1, group.order):
            continue
        q, _ = quotient_group(group, sub.bits)
        mu_q = minimal_degree(q, bound=bound)
        entries.append(
            ExceptionalEntry(sub.order, sub.gen_words(), mu_q, mu_q > mu_g)
        )
    verdict = any(e.distinguished for e in entries)
    return ExceptionalReport(
        getattr(group, "label", "?"), group.order, mu_g, entries, verdict
    )


def _central_power_example(base_name, z_label, n, bound=3125):
    """Direct power of a small 2-group, modulo identifications of the
    central involutions of adjacent factors.

    Builds B^n, takes N generated by the products z_i z_{i+1} of the central
    involutions of consecutive factors, and reports the degrees of the power
    and of the quotient (the n-fold central product).
    """
    from .groups import direct_product, generated_bits

    base = catalog.build_group(base_name, 2)
    z = base.gen(z_label).id
    g = base
    for _ in range(n - 1):
        g = direct_product(g, base)
    g.label = "%s^%d" % (base_name, n)
    b = base.order
    gen_ids = [z * b ** (n - i) + z * b ** (n - i - 1) for i in range(1, n)]
    nbits = generated_bits(g, gen_ids)
    assert int(nbits.sum()) == 2 ** (n - 1)
    mu_g, mu_q, distinguished = check_distinguished(g, nbits, bound=bound)
    return {
        "base": base_name,
        "copies": n,
        "order": g.order,
        "normal_order": int(nbits.sum()),
        "quotient_order": g.order // int(nbits.sum()),
        "mu": mu_g,
        "mu_quotient": mu_q,
        "distinguished": distinguished,
    }


def quaternion_power_example(n, bound=3125):
    """n-th power of the order-8 quaternion group and its central product."""
    return _central_power_example("q8", "z", n, bound=bound)


def dihedral_power_example(n, bound=3125):
    """n-th power of the order-8 dihedral group and its central product."""
    return _central_power_example("d8", "r2", n, bound=bound)


def verify_distinguished_entry(name, p, bound=3125):
    """Full check of a catalog entry's recorded distinguished quotient:
    the degree jump and an isomorphism certificate onto the named partner.

    Returns a dict of the computed facts; raises on structural failure.
    """
    from .groups import Homomorphism, verify_epimorphism, generated_bits

    group = catalog.build_group(name, p)
    entry = catalog.ENTRIES[name]
    spec = entry.distinguished
    assert spec is not None, "entry %s has no distinguished quotient" % name
    n_elt = group.evaluate_word(spec.word)
    nbits = generated_bits(group, [n_elt])
    mu_g, mu_q, distinguished = check_distinguished(group, nbits, bound=bound)

    partner = catalog.build_group(spec.partner, p)
    q, nat = quotient_group(group, nbits)
    images = [
        nat.apply(group.gen(spec.letter_map[l]).id) for l in partner.generator_labels
    ]
    verdict = verify_epimorphism(Homomorphism(partner, q, images))
    return {
        "group": group.label,
        "partner": partner.label,
        "normal_order": int(nbits.sum()),
        "mu": mu_g,
        "mu_quotient": mu_q,
        "mu_partner": minimal_degree(partner, bound=bound),
        "distinguished": distinguished,
        "quotient_isomorphic": verdict.ok,
        "iso_reason": verdict.reason,
    }
