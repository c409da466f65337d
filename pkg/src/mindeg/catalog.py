"""Named group constructors with audited defining relations.

Every entry carries two independent descriptions of the same group: the
power-commutator table used to realize it, and a list of defining relations
in the generators that gets re-checked on the realized group at build time.
Entries also record the expected minimal faithful permutation degree and,
where applicable, a distinguished central subgroup whose quotient has a
larger degree, together with the catalog name of that quotient.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import AuditFailed, BadPrime, UnknownName
from .groups import build_pc_group
from .pcpres import PcPresentation, is_prime


def _comm(a, b):
    """Commutator word a^-1 b^-1 a b over generator labels."""
    return ((a, -1), (b, -1), (a, 1), (b, 1))


def _conj(a, b):
    """Conjugation word b^-1 a b over generator labels."""
    return ((b, -1), (a, 1), (b, 1))


def quadratic_nonresidue(p):
    """Smallest positive non-residue modulo an odd prime."""
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise BadPrime("no quadratic non-residue modulo %d" % p)


@dataclass(frozen=True)
class DistinguishedQuotient:
    word: tuple          # generator word spanning the central subgroup
    partner: str         # catalog name of the quotient group
    letter_map: dict     # partner generator label -> this group's label


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    primes: str          # "odd", "2", or "any"
    description: str
    order_exp: int
    build: Callable      # p -> PcPresentation
    relations: Callable  # p -> [(name, lhs_word, rhs_word)]
    mu: Callable         # p -> expected minimal degree
    mu_kind: str         # "stated" or "derived"
    mu_formula: str
    distinguished: Optional[DistinguishedQuotient] = None


ENTRIES = {}


def _register(entry):
    assert entry.name not in ENTRIES
    ENTRIES[entry.name] = entry


# --- cyclic and elementary abelian families --------------------------------

_CYC_LABELS = ("x", "xp", "xp2", "xp3", "xp4")
_ELEM_LABELS = ("a", "b", "c", "d")


def _make_cyclic(m):
    labels = _CYC_LABELS[:m]

    def build(p):
        powers = {i: {i + 1: 1} for i in range(m - 1)}
        return PcPresentation.make(p, m, powers, {}, labels=labels)

    def relations(p):
        rels = [("x^(p^%d) = 1" % m, (("x", p ** m),), ())]
        for k in range(1, m):
            rels.append(
                ("%s = x^(p^%d)" % (labels[k], k), ((labels[k], 1),), (("x", p ** k),))
            )
        return rels

    _register(
        CatalogEntry(
            name="cyc%d" % m,
            primes="any",
            description="cyclic group of order p^%d" % m,
            order_exp=m,
            build=build,
            relations=relations,
            mu=lambda p: p ** m,
            mu_kind="derived",
            mu_formula="p^%d" % m if m > 1 else "p",
        )
    )


def _make_elementary(m):
    labels = _ELEM_LABELS[:m]

    def build(p):
        return PcPresentation.make(p, m, {}, {}, labels=labels)

    def relations(p):
        rels = [("%s^p = 1" % l, ((l, p),), ()) for l in labels]
        for i in range(m):
            for j in range(i + 1, m):
                rels.append(
                    ("[%s,%s] = 1" % (labels[j], labels[i]), _comm(labels[j], labels[i]), ())
                )
        return rels

    _register(
        CatalogEntry(
            name="elem%d" % m,
            primes="any",
            description="elementary abelian group of rank %d" % m,
            order_exp=m,
            build=build,
            relations=relations,
            mu=lambda p, m=m: m * p,
            mu_kind="derived",
            mu_formula="%dp" % m if m > 1 else "p",
        )
    )


for _m in range(1, 6):
    _make_cyclic(_m)
for _m in range(1, 5):
    _make_elementary(_m)


# --- the two nonabelian groups of order p^3 (p odd) -------------------------


def _build_p3_heis(p):
    return PcPresentation.make(
        p, 3, {}, {(1, 0): {2: p - 1}}, labels=("x", "y", "z")
    )


def _rels_p3_heis(p):
    return [
        ("x^p = 1", (("x", p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("z^p = 1", (("z", p),), ()),
        ("[x,y] = z", _comm("x", "y"), (("z", 1),)),
        ("[z,x] = 1", _comm("z", "x"), ()),
        ("[z,y] = 1", _comm("z", "y"), ()),
    ]


_register(
    CatalogEntry(
        name="p3_heis",
        primes="odd",
        description="nonabelian group of order p^3 and exponent p"
        " (unitriangular 3x3 matrices)",
        order_exp=3,
        build=_build_p3_heis,
        relations=_rels_p3_heis,
        mu=lambda p: p * p,
        mu_kind="stated",
        mu_formula="p^2",
    )
)


def _build_p3_modular(p):
    return PcPresentation.make(
        p, 3, {0: {2: 1}}, {(1, 0): {2: p - 1}}, labels=("x", "y", "xp")
    )


def _rels_p3_modular(p):
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("[x,y] = x^p", _comm("x", "y"), (("x", p),)),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
        ("[xp,y] = 1", _comm("xp", "y"), ()),
    ]


_register(
    CatalogEntry(
        name="p3_modular",
        primes="odd",
        description="nonabelian group of order p^3 with an element of order p^2",
        order_exp=3,
        build=_build_p3_modular,
        relations=_rels_p3_modular,
        mu=lambda p: p * p,
        mu_kind="stated",
        mu_formula="p^2",
    )
)


# --- order p^4 quotient targets ---------------------------------------------


def _build_p4_heis_cp_zp2(p):
    return PcPresentation.make(
        p, 4, {0: {3: 1}}, {(2, 1): {3: p - 1}}, labels=("x", "y", "z", "xp")
    )


def _rels_p4_heis_cp_zp2(p):
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("z^p = 1", (("z", p),), ()),
        ("[y,z] = x^p", _comm("y", "z"), (("x", p),)),
        ("[x,y] = 1", _comm("x", "y"), ()),
        ("[x,z] = 1", _comm("x", "z"), ()),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
    ]


_register(
    CatalogEntry(
        name="p4_heis_cp_zp2",
        primes="odd",
        description="central product of the exponent-p group of order p^3"
        " with a cyclic group of order p^2",
        order_exp=4,
        build=_build_p4_heis_cp_zp2,
        relations=_rels_p4_heis_cp_zp2,
        mu=lambda p: p ** 3,
        mu_kind="derived",
        mu_formula="p^3",
    )
)


def _build_p4_fused(p, alpha):
    return PcPresentation.make(
        p,
        4,
        {0: {3: 1}, 1: {3: alpha}},
        {(1, 0): {2: p - 1}, (2, 0): {3: p - 1}},
        labels=("x", "z", "y", "xp"),
    )


def _rels_p4_fused(p, alpha):
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("z^(p^2) = 1", (("z", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("z^p = x^(%dp)" % alpha, (("z", p),), (("x", alpha * p),)),
        ("[x,z] = y", _comm("x", "z"), (("y", 1),)),
        ("[x,y] = x^p", _comm("x", "y"), (("x", p),)),
        ("[y,z] = 1", _comm("y", "z"), ()),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
    ]


_register(
    CatalogEntry(
        name="p4_fused_res",
        primes="odd",
        description="order p^4 group on two generators of order p^2"
        " with equal p-th powers",
        order_exp=4,
        build=lambda p: _build_p4_fused(p, 1),
        relations=lambda p: _rels_p4_fused(p, 1),
        mu=lambda p: p ** 3,
        mu_kind="stated",
        mu_formula="p^3",
    )
)

_register(
    CatalogEntry(
        name="p4_fused_nonres",
        primes="odd",
        description="order p^4 group on two generators of order p^2 whose"
        " p-th powers differ by a non-residue exponent",
        order_exp=4,
        build=lambda p: _build_p4_fused(p, quadratic_nonresidue(p)),
        relations=lambda p: _rels_p4_fused(p, quadratic_nonresidue(p)),
        mu=lambda p: p ** 3,
        mu_kind="stated",
        mu_formula="p^3",
    )
)


def _build_p4_heis_x_zp(p):
    return PcPresentation.make(
        p, 4, {}, {(1, 0): {2: p - 1}}, labels=("x", "y", "z", "w")
    )


def _rels_p4_heis_x_zp(p):
    return [
        ("x^p = 1", (("x", p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("z^p = 1", (("z", p),), ()),
        ("w^p = 1", (("w", p),), ()),
        ("[x,y] = z", _comm("x", "y"), (("z", 1),)),
        ("[z,x] = 1", _comm("z", "x"), ()),
        ("[z,y] = 1", _comm("z", "y"), ()),
        ("[w,x] = 1", _comm("w", "x"), ()),
        ("[w,y] = 1", _comm("w", "y"), ()),
    ]


_register(
    CatalogEntry(
        name="p4_heis_x_zp",
        primes="odd",
        description="direct product of the exponent-p group of order p^3"
        " with a cyclic group of order p",
        order_exp=4,
        build=_build_p4_heis_x_zp,
        relations=_rels_p4_heis_x_zp,
        mu=lambda p: p * p + p,
        mu_kind="stated",
        mu_formula="p^2+p",
    )
)


# --- order p^5 groups whose quotients need more points ----------------------


def _build_p5_exc_a(p):
    return PcPresentation.make(
        p,
        5,
        {0: {3: 1}},
        {(2, 0): {4: p - 1}, (2, 1): {3: p - 1, 4: 1}},
        labels=("x", "y", "z", "xp", "n"),
    )


def _rels_p5_exc_a(p):
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("z^p = 1", (("z", p),), ()),
        ("n^p = 1", (("n", p),), ()),
        ("[x,z] = n", _comm("x", "z"), (("n", 1),)),
        ("[y,z] = x^p n^-1", _comm("y", "z"), (("x", p), ("n", -1))),
        ("[x,y] = 1", _comm("x", "y"), ()),
        ("[n,x] = 1", _comm("n", "x"), ()),
        ("[n,y] = 1", _comm("n", "y"), ()),
        ("[n,z] = 1", _comm("n", "z"), ()),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
    ]


_register(
    CatalogEntry(
        name="p5_exc_a",
        primes="odd",
        description="order p^5 group whose degree is smaller than that of a"
        " central quotient (variant a)",
        order_exp=5,
        build=_build_p5_exc_a,
        relations=_rels_p5_exc_a,
        mu=lambda p: 2 * p * p,
        mu_kind="stated",
        mu_formula="2p^2",
        distinguished=DistinguishedQuotient(
            word=(("n", 1),),
            partner="p4_heis_cp_zp2",
            letter_map={"x": "x", "y": "y", "z": "z", "xp": "xp"},
        ),
    )
)


def _build_p5_exc_b(p):
    return PcPresentation.make(
        p,
        5,
        {0: {3: 1}, 1: {3: 1, 4: p - 1}},
        {(1, 0): {2: p - 1}, (2, 0): {3: p - 1}},
        labels=("x", "z", "y", "xp", "n"),
    )


def _rels_p5_exc_b(p):
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("z^(p^2) = 1", (("z", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("n^p = 1", (("n", p),), ()),
        ("x^p = z^p n", (("x", p),), (("z", p), ("n", 1))),
        ("[x,z] = y", _comm("x", "z"), (("y", 1),)),
        ("[x,y] = x^p", _comm("x", "y"), (("x", p),)),
        ("[y,z] = 1", _comm("y", "z"), ()),
        ("[n,x] = 1", _comm("n", "x"), ()),
        ("[n,z] = 1", _comm("n", "z"), ()),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
    ]


_register(
    CatalogEntry(
        name="p5_exc_b",
        primes="odd",
        description="order p^5 group whose degree is smaller than that of a"
        " central quotient (variant b)",
        order_exp=5,
        build=_build_p5_exc_b,
        relations=_rels_p5_exc_b,
        mu=lambda p: 2 * p * p,
        mu_kind="stated",
        mu_formula="2p^2",
        distinguished=DistinguishedQuotient(
            word=(("n", 1),),
            partner="p4_fused_res",
            letter_map={"x": "x", "z": "z", "y": "y", "xp": "xp"},
        ),
    )
)


def _build_p5_exc_c(p):
    alpha = quadratic_nonresidue(p)
    return PcPresentation.make(
        p,
        5,
        {0: {3: 1}, 1: {3: alpha, 4: 1}},
        {(1, 0): {2: p - 1, 4: p - 1}, (2, 0): {3: p - 1}},
        labels=("x", "z", "y", "xp", "n"),
    )


def _rels_p5_exc_c(p):
    alpha = quadratic_nonresidue(p)
    return [
        ("x^(p^2) = 1", (("x", p * p),), ()),
        ("z^(p^2) = 1", (("z", p * p),), ()),
        ("y^p = 1", (("y", p),), ()),
        ("n^p = 1", (("n", p),), ()),
        ("z^p = x^(%dp) n" % alpha, (("z", p),), (("x", alpha * p), ("n", 1))),
        ("[x,z] = y n", _comm("x", "z"), (("y", 1), ("n", 1))),
        ("[x,y] = x^p", _comm("x", "y"), (("x", p),)),
        ("[y,z] = 1", _comm("y", "z"), ()),
        ("[n,x] = 1", _comm("n", "x"), ()),
        ("[n,z] = 1", _comm("n", "z"), ()),
        ("xp = x^p", (("xp", 1),), (("x", p),)),
    ]


_register(
    CatalogEntry(
        name="p5_exc_c",
        primes="odd",
        description="order p^5 group whose degree is smaller than that of a"
        " central quotient (variant c)",
        order_exp=5,
        build=_build_p5_exc_c,
        relations=_rels_p5_exc_c,
        mu=lambda p: 2 * p * p,
        mu_kind="stated",
        mu_formula="2p^2",
        distinguished=DistinguishedQuotient(
            word=(("n", 1),),
            partner="p4_fused_nonres",
            letter_map={"x": "x", "z": "z", "y": "y", "xp": "xp"},
        ),
    )
)


# --- 2-groups ----------------------------------------------------------------


def _build_q8(p):
    return PcPresentation.make(
        2, 3, {0: {2: 1}, 1: {2: 1}}, {(1, 0): {2: 1}}, labels=("x", "y", "z")
    )


def _rels_q8(p):
    return [
        ("x^4 = 1", (("x", 4),), ()),
        ("x^2 = y^2", (("x", 2),), (("y", 2),)),
        ("x^y = x^-1", _conj("x", "y"), (("x", -1),)),
        ("z = x^2", (("z", 1),), (("x", 2),)),
    ]


_register(
    CatalogEntry(
        name="q8",
        primes="2",
        description="quaternion group of order 8",
        order_exp=3,
        build=_build_q8,
        relations=_rels_q8,
        mu=lambda p: 8,
        mu_kind="derived",
        mu_formula="8",
    )
)


def _build_d8(p):
    return PcPresentation.make(
        2, 3, {1: {2: 1}}, {(1, 0): {2: 1}}, labels=("s", "r", "r2")
    )


def _rels_d8(p):
    return [
        ("s^2 = 1", (("s", 2),), ()),
        ("r^4 = 1", (("r", 4),), ()),
        ("r^s = r^-1", _conj("r", "s"), (("r", -1),)),
        ("r2 = r^2", (("r2", 1),), (("r", 2),)),
    ]


_register(
    CatalogEntry(
        name="d8",
        primes="2",
        description="dihedral group of order 8",
        order_exp=3,
        build=_build_d8,
        relations=_rels_d8,
        mu=lambda p: 4,
        mu_kind="stated",
        mu_formula="4",
    )
)


def _build_q16(p):
    return PcPresentation.make(
        2,
        4,
        {0: {3: 1}, 1: {2: 1}, 2: {3: 1}},
        {(1, 0): {2: 1, 3: 1}, (2, 0): {3: 1}},
        labels=("y", "x", "x2", "x4"),
    )


def _rels_q16(p):
    return [
        ("x^8 = 1", (("x", 8),), ()),
        ("y^2 = x^4", (("y", 2),), (("x", 4),)),
        ("x^y = x^-1", _conj("x", "y"), (("x", -1),)),
        ("x2 = x^2", (("x2", 1),), (("x", 2),)),
        ("x4 = x^4", (("x4", 1),), (("x", 4),)),
    ]


_register(
    CatalogEntry(
        name="q16",
        primes="2",
        description="generalized quaternion group of order 16",
        order_exp=4,
        build=_build_q16,
        relations=_rels_q16,
        mu=lambda p: 16,
        mu_kind="stated",
        mu_formula="16",
    )
)


def _build_exc32_split(p):
    return PcPresentation.make(
        2,
        5,
        {0: {3: 1}, 1: {2: 1}, 2: {4: 1}},
        {(1, 0): {2: 1, 4: 1}, (2, 0): {4: 1}},
        labels=("y", "x", "x2", "y2", "x4"),
    )


def _rels_exc32_split(p):
    return [
        ("x^8 = 1", (("x", 8),), ()),
        ("y^4 = 1", (("y", 4),), ()),
        ("x^y = x^-1", _conj("x", "y"), (("x", -1),)),
        ("x2 = x^2", (("x2", 1),), (("x", 2),)),
        ("y2 = y^2", (("y2", 1),), (("y", 2),)),
        ("x4 = x^4", (("x4", 1),), (("x", 4),)),
        ("[y^2,x] = 1", _comm("y2", "x"), ()),
    ]


_register(
    CatalogEntry(
        name="exc32_split",
        primes="2",
        description="order 32 split extension of a cyclic group of order 8"
        " by a cyclic group of order 4 acting by inversion",
        order_exp=5,
        build=_build_exc32_split,
        relations=_rels_exc32_split,
        mu=lambda p: 12,
        mu_kind="stated",
        mu_formula="12",
        distinguished=DistinguishedQuotient(
            word=(("x4", 1), ("y2", 1)),
            partner="q16",
            letter_map={"y": "y", "x": "x", "x2": "x2", "x4": "x4"},
        ),
    )
)


def _build_exc32_nonsplit(p):
    return PcPresentation.make(
        2,
        5,
        {0: {3: 1}, 1: {2: 1}, 2: {3: 1}},
        {(1, 0): {2: 1, 3: 1, 4: 1}, (2, 0): {3: 1}},
        labels=("y", "x", "x2", "x4", "n"),
    )


def _rels_exc32_nonsplit(p):
    return [
        ("x^8 = 1", (("x", 8),), ()),
        ("y^2 = x^4", (("y", 2),), (("x", 4),)),
        ("n^2 = 1", (("n", 2),), ()),
        ("x^y = x^-1 n", _conj("x", "y"), (("x", -1), ("n", 1))),
        ("[n,x] = 1", _comm("n", "x"), ()),
        ("[n,y] = 1", _comm("n", "y"), ()),
        ("x2 = x^2", (("x2", 1),), (("x", 2),)),
        ("x4 = x^4", (("x4", 1),), (("x", 4),)),
    ]


_register(
    CatalogEntry(
        name="exc32_nonsplit",
        primes="2",
        description="order 32 group where inversion on the cyclic subgroup"
        " of order 8 is twisted by a central involution",
        order_exp=5,
        build=_build_exc32_nonsplit,
        relations=_rels_exc32_nonsplit,
        mu=lambda p: 12,
        mu_kind="stated",
        mu_formula="12",
        distinguished=DistinguishedQuotient(
            word=(("n", 1),),
            partner="q16",
            letter_map={"y": "y", "x": "x", "x2": "x2", "x4": "x4"},
        ),
    )
)


# --- construction, auditing, lookup -----------------------------------------

_GROUP_MEMO = {}


def relation_audit(group, relations):
    """Evaluate both sides of each named relation; return [(name, ok)]."""
    out = []
    for name, lhs, rhs in relations:
        out.append((name, group.evaluate_word(lhs) == group.evaluate_word(rhs)))
    return out


def build_group(name, p):
    if name not in ENTRIES:
        raise UnknownName("no catalog entry named %r" % name)
    entry = ENTRIES[name]
    if not is_prime(p):
        raise BadPrime("%r is not a prime" % (p,))
    if entry.primes == "odd" and p == 2:
        raise BadPrime("entry %s requires an odd prime" % name)
    if entry.primes == "2" and p != 2:
        raise BadPrime("entry %s is a 2-group" % name)
    key = (name, p)
    if key in _GROUP_MEMO:
        return _GROUP_MEMO[key]
    group = build_pc_group(entry.build(p), check=True)
    assert group.order == p ** entry.order_exp
    bad = [rel for rel, ok in relation_audit(group, entry.relations(p)) if not ok]
    if bad:
        raise AuditFailed(
            "entry %s at p=%d violates: %s" % (name, p, ", ".join(bad))
        )
    group.label = "%s@p=%d" % (name, p)
    _GROUP_MEMO[key] = group
    return group


_REF_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)@p=(\d+)$")


def resolve(ref):
    m = _REF_RE.match(ref)
    if not m:
        raise UnknownName(
            "reference %r is not of the form name@p=PRIME" % ref
        )
    return build_group(m.group(1), int(m.group(2)))


def list_catalog():
    out = []
    for name, e in ENTRIES.items():
        out.append(
            {
                "name": name,
                "primes": e.primes,
                "order": "p^%d" % e.order_exp,
                "mu": e.mu_formula,
                "mu_kind": e.mu_kind,
                "description": e.description,
            }
        )
    return out
