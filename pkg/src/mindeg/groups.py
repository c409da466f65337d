"""Concrete finite p-groups with vectorized arithmetic.

Elements are integers 0 .. order-1 with 0 the identity.  Three backings:

* PcGroup      -- built from a consistent power-commutator presentation; an
                  element's id encodes its collected digit string.
* QuotientGroup -- parent modulo a normal subgroup, elements are the minimal
                  coset representative ids renumbered consecutively.
* DirectProductGroup -- pairs (a, b) with id a*|B| + b.

Every backing exposes digit_matrix (rows = per-element digit strings in the
inherited echelon coordinates) and digit_gens (the generating elements those
digit positions correspond to).  Multiplication, inversion and the p-th power
map are exposed both vectorized and scalar.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    InconsistentPresentation,
    MalformedRule,
    NotNormal,
    PrimeMismatch,
)
from .pcpres import Collector, PcPresentation, overlap_witness, word_str

_RNG_SEED = 20260815
_FULL_CAYLEY_LIMIT = 81
_RANDOM_TRIPLES = 100_000


class FiniteGroup:
    """Base class; subclasses fill order, prime, digit data and raw ops."""

    order: int
    prime: int
    label: str

    # --- raw vectorized operations supplied by the backing -------------

    def mult_vec(self, a, b):
        raise NotImplementedError

    @cached_property
    def inv_all(self):
        raise NotImplementedError

    # --- scalar wrappers ------------------------------------------------

    def mult(self, a, b):
        return int(self.mult_vec(np.asarray([a]), np.asarray([b]))[0])

    def inv(self, a):
        return int(self.inv_all[a])

    def power(self, a, e):
        """a^e for any integer e, by binary powering."""
        if e < 0:
            a, e = self.inv(a), -e
        acc, base = 0, a
        while e:
            if e & 1:
                acc = self.mult(acc, base)
            base = self.mult(base, base)
            e >>= 1
        return acc

    def conj(self, a, b):
        """b^-1 a b."""
        return self.mult(self.mult(self.inv(b), a), b)

    def comm(self, a, b):
        """a^-1 b^-1 a b."""
        return self.mult(self.inv(self.mult(b, a)), self.mult(a, b))

    def powers_upto(self, a, m):
        """Array [a^0, a^1, ..., a^{m-1}]."""
        out = np.zeros(m, dtype=np.int64)
        for k in range(1, m):
            out[k] = self.mult(out[k - 1], a)
        return out

    # --- derived cached data ---------------------------------------------

    @cached_property
    def ndigits(self):
        return self.digit_matrix.shape[1]

    @cached_property
    def pow_p_map(self):
        """Array mapping x to x^p."""
        ids = np.arange(self.order, dtype=np.int64)
        acc = np.zeros(self.order, dtype=np.int64)
        base = ids
        e = self.prime
        while e:
            if e & 1:
                acc = self.mult_vec(acc, base)
            e >>= 1
            if e:
                base = self.mult_vec(base, base)
        return acc

    @cached_property
    def order_vec(self):
        """Element orders; all are powers of the prime."""
        out = np.zeros(self.order, dtype=np.int64)
        out[0] = 1
        cur = np.arange(self.order, dtype=np.int64)
        o = 1
        alive = out == 0
        while alive.any():
            o *= self.prime
            cur = self.pow_p_map[cur]
            done = alive & (cur == 0)
            out[done] = o
            alive &= ~done
            if o > self.order:
                raise InconsistentPresentation("element order exceeds the group order")
        return out

    @cached_property
    def conj_perms(self):
        """One permutation per digit generator g: x -> g^-1 x g."""
        ids = np.arange(self.order, dtype=np.int64)
        perms = []
        for g in self.digit_gens:
            gi = self.inv(int(g))
            left = self.mult_vec(np.full(self.order, gi, dtype=np.int64), ids)
            perms.append(self.mult_vec(left, np.full(self.order, int(g), dtype=np.int64)))
        return perms

    @cached_property
    def depth_vec(self):
        """Index of the first nonzero digit; the identity gets ndigits."""
        nz = self.digit_matrix != 0
        depth = np.where(nz.any(axis=1), nz.argmax(axis=1), self.ndigits)
        return depth.astype(np.int64)

    @cached_property
    def lead_vec(self):
        """The first nonzero digit value; 0 for the identity."""
        rows = np.arange(self.order)
        d = self.depth_vec
        out = np.zeros(self.order, dtype=np.int64)
        mask = d < self.ndigits
        out[mask] = self.digit_matrix[rows[mask], d[mask]]
        return out

    @cached_property
    def is_abelian(self):
        for perm in self.conj_perms:
            if not np.array_equal(perm, np.arange(self.order)):
                return False
        return True

    @cached_property
    def exponent(self):
        return int(self.order_vec.max())

    @cached_property
    def cayley_hash(self):
        """Content hash of the multiplication table, row by row."""
        h = hashlib.sha256()
        h.update(b"mindeg.cayley.v1|p=%d|order=%d|" % (self.prime, self.order))
        ids = np.arange(self.order, dtype=np.int64)
        for a in range(self.order):
            row = self.mult_vec(np.full(self.order, a, dtype=np.int64), ids)
            h.update(row.astype("<u4").tobytes())
        return h.hexdigest()

    # --- words over generator labels --------------------------------------

    @cached_property
    def _label_index(self):
        return {l: k for k, l in enumerate(self.generator_labels)}

    def evaluate_word(self, word):
        """Evaluate ((label, exp), ...) with integer exponents."""
        acc = 0
        for label, e in word:
            g = int(self.digit_gens[self._label_index[label]])
            acc = self.mult(acc, self.power(g, e))
        return acc

    def element_word(self, x):
        digits = self.digit_matrix[x]
        return word_str(digits, self.generator_labels)

    def element(self, x):
        return GroupElement(self, int(x))

    def gen(self, label):
        return self.element(int(self.digit_gens[self._label_index[label]]))

    def __repr__(self):
        return "<%s %s of order %d>" % (type(self).__name__, self.label, self.order)


class GroupElement:
    __slots__ = ("group", "id")

    def __init__(self, group, x):
        self.group = group
        self.id = int(x)

    def __mul__(self, other):
        assert self.group is other.group
        return GroupElement(self.group, self.group.mult(self.id, other.id))

    def __pow__(self, e):
        return GroupElement(self.group, self.group.power(self.id, e))

    def inverse(self):
        return GroupElement(self.group, self.group.inv(self.id))

    def conj(self, other):
        assert self.group is other.group
        return GroupElement(self.group, self.group.conj(self.id, other.id))

    def comm(self, other):
        assert self.group is other.group
        return GroupElement(self.group, self.group.comm(self.id, other.id))

    def order(self):
        return int(self.group.order_vec[self.id])

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.group is other.group
            and self.id == other.id
        )

    def __hash__(self):
        return hash((id(self.group), self.id))

    def __repr__(self):
        return self.group.element_word(self.id)


class PcGroup(FiniteGroup):
    """Group of collected digit strings for a consistent presentation."""

    def __init__(self, pres):
        self.pres = pres
        self.prime = p = pres.prime
        n = pres.ngens
        self.order = p ** n
        self.label = "pc(%s)" % ",".join(pres.labels)
        self.generator_labels = pres.labels
        self._collector = Collector(pres)

        # digit weights: the first generator is the most significant digit
        self._weights = np.array([p ** (n - 1 - k) for k in range(n)], dtype=np.int64)

        ids = np.arange(self.order, dtype=np.int64)
        if n:
            digits = (ids[:, None] // self._weights[None, :]) % p
        else:
            digits = np.zeros((1, 0), dtype=np.int64)
        self.digit_matrix = digits.astype(np.int64)
        self.digit_gens = self._weights.copy()

        # R[k][x] = x * g_k, built by one collection per (element, generator)
        self._R = []
        for k in range(n):
            col = np.empty(self.order, dtype=np.int64)
            for x in range(self.order):
                w = [(g, int(e)) for g, e in enumerate(self.digit_matrix[x]) if e]
                w.append((k, 1))
                col[x] = self._rank(self._collector.collect(w))
            self._R.append(col)

    def _rank(self, digits):
        return int(np.dot(np.asarray(digits, dtype=np.int64), self._weights))

    def mult_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        res = a.copy()
        if res.ndim == 0:
            res = res.reshape(1)
            b = b.reshape(1)
        digits_b = self.digit_matrix[b]
        for k in range(self.pres.ngens):
            col = self._R[k]
            for t in range(1, self.prime):
                mask = digits_b[..., k] >= t
                if mask.any():
                    res[mask] = col[res[mask]]
        return res

    @cached_property
    def inv_all(self):
        # solve x * y = 1 digit by digit: after clearing the leading digit
        # of the running product x * y, later right factors cannot disturb it
        y = np.zeros(self.order, dtype=np.int64)
        prod = np.arange(self.order, dtype=np.int64)
        for k in range(self.pres.ngens):
            need = (-self.digit_matrix[prod, k]) % self.prime
            for t in range(1, self.prime):
                mask = need >= t
                if mask.any():
                    y[mask] = self._R[k][y[mask]]
                    prod[mask] = self._R[k][prod[mask]]
        assert not prod.any(), "inversion failed to reach the identity"
        return y


def trivial_group(p):
    pres = PcPresentation.make(p, 0)
    g = PcGroup(pres)
    g.label = "trivial(p=%d)" % p
    return g


class QuotientGroup(FiniteGroup):
    """Parent group modulo a normal subgroup, via minimal coset reps."""

    def __init__(self, parent, normal_bits):
        self.parent = parent
        self.prime = parent.prime
        members = np.flatnonzero(normal_bits).astype(np.int64)
        self._nbits = np.asarray(normal_bits, dtype=bool).copy()

        canon = np.full(parent.order, -1, dtype=np.int64)
        for r in range(parent.order):
            if canon[r] < 0:
                coset = parent.mult_vec(np.full(len(members), r, dtype=np.int64), members)
                canon[coset] = r
        assert (canon >= 0).all()
        self._canon = canon
        self.reps = np.unique(canon)
        assert self.reps[0] == 0
        self.order = len(self.reps)
        self._rep_index = np.full(parent.order, -1, dtype=np.int64)
        self._rep_index[self.reps] = np.arange(self.order)

        self.generator_labels = parent.generator_labels
        self.digit_matrix = parent.digit_matrix[self.reps]
        self.digit_gens = self.to_group(np.asarray(parent.digit_gens, dtype=np.int64))
        self.label = "%s/N%d" % (parent.label, len(members))

    def to_group(self, parent_ids):
        return self._rep_index[self._canon[np.asarray(parent_ids, dtype=np.int64)]]

    def to_parent(self, ids):
        return self.reps[np.asarray(ids, dtype=np.int64)]

    def mult_vec(self, a, b):
        pa = self.reps[np.asarray(a, dtype=np.int64)]
        pb = self.reps[np.asarray(b, dtype=np.int64)]
        return self.to_group(self.parent.mult_vec(pa, pb))

    @cached_property
    def inv_all(self):
        return self.to_group(self.parent.inv_all[self.reps])


class DirectProductGroup(FiniteGroup):
    """Direct product; element id is a * |B| + b."""

    def __init__(self, a, b):
        if a.prime != b.prime:
            raise PrimeMismatch(
                "cannot form a direct product across primes %d and %d" % (a.prime, b.prime)
            )
        self.left, self.right = a, b
        self.prime = a.prime
        self.order = a.order * b.order
        self.label = "(%s)x(%s)" % (a.label, b.label)

        la = ["%s.1" % s for s in a.generator_labels]
        lb = ["%s.2" % s for s in b.generator_labels]
        self.generator_labels = tuple(la + lb)
        self.digit_matrix = np.hstack(
            [
                np.repeat(a.digit_matrix, b.order, axis=0),
                np.tile(b.digit_matrix, (a.order, 1)),
            ]
        )
        self.digit_gens = np.concatenate(
            [
                np.asarray(a.digit_gens, dtype=np.int64) * b.order,
                np.asarray(b.digit_gens, dtype=np.int64),
            ]
        )

    def project_left(self, ids):
        return np.asarray(ids, dtype=np.int64) // self.right.order

    def project_right(self, ids):
        return np.asarray(ids, dtype=np.int64) % self.right.order

    def mult_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        xa = self.left.mult_vec(a // self.right.order, b // self.right.order)
        xb = self.right.mult_vec(a % self.right.order, b % self.right.order)
        return xa * self.right.order + xb

    @cached_property
    def inv_all(self):
        ids = np.arange(self.order, dtype=np.int64)
        return (
            self.left.inv_all[ids // self.right.order] * self.right.order
            + self.right.inv_all[ids % self.right.order]
        )


def direct_product(a, b):
    return DirectProductGroup(a, b)


def generated_bits(group, gen_ids):
    """Membership mask of the subgroup generated by the given element ids."""
    bits = np.zeros(group.order, dtype=bool)
    bits[0] = True
    frontier = [0]
    gen_ids = [int(g) for g in gen_ids]
    while frontier:
        base = np.asarray(frontier, dtype=np.int64)
        frontier = []
        for g in gen_ids:
            nxt = group.mult_vec(base, np.full(len(base), g, dtype=np.int64))
            fresh = nxt[~bits[nxt]]
            if len(fresh):
                fresh = np.unique(fresh)
                bits[fresh] = True
                frontier.extend(int(v) for v in fresh)
    return bits


# ---------------------------------------------------------------------------
# consistency checking and group construction


@dataclass
class ConsistencyReport:
    ok: bool
    witness: str | None = None


def _group_sanity(group):
    """Cheap structural checks on the realized multiplication."""
    rng = np.random.default_rng(_RNG_SEED)
    ids = np.arange(group.order, dtype=np.int64)
    # every right translation is a bijection and identity acts trivially
    for g in group.digit_gens:
        row = group.mult_vec(ids, np.full(group.order, int(g), dtype=np.int64))
        if len(np.unique(row)) != group.order:
            return "right translation by a generator is not a bijection"
    if group.order <= _FULL_CAYLEY_LIMIT:
        table = group.mult_vec(ids[:, None], ids[None, :])
        ab = table[ids[:, None, None], ids[None, :, None]]
        lhs = table[ab, ids[None, None, :]]
        bc = table[ids[None, :, None], ids[None, None, :]]
        rhs = table[ids[:, None, None], bc]
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)[0]
            return "associativity fails on triple %s" % (tuple(int(v) for v in bad),)
    else:
        a = rng.integers(0, group.order, _RANDOM_TRIPLES)
        b = rng.integers(0, group.order, _RANDOM_TRIPLES)
        c = rng.integers(0, group.order, _RANDOM_TRIPLES)
        lhs = group.mult_vec(group.mult_vec(a, b), c)
        rhs = group.mult_vec(a, group.mult_vec(b, c))
        if not np.array_equal(lhs, rhs):
            k = int(np.flatnonzero(lhs != rhs)[0])
            return "associativity fails on triple (%d, %d, %d)" % (a[k], b[k], c[k])
    try:
        _ = group.order_vec
    except InconsistentPresentation as exc:
        return str(exc)
    return None


def consistency_check(pres_or_dict):
    """Full consistency check of a presentation, word level then group level."""
    try:
        if isinstance(pres_or_dict, PcPresentation):
            pres = pres_or_dict
        else:
            pres = PcPresentation.from_spec_dict(pres_or_dict)
    except MalformedRule as exc:
        return ConsistencyReport(False, "malformed: %s" % exc)
    witness = overlap_witness(pres)
    if witness is not None:
        return ConsistencyReport(False, witness)
    group = PcGroup(pres)
    witness = _group_sanity(group)
    if witness is not None:
        return ConsistencyReport(False, witness)
    return ConsistencyReport(True, None)


def build_pc_group(pres_or_dict, check=True):
    if isinstance(pres_or_dict, PcPresentation):
        pres = pres_or_dict
    else:
        pres = PcPresentation.from_spec_dict(pres_or_dict)
    if check:
        report = consistency_check(pres)
        if not report.ok:
            raise InconsistentPresentation(report.witness)
    return PcGroup(pres)


def quotient_group(group, normal_bits):
    bits = np.asarray(normal_bits, dtype=bool)
    if bits.shape != (group.order,) or not bits[0]:
        raise NotNormal("normal subgroup mask must include the identity")
    members = np.flatnonzero(bits).astype(np.int64)
    prods = group.mult_vec(members[:, None], members[None, :])
    if not bits[prods].all():
        raise NotNormal("subset is not closed under multiplication")
    for perm in group.conj_perms:
        if not bits[perm[members]].all():
            raise NotNormal("subgroup is not normal")
    q = QuotientGroup(group, bits)
    hom = Homomorphism(group, q, [int(v) for v in q.to_group(group.digit_gens)])
    return q, hom


# ---------------------------------------------------------------------------
# homomorphisms from pc generators


class Homomorphism:
    """Map determined by images of the source's digit generators."""

    def __init__(self, source, target, images):
        assert len(images) == len(source.digit_gens)
        self.source = source
        self.target = target
        self.images = [int(v) for v in images]

    def apply_vec(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        digits = self.source.digit_matrix[ids]
        res = np.zeros(ids.shape, dtype=np.int64)
        p = self.source.prime
        for k, img in enumerate(self.images):
            pows = self.target.powers_upto(img, p)
            res = self.target.mult_vec(res, pows[digits[..., k]])
        return res

    def apply(self, x):
        return int(self.apply_vec(np.asarray([x]))[0])

    @cached_property
    def kernel_bits(self):
        return self.apply_vec(np.arange(self.source.order, dtype=np.int64)) == 0

    @cached_property
    def image_bits(self):
        return generated_bits(self.target, self.images)


@dataclass
class EpiVerdict:
    ok: bool
    reason: str | None = None
    detail: str | None = None


def verify_epimorphism(hom):
    """Check that a generator map is a well-defined onto homomorphism.

    Requires the source to be presentation backed.  Verifies every defining
    relation on the images, that the images generate the target, and that
    the two orders agree (so the verified map is an isomorphism).
    """
    src = hom.source
    assert isinstance(src, PcGroup), "source must be presentation backed"
    pres = src.pres
    tgt = hom.target
    p = pres.prime

    def eval_word(word):
        acc = 0
        for g, e in word:
            acc = tgt.mult(acc, tgt.power(hom.images[g], e))
        return acc

    for i in range(pres.ngens):
        lhs = tgt.power(hom.images[i], p)
        rhs = eval_word(pres.power_rules[i])
        if lhs != rhs:
            return EpiVerdict(
                False,
                "relation_violated",
                "power relation for %s does not hold on the images" % pres.labels[i],
            )
    comm = pres.comm_dict()
    for j in range(pres.ngens):
        for i in range(j):
            lhs = tgt.comm(hom.images[j], hom.images[i])
            rhs = eval_word(comm.get((j, i), ()))
            if lhs != rhs:
                return EpiVerdict(
                    False,
                    "relation_violated",
                    "commutator relation [%s, %s] does not hold on the images"
                    % (pres.labels[j], pres.labels[i]),
                )
    if int(hom.image_bits.sum()) != tgt.order:
        return EpiVerdict(False, "not_surjective", "images do not generate the target")
    if src.order != tgt.order:
        return EpiVerdict(
            False,
            "order_mismatch",
            "source order %d differs from target order %d" % (src.order, tgt.order),
        )
    return EpiVerdict(True, None, None)
