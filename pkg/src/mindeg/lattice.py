"""Subgroup machinery: membership masks, enumeration, cores, invariants.

Subgroups are stored as boolean membership masks over element ids.  The key
structural fact used throughout: ids are compatible with the digit filtration
(the set of elements whose first d digits vanish is an initial id interval
and a normal subgroup), so the minimal member at each realized digit depth
gives a canonical generating sequence and a deterministic membership sift.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from . import cache
from .errors import BoundExceeded, NotAbelian
from .groups import generated_bits
from .pcpres import PcPresentation


class Subgroup:
    """Immutable subgroup of a fixed group, identified by its member mask."""

    def __init__(self, group, bits):
        self.group = group
        bits = np.array(bits, dtype=bool)
        bits.flags.writeable = False
        self.bits = bits

    @cached_property
    def key(self):
        return np.packbits(self.bits).tobytes()

    @cached_property
    def order(self):
        return int(self.bits.sum())

    @cached_property
    def members(self):
        return np.flatnonzero(self.bits).astype(np.int64)

    @cached_property
    def gens(self):
        return echelon_gens(self.group, self.members)

    @cached_property
    def index(self):
        return self.group.order // self.order

    def contains(self, x):
        return bool(self.bits[x])

    def gen_words(self):
        return [self.group.element_word(g) for g in self.gens]

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.group is other.group
            and self.key == other.key
        )

    def __hash__(self):
        return hash((id(self.group), self.key))

    def __repr__(self):
        return "<Subgroup of order %d: <%s>>" % (self.order, ", ".join(self.gen_words()))


def subgroup_from_gens(group, gen_ids):
    return Subgroup(group, generated_bits(group, [int(g) for g in gen_ids]))


def subgroup_from_words(group, words):
    """Words here are plain strings over generator labels, or (label, exp) pairs."""
    ids = []
    for w in words:
        if isinstance(w, str):
            ids.append(_parse_element_word(group, w))
        else:
            ids.append(group.evaluate_word(w))
    return subgroup_from_gens(group, ids)


def _parse_element_word(group, text):
    text = text.strip()
    if text in ("", "1"):
        return 0
    word = []
    for part in text.split("*"):
        part = part.strip()
        if "^" in part:
            label, e = part.split("^", 1)
            word.append((label.strip(), int(e)))
        else:
            word.append((part, 1))
    return group.evaluate_word(word)


def echelon_gens(group, members):
    """Minimal member at each realized depth, in increasing depth order.

    These elements generate the subgroup: intersecting with the ambient
    filtration steps gives a chain whose nontrivial steps are exactly the
    realized depths, each of index p, and the chosen element witnesses the
    step.
    """
    members = np.asarray(members, dtype=np.int64)
    depths = group.depth_vec[members]
    out = []
    for d in np.unique(depths):
        if d == group.ndigits:
            continue
        out.append(int(members[depths == d].min()))
    return out


def sift(group, echelon, x):
    """Express x over an echelon generating sequence, or return None.

    Returns exponents (one per echelon element, in order) with
    x = prod q_i^{e_i}, peeling the leading digit at each step.
    """
    p = group.prime
    exps = []
    x = int(x)
    for q in echelon:
        dq = int(group.depth_vec[q])
        dx = int(group.depth_vec[x])
        if dx < dq:
            return None
        if dx == dq:
            a = int(group.lead_vec[x]) * pow(int(group.lead_vec[q]), -1, p) % p
            x = group.mult(group.power(q, -a), x)
            exps.append(a)
        else:
            exps.append(0)
    return exps if x == 0 else None


def center(group):
    bits = np.ones(group.order, dtype=bool)
    ids = np.arange(group.order)
    for perm in group.conj_perms:
        bits &= perm == ids
    return Subgroup(group, bits)


def omega1_center(group):
    z = center(group)
    return Subgroup(group, z.bits & (group.pow_p_map == 0))


def socle_minimal_normals(group):
    """All minimal normal subgroups: the order-p subgroups of the p-torsion
    of the center.  Sorted by their smallest nontrivial member."""
    oz = omega1_center(group)
    p = group.prime
    d = round(math.log(oz.order, p))
    assert p ** d == oz.order
    subs = []
    seen = np.zeros(group.order, dtype=bool)
    seen[0] = True
    for x in oz.members:
        x = int(x)
        if seen[x]:
            continue
        pows = group.powers_upto(x, p)
        seen[pows] = True
        bits = np.zeros(group.order, dtype=bool)
        bits[pows] = True
        subs.append(Subgroup(group, bits))
    assert len(subs) == (p ** d - 1) // (p - 1)
    return subs


def normalizer_bits(group, sub):
    mask = np.ones(group.order, dtype=bool)
    ids = np.arange(group.order, dtype=np.int64)
    for u in sub.gens:
        left = group.mult_vec(group.inv_all, np.full(group.order, u, dtype=np.int64))
        conj = group.mult_vec(left, ids)
        mask &= sub.bits[conj]
    return mask


def normalizer(group, sub):
    return Subgroup(group, normalizer_bits(group, sub))


def is_normal(group, sub):
    for perm in group.conj_perms:
        if not sub.bits[perm[sub.members]].all():
            return False
    return True


def core_bits(group, bits):
    """Largest normal subgroup inside the given subgroup mask."""
    k = np.asarray(bits, dtype=bool).copy()
    changed = True
    while changed:
        changed = False
        for perm in group.conj_perms:
            img = np.zeros(group.order, dtype=bool)
            img[perm[np.flatnonzero(k)]] = True
            nxt = k & img
            if nxt.sum() != k.sum():
                changed = True
            k = nxt
    return k


def core(group, sub):
    return Subgroup(group, core_bits(group, sub.bits))


def abelian_invariants(sub):
    """Orders of the invariant factors, largest first, e.g. (9, 3)."""
    group = sub.group
    gens = sub.gens
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            if group.comm(gens[a], gens[b]) != 0:
                raise NotAbelian(
                    "subgroup generators %s and %s do not commute"
                    % (group.element_word(gens[a]), group.element_word(gens[b]))
                )
    if sub.order == 1:
        return ()
    p = group.prime
    orders = group.order_vec[sub.members]
    m = round(math.log(int(orders.max()), p))
    s = [0]
    for k in range(1, m + 1):
        c = int((orders <= p ** k).sum())
        sk = round(math.log(c, p))
        assert p ** sk == c, "element order census is not a p-group census"
        s.append(sk)
    d = [s[k] - s[k - 1] for k in range(1, m + 1)] + [0]
    invs = []
    for k in range(1, m + 1):
        invs.extend([p ** k] * (d[k - 1] - d[k]))
    invs.sort(reverse=True)
    assert sum(round(math.log(v, p)) for v in invs) == round(math.log(sub.order, p))
    return tuple(invs)


def pc_presentation_from_subgroup(sub, labels=None):
    """Re-derive a power-commutator presentation on the echelon generators.

    Each p-th power and each commutator of echelon generators lies in the
    tail subgroup generated by the strictly later generators, so sifting
    yields rule words of the required shape.
    """
    group = sub.group
    p = group.prime
    qs = sub.gens
    m = len(qs)
    powers = {}
    comms = {}
    for k in range(m):
        exps = sift(group, qs[k + 1:], group.power(qs[k], p))
        assert exps is not None, "p-th power escaped the tail subgroup"
        word = {k + 1 + t: e for t, e in enumerate(exps) if e}
        if word:
            powers[k] = word
    for j in range(m):
        for i in range(j):
            exps = sift(group, qs[i + 1:], group.comm(qs[j], qs[i]))
            assert exps is not None, "commutator escaped the tail subgroup"
            word = {i + 1 + t: e for t, e in enumerate(exps) if e}
            if word:
                comms[(j, i)] = word
    return PcPresentation.make(p, m, powers, comms, labels=labels)


class LatticeIndex:
    """All subgroups of a group, with conjugacy classes and cores."""

    def __init__(self, group, subgroups):
        self.group = group
        self.subgroups = sorted(subgroups, key=lambda s: (s.order, s.key))
        self.key_to_pos = {s.key: i for i, s in enumerate(self.subgroups)}
        assert len(self.key_to_pos) == len(self.subgroups)

        self.by_order = {}
        for i, s in enumerate(self.subgroups):
            self.by_order.setdefault(s.order, []).append(i)

        self.classes = []
        self.class_id = np.full(len(self.subgroups), -1, dtype=np.int64)
        for pos in range(len(self.subgroups)):
            if self.class_id[pos] >= 0:
                continue
            cls = self._conjugacy_class(pos)
            cid = len(self.classes)
            for q in cls:
                assert self.class_id[q] < 0
                self.class_id[q] = cid
            self.classes.append(cls)
        self.class_reps = [cls[0] for cls in self.classes]
        self.normal_flags = np.array([len(self.classes[c]) == 1 for c in self.class_id])
        self._core_pos = {}

    def _conjugacy_class(self, pos):
        group = self.group
        found = {pos}
        frontier = [pos]
        while frontier:
            nxt = []
            for q in frontier:
                members = self.subgroups[q].members
                for perm in group.conj_perms:
                    img = np.zeros(group.order, dtype=bool)
                    img[perm[members]] = True
                    key = np.packbits(img).tobytes()
                    r = self.key_to_pos.get(key)
                    assert r is not None, "conjugate of a subgroup missing from the lattice"
                    if r not in found:
                        found.add(r)
                        nxt.append(r)
            frontier = nxt
        return sorted(found)

    def __len__(self):
        return len(self.subgroups)

    def position_of(self, sub):
        return self.key_to_pos[sub.key]

    def core_pos(self, pos):
        """Lattice position of the core; conjugate subgroups share it."""
        cid = int(self.class_id[pos])
        if cid not in self._core_pos:
            bits = core_bits(self.group, self.subgroups[self.classes[cid][0]].bits)
            key = np.packbits(bits).tobytes()
            assert key in self.key_to_pos, "core missing from the lattice"
            self._core_pos[cid] = self.key_to_pos[key]
        return self._core_pos[cid]

    def normal_positions(self):
        return [i for i in range(len(self.subgroups)) if self.normal_flags[i]]


_LATTICE_CACHE_KIND = "lattice"
_LATTICE_CACHE_VERSION = 1


def all_subgroups(group, bound=3125, use_cache=True):
    """Enumerate every subgroup by extending upward one index-p step at a
    time: each proper subgroup arises from a maximal subgroup it normalizes,
    so candidates are normalizer elements whose p-th power falls inside."""
    if group.order > bound:
        raise BoundExceeded(
            "subgroup enumeration limited to order %d, group has order %d"
            % (bound, group.order)
        )
    if "_lattice_index" in group.__dict__:
        return group.__dict__["_lattice_index"]

    idx = None
    if use_cache:
        data = cache.load_arrays(group, _LATTICE_CACHE_KIND, _LATTICE_CACHE_VERSION)
        if data is not None:
            packed = data["packed"]
            subs = [
                Subgroup(group, np.unpackbits(row, count=group.order).astype(bool))
                for row in packed
            ]
            idx = LatticeIndex(group, subs)
    if idx is None:
        idx = LatticeIndex(group, _enumerate_subgroups(group))
        if use_cache:
            packed = np.stack([np.packbits(s.bits) for s in idx.subgroups])
            cache.save_arrays(
                group, _LATTICE_CACHE_KIND, _LATTICE_CACHE_VERSION, packed=packed
            )
    group.__dict__["_lattice_index"] = idx
    return idx


def _enumerate_subgroups(group):
    p = group.prime
    trivial = np.zeros(group.order, dtype=bool)
    trivial[0] = True
    t = Subgroup(group, trivial)
    found = {t.key: t}
    layer = [t]
    while layer:
        nxt = {}
        for sub in layer:
            if sub.order == group.order:
                continue
            norm = normalizer_bits(group, sub)
            candidates = np.flatnonzero(norm & ~sub.bits & sub.bits[group.pow_p_map])
            seen = sub.bits.copy()
            for x in candidates:
                x = int(x)
                if seen[x]:
                    continue
                bits = sub.bits.copy()
                cur = x
                for _ in range(p - 1):
                    coset = group.mult_vec(
                        np.full(sub.order, cur, dtype=np.int64), sub.members
                    )
                    bits[coset] = True
                    cur = group.mult(cur, x)
                assert cur == 0 or sub.bits[cur]
                seen |= bits
                v = Subgroup(group, bits)
                if v.key not in found and v.key not in nxt:
                    nxt[v.key] = v
        layer = [nxt[k] for k in sorted(nxt)]
        found.update(nxt)
    return list(found.values())


def has_abelian_normal_of_order(group, order, lat=None):
    """Search for an abelian normal subgroup of the given order."""
    if lat is None:
        lat = all_subgroups(group)
    for pos in lat.by_order.get(order, []):
        if not lat.normal_flags[pos]:
            continue
        sub = lat.subgroups[pos]
        try:
            abelian_invariants(sub)
        except NotAbelian:
            continue
        return True, sub
    return False, None
