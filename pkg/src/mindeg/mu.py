"""Exact minimal faithful permutation degree.

A faithful transitive-orbit decomposition corresponds to a family of
subgroups H_1, ..., H_r whose cores intersect trivially; the degree is the
sum of the indices.  For a p-group the intersection of the cores is trivial
exactly when every minimal normal subgroup (an order-p subgroup of the
p-torsion of the center) avoids at least one core, which turns the search
into an exact weighted set-cover problem over that finite universe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundExceeded, NotAbelian, NotFaithful
from .lattice import (
    LatticeIndex,
    Subgroup,
    abelian_invariants,
    all_subgroups,
    core_bits,
    socle_minimal_normals,
)


@dataclass
class CoverCandidate:
    pos: int          # lattice position of the class representative
    index: int        # |G : H|, the weight
    mask: int         # bit i set iff H's core avoids universe element i
    key: bytes        # canonical membership key, used for tie-breaking


def _coverage_candidates(group, lat, universe):
    """One candidate per conjugacy class of proper subgroups; conjugates
    share both the index and the core, so one representative suffices."""
    gens = [int(u.members[1]) for u in universe]
    cands = []
    for pos in lat.class_reps:
        h = lat.subgroups[pos]
        if h.order == group.order:
            continue
        corebits = lat.subgroups[lat.core_pos(pos)].bits
        mask = 0
        for i, g in enumerate(gens):
            if not corebits[g]:
                mask |= 1 << i
        if mask:
            cands.append(CoverCandidate(pos, group.order // h.order, mask, h.key))
    cands.sort(key=lambda c: (c.index, -bin(c.mask).count("1"), c.key))
    kept = []
    for c in cands:
        if not any(k.index <= c.index and (c.mask & ~k.mask) == 0 for k in kept):
            kept.append(c)
    return kept


def _solve_cover(cands, nuniv):
    """Branch and bound for an exact minimum-weight cover.

    Ties on total weight are broken toward the lexicographically smallest
    sorted tuple of membership keys, making the chosen family canonical.
    """
    if nuniv == 0:
        return []
    cover_lists = []
    for i in range(nuniv):
        covering = [k for k, c in enumerate(cands) if c.mask >> i & 1]
        assert covering, "a minimal normal subgroup avoids no core"
        cover_lists.append(covering)
    min_index_cover = [min(cands[k].index for k in cover_lists[i]) for i in range(nuniv)]
    branch_order = sorted(range(nuniv), key=lambda i: (len(cover_lists[i]), i))
    full = (1 << nuniv) - 1

    best_w = [None]
    best_sol = [None]

    def family_key(chosen):
        return tuple(sorted(cands[k].key for k in chosen))

    def lower_bound(uncovered):
        lb = 0
        i = 0
        while uncovered:
            if uncovered & 1:
                v = min_index_cover[i]
                if v > lb:
                    lb = v
            uncovered >>= 1
            i += 1
        return lb

    def rec(covered, weight, chosen, banned):
        if covered == full:
            fk = family_key(chosen)
            if (
                best_w[0] is None
                or weight < best_w[0]
                or (weight == best_w[0] and fk < family_key(best_sol[0]))
            ):
                best_w[0] = weight
                best_sol[0] = list(chosen)
            return
        if best_w[0] is not None and weight + lower_bound(full & ~covered) > best_w[0]:
            return
        for i in branch_order:
            if not covered >> i & 1:
                break
        tried = []
        for k in cover_lists[i]:
            if k in banned:
                continue
            c = cands[k]
            if best_w[0] is not None and weight + c.index > best_w[0]:
                continue
            chosen.append(k)
            rec(covered | c.mask, weight + c.index, chosen, banned | set(tried))
            chosen.pop()
            tried.append(k)

    rec(0, 0, [], frozenset())
    assert best_sol[0] is not None
    return [cands[k] for k in best_sol[0]]


def minimal_family(group, lat=None, bound=3125):
    """The canonical minimum-degree family of point stabilizers, as
    Subgroup objects sorted by (index, key)."""
    if group.order > bound:
        raise BoundExceeded(
            "degree search limited to order %d, group has order %d"
            % (bound, group.order)
        )
    memo = group.__dict__.get("_mu_family")
    if memo is not None:
        return memo
    if group.order == 1:
        group.__dict__["_mu_family"] = []
        return []
    if lat is None:
        lat = all_subgroups(group, bound=bound)
    universe = socle_minimal_normals(group)
    cands = _coverage_candidates(group, lat, universe)
    sol = _solve_cover(cands, len(universe))
    fam = [lat.subgroups[c.pos] for c in sol]
    fam.sort(key=lambda s: (s.index, s.key))
    group.__dict__["_mu_family"] = fam
    return fam


def minimal_degree(group, lat=None, bound=3125):
    return sum(s.index for s in minimal_family(group, lat, bound))


# ---------------------------------------------------------------------------
# permutation representations on coset spaces


def _coset_canon(group, sub):
    """canon[x] = smallest element of the right coset (sub)x."""
    canon = np.full(group.order, -1, dtype=np.int64)
    members = sub.members
    for r in range(group.order):
        if canon[r] < 0:
            coset = group.mult_vec(members, np.full(len(members), r, dtype=np.int64))
            canon[coset] = r
    assert (canon >= 0).all()
    return canon


def cycle_string(perm):
    """Disjoint cycle notation on 1-based points, fixed points omitted."""
    perm = [int(v) for v in perm]
    seen = [False] * len(perm)
    out = []
    for s in range(len(perm)):
        if seen[s] or perm[s] == s:
            seen[s] = True
            continue
        cyc = [s]
        seen[s] = True
        t = perm[s]
        while t != s:
            cyc.append(t)
            seen[t] = True
            t = perm[t]
        out.append("(" + " ".join(str(v + 1) for v in cyc) + ")")
    return "".join(out) if out else "()"


@dataclass
class PermRep:
    group: object
    subgroups: list
    degree: int
    orbit_offsets: list
    gen_perms: dict = field(repr=False)  # label -> list of point images

    def cycles(self):
        return {label: cycle_string(perm) for label, perm in self.gen_perms.items()}


def build_permutation_rep(group, subgroups, require_faithful=True):
    """Action on the disjoint union of right coset spaces of the family."""
    degree = sum(s.index for s in subgroups)
    gen_perms = {label: [] for label in group.generator_labels}
    offsets = []
    offset = 0
    kernel = np.ones(group.order, dtype=bool)
    ids = np.arange(group.order, dtype=np.int64)
    for sub in subgroups:
        canon = _coset_canon(group, sub)
        reps = np.unique(canon)
        assert len(reps) == sub.index
        offsets.append(offset)
        for label in group.generator_labels:
            g = int(group.digit_gens[group._label_index[label]])
            img = np.searchsorted(
                reps, canon[group.mult_vec(reps, np.full(len(reps), g, dtype=np.int64))]
            )
            gen_perms[label].extend(int(v) + offset for v in img)
        for r in reps:
            kernel &= canon[group.mult_vec(np.full(group.order, int(r), dtype=np.int64), ids)] == r
        offset += len(reps)
    if require_faithful and kernel.sum() != 1:
        raise NotFaithful(
            "the action has a kernel of order %d" % int(kernel.sum())
        )
    rep = PermRep(group, list(subgroups), degree, offsets, gen_perms)
    rep.kernel_size = int(kernel.sum())
    return rep


# ---------------------------------------------------------------------------
# certificates


@dataclass
class MuCertificate:
    group_label: str
    degree: int
    orbits: list       # dicts: {"subgroup_gens": [words], "index": int}
    gen_ranks: list    # per orbit, echelon generator element ids
    perm_gens: dict    # label -> cycle string

    def to_dict(self):
        return {
            "schema": 1,
            "group": self.group_label,
            "mu": self.degree,
            "orbits": self.orbits,
            "perm_gens": dict(self.perm_gens),
            "subgroup_gen_ranks": self.gen_ranks,
        }


def mu_certificate(group, lat=None, bound=3125):
    fam = minimal_family(group, lat, bound)
    rep = build_permutation_rep(group, fam, require_faithful=True)
    orbits = [{"subgroup_gens": s.gen_words(), "index": s.index} for s in fam]
    ranks = [[int(g) for g in s.gens] for s in fam]
    label = getattr(group, "label", "?")
    return MuCertificate(label, rep.degree, orbits, ranks, rep.cycles())


def check_certificate(group, cert):
    """Independently validate a certificate dictionary against the group.

    Rebuilds each stabilizer from the recorded generator ranks, recomputes
    the coset actions, and confirms the degree, the cycle strings, and
    faithfulness.  Returns (ok, detail).
    """
    if cert.get("schema") != 1:
        return False, "unknown certificate schema"
    try:
        subs = [
            Subgroup(group, _closure_bits(group, ranks))
            for ranks in cert["subgroup_gen_ranks"]
        ]
    except Exception as exc:
        return False, "could not rebuild stabilizers: %s" % exc
    if len(subs) != len(cert["orbits"]):
        return False, "orbit count does not match the stabilizer list"
    for sub, orb in zip(subs, cert["orbits"]):
        if sub.index != orb["index"]:
            return False, "recorded index %d, actual %d" % (orb["index"], sub.index)
        if sub.gen_words() != orb["subgroup_gens"]:
            return False, "recorded generator words do not match"
    if sum(s.index for s in subs) != cert["mu"]:
        return False, "degree is not the sum of the indices"
    try:
        rep = build_permutation_rep(group, subs, require_faithful=True)
    except NotFaithful as exc:
        return False, str(exc)
    if rep.cycles() != cert["perm_gens"]:
        return False, "permutation images do not match"
    return True, None


def _closure_bits(group, gen_ids):
    from .groups import generated_bits

    return generated_bits(group, [int(g) for g in gen_ids])


# ---------------------------------------------------------------------------
# independent oracles


@dataclass
class NaiveOracleResult:
    degree: int
    family: list


def mu_bruteforce_oracle(group, bound=81):
    """Reference answer by direct search over subgroup families.

    Candidates are all proper subgroups with distinct cores (keeping the
    largest subgroup per core); the search walks families in a fixed sorted
    order, requiring every added member to strictly shrink the running core
    intersection.  An optimal family always has that property under any
    insertion order, so the search is exact.
    """
    if group.order > bound:
        raise BoundExceeded(
            "oracle limited to order %d, group has order %d" % (bound, group.order)
        )
    if group.order == 1:
        return NaiveOracleResult(0, [])
    lat = all_subgroups(group)
    by_core = {}
    for pos, sub in enumerate(lat.subgroups):
        if sub.order == group.order:
            continue
        cmask = int.from_bytes(np.packbits(core_bits(group, sub.bits)).tobytes(), "big")
        cur = by_core.get(cmask)
        if cur is None or sub.order > cur[1]:
            by_core[cmask] = (pos, sub.order)
    cands = sorted(
        ((lat.subgroups[pos].index, lat.subgroups[pos].key, pos, cmask)
         for cmask, (pos, _) in by_core.items()),
    )
    full = int.from_bytes(np.packbits(np.ones(group.order, dtype=bool)).tobytes(), "big")
    one = int.from_bytes(
        np.packbits(np.arange(group.order) == 0).tobytes(), "big"
    )
    min_index = min(c[0] for c in cands)

    best = [None, None]

    def rec(start, inter, weight, chosen):
        if inter == one:
            if best[0] is None or weight < best[0]:
                best[0] = weight
                best[1] = list(chosen)
            return
        if best[0] is not None and weight + min_index >= best[0]:
            return
        for k in range(start, len(cands)):
            index, _, pos, cmask = cands[k]
            nxt = inter & cmask
            if nxt == inter:
                continue
            chosen.append(pos)
            rec(k + 1, nxt, weight + index, chosen)
            chosen.pop()

    rec(0, full, 0, [])
    assert best[0] is not None
    return NaiveOracleResult(best[0], [lat.subgroups[p] for p in best[1]])


def mu_abelian_crosscheck(group):
    """For an abelian group the degree is the sum of the invariant factors."""
    if not group.is_abelian:
        raise NotAbelian("crosscheck formula applies to abelian groups only")
    if group.order == 1:
        return 0
    whole = Subgroup(group, np.ones(group.order, dtype=bool))
    return int(sum(abelian_invariants(whole)))
