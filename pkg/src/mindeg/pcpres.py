"""Power-commutator presentations and the collection rewriter.

A presentation over the prime p with generators g_0 < g_1 < ... < g_{n-1}
consists of power rules (the value of g_i^p) and commutator rules (the value
of [g_j, g_i] for j > i, with [a, b] = a^-1 b^-1 a b).  Every rule word is
supported on generators of index strictly greater than the smaller index i,
so collected words g_0^{e_0} ... g_{n-1}^{e_{n-1}} with 0 <= e_k < p are
normal forms and the presented group has order at most p^n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InconsistentPresentation, MalformedRule


def is_prime(n):
    if not isinstance(n, int) or n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def default_labels(n):
    return tuple("g%d" % (i + 1) for i in range(n))


def _normalize_word(word, p, lo, ngens, what):
    """Validate and canonicalize a rule word: {gen: exp} or iterable of pairs.

    Keeps only generators with index > lo, reduces exponents mod p, drops
    zeros, and returns a tuple of (gen, exp) sorted by generator.
    """
    if word is None:
        return ()
    items = word.items() if hasattr(word, "items") else list(word)
    acc = {}
    for g, e in items:
        if not isinstance(g, int) or isinstance(g, bool):
            raise MalformedRule("%s: generator index %r is not an integer" % (what, g))
        if not isinstance(e, int) or isinstance(e, bool):
            raise MalformedRule("%s: exponent %r is not an integer" % (what, e))
        if g < 0 or g >= ngens:
            raise MalformedRule("%s: generator index %d out of range" % (what, g))
        if g <= lo:
            raise MalformedRule(
                "%s: support on generator %d, but only indices above %d are allowed"
                % (what, g, lo)
            )
        acc[g] = (acc.get(g, 0) + e) % p
    return tuple((g, acc[g]) for g in sorted(acc) if acc[g])


@dataclass(frozen=True)
class PcPresentation:
    prime: int
    ngens: int
    power_rules: tuple      # entry i: word for g_i^p, () meaning identity
    commutator_rules: tuple  # ((j, i), word) pairs, sorted, omitted = trivial
    labels: tuple

    @classmethod
    def make(cls, prime, ngens, powers=None, commutators=None, labels=None):
        if not is_prime(prime):
            raise MalformedRule("prime must be a prime number, got %r" % (prime,))
        if not isinstance(ngens, int) or ngens < 0:
            raise MalformedRule("ngens must be a non-negative integer")
        if labels is None:
            labels = default_labels(ngens)
        labels = tuple(labels)
        if len(labels) != ngens:
            raise MalformedRule("expected %d labels, got %d" % (ngens, len(labels)))
        if len(set(labels)) != ngens or any(not l or not isinstance(l, str) for l in labels):
            raise MalformedRule("labels must be distinct non-empty strings")

        powers = dict(powers or {})
        power_rules = []
        for i in range(ngens):
            word = powers.pop(i, None)
            power_rules.append(
                _normalize_word(word, prime, i, ngens, "power rule for %s" % labels[i])
            )
        if powers:
            raise MalformedRule("power rule for unknown generator index %r" % sorted(powers)[0])

        comm_rules = []
        for key, word in sorted((commutators or {}).items()):
            if not (isinstance(key, tuple) and len(key) == 2):
                raise MalformedRule("commutator key %r is not an index pair" % (key,))
            j, i = key
            if not (isinstance(j, int) and isinstance(i, int)) or not (0 <= i < j < ngens):
                raise MalformedRule(
                    "commutator [g%d, g%d] must have the later generator first" % (j, i)
                )
            what = "commutator rule [%s, %s]" % (labels[j], labels[i])
            norm = _normalize_word(word, prime, i, ngens, what)
            if norm:
                comm_rules.append(((j, i), norm))
        return cls(prime, ngens, tuple(power_rules), tuple(comm_rules), labels)

    def comm_dict(self):
        return dict(self.commutator_rules)

    def label_index(self):
        return {l: k for k, l in enumerate(self.labels)}

    @classmethod
    def from_spec_dict(cls, d):
        """Parse the external JSON form:

        {"prime": p, "generators": [names], "powers": {name: {name: exp}},
         "commutators": {"[a,b]": {name: exp}}}
        """
        if not isinstance(d, dict):
            raise MalformedRule("group spec must be a JSON object")
        allowed = {"prime", "generators", "powers", "commutators"}
        extra = set(d) - allowed
        if extra:
            raise MalformedRule("unknown field %r in group spec" % sorted(extra)[0])
        if "prime" not in d or "generators" not in d:
            raise MalformedRule("group spec needs 'prime' and 'generators'")
        prime = d["prime"]
        names = d["generators"]
        if not isinstance(names, (list, tuple)) or not all(isinstance(s, str) for s in names):
            raise MalformedRule("'generators' must be a list of names")
        idx = {s: k for k, s in enumerate(names)}
        if len(idx) != len(names):
            raise MalformedRule("duplicate generator name")

        def translate(word, what):
            if not isinstance(word, dict):
                raise MalformedRule("%s: rule value must be an object" % what)
            out = {}
            for name, e in word.items():
                if name not in idx:
                    raise MalformedRule("%s: unknown generator %r" % (what, name))
                out[idx[name]] = out.get(idx[name], 0) + e
            return out

        powers = {}
        for name, word in (d.get("powers") or {}).items():
            if name not in idx:
                raise MalformedRule("power rule for unknown generator %r" % name)
            powers[idx[name]] = translate(word, "power rule for %s" % name)

        comms = {}
        for key, word in (d.get("commutators") or {}).items():
            m = re.fullmatch(r"\[\s*([^\s,\]]+)\s*,\s*([^\s,\]]+)\s*\]", key)
            if not m:
                raise MalformedRule("commutator key %r is not of the form [a,b]" % key)
            a, b = m.group(1), m.group(2)
            if a not in idx or b not in idx:
                raise MalformedRule("commutator key %r uses an unknown generator" % key)
            comms[(idx[a], idx[b])] = translate(word, "commutator rule %s" % key)
        return cls.make(prime, len(names), powers, comms, labels=tuple(names))

    def to_spec_dict(self):
        powers = {}
        for i, word in enumerate(self.power_rules):
            if word:
                powers[self.labels[i]] = {self.labels[g]: e for g, e in word}
        comms = {}
        for (j, i), word in self.commutator_rules:
            key = "[%s,%s]" % (self.labels[j], self.labels[i])
            comms[key] = {self.labels[g]: e for g, e in word}
        return {
            "prime": self.prime,
            "generators": list(self.labels),
            "powers": powers,
            "commutators": comms,
        }


def word_str(digits, labels):
    parts = []
    for g, e in enumerate(digits):
        if e == 1:
            parts.append(labels[g])
        elif e:
            parts.append("%s^%d" % (labels[g], e))
    return "*".join(parts) if parts else "1"


class Collector:
    """Collection from the left: rewrites words to collected normal form.

    A word is a sequence of (generator, exponent) letters with non-negative
    exponents.  The rewriting moves the leftmost out-of-order letter into
    place one swap at a time using g_j g_i -> g_i g_j [g_j, g_i] (j > i) and
    folds overflowing exponents through the power rules.
    """

    def __init__(self, pres, max_steps=10_000_000):
        self.pres = pres
        self.p = pres.prime
        self.n = pres.ngens
        self.power = pres.power_rules
        self.comm = pres.comm_dict()
        self.max_steps = max_steps

    def collect(self, letters):
        p = self.p
        left = []    # [gen, exp] with strictly increasing gen, 0 < exp < p
        stack = []
        for g, e in reversed(tuple(letters)):
            if e < 0:
                raise ValueError("collector letters need non-negative exponents")
            if e:
                stack.append((g, e))
        steps = 0
        while stack:
            steps += 1
            if steps > self.max_steps:
                raise InconsistentPresentation(
                    "collection exceeded %d rewrite steps" % self.max_steps
                )
            a, e = stack.pop()
            if not left or left[-1][0] < a:
                q, r = divmod(e, p)
                if r:
                    left.append([a, r])
                if q:
                    self._push_power(stack, a, q)
            elif left[-1][0] == a:
                q, r = divmod(left[-1][1] + e, p)
                if r:
                    left[-1][1] = r
                else:
                    left.pop()
                if q:
                    self._push_power(stack, a, q)
            else:
                # left ends with b^f, b > a: rewrite b a = a b [b, a]
                b = left[-1][0]
                if left[-1][1] == 1:
                    left.pop()
                else:
                    left[-1][1] -= 1
                if e > 1:
                    stack.append((a, e - 1))
                for g, c in reversed(self.comm.get((b, a), ())):
                    stack.append((g, c))
                stack.append((b, 1))
                stack.append((a, 1))
        out = [0] * self.n
        for g, e in left:
            out[g] = e
        return tuple(out)

    def _push_power(self, stack, a, q):
        word = self.power[a]
        if word:
            for _ in range(q):
                for g, c in reversed(word):
                    stack.append((g, c))


def _digits_to_word(digits):
    return tuple((g, e) for g, e in enumerate(digits) if e)


def overlap_witness(pres):
    """Check all collection overlaps; return a witness string or None.

    The test words are the standard ones: for k > j > i the two bracketings
    of g_k g_j g_i, and for j > i the pairs (g_j^p) g_i vs g_j^{p-1} (g_j g_i),
    g_j (g_i^p) vs (g_j g_i) g_i^{p-1}, and (g_i^p) g_i vs g_i (g_i^p).
    """
    col = Collector(pres)
    p, n, labels = pres.prime, pres.ngens, pres.labels

    def nf(word):
        return col.collect(word)

    def show(digits):
        return word_str(digits, labels)

    def mismatch(desc, lhs, rhs):
        return "%s: %s != %s" % (desc, show(lhs), show(rhs))

    try:
        for k in range(n):
            for j in range(k):
                for i in range(j):
                    # indices i < j < k, word g_k g_j g_i
                    lhs = nf(_digits_to_word(nf(((k, 1), (j, 1)))) + ((i, 1),))
                    rhs = nf(((k, 1),) + _digits_to_word(nf(((j, 1), (i, 1)))))
                    if lhs != rhs:
                        return mismatch(
                            "(%s %s) %s vs %s (%s %s)"
                            % (labels[k], labels[j], labels[i],
                               labels[k], labels[j], labels[i]),
                            lhs, rhs,
                        )
        for j in range(n):
            for i in range(j):
                lhs = nf(pres.power_rules[j] + ((i, 1),))
                rhs = nf(((j, p - 1),) + _digits_to_word(nf(((j, 1), (i, 1)))))
                if lhs != rhs:
                    return mismatch(
                        "(%s^p) %s vs %s^{p-1} (%s %s)"
                        % (labels[j], labels[i], labels[j], labels[j], labels[i]),
                        lhs, rhs,
                    )
                lhs = nf(((j, 1),) + pres.power_rules[i])
                rhs = nf(_digits_to_word(nf(((j, 1), (i, 1)))) + ((i, p - 1),))
                if lhs != rhs:
                    return mismatch(
                        "%s (%s^p) vs (%s %s) %s^{p-1}"
                        % (labels[j], labels[i], labels[j], labels[i], labels[i]),
                        lhs, rhs,
                    )
        for i in range(n):
            lhs = nf(pres.power_rules[i] + ((i, 1),))
            rhs = nf(((i, 1),) + pres.power_rules[i])
            if lhs != rhs:
                return mismatch(
                    "(%s^p) %s vs %s (%s^p)" % (labels[i], labels[i], labels[i], labels[i]),
                    lhs, rhs,
                )
    except InconsistentPresentation as exc:
        return str(exc)
    return None
