"""Finite permutation groups at desk scale.

Groups are stored as fully enumerated, lexicographically sorted element
lists, so every derived object (conjugacy classes, centralizers, subgroup
lists) has one canonical, reproducible ordering. All algorithms are
brute-force: the intended inputs are groups of order at most a couple of
thousand.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import reduce

from . import GroupTooLargeError, InputError

DEFAULT_ORDER_CAP = 2000
DEFAULT_DEGREE_CAP = 50
DEFAULT_SYLOW_CAP = 256


class Perm:
    """A permutation of {0, ..., degree-1}, stored as its image tuple.

    Products compose like functions: (p * q)(i) = p(q(i)).
    """

    __slots__ = ("img",)

    def __init__(self, img):
        img = tuple(img)
        if sorted(img) != list(range(len(img))):
            raise InputError(f"not a permutation of 0..{len(img) - 1}: {img!r}")
        self.img = img

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles) -> Perm:
        """Build from disjoint cycles given in 1-based point labels."""
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b - 1
        return cls(img)

    @classmethod
    def from_one_based(cls, images) -> Perm:
        return cls(i - 1 for i in images)

    def one_based(self) -> list[int]:
        return [i + 1 for i in self.img]

    @property
    def degree(self) -> int:
        return len(self.img)

    def __mul__(self, other: Perm) -> Perm:
        a, b = self.img, other.img
        return Perm(a[b[i]] for i in range(len(a)))

    def inverse(self) -> Perm:
        inv = [0] * len(self.img)
        for i, j in enumerate(self.img):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, n: int) -> Perm:
        if n < 0:
            return self.inverse() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate_by(self, g: Perm) -> Perm:
        """g * self * g^-1."""
        return g * self * g.inverse()

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles on 0-based points, each starting at its least point."""
        seen = [False] * len(self.img)
        out = []
        for start in range(len(self.img)):
            if seen[start] or self.img[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            j = self.img[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.img[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.img))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.img == other.img

    def __lt__(self, other):
        return self.img < other.img

    def __hash__(self):
        return hash(self.img)

    def __repr__(self):
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycs)


def element_order(g: Perm) -> int:
    """Least n >= 1 with g^n the identity."""
    return g.order()


def p_decompose(g: Perm, p: int) -> tuple[Perm, Perm]:
    """Split g = g_p * g_p' into commuting p-part and p'-part.

    With order(g) = p^a * m and u*p^a + v*m = 1, the p'-part is g^(u*p^a)
    and the p-part is g^(v*m); both are powers of g, so they commute.
    """
    n = g.order()
    a = 0
    m = n
    while m % p == 0:
        m //= p
        a += 1
    pa = p**a
    if pa == 1:
        return Perm.identity(g.degree), g
    if m == 1:
        return g, Perm.identity(g.degree)
    u = pow(pa, -1, m)  # u*p^a = 1 mod m
    v = pow(m, -1, pa)
    g_pprime = g ** (u * pa)
    g_p = g ** (v * m)
    return g_p, g_pprime


def _closure(degree: int, seed, cap: int | None):
    """Sorted element list of the group generated by ``seed``."""
    ident = Perm.identity(degree)
    elems = {ident}
    gens = [g for g in seed if not g.is_identity()]
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                prod = h * g
                if prod not in elems:
                    elems.add(prod)
                    nxt.append(prod)
                    if cap is not None and len(elems) > cap:
                        raise GroupTooLargeError(
                            f"group order exceeds cap {cap}")
        frontier = nxt
    return tuple(sorted(elems))


class Group:
    """A fully enumerated permutation group.

    Elements are kept sorted by image tuple; the identity is always
    element 0. Immutable after construction.
    """

    def __init__(self, degree: int, generators, name: str = "",
                 order_cap: int | None = DEFAULT_ORDER_CAP,
                 degree_cap: int | None = DEFAULT_DEGREE_CAP):
        if degree_cap is not None and degree > degree_cap:
            raise GroupTooLargeError(f"degree {degree} exceeds cap {degree_cap}")
        self.degree = degree
        self.generators = tuple(generators)
        for g in self.generators:
            if g.degree != degree:
                raise InputError("generator degree mismatch")
        self.name = name
        self.elements = _closure(degree, self.generators, order_cap)
        self.order = len(self.elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._exponent = None
        self._classes = None
        self._hash_hex = None

    @classmethod
    def from_json(cls, data: dict, **kwargs) -> Group:
        try:
            degree = int(data["degree"])
            gens = [Perm.from_one_based(images) for images in data["generators"]]
            name = str(data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad group definition: {exc}") from exc
        return cls(degree, gens, name=name, **kwargs)

    @classmethod
    def from_file(cls, path, **kwargs) -> Group:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read group file {path}: {exc}") from exc
        return cls.from_json(data, **kwargs)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [g.one_based() for g in self.generators],
        }

    @property
    def identity(self) -> Perm:
        return self.elements[0]

    def __contains__(self, g: Perm) -> bool:
        return g in self.index

    def __len__(self) -> int:
        return self.order

    def canonical_hash(self) -> str:
        """SHA-256 over the sorted element list; identifies the group as a set."""
        if self._hash_hex is None:
            blob = json.dumps([g.one_based() for g in self.elements],
                              separators=(",", ":")).encode()
            self._hash_hex = hashlib.sha256(blob).hexdigest()
        return self._hash_hex

    def exponent(self) -> int:
        if self._exponent is None:
            self._exponent = reduce(math.lcm, (g.order() for g in self.elements), 1)
        return self._exponent

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.generators for b in self.generators)

    def conjugacy_classes(self) -> tuple[ConjugacyClass, ...]:
        if self._classes is None:
            self._classes = _conjugacy_classes(self)
        return self._classes

    def class_of(self, g: Perm) -> int:
        """Index of the conjugacy class containing g."""
        return self._class_lookup()[g]

    def _class_lookup(self):
        if not hasattr(self, "_lookup"):
            lookup = {}
            for cls in self.conjugacy_classes():
                for g in cls.elements:
                    lookup[g] = cls.index
            self._lookup = lookup
        return self._lookup

    def subgroup(self, generators, elements=None) -> Subgroup:
        if elements is None:
            elements = _closure(self.degree, generators, None)
        for g in elements:
            if g not in self.index:
                raise InputError("subgroup element outside parent group")
        return Subgroup(self, tuple(generators), tuple(sorted(elements)))

    def full_subgroup(self) -> Subgroup:
        return Subgroup(self, self.generators, self.elements)

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, (), (self.identity,))

    def __repr__(self):
        return f"Group({self.name or 'unnamed'}, order={self.order})"


@dataclass(frozen=True)
class ConjugacyClass:
    index: int
    representative: Perm  # lexicographically least member
    size: int
    elements: frozenset
    rep_order: int

    def is_p_regular(self, p: int) -> bool:
        return self.rep_order % p != 0

    def __repr__(self):
        return f"Class#{self.index}({self.representative!r}, size={self.size})"


def _conjugacy_classes(G: Group) -> tuple[ConjugacyClass, ...]:
    seen = set()
    raw = []
    for g in G.elements:
        if g in seen:
            continue
        orbit = {h * g * h.inverse() for h in G.elements}
        seen |= orbit
        rep = min(orbit)
        raw.append((rep.order(), len(orbit), rep, orbit))
    raw.sort(key=lambda t: (t[0], t[1], t[2].img))
    classes = tuple(
        ConjugacyClass(i, rep, size, frozenset(orbit), order)
        for i, (order, size, rep, orbit) in enumerate(raw)
    )
    total = sum(c.size for c in classes)
    assert total == G.order, "class equation violated"
    return classes


def conjugacy_classes(G: Group) -> tuple[ConjugacyClass, ...]:
    return G.conjugacy_classes()


class Subgroup:
    """A subgroup of a fixed parent Group, stored as its sorted element tuple."""

    __slots__ = ("parent", "generators", "elements", "_members", "_group")

    def __init__(self, parent: Group, generators: tuple, elements: tuple):
        self.parent = parent
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self._members = frozenset(elements)
        self._group = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def key(self) -> tuple:
        """Canonical identity of the subgroup as a subset of the parent."""
        return tuple(g.img for g in self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self._members

    def as_group(self, name: str = "") -> Group:
        """Standalone Group on the same points (for its own character table)."""
        if self._group is None:
            gens = self.generators or self.elements
            grp = Group(self.parent.degree, gens, name=name, order_cap=None,
                        degree_cap=None)
            assert grp.order == self.order
            self._group = grp
        return self._group

    def conjugate_by(self, g: Perm) -> Subgroup:
        ginv = g.inverse()
        return Subgroup(self.parent,
                        tuple(g * x * ginv for x in self.generators),
                        tuple(sorted(g * x * ginv for x in self.elements)))

    def exponent(self) -> int:
        return reduce(math.lcm, (g.order() for g in self.elements), 1)

    def __le__(self, other: Subgroup) -> bool:
        return self._members <= other._members

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={list(self.generators)!r})"


def centralizer(G: Group, x: Perm) -> Subgroup:
    """C_G(x) = {g in G : gx = xg}."""
    if x not in G.index:
        raise InputError("element not in group")
    elems = tuple(g for g in G.elements if g * x == x * g)
    return Subgroup(G, elems, elems)


def centralizer_of_subgroup(G: Group, S: Subgroup) -> Subgroup:
    gens = S.generators or S.elements
    elems = tuple(g for g in G.elements
                  if all(g * x == x * g for x in gens))
    return Subgroup(G, elems, elems)


def center(G: Group) -> Subgroup:
    return centralizer_of_subgroup(G, G.full_subgroup())


def normalizer(G: Group, S: Subgroup) -> Subgroup:
    elems = tuple(g for g in G.elements
                  if all(g * x * g.inverse() in S for x in S.elements))
    return Subgroup(G, elems, elems)


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown deterministically by normalizer steps."""
    target = 1
    n = G.order
    while n % p == 0:
        n //= p
        target *= p
    if target == 1:
        return G.trivial_subgroup()
    seed = next(g for g in G.elements if g.order() % p == 0)
    x, _ = p_decompose(seed, p)
    current = G.subgroup([x])
    while current.order < target:
        norm = normalizer(G, current)
        grown = False
        for y in norm.elements:
            if y in current or y.order() == 1:
                continue
            y_p, y_pp = p_decompose(y, p)
            if not y_pp.is_identity() or y_p in current:
                continue
            bigger = G.subgroup(current.elements + (y_p,))
            assert bigger.order % p == 0 and target % bigger.order == 0
            current = bigger
            grown = True
            break
        assert grown, "normalizer step failed to grow a p-subgroup"
    return current


def all_subgroups(S: Subgroup) -> list[Subgroup]:
    """Every subgroup of S (not up to conjugacy), sorted by (order, key)."""
    G = S.parent
    trivial = G.trivial_subgroup()
    found = {trivial.key(): trivial}
    frontier = [trivial]
    while frontier:
        base = frontier.pop()
        for x in S.elements:
            if x in base:
                continue
            bigger = G.subgroup(base.elements + (x,))
            k = bigger.key()
            if k not in found:
                found[k] = bigger
                frontier.append(bigger)
    return sorted(found.values(), key=lambda t: (t.order, t.key()))


def p_subgroups_up_to_conjugacy(G: Group, p: int,
                                sylow_cap: int = DEFAULT_SYLOW_CAP) -> list[Subgroup]:
    """One representative per G-class of p-subgroups, trivial included.

    Enumerates the subgroups of one Sylow p-subgroup and fuses them under
    G-conjugacy, keeping the representative with the least canonical key.
    """
    P = sylow_subgroup(G, p)
    if P.order > sylow_cap:
        raise GroupTooLargeError(
            f"Sylow {p}-subgroup of order {P.order} exceeds cap {sylow_cap}")
    reps = {}
    for S in all_subgroups(P):
        best = S
        best_key = S.key()
        for g in G.elements:
            T = S.conjugate_by(g)
            k = T.key()
            if k < best_key:
                best, best_key = T, k
        if best_key not in reps:
            reps[best_key] = best
    return sorted(reps.values(), key=lambda t: (t.order, t.key()))


def cyclic_subgroups_with_generators(S: Subgroup) -> list[tuple[Subgroup, list[Perm]]]:
    """Every cyclic subgroup of S, with its full generator set."""
    G = S.parent
    found = {}
    for x in S.elements:
        C = G.subgroup([x])
        found.setdefault(C.key(), C)
    out = []
    for key in sorted(found, key=lambda k: (len(k), k)):
        C = found[key]
        gens = [y for y in C.elements if y.order() == C.order]
        if C.order == 1:
            gens = [G.identity]
        out.append((C, gens))
    return out
