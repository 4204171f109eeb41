"""Exact ordinary character tables and class functions.

Tables are computed by the Dixon-Schneider method: the class-sum matrices
are simultaneously diagonalized over a prime field F_l with l = 1 mod
exponent(G) and l > 2*sqrt(|G|), degrees are recovered from the second
orthogonality relation, and the exact cyclotomic character values are
rebuilt by discrete Fourier inversion along the power maps. Row and
column orthogonality are verified exactly before a table is trusted,
whether freshly computed or read back from the cache.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import BlocktoolError, InputError, InternalCheckError
from .cyclo import CyclotomicNumber, frobenius_lift, rational
from .ffield import PrimeField, coords_in_rref_basis, mat_kernel, mat_mul_vec, mat_rref
from .perm import Group, Perm, Subgroup, p_decompose

TABLE_SCHEMA = "blocktool-table-v1"


class CharacterTable:
    """Square matrix of exact irreducible character values on classes."""

    def __init__(self, group: Group, values: list[list[CyclotomicNumber]]):
        self.group = group
        self.classes = group.conjugacy_classes()
        self.conductor = group.exponent()
        self.values = tuple(tuple(row) for row in values)
        if len(self.values) != len(self.classes):
            raise InternalCheckError("table is not square")
        self.power_maps = _power_maps(group)
        self.inverse_map = self.power_maps[(self.conductor - 1) % self.conductor]
        self._class_matrices = None
        self.verify_orthogonality()

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def degree(self, row: int) -> int:
        d = self.values[row][0]
        return int(d.rational_value())

    def value(self, row: int, class_idx: int) -> CyclotomicNumber:
        return self.values[row][class_idx]

    def value_at(self, row: int, g: Perm) -> CyclotomicNumber:
        return self.values[row][self.group.class_of(g)]

    def row_function(self, row: int) -> ClassFunction:
        return ClassFunction(self, self.values[row])

    def class_matrices(self):
        """a[i][j][k] = #{(u,v) in C_i x C_j : uv = rep_k}, cached."""
        if self._class_matrices is None:
            self._class_matrices = _class_mult_constants(self.group)
        return self._class_matrices

    def central_character(self, row: int, class_idx: int) -> CyclotomicNumber:
        """omega_chi(class sum) = |C| chi(g_C) / chi(1); an algebraic integer."""
        C = self.classes[class_idx]
        return self.values[row][class_idx] * C.size / self.degree(row)

    def verify_orthogonality(self) -> None:
        n = self.n_classes
        order = self.group.order
        for a in range(n):
            for b in range(a, n):
                acc = rational(0)
                for i, C in enumerate(self.classes):
                    acc = acc + self.values[a][i] * self.values[b][self.inverse_map[i]] * C.size
                want = order if a == b else 0
                if acc != want:
                    raise InternalCheckError(
                        f"row orthogonality fails for rows {a},{b}: {acc!r}")
        for i in range(n):
            for j in range(i, n):
                acc = rational(0)
                for t in range(n):
                    acc = acc + self.values[t][i] * self.values[t][self.inverse_map[j]]
                want = order // self.classes[i].size if i == j else 0
                if acc != want:
                    raise InternalCheckError(
                        f"column orthogonality fails for classes {i},{j}")

    def to_json(self) -> dict:
        return {
            "schema": TABLE_SCHEMA,
            "groupHash": self.group.canonical_hash(),
            "conductor": self.conductor,
            "classOrder": [[c.rep_order, c.size, c.representative.one_based()]
                           for c in self.classes],
            "values": [[v.to_json() for v in row] for row in self.values],
            "powerMaps": {str(t): list(pm) for t, pm in enumerate(self.power_maps)},
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ClassFunction:
    """Exact class function, on all classes or on the p-regular ones only.

    For regular support, ``values`` is indexed by the positions returned
    by ``regular_classes(table, p)``.
    """
    table: CharacterTable
    values: tuple
    support: str = "all"  # "all" | "regular"
    p: int | None = None

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        if self.table is not other.table or self.support != other.support:
            return False
        return all(a == b for a, b in zip(self.values, other.values))


def regular_classes(table: CharacterTable, p: int) -> list[int]:
    return [i for i, c in enumerate(table.classes) if c.is_p_regular(p)]


def inner_product(phi: ClassFunction, psi: ClassFunction) -> CyclotomicNumber:
    """(1/|G|) sum over classes |C| phi(C) psi(C^{-1})."""
    if phi.table is not psi.table:
        raise InputError("class functions on different tables")
    if phi.support != "all" or psi.support != "all":
        raise InputError("inner product needs full-support class functions")
    T = phi.table
    acc = rational(0)
    for i, C in enumerate(T.classes):
        acc = acc + phi.values[i] * psi.values[T.inverse_map[i]] * C.size
    return acc / T.group.order


def restrict(phi: ClassFunction, sub_table: CharacterTable) -> ClassFunction:
    """Restriction along H <= G; H-class values are looked up in G."""
    G = phi.table.group
    vals = []
    for c in sub_table.classes:
        rep = c.representative
        if rep not in G.index:
            raise InputError("subgroup element not contained in parent group")
        vals.append(phi.values[G.class_of(rep)])
    return ClassFunction(sub_table, tuple(vals))


def decompose(phi: ClassFunction) -> list[CyclotomicNumber]:
    """Multiplicities of phi against each irreducible row."""
    T = phi.table
    return [inner_product(phi, T.row_function(t)) for t in range(T.n_classes)]


def frobenius_twist_row(table: CharacterTable, row: int, p: int) -> int:
    """Index of the character obtained by twisting values with the lift of
    Frobenius (eta -> eta^p on p'-roots of unity, fixed on p-power roots).

    Computes the twist along two independent routes - valuewise via the
    Galois action, and as chi(g_p * g_p'^p) via the power maps - checks
    they agree, and locates the resulting row.
    """
    sigma = frobenius_lift(p, table.conductor)
    valuewise = [sigma.apply(v) for v in table.values[row]]
    via_powers = []
    for c in table.classes:
        g = c.representative
        g_p, g_pp = p_decompose(g, p)
        y = g_p * (g_pp**p)
        via_powers.append(table.values[row][table.group.class_of(y)])
    for a, b in zip(valuewise, via_powers):
        if a != b:
            raise InternalCheckError(
                "valuewise Galois twist disagrees with the power-map twist")
    for t in range(table.n_classes):
        if all(table.values[t][i] == valuewise[i] for i in range(table.n_classes)):
            return t
    raise InternalCheckError("twisted character is not a row of the table")


def central_scalar(table: CharacterTable, row: int, x: Perm) -> CyclotomicNumber:
    """tau(x)/tau(1) for x central in the group of the table."""
    G = table.group
    if x not in G.index:
        raise InputError("element not in group")
    if any(x * g != g * x for g in G.generators):
        raise InputError("element is not central")
    return table.value_at(row, x) / table.degree(row)


# ---------------------------------------------------------------------------
# Dixon-Schneider

def _power_maps(G: Group) -> tuple[tuple[int, ...], ...]:
    N = G.exponent()
    classes = G.conjugacy_classes()
    maps = []
    for t in range(N):
        maps.append(tuple(G.class_of(c.representative**t) for c in classes))
    return tuple(maps)


def _class_mult_constants(G: Group):
    classes = G.conjugacy_classes()
    r = len(classes)
    reps = [c.representative for c in classes]
    lookup = {g: G.class_of(g) for g in G.elements}
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, Ci in enumerate(classes):
        for u in Ci.elements:
            u_inv = u.inverse()
            for k, zk in enumerate(reps):
                j = lookup[u_inv * zk]
                a[i][j][k] += 1
    return a


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def dixon_prime(G: Group) -> int:
    """Smallest prime l = 1 mod exponent(G) with l > 2*sqrt(|G|)."""
    exp = G.exponent()
    bound = 2 * math.isqrt(G.order) + 1
    k = 1
    while k < 10**7:
        ell = k * exp + 1
        if ell > bound and _is_prime(ell):
            return ell
        k += 1
    raise BlocktoolError("no Dixon prime found under the search bound")


def _primitive_root(ell: int) -> int:
    phi = ell - 1
    factors = []
    n = phi
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    for g in range(2, ell):
        if all(pow(g, phi // q, ell) != 1 for q in factors):
            return g
    raise BlocktoolError("no primitive root found")


def _simultaneous_eigenvectors(F: PrimeField, matrices, r: int) -> list[list[int]]:
    """One-dimensional common eigenspaces of the commuting family, as vectors."""
    ident = [[F.one if i == j else F.zero for j in range(r)] for i in range(r)]
    subspaces = [ident]
    for A in matrices:
        if all(len(B) == 1 for B in subspaces):
            break
        refined = []
        for B in subspaces:
            if len(B) == 1:
                refined.append(B)
                continue
            rref_rows, pivots = mat_rref(F, B)
            images = [mat_mul_vec(F, A, b) for b in rref_rows]
            restricted = []
            for img in images:
                coords = coords_in_rref_basis(F, rref_rows, pivots, img)
                if coords is None:
                    raise InternalCheckError("class matrix left an invariant subspace")
                restricted.append(coords)
            k = len(rref_rows)
            transposed = [[restricted[a][b] for a in range(k)] for b in range(k)]
            found = 0
            for lam in range(F.p):
                shifted = [[F.sub(transposed[i][j], lam if i == j else 0)
                            for j in range(k)] for i in range(k)]
                ker = mat_kernel(F, shifted, k)
                if not ker:
                    continue
                eigenspace = []
                for x in ker:
                    lifted = [F.zero] * r
                    for alpha, c in enumerate(x):
                        if c:
                            lifted = [F.add(v, F.mul(c, w))
                                      for v, w in zip(lifted, rref_rows[alpha])]
                    eigenspace.append(lifted)
                refined.append(eigenspace)  # refined further by later matrices
                found += len(ker)
                if found == k:
                    break
            if found != k:
                raise InternalCheckError("class matrix not diagonalizable mod l")
        subspaces = refined
    if not all(len(B) == 1 for B in subspaces):
        raise InternalCheckError("common eigenspaces not all one-dimensional")
    return [B[0] for B in subspaces]


def dixon_schneider(G: Group) -> CharacterTable:
    """Exact character table; verified against both orthogonality relations."""
    classes = G.conjugacy_classes()
    r = len(classes)
    N = G.exponent()
    ell = dixon_prime(G)
    F = PrimeField(ell)
    a = _class_mult_constants(G)
    eigvecs = _simultaneous_eigenvectors(F, a, r)
    # normalize so the identity-class coordinate is 1: entries are then the
    # central character values mod l
    omegas = []
    for w in eigvecs:
        if F.is_zero(w[0]):
            raise InternalCheckError("eigenvector vanishes at the identity class")
        inv = F.inv(w[0])
        omegas.append([F.mul(inv, x) for x in w])
    inv_map = [G.class_of(c.representative.inverse()) for c in classes]
    sizes = [c.size for c in classes]
    order_mod = F.from_int(G.order)
    rows = []
    root = _primitive_root(ell)
    pm = _power_maps(G)
    for w in omegas:
        s = F.zero
        for i in range(r):
            s = F.add(s, F.mul(F.mul(w[i], w[inv_map[i]]), F.inv(F.from_int(sizes[i]))))
        d_sq = F.mul(order_mod, F.inv(s))
        degree = next((d for d in range(1, math.isqrt(G.order) + 1)
                       if F.from_int(d * d) == d_sq), None)
        if degree is None:
            raise InternalCheckError("no degree matches the norm relation")
        chi_mod = [F.mul(F.from_int(degree), F.mul(w[i], F.inv(F.from_int(sizes[i]))))
                   for i in range(r)]
        row = []
        for i, c in enumerate(classes):
            n = c.rep_order
            z = pow(root, (ell - 1) // n, ell)
            n_inv = F.inv(F.from_int(n))
            terms = []
            for j in range(n):
                acc = F.zero
                zj_inv = pow(z, (-j) % (ell - 1), ell)
                zpow = 1
                for s_exp in range(n):
                    acc = F.add(acc, F.mul(chi_mod[pm[s_exp % N][i]], zpow))
                    zpow = F.mul(zpow, zj_inv)
                mult = F.mul(n_inv, acc)
                if mult > degree:
                    raise InternalCheckError("eigenvalue multiplicity exceeds degree")
                terms.append((j * (N // n), Fraction(mult)))
            if sum(m for _, m in terms) != degree:
                raise InternalCheckError("eigenvalue multiplicities do not sum to degree")
            row.append(CyclotomicNumber.from_exponents(N, terms))
        rows.append(row)
    rows.sort(key=lambda row: (int(row[0].rational_value()),
                               [v.sort_key() for v in row]))
    return CharacterTable(G, rows)


# ---------------------------------------------------------------------------
# table cache

def default_cache_dir() -> Path:
    env = os.environ.get("BLOCKTOOL_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "blocktool"


def _cache_path(cache_dir: Path, G: Group) -> Path:
    return Path(cache_dir) / f"table-{G.canonical_hash()}.json"


def table_from_json(G: Group, data: dict) -> CharacterTable:
    """Rebuild and re-verify a cached/ingested table for this exact group."""
    if data.get("schema") != TABLE_SCHEMA:
        raise InputError("unknown table schema")
    if data.get("groupHash") != G.canonical_hash():
        raise InputError("cached table belongs to a different group")
    classes = G.conjugacy_classes()
    recorded = [[c.rep_order, c.size, c.representative.one_based()] for c in classes]
    if data.get("classOrder") != recorded:
        raise InputError("cached class order does not match the group")
    values = [[CyclotomicNumber.from_json(v) for v in row] for row in data["values"]]
    table = CharacterTable(G, values)  # verifies orthogonality
    stored_pm = {str(t): list(pm) for t, pm in enumerate(table.power_maps)}
    if {k: list(v) for k, v in data.get("powerMaps", {}).items()} != stored_pm:
        raise InputError("cached power maps do not match the group")
    return table


def character_table(G: Group, cache_dir: Path | str | None = None) -> CharacterTable:
    """Cached Dixon-Schneider; cache entries are fully re-verified on load."""
    if cache_dir is None:
        return dixon_schneider(G)
    path = _cache_path(Path(cache_dir), G)
    if path.exists():
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return table_from_json(G, json.load(fh))
        except (InputError, InternalCheckError, json.JSONDecodeError, KeyError):
            pass  # recompute below; a cache entry that fails re-verification
            # is treated as a miss
    table = dixon_schneider(G)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(table.serialize())
    os.replace(tmp, path)
    return table


def subgroup_table(S: Subgroup, cache_dir=None) -> CharacterTable:
    return character_table(S.as_group(), cache_dir=cache_dir)
