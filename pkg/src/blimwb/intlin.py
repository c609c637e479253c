"""Exact integer linear algebra and finitely generated abelian groups.

Matrices are plain lists of rows of Python ints.  Lattices are row spans.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import gcd, prod
from typing import Sequence

from .errors import InputError

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def transpose(M: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    if not A:
        return []
    if not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x) if a) for row in A]


def vecmat(x: Sequence[int], A: Sequence[Sequence[int]], ncols: int) -> list[int]:
    out = [0] * ncols
    for c, row in zip(x, A):
        if c:
            for j, a in enumerate(row):
                if a:
                    out[j] += c * a
    return out


def _row_combine(rows, i, j, s, t, u, v):
    # (row_i, row_j) <- (s row_i + t row_j, u row_i + v row_j)
    ri, rj = rows[i], rows[j]
    rows[i] = [s * a + t * b for a, b in zip(ri, rj)]
    rows[j] = [u * a + v * b for a, b in zip(ri, rj)]


def _hnf(M: Sequence[Sequence[int]], ncols: int, with_transform: bool):
    A = [list(r) for r in M]
    m = len(A)
    U = identity(m) if with_transform else None
    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            if a == 0:
                A[r], A[i] = A[i], A[r]
                if U is not None:
                    U[r], U[i] = U[i], U[r]
                continue
            if b % a == 0:
                q = b // a
                A[i] = [y - q * x for x, y in zip(A[r], A[i])]
                if U is not None:
                    U[i] = [y - q * x for x, y in zip(U[r], U[i])]
                continue
            g, s, t = xgcd(a, b)
            _row_combine(A, r, i, s, t, -b // g, a // g)
            if U is not None:
                _row_combine(U, r, i, s, t, -b // g, a // g)
        p = A[r][c]
        if p == 0:
            continue
        if p < 0:
            A[r] = [-x for x in A[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
            p = -p
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [y - q * x for x, y in zip(A[r], A[i])]
                if U is not None:
                    U[i] = [y - q * x for x, y in zip(U[r], U[i])]
        r += 1
    return A, U, r


def hermite_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form ``H = U M`` with ``U`` unimodular.

    Nonzero rows of ``H`` come first, with positive pivots and entries above
    each pivot reduced into ``[0, pivot)``.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    H, U, _ = _hnf(M, ncols, True)
    return H, U


def hnf_basis(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Nonzero rows of the Hermite normal form."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    H, _, r = _hnf(rows, ncols, False)
    return H[:r]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U M V = D`` diagonal and ``d1 | d2 | ...``."""
    m = len(M)
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    D = [list(r) for r in M]
    U = identity(m)
    V = identity(n)

    def col_combine(i, j, s, t, u, v):
        for row in D:
            a, b = row[i], row[j]
            row[i], row[j] = s * a + t * b, u * a + v * b
        for row in V:
            a, b = row[i], row[j]
            row[i], row[j] = s * a + t * b, u * a + v * b

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        D[t], D[i] = D[i], D[t]
        U[t], U[i] = U[i], U[t]
        if j != t:
            col_combine(t, j, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, m):
                b = D[i][t]
                if b:
                    a = D[t][t]
                    if b % a == 0:
                        # plain subtraction keeps the pivot, so the loop cannot cycle
                        _row_combine(D, t, i, 1, 0, -(b // a), 1)
                        _row_combine(U, t, i, 1, 0, -(b // a), 1)
                        continue
                    g, s, tt = xgcd(a, b)
                    _row_combine(D, t, i, s, tt, -b // g, a // g)
                    _row_combine(U, t, i, s, tt, -b // g, a // g)
            for j in range(t + 1, n):
                b = D[t][j]
                if b:
                    a = D[t][t]
                    if b % a == 0:
                        col_combine(t, j, 1, 0, -(b // a), 1)
                        continue
                    g, s, tt = xgcd(a, b)
                    col_combine(t, j, s, tt, -b // g, a // g)
            if not any(D[i][t] for i in range(t + 1, m)) and not any(D[t][j] for j in range(t + 1, n)):
                break
        p = D[t][t]
        if p < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            p = -p
        bad = next((i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))), None)
        if bad is not None:
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
            continue
        t += 1
    return D, U, V


def smith_invariants(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form (no transforms kept)."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    rows = hnf_basis(M, n)
    if not rows:
        return []
    if _is_diagonalish(rows):
        diag = [next(x for x in r if x) for r in rows]
        return _invariant_chain(diag)
    D, _, _ = smith_normal_form(rows, n)
    return [D[i][i] for i in range(min(len(D), n)) if D[i][i]]


def _is_diagonalish(rows) -> bool:
    cols = set()
    for r in rows:
        nz = [j for j, x in enumerate(r) if x]
        if len(nz) != 1 or nz[0] in cols:
            return False
        cols.add(nz[0])
    return True


def _invariant_chain(values: Sequence[int]) -> list[int]:
    """Turn a list of cyclic orders into a divisibility chain of the same length."""
    vals = sorted(abs(v) for v in values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            a, b = vals[i], vals[j]
            g = gcd(a, b)
            vals[i], vals[j] = g, a * b // g
    return vals


@dataclass(frozen=True)
class FgAbelian:
    """``Z/d1 + ... + Z/dt + Z^free_rank`` with ``2 <= d1 | d2 | ...``."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise InputError(f"torsion invariants {t} are not a divisibility chain")
        if self.free_rank < 0:
            raise InputError("negative free rank")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbelian":
        """Direct sum of cyclic groups of the given orders (0 means Z)."""
        free = sum(1 for d in orders if d == 0)
        fin = [abs(d) for d in orders if d != 0]
        return cls(tuple(d for d in _invariant_chain(fin) if d > 1), free)

    @classmethod
    def from_relations(cls, ngens: int, relations: Sequence[Sequence[int]]) -> "FgAbelian":
        inv = smith_invariants(relations, ngens)
        return cls(tuple(d for d in inv if d > 1), ngens - len(inv))

    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    def orders(self) -> list[int]:
        return list(self.torsion) + [0] * self.free_rank

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}


class Lattice:
    """A sublattice of ``Z^n`` kept as its Hermite basis."""

    __slots__ = ("n", "basis", "_pivots")

    def __init__(self, n: int, rows: Sequence[Sequence[int]] = ()):
        self.n = n
        for r in rows:
            if len(r) != n:
                raise InputError(f"vector of length {len(r)} in a rank-{n} lattice")
        self.basis = hnf_basis(rows, n)
        self._pivots = [next(j for j, x in enumerate(r) if x) for r in self.basis]

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, identity(n))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, tuple(map(tuple, self.basis))))

    def __repr__(self):
        return f"Lattice({self.n}, {self.basis})"

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients of ``v`` in the basis, or ``None`` if ``v`` is not in the lattice."""
        if len(v) != self.n:
            raise InputError("rank mismatch")
        v = list(v)
        coords = []
        start = 0
        for p, row in zip(self._pivots, self.basis):
            if any(v[j] for j in range(start, p)):
                return None
            q, r = divmod(v[p], row[p])
            if r:
                return None
            if q:
                for j in range(p, self.n):
                    if row[j]:
                        v[j] -= q * row[j]
            coords.append(q)
            start = p + 1
        if any(v[start:]):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def member(self, v) -> bool:
        return v in self

    def sum(self, other: "Lattice") -> "Lattice":
        _check_rank(self, other)
        return Lattice(self.n, self.basis + other.basis)

    def add(self, rows: Sequence[Sequence[int]]) -> "Lattice":
        return Lattice(self.n, self.basis + [list(r) for r in rows])

    def contains_lattice(self, other: "Lattice") -> bool:
        _check_rank(self, other)
        return all(r in self for r in other.basis)

    def intersect(self, other: "Lattice") -> "Lattice":
        _check_rank(self, other)
        if not self.basis or not other.basis:
            return Lattice(self.n)
        # a B1 = b B2  <=>  (a, b) in left kernel of [B1; -B2]
        stacked = self.basis + [[-x for x in r] for r in other.basis]
        ker = left_kernel(stacked, self.n)
        k1 = len(self.basis)
        rows = [vecmat(c[:k1], self.basis, self.n) for c in ker]
        return Lattice(self.n, rows)

    def quotient_invariants(self) -> FgAbelian:
        """``Z^n / L``."""
        return FgAbelian.from_relations(self.n, self.basis)

    def index_in(self, bigger: "Lattice") -> FgAbelian:
        """``bigger / self`` for ``self`` contained in ``bigger``."""
        return lattice_quotient(bigger, self)


def _check_rank(a: Lattice, b: Lattice):
    if a.n != b.n:
        raise InputError(f"rank mismatch: {a.n} vs {b.n}")


def left_kernel(M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of ``{y : y M = 0}``."""
    m = len(M)
    if m == 0:
        return []
    H, U, r = _hnf(M, ncols, True)
    return [U[i] for i in range(r, m)]


def kernel(A: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (rows) of ``{x : A x = 0}``."""
    if not A:
        return identity(ncols)
    return left_kernel(transpose(A), len(A))


def solve_congruences(rows: Sequence[Sequence[int]], moduli: Sequence[int], n: int) -> Lattice:
    """Lattice of ``x`` in ``Z^n`` with ``row_i . x = 0 mod moduli[i]`` (0 means exact)."""
    basis = identity(n)
    for row, d in zip(rows, moduli):
        if d == 1 or not any(row):
            continue
        vals = [sum(a * b for a, b in zip(row, bv) if a) for bv in basis]
        if d:
            vals = [v % d for v in vals]
        if not any(vals):
            continue
        k = len(basis)
        if d:
            # (c, t) with sum c_j vals_j + t d = 0
            col = [[v] for v in vals] + [[d]]
        else:
            col = [[v] for v in vals]
        ker = left_kernel(col, 1)
        new = [vecmat(c[:k], basis, n) for c in ker]
        basis = hnf_basis(new, n)
    return Lattice(n, basis)


def relation_frame(L: Lattice) -> tuple[Matrix, list[int]]:
    """Return ``(W, moduli)`` such that ``v in L`` iff ``(W v)_i = 0 mod moduli_i``."""
    n = L.n
    B = L.basis
    if _is_diagonalish(B):
        moduli = [0] * n
        for r in B:
            j = next(i for i, x in enumerate(r) if x)
            moduli[j] = abs(r[j])
        return identity(n), moduli
    if not B:
        return identity(n), [0] * n
    D, U, V = smith_normal_form(B, n)
    r = len(B)
    moduli = [D[i][i] if i < r else 0 for i in range(n)]
    # v in L  <=>  v^T V has i-th entry divisible by d_i
    W = transpose(V, n)
    return W, moduli


def preimage(A: Sequence[Sequence[int]], ncols: int, L: Lattice) -> Lattice:
    """``{x in Z^ncols : A x in L}`` where ``A`` maps into ``L``'s ambient space."""
    if L.n == 0 or not A:
        return Lattice.full(ncols)
    W, moduli = relation_frame(L)
    WA = matmul(W, A)
    return solve_congruences(WA, moduli, ncols)


def image_lattice(A: Sequence[Sequence[int]], ncols: int, nrows: int) -> Lattice:
    """Column span of ``A`` inside ``Z^nrows``."""
    return Lattice(nrows, transpose(A, ncols) if A else [])


def lattice_quotient(big: Lattice, small: Lattice) -> FgAbelian:
    """Invariants of ``big / small``; ``small`` must lie inside ``big``."""
    _check_rank(big, small)
    coords = []
    for r in small.basis:
        c = big.coordinates(r)
        if c is None:
            raise InputError("sublattice is not contained in the ambient lattice")
        coords.append(c)
    return FgAbelian.from_relations(big.rank, coords)


# --- explicit presentations of abelian groups ------------------------------


@dataclass(frozen=True)
class AbelianPresentation:
    """``Z^ngens / (row span of relations)``."""

    ngens: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        for r in rels:
            if len(r) != self.ngens:
                raise InputError("relation length does not match generator count")

    @classmethod
    def cyclic(cls, orders: Sequence[int]) -> "AbelianPresentation":
        n = len(orders)
        return cls(n, tuple(tuple(d if i == j else 0 for j in range(n)) for i, d in enumerate(orders) if d))

    @classmethod
    def free(cls, n: int) -> "AbelianPresentation":
        return cls(n, ())

    def lattice(self) -> Lattice:
        return Lattice(self.ngens, self.relations)

    def invariants(self) -> FgAbelian:
        return FgAbelian.from_relations(self.ngens, self.relations)

    def is_zero(self, v: Sequence[int]) -> bool:
        return v in self.lattice()


@dataclass(frozen=True)
class AbelianMap:
    """Homomorphism of presented abelian groups; ``matrix`` is target x source."""

    source: AbelianPresentation
    target: AbelianPresentation
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in r) for r in self.matrix)
        object.__setattr__(self, "matrix", M)
        if len(M) != self.target.ngens or any(len(r) != self.source.ngens for r in M):
            raise InputError("matrix shape does not match the presentations")
        tl = self.target.lattice()
        for rel in self.source.relations:
            if matvec(M, rel) not in tl:
                raise InputError("matrix does not respect the source relations")

    def __call__(self, v: Sequence[int]) -> list[int]:
        return matvec(self.matrix, v)

    def kernel_lattice(self) -> Lattice:
        return preimage([list(r) for r in self.matrix], self.source.ngens, self.target.lattice())

    def kernel(self) -> FgAbelian:
        return lattice_quotient(self.kernel_lattice(), self.source.lattice())

    def cokernel(self) -> FgAbelian:
        cols = transpose([list(r) for r in self.matrix], self.source.ngens) if self.matrix else []
        return FgAbelian.from_relations(self.target.ngens, list(self.target.relations) + cols)

    def is_injective(self) -> bool:
        return self.kernel_lattice() == self.source.lattice()


def tensor_presentation(A: AbelianPresentation, B: AbelianPresentation) -> AbelianPresentation:
    """Generators ``(i, j) -> i * B.ngens + j``."""
    a, b = A.ngens, B.ngens
    rels = []
    for r in A.relations:
        for j in range(b):
            v = [0] * (a * b)
            for i, x in enumerate(r):
                v[i * b + j] = x
            rels.append(v)
    for r in B.relations:
        for i in range(a):
            v = [0] * (a * b)
            for j, x in enumerate(r):
                v[i * b + j] = x
            rels.append(v)
    return AbelianPresentation(a * b, tuple(map(tuple, rels)))


def tensor_and_tor(A: FgAbelian, B: FgAbelian) -> tuple[FgAbelian, FgAbelian]:
    """``(A (x) B, Tor(A, B))`` by bilinearity over cyclic summands."""
    tens, tor = [], []
    fa, fb = A.free_rank, B.free_rank
    for a in A.torsion:
        for b in B.torsion:
            g = gcd(a, b)
            tens.append(g)
            tor.append(g)
        tens.extend([a] * fb)
    for b in B.torsion:
        tens.extend([b] * fa)
    tens_g = FgAbelian.from_orders([d for d in tens if d != 1])
    tens_g = FgAbelian(tens_g.torsion, fa * fb)
    return tens_g, FgAbelian.from_orders([d for d in tor if d != 1])


def multisets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(n), k))


def sym_power(A: AbelianPresentation, k: int) -> tuple[AbelianPresentation, list[tuple[int, ...]]]:
    """``S^k(A)`` presented on degree-``k`` multisets of ``A``'s generators.

    Uses right exactness: ``S^k(A) = S^k(Z^n) / (relations * S^(k-1)(Z^n))``.
    """
    if k < 1:
        raise InputError("symmetric power degree must be >= 1")
    n = A.ngens
    basis = multisets(n, k)
    index = {m: i for i, m in enumerate(basis)}
    rels = []
    for r in A.relations:
        for mu in multisets(n, k - 1):
            v = [0] * len(basis)
            for j, x in enumerate(r):
                if x:
                    v[index[tuple(sorted(mu + (j,)))]] += x
            rels.append(tuple(v))
    return AbelianPresentation(len(basis), tuple(rels)), basis


def multiplication_map(A: AbelianPresentation) -> tuple[AbelianMap, list[tuple[tuple[int, ...], int]]]:
    """``S^2(A) (x) A -> S^3(A)``; also returns the labels of the source generators."""
    s2, b2 = sym_power(A, 2)
    s3, b3 = sym_power(A, 3)
    src = tensor_presentation(s2, A)
    idx3 = {m: i for i, m in enumerate(b3)}
    labels = [(m, j) for m in b2 for j in range(A.ngens)]
    M = [[0] * src.ngens for _ in b3]
    for col, (m, j) in enumerate(labels):
        M[idx3[tuple(sorted(m + (j,)))]][col] = 1
    return AbelianMap(src, s3, tuple(map(tuple, M))), labels


def lie_cube(A: AbelianPresentation) -> tuple[FgAbelian, AbelianMap]:
    """Kernel of ``S^2(A) (x) A -> S^3(A)`` and its inclusion into ``S^2(A) (x) A``."""
    mult, _ = multiplication_map(A)
    K = mult.kernel_lattice()
    src = mult.source
    rel_coords = []
    for r in src.relations:
        c = K.coordinates(list(r))
        rel_coords.append(tuple(c))
    kernel_pres = AbelianPresentation(K.rank, tuple(rel_coords))
    incl = AbelianMap(kernel_pres, src, tuple(map(tuple, transpose(K.basis, src.ngens))) if K.basis else tuple(() for _ in range(src.ngens)))
    return kernel_pres.invariants(), incl


def presentation_of(A: FgAbelian) -> AbelianPresentation:
    return AbelianPresentation.cyclic(A.orders())


class RowSolver:
    """Solve ``e M = v`` exactly for a matrix ``M`` with independent rows."""

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int):
        self.nrows = len(rows)
        self.ncols = ncols
        if not rows:
            self._H, self._U = [], []
            self._lat = Lattice(ncols)
            return
        H, U, r = _hnf(rows, ncols, True)
        if r != len(rows):
            raise InputError("rows are linearly dependent")
        self._U = U
        self._lat = Lattice(ncols)
        self._lat.basis = H
        self._lat._pivots = [next(j for j, x in enumerate(h) if x) for h in H]

    def solve(self, v: Sequence[int]) -> list[int] | None:
        c = self._lat.coordinates(v)
        if c is None:
            return None
        return vecmat(c, self._U, self.nrows)
