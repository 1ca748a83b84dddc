"""Exact dense integer linear algebra.

Two independent determinant routes are provided: fraction-free Bareiss
elimination over Python ints, and a multi-modular route (numpy elimination
modulo word-sized primes, CRT reconstruction sized by the Hadamard bound).
The Pfaffian uses the analogous fraction-free skew elimination.

The empty 0x0 matrix has determinant and Pfaffian 1.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, List, NamedTuple, Sequence

import numpy as np

from legdet.numtheory import is_prime

__all__ = [
    "IntMatrix",
    "DetResult",
    "det",
    "det_bareiss",
    "det_multimodular",
    "pfaffian",
    "rank1_update_det",
    "adjugate_quadratic_form",
    "adjugate_full",
    "hadamard_bound_squared",
    "DEFAULT_ADJUGATE_CAP",
    "MULTIMODULAR_THRESHOLD",
]

MULTIMODULAR_THRESHOLD = 8
DEFAULT_ADJUGATE_CAP = 41


class IntMatrix:
    """Dense matrix of Python ints, stored row-major as a list of lists."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        self._rows = [[int(x) for x in row] for row in rows]
        self.nrows = len(self._rows)
        if ncols is None:
            ncols = len(self._rows[0]) if self._rows else 0
        self.ncols = ncols
        for row in self._rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")

    @classmethod
    def from_function(cls, nrows: int, ncols: int, f) -> "IntMatrix":
        return cls(([f(i, j) for j in range(ncols)] for i in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_function(n, n, lambda i, j: int(i == j))

    @classmethod
    def coerce(cls, m) -> "IntMatrix":
        return m if isinstance(m, cls) else cls(m)

    @property
    def shape(self):
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self) -> Iterator[List[int]]:
        return (list(r) for r in self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self) -> str:
        return f"IntMatrix({self._rows!r})"

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> List[int]:
        return list(self._rows[i])

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows), self.nrows) if self.nrows else IntMatrix([], 0)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-x for x in r] for r in self._rows), self.ncols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
            return IntMatrix(
                ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows),
                other.ncols,
            )
        v = list(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return [sum(a * b for a, b in zip(r, v)) for r in self._rows]

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._rows[i][j] == self._rows[j][i]
            for i in range(self.nrows)
            for j in range(i)
        )

    def is_skew_symmetric(self) -> bool:
        return self.is_square and all(
            self._rows[i][j] == -self._rows[j][i]
            for i in range(self.nrows)
            for j in range(i + 1)
        )

    def minor(self, i: int, j: int) -> "IntMatrix":
        """Matrix with row i and column j deleted."""
        return IntMatrix(
            (r[:j] + r[j + 1 :] for k, r in enumerate(self._rows) if k != i),
            self.ncols - 1,
        )


class DetResult(NamedTuple):
    value: int
    algorithm: str  # "bareiss" or "multimodular"


def _square(M) -> IntMatrix:
    M = IntMatrix.coerce(M)
    if not M.is_square:
        raise ValueError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    return M


def det_bareiss(M) -> DetResult:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    M = _square(M)
    n = M.nrows
    a = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return DetResult(0, "bareiss")
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                ri[j] = (piv * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = piv
    value = a[n - 1][n - 1] if n else 1
    return DetResult(sign * value, "bareiss")


# ---------------------------------------------------------------------------
# multi-modular route

# p*p must stay below 2**63 for the int64 elimination kernel
_PRIME_CEILING = 2**31
_prime_pool: List[int] = []


def _moduli() -> Iterator[int]:
    """Fixed descending sequence of primes below 2**31 (extended lazily)."""
    i = 0
    while True:
        if i == len(_prime_pool):
            q = (_prime_pool[-1] if _prime_pool else _PRIME_CEILING) - 1
            while not is_prime(q):
                q -= 1
            _prime_pool.append(q)
        yield _prime_pool[i]
        i += 1


def hadamard_bound_squared(M) -> int:
    """Product over rows of max(1, ||row||^2).

    Its square root bounds |det M| and |det| of every square submatrix.
    """
    M = IntMatrix.coerce(M)
    h = 1
    for r in M:
        h *= max(1, sum(x * x for x in r))
    return h


def _powmod_vec(base: np.ndarray, e: np.ndarray, q: np.ndarray) -> np.ndarray:
    result = np.ones_like(base)
    b = base % q
    e = e.copy()
    while e.any():
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * b % q, result)
        b = b * b % q
        e >>= 1
    return result


def _det_mod_batch(stack: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Determinants of a (B, n, n) stack of residues, entry b taken mod q[b]."""
    a = stack.copy()
    B, n, _ = a.shape
    q = np.asarray(q, dtype=np.int64)
    q3 = q[:, None, None]
    det = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    for c in range(n):
        nz = a[:, c:, c] != 0
        has = nz.any(axis=1)
        det[~has] = 0
        piv = c + np.argmax(nz, axis=1)
        swap = has & (piv != c)
        if swap.any():
            s = idx[swap]
            rows_c = a[s, c, :].copy()
            a[s, c, :] = a[s, piv[swap], :]
            a[s, piv[swap], :] = rows_c
            det[s] = (q[s] - det[s]) % q[s]
        pv = a[:, c, c]
        det = det * pv % q
        if c == n - 1:
            break
        inv = _powmod_vec(np.where(has, pv, 1), q - 2, q)
        inv[~has] = 0
        factor = a[:, c + 1 :, c] * inv[:, None] % q[:, None]
        a[:, c + 1 :, c:] = (
            a[:, c + 1 :, c:] - factor[:, :, None] * a[:, c, None, c:] % q3
        ) % q3
    return det


# entries per numpy work chunk; bounds peak memory of the batched kernel
_CHUNK_ENTRIES = 1 << 22


def _crt_symmetric(residues: Sequence[Sequence[int]], moduli: Sequence[int]) -> List[int]:
    """Combine per-modulus residue lists into symmetric-range integers."""
    values = [0] * len(residues[0])
    m = 1
    for res, q in zip(residues, moduli):
        m_inv = pow(m % q, -1, q)
        for i, r in enumerate(res):
            t = (int(r) - values[i]) * m_inv % q
            values[i] += m * t
        m *= q
    half = m // 2
    return [v - m if v > half else v for v in values]


def _multimodular_batch(mats: Sequence[Sequence[Sequence[int]]], n: int, bound_sq: int) -> List[int]:
    """Exact determinants of equal-order matrices whose |det| <= sqrt(bound_sq)."""
    if n == 0:
        return [1] * len(mats)
    target = 2 * (math.isqrt(bound_sq) + 1) + 1
    moduli = []
    prod = 1
    for q in _moduli():
        moduli.append(q)
        prod *= q
        if prod > target:
            break
    small = max((abs(x) for m in mats for r in m for x in r), default=0) < 2**62
    base = np.array(mats, dtype=np.int64 if small else object).reshape(len(mats), n, n)
    # one batch element per (modulus, matrix) pair, modulus-major
    qs = np.repeat(np.array(moduli, dtype=np.int64), len(mats))
    stack = np.concatenate([(base % q).astype(np.int64) for q in moduli])
    step = max(1, _CHUNK_ENTRIES // (n * n))
    flat = np.concatenate(
        [_det_mod_batch(stack[i : i + step], qs[i : i + step]) for i in range(0, len(qs), step)]
    ).reshape(len(moduli), len(mats))
    return _crt_symmetric(flat.tolist(), moduli)


def det_multimodular(M) -> DetResult:
    """Determinant from residues modulo word primes, recombined by CRT.

    Enough primes are used that their product exceeds 2H+1, H being the
    Hadamard bound, so the symmetric CRT lift is the true determinant.
    """
    M = _square(M)
    [value] = _multimodular_batch([M.tolist()], M.nrows, hadamard_bound_squared(M))
    return DetResult(value, "multimodular")


def det(M) -> int:
    """Exact determinant; multi-modular above order 8, Bareiss otherwise."""
    M = _square(M)
    if M.nrows > MULTIMODULAR_THRESHOLD:
        return det_multimodular(M).value
    return det_bareiss(M).value


def pfaffian(M) -> int:
    """Exact Pfaffian of an even-order skew-symmetric integer matrix.

    Fraction-free skew elimination: after eliminating the pair (2k-1, 2k)
    the entry (i, j) holds the Pfaffian of the principal submatrix on
    rows {1..2k, i, j}, and the update

        P'(i,j) = (P(a,b) P(i,j) - P(a,i) P(b,j) + P(a,j) P(b,i)) / previous pivot

    divides exactly. Pf([[0, a], [-a, 0]]) = a.
    """
    M = IntMatrix.coerce(M)
    if not M.is_square:
        raise ValueError("Pfaffian of a non-square matrix")
    n = M.nrows
    if n % 2:
        raise ValueError(f"Pfaffian needs even order, got {n}")
    if not M.is_skew_symmetric():
        raise ValueError("Pfaffian needs a skew-symmetric matrix")
    a = M.tolist()
    sign = 1
    prev = 1
    for k in range(0, n, 2):
        r0 = a[k]
        if r0[k + 1] == 0:
            for j in range(k + 2, n):
                if r0[j]:
                    break
            else:
                return 0
            # simultaneous swap of indices k+1 and j negates the Pfaffian
            a[k + 1], a[j] = a[j], a[k + 1]
            for row in a:
                row[k + 1], row[j] = row[j], row[k + 1]
            sign = -sign
        piv = r0[k + 1]
        r1 = a[k + 1]
        for i in range(k + 2, n):
            ri = a[i]
            a0i, a1i = r0[i], r1[i]
            for j in range(i + 1, n):
                v = (piv * ri[j] - a0i * r1[j] + r0[j] * a1i) // prev
                ri[j] = v
                a[j][i] = -v
        prev = piv
    return sign * prev


def _check_vector(M: IntMatrix, v, name: str) -> List[int]:
    v = [int(x) for x in v]
    if len(v) != M.nrows:
        raise ValueError(f"{name} has length {len(v)}, matrix has order {M.nrows}")
    return v


def rank1_update_det(M, u, v, w: int) -> int:
    """det(M + w u v^T), formed explicitly. Linear in w."""
    M = _square(M)
    u = _check_vector(M, u, "u")
    v = _check_vector(M, v, "v")
    w = int(w)
    perturbed = IntMatrix(
        ([x + w * ui * vj for x, vj in zip(row, v)] for row, ui in zip(M, u)), M.ncols
    )
    return det(perturbed)


def adjugate_quadratic_form(M, u) -> int:
    """u^T adj(M) u, obtained as det(M + u u^T) - det(M)."""
    M = _square(M)
    return rank1_update_det(M, u, u, 1) - det(M)


def adjugate_full(M, cap: int = DEFAULT_ADJUGATE_CAP) -> IntMatrix:
    """Adjugate (transposed cofactor matrix) by explicit cofactors.

    All n^2 minors share one Hadamard bound and go through the modular
    kernel as a single batch per prime.
    """
    M = _square(M)
    n = M.nrows
    if n > cap:
        raise ValueError(f"adjugate of order {n} exceeds cap {cap}")
    if n == 0:
        return IntMatrix([], 0)
    if n == 1:
        return IntMatrix([[1]])
    rows = M.tolist()
    minors = []
    for i in range(n):
        sub = rows[:i] + rows[i + 1 :]
        for j in range(n):
            minors.append([r[:j] + r[j + 1 :] for r in sub])
    if n - 1 > MULTIMODULAR_THRESHOLD:
        dets = _multimodular_batch(minors, n - 1, hadamard_bound_squared(M))
    else:
        dets = [det_bareiss(IntMatrix(m, n - 1)).value for m in minors]
    # adj[j][i] = (-1)^(i+j) det(minor(i, j))
    return IntMatrix.from_function(
        n, n, lambda j, i: (-1) ** (i + j) * dets[i * n + j]
    )
