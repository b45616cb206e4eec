"""Modular arithmetic and small-matrix linear algebra over Z/mZ.

Everything here works on plain Python integers, so intermediate products
never overflow. Matrices are immutable :class:`ModMatrix` values whose
entries are always kept in canonical form ``[0, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_DIM = 16


class InvalidModulus(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotInvertible(ValueError):
    """Raised when a matrix determinant shares a factor with the modulus."""

    def __init__(self, det: int, modulus: int):
        self.det = det
        self.modulus = modulus
        g = egcd(det, modulus)[0]
        super().__init__(
            f"matrix is not invertible mod {modulus}: det = {det} shares factor {g} with {modulus}"
        )


def _check_modulus(m: int) -> None:
    if m < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {m}")


def mod_reduce(x: int, m: int) -> int:
    """Canonical residue of ``x`` in ``[0, m)``; negative inputs included."""
    _check_modulus(m)
    return x % m


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def reciprocal_mod(a: int, m: int) -> int | None:
    """Multiplicative inverse of ``a`` modulo ``m``, or ``None`` if ``a`` is not a unit."""
    _check_modulus(m)
    g, s, _ = egcd(a % m, m)
    if g != 1:
        return None
    return s % m


def is_unit(a: int, m: int) -> bool:
    return egcd(a % m, m)[0] == 1


@dataclass(frozen=True)
class ModMatrix:
    """Square matrix over Z/mZ, row-major, entries reduced into ``[0, m)``."""

    rows: tuple[tuple[int, ...], ...]
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        n = len(self.rows)
        if n < 1:
            raise DimensionMismatch("matrix must have at least one row")
        if n > MAX_DIM:
            raise DimensionMismatch(f"dimension {n} exceeds cap {MAX_DIM}")
        canon = []
        for row in self.rows:
            if len(row) != n:
                raise DimensionMismatch(f"matrix is not square: row of length {len(row)} with {n} rows")
            canon.append(tuple(int(v) % self.modulus for v in row))
        object.__setattr__(self, "rows", tuple(canon))

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], modulus: int = 26) -> "ModMatrix":
        return cls(tuple(tuple(r) for r in rows), modulus)

    @classmethod
    def identity(cls, n: int, modulus: int = 26) -> "ModMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), modulus)

    @property
    def n(self) -> int:
        return len(self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if not isinstance(other, ModMatrix):
            return NotImplemented
        if other.n != self.n or other.modulus != self.modulus:
            raise DimensionMismatch("operands differ in dimension or modulus")
        cols = list(zip(*other.rows))
        return ModMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            self.modulus,
        )

    def scale(self, k: int) -> "ModMatrix":
        return ModMatrix(tuple(tuple(k * v for v in r) for r in self.rows), self.modulus)


def _int_det(a: list[list[int]]) -> int:
    # Bareiss fraction-free elimination; every division is exact.
    n = len(a)
    if n == 1:
        return a[0][0]
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_det_mod(M: ModMatrix) -> int:
    return _int_det(M.tolist()) % M.modulus


def mat_adjugate_mod(M: ModMatrix) -> ModMatrix:
    """Classical adjugate (transposed cofactor matrix), reduced mod m.

    Satisfies ``M @ adj(M) == det(M) * I`` for every ``M``, singular or not.
    """
    n, a = M.n, M.tolist()
    if n == 1:
        return ModMatrix(((1,),), M.modulus)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            cof = (-1) ** (i + j) * _int_det(minor)
            adj[j][i] = cof
    return ModMatrix.of(adj, M.modulus)


def mat_inverse_mod(M: ModMatrix) -> ModMatrix:
    """Inverse modulo m as ``det^-1 * adj``; raises :class:`NotInvertible`."""
    det = mat_det_mod(M)
    inv_det = reciprocal_mod(det, M.modulus)
    if inv_det is None:
        raise NotInvertible(det, M.modulus)
    return mat_adjugate_mod(M).scale(inv_det)


def mat_mul_vec_mod(M: ModMatrix, v: Sequence[int]) -> list[int]:
    if len(v) != M.n:
        raise DimensionMismatch(f"vector length {len(v)} does not match dimension {M.n}")
    m = M.modulus
    return [sum(a * b for a, b in zip(row, v)) % m for row in M.rows]
