"""Hill n-cipher over the 26-letter alphabet.

Letters map to codes with A=1, B=2, ..., Y=25 and Z=0. Plaintext is
grouped into blocks of ``n`` codes, padded with ``X``, and each block
vector ``p`` is enciphered as ``K p mod 26``.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from pathlib import Path

from .zmod import (
    MAX_DIM,
    ModMatrix,
    NotInvertible,
    mat_det_mod,
    mat_inverse_mod,
    mat_mul_vec_mod,
)

MODULUS = 26
PAD_LETTER = "X"
ALPHABET = string.ascii_uppercase
MAX_KEYGEN_DRAWS = 10_000


class InvalidCharacter(ValueError):
    pass


class BlockLengthError(ValueError):
    pass


class KeyFormatError(ValueError):
    pass


def letter_to_code(c: str) -> int:
    u = c.upper()
    if len(u) != 1 or u not in ALPHABET:
        raise InvalidCharacter(f"not a letter A-Z: {c!r}")
    return (ALPHABET.index(u) + 1) % MODULUS


def code_to_letter(v: int) -> str:
    if not 0 <= v < MODULUS:
        raise ValueError(f"code out of range [0, 25]: {v}")
    return ALPHABET[(v - 1) % MODULUS]


def codes_to_text(codes) -> str:
    return "".join(code_to_letter(v) for v in codes)


def prepare_plaintext(text: str, n: int) -> list[int]:
    """Strip spaces, upcase, map to codes and pad with ``X`` to a multiple of ``n``."""
    if n < 1:
        raise ValueError(f"block size must be >= 1, got {n}")
    codes = [letter_to_code(c) for c in text if c != " "]
    while len(codes) % n:
        codes.append(letter_to_code(PAD_LETTER))
    return codes


@dataclass(frozen=True)
class HillKey:
    matrix: ModMatrix
    inverse: ModMatrix

    @classmethod
    def from_matrix(cls, rows) -> "HillKey":
        m = rows if isinstance(rows, ModMatrix) else ModMatrix.of(rows, MODULUS)
        if m.modulus != MODULUS:
            raise ValueError(f"Hill keys live in Z{MODULUS}, got modulus {m.modulus}")
        return cls(m, mat_inverse_mod(m))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def det(self) -> int:
        return mat_det_mod(self.matrix)


def _apply(matrix: ModMatrix, codes: list[int]) -> list[int]:
    n = matrix.n
    out: list[int] = []
    for i in range(0, len(codes), n):
        out.extend(mat_mul_vec_mod(matrix, codes[i:i + n]))
    return out


def encrypt(text: str, key: HillKey) -> str:
    return codes_to_text(_apply(key.matrix, prepare_plaintext(text, key.n)))


def decrypt(cipher: str, key: HillKey) -> str:
    """Decipher letter-only ``cipher``. Pad letters are returned as-is."""
    codes = [letter_to_code(c) for c in cipher]
    if len(codes) % key.n:
        raise BlockLengthError(
            f"ciphertext length {len(codes)} is not a multiple of block size {key.n}"
        )
    return codes_to_text(_apply(key.inverse, codes))


def keygen(n: int, seed: int) -> HillKey:
    """Draw uniform matrices over Z26 until one has a unit determinant."""
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"key dimension must be in [1, {MAX_DIM}], got {n}")
    rng = random.Random(seed)
    for _ in range(MAX_KEYGEN_DRAWS):
        rows = [[rng.randrange(MODULUS) for _ in range(n)] for _ in range(n)]
        try:
            return HillKey.from_matrix(rows)
        except NotInvertible:
            continue
    raise RuntimeError(f"no invertible {n}x{n} key after {MAX_KEYGEN_DRAWS} draws")


def format_key(key: HillKey) -> str:
    lines = [f"{key.n} {MODULUS}"]
    lines += [" ".join(str(v) for v in row) for row in key.matrix.rows]
    return "\n".join(lines) + "\n"


def parse_key(text: str) -> HillKey:
    """Parse the key file format; the inverse is recomputed and checked."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise KeyFormatError("empty key file")
    try:
        n, m = (int(t) for t in lines[0])
    except ValueError:
        raise KeyFormatError(f"bad header line: {' '.join(lines[0])!r}, expected 'n 26'") from None
    if m != MODULUS:
        raise KeyFormatError(f"unsupported modulus {m}")
    if not 1 <= n <= MAX_DIM:
        raise KeyFormatError(f"key dimension out of range: {n}")
    if len(lines) != n + 1:
        raise KeyFormatError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for i, toks in enumerate(lines[1:], start=2):
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise KeyFormatError(f"line {i}: non-integer entry") from None
        if len(row) != n or any(not 0 <= v < MODULUS for v in row):
            raise KeyFormatError(f"line {i}: expected {n} integers in [0, {MODULUS})")
        rows.append(row)
    key = HillKey.from_matrix(rows)
    if key.matrix @ key.inverse != ModMatrix.identity(n, MODULUS):
        raise KeyFormatError("cached inverse failed verification")
    return key


def load_key(path) -> HillKey:
    return parse_key(Path(path).read_text())


def save_key(key: HillKey, path) -> None:
    Path(path).write_text(format_key(key))
