"""Residue arithmetic and 3x3 matrices over Z/mZ, m a prime power.

Scalar ``Mat3`` values are immutable tuples; the ``batch_*`` helpers work on
integer arrays of shape (N, 3, 3) and are what the enumerators use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ModulusMismatch, NotInvertibleError, RefusedError

# Exhaustive criterion scans stop at m = 9 (9^9 matrices) unless overridden.
CRITERION_EXHAUSTIVE_MAX_M = 9
UNITS_EXHAUSTIVE_BUDGET = 4**9
MAX_MODULUS = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class Modulus:
    p: int
    e: int

    def __post_init__(self):
        if not (2 <= self.p <= 97 and is_prime(self.p)):
            raise ValueError(f"modulus prime must be a prime in [2, 97], got {self.p}")
        if self.e < 1:
            raise ValueError(f"modulus exponent must be positive, got {self.e}")
        if self.p**self.e > MAX_MODULUS:
            raise ValueError(f"modulus {self.p}^{self.e} exceeds cap {MAX_MODULUS}")

    @property
    def m(self) -> int:
        return self.p**self.e

    @classmethod
    def of(cls, m: int) -> "Modulus":
        """Recover (p, e) from a prime power m."""
        for p in range(2, m + 1):
            if m % p == 0:
                e = 0
                q = m
                while q % p == 0:
                    q //= p
                    e += 1
                if q != 1:
                    raise ValueError(f"{m} is not a prime power")
                return cls(p, e)
        raise ValueError(f"{m} is not a prime power")

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0


@dataclass(frozen=True)
class Mat3:
    entries: tuple[int, ...]
    modulus: Modulus

    def __post_init__(self):
        if len(self.entries) != 9:
            raise ValueError("Mat3 needs exactly 9 entries")
        m = self.modulus.m
        object.__setattr__(self, "entries", tuple(int(x) % m for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: Modulus | int) -> "Mat3":
        if isinstance(modulus, int):
            modulus = Modulus.of(modulus)
        flat = [x for row in rows for x in row]
        return cls(tuple(flat), modulus)

    @classmethod
    def identity(cls, modulus: Modulus | int) -> "Mat3":
        return cls.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]], modulus)

    @classmethod
    def zero(cls, modulus: Modulus | int) -> "Mat3":
        return cls.from_rows([[0] * 3] * 3, modulus)

    @classmethod
    def scalar(cls, lam: int, modulus: Modulus | int) -> "Mat3":
        return cls.from_rows([[lam, 0, 0], [0, lam, 0], [0, 0, lam]], modulus)

    @classmethod
    def from_array(cls, arr, modulus: Modulus | int) -> "Mat3":
        if isinstance(modulus, int):
            modulus = Modulus.of(modulus)
        return cls(tuple(int(x) for x in np.asarray(arr).reshape(9)), modulus)

    @property
    def m(self) -> int:
        return self.modulus.m

    def rows(self) -> list[list[int]]:
        e = self.entries
        return [list(e[0:3]), list(e[3:6]), list(e[6:9])]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[3 * i + j]

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(3, 3)

    def reduce(self, modulus: Modulus) -> "Mat3":
        """Reduce to a smaller modulus of the same prime."""
        if modulus.p != self.modulus.p or modulus.e > self.modulus.e:
            raise ModulusMismatch(f"cannot reduce mod {self.m} to mod {modulus.m}")
        return Mat3(self.entries, modulus)

    def __matmul__(self, other: "Mat3") -> "Mat3":
        return mat_mul(self, other)

    def __str__(self) -> str:
        return format_matrix(self)

    def row_string(self) -> str:
        """Compact ``a b c|d e f|g h i`` form used in group descriptors."""
        return "|".join(" ".join(str(x) for x in row) for row in self.rows())


def _check_same(A: Mat3, B: Mat3) -> None:
    if A.modulus != B.modulus:
        raise ModulusMismatch(f"modulus mismatch: {A.m} vs {B.m}")


def mat_mul(A: Mat3, B: Mat3) -> Mat3:
    _check_same(A, B)
    m = A.m
    out = []
    for i in range(3):
        for k in range(3):
            s = 0
            for j in range(3):
                s = (s + A[i, j] * B[j, k]) % m
            out.append(s)
    return Mat3(tuple(out), A.modulus)


def mat_add(A: Mat3, B: Mat3) -> Mat3:
    _check_same(A, B)
    return Mat3(tuple(x + y for x, y in zip(A.entries, B.entries)), A.modulus)


def scale(lam: int, A: Mat3) -> Mat3:
    return Mat3(tuple(lam * x for x in A.entries), A.modulus)


def transpose(A: Mat3) -> Mat3:
    return Mat3.from_rows([[A[j, i] for j in range(3)] for i in range(3)], A.modulus)


def det(A: Mat3) -> int:
    m = A.m
    a, b, c, d, e, f, g, h, i = A.entries
    return (a * ((e * i - f * h) % m) - b * ((d * i - f * g) % m) + c * ((d * h - e * g) % m)) % m


def adjugate(A: Mat3) -> Mat3:
    """Transpose of the cofactor matrix, so that A @ adjugate(A) = det(A) I."""
    a, b, c, d, e, f, g, h, i = A.entries
    cof = [
        [e * i - f * h, -(d * i - f * g), d * h - e * g],
        [-(b * i - c * h), a * i - c * g, -(a * h - b * g)],
        [b * f - c * e, -(a * f - c * d), a * e - b * d],
    ]
    return Mat3.from_rows([[cof[j][i] for j in range(3)] for i in range(3)], A.modulus)


def bar(A: Mat3) -> Mat3:
    """Rows (i1 j1 k1), (i2 j2 k2), (i3 j3 k3) go to
    [[k3, -k2, k1], [-j3, j2, -j1], [i3, -i2, i1]]."""
    i1, j1, k1, i2, j2, k2, i3, j3, k3 = A.entries
    return Mat3((k3, -k2, k1, -j3, j2, -j1, i3, -i2, i1), A.modulus)


def is_invertible(A: Mat3) -> bool:
    return A.modulus.is_unit(det(A))


def criterion_holds(T: Mat3, A: Mat3) -> bool:
    """Endomorphism criterion: T A == adj(bar(A)) T over Z/mZ."""
    _check_same(T, A)
    if not is_invertible(T):
        raise NotInvertibleError(f"T is not invertible mod {T.m}")
    return mat_mul(T, A) == mat_mul(adjugate(bar(A)), T)


# ---------------------------------------------------------------------------
# batched versions on int64 arrays of shape (N, 3, 3)


def batch_matmul(X: np.ndarray, Y: np.ndarray, m: int) -> np.ndarray:
    if m <= 2**16:
        # entries < m, so 3 m^2 fits comfortably in int64
        return np.matmul(X, Y) % m
    out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
    for i in range(3):
        for k in range(3):
            s = np.zeros(out.shape[:-2], dtype=np.int64)
            for j in range(3):
                s = (s + X[..., i, j] * Y[..., j, k]) % m
            out[..., i, k] = s
    return out


def batch_det(X: np.ndarray, m: int) -> np.ndarray:
    a, b, c = X[..., 0, 0], X[..., 0, 1], X[..., 0, 2]
    d, e, f = X[..., 1, 0], X[..., 1, 1], X[..., 1, 2]
    g, h, i = X[..., 2, 0], X[..., 2, 1], X[..., 2, 2]
    return (a * ((e * i - f * h) % m) - b * ((d * i - f * g) % m) + c * ((d * h - e * g) % m)) % m


def batch_adjugate(X: np.ndarray, m: int) -> np.ndarray:
    a, b, c = X[..., 0, 0], X[..., 0, 1], X[..., 0, 2]
    d, e, f = X[..., 1, 0], X[..., 1, 1], X[..., 1, 2]
    g, h, i = X[..., 2, 0], X[..., 2, 1], X[..., 2, 2]
    out = np.empty(X.shape, dtype=np.int64)
    out[..., 0, 0] = e * i - f * h
    out[..., 0, 1] = -(b * i - c * h)
    out[..., 0, 2] = b * f - c * e
    out[..., 1, 0] = -(d * i - f * g)
    out[..., 1, 1] = a * i - c * g
    out[..., 1, 2] = -(a * f - c * d)
    out[..., 2, 0] = d * h - e * g
    out[..., 2, 1] = -(a * h - b * g)
    out[..., 2, 2] = a * e - b * d
    return out % m


def batch_bar(X: np.ndarray, m: int) -> np.ndarray:
    out = np.empty(X.shape, dtype=np.int64)
    out[..., 0, 0] = X[..., 2, 2]
    out[..., 0, 1] = -X[..., 1, 2]
    out[..., 0, 2] = X[..., 0, 2]
    out[..., 1, 0] = -X[..., 2, 1]
    out[..., 1, 1] = X[..., 1, 1]
    out[..., 1, 2] = -X[..., 0, 1]
    out[..., 2, 0] = X[..., 2, 0]
    out[..., 2, 1] = -X[..., 1, 0]
    out[..., 2, 2] = X[..., 0, 0]
    return out % m


def batch_criterion(T: np.ndarray, A: np.ndarray, m: int) -> np.ndarray:
    """Boolean mask over the batch A of solutions to T A = adj(bar A) T."""
    lhs = batch_matmul(T, A, m)
    rhs = batch_matmul(batch_adjugate(batch_bar(A, m), m), T, m)
    return np.all(lhs == rhs, axis=(-2, -1))


def _lex_block(m: int, prefix: tuple[int, ...]) -> np.ndarray:
    """All matrices whose first len(prefix) entries are fixed, in row-major lex order."""
    free = 9 - len(prefix)
    grid = np.indices((m,) * free, dtype=np.int64).reshape(free, -1).T
    block = np.empty((grid.shape[0], 9), dtype=np.int64)
    block[:, : len(prefix)] = prefix
    block[:, len(prefix):] = grid
    return block.reshape(-1, 3, 3)


def criterion_solution_array(T: Mat3, *, allow_large: bool = False) -> np.ndarray:
    """All A with criterion_holds(T, A), as an (N, 3, 3) array in row-major lex order."""
    return np.concatenate(list(_criterion_blocks(T, allow_large)), axis=0)


def _criterion_blocks(T: Mat3, allow_large: bool) -> Iterator[np.ndarray]:
    if not is_invertible(T):
        raise NotInvertibleError(f"T is not invertible mod {T.m}")
    m = T.m
    if m > CRITERION_EXHAUSTIVE_MAX_M and not allow_large:
        raise RefusedError(
            f"criterion scan mod {m} needs {m**9} matrices; pass allow_large to override",
            estimate=m**9,
        )
    Tarr = T.to_array()
    # fix as many leading entries as needed to keep blocks near m^6
    nfix = 3 if m >= 4 else 0
    for prefix in itertools.product(range(m), repeat=nfix):
        block = _lex_block(m, prefix)
        yield block[batch_criterion(Tarr, block, m)]


def enumerate_criterion_solutions(T: Mat3, *, allow_large: bool = False) -> Iterator[Mat3]:
    for block in _criterion_blocks(T, allow_large):
        for A in block:
            yield Mat3.from_array(A, T.modulus)


def count_criterion_solutions(T: Mat3, *, allow_large: bool = False) -> int:
    return sum(len(b) for b in _criterion_blocks(T, allow_large))


def unit_array(modulus: Modulus | int, *, budget: int = UNITS_EXHAUSTIVE_BUDGET) -> np.ndarray:
    if isinstance(modulus, int):
        modulus = Modulus.of(modulus)
    m = modulus.m
    if m**9 > budget:
        raise RefusedError(f"exhaustive GL(3, Z/{m}) scan needs {m**9} matrices", estimate=m**9)
    allm = _lex_block(m, ())
    d = batch_det(allm, m)
    return allm[d % modulus.p != 0]


def enumerate_units(
    modulus: Modulus | int,
    *,
    sample: int | None = None,
    seed: int | None = None,
    budget: int = UNITS_EXHAUSTIVE_BUDGET,
) -> Iterator[Mat3]:
    """Invertible matrices mod m.

    Exhaustive (lex order) by default; with ``sample`` set, draws that many
    uniform invertible matrices by rejection, which requires a seed.
    """
    if isinstance(modulus, int):
        modulus = Modulus.of(modulus)
    if sample is None:
        for A in unit_array(modulus, budget=budget):
            yield Mat3.from_array(A, modulus)
        return
    if seed is None:
        raise ValueError("sampling mode needs an explicit seed")
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < sample:
        cand = Mat3(tuple(int(x) for x in rng.integers(0, modulus.m, size=9)), modulus)
        if is_invertible(cand):
            produced += 1
            yield cand


# ---------------------------------------------------------------------------
# text form: header line "mod m" then 9 integers row-major


def format_matrix(A: Mat3) -> str:
    return f"mod {A.m}\n" + " ".join(str(x) for x in A.entries)


def parse_matrix(text: str, modulus: Modulus | int | None = None) -> Mat3:
    """Parse ``mod m`` + 9 integers, or 9 bare integers when ``modulus`` is given.

    ``|`` and ``,`` are accepted as separators, so descriptor rows parse too.
    """
    tokens = text.replace("|", " ").replace(",", " ").replace("[", " ").replace("]", " ").split()
    if tokens and tokens[0] == "mod":
        if len(tokens) < 2:
            raise ValueError("missing modulus after 'mod'")
        header_m = int(tokens[1])
        tokens = tokens[2:]
        if modulus is not None:
            want = modulus if isinstance(modulus, int) else modulus.m
            if want != header_m:
                raise ModulusMismatch(f"matrix is mod {header_m}, expected mod {want}")
        modulus = header_m
    if modulus is None:
        raise ValueError("no modulus: add a 'mod m' header")
    if len(tokens) != 9:
        raise ValueError(f"expected 9 matrix entries, got {len(tokens)}")
    return Mat3(tuple(int(x) for x in tokens), Modulus.of(modulus) if isinstance(modulus, int) else modulus)
