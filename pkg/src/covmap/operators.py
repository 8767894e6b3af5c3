"""Fixed operators on tensor-product spaces and seeded random sampling.

Permutations act on tensor factors by moving the factor in slot ``s^-1(t)``
to slot ``t``, which makes the assignment ``s -> operator`` a group
homomorphism.  One-line images are 1-based throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .linalg import DimensionError, as_matrix

__all__ = [
    "Permutation",
    "swap_operator",
    "sym_projector",
    "permutation_operator",
    "matrix_unit",
    "substream",
    "haar_unitary",
    "gaussian_hermitian",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Permutation:
    """Permutation of {1, ..., m} in one-line notation: image[k-1] = s(k)."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise ValueError(f"{self.image} is not a permutation of 1..{len(self.image)}")

    @property
    def m(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_cycles(cls, m: int, cycles) -> "Permutation":
        img = list(range(1, m + 1))
        for cyc in cycles:
            cyc = list(cyc)
            if any(not 1 <= k <= m for k in cyc) or len(set(cyc)) != len(cyc):
                raise ValueError(f"bad cycle {cyc} for m={m}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "Permutation":
        """Parse cycle notation like "(1 2 3)(4)" or one-line "2 3 1" / "2,3,1"."""
        text = text.strip()
        if "(" in text:
            cycles = []
            for part in re.findall(r"\(([^()]*)\)", text):
                entries = [int(tok) for tok in re.split(r"[,\s]+", part.strip()) if tok]
                if entries:
                    cycles.append(entries)
            if not cycles:
                raise ValueError(f"no cycles found in {text!r}")
            size = m if m is not None else max(max(c) for c in cycles)
            return cls.from_cycles(size, cycles)
        entries = [int(tok) for tok in re.split(r"[,\s]+", text) if tok]
        if not entries:
            raise ValueError(f"empty permutation {text!r}")
        if m is not None and len(entries) != m:
            raise ValueError(f"one-line notation has {len(entries)} entries, expected {m}")
        return cls(tuple(entries))

    def __call__(self, k: int) -> int:
        return self.image[k - 1]

    def inverse(self) -> "Permutation":
        img = [0] * self.m
        for k, v in enumerate(self.image, start=1):
            img[v - 1] = k
        return Permutation(tuple(img))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self * other)(k) = self(other(k))."""
        if self.m != other.m:
            raise ValueError("permutation sizes differ")
        return Permutation(tuple(self.image[other.image[k] - 1] for k in range(self.m)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def cycle_count(self) -> int:
        """Number of cycles, fixed points included."""
        seen = [False] * self.m
        count = 0
        for start in range(1, self.m + 1):
            if seen[start - 1]:
                continue
            count += 1
            k = start
            while not seen[k - 1]:
                seen[k - 1] = True
                k = self.image[k - 1]
        return count


def matrix_unit(i: int, j: int, d: int) -> np.ndarray:
    """d x d matrix with a single 1 at row i, column j (1-based)."""
    if not (1 <= i <= d and 1 <= j <= d):
        raise IndexError(f"matrix unit ({i}, {j}) out of range for d={d}")
    e = np.zeros((d, d), dtype=np.complex128)
    e[i - 1, j - 1] = 1.0
    return e


def swap_operator(d: int) -> np.ndarray:
    """Exchange of the two factors of C^d (x) C^d."""
    if d < 2:
        raise DimensionError(f"swap needs d >= 2, got {d}")
    s = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def sym_projector(d: int, sign: int = +1) -> np.ndarray:
    """Projector onto the symmetric (+1) or antisymmetric (-1) subspace."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return (np.eye(d * d, dtype=np.complex128) + sign * swap_operator(d)) / 2


def permutation_operator(p: Permutation, d: int) -> np.ndarray:
    """Operator permuting the m factors of (C^d)^(x m) according to p.

    Sends the basis tensor with digits (i_1, ..., i_m) to the one whose
    slot t carries i_{p^-1(t)}.
    """
    if d < 1:
        raise DimensionError(f"need d >= 1, got {d}")
    m = p.m
    dim = d**m
    inv = p.inverse().image
    g = np.zeros((dim, dim), dtype=np.complex128)
    for flat in range(dim):
        digits = []
        rest = flat
        for _ in range(m):
            digits.append(rest % d)
            rest //= d
        digits.reverse()  # first slot slowest
        out = 0
        for t in range(m):
            out = out * d + digits[inv[t] - 1]
        g[out, flat] = 1.0
    return g


def substream(seed: int, index: int = 0, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream, index).

    Distinct triples give statistically independent streams, so sampling
    loops can address sample k directly without drawing k-1 predecessors.
    """
    if index < 0 or index >= 1 << 40:
        raise ValueError(f"substream index {index} out of range")
    word = ((stream & 0xFFFFFF) << 40) | index
    key = np.array([seed & _MASK64, word & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def haar_unitary(d: int, seed: int, index: int = 0) -> np.ndarray:
    """Haar-distributed d x d unitary, deterministic per (seed, index).

    Ginibre sample, QR, then the R diagonal phases are absorbed so the
    distribution is exactly Haar rather than QR-convention biased.
    """
    if d < 1:
        raise DimensionError(f"need d >= 1, got {d}")
    rng = substream(seed, index)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph


def gaussian_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    """GUE-style Hermitian sample: (Z + Z^dag) / 2 for Ginibre Z."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return as_matrix((z + z.conj().T) / 2)
