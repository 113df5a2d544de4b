"""Dense linear algebra over GF(2) on bit-packed rows.

Row vectors travel between modules as 1-D boolean numpy arrays.  Inside
this module rows are packed into ``uint64`` words, column ``c`` living in
bit ``c % 64`` of word ``c // 64``; addition is word-wise XOR.

Elimination always pivots on the lowest available column, so the reduced
row echelon form (and everything derived from it) is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

WORD = 64


def _nwords(ncols: int) -> int:
    return max(1, -(-ncols // WORD))


def pack(bits) -> np.ndarray:
    """Pack a 1-D or 2-D 0/1 array into ``uint64`` words along the last axis."""
    bits = np.asarray(bits, dtype=bool)
    one_d = bits.ndim == 1
    bits = np.atleast_2d(bits)
    rows, ncols = bits.shape
    nw = _nwords(ncols)
    padded = np.zeros((rows, nw * WORD), dtype=bool)
    padded[:, :ncols] = bits
    words = np.packbits(padded, axis=1, bitorder="little").view("<u8")
    return words[0] if one_d else words


def unpack(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.asarray(words, dtype="<u8")
    one_d = words.ndim == 1
    words = np.atleast_2d(words)
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")[:, :ncols]
    bits = bits.astype(bool)
    return bits[0] if one_d else bits


def _column(words: np.ndarray, c: int) -> np.ndarray:
    return ((words[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)).astype(bool)


@dataclass(frozen=True)
class Gf2Matrix:
    """A ``rows x cols`` matrix over GF(2) with bit-packed rows."""

    words: np.ndarray
    ncols: int

    @classmethod
    def from_bits(cls, bits) -> "Gf2Matrix":
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(pack(bits) if bits.shape[0] else np.zeros((0, _nwords(bits.shape[1])), "<u8"), bits.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(np.zeros((rows, _nwords(cols)), dtype="<u8"), cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls.from_bits(np.eye(n, dtype=bool))

    @property
    def nrows(self) -> int:
        return self.words.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def to_bits(self) -> np.ndarray:
        if not self.nrows:
            return np.zeros((0, self.ncols), dtype=bool)
        return unpack(self.words, self.ncols)

    def row(self, i: int) -> np.ndarray:
        return unpack(self.words[i], self.ncols)

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix.from_bits(self.to_bits().T)

    def rank(self) -> int:
        return rref(self).dim

    def vecmul(self, x) -> np.ndarray:
        """Row vector times matrix: ``x @ M`` over GF(2)."""
        x = np.asarray(x, dtype=bool)
        acc = np.bitwise_xor.reduce(self.words[x], axis=0) if x.any() else np.zeros(self.words.shape[1], "<u8")
        return unpack(acc, self.ncols)

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        a = self.to_bits().astype(np.float32)
        b = other.to_bits().astype(np.float32)
        # exact while the inner dimension stays below 2^24
        prod = (a @ b).astype(np.int64) & 1
        return Gf2Matrix.from_bits(prod.astype(bool))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.ncols == other.ncols and np.array_equal(self.words, other.words)

    __hash__ = None


class Subspace:
    """Row space stored as a reduced row echelon basis.

    Pivot columns are strictly increasing, and every basis row is zero in
    the pivot columns of the other rows.
    """

    def __init__(self, words: np.ndarray, pivots: np.ndarray, ncols: int):
        self.words = words
        self.pivots = np.asarray(pivots, dtype=np.int64)
        self.ncols = ncols
        self.words.setflags(write=False)

    @classmethod
    def zero(cls, ncols: int) -> "Subspace":
        return cls(np.zeros((0, _nwords(ncols)), dtype="<u8"), [], ncols)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> np.ndarray:
        """Basis rows as a boolean array of shape ``(dim, ncols)``."""
        if not self.dim:
            return np.zeros((0, self.ncols), dtype=bool)
        return unpack(self.words, self.ncols)

    def matrix(self) -> Gf2Matrix:
        return Gf2Matrix(self.words.copy(), self.ncols)

    def reduce_words(self, words: np.ndarray) -> np.ndarray:
        out = np.array(words, dtype="<u8", copy=True)
        if out.ndim == 1:
            return self.reduce_words(out[None, :])[0]
        if not self.dim or not len(out):
            return out
        for r, c in enumerate(self.pivots):
            mask = _column(out, int(c))
            if mask.any():
                out[mask] ^= self.words[r]
        return out

    def reduce(self, v) -> np.ndarray:
        """Residue of ``v`` (one row or a stack of rows) modulo the basis."""
        v = np.asarray(v, dtype=bool)
        return unpack(self.reduce_words(pack(v)), self.ncols)

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def contains_all(self, rows) -> bool:
        rows = np.atleast_2d(np.asarray(rows, dtype=bool))
        if not len(rows):
            return True
        return not self.reduce_words(pack(rows)).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        """``self`` is contained in ``other``."""
        return other.contains_all(self.basis()) if self.dim else True

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ncols == other.ncols
            and np.array_equal(self.pivots, other.pivots)
            and np.array_equal(self.words, other.words)
        )

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ncols})"


def _eliminate(words: np.ndarray, pivot_cols: int) -> tuple[np.ndarray, list[int]]:
    """In-place Gauss-Jordan on packed rows; pivots only among the first
    ``pivot_cols`` columns.  Returns the reduced rows (nonzero first) and
    the pivot columns."""
    nrows = words.shape[0]
    r = 0
    pivots = []
    for c in range(pivot_cols):
        if r == nrows:
            break
        col = _column(words[r:], c)
        nz = np.flatnonzero(col)
        if not nz.size:
            continue
        p = r + int(nz[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = _column(words, c)
        mask[r] = False
        if mask.any():
            words[mask] ^= words[r]
        pivots.append(c)
        r += 1
    return words, pivots


def _dedupe(words: np.ndarray) -> np.ndarray:
    if len(words) < 2:
        return words
    keep = words.any(axis=1)
    words = words[keep]
    if not len(words):
        return words
    _, first = np.unique(words, axis=0, return_index=True)
    return words[np.sort(first)]


def rref_words(words: np.ndarray, ncols: int) -> Subspace:
    w = _dedupe(np.array(words, dtype="<u8", copy=True))
    w, pivots = _eliminate(w, ncols)
    return Subspace(np.ascontiguousarray(w[: len(pivots)]), pivots, ncols)


def rref(M: Gf2Matrix | np.ndarray) -> Subspace:
    """Reduced row echelon basis of the row space of ``M``."""
    if not isinstance(M, Gf2Matrix):
        M = Gf2Matrix.from_bits(np.atleast_2d(np.asarray(M, dtype=bool)))
    return rref_words(M.words, M.ncols)


def span(rows, ncols: int | None = None) -> Subspace:
    rows = np.asarray(rows, dtype=bool)
    if rows.ndim == 1:
        rows = rows[None, :]
    if not len(rows):
        if ncols is None:
            raise ValueError("ambient dimension needed for an empty span")
        return Subspace.zero(ncols)
    return rref_words(pack(rows), rows.shape[1])


def in_span(v, S: Subspace) -> tuple[bool, np.ndarray]:
    """Membership test; also returns the reduction residue."""
    residue = S.reduce(v)
    return not residue.any(), residue


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    if A.ncols != B.ncols:
        raise ValueError("ambient dimensions differ")
    if not B.dim:
        return A
    if not A.dim:
        return B
    extra = A.reduce_words(B.words)
    if not extra.any():
        return A
    return rref_words(np.vstack([A.words, extra]), A.ncols)


def subspace_equal(A: Subspace, B: Subspace) -> bool:
    # the reduced basis is canonical
    return A == B


def product_span(U: Sequence, V: Sequence, mul: Callable, ncols: int | None = None) -> Subspace:
    """Span of all products ``mul(u, v)``.

    ``mul`` maps two boolean vectors to a boolean vector.  Products are
    deduplicated by content before elimination.
    """
    seen = {}
    for u in U:
        u = np.asarray(u, dtype=bool)
        if not u.any():
            continue
        for v in V:
            v = np.asarray(v, dtype=bool)
            if not v.any():
                continue
            w = np.asarray(mul(u, v), dtype=bool)
            if w.any():
                seen.setdefault(np.packbits(w).tobytes(), w)
            ncols = len(w)
    if ncols is None:
        for x in list(U) + list(V):
            ncols = len(x)
            break
    if not seen:
        if ncols is None:
            raise ValueError("ambient dimension needed for an empty product span")
        return Subspace.zero(ncols)
    return span(np.array(list(seen.values())))


def solve(M: Gf2Matrix, b) -> np.ndarray | None:
    """Find ``x`` with ``x @ M = b``; ``None`` if the system is inconsistent."""
    b = np.asarray(b, dtype=bool)
    if len(b) != M.ncols:
        raise ValueError("right-hand side length does not match the column count")
    n = M.nrows
    aug = np.hstack([M.to_bits(), np.eye(n, dtype=bool)]) if n else np.zeros((0, M.ncols), bool)
    if not n:
        return np.zeros(0, dtype=bool) if not b.any() else None
    words, pivots = _eliminate(pack(aug), M.ncols)
    full = unpack(words[: len(pivots)], M.ncols + n)
    # the tracking half of each reduced row records its combination of rows of M
    res = b.copy()
    x = np.zeros(n, dtype=bool)
    for row, c in zip(full, pivots):
        if res[c]:
            res ^= row[: M.ncols]
            x ^= row[M.ncols:]
    if res.any():
        return None
    return x


# -- serialization --------------------------------------------------------

def to_hex(M: Gf2Matrix) -> str:
    """``gf2 <rows> <cols>`` followed by one hex line per row.

    Each row is packed most-significant-bit first, column 0 in the top bit
    of the first byte, zero-padded to a whole byte.
    """
    lines = [f"gf2 {M.nrows} {M.ncols}"]
    bits = M.to_bits()
    for row in bits:
        lines.append(np.packbits(row, bitorder="big").tobytes().hex())
    return "\n".join(lines) + "\n"


class FormatError(ValueError):
    pass


def from_hex(text: str | Iterable[str]) -> Gf2Matrix:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.strip() for ln in lines if ln.strip()]
    if not lines:
        raise FormatError("empty matrix block")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "gf2":
        raise FormatError(f"bad matrix header {lines[0]!r}")
    try:
        rows, cols = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError(f"bad matrix header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != rows:
        raise FormatError(f"expected {rows} rows, found {len(body)}")
    nbytes = -(-cols // 8)
    out = np.zeros((rows, cols), dtype=bool)
    for i, ln in enumerate(body):
        try:
            raw = bytes.fromhex(ln)
        except ValueError:
            raise FormatError(f"row {i}: not hexadecimal") from None
        if len(raw) != nbytes:
            raise FormatError(f"row {i}: expected {nbytes} bytes, found {len(raw)}")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
        if bits[cols:].any():
            raise FormatError(f"row {i}: nonzero padding bits")
        out[i] = bits[:cols]
    return Gf2Matrix.from_bits(out)
