"""Exact arithmetic and combinatorial kernels shared by every other module.

All computation in this package happens over the rationals. ``Rational`` is
the stdlib :class:`fractions.Fraction`; nothing here ever touches floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, Sequence

Rational = Fraction

DegreeList = tuple[int, ...]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Rational:
    """Parse a rational literal of the form ``p`` or ``p/q``.

    >>> parse_rational("-3/4")
    Fraction(-3, 4)
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(s)
    return value


def format_rational(value: Rational) -> str:
    """Render a rational as ``p`` or ``p/q`` (the parse_rational syntax)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``{1, ..., n}`` stored by its tuple of images.

    ``images[i - 1]`` is the image of ``i``; everything downstream uses this
    1-based convention.

    >>> s = Permutation((2, 1, 3))
    >>> s(1), s(2)
    (2, 1)
    >>> s.sign()
    -1
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if tuple(sorted(self.images)) != tuple(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..n: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """Return the composite applying ``other`` first, then ``self``."""
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def sign(self) -> int:
        """The classical sign, computed by counting inversions."""
        inv = 0
        imgs = self.images
        for i in range(len(imgs)):
            for j in range(i + 1, len(imgs)):
                if imgs[i] > imgs[j]:
                    inv += 1
        return -1 if inv % 2 else 1

    def gather(self, seq: Sequence) -> tuple:
        """Return ``(seq[images[0]-1], ..., seq[images[n-1]-1])``.

        This is the word ``x_{sigma(1)}, ..., x_{sigma(n)}`` built from
        ``seq = (x_1, ..., x_n)``.
        """
        if len(seq) != self.size:
            raise ValueError("size mismatch")
        return tuple(seq[i - 1] for i in self.images)


def koszul_sign(sigma: Permutation, degrees: Sequence[int]) -> int:
    """Sign picked up by reordering graded symbols along ``sigma``.

    With inputs ``x_1, ..., x_n`` of the given degrees, this is the sign
    ``eps`` in ``x_1 ... x_n = eps * x_{sigma(1)} ... x_{sigma(n)}``: each
    adjacent swap of symbols of degrees ``a`` and ``b`` contributes
    ``(-1)**(a*b)``.

    >>> koszul_sign(Permutation((2, 1)), (1, 1))
    -1
    >>> koszul_sign(Permutation((2, 1)), (1, 2))
    1
    """
    if len(degrees) != sigma.size:
        raise ValueError("size mismatch")
    seq = list(sigma.images)
    sign = 1
    # Bubble-sort the image word back to the identity; the swaps traversed
    # are exactly the adjacent transpositions realizing sigma.
    for end in range(len(seq), 1, -1):
        for j in range(end - 1):
            if seq[j] > seq[j + 1]:
                if (degrees[seq[j] - 1] * degrees[seq[j + 1] - 1]) % 2:
                    sign = -sign
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
    return sign


def chi_sign(sigma: Permutation, degrees: Sequence[int]) -> int:
    """Graded antisymmetric sign: classical sign times the Koszul sign.

    >>> chi_sign(Permutation((2, 1)), (0, 0))
    -1
    >>> chi_sign(Permutation((2, 1)), (1, 1))
    1
    """
    return sigma.sign() * koszul_sign(sigma, degrees)


def _shuffle_images(block_sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield image tuples of permutations increasing on each position block."""
    total = sum(block_sizes)
    universe = tuple(range(1, total + 1))

    def rec(remaining: tuple[int, ...], blocks: Sequence[int]) -> Iterator[tuple[int, ...]]:
        if not blocks:
            yield ()
            return
        k = blocks[0]
        for chosen in combinations(remaining, k):
            rest = tuple(x for x in remaining if x not in chosen)
            for tail in rec(rest, blocks[1:]):
                yield chosen + tail

    yield from rec(universe, [k for k in block_sizes if k > 0])


def enumerate_shuffles(block_sizes: Sequence[int]) -> list[Permutation]:
    """All permutations increasing on each consecutive block of positions.

    Blocks of size zero are skipped. The result is sorted lexicographically
    by image tuple; its length is the multinomial coefficient.

    >>> [p.images for p in enumerate_shuffles((2, 1))]
    [(1, 2, 3), (1, 3, 2), (2, 3, 1)]
    """
    images = sorted(_shuffle_images(block_sizes))
    return [Permutation(t) for t in images]


def enumerate_local_shuffles(block_sizes: Sequence[int]) -> list[Permutation]:
    """Shuffles whose images at the block-leading positions also increase.

    >>> [p.images for p in enumerate_local_shuffles((1, 1))]
    [(1, 2)]
    >>> len(enumerate_local_shuffles((2, 2)))
    3
    """
    sizes = [k for k in block_sizes if k > 0]
    starts = []
    pos = 0
    for k in sizes:
        starts.append(pos)
        pos += k
    out = []
    for t in sorted(_shuffle_images(sizes)):
        leading = [t[s] for s in starts]
        if all(leading[i] < leading[i + 1] for i in range(len(leading) - 1)):
            out.append(Permutation(t))
    return out


class SparseMatrix:
    """A sparse matrix over the rationals.

    Entries are stored in a ``{(row, col): Fraction}`` dict; absent keys are
    zero. Row/column indices are 0-based.
    """

    def __init__(
        self,
        nrows: int,
        ncols: int,
        entries: Mapping[tuple[int, int], Rational] | None = None,
    ) -> None:
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                self.set(r, c, v)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational | int]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        m = cls(nrows, ncols)
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                m.set(r, c, Fraction(v))
        return m

    def set(self, r: int, c: int, value: Rational | int) -> None:
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise IndexError((r, c))
        v = Fraction(value)
        if v:
            self.entries[(r, c)] = v
        else:
            self.entries.pop((r, c), None)

    def get(self, r: int, c: int) -> Fraction:
        return self.entries.get((r, c), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def apply(self, vec: Sequence[Rational | int]) -> tuple[Fraction, ...]:
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.nrows
        for (r, c), v in self.entries.items():
            if vec[c]:
                out[r] += v * Fraction(vec[c])
        return tuple(out)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, Fraction(0)) + v * w
        for key, v in acc.items():
            if v:
                out.entries[key] = v
        return out

    def _integer_rows(self) -> list[dict[int, int]]:
        """Rows with denominators cleared (rank is unaffected)."""
        rows: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        out = []
        for r in sorted(rows):
            row = rows[r]
            scale = math.lcm(*(v.denominator for v in row.values()))
            out.append({c: int(v * scale) for c, v in sorted(row.items())})
        return out

    def rank(self) -> int:
        """Exact rank by fraction-free Bareiss elimination.

        Pivots are chosen sparsity-first (shortest active row, then smallest
        absolute entry) so intermediate integers stay manageable.
        """
        active = [row for row in self._integer_rows() if row]
        rank = 0
        prev = 1
        while active:
            # Sparsity-guided pivot: shortest row, then smallest |entry|.
            pi = min(range(len(active)), key=lambda i: len(active[i]))
            prow = active.pop(pi)
            pcol, pval = min(prow.items(), key=lambda kv: (abs(kv[1]), kv[0]))
            rank += 1
            nxt: list[dict[int, int]] = []
            for row in active:
                a = row.pop(pcol, 0)
                cols = set(row) | set(prow)
                cols.discard(pcol)
                new: dict[int, int] = {}
                for c in cols:
                    num = pval * row.get(c, 0) - a * prow.get(c, 0)
                    if num:
                        new[c] = num // prev  # exact by Sylvester's identity
                if new:
                    nxt.append(new)
            active = nxt
            prev = pval
        return rank

    def kernel_basis(self) -> list[tuple[Fraction, ...]]:
        """A basis of the right kernel, via column echelon reduction.

        Column operations performed on the matrix are mirrored on an
        identity block; columns of the matrix that reduce to zero hand back
        their mirror column as a kernel vector. Deterministic for a given
        matrix.
        """
        cols: list[dict[int, Fraction]] = []
        mirror: list[dict[int, Fraction]] = []
        for j in range(self.ncols):
            cols.append({})
            mirror.append({j: Fraction(1)})
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        pivots: list[tuple[int, dict[int, Fraction], dict[int, Fraction]]] = []
        kernel: list[tuple[Fraction, ...]] = []
        for j in range(self.ncols):
            vec = dict(cols[j])
            comb = dict(mirror[j])
            for prow, pvec, pcomb in pivots:
                coeff = vec.get(prow)
                if coeff:
                    factor = coeff / pvec[prow]
                    _axpy(vec, pvec, -factor)
                    _axpy(comb, pcomb, -factor)
            if not vec:
                kernel.append(
                    tuple(comb.get(i, Fraction(0)) for i in range(self.ncols))
                )
            else:
                prow = min(vec)
                pivots.append((prow, vec, comb))
        return kernel


def _axpy(target: dict[int, Fraction], source: dict[int, Fraction], factor: Fraction) -> None:
    for k, v in source.items():
        new = target.get(k, Fraction(0)) + factor * v
        if new:
            target[k] = new
        else:
            target.pop(k, None)
