"""Cochain complexes attached to a Lie algebra with a Nijenhuis operator:
the Chevalley-Eilenberg complex of the algebra, the complex of the operator,
and their mapping cone, together with exact Betti numbers and long-exact-
sequence verification.

Cochains of degree ``n`` are alternating ``n``-linear maps into the module,
stored on strictly increasing basis tuples; degree-0 cochains are single
module vectors (stored under the empty tuple).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exact import SparseMatrix
from .lie import (
    Endomorphism,
    NijenhuisLieAlgebra,
    NijenhuisRepresentation,
    Representation,
    Vector,
    deformed_representation,
    is_zero_vector,
    vec_add,
    vec_scale,
    vector,
    zero_vector,
)


@dataclass(frozen=True)
class Cochain:
    """An alternating multilinear map ``g^n -> M`` in coordinates."""

    degree: int
    source_dim: int
    target_dim: int
    values: Mapping[tuple[int, ...], Vector]

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        clean: dict[tuple[int, ...], Vector] = {}
        for key, value in self.values.items():
            key = tuple(key)
            if len(key) != self.degree:
                raise ValueError(f"key {key} has wrong length for degree {self.degree}")
            if any(not 0 <= i < self.source_dim for i in key):
                raise ValueError(f"key {key} out of range")
            if any(key[t] >= key[t + 1] for t in range(len(key) - 1)):
                raise ValueError(f"key {key} must be strictly increasing")
            vec = vector(value)
            if len(vec) != self.target_dim:
                raise ValueError("value length must match target dimension")
            if not is_zero_vector(vec):
                clean[key] = vec
        object.__setattr__(self, "values", clean)

    @classmethod
    def zero(cls, degree: int, source_dim: int, target_dim: int) -> "Cochain":
        return cls(degree, source_dim, target_dim, {})

    @classmethod
    def from_constant(cls, source_dim: int, value: Sequence) -> "Cochain":
        vec = vector(value)
        return cls(0, source_dim, len(vec), {(): vec})

    def constant_value(self) -> Vector:
        if self.degree != 0:
            raise ValueError("not a degree-0 cochain")
        return self.values.get((), zero_vector(self.target_dim))

    def evaluate(self, indices: Sequence[int]) -> Vector:
        """Value on arbitrary basis indices, using antisymmetry."""
        idx = tuple(indices)
        if len(idx) != self.degree:
            raise ValueError("wrong number of arguments")
        if len(set(idx)) != len(idx):
            return zero_vector(self.target_dim)
        sign = 1
        seq = list(idx)
        for end in range(len(seq), 1, -1):
            for t in range(end - 1):
                if seq[t] > seq[t + 1]:
                    seq[t], seq[t + 1] = seq[t + 1], seq[t]
                    sign = -sign
        base = self.values.get(tuple(seq))
        if base is None:
            return zero_vector(self.target_dim)
        return vec_scale(sign, base)

    def evaluate_mixed(self, args: Sequence) -> Vector:
        """Value on a mix of basis indices (ints) and coordinate vectors."""
        slots: list[list[tuple[int, Fraction]]] = []
        for a in args:
            if isinstance(a, int):
                slots.append([(a, Fraction(1))])
            else:
                slots.append([(i, c) for i, c in enumerate(a) if c])
        out = zero_vector(self.target_dim)
        stack: list[tuple[int, tuple[int, ...], Fraction]] = [(0, (), Fraction(1))]
        while stack:
            pos, chosen, coeff = stack.pop()
            if pos == len(slots):
                out = vec_add(out, vec_scale(coeff, self.evaluate(chosen)))
                continue
            for i, c in slots[pos]:
                stack.append((pos + 1, chosen + (i,), coeff * c))
        return out

    def add(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        values = dict(self.values)
        for key, vec in other.values.items():
            values[key] = vec_add(values.get(key, zero_vector(self.target_dim)), vec)
        return Cochain(self.degree, self.source_dim, self.target_dim, values)

    def sub(self, other: "Cochain") -> "Cochain":
        return self.add(other.scale(-1))

    def scale(self, c) -> "Cochain":
        return Cochain(
            self.degree,
            self.source_dim,
            self.target_dim,
            {k: vec_scale(c, v) for k, v in self.values.items()},
        )

    def map_values(self, op: Endomorphism) -> "Cochain":
        """Postcompose with an endomorphism of the target module."""
        if op.dim != self.target_dim:
            raise ValueError("operator dimension mismatch")
        return Cochain(
            self.degree,
            self.source_dim,
            self.target_dim,
            {k: op.apply(v) for k, v in self.values.items()},
        )

    def is_zero(self) -> bool:
        return not self.values

    def _check_compatible(self, other: "Cochain") -> None:
        if (self.degree, self.source_dim, self.target_dim) != (
            other.degree,
            other.source_dim,
            other.target_dim,
        ):
            raise ValueError("incompatible cochains")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        self._check_compatible(other)
        return self.values == other.values

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class PairCochain:
    """An element of the cone complex: a Lie cochain of degree ``n`` paired
    with an operator cochain of degree ``n - 1`` (absent at ``n = 0``)."""

    degree: int
    lie_part: Cochain
    njo_part: Cochain | None

    def __post_init__(self) -> None:
        if self.lie_part.degree != self.degree:
            raise ValueError("lie part has wrong degree")
        if self.degree == 0:
            if self.njo_part is not None:
                raise ValueError("degree-0 pairs have no operator part")
        else:
            if self.njo_part is None or self.njo_part.degree != self.degree - 1:
                raise ValueError("operator part must have degree n - 1")

    def is_zero(self) -> bool:
        return self.lie_part.is_zero() and (
            self.njo_part is None or self.njo_part.is_zero()
        )

    def add(self, other: "PairCochain") -> "PairCochain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        njo = None
        if self.njo_part is not None:
            njo = self.njo_part.add(other.njo_part)
        return PairCochain(self.degree, self.lie_part.add(other.lie_part), njo)

    def scale(self, c) -> "PairCochain":
        njo = None if self.njo_part is None else self.njo_part.scale(c)
        return PairCochain(self.degree, self.lie_part.scale(c), njo)


def delta_lie(rep: Representation, f: Cochain) -> Cochain:
    """The Chevalley-Eilenberg differential of ``f`` with module ``rep``."""
    alg = rep.algebra
    if f.source_dim != alg.dim or f.target_dim != rep.dim:
        raise ValueError("cochain does not match the module")
    n = f.degree
    values: dict[tuple[int, ...], Vector] = {}
    for idx in combinations(range(alg.dim), n + 1):
        total = zero_vector(rep.dim)
        for pos in range(n + 1):
            rest = idx[:pos] + idx[pos + 1 :]
            term = rep.act_basis(idx[pos], f.evaluate(rest))
            total = vec_add(total, vec_scale((-1) ** pos, term))
        for p in range(n + 1):
            for q in range(p + 1, n + 1):
                rest = tuple(
                    idx[t] for t in range(n + 1) if t != p and t != q
                )
                bracket_vec = alg.basis_bracket(idx[p], idx[q])
                if is_zero_vector(bracket_vec):
                    continue
                term = f.evaluate_mixed((bracket_vec,) + rest)
                total = vec_add(total, vec_scale((-1) ** (p + q), term))
        if not is_zero_vector(total):
            values[idx] = total
    return Cochain(n + 1, alg.dim, rep.dim, values)


def delta_njo(
    nja: NijenhuisLieAlgebra, nrep: NijenhuisRepresentation, f: Cochain
) -> Cochain:
    """Differential of the operator complex.

    Implemented by delegation: the Chevalley-Eilenberg differential of the
    *deformed* algebra acting through ``P`` on the module, corrected by
    ``-P_M`` composed with the plain differential.
    """
    rep = nrep.representation
    deformed = deformed_representation(rep, nja.operator, nrep.operator)
    corrected = delta_lie(rep, f).map_values(nrep.operator).scale(-1)
    return corrected.add(delta_lie(deformed, f))


def psi(nja: NijenhuisLieAlgebra, nrep: NijenhuisRepresentation, f: Cochain) -> Cochain:
    """The comparison chain map from the Lie complex to the operator complex.

    Degree 0 is the identity. In degree ``n``, sum over all ways of feeding
    ``P`` into a subset of the arguments, post-composing with the matching
    power of ``P_M`` and an alternating sign:
    ``sum_{k} sum_{i_1<...<i_k} (-1)^(n-k) P_M^(n-k) f(..., P(a_i), ...)``.
    """
    n = f.degree
    if n == 0:
        return f
    p = nja.operator
    p_m = nrep.operator
    pm_powers = [Endomorphism.identity(nrep.representation.dim)]
    for _ in range(n):
        pm_powers.append(pm_powers[-1].compose(p_m))
    p_columns = [p.apply(vector([1 if t == i else 0 for t in range(p.dim)])) for i in range(p.dim)]
    values: dict[tuple[int, ...], Vector] = {}
    for idx in combinations(range(nja.algebra.dim), n):
        total = zero_vector(nrep.representation.dim)
        for k in range(n + 1):
            for subset in combinations(range(n), k):
                chosen = set(subset)
                args: list = [
                    p_columns[idx[t]] if t in chosen else idx[t] for t in range(n)
                ]
                term = pm_powers[n - k].apply(f.evaluate_mixed(args))
                total = vec_add(total, vec_scale((-1) ** (n - k), term))
        if not is_zero_vector(total):
            values[idx] = total
    return Cochain(n, nja.algebra.dim, nrep.representation.dim, values)


def delta_njl(
    nja: NijenhuisLieAlgebra, nrep: NijenhuisRepresentation, pair: PairCochain
) -> PairCochain:
    """Cone differential ``(f, g) -> (delta_lie f, -psi f - delta_njo g)``."""
    rep = nrep.representation
    lie_out = delta_lie(rep, pair.lie_part)
    njo_out = psi(nja, nrep, pair.lie_part).scale(-1)
    if pair.njo_part is not None:
        njo_out = njo_out.sub(delta_njo(nja, nrep, pair.njo_part))
    return PairCochain(pair.degree + 1, lie_out, njo_out)


@dataclass
class BettiReport:
    complex: str
    max_degree: int
    dims: list[int]
    ranks: list[int]
    betti: list[int]

    def to_dict(self) -> dict:
        return {
            "complex": self.complex,
            "max_degree": self.max_degree,
            "dims": self.dims,
            "ranks": self.ranks,
            "betti": self.betti,
        }


_COMPLEXES = ("ce", "njo", "njl")


def _lie_keys(degree: int, source_dim: int, target_dim: int) -> list[tuple]:
    return [
        (idx, t)
        for idx in combinations(range(source_dim), degree)
        for t in range(target_dim)
    ]


def _pair_keys(degree: int, source_dim: int, target_dim: int) -> list[tuple]:
    keys = [("lie", idx, t) for idx, t in _lie_keys(degree, source_dim, target_dim)]
    if degree >= 1:
        keys += [
            ("njo", idx, t) for idx, t in _lie_keys(degree - 1, source_dim, target_dim)
        ]
    return keys


def _basis_cochain(degree: int, sdim: int, tdim: int, key: tuple) -> Cochain:
    idx, t = key
    value = tuple(Fraction(1) if s == t else Fraction(0) for s in range(tdim))
    return Cochain(degree, sdim, tdim, {idx: value})


def _basis_pair(degree: int, sdim: int, tdim: int, key: tuple) -> PairCochain:
    tag, idx, t = key
    lie = Cochain.zero(degree, sdim, tdim)
    njo = None if degree == 0 else Cochain.zero(degree - 1, sdim, tdim)
    if tag == "lie":
        lie = _basis_cochain(degree, sdim, tdim, (idx, t))
    else:
        njo = _basis_cochain(degree - 1, sdim, tdim, (idx, t))
    return PairCochain(degree, lie, njo)


def _cochain_coords(f: Cochain, keys: list[tuple]) -> dict[int, Fraction]:
    pos = {key: r for r, key in enumerate(keys)}
    out: dict[int, Fraction] = {}
    for idx, vec in f.values.items():
        for t, c in enumerate(vec):
            if c:
                out[pos[(idx, t)]] = c
    return out


def _pair_coords(pair: PairCochain, keys: list[tuple]) -> dict[int, Fraction]:
    pos = {key: r for r, key in enumerate(keys)}
    out: dict[int, Fraction] = {}
    for idx, vec in pair.lie_part.values.items():
        for t, c in enumerate(vec):
            if c:
                out[pos[("lie", idx, t)]] = c
    if pair.njo_part is not None:
        for idx, vec in pair.njo_part.values.items():
            for t, c in enumerate(vec):
                if c:
                    out[pos[("njo", idx, t)]] = c
    return out


class _Complex:
    """Uniform matrix view of one of the three complexes."""

    def __init__(
        self, nja: NijenhuisLieAlgebra, nrep: NijenhuisRepresentation, which: str
    ) -> None:
        if which not in _COMPLEXES:
            raise ValueError(f"unknown complex {which!r}; pick one of {_COMPLEXES}")
        self.nja = nja
        self.nrep = nrep
        self.which = which
        self.sdim = nja.algebra.dim
        self.tdim = nrep.representation.dim
        self._matrices: dict[int, SparseMatrix] = {}

    def keys(self, degree: int) -> list[tuple]:
        if self.which == "njl":
            return _pair_keys(degree, self.sdim, self.tdim)
        return _lie_keys(degree, self.sdim, self.tdim)

    def dim(self, degree: int) -> int:
        return len(self.keys(degree))

    def differential_matrix(self, degree: int) -> SparseMatrix:
        """Matrix of the differential from degree ``degree`` to ``degree + 1``."""
        if degree in self._matrices:
            return self._matrices[degree]
        dom = self.keys(degree)
        cod = self.keys(degree + 1)
        m = SparseMatrix(len(cod), len(dom))
        for col, key in enumerate(dom):
            if self.which == "njl":
                image = delta_njl(
                    self.nja, self.nrep, _basis_pair(degree, self.sdim, self.tdim, key)
                )
                coords = _pair_coords(image, cod)
            else:
                f = _basis_cochain(degree, self.sdim, self.tdim, key)
                if self.which == "ce":
                    image_c = delta_lie(self.nrep.representation, f)
                else:
                    image_c = delta_njo(self.nja, self.nrep, f)
                coords = _cochain_coords(image_c, cod)
            for row, value in coords.items():
                m.set(row, col, value)
        self._matrices[degree] = m
        return m


def betti(
    nja: NijenhuisLieAlgebra,
    nrep: NijenhuisRepresentation,
    which: str,
    max_degree: int,
) -> BettiReport:
    """Exact Betti numbers of the chosen complex for degrees ``0..max_degree``.

    ``b_n = dim C^n - rank d_n - rank d_{n-1}``; every rank is computed by
    fraction-free elimination, so the result is exact. Degrees beyond the
    top of the complex simply come out zero.
    """
    cx = _Complex(nja, nrep, which)
    dims = [cx.dim(n) for n in range(max_degree + 1)]
    ranks = [cx.differential_matrix(n).rank() for n in range(max_degree + 1)]
    numbers = []
    for n in range(max_degree + 1):
        below = ranks[n - 1] if n >= 1 else 0
        numbers.append(dims[n] - ranks[n] - below)
    return BettiReport(which, max_degree, dims, ranks, numbers)


@dataclass
class LESReport:
    """Exactness record for the long sequence linking the three complexes."""

    max_degree: int
    nodes: list[dict]
    ok: bool

    def to_dict(self) -> dict:
        return {"max_degree": self.max_degree, "ok": self.ok, "nodes": self.nodes}


def _columns_matrix(nrows: int, cols: list[dict[int, Fraction]]) -> SparseMatrix:
    m = SparseMatrix(nrows, len(cols))
    for j, col in enumerate(cols):
        for i, v in col.items():
            m.set(i, j, v)
    return m


def _matrix_columns(m: SparseMatrix) -> list[dict[int, Fraction]]:
    cols: list[dict[int, Fraction]] = [dict() for _ in range(m.ncols)]
    for (r, c), v in m.entries.items():
        cols[c][r] = v
    return cols


def _rank_with(base: list[dict[int, Fraction]], extra: list[dict[int, Fraction]], nrows: int) -> int:
    return _columns_matrix(nrows, base + extra).rank()


def les_verify(
    nja: NijenhuisLieAlgebra, nrep: NijenhuisRepresentation, max_degree: int
) -> LESReport:
    """Check exactness of the long cohomology sequence at every node with
    degree at most ``max_degree``.

    The sequence repeats ``cone^p -> lie^p -> njo^p -> cone^(p+1)`` with the
    projection, the comparison map, and the inclusion (each a chain map up
    to sign, which does not affect exactness). All checks are exact rank
    computations on cocycle representatives.
    """
    ce = _Complex(nja, nrep, "ce")
    njo = _Complex(nja, nrep, "njo")
    njl = _Complex(nja, nrep, "njl")
    sdim, tdim = ce.sdim, ce.tdim

    def cocycles(cx: _Complex, degree: int) -> list[dict[int, Fraction]]:
        m = cx.differential_matrix(degree)
        out = []
        for vec in m.kernel_basis():
            out.append({i: c for i, c in enumerate(vec) if c})
        return out

    def boundaries(cx: _Complex, degree: int) -> list[dict[int, Fraction]]:
        if degree == 0:
            return []
        return _matrix_columns(cx.differential_matrix(degree - 1))

    def proj_map(degree: int, col: dict[int, Fraction]) -> dict[int, Fraction]:
        pair_keys = njl.keys(degree)
        lie_keys = ce.keys(degree)
        pos = {key: r for r, key in enumerate(lie_keys)}
        out: dict[int, Fraction] = {}
        for i, v in col.items():
            tag, idx, t = pair_keys[i]
            if tag == "lie":
                out[pos[(idx, t)]] = v
        return out

    def incl_map(degree: int, col: dict[int, Fraction]) -> dict[int, Fraction]:
        # njo^p -> cone^(p+1)
        njo_keys = njo.keys(degree)
        pair_keys = njl.keys(degree + 1)
        pos = {key: r for r, key in enumerate(pair_keys)}
        out: dict[int, Fraction] = {}
        for i, v in col.items():
            idx, t = njo_keys[i]
            out[pos[("njo", idx, t)]] = v
        return out

    def psi_map(degree: int, col: dict[int, Fraction]) -> dict[int, Fraction]:
        lie_keys = ce.keys(degree)
        f = Cochain.zero(degree, sdim, tdim)
        for i, v in col.items():
            idx, t = lie_keys[i]
            f = f.add(_basis_cochain(degree, sdim, tdim, (idx, t)).scale(v))
        return _cochain_coords(psi(nja, nrep, f), njo.keys(degree))

    nodes = []
    ok = True
    for p in range(max_degree + 1):
        z_njl = cocycles(njl, p)
        z_lie = cocycles(ce, p)
        z_njo = cocycles(njo, p)
        z_njo_prev = cocycles(njo, p - 1) if p >= 1 else []

        # (name, here-dim, here-cocycles, here-boundaries,
        #  incoming images, outgoing map, next-dim, next-boundaries)
        checks = [
            (
                f"cone^{p}",
                njl.dim(p),
                z_njl,
                boundaries(njl, p),
                [incl_map(p - 1, c) for c in z_njo_prev],
                lambda col, p=p: proj_map(p, col),
                ce.dim(p),
                boundaries(ce, p),
            ),
            (
                f"lie^{p}",
                ce.dim(p),
                z_lie,
                boundaries(ce, p),
                [proj_map(p, c) for c in z_njl],
                lambda col, p=p: psi_map(p, col),
                njo.dim(p),
                boundaries(njo, p),
            ),
            (
                f"njo^{p}",
                njo.dim(p),
                z_njo,
                boundaries(njo, p),
                [psi_map(p, c) for c in z_lie],
                lambda col, p=p: incl_map(p, col),
                njl.dim(p + 1),
                boundaries(njl, p + 1),
            ),
        ]
        for name, here_dim, here_z, here_b, in_cols, out_fn, next_dim, next_b in checks:
            dim_h = len(here_z) - _rank_with(here_b, [], here_dim)
            rank_in = _rank_with(here_b, in_cols, here_dim) - _rank_with(
                here_b, [], here_dim
            )
            out_cols = [out_fn(z) for z in here_z]
            rank_out = _rank_with(next_b, out_cols, next_dim) - _rank_with(
                next_b, [], next_dim
            )
            comp_cols = [out_fn(c) for c in in_cols]
            comp_zero = _rank_with(next_b, comp_cols, next_dim) == _rank_with(
                next_b, [], next_dim
            )
            exact = comp_zero and (rank_in + rank_out == dim_h)
            ok = ok and exact
            nodes.append(
                {
                    "node": name,
                    "dim_h": dim_h,
                    "rank_in": rank_in,
                    "rank_out": rank_out,
                    "composition_zero": comp_zero,
                    "exact": exact,
                }
            )
    return LESReport(max_degree, nodes, ok)
