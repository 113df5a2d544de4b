"""The group algebra of a finite 2-group over the field with two elements.

An element is the set of group elements with coefficient 1, stored as a
boolean vector indexed like :meth:`PcPresentation.enumerate_elements`.
Multiplication gathers through the group multiplication table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gf2
from .gf2 import Subspace
from .pcgroup import GroupElement, PcPresentation, Subgroup, conjugacy_classes, minimal_generators


class NotAUnit(ArithmeticError):
    pass


class AlgebraElement:
    """A GF(2)-linear combination of group elements."""

    __slots__ = ("algebra", "bits", "_key")

    def __init__(self, algebra: "GroupAlgebra", bits):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (algebra.dim,):
            raise ValueError(f"expected {algebra.dim} coefficients, got shape {bits.shape}")
        bits.setflags(write=False)
        self.algebra = algebra
        self.bits = bits
        self._key = None

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, int) and other in (0, 1):
            return self.algebra.one if other else self.algebra.zero
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, self.bits ^ other.bits)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.algebra.mul(other, self)

    def __pow__(self, k: int):
        if k < 0:
            return self.algebra.unit_inverse(self) ** (-k)
        result = self.algebra.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.key)

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = np.packbits(self.bits).tobytes()
        return self._key

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def is_zero(self) -> bool:
        return not self.bits.any()

    def augmentation(self) -> int:
        return int(self.bits.sum() & 1)

    def __repr__(self):
        p = self.algebra.group
        terms = [p.format(p.element(int(i))) for i in self.support()]
        if len(terms) > 8:
            return f"<AlgebraElement with {len(terms)} terms>"
        return " + ".join(terms) or "0"


@dataclass
class IdealFiltration:
    """Powers ``I^0 = kG, I^1 = I, I^2, ...`` of the augmentation ideal,
    ending with the zero subspace."""

    layers: list[Subspace]

    @property
    def dims(self) -> list[int]:
        return [s.dim for s in self.layers]

    @property
    def quotient_dims(self) -> list[int]:
        """``dim I^k / I^(k+1)`` for ``k = 0, 1, ..., t``."""
        d = self.dims
        return [a - b for a, b in zip(d, d[1:])]

    @property
    def nilpotency_index(self) -> int:
        """Largest ``t`` with ``I^t != 0``."""
        return len(self.layers) - 2

    def __getitem__(self, k: int) -> Subspace:
        if k >= len(self.layers):
            return self.layers[-1]
        return self.layers[k]


class GroupAlgebra:
    """``kG`` for ``k`` the field with two elements."""

    def __init__(self, p: PcPresentation):
        self.group = p
        self.dim = p.order
        self.table = p.table
        self.inverse_index = p.inverse_index

    # -- elements ----------------------------------------------------------

    def element(self, bits) -> AlgebraElement:
        return AlgebraElement(self, bits)

    def basis_element(self, idx: int) -> AlgebraElement:
        bits = np.zeros(self.dim, dtype=bool)
        bits[idx] = True
        return AlgebraElement(self, bits)

    def embed(self, g: GroupElement | int | str) -> AlgebraElement:
        p = self.group
        if isinstance(g, str):
            g = p.generator(g)
        idx = g if isinstance(g, (int, np.integer)) else p.index(tuple(g))
        return self.basis_element(int(idx))

    @cached_property
    def one(self) -> AlgebraElement:
        return self.basis_element(0)

    @cached_property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, np.zeros(self.dim, dtype=bool))

    def generators(self) -> list[AlgebraElement]:
        return [self.embed(g) for g in self.group.generators()]

    # -- multiplication ----------------------------------------------------

    def right_perm(self, h: int) -> np.ndarray:
        """Index array ``q`` with ``(v*h)[k] = v[q[k]]``."""
        return self.table[:, self.inverse_index[h]]

    def left_perm(self, h: int) -> np.ndarray:
        """Index array ``q`` with ``(h*v)[k] = v[q[k]]``."""
        return self.table[self.inverse_index[h], :]

    def mul(self, alpha: AlgebraElement, beta: AlgebraElement) -> AlgebraElement:
        sa, sb = alpha.support(), beta.support()
        if not len(sa) or not len(sb):
            return self.zero
        if len(sb) <= len(sa):
            # (alpha*beta)[k] = sum over h in supp(beta) of alpha[k h^-1]
            gathered = alpha.bits[self.table[:, self.inverse_index[sb]]]
            bits = np.bitwise_xor.reduce(gathered, axis=1)
        else:
            gathered = beta.bits[self.table[self.inverse_index[sa], :]]
            bits = np.bitwise_xor.reduce(gathered, axis=0)
        return AlgebraElement(self, bits)

    def mul_bits(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.mul(self.element(u), self.element(v)).bits

    def rows_times(self, rows: np.ndarray, beta: AlgebraElement) -> np.ndarray:
        """Each row (an element) multiplied on the right by ``beta``."""
        rows = np.asarray(rows, dtype=bool)
        out = np.zeros_like(rows)
        for h in beta.support():
            out ^= rows[:, self.right_perm(int(h))]
        return out

    def times_rows(self, beta: AlgebraElement, rows: np.ndarray) -> np.ndarray:
        """``beta`` multiplied on the right by each row."""
        rows = np.asarray(rows, dtype=bool)
        out = np.zeros_like(rows)
        for h in beta.support():
            out ^= rows[:, self.left_perm(int(h))]
        return out

    # -- augmentation and units --------------------------------------------

    def augmentation(self, alpha: AlgebraElement) -> int:
        return alpha.augmentation()

    def unit_inverse(self, u: AlgebraElement) -> AlgebraElement:
        """Inverse of a unit as the finite series ``sum (1+u)^i``."""
        if u.augmentation() != 1:
            raise NotAUnit("augmentation 0: element lies in the augmentation ideal")
        x = u + self.one
        total = self.one
        term = self.one
        for _ in range(self.dim):
            term = term * x
            if term.is_zero():
                return total
            total = total + term
        raise AssertionError("augmentation ideal failed to be nilpotent")

    def commutator(self, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
        """``[u, v] = u^-1 v^-1 u v`` in the unit group."""
        return self.unit_inverse(u) * self.unit_inverse(v) * u * v

    def conjugate(self, u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
        """``u^v = v^-1 u v``."""
        return self.unit_inverse(v) * u * v

    # -- ideals --------------------------------------------------------------

    def span(self, elems: Iterable[AlgebraElement]) -> Subspace:
        rows = [e.bits for e in elems]
        return gf2.span(np.array(rows) if rows else np.zeros((0, self.dim), bool), self.dim)

    def augmentation_ideal(self) -> Subspace:
        rows = np.zeros((self.dim - 1, self.dim), dtype=bool)
        rows[:, 0] = True
        rows[np.arange(self.dim - 1), np.arange(1, self.dim)] = True
        return gf2.span(rows, self.dim) if self.dim > 1 else Subspace.zero(self.dim)

    def _closure(self, start: np.ndarray, ops: Sequence[Callable[[np.ndarray], np.ndarray]]) -> Subspace:
        """Smallest subspace containing ``start`` and stable under ``ops``.

        Only directions added in the previous round are pushed through
        ``ops`` again.
        """
        S = gf2.span(start, self.dim) if len(start) else Subspace.zero(self.dim)
        frontier = S.basis()
        while len(frontier):
            cand = np.vstack([op(frontier) for op in ops])
            res = S.reduce_words(gf2.pack(cand))
            res = res[res.any(axis=1)]
            if not len(res):
                break
            new = gf2.rref_words(res, self.dim)
            S = gf2.subspace_sum(S, new)
            frontier = new.basis()
        return S

    def two_sided_ideal(self, alpha: AlgebraElement | Sequence[AlgebraElement]) -> Subspace:
        elems = [alpha] if isinstance(alpha, AlgebraElement) else list(alpha)
        start = np.array([e.bits for e in elems if not e.is_zero()]).reshape(-1, self.dim)
        gens = self.generators()
        ops = [lambda r, g=g: self.rows_times(r, g) for g in gens]
        ops += [lambda r, g=g: self.times_rows(g, r) for g in gens]
        return self._closure(start, ops)

    def left_ideal(self, elems: Sequence[AlgebraElement]) -> Subspace:
        start = np.array([e.bits for e in elems if not e.is_zero()]).reshape(-1, self.dim)
        ops = [lambda r, g=g: self.times_rows(g, r) for g in self.generators()]
        return self._closure(start, ops)

    def left_ideal_generators(self, J: Subspace) -> list[AlgebraElement]:
        """A small set generating the two-sided ideal ``J`` as a left ideal."""
        gens: list[AlgebraElement] = []
        L = Subspace.zero(self.dim)
        for row in J.basis():
            if L.contains(row):
                continue
            gens.append(self.element(row))
            L = self.left_ideal(gens)
            if L.dim == J.dim:
                break
        return gens

    def ideal_power(self, J: Subspace, k: int, left_generators: Sequence[AlgebraElement] | None = None) -> Subspace:
        """``J^k`` for a two-sided ideal ``J`` (``J^0`` is the whole algebra).

        With ``J = sum kG w_s`` one has ``J^(i+1) = J^i J = sum J^i w_s``.
        """
        return self.ideal_powers(J, k, left_generators)[k]

    def ideal_powers(self, J: Subspace, k: int, left_generators=None) -> list[Subspace]:
        ws = list(left_generators) if left_generators is not None else self.left_ideal_generators(J)
        whole = gf2.span(np.eye(self.dim, dtype=bool))
        powers = [whole, J]
        while len(powers) <= k:
            cur = powers[-1]
            if not cur.dim:
                powers.append(cur)
                continue
            rows = cur.basis()
            prods = np.vstack([self.rows_times(rows, w) for w in ws])
            powers.append(gf2.span(prods, self.dim))
        return powers

    def ideal_filtration(self) -> IdealFiltration:
        """Augmentation ideal powers down to zero, via ``I = sum kG (g_i + 1)``."""
        I = self.augmentation_ideal()
        ws = [self.embed(g) + self.one for g in minimal_generators(self.group)]
        layers = [gf2.span(np.eye(self.dim, dtype=bool)), I]
        while layers[-1].dim:
            rows = layers[-1].basis()
            prods = np.vstack([self.rows_times(rows, w) for w in ws])
            layers.append(gf2.span(prods, self.dim))
        return IdealFiltration(layers)

    @cached_property
    def filtration(self) -> IdealFiltration:
        return self.ideal_filtration()

    def dimension_subgroups(self, filtration: IdealFiltration | None = None) -> list[Subgroup]:
        """``D_k = G ∩ (1 + I^k)`` for ``k = 1, 2, ...`` until trivial."""
        F = filtration or self.filtration
        p = self.group
        vecs = np.zeros((self.dim, self.dim), dtype=bool)
        vecs[:, 0] = True
        vecs[np.arange(self.dim), np.arange(self.dim)] ^= True  # g + 1, zero for g = 1
        out = []
        members = np.arange(self.dim)
        k = 1
        while True:
            res = F[k].reduce(vecs[members])
            members = members[~res.any(axis=1)]
            out.append(Subgroup(tuple(p.element(int(i)) for i in members), members.copy()))
            if len(members) == 1:
                return out
            k += 1

    def ring_generated_by(self, elems: Sequence[AlgebraElement]) -> Subspace:
        """Span of all nonempty products of ``elems`` (the subring without 1)."""
        elems = [e for e in elems]
        if not elems:
            return Subspace.zero(self.dim)
        start = np.array([e.bits for e in elems])
        ops = [lambda r, e=e: self.rows_times(r, e) for e in elems]
        return self._closure(start, ops)

    # -- center --------------------------------------------------------------

    def is_central(self, alpha: AlgebraElement) -> bool:
        return all(alpha * g == g * alpha for g in self.generators())

    @cached_property
    def conjugacy_classes(self) -> list[np.ndarray]:
        return conjugacy_classes(self.group)

    def class_sums(self) -> list[AlgebraElement]:
        out = []
        for cls in self.conjugacy_classes:
            bits = np.zeros(self.dim, dtype=bool)
            bits[cls] = True
            out.append(self.element(bits))
        return out

    def center_basis(self) -> Subspace:
        return self.span(self.class_sums())

    def element_in(self, alpha: AlgebraElement, S: Subspace) -> bool:
        return S.contains(alpha.bits)
