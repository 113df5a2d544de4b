"""Finite 2-groups given by polycyclic presentations.

Elements are exponent vectors ``(e_1, ..., e_k)`` with ``0 <= e_i < order_i``
read as ``g_1^e_1 ... g_k^e_k``.  The mixed-radix index of an element puts
the leftmost generator in the most significant digit, so for the groups
built by :func:`build_G` the index of ``x^i y^j z^l`` is ``(i*2^m + j)*4 + l``.

Words are sequences of ``(generator, exponent)`` pairs, where the generator
is either a position or a name.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

GroupElement = tuple[int, ...]
Word = Sequence[tuple["int | str", int]]

#: materialize the full multiplication table up to this order
TABLE_LIMIT = 2**12


class PresentationError(ValueError):
    pass


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


@dataclass(frozen=True)
class PcPresentation:
    """A polycyclic presentation of a finite 2-group.

    ``power_rules[i]`` is the normal form of ``g_i^{order_i}`` and
    ``conjugation_rules[(i, j)]`` (for ``i < j``) the normal form of
    ``g_j^{g_i}``.  Missing rules mean trivial power / commuting generators.
    """

    generator_names: tuple[str, ...]
    relative_orders: tuple[int, ...]
    power_rules: dict[int, GroupElement] = field(default_factory=dict)
    conjugation_rules: dict[tuple[int, int], GroupElement] = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.generator_names)
        if len(self.relative_orders) != k:
            raise PresentationError("one relative order per generator is required")
        if len(set(self.generator_names)) != k:
            raise PresentationError("generator names must be distinct")
        for name, o in zip(self.generator_names, self.relative_orders):
            if not _is_power_of_two(o) or o < 2:
                raise PresentationError(f"relative order of {name} is {o}, not a power of 2 above 1")
        for i, rhs in self.power_rules.items():
            self._check_rhs(rhs, i + 1, f"power rule of {self.generator_names[i]}")
        for (i, j), rhs in self.conjugation_rules.items():
            if not 0 <= i < j < k:
                raise PresentationError(f"conjugation rule index ({i}, {j}) out of range")
            self._check_rhs(rhs, j, f"conjugation rule {self.generator_names[j]}^{self.generator_names[i]}")

    def _check_rhs(self, rhs: GroupElement, first: int, what: str):
        if len(rhs) != len(self.generator_names):
            raise PresentationError(f"{what}: wrong exponent vector length")
        for t, (e, o) in enumerate(zip(rhs, self.relative_orders)):
            if not 0 <= e < o:
                raise PresentationError(f"{what}: exponent {e} not reduced below {o}")
            if e and t < first:
                raise PresentationError(
                    f"{what}: right-hand side involves {self.generator_names[t]}, "
                    "which precedes the rewritten generator"
                )

    # -- basic data ------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.generator_names)

    @property
    def order(self) -> int:
        return math.prod(self.relative_orders)

    @cached_property
    def identity(self) -> GroupElement:
        return (0,) * self.rank

    def generator(self, g: int | str) -> GroupElement:
        i = self._gen_index(g)
        return tuple(1 if t == i else 0 for t in range(self.rank))

    def generators(self) -> list[GroupElement]:
        return [self.generator(i) for i in range(self.rank)]

    def _gen_index(self, g: int | str) -> int:
        if isinstance(g, str):
            try:
                return self.generator_names.index(g)
            except ValueError:
                raise PresentationError(f"unknown generator {g!r}") from None
        if not 0 <= g < self.rank:
            raise PresentationError(f"generator index {g} out of range")
        return g

    def index(self, u: GroupElement) -> int:
        idx = 0
        for e, o in zip(u, self.relative_orders):
            idx = idx * o + e
        return idx

    def element(self, idx: int) -> GroupElement:
        out = []
        for o in reversed(self.relative_orders):
            idx, e = divmod(idx, o)
            out.append(e)
        return tuple(reversed(out))

    def format(self, u: GroupElement) -> str:
        parts = []
        for name, e in zip(self.generator_names, u):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    # -- collection ------------------------------------------------------

    def _power_word(self, i: int) -> GroupElement | None:
        rhs = self.power_rules.get(i)
        if rhs is None or not any(rhs):
            return None
        return rhs

    def _conj_word(self, i: int, j: int) -> GroupElement | None:
        return self.conjugation_rules.get((i, j))

    def _collect_into(self, exps: list[int], stack: list[tuple[int, int]]):
        """Collect from the left: multiply ``exps`` by the letters on ``stack``.

        The stack holds ``(generator, exponent)`` letters with positive
        exponents; the last entry is processed first.
        """
        orders = self.relative_orders
        k = self.rank
        while stack:
            i, e = stack.pop()
            if e > 1:
                stack.append((i, e - 1))
            # exps * g_i = head * g_i^(e_i + 1) * tail^(g_i)
            todo: list[tuple[int, int]] = []
            for j in range(k - 1, i, -1):
                ej = exps[j]
                if not ej:
                    continue
                exps[j] = 0
                conj = self._conj_word(i, j)
                if conj is None:
                    todo.append((j, ej))
                else:
                    word = [(t, c) for t, c in enumerate(conj) if c]
                    for _ in range(ej):
                        todo.extend(reversed(word))
            # todo is built back-to-front for the stack
            exps[i] += 1
            if exps[i] == orders[i]:
                exps[i] = 0
                pw = self._power_word(i)
                if pw is not None:
                    todo.extend((t, c) for t, c in reversed(list(enumerate(pw))) if c)
            stack.extend(todo)

    def _normalize_word(self, word: Word) -> list[tuple[int, int]]:
        letters = []
        for g, e in word:
            i = self._gen_index(g)
            if e >= 0 or self._power_word(i) is None:
                e %= self.relative_orders[i]
                if e:
                    letters.append((i, e))
            else:
                # nontrivial power rule: g^-1 is not g^(o-1)
                inv = self.inverse(self.generator(i))
                for _ in range(-e):
                    letters.extend((t, c) for t, c in enumerate(inv) if c)
        return letters

    def collect(self, word: Word) -> GroupElement:
        """Normal form of a word of ``(generator, exponent)`` pairs."""
        exps = [0] * self.rank
        stack = self._normalize_word(word)
        stack.reverse()
        self._collect_into(exps, stack)
        return tuple(exps)

    def multiply(self, u: GroupElement, v: GroupElement) -> GroupElement:
        if self._table is not None:
            t = self._table
            return self.element(int(t[self.index(u), self.index(v)]))
        return self._multiply_collect(u, v)

    def _multiply_collect(self, u: GroupElement, v: GroupElement) -> GroupElement:
        exps = list(u)
        stack = [(t, c) for t, c in enumerate(v) if c]
        stack.reverse()
        self._collect_into(exps, stack)
        return tuple(exps)

    def power(self, u: GroupElement, k: int) -> GroupElement:
        if k < 0:
            return self.power(self.inverse(u), -k)
        result = self.identity
        base = u
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def element_order(self, u: GroupElement) -> int:
        """Order of ``u``; always a power of 2, found by repeated squaring."""
        order = 1
        while any(u):
            u = self.multiply(u, u)
            order *= 2
            if order > self.order:
                raise PresentationError("element order exceeds group order; presentation inconsistent")
        return order

    def inverse(self, u: GroupElement) -> GroupElement:
        if self._table is not None:
            return self.element(int(self._inverse_index[self.index(u)]))
        return self.power(u, self.element_order(u) - 1)

    def commutator(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """``[g, h] = g^-1 h^-1 g h``."""
        return self.multiply(self.inverse(g), self.multiply(self.inverse(h), self.multiply(g, h)))

    def conjugate(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """``g^h = h^-1 g h``."""
        return self.multiply(self.inverse(h), self.multiply(g, h))

    def enumerate_elements(self) -> list[GroupElement]:
        return [self.element(i) for i in range(self.order)]

    # -- tables ----------------------------------------------------------

    @cached_property
    def generator_action(self) -> np.ndarray:
        """``R[u, i]`` = index of ``u * g_i`` (shape ``order x rank``)."""
        n = self.order
        out = np.empty((n, self.rank), dtype=np.int32)
        for idx in range(n):
            u = self.element(idx)
            for i in range(self.rank):
                out[idx, i] = self.index(self._multiply_collect(u, self.generator(i)))
        return out

    @cached_property
    def table(self) -> np.ndarray:
        """Full multiplication table, ``table[u, v]`` = index of ``u*v``.

        Column ``v`` is obtained from the column of ``v`` with its last
        nonzero exponent decremented, composed with right multiplication by
        that generator.
        """
        n = self.order
        if n > TABLE_LIMIT:
            raise PresentationError(f"group of order {n} too large for a full table")
        act = self.generator_action
        t = np.empty((n, n), dtype=np.int32)
        t[:, 0] = np.arange(n)
        strides = np.cumprod((1,) + self.relative_orders[::-1])[:-1][::-1]
        for v in range(1, n):
            u = self.element(v)
            last = max(i for i in range(self.rank) if u[i])
            t[:, v] = act[t[:, v - int(strides[last])], last]
        t.setflags(write=False)
        return t

    @property
    def _table(self) -> np.ndarray | None:
        if self.order > TABLE_LIMIT:
            return None
        return self.table

    @cached_property
    def _inverse_index(self) -> np.ndarray:
        t = self.table
        inv = np.argmax(t == 0, axis=1).astype(np.int32)
        inv.setflags(write=False)
        return inv

    @property
    def inverse_index(self) -> np.ndarray:
        """``inverse_index[u]`` = index of ``u^-1``."""
        return self._inverse_index


# -- the two families -----------------------------------------------------

def _check_params(n: int, m: int):
    if not (isinstance(n, int) and isinstance(m, int)):
        raise PresentationError("n and m must be integers")
    if not n > m > 2:
        raise PresentationError(f"parameters must satisfy n > m > 2, got n={n}, m={m}")


def build_G(n: int, m: int) -> PcPresentation:
    """``<x, y, z | z=[y,x], x^(2^n)=y^(2^m)=z^4=1, z^x=z^-1, z^y=z^-1>``."""
    _check_params(n, m)
    return PcPresentation(
        generator_names=("x", "y", "z"),
        relative_orders=(2**n, 2**m, 4),
        conjugation_rules={(0, 1): (0, 1, 1), (0, 2): (0, 0, 3), (1, 2): (0, 0, 3)},
    )


def build_H(n: int, m: int) -> PcPresentation:
    """``<a, b, c | c=[b,a], a^(2^n)=b^(2^m)=c^4=1, c^a=c^-1, c^b=c>``."""
    _check_params(n, m)
    return PcPresentation(
        generator_names=("a", "b", "c"),
        relative_orders=(2**n, 2**m, 4),
        conjugation_rules={(0, 1): (0, 1, 1), (0, 2): (0, 0, 3)},
    )


# -- consistency ----------------------------------------------------------

def consistency_check(p: PcPresentation) -> tuple[bool, list[str]]:
    """Run the overlap test for a finite polycyclic presentation.

    Each overlap is collected in two different ways; the presentation is
    consistent iff all pairs agree.  Returns the verdict and a description
    of every failing equation.
    """
    k = p.rank
    o = p.relative_orders
    gen = p.generators()
    names = p.generator_names
    mul = p._multiply_collect
    failures = []

    def word(i, e=1):
        return p.collect([(i, e)])

    def check(label, lhs, rhs):
        if lhs != rhs:
            failures.append(f"{label}: {p.format(lhs)} != {p.format(rhs)}")

    for i in range(k):
        for j in range(i + 1, k):
            for t in range(j + 1, k):
                check(
                    f"({names[t]} {names[j]}) {names[i]} = {names[t]} ({names[j]} {names[i]})",
                    mul(mul(gen[t], gen[j]), gen[i]),
                    mul(gen[t], mul(gen[j], gen[i])),
                )
    for i in range(k):
        for j in range(i + 1, k):
            check(
                f"({names[j]}^{o[j]}) {names[i]} = {names[j]}^{o[j] - 1} ({names[j]} {names[i]})",
                mul(p.power_rules.get(j, p.identity), gen[i]),
                mul(word(j, o[j] - 1), mul(gen[j], gen[i])),
            )
            check(
                f"{names[j]} ({names[i]}^{o[i]}) = ({names[j]} {names[i]}) {names[i]}^{o[i] - 1}",
                mul(gen[j], p.power_rules.get(i, p.identity)),
                mul(mul(gen[j], gen[i]), word(i, o[i] - 1)),
            )
    for i in range(k):
        pw = p.power_rules.get(i, p.identity)
        check(
            f"{names[i]} ({names[i]}^{o[i]}) = ({names[i]}^{o[i]}) {names[i]}",
            mul(gen[i], pw),
            mul(pw, gen[i]),
        )
    return not failures, failures


# -- subgroups ------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored as the sorted array of its element indices."""

    generators: tuple[GroupElement, ...]
    elements: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, idx) -> bool:
        if isinstance(idx, tuple):
            raise TypeError("test membership with element indices")
        i = np.searchsorted(self.elements, idx)
        return bool(i < len(self.elements) and self.elements[i] == idx)

    def contains(self, p: PcPresentation, u: GroupElement) -> bool:
        return p.index(u) in self


def subgroup_closure(gens: Iterable[GroupElement], p: PcPresentation) -> Subgroup:
    """Breadth-first closure of ``gens`` under right multiplication."""
    gens = tuple(tuple(g) for g in gens)
    gidx = [p.index(g) for g in gens]
    t = p.table
    seen = np.zeros(p.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    while frontier.size:
        new = np.unique(t[np.ix_(frontier, gidx)]) if gidx else np.array([], dtype=int)
        new = new[~seen[new]]
        seen[new] = True
        frontier = new
    return Subgroup(gens, np.flatnonzero(seen))


def minimal_generators(p: PcPresentation) -> list[GroupElement]:
    """Pc generators, skipping each one already in the span of the earlier picks."""
    picked: list[GroupElement] = []
    for g in p.generators():
        if picked:
            S = subgroup_closure(picked, p)
            if S.order == p.order:
                break
            if p.index(g) in S:
                continue
        picked.append(g)
    return picked


def derived_subgroup(p: PcPresentation) -> Subgroup:
    """Normal closure of the commutators of generator pairs."""
    gens = p.generators()
    comms = [p.commutator(g, h) for g in gens for h in gens]
    return normal_closure(comms, p)


def normal_closure(elems: Iterable[GroupElement], p: PcPresentation) -> Subgroup:
    elems = list(elems)
    gens = p.generators()
    while True:
        s = subgroup_closure(elems, p)
        conj = [p.conjugate(u, g) for u in elems for g in gens]
        if all(p.index(c) in s for c in conj):
            return s
        elems = elems + [c for c in conj if p.index(c) not in s]


def centralizer(p: PcPresentation, X: Iterable[GroupElement] | Subgroup) -> Subgroup:
    """Elements commuting with every element of ``X`` (exhaustive test)."""
    if isinstance(X, Subgroup):
        xs = X.elements
    else:
        xs = np.array([p.index(u) for u in X], dtype=np.int64)
    t = p.table
    ok = np.ones(p.order, dtype=bool)
    for x in xs:
        ok &= t[:, x] == t[x, :]
    idx = np.flatnonzero(ok)
    return Subgroup(tuple(p.element(int(i)) for i in idx), idx)


def center(p: PcPresentation) -> Subgroup:
    # commuting with the generators suffices
    return centralizer(p, p.generators())


def frattini(p: PcPresentation) -> Subgroup:
    """``Phi(G) = G^2 G'`` for a 2-group."""
    gens = p.generators()
    squares = [p.multiply(g, g) for g in gens]
    comms = [p.commutator(g, h) for g in gens for h in gens]
    return normal_closure(squares + comms, p)


def subgroup_is_abelian(S: Subgroup, p: PcPresentation) -> bool:
    t = p.table
    E = S.elements
    block = t[np.ix_(E, E)]
    return bool(np.array_equal(block, block.T))


def element_orders(p: PcPresentation) -> np.ndarray:
    """Orders of all elements, by repeated squaring through the table."""
    t = p.table
    n = p.order
    cur = np.arange(n)
    orders = np.ones(n, dtype=np.int64)
    live = cur != 0
    while live.any():
        orders[live] *= 2
        cur = t[cur, cur]
        live = cur != 0
    return orders


def subgroup_exponent(S: Subgroup, p: PcPresentation) -> int:
    return int(element_orders(p)[S.elements].max())


def conjugacy_classes(p: PcPresentation) -> list[np.ndarray]:
    """Partition of the group into conjugacy classes (sorted index arrays).

    Classes are listed in order of their smallest element.
    """
    t = p.table
    inv = p.inverse_index
    gidx = [p.index(g) for g in p.generators()]
    # conjugation by each generator as a permutation of indices
    perms = [t[inv[g], :][t[:, g]] for g in gidx]
    label = np.full(p.order, -1, dtype=np.int64)
    classes = []
    for start in range(p.order):
        if label[start] >= 0:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for perm in perms:
                v = int(perm[u])
                if v not in orbit:
                    orbit.add(v)
                    queue.append(v)
        cls = np.array(sorted(orbit))
        label[cls] = len(classes)
        classes.append(cls)
    return classes
