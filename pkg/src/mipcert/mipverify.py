"""Mechanical verification that G(n,m) and H(n,m) are non-isomorphic while
their group algebras over GF(2) are isomorphic.

The isomorphism is exhibited inside kH: ``xt = a`` and ``yt = b(a+b+ab)c``
generate a group basis of kH that is a homomorphic image of G.  Every
step of that argument is checked by computation and recorded as a
:class:`ProofStep`; the change of basis kG -> kH is written out as an
:class:`IsoCertificate` that can be re-checked from the file alone.
"""

from __future__ import annotations

import hashlib
import logging
import math
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import gf2
from .galgebra import AlgebraElement, GroupAlgebra
from .gf2 import Gf2Matrix
from .pcgroup import (
    PcPresentation,
    PresentationError,
    build_G,
    build_H,
    centralizer,
    center,
    consistency_check,
    derived_subgroup,
    element_orders,
    frattini,
    subgroup_closure,
    subgroup_exponent,
    subgroup_is_abelian,
)

log = logging.getLogger(__name__)

VERIFIED = "verified"
FAILED = "failed"

#: exhaustive multiplicativity check up to this order
EXHAUSTIVE_LIMIT = 2**10
#: minimum number of pairs in a sampled multiplicativity check
SAMPLED_PAIRS = 10_000


@dataclass
class ProofStep:
    name: str
    statement: str
    status: str
    witness: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self, timings: bool = False) -> dict:
        d = {"name": self.name, "statement": self.statement, "status": self.status, "witness": self.witness}
        if timings:
            d["seconds"] = round(self.seconds, 4)
        return d


class Proof:
    """Ordered proof steps with dependencies; a failed step fails its dependents."""

    def __init__(self):
        self.steps: list[ProofStep] = []
        self._by_name: dict[str, ProofStep] = {}

    def run(self, name: str, statement: str, fn: Callable[[], tuple[bool, dict]], requires: Iterable[str] = ()) -> ProofStep:
        broken = [r for r in requires if r in self._by_name and not self._by_name[r].verified]
        if broken:
            step = ProofStep(name, statement, FAILED, {"reason": "dependency failed: " + ", ".join(broken)})
        else:
            t0 = time.perf_counter()
            try:
                ok, witness = fn()
            except Exception as exc:  # a crashing check is a failed check
                ok, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
            step = ProofStep(name, statement, VERIFIED if ok else FAILED, witness, time.perf_counter() - t0)
        log.info("%-8s %s (%.2fs)", step.status, name, step.seconds)
        self.steps.append(step)
        self._by_name[name] = step
        return step

    def __getitem__(self, name: str) -> ProofStep:
        return self._by_name[name]

    @property
    def ok(self) -> bool:
        return all(s.verified for s in self.steps)


def _fmt(p: PcPresentation, idx) -> str:
    return p.format(p.element(int(idx)))


# -- non-isomorphism --------------------------------------------------------

def centralizer_of_derived(p: PcPresentation):
    return centralizer(p, derived_subgroup(p))


def verify_nonisomorphism(n: int, m: int, pG: PcPresentation | None = None, pH: PcPresentation | None = None) -> ProofStep:
    """Compare the exponents of the centralizers of the derived subgroups."""
    pG = pG or build_G(n, m)
    pH = pH or build_H(n, m)

    def check():
        CG, CH = centralizer_of_derived(pG), centralizer_of_derived(pH)
        eG, eH = subgroup_exponent(CG, pG), subgroup_exponent(CH, pH)
        w = {
            "exponent_G": eG,
            "exponent_H": eH,
            "order_C_G": CG.order,
            "order_C_H": CH.order,
            "abelian_C_G": subgroup_is_abelian(CG, pG),
            "abelian_C_H": subgroup_is_abelian(CH, pH),
        }
        if eG == eH:
            w["reason"] = "exponents agree; no non-isomorphism witness"
        return eG != eH, w

    return Proof().run(
        "nonisomorphism",
        "C_G(G') and C_H(H') have different exponents, so G and H are not isomorphic",
        check,
    )


def verify_group_structure(pG: PcPresentation, pH: PcPresentation) -> tuple[bool, dict]:
    """The derived subgroups, centers and centralizers named in the argument."""
    out = {}
    ok = True
    for p, (g1, g2, g3), label in ((pG, "xyz", "G"), (pH, "abc", "H")):
        u, v, w = (p.generator(s) for s in (g1, g2, g3))
        D = derived_subgroup(p)
        Z = center(p)
        C = centralizer(p, D)
        u2 = p.multiply(u, u)
        # the third centralizer generator: xy in G, b in H
        t = p.multiply(u, v) if label == "G" else v
        named = subgroup_closure([w, u2, t], p)
        facts = {
            f"{label}' = <{g3}>": bool(np.array_equal(D.elements, subgroup_closure([w], p).elements)),
            f"{label}' cyclic of order 4": D.order == 4 and p.element_order(w) == 4,
            f"{g1}^2 central": p.index(u2) in Z,
            f"{_fmt(p, p.index(t))} centralizes {label}'": p.index(t) in C,
            f"C_{label}({label}') = <{g3}, {g1}^2, {_fmt(p, p.index(t))}>": bool(np.array_equal(C.elements, named.elements)),
            f"C_{label}({label}') abelian": subgroup_is_abelian(C, p),
        }
        out.update(facts)
        ok &= all(facts.values())
        out[f"order C_{label}({label}')"] = C.order
    return ok, out


# -- brute force isomorphism oracle -------------------------------------------

@dataclass
class IsoSearchResult:
    isomorphism: tuple | None
    pairs_tested: int
    relation_survivors: int
    generating_survivors: int

    @property
    def exhausted(self) -> bool:
        return self.isomorphism is None


def brute_force_iso_search(pG: PcPresentation, pH: PcPresentation, limit: int = 2**10, first_only: bool = True) -> IsoSearchResult:
    """Search for an isomorphism G -> H by enumerating generator images.

    ``pG`` must present a group of the G family (generators x, y, z with
    z = [y, x]); candidate images (u, v) of (x, y) must have the orders of
    x and y, satisfy the defining relations of G, and generate H.
    """
    N = pG.order
    if N != pH.order:
        raise ValueError(f"orders differ: {N} != {pH.order}")
    if N > limit:
        raise ValueError(f"order {N} exceeds the brute-force limit {limit}")
    T = pH.table
    inv = pH.inverse_index
    ordH = element_orders(pH)
    ordG = element_orders(pG)
    ox = ordG[pG.index(pG.generator(0))]
    oy = ordG[pG.index(pG.generator(1))]
    U = np.flatnonzero(ordH == ox)
    V = np.flatnonzero(ordH == oy)
    tested = relation_ok = generating = 0
    found = None
    for u in U:
        tested += len(V)
        # w = [v, u] = v^-1 u^-1 v u
        w = T[T[inv[V], inv[u]], T[V, u]]
        w4 = T[T[w, w], T[w, w]]
        winv = inv[w]
        wu = T[inv[u], T[w, u]]
        wv = T[inv[V], T[w, V]]
        ok = (w4 == 0) & (wu == winv) & (wv == winv)
        for v in V[ok]:
            relation_ok += 1
            if subgroup_closure([pH.element(int(u)), pH.element(int(v))], pH).order == N:
                generating += 1
                if found is None:
                    found = (pH.element(int(u)), pH.element(int(v)))
                if first_only:
                    return IsoSearchResult(found, tested, relation_ok, generating)
    return IsoSearchResult(found, tested, relation_ok, generating)


# -- the group basis inside kH --------------------------------------------

def ytilde_of(kH: GroupAlgebra) -> AlgebraElement:
    a, b, c = kH.generators()
    return b * (a + b + a * b) * c


def build_tilde_generators(kH: GroupAlgebra, xt: AlgebraElement | None = None, yt: AlgebraElement | None = None):
    """``xt = a``, ``yt = b(a+b+ab)c`` and ``zt = [yt, xt]`` in the unit group."""
    xt = kH.generators()[0] if xt is None else xt
    yt = ytilde_of(kH) if yt is None else yt
    zt = kH.commutator(yt, xt)
    return xt, yt, zt


def _central_in(kH: GroupAlgebra, alpha: AlgebraElement) -> bool:
    return kH.is_central(alpha)


def verify_relations(kH: GroupAlgebra, xt, yt, zt, n: int, m: int, proof: Proof | None = None, requires=()) -> list[ProofStep]:
    """Check that (xt, yt, zt) satisfy the defining relations of G(n, m)."""
    proof = proof or Proof()
    one = kH.one
    start = len(proof.steps)
    inv = kH.unit_inverse

    def r1():
        return xt ** (2**n) == one, {}

    def r2():
        return _central_in(kH, xt * xt), {}

    def r3():
        zinv = inv(zt)
        direct = kH.conjugate(zt, xt) == zinv
        comm = kH.commutator(yt, xt * xt)
        # [y, x^2] = z z^x, so [y, x^2] = 1 forces z^x = z^-1
        expand = comm == zt * kH.conjugate(zt, xt)
        via = comm == one
        return direct and expand and via, {"direct": direct, "[yt, xt^2] = zt zt^xt": expand, "[yt, xt^2] = 1": via}

    def r4():
        return _central_in(kH, yt * yt), {}

    def r5():
        zinv = inv(zt)
        direct = kH.conjugate(zt, yt) == zinv
        comm = kH.commutator(xt, yt * yt)
        # [x, y^2] = z^-1 (z^-1)^y
        expand = comm == zinv * kH.conjugate(zinv, yt)
        via = comm == one
        return direct and expand and via, {"direct": direct, "[xt, yt^2] = zt^-1 (zt^-1)^yt": expand, "[xt, yt^2] = 1": via}

    def r6():
        return yt ** (2**m) == one, {}

    def r7():
        return verify_z4_via_J(kH, zt)

    steps = [
        ("relation.x_power", f"xt^(2^{n}) = 1", r1),
        ("relation.x_square_central", "xt^2 = a^2 is central in kH", r2),
        ("relation.z_conj_x", "zt^xt = zt^-1, from 1 = [yt, xt^2] = zt zt^xt", r3),
        ("relation.y_square_central", "yt^2 is central in kH", r4),
        ("relation.z_conj_y", "zt^yt = zt^-1", r5),
        ("relation.y_power", f"yt^(2^{m}) = 1", r6),
        ("relation.z_fourth_power", "1 + zt lies in J = (C) and J^4 = 0, hence zt^4 = 1", r7),
    ]
    for name, statement, fn in steps:
        proof.run(name, statement, fn, requires)
    return proof.steps[start:]


def verify_z4_via_J(kH: GroupAlgebra, zt: AlgebraElement) -> tuple[bool, dict]:
    a, b, c = kH.generators()
    C = c + kH.one
    J = kH.two_sided_ideal(C)
    gens = kH.generators()
    commutative = all(J.contains((g * h + h * g).bits) for g in gens for h in gens)
    one_plus_z = J.contains((zt + kH.one).bits)
    powers = kH.ideal_powers(J, 4, left_generators=[C])
    dims = [s.dim for s in powers[1:]]
    j4_zero = powers[4].dim == 0
    z4 = zt**4 == kH.one
    w = {
        "dim J^k (k=1..4)": dims,
        "kH/J commutative": commutative,
        "1 + zt in J": one_plus_z,
        "J^4 = 0": j4_zero,
        "zt^4 = 1": z4,
    }
    return commutative and one_plus_z and j4_zero and z4, w


def verify_jennings_quotient(kG: GroupAlgebra) -> tuple[bool, dict]:
    """``g -> (g+1) + I^2`` induces an isomorphism ``G/Phi(G) -> I/I^2``."""
    p = kG.group
    I2 = kG.filtration[2]
    N = kG.dim
    vecs = np.zeros((N, N), dtype=bool)
    vecs[:, 0] = True
    vecs[np.arange(N), np.arange(N)] ^= True
    res = gf2.pack(I2.reduce(vecs))
    # g + 1 = 0 for g = 1, so the identity maps to the zero class
    kernel = np.flatnonzero(~res.any(axis=1))
    Phi = frattini(p)
    well_defined = bool(np.array_equal(kernel, Phi.elements))
    T = p.table
    hom = all(
        np.array_equal(res[T[:, s]], res ^ res[s]) for s in (p.index(g) for g in p.generators())
    )
    classes = {r.tobytes() for r in res}
    quotient_dim = kG.filtration[1].dim - I2.dim
    bijective = len(classes) == N // Phi.order == 2**quotient_dim
    w = {
        "|G/Phi(G)|": N // Phi.order,
        "dim I/I^2": quotient_dim,
        "kernel = Phi(G)": well_defined,
        "homomorphism": hom,
        "distinct classes": len(classes),
    }
    return well_defined and hom and bijective, w


def verify_identities(kH: GroupAlgebra, yt: AlgebraElement, n: int, m: int, congruent_to: AlgebraElement | None = None,
                      proof: Proof | None = None, requires=()) -> list[ProofStep]:
    """The computational identities inside kH used by the argument."""
    proof = proof or Proof()
    start = len(proof.steps)
    one = kH.one
    a, b, c = kH.generators()
    A, B, C = a + one, b + one, c + one
    Y = yt + one
    F = kH.filtration
    I, I2 = F[1], F[2]
    inv = kH.unit_inverse
    target = b if congruent_to is None else congruent_to

    def ida():
        expr = inv(b) * inv(a) * (B * A + A * B)
        eq = expr == C
        member, residue = gf2.in_span(C.bits, I2)
        return eq and member, {"C = b^-1 a^-1 (BA + AB)": eq, "C in I^2": member, "residue weight": int(residue.sum())}

    def idb():
        c_one = I2.contains((c + one).bits)
        step = I2.contains((b + yt + b * (one + a) * (one + b)).bits)
        member, residue = gf2.in_span((yt + target).bits, I2)
        return c_one and member, {
            "c = 1 mod I^2": c_one,
            "b + yt = b(1+a)(1+b) mod I^2": step,
            "yt = target mod I^2": member,
            "residue weight": int(residue.sum()),
        }

    def idc():
        b2c = b * b * c
        s = b * a * (one + b) * c
        w = {
            "yt = b^2c + ba(1+b)c": yt == b2c + s,
            "b^2c central in H": kH.group.index(kH.group.collect([("b", 2), ("c", 1)])) in center(kH.group),
            "b^2c and ba(1+b)c commute": b2c * s == s * b2c,
        }
        sq = yt * yt
        chain = [
            b2c * b2c + s * s,
            b2c * b2c + (a * b * (one + b) * c * c) ** 2,
            b2c * b2c + a * a * b * b * c * (one + b * c) * (one + b),
            b2c * b2c + a * a * b2c + a * a * b2c * b2c + a * a * b2c * (b + b * c),
        ]
        for k, rhs in enumerate(chain, start=1):
            w[f"yt^2 = display term {k}"] = sq == rhs
        bc = kH.group.collect([("b", 1), ("c", 1)])
        w["{b, bc} is the class of b"] = _class_of(kH, b) == sorted([kH.group.index(kH.group.generator("b")), kH.group.index(bc)])
        w["yt^2 central"] = kH.is_central(sq)
        return all(w.values()), w

    def idd():
        q = 2**m
        b_, c_ = b, c
        closed = (
            b_ ** (2 * q) * c_**q
            + a**q * (b_**q * c_ ** (q // 2) + b_ ** (2 * q) * c_**q)
            + a**q * b_**q * c_ ** (q // 2) * (b_ ** (q // 2) + b_ ** (q // 2) * c_ ** (q // 2))
        )
        lhs = yt**q
        return lhs == closed and closed == one, {"yt^(2^m) = closed form": lhs == closed, "closed form = 1": closed == one}

    def ide():
        quotient = I.dim - I2.dim
        # A + I^2 and Y + I^2 are independent and span the 2-dimensional I/I^2
        span_AY = gf2.subspace_sum(I2, kH.span([A, Y]))
        spans = quotient == 2 and span_AY.dim == I.dim
        R = kH.ring_generated_by([A, Y])
        gen = R == I
        return spans and gen, {"dim I/I^2": quotient, "A, Y span I/I^2": spans, "dim ring(A, Y)": R.dim, "dim I": I.dim}

    steps = [
        ("identity.C_in_I2", "C = b^-1 a^-1 (BA - AB) lies in I^2", ida),
        ("identity.ytilde_mod_I2", "yt = b mod I^2", idb),
        ("identity.ring_generation", "A and Y generate I as a ring", ide),
        ("identity.ytilde_square", "yt^2 = (b^2c)^2 + a^2(b^2c) + a^2(b^2c)^2 + a^2(b^2c)(b+bc), central", idc),
        ("identity.ytilde_power", "yt^(2^m) equals its closed form, which is 1", idd),
    ]
    for name, statement, fn in steps:
        proof.run(name, statement, fn, requires)
    return proof.steps[start:]


def _class_of(kH: GroupAlgebra, g: AlgebraElement) -> list[int]:
    idx = int(g.support()[0])
    for cls in kH.conjugacy_classes:
        if idx in cls:
            return [int(i) for i in cls]
    raise AssertionError("element missing from the class partition")


@dataclass
class GroupBasis:
    """The closure of ``<xt, yt>`` in the unit group of kH.

    ``elements`` holds the closure in discovery order; ``images[g]`` is the
    tilde element labelled by the normal form of ``g`` in G, i.e.
    ``xt^i yt^j zt^l`` for ``g = x^i y^j z^l``.
    """

    generators: tuple
    elements: np.ndarray
    images: np.ndarray
    closure_order: int
    rank: int
    labels_bijective: bool
    capped: bool

    @property
    def order(self) -> int:
        return self.closure_order


def close_group_basis(kH: GroupAlgebra, pG: PcPresentation, xt, yt, zt=None) -> GroupBasis:
    N = kH.dim
    zt = kH.commutator(yt, xt) if zt is None else zt
    seen: dict[bytes, int] = {kH.one.key: 0}
    elems = [kH.one]
    frontier = [kH.one]
    capped = False
    while frontier and not capped:
        nxt = []
        for u in frontier:
            for g in (xt, yt):
                w = u * g
                if w.key not in seen:
                    seen[w.key] = len(elems)
                    elems.append(w)
                    nxt.append(w)
                    if len(elems) > N:
                        capped = True
                        break
            if capped:
                break
        frontier = nxt
    mat = np.array([e.bits for e in elems])
    rank = gf2.rref(mat).dim
    images = _replay_images(kH, pG, xt, yt, zt)
    keys = {np.packbits(r).tobytes() for r in images}
    bijective = len(keys) == pG.order and all(k in seen for k in keys)
    return GroupBasis((xt, yt, zt), mat, images, len(elems), rank, bijective, capped)


def _replay_images(kH: GroupAlgebra, pG: PcPresentation, xt, yt, zt) -> np.ndarray:
    """``xt^i yt^j zt^l`` for every normal form ``x^i y^j z^l`` of G."""
    powers = []
    for t, o in zip((xt, yt, zt), pG.relative_orders):
        ps = [kH.one]
        for _ in range(o - 1):
            ps.append(ps[-1] * t)
        powers.append(ps)
    out = np.zeros((pG.order, kH.dim), dtype=bool)
    for idx in range(pG.order):
        i, j, l = pG.element(idx)
        out[idx] = (powers[0][i] * powers[1][j] * powers[2][l]).bits
    return out


# -- certificate -------------------------------------------------------------

class CertificateFormatError(ValueError):
    pass


_HEADER = re.compile(r"mipcert v1 n=(\d+) m=(\d+) order=(\d+)")


@dataclass
class IsoCertificate:
    """Row ``g`` of ``matrix`` is the image in kH of the basis element ``g`` of kG."""

    n: int
    m: int
    matrix: Gf2Matrix

    @property
    def order(self) -> int:
        return 2 ** (self.n + self.m + 2)

    def _body(self) -> str:
        return f"mipcert v1 n={self.n} m={self.m} order={self.order}\n" + gf2.to_hex(self.matrix)

    @property
    def checksum(self) -> str:
        return hashlib.sha256(self._body().encode()).hexdigest()

    def to_text(self) -> str:
        return self._body() + f"sha256 {self.checksum}\n"

    @classmethod
    def from_text(cls, text: str, check_checksum: bool = True) -> "IsoCertificate":
        lines = text.splitlines()
        if not lines:
            raise CertificateFormatError("empty certificate")
        head = _HEADER.fullmatch(lines[0].strip())
        if not head:
            raise CertificateFormatError(f"bad header {lines[0]!r}")
        n, m, order = (int(x) for x in head.groups())
        if order != 2 ** (n + m + 2):
            raise CertificateFormatError(f"header order {order} does not equal 2^(n+m+2) = {2 ** (n + m + 2)}")
        if len(lines) < 3 or not lines[-1].startswith("sha256 "):
            raise CertificateFormatError("missing checksum line")
        try:
            matrix = gf2.from_hex(lines[1:-1])
        except gf2.FormatError as exc:
            raise CertificateFormatError(f"matrix block: {exc}") from None
        cert = cls(n, m, matrix)
        if check_checksum and lines[-1].split()[1] != cert.checksum:
            raise CertificateFormatError("checksum mismatch")
        return cert


def check_multiplicativity(images: np.ndarray, pG: PcPresentation, kH: GroupAlgebra, exhaustive: bool | None = None,
                           seed: int = 0, min_pairs: int = SAMPLED_PAIRS) -> dict:
    """Check ``phi(g) phi(h) = phi(gh)`` on basis pairs.

    All pairs when exhaustive; otherwise every ``g`` against the generators,
    the identity and a seeded random set of ``h`` giving at least
    ``min_pairs`` pairs.  For each ``h`` the products with all ``g`` are
    formed at once on the transposed image matrix.
    """
    N = pG.order
    if exhaustive is None:
        exhaustive = N <= EXHAUSTIVE_LIMIT
    if exhaustive:
        hs = np.arange(N)
    else:
        rng = np.random.default_rng(seed)
        fixed = {0} | {pG.index(g) for g in pG.generators()}
        k = math.ceil(min_pairs / N)
        pool = np.setdiff1d(np.arange(N), sorted(fixed))
        hs = np.array(sorted(fixed | set(rng.choice(pool, size=min(k, len(pool)), replace=False).tolist())))
        log.info("sampled multiplicativity: seed %d, %d right factors, %d pairs", seed, len(hs), len(hs) * N)
    Mt = np.ascontiguousarray(images.T)
    TG = pG.table
    failures = []
    for h in hs:
        prod = np.zeros_like(Mt)
        for k in np.flatnonzero(images[h]):
            prod ^= Mt[kH.right_perm(int(k))]
        expect = Mt[:, TG[:, h]]
        bad = np.flatnonzero((prod != expect).any(axis=0))
        for g in bad[: max(0, 5 - len(failures))]:
            failures.append([_fmt(pG, g), _fmt(pG, h)])
        if len(bad) and len(failures) >= 5:
            break
    out = {
        "mode": "exhaustive" if exhaustive else "sampled",
        "pairs": int(len(hs) * N),
        "right_factors": int(len(hs)),
        "failures": failures,
        "ok": not failures,
    }
    if not exhaustive:
        out["seed"] = seed
    return out


def build_certificate(kG: GroupAlgebra, kH: GroupAlgebra, basis: GroupBasis, n: int, m: int,
                      exhaustive: bool | None = None, seed: int = 0) -> tuple[IsoCertificate, dict]:
    matrix = Gf2Matrix.from_bits(basis.images)
    cert = IsoCertificate(n, m, matrix)
    checks = _certificate_checks(matrix, kG.group, kH, exhaustive, seed)
    return cert, checks


def _certificate_checks(matrix: Gf2Matrix, pG: PcPresentation, kH: GroupAlgebra, exhaustive, seed) -> dict:
    images = matrix.to_bits()
    N = pG.order
    rank = matrix.rank()
    unit = np.zeros(N, dtype=bool)
    unit[0] = True
    mult = check_multiplicativity(images, pG, kH, exhaustive, seed)
    return {
        "rank": rank,
        "invertible": rank == N,
        "phi(1) = 1": bool(np.array_equal(images[0], unit)),
        "multiplicative": mult,
        "ok": rank == N and bool(np.array_equal(images[0], unit)) and mult["ok"],
    }


@dataclass
class CertificateCheck:
    ok: bool
    reasons: list[str]
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_certificate(cert: IsoCertificate | str, exhaustive: bool | None = None, seed: int = 0) -> CertificateCheck:
    """Re-check a certificate against freshly built algebras."""
    if isinstance(cert, str):
        try:
            cert = IsoCertificate.from_text(cert)
        except CertificateFormatError as exc:
            return CertificateCheck(False, [str(exc)])
    try:
        pG, pH = build_G(cert.n, cert.m), build_H(cert.n, cert.m)
    except PresentationError as exc:
        return CertificateCheck(False, [str(exc)])
    N = pG.order
    if cert.matrix.shape != (N, N) or pH.order != N:
        return CertificateCheck(False, [f"dimension error: matrix {cert.matrix.shape}, group order {N}"])
    checks = _certificate_checks(cert.matrix, pG, GroupAlgebra(pH), exhaustive, seed)
    reasons = []
    if not checks["invertible"]:
        reasons.append(f"not invertible: rank {checks['rank']} < {N}")
    if not checks["phi(1) = 1"]:
        reasons.append("identity not mapped to identity")
    if not checks["multiplicative"]["ok"]:
        reasons.append(f"not multiplicative on pairs {checks['multiplicative']['failures']}")
    return CertificateCheck(not reasons, reasons, checks)


# -- invariants --------------------------------------------------------------

def center_dimension(kG: GroupAlgebra) -> int:
    """``dim Z(kG)`` as the kernel of ``alpha -> (alpha g + g alpha)_g``.

    Independent of conjugacy classes: a plain rank computation.
    """
    N = kG.dim
    p = kG.group
    T = kG.table
    blocks = []
    for g in (p.index(s) for s in p.generators()):
        blk = np.zeros((N, N), dtype=bool)
        rows = np.arange(N)
        blk[rows, T[:, g]] ^= True
        blk[rows, T[g, :]] ^= True
        blocks.append(blk)
    K = np.hstack(blocks)
    return N - gf2.rref(K.T).dim


def algebra_invariant_fingerprint(kG: GroupAlgebra) -> dict:
    p = kG.group
    F = kG.filtration
    return {
        "order": p.order,
        "center_dim": center_dimension(kG),
        "class_count": len(kG.conjugacy_classes),
        "jennings": F.quotient_dims,
        "nilpotency_index": F.nilpotency_index,
        "frattini_quotient_order": p.order // frattini(p).order,
    }


def _fingerprint_key(fp: dict) -> dict:
    return {k: v for k, v in fp.items() if k != "class_count"}


# -- the full pipeline ---------------------------------------------------------

@dataclass
class Report:
    n: int
    m: int
    seed: int
    steps: list[ProofStep]
    exhaustive: bool | None = None

    @property
    def ok(self) -> bool:
        return all(s.verified for s in self.steps)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "schema": "mip-report/1",
            "n": self.n,
            "m": self.m,
            "order": 2 ** (self.n + self.m + 2),
            "seed": self.seed,
            "ok": self.ok,
            "failed": [s.name for s in self.steps if not s.verified],
            "steps": [s.to_dict(timings) for s in self.steps],
        }


def run_pipeline(n: int, m: int, seed: int = 0, exhaustive: bool | None = None, xt_literal: str | None = None,
                 yt_literal: str | None = None, pG: PcPresentation | None = None, pH: PcPresentation | None = None,
                 with_fingerprints: bool = True) -> tuple[Report, IsoCertificate | None]:
    """Run every step of the argument for G(n,m), H(n,m) and build the certificate."""
    proof = Proof()
    state: dict = {}
    pG = pG or build_G(n, m)
    pH = pH or build_H(n, m)
    expected = 2 ** (n + m + 2)

    def groups():
        w = {}
        ok = True
        for label, p in (("G", pG), ("H", pH)):
            cons, fails = consistency_check(p)
            n_elems = len(p.enumerate_elements())
            distinct = len(set(p.enumerate_elements()))
            closure = subgroup_closure(p.generators()[:2], p).order
            w[label] = {"consistent": cons, "failures": fails, "order": n_elems, "closure <g1, g2>": closure}
            ok &= cons and n_elems == distinct == closure == expected
        return ok, w

    proof.run("groups", f"G and H are consistent presentations of order 2^(n+m+2) = {expected}", groups)
    proof.run("structure", "G' = <z>, H' = <c>; C_G(G') = <z, x^2, xy>, C_H(H') = <c, a^2, b>, both abelian",
              lambda: verify_group_structure(pG, pH), ["groups"])

    def noniso():
        step = verify_nonisomorphism(n, m, pG, pH)
        return step.verified, step.witness

    proof.run("nonisomorphism", "exp C_G(G') = 2^n differs from exp C_H(H') = 2^(n-1)", noniso, ["groups"])

    def algebras():
        state["kG"] = GroupAlgebra(pG)
        state["kH"] = kH = GroupAlgebra(pH)
        from .parsing import parse_algebra_literal

        xt = parse_algebra_literal(xt_literal, kH) if xt_literal else None
        yt = parse_algebra_literal(yt_literal, kH) if yt_literal else None
        xt, yt, zt = build_tilde_generators(kH, xt, yt)
        state["tilde"] = (xt, yt, zt)
        w = {
            "xt": repr(xt),
            "yt": repr(yt),
            "support zt": int(len(zt.support())),
            "augmentations": [xt.augmentation(), yt.augmentation(), zt.augmentation()],
            "zt != 1": zt != kH.one,
        }
        return all(e.augmentation() == 1 for e in (xt, yt, zt)) and zt != kH.one, w

    proof.run("tilde_generators", "xt = a, yt = b(a+b+ab)c and zt = [yt, xt] are units of kH, zt != 1", algebras, ["groups"])
    if "kH" not in state:
        return Report(n, m, seed, proof.steps, exhaustive), None

    kG, kH = state["kG"], state["kH"]
    xt, yt, zt = state["tilde"]
    base = ["tilde_generators"]

    proof.run("jennings_quotient", "g -> (g+1) + I^2 induces H/Phi(H) = I/I^2", lambda: verify_jennings_quotient(kH), ["groups"])
    ident = verify_identities(kH, yt, n, m, proof=proof, requires=base)
    rels = verify_relations(kH, xt, yt, zt, n, m, proof=proof, requires=base)
    # keep the steps in the order the argument uses them
    order = [
        "groups", "structure", "nonisomorphism", "tilde_generators",
        "identity.C_in_I2", "jennings_quotient", "identity.ytilde_mod_I2", "identity.ring_generation",
        "relation.x_power", "relation.x_square_central", "relation.z_conj_x",
        "identity.ytilde_square", "relation.y_square_central", "relation.z_conj_y",
        "identity.ytilde_power", "relation.y_power", "relation.z_fourth_power",
    ]
    proof.steps.sort(key=lambda s: order.index(s.name))
    rel_names = [s.name for s in rels]

    def basis():
        gb = close_group_basis(kH, pG, xt, yt, zt)
        state["basis"] = gb
        w = {"|<xt, yt>|": gb.closure_order, "rank": gb.rank, "labels bijective": gb.labels_bijective}
        if gb.capped:
            w["reason"] = "closure exceeded |H|"
        return gb.closure_order == pH.order and gb.rank == pH.order and gb.labels_bijective, w

    proof.run("group_basis", "<xt, yt> has |H| elements and spans kH", basis, base + rel_names)

    def certificate():
        cert, checks = build_certificate(kG, kH, state["basis"], n, m, exhaustive, seed)
        state["cert"] = cert
        return checks["ok"], checks

    proof.run("certificate", "x^i y^j z^l -> xt^i yt^j zt^l extends to an algebra isomorphism kG -> kH",
              certificate, ["group_basis", "identity.ring_generation"])

    if with_fingerprints:
        def fingerprints():
            fG, fH = algebra_invariant_fingerprint(kG), algebra_invariant_fingerprint(kH)
            same = _fingerprint_key(fG) == _fingerprint_key(fH)
            match = fG["center_dim"] == fG["class_count"] and fH["center_dim"] == fH["class_count"]
            return same and match, {"G": fG, "H": fH}

        proof.run("fingerprints", "kG and kH share center dimension, Jennings sequence and nilpotency index",
                  fingerprints, ["groups"])

    return Report(n, m, seed, proof.steps, exhaustive), state.get("cert")
