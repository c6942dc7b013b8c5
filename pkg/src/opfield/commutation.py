"""Commutation systems: coefficient tensors, their validators, and reductions.

A system pairs a Lie-side algebra D1 (bracket coefficients c_{1,l}^{ij}) with
an optional HS-side algebra D2 (iteration coefficients c_{2,l}^{ij}).
Validators report PASS/FAIL verdicts with the lexicographically smallest
violating index tuple as witness; they never raise on mathematical failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .local_algebra import LocalAlgebra, ext_alpha, null_set, tensor, tensor_basis_pairs, trivial_algebra, truncation_algebra
from .polynomials import Frac, PolyRing, ScalarDomain, parse_frac
from .scalars import FieldSpec, SpecError


@dataclass(frozen=True)
class Verdict:
    ok: bool
    code: str = ""
    witness: tuple | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "PASS"
        w = "" if self.witness is None else f" witness={self.witness}"
        return f"FAIL {self.code}{w}"


PASS = Verdict(True)


def base_ring(spec: FieldSpec) -> PolyRing:
    return PolyRing(spec.gens, ScalarDomain(spec.char))


class GammaSystem:
    """Coefficient tensors of a Lie/HS commutation system over a base field."""

    def __init__(self, d1: LocalAlgebra, d2: LocalAlgebra | None, lie: dict, hs: dict,
                 fieldspec: FieldSpec | None = None):
        self.d1 = d1
        self.d2 = d2
        self.fieldspec = fieldspec or FieldSpec(char=d1.field.char)
        if self.fieldspec.char != d1.field.char:
            raise SpecError("base field and D1 characteristics differ")
        if d2 is not None and d2.field.char != self.fieldspec.char:
            raise SpecError("base field and D2 characteristics differ")
        self.ring = base_ring(self.fieldspec)
        self.field = None  # back-reference, attached by the carrying operator field
        self.lie = {k: self._coeff(v) for k, v in lie.items() if self._coeff(v)}
        self.hs = {k: self._coeff(v) for k, v in hs.items() if self._coeff(v)}
        if self.hs and self.fieldspec.char == 0:
            raise SpecError("HS coefficients require positive characteristic")
        if self.hs and d2 is None:
            raise SpecError("HS coefficients without an HS-side algebra")
        nd1 = null_set(d1)
        for (i, j, l) in self.lie:
            if not (1 <= i <= d1.m and 1 <= j <= d1.m and 1 <= l <= d1.m):
                raise SpecError(f"Lie coefficient index {(i, j, l)} out of range")
            if i not in nd1 or j not in nd1:
                raise SpecError(
                    f"Lie coefficient c_{l}^{{{i}{j}}} outside the null of D1"
                )
        if d2 is not None:
            for (i, j, l) in self.hs:
                if not (1 <= i <= d2.m and 1 <= j <= d2.m and 1 <= l <= d2.m):
                    raise SpecError(f"HS coefficient index {(i, j, l)} out of range")

    def _coeff(self, v) -> Frac:
        if isinstance(v, str):
            return parse_frac(self.ring, v)
        return Frac.of(v, self.ring)

    @property
    def m1(self) -> int:
        return self.d1.m

    @property
    def m2(self) -> int:
        return self.d2.m if self.d2 is not None else 0

    @property
    def ops(self) -> list[tuple[int, int]]:
        """All operator indices, ascending in the index order."""
        return [(2, i) for i in range(1, self.m2 + 1)] + [(1, i) for i in range(1, self.m1 + 1)]

    def algebra(self, u: int) -> LocalAlgebra:
        if u == 1:
            return self.d1
        if self.d2 is None:
            raise SpecError("no HS-side algebra")
        return self.d2

    def zero(self) -> Frac:
        return Frac.of(0, self.ring)

    def c(self, l, i, j) -> Frac:
        """Mixed-type coefficient accessor: zero across types."""
        if i[0] != j[0] or i[0] != l[0]:
            return self.zero()
        table = self.lie if i[0] == 1 else self.hs
        return table.get((i[1], j[1], l[1]), self.zero())

    def alpha(self, i, p, q):
        """Mixed-type structure constants: zero across types."""
        if i[0] != p[0] or i[0] != q[0]:
            return self.fieldspec.zero
        return self.algebra(i[0]).alpha(i[1], p[1], q[1])

    def check_hom(self, which: int) -> Verdict:
        if which == 1:
            return hom_verdict(self.d1, self.lie, "lie", self.ring)
        if self.d2 is None:
            return PASS
        return hom_verdict(self.d2, self.hs, "hs", self.ring)

    def __repr__(self):
        return (
            f"GammaSystem(m1={self.m1}, m2={self.m2}, "
            f"lie={len(self.lie)} coeffs, hs={len(self.hs)} coeffs)"
        )


# ---------------------------------------------------------------------------
# tensor-square scratch arithmetic for the homomorphism check
# ---------------------------------------------------------------------------

def _tensor_mul(alg: LocalAlgebra, A: dict, B: dict, ring: PolyRing) -> dict:
    out: dict = {}
    for (a, b), ca in A.items():
        for (c, d), cb in B.items():
            coeff = ca * cb
            if not coeff:
                continue
            for i in range(alg.m + 1):
                f1 = ext_alpha(alg, i, a, c)
                if not f1:
                    continue
                for j in range(alg.m + 1):
                    f2 = ext_alpha(alg, j, b, d)
                    if not f2:
                        continue
                    add = coeff * f1 * f2
                    cur = out.get((i, j))
                    cur = add if cur is None else cur + add
                    if cur:
                        out[(i, j)] = cur
                    elif (i, j) in out:
                        del out[(i, j)]
    return out


def _tensor_image(alg: LocalAlgebra, coeffs: dict, kind: str, ring: PolyRing, l: int) -> dict:
    """r(e_l) as a dict (i, j) -> coefficient in the base field."""
    one = Frac.of(1, ring)
    if l == 0:
        return {(0, 0): one}
    img: dict = {}
    if kind == "lie":
        img[(0, l)] = one
        for (i, j, ll), c in coeffs.items():
            if ll == l and c:
                # the (j, i) tensor slot carries c_l^{ij}
                cur = img.get((j, i))
                img[(j, i)] = c if cur is None else cur + c
    else:
        img[(l, 0)] = one
        img[(0, l)] = img.get((0, l), Frac.of(0, ring)) + one
        for (i, j, ll), c in coeffs.items():
            if ll == l and c:
                cur = img.get((i, j))
                img[(i, j)] = c if cur is None else cur + c
    return {k: v for k, v in img.items() if v}


def hom_verdict(alg: LocalAlgebra, coeffs: dict, kind: str, ring: PolyRing) -> Verdict:
    """Does the coefficient table define a multiplicative map on the algebra?"""
    images = {l: _tensor_image(alg, coeffs, kind, ring, l) for l in range(alg.m + 1)}
    for p in range(1, alg.m + 1):
        for q in range(p, alg.m + 1):
            lhs = _tensor_mul(alg, images[p], images[q], ring)
            rhs: dict = {}
            for i in range(1, alg.m + 1):
                a = alg.alpha(i, p, q)
                if not a:
                    continue
                for key, c in images[i].items():
                    add = c * a
                    cur = rhs.get(key)
                    cur = add if cur is None else cur + add
                    if cur:
                        rhs[key] = cur
                    elif key in rhs:
                        del rhs[key]
            if lhs != rhs:
                return Verdict(False, "HOM_FAIL", (p, q))
    return PASS


# ---------------------------------------------------------------------------
# coefficient-identity validators
# ---------------------------------------------------------------------------

def _partial(gamma: GammaSystem, field, op, value: Frac) -> Frac:
    if field is None:
        if not (value.num.is_const() and value.den.is_const()):
            raise SpecError("non-constant coefficients need an operator field")
        return gamma.zero()
    return field.partial(op, value)


def check_jacobi(gamma: GammaSystem, field=None) -> Verdict:
    """Skew-symmetry, the corrected Jacobi identity, and the graded-derivative
    vanishing conditions for the Lie-side coefficients."""
    field = field if field is not None else gamma.field
    m = gamma.m1
    d1 = gamma.d1

    def c(i, j, l):
        return gamma.lie.get((i, j, l), gamma.zero())

    def dc(p, i, j, l):
        return _partial(gamma, field, (1, p), c(i, j, l))

    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for l in range(1, m + 1):
                # skew-symmetry with zero diagonal (the diagonal matters in char 2)
                if (i == j and c(i, i, l)) or c(i, j, l) + c(j, i, l):
                    return Verdict(False, "JACOBI_SKEW", (i, j, l))

    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                for r in range(1, m + 1):
                    lhs = gamma.zero()
                    for l in range(1, m + 1):
                        lhs = lhs + c(i, j, l) * c(l, k, r) + c(k, i, l) * c(l, j, r) + c(j, k, l) * c(l, i, r)
                    rhs = dc(i, j, k, r) + dc(k, i, j, r) + dc(j, k, i, r)
                    if lhs != rhs:
                        return Verdict(False, "JACOBI_IDENTITY", (i, j, k, r))

    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                for r in range(1, m + 1):
                    acc = gamma.zero()
                    for p in range(1, m + 1):
                        acc = (
                            acc
                            + d1.alpha(i, p, r) * dc(p, j, k, r)
                            + d1.alpha(k, p, r) * dc(p, i, j, r)
                            + d1.alpha(j, p, r) * dc(p, k, i, r)
                        )
                    if acc:
                        return Verdict(False, "JACOBI_DERIVATIVE", (i, j, k, r))
                    for q in range(1, r):
                        acc = gamma.zero()
                        for p in range(1, m + 1):
                            acc = (
                                acc
                                + d1.alpha(i, p, q) * dc(p, j, k, r)
                                + d1.alpha(k, p, q) * dc(p, i, j, r)
                                + d1.alpha(j, p, q) * dc(p, k, i, r)
                                + d1.alpha(i, p, r) * dc(p, j, k, q)
                                + d1.alpha(k, p, r) * dc(p, i, j, q)
                                + d1.alpha(j, p, r) * dc(p, k, i, q)
                            )
                        if acc:
                            return Verdict(False, "JACOBI_DERIVATIVE", (i, j, k, q, r))
    return PASS


def check_associative(gamma: GammaSystem, field=None) -> Verdict:
    """The HS-side coefficient identity (composition closes correctly)."""
    field = field if field is not None else gamma.field
    if gamma.d2 is None:
        return PASS
    m = gamma.m2
    d2 = gamma.d2

    def c(i, j, l):
        return gamma.hs.get((i, j, l), gamma.zero())

    for i in range(1, m + 1):
        for j in range(1, m + 1):
            for k in range(1, m + 1):
                for r in range(1, m + 1):
                    lhs = gamma.zero()
                    for l in range(1, m + 1):
                        term = c(i, j, l) * c(l, k, r) - c(j, k, l) * c(i, l, r)
                        for p in range(1, m + 1):
                            for q in range(1, m + 1):
                                a = d2.alpha(i, p, q)
                                if a:
                                    term = term - a * _partial(gamma, field, (2, p), c(j, k, l)) * c(q, l, r)
                        lhs = lhs + term
                    rhs = _partial(gamma, field, (2, i), c(j, k, r))
                    if lhs != rhs:
                        return Verdict(False, "ASSOC_IDENTITY", (i, j, k, r))
    return PASS


def check_cross(gamma: GammaSystem, field=None) -> Verdict:
    """Coefficients of one family must be constants for the other family."""
    field = field if field is not None else gamma.field
    for (i, j, l), c in gamma.lie.items():
        for k in range(1, gamma.m2 + 1):
            if _partial(gamma, field, (2, k), c):
                return Verdict(False, "CROSS_DERIVATIVE", (2, k, i, j, l))
    for (i, j, l), c in gamma.hs.items():
        for k in range(1, gamma.m1 + 1):
            if _partial(gamma, field, (1, k), c):
                return Verdict(False, "CROSS_DERIVATIVE", (1, k, i, j, l))
    return PASS


def check_jacobi_associative(gamma: GammaSystem, field=None) -> Verdict:
    for check in (check_jacobi, check_associative, check_cross):
        v = check(gamma, field)
        if not v:
            return v
    return PASS


def check_all(gamma: GammaSystem, field=None) -> Verdict:
    """Homomorphism checks plus the full coefficient-identity battery."""
    v = gamma.check_hom(1)
    if not v:
        return v
    v = gamma.check_hom(2)
    if not v:
        return v
    return check_jacobi_associative(gamma, field)


# ---------------------------------------------------------------------------
# stock systems and the tensor reduction
# ---------------------------------------------------------------------------

def iterative_hs_coeffs(p: int, n: int) -> GammaSystem:
    """The additive iteration rule on F_p[e]/(e^(p^n)): binomial coefficients."""
    if n < 1:
        raise SpecError("n must be positive")
    order = p**n
    alg = truncation_algebra(order, char=p)
    hs = {}
    for i in range(1, order):
        for j in range(1, order):
            if i + j <= order - 1:
                v = comb(i + j, i) % p
                if v:
                    hs[(i, j, i + j)] = v
    return GammaSystem(trivial_algebra(p), alg, {}, hs)


def _ext_c(alg: LocalAlgebra, coeffs: dict, ring: PolyRing, l: int, i: int, j: int) -> Frac:
    """HS coefficient table extended to index 0 rows and columns."""
    zero, one = Frac.of(0, ring), Frac.of(1, ring)
    if i == 0 and j == 0:
        return one if l == 0 else zero
    if i == 0:
        return one if l == j else zero
    if j == 0:
        return one if l == i else zero
    if l == 0:
        return zero
    c = coeffs.get((i, j, l))
    return c if c is not None else zero


def hs_tensor_reduce(systems) -> tuple[LocalAlgebra, dict]:
    """Fold HS systems into one on the tensor algebra, coefficients multiplying."""
    systems = list(systems)
    if not systems:
        raise SpecError("nothing to reduce")
    acc_alg, acc_coeffs = systems[0]
    ring = base_ring(FieldSpec(char=acc_alg.field.char))
    acc_coeffs = {k: Frac.of(v, ring) for k, v in acc_coeffs.items()}
    for alg, coeffs in systems[1:]:
        coeffs = {k: Frac.of(v, ring) for k, v in coeffs.items()}
        acc_alg, acc_coeffs = _reduce_pair(acc_alg, acc_coeffs, alg, coeffs, ring)
    return acc_alg, acc_coeffs


def _reduce_pair(a: LocalAlgebra, ca: dict, b: LocalAlgebra, cb: dict, ring: PolyRing):
    combined = tensor(a, b)
    pairs = tensor_basis_pairs(a, b)
    index = {ij: k + 1 for k, ij in enumerate(pairs)}
    index[(0, 0)] = 0
    out: dict = {}
    for (i1, i2) in pairs:
        for (j1, j2) in pairs:
            for (l1, l2) in pairs:
                c = _ext_c(a, ca, ring, l1, i1, j1) * _ext_c(b, cb, ring, l2, i2, j2)
                if c:
                    out[(index[(i1, i2)], index[(j1, j2)], index[(l1, l2)])] = c
    return combined, out


def hs_system(alg: LocalAlgebra, coeffs: dict) -> GammaSystem:
    """Wrap a bare HS pair as a full system with a trivial Lie side."""
    return GammaSystem(trivial_algebra(alg.field.char), alg, {}, coeffs)
