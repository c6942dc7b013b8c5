"""Finite-dimensional local algebras with ranked bases.

An algebra is described by its characteristic, the grades of the nilpotent
basis vectors e_1..e_m, and the structure constants alpha_i^{pq} giving the
coefficient of e_i in e_p * e_q (p, q >= 1). e_0 = 1 is the unit; the residue
map is projection to coordinate 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import FieldSpec, SpecError, scalar_str


class AlgebraError(ValueError):
    """Validation failure; `code` in {NOT_LOCAL, COMM_FAIL, ASSOC_FAIL, RANK_FAIL}."""

    def __init__(self, code: str, witness=None, detail: str = ""):
        self.code = code
        self.witness = witness
        msg = code if not detail else f"{code}: {detail}"
        if witness is not None:
            msg += f" witness={witness}"
        super().__init__(msg)


class NotUnit(ZeroDivisionError):
    """Inversion of an element with zero residue."""


class LocalAlgebra:
    """Validated local algebra; construct through `validate`."""

    __slots__ = ("field", "m", "grades", "table", "d", "_lookup")

    def __init__(self, field: FieldSpec, m: int, grades, table, d: int):
        self.field = field
        self.m = m
        self.grades = tuple(grades)
        self.table = tuple(table)  # ((p, q, i, coeff) ...) sparse, p <= q
        self.d = d
        self._lookup = {(p, q, i): c for (p, q, i, c) in self.table}

    def __eq__(self, other):
        if not isinstance(other, LocalAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.m == other.m
            and self.grades == other.grades
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.field, self.m, self.grades, self.table))

    def alpha(self, i: int, p: int, q: int):
        """Coefficient of e_i in e_p * e_q for 1 <= p,q <= m, 0 <= i <= m."""
        if p > q:
            p, q = q, p
        return self._lookup.get((p, q, i), self.field.zero)

    @property
    def dim(self) -> int:
        return self.m + 1

    def sigma(self, p: int) -> int:
        if p == 0:
            return 0
        return self.grades[p - 1]

    def basis_product(self, p: int, q: int) -> list:
        """Coordinates (length m+1) of e_p * e_q, any 0 <= p,q <= m."""
        zero, one = self.field.zero, self.field.one
        out = [zero] * (self.m + 1)
        if p == 0 and q == 0:
            out[0] = one
        elif p == 0:
            out[q] = one
        elif q == 0:
            out[p] = one
        else:
            for i in range(self.m + 1):
                c = self.alpha(i, p, q)
                if c:
                    out[i] = c
        return out

    def unit(self, one=None, zero=None) -> "DVector":
        one = self.field.one if one is None else one
        zero = self.field.zero if zero is None else zero
        return DVector(self, (one,) + (zero,) * self.m)

    def vector(self, coords) -> "DVector":
        return DVector(self, tuple(coords))

    def basis_vector(self, p: int) -> "DVector":
        return self.vector(_basis_vec(self, p))

    def __repr__(self):
        return f"LocalAlgebra(char={self.field.char}, dim={self.dim}, grades={list(self.grades)})"


def trivial_algebra(char: int = 0) -> LocalAlgebra:
    """The base field itself (m = 0)."""
    return LocalAlgebra(FieldSpec(char=char), 0, (), (), 0)


def derivation_algebra(m: int, char: int = 0) -> LocalAlgebra:
    """k[e_1..e_m]/(e_1..e_m)^2: rings over it carry m derivations."""
    return validate({"char": char, "dim": m + 1, "grades": [1] * m, "products": []})


def truncation_algebra(order: int, char: int = 0) -> LocalAlgebra:
    """k[e]/(e^order): rings over it carry an (order-1)-truncated HS derivation."""
    m = order - 1
    products = []
    for p in range(1, m + 1):
        for q in range(p, m + 1):
            if p + q <= m:
                products.append({"p": p, "q": q, "coeffs": {str(p + q): 1}})
    return validate(
        {"char": char, "dim": order, "grades": list(range(1, order)), "products": products}
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _row_reduce(rows):
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col]:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        r += 1
        if r == len(rows):
            break
    return [row for row in rows[:r] if any(row)]


def _span_dim(vectors) -> int:
    return len(_row_reduce(vectors))


def validate(spec: dict) -> LocalAlgebra:
    """Check a raw algebra description and return a LocalAlgebra.

    Raises AlgebraError with codes NOT_LOCAL / COMM_FAIL / ASSOC_FAIL /
    RANK_FAIL, or SpecError for shape problems.
    """
    char = spec.get("char", 0)
    fs = FieldSpec(char=char)
    dim = spec["dim"]
    if dim < 1:
        raise SpecError("dimension must be at least 1")
    m = dim - 1
    grades = tuple(spec.get("grades", ()))
    if len(grades) != m:
        raise SpecError(f"expected {m} grades, got {len(grades)}")
    if any(g < 1 for g in grades):
        raise SpecError("grades must be positive")
    if any(grades[i] > grades[i + 1] for i in range(m - 1)):
        raise SpecError("grades must be non-decreasing")

    raw: dict[tuple[int, int, int], object] = {}
    for entry in spec.get("products", ()):
        p, q = entry["p"], entry["q"]
        if not (1 <= p <= m and 1 <= q <= m):
            raise SpecError(f"product indices ({p},{q}) out of range")
        for i_str, lit in entry.get("coeffs", {}).items():
            i = int(i_str)
            if not (0 <= i <= m):
                raise SpecError(f"target index {i} out of range")
            c = fs.scalar(lit)
            if (p, q, i) in raw and raw[(p, q, i)] != c:
                raise SpecError(f"conflicting entries for product ({p},{q}) target {i}")
            raw[(p, q, i)] = c

    # commutativity: mirrored entries, when both given, must agree
    table: dict[tuple[int, int, int], object] = {}
    for (p, q, i), c in raw.items():
        mirror = raw.get((q, p, i))
        if mirror is not None and mirror != c:
            raise AlgebraError("COMM_FAIL", witness=(i, p, q))
        if c:
            table[(min(p, q), max(p, q), i)] = c

    alg = LocalAlgebra(
        fs, m, grades, tuple((p, q, i, c) for (p, q, i), c in sorted(table.items())), 0
    )

    # span of e_1..e_m must be an ideal: no unit component in products
    for p in range(1, m + 1):
        for q in range(p, m + 1):
            if alg.alpha(0, p, q):
                raise AlgebraError("NOT_LOCAL", witness=(p, q), detail="product has a unit component")

    # associativity over all basis triples
    for p in range(1, m + 1):
        for q in range(1, m + 1):
            for r in range(1, m + 1):
                left = _mul_coords(alg, alg.basis_product(p, q), _basis_vec(alg, r))
                right = _mul_coords(alg, _basis_vec(alg, p), alg.basis_product(q, r))
                if left != right:
                    raise AlgebraError("ASSOC_FAIL", witness=(p, q, r))

    # nilpotency of the maximal-ideal span, computed from the table alone
    filtration = _ideal_filtration(alg)
    if filtration[-1]:
        raise AlgebraError("NOT_LOCAL", detail=f"span of e_1..e_{m} is not nilpotent")

    # ranked-basis vanishing condition
    for p in range(1, m + 1):
        for q in range(p, m + 1):
            for i in range(1, m + 1):
                if alg.alpha(i, p, q) and alg.sigma(p) + alg.sigma(q) > alg.sigma(i):
                    raise AlgebraError("RANK_FAIL", witness=(i, p, q))

    d_actual = 0
    for j in range(1, m + 2):
        if filtration[j - 1]:
            d_actual = j

    # declared grades must reproduce the computed filtration
    for j in range(1, d_actual + 2):
        declared = [_basis_vec(alg, p)[1:] for p in range(1, m + 1) if alg.sigma(p) >= j]
        actual = filtration[j - 1] if j - 1 < len(filtration) else []
        dd, da = _span_dim(declared), _span_dim(actual)
        if not (dd == da == _span_dim(declared + actual)):
            raise AlgebraError(
                "RANK_FAIL",
                witness=("grade-filtration", j),
                detail="declared grades disagree with computed ideal powers",
            )
    if m > 0 and max(grades) != d_actual:
        raise AlgebraError(
            "RANK_FAIL",
            witness=("nilpotency-index", max(grades), d_actual),
            detail="largest grade disagrees with nilpotency index",
        )

    return LocalAlgebra(fs, m, grades, alg.table, d_actual)


def _basis_vec(alg: LocalAlgebra, p: int) -> list:
    out = [alg.field.zero] * (alg.m + 1)
    out[p] = alg.field.one
    return out


def _mul_coords(alg: LocalAlgebra, a: list, b: list) -> list:
    """Product of coordinate vectors with entries supporting + and *."""
    m = alg.m
    out = [a[0] * b[0]]
    for i in range(1, m + 1):
        acc = a[0] * b[i] + a[i] * b[0]
        for p in range(1, m + 1):
            if not a[p]:
                continue
            for q in range(1, m + 1):
                if not b[q]:
                    continue
                c = alg.alpha(i, p, q)
                if c:
                    acc = acc + c * (a[p] * b[q])
        out.append(acc)
    return out


def _ideal_filtration(alg: LocalAlgebra):
    """Powers of span(e_1..e_m) as row-reduced coordinate lists (coords 1..m)."""
    fs = alg.field
    current = [
        [fs.one if i == p else fs.zero for i in range(1, alg.m + 1)]
        for p in range(1, alg.m + 1)
    ]
    powers = [current]
    for _ in range(alg.m):
        nxt = []
        for vec in powers[-1]:
            full = [fs.zero] + list(vec)
            for q in range(1, alg.m + 1):
                prod = _mul_coords(alg, full, _basis_vec(alg, q))
                if any(prod[1:]):
                    nxt.append(prod[1:])
        reduced = _row_reduce(nxt)
        powers.append(reduced)
        if not reduced:
            break
    while len(powers) < alg.m + 1:
        powers.append([])
    return powers


# ---------------------------------------------------------------------------
# vectors over the algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DVector:
    """Element of D(R): coordinates over any commutative ring with +, *."""

    algebra: LocalAlgebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.m + 1:
            raise SpecError("coordinate arity mismatch")

    def _check(self, other):
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise SpecError("vectors from different algebras")

    def __add__(self, other: "DVector") -> "DVector":
        self._check(other)
        return DVector(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DVector") -> "DVector":
        self._check(other)
        return DVector(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, other: "DVector") -> "DVector":
        self._check(other)
        return DVector(
            self.algebra,
            tuple(_mul_coords(self.algebra, list(self.coords), list(other.coords))),
        )

    def scale(self, c) -> "DVector":
        return DVector(self.algebra, tuple(c * x for x in self.coords))

    def __pow__(self, n: int) -> "DVector":
        if n < 1:
            raise ValueError("power must be positive")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def residue(self):
        return self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def invert(self) -> "DVector":
        """Inverse via the nilpotent geometric series; residue must be a unit."""
        a0 = self.coords[0]
        if not a0:
            raise NotUnit("residue is zero")
        one = a0 / a0
        inv0 = one / a0
        zero = a0 - a0
        m = self.algebra.m
        n = DVector(self.algebra, (zero,) + tuple(-(x * inv0) for x in self.coords[1:]))
        unit = DVector(self.algebra, (one,) + (zero,) * m)
        acc = unit
        power = unit
        for _ in range(self.algebra.d):
            power = power * n
            acc = acc + power
        return acc.scale(inv0)


# ---------------------------------------------------------------------------
# derived structure
# ---------------------------------------------------------------------------

def null_set(alg: LocalAlgebra) -> set[int]:
    """Indices q >= 1 with e_q * m = 0."""
    return {
        q
        for q in range(1, alg.m + 1)
        if all(
            not alg.alpha(i, p, q)
            for i in range(alg.m + 1)
            for p in range(1, alg.m + 1)
        )
    }


def support(alg: LocalAlgebra, i: int) -> set[int]:
    """Union of the iterated one-step supports of index i."""
    if not (1 <= i <= alg.m):
        raise SpecError(f"index {i} out of range")

    def one_step(j):
        return {
            q
            for q in range(1, alg.m + 1)
            if any(alg.alpha(j, p, q) for p in range(1, alg.m + 1))
        }

    level = one_step(i)
    out = set(level)
    for _ in range(alg.sigma(i)):
        level = {q2 for q in level for q2 in one_step(q)}
        if not level:
            break
        out |= level
    return out


def frobenius_assumption(*algebras) -> tuple[bool, tuple | None]:
    """PASS iff char 0, dim of the first algebra is 1, or m_u lies in ker(Fr_u) for all u.

    Returns (True, None) or (False, (which_algebra, basis_index)).
    """
    algebras = tuple(a for a in algebras if a is not None)
    if not algebras:
        return True, None
    char = algebras[0].field.char
    if any(a.field.char != char for a in algebras):
        raise SpecError("mixed characteristics")
    if char == 0 or algebras[0].m == 0:
        return True, None
    for u, alg in enumerate(algebras, start=1):
        for q in range(1, alg.m + 1):
            power = alg.basis_vector(q) ** char
            if not power.is_zero():
                return False, (u, q)
    return True, None


def tensor_basis_pairs(a: LocalAlgebra, b: LocalAlgebra) -> list[tuple[int, int]]:
    """The (i, j) pair carried by each tensor basis index 1..(dim-1), in order."""
    pairs = [(i, j) for i in range(a.m + 1) for j in range(b.m + 1) if (i, j) != (0, 0)]
    pairs.sort(key=lambda ij: (a.sigma(ij[0]) + b.sigma(ij[1]), ij))
    return pairs


def ext_alpha(alg: LocalAlgebra, i: int, p: int, q: int):
    """Structure constants extended to the unit row/column (index 0)."""
    fs = alg.field
    if p == 0 and q == 0:
        return fs.one if i == 0 else fs.zero
    if p == 0:
        return fs.one if i == q else fs.zero
    if q == 0:
        return fs.one if i == p else fs.zero
    if i == 0:
        return fs.zero
    return alg.alpha(i, p, q)


def tensor(a: LocalAlgebra, b: LocalAlgebra) -> LocalAlgebra:
    """Tensor product with grade-lex ordered basis e_{1,i} (x) e_{2,j}."""
    if a.field != b.field:
        raise SpecError("tensor factors over different base fields")
    fs = a.field
    pairs = tensor_basis_pairs(a, b)
    index = {ij: k + 1 for k, ij in enumerate(pairs)}
    index[(0, 0)] = 0

    products = []
    for (p1, p2) in pairs:
        for (q1, q2) in pairs:
            if index[(p1, p2)] > index[(q1, q2)]:
                continue
            coeffs = {}
            for i1 in range(a.m + 1):
                c1 = ext_alpha(a, i1, p1, q1)
                if not c1:
                    continue
                for i2 in range(b.m + 1):
                    c2 = ext_alpha(b, i2, p2, q2)
                    if not c2:
                        continue
                    c = c1 * c2
                    if c and (i1, i2) != (0, 0):
                        coeffs[str(index[(i1, i2)])] = scalar_str(c)
            if coeffs:
                products.append({"p": index[(p1, p2)], "q": index[(q1, q2)], "coeffs": coeffs})

    return validate(
        {
            "char": fs.char,
            "dim": (a.m + 1) * (b.m + 1),
            "grades": [a.sigma(i) + b.sigma(j) for (i, j) in pairs],
            "products": products,
        }
    )
