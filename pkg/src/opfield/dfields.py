"""Computable operator fields: rational function fields with declared
operator actions on generators, evaluated through the algebra homomorphism
into the truncated algebra, plus the extension machinery for algebraic and
transcendental adjoints."""

from __future__ import annotations

from .commutation import GammaSystem
from .groebner import Ideal
from .local_algebra import DVector, LocalAlgebra
from .polynomials import Frac, FracDomain, Poly, PolyRing, parse_frac
from .scalars import FieldSpec, SpecError


class GammaFail(ValueError):
    """Declared generator action breaks the commutation identities."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"GAMMA_FAIL witness={witness}")


class NotSeparable(ValueError):
    pass


class NotExtendable(ValueError):
    pass


# ---------------------------------------------------------------------------
# generic evaluation of e-homomorphisms
# ---------------------------------------------------------------------------

def ehom_poly(alg: LocalAlgebra, poly: Poly, var_images: dict, coeff_image) -> DVector:
    """Image of a polynomial under the ring homomorphism determined by
    `var_images` (variable index -> DVector) and `coeff_image` on scalars."""
    acc = None
    for e, c in poly.terms.items():
        term = coeff_image(c)
        for i, d in enumerate(e):
            if d:
                term = term * var_images[i] ** d
        acc = term if acc is None else acc + term
    if acc is None:
        acc = coeff_image(poly.ring.domain.coerce(0))
    return acc


def ehom_frac(alg: LocalAlgebra, frac: Frac, var_images: dict, coeff_image) -> DVector:
    image = ehom_poly(alg, frac.num, var_images, coeff_image)
    if frac.den == frac.ring.one:
        return image
    return image * ehom_poly(alg, frac.den, var_images, coeff_image).invert()


# ---------------------------------------------------------------------------
# operator fields
# ---------------------------------------------------------------------------

class DField:
    """A rational function field carrying the declared operator action."""

    def __init__(self, spec: FieldSpec, gamma: GammaSystem, action: dict, check: bool = True):
        if spec.char != gamma.fieldspec.char:
            raise SpecError("field and commutation system characteristics differ")
        if spec.gens != gamma.fieldspec.gens:
            # the system may have been written over a bare field; re-anchor it
            if gamma.fieldspec.gens == ():
                gamma = GammaSystem(
                    gamma.d1,
                    gamma.d2,
                    {k: _relift(v, spec) for k, v in gamma.lie.items()},
                    {k: _relift(v, spec) for k, v in gamma.hs.items()},
                    spec,
                )
            else:
                raise SpecError("field and commutation system generators differ")
        self.spec = spec
        self.gamma = gamma
        self.ring = gamma.ring
        self.action: dict = {}
        for op in gamma.ops:
            per_gen = action.get(op, {}) if isinstance(action.get(op, {}), dict) else {}
            row = {}
            for g in spec.gens:
                v = per_gen.get(g, 0)
                if isinstance(v, str):
                    v = parse_frac(self.ring, v)
                row[g] = Frac.of(v, self.ring)
            self.action[op] = row
        for op in action:
            if op not in self.action:
                raise SpecError(f"action for unknown operator {op}")
        gamma.field = self
        self._gen_images: dict = {}
        if check:
            self.validate_gamma()

    @property
    def ops(self):
        return self.gamma.ops

    def gen(self, name: str) -> Frac:
        return Frac(self.ring.var(name), self.ring.one, normalize=False)

    def scalar(self, x) -> Frac:
        return Frac.of(x, self.ring)

    def _images(self, u: int) -> dict:
        cached = self._gen_images.get(u)
        if cached is not None:
            return cached
        alg = self.gamma.algebra(u)
        images = {}
        for idx, g in enumerate(self.spec.gens):
            coords = [self.gen(g)]
            for i in range(1, alg.m + 1):
                coords.append(self.action[(u, i)][g])
            images[idx] = DVector(alg, tuple(coords))
        self._gen_images[u] = images
        return images

    def _coeff_image(self, u: int):
        alg = self.gamma.algebra(u)
        zero = self.scalar(0)

        def embed(c):
            return DVector(alg, (Frac.of(c, self.ring),) + (zero,) * alg.m)

        return embed

    def e(self, u: int, x) -> DVector:
        """The full operator homomorphism into D_u(K)."""
        x = Frac.of(x, self.ring)
        return ehom_frac(self.gamma.algebra(u), x, self._images(u), self._coeff_image(u))

    def partial(self, op, x) -> Frac:
        u, i = op
        if i == 0:
            return Frac.of(x, self.ring)
        return self.e(u, x).coords[i]

    def partial_word(self, word, x) -> Frac:
        value = Frac.of(x, self.ring)
        for op in reversed(word):
            value = self.partial(op, value)
        return value

    def is_constant(self, x) -> bool:
        return all(not self.partial(op, x) for op in self.ops)

    def validate_gamma(self):
        """Commutation identities on every generator; sufficient for the field."""
        for g in self.spec.gens:
            gv = self.gen(g)
            firsts = {op: self.partial(op, gv) for op in self.ops}
            for i in self.ops:
                for j in self.ops:
                    chi = 0 if (i[0] == 2 and j[0] == 2) else 1
                    lhs = self.partial(i, firsts[j])
                    rhs = self.scalar(0) if not chi else self.partial(j, firsts[i])
                    for l in self.ops:
                        c = self.gamma.c(l, i, j)
                        if c:
                            rhs = rhs + c * firsts[l]
                    if lhs != rhs:
                        raise GammaFail((i, j, g))

    def extend_transcendental(self, name: str, values: dict) -> "DField":
        """Adjoin a fresh generator with the declared operator values."""
        new_spec = FieldSpec(self.spec.char, self.spec.gens + (name,))
        new_gamma = GammaSystem(
            self.gamma.d1,
            self.gamma.d2,
            {k: _relift(v, new_spec) for k, v in self.gamma.lie.items()},
            {k: _relift(v, new_spec) for k, v in self.gamma.hs.items()},
            new_spec,
        )
        new_ring = new_gamma.ring
        new_action: dict = {}
        for op in self.ops:
            row = {}
            for g in self.spec.gens:
                row[g] = _lift_frac(self.action[op][g], new_ring)
            v = values.get(op, 0)
            if isinstance(v, str):
                v = parse_frac(new_ring, v)
            row[name] = Frac.of(v, new_ring)
            new_action[op] = row
        return DField(new_spec, new_gamma, new_action)

    def adjunction_ring(self, name: str) -> PolyRing:
        """Univariate ring over this field, for presenting minimal polynomials."""
        return PolyRing((name,), FracDomain(self.ring))

    def __repr__(self):
        return f"DField(char={self.spec.char}, gens={list(self.spec.gens)})"


def _lift_frac(x: Frac, new_ring: PolyRing) -> Frac:
    return Frac(new_ring.lift(x.num), new_ring.lift(x.den))


def _relift(x: Frac, new_spec: FieldSpec) -> Frac:
    from .commutation import base_ring

    return _lift_frac(x, base_ring(new_spec))


def trivial_action(field_gens, ops) -> dict:
    return {op: {g: 0 for g in field_gens} for op in ops}


# ---------------------------------------------------------------------------
# adjoining roots and transcendentals
# ---------------------------------------------------------------------------

def _as_quotient_elem(aring: PolyRing, x) -> Frac:
    return Frac.of(x, aring)


def _reduce_mod(frac: Frac, ideal: Ideal) -> Frac:
    num = ideal.normal_form(frac.num)
    den = ideal.normal_form(frac.den)
    if not den:
        raise ZeroDivisionError("denominator lies in the modulus")
    return Frac(num, den)


def extend_separable(field: DField, name: str, f: Poly) -> dict:
    """Operator values at a separably algebraic adjoint.

    `f` is univariate in `name` over the field (build it in
    field.adjunction_ring(name)). Returns {op: value}, values reduced in
    K[name]/(f); raises NotSeparable when f'(root) vanishes there.
    """
    aring = f.ring
    if aring.nvars != 1 or aring.names[0] != name:
        raise SpecError("minimal polynomial must be univariate in the new name")
    if f.degree_in(0) < 1:
        raise SpecError("minimal polynomial must involve the new name")
    modulus = Ideal(aring, [f])
    fprime = f.deriv(0)
    if not modulus.normal_form(fprime):
        raise NotSeparable(f"derivative of {f} vanishes at the root")
    a = Frac(aring.var(0), aring.one, normalize=False)
    fprime_val = Frac(modulus.normal_form(fprime), aring.one)

    out: dict = {}
    for u in (1, 2):
        if u == 2 and field.gamma.d2 is None:
            continue
        alg = field.gamma.algebra(u)
        if alg.m == 0:
            continue

        def lift(base_frac: Frac) -> Frac:
            return Frac(aring.const(base_frac), aring.one)

        def embed_vec(vec: DVector) -> DVector:
            return DVector(alg, tuple(lift(c) for c in vec.coords))

        # e_u of the coefficients of f, degree by degree
        coeff_vecs = {}
        for (d,), c in f.terms.items():
            coeff_vecs[d] = embed_vec(field.e(u, c))

        zero = Frac.of(0, aring)
        solved = [a] + [zero] * alg.m

        def residual(partial_coords) -> DVector:
            b = DVector(alg, tuple(partial_coords))
            acc = None
            for d, cvec in coeff_vecs.items():
                term = cvec if d == 0 else cvec * b**d
                acc = term if acc is None else acc + term
            return acc

        for i in sorted(range(1, alg.m + 1), key=lambda k: (alg.sigma(k), k)):
            v0 = residual(solved).coords[i]
            y = _reduce_mod((-v0) / fprime_val, modulus) if v0 else zero
            solved[i] = y
        # exactness: every coordinate of f^e(e(a)) must vanish in the quotient
        for coord in residual(solved).coords:
            if modulus.normal_form(coord.num):
                raise AssertionError("triangular solve left a nonzero residual")
        for i in range(1, alg.m + 1):
            out[(u, i)] = solved[i]
    return out


def extend_inseparable_decide(field: DField, name: str, f: Poly) -> bool:
    """EXTENDABLE iff the inseparable minimal polynomial has constant coefficients."""
    if field.spec.char == 0:
        raise SpecError("inseparable extensions need positive characteristic")
    if f.deriv(0):
        raise SpecError("polynomial is separable; use extend_separable")
    for (d,), c in f.terms.items():
        base = c if isinstance(c, Frac) else Frac.of(c, field.ring)
        if not field.is_constant(base):
            return False
    return True
