"""Sparse multivariate polynomials and normalized fractions over exact scalars.

Coefficients live in a domain attached to the ring: Q, F_p, or the fraction
field of another polynomial ring (used for jet rings over a base function
field). All arithmetic is exact; there is no floating point anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .scalars import Fp, FieldSpec, SpecError, scalar_str


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrevLex:
    """Graded reverse lexicographic order."""

    def key(self, exp: tuple[int, ...]):
        return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class Lex:
    """Lexicographic order; `priority` lists variable indices, biggest first."""

    priority: tuple[int, ...]

    def key(self, exp: tuple[int, ...]):
        return tuple(exp[i] for i in self.priority)


GREVLEX = GrevLex()


def lex_order(ring: "PolyRing", priority=None) -> Lex:
    if priority is None:
        priority = tuple(range(len(ring.names) - 1, -1, -1))
    return Lex(tuple(priority))


# ---------------------------------------------------------------------------
# coefficient domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarDomain:
    """Q (char 0) or F_p (char p) coefficients."""

    char: int = 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else Fp(1, self.char)

    def coerce(self, x):
        return FieldSpec(self.char).scalar(x)

    def is_element(self, x):
        return isinstance(x, (Fraction, Fp)) or isinstance(x, int)

    def to_str(self, x):
        return scalar_str(x)


@dataclass(frozen=True)
class FracDomain:
    """Fraction-field coefficients over a base polynomial ring."""

    base: "PolyRing"

    @property
    def char(self):
        return self.base.domain.char

    @property
    def one(self):
        return Frac(self.base.one, self.base.one)

    def coerce(self, x):
        if isinstance(x, Frac):
            if x.ring is not self.base and x.ring != self.base:
                raise SpecError("fraction from a different base ring")
            return x
        if isinstance(x, Poly):
            return Frac(x, x.ring.one)
        return Frac(self.base.const(self.base.domain.coerce(x)), self.base.one)

    def is_element(self, x):
        return isinstance(x, (Frac, Poly, Fraction, Fp, int))

    def to_str(self, x):
        return f"({x})"


# ---------------------------------------------------------------------------
# rings and polynomials
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*(?:\[[0-9,;]*\])?")


class PolyRing:
    """Polynomial ring with a fixed ordered list of variable names."""

    __slots__ = ("names", "domain", "order", "_index")

    def __init__(self, names, domain=None, order=GREVLEX):
        self.names = tuple(names)
        self.domain = domain if domain is not None else ScalarDomain(0)
        self.order = order
        self._index = {n: i for i, n in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise SpecError("duplicate variable names in ring")

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.domain == other.domain
        )

    def __hash__(self):
        return hash((self.names, self.domain))

    def __repr__(self):
        dom = "Q" if isinstance(self.domain, ScalarDomain) and self.domain.char == 0 else str(self.domain)
        return f"PolyRing({list(self.names)}, {dom})"

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(self.domain.one)

    def const(self, c) -> "Poly":
        c = self.domain.coerce(c)
        if not c:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, i) -> "Poly":
        if isinstance(i, str):
            i = self._index[i]
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): self.domain.one})

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def extend(self, new_names) -> "PolyRing":
        return PolyRing(self.names + tuple(new_names), self.domain, self.order)

    def lift(self, p: "Poly") -> "Poly":
        """Re-interpret a polynomial from a ring whose variables are a prefix."""
        if p.ring.names == self.names:
            return Poly(self, p.terms)
        if p.ring.names != self.names[: len(p.ring.names)]:
            raise SpecError("ring is not an extension")
        pad = (0,) * (self.nvars - p.ring.nvars)
        return Poly(self, {e + pad: c for e, c in p.terms.items()})

    def from_string(self, text: str) -> "Poly":
        return parse_poly(self, text)


class Poly:
    """Immutable-by-convention sparse polynomial: exponent tuple -> coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    # -- basic structure ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, Fp)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.terms.items())))

    def is_const(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def const_value(self):
        zero_exp = (0,) * self.ring.nvars
        return self.terms.get(zero_exp, self.ring.domain.coerce(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=0)

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, d in enumerate(e):
                if d:
                    used.add(i)
        return used

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise SpecError("polynomials from different rings")
            return other
        if self.ring.domain.is_element(other):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e)
            s = c if s is None else s + c
            if s:
                res[e] = s
            elif e in res:
                del res[e]
        return Poly(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        res: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = res.get(e)
                s = c if s is None else s + c
                if s:
                    res[e] = s
                elif e in res:
                    del res[e]
        return Poly(self.ring, res)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c):
        c = self.ring.domain.coerce(c)
        if not c:
            return self.ring.zero
        return Poly(self.ring, {e: cc * c for e, cc in self.terms.items()})

    # -- leading data -------------------------------------------------------
    def lead(self, order=None):
        order = order or self.ring.order
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def lm(self, order=None):
        return self.lead(order)[0]

    def lc(self, order=None):
        return self.lead(order)[1]

    def monic(self, order=None) -> "Poly":
        if not self.terms:
            return self
        c = self.lc(order)
        one = self.ring.domain.one
        if c == one:
            return self
        return Poly(self.ring, {e: cc / c for e, cc in self.terms.items()})

    def deriv(self, i: int) -> "Poly":
        res: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            cc = c * e[i]
            s = res.get(ne)
            res[ne] = cc if s is None else s + cc
        return Poly(self.ring, res)

    def subst(self, values: dict):
        """Evaluate with variables mapped to values living in any common ring."""
        acc = None
        for e, c in self.terms.items():
            term = c
            for i, d in enumerate(e):
                if d:
                    term = term * values[i] ** d
            acc = term if acc is None else acc + term
        if acc is None:
            return self.ring.domain.coerce(0)
        return acc

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"Poly({poly_str(self)})"


def exact_div(f: Poly, g: Poly, order=GREVLEX) -> Poly | None:
    """f / g when the division is exact, else None."""
    if not g:
        raise ZeroDivisionError("exact_div by zero")
    if not f:
        return f.ring.zero
    quo: dict = {}
    rem = f
    ge, gc = g.lead(order)
    while rem:
        e, c = rem.lead(order)
        if any(a < b for a, b in zip(e, ge)):
            return None
        q = tuple(a - b for a, b in zip(e, ge))
        qc = c / gc
        quo[q] = qc
        rem = rem - Poly(f.ring, {q: qc}) * g
    return Poly(f.ring, quo)


# ---------------------------------------------------------------------------
# fractions
# ---------------------------------------------------------------------------

def _rat_content(p: Poly) -> Fraction:
    nums = [c.numerator for c in p.terms.values()]
    dens = [c.denominator for c in p.terms.values()]
    g = 0
    for n in nums:
        g = gcd(g, abs(n))
    l = 1
    for d in dens:
        l = l * d // gcd(l, d)
    return Fraction(g, l)


def _univar_gcd(a: Poly, b: Poly, i: int) -> Poly:
    # Euclid in one variable; coefficients form a field.
    order = lex_order(a.ring, priority=(i,) + tuple(j for j in range(a.ring.nvars) if j != i))
    while b:
        _, r = _univar_divmod(a, b, i, order)
        a, b = b, r
    return a.monic(order)


def _univar_divmod(a: Poly, b: Poly, i: int, order) -> tuple[Poly, Poly]:
    q = a.ring.zero
    r = a
    db = b.degree_in(i)
    be, bc = b.lead(order)
    while r and r.degree_in(i) >= db:
        re, rc = r.lead(order)
        shift = [0] * a.ring.nvars
        shift[i] = re[i] - be[i]
        t = Poly(a.ring, {tuple(shift): rc / bc})
        q = q + t
        r = r - t * b
    return q, r


class Frac:
    """Normalized fraction of polynomials from one ring."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, normalize: bool = True):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num.ring != den.ring:
            raise SpecError("fraction parts from different rings")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    @staticmethod
    def of(x, ring: PolyRing) -> "Frac":
        if isinstance(x, Frac):
            if x.ring != ring:
                raise SpecError("fraction from a different ring")
            return x
        if isinstance(x, Poly):
            return Frac(x, x.ring.one)
        return Frac(ring.const(x), ring.one)

    def _coerce(self, other):
        if isinstance(other, Frac):
            if other.ring != self.ring:
                raise SpecError("fractions from different rings")
            return other
        if isinstance(other, Poly):
            return Frac(other, other.ring.one)
        if isinstance(other, (int, Fraction, Fp)):
            return Frac(self.ring.const(other), self.ring.one)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Frac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return Frac(self.den, self.num) ** (-n)
        return Frac(self.num**n, self.den**n, normalize=False)

    def inv(self) -> "Frac":
        return Frac(self.den, self.num)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_poly(self) -> bool:
        return self.den.is_const()

    def as_poly(self) -> Poly:
        if self.den == self.den.ring.one:
            return self.num
        d = self.den.const_value()
        if not self.den.is_const():
            raise SpecError("fraction with non-constant denominator")
        return self.num.scale(self.den.ring.domain.one / d)

    def __str__(self):
        if self.den == self.ring.one:
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    def __repr__(self):
        return f"Frac({self})"


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    ring = num.ring
    if not num:
        return ring.zero, ring.one
    # cheap cancellations: exact division, then shared univariate gcd
    q = exact_div(num, den)
    if q is not None:
        num, den = q, ring.one
    else:
        nvars = num.variables() | den.variables()
        if len(nvars) == 1:
            i = next(iter(nvars))
            g = _univar_gcd(num, den, i)
            if g.degree_in(i) > 0:
                order = lex_order(ring, priority=(i,) + tuple(j for j in range(ring.nvars) if j != i))
                num, _ = _univar_divmod(num, g, i, order)
                den, _ = _univar_divmod(den, g, i, order)
    dom = ring.domain
    if isinstance(dom, ScalarDomain) and dom.char == 0:
        cn, cd = _rat_content(num), _rat_content(den)
        g = Fraction(gcd(cn.numerator, cd.numerator), (cn.denominator * cd.denominator) // gcd(cn.denominator, cd.denominator))
        lc = den.lc()
        sign = -1 if lc < 0 else 1
        scale = 1 / (g * sign)
        return num.scale(scale), den.scale(scale)
    # prime field or fraction coefficients: monic denominator
    lc = den.lc()
    one = dom.one
    if lc == one:
        return num, den
    return num.scale(one / lc), den.scale(one / lc)


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------

def _coeff_str(ring: PolyRing, c, lead=False) -> str:
    s = ring.domain.to_str(c)
    return s


def poly_str(p: Poly, order=None) -> str:
    if not p.terms:
        return "0"
    order = order or p.ring.order
    parts = []
    for e in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[e]
        factors = []
        for i, d in enumerate(e):
            if d == 1:
                factors.append(p.ring.names[i])
            elif d > 1:
                factors.append(f"{p.ring.names[i]}^{d}")
        mono = "*".join(factors)
        one = p.ring.domain.one
        if not mono:
            cs = _coeff_str(p.ring, c)
        elif c == one:
            cs = mono
        elif not isinstance(c, Fp) and c == -one:
            # prime-field coefficients stay in 0..p-1
            cs = f"-{mono}"
        else:
            cs = f"{_coeff_str(p.ring, c)}*{mono}"
        parts.append(cs)
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += " - " + part[1:]
        else:
            out += " + " + part
    return out


class ParseError(ValueError):
    """Bad polynomial text; carries an offset into the source string."""

    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*(?:\[[0-9,;]*\])?)|(?P<num>\d+)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        pos = m.end()
        if m.group("name"):
            tokens.append(("name", m.group("name"), m.start()))
        elif m.group("num"):
            tokens.append(("num", int(m.group("num")), m.start()))
        else:
            tokens.append(("op", m.group("op"), m.start()))
    tokens.append(("end", None, len(text)))
    return tokens


def parse_frac(ring: PolyRing, text: str, resolve=None) -> Frac:
    """Parse polynomial/fraction text into the fraction field of `ring`.

    `resolve` optionally maps an unknown name to a Poly or Frac (used for jet
    aliases); other names must be ring variables.
    """
    tokens = _tokenize(text)
    pos = 0
    one = Frac(ring.one, ring.one, normalize=False)

    def peek():
        return tokens[pos]

    def take():
        nonlocal pos
        t = tokens[pos]
        pos += 1
        return t

    def parse_expr():
        if peek()[:2] == ("op", "-"):
            take()
            acc = -parse_term()
        else:
            acc = parse_term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            t = parse_term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def parse_term():
        acc = parse_factor()
        while peek()[0] == "op" and peek()[1] in "*/":
            op = take()[1]
            f = parse_factor()
            if op == "*":
                acc = acc * f
            else:
                if not f:
                    raise ParseError("division by zero", peek()[2])
                acc = acc / f
        return acc

    def parse_factor():
        base = parse_base()
        if peek()[:2] == ("op", "^"):
            take()
            kind, val, p0 = take()
            if kind != "num":
                raise ParseError("exponent must be an integer", p0)
            return base**val
        return base

    def parse_base():
        kind, val, p0 = take()
        if kind == "num":
            return Frac(ring.const(val), ring.one)
        if kind == "name":
            if val in ring:
                return Frac(ring.var(val), ring.one, normalize=False)
            if resolve is not None:
                r = resolve(val)
                if r is not None:
                    return r if isinstance(r, Frac) else Frac(r, ring.one)
            raise ParseError(f"unknown name {val!r}", p0)
        if kind == "op" and val == "(":
            inner = parse_expr()
            k, v, p1 = take()
            if (k, v) != ("op", ")"):
                raise ParseError("expected ')'", p1)
            return inner
        raise ParseError("expected a term", p0)

    result = parse_expr()
    if peek()[0] != "end":
        raise ParseError("trailing input", peek()[2])
    return result


def parse_poly(ring: PolyRing, text: str, resolve=None) -> Poly:
    """Parse text that must denote a polynomial (constant denominators only)."""
    f = parse_frac(ring, text, resolve=resolve)
    if not f.den.is_const():
        raise ParseError("expected a polynomial, got a proper fraction")
    return f.num.scale(ring.domain.one / f.den.const_value())
