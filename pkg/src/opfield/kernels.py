"""Kernels: truncated operator-field extensions presented by jet relations.

A kernel of length r in n variables over an operator field K is the
polynomial data of a field tower K(jets of order <= r) together with the
partially defined operator action d_i(x^xi) = x^(i,xi). Relations live in
K[jets]; non-normal jets are always rewritten through the reorder identity,
so the presentation uses normalized jet variables only. Leader detection,
generic prolongation, the realisation criterion, realisation itself, and
point checks all operate on this presentation with exact arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .commutation import Verdict
from .dfields import DField, ehom_poly
from .free_module import FreeCalculus
from .groebner import Ideal, Lex, normal_form_list
from .indices import Word, chi, dickson_minimize, normal_words, op_key, rho, tri_key
from .local_algebra import DVector, frobenius_assumption
from .polynomials import Frac, FracDomain, Poly, PolyRing, parse_frac
from .scalars import SpecError


class KernelError(ValueError):
    def __init__(self, code: str, detail: str = "", witness=None):
        self.code = code
        self.witness = witness
        msg = code if not detail else f"{code}: {detail}"
        if witness is not None:
            msg += f" witness={witness}"
        super().__init__(msg)


def jet_name(t: int, word: Word) -> str:
    inner = ";".join(f"{u},{i}" for (u, i) in word)
    return f"x{t}_[{inner}]"


_JET_RE = re.compile(r"^x(\d+)_\[([0-9,;]*)\]$")


def parse_jet_name(name: str) -> tuple[int, Word] | None:
    m = _JET_RE.match(name)
    if not m:
        return None
    t = int(m.group(1))
    inner = m.group(2)
    word = []
    if inner:
        for part in inner.split(";"):
            u, i = part.split(",")
            word.append((int(u), int(i)))
    return t, tuple(word)


@dataclass
class LeaderInfo:
    word: Word
    t: int
    status: str  # FREE | SEPARABLE | INSEPARABLE
    witness: Poly | None = None

    @property
    def is_leader(self) -> bool:
        return self.status != "FREE"


@dataclass
class LeaderReport:
    entries: list[LeaderInfo]
    minimal_separable: list[tuple[Word, int]]
    inseparable: list[tuple[Word, int]]
    separable: bool

    def info(self, word: Word, t: int) -> LeaderInfo:
        for e in self.entries:
            if e.word == word and e.t == t:
                return e
        raise KeyError((word, t))

    def leaders(self) -> list[tuple[Word, int]]:
        return [(e.word, e.t) for e in self.entries if e.is_leader]

    def separable_leaders(self) -> list[tuple[Word, int]]:
        return [(e.word, e.t) for e in self.entries if e.status == "SEPARABLE"]


class Kernel:
    def __init__(self, field: DField, n: int, r: int, relations=(), check: bool = True):
        if n < 1 or r < 0:
            raise SpecError("need n >= 1 and r >= 0")
        self.field = field
        self.gamma = field.gamma
        self.n = n
        self.r = r
        self.fc = FreeCalculus(self.gamma, field)
        self.jets: list[tuple[Word, int]] = []
        for level in range(r + 1):
            for t in range(1, n + 1):
                for w in normal_words(self.gamma.m1, self.gamma.m2, level):
                    self.jets.append((w, t))
        names = [jet_name(t, w) for (w, t) in self.jets]
        self.ring = PolyRing(tuple(names), FracDomain(field.ring))
        self.position = {jt: k for k, jt in enumerate(self.jets)}
        rels = []
        for rel in relations:
            if isinstance(rel, str):
                rel = self.parse_relation(rel)
            elif rel.ring != self.ring:
                rel = self.ring.lift(rel)
            if rel:
                rels.append(rel)
        self.ideal = Ideal(self.ring, rels)
        self._leader_report: LeaderReport | None = None
        self._image_cache: dict = {}
        self.claim_routes_checked = 0
        if check:
            self.validate()

    # -- presentation ---------------------------------------------------------
    def jet_var(self, t: int, word: Word) -> Frac:
        idx = self.position[(tuple(word), t)]
        return Frac(self.ring.var(idx), self.ring.one, normalize=False)

    def lift_coeff(self, c) -> Frac:
        """Base-field element as a kernel-ring constant."""
        return Frac(self.ring.const(c), self.ring.one, normalize=False)

    def subst_free(self, t: int, vec) -> Frac:
        """Evaluate a free-module vector at the t-th jet family."""
        acc = Frac.of(0, self.ring)
        for word, c in vec.items():
            acc = acc + self.lift_coeff(c) * self.jet_var(t, word)
        return acc

    def jet_value(self, t: int, word: Word) -> Frac:
        """x^word rewritten through the reorder identity; word may be non-normal."""
        word = tuple(word)
        if len(word) > self.r:
            raise KernelError("ORDER", f"jet {jet_name(t, word)} beyond length {self.r}")
        if (word, t) in self.position:
            return self.jet_var(t, word)
        value = self.subst_free(t, self.fc.ell(word))
        if chi(word):
            value = value + self.jet_var(t, rho(word))
        return value

    def parse_relation(self, text: str) -> Poly:
        def resolve(name):
            parsed = parse_jet_name(name)
            if parsed is None:
                if name in self.field.ring:
                    return Frac(self.ring.const(self.field.gen(name)), self.ring.one)
                return None
            t, word = parsed
            if not (1 <= t <= self.n):
                raise SpecError(f"jet family {t} out of range")
            return self.jet_value(t, word)

        f = parse_frac(self.ring, text, resolve=resolve)
        return f.num  # denominators are units in the kernel field

    # -- operator action ------------------------------------------------------
    def _images(self, u: int, target_ring: PolyRing | None = None) -> dict:
        ring = target_ring or self.ring
        alg = self.gamma.algebra(u)
        images = {}
        for idx, (word, t) in enumerate(self.jets):
            if len(word) >= self.r:
                continue  # top-order jets have no image inside this kernel
            coords = [Frac(ring.var(idx), ring.one, normalize=False)]
            for i in range(1, alg.m + 1):
                v = self.jet_value(t, ((u, i),) + word)
                coords.append(Frac(ring.lift(v.num), ring.lift(v.den)))
            images[idx] = DVector(alg, tuple(coords))
        return images

    def _coeff_image(self, u: int, target_ring: PolyRing | None = None):
        ring = target_ring or self.ring
        alg = self.gamma.algebra(u)

        def embed(c):
            vec = self.field.e(u, c)
            return DVector(
                alg, tuple(Frac(ring.const(x), ring.one, normalize=False) for x in vec.coords)
            )

        return embed

    def e(self, u: int, x: Frac) -> DVector:
        images = self._image_cache.get(u)
        if images is None:
            images = self._images(u)
            self._image_cache[u] = images
        alg = self.gamma.algebra(u)
        embed = self._coeff_image(u)
        num = ehom_poly(alg, x.num, images, embed)
        if x.den == self.ring.one:
            return num
        return num * ehom_poly(alg, x.den, images, embed).invert()

    def partial(self, op, x: Frac) -> Frac:
        u, i = op
        return self.e(u, x).coords[i]

    # -- validation -----------------------------------------------------------
    def lower_order_basis(self, order_bound: int) -> list[Poly]:
        """Lex-basis elements supported on jets of order <= order_bound."""
        basis = self.ideal.groebner(self._lex_order())
        cutoff = [k for k, (w, t) in enumerate(self.jets) if len(w) <= order_bound]
        allowed = set(cutoff)
        return [g for g in basis if g.variables() <= allowed]

    def _lex_order(self) -> Lex:
        return Lex(tuple(range(self.ring.nvars - 1, -1, -1)))

    def validate(self):
        """The operator action must send relations among lower jets into the ideal."""
        if self.r < 1:
            return
        for g in self.lower_order_basis(self.r - 1):
            for op in self.gamma.ops:
                image = self.partial(op, Frac(g, self.ring.one))
                if self.ideal.normal_form(image.num):
                    raise KernelError(
                        "GAMMA_FAIL",
                        "relations are not closed under the operators",
                        witness=(op, str(g)),
                    )

    # -- leaders ----------------------------------------------------------------
    def leaders(self) -> LeaderReport:
        if self._leader_report is not None:
            return self._leader_report
        basis = self.ideal.groebner(self._lex_order())
        entries = []
        for idx, (word, t) in enumerate(self.jets):
            allowed = set(range(idx + 1))
            candidates = [
                g for g in basis if g.variables() <= allowed and g.degree_in(idx) > 0
            ]
            info = LeaderInfo(word, t, "FREE")
            if candidates:
                candidates.sort(key=lambda g: g.degree_in(idx))
                chosen = None
                for g in candidates:
                    lc = self._leading_v_coeff(g, idx)
                    if not self.ideal.contains(lc):
                        chosen = g
                        break
                if chosen is None:
                    chosen = candidates[0]  # relation ideal was not prime
                dv = chosen.deriv(idx)
                status = "INSEPARABLE" if self.ideal.contains(dv) else "SEPARABLE"
                info = LeaderInfo(word, t, status, chosen)
            entries.append(info)
        seps = [(e.word, e.t) for e in entries if e.status == "SEPARABLE"]
        insep = [(e.word, e.t) for e in entries if e.status == "INSEPARABLE"]
        minimal = dickson_minimize(seps, self.gamma.m1, self.gamma.m2)
        separable = all(len(w) < self.r for (w, t) in insep)
        self._leader_report = LeaderReport(entries, minimal, insep, separable)
        return self._leader_report

    def _leading_v_coeff(self, g: Poly, v: int) -> Poly:
        d = g.degree_in(v)
        terms = {}
        for e, c in g.terms.items():
            if e[v] == d:
                ne = list(e)
                ne[v] = 0
                terms[tuple(ne)] = c
        return Poly(self.ring, terms)

    # -- prolongation -----------------------------------------------------------
    def prolong(self, check_claims: bool = True) -> "Kernel":
        s = self.r
        char = self.field.spec.char
        if char > 0:
            ok, wit = frobenius_assumption(self.gamma.d1, self.gamma.d2)
            if not ok:
                raise KernelError("FROBENIUS_FAIL", witness=wit)
        report = self.leaders()
        for (w, t) in report.inseparable:
            if len(w) == s:
                raise KernelError("INSEPARABLE_KERNEL", witness=(jet_name(t, w),))

        new = Kernel(self.field, self.n, s + 1, (), check=False)
        ring = new.ring
        old_gb = [ring.lift(g) for g in self.ideal.groebner()]
        order = self.ring.order

        def zero_mod_old(x: Frac) -> bool:
            return not normal_form_list(x.num, old_gb, order)

        # operator images over the extended ring, filled level by level
        images = {1: {}, 2: {}}
        algs = {}
        for u in (1, 2):
            if u == 2 and self.gamma.d2 is None:
                continue
            algs[u] = self.gamma.algebra(u)
            if u == 1 and algs[u].m == 0:
                continue
            base = self._images(u, target_ring=ring)
            images[u].update(base)
        # base images cover jets of order <= s-1; now the top level
        solved: dict[tuple[Word, int], dict] = {}
        for idx, (tau, t) in enumerate(self.jets):
            if len(tau) != s:
                continue
            info = report.info(tau, t)
            per_op: dict = {}
            if info.is_leader:
                per_op = self._solve_leader(new, images, idx, info)
            else:
                for op in self.gamma.ops:
                    word = (op,) + tau
                    val = new.subst_free(t, self.fc.ell(word))
                    if chi(word):
                        val = val + new.jet_var(t, rho(word))
                    per_op[op] = val
            solved[(tau, t)] = per_op
            for u in (1, 2):
                if u not in algs:
                    continue
                alg = algs[u]
                coords = [Frac(ring.var(idx), ring.one, normalize=False)]
                for i in range(1, alg.m + 1):
                    coords.append(per_op[(u, i)])
                images[u][idx] = DVector(alg, tuple(coords))

        # consistency of forced values, then the specialisation relations
        new_rels: list[Poly] = []
        routes_checked = 0
        if check_claims:
            for (tau, t), per_op in solved.items():
                if not report.info(tau, t).is_leader:
                    continue
                for op in self.gamma.ops:
                    if chi((op,) + tau) == 0:
                        expect = new.subst_free(t, self.fc.ell((op,) + tau))
                        if not zero_mod_old(per_op[op] - expect):
                            raise KernelError(
                                "GAMMA_FAIL",
                                "collapsed derivative disagrees with its correction term",
                                witness=(op, jet_name(t, tau)),
                            )

        for t in range(1, self.n + 1):
            for mu in normal_words(self.gamma.m1, self.gamma.m2, s + 1):
                routes = []
                seen_ops = set()
                for k in range(len(mu)):
                    op = mu[k]
                    if op in seen_ops:
                        continue
                    seen_ops.add(op)
                    tau = mu[:k] + mu[k + 1 :]
                    if (tau, t) not in solved:
                        continue
                    if not report.info(tau, t).is_leader:
                        continue
                    routes.append((op, tau))
                if not routes:
                    continue
                routes.sort(key=lambda rt: (tri_key(rt[1], t, self.gamma.m1, self.gamma.m2), op_key(rt[0])))
                values = []
                for op, tau in routes:
                    v = solved[(tau, t)][op] - new.subst_free(t, self.fc.ell((op,) + tau))
                    values.append(v)
                if check_claims:
                    for other in values[1:]:
                        if not zero_mod_old(values[0] - other):
                            raise KernelError(
                                "GAMMA_FAIL",
                                "two derivative routes disagree",
                                witness=(jet_name(t, mu),),
                            )
                    routes_checked += len(values) - 1
                value = values[0]
                rel = new.jet_var(t, mu).num * value.den - value.num
                if rel:
                    new_rels.append(rel)

        gens = [ring.lift(g) for g in self.ideal.gens] + new_rels
        out = Kernel(self.field, self.n, s + 1, gens, check=False)
        out.claim_routes_checked = routes_checked
        return out

    def _solve_leader(self, new: "Kernel", images: dict, idx: int, info: LeaderInfo) -> dict:
        """Unique derivative values at a separable leader, grade by grade."""
        ring = new.ring
        f = ring.lift(info.witness)
        fprime = Frac(ring.lift(info.witness.deriv(idx)), ring.one)
        per_op: dict = {}
        for u in (1, 2):
            if u == 2 and self.gamma.d2 is None:
                continue
            alg = self.gamma.algebra(u)
            if alg.m == 0:
                continue
            embed = self._coeff_image(u, target_ring=ring)
            zero = Frac.of(0, ring)
            coords = [Frac(ring.var(idx), ring.one, normalize=False)] + [zero] * alg.m

            def residual():
                var_images = dict(images[u])
                var_images[idx] = DVector(alg, tuple(coords))
                return ehom_poly(alg, f, var_images, embed)

            for i in sorted(range(1, alg.m + 1), key=lambda k: (alg.sigma(k), k)):
                v0 = residual().coords[i]
                coords[i] = (-v0) / fprime if v0 else zero
                per_op[(u, i)] = coords[i]
        return per_op

    # -- derived kernels ----------------------------------------------------------
    def truncate(self, k: int) -> "Kernel":
        if k > self.r:
            raise SpecError("cannot truncate upward")
        if k == self.r:
            return self
        rels = self.lower_order_basis(k)
        out = Kernel(self.field, self.n, k, [], check=False)
        out.ideal = Ideal(out.ring, [_retarget(g, out.ring) for g in rels])
        return out

    def relation_strings(self) -> list[str]:
        return [str(g) for g in self.ideal.groebner()]

    def triangular_relations(self) -> list[str]:
        """Reduced basis for the elimination order (solved forms where possible)."""
        return [str(g) for g in self.ideal.groebner(self._lex_order())]

    # -- diagnostics ------------------------------------------------------------
    def in_radical(self, f: Poly) -> bool:
        """Radical membership via the auxiliary-variable localization trick."""
        if self.ideal.contains(f):
            return True
        ext = self.ring.extend(("__rad__",))
        y = ext.var(ext.nvars - 1)
        gens = [ext.lift(g) for g in self.ideal.gens]
        gens.append(ext.one - y * ext.lift(f))
        basis = Ideal(ext, gens).groebner()
        return len(basis) == 1 and basis[0].is_const()

    def radical_diagnostic(self) -> list[str]:
        """Primality is assumed, never verified; this spot-check flags leader
        classifications whose crucial non-membership fails radically."""
        warnings = []
        for info in self.leaders().entries:
            if not info.is_leader:
                continue
            idx = self.position[(info.word, info.t)]
            for label, poly in (
                ("leading-coefficient", self._leading_v_coeff(info.witness, idx)),
                ("separant", info.witness.deriv(idx)),
            ):
                if poly and not self.ideal.contains(poly) and self.in_radical(poly):
                    warnings.append(
                        f"{jet_name(info.t, info.word)}: {label} lies in the radical "
                        "but not the ideal; the presentation is not prime"
                    )
        return warnings

    def __repr__(self):
        return f"Kernel(n={self.n}, r={self.r}, relations={len(self.ideal.gens)})"


def _retarget(g: Poly, dst: PolyRing) -> Poly:
    """Restrict a polynomial to a prefix ring (its support must fit)."""
    width = dst.nvars
    terms = {}
    for e, c in g.terms.items():
        if any(e[width:]):
            raise SpecError("polynomial does not fit the smaller ring")
        terms[e[:width]] = c
    return Poly(dst, terms)


# ---------------------------------------------------------------------------
# realisation
# ---------------------------------------------------------------------------

def realisation_criterion(kernel: Kernel, r: int) -> Verdict:
    """Can this length-2r kernel be realised without new leaders?"""
    if kernel.r != 2 * r:
        raise SpecError(f"criterion needs a kernel of length {2 * r}, got {kernel.r}")
    report = kernel.leaders()
    if not report.separable:
        top = [w for w in report.inseparable if len(w[0]) == kernel.r]
        return Verdict(False, "INSEPARABLE_KERNEL", tuple(top[:1]))
    gamma = kernel.gamma
    if gamma.m1 == 0 or (gamma.m1 + gamma.m2) <= 1:
        # one operator never branches; a pure HS family has no jets above order 1
        return Verdict(True)
    low = set(kernel.truncate(r).leaders().minimal_separable)
    high = set(report.minimal_separable)
    if low == high:
        return Verdict(True)
    offending = sorted(
        high.symmetric_difference(low),
        key=lambda wt: tri_key(wt[0], wt[1], gamma.m1, gamma.m2),
    )
    return Verdict(False, "NEW_MINIMAL_LEADER", (jet_name(offending[0][1], offending[0][0]),))


def realize(kernel: Kernel, r: int, order: int) -> Kernel:
    """Iterated generic prolongation up to the target order."""
    verdict = realisation_criterion(kernel, r)
    if not verdict:
        raise KernelError("CRITERION_FAIL", str(verdict))
    if order < kernel.r:
        raise SpecError("target order below the kernel length")
    current = kernel
    base_min = set(kernel.leaders().minimal_separable)
    base_insep = set(kernel.leaders().inseparable)
    while current.r < order:
        nxt = current.prolong()
        nxt_report = nxt.leaders()
        if set(nxt_report.minimal_separable) != base_min or set(nxt_report.inseparable) != base_insep:
            raise KernelError(
                "GAMMA_FAIL",
                "prolongation changed the minimal leader structure",
            )
        current = nxt
    return current


def specialize_check(kernel: Kernel, values) -> Verdict:
    """Does substituting jets by derivatives of the given points kill every relation?"""
    values = list(values)
    if len(values) != kernel.n:
        raise SpecError(f"expected {kernel.n} values")
    K = kernel.field
    values = [
        parse_frac(K.ring, v) if isinstance(v, str) else Frac.of(v, K.ring)
        for v in values
    ]
    table = {}
    for idx, (word, t) in enumerate(kernel.jets):
        table[idx] = K.partial_word(word, values[t - 1])
    for g in kernel.ideal.gens:
        acc = None
        for e, c in g.terms.items():
            term = Frac.of(c, K.ring)
            for i, d in enumerate(e):
                if d:
                    term = term * table[i] ** d
            acc = term if acc is None else acc + term
        if acc:
            return Verdict(False, "POINT_REJECTED", (str(g),))
    return Verdict(True)


def isomorphic(a: Kernel, b: Kernel) -> bool:
    """Equality of relation ideals under the canonical jet identification."""
    if a.field.spec != b.field.spec or a.n != b.n or a.r != b.r:
        return False
    if a.ring != b.ring:
        return False
    return bool(a.ideal == b.ideal)
