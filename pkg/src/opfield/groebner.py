"""Buchberger Gröbner engine: membership, elimination, minimal polynomials.

Deliberately small: normal-pair criteria only, no F4/F5. Intended for desk
scale (tens of variables, single-digit degrees). A degree cap, configurable
through the WORKBENCH_GB_DEGREE_CAP environment variable, aborts runaway
computations with a clean error.
"""

from __future__ import annotations

import os

from .polynomials import GREVLEX, Lex, Poly, PolyRing

DEFAULT_DEGREE_CAP = 12


class DegreeCapExceeded(RuntimeError):
    def __init__(self, degree: int, cap: int):
        super().__init__(
            f"Gröbner computation produced degree {degree} beyond cap {cap}; "
            "raise WORKBENCH_GB_DEGREE_CAP to continue"
        )


def _degree_cap() -> int:
    raw = os.environ.get("WORKBENCH_GB_DEGREE_CAP")
    if raw is None:
        return DEFAULT_DEGREE_CAP
    return int(raw)


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def normal_form_list(f: Poly, basis: list[Poly], order) -> Poly:
    """Full remainder of f on division by `basis`."""
    if not basis:
        return f
    ring = f.ring
    leads = [g.lead(order) for g in basis]
    rem_terms: dict = {}
    work = f
    while work:
        e, c = work.lead(order)
        for g, (ge, gc) in zip(basis, leads):
            if _divides(ge, e):
                q = tuple(a - b for a, b in zip(e, ge))
                work = work - Poly(ring, {q: c / gc}) * g
                break
        else:
            rem_terms[e] = c
            work = Poly(ring, {k: v for k, v in work.terms.items() if k != e})
    return Poly(ring, rem_terms)


def s_poly(f: Poly, g: Poly, order) -> Poly:
    fe, fc = f.lead(order)
    ge, gc = g.lead(order)
    l = _lcm(fe, ge)
    mf = Poly(f.ring, {tuple(a - b for a, b in zip(l, fe)): f.ring.domain.one / fc})
    mg = Poly(f.ring, {tuple(a - b for a, b in zip(l, ge)): f.ring.domain.one / gc})
    return mf * f - mg * g


def buchberger(gens, order=GREVLEX, cap: int | None = None) -> tuple[Poly, ...]:
    """The unique reduced Gröbner basis of the ideal generated by `gens`."""
    if cap is None:
        cap = _degree_cap()
    basis = [g.monic(order) for g in gens if g]
    # deterministic start ordering
    basis.sort(key=lambda g: order.key(g.lm(order)))
    # drop duplicates
    seen = []
    for g in basis:
        if all(g != h for h in seen):
            seen.append(g)
    basis = seen
    if not basis:
        return ()

    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    processed: set[tuple[int, int]] = set()

    def pair_key(p):
        i, j = p
        l = _lcm(basis[i].lm(order), basis[j].lm(order))
        return (order.key(l), i, j)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        processed.add((i, j))
        fi, fj = basis[i], basis[j]
        li, lj = fi.lm(order), fj.lm(order)
        l = _lcm(li, lj)
        # first criterion: coprime leading monomials
        if all(a + b == c for a, b, c in zip(li, lj, l)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(basis[k].lm(order), l):
                pik = (max(i, k), min(i, k))
                pjk = (max(j, k), min(j, k))
                if pik in processed and pjk in processed:
                    skip = True
                    break
        if skip:
            continue
        r = normal_form_list(s_poly(fi, fj, order), basis, order)
        if r:
            if r.total_degree() > cap:
                raise DegreeCapExceeded(r.total_degree(), cap)
            r = r.monic(order)
            new_index = len(basis)
            basis.append(r)
            for k in range(new_index):
                pairs.add((new_index, k))
    return _reduce_basis(basis, order)


def _reduce_basis(basis: list[Poly], order) -> tuple[Poly, ...]:
    # minimalize: drop elements whose lead is divisible by another lead
    minimal: list[Poly] = []
    leads = [g.lm(order) for g in basis]
    for idx, g in enumerate(basis):
        lm = leads[idx]
        if any(
            k != idx
            and _divides(leads[k], lm)
            and (leads[k] != lm or k < idx)
            for k in range(len(basis))
        ):
            continue
        minimal.append(g)
    # inter-reduce tails
    changed = True
    while changed:
        changed = False
        for idx in range(len(minimal)):
            others = minimal[:idx] + minimal[idx + 1 :]
            r = normal_form_list(minimal[idx], others, order)
            if not r:
                minimal.pop(idx)
                changed = True
                break
            r = r.monic(order)
            if r != minimal[idx]:
                minimal[idx] = r
                changed = True
    minimal.sort(key=lambda g: order.key(g.lm(order)))
    return tuple(minimal)


def gb_compute(gens, order=GREVLEX) -> tuple[Poly, ...]:
    return buchberger(gens, order)


class Ideal:
    """Generator list with cached reduced Gröbner bases keyed by order."""

    __slots__ = ("ring", "gens", "_bases")

    def __init__(self, ring: PolyRing, gens=()):
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        for g in self.gens:
            if g.ring != ring:
                raise ValueError("generator from a different ring")
        self._bases: dict = {}

    def groebner(self, order=None) -> tuple[Poly, ...]:
        order = order or self.ring.order
        basis = self._bases.get(order)
        if basis is None:
            basis = buchberger(self.gens, order)
            self._bases[order] = basis
        return basis

    def normal_form(self, f: Poly, order=None) -> Poly:
        order = order or self.ring.order
        return normal_form_list(f, list(self.groebner(order)), order)

    def contains(self, f: Poly) -> bool:
        return not self.normal_form(f)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or self.ring != other.ring:
            return NotImplemented
        return all(other.contains(g) for g in self.gens) and all(
            self.contains(g) for g in other.gens
        )

    def __hash__(self):
        return hash((self.ring, self.gens))


def elimination_order(ring: PolyRing, keep: set[int]) -> Lex:
    """Lex order eliminating every variable not in `keep` (those come first)."""
    big = sorted((i for i in range(ring.nvars) if i not in keep), reverse=True)
    small = sorted(keep, reverse=True)
    return Lex(tuple(big + small))


def min_poly(v: int, ideal: Ideal, predecessors: set[int]) -> Poly | None:
    """Minimal-degree relation of variable `v` over `predecessors` modulo the ideal.

    Returns a polynomial in v and the predecessors, of minimal positive
    v-degree in the elimination ideal, or None when v stays transcendental.
    The relation ideal is assumed prime (caller obligation); the minimal
    lex basis element then realizes the minimal polynomial degree.
    """
    ring = ideal.ring
    allowed = set(predecessors) | {v}
    others = sorted((i for i in range(ring.nvars) if i not in allowed), reverse=True)
    preds = sorted(predecessors, reverse=True)
    order = Lex(tuple(others + [v] + preds))
    basis = ideal.groebner(order)
    candidates = [
        g
        for g in basis
        if g.variables() <= allowed and g.degree_in(v) > 0
    ]
    if not candidates:
        return None
    candidates.sort(key=lambda g: (g.degree_in(v), order.key(g.lm(order))))
    return candidates[0]
