"""Homogeneous ideals of a graded ring and their basic invariants."""
from __future__ import annotations

from typing import Iterable

from .groebner import GroebnerBasis, GroebnerEngine
from .hilbert import HilbertSeries, monomial_numerator
from .ring import AlgebraError, GradedRing, Polynomial


class Ideal:
    """Ideal of R = S/I given by generators; Groebner data is computed in S."""

    def __init__(self, ring: GradedRing, gens: Iterable = ()):
        self.ring = ring
        gs = []
        for g in gens:
            f = ring.coerce(g)
            if not f.is_zero():
                gs.append(f)
        self.gens = tuple(gs)
        self._gb = None
        self._basis = None
        self._series = None

    @property
    def homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    # Groebner data ----------------------------------------------------------
    def _reducer(self) -> GroebnerBasis:
        if self._gb is None:
            if not self.homogeneous:
                raise AlgebraError("only homogeneous ideals are supported")
            L = self.ring.layout
            base = L.base(0)
            seed = [{m + base: c for m, c in g.items()} for g in self.ring.relation_gb()]
            eng = GroebnerEngine(L, self.ring.p, ideal_case=True, seed=seed)
            for g in self.gens:
                eng.add({m + base: c for m, c in g.terms.items()})
            basis = eng.reduced_basis()
            self._basis = tuple(Polynomial(self.ring, {t - base: c for t, c in v.items()}) for v in basis)
            self._gb = GroebnerBasis(L, self.ring.p, basis)
        return self._gb

    def groebner_basis(self) -> tuple:
        """Reduced Groebner basis in S of the preimage of the ideal (relations included)."""
        self._reducer()
        return self._basis

    def normal_form(self, f) -> Polynomial:
        f = self.ring.coerce(f)
        base = self.ring.layout.base(0)
        r = self._reducer().reduce({m + base: c for m, c in f.terms.items()})
        return Polynomial(self.ring, {t - base: c for t, c in r.items()})

    def contains(self, f) -> bool:
        return self.normal_form(f).is_zero()

    def __contains__(self, f):
        return self.contains(f)

    def leading_exponents(self) -> list:
        L = self.ring.layout
        return [L.exps(g.leading_monomial()) for g in self.groebner_basis()]

    def quotient_series(self) -> HilbertSeries:
        """Hilbert series of R/J."""
        if self._series is None:
            num = monomial_numerator(self.leading_exponents(), self.ring.weights)
            self._series = HilbertSeries(num, self.ring.weights)
        return self._series

    def quotient_dim(self) -> int:
        return self.quotient_series().dim()

    def quotient_length(self):
        return self.quotient_series().length()

    def is_m_primary(self) -> bool:
        return self.quotient_dim() <= 0

    # constructions ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Ideal):
            other = Ideal(self.ring, other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        if not isinstance(other, Ideal):
            other = Ideal(self.ring, other)
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def power(self, t: int) -> "Ideal":
        if t == 0:
            return Ideal(self.ring, [self.ring.one()])
        out = Ideal(self.ring, self.gens)
        for _ in range(t - 1):
            out = out * self
            out = Ideal(self.ring, _dedupe(out.gens))
        return out

    def bracket(self, q: int) -> "Ideal":
        return Ideal(self.ring, [g.frobenius(q) for g in self.gens])

    def in_ring(self, ring: GradedRing) -> "Ideal":
        return Ideal(ring, [ring.coerce(g) for g in self.gens])

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def _dedupe(polys):
    seen = set()
    out = []
    for f in polys:
        k = frozenset(f.terms.items())
        if k not in seen:
            seen.add(k)
            out.append(f)
    return out


def maximal_ideal(ring: GradedRing) -> Ideal:
    return Ideal(ring, ring.gens())


def groebner_basis(I: Ideal) -> Ideal:
    """Ideal whose generators are the reduced Groebner basis of ``I`` (relations included)."""
    J = Ideal(I.ring, I.groebner_basis())
    J._gb, J._basis = I._gb, I._basis
    return J


def normal_form(f, I: Ideal) -> Polynomial:
    return I.normal_form(f)


def krull_dim(I: Ideal) -> int:
    """dim R/I; -1 for the unit ideal."""
    return I.quotient_dim()
