"""Hilbert series of graded modules with monomial initial submodules.

A series is stored as its numerator N(t) over prod(1 - t^w_i): a dict
{degree: integer coefficient}, Laurent degrees allowed (negative twists).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Infinite:
    """Sentinel for lengths of modules of positive dimension."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinite, ())


INFINITE = Infinite()


def is_finite(x) -> bool:
    return x is not INFINITE


# polynomial helpers -------------------------------------------------------
def padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + sign * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def pshift(a: dict, s: int) -> dict:
    return {k + s: v for k, v in a.items()}


def pmul_binom(a: dict, w: int) -> dict:
    """a(t) * (1 - t^w)."""
    return padd(a, pshift(a, w), -1)


def pdiv_binom(a: dict, w: int):
    """Exact quotient a(t) / (1 - t^w), or None when it is not a polynomial."""
    if not a:
        return {}
    lo, hi = min(a), max(a)
    q = {}
    for k in range(lo, hi - w + 1):
        v = a.get(k, 0) + q.get(k - w, 0)
        if v:
            q[k] = v
    # the remaining top coefficients must vanish
    for k in range(max(lo, hi - w + 1), hi + 1):
        if a.get(k, 0) + q.get(k - w, 0):
            return None
    return q


def peval1(a: dict) -> int:
    return sum(a.values())


# monomial ideal numerators ---------------------------------------------------
def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def monomial_numerator(gens: Sequence[tuple], weights: Sequence[int]) -> dict:
    """Numerator K(t) with HS(S/J) = K(t)/prod(1 - t^w) for the monomial ideal J."""
    memo: dict = {}
    return _num(tuple(sorted(_minimalize([tuple(g) for g in gens]))), tuple(weights), memo)


def _deg(g, weights):
    return sum(a * w for a, w in zip(g, weights))


def _num(gens: tuple, weights: tuple, memo: dict) -> dict:
    if not gens:
        return {0: 1}
    hit = memo.get(gens)
    if hit is not None:
        return hit
    if any(not any(g) for g in gens):
        return {}
    nv = len(weights)
    # pairwise coprime generators: product formula
    used = [0] * nv
    coprime = True
    for g in gens:
        for i, a in enumerate(g):
            if a:
                if used[i]:
                    coprime = False
                    break
                used[i] = 1
        if not coprime:
            break
    if coprime:
        res = {0: 1}
        for g in gens:
            res = pmul_binom(res, _deg(g, weights))
        memo[gens] = res
        return res
    # pivot on the variable occurring in most mixed (non pure power) generators
    mixed = [g for g in gens if sum(1 for a in g if a) > 1]
    counts = [0] * nv
    for g in mixed:
        for i, a in enumerate(g):
            if a:
                counts[i] += 1
    var = max(range(nv), key=lambda i: (counts[i], -i))
    exps = sorted(g[var] for g in mixed if g[var])
    e = exps[len(exps) // 2]
    piv = tuple(e if i == var else 0 for i in range(nv))
    plus = [g for g in gens if g[var] < e] + [piv]
    colon = [tuple(max(a - e, 0) if i == var else a for i, a in enumerate(g)) for g in gens]
    n1 = _num(tuple(sorted(_minimalize(plus))), weights, memo)
    n2 = _num(tuple(sorted(_minimalize(colon))), weights, memo)
    res = padd(n1, pshift(n2, e * weights[var]))
    memo[gens] = res
    return res


class HilbertSeries:
    """HS(t) = numerator(t) / prod(1 - t^w_i)."""

    def __init__(self, numerator: dict, weights: Sequence[int]):
        self.numerator = {k: v for k, v in numerator.items() if v}
        self.weights = tuple(weights)

    def __add__(self, other):
        return HilbertSeries(padd(self.numerator, other.numerator), self.weights)

    def __sub__(self, other):
        return HilbertSeries(padd(self.numerator, other.numerator, -1), self.weights)

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.numerator == other.numerator

    def shifted(self, s: int):
        return HilbertSeries(pshift(self.numerator, s), self.weights)

    def is_zero(self):
        return not self.numerator

    def as_polynomial(self):
        """The series as a polynomial when the module has finite length, else None."""
        q = self.numerator
        for w in self.weights:
            q = pdiv_binom(q, w)
            if q is None:
                return None
        return q

    def length(self):
        q = self.as_polynomial()
        if q is None:
            return INFINITE
        return peval1(q)

    def _reduced(self):
        """(k, N/(1-t)^k) with k the order of vanishing of N at t = 1."""
        q = self.numerator
        k = 0
        while q and peval1(q) == 0:
            q = pdiv_binom(q, 1)
            k += 1
        return k, q

    def dim(self) -> int:
        """Krull dimension of the module (pole order at t = 1); -1 for zero."""
        if not self.numerator:
            return -1
        k, _ = self._reduced()
        return len(self.weights) - k

    def degree_coefficient(self, d: int) -> Fraction:
        """lim_{t->1} (1-t)^d HS(t): zero if dim < d, the weighted multiplicity if dim = d."""
        if not self.numerator:
            return Fraction(0)
        k, q = self._reduced()
        dim = len(self.weights) - k
        if dim > d:
            raise ValueError(f"module of dimension {dim} exceeds {d}")
        if dim < d:
            return Fraction(0)
        den = 1
        for w in self.weights:
            den *= w
        return Fraction(peval1(q), den)

    def coefficients(self, upto: int) -> dict:
        """Hilbert function values for degrees <= upto."""
        if not self.numerator:
            return {}
        lo = min(self.numerator)
        # expand 1/prod(1 - t^w) up to the needed degree
        span = upto - lo
        inv = [0] * (span + 1)
        inv[0] = 1
        for w in self.weights:
            for k in range(w, span + 1):
                inv[k] += inv[k - w]
        out = {}
        for d in range(lo, upto + 1):
            s = 0
            for k, v in self.numerator.items():
                j = d - k
                if 0 <= j <= span:
                    s += v * inv[j]
            if s:
                out[d] = s
        return out
