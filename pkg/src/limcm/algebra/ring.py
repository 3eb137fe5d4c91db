"""Prime fields, weighted polynomial rings and sparse polynomials.

Monomials are packed into Python integers.  Reading from the low bits a
packed term holds a component index, one exponent field per variable, a
degree field and a block field.  Multiplying two monomials is integer
addition and the monomial order (weighted grevlex, position last) is
integer comparison after flipping the low fields (``term ^ lowmask``).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

EXP_BITS = 16
COMP_BITS = 16
DEG_BITS = 32
DEG_OFFSET = 1 << (DEG_BITS - 2)
MAX_EXP = (1 << (EXP_BITS - 1)) - 1


class AlgebraError(ValueError):
    """Bad input to an algebraic operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p; p is its own perfect-field witness (alpha = 0)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not 2 <= p <= 2**31 - 1 or not is_prime(p):
            raise AlgebraError(f"characteristic must be a prime in [2, 2^31-1], got {p!r}")
        self.p = p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class Layout:
    """Bit layout of packed terms for a fixed number of variables and weights."""

    def __init__(self, weights: Sequence[int]):
        self.nvars = len(weights)
        self.weights = tuple(weights)
        self.xbits = self.nvars * EXP_BITS
        self.dshift = COMP_BITS + self.xbits
        self.bshift = self.dshift + DEG_BITS
        self.cmask = (1 << COMP_BITS) - 1
        self.xmask = (1 << self.xbits) - 1
        self.lowmask = (1 << self.dshift) - 1
        self.degmask = (1 << DEG_BITS) - 1
        self.emask = (1 << EXP_BITS) - 1
        # guard bits of the exponent fields, in the coordinates of X(term)
        self.guard = sum(1 << (i * EXP_BITS + EXP_BITS - 1) for i in range(self.nvars))
        self.var_mono = tuple(
            (w << self.dshift) | (1 << (COMP_BITS + i * EXP_BITS))
            for i, w in enumerate(weights)
        )

    def mono(self, exps: Sequence[int]) -> int:
        m = 0
        for e, v in zip(exps, self.var_mono):
            if e:
                if e > MAX_EXP or e < 0:
                    raise AlgebraError(f"exponent {e} outside the supported range")
                m += e * v
        return m

    def exps(self, term: int) -> tuple:
        x = term >> COMP_BITS
        m = self.emask
        return tuple((x >> (i * EXP_BITS)) & m for i in range(self.nvars))

    def xfield(self, term: int) -> int:
        return (term >> COMP_BITS) & self.xmask

    def comp(self, term: int) -> int:
        return term & self.cmask

    def base(self, comp: int, twist: int = 0, block: int = 0) -> int:
        return (((block << DEG_BITS) + twist + DEG_OFFSET) << self.dshift) | comp

    def degree(self, mono: int) -> int:
        """Weighted degree of a bare monomial (no base)."""
        return mono >> self.dshift

    def term_degree(self, term: int) -> int:
        """Total degree (weight plus twist) of a module term."""
        return ((term >> self.dshift) & self.degmask) - DEG_OFFSET

    def divides(self, small: int, big: int) -> bool:
        """Whether the monomial part of ``small`` divides that of ``big`` (same component)."""
        if (small ^ big) & self.cmask:
            return False
        xs = (small >> COMP_BITS) & self.xmask
        xb = (big >> COMP_BITS) & self.xmask
        g = self.guard
        return ((xb | g) - xs) & g == g

    def lcm_shift(self, a: int, b: int) -> tuple[int, int]:
        """Monomials m_a, m_b with a + m_a == b + m_b == lcm(a, b)."""
        ea, eb = self.exps(a), self.exps(b)
        ma = mb = 0
        for i, (x, y) in enumerate(zip(ea, eb)):
            if x < y:
                ma += (y - x) * self.var_mono[i]
            elif y < x:
                mb += (x - y) * self.var_mono[i]
        return ma, mb


class GradedRing:
    """A quotient F_p[x_1..x_v]/I of a weighted polynomial ring.

    ``relations`` must be homogeneous for the weights (and for the optional
    extra ``multigrading`` rows, which are only used to split Frobenius
    pushforwards into smaller summands).
    """

    def __init__(self, p: int, variables: Sequence[str], weights: Sequence[int] | None = None,
                 relations: Iterable = (), multigrading: Sequence[Sequence[int]] | None = None,
                 domain: bool = False, name: str | None = None, _ambient: "GradedRing | None" = None):
        self.field = PrimeField(p)
        self.p = p
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables) or not self.variables:
            raise AlgebraError("variable names must be distinct and nonempty")
        if weights is None:
            weights = [1] * len(self.variables)
        self.weights = tuple(int(w) for w in weights)
        if len(self.weights) != len(self.variables) or min(self.weights) <= 0:
            raise AlgebraError("need one positive weight per variable")
        self.multigrading = tuple(tuple(int(a) for a in row) for row in (multigrading or ()))
        for row in self.multigrading:
            if len(row) != len(self.variables):
                raise AlgebraError("multigrading rows must have one entry per variable")
        self.layout = Layout(self.weights)
        self.index = {v: i for i, v in enumerate(self.variables)}
        self.domain = domain
        self.name = name
        if _ambient is not None:
            self._ambient = _ambient
        else:
            self._ambient = None
        rels = []
        for r in relations:
            f = self.coerce(r)
            if not f.is_zero():
                if not f.is_homogeneous():
                    raise AlgebraError(f"relation {f} is not homogeneous")
                if self.multigrading and not f.is_multihomogeneous():
                    raise AlgebraError(f"relation {f} is not homogeneous for the multigrading")
                rels.append(f)
        self.relations = tuple(rels)
        if not self.relations:
            self.domain = True
        self._gb = None
        self._dim = None

    # construction helpers -------------------------------------------------
    @property
    def ambient(self) -> "GradedRing":
        """The polynomial ring S with R = S/I (shares the term layout)."""
        if not self.relations:
            return self
        if self._ambient is None:
            self._ambient = GradedRing(self.p, self.variables, self.weights,
                                       multigrading=self.multigrading, domain=True)
        return self._ambient

    def quotient(self, relations: Iterable, domain: bool = False, name=None) -> "GradedRing":
        rels = list(self.relations) + [self.coerce(r) for r in relations]
        return GradedRing(self.p, self.variables, self.weights, rels, self.multigrading,
                          domain=domain, name=name, _ambient=self.ambient)

    def same_world(self, other: "GradedRing") -> bool:
        return (self.p == other.p and self.variables == other.variables
                and self.weights == other.weights)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def coerce(self, f) -> "Polynomial":
        if isinstance(f, Polynomial):
            if not self.same_world(f.ring):
                raise AlgebraError("polynomial belongs to a different ring")
            if f.ring is self:
                return f
            return Polynomial(self, f.terms)
        if isinstance(f, str):
            from .parsing import parse_polynomial
            return parse_polynomial(f, self)
        if isinstance(f, int):
            return self.constant(f)
        raise AlgebraError(f"cannot interpret {f!r} as a polynomial")

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {0: c} if c else {})

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return Polynomial(self, {0: 1})

    def var(self, name: str) -> "Polynomial":
        return Polynomial(self, {self.layout.var_mono[self.index[name]]: 1})

    def gens(self) -> list:
        return [Polynomial(self, {m: 1}) for m in self.layout.var_mono]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        c = coeff % self.p
        return Polynomial(self, {self.layout.mono(exps): c} if c else {})

    def multidegree(self, mono: int) -> tuple:
        e = self.layout.exps(mono)
        return tuple(sum(a * b for a, b in zip(row, e)) for row in self.multigrading)

    # ideal of relations ---------------------------------------------------
    def relation_gb(self):
        """Reduced Groebner basis (list of packed polynomials) of the defining ideal."""
        if self._gb is None:
            from .groebner import GroebnerEngine
            eng = GroebnerEngine(self.layout, self.p, ideal_case=True)
            base = self.layout.base(0)
            for f in self.relations:
                eng.add({m + base: c for m, c in f.terms.items()})
            eng.run()
            self._gb = tuple({t - base: c for t, c in g.items()} for g in eng.reduced_basis())
        return self._gb

    def krull_dim(self) -> int:
        if self._dim is None:
            from .ideal import Ideal
            self._dim = Ideal(self, []).quotient_dim()
        return self._dim

    def __repr__(self):
        rel = ", ".join(str(r) for r in self.relations)
        w = "" if set(self.weights) == {1} else f" weights {self.weights}"
        return f"F_{self.p}[{', '.join(self.variables)}]{w}" + (f"/({rel})" if rel else "")


class Polynomial:
    """Sparse polynomial: packed monomial -> nonzero coefficient mod p."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # arithmetic -----------------------------------------------------------
    def _other(self, g):
        if isinstance(g, Polynomial):
            return g
        return self.ring.coerce(g)

    def __add__(self, g):
        g = self._other(g)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in g.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: (p - c) % p for m, c in self.terms.items()})

    def __sub__(self, g):
        return self + (-self._other(g))

    def __rsub__(self, g):
        return self._other(g) - self

    def __mul__(self, g):
        g = self._other(g)
        p = self.ring.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in g.terms.items():
                m = m1 + m2
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative exponent")
        # x -> x^p is additive; use it when k is a power of p
        p = self.ring.p
        q, e = k, 0
        while q > 1 and q % p == 0:
            q //= p
            e += 1
        if q == 1 and k > 1:
            return self.frobenius(p ** e)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self, q: int) -> "Polynomial":
        """f^q for q a power of p (coefficients in F_p are fixed by Frobenius)."""
        L = self.ring.layout
        for m in self.terms:
            if max(L.exps(m), default=0) * q > MAX_EXP:
                raise AlgebraError("exponent overflow in Frobenius power")
        return Polynomial(self.ring, {m * q: c for m, c in self.terms.items()})

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, g):
        try:
            g = self._other(g)
        except AlgebraError:
            return NotImplemented
        return self.terms == g.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_homogeneous(self) -> bool:
        degs = {m >> self.ring.layout.dshift for m in self.terms}
        return len(degs) <= 1

    def is_multihomogeneous(self) -> bool:
        return len({self.ring.multidegree(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        """Weighted degree (maximum over terms); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(m >> self.ring.layout.dshift for m in self.terms)

    def leading_monomial(self) -> int:
        lm = self.ring.layout.lowmask
        return max(m ^ lm for m in self.terms) ^ lm

    def exponent_dict(self) -> dict:
        L = self.ring.layout
        return {L.exps(m): c for m, c in self.terms.items()}

    def sorted_terms(self) -> list:
        lm = self.ring.layout.lowmask
        return sorted(self.terms.items(), key=lambda mc: mc[0] ^ lm, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        L = self.ring.layout
        names = self.ring.variables
        parts = []
        for m, c in self.sorted_terms():
            e = L.exps(m)
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            c = c if c <= self.ring.p // 2 or self.ring.p == 2 else c - self.ring.p
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        s = parts[0]
        for t in parts[1:]:
            s += ("-" + t[1:]) if t.startswith("-") else ("+" + t)
        return s

    __repr__ = __str__


def fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
