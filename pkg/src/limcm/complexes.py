"""Chain complexes of graded modules: Koszul complexes, resolutions, Tor, Ext.

Homological indexing throughout: ``maps[i]`` goes from term i to term i-1.
Cochain complexes (duals) are stored with negated indices, so cohomology in
degree j is homology at index -j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .algebra.hilbert import INFINITE, HilbertSeries, is_finite
from .algebra.ring import AlgebraError, GradedRing, Polynomial
from .modules import (
    FreeModule,
    GradedModule,
    ModuleMap,
    Submodule,
    kernel_vectors,
    reframe,
    select_minimal,
    subquotient_module,
    vmul,
)


class ChainComplex:
    """Finite complex C_lo <- ... <- C_hi of cokernel modules with free-lifted differentials."""

    def __init__(self, terms: dict, maps: dict, check: bool = True):
        self.terms = dict(terms)
        self.maps = dict(maps)
        for i, d in self.maps.items():
            if i not in self.terms or i - 1 not in self.terms:
                raise AlgebraError(f"differential {i} needs terms {i} and {i - 1}")
            if d.source.twists != self.terms[i].free.twists or d.target.twists != self.terms[i - 1].free.twists:
                raise AlgebraError(f"differential {i} does not match its terms")
        if check:
            self.check()

    @property
    def indices(self):
        return sorted(self.terms)

    def check(self):
        """Differentials must respect relations and compose to zero modulo relations."""
        for i, d in self.maps.items():
            tgt = self.terms[i - 1].relsub
            for u in self.terms[i].relations:
                if not tgt.contains(d.apply(u)):
                    raise AlgebraError(f"differential {i} is not well defined on relations")
            e = self.maps.get(i - 1)
            if e is None:
                continue
            tt = self.terms[i - 2].relsub
            for col in d.columns:
                if not tt.contains(e.apply(col)):
                    raise AlgebraError(f"d_{i - 1} o d_{i} is not zero")

    # homology -------------------------------------------------------------
    def cycles(self, i: int) -> Submodule:
        """Preimage in the free cover of term i of the cycles (contains the relations)."""
        T = self.terms[i]
        d = self.maps.get(i)
        if d is None:
            F = T.free
            return Submodule(F, [F.basis(k) for k in range(F.rank)])
        ker = kernel_vectors(d.source, d.target, d.columns, self.terms[i - 1].relsub.groebner())
        return Submodule(d.source, ker, gb=ker)

    def boundaries(self, i: int) -> Submodule:
        T = self.terms[i]
        gens = list(T.relations)
        d = self.maps.get(i + 1)
        if d is not None:
            gens += [c for c in d.columns if c]
        return Submodule(T.free, gens)

    def homology_series(self, i: int) -> HilbertSeries:
        if i not in self.terms:
            return HilbertSeries({}, ())
        Z = self.cycles(i)
        B = self.boundaries(i)
        return B.quotient_series() - Z.quotient_series()

    def homology_length(self, i: int):
        if i not in self.terms:
            return 0
        return self.homology_series(i).length()

    def homology_module(self, i: int) -> GradedModule:
        return subquotient_module(self.cycles(i), self.boundaries(i))

    def tensor(self, N: GradedModule) -> "ChainComplex":
        """C ⊗ N for a complex of free modules (relations of the terms are ignored)."""
        terms = {}
        for i, T in self.terms.items():
            if T.relations:
                raise AlgebraError("tensor needs a complex of free modules")
            terms[i] = _free_tensor_term(T.free, N)
        maps = {}
        nN = N.ngens
        cm = N.ring.layout.cmask
        for i, d in self.maps.items():
            src, tgt = terms[i].free, terms[i - 1].free
            cols = []
            for j, col in enumerate(d.columns):
                for l in range(nN):
                    dst = [tgt.bases[k * nN + l] for k in range(d.target.rank)]
                    cols.append(reframe(col, d.target.bases, dst, cm))
            maps[i] = ModuleMap(src, tgt, cols)
        return ChainComplex(terms, maps, check=False)

    def dual(self) -> "ChainComplex":
        """Hom(C, S) for a complex of free modules; cohomological degree j sits at index -j."""
        terms = {}
        for i, T in self.terms.items():
            if T.relations:
                raise AlgebraError("dual needs a complex of free modules")
            terms[-i] = GradedModule(T.ring, FreeModule(T.ring, [-a for a in T.free.twists]), ())
        maps = {}
        for i, d in self.maps.items():
            # d_i: C_i -> C_{i-1}; its transpose C_{i-1}^* -> C_i^* sits at index -(i-1)
            src, tgt = terms[-(i - 1)].free, terms[-i].free
            entries = [d.target.entries(col) for col in d.columns]
            cols = []
            for k in range(d.target.rank):
                cols.append(tgt.vector([entries[l][k] for l in range(d.source.rank)]))
            maps[-(i - 1)] = ModuleMap(src, tgt, cols)
        return ChainComplex(terms, maps, check=False)

    def ranks(self) -> dict:
        return {i: self.terms[i].ngens for i in self.indices}


def _free_tensor_term(F: FreeModule, N: GradedModule) -> GradedModule:
    nN = N.ngens
    G = FreeModule(N.ring, [a + b for a in F.twists for b in N.free.twists])
    cm = N.ring.layout.cmask
    rels = []
    for k in range(F.rank):
        dst = G.bases[k * nN:(k + 1) * nN]
        rels += [reframe(u, N.free.bases, dst, cm) for u in N.relations]
    return GradedModule(N.ring, G, rels)


# Koszul complexes ------------------------------------------------------------
def koszul_complex(x: Sequence, M: GradedModule) -> ChainComplex:
    """K(x; M): term h has generators e_J ⊗ g for |J| = h (J sorted, lex order)."""
    ring = M.ring
    xs = [ring.coerce(f) for f in x]
    for f in xs:
        if f.is_zero() or not f.is_homogeneous() or f.degree() <= 0:
            raise AlgebraError(f"Koszul entries must be homogeneous of positive degree: {f}")
    k = len(xs)
    n = M.ngens
    p = ring.p
    cm = ring.layout.cmask
    subsets = {h: list(combinations(range(k), h)) for h in range(k + 1)}
    pos = {J: idx for h in subsets for idx, J in enumerate(subsets[h])}
    terms = {}
    for h, Js in subsets.items():
        twists = [sum(xs[j].degree() for j in J) + a for J in Js for a in M.free.twists]
        F = FreeModule(ring, twists)
        rels = []
        for idx in range(len(Js)):
            dst = F.bases[idx * n:(idx + 1) * n]
            rels += [reframe(u, M.free.bases, dst, cm) for u in M.relations]
        terms[h] = GradedModule(ring, F, rels)
    maps = {}
    for h in range(1, k + 1):
        src, tgt = terms[h].free, terms[h - 1].free
        cols = []
        for J in subsets[h]:
            for g in range(n):
                col: dict = {}
                for s, j in enumerate(J):
                    rest = J[:s] + J[s + 1:]
                    e = tgt.basis(pos[rest] * n + g, 1 if s % 2 == 0 else p - 1)
                    for t, c in vmul(xs[j].terms, e, p).items():
                        v = (col.get(t, 0) + c) % p
                        if v:
                            col[t] = v
                        else:
                            col.pop(t, None)
                cols.append(col)
        maps[h] = ModuleMap(src, tgt, cols)
    return ChainComplex(terms, maps, check=False)


def koszul_lengths(x: Sequence, M: GradedModule) -> list:
    K = koszul_complex(x, M)
    return [K.homology_length(i) for i in range(len(x) + 1)]


@dataclass
class KoszulStats:
    h: list
    sigma: list = field(default_factory=list)
    chi: object = None
    chi1: object = None

    def __post_init__(self):
        k = len(self.h) - 1
        fin = all(is_finite(v) for v in self.h)
        if fin:
            self.sigma = [sum(self.h[j] for j in range(i, k + 1)) for i in range(k + 1)]
            self.chi = sum((-1) ** i * v for i, v in enumerate(self.h))
            self.chi1 = sum((-1) ** (j - 1) * self.h[j] for j in range(1, k + 1))
        else:
            self.sigma = [INFINITE if any(not is_finite(self.h[j]) for j in range(i, k + 1))
                          else sum(self.h[i:]) for i in range(k + 1)]
            self.chi = INFINITE
            self.chi1 = INFINITE if any(not is_finite(v) for v in self.h[1:]) else \
                sum((-1) ** (j - 1) * self.h[j] for j in range(1, k + 1))

    def as_dict(self):
        return {"h": self.h, "sigma": self.sigma, "chi": self.chi, "chi1": self.chi1}


def koszul_stats(x: Sequence, M: GradedModule) -> KoszulStats:
    return KoszulStats(koszul_lengths(x, M))


def homology_lengths(C: ChainComplex, i: int):
    return C.homology_length(i)


# resolutions, Tor, Ext -----------------------------------------------------
def free_resolution(M: GradedModule, L: int) -> ChainComplex:
    """Minimal graded free resolution of M over its ring, terms 0..L (or shorter if it stops)."""
    if L < 0:
        raise AlgebraError("resolution length must be nonnegative")
    ring = M.ring
    P = M.minimal_presentation()
    F0 = P.free
    terms = {0: GradedModule(ring, F0, ())}
    maps = {}
    if L == 0:
        return ChainComplex(terms, maps, check=False)
    cols = select_minimal(F0, list(P.relations), F0.ring_seed())
    prev = F0
    for k in range(1, L + 1):
        if not cols:
            break
        Fk = FreeModule(ring, [prev.degree(c) for c in cols])
        terms[k] = GradedModule(ring, Fk, ())
        maps[k] = ModuleMap(Fk, prev, cols)
        if k == L:
            break
        ker = kernel_vectors(Fk, prev, cols)
        cols = select_minimal(Fk, ker, Fk.ring_seed())
        prev = Fk
    return ChainComplex(terms, maps, check=False)


def betti_numbers(C: ChainComplex) -> list:
    return [C.terms[i].ngens for i in C.indices]


def tor_lengths(M: GradedModule, N: GradedModule, i_max: int) -> list:
    """ℓ(Tor_i(M, N)) for 0 <= i <= i_max, by resolving M and tensoring with N."""
    if not M.ring.same_world(N.ring):
        raise AlgebraError("Tor needs modules over one ring")
    C = free_resolution(M, i_max + 1).tensor(N)
    return [C.homology_length(i) if i in C.terms else 0 for i in range(i_max + 1)]


def ext_lengths(M: GradedModule, j_max: int | None = None) -> list:
    """ℓ(Ext^j_S(M, S)) over the ambient polynomial ring S, 0 <= j <= j_max (default nvars)."""
    Ma = M.over_ambient()
    D = Ma.ring.nvars
    top = D if j_max is None else j_max
    C = free_resolution(Ma, D).dual()
    return [C.homology_length(-j) if -j in C.terms else 0 for j in range(top + 1)]


def ext_module_series(M: GradedModule, j: int) -> HilbertSeries:
    Ma = M.over_ambient()
    C = free_resolution(Ma, Ma.ring.nvars).dual()
    if -j not in C.terms:
        return HilbertSeries({}, Ma.ring.weights)
    return C.homology_series(-j)


def local_cohomology_lengths(M: GradedModule, j_max: int) -> list:
    """ℓ(H^j_m(M)) = ℓ(Ext_S^{D-j}(M, S)) for 0 <= j <= j_max (graded local duality)."""
    Ma = M.over_ambient()
    D = Ma.ring.nvars
    C = free_resolution(Ma, D).dual()
    out = []
    for j in range(j_max + 1):
        e = D - j
        out.append(C.homology_length(-e) if -e in C.terms else 0)
    return out


def omega(M: GradedModule, t: int) -> GradedModule:
    """ω_t(M) = Ext_S^{D-d+t}(M, S) with d = dim M, as a module over S."""
    Ma = M.over_ambient()
    D = Ma.ring.nvars
    d = M.dim()
    C = free_resolution(Ma, D).dual()
    idx = -(D - d + t)
    if idx not in C.terms:
        return GradedModule(Ma.ring, FreeModule(Ma.ring, []), ())
    return C.homology_module(idx)


def hom_complex_into(C: ChainComplex, W: GradedModule) -> ChainComplex:
    """Hom(C, W) for a complex of free modules C; cohomological degree j at index -j."""
    return C.dual().tensor(W)
