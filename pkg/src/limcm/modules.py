"""Finitely presented graded modules over a GradedRing.

A module over R = S/I is the cokernel of a homogeneous matrix over S; the
relations I*F are always implied.  Submodules of a free module are stored
by their preimage in S^n, which contains I*S^n.  All Groebner work happens
in S; see ``algebra.groebner`` for the vector encoding.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .algebra.groebner import GroebnerBasis, GroebnerEngine, lead
from .algebra.hilbert import INFINITE, HilbertSeries, monomial_numerator
from .algebra.ideal import Ideal
from .algebra.ring import COMP_BITS, AlgebraError, GradedRing, Polynomial


# vector helpers ------------------------------------------------------------
def vadd(a: dict, b: dict, p: int, scale: int = 1) -> dict:
    out = dict(a)
    for t, c in b.items():
        v = (out.get(t, 0) + scale * c) % p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def vmul(poly_terms: dict, vec: dict, p: int) -> dict:
    """Polynomial (packed monomial -> coeff) times vector."""
    out: dict = {}
    for m, a in poly_terms.items():
        for t, c in vec.items():
            u = t + m
            v = (out.get(u, 0) + a * c) % p
            if v:
                out[u] = v
            else:
                out.pop(u, None)
    return out


def reframe(vec: dict, src: Sequence[int], dst: Sequence[int], cmask: int) -> dict:
    """Move a vector between two term frames with matching component numbering."""
    return {t - src[t & cmask] + dst[t & cmask]: c for t, c in vec.items()}


def rank_mod_p(rows: list, p: int) -> int:
    """Rank of sparse rows (dict column -> value) over F_p."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            col = min(r)
            if col in pivots:
                prow = pivots[col]
                f = r[col]
                for k, v in prow.items():
                    w = (r.get(k, 0) - f * v) % p
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
            else:
                inv = pow(r[col], -1, p)
                pivots[col] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
    return rank


class FreeModule:
    """Graded free module S(-a_1) + ... + S(-a_n) over ``ring``."""

    def __init__(self, ring: GradedRing, twists: Sequence[int]):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)
        L = ring.layout
        if len(self.twists) > L.cmask:
            raise AlgebraError("too many components")
        self.bases = tuple(L.base(i, a) for i, a in enumerate(self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.twists == other.twists and \
            self.ring.same_world(other.ring)

    def __hash__(self):
        return hash(self.twists)

    def basis(self, i: int, coeff: int = 1) -> dict:
        return {self.bases[i]: coeff % self.ring.p}

    def vector(self, entries: Sequence) -> dict:
        if len(entries) != self.rank:
            raise AlgebraError(f"expected {self.rank} entries, got {len(entries)}")
        out = {}
        for i, e in enumerate(entries):
            f = self.ring.coerce(e)
            b = self.bases[i]
            for m, c in f.terms.items():
                out[m + b] = c
        return out

    def entries(self, vec: dict) -> list:
        cm = self.ring.layout.cmask
        parts: list = [dict() for _ in self.twists]
        for t, c in vec.items():
            k = t & cm
            parts[k][t - self.bases[k]] = c
        return [Polynomial(self.ring, d) for d in parts]

    def degree(self, vec: dict):
        """Common total degree of a homogeneous vector (None for zero)."""
        if not vec:
            return None
        L = self.ring.layout
        degs = {L.term_degree(t) for t in vec}
        if len(degs) != 1:
            raise AlgebraError("vector is not homogeneous")
        return degs.pop()

    def ring_seed(self) -> list:
        """The Groebner basis I*e_1, ..., I*e_n of I*F."""
        out = []
        gb = self.ring.relation_gb()
        if not gb:
            return out
        for b in self.bases:
            for g in gb:
                out.append({m + b: c for m, c in g.items()})
        return out

    def format(self, vec: dict) -> list:
        return [str(e) for e in self.entries(vec)]

    def __repr__(self):
        return f"FreeModule(rank={self.rank}, twists={list(self.twists)})"


def scale_poly_vec(f: Polynomial, vec: dict, p: int) -> dict:
    return vmul(f.terms, vec, p)


class Submodule:
    """Submodule N of F given by generators; stands for the preimage N + I*F."""

    def __init__(self, free: FreeModule, gens: Iterable[dict] = (), gb: Sequence[dict] | None = None):
        self.free = free
        self.gens = tuple(g for g in gens if g)
        for g in self.gens:
            free.degree(g)
        self._gb_vectors = list(gb) if gb is not None else None
        self._reducer = None
        self._series = None
        self._mingens = None

    @property
    def ring(self):
        return self.free.ring

    def groebner(self) -> list:
        """Reduced Groebner basis (in S) of N + I*F."""
        if self._gb_vectors is None:
            L = self.ring.layout
            eng = GroebnerEngine(L, self.ring.p, ideal_case=False, seed=self.free.ring_seed())
            for g in self.gens:
                eng.add(g)
            self._gb_vectors = eng.reduced_basis()
        return self._gb_vectors

    def reducer(self) -> GroebnerBasis:
        if self._reducer is None:
            self._reducer = GroebnerBasis(self.ring.layout, self.ring.p, self.groebner())
        return self._reducer

    def reduce(self, vec: dict) -> dict:
        return self.reducer().reduce(vec)

    def contains(self, vec: dict) -> bool:
        return not self.reducer().reduce(vec, full=False)

    def contains_submodule(self, other: "Submodule") -> bool:
        return all(self.contains(g) for g in other.gens)

    def quotient_series(self) -> HilbertSeries:
        """Hilbert series of F/(N + I*F)."""
        if self._series is None:
            L = self.ring.layout
            per: list = [[] for _ in self.free.twists]
            for v in self.groebner():
                lt = lead(v, L.lowmask)
                per[lt & L.cmask].append(L.exps(lt))
            num: dict = {}
            for k, gens in enumerate(per):
                part = monomial_numerator(gens, self.ring.weights)
                tw = self.free.twists[k]
                for d, c in part.items():
                    num[d + tw] = num.get(d + tw, 0) + c
            self._series = HilbertSeries(num, self.ring.weights)
        return self._series

    def minimal_generators(self, modulo: "Submodule | None" = None) -> list:
        """A minimal homogeneous generating set of N modulo ``modulo`` (default I*F)."""
        if modulo is None and self._mingens is not None:
            return self._mingens
        seed = modulo.groebner() if modulo is not None else self.free.ring_seed()
        out = select_minimal(self.free, self.gens if self.gens else (), seed)
        if modulo is None:
            self._mingens = out
        return out

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.free, self.gens + other.gens)

    def intersect(self, other: "Submodule") -> "Submodule":
        """N1 ∩ N2 via the kernel of F + F -> F/N1 + F/N2 restricted to the diagonal."""
        F = self.free
        n = F.rank
        tgt = FreeModule(self.ring, F.twists + F.twists)
        cm = self.ring.layout.cmask
        imgs = [reframe(F.basis(i), F.bases, tgt.bases[:n], cm) | tgt.basis(n + i) for i in range(n)]
        rels = [reframe(g, F.bases, tgt.bases[:n], cm) for g in self.groebner()]
        rels += [reframe(g, F.bases, tgt.bases[n:], cm) for g in other.groebner()]
        ker = kernel_vectors(F, tgt, imgs, rels)
        return Submodule(F, ker, gb=ker)

    def as_module(self) -> "GradedModule":
        """N/(I*F) as an abstract module with generators the minimal generators of N."""
        return subquotient_module(self, Submodule(self.free, ()))

    def __repr__(self):
        return f"Submodule of {self.free!r} with {len(self.gens)} generators"


def select_minimal(free: FreeModule, vectors: Sequence[dict], seed: Sequence[dict]) -> list:
    """Greedy degree-ordered choice of vectors that are minimal generators modulo ``seed``."""
    L = free.ring.layout
    eng = GroebnerEngine(L, free.ring.p, seed=seed)
    items = sorted(((free.degree(v), k, v) for k, v in enumerate(vectors) if v), key=lambda x: (x[0], x[1]))
    out = []
    for deg, _, v in items:
        eng.run(upto=deg)
        r = eng.reduce(v, full=False)
        if r:
            out.append(v)
            eng.insert(r)
    return out


def kernel_vectors(src: FreeModule, tgt: FreeModule, images: Sequence[dict],
                   tgt_relations: Sequence[dict] = ()) -> list:
    """Groebner basis of {v in S^src : phi(v) in tgt_relations + I*tgt} (contains I*src).

    ``images[j]`` is phi(e_j) in the frame of ``tgt``.
    """
    ring = src.ring
    L = ring.layout
    m, n = tgt.rank, src.rank
    gt = [L.base(i, a, 1) for i, a in enumerate(tgt.twists)]
    gs = [L.base(m + j, a, 0) for j, a in enumerate(src.twists)]
    cm = L.cmask
    seed = []
    gbI = ring.relation_gb()
    if gbI:
        for b in gt + gs:
            for g in gbI:
                seed.append({x + b: c for x, c in g.items()})
    eng = GroebnerEngine(L, ring.p, seed=seed)
    for j in range(n):
        img = images[j]
        if img:
            d = tgt.degree(img)
            if d != src.twists[j]:
                raise AlgebraError(f"map is not homogeneous: column {j} has degree {d}, twist {src.twists[j]}")
        v = {t - tgt.bases[t & cm] + gt[t & cm]: c for t, c in img.items()}
        v[gs[j]] = 1
        eng.add(v)
    for u in tgt_relations:
        if u:
            eng.add({t - tgt.bases[t & cm] + gt[t & cm]: c for t, c in u.items()})
    out = []
    bs = L.bshift
    for v in eng.reduced_basis():
        if (lead(v, L.lowmask) >> bs) == 0:
            out.append({t - gs[(t & cm) - m] + src.bases[(t & cm) - m]: c for t, c in v.items()})
    return out


class GradedModule:
    """Cokernel of a homogeneous matrix: F / (relations + I*F)."""

    def __init__(self, ring: GradedRing, free, relations: Iterable = ()):
        if not isinstance(free, FreeModule):
            free = FreeModule(ring, free)
        self.ring = ring
        self.free = free
        rels = []
        for u in relations:
            if isinstance(u, dict):
                vec = u
            else:
                vec = free.vector(list(u))
            if vec:
                free.degree(vec)
                rels.append(vec)
        self.relations = tuple(rels)
        self.relsub = Submodule(free, self.relations)
        self._nu = None
        self._minimal = None

    # constructors -----------------------------------------------------------
    @classmethod
    def from_matrix(cls, ring: GradedRing, matrix: Sequence[Sequence], twists: Sequence[int] | None = None):
        """Rows index generators, columns index relations."""
        nrows = len(matrix)
        twists = list(twists) if twists is not None else [0] * nrows
        if len(twists) != nrows:
            raise AlgebraError("need one twist per matrix row")
        ncols = len(matrix[0]) if nrows else 0
        if any(len(r) != ncols for r in matrix):
            raise AlgebraError("ragged matrix")
        F = FreeModule(ring, twists)
        rels = [F.vector([matrix[i][j] for i in range(nrows)]) for j in range(ncols)]
        return cls(ring, F, rels)

    @classmethod
    def cyclic(cls, ring: GradedRing, ideal_gens: Iterable = (), twist: int = 0):
        """R/J (shifted by ``twist``)."""
        F = FreeModule(ring, [twist])
        rels = [F.vector([g]) for g in ideal_gens]
        return cls(ring, F, rels)

    @classmethod
    def free_module(cls, ring: GradedRing, twists: Sequence[int]):
        return cls(ring, FreeModule(ring, twists), ())

    # basic data -------------------------------------------------------------
    @property
    def ngens(self) -> int:
        return self.free.rank

    def hilbert_series(self) -> HilbertSeries:
        return self.relsub.quotient_series()

    def length(self):
        return self.hilbert_series().length()

    def dim(self) -> int:
        return self.hilbert_series().dim()

    def is_zero(self) -> bool:
        return self.hilbert_series().is_zero()

    def nu(self) -> int:
        """Minimal number of generators dim_K M/mM (rank of the constant part of the relations)."""
        if self._nu is None:
            L = self.ring.layout
            xm = L.xmask
            rows = []
            for u in self.relations:
                row = {t & L.cmask: c for t, c in u.items() if not (t >> COMP_BITS) & xm}
                if row:
                    rows.append(row)
            self._nu = self.ngens - rank_mod_p(rows, self.ring.p)
        return self._nu

    def normal_form(self, vec: dict) -> dict:
        return self.relsub.reduce(vec)

    def is_zero_element(self, vec: dict) -> bool:
        return self.relsub.contains(vec)

    def rank(self, ring_dim: int | None = None, base_series: HilbertSeries | None = None):
        """e_d(M)/e_d(R) via leading Hilbert series coefficients (exact rational)."""
        d = self.ring.krull_dim() if ring_dim is None else ring_dim
        if base_series is None:
            base_series = Ideal(self.ring, []).quotient_series()
        num = self.hilbert_series().degree_coefficient(d)
        den = base_series.degree_coefficient(d)
        return num / den

    # constructions ----------------------------------------------------------
    def with_relations(self, extra: Iterable[dict]) -> "GradedModule":
        return GradedModule(self.ring, self.free, list(self.relations) + [v for v in extra if v])

    def quotient_by_ideal(self, ideal_gens: Iterable) -> "GradedModule":
        """M/JM."""
        p = self.ring.p
        extra = []
        for g in ideal_gens:
            f = self.ring.coerce(g)
            for i in range(self.ngens):
                extra.append(vmul(f.terms, self.free.basis(i), p))
        return self.with_relations(extra)

    def over_ambient(self) -> "GradedModule":
        """The same module presented over the polynomial ring S."""
        S = self.ring.ambient
        if S is self.ring:
            return self
        F = FreeModule(S, self.free.twists)
        return GradedModule(S, F, list(self.relations) + self.free.ring_seed())

    def over_ring(self, ring: GradedRing) -> "GradedModule":
        """Reinterpret over another ring of the same world (relations must be compatible)."""
        F = FreeModule(ring, self.free.twists)
        return GradedModule(ring, F, self.relations)

    def shift(self, a: int) -> "GradedModule":
        """M(-a): all generator degrees raised by a."""
        F = FreeModule(self.ring, [t + a for t in self.free.twists])
        cm = self.ring.layout.cmask
        return GradedModule(self.ring, F, [reframe(u, self.free.bases, F.bases, cm) for u in self.relations])

    def minimal_presentation(self) -> "GradedModule":
        if self._minimal is None:
            self._minimal = trim_presentation(self)
        return self._minimal

    def presentation_matrix(self) -> list:
        """Rows = generators, columns = relations, as strings."""
        cols = [self.free.format(u) for u in self.relations]
        return [[c[i] for c in cols] for i in range(self.ngens)]

    def __repr__(self):
        return f"GradedModule({self.ngens} generators, {len(self.relations)} relations over {self.ring!r})"


def direct_sum(*mods: GradedModule) -> GradedModule:
    ring = mods[0].ring
    twists = [t for M in mods for t in M.free.twists]
    F = FreeModule(ring, twists)
    cm = ring.layout.cmask
    rels = []
    off = 0
    for M in mods:
        dst = F.bases[off:off + M.ngens]
        rels += [reframe(u, M.free.bases, dst, cm) for u in M.relations]
        off += M.ngens
    return GradedModule(ring, F, rels)


def tensor_product(M: GradedModule, N: GradedModule) -> GradedModule:
    """M ⊗ N over the common ring (generators e_i ⊗ f_j numbered i*n + j)."""
    ring = M.ring
    if not ring.same_world(N.ring):
        raise AlgebraError("modules live over different rings")
    m, n = M.ngens, N.ngens
    F = FreeModule(ring, [a + b for a in M.free.twists for b in N.free.twists])
    cm = ring.layout.cmask
    rels = []
    for j in range(n):
        dst = [F.bases[i * n + j] for i in range(m)]
        rels += [reframe(u, M.free.bases, dst, cm) for u in M.relations]
    for i in range(m):
        dst = [F.bases[i * n + j] for j in range(n)]
        rels += [reframe(u, N.free.bases, dst, cm) for u in N.relations]
    # a module over a quotient ring contributes its ring relations explicitly
    target = ring
    if M.ring is not N.ring and M.ring.relations != N.ring.relations:
        target = ring.ambient
        if M.ring.relations:
            rels += FreeModule(M.ring, F.twists).ring_seed()
        if N.ring.relations:
            rels += FreeModule(N.ring, F.twists).ring_seed()
        F = FreeModule(target, F.twists)
    return GradedModule(target, F, rels)


def trim_presentation(M: GradedModule) -> GradedModule:
    """Remove generators killed by relations with a unit entry (Gaussian elimination on constants)."""
    ring = M.ring
    L = ring.layout
    p = ring.p
    cm, xm = L.cmask, L.xmask
    bases = M.free.bases
    rels = [dict(u) for u in M.relations]
    alive = [True] * len(rels)
    index: dict = {}
    for k, u in enumerate(rels):
        for t in u:
            index.setdefault(t & cm, set()).add(k)
    removed = set()

    def constant_comp(u):
        best = None
        for t in u:
            if not (t >> COMP_BITS) & xm:
                c = t & cm
                if best is None or c < best:
                    best = c
        return best

    for k in range(len(rels)):
        if not alive[k]:
            continue
        u = rels[k]
        j = constant_comp(u)
        if j is None:
            continue
        # e_j = -(1/c)(u - c e_j); substitute into the other relations
        c = u[bases[j]]
        inv = pow(c, -1, p)
        alive[k] = False
        for t in u:
            index.get(t & cm, set()).discard(k)
        removed.add(j)
        for k2 in sorted(index.get(j, ())):
            w = rels[k2]
            wj = {t - bases[j]: a for t, a in w.items() if (t & cm) == j}
            if not wj:
                continue
            old = set(t & cm for t in w)
            prod = vmul(wj, u, p)
            neww = vadd(w, prod, p, scale=-inv)
            rels[k2] = neww
            new = set(t & cm for t in neww)
            for comp in old - new:
                index.get(comp, set()).discard(k2)
            for comp in new - old:
                index.setdefault(comp, set()).add(k2)
            if not neww:
                alive[k2] = False
        index.pop(j, None)
        # later relations may have changed; a relation that became constant is handled in turn
    keep = [i for i in range(M.ngens) if i not in removed]
    newF = FreeModule(ring, [M.free.twists[i] for i in keep])
    pos = {old: new for new, old in enumerate(keep)}
    out = []
    seen = set()
    for k, u in enumerate(rels):
        if not alive[k] or not u:
            continue
        v = {t - bases[t & cm] + newF.bases[pos[t & cm]]: a for t, a in u.items()}
        key = frozenset(v.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(v)
    T = GradedModule(ring, newF, out)
    # unit entries created by substitution: repeat until stable
    if any(constant_comp(v) is not None for v in out):
        return trim_presentation(T)
    return T


def subquotient_module(N: Submodule, W: Submodule) -> GradedModule:
    """The module N/W for submodules W ⊆ N of the same free module."""
    F = N.free
    gens = select_minimal(F, list(N.gens) or [], W.groebner())
    G = FreeModule(N.ring, [F.degree(g) for g in gens])
    rels = kernel_vectors(G, F, gens, W.groebner())
    # drop the I*G part, which is implied
    seed = Submodule(G, ()).reducer() if G.ring.relations else None
    keep = []
    for r in rels:
        if seed is not None and not seed.reduce(r, full=False):
            continue
        keep.append(r)
    mod = GradedModule(N.ring, G, keep)
    mod.generators_in_ambient = gens
    return mod


class ModuleMap:
    """Homogeneous map between free modules; ``columns[j]`` is the image of e_j."""

    def __init__(self, source: FreeModule, target: FreeModule, columns: Sequence[dict]):
        if len(columns) != source.rank:
            raise AlgebraError("one column per source generator is required")
        for j, col in enumerate(columns):
            if col and target.degree(col) != source.twists[j]:
                raise AlgebraError(f"column {j} is not of degree {source.twists[j]}")
        self.source = source
        self.target = target
        self.columns = tuple(columns)

    @classmethod
    def from_matrix(cls, ring, matrix, source_twists=None, target_twists=None):
        """Rows index target generators; twists inferred when omitted."""
        nrows = len(matrix)
        ncols = len(matrix[0]) if nrows else 0
        tt = list(target_twists) if target_twists is not None else [0] * nrows
        T = FreeModule(ring, tt)
        cols = [T.vector([matrix[i][j] for i in range(nrows)]) for j in range(ncols)]
        if source_twists is None:
            source_twists = [T.degree(c) if c else 0 for c in cols]
        return cls(FreeModule(ring, source_twists), T, cols)

    def apply(self, vec: dict) -> dict:
        ring = self.source.ring
        cm = ring.layout.cmask
        p = ring.p
        out: dict = {}
        for t, c in vec.items():
            j = t & cm
            m = t - self.source.bases[j]
            for s, b in self.columns[j].items():
                u = s + m
                v = (out.get(u, 0) + c * b) % p
                if v:
                    out[u] = v
                else:
                    out.pop(u, None)
        return out

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other."""
        return ModuleMap(other.source, self.target, [self.apply(c) for c in other.columns])

    def image(self) -> Submodule:
        return Submodule(self.target, self.columns)


# operations ----------------------------------------------------------------
def syzygy_kernel(phi: ModuleMap) -> Submodule:
    """ker(phi) as a submodule of the source (its preimage in S^n)."""
    ker = kernel_vectors(phi.source, phi.target, phi.columns)
    return Submodule(phi.source, ker, gb=ker)


def subquotient(A_gens: Iterable[dict], B: GradedModule) -> GradedModule:
    """B/A for A generated by the given vectors in the generator frame of B."""
    return B.with_relations(A_gens)


def colon(A: Submodule | Iterable[dict], B: GradedModule, J) -> Submodule:
    """{b in B : J b ⊆ A} as a submodule of the generator frame of B (preimage)."""
    ring = B.ring
    F = B.free
    if isinstance(A, Submodule):
        agens = list(A.gens)
    else:
        agens = list(A)
    if isinstance(J, Ideal):
        jgens = list(J.gens)
    else:
        jgens = [ring.coerce(f) for f in J]
    if not jgens:
        return Submodule(F, [F.basis(i) for i in range(F.rank)])
    n = F.rank
    # copy k of F is shifted down by deg f_k so that v -> (f_1 v, ..., f_r v) has degree 0
    tgt = FreeModule(ring, [a - g.degree() for g in jgens for a in F.twists])
    cm = ring.layout.cmask
    p = ring.p
    blocks = [tgt.bases[k * n:(k + 1) * n] for k in range(len(jgens))]
    imgs = []
    for i in range(n):
        v: dict = {}
        for g, blk in zip(jgens, blocks):
            v.update(reframe(vmul(g.terms, F.basis(i), p), F.bases, blk, cm))
        imgs.append(v)
    rels = [reframe(u, F.bases, blk, cm) for blk in blocks for u in list(B.relations) + agens]
    ker = kernel_vectors(F, tgt, imgs, rels)
    return Submodule(F, ker, gb=ker)


def ideal_colon(I: Ideal, J) -> Ideal:
    """I :_R J as an ideal (minimal generators)."""
    ring = I.ring
    M = GradedModule.cyclic(ring, [])
    sub = colon([M.free.vector([g]) for g in I.gens], M, J)
    gens = sub.minimal_generators()
    return Ideal(ring, [M.free.entries(v)[0] for v in gens])


def min_generators(M: GradedModule) -> int:
    return M.nu()


def graded_length(M):
    """Length of a module (or of R/I for an Ideal); INFINITE if positive dimensional."""
    if isinstance(M, Ideal):
        return M.quotient_length()
    return M.length()


def rank(M: GradedModule, certify: bool | None = None) -> dict:
    """Rank via multiplicity ratio with a certification label."""
    d = M.ring.krull_dim()
    r = M.rank(d)
    domain = M.ring.domain if certify is None else certify
    return {
        "value": r,
        "integer": Fraction(r).denominator == 1,
        "certified": bool(domain),
        "label": "rank" if domain else "e-ratio only, rank not certified",
    }
