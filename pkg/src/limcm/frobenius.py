"""Frobenius in characteristic p: bracket powers, the Peskine-Szpiro functor,
pushforwards F^n_*(M) and Hilbert-Kunz series.

The pushforward of M = F/U over R = S/I is presented over S: F^n_*(S^m) is
free on x^r e_j with r in the box [0, q)^v, and F^n_*(U + I F) is generated
by the products x^r u.  Writing a term x^e e_j of x^r u as
x^{floor(e/q)} * (x^{e mod q} e_j) gives the relation in that basis.  The
generators split into direct summands by degree residues mod q.
"""
from __future__ import annotations

from itertools import product
from typing import Sequence

from .algebra.hilbert import HilbertSeries
from .algebra.ideal import Ideal
from .algebra.ring import MAX_EXP, AlgebraError, GradedRing
from .complexes import koszul_lengths, local_cohomology_lengths
from .modules import FreeModule, GradedModule, direct_sum


def frobenius_power(ring: GradedRing, n: int) -> int:
    if n < 0:
        raise AlgebraError("Frobenius level must be nonnegative")
    return ring.p ** n


def bracket_power(I: Ideal, n: int) -> Ideal:
    """I^{[q]}, q = p^n, generated by the q-th powers of the given generators."""
    q = frobenius_power(I.ring, n)
    return I.bracket(q)


def frobenius_functor(M: GradedModule, n: int) -> GradedModule:
    """Coker of the presentation matrix with entries raised to the q-th power; twists times q."""
    ring = M.ring
    q = frobenius_power(ring, n)
    L = ring.layout
    cm = L.cmask
    F = M.free
    G = FreeModule(ring, [q * a for a in F.twists])
    rels = []
    for u in M.relations:
        v = {}
        for t, c in u.items():
            k = t & cm
            m = t - F.bases[k]
            if max(L.exps(m), default=0) * q > MAX_EXP:
                raise AlgebraError("exponent overflow in Frobenius power")
            v[G.bases[k] + m * q] = c
        rels.append(v)
    return GradedModule(ring, G, rels)


class PushforwardModule:
    """F^n_*(M) as a direct sum of graded summands over R (each minimally presented)."""

    def __init__(self, source: GradedModule, n: int, summands: list, keys: list, box_size: int, raw_gens: int):
        self.source = source
        self.n = n
        self.q = source.ring.p ** n
        self.summands = summands
        self.keys = keys
        self.box_size = box_size
        self.raw_generators = raw_gens

    @property
    def ring(self):
        return self.source.ring

    def nu(self) -> int:
        return sum(S.nu() for S in self.summands)

    def length(self):
        tot = 0
        for S in self.summands:
            v = S.length()
            if not isinstance(v, int):
                return v
            tot += v
        return tot

    def hilbert_series(self) -> HilbertSeries:
        out = HilbertSeries({}, self.ring.weights)
        for S in self.summands:
            out = out + S.hilbert_series()
        return out

    def dim(self) -> int:
        return self.hilbert_series().dim()

    def rank(self, ring_dim: int | None = None):
        d = self.ring.krull_dim() if ring_dim is None else ring_dim
        base = Ideal(self.ring, []).quotient_series()
        return self.hilbert_series().degree_coefficient(d) / base.degree_coefficient(d)

    def koszul_lengths(self, x: Sequence) -> list:
        """Koszul homology lengths, additive over the summands."""
        tot = [0] * (len(x) + 1)
        for S in self.summands:
            h = koszul_lengths(x, S)
            for i, v in enumerate(h):
                tot[i] = v if not isinstance(v, int) or not isinstance(tot[i], int) else tot[i] + v
        return tot

    def local_cohomology_lengths(self, j_max: int) -> list:
        tot = [0] * (j_max + 1)
        for S in self.summands:
            h = local_cohomology_lengths(S, j_max)
            for i, v in enumerate(h):
                tot[i] = v if not isinstance(v, int) or not isinstance(tot[i], int) else tot[i] + v
        return tot

    def as_module(self) -> GradedModule:
        return direct_sum(*self.summands) if self.summands else GradedModule(self.ring, FreeModule(self.ring, []), ())

    def __repr__(self):
        return f"F^{self.n}_*({self.source!r}): {len(self.summands)} summands, nu={self.nu()}"


def _split_keys_allowed(M: GradedModule) -> bool:
    """Multigraded splitting needs multihomogeneous relations with generators in multidegree 0."""
    ring = M.ring
    if not ring.multigrading:
        return False
    L = ring.layout
    for u in M.relations:
        md = {ring.multidegree(t - M.free.bases[t & L.cmask]) for t in u}
        if len(md) != 1:
            return False
    return True


def pushforward(M: GradedModule, n: int, multigraded: bool = True, trim: bool = True) -> PushforwardModule:
    """Presentation of F^n_*(M) over R, split by degree (and multidegree) residues mod q."""
    if n < 0:
        raise AlgebraError("Frobenius level must be nonnegative")
    ring = M.ring
    L = ring.layout
    p = ring.p
    q = p ** n
    v = ring.nvars
    w = ring.weights
    F = M.free
    cm = L.cmask
    use_md = multigraded and _split_keys_allowed(M)
    box = list(product(range(q), repeat=v))
    # generator index: (r, j) -> (summand key, position, twist)
    keyed: dict = {}
    gen_of: dict = {}
    for j, a in enumerate(F.twists):
        for r in box:
            D = sum(ri * wi for ri, wi in zip(r, w)) + a
            key = (D % q,)
            if use_md:
                key += tuple(sum(row[i] * r[i] for i in range(v)) % q for row in ring.multigrading)
            keyed.setdefault(key, []).append((r, j, D // q))
    keys = sorted(keyed)
    frames = []
    for kk, key in enumerate(keys):
        lst = keyed[key]
        Fk = FreeModule(ring, [tw for _, _, tw in lst])
        for pos, (r, j, tw) in enumerate(lst):
            gen_of[(r, j)] = (kk, pos)
        frames.append(Fk)
    # relations x^r u for u in U and I*e_j
    rel_vectors = list(M.relations)
    for g in ring.relations:
        for j in range(F.rank):
            rel_vectors.append({m + F.bases[j]: c for m, c in g.terms.items()})
    rels: list = [[] for _ in keys]
    for u in rel_vectors:
        terms = [(L.exps(t - F.bases[t & cm]), t & cm, c) for t, c in u.items()]
        for r in box:
            vec: dict = {}
            kk = None
            for e, j, c in terms:
                ee = tuple(a + b for a, b in zip(e, r))
                rem = tuple(x % q for x in ee)
                quo = [x // q for x in ee]
                k2, pos = gen_of[(rem, j)]
                if kk is None:
                    kk = k2
                elif kk != k2:
                    raise AlgebraError("relation is not homogeneous for the splitting")
                t = frames[k2].bases[pos] + L.mono(quo)
                vec[t] = (vec.get(t, 0) + c) % p
            vec = {t: c for t, c in vec.items() if c}
            if vec:
                rels[kk].append(vec)
    summands = []
    out_keys = []
    for kk, key in enumerate(keys):
        S = GradedModule(ring, frames[kk], rels[kk])
        if trim:
            S = S.minimal_presentation()
        if S.ngens == 0:
            continue
        summands.append(S)
        out_keys.append(key)
    return PushforwardModule(M, n, summands, out_keys, len(box), len(box) * F.rank)


def nu_pushforward_bracket(M: GradedModule, n: int) -> int:
    """ν(F^n_* M) = ℓ(M/m^{[q]}M) (residue field perfect)."""
    q = frobenius_power(M.ring, n)
    return M.quotient_by_ideal([g.frobenius(q) for g in M.ring.gens()]).length()


def hilbert_kunz(M: GradedModule, I: Ideal | None = None, n_max: int = 3):
    """Series ℓ(M/I^{[p^n]}M) for n = 0..n_max with the estimate value/p^{d n}."""
    from .asymptotics import LengthSeries

    ring = M.ring
    if I is None:
        I = Ideal(ring, ring.gens())
    if not I.is_m_primary():
        raise AlgebraError("Hilbert-Kunz data need an m-primary ideal")
    if n_max < 1:
        raise AlgebraError("n_max must be at least 1")
    d = M.dim()
    vals = {}
    for n in range(n_max + 1):
        q = ring.p ** n
        vals[n] = M.quotient_by_ideal([g.frobenius(q) for g in I.gens]).length()
    series = LengthSeries(ring.p, vals, label="hilbert-kunz")
    from fractions import Fraction
    est = Fraction(vals[n_max], ring.p ** (d * n_max))
    prev = Fraction(vals[n_max - 1], ring.p ** (d * (n_max - 1)))
    return series, {"gamma": est, "previous": prev, "dim": d}
