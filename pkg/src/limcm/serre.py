"""Serre intersection multiplicities over a polynomial ring T and the limit
formula through Frobenius pushforwards of T/P and T/Q."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra.ideal import Ideal
from .algebra.ring import AlgebraError, GradedRing
from .complexes import koszul_complex, koszul_stats, tor_lengths
from .frobenius import pushforward
from .modules import GradedModule, tensor_product


@dataclass
class SerrePair:
    T: GradedRing
    P: Ideal
    Q: Ideal
    P_domain: bool = True
    Q_domain: bool = True
    dim_P: int = field(init=False)
    dim_Q: int = field(init=False)

    def __post_init__(self):
        if self.T.relations:
            raise AlgebraError("the ambient ring must be a polynomial ring")
        if not isinstance(self.P, Ideal):
            self.P = Ideal(self.T, self.P)
        if not isinstance(self.Q, Ideal):
            self.Q = Ideal(self.T, self.Q)
        if not (self.P + self.Q).is_m_primary():
            raise AlgebraError("P + Q must be primary to the maximal ideal")
        self.dim_P = self.P.quotient_dim()
        self.dim_Q = self.Q.quotient_dim()

    @classmethod
    def parse(cls, T: GradedRing, P: Sequence, Q: Sequence, **kw) -> "SerrePair":
        return cls(T, Ideal(T, P), Ideal(T, Q), **kw)

    @property
    def dim(self) -> int:
        return self.T.nvars

    @property
    def proper(self) -> bool:
        """dim T/P + dim T/Q = dim T (otherwise the deficient case)."""
        return self.dim_P + self.dim_Q == self.dim

    def modules(self):
        return GradedModule.cyclic(self.T, self.P.gens), GradedModule.cyclic(self.T, self.Q.gens)

    def describe(self):
        return {"P": [str(g) for g in self.P.gens], "Q": [str(g) for g in self.Q.gens],
                "dim_T_mod_P": self.dim_P, "dim_T_mod_Q": self.dim_Q,
                "dimension_sum": "equal" if self.proper else "less"}


@dataclass
class SerreReport:
    tor: list
    chi: int
    partial_chi: list
    limit_series: dict = field(default_factory=dict)
    gaps: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def as_dict(self):
        return {"tor": self.tor, "chi": self.chi, "partial_chi": self.partial_chi,
                "limit_series": self.limit_series, "gaps": self.gaps, "flags": self.flags}


def euler_characteristic(M: GradedModule, N: GradedModule) -> tuple[int, list]:
    """χ(M, N) = Σ (-1)^i ℓ(Tor_i(M, N)) over a polynomial ring (needs finite-length Tor)."""
    D = M.ring.nvars
    tor = tor_lengths(M, N, D)
    if any(not isinstance(v, int) for v in tor):
        raise AlgebraError("Tor modules must have finite length")
    return sum((-1) ** i * v for i, v in enumerate(tor)), tor


def _partial(tor: list) -> list:
    return [sum((-1) ** (j - i) * tor[j] for j in range(i, len(tor))) for i in range(len(tor))]


def serre_chi(pair: SerrePair) -> SerreReport:
    MP, MQ = pair.modules()
    chi, tor = euler_characteristic(MP, MQ)
    return SerreReport(tor, chi, _partial(tor), flags={"dimension_sum": "equal" if pair.proper else "less"})


# Koszul multiplicities ------------------------------------------------------
def hilbert_samuel_multiplicity(x: Sequence, M: GradedModule, t_max: int = 12) -> int:
    """d-th finite difference of t -> ℓ(M/(x)^t M), d = dim R, once it has stabilized."""
    R = M.ring
    d = R.krull_dim()
    I = Ideal(R, x)
    vals = []
    for t in range(1, t_max + 1):
        vals.append(M.quotient_by_ideal(I.power(t).gens).length())
        if len(vals) >= d + 3:
            diffs = list(vals)
            for _ in range(d):
                diffs = [b - a for a, b in zip(diffs, diffs[1:])]
            if diffs[-1] == diffs[-2] == diffs[-3]:
                return diffs[-1]
    raise AlgebraError("Hilbert-Samuel function did not stabilize; raise t_max")


def koszul_multiplicity(x: Sequence, M: GradedModule, cross_check: bool = True) -> int:
    """χ(x; M); equals e((x); M) if dim M = d and 0 if dim M < d."""
    R = M.ring
    xs = [R.coerce(f) for f in x]
    d = R.krull_dim()
    if len(xs) != d or Ideal(R, xs).quotient_dim() != 0:
        raise AlgebraError("x is not a system of parameters")
    chi = koszul_stats(xs, M).chi
    if cross_check:
        e = hilbert_samuel_multiplicity(xs, M)
        if e != chi:
            raise AlgebraError(f"Koszul characteristic {chi} disagrees with Hilbert-Samuel value {e}")
    return chi


# the limit series -----------------------------------------------------------------
def _rank_over(push, base: GradedModule, dim: int) -> Fraction:
    return push.hilbert_series().degree_coefficient(dim) / base.hilbert_series().degree_coefficient(dim)


def pushforward_tensor_length(pair: SerrePair, n: int) -> int:
    """ℓ(F^n_*(T/P) ⊗_T F^n_*(T/Q)), summed over pairs of direct summands."""
    MP, MQ = pair.modules()
    A = pushforward(MP, n)
    B = pushforward(MQ, n)
    tot = 0
    for S in A.summands:
        for U in B.summands:
            v = tensor_product(S, U).length()
            if not isinstance(v, int):
                raise AlgebraError("tensor product of pushforwards has positive dimension")
            tot += v
    return tot


def pos_limit_series(pair: SerrePair, n_max: int, n_min: int = 0, chi: int | None = None) -> SerreReport:
    """Terms ℓ(M_n ⊗ N_n)/(rank M_n · rank N_n) with M_n = F^n_*(T/P), N_n = F^n_*(T/Q)."""
    base = serre_chi(pair) if chi is None else None
    chi_val = base.chi if base is not None else chi
    MP, MQ = pair.modules()
    series = {}
    gaps = {}
    chis = {}
    for n in range(n_min, n_max + 1):
        A = pushforward(MP, n)
        B = pushforward(MQ, n)
        rA = _rank_over(A, MP, pair.dim_P)
        rB = _rank_over(B, MQ, pair.dim_Q)
        ln = pushforward_tensor_length(pair, n)
        term = Fraction(ln) / (rA * rB)
        series[n] = term
        target = chi_val if pair.proper else 0
        gaps[n] = abs(term - target)
        if not pair.proper:
            # Tor_0 alone need not vanish in the limit; the normalized χ(M_n, N_n) does
            chis[n] = Fraction(sum(euler_characteristic(S, U)[0] for S in A.summands
                                   for U in B.summands)) / (rA * rB)
    ns = sorted(series)
    flags = {
        "dimension_sum": "equal" if pair.proper else "less",
        "all_terms_at_least_1": all(series[n] >= 1 for n in ns) if pair.proper else None,
        "gap_nonincreasing": all(gaps[b] <= gaps[a] for a, b in zip(ns, ns[1:])),
    }
    if not pair.proper:
        flags["note"] = "deficient dimensions: chi vanishes"
        flags["normalized_chi"] = chis
        flags["normalized_chi_zero"] = all(v == 0 for v in chis.values())
    tor = base.tor if base is not None else []
    partial = base.partial_chi if base is not None else []
    return SerreReport(tor, chi_val, partial, series, gaps, flags)


# the multiple-Tor inequality ------------------------------------------------------
def _koszul_homology_modules(x, M: GradedModule) -> list:
    K = koszul_complex(x, M)
    return [K.homology_module(r) for r in range(len(x) + 1)]


def tor_bound_check(pair: SerrePair, x: Sequence, y: Sequence, n: int, i_values: Sequence[int] | None = None) -> dict:
    """ℓ(Tor_i(M_n, N_n)) against Σ_{r+s+t=d+i} ℓ(Tor_t(H_r(x; M_n), H_s(y; N_n)))."""
    T = pair.T
    xs = [T.coerce(f) for f in x]
    ys = [T.coerce(f) for f in y]
    if not all(pair.Q.contains(f) for f in xs) or len(xs) != pair.dim_P or \
            Ideal(T, list(pair.P.gens) + xs).quotient_dim() != 0:
        raise AlgebraError("x must lie in Q and map to a system of parameters of T/P")
    if not all(pair.P.contains(f) for f in ys) or len(ys) != pair.dim_Q or \
            Ideal(T, list(pair.Q.gens) + ys).quotient_dim() != 0:
        raise AlgebraError("y must lie in P and map to a system of parameters of T/Q")
    d = pair.dim
    MP, MQ = pair.modules()
    Mn = pushforward(MP, n).as_module().minimal_presentation()
    Nn = pushforward(MQ, n).as_module().minimal_presentation()
    left = tor_lengths(Mn, Nn, d)
    HX = _koszul_homology_modules(xs, Mn)
    HY = _koszul_homology_modules(ys, Nn)
    cross = {}
    for r, Hr in enumerate(HX):
        for s, Hs in enumerate(HY):
            if Hr.is_zero() or Hs.is_zero():
                cross[(r, s)] = [0] * (d + 1)
            else:
                cross[(r, s)] = tor_lengths(Hr, Hs, d)
    ivals = list(i_values) if i_values is not None else list(range(1, d + 1))
    rows = {}
    ok = True
    for i in ivals:
        rhs = 0
        for (r, s), tl in cross.items():
            t = d + i - r - s
            if 0 <= t <= d:
                rhs += tl[t]
        lhs = left[i] if i < len(left) else 0
        rows[i] = {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}
        ok = ok and lhs <= rhs
    return {"n": n, "rows": rows, "status": "PASS" if ok else "FAIL",
            "koszul_x": [H.length() for H in HX], "koszul_y": [H.length() for H in HY]}
