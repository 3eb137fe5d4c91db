"""Length series over Frobenius levels, growth exponents and CM-type verdicts.

Finite data cannot prove a limit statement, so every verdict carries its
exact ratio tables; the flags only summarize fitted exponents against fixed
thresholds.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra.hilbert import INFINITE, is_finite
from .algebra.ideal import Ideal
from .algebra.ring import AlgebraError, GradedRing
from .complexes import KoszulStats, koszul_lengths, local_cohomology_lengths
from .frobenius import nu_pushforward_bracket, pushforward
from .modules import GradedModule

NEG_INF = float("-inf")
POS_INF = float("inf")

DECAYS = "DECAYS"
BOUNDED = "BOUNDED"
GROWS = "GROWS"
INCONCLUSIVE = "INCONCLUSIVE"

# fitted-exponent thresholds
DECAY_MAX = -0.5
BOUNDED_BAND = 0.3


class LengthSeries:
    """Exact values indexed by Frobenius level n (base p)."""

    def __init__(self, p: int, values, label: str = ""):
        if isinstance(values, dict):
            items = sorted(values.items())
        else:
            items = list(enumerate(values))
        ns = [n for n, _ in items]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise AlgebraError("levels must be strictly increasing")
        self.p = p
        self.ns = ns
        self.values = [v for _, v in items]
        self.label = label

    def __len__(self):
        return len(self.ns)

    def __getitem__(self, n):
        return self.values[self.ns.index(n)]

    def items(self):
        return list(zip(self.ns, self.values))

    @property
    def finite(self) -> bool:
        return all(is_finite(v) for v in self.values)

    def ratio(self, other: "LengthSeries", label: str = "") -> "LengthSeries":
        """Pointwise exact ratio self/other; 0/0 counts as 0 (a vanishing numerator)."""
        out = {}
        for n, a in self.items():
            b = other[n]
            if not is_finite(a) or not is_finite(b):
                out[n] = INFINITE
            elif b == 0:
                if a != 0:
                    raise AlgebraError(f"division by a zero length at level {n}")
                out[n] = Fraction(0)
            else:
                out[n] = Fraction(a, 1) / b
        return LengthSeries(self.p, out, label)

    def as_dict(self):
        return {"p": self.p, "label": self.label, "values": dict(self.items())}

    def __repr__(self):
        return f"LengthSeries(p={self.p}, {dict(self.items())})"


def _logp(v, p: int) -> float:
    if isinstance(v, Fraction):
        return (math.log(v.numerator) - math.log(v.denominator)) / math.log(p)
    return math.log(v) / math.log(p)


def fit_exponent(s: LengthSeries) -> float:
    """Least-squares slope of log_p(value) against n over the last max(2, count-1) points.

    All-zero series and series ending in zero give -inf; a window with fewer
    than two positive values (after a zero) gives +inf.
    """
    if len(s) < 2:
        raise AlgebraError("fit_exponent needs at least two points")
    if not s.finite:
        raise AlgebraError("cannot fit a series with infinite entries")
    if all(v == 0 for v in s.values) or s.values[-1] == 0:
        return NEG_INF
    k = max(2, len(s) - 1)
    window = s.items()[-k:]
    pts = [(n, v) for n, v in window if v > 0]
    if len(pts) < 2:
        return POS_INF
    xs = [float(n) for n, _ in pts]
    ys = [_logp(v, s.p) for _, v in pts]
    slope, _ = statistics.linear_regression(xs, ys)
    return slope


def classify_exponent(e: float) -> str:
    if e <= DECAY_MAX:
        return DECAYS
    if abs(e) < BOUNDED_BAND:
        return BOUNDED
    if e >= BOUNDED_BAND:
        return GROWS
    return INCONCLUSIVE


def strictly_decreasing(s: LengthSeries) -> bool:
    return all(b < a for a, b in zip(s.values, s.values[1:]))


@dataclass
class RatioDiagnostic:
    numerator: LengthSeries
    denominator: LengthSeries
    ratios: LengthSeries = None
    exponent: float = None
    verdict: str = None

    def __post_init__(self):
        self.ratios = self.numerator.ratio(self.denominator, label=f"{self.numerator.label}/{self.denominator.label}")
        if not self.ratios.finite:
            self.exponent = None
            self.verdict = INCONCLUSIVE
        else:
            self.exponent = fit_exponent(self.ratios)
            self.verdict = classify_exponent(self.exponent)

    @property
    def decays(self) -> bool:
        return self.verdict == DECAYS

    def as_dict(self):
        return {
            "numerator": dict(self.numerator.items()),
            "denominator": dict(self.denominator.items()),
            "ratios": dict(self.ratios.items()),
            "exponent": self.exponent,
            "verdict": self.verdict,
        }


@dataclass
class CMVerdict:
    diagnostics: dict = field(default_factory=dict)
    limCM: bool | None = None
    weaklyLimCM: bool | None = None
    stronglyLimCM: bool | None = None
    status: str = "ok"
    tables: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        # lim CM implies weakly lim CM
        if self.limCM:
            self.weaklyLimCM = True

    def as_dict(self):
        return {
            "limCM": self.limCM,
            "weaklyLimCM": self.weaklyLimCM,
            "stronglyLimCM": self.stronglyLimCM,
            "status": self.status,
            "diagnostics": {k: v.as_dict() for k, v in self.diagnostics.items()},
            "tables": self.tables,
            "notes": list(self.notes),
        }


# module families -------------------------------------------------------------
class FrobeniusFamily:
    """M_n = F^n_*(M).

    ``route="bracket"`` uses H_i(x; F^n_* M) = F^n_* H_i(x^{[q]}; M) and
    ν(F^n_* M) = ℓ(M/m^{[q]} M), valid over F_p; ``route="explicit"`` builds
    the pushforward presentation (feasible for small q^v).
    """

    def __init__(self, M: GradedModule, route: str = "bracket"):
        if route not in ("bracket", "explicit"):
            raise AlgebraError(f"unknown route {route!r}")
        self.M = M
        self.ring = M.ring
        self.p = M.ring.p
        self.route = route
        self._push: dict = {}
        self._cache: dict = {}

    def describe(self):
        return {"kind": "frobenius", "route": self.route}

    def pushforward(self, n: int):
        if n not in self._push:
            self._push[n] = pushforward(self.M, n)
        return self._push[n]

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def nu(self, n: int) -> int:
        if self.route == "bracket":
            return self._memo(("nu", n), lambda: nu_pushforward_bracket(self.M, n))
        return self._memo(("nu", n), lambda: self.pushforward(n).nu())

    def koszul(self, x: Sequence, n: int) -> list:
        key = ("koszul", tuple(str(self.ring.coerce(f)) for f in x), n)
        if self.route == "bracket":
            q = self.p ** n
            return self._memo(key, lambda: koszul_lengths([self.ring.coerce(f).frobenius(q) for f in x], self.M))
        return self._memo(key, lambda: self.pushforward(n).koszul_lengths(x))

    def rank(self, n: int):
        if self.route == "bracket":
            d = self.ring.krull_dim()
            return self._memo(("rank", n), lambda: Fraction(self.p) ** (d * n) * self.M.rank(d))
        return self._memo(("rank", n), lambda: self.pushforward(n).rank())

    def local_cohomology(self, n: int, j_max: int) -> list:
        if self.route == "bracket":
            # restriction of scalars along Frobenius preserves these lengths (perfect residue field)
            return self._memo(("lc", j_max), lambda: local_cohomology_lengths(self.M, j_max))
        return self._memo(("lc", n, j_max), lambda: self.pushforward(n).local_cohomology_lengths(j_max))

    def dim(self, n: int) -> int:
        return self.M.dim()


class ExplicitFamily:
    """A user-given sequence; each member is a list of direct summands."""

    def __init__(self, p: int, members: dict):
        self.p = p
        self.members = {n: (list(v) if isinstance(v, (list, tuple)) else [v]) for n, v in members.items()}
        first = next(iter(self.members.values()))
        self.ring = first[0].ring
        self._cache: dict = {}

    def describe(self):
        return {"kind": "explicit", "levels": sorted(self.members)}

    def _sum(self, vals):
        tot = 0
        for v in vals:
            if not is_finite(v):
                return INFINITE
            tot += v
        return tot

    def nu(self, n: int) -> int:
        return sum(S.nu() for S in self.members[n])

    def koszul(self, x: Sequence, n: int) -> list:
        key = ("koszul", tuple(str(self.ring.coerce(f)) for f in x), n)
        if key not in self._cache:
            parts = [koszul_lengths(x, S) for S in self.members[n]]
            self._cache[key] = [self._sum(col) for col in zip(*parts)]
        return self._cache[key]

    def rank(self, n: int):
        d = self.ring.krull_dim()
        return sum((S.rank(d) for S in self.members[n]), Fraction(0))

    def local_cohomology(self, n: int, j_max: int) -> list:
        parts = [local_cohomology_lengths(S, j_max) for S in self.members[n]]
        return [self._sum(col) for col in zip(*parts)]

    def dim(self, n: int) -> int:
        return max(S.dim() for S in self.members[n])


def validate_sop(R: GradedRing, x: Sequence) -> list:
    xs = [R.coerce(f) for f in x]
    d = R.krull_dim()
    if len(xs) != d:
        raise AlgebraError(f"a system of parameters needs {d} elements, got {len(xs)}")
    if Ideal(R, xs).quotient_dim() != 0:
        raise AlgebraError("the elements do not form a system of parameters")
    return xs


def limcm_verdict(R: GradedRing, family, x: Sequence, levels: Sequence[int], alpha: str = "NU") -> CMVerdict:
    """Ratios h_i(x; M_n)/α(M_n) for i >= 1, with the χ_1 and H_0 variants."""
    xs = validate_sop(R, x)
    if len(levels) < 2:
        raise AlgebraError("need at least two levels")
    alpha = alpha.upper()
    if alpha not in ("NU", "RANK"):
        raise AlgebraError("alpha must be NU or RANK")
    p = family.p
    k = len(xs)
    hs = {n: family.koszul(xs, n) for n in levels}
    stats = {n: KoszulStats(hs[n]) for n in levels}
    if alpha == "NU":
        den = LengthSeries(p, {n: family.nu(n) for n in levels}, "nu")
    else:
        den = LengthSeries(p, {n: family.rank(n) for n in levels}, "rank")
    h0 = LengthSeries(p, {n: hs[n][0] for n in levels}, "h0")
    diags = {}
    ho_diags = {}
    for i in range(1, k + 1):
        num = LengthSeries(p, {n: hs[n][i] for n in levels}, f"h{i}")
        diags[f"h{i}"] = RatioDiagnostic(num, den)
        ho_diags[f"h{i}"] = RatioDiagnostic(num, h0)
    chi1 = LengthSeries(p, {n: stats[n].chi1 for n in levels}, "chi1")
    weak = RatioDiagnostic(chi1, den)
    diags["chi1"] = weak
    lim = all(diags[f"h{i}"].decays for i in range(1, k + 1))
    ho_lim = all(d.decays for d in ho_diags.values())
    inconclusive = any(diags[f"h{i}"].verdict == INCONCLUSIVE for i in range(1, k + 1))
    verdict = CMVerdict(diagnostics=diags, limCM=lim, weaklyLimCM=weak.decays,
                        status="inconclusive" if inconclusive and not lim else "ok")
    e_over_h0 = {n: (Fraction(stats[n].chi, hs[n][0]) if hs[n][0] else None) for n in levels}
    verdict.tables = {
        "levels": list(levels),
        "koszul": {n: hs[n] for n in levels},
        "alpha": alpha,
        "denominator": dict(den.items()),
        "ho_limCM": ho_lim,
        "ho_agrees": ho_lim == lim,
        "e_over_h0": e_over_h0,
    }
    return verdict


def strong_verdict(R: GradedRing, family, levels: Sequence[int]) -> CMVerdict:
    """Ratios ℓ(H^j_m(M_n))/ν(M_n) for j < d; INCONCLUSIVE when a length is infinite."""
    d = R.krull_dim()
    p = family.p
    if len(levels) < 2:
        raise AlgebraError("need at least two levels")
    lc = {n: family.local_cohomology(n, max(d - 1, 0)) for n in levels}
    nu = LengthSeries(p, {n: family.nu(n) for n in levels}, "nu")
    tables = {"levels": list(levels), "local_cohomology": {n: lc[n][:d] for n in levels},
              "nu": dict(nu.items())}
    if any(not is_finite(v) for n in levels for v in lc[n][:d]):
        return CMVerdict(stronglyLimCM=None, status="inconclusive", tables=tables,
                         notes=["some H^j_m(M_n) with j < d has infinite length"])
    diags = {}
    for j in range(d):
        num = LengthSeries(p, {n: lc[n][j] for n in levels}, f"H{j}")
        diags[f"H{j}"] = RatioDiagnostic(num, nu)
        tables[f"H{j}_exponent"] = fit_exponent(num)
    tables["nu_exponent"] = fit_exponent(nu)
    strong = all(dg.decays for dg in diags.values())
    return CMVerdict(diagnostics=diags, stronglyLimCM=strong, tables=tables)


def combined_verdict(R: GradedRing, family, x: Sequence, levels: Sequence[int], alpha: str = "NU") -> CMVerdict:
    """limcm_verdict plus strong_verdict, with the strong => lim implication recorded."""
    v = limcm_verdict(R, family, x, levels, alpha)
    s = strong_verdict(R, family, levels)
    v.stronglyLimCM = s.stronglyLimCM
    v.diagnostics.update(s.diagnostics)
    v.tables["strong"] = s.tables
    v.tables["strong_implies_lim"] = (not s.stronglyLimCM) or bool(v.limCM)
    v.notes += s.notes
    return v


def sop_independence(R: GradedRing, x: Sequence, y: Sequence, family, levels: Sequence[int]) -> dict:
    """Per-i ratios σ_i(x; M_n)/σ_i(y; M_n) and reciprocals; PASS if neither grows."""
    xs = validate_sop(R, x)
    ys = validate_sop(R, y)
    p = family.p
    sx = {n: KoszulStats(family.koszul(xs, n)).sigma for n in levels}
    sy = {n: KoszulStats(family.koszul(ys, n)).sigma for n in levels}
    k = len(xs)
    report = {"levels": list(levels), "per_i": {}, "status": "PASS"}
    for i in range(k + 1):
        fwd, back = {}, {}
        for n in levels:
            a, b = sx[n][i], sy[n][i]
            if a == 0 and b == 0:
                fwd[n] = back[n] = Fraction(1)
            elif a == 0 or b == 0:
                fwd[n] = Fraction(a) / b if b else None
                back[n] = Fraction(b) / a if a else None
            else:
                fwd[n] = Fraction(a, b)
                back[n] = Fraction(b, a)
        entry = {"sigma_x": {n: sx[n][i] for n in levels}, "sigma_y": {n: sy[n][i] for n in levels},
                 "ratio": fwd, "reciprocal": back}
        ok = True
        for series in (fwd, back):
            if any(v is None for v in series.values()):
                ok = False
                continue
            e = fit_exponent(LengthSeries(p, series))
            ok = ok and e < BOUNDED_BAND
        finite = [v for v in list(fwd.values()) + list(back.values()) if v is not None]
        entry["max_ratio"] = max(finite) if finite else None
        entry["status"] = "PASS" if ok else "FAIL"
        if not ok:
            report["status"] = "FAIL"
        report["per_i"][i] = entry
    return report
