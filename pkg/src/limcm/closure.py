"""Closure diagnostics attached to a module sequence M_n, plus tight-closure
witness checks, monomial integral closure and instance suites for the
closure axioms.

An element u of B is tested against A ⊆ B through the exact series

    diff(n) = ℓ(M_n ⊗ B/A) - ℓ(M_n ⊗ B/(A + Ru)),

compared with α(M_n) (ν or rank).  When B/A has positive dimension the test
is run on the truncations A + m^t B for each t of a finite t-set and the
results are intersected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .algebra.groebner import lead
from .algebra.hilbert import INFINITE, is_finite
from .algebra.ideal import Ideal
from .algebra.ring import AlgebraError, GradedRing, Polynomial
from .asymptotics import NEG_INF, ExplicitFamily, FrobeniusFamily, LengthSeries, fit_exponent
from .frobenius import frobenius_functor
from .modules import GradedModule, ideal_colon, tensor_product, vmul

MEMBER_EVIDENCE = "MEMBER_EVIDENCE"
NON_MEMBER = "NON_MEMBER"
NON_MEMBER_CERTIFIED = "NON_MEMBER_CERTIFIED"
INCONCLUSIVE = "INCONCLUSIVE"

# u is a member when exponent(diff) < exponent(alpha) - MARGIN; verdicts within
# BORDER of that cutoff are left open
MARGIN = 0.5
BORDER = 0.3
DEFAULT_TRUNCATIONS = (2, 4, 8)
DEFAULT_LEVELS = (1, 2, 3)


@dataclass
class ClosureVerdict:
    verdict: str
    series: dict = field(default_factory=dict)
    exponents: dict = field(default_factory=dict)
    certificate: dict | None = None
    truncations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def member(self) -> bool:
        return self.verdict == MEMBER_EVIDENCE

    @property
    def non_member(self) -> bool:
        return self.verdict in (NON_MEMBER, NON_MEMBER_CERTIFIED)

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "series": self.series,
            "exponents": self.exponents,
            "certificate": self.certificate,
            "truncations": list(self.truncations),
            "notes": list(self.notes),
        }


@dataclass
class ClosureQuery:
    """u against A ⊆ B.  ``A`` and ``u`` are vectors in the generator frame of B
    (polynomials are accepted when B is cyclic)."""

    B: GradedModule
    A: list
    u: object
    family: object
    alpha: str = "NU"
    levels: Sequence[int] = DEFAULT_LEVELS
    truncations: Sequence[int] | None = None

    @classmethod
    def for_ideal(cls, R: GradedRing, I, u, family=None, **kw):
        gens = I.gens if isinstance(I, Ideal) else [R.coerce(g) for g in I]
        if family is None:
            family = FrobeniusFamily(GradedModule.cyclic(R, []))
        return cls(GradedModule.cyclic(R, []), list(gens), u, family, **kw)


# lengths of M_n ⊗ C ----------------------------------------------------------
def _module_key(C: GradedModule):
    return (C.free.twists, frozenset(frozenset(u.items()) for u in C.relations))


def _is_ring_itself(M: GradedModule) -> bool:
    return M.ngens == 1 and not M.relations and M.free.twists == (0,)


def family_tensor_length(family, C: GradedModule, n: int):
    """ℓ(M_n ⊗ C) for a finite-length C.

    For Frobenius families on the bracket route this is ℓ(M ⊗ 𝓕^n(C)),
    since F^n_*(M) ⊗ C ≅ F^n_*(M ⊗ 𝓕^n(C)) and the residue field is perfect.
    """
    key = ("closure-length", _module_key(C), n)
    cache = family._cache
    if key in cache:
        return cache[key]
    if isinstance(family, FrobeniusFamily):
        if family.route == "bracket":
            FC = frobenius_functor(C, n)
            val = FC.length() if _is_ring_itself(family.M) else tensor_product(family.M, FC).length()
        else:
            val = _sum_lengths(tensor_product(S, C) for S in family.pushforward(n).summands)
    elif isinstance(family, ExplicitFamily):
        val = _sum_lengths(tensor_product(S, C) for S in family.members[n])
    else:
        raise AlgebraError(f"unsupported family {family!r}")
    cache[key] = val
    return val


def _sum_lengths(mods) -> object:
    tot = 0
    for M in mods:
        v = M.length()
        if not is_finite(v):
            return INFINITE
        tot += v
    return tot


def family_alpha(family, n: int, alpha: str):
    if alpha == "NU":
        return family.nu(n)
    if alpha == "RANK":
        return family.rank(n)
    raise AlgebraError(f"unknown size function {alpha!r}")


# the diagnostic -------------------------------------------------------------
def _as_vector(B: GradedModule, u) -> dict:
    if isinstance(u, dict):
        return u
    if isinstance(u, (list, tuple)):
        return B.free.vector(list(u))
    if B.ngens != 1:
        raise AlgebraError("a polynomial element needs a cyclic ambient module")
    return B.free.vector([u])


def _check_element(B: GradedModule, vec: dict):
    if vec:
        B.free.degree(vec)


def classify_difference(e_diff: float, e_alpha: float) -> str:
    if e_diff == NEG_INF:
        return MEMBER_EVIDENCE
    cutoff = e_alpha - MARGIN
    if e_diff < cutoff - BORDER:
        return MEMBER_EVIDENCE
    if e_diff > cutoff + BORDER:
        return NON_MEMBER
    return INCONCLUSIVE


def _finite_diagnostic(family, C: GradedModule, u: dict, levels, alpha: str) -> dict:
    Cu = C.with_relations([u])
    p = family.p
    base = {n: family_tensor_length(family, C, n) for n in levels}
    sub = {n: family_tensor_length(family, Cu, n) for n in levels}
    diff = LengthSeries(p, {n: base[n] - sub[n] for n in levels}, label="difference")
    al = LengthSeries(p, {n: family_alpha(family, n, alpha) for n in levels}, label=alpha.lower())
    e_diff = fit_exponent(diff)
    e_alpha = fit_exponent(al)
    return {
        "verdict": classify_difference(e_diff, e_alpha),
        "difference": diff.as_dict(),
        "alpha": al.as_dict(),
        "length_B_mod_A": dict(base),
        "exponent_difference": e_diff,
        "exponent_alpha": e_alpha,
        "cutoff": e_alpha - MARGIN,
    }


def _combine(verdicts: Sequence[str]) -> str:
    """Intersection over truncations: one non-member suffices, membership needs all."""
    if any(v == NON_MEMBER for v in verdicts):
        return NON_MEMBER
    if all(v == MEMBER_EVIDENCE for v in verdicts):
        return MEMBER_EVIDENCE
    return INCONCLUSIVE


def closure_diagnostic(q: ClosureQuery) -> ClosureVerdict:
    B = q.B
    levels = sorted(set(q.levels))
    if len(levels) < 2:
        raise AlgebraError("a closure diagnostic needs at least two levels")
    A = [_as_vector(B, a) for a in q.A]
    u = _as_vector(B, q.u)
    for a in A:
        _check_element(B, a)
    _check_element(B, u)
    if isinstance(q.family, ExplicitFamily):
        missing = [n for n in levels if n not in q.family.members]
        if missing:
            raise AlgebraError(f"family has no members at levels {missing}")
    C = B.with_relations(A)
    finite = is_finite(C.length())
    if finite:
        ts = [None]
    else:
        ts = list(q.truncations) if q.truncations else list(DEFAULT_TRUNCATIONS)
    R = B.ring
    series = {}
    exps = {}
    verdicts = []
    for t in ts:
        Ct = C if t is None else C.quotient_by_ideal(Ideal(R, R.gens()).power(t).gens)
        res = _finite_diagnostic(q.family, Ct, u, levels, q.alpha)
        key = "finite" if t is None else f"t={t}"
        series[key] = {k: res[k] for k in ("difference", "alpha", "length_B_mod_A")}
        exps[key] = {"difference": _round(res["exponent_difference"]),
                     "alpha": _round(res["exponent_alpha"]),
                     "cutoff": _round(res["cutoff"]),
                     "verdict": res["verdict"]}
        verdicts.append(res["verdict"])
    notes = []
    if not finite:
        notes.append(f"B/A has positive dimension; truncations A + m^t B used for t in {ts}")
    return ClosureVerdict(_combine(verdicts), series, exps, None,
                          [] if finite else ts, notes)


def _round(x: float):
    return x if x in (NEG_INF, float("inf")) else round(x, 6)


def ideal_closure_diagnostic(R: GradedRing, I, u, family=None, alpha: str = "NU",
                             levels: Sequence[int] = DEFAULT_LEVELS, truncations=None) -> ClosureVerdict:
    return closure_diagnostic(ClosureQuery.for_ideal(R, I, u, family, alpha=alpha, levels=levels,
                                                     truncations=truncations))


# tight closure witnesses ----------------------------------------------------------
def tight_closure_check(R: GradedRing, u, I, c, n_max: int = 1, test_element_declared: bool = True) -> ClosureVerdict:
    """Check c u^{q} ∈ I^{[q]} for q = p^n, n = 0..n_max.

    A failure is a non-membership certificate exactly when c is a test
    element; the declaration is recorded, not verified.
    """
    u = R.coerce(u)
    c = R.coerce(c)
    if c.is_zero():
        raise AlgebraError("the test element must be nonzero")
    gens = I.gens if isinstance(I, Ideal) else [R.coerce(g) for g in I]
    rows = {}
    failed = None
    for n in range(n_max + 1):
        q = R.p ** n
        ok = Ideal(R, [g.frobenius(q) for g in gens]).contains(c * u.frobenius(q))
        rows[n] = ok
        if not ok and failed is None:
            failed = n
    notes = [f"test element {c} declared by caller" if test_element_declared else
             f"{c} not declared a test element; failures are not certificates"]
    if failed is None:
        return ClosureVerdict(MEMBER_EVIDENCE, {"contained": rows}, {}, None, [], notes)
    verdict = NON_MEMBER_CERTIFIED if test_element_declared else NON_MEMBER
    cert = {"level": failed, "test_element": str(c), "declared": test_element_declared}
    return ClosureVerdict(verdict, {"contained": rows}, {}, cert, [], notes)


# monomial integral closure --------------------------------------------------------
def _nullspace_vector(rows: list, v: int):
    """A generator of the nullspace of ``rows`` (Fractions) if it is one-dimensional."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for col in range(v):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(v) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    w = [Fraction(0)] * v
    w[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        w[pc] = -m[i][fc]
    return w


def newton_facets(exps: Sequence[tuple]) -> list:
    """Inequalities (w, c), w >= 0 integral, with Newton polyhedron = {a >= 0 : w.a >= c for all}."""
    pts = sorted(set(tuple(e) for e in exps))
    if not pts:
        raise AlgebraError("the zero ideal has no Newton polyhedron")
    v = len(pts[0])
    facets = set()
    for s in range(1, v + 1):
        for chosen in combinations(pts, s):
            for dirs in combinations(range(v), v - s):
                rows = [[a - b for a, b in zip(g, chosen[0])] for g in chosen[1:]]
                rows += [[1 if i == j else 0 for i in range(v)] for j in dirs]
                w = _nullspace_vector(rows, v) if rows else None
                if w is None:
                    if v == 1 and s == 1:
                        w = [Fraction(1)]
                    else:
                        continue
                if all(a <= 0 for a in w):
                    w = [-a for a in w]
                if any(a < 0 for a in w):
                    continue
                c = sum(a * b for a, b in zip(w, chosen[0]))
                if min(sum(a * b for a, b in zip(w, g)) for g in pts) < c:
                    continue
                den = 1
                for a in w + [c]:
                    den = den * a.denominator // _gcd(den, a.denominator)
                wi = tuple(int(a * den) for a in w)
                ci = int(c * den)
                g = 0
                for a in wi + (ci,):
                    g = _gcd(g, a)
                g = g or 1
                if ci > 0:
                    facets.add((tuple(a // g for a in wi), ci // g))
    return sorted(facets)


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def in_newton_polyhedron(a: Sequence[int], facets: Sequence) -> bool:
    return all(sum(x * y for x, y in zip(w, a)) >= c for w, c in facets)


def _monomial_exponents(I: Ideal) -> list:
    R = I.ring
    if R.relations:
        raise AlgebraError("monomial integral closure is implemented over polynomial rings only")
    out = []
    for g in I.gens:
        if not g.is_monomial():
            raise AlgebraError(f"{g} is not a monomial")
        (m,) = g.terms
        out.append(R.layout.exps(m))
    return out


def integral_closure_monomial(I: Ideal) -> Ideal:
    """Monomials whose exponents lie in the Newton polyhedron of I (minimal generators)."""
    R = I.ring
    exps = _monomial_exponents(I)
    if not exps:
        return Ideal(R, [])
    if any(not any(e) for e in exps):
        return Ideal(R, [R.one()])
    facets = newton_facets(exps)
    box = [range(max(e[i] for e in exps) + 1) for i in range(R.nvars)]
    inside = [a for a in product(*box) if in_newton_polyhedron(a, facets)]
    inside.sort(key=lambda a: (sum(a), a))
    mins = []
    for a in inside:
        if not any(all(x <= y for x, y in zip(b, a)) for b in mins):
            mins.append(a)
    return Ideal(R, [R.monomial(a) for a in mins])


def in_integral_closure_monomial(u, I: Ideal) -> bool:
    """Membership of a monomial (or of every term of a polynomial) in the closure."""
    R = I.ring
    u = R.coerce(u)
    facets = newton_facets(_monomial_exponents(I))
    return all(in_newton_polyhedron(R.layout.exps(m), facets) for m in u.terms)


# candidates and evidence sets --------------------------------------------------
def standard_basis(C: GradedModule, max_degree: int | None = None, limit: int = 5000) -> list:
    """k-basis of C of standard monomial vectors (by increasing degree)."""
    L = C.ring.layout
    lts = [lead(g, L.lowmask) for g in C.relsub.groebner()]

    def standard(t):
        return not any(L.divides(s, t) for s in lts)

    frontier = [b for b in C.free.bases if standard(b)]
    seen = set(frontier)
    out = []
    while frontier:
        frontier.sort(key=lambda t: (L.term_degree(t), t ^ L.lowmask))
        nxt = []
        for t in frontier:
            if max_degree is not None and L.term_degree(t) > max_degree:
                continue
            out.append(t)
            if len(out) > limit:
                raise AlgebraError("candidate basis too large; lower max_degree")
            for vm in L.var_mono:
                s = t + vm
                if s not in seen and standard(s):
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    out.sort(key=lambda t: (L.term_degree(t), t & L.cmask, t ^ L.lowmask))
    return [{t: 1} for t in out]


def vector_key(B: GradedModule, vec: dict) -> tuple:
    return tuple(B.free.format(vec))


@dataclass
class EvidenceSet:
    """Verdicts for a finite list of candidate elements of B against A."""

    B: GradedModule
    A: list
    verdicts: dict
    elements: dict

    def members(self) -> list:
        return [k for k, v in self.verdicts.items() if v.verdict == MEMBER_EVIDENCE]

    def non_members(self) -> list:
        return [k for k, v in self.verdicts.items() if v.non_member]

    def undecided(self) -> list:
        return [k for k, v in self.verdicts.items() if v.verdict == INCONCLUSIVE]

    def as_dict(self):
        return {"(" + ", ".join(k) + ")": v.verdict for k, v in self.verdicts.items()}


def evidence_set(B: GradedModule, A: Sequence, family, candidates: Sequence[dict] | None = None,
                 levels=DEFAULT_LEVELS, alpha: str = "NU", truncations=None,
                 max_degree: int | None = None) -> EvidenceSet:
    A = [_as_vector(B, a) for a in A]
    if candidates is None:
        C = B.with_relations(A)
        if not is_finite(C.length()) and max_degree is None:
            raise AlgebraError("positive-dimensional quotient: give candidates or a degree bound")
        candidates = standard_basis(C, max_degree)
    verdicts = {}
    elements = {}
    for u in candidates:
        u = _as_vector(B, u)
        k = vector_key(B, u)
        verdicts[k] = closure_diagnostic(ClosureQuery(B, A, u, family, alpha, levels, truncations))
        elements[k] = u
    return EvidenceSet(B, A, verdicts, elements)


def _element_verdict(B, A, u, family, levels, alpha="NU", truncations=None) -> ClosureVerdict:
    return closure_diagnostic(ClosureQuery(B, list(A), u, family, alpha, levels, truncations))


# colon capturing and monomial position -----------------------------------------------
def _require_partial_sop(R: GradedRing, xs: list):
    d = R.krull_dim()
    if len(xs) > d:
        raise AlgebraError("more elements than the dimension of the ring")
    if Ideal(R, xs).quotient_dim() != d - len(xs):
        raise AlgebraError("the elements are not part of a system of parameters")


def _summary(per: dict) -> str:
    vals = list(per.values())
    if all(v == MEMBER_EVIDENCE for v in vals):
        return "PASS"
    if any(v in (NON_MEMBER, NON_MEMBER_CERTIFIED) for v in vals):
        return "FAIL"
    return "INCONCLUSIVE"


def colon_capture_suite(R: GradedRing, family, x: Sequence, a: Sequence[int] | None = None,
                        b: Sequence[int] | None = None, levels=DEFAULT_LEVELS, alpha: str = "NU",
                        truncations=None) -> dict:
    """Colon capturing on a partial sop.

    Without exponents: (x_1..x_k) : x_{k+1} against the closure of (x_1..x_k).
    With exponents a, b (length k): (x_i^{a_i+b_i}) : prod x_i^{b_i} against
    the closure of (x_i^{a_i}).
    """
    xs = [R.coerce(f) for f in x]
    if a is None and b is None:
        if len(xs) < 2:
            raise AlgebraError("need x_1..x_k and x_{k+1}")
        _require_partial_sop(R, xs)
        target = xs[:-1]
        colon_gens = ideal_colon(Ideal(R, target), [xs[-1]]).gens
        form = "x_1..x_k : x_{k+1}"
    else:
        a = list(a or [1] * len(xs))
        b = list(b or [1] * len(xs))
        if not (len(a) == len(b) == len(xs)) or min(a + b) < 1:
            raise AlgebraError("exponent lists must match x and be positive")
        _require_partial_sop(R, xs)
        target = [f ** ai for f, ai in zip(xs, a)]
        big = [f ** (ai + bi) for f, ai, bi in zip(xs, a, b)]
        mu = R.one()
        for f, bi in zip(xs, b):
            mu = mu * f ** bi
        colon_gens = ideal_colon(Ideal(R, big), [mu]).gens
        form = "(x^(a+b)) : x^b"
    tgt = Ideal(R, target)
    per = {}
    details = {}
    trivial = []
    for u in colon_gens:
        v = ideal_closure_diagnostic(R, target, u, family, alpha, levels, truncations)
        per[str(u)] = v.verdict
        details[str(u)] = v.as_dict()
        if tgt.contains(u):
            trivial.append(str(u))
    return {
        "form": form,
        "target": [str(g) for g in target],
        "colon": [str(g) for g in colon_gens],
        "already_in_target": trivial,
        "verdicts": per,
        "details": details,
        "status": _summary(per),
    }


def monomial_position_check(R: GradedRing, family, x: Sequence, t: int, levels=DEFAULT_LEVELS,
                            alpha: str = "NU", truncations=None) -> dict:
    """u = (x_1...x_d)^{t-1} against I_t = (x_1^t, ..., x_d^t); expected outside the closure."""
    if t < 1:
        raise AlgebraError("t must be at least 1")
    xs = [R.coerce(f) for f in x]
    d = R.krull_dim()
    if len(xs) != d or Ideal(R, xs).quotient_dim() != 0:
        raise AlgebraError("x is not a system of parameters")
    u = R.one()
    for f in xs:
        u = u * f ** (t - 1)
    I = [f ** t for f in xs]
    v = ideal_closure_diagnostic(R, I, u, family, alpha, levels, truncations)
    return {
        "element": str(u),
        "ideal": [str(g) for g in I],
        "verdict": v.verdict,
        "details": v.as_dict(),
        "status": "PASS" if v.non_member else ("INCONCLUSIVE" if v.verdict == INCONCLUSIVE else "FAIL"),
    }


# closure properties on finite-colength ideal instances ------------------------------
def _poly_vec(B: GradedModule, f: Polynomial) -> dict:
    return B.free.vector([f])


def cloprop_checks(R: GradedRing, family, A: Sequence, A_big: Sequence, J: Sequence, A_other: Sequence,
                   levels=DEFAULT_LEVELS, rank_family=None) -> dict:
    """Relations between evidence sets for m-primary ideals A ⊆ A_big of R.

    (b) A inside its closure; (d) monotone in A; (e) closure in A_big/A
    maps into the closure in R/A; (g) direct sums; (j) J·A^♮ ⊆ (JA)^♮;
    (l) rank evidence inside ν evidence (domains).
    """
    B = GradedModule.cyclic(R, [])
    Ai = Ideal(R, A)
    if not Ai.is_m_primary():
        raise AlgebraError("instances must have finite colength")
    if not all(Ideal(R, A_big).contains(g) for g in Ai.gens):
        raise AlgebraError("A must be contained in A_big")
    out = {}
    ev = evidence_set(B, list(Ai.gens), family, levels=levels)
    members = [ev.elements[k] for k in ev.members()]
    # (b)
    gens_v = [_element_verdict(B, Ai.gens, _poly_vec(B, g), family, levels).verdict for g in Ai.gens]
    out["b"] = all(v == MEMBER_EVIDENCE for v in gens_v)
    # (d) A ⊆ A_big: members for A are members for A_big
    out["d"] = all(_element_verdict(B, A_big, u, family, levels).member for u in members)
    # (e) B' = A_big ⊆ R: closure of A in A_big lands in the closure in R
    out["e"] = _check_submodule_monotone(R, Ai, Ideal(R, A_big), family, levels)
    # (g) direct sums: R ⊕ R with A ⊕ A_other, verdicts match componentwise
    out["g"] = _check_direct_sum(R, list(Ai.gens), list(A_other), family, levels)
    # (j) J · A^♮ ⊆ (JA)^♮
    JA = (Ideal(R, J) * Ai).gens
    ok = True
    for u in members:
        f = B.free.entries(u)[0]
        for j in J:
            v = _poly_vec(B, R.coerce(j) * f)
            if v and not _element_verdict(B, JA, v, family, levels).member:
                ok = False
    out["j"] = ok
    # (l) rank evidence ⊆ ν evidence on domains
    if R.domain:
        ev_rank = evidence_set(B, list(Ai.gens), rank_family or family, levels=levels, alpha="RANK")
        out["l"] = set(ev_rank.members()) <= set(ev.members())
    else:
        out["l"] = None
    out["members"] = ["(" + ", ".join(k) + ")" for k in ev.members()]
    return out


def _check_submodule_monotone(R, A: Ideal, Abig: Ideal, family, levels) -> bool:
    """Elements of A^♮ computed inside Abig (as the module Abig/A) are members of A^♮ in R."""
    from .modules import Submodule, subquotient_module

    B = GradedModule.cyclic(R, [])
    F = B.free
    N = Submodule(F, [F.vector([g]) for g in Abig.gens])
    W = Submodule(F, [F.vector([g]) for g in A.gens])
    Q = subquotient_module(N, W)
    gens = Q.generators_in_ambient
    if not gens:
        return True
    cands = standard_basis(Q)
    for c in cands:
        # image in R: sum of monomial multiples of the chosen generators of Abig
        img: dict = {}
        for t, coef in c.items():
            k = t & R.layout.cmask
            m = t - Q.free.bases[k]
            img = _vadd(img, vmul({m: coef}, gens[k], R.p), R.p)
        inside = _element_verdict(Q, [], c, family, levels)
        if inside.member and not _element_verdict(B, A.gens, img, family, levels).member:
            return False
    return True


def _vadd(a, b, p):
    from .modules import vadd
    return vadd(a, b, p)


def _check_direct_sum(R, A1, A2, family, levels) -> bool:
    B1 = GradedModule.cyclic(R, [])
    B2 = GradedModule.free_module(R, [0, 0])
    F = B2.free
    A = [F.vector([g, 0]) for g in A1] + [F.vector([0, g]) for g in A2]
    C1 = standard_basis(B1.with_relations([B1.free.vector([g]) for g in A1]))
    C2 = standard_basis(B1.with_relations([B1.free.vector([g]) for g in A2]))
    for cands, Ai, slot in ((C1, A1, 0), (C2, A2, 1)):
        for c in cands:
            f = B1.free.entries(c)[0]
            single = _element_verdict(B1, Ai, c, family, levels)
            entries = [f, 0] if slot == 0 else [0, f]
            summed = _element_verdict(B2, A, F.vector(entries), family, levels)
            if single.verdict != summed.verdict:
                return False
            if single.series["finite"]["difference"] != summed.series["finite"]["difference"]:
                return False
    return True


# Dietz axioms on supplied instances ------------------------------------------
@dataclass
class DietzInstance:
    """A ⊆ B of finite colength, with optional A2 (A ⊆ A2 ⊆ B) and a map θ: B -> C
    given by the images of the generators of B."""

    name: str
    B: GradedModule
    A: list
    A2: list | None = None
    theta_target: GradedModule | None = None
    theta_images: list | None = None


@dataclass
class AxiomSevenInstance:
    """B = R ⊕ R, f = (projection to the first summand) followed by R -> R/J,
    v with f(v) = x_{k+1} mod J."""

    name: str
    ring: GradedRing
    J: list
    v: list
    x_next: object
    max_degree: int = 2
    truncations: Sequence[int] | None = None


def _apply_map(B: GradedModule, images: list, vec: dict, p: int) -> dict:
    cm = B.ring.layout.cmask
    out: dict = {}
    for t, c in vec.items():
        k = t & cm
        out = _vadd(out, vmul({t - B.free.bases[k]: c}, images[k], p), p)
    return out


def dietz_axioms(inst: DietzInstance, family, levels=DEFAULT_LEVELS) -> dict:
    """Axioms (1)-(5) as relations between evidence sets on one instance."""
    B, A = inst.B, [_as_vector(inst.B, a) for a in inst.A]
    R = B.ring
    p = R.p
    C = B.with_relations(A)
    if not is_finite(C.length()):
        raise AlgebraError(f"instance {inst.name}: B/A must have finite length")
    ev = evidence_set(B, A, family, levels=levels)
    mem = [ev.elements[k] for k in ev.members()]
    res = {}
    # (1) extension
    res["1"] = all(_element_verdict(B, A, a, family, levels).member for a in A)
    # (2) idempotence: adding the captured elements captures nothing new
    A1 = A + mem
    ev2 = evidence_set(B, A1, family, levels=levels)
    res["2"] = not ev2.members()
    # (3) order preservation
    if inst.A2 is not None:
        A2 = [_as_vector(B, a) for a in inst.A2]
        res["3"] = all(_element_verdict(B, A2, u, family, levels).member for u in mem)
    else:
        res["3"] = None
    # (4) functoriality along θ
    if inst.theta_images is not None:
        T = inst.theta_target
        imgs = [_as_vector(T, w) for w in inst.theta_images]
        tA = [w for w in (_apply_map(B, imgs, a, p) for a in A) if w]
        ok = True
        for u in mem:
            w = _apply_map(B, imgs, u, p)
            if w and not _element_verdict(T, tA, w, family, levels).member:
                ok = False
        res["4"] = ok
    else:
        res["4"] = None
    # (5) if A is closed then 0 is closed in B/A
    if not mem:
        ev0 = evidence_set(C, [], family, candidates=standard_basis(C), levels=levels)
        res["5"] = not ev0.members()
    else:
        res["5"] = True
    res["evidence"] = {"members": ["(" + ", ".join(k) + ")" for k in ev.members()],
                       "candidates": len(ev.verdicts)}
    return res


def axiom_six(R: GradedRing, family, levels=DEFAULT_LEVELS, truncations=None) -> dict:
    """m and 0 are closed in R: 1 is outside m^♮, and 1 and the variables are outside 0^♮."""
    m = R.gens()
    one = _element_verdict(GradedModule.cyclic(R, []), [GradedModule.cyclic(R, []).free.vector([g]) for g in m],
                           GradedModule.cyclic(R, []).free.vector([1]), family, levels)
    B = GradedModule.cyclic(R, [])
    zero = {}
    for u in [R.one()] + m:
        zero[str(u)] = _element_verdict(B, [], B.free.vector([u]), family, levels, truncations=truncations).verdict
    return {
        "m_closed": one.non_member,
        "zero_closed": all(v == NON_MEMBER for v in zero.values()),
        "zero_verdicts": zero,
        "truncations": list(truncations or DEFAULT_TRUNCATIONS),
    }


def axiom_seven(inst: AxiomSevenInstance, family, levels=DEFAULT_LEVELS) -> dict:
    """(Rv)^♮_B ∩ Ker f ⊆ (Jv)^♮_B on B = R ⊕ R with f the first projection to R/J."""
    R = inst.ring
    B = GradedModule.free_module(R, [0, 0])
    F = B.free
    J = Ideal(R, inst.J)
    v = F.vector(list(inst.v))
    xk = R.coerce(inst.x_next)
    fv = F.entries(v)[0]
    if not J.contains(fv - xk):
        raise AlgebraError(f"instance {inst.name}: f(v) must equal x_(k+1) mod J")
    if Ideal(R, list(J.gens) + [xk]).quotient_dim() != R.krull_dim() - len(J.gens) - 1:
        raise AlgebraError(f"instance {inst.name}: J and x_(k+1) must be part of a sop")
    cands = []
    for c in standard_basis(B.with_relations(B.free.ring_seed()), inst.max_degree):
        first = F.entries(c)[0]
        if J.contains(first):
            cands.append(c)
    jv = [vmul(g.terms, v, R.p) for g in J.gens]
    left = []
    rows = {}
    for c in cands:
        lv = _element_verdict(B, [v], c, family, levels, truncations=inst.truncations)
        entry = {"left": lv.verdict}
        if lv.member:
            left.append(c)
            rv = _element_verdict(B, jv, c, family, levels, truncations=inst.truncations)
            entry["right"] = rv.verdict
        rows["(" + ", ".join(F.format(c)) + ")"] = entry
    ok = all(r.get("right") == MEMBER_EVIDENCE for r in rows.values() if "right" in r)
    return {"name": inst.name, "left_side": ["(" + ", ".join(F.format(c)) + ")" for c in left],
            "rows": rows, "holds": ok,
            "truncations": list(inst.truncations or DEFAULT_TRUNCATIONS)}


def dietz_suite(R: GradedRing, family, instances: Sequence[DietzInstance], seven: Sequence[AxiomSevenInstance] = (),
                levels=DEFAULT_LEVELS) -> dict:
    per = {}
    status = {str(k): True for k in range(1, 8)}
    for inst in instances:
        r = dietz_axioms(inst, family, levels)
        per[inst.name] = r
        for k in "12345":
            if r[k] is False:
                status[k] = False
    six = axiom_six(R, family, levels)
    status["6"] = six["m_closed"] and six["zero_closed"]
    sev = [axiom_seven(s, family, levels) for s in seven]
    status["7"] = all(s["holds"] for s in sev) if sev else None
    return {"axioms": status, "instances": per, "axiom6": six, "axiom7": sev}
