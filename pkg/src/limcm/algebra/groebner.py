"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Vectors are dicts {packed term: coefficient mod p} (see ``ring.Layout``).
An ideal is a submodule of the rank-one free module with base term
``layout.base(0)``.  Pairs are selected by the normal strategy (smallest
degree, then smallest lcm); useless pairs are discarded with the
Gebauer-Moeller criteria, plus the product criterion for ideals.
"""
from __future__ import annotations

import contextlib
import contextvars
import heapq

from .ring import COMP_BITS


class ResourceLimitExceeded(RuntimeError):
    """The S-pair budget of the current computation ran out."""


class Budget:
    def __init__(self, spairs: int | None):
        self.limit = spairs
        self.used = 0

    def charge(self, n: int = 1):
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise ResourceLimitExceeded(f"S-pair budget of {self.limit} exceeded")


_budget: contextvars.ContextVar = contextvars.ContextVar("limcm_budget", default=None)
_unlimited = Budget(None)


def current_budget() -> Budget:
    b = _budget.get()
    return _unlimited if b is None else b


@contextlib.contextmanager
def spair_budget(limit: int | None):
    """Charge all Groebner work inside the block to a fresh budget."""
    b = Budget(limit)
    token = _budget.set(b)
    try:
        yield b
    finally:
        _budget.reset(token)


def lead(vec: dict, lowmask: int) -> int:
    return max(t ^ lowmask for t in vec) ^ lowmask


class Reducer:
    """A list of monic vectors indexed by leading term, usable for division."""

    def __init__(self, layout, p: int):
        self.layout = layout
        self.p = p
        self.lowmask = layout.lowmask
        self.G: list = []
        self.lts: list = []
        self.by_comp: dict = {}

    def _add(self, vec: dict) -> int:
        lt = lead(vec, self.lowmask)
        c = vec[lt]
        if c != 1:
            inv = pow(c, -1, self.p)
            p = self.p
            vec = {t: v * inv % p for t, v in vec.items()}
        idx = len(self.G)
        self.G.append(vec)
        self.lts.append(lt)
        L = self.layout
        self.by_comp.setdefault(lt & L.cmask, []).append(((lt >> COMP_BITS) & L.xmask, idx, lt))
        return idx

    def _find(self, t: int):
        lst = self.by_comp.get(t & self.layout.cmask)
        if not lst:
            return None
        g = self.layout.guard
        xg = ((t >> COMP_BITS) & self.layout.xmask) | g
        for xs, gi, glt in lst:
            if (xg - xs) & g == g:
                return gi, glt
        return None

    def reduce(self, f: dict, full: bool = True) -> dict:
        """Remainder of ``f`` (copied) on division by the stored vectors.

        With ``full=False`` only the leading term is made irreducible.
        """
        if not f:
            return {}
        f = dict(f)
        lowmask = self.lowmask
        p = self.p
        G = self.G
        find = self._find
        heap = [-(t ^ lowmask) for t in f]
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        rem = {}
        while heap:
            t = (-pop(heap)) ^ lowmask
            c = f.get(t)
            if c is None:
                continue
            hit = find(t)
            if hit is None:
                if not full:
                    return f
                rem[t] = c
                del f[t]
                continue
            gi, glt = hit
            delta = t - glt
            for s, gc in G[gi].items():
                u = s + delta
                v = f.get(u)
                if v is None:
                    f[u] = (-c * gc) % p
                    push(heap, -(u ^ lowmask))
                else:
                    v = (v - c * gc) % p
                    if v:
                        f[u] = v
                    else:
                        del f[u]
        return rem

    def contains(self, f: dict) -> bool:
        return not self.reduce(f, full=False)

    def leading_terms(self) -> list:
        return list(self.lts)


class GroebnerBasis(Reducer):
    """Wrapper around a list of vectors already known to be a Groebner basis."""

    def __init__(self, layout, p, vectors):
        super().__init__(layout, p)
        for v in vectors:
            if v:
                self._add(v)
        self.vectors = list(self.G)


class GroebnerEngine(Reducer):
    """Incremental Buchberger algorithm.

    ``add`` queues generators; ``run(upto)`` completes the basis through the
    given degree (exact for homogeneous input); ``insert`` places an already
    top-reduced vector directly into the basis.
    """

    def __init__(self, layout, p: int, ideal_case: bool = False, seed=()):
        super().__init__(layout, p)
        self.ideal_case = ideal_case
        self.base0 = layout.base(0)
        self.inputs: list = []
        self.pair_heap: list = []
        self.pairs: dict = {}
        self._pid = 0
        self._seq = 0
        self.nseed = 0
        for v in seed:
            if v:
                self._add(v)
        self.nseed = len(self.G)
        self.spairs = 0

    def add(self, vec: dict):
        if not vec:
            return
        lt = lead(vec, self.lowmask)
        deg = self.layout.term_degree(lt)
        self._seq += 1
        heapq.heappush(self.inputs, (deg, self._seq, vec))

    def insert(self, vec: dict) -> int:
        """Add a vector whose leading term is not divisible by any current one."""
        idx = self._add(vec)
        self._update(idx)
        return idx

    def _update(self, h: int):
        L = self.layout
        lts = self.lts
        lt_h = lts[h]
        comp = lt_h & L.cmask
        divides = L.divides
        mono_h = lt_h - self.base0
        cands = []
        lcm_h = {}
        for _, i, lt_i in self.by_comp.get(comp, ()):
            if i == h:
                continue
            ma, mb = L.lcm_shift(lt_i, lt_h)
            lcm = lt_i + ma
            lcm_h[i] = lcm
            coprime = self.ideal_case and ma == mono_h
            cands.append((lcm, i, coprime))
        # Gebauer-Moeller on old pairs
        if self.pairs:
            dead = []
            for pid, (i, j, l) in self.pairs.items():
                if (l & L.cmask) == comp and divides(lt_h, l) and lcm_h.get(i) != l and lcm_h.get(j) != l:
                    dead.append(pid)
            for pid in dead:
                del self.pairs[pid]
        # new pairs: M and F criteria, then product criterion
        kept = []
        n = len(cands)
        for k in range(n):
            l, i, cop = cands[k]
            if not cop:
                blocked = False
                for k2 in range(k + 1, n):
                    if divides(cands[k2][0], l):
                        blocked = True
                        break
                if not blocked:
                    for l2, _, _ in kept:
                        if divides(l2, l):
                            blocked = True
                            break
                if blocked:
                    continue
            kept.append((l, i, cop))
        for l, i, cop in kept:
            if cop:
                continue
            if i < self.nseed and h < self.nseed:
                continue
            self._pid += 1
            self.pairs[self._pid] = (i, h, l)
            heapq.heappush(self.pair_heap, (L.term_degree(l), l ^ self.lowmask, self._pid))

    def _spoly(self, i, j, l):
        p = self.p
        di = l - self.lts[i]
        dj = l - self.lts[j]
        s = {t + di: c for t, c in self.G[i].items()}
        for t, c in self.G[j].items():
            u = t + dj
            v = (s.get(u, 0) - c) % p
            if v:
                s[u] = v
            else:
                s.pop(u, None)
        return s

    def run(self, upto: int | None = None):
        budget = current_budget()
        while True:
            while self.pair_heap and self.pair_heap[0][2] not in self.pairs:
                heapq.heappop(self.pair_heap)
            di = self.inputs[0][0] if self.inputs else None
            dp = self.pair_heap[0][0] if self.pair_heap else None
            if di is None and dp is None:
                return
            use_input = dp is None or (di is not None and di <= dp)
            deg = di if use_input else dp
            if upto is not None and deg > upto:
                return
            if use_input:
                _, _, vec = heapq.heappop(self.inputs)
            else:
                _, _, pid = heapq.heappop(self.pair_heap)
                i, j, l = self.pairs.pop(pid)
                vec = self._spoly(i, j, l)
                self.spairs += 1
                budget.charge()
            r = self.reduce(vec, full=False)
            if r:
                self.insert(r)

    def minimal_indices(self) -> list:
        L = self.layout
        keep = []
        lts = self.lts
        for i, lt in enumerate(lts):
            red = False
            for _, j, lj in self.by_comp.get(lt & L.cmask, ()):
                if j != i and L.divides(lj, lt) and (lj != lt or j < i):
                    red = True
                    break
            if not red:
                keep.append(i)
        return keep

    def reduced_basis(self) -> list:
        """Reduced Groebner basis, sorted by increasing leading term."""
        self.run()
        keep = self.minimal_indices()
        mini = GroebnerBasis(self.layout, self.p, [self.G[i] for i in keep])
        out = []
        for vec, lt in zip(mini.G, mini.lts):
            tail = dict(vec)
            del tail[lt]
            r = mini.reduce(tail)
            r[lt] = 1
            out.append(r)
        lm = self.lowmask
        out.sort(key=lambda v: lead(v, lm) ^ lm)
        return out


def groebner(layout, p, gens, seed=(), ideal_case=False) -> list:
    """Reduced Groebner basis of the module generated by ``gens`` and ``seed``."""
    eng = GroebnerEngine(layout, p, ideal_case=ideal_case, seed=seed)
    for g in gens:
        eng.add(g)
    return eng.reduced_basis()
