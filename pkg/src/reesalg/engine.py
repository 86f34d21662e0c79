"""Buchberger kernel for submodules of graded free modules over F_p[x].

Internal representation: a vector is a dict ``{(component, exponents): c}``.
An ideal is the rank-one case with every component equal to 0.  Orders on
terms come from :class:`Space`, which memoises a sort key per term.
"""

from __future__ import annotations

import heapq
from operator import add, le, sub
from typing import Callable, Sequence

from .algebra import KeyCache, PolyRing

Term = tuple  # (component, exponents)


class Space:
    """A free module ``F = sum_c P(-deg_c)`` together with a term order.

    ``kind`` is ``"top"`` (degree, then monomial, then component),
    ``"pot"`` (component first) or ``"custom"`` with an explicit ``key``.
    """

    def __init__(self, ring: PolyRing, comp_degrees: Sequence[tuple] | None = None,
                 kind: str = "top", key: Callable | None = None):
        self.ring = ring
        self.p = ring.p
        self.nvars = ring.nvars
        self.comp_degrees = list(comp_degrees) if comp_degrees is not None else [(0, 0)]
        self.w = ring.weights
        self.comp_weight = [self._cw(d) for d in self.comp_degrees]
        mk = ring.key
        w = self.w
        cw = self.comp_weight
        if key is not None:
            fn = key
        elif kind == "top" and ring.order.kind in ("lex", "block"):
            # not degree-compatible: a degree prefix would turn lex into deglex
            # on inhomogeneous input (and break elimination)
            def fn(t):
                return mk[t[1]] + (-t[0],)
        elif kind == "top":
            def fn(t):
                c, e = t
                return (sum(map(int.__mul__, w, e)) + cw[c],) + mk[e] + (-c,)
        elif kind == "pot":
            def fn(t):
                return (-t[0],) + mk[t[1]]
        else:
            raise ValueError(kind)
        self.key = KeyCache(fn)
        self.kget = self.key.__getitem__

    def _cw(self, d):
        if self.ring.affine:
            return 0
        return d[0] + d[1]

    @property
    def rank(self) -> int:
        return len(self.comp_degrees)

    def weight(self, t: Term) -> int:
        return sum(map(int.__mul__, self.w, t[1])) + self.comp_weight[t[0]]

    def term_bidegree(self, t: Term) -> tuple:
        x, tt = self.ring.exps_bidegree(t[1])
        d = self.comp_degrees[t[0]]
        return (x + d[0], tt + d[1])

    def lead(self, v: dict) -> Term:
        return max(v, key=self.kget)


def exps_mask(e) -> int:
    m = 0
    for i, a in enumerate(e):
        if a:
            m |= 1 << i
    return m


def exps_lcm(a, b):
    return tuple(map(max, a, b))


def divides(a, b) -> bool:
    return all(map(le, a, b))


class Elt:
    """A basis element: vector, lead term, lead-exponent mask, sugar."""

    __slots__ = ("v", "lt", "mask", "sugar")

    def __init__(self, v: dict, lt: Term, sugar: int):
        self.v = v
        self.lt = lt
        self.mask = exps_mask(lt[1])
        self.sugar = sugar


def make_monic(v: dict, lt: Term, p: int) -> dict:
    c = v[lt]
    if c == 1:
        return v
    inv = pow(c, -1, p)
    return {t: a * inv % p for t, a in v.items()}


def sub_multiple(f: dict, c: int, shift, g: dict, p: int) -> None:
    """In place: ``f -= c * x^shift * g``."""
    for (gc, ge), a in g.items():
        t = (gc, tuple(map(add, ge, shift)))
        v = (f.get(t, 0) - c * a) % p
        if v:
            f[t] = v
        else:
            del f[t]


def vec_weight(space: Space, v: dict) -> int:
    return max(space.weight(t) for t in v)


class Reducer:
    """Lookup of reducers by lead component with a mask prefilter."""

    def __init__(self, elts: Sequence[Elt] = ()):
        self.by_comp: dict[int, list[Elt]] = {}
        for g in elts:
            self.add(g)

    def add(self, g: Elt):
        self.by_comp.setdefault(g.lt[0], []).append(g)

    def find(self, t: Term):
        cands = self.by_comp.get(t[0])
        if not cands:
            return None
        e = t[1]
        m = exps_mask(e)
        for g in cands:
            if g.mask & ~m:
                continue
            if all(map(le, g.lt[1], e)):
                return g
        return None


def lead_reduce(f: dict, red: Reducer, space: Space, record: dict | None = None,
                record_index: dict | None = None) -> dict:
    """Top-reduce ``f`` (copied) until its lead term is irreducible.

    With ``record`` the quotient is accumulated as ``{(index, shift): c}``
    where ``index = record_index[id(g)]``.
    """
    f = dict(f)
    p = space.p
    kget = space.kget
    while f:
        lt = max(f, key=kget)
        g = red.find(lt)
        if g is None:
            return f
        c = f[lt]
        shift = tuple(map(sub, lt[1], g.lt[1]))
        sub_multiple(f, c, shift, g.v, p)
        if record is not None:
            k = (record_index[id(g)], shift)
            v = (record.get(k, 0) + c) % p
            if v:
                record[k] = v
            else:
                record.pop(k, None)
    return f


def full_reduce(f: dict, red: Reducer, space: Space, record: dict | None = None,
                record_index: dict | None = None) -> dict:
    """Remainder of ``f`` with every term irreducible."""
    f = dict(f)
    rem: dict = {}
    p = space.p
    kget = space.kget
    while f:
        lt = max(f, key=kget)
        g = red.find(lt)
        c = f[lt]
        if g is None:
            rem[lt] = c
            del f[lt]
            continue
        shift = tuple(map(sub, lt[1], g.lt[1]))
        sub_multiple(f, c, shift, g.v, p)
        if record is not None:
            k = (record_index[id(g)], shift)
            v = (record.get(k, 0) + c) % p
            if v:
                record[k] = v
            else:
                record.pop(k, None)
    return rem


class GBStats:
    __slots__ = ("pairs", "zero_reductions", "elements")

    def __init__(self):
        self.pairs = self.zero_reductions = self.elements = 0


def module_gb(gens: Sequence[dict], space: Space, product_criterion: bool | None = None,
              reduced: bool = True, stats: GBStats | None = None,
              strategy: str = "normal") -> list[Elt]:
    """Gröbner basis of the submodule generated by ``gens``.

    Pairs are processed by (sugar, lcm weight) with the Gebauer-Möller
    criteria; the product criterion is only used for rank-one input.
    ``strategy="fifo"`` processes pairs in creation order instead (same
    result, different path; used to cross-check invariance).
    """
    p = space.p
    kget = space.kget
    if product_criterion is None:
        product_criterion = all(t[0] == 0 for v in gens for t in v)
    G: list[Elt] = []
    active: list[bool] = []
    red = Reducer()
    heap: list = []
    seq = 0
    pairs: dict = {}  # (i, j) -> lcm exps, alive
    for v in gens:
        if not v:
            continue
        v = {t: c % p for t, c in v.items() if c % p}
        if not v:
            continue
        sug = vec_weight(space, v)
        lt = max(v, key=kget)
        prio = (sug, space.weight(lt), seq) if strategy == "normal" else (seq,)
        heapq.heappush(heap, (prio, "g", v, sug))
        seq += 1

    def lcm_weight(i, j, l):
        return sum(map(int.__mul__, space.w, l)) + space.comp_weight[G[i].lt[0]]

    def update(k: int):
        nonlocal seq
        gk = G[k]
        ck, ek = gk.lt
        new = []
        for i in range(k):
            if active[i] and G[i].lt[0] == ck:
                new.append((i, exps_lcm(G[i].lt[1], ek)))
        # criterion on new pairs (M and F of Gebauer-Möller)
        kept = []
        rest = list(new)
        while rest:
            i, l = rest.pop(0)
            coprime = product_criterion and not (G[i].mask & gk.mask)
            if coprime:
                kept.append((i, l, True))
                continue
            blocked = any(divides(l2, l) for _, l2 in rest) or any(divides(l2, l) for _, l2, _ in kept)
            if not blocked:
                kept.append((i, l, False))
        # chain criterion on old pairs
        for (i, j), l in list(pairs.items()):
            if G[i].lt[0] != ck or not divides(ek, l):
                continue
            lik = exps_lcm(G[i].lt[1], ek)
            ljk = exps_lcm(G[j].lt[1], ek)
            if lik != l and ljk != l:
                del pairs[(i, j)]
        for i, l, coprime in kept:
            if coprime:
                continue
            pairs[(i, k)] = l
            si = G[i].sugar + sum(map(int.__mul__, space.w, map(sub, l, G[i].lt[1])))
            sk = gk.sugar + sum(map(int.__mul__, space.w, map(sub, l, ek)))
            sug = max(si, sk)
            prio = (sug, lcm_weight(i, k, l), seq) if strategy == "normal" else (seq,)
            heapq.heappush(heap, (prio, "p", (i, k), sug))
            seq += 1
        for i in range(k):
            if active[i] and G[i].lt[0] == ck and divides(ek, G[i].lt[1]):
                active[i] = False
        if stats is not None:
            stats.elements += 1

    while heap:
        _, kind, payload, sug = heapq.heappop(heap)
        if kind == "g":
            s = payload
        else:
            if payload not in pairs:
                continue
            i, j = payload
            l = pairs.pop(payload)
            gi, gj = G[i], G[j]
            s = {}
            sub_multiple(s, p - 1, tuple(map(sub, l, gi.lt[1])), gi.v, p)
            sub_multiple(s, 1, tuple(map(sub, l, gj.lt[1])), gj.v, p)
            if stats is not None:
                stats.pairs += 1
        r = lead_reduce(s, red, space)
        if not r:
            if stats is not None and kind == "p":
                stats.zero_reductions += 1
            continue
        lt = max(r, key=kget)
        r = make_monic(r, lt, p)
        g = Elt(r, lt, max(sug, vec_weight(space, r)) if kind == "g" else sug)
        G.append(g)
        active.append(True)
        red.add(g)
        update(len(G) - 1)

    basis = [g for g, a in zip(G, active) if a]
    if reduced:
        basis = interreduce(basis, space)
    return basis


def interreduce(basis: Sequence[Elt], space: Space) -> list[Elt]:
    """Minimal, fully tail-reduced, monic basis sorted by lead term."""
    p = space.p
    kget = space.kget
    basis = sorted(basis, key=lambda g: kget(g.lt))
    minimal = []
    for g in basis:
        if any(h.lt[0] == g.lt[0] and divides(h.lt[1], g.lt[1]) for h in minimal):
            continue
        minimal.append(g)
    out = []
    for g in minimal:
        others = Reducer([h for h in minimal if h is not g])
        tail = dict(g.v)
        c = tail.pop(g.lt)
        tail = full_reduce(tail, others, space)
        tail[g.lt] = c
        tail = make_monic(tail, g.lt, p)
        out.append(Elt(tail, g.lt, g.sugar))
    return out


def normal_form_vec(v: dict, basis: Sequence[Elt], space: Space) -> dict:
    return full_reduce(v, Reducer(basis), space)


# conversion helpers between Polynomial term dicts and rank-one vectors

def poly_to_vec(terms: dict, comp: int = 0) -> dict:
    return {(comp, e): c for e, c in terms.items()}


def vec_to_poly(v: dict) -> dict:
    return {e: c for (_, e), c in v.items()}


def vec_entries(v: dict) -> dict[int, dict]:
    """Split a vector into ``{component: polynomial terms}``."""
    out: dict[int, dict] = {}
    for (c, e), a in v.items():
        out.setdefault(c, {})[e] = a
    return out


def entries_to_vec(entries: dict[int, dict]) -> dict:
    v = {}
    for c, terms in entries.items():
        for e, a in terms.items():
            v[(c, e)] = a
    return v
