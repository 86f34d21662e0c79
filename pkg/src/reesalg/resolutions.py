"""Graded modules, free resolutions, Betti tables and Hilbert series.

Resolutions are built on a Schreyer frame: the Gröbner basis of the relations
gives the first differential, and each later differential comes from
reducing the S-pairs of the previous level to zero under the induced
Schreyer order.  The resulting (usually non-minimal) resolution is then
pruned of unit entries.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from operator import add, sub
from typing import Sequence

from .algebra import AlgebraError, Polynomial, PolyRing, poly_add, poly_mul, poly_sub
from .engine import (
    Elt,
    Reducer,
    Space,
    divides,
    exps_lcm,
    full_reduce,
    lead_reduce,
    make_monic,
    module_gb,
    sub_multiple,
    vec_entries,
)
from .groebner import IdealData, minimalize

NEG_INF = -math.inf
POS_INF = math.inf


class ResolutionError(RuntimeError):
    pass


Vector = dict  # {(row, exps): coeff}


def _add_deg(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _sub_deg(a, b):
    return (a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True, eq=False)
class GradedModule:
    """``coker(F1 -> F0)``: rows are the basis of F0, columns the relations."""

    ring: PolyRing
    row_degrees: tuple
    columns: tuple  # of Vector
    column_degrees: tuple = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(d) if not isinstance(d, int) else (d, 0) for d in self.row_degrees)
        object.__setattr__(self, "row_degrees", rows)
        cols = tuple(c for c in self.columns if c)
        if self.column_degrees is not None and len(cols) != len(self.columns):
            keep = [i for i, c in enumerate(self.columns) if c]
            object.__setattr__(self, "column_degrees",
                               tuple(self.column_degrees[i] for i in keep))
        object.__setattr__(self, "columns", cols)
        space = self.space()
        if self.column_degrees is None:
            degs = tuple(space.term_bidegree(next(iter(c))) for c in cols)
            object.__setattr__(self, "column_degrees", degs)
        else:
            object.__setattr__(self, "column_degrees", tuple(tuple(d) for d in self.column_degrees))
        if not self.ring.affine:
            for c, d in zip(cols, self.column_degrees):
                for t in c:
                    if t[0] >= len(rows):
                        raise AlgebraError("relation refers to a missing row")
                    if space.term_bidegree(t) != d:
                        raise AlgebraError("presentation column is not homogeneous of its degree")

    # constructors ---------------------------------------------------------

    @classmethod
    def free(cls, ring: PolyRing, degrees: Sequence) -> "GradedModule":
        return cls(ring, tuple(degrees), ())

    @classmethod
    def quotient_ring(cls, ideal: IdealData) -> "GradedModule":
        """``P / I`` as the cokernel of the generator row."""
        cols = tuple({(0, e): c for e, c in g.terms.items()} for g in ideal.generators)
        return cls(ideal.ring, ((0, 0),), cols)

    @classmethod
    def ideal_module(cls, ideal: IdealData) -> "GradedModule":
        """``I`` itself, presented by its generators modulo their syzygies."""
        gens = minimalize(ideal).generators
        ring = ideal.ring
        degs = tuple(g.bidegree() for g in gens)
        cols = tuple({(0, e): c for e, c in g.terms.items()} for g in gens)
        syz = kernel_vectors(ring, ((0, 0),), cols, degs)
        return cls(ring, degs, tuple(syz))

    @classmethod
    def from_matrix(cls, ring: PolyRing, row_degrees, matrix: Sequence[Sequence[Polynomial]]
                    ) -> "GradedModule":
        """``matrix[i][j]`` is the entry in row i, column j."""
        ncols = len(matrix[0]) if matrix else 0
        cols = []
        for j in range(ncols):
            v = {}
            for i, row in enumerate(matrix):
                for e, c in row[j].terms.items():
                    v[(i, e)] = c
            cols.append(v)
        return cls(ring, tuple(row_degrees), tuple(cols))

    # basics ---------------------------------------------------------------

    def space(self, kind: str = "top") -> Space:
        return Space(self.ring, self.row_degrees or [(0, 0)], kind)

    @property
    def rank(self) -> int:
        return len(self.row_degrees)

    def matrix(self) -> list[list[Polynomial]]:
        out = [[self.ring.zero() for _ in self.columns] for _ in self.row_degrees]
        for j, col in enumerate(self.columns):
            for r, terms in vec_entries(col).items():
                out[r][j] = Polynomial(self.ring, terms)
        return out

    def gb(self) -> list[Elt]:
        if "gb" not in self._cache:
            if not self.columns:
                self._cache["gb"] = []
            else:
                self._cache["gb"] = module_gb(list(self.columns), self.space())
        return self._cache["gb"]

    def is_zero(self) -> bool:
        if not self.row_degrees:
            return True
        zero = self.ring.zero_exps
        leads = {g.lt for g in self.gb()}
        return all((r, zero) in leads for r in range(self.rank))

    def shift(self, d) -> "GradedModule":
        """``M(-d)``: every degree raised by ``d``."""
        d = (d, 0) if isinstance(d, int) else tuple(d)
        return GradedModule(self.ring, tuple(_add_deg(r, d) for r in self.row_degrees),
                            self.columns, tuple(_add_deg(c, d) for c in self.column_degrees))

    def resolution(self, max_length: int | None = None) -> "FreeResolution":
        key = ("res", max_length)
        if key not in self._cache:
            self._cache[key] = minimal_free_resolution(self, max_length)
        return self._cache[key]


@dataclass(frozen=True, eq=False)
class BettiTable:
    entries: dict  # (i, bidegree) -> count

    def single(self) -> dict:
        """Collapse bidegrees ``(x, t)`` to the x-degree."""
        out: Counter = Counter()
        for (i, d), v in self.entries.items():
            out[(i, d[0])] += v
        return dict(out)

    def totals(self) -> list[int]:
        if not self.entries:
            return []
        n = max(i for i, _ in self.entries) + 1
        out = [0] * n
        for (i, _), v in self.entries.items():
            out[i] += v
        return out

    @property
    def pd(self):
        nz = [i for (i, _), v in self.entries.items() if v]
        return max(nz) if nz else NEG_INF

    @property
    def regularity(self):
        vals = [d - i for (i, d), v in self.single().items() if v]
        return max(vals) if vals else NEG_INF

    def format(self) -> str:
        s = self.single()
        if not s:
            return "(zero module)"
        pd = max(i for i, _ in s)
        lo = min(d - i for i, d in s)
        hi = max(d - i for i, d in s)
        lines = ["      " + " ".join(f"{i:>4}" for i in range(pd + 1))]
        for r in range(lo, hi + 1):
            cells = []
            for i in range(pd + 1):
                v = s.get((i, i + r), 0)
                cells.append(f"{v if v else '.':>4}")
            lines.append(f"{r:>4}: " + " ".join(cells))
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """``F_0 <- F_1 <- ... <- F_L``; ``steps[i]`` holds the columns of d_{i+1}."""

    ring: PolyRing
    degrees: tuple  # degrees[i] = basis bidegrees of F_i
    steps: tuple  # steps[i] = tuple of column vectors of d_{i+1}: F_{i+1} -> F_i
    minimal: bool
    complete: bool

    @property
    def length(self) -> int:
        nz = [i for i, d in enumerate(self.degrees) if d]
        return max(nz) if nz else -1

    def rank(self, i: int) -> int:
        return len(self.degrees[i]) if 0 <= i < len(self.degrees) else 0

    def differential(self, i: int) -> tuple:
        """Columns of ``d_i: F_i -> F_{i-1}`` (empty outside the range)."""
        if 1 <= i <= len(self.steps):
            return self.steps[i - 1]
        return ()

    def betti(self) -> BettiTable:
        c: Counter = Counter()
        for i, degs in enumerate(self.degrees):
            for d in degs:
                c[(i, d)] += 1
        return BettiTable(dict(c))

    def check_complex(self) -> bool:
        """``d_i ∘ d_{i+1} = 0`` as an exact matrix identity."""
        p = self.ring.p
        for i in range(1, len(self.steps)):
            prev = self.steps[i - 1]
            for col in self.steps[i]:
                acc: dict = {}
                for (r, e), c in col.items():
                    sub_multiple(acc, p - c, e, prev[r], p)
                if acc:
                    return False
        return True

    def has_unit_entries(self) -> bool:
        zero = self.ring.zero_exps
        for cols in self.steps:
            for col in cols:
                for r, terms in vec_entries(col).items():
                    if set(terms) == {zero}:
                        return True
        return False


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def kernel_vectors(ring: PolyRing, row_degrees: Sequence, columns: Sequence[Vector],
                   column_degrees: Sequence) -> list[Vector]:
    """Generators of the kernel of ``F1 -> F0`` sending ``e_j`` to ``columns[j]``.

    Computed as the part of a Gröbner basis of ``{f_j + e'_j}`` in
    ``F0 + F1`` that lies in ``F1``, under an order where every F0 term beats
    every F1 term.
    """
    r0 = len(row_degrees)
    r1 = len(columns)
    if r1 == 0:
        return []
    degs = list(row_degrees) + list(column_degrees)
    base = Space(ring, degs)
    bkey = base.kget

    def key(t):
        return (1 if t[0] < r0 else 0,) + bkey(t)

    space = Space(ring, degs, key=key)
    gens = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(r0 + j, ring.zero_exps)] = 1
        gens.append(v)
    gb = module_gb(gens, space)
    out = []
    for g in gb:
        if g.lt[0] >= r0:
            out.append({(c - r0, e): a for (c, e), a in g.v.items()})
    return out


def syzygies(module: GradedModule) -> GradedModule:
    """Kernel of the presentation map, returned as ``coker(Syz -> F1)``.

    The rows of the result are the relations of ``module``; its columns
    generate their syzygies.  (As a module this is the image of the
    presentation.)
    """
    syz = kernel_vectors(module.ring, module.row_degrees, module.columns, module.column_degrees)
    return GradedModule(module.ring, module.column_degrees, tuple(syz))


# ---------------------------------------------------------------------------
# Schreyer resolution
# ---------------------------------------------------------------------------


def _sort_level(elts: list[Elt]) -> list[Elt]:
    # same lead component grouped; lex-descending leads keep the frame within n steps
    return sorted(elts, key=lambda g: (g.lt[0], tuple(-a for a in g.lt[1])))


def _schreyer_space(ring: PolyRing, prev: Space, leads: list, degrees: list) -> Space:
    pk = prev.kget

    def key(t):
        c, m = t
        lc, le = leads[c]
        return pk((lc, tuple(map(add, le, m)))) + (-c,)

    return Space(ring, degrees, key=key)


def schreyer_resolution(module: GradedModule, max_length: int | None = None):
    """Non-minimal resolution from the Schreyer frame.

    Returns ``(degrees, steps, complete)`` in the layout of FreeResolution.
    """
    ring = module.ring
    n = ring.nvars
    limit = n + 1 if max_length is None else max_length
    space0 = module.space()
    level = _sort_level(list(module.gb()))
    degrees = [list(module.row_degrees)]
    steps = []
    space = space0
    complete = True
    k = 0
    while level:
        if k >= limit:
            complete = False
            break
        k += 1
        degs = [space.term_bidegree(g.lt) for g in level]
        degrees.append(degs)
        steps.append([g.v for g in level])
        leads = [g.lt for g in level]
        nspace = _schreyer_space(ring, space, leads, degs)
        red = Reducer(level)
        index = {id(g): i for i, g in enumerate(level)}
        p = ring.p
        new = []
        by_comp: dict[int, list[int]] = {}
        for i, g in enumerate(level):
            by_comp.setdefault(g.lt[0], []).append(i)
        for comp, idxs in by_comp.items():
            for ai, a in enumerate(idxs):
                ea = level[a].lt[1]
                cands = []
                for b in idxs[ai + 1:]:
                    l = exps_lcm(ea, level[b].lt[1])
                    cands.append((tuple(map(sub, l, ea)), b, l))
                chosen = []
                for q, b, l in cands:
                    if any(divides(q2, q) and (q2 != q or b2 < b) for q2, b2, _ in cands):
                        continue
                    chosen.append((q, b, l))
                for q, b, l in chosen:
                    ga, gb_ = level[a], level[b]
                    qb = tuple(map(sub, l, gb_.lt[1]))
                    s: dict = {}
                    sub_multiple(s, p - 1, q, ga.v, p)
                    sub_multiple(s, 1, qb, gb_.v, p)
                    rec: dict = {}
                    rest = lead_reduce(s, red, space, rec, index)
                    if rest:
                        raise ResolutionError("S-pair did not reduce to zero; frame broken")
                    syz = {(a, q): 1}
                    syz[(b, qb)] = (syz.get((b, qb), 0) - 1) % p
                    for (i, sh), c in rec.items():
                        t = (i, sh)
                        v = (syz.get(t, 0) - c) % p
                        if v:
                            syz[t] = v
                        else:
                            syz.pop(t, None)
                    lt = (a, q)
                    new.append(Elt(syz, lt, 0))
        space = nspace
        level = _sort_level(new)
    return degrees, steps, complete


def _poly_scale(terms, c, p):
    return {e: a * c % p for e, a in terms.items()}


def minimize_chain(ring: PolyRing, degrees: list, steps: list):
    """Prune unit entries: split off trivial pieces ``0 -> P -> P -> 0``.

    For a unit ``u`` at (row r, column c) of d_k, replace d_k by its Schur
    complement, delete column r of d_{k-1} and row c of d_{k+1}.
    """
    p = ring.p
    zero = ring.zero_exps
    L = len(steps)
    # mats[k] = {col_id: {row_id: terms}} for d_{k+1}; rows[k] = {row_id: set(col_ids)}
    mats = []
    rows = []
    for cols in steps:
        m = {}
        ridx: dict = {}
        for j, v in enumerate(cols):
            m[j] = vec_entries(v)
            for r in m[j]:
                ridx.setdefault(r, set()).add(j)
        mats.append(m)
        rows.append(ridx)
    degs = [dict(enumerate(d)) for d in degrees]

    def unit_in(col):
        for r in sorted(col):
            terms = col[r]
            if len(terms) == 1 and zero in terms:
                return r, terms[zero]
        return None

    for k in range(L):
        m = mats[k]
        ridx = rows[k]
        work = sorted(m, reverse=True)
        queued = set(work)
        while work:
            c = work.pop()
            queued.discard(c)
            if c not in m:
                continue
            hit = unit_in(m[c])
            if hit is None:
                continue
            r, u = hit
            uinv = pow(u, -1, p)
            colc = m.pop(c)
            for rr in colc:
                ridx[rr].discard(c)
            for j in sorted(ridx.get(r, ())):
                col = m[j]
                factor = _poly_scale(col[r], uinv, p)
                for rr, entry in colc.items():
                    newv = poly_sub(col.get(rr, {}), poly_mul(factor, entry, p), p)
                    if newv:
                        if rr not in col:
                            ridx.setdefault(rr, set()).add(j)
                        col[rr] = newv
                    elif rr in col:
                        del col[rr]
                        ridx[rr].discard(j)
                if r in col:
                    del col[r]
                if j not in queued:
                    queued.add(j)
                    work.append(j)
            ridx.pop(r, None)
            del degs[k][r]
            del degs[k + 1][c]
            if k > 0:
                gone = mats[k - 1].pop(r, None)
                if gone:
                    for rr in gone:
                        rows[k - 1][rr].discard(r)
            if k + 1 < L:
                nxt = mats[k + 1]
                for j in rows[k + 1].pop(c, ()):
                    nxt[j].pop(c, None)
    # renumber surviving basis elements
    out_degrees = []
    out_steps = []
    ids = [sorted(d) for d in degs]
    pos = [{old: new for new, old in enumerate(lst)} for lst in ids]
    for i, lst in enumerate(ids):
        out_degrees.append(tuple(degs[i][o] for o in lst))
    for k in range(L):
        cols = []
        for j in ids[k + 1]:
            col = mats[k].get(j, {})
            v = {}
            for r, terms in col.items():
                rn = pos[k][r]
                for e, a in terms.items():
                    v[(rn, e)] = a
            cols.append(v)
        out_steps.append(tuple(cols))
    while len(out_degrees) > 1 and not out_degrees[-1]:
        out_degrees.pop()
        out_steps.pop()
    return out_degrees, out_steps


def minimal_free_resolution(module: GradedModule, max_length: int | None = None
                            ) -> FreeResolution:
    """Minimal graded free resolution of ``coker`` of the presentation.

    ``max_length`` defaults to the variable count (enough to finish by the
    syzygy theorem); a resolution cut off early is flagged ``complete=False``.
    """
    degrees, steps, complete = schreyer_resolution(module, max_length)
    degrees, steps = minimize_chain(module.ring, degrees, steps)
    return FreeResolution(module.ring, tuple(tuple(d) for d in degrees), tuple(steps),
                          minimal=not module.ring.affine, complete=complete)


def resolve(module: GradedModule, max_length: int | None = None) -> FreeResolution:
    return module.resolution(max_length)


def projective_dimension(module: GradedModule):
    if module.is_zero():
        return NEG_INF
    res = resolve(module)
    if not res.complete:
        raise ResolutionError("resolution truncated; projective dimension unknown")
    return res.length


def depth_ab(module: GradedModule):
    """Depth by Auslander-Buchsbaum: variable count minus projective dimension."""
    if module.is_zero():
        return POS_INF
    return module.ring.nvars - projective_dimension(module)


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------


def _lpoly_add(a: dict, b: dict, sign: int = 1) -> dict:
    r = dict(a)
    for k, v in b.items():
        x = r.get(k, 0) + sign * v
        if x:
            r[k] = x
        else:
            r.pop(k, None)
    return r


def _lpoly_mul(a: dict, b: dict) -> dict:
    r: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = (ka[0] + kb[0], ka[1] + kb[1])
            x = r.get(k, 0) + va * vb
            if x:
                r[k] = x
            else:
                r.pop(k, None)
    return r


def _minimal_monomials(mons):
    mons = sorted(set(mons), key=lambda e: (sum(e), e))
    out = []
    for m in mons:
        if not any(divides(k, m) for k in out):
            out.append(m)
    return out


def monomial_numerator(gens: Sequence[tuple], var_degrees: Sequence[tuple]) -> dict:
    """Numerator of the Hilbert series of ``P / (gens)`` (bivariate, {(x,t): int})."""

    def deg(e):
        x = t = 0
        for a, (dx, dt) in zip(e, var_degrees):
            if a:
                x += a * dx
                t += a * dt
        return (x, t)

    memo: dict = {}

    def rec(gs):
        gs = tuple(_minimal_monomials(gs))
        if gs in memo:
            return memo[gs]
        if not gs:
            res = {(0, 0): 1}
        elif any(not any(g) for g in gs):
            res = {}
        else:
            supports = [frozenset(i for i, a in enumerate(g) if a) for g in gs]
            coprime = all(not (supports[i] & supports[j])
                          for i in range(len(gs)) for j in range(i + 1, len(gs)))
            if coprime:
                res = {(0, 0): 1}
                for g in gs:
                    d = deg(g)
                    res = _lpoly_mul(res, {(0, 0): 1, d: -1})
            else:
                counts = Counter(i for s in supports for i in s)
                var = min(counts, key=lambda i: (-counts[i], i))
                expo = sorted(g[var] for g in gs if g[var])
                e = expo[(len(expo) - 1) // 2]
                piv = [0] * len(gs[0])
                piv[var] = e
                piv = tuple(piv)
                plus = rec(gs + (piv,))
                colon = rec(tuple(tuple(max(a - b, 0) for a, b in zip(g, piv)) for g in gs))
                res = _lpoly_add(plus, _lpoly_mul({deg(piv): 1}, colon))
        memo[gs] = res
        return res

    return rec(tuple(gens))


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator / prod_v (1 - s^{deg_x v} u^{deg_t v})``."""

    numerator: tuple  # sorted ((x, t), coeff) pairs
    var_degrees: tuple

    @property
    def num(self) -> dict:
        return dict(self.numerator)

    def is_zero(self) -> bool:
        return not self.numerator

    def single(self) -> tuple[dict, list[int]]:
        """Specialise u -> s: ({exponent: coeff}, denominator weights)."""
        out: Counter = Counter()
        for (x, t), c in self.numerator:
            out[x + t] += c
        return {k: v for k, v in out.items() if v}, [a + b for a, b in self.var_degrees]

    def x_single(self) -> tuple[dict, list[int]]:
        """Forget the t-degree (only for series whose variables have t-degree 0)."""
        if any(t for _, t in self.var_degrees):
            raise AlgebraError("x-only specialisation needs t-degree 0 variables")
        out: Counter = Counter()
        for (x, t), c in self.numerator:
            out[x] += c
        return {k: v for k, v in out.items() if v}, [a for a, _ in self.var_degrees]

    def coefficients(self, upto: int, x_only: bool = False) -> list[int]:
        """Hilbert function values at degrees ``0..upto`` (total degree x+t)."""
        num, ws = self.x_single() if x_only else self.single()
        lo = min(num) if num else 0
        if lo < 0:
            raise AlgebraError("negative degrees: use coefficients_from")
        series = [0] * (upto + 1)
        for k, v in num.items():
            if k <= upto:
                series[k] += v
        for w in ws:
            for d in range(w, upto + 1):
                series[d] += series[d - w]
        return series

    def coefficients_from(self, lo: int, hi: int, x_only: bool = False) -> dict[int, int]:
        num, ws = self.x_single() if x_only else self.single()
        shift = min(0, min(num) if num else 0, lo)
        n = hi - shift
        series = [0] * (n + 1)
        for k, v in num.items():
            if k - shift <= n:
                series[k - shift] += v
        for w in ws:
            for d in range(w, n + 1):
                series[d] += series[d - w]
        return {d: series[d - shift] for d in range(lo, hi + 1)}

    def bigraded_coefficient(self, x: int, t: int) -> int:
        """Coefficient of ``s^x u^t`` by bounded expansion."""
        series: dict = {}
        for k, v in self.numerator:
            if k[0] <= x and k[1] <= t:
                series[k] = series.get(k, 0) + v
        lo_x = min([k[0] for k in series], default=0)
        lo_t = min([k[1] for k in series], default=0)
        keys = [(a, b) for a in range(lo_x, x + 1) for b in range(lo_t, t + 1)]
        for dx, dt in self.var_degrees:
            if dx <= 0 and dt <= 0:
                raise AlgebraError("expansion needs positively graded variables")
            new = dict(series)
            for a, b in keys:
                prev = (a - dx, b - dt)
                if prev in new:
                    new[(a, b)] = new.get((a, b), 0) + new[prev]
            series = {k: v for k, v in new.items() if v}
        return series.get((x, t), 0)

    def pole_order(self) -> float:
        """Krull dimension: order of the pole at s = 1 (−inf for zero)."""
        num, ws = self.single()
        if not num:
            return NEG_INF
        lo = min(num)
        coeffs = [0] * (max(num) - lo + 1)
        for k, v in num.items():
            coeffs[k - lo] = v
        mult = 0
        while coeffs and sum(coeffs) == 0:
            # synthetic division by (s - 1)
            q = []
            acc = 0
            for c in reversed(coeffs):
                acc = acc + c
                q.append(acc)
            q.reverse()
            coeffs = q[1:]
            mult += 1
        return len(ws) - mult


def hilbert_series(module: GradedModule) -> HilbertSeries:
    """Hilbert series from the lead terms of a Gröbner basis of the relations."""
    ring = module.ring
    if ring.affine:
        raise AlgebraError("Hilbert series needs a positively graded ring")
    leads: dict[int, list] = {}
    for g in module.gb():
        leads.setdefault(g.lt[0], []).append(g.lt[1])
    total: dict = {}
    for r, d in enumerate(module.row_degrees):
        num = monomial_numerator(leads.get(r, []), ring.var_bidegrees)
        total = _lpoly_add(total, _lpoly_mul({tuple(d): 1}, num))
    return HilbertSeries(tuple(sorted(total.items())), ring.var_bidegrees)


def hilbert_series_from_resolution(res: FreeResolution) -> HilbertSeries:
    """Alternating sum of the free modules' series."""
    total: dict = {}
    for i, degs in enumerate(res.degrees):
        for d in degs:
            total = _lpoly_add(total, {tuple(d): 1}, -1 if i % 2 else 1)
    return HilbertSeries(tuple(sorted(total.items())), res.ring.var_bidegrees)


def krull_dim(module: GradedModule):
    return hilbert_series(module).pole_order()


def prune_presentation(module: GradedModule) -> GradedModule:
    """Drop generators killed by a relation with a unit entry.

    For graded input the surviving generators form a minimal generating
    set, so their least degree is the initial degree of the module.
    """
    ring = module.ring
    p = ring.p
    zero = ring.zero_exps
    cols = {j: vec_entries(v) for j, v in enumerate(module.columns)}
    coldeg = dict(enumerate(module.column_degrees))
    rows = dict(enumerate(module.row_degrees))
    while True:
        pivot = None
        for j in sorted(cols):
            for r in sorted(cols[j]):
                terms = cols[j][r]
                if len(terms) == 1 and zero in terms:
                    pivot = (r, j, terms[zero])
                    break
            if pivot:
                break
        if pivot is None:
            break
        r, c, u = pivot
        uinv = pow(u, -1, p)
        colc = cols.pop(c)
        del coldeg[c]
        for j, col in cols.items():
            a = col.get(r)
            if not a:
                continue
            factor = _poly_scale(a, uinv, p)
            for rr, entry in colc.items():
                newv = poly_sub(col.get(rr, {}), poly_mul(factor, entry, p), p)
                if newv:
                    col[rr] = newv
                else:
                    col.pop(rr, None)
            col.pop(r, None)
        del rows[r]
    order = sorted(rows)
    pos = {old: new for new, old in enumerate(order)}
    new_cols = []
    new_degs = []
    for j in sorted(cols):
        v = {}
        for r, terms in cols[j].items():
            for e, a in terms.items():
                v[(pos[r], e)] = a
        if v:
            new_cols.append(v)
            new_degs.append(coldeg[j])
    return GradedModule(ring, tuple(rows[o] for o in order), tuple(new_cols), tuple(new_degs))


def initial_degree(module: GradedModule, component: int = 0):
    """Least degree (in the given bidegree component) of a nonzero element."""
    pruned = prune_presentation(module)
    if pruned.is_zero():
        return POS_INF
    return min(d[component] for d in pruned.row_degrees)
