"""Ext against the ambient ring, a-invariants, regularity and CM tests.

Graded local duality over a polynomial ring P in m variables:
``a_i(M) = -indeg Ext^{m-i}_P(M, P(-σ))`` where σ is the sum of the variable
degrees.  Ext is the homology of the dualized minimal resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .algebra import AlgebraError
from .engine import Space
from .resolutions import (
    NEG_INF,
    POS_INF,
    GradedModule,
    ResolutionError,
    depth_ab,
    initial_degree,
    kernel_vectors,
    krull_dim,
    prune_presentation,
    resolve,
)


class RegularityMismatch(AssertionError):
    def __init__(self, via_a: float, via_betti: float):
        super().__init__(f"regularity disagrees: a-invariants give {via_a}, Betti table {via_betti}")
        self.via_a = via_a
        self.via_betti = via_betti


@dataclass(frozen=True)
class ExtRecord:
    index: int
    module: GradedModule

    def is_zero(self) -> bool:
        return self.module.is_zero()


@dataclass(frozen=True)
class AInvariantRecord:
    per_index: dict
    a_star: float
    depth: float
    dim: float

    def finite(self) -> dict:
        return {i: a for i, a in self.per_index.items() if a != NEG_INF}


def sigma(ring) -> tuple:
    return (sum(d[0] for d in ring.var_bidegrees), sum(d[1] for d in ring.var_bidegrees))


def _transpose(columns, nrows: int) -> list[dict]:
    """Columns of the transpose of a matrix given by its columns."""
    out = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for (r, e), c in col.items():
            out[r][(j, e)] = c
    return out


def ext_against_ring(module: GradedModule, i: int) -> ExtRecord:
    """``Ext^i_P(module, P(-σ))`` as a pruned finitely presented module."""
    if not 0 <= i <= module.ring.nvars:
        return ExtRecord(i, GradedModule(module.ring, (), ()))
    return ExtRecord(i, ext_module(module, i))


def ext_modules(module: GradedModule) -> list[GradedModule]:
    """``[Ext^0, ..., Ext^m]`` against ``P(-σ)``."""
    return [ext_module(module, i) for i in range(module.ring.nvars + 1)]


def ext_module(module: GradedModule, i: int) -> GradedModule:
    """``Ext^i_P(module, P(-σ))``, cached on the module."""
    key = ("ext", i)
    if key in module._cache:
        return module._cache[key]
    ring = module.ring
    res = resolve(module)
    if not res.complete:
        raise ResolutionError("resolution truncated; Ext unavailable")
    s = sigma(ring)
    dual_degs = [tuple((s[0] - d[0], s[1] - d[1]) for d in degs) for degs in res.degrees]
    out = _homology(ring, res, dual_degs, i)
    module._cache[key] = out
    return out


def _homology(ring, res, dual_degs, i: int) -> GradedModule:
    L = len(res.degrees) - 1
    if i > L or not res.degrees[i]:
        return GradedModule(ring, (), ())
    here = dual_degs[i]
    # K = ker(d_{i+1}^T : F_i^* -> F_{i+1}^*)
    if i + 1 <= L and res.degrees[i + 1]:
        dT = _transpose(res.differential(i + 1), len(res.degrees[i]))
        kgens = kernel_vectors(ring, dual_degs[i + 1], dT, here)
    else:
        z = ring.zero_exps
        kgens = [{(j, z): 1} for j in range(len(here))]
    if not kgens:
        return GradedModule(ring, (), ())
    space = Space(ring, list(here))
    kdegs = [space.term_bidegree(next(iter(v))) for v in kgens]
    # N = im(d_i^T : F_{i-1}^* -> F_i^*)
    if i >= 1:
        ngens = [v for v in _transpose(res.differential(i), len(res.degrees[i - 1])) if v]
        ndegs = [space.term_bidegree(next(iter(v))) for v in ngens]
    else:
        ngens, ndegs = [], []
    a = len(kgens)
    syz = kernel_vectors(ring, here, kgens + ngens, kdegs + ndegs)
    rels = []
    for v in syz:
        w = {(c, e): x for (c, e), x in v.items() if c < a}
        if w:
            rels.append(w)
    return prune_presentation(GradedModule(ring, tuple(kdegs), tuple(rels)))


def ext_nonvanishing(module: GradedModule) -> list[int]:
    return [i for i, E in enumerate(ext_modules(module)) if not E.is_zero()]


def a_invariants(module: GradedModule) -> AInvariantRecord:
    """a_i for i = 0..m from initial degrees of the Ext modules (x-grading)."""
    ring = module.ring
    if any(t for _, t in ring.var_bidegrees):
        raise AlgebraError("a-invariants need a single-graded ambient ring")
    m = ring.nvars
    exts = ext_modules(module)
    per = {}
    for i in range(m + 1):
        d = initial_degree(exts[m - i], 0)
        per[i] = NEG_INF if d == POS_INF else -d
    finite = [i for i, a in per.items() if a != NEG_INF]
    if not finite:
        return AInvariantRecord(per, NEG_INF, POS_INF, NEG_INF)
    return AInvariantRecord(per, max(per[i] for i in finite), min(finite), max(finite))


def a_star(module: GradedModule) -> float:
    return a_invariants(module).a_star


def regularity(module: GradedModule) -> tuple:
    """``(max(a_i + i), max(j - i over Betti))``; raises if they differ."""
    rec = a_invariants(module)
    via_a = max((a + i for i, a in rec.finite().items()), default=NEG_INF)
    via_b = resolve(module).betti().regularity
    if via_a != via_b:
        raise RegularityMismatch(via_a, via_b)
    return via_a, via_b


@dataclass(frozen=True)
class CMWitness:
    is_cm: bool
    depth: float
    dim: float

    def __bool__(self):
        return self.is_cm


def is_cm_graded(module: GradedModule) -> CMWitness:
    """Depth (Auslander-Buchsbaum) against Krull dimension (Hilbert series)."""
    if module.is_zero():
        return CMWitness(True, POS_INF, NEG_INF)
    dep = depth_ab(module)
    dim = krull_dim(module)
    return CMWitness(dep == dim, dep, dim)


@dataclass(frozen=True)
class AffineCMWitness:
    is_cm: bool
    codim: float
    nonvanishing: tuple

    def __bool__(self):
        return self.is_cm


def is_cm_equidim_affine(module: GradedModule) -> AffineCMWitness:
    """CM and locally equidimensional iff exactly one Ext^i(A, P) survives."""
    if module.is_zero():
        return AffineCMWitness(True, POS_INF, ())
    nz = tuple(ext_nonvanishing(module))
    return AffineCMWitness(len(nz) == 1, nz[0] if nz else POS_INF, nz)


# ---------------------------------------------------------------------------
# t-grading on presentations over base[T_1..T_s]
# ---------------------------------------------------------------------------


def t_grading_a_star(module: GradedModule) -> float:
    """a* for the grading by fiber degree: ``-min_j indeg_t Ext^j_P(F, P(-σ))``.

    The fiber variables form a regular sequence on P generating the
    irrelevant ideal of the t-grading, so the dualized resolution computes
    the t-graded top degrees of local cohomology up to the t-part of σ.
    """
    vals = [initial_degree(E, 1) for E in ext_modules(module)]
    lo = min(vals) if vals else POS_INF
    return NEG_INF if lo == POS_INF else -lo


def canonical_module(module: GradedModule) -> GradedModule:
    """``Ext^{m - dim}_P(M, P(-σ))``."""
    dim = krull_dim(module)
    if dim == NEG_INF:
        return GradedModule(module.ring, (), ())
    return ext_module(module, module.ring.nvars - int(dim))


def bigraded_initial_degrees(module: GradedModule) -> tuple:
    """Least x-degree and least t-degree among nonzero elements."""
    pruned = prune_presentation(module)
    if pruned.is_zero():
        return POS_INF, POS_INF
    return (min(d[0] for d in pruned.row_degrees), min(d[1] for d in pruned.row_degrees))


def is_finite(v) -> bool:
    return not (isinstance(v, float) and math.isinf(v))
