"""Ideals: Gröbner bases, normal forms, powers, elimination and ring-map kernels."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .algebra import (
    AlgebraError,
    MonomialOrder,
    Polynomial,
    PolyRing,
    RingMap,
    poly_mul,
)
from .engine import (
    GBStats,
    Reducer,
    Space,
    divides,
    full_reduce,
    module_gb,
    poly_to_vec,
    vec_to_poly,
)


@dataclass(frozen=True, eq=False)
class IdealData:
    """A finitely generated ideal; the reduced Gröbner basis is cached per order."""

    ring: PolyRing
    generators: tuple[Polynomial, ...]
    affine: bool = False
    _gb: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.ring != self.ring:
                raise AlgebraError("generator not in the ideal's ring")
        if not (self.affine or self.ring.affine):
            for g in gens:
                if not g.is_homogeneous():
                    raise AlgebraError(f"generator {g} is not homogeneous")

    @classmethod
    def of(cls, ring: PolyRing, gens: Iterable, affine: bool = False) -> "IdealData":
        polys = tuple(ring.parse(g) if isinstance(g, str) else g for g in gens)
        return cls(ring, polys, affine)

    def gb(self, strategy: str = "normal") -> tuple[Polynomial, ...]:
        return buchberger(self, strategy=strategy)

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def is_monomial(self) -> bool:
        return all(len(g.terms) == 1 for g in self.generators)

    def __repr__(self):
        return f"IdealData({', '.join(map(str, self.generators))})"


def buchberger(ideal: IdealData, strategy: str = "normal", stats: GBStats | None = None
               ) -> tuple[Polynomial, ...]:
    """Reduced Gröbner basis for the ring's order, sorted by lead monomial."""
    cache_key = (ideal.ring.order, strategy)
    if cache_key in ideal._gb and stats is None:
        return ideal._gb[cache_key]
    ring = ideal.ring
    space = Space(ring)
    basis = module_gb([poly_to_vec(g.terms) for g in ideal.generators], space,
                      stats=stats, strategy=strategy)
    out = tuple(Polynomial(ring, vec_to_poly(g.v)) for g in basis)
    ideal._gb[cache_key] = out
    return out


def normal_form(f: Polynomial, ideal: IdealData) -> Polynomial:
    if f.ring != ideal.ring:
        raise AlgebraError("polynomial and ideal live in different rings")
    gb = buchberger(ideal)
    space = Space(ideal.ring)
    red = Reducer(_elts(gb, space))
    return Polynomial(ideal.ring, vec_to_poly(full_reduce(poly_to_vec(f.terms), red, space)))


def _elts(gb: Sequence[Polynomial], space: Space):
    from .engine import Elt

    out = []
    for g in gb:
        v = poly_to_vec(g.terms)
        out.append(Elt(v, space.lead(v), 0))
    return out


def ideal_equal(a: IdealData, b: IdealData) -> bool:
    """Equality as ideals (double inclusion)."""
    return all(b.contains(g) for g in a.generators) and all(a.contains(g) for g in b.generators)


def lead_monomials(ideal: IdealData) -> list[tuple]:
    return [g.lead_exps() for g in buchberger(ideal)]


def minimalize(ideal: IdealData) -> IdealData:
    """Drop generators lying in the ideal generated by the remaining ones.

    Homogeneous input is scanned by increasing degree so the survivors form a
    minimal generating set; monomial input uses divisibility directly.
    """
    gens = _dedupe(ideal.generators)
    if not gens:
        return IdealData(ideal.ring, (), ideal.affine)
    if all(len(g.terms) == 1 for g in gens):
        mons = sorted({next(iter(g.terms)) for g in gens}, key=lambda e: (sum(e), e))
        kept = []
        for e in mons:
            if not any(divides(k, e) for k in kept):
                kept.append(e)
        return IdealData(ideal.ring, tuple(ideal.ring.monomial(e) for e in kept), ideal.affine)
    graded = not (ideal.affine or ideal.ring.affine)
    if graded:
        order = sorted(range(len(gens)), key=lambda i: (sum(gens[i].bidegree()), i))
        kept: list[Polynomial] = []
        for i in order:
            g = gens[i]
            if kept and IdealData(ideal.ring, tuple(kept)).contains(g):
                continue
            kept.append(g)
        return IdealData(ideal.ring, tuple(kept))
    kept = list(gens)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if others and IdealData(ideal.ring, tuple(others), True).contains(kept[i]):
            kept.pop(i)
        else:
            i += 1
    return IdealData(ideal.ring, tuple(kept), ideal.affine)


def _dedupe(polys: Sequence[Polynomial]) -> list[Polynomial]:
    seen = set()
    out = []
    for g in polys:
        g = g.monic()
        if g.is_zero() or g in seen:
            continue
        seen.add(g)
        out.append(g)
    return out


def ideal_product(a: IdealData, b: IdealData) -> IdealData:
    ring = a.ring
    prods = [Polynomial(ring, poly_mul(f.terms, g.terms, ring.p))
             for f in a.generators for g in b.generators]
    return IdealData(ring, tuple(_dedupe(prods)), a.affine or b.affine)


def ideal_power(ideal: IdealData, n: int, prune: bool = True) -> IdealData:
    """``I^n`` from all n-fold generator products, redundant ones pruned."""
    if n < 1:
        raise AlgebraError("ideal power needs n >= 1")
    ring = ideal.ring
    gens = ideal.generators
    prods = []
    for combo in combinations_with_replacement(range(len(gens)), n):
        acc = {ring.zero_exps: 1}
        for i in combo:
            acc = poly_mul(acc, gens[i].terms, ring.p)
        prods.append(Polynomial(ring, acc))
    out = IdealData(ring, tuple(_dedupe(prods)), ideal.affine)
    return minimalize(out) if prune else out


def ideal_sum(a: IdealData, b: IdealData) -> IdealData:
    return IdealData(a.ring, a.generators + b.generators, a.affine or b.affine)


# ---------------------------------------------------------------------------
# elimination and kernels
# ---------------------------------------------------------------------------


def _reorder_ring(ring: PolyRing, first: list[str], rest: list[str], order: MonomialOrder,
                  affine: bool | None = None) -> PolyRing:
    names = tuple(first + rest)
    bd = tuple(ring.var_bidegrees[ring.index[n]] for n in names)
    return PolyRing(ring.field, names, bd, order, ring.affine if affine is None else affine)


def transport(f: Polynomial, target: PolyRing) -> Polynomial:
    """Move ``f`` to a ring whose variables include all variables of ``f.ring``."""
    perm = [target.index[n] for n in f.ring.var_names]
    n = target.nvars
    terms = {}
    for e, c in f.terms.items():
        ee = [0] * n
        for i, a in enumerate(e):
            if a:
                ee[perm[i]] = a
        terms[tuple(ee)] = c
    return Polynomial(target, terms)


def restrict(f: Polynomial, target: PolyRing) -> Polynomial:
    """Move ``f`` to a subring; every variable it uses must exist there."""
    src = f.ring
    terms = {}
    keep = [src.index[n] for n in target.var_names]
    for e, c in f.terms.items():
        if sum(e) != sum(e[i] for i in keep):
            raise AlgebraError("polynomial uses a dropped variable")
        terms[tuple(e[i] for i in keep)] = c
    return Polynomial(target, terms)


def eliminate(ideal: IdealData, drop_vars: Iterable[str], stats: GBStats | None = None
              ) -> IdealData:
    """Generators of ``I ∩ k[kept variables]`` via a block order."""
    ring = ideal.ring
    drop = [n for n in ring.var_names if n in set(drop_vars)]
    unknown = set(drop_vars) - set(ring.var_names)
    if unknown:
        raise AlgebraError(f"cannot eliminate unknown variables {sorted(unknown)}")
    if not drop:
        return ideal
    keep = [n for n in ring.var_names if n not in drop]
    big = _reorder_ring(ring, drop, keep, MonomialOrder.block(len(drop)))
    moved = IdealData(big, tuple(transport(g, big) for g in ideal.generators), ideal.affine)
    gb = buchberger(moved, stats=stats)
    sub_ring = PolyRing(ring.field, tuple(keep),
                        tuple(ring.var_bidegrees[ring.index[n]] for n in keep),
                        ring.order, ring.affine)
    nd = len(drop)
    kept = [g for g in gb if all(not any(e[:nd]) for e in g.terms)]
    return IdealData(sub_ring, tuple(restrict(g, sub_ring) for g in kept), ideal.affine)


def kernel_of_map(fmap: RingMap, graded: bool = True, stats: GBStats | None = None
                  ) -> IdealData:
    """Defining ideal of the image of ``fmap`` (graph construction)."""
    src, tgt = fmap.source, fmap.target
    clash = set(src.var_names) & set(tgt.var_names)
    if clash:
        raise AlgebraError(f"source and target share variable names {sorted(clash)}")
    if graded and not fmap.is_degree_preserving():
        raise AlgebraError("images are not homogeneous of the source variable degrees")
    names = tgt.var_names + src.var_names
    bd = tgt.var_bidegrees + src.var_bidegrees
    affine = tgt.affine or src.affine or not graded
    big = PolyRing(tgt.field, names, bd, MonomialOrder.block(tgt.nvars), affine)
    gens = [transport(r, big) for r in fmap.target_relations]
    for name, img in zip(src.var_names, fmap.images):
        gens.append(big.var(name) - transport(img, big))
    graph = IdealData(big, tuple(gens), affine)
    gb = buchberger(graph, stats=stats)
    nt = tgt.nvars
    kept = [g for g in gb if all(not any(e[:nt]) for e in g.terms)]
    return IdealData(src, tuple(restrict(g, src) for g in kept), affine and not graded)
