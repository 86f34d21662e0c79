"""Independent reference computations used by the tests."""

from itertools import combinations_with_replacement, product

import sympy


def to_sympy(f, syms):
    p = f.ring.p
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        term = sympy.Integer(c)
        for s, a in zip(syms, e):
            term *= s ** a
        expr += term
    return sympy.Poly(expr, *syms, modulus=p)


def sympy_reduced_gb(polys, syms, order="grevlex"):
    p = polys[0].ring.p
    G = sympy.groebner([to_sympy(f, syms).as_expr() for f in polys], *syms, order=order, modulus=p)
    return {tuple(sorted(sympy.Poly(g, *syms, modulus=p).monic().terms())) for g in G.exprs}


def ours_as_sympy_set(polys, syms):
    return {tuple(sorted(to_sympy(g, syms).monic().terms())) for g in polys}


def monomials(nvars, d):
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def brute_hilbert_quotient(gens, nvars, upto):
    """dim_k (k[x]/(gens))_d by counting standard monomials of a monomial ideal."""
    return [sum(1 for m in monomials(nvars, d) if not any(divides(g, m) for g in gens))
            for d in range(upto + 1)]


def rank_mod_p(rows, p):
    """Rank of a list of sparse rows ({column: value}) over F_p."""
    pivots = {}
    rank = 0
    for row in rows:
        r = {k: v % p for k, v in row.items() if v % p}
        while r:
            col = max(r)
            if col in pivots:
                prow = pivots[col]
                f = r[col]
                for k, v in prow.items():
                    nv = (r.get(k, 0) - f * v) % p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                inv = pow(r[col], -1, p)
                pivots[col] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
    return rank


def exponent_vectors(nvars, max_exp):
    return list(product(range(max_exp + 1), repeat=nvars))
