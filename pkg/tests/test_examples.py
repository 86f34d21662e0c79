"""Worked examples in both ambient rings, checked against independent oracles."""

from itertools import product

import pytest

from reesalg.algebra import make_ring
from reesalg.blowup import (
    BlowupInstance,
    bigraded_a_invariants,
    diagonal_presentation,
    epsilon_estimator,
    locally_cm_on_proj,
    rees_presentation,
    strand,
    truncated_rees_presentation,
)
from reesalg.duality import a_invariants, is_cm_graded
from reesalg.resolutions import hilbert_series

from conftest import EX28

P = 32003
SSTAR = ["x1^4", "x1^3*x2", "x1^2*x2^2", "x1*x2^3", "x2^4"]


def interior_points(nbase, n, d):
    """Interior lattice points of the cone of R[(x1,x2)^4 t] in bidegree (d, n).

    Coordinates: exponents of the extra base variables (if any), then of x1, x2.
    The cone is cut out by all exponents >= 0, a1 + a2 >= 4n and n >= 0; the
    ring is normal, so its canonical module is spanned by interior points.
    """
    if n < 1:
        return 0
    count = 0
    for e in product(range(d + 1), repeat=nbase):
        if sum(e) != d or min(e) < 1:
            continue
        if e[-1] + e[-2] >= 4 * n + 1:
            count += 1
    return count


@pytest.mark.parametrize("names", [("x1", "x2"), ("x0", "x1", "x2")])
def test_canonical_strands_match_interior_points(names):
    R = make_ring(P, list(names))
    pres = rees_presentation(BlowupInstance.of(R, SSTAR))
    assert is_cm_graded(pres.module()).is_cm
    for n in (1, 2, 3):
        hf = hilbert_series(strand(pres.canonical(), n, R.nvars).module).coefficients_from(0, 14)
        assert [hf[d] for d in range(15)] == [interior_points(len(names), n, d) for d in range(15)]


def test_plane_canonical_strand_a_invariants():
    R = make_ring(P, ["x1", "x2"])
    pres = rees_presentation(BlowupInstance.of(R, SSTAR))
    for n in (1, 2, 3):
        st = strand(pres.canonical(), n, 2).module
        # omega_n = x1*x2*(x1,x2)^{4n-1}: first degree 4n+1 with 4n generators
        hf = hilbert_series(st).coefficients_from(0, 4 * n + 1)
        assert hf[4 * n] == 0 and hf[4 * n + 1] == 4 * n
        assert a_invariants(st).per_index[1] == 4 * n


def test_plane_example_values(ex28_plane):
    assert [a_invariants(ex28_plane.power_module(n)).a_star for n in (1, 2, 3)] == [4, 7, 11]
    est = epsilon_estimator(ex28_plane, 4, 3)
    assert est.slacks() == [0, -1, -1, -1] and est.epsilon_lower == 0 and est.stabilized
    assert locally_cm_on_proj(rees_presentation(ex28_plane)).ok
    with pytest.warns(UserWarning):
        assert not is_cm_graded(diagonal_presentation(ex28_plane, 1, 4).module()).is_cm
    assert is_cm_graded(diagonal_presentation(ex28_plane, 1, 5).module()).is_cm
    T = truncated_rees_presentation(ex28_plane, 1, 5)
    assert is_cm_graded(T.module()).is_cm
    assert bigraded_a_invariants(T) == (-1, -1)


def test_three_variable_example_values(ex28):
    assert [a_invariants(ex28.power_module(n)).a_star for n in (1, 2, 3)] == [3, 6, 10]
    w = locally_cm_on_proj(rees_presentation(ex28))
    assert w.failing() == ["x0"]
    D5 = diagonal_presentation(ex28, 1, 5)
    assert not is_cm_graded(D5.module()).is_cm


def test_three_variable_h_vector_by_counting(ex28):
    # dim (I^n)_{5n} in k[x0,x1,x2] by direct monomial counting
    gens = [(0, 4, 0), (0, 3, 1), (0, 1, 3), (0, 0, 4)]

    def in_power(e, n):
        if n == 0:
            return True
        return any(all(a >= b for a, b in zip(e, g)) and in_power(tuple(a - b for a, b in zip(e, g)), n - 1)
                   for g in gens)

    counts = []
    for n in range(5):
        d = 5 * n
        counts.append(sum(1 for a in range(d + 1) for b in range(d + 1 - a)
                          if in_power((a, b, d - a - b), n)))
    D5 = diagonal_presentation(BlowupInstance.of(ex28.ring, EX28), 1, 5)
    assert hilbert_series(D5.module()).coefficients(4) == counts
