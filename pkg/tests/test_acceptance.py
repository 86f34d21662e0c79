"""Acceptance criteria 1-8, one test each, with a PASS/FAIL summary line per criterion."""

import time
import warnings

from reesalg.algebra import make_ring
from reesalg.blowup import (
    BlowupInstance,
    diagonal_hilbert_check,
    diagonal_presentation,
    epsilon_estimator,
    ideal_degree_dims,
    max_gen_degree,
    rees_presentation,
    rees_t_grading_a_star,
    strand,
    theorem_verdict,
    truncated_rees_presentation,
    truncation_sheaf_check,
    veronese_check,
)
from reesalg.cli import suite_document
from reesalg.corpus import corpus_instances, corpus_run
from reesalg.duality import a_invariants, is_cm_graded
from reesalg.resolutions import GradedModule, hilbert_series, resolve

import conftest

P = 32003
SSTAR = ["x1^4", "x1^3*x2", "x1^2*x2^2", "x1*x2^3", "x2^4"]
NEEDED = {
    "diagonal": ["R_cohen_macaulay", "height_at_least_one", "locally_cm_on_proj",
                 "e_above_e0", "c_bound"],
}
NEEDED["truncated_rees"] = NEEDED["diagonal"] + ["a_star_R_negative"]


def _power(R, k):
    """Generators of (x1, x2)^k in k[x0, x1, x2]."""
    return [R.monomial((0, i, k - i)) for i in range(k + 1)]


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_example_invariants(ex28):
    t0 = time.perf_counter()
    a = [a_invariants(ex28.power_module(n)).a_star for n in (1, 2, 3)]
    est = epsilon_estimator(ex28, 4, 3)
    dt = time.perf_counter() - t0
    ok = a == [4, 7, 11] and est.epsilon_lower == 0 and est.stabilized and dt < 60
    record(1, ok, f"a*(I^n) n=1..3 = {a} (want [4, 7, 11]); epsilon = {est.epsilon_lower}, "
                  f"stabilized = {est.stabilized}; {dt:.2f}s")


def test_criterion_2_canonical_strands(ex28):
    t0 = time.perf_counter()
    R = ex28.ring
    pres = rees_presentation(BlowupInstance.of(R, SSTAR, label="S*"))
    omega = pres.canonical()
    problems = []
    values = []
    for n in (1, 2, 3):
        st = strand(omega, n, R.nvars).module
        hf = hilbert_series(st).coefficients_from(0, 12)
        want = ideal_degree_dims(R, _power(R, 4 * n - 2), (), 0, 12)
        got = [hf[m] for m in range(13)]
        ref = [want[m] for m in range(13)]
        if got != ref:
            first = next(m for m in range(13) if got[m] != ref[m])
            problems.append(f"n={n}: HF differs from degree {first} ({got[first]} vs {ref[first]})")
        values.append(a_invariants(st).a_star)
    dt = time.perf_counter() - t0
    ok = not problems and values == [1, 5, 9] and dt < 300
    record(2, ok, f"a*(omega_n) n=1..3 = {values} (want [1, 5, 9]); "
                  f"{'; '.join(problems) or 'HF match'}; {dt:.2f}s")


def test_criterion_3_cm_verdicts(ex28):
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d4 = is_cm_graded(diagonal_presentation(ex28, 1, 4).module()).is_cm
    d5 = is_cm_graded(diagonal_presentation(ex28, 1, 5).module()).is_cm
    t15 = is_cm_graded(truncated_rees_presentation(ex28, 1, 5).module()).is_cm
    rows = []
    consistent = True
    for target, c in (("diagonal", 4), ("diagonal", 5), ("truncated_rees", 5)):
        v = theorem_verdict(ex28, 1, c, target)
        certified = all(v.hypotheses.get(h, ("not-computed",))[0] == "holds" for h in NEEDED[target])
        consistent &= (v.predicted == "CM") == certified and v.sound
        rows.append(f"{target}(1,{c}) {v.predicted}/{v.computed}")
    dt = time.perf_counter() - t0
    ok = (not d4) and d5 and t15 and consistent and dt < 300
    record(3, ok, f"k[I_4] CM={d4} (want False), k[I_5] CM={d5} (want True), "
                  f"truncated(1,5) CM={t15} (want True); verdicts {', '.join(rows)}; "
                  f"consistent={consistent}; {dt:.2f}s")


def test_criterion_4_cusp_suite(cusp):
    t0 = time.perf_counter()
    R = cusp.base_module()
    rec = a_invariants(R)
    rees_cm = is_cm_graded(rees_presentation(cusp).module()).is_cm
    trunc = [is_cm_graded(truncated_rees_presentation(cusp, 1, c).module()).is_cm for c in (2, 3)]
    dt = time.perf_counter() - t0
    ok = rec.dim == 2 and rec.a_star == 0 and rees_cm and trunc == [False, False] and dt < 300
    record(4, ok, f"dim R = {rec.dim}, a*(R) = {rec.a_star}, R[xt] CM = {rees_cm}, "
                  f"c=2,3 CM = {trunc}; {dt:.2f}s")


def test_criterion_5_lemma_on_corpus(plane_max):
    table = corpus_run(3, 4, 20, seed=1)
    agg = table.aggregates()
    pres = rees_presentation(plane_max)
    aS = rees_t_grading_a_star(pres, "structure_sheaf")
    aW = rees_t_grading_a_star(pres, "canonical")
    max_ok = is_cm_graded(pres.module()).is_cm and aS == -1 and aW == 0
    ok = agg["lemma_violations"] == 0 and agg["lemma_checks"] > 0 and agg["errors"] == 0 and max_ok
    record(5, ok, f"{agg['lemma_checks']} CM Rees algebras checked, "
                  f"{agg['lemma_violations']} violations; R[(x,y)t]: a*(S) = {aS}, a*(omega) = {aW}")


def test_criterion_6_calibration_and_regularity():
    t0 = time.perf_counter()
    am = []
    for m in range(1, 5):
        ring = make_ring(P, [f"x{i}" for i in range(m)])
        rec = a_invariants(GradedModule.free(ring, [(0, 0)]))
        am.append(rec.per_index[m] if rec.finite() == {m: rec.per_index[m]} else None)
    checked = 0
    disagreements = []
    for seed in (1, 2):
        for inst in corpus_instances(3, 4, 20, seed):
            M = inst.power_module(1)
            rec = a_invariants(M)
            via_a = max(a + i for i, a in rec.finite().items())
            via_b = resolve(M).betti().regularity
            checked += 1
            if via_a != via_b:
                disagreements.append(inst.label)
    dt = time.perf_counter() - t0
    ok = am == [-1, -2, -3, -4] and checked >= 20 and not disagreements and dt < 600
    record(6, ok, f"a_m(k[x_1..x_m]) = {am}; reg two-route on {checked} ideals, "
                  f"{len(disagreements)} disagreements; {dt:.2f}s")


def test_criterion_7_structural_identities(ex28):
    cases = [(ex28, "ex28")] + [(inst, inst.label) for inst in corpus_instances(3, 4, 5, 1)]
    bad = []
    compared = 0
    for inst, label in cases:
        d = max_gen_degree(inst.ideal)
        checks = [truncation_sheaf_check(inst, 1, d), truncation_sheaf_check(inst, 1, d + 1),
                  veronese_check(inst, d + 1), diagonal_hilbert_check(inst, 1, d + 1, 3)]
        for chk in checks:
            compared += chk.compared
            if not chk.ok:
                bad.append(f"{label}:{chk.name}{chk.mismatches[:2]}")
    record(7, not bad, f"{len(cases)} instances, {compared} Hilbert values compared, "
                       f"{len(bad)} violations {'; '.join(bad)}")


def test_criterion_8_determinism():
    a, code_a, _ = suite_document()
    b, code_b, _ = suite_document()
    ok = a == b and code_a == code_b
    record(8, ok, f"two paper-suite runs byte-identical = {a == b} ({len(a)} bytes), exit {code_a}")
