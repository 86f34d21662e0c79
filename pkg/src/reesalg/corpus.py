"""Seeded corpora of random monomial ideals and the per-instance checks run on them."""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field

from .algebra import make_ring
from .blowup import (
    BlowupInstance,
    locally_cm_on_proj,
    max_gen_degree,
    rees_presentation,
    rees_t_grading_a_star,
    theorem_verdict,
    truncation_generators,
)
from .calibration import calibrate
from .duality import RegularityMismatch, a_invariants, is_cm_graded
from .groebner import IdealData, minimalize
from .jobs import TaskTimeout, num, time_budget
from .resolutions import resolve


def random_monomial_ideal(rng: random.Random, nvars: int, max_deg: int) -> list[tuple]:
    """Three to five monomials of degree 2..max_deg (1 when max_deg is 1)."""
    k = rng.randint(3, 5)
    mons = set()
    while len(mons) < k:
        d = rng.randint(min(2, max_deg), max_deg)
        e = [0] * nvars
        for _ in range(d):
            e[rng.randrange(nvars)] += 1
        mons.add(tuple(e))
    return sorted(mons)


def corpus_instances(nvars: int = 3, max_deg: int = 4, count: int = 20, seed: int = 1):
    rng = random.Random(seed)
    ring = make_ring(32003, [f"x{i + 1}" for i in range(nvars)])
    out = []
    for i in range(count):
        mons = random_monomial_ideal(rng, nvars, max_deg)
        ideal = minimalize(IdealData(ring, tuple(ring.monomial(e) for e in mons)))
        out.append(BlowupInstance(ring, (), ideal, f"s{seed}-{i}"))
    return out


@dataclass
class CorpusRow:
    label: str
    generators: list
    status: str = "ok"  # ok | skipped | error
    fields: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"label": self.label, "generators": self.generators, "status": self.status,
                **self.fields}


@dataclass
class CorpusTable:
    params: dict
    calibration: dict
    rows: list

    def aggregates(self) -> dict:
        agg = {"rows": len(self.rows), "skipped": 0, "errors": 0,
               "reg_agreements": 0, "reg_disagreements": 0,
               "rees_cm_hits": 0, "lemma_checks": 0, "lemma_violations": 0,
               "verdicts": 0, "predicted_cm": 0, "soundness_violations": 0}
        for r in self.rows:
            f = r.fields
            if r.status == "skipped":
                agg["skipped"] += 1
            elif r.status == "error":
                agg["errors"] += 1
            if "reg_agree" in f:
                agg["reg_agreements" if f["reg_agree"] else "reg_disagreements"] += 1
            if f.get("rees_cm"):
                agg["rees_cm_hits"] += 1
            if "lemma_ok" in f:
                agg["lemma_checks"] += 1
                agg["lemma_violations"] += not f["lemma_ok"]
            v = f.get("verdict")
            if isinstance(v, dict):
                agg["verdicts"] += 1
                agg["predicted_cm"] += v["predicted"] == "CM"
                agg["soundness_violations"] += not v["sound"]
        return agg

    def as_dict(self) -> dict:
        return {"params": self.params, "calibration": self.calibration,
                "rows": [r.as_dict() for r in self.rows], "aggregates": self.aggregates()}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def human(self) -> str:
        lines = [f"{'label':<8} {'status':<8} {'d':>2} {'reg':>4} {'reesCM':>6} {'lemma':>5} "
                 f"{'pred':>13} {'comp':>6}  generators"]
        for r in self.rows:
            f = r.fields
            v = f.get("verdict")
            pred = v["predicted"] if isinstance(v, dict) else (v or "-")
            comp = v["computed"] if isinstance(v, dict) else "-"
            lines.append(f"{r.label:<8} {r.status:<8} {f.get('d', '-')!s:>2} "
                         f"{f.get('reg', '-')!s:>4} {f.get('rees_cm', '-')!s:>6} "
                         f"{f.get('lemma_ok', '-')!s:>5} {pred:>13} {comp:>6}  "
                         f"{', '.join(r.generators)}")
        agg = self.aggregates()
        lines.append("  ".join(f"{k}={v}" for k, v in agg.items()))
        return "\n".join(lines)


def check_instance(inst: BlowupInstance, max_diagonal_vars: int = 12, n_max: int = 3,
                   window: int = 2) -> dict:
    """Regularity by both routes, Rees CM status, the a*(S) = -1, a*(omega) = 0 check and one verdict row."""
    f: dict = {}
    d = max_gen_degree(inst.ideal)
    f["d"] = d
    M = inst.power_module(1)
    rec = a_invariants(M)
    via_a = max((a + i for i, a in rec.finite().items()))
    via_b = resolve(M).betti().regularity
    f["reg"] = num(via_b)
    f["reg_agree"] = via_a == via_b
    pres = rees_presentation(inst)
    w = is_cm_graded(pres.module())
    f["rees_cm"] = w.is_cm
    f["rees_depth"] = num(w.depth)
    f["rees_dim"] = num(w.dim)
    if w.is_cm:
        aS = rees_t_grading_a_star(pres, "structure_sheaf")
        aW = rees_t_grading_a_star(pres, "canonical")
        f["a_star_S"] = num(aS)
        f["a_star_omega"] = num(aW)
        f["lemma_ok"] = aS == -1 and aW == 0
    lcm = locally_cm_on_proj(pres)
    f["locally_cm"] = lcm.ok
    f["failing_charts"] = lcm.failing()
    c = d + 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        size = len(truncation_generators(inst.ideal, 1, c).generators)
    if size > max_diagonal_vars:
        f["verdict"] = f"skipped: {size} diagonal variables exceed {max_diagonal_vars}"
    else:
        v = theorem_verdict(inst, 1, c, "diagonal", n_max, window)
        f["verdict"] = {"c": c, "e": 1, "predicted": v.predicted, "computed": v.computed,
                        "sound": v.sound,
                        "failed": sorted(k for k, (s, _) in v.hypotheses.items() if s != "holds")}
    return f


def corpus_run(nvars: int = 3, max_deg: int = 4, count: int = 20, seed: int = 1,
               time_budget_s: int = 300, max_diagonal_vars: int = 12) -> CorpusTable:
    rec = calibrate(32003)
    params = {"nvars": nvars, "max_deg": max_deg, "count": count, "seed": seed,
              "max_diagonal_vars": max_diagonal_vars}
    rows = []
    for inst in corpus_instances(nvars, max_deg, count, seed):
        row = CorpusRow(inst.label, [str(g) for g in inst.ideal.generators])
        try:
            with time_budget(time_budget_s):
                row.fields = check_instance(inst, max_diagonal_vars)
        except TaskTimeout as exc:
            row.status = "skipped"
            row.fields = {"reason": str(exc)}
        except RegularityMismatch as exc:
            row.status = "error"
            row.fields = {"reg_agree": False, "reason": str(exc)}
        except Exception as exc:  # noqa: BLE001 - recorded per row
            row.status = "error"
            row.fields = {"reason": f"{type(exc).__name__}: {exc}"}
        rows.append(row)
    return CorpusTable(params, rec.as_dict(), rows)
