"""Job files, the task runner and machine-readable reports.

Job file grammar (one statement per line, ``#`` starts a comment)::

    ring
      characteristic 32003
      variables x0 x1 x2
      order degrevlex
      relation x*y^2 - z^3        # repeatable
    end
    ideal I                       # name optional, default I
      x1^4
      x1^3*x2
    end
    limits
      n_max 4
      window 3
    end
    tasks
      a1 a_star n=1
      v5 verdict target=diagonal e=1 c=5 ideal=I
    end
"""

from __future__ import annotations

import json
import math
import signal
import time
import warnings
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Callable

from .algebra import LEX, DEGREVLEX, AlgebraError, PolynomialParseError, make_ring
from .calibration import calibrate

SCHEMA_VERSION = "1"
CHARACTERISTIC_NOTE = (
    "Computed over the prime field F_p; statements over fields of characteristic 0 "
    "are not certified by these numbers."
)

LIMIT_DEFAULTS = {
    "n_max": 4,
    "window": 3,
    "degree_bound": 12,
    "t_degree_bound": 4,
    "time_budget": 300,
}

ORDERS = {"degrevlex": DEGREVLEX, "lex": LEX}


class JobParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class TaskTimeout(Exception):
    pass


@dataclass(frozen=True)
class RingBlock:
    characteristic: int = 32003
    variables: tuple = ()
    order: str = "degrevlex"
    relations: tuple = ()


@dataclass(frozen=True)
class TaskSpec:
    id: str
    operation: str
    params: tuple = ()  # sorted (key, value) pairs

    def param(self, key, default=None):
        return dict(self.params).get(key, default)


@dataclass(frozen=True)
class JobSpec:
    ring: RingBlock
    ideals: tuple  # ((name, (generator text, ...)), ...)
    tasks: tuple
    limits: tuple  # sorted (key, value) pairs

    def limit(self, key: str) -> int:
        return dict(self.limits).get(key, LIMIT_DEFAULTS[key])

    def ideal_names(self) -> list[str]:
        return [n for n, _ in self.ideals]


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _strip(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).rstrip()


def _value(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def parse_job(text: str) -> JobSpec:
    """Parse a job file; diagnostics carry line and column."""
    lines = text.splitlines()
    ring: dict = {"relations": []}
    ideals: list = []
    tasks: list = []
    limits: dict = {}
    seen_ring = False
    i = 0
    n = len(lines)

    def block(start):
        out = []
        j = start
        while j < n:
            raw = lines[j]
            s = _strip(raw)
            if s.strip() == "end":
                return out, j + 1
            if s.strip():
                col = len(s) - len(s.lstrip()) + 1
                out.append((j + 1, col, s.strip()))
            j += 1
        raise JobParseError("block is missing its 'end'", start, 1)

    while i < n:
        s = _strip(lines[i])
        if not s.strip():
            i += 1
            continue
        head = s.split()
        lineno = i + 1
        col = len(s) - len(s.lstrip()) + 1
        kind = head[0]
        if kind == "ring":
            if seen_ring:
                raise JobParseError("duplicate ring block", lineno, col)
            seen_ring = True
            body, i = block(i + 1)
            for ln, c, stmt in body:
                key, _, rest = stmt.partition(" ")
                rest = rest.strip()
                if key == "characteristic":
                    try:
                        ring["characteristic"] = int(rest)
                    except ValueError:
                        raise JobParseError(f"characteristic must be an integer, got {rest!r}", ln, c)
                elif key == "variables":
                    ring["variables"] = tuple(rest.replace(",", " ").split())
                elif key == "order":
                    if rest not in ORDERS:
                        raise JobParseError(f"unknown order {rest!r}", ln, c + len(key) + 1)
                    ring["order"] = rest
                elif key == "relation":
                    ring["relations"].append((ln, c + stmt.index(rest, len(key)), rest))
                else:
                    raise JobParseError(f"unknown ring key {key!r}", ln, c)
        elif kind == "ideal":
            name = head[1] if len(head) > 1 else "I"
            if len(head) > 2:
                raise JobParseError("ideal header takes at most a name", lineno, col)
            if name in [nm for nm, _ in ideals]:
                raise JobParseError(f"duplicate ideal {name!r}", lineno, col)
            body, i = block(i + 1)
            ideals.append((name, body))
        elif kind == "limits":
            body, i = block(i + 1)
            for ln, c, stmt in body:
                parts = stmt.split()
                if len(parts) != 2 or parts[0] not in LIMIT_DEFAULTS:
                    raise JobParseError(f"unknown limit {parts[0]!r}", ln, c)
                try:
                    limits[parts[0]] = int(parts[1])
                except ValueError:
                    raise JobParseError(f"limit {parts[0]} needs an integer", ln, c)
        elif kind == "tasks":
            body, i = block(i + 1)
            ids = set()
            for ln, c, stmt in body:
                parts = stmt.split()
                if len(parts) < 2:
                    raise JobParseError("task needs an id and an operation", ln, c)
                tid, op = parts[0], parts[1]
                if op not in OPERATIONS:
                    raise JobParseError(f"unknown task operation {op!r}", ln,
                                        c + stmt.index(op, len(tid)))
                if tid in ids:
                    raise JobParseError(f"duplicate task id {tid!r}", ln, c)
                ids.add(tid)
                params = {}
                for kv in parts[2:]:
                    k, eq, v = kv.partition("=")
                    if not eq:
                        raise JobParseError(f"parameter {kv!r} is not key=value", ln,
                                            c + stmt.index(kv))
                    if k not in OPERATIONS[op].params:
                        raise JobParseError(f"operation {op} takes no parameter {k!r}", ln,
                                            c + stmt.index(kv))
                    params[k] = _value(v)
                tasks.append(TaskSpec(tid, op, tuple(sorted(params.items()))))
        else:
            raise JobParseError(f"unknown block {kind!r}", lineno, col)

    if not seen_ring:
        raise JobParseError("missing ring block", 1, 1)
    if not ring.get("variables"):
        raise JobParseError("ring block declares no variables", 1, 1)
    ring_block = RingBlock(ring.get("characteristic", 32003), ring["variables"],
                           ring.get("order", "degrevlex"), ())
    try:
        R = _make_ring(ring_block)
    except (AlgebraError, ValueError) as exc:
        raise JobParseError(str(exc), 1, 1)

    def check_poly(ln, c, txt):
        try:
            R.parse(txt)
        except PolynomialParseError as exc:
            raise JobParseError(f"{exc.message}: {exc.token!r}", ln, c + exc.column - 1)
        except AlgebraError as exc:
            raise JobParseError(str(exc), ln, c)
        return txt

    rels = tuple(check_poly(ln, c, t) for ln, c, t in ring["relations"])
    ring_block = replace(ring_block, relations=rels)
    ideal_out = tuple((nm, tuple(check_poly(ln, c, t) for ln, c, t in body)) for nm, body in ideals)
    names = {nm for nm, _ in ideal_out}
    for t in tasks:
        ref = t.param("ideal")
        if ref is not None and ref not in names:
            raise JobParseError(f"task {t.id} refers to unknown ideal {ref!r}", 1, 1)
    return JobSpec(ring_block, ideal_out, tuple(tasks), tuple(sorted(limits.items())))


def serialize_job(spec: JobSpec) -> str:
    out = ["ring", f"  characteristic {spec.ring.characteristic}",
           f"  variables {' '.join(spec.ring.variables)}", f"  order {spec.ring.order}"]
    out += [f"  relation {r}" for r in spec.ring.relations]
    out.append("end")
    for name, gens in spec.ideals:
        out.append(f"ideal {name}")
        out += [f"  {g}" for g in gens]
        out.append("end")
    if spec.limits:
        out.append("limits")
        out += [f"  {k} {v}" for k, v in spec.limits]
        out.append("end")
    if spec.tasks:
        out.append("tasks")
        for t in spec.tasks:
            params = " ".join(f"{k}={v}" for k, v in t.params)
            out.append(f"  {t.id} {t.operation}" + (f" {params}" if params else ""))
        out.append("end")
    return "\n".join(out) + "\n"


def job_echo(spec: JobSpec) -> dict:
    return {
        "ring": {
            "characteristic": spec.ring.characteristic,
            "variables": list(spec.ring.variables),
            "order": spec.ring.order,
            "relations": list(spec.ring.relations),
        },
        "ideals": {name: list(gens) for name, gens in spec.ideals},
        "limits": {k: spec.limit(k) for k in LIMIT_DEFAULTS},
        "tasks": [{"id": t.id, "operation": t.operation, "params": dict(t.params)}
                  for t in spec.tasks],
    }


def _make_ring(block: RingBlock):
    return make_ring(block.characteristic, block.variables, order=ORDERS[block.order])


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


@dataclass
class Context:
    spec: JobSpec
    ring: object
    instances: dict = field(default_factory=dict)
    rees: dict = field(default_factory=dict)

    def instance(self, task: TaskSpec):
        from .blowup import BlowupInstance

        name = task.param("ideal", self.spec.ideals[0][0] if self.spec.ideals else None)
        if name is None:
            raise AlgebraError("task needs an ideal block")
        if name not in self.instances:
            gens = dict(self.spec.ideals)[name]
            self.instances[name] = BlowupInstance.of(self.ring, gens, self.spec.ring.relations,
                                                     label=name)
        return self.instances[name]

    def rees_of(self, task: TaskSpec):
        from .blowup import rees_presentation

        inst = self.instance(task)
        if inst.label not in self.rees:
            self.rees[inst.label] = rees_presentation(inst)
        return self.rees[inst.label]

    def base_or_power(self, task: TaskSpec):
        n = task.param("n", 1)
        inst = self.instance(task) if n else None
        if n == 0:
            from .resolutions import GradedModule
            from .groebner import IdealData

            return GradedModule.quotient_ring(IdealData(self.ring, tuple(
                self.ring.parse(r) for r in self.spec.ring.relations)))
        return inst.power_module(n)

    def base_module(self):
        from .groebner import IdealData
        from .resolutions import GradedModule

        return GradedModule.quotient_ring(IdealData(self.ring, tuple(
            self.ring.parse(r) for r in self.spec.ring.relations)))


@dataclass(frozen=True)
class Operation:
    fn: Callable
    params: tuple
    doc: str


def num(v):
    """JSON-safe number: infinities become strings."""
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def _a_record(rec) -> dict:
    return {"per_index": {str(i): num(a) for i, a in sorted(rec.per_index.items())},
            "a_star": num(rec.a_star), "depth": num(rec.depth), "dim": num(rec.dim)}


def op_dim(ctx, task):
    from .resolutions import krull_dim

    return {"dim": num(krull_dim(ctx.base_module()))}


def op_max_gen_degree(ctx, task):
    from .blowup import max_gen_degree

    inst = ctx.instance(task)
    return {"d": max_gen_degree(inst.ideal, inst.relations)}


def op_a_invariants(ctx, task):
    from .duality import a_invariants

    return _a_record(a_invariants(ctx.base_or_power(task)))


def op_a_star(ctx, task):
    from .duality import a_invariants

    return {"a_star": num(a_invariants(ctx.base_or_power(task)).a_star)}


def op_regularity(ctx, task):
    from .duality import regularity

    a, b = regularity(ctx.base_or_power(task))
    return {"via_a_invariants": num(a), "via_betti": num(b)}


def op_betti(ctx, task):
    from .resolutions import resolve

    bt = resolve(ctx.base_or_power(task)).betti()
    return {"betti": {f"{i},{d}": v for (i, d), v in sorted(bt.single().items())},
            "pd": num(bt.pd)}


def _eps(est) -> dict:
    return {"epsilon_lower": est.epsilon_lower, "stabilized": est.stabilized,
            "window": [[n, num(a), num(s)] for n, a, s in est.window]}


def op_epsilon(ctx, task):
    from .blowup import epsilon_estimator

    return _eps(epsilon_estimator(ctx.instance(task), ctx.spec.limit("n_max"),
                                  ctx.spec.limit("window")))


def op_epsilon_star(ctx, task):
    from .blowup import epsilon_star_estimator

    return _eps(epsilon_star_estimator(ctx.instance(task), ctx.spec.limit("n_max"),
                                       ctx.spec.limit("window"), ctx.rees_of(task)))


def op_rees(ctx, task):
    from .duality import is_cm_graded

    pres = ctx.rees_of(task)
    w = is_cm_graded(pres.module())
    return {"fiber_bidegrees": [list(b) for b in pres.raw_bidegrees],
            "defining_ideal": [str(g) for g in pres.defining_ideal.generators],
            "cm": w.is_cm, "depth": num(w.depth), "dim": num(w.dim)}


def op_locally_cm(ctx, task):
    from .blowup import locally_cm_on_proj

    w = locally_cm_on_proj(ctx.rees_of(task))
    return {"locally_cm": w.ok,
            "charts": [{"chart": c.chart, "codim": num(c.codim),
                        "nonvanishing_ext": list(c.nonvanishing), "ok": c.ok} for c in w.charts]}


def op_rees_a_star(ctx, task):
    from .blowup import rees_t_grading_a_star

    which = task.param("which", "structure_sheaf")
    return {"which": which, "a_star": num(rees_t_grading_a_star(ctx.rees_of(task), which))}


def op_truncation(ctx, task):
    from .blowup import truncation_generators

    inst = ctx.instance(task)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        J = truncation_generators(inst.ideal, task.param("e", 1), task.param("c"), inst.relations)
    return {"generators": [str(g) for g in J.generators]}


def op_diagonal(ctx, task):
    from .blowup import diagonal_presentation
    from .duality import is_cm_graded

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        D = diagonal_presentation(ctx.instance(task), task.param("e", 1), task.param("c"))
    w = is_cm_graded(D.module())
    return {"variables": D.ring.nvars, "relations": len(D.ideal.generators),
            "cm": w.is_cm, "depth": num(w.depth), "dim": num(w.dim)}


def op_truncated_rees(ctx, task):
    from .blowup import bigraded_a_invariants, truncated_rees_presentation
    from .duality import is_cm_graded

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        T = truncated_rees_presentation(ctx.instance(task), task.param("e", 1), task.param("c"))
    w = is_cm_graded(T.module())
    out = {"fibers": len(T.generators), "cm": w.is_cm, "depth": num(w.depth), "dim": num(w.dim)}
    if task.param("bigraded", 0):
        a1, a2 = bigraded_a_invariants(T)
        out["a1"] = num(a1)
        out["a2"] = num(a2)
    return out


def op_omega_strand(ctx, task):
    from .blowup import strand
    from .duality import a_invariants
    from .resolutions import hilbert_series

    pres = ctx.rees_of(task)
    n = task.param("n", 1)
    st = strand(pres.canonical(), n, pres.base_ring.nvars).module
    hf = hilbert_series(st).coefficients_from(0, ctx.spec.limit("degree_bound"))
    rec = a_invariants(st)
    return {"n": n, "hilbert": {str(d): v for d, v in sorted(hf.items())},
            "a_star": num(rec.a_star), "a_invariants": _a_record(rec)}


def op_verdict(ctx, task):
    from .blowup import theorem_verdict

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = theorem_verdict(ctx.instance(task), task.param("e", 1), task.param("c"),
                            task.param("target", "diagonal"), ctx.spec.limit("n_max"),
                            ctx.spec.limit("window"))
    return {"target": r.target, "e": r.e, "c": r.c,
            "hypotheses": {k: {"status": s, "detail": d} for k, (s, d) in sorted(r.hypotheses.items())},
            "predicted": r.predicted, "computed": r.computed, "agreement": r.agreement,
            "sound": r.sound, "details": {k: num(v) for k, v in sorted(r.details.items())}}


OPERATIONS: dict[str, Operation] = {
    "dim": Operation(op_dim, (), "Krull dimension of the base ring"),
    "max_gen_degree": Operation(op_max_gen_degree, ("ideal",), "d(I)"),
    "a_invariants": Operation(op_a_invariants, ("n", "ideal"), "a_i of I^n (n=0: the base ring)"),
    "a_star": Operation(op_a_star, ("n", "ideal"), "a* of I^n (n=0: the base ring)"),
    "regularity": Operation(op_regularity, ("n", "ideal"), "regularity by both routes"),
    "betti": Operation(op_betti, ("n", "ideal"), "graded Betti numbers"),
    "epsilon": Operation(op_epsilon, ("ideal",), "windowed epsilon estimate"),
    "epsilon_star": Operation(op_epsilon_star, ("ideal",), "windowed epsilon* estimate"),
    "rees": Operation(op_rees, ("ideal",), "Rees presentation and its CM status"),
    "locally_cm": Operation(op_locally_cm, ("ideal",), "chart-wise CM certificate"),
    "rees_a_star": Operation(op_rees_a_star, ("which", "ideal"), "a* in the fiber grading"),
    "truncation": Operation(op_truncation, ("e", "c", "ideal"), "basis of (I^e)_c"),
    "diagonal": Operation(op_diagonal, ("e", "c", "ideal"), "k[(I^e)_c] and its CM status"),
    "truncated_rees": Operation(op_truncated_rees, ("e", "c", "bigraded", "ideal"),
                                "R[(I^e)_c t] and its CM status"),
    "omega_strand": Operation(op_omega_strand, ("n", "ideal"), "strand of the canonical module"),
    "verdict": Operation(op_verdict, ("target", "e", "c", "ideal"), "theorem verdict"),
}


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


@contextmanager
def time_budget(seconds: int):
    """Wall-clock limit via SIGALRM (main thread only; otherwise unlimited)."""
    usable = seconds and seconds > 0 and hasattr(signal, "setitimer")
    armed = [True]
    if usable:
        try:
            def handler(signum, frame):
                if armed[0]:
                    raise TaskTimeout(f"time budget of {seconds}s exhausted")

            old = signal.signal(signal.SIGALRM, handler)
        except ValueError:
            usable = False
    if not usable:
        yield
        return
    # keep re-firing: an exception raised inside a gc callback or __del__ is
    # swallowed by the interpreter, so a single alarm can be lost
    signal.setitimer(signal.ITIMER_REAL, seconds, 0.1)
    try:
        yield
    finally:
        armed[0] = False
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


@dataclass
class TaskResult:
    id: str
    operation: str
    status: str  # ok | error | timeout
    result: dict
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"id": self.id, "operation": self.operation, "status": self.status,
                "result": self.result}


@dataclass
class Report:
    spec: JobSpec
    calibration: dict
    tasks: list
    calibration_ok: bool

    def as_dict(self) -> dict:
        from . import __version__

        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "characteristic": self.spec.ring.characteristic,
            "characteristic_note": CHARACTERISTIC_NOTE,
            "job": job_echo(self.spec),
            "calibration": self.calibration,
            "results": [t.as_dict() for t in self.tasks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    @property
    def exit_code(self) -> int:
        if not self.calibration_ok:
            return 2
        return 0 if all(t.status == "ok" for t in self.tasks) else 1

    def human(self) -> str:
        lines = [f"characteristic {self.spec.ring.characteristic}  "
                 f"calibration {'passed' if self.calibration_ok else 'FAILED'}"]
        for t in self.tasks:
            lines.append(f"{t.id:<12} {t.operation:<16} {t.status:<8} {t.seconds:8.2f}s  "
                         f"{_summary(t.result)}")
        lines.append(CHARACTERISTIC_NOTE)
        return "\n".join(lines)


def _summary(result: dict) -> str:
    keys = ("a_star", "d", "dim", "cm", "epsilon_lower", "stabilized", "locally_cm",
            "predicted", "computed", "via_betti", "error")
    parts = [f"{k}={result[k]}" for k in keys if k in result]
    return ", ".join(parts)


def run_task(ctx: Context, task: TaskSpec, budget: int) -> TaskResult:
    start = time.perf_counter()
    try:
        with time_budget(budget):
            result = OPERATIONS[task.operation].fn(ctx, task)
        status = "ok"
    except TaskTimeout as exc:
        status, result = "timeout", {"error": str(exc)}
    except Exception as exc:  # noqa: BLE001 - isolated per task
        status, result = "error", {"error": f"{type(exc).__name__}: {exc}"}
    return TaskResult(task.id, task.operation, status, result, time.perf_counter() - start)


def run_job(spec: JobSpec) -> Report:
    """Calibrate, then run every task in order with its own time budget."""
    p = spec.ring.characteristic
    rec = calibrate(p)
    if not rec.passed:
        return Report(spec, rec.as_dict(), [], False)
    ring = _make_ring(spec.ring)
    ctx = Context(spec, ring)
    results = [run_task(ctx, t, spec.limit("time_budget")) for t in spec.tasks]
    return Report(spec, rec.as_dict(), results, True)


def with_overrides(spec: JobSpec, characteristic=None, order=None, **limits) -> JobSpec:
    ring = spec.ring
    if characteristic is not None:
        ring = replace(ring, characteristic=characteristic)
    if order is not None:
        if order not in ORDERS:
            raise JobParseError(f"unknown order {order!r}", 1, 1)
        ring = replace(ring, order=order)
    lim = dict(spec.limits)
    lim.update({k: v for k, v in limits.items() if v is not None})
    return replace(spec, ring=ring, limits=tuple(sorted(lim.items())))
