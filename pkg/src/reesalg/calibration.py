"""Anchor checks that freeze the duality shift conventions per characteristic.

Operations whose answers depend on the σ twist or the fiber-degree shift
refuse to run until :func:`calibrate` has passed for the characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import make_ring


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class CalibrationCheck:
    name: str
    expected: object
    observed: object

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


@dataclass(frozen=True)
class CalibrationRecord:
    characteristic: int
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "characteristic": self.characteristic,
            "passed": self.passed,
            "checks": [{"name": c.name, "expected": _plain(c.expected),
                        "observed": _plain(c.observed), "ok": c.ok} for c in self.checks],
        }


def _plain(v):
    if isinstance(v, float):
        return str(v)
    return v


_REGISTRY: dict[int, CalibrationRecord] = {}


def calibrate(p: int = 32003, force: bool = False) -> CalibrationRecord:
    """Run the anchor suite for characteristic ``p`` (cached)."""
    if p in _REGISTRY and not force:
        return _REGISTRY[p]
    from .blowup import BlowupInstance, _t_a_star, rees_presentation
    from .duality import a_invariants
    from .groebner import IdealData
    from .resolutions import GradedModule

    checks = []
    for m in range(1, 5):
        ring = make_ring(p, [f"x{i}" for i in range(m)])
        rec = a_invariants(GradedModule.free(ring, [(0, 0)]))
        checks.append(CalibrationCheck(f"a_{m}(k[x_1..x_{m}])", -m, rec.per_index[m]))
        others = [i for i, a in rec.per_index.items() if i != m and a != float("-inf")]
        checks.append(CalibrationCheck(f"a_i(k[x_1..x_{m}]) vanish off i={m}", [], others))
    ring = make_ring(p, ["x", "y", "z"])
    cusp = GradedModule.quotient_ring(IdealData.of(ring, ["x*y^2 - z^3"]))
    checks.append(CalibrationCheck("a*(cusp)", 0, a_invariants(cusp).a_star))
    ring = make_ring(p, ["x", "y"])
    pres = rees_presentation(BlowupInstance.of(ring, ["x", "y"], label="maximal ideal"))
    checks.append(CalibrationCheck("a*(R[(x,y)t]) t-grading", -1, _t_a_star(pres, "structure_sheaf")))
    checks.append(CalibrationCheck("a*(omega of R[(x,y)t]) t-grading", 0, _t_a_star(pres, "canonical")))
    rec = CalibrationRecord(p, tuple(checks))
    _REGISTRY[p] = rec
    return rec


def require_calibration(p: int) -> CalibrationRecord:
    rec = _REGISTRY.get(p)
    if rec is None:
        raise CalibrationError(f"characteristic {p} is not calibrated; run calibrate({p}) first")
    if not rec.passed:
        bad = [c.name for c in rec.checks if not c.ok]
        raise CalibrationError(f"calibration failed for characteristic {p}: {bad}")
    return rec


def is_calibrated(p: int) -> bool:
    rec = _REGISTRY.get(p)
    return rec is not None and rec.passed


def reset_calibration() -> None:
    _REGISTRY.clear()
