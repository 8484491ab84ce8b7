"""Problem files: JSON in, typed objects out.

All polynomials are parsed in the declared ring; errors carry the JSON
path of the offending field so the CLI can point at it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .family import DEFAULT_SAMPLES, FamilyProblem
from .geometry import Stratification, Stratum, Variety, default_stratification
from .ideal import IdealHandle, Limits, is_member
from .poly import ParseError, Poly, parse_poly, rat

__all__ = ["ProblemError", "Problem", "load_problem", "parse_problem", "canonical_json", "input_hash"]

_TOP_KEYS = {"ring", "space", "function", "extension", "strata", "family", "points", "seed", "limits"}
_LIMIT_KEYS = {"degree": "max_degree", "basis": "max_basis"}


class ProblemError(ValueError):
    """Schema or parse failure; ``path`` locates the field."""

    def __init__(self, path, message, offset=None):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.detail = message
        self.offset = offset

    def as_dict(self):
        out = {"path": self.path, "message": self.detail}
        if self.offset is not None:
            out["offset"] = self.offset
        return out


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def input_hash(raw) -> str:
    return hashlib.sha256(canonical_json(raw).encode("utf-8")).hexdigest()


def _poly(src, ring, path) -> Poly:
    if not isinstance(src, str):
        raise ProblemError(path, "expected a polynomial string")
    try:
        return parse_poly(src, ring)
    except ParseError as e:
        raise ProblemError(path, str(e), getattr(e, "offset", None)) from None


def _polys(src, ring, path) -> list:
    if not isinstance(src, list):
        raise ProblemError(path, "expected a list of polynomial strings")
    return [_poly(s, ring, f"{path}[{i}]") for i, s in enumerate(src)]


def _rat(src, path):
    if isinstance(src, bool) or not isinstance(src, (str, int)):
        raise ProblemError(path, "expected a rational string such as \"-1/3\"")
    try:
        return rat(src)
    except (ValueError, ZeroDivisionError) as e:
        raise ProblemError(path, f"bad rational: {e}") from None


def _int(src, path, minimum=None):
    if isinstance(src, bool) or not isinstance(src, int):
        raise ProblemError(path, "expected an integer")
    if minimum is not None and src < minimum:
        raise ProblemError(path, f"must be at least {minimum}")
    return src


@dataclass
class Problem:
    raw: dict
    ring: tuple
    space: list
    function: Poly
    extension: Poly | None = None
    strata: list | None = None
    family: dict | None = None
    points: list = field(default_factory=list)
    seed: int = 0
    limits: dict = field(default_factory=dict)

    @property
    def f(self) -> Poly:
        """The ambient polynomial used for all computations."""
        return self.extension if self.extension is not None else self.function

    @property
    def hash(self) -> str:
        return input_hash(self.raw)

    @property
    def work_ring(self) -> tuple:
        if self.family:
            return tuple(v for v in self.ring if v != self.family["param"])
        return self.ring

    def _down(self, polys, path):
        ring = self.work_ring
        try:
            return [p.change_ring(ring) for p in polys]
        except ValueError:
            raise ProblemError(path, "must not involve the family parameter") from None

    def variety(self) -> Variety:
        ideal = IdealHandle(self.work_ring, self._down(self.space, "space.ideal"))
        if not ideal.generators:
            return Variety(ideal, dim=len(self.work_ring))
        return Variety(ideal)

    def stratification(self, required=True) -> Stratification | None:
        X = self.variety()
        if self.strata is None:
            try:
                return default_stratification(X)
            except ValueError as e:
                if required:
                    raise ProblemError("strata", f"no strata given and {e}") from None
                return None
        ring = self.work_ring
        built = []
        for i, s in enumerate(self.strata):
            closure = IdealHandle(ring, self._down(s["closure"], f"strata[{i}].closure"))
            boundary = IdealHandle(ring, self._down(s["boundary"], f"strata[{i}].boundary"))
            if not s["boundary"]:
                boundary = IdealHandle.unit(ring)
            built.append(Stratum(s["name"], closure, boundary, s["dim"], s["link_betti"]))
        return Stratification(built, X)

    def limits_object(self) -> Limits:
        kw = {_LIMIT_KEYS[k]: v for k, v in self.limits.items() if k in _LIMIT_KEYS}
        return Limits(**kw)

    def family_problem(self) -> FamilyProblem:
        if not self.family:
            raise ProblemError("family", "this command needs a family section")
        fam = self.family
        strat = self.stratification()
        try:
            return FamilyProblem(fam["param"], self.f, strat, fam["component"], fam["samples"])
        except ValueError as e:
            raise ProblemError("family", str(e)) from None


def parse_problem(raw) -> Problem:
    if not isinstance(raw, dict):
        raise ProblemError("$", "problem must be a JSON object")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise ProblemError("$", f"unknown keys {unknown}")
    for key in ("ring", "space", "function"):
        if key not in raw:
            raise ProblemError(key, "required")
    ring_obj = raw["ring"]
    if not isinstance(ring_obj, dict) or not isinstance(ring_obj.get("vars"), list):
        raise ProblemError("ring.vars", "expected a list of variable names")
    ring = tuple(ring_obj["vars"])
    if not ring or not all(isinstance(v, str) and v.isidentifier() for v in ring):
        raise ProblemError("ring.vars", "variable names must be identifiers")
    if len(set(ring)) != len(ring):
        raise ProblemError("ring.vars", "duplicate variable names")
    space = raw["space"]
    if not isinstance(space, dict) or "ideal" not in space:
        raise ProblemError("space.ideal", "required")
    p = Problem(raw=raw, ring=ring, space=_polys(space["ideal"], ring, "space.ideal"),
                function=_poly(raw["function"], ring, "function"))
    if "extension" in raw:
        p.extension = _poly(raw["extension"], ring, "extension")
        if not is_member(p.extension - p.function, IdealHandle(ring, p.space)):
            raise ProblemError("extension", "does not restrict to the function on the space")
    if "strata" in raw:
        if not isinstance(raw["strata"], list) or not raw["strata"]:
            raise ProblemError("strata", "expected a nonempty list")
        p.strata = []
        for i, s in enumerate(raw["strata"]):
            path = f"strata[{i}]"
            if not isinstance(s, dict):
                raise ProblemError(path, "expected an object")
            for key in ("name", "closure", "boundary", "dim"):
                if key not in s:
                    raise ProblemError(f"{path}.{key}", "required")
            lb = s.get("link_betti")
            links = None
            if lb is not None:
                if not isinstance(lb, dict):
                    raise ProblemError(f"{path}.link_betti", "expected an object")
                links = {}
                for k, v in lb.items():
                    try:
                        j = int(k)
                    except ValueError:
                        raise ProblemError(f"{path}.link_betti", f"key {k!r} is not an integer") from None
                    if j < -1:
                        raise ProblemError(f"{path}.link_betti", "keys must be >= -1")
                    links[j] = _int(v, f"{path}.link_betti.{k}", 0)
            p.strata.append({
                "name": str(s["name"]),
                "closure": _polys(s["closure"], ring, f"{path}.closure"),
                "boundary": _polys(s["boundary"], ring, f"{path}.boundary"),
                "dim": _int(s["dim"], f"{path}.dim", 0),
                "link_betti": links,
            })
    if "family" in raw:
        fam = raw["family"]
        if not isinstance(fam, dict) or "param" not in fam:
            raise ProblemError("family.param", "required")
        if fam["param"] not in ring:
            raise ProblemError("family.param", "not a ring variable")
        samples = fam.get("samples", list(DEFAULT_SAMPLES))
        if not isinstance(samples, list):
            raise ProblemError("family.samples", "expected a list")
        p.family = {
            "param": fam["param"],
            "samples": [_rat(a, f"family.samples[{i}]") for i, a in enumerate(samples)],
            "component": _polys(fam.get("component", []), ring, "family.component"),
        }
    if "points" in raw:
        if not isinstance(raw["points"], list):
            raise ProblemError("points", "expected a list of points")
        for i, pt in enumerate(raw["points"]):
            if not isinstance(pt, list) or len(pt) != len(p.work_ring):
                raise ProblemError(f"points[{i}]", f"expected {len(p.work_ring)} coordinates")
            p.points.append(tuple(_rat(c, f"points[{i}][{j}]") for j, c in enumerate(pt)))
    if "seed" in raw:
        p.seed = _int(raw["seed"], "seed")
    if "limits" in raw:
        lim = raw["limits"]
        if not isinstance(lim, dict):
            raise ProblemError("limits", "expected an object")
        for k, v in lim.items():
            if k not in _LIMIT_KEYS:
                raise ProblemError(f"limits.{k}", "unknown limit")
            _int(v, f"limits.{k}", 1)
        p.limits = dict(lim)
    return p


def load_problem(path) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ProblemError("$", f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ProblemError("$", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return parse_problem(raw)
