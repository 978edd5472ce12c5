"""Run configuration: a single JSON document, optionally overridden by
``--set key=value`` flags (flags win).  Everything needed to reproduce a run
lives in this one artifact; runs are seed-free and fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import timefn
from .exact import ExactProblem
from .mesh import build_mesh
from .operators import Potential
from .reduction import SourceSpec, reduce, reduce_with_potential
from .spectral import MAX_DEGREE, build_basis


class ConfigError(ValueError):
    pass


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


@dataclass
class RunConfig:
    name: str = "run"
    domain: tuple = (-10.0, 10.0)
    elements: object = 20
    degree: int = 6
    t_final: float = 10.0
    cfl: float = 0.5
    dt: float = None
    source: SourceSpec = field(default_factory=lambda: SourceSpec(()))
    potential: Potential = field(default_factory=Potential)
    initial_data: str = "exact"
    exact_mode: str = "global"
    turnon: dict = None
    snapshots: tuple = ()
    write_exact: bool = True
    converge: dict = None
    constraint_study: dict = None

    def validate(self):
        a, b = self.domain
        _require(a < 0.0 < b, "domain must satisfy a < 0 < b, got %r" % (self.domain,))
        _require(1 <= int(self.degree) <= MAX_DEGREE,
                 "degree must be in 1..%d, got %r" % (MAX_DEGREE, self.degree))
        _require(self.t_final >= 0.0, "t_final must be nonnegative")
        _require(self.cfl > 0.0, "cfl must be positive")
        _require(self.dt is None or self.dt > 0.0, "dt override must be positive")
        _require(self.initial_data in ("exact", "trivial"),
                 "initial_data must be 'exact' or 'trivial', got %r" % (self.initial_data,))
        _require(self.exact_mode in ("global", "causal"),
                 "exact_mode must be 'global' or 'causal'")
        for t in self.snapshots:
            _require(0.0 <= t <= self.t_final,
                     "snapshot time %g outside [0, %g]" % (t, self.t_final))
        if self.turnon is not None:
            _require(self.turnon.get("tau", 0.0) > 0.0, "turnon.tau must be positive")
            _require(self.turnon.get("delta_hat", 0.0) > 0.0,
                     "turnon.delta_hat must be positive")
        if self.initial_data == "exact":
            _require(self.exact_problem() is not None,
                     "initial_data 'exact' needs a single-term cos/sin source "
                     "with derivative order <= 2")
        return self

    def build_mesh(self):
        a, b = self.domain
        return build_mesh(a, b, self.elements)

    def build_basis(self):
        return build_basis(int(self.degree))

    def reduced_source(self):
        """Canonical reduction, honoring the potential when present."""
        if self.potential.is_zero():
            return reduce(self.source)
        return reduce_with_potential(self.source, self.potential.value_at_zero(),
                                     self.potential.slope_at_zero())

    def exact_problem(self):
        """ExactProblem when the source is a single closed-form term."""
        if len(self.source.terms) != 1 or not self.potential.is_zero():
            return None
        s, amp = self.source.terms[0]
        p = ExactProblem(s, amp)
        return p if p.has_closed_form() else None

    def to_dict(self):
        d = {
            "name": self.name,
            "domain": list(self.domain),
            "elements": (int(self.elements) if np.ndim(self.elements) == 0
                         else list(self.elements)),
            "degree": int(self.degree),
            "t_final": self.t_final,
            "cfl": self.cfl,
            "source": self.source.to_dict(),
            "potential": self.potential.to_dict(),
            "initial_data": self.initial_data,
            "exact_mode": self.exact_mode,
            "snapshots": list(self.snapshots),
            "write_exact": self.write_exact,
        }
        if self.dt is not None:
            d["dt"] = self.dt
        if self.turnon is not None:
            d["turnon"] = dict(self.turnon)
        if self.converge is not None:
            d["converge"] = dict(self.converge)
        if self.constraint_study is not None:
            d["constraint_study"] = dict(self.constraint_study)
        return d

    @classmethod
    def from_dict(cls, d):
        known = {"name", "domain", "elements", "degree", "t_final", "cfl", "dt",
                 "source", "potential", "initial_data", "exact_mode", "turnon",
                 "snapshots", "write_exact", "converge", "constraint_study"}
        unknown = set(d) - known
        _require(not unknown, "unknown config keys: %s" % ", ".join(sorted(unknown)))
        kw = {}
        if "name" in d:
            kw["name"] = str(d["name"])
        if "domain" in d:
            dom = d["domain"]
            _require(isinstance(dom, (list, tuple)) and len(dom) == 2,
                     "domain must be a [a, b] pair, got %r" % (dom,))
            kw["domain"] = (float(dom[0]), float(dom[1]))
        if "elements" in d:
            kw["elements"] = d["elements"]
        if "degree" in d:
            kw["degree"] = int(d["degree"])
        if "t_final" in d:
            kw["t_final"] = float(d["t_final"])
        if "cfl" in d:
            kw["cfl"] = float(d["cfl"])
        if "dt" in d and d["dt"] is not None:
            kw["dt"] = float(d["dt"])
        if "source" in d:
            try:
                kw["source"] = SourceSpec.from_dict(d["source"])
            except (KeyError, TypeError, ValueError) as e:
                raise ConfigError("bad source spec: %s" % e)
        if "potential" in d:
            kw["potential"] = Potential.from_dict(d["potential"])
        if "initial_data" in d:
            kw["initial_data"] = str(d["initial_data"])
        if "exact_mode" in d:
            kw["exact_mode"] = str(d["exact_mode"])
        if "turnon" in d and d["turnon"] is not None:
            to = d["turnon"]
            kw["turnon"] = {"tau": float(to["tau"]),
                            "delta_hat": float(to["delta_hat"]),
                            "include_g": bool(to.get("include_g", False))}
        if "snapshots" in d:
            kw["snapshots"] = tuple(float(t) for t in d["snapshots"])
        if "write_exact" in d:
            kw["write_exact"] = bool(d["write_exact"])
        if "converge" in d and d["converge"] is not None:
            kw["converge"] = dict(d["converge"])
        if "constraint_study" in d and d["constraint_study"] is not None:
            kw["constraint_study"] = dict(d["constraint_study"])
        return cls(**kw).validate()


def load_config(path, overrides=()):
    """Read a JSON config file and apply key=value overrides (flags win)."""
    with open(path) as f:
        raw = json.load(f)
    for item in overrides:
        if "=" not in item:
            raise ConfigError("override %r is not of the form key=value" % (item,))
        key, _, val = item.partition("=")
        try:
            parsed = json.loads(val)
        except json.JSONDecodeError:
            parsed = val
        target = raw
        parts = key.split(".")
        for p in parts[:-1]:
            target = target.setdefault(p, {})
        target[parts[-1]] = parsed
    return RunConfig.from_dict(raw)
