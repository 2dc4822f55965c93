"""JSON run configuration with strict key checking.

Example::

    {
      "grid": {"L": 1.0, "n": 128},
      "params": {"p": 2, "q": 1.5, "r": 5, "a": 1, "b": 1, "lambda_rel": 0.5},
      "weights": {"f": "constant:1", "g": "constant:1"},
      "options": {"seed": 0, "n_starts": 5},
      "C_star": 1.0,
      "theta": 1.0
    }

``lambda_rel`` replaces ``lambda`` by a fraction of the threshold of the
applicable existence result.  Weights are ``"constant:<v>"``,
``"nodes:[v1, ..., vn]"`` or ``{"piecewise": [[x0, x1, v], ...]}`` where
nodes outside every interval get 0.
"""

import copy
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .grid import build_grid
from .kirchhoff import KirchhoffModel, ProblemParams, Regime, Variant
from .solver import SolveOptions

_TOP = {"grid", "params", "weights", "model", "options", "C_star", "theta"}
_GRID = {"L", "n"}
_PARAMS = {"p", "q", "r", "a", "b", "lambda", "lambda_rel"}
_WEIGHTS = {"f", "g"}
_MODEL = {"variant", "cut"}
_OPTIONS = {"max_iters", "step_init", "residual_tol", "seed", "n_starts"}


def _reject_unknown(section, allowed, where):
    if not isinstance(section, dict):
        raise InvalidArgumentError(f"{where} must be an object")
    extra = set(section) - allowed
    if extra:
        raise InvalidArgumentError(f"unknown key(s) in {where}: {sorted(extra)}")


def parse_weight(spec, grid):
    """Turn a weight spec into a nodal array on ``grid``."""
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return grid.constant(spec)
    if isinstance(spec, str):
        kind, _, body = spec.partition(":")
        if kind == "constant":
            return grid.constant(float(body))
        if kind == "nodes":
            vals = np.asarray(json.loads(body), dtype=float)
            return grid.check_field(vals, "weight")
    if isinstance(spec, dict) and set(spec) == {"piecewise"}:
        out = np.zeros(grid.n)
        x = grid.nodes
        for x0, x1, v in spec["piecewise"]:
            out[(x >= x0) & (x <= x1)] = float(v)
        return out
    raise InvalidArgumentError(f"unrecognized weight spec {spec!r}")


@dataclass
class RunConfig:
    """Validated configuration; ``raw`` keeps the original form for round trips."""

    raw: dict = field(repr=False)

    @classmethod
    def from_dict(cls, data):
        data = copy.deepcopy(data)
        _reject_unknown(data, _TOP, "config")
        for key in ("grid", "params", "weights"):
            if key not in data:
                raise InvalidArgumentError(f"config is missing '{key}'")
        _reject_unknown(data["grid"], _GRID, "grid")
        _reject_unknown(data["params"], _PARAMS, "params")
        _reject_unknown(data["weights"], _WEIGHTS, "weights")
        _reject_unknown(data.get("model", {}), _MODEL, "model")
        _reject_unknown(data.get("options", {}), _OPTIONS, "options")
        prm = data["params"]
        if ("lambda" in prm) == ("lambda_rel" in prm):
            raise InvalidArgumentError("give exactly one of params.lambda and params.lambda_rel")
        cfg = cls(data)
        cfg.build()  # validates everything
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return copy.deepcopy(self.raw)

    def dumps(self):
        return json.dumps(self.raw, indent=2, sort_keys=True)

    @property
    def C_star(self):
        return float(self.raw.get("C_star", 1.0))

    @property
    def theta(self):
        return float(self.raw.get("theta", 1.0))

    @property
    def lambda_rel(self):
        return self.raw["params"].get("lambda_rel")

    def with_overrides(self, **changes):
        """Copy with dotted-path overrides such as ``{"params.a": 0.2}``."""
        data = self.to_dict()
        for path, value in changes.items():
            node = data
            *head, last = path.split(".")
            for key in head:
                node = node.setdefault(key, {})
            if last == "lambda":
                node.pop("lambda_rel", None)
            if last == "lambda_rel":
                node.pop("lambda", None)
            node[last] = value
        return RunConfig.from_dict(data)

    def build(self):
        """Return ``(grid, params, model, options)``.

        With ``lambda_rel`` the returned params carry ``lam = 0`` until
        :func:`resolve_lambda` is applied.
        """
        d = self.raw
        grid = build_grid(d["grid"].get("L", 1.0), d["grid"].get("n", 128))
        prm = d["params"]
        try:
            p, q, r = float(prm["p"]), float(prm["q"]), float(prm["r"])
            a, b = float(prm.get("a", 0.0)), float(prm.get("b", 1.0))
        except KeyError as exc:
            raise InvalidArgumentError(f"params is missing {exc}") from None
        lam = float(prm.get("lambda", 0.0))
        f = parse_weight(d["weights"].get("f", "constant:1"), grid)
        g = parse_weight(d["weights"].get("g", "constant:1"), grid)
        params = ProblemParams(p, q, r, a, b, lam, f, g)
        m = d.get("model", {"variant": "PLAIN"})
        variant = Variant(m.get("variant", "PLAIN"))
        if variant is Variant.PLAIN:
            model = KirchhoffModel.plain(a, b)
        elif variant is Variant.TRUNCATED:
            model = KirchhoffModel.truncated(a, b, m["cut"])
        else:
            model = KirchhoffModel.modified(a, b, m["cut"], q)
        options = SolveOptions(**d.get("options", {}))
        if self.C_star <= 0 or self.theta <= 0:
            raise InvalidArgumentError("C_star and theta must be positive")
        return grid, params, model, options


def lambda_threshold(params, bundle, estimates):
    """Threshold of the existence result that fits the regime of ``params``."""
    regime = params.regime
    if regime is Regime.SUPER:
        return bundle.lambda_0
    if regime is Regime.CRITICAL:
        if bundle.lambda_hat_0 is None:
            raise InvalidArgumentError("lambda_rel needs a < 1/Lambda in the critical regime")
        return bundle.lambda_hat_0 / params.p
    vals = [v for v in (bundle.lambda_tilde_0, bundle.lambda_tilde_star) if v is not None]
    if not vals:
        raise InvalidArgumentError("no lambda threshold is defined for these parameters")
    return min(vals)


def resolve_lambda(cfg, grid, params, estimates, bundle):
    """Apply ``lambda_rel``; returns params unchanged when ``lambda`` was given."""
    if cfg.lambda_rel is None:
        return params
    return params.replace(lam=float(cfg.lambda_rel) * lambda_threshold(params, bundle, estimates))
