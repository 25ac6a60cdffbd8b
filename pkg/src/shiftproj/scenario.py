"""JSON scenario files: a dimension, a topology, a basis, and options.

Example
-------
::

    {
      "n": 4,
      "topology": "path",
      "basis": "consensus",
      "options": {"seed": 0, "max_retries": 20}
    }

``topology`` is either a generator name ("path", "ring", "complete"), an
object ``{"name": "random", "p": 0.3, "seed": 7}``, or an explicit directed
edge list ``{"edges": [[0, 1], [1, 0], ...]}`` (an empty list leaves only
the diagonal).  ``basis`` is either "consensus" (the normalized all-ones
vector) or ``{"columns": [[...], ...]}`` holding an n x r orthonormal matrix
as row-major nested arrays.  Validation errors carry the offending field
path so broken files are diagnosable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .design import DesignOptions
from .linalg import SubspaceBasis
from .shifts import (
    GraphTopology,
    complete_topology,
    path_topology,
    random_connected_topology,
    ring_topology,
)

__all__ = ["Scenario", "ScenarioError", "scenario_from_dict", "load_scenario"]


class ScenarioError(ValueError):
    """Scenario file rejected; ``field`` is the JSON path of the problem."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Scenario:
    n: int
    topology: GraphTopology
    basis: SubspaceBasis
    options: DesignOptions

    def with_overrides(self, seed: int | None = None, residual_tol: float | None = None) -> "Scenario":
        opts = self.options
        if seed is not None:
            opts = replace(opts, seed=seed)
        if residual_tol is not None:
            opts = replace(opts, residual_tol=residual_tol)
        return replace(self, options=opts)


def _require_positive_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ScenarioError(field, f"expected a positive integer, got {value!r}")
    return value


def _parse_edges(edges, n: int, field: str) -> GraphTopology:
    if not isinstance(edges, list):
        raise ScenarioError(field, "expected a list of [i, j] pairs")
    mask = np.eye(n, dtype=bool)
    for k, pair in enumerate(edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
        ):
            raise ScenarioError(f"{field}[{k}]", f"expected an [i, j] integer pair, got {pair!r}")
        i, j = pair
        if not (0 <= i < n and 0 <= j < n):
            raise ScenarioError(f"{field}[{k}]", f"node index out of range for n={n}: {pair!r}")
        mask[i, j] = True
    return GraphTopology(mask)


_NAMED_TOPOLOGIES = {
    "path": path_topology,
    "ring": ring_topology,
    "complete": complete_topology,
}


def _parse_topology(spec, n: int) -> GraphTopology:
    if isinstance(spec, str):
        if spec not in _NAMED_TOPOLOGIES:
            raise ScenarioError(
                "topology", f"unknown generator {spec!r}; expected one of "
                f"{sorted(_NAMED_TOPOLOGIES)} or 'random' with parameters"
            )
        return _NAMED_TOPOLOGIES[spec](n)
    if isinstance(spec, dict):
        if "edges" in spec:
            return _parse_edges(spec["edges"], n, "topology.edges")
        name = spec.get("name")
        if name in _NAMED_TOPOLOGIES:
            return _NAMED_TOPOLOGIES[name](n)
        if name == "random":
            p = spec.get("p")
            if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0 <= p <= 1:
                raise ScenarioError("topology.p", f"expected a probability in [0, 1], got {p!r}")
            seed = spec.get("seed", 0)
            if isinstance(seed, bool) or not isinstance(seed, int):
                raise ScenarioError("topology.seed", f"expected an integer, got {seed!r}")
            return random_connected_topology(n, float(p), seed)
        raise ScenarioError("topology.name", f"unknown generator {name!r}")
    raise ScenarioError("topology", f"expected a name, generator object, or edge list, got {spec!r}")


def _parse_basis(spec, n: int) -> SubspaceBasis:
    if spec == "consensus":
        return SubspaceBasis(np.full((n, 1), 1.0 / np.sqrt(n)))
    if isinstance(spec, dict) and "columns" in spec:
        try:
            cols = np.asarray(spec["columns"], dtype=float)
        except (TypeError, ValueError):
            raise ScenarioError("basis.columns", "expected nested arrays of numbers") from None
        if cols.ndim != 2 or cols.shape[0] != n:
            raise ScenarioError(
                "basis.columns", f"expected an {n} x r matrix, got shape {cols.shape}"
            )
        try:
            return SubspaceBasis(cols)
        except ValueError as exc:
            raise ScenarioError("basis.columns", str(exc)) from None
    raise ScenarioError("basis", f"expected 'consensus' or an object with 'columns', got {spec!r}")


_OPTION_FIELDS = {"seed": int, "max_retries": int, "sep": float, "residual_tol": float}


def _parse_options(spec) -> DesignOptions:
    if spec is None:
        return DesignOptions()
    if not isinstance(spec, dict):
        raise ScenarioError("options", f"expected an object, got {spec!r}")
    kwargs = {}
    for key, value in spec.items():
        if key not in _OPTION_FIELDS:
            raise ScenarioError(f"options.{key}", "unknown option")
        want = _OPTION_FIELDS[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"options.{key}", f"expected a number, got {value!r}")
        if want is int and not isinstance(value, int):
            raise ScenarioError(f"options.{key}", f"expected an integer, got {value!r}")
        kwargs[key] = want(value)
    return DesignOptions(**kwargs)


def scenario_from_dict(data) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("$", f"expected a JSON object, got {type(data).__name__}")
    unknown = set(data) - {"n", "topology", "basis", "options"}
    if unknown:
        raise ScenarioError(sorted(unknown)[0], "unknown field")
    if "n" not in data:
        raise ScenarioError("n", "missing required field")
    n = _require_positive_int(data["n"], "n")
    if "topology" not in data:
        raise ScenarioError("topology", "missing required field")
    if "basis" not in data:
        raise ScenarioError("basis", "missing required field")
    return Scenario(
        n=n,
        topology=_parse_topology(data["topology"], n),
        basis=_parse_basis(data["basis"], n),
        options=_parse_options(data.get("options")),
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError("$", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(data)
