"""JSON document format for workbench instances.

A document describes one graded groupoid with its Haar weights, grading
group, cocycle, and optionally some named functions:

    {
      "name": "pair3-zgraded",
      "groupoid": {"builtin": "pair", "params": {"n": 3}},
      "haar": {"rho": {"1": 1.0, "2": 4.0, "3": 2.0}},
      "group": {"free_abelian": {"rank": 1}},
      "cocycle": {"(1,1)": [0], "(1,2)": [-1], ...},
      "functions": {"f": {"(1,2)": [2.0, 0.0]}}
    }

Groupoids are either built in (pair, cyclic_group, symmetric_group,
cyclic_action, group_bundle_cyclic, and the recursive disjoint_union /
product combinators) or explicit tables.  Complex numbers are [re, im]
pairs; group elements are an index (finite backend) or an integer vector
(free abelian).  Parsing validates everything: groupoid axioms, Haar
positivity, and the cocycle identities, with the JSON path in every error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .algebra import GroupoidFunction
from .grading import Cocycle, GradedGroupoid, validate_cocycle
from .groupoid import (
    Arrow,
    FiniteGroupoid,
    action_groupoid,
    disjoint_union,
    group_bundle,
    group_groupoid,
    haar_from_weights,
    pair_groupoid,
    product,
    validate_groupoid,
    validate_left_invariance,
)
from .groups import (
    DiscreteGroup,
    FiniteGroup,
    FreeAbelianGroup,
    cyclic_group,
    permutations_of,
    symmetric_group,
)


class DocumentError(ValueError):
    """Parse-time failure, carrying the JSON path of the offending field."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(eq=False)
class WorkbenchDocument:
    """A parsed and fully validated instance plus its named functions."""

    name: str
    system: GradedGroupoid
    functions: dict[str, GroupoidFunction]
    raw: dict[str, Any]

    @property
    def groupoid(self) -> FiniteGroupoid:
        return self.system.groupoid


def _require(obj: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        raise DocumentError(path, f"missing required field {key!r}")
    return obj[key]


def _as_object(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise DocumentError(path, f"expected an object, got {type(value).__name__}")
    return value


def build_groupoid(spec: Mapping[str, Any], path: str = "groupoid") -> FiniteGroupoid:
    """Construct a groupoid from a builtin or explicit specification."""
    spec = _as_object(spec, path)
    keys = set(spec)
    if keys == {"builtin", "params"} or keys == {"builtin"}:
        name = spec["builtin"]
        params = _as_object(spec.get("params", {}), f"{path}.params")
        return _build_builtin(name, params, path)
    if keys == {"explicit"}:
        return _build_explicit(_as_object(spec["explicit"], f"{path}.explicit"), f"{path}.explicit")
    raise DocumentError(path, "expected either {'builtin': ..., 'params': ...} or {'explicit': ...}")


def _build_builtin(name: Any, params: Mapping[str, Any], path: str) -> FiniteGroupoid:
    try:
        if name == "pair":
            return pair_groupoid(int(_require(params, "n", f"{path}.params")))
        if name == "cyclic_group":
            return group_groupoid(cyclic_group(int(_require(params, "n", f"{path}.params"))))
        if name == "symmetric_group":
            return group_groupoid(symmetric_group(int(_require(params, "n", f"{path}.params"))))
        if name == "cyclic_action":
            n = int(_require(params, "points", f"{path}.params"))
            return action_groupoid(list(range(n)), cyclic_group(n), lambda x, h: (x + h) % n)
        if name == "symmetric_action":
            n = int(_require(params, "points", f"{path}.params"))
            grp = symmetric_group(n)
            perms = permutations_of(n)
            inverses = [perms[grp.inv(i)] for i in range(grp.order)]
            return action_groupoid(list(range(n)), grp, lambda x, h: inverses[h][x])
        if name == "group_bundle_cyclic":
            orders = _require(params, "orders", f"{path}.params")
            return group_bundle([cyclic_group(int(k)) for k in orders])
        if name == "disjoint_union":
            left = build_groupoid(_require(params, "left", f"{path}.params"), f"{path}.params.left")
            right = build_groupoid(_require(params, "right", f"{path}.params"), f"{path}.params.right")
            return disjoint_union(left, right)
        if name == "product":
            left = build_groupoid(_require(params, "left", f"{path}.params"), f"{path}.params.left")
            right = build_groupoid(_require(params, "right", f"{path}.params"), f"{path}.params.right")
            return product(left, right)
    except DocumentError:
        raise
    except (ValueError, TypeError) as exc:
        raise DocumentError(path, str(exc)) from exc
    raise DocumentError(path, f"unknown builtin groupoid {name!r}")


def _build_explicit(spec: Mapping[str, Any], path: str) -> FiniteGroupoid:
    units = _require(spec, "units", path)
    arrows_raw = _require(spec, "arrows", path)
    arrows = []
    for i, rec in enumerate(arrows_raw):
        rec = _as_object(rec, f"{path}.arrows[{i}]")
        arrows.append(
            Arrow(
                id=str(_require(rec, "id", f"{path}.arrows[{i}]")),
                src=str(_require(rec, "src", f"{path}.arrows[{i}]")),
                dst=str(_require(rec, "dst", f"{path}.arrows[{i}]")),
            )
        )
    compose_raw = _require(spec, "compose", path)
    compose = {}
    for i, triple in enumerate(compose_raw):
        if not isinstance(triple, (list, tuple)) or len(triple) != 3:
            raise DocumentError(f"{path}.compose[{i}]", "expected a [first, second, product] triple")
        compose[(str(triple[0]), str(triple[1]))] = str(triple[2])
    invert = {str(k): str(v) for k, v in _as_object(_require(spec, "invert", path), f"{path}.invert").items()}
    unit_arrows = {
        str(k): str(v)
        for k, v in _as_object(_require(spec, "unit_arrows", path), f"{path}.unit_arrows").items()
    }
    try:
        return FiniteGroupoid([str(u) for u in units], arrows, compose, invert, unit_arrows)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from exc


def build_group(spec: Mapping[str, Any], path: str = "group") -> DiscreteGroup:
    spec = _as_object(spec, path)
    if set(spec) == {"finite"}:
        finite = _as_object(spec["finite"], f"{path}.finite")
        cayley = _require(finite, "cayley", f"{path}.finite")
        try:
            return FiniteGroup(cayley)
        except (ValueError, TypeError) as exc:
            raise DocumentError(f"{path}.finite.cayley", str(exc)) from exc
    if set(spec) == {"free_abelian"}:
        fa = _as_object(spec["free_abelian"], f"{path}.free_abelian")
        try:
            return FreeAbelianGroup(int(_require(fa, "rank", f"{path}.free_abelian")))
        except (ValueError, TypeError) as exc:
            raise DocumentError(f"{path}.free_abelian", str(exc)) from exc
    raise DocumentError(path, "expected exactly one of {'finite': ...} or {'free_abelian': ...}")


def _parse_complex(value: Any, path: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise DocumentError(path, f"complex values are [re, im] pairs, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def parse_document(text: str) -> WorkbenchDocument:
    """Parse and validate a document; raise DocumentError with a field path."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON: {exc}") from exc
    return document_from_dict(raw)


def document_from_dict(raw: Any) -> WorkbenchDocument:
    top = _as_object(raw, "$")
    allowed = {"name", "groupoid", "haar", "group", "cocycle", "functions"}
    unknown = set(top) - allowed
    if unknown:
        raise DocumentError("$", f"unknown fields {sorted(unknown)}")
    name = str(top.get("name", "document"))

    g = build_groupoid(_require(top, "groupoid", "$"), "groupoid")
    report = validate_groupoid(g)
    if not report:
        raise DocumentError("groupoid", f"axiom violation: {report.cause} {dict(report.witness)}")

    haar_spec = _as_object(_require(top, "haar", "$"), "haar")
    rho = _as_object(_require(haar_spec, "rho", "haar"), "haar.rho")
    for key, value in rho.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DocumentError(f"haar.rho.{key}", f"weights are numbers, got {value!r}")
    try:
        haar = haar_from_weights(g, {str(k): float(v) for k, v in rho.items()})
    except ValueError as exc:
        raise DocumentError("haar.rho", str(exc)) from exc
    if not validate_left_invariance(g, {aid: haar.weight(g, aid) for aid in g.arrow_ids}):
        raise DocumentError("haar.rho", "weights violate left invariance")

    group = build_group(_require(top, "group", "$"), "group")

    cocycle_spec = _as_object(_require(top, "cocycle", "$"), "cocycle")
    label = {}
    for aid in g.arrow_ids:
        if aid not in cocycle_spec:
            raise DocumentError(f"cocycle.{aid}", "missing label for this arrow")
        try:
            label[aid] = group.element_from_json(cocycle_spec[aid])
        except ValueError as exc:
            raise DocumentError(f"cocycle.{aid}", str(exc)) from exc
    extra = set(cocycle_spec) - set(g.arrow_ids)
    if extra:
        raise DocumentError("cocycle", f"labels for unknown arrows {sorted(extra)[:3]}")
    cocycle = Cocycle(group=group, label=label)
    creport = validate_cocycle(g, cocycle)
    if not creport:
        raise DocumentError("cocycle", f"identity violation: {creport.cause} {dict(creport.witness)}")

    functions: dict[str, GroupoidFunction] = {}
    for fname, coeffs in _as_object(top.get("functions", {}), "functions").items():
        coeffs = _as_object(coeffs, f"functions.{fname}")
        vec = np.zeros(g.n_arrows, dtype=np.complex128)
        for aid, value in coeffs.items():
            if not g.has_arrow(aid):
                raise DocumentError(f"functions.{fname}.{aid}", "unknown arrow")
            vec[g.index(aid)] = _parse_complex(value, f"functions.{fname}.{aid}")
        functions[str(fname)] = GroupoidFunction(g, vec)

    system = GradedGroupoid(g, haar, cocycle)
    return WorkbenchDocument(name=name, system=system, functions=functions, raw=dict(top))


def document_to_json(doc: WorkbenchDocument) -> dict[str, Any]:
    """The raw dictionary form (already validated), for emission to disk."""
    return dict(doc.raw)
