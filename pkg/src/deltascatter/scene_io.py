"""
Scene documents: JSON on disk, ``SceneConfig`` in memory.

    {"dimension": 2, "k": 1.0, "formulation": "dfss",
     "scatterers": [{"position": [0, 0], "coupling": {"re": 1, "im": 0}}],
     "subtraction_constants": [0.0]}

``subtraction_constants`` is optional. A coupling may also be given as a
bare real number.
"""

from __future__ import annotations

import json
import math

from .errors import SceneParseError
from .model import Dimension, Formulation, SceneConfig, Scatterer, validate_scene

_KEYS = {"dimension", "k", "formulation", "scatterers", "subtraction_constants"}


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneParseError(f"expected a number, got {json.dumps(value)}", path)
    if not math.isfinite(value):
        raise SceneParseError("number must be finite", path)
    return float(value)


def _coupling(value, path):
    if isinstance(value, dict):
        extra = set(value) - {"re", "im"}
        if extra:
            raise SceneParseError(f"unknown keys {sorted(extra)}", path)
        if "re" not in value:
            raise SceneParseError("missing field 're'", path)
        return complex(_number(value["re"], path + ".re"), _number(value.get("im", 0.0), path + ".im"))
    return complex(_number(value, path))


def scene_from_dict(doc) -> SceneConfig:
    """Build a ``SceneConfig``; field errors carry a JSON path such as ``scatterers[1].coupling.re``."""
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a JSON object", "$")
    extra = set(doc) - _KEYS
    if extra:
        raise SceneParseError(f"unknown keys {sorted(extra)}", "$")
    for key in ("dimension", "k", "scatterers"):
        if key not in doc:
            raise SceneParseError(f"missing field '{key}'", "$")
    if doc["dimension"] not in (2, 3) or isinstance(doc["dimension"], bool):
        raise SceneParseError("dimension must be 2 or 3", "dimension")
    dim = Dimension(doc["dimension"])
    k = _number(doc["k"], "k")
    form = doc.get("formulation", "dfss")
    try:
        formulation = Formulation(form)
    except ValueError:
        raise SceneParseError(f"formulation must be 'standard' or 'dfss', got {form!r}",
                              "formulation") from None
    items = doc["scatterers"]
    if not isinstance(items, list) or not items:
        raise SceneParseError("scatterers must be a non-empty list", "scatterers")
    scatterers = []
    for i, item in enumerate(items):
        path = f"scatterers[{i}]"
        if not isinstance(item, dict):
            raise SceneParseError("scatterer must be an object", path)
        for key in ("position", "coupling"):
            if key not in item:
                raise SceneParseError(f"missing field '{key}'", path)
        pos = item["position"]
        if not isinstance(pos, list) or len(pos) != int(dim):
            raise SceneParseError(f"position must be a list of {int(dim)} numbers",
                                  path + ".position")
        coords = tuple(_number(c, f"{path}.position[{j}]") for j, c in enumerate(pos))
        scatterers.append(Scatterer(coords, _coupling(item["coupling"], path + ".coupling")))
    constants = doc.get("subtraction_constants")
    if constants is not None:
        if not isinstance(constants, list):
            raise SceneParseError("subtraction_constants must be a list", "subtraction_constants")
        constants = tuple(
            _number(c, f"subtraction_constants[{i}]") for i, c in enumerate(constants)
        )
    return validate_scene(SceneConfig(dim, k, tuple(scatterers), formulation, constants))


def loads_scene(text: str) -> SceneConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return scene_from_dict(doc)


def load_scene(path) -> SceneConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneParseError(f"cannot read scene file: {exc.strerror}", str(path)) from None
    return loads_scene(text)


def scene_to_dict(config: SceneConfig) -> dict:
    doc = {
        "dimension": int(config.dimension),
        "k": config.k,
        "formulation": config.formulation.value,
        "scatterers": [
            {"position": list(s.position), "coupling": {"re": s.coupling.real, "im": s.coupling.imag}}
            for s in config.scatterers
        ],
    }
    if config.subtraction_constants is not None:
        doc["subtraction_constants"] = list(config.subtraction_constants)
    return doc
