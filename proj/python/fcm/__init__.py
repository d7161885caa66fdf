"""Fuzzy cognitive maps: load models, compute structural metrics, run scenarios.

Documents are plain dicts in the structured model format. Every function that
takes a document also accepts its JSON text.
"""

import json as _json

from . import _core
from ._core import (
    FORMAT_VERSION,
    FcmError,
    InferenceError,
    ModelError,
    ParseError,
    ResolutionError,
    SchemaError,
    squash,
)

__all__ = [
    "FORMAT_VERSION",
    "FcmError",
    "InferenceError",
    "ModelError",
    "ParseError",
    "ResolutionError",
    "SchemaError",
    "calibrate",
    "compare",
    "fixture",
    "fixture_ids",
    "load",
    "metrics",
    "parse_matrix",
    "run",
    "squash",
    "to_matrix",
    "validate",
]


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def fixture_ids():
    return list(_core.fixture_ids())


def fixture(n):
    """Bundled scenario document, n in 1..3."""
    return _json.loads(_core.fixture(n))


def load(path):
    """Read a delimited matrix, structured document or vendor XML file."""
    return _json.loads(_core.load(str(path)))


def parse_matrix(text, name=""):
    return _json.loads(_core.parse_matrix(text, name))


def to_matrix(doc):
    return _core.to_matrix(_text(doc))


def validate(doc):
    """List of violations; empty when the model is well formed."""
    return _json.loads(_core.validate(_text(doc)))


def metrics(doc, square_density=False):
    return _json.loads(_core.metrics(_text(doc), square_density))


def run(doc, scenario=None, clamps=None, config=None):
    """Run a named scenario from the document, or an ad hoc clamp mapping.

    `clamps` given together with `scenario` replaces that scenario's clamps.
    `config` holds inference overrides, e.g. {"kernel": "kosko"}.
    """
    return _json.loads(
        _core.run(
            _text(doc),
            scenario,
            None if clamps is None else _json.dumps(clamps),
            "" if config is None else _json.dumps(config),
        )
    )


def compare(docs, config=None, top=5):
    """Run every scenario of every document and tabulate the changes side by side."""
    return _json.loads(
        _core.compare([_text(d) for d in docs], "" if config is None else _json.dumps(config), top)
    )


def calibrate():
    return _json.loads(_core.calibrate())
