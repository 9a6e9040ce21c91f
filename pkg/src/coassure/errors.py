"""Exception hierarchy shared across the engine.

Two failure families matter to callers: documents that cannot be read at
all (:class:`ParseError`) and documents or values that read fine but break
a model rule (:class:`ModelError`). The CLI maps them to distinct exit
codes, so keep the split intact when adding new errors.
"""


class CoassureError(Exception):
    """Base class for all engine errors."""


class ParseError(CoassureError):
    """Document is structurally malformed (bad JSON, wrong type, unknown key)."""


class ModelError(CoassureError):
    """Semantically invalid model content (duplicate id, dangling reference, bad range)."""


class NotFoundError(ModelError):
    """Lookup by id found nothing."""


class InferenceError(CoassureError):
    """Inference could not be carried out on the given network/evidence."""


class InconsistentEvidenceError(InferenceError):
    """Evidence has probability zero under the model."""


class TransitionError(ModelError):
    """State machine event rejected (duplicate violation or resolving nothing)."""
