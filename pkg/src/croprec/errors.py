"""Exception types raised across the package.

Every error a caller is expected to handle gets its own class so the CLI
and the HTTP service can map failures to exit codes / status codes without
string matching.
"""


class CropRecError(Exception):
    """Base class for all package errors."""


class SchemaError(CropRecError):
    """CSV header does not match the expected feature schema."""


class RowError(CropRecError):
    """One or more data rows are unparseable or violate value ranges."""


class LabelError(CropRecError):
    """A crop label is not in the known vocabulary."""


class SplitError(CropRecError):
    """A requested partition would leave a class empty on one side."""


class ConfigurationError(CropRecError):
    """Invalid hyperparameters, model/method pairing, or search settings."""


class DegenerateDataError(CropRecError):
    """Training data cannot support the requested fit (e.g. one class)."""


class InputError(CropRecError):
    """A prediction/explanation input is malformed (wrong arity, NaN)."""


class ArtifactError(CropRecError):
    """A model artifact cannot be loaded (corrupt, truncated, bad version)."""


class UnsupportedModelError(CropRecError):
    """An explainer was asked to run on a model kind it does not support."""


class NumericalError(CropRecError):
    """An explainer hit a degenerate numerical system it cannot solve."""
