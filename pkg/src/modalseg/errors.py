"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, NumericError -> 3,
IntegrityError and OSError -> 4.
"""


class ModalSegError(Exception):
    """Base class for package errors."""


class ConfigError(ModalSegError):
    """Invalid configuration, modality spec, or argument combination."""


class SpecError(ConfigError):
    """Invalid modality specification (e.g. no dense modality)."""


class AlignmentError(ConfigError):
    """Mask, spec, or sample structures do not line up."""


class ShapeError(ModalSegError, ValueError):
    """Array shape violates an operation's precondition."""


class NumericError(ModalSegError):
    """Non-finite values or an undefined metric."""


class IntegrityError(ModalSegError):
    """Corrupted or version-mismatched on-disk artifact."""
