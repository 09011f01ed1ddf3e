from typing import Optional

"""
Exception hierarchy for the toolkit
Library code raises these; only the command line layer turns them into exit codes
"""

"""
Base class for every error raised by the toolkit
"""
class ToolkitError(Exception):
    pass


"""
Raised when an input file cannot be parsed
Attributes:
    path: The offending file
    line_number: 1-based line number of the malformed row (None for whole-file errors)
"""
class DataFormatError(ToolkitError):

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line_number: Optional[int] = None
    ):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}:{line_number}: " if line_number is not None else f"{path}: "
        super().__init__(f"{location}{message}")


"""
Raised when an operation is called with inputs that violate its preconditions
Also a ValueError so callers that only know the builtin still catch it
"""
class PreconditionError(ToolkitError, ValueError):
    pass


"""
Raised when training produces a non-finite loss or gradient
"""
class DivergenceError(ToolkitError):

    def __init__(self, message: str, epoch: int, batch: int):
        self.epoch = epoch
        self.batch = batch
        super().__init__(f"{message} (epoch {epoch}, batch {batch})")


"""
Raised for invalid experiment configurations
"""
class ConfigError(ToolkitError):
    pass


"""
Raised when a verification check cannot be evaluated at all
A failing check is reported, not raised
"""
class VerificationError(ToolkitError):
    pass
