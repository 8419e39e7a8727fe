"""Exception types shared across the package."""


class HmerError(Exception):
    """Base class for all errors raised by hmer."""


class InputError(HmerError, ValueError):
    """Bad user input: missing ids, empty images, malformed files."""


class DetectionParseError(InputError):
    """Detection JSON could not be decoded."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class VocabularyError(InputError):
    pass


class ValidationError(InputError):
    pass


class DegeneratePairError(HmerError, ValueError):
    """Two boxes share a center, so no direction is defined between them."""


class StructureError(HmerError):
    """Symbols could not all be attached to one relationship tree."""

    def __init__(self, message: str, orphans=()):
        self.orphans = tuple(orphans)
        if self.orphans:
            message = f"{message}: orphan node ids {list(self.orphans)}"
        super().__init__(message)


class ContractError(HmerError):
    """A tree handed to the emitter breaks the tree invariants."""


class TokenizeError(InputError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class LayoutError(HmerError, ValueError):
    pass
