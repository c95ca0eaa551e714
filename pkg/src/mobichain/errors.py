"""Exception types shared across the package."""


class MobiChainError(Exception):
    """Base class for every error this package raises on purpose."""


class SerializationError(MobiChainError):
    """Document contains a value canonical serialization cannot represent."""


class Base58DecodeError(MobiChainError):
    """Input is not valid Base58 text."""


class InvalidSeedError(MobiChainError):
    """Keypair seed has the wrong length."""


class InvalidKeyError(MobiChainError):
    """A key or signature does not decode to the required byte length."""


class PowCapExceededError(MobiChainError):
    """Proof-of-work hit its optional iteration cap before finding a nonce."""

    def __init__(self, iterations: int):
        super().__init__(f"no nonce found within {iterations} iterations")
        self.iterations = iterations


class MalformedDocumentError(MobiChainError):
    """A wire/store document is missing fields or has the wrong types."""


class UnknownDocTypeError(MobiChainError):
    """Store rejected a document whose type is missing or not storable."""


class UploadRefusedError(MobiChainError):
    """A disconnected node tried to upload a document to its gateway."""


class EventCapExceededError(MobiChainError):
    """The simulation processed more events than its livelock cap allows."""
