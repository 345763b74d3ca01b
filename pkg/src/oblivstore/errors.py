"""Exception hierarchy for the oblivious store."""


class OblivStoreError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLeafError(OblivStoreError):
    """A leaf index is outside the current tree."""


class NotALeafError(OblivStoreError):
    """A bucket index was used as a leaf but has children."""


class NotFoundError(OblivStoreError):
    """A block id, file name, or checkpoint does not exist."""


class StashOverflowError(OblivStoreError):
    """The stash exceeded its hard cap even after background eviction."""


class GroupingViolatedError(OblivStoreError):
    """Members of a segment group are mapped to different leaves.

    This signals metadata corruption: the store keeps group members on a
    single leaf at all times.
    """


class MalformedEnvelopeError(OblivStoreError):
    """A ciphertext envelope is too short to contain a nonce."""


class MissingObjectError(NotFoundError):
    """The backend has no object under the requested key."""


class InvalidNameError(OblivStoreError):
    """A named object is not on the backend whitelist."""


class StorageError(OblivStoreError):
    """An underlying I/O operation failed."""


class CannotShrinkRootError(OblivStoreError):
    """The tree consists only of the root bucket and cannot shrink."""


class CheckpointOverflowError(OblivStoreError):
    """Serialized client state does not fit the configured pad size."""


class CorruptCheckpointError(OblivStoreError):
    """Checkpoint validation failed (wrong key or damaged bytes)."""


class UnsupportedVersionError(OblivStoreError):
    """Checkpoint was written by an incompatible format version."""


class StoreUninitializedError(OblivStoreError):
    """The store root has not been initialized."""


class StoreLockedError(OblivStoreError):
    """Another process holds the store lock."""


class BenchVerificationError(OblivStoreError):
    """A benchmark read back different bytes than it wrote."""
