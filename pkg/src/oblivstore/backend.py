"""Storage backends holding sealed buckets and named objects.

The backend is content-oblivious: it stores envelopes without parsing them.
Two implementations ship: an in-memory map for tests and benchmarks, and a
local directory standing in for a cloud-sync folder. Named objects are
restricted to a whitelist; only the session checkpoint is named today.

Concurrent ``get_bucket`` calls for distinct keys are safe on both
implementations; mutations are serialized by the engine.
"""

from __future__ import annotations

import os
import tempfile
from abc import ABC, abstractmethod
from pathlib import Path

from .errors import InvalidNameError, MissingObjectError, StorageError

# Named objects and their on-disk file names.
NAMED_OBJECTS = {"checkpoint": "checkpoint.oram"}


class StorageBackend(ABC):
    @abstractmethod
    def put_bucket(self, index: int, envelope: bytes) -> None: ...

    @abstractmethod
    def get_bucket(self, index: int) -> bytes: ...

    @abstractmethod
    def delete_bucket(self, index: int) -> None: ...

    @abstractmethod
    def put_named(self, name: str, body: bytes) -> None: ...

    @abstractmethod
    def get_named(self, name: str) -> bytes: ...


def _check_name(name: str) -> str:
    try:
        return NAMED_OBJECTS[name]
    except KeyError:
        raise InvalidNameError(f"named object {name!r} not in whitelist") from None


class MemoryBackend(StorageBackend):
    """Dict-backed storage for tests and in-process benchmarks."""

    def __init__(self):
        self._buckets: dict[int, bytes] = {}
        self._named: dict[str, bytes] = {}

    def put_bucket(self, index: int, envelope: bytes) -> None:
        self._buckets[index] = bytes(envelope)

    def get_bucket(self, index: int) -> bytes:
        try:
            return self._buckets[index]
        except KeyError:
            raise MissingObjectError(f"bucket {index} was never written") from None

    def delete_bucket(self, index: int) -> None:
        try:
            del self._buckets[index]
        except KeyError:
            raise MissingObjectError(f"bucket {index} was never written") from None

    def put_named(self, name: str, body: bytes) -> None:
        self._named[_check_name(name)] = bytes(body)

    def get_named(self, name: str) -> bytes:
        filename = _check_name(name)
        try:
            return self._named[filename]
        except KeyError:
            raise MissingObjectError(f"named object {name!r} was never written") from None


class DirectoryBackend(StorageBackend):
    """Local directory modeling the untrusted sync folder.

    Buckets are ``bucket_<index>.bin``; the checkpoint is ``checkpoint.oram``.
    Writes go to a temporary name in the same directory and are renamed into
    place, so an interrupted write never leaves a torn object behind.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _bucket_path(self, index: int) -> Path:
        return self.root / f"bucket_{index}.bin"

    def _write_atomic(self, path: Path, body: bytes) -> None:
        try:
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp_", suffix=".part")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(body)
                os.replace(tmp, path)
            except BaseException:
                os.unlink(tmp)
                raise
        except OSError as exc:
            raise StorageError(f"write to {path} failed: {exc}") from exc

    def put_bucket(self, index: int, envelope: bytes) -> None:
        self._write_atomic(self._bucket_path(index), envelope)

    def get_bucket(self, index: int) -> bytes:
        path = self._bucket_path(index)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise MissingObjectError(f"bucket {index} was never written") from None
        except OSError as exc:
            raise StorageError(f"read of {path} failed: {exc}") from exc

    def delete_bucket(self, index: int) -> None:
        path = self._bucket_path(index)
        try:
            path.unlink()
        except FileNotFoundError:
            raise MissingObjectError(f"bucket {index} was never written") from None
        except OSError as exc:
            raise StorageError(f"delete of {path} failed: {exc}") from exc

    def put_named(self, name: str, body: bytes) -> None:
        self._write_atomic(self.root / _check_name(name), body)

    def get_named(self, name: str) -> bytes:
        path = self.root / _check_name(name)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise MissingObjectError(f"named object {name!r} was never written") from None
        except OSError as exc:
            raise StorageError(f"read of {path} failed: {exc}") from exc


class RecordingBackend(StorageBackend):
    """Pass-through wrapper logging physical bucket touches.

    Used for trace-shape checks and access counting; records ``(op, index)``
    tuples where op is ``get``, ``put``, or ``delete``. Named-object traffic
    is forwarded without recording (checkpoints are not path accesses).
    """

    def __init__(self, inner: StorageBackend):
        self.inner = inner
        self.events: list[tuple[str, int]] = []

    def clear(self) -> None:
        self.events.clear()

    def put_bucket(self, index: int, envelope: bytes) -> None:
        self.events.append(("put", index))
        self.inner.put_bucket(index, envelope)

    def get_bucket(self, index: int) -> bytes:
        self.events.append(("get", index))
        return self.inner.get_bucket(index)

    def delete_bucket(self, index: int) -> None:
        self.events.append(("delete", index))
        self.inner.delete_bucket(index)

    def put_named(self, name: str, body: bytes) -> None:
        self.inner.put_named(name, body)

    def get_named(self, name: str) -> bytes:
        return self.inner.get_named(name)
