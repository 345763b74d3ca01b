"""Oblivious file store for untrusted sync folders.

A file store whose physical access trace reveals nothing about which files
are read or written: blocks live in a tree of sealed buckets and every
operation reads and rewrites one random-looking root-to-leaf path. On top
of the block engine sit file segmentation, grouped multi-block fetching,
small-segment packing, automatic tree resizing, and encrypted constant-size
session checkpoints for moving between machines.
"""

from .backend import DirectoryBackend, MemoryBackend, RecordingBackend, StorageBackend
from .blocks import DUMMY_ID, Block
from .config import OramConfig, ResizePolicy
from .crypto import SecretKey, open_envelope, seal
from .filestore import FileRecord, FileStore, PackLocation
from .oram import AccessCounters, PathOram
from .resize import Resizer, ResizeReport
from .session import DEFAULT_PAD_SIZE, login, logout
from . import errors

__version__ = "0.1.0"

__all__ = [
    "AccessCounters",
    "Block",
    "DEFAULT_PAD_SIZE",
    "DUMMY_ID",
    "DirectoryBackend",
    "FileRecord",
    "FileStore",
    "MemoryBackend",
    "OramConfig",
    "PackLocation",
    "PathOram",
    "RecordingBackend",
    "ResizePolicy",
    "ResizeReport",
    "Resizer",
    "SecretKey",
    "StorageBackend",
    "errors",
    "login",
    "logout",
    "open_envelope",
    "seal",
    "__version__",
]
