"""Command-line interface over the oblivious file store.

The store root is a directory standing in for the cloud-sync folder: it
holds sealed bucket files, the sealed checkpoint, and a plaintext config
file with no secrets in it. Every command that touches blocks restores
client state from the checkpoint first and seals it back afterward, so any
machine with the folder and the key can pick up where another left off.

Exit codes: 0 success, 1 generic failure, 2 uninitialized store,
3 name/object not found, 4 stash overflow or storage failure.
"""

from __future__ import annotations

import argparse
import contextlib
import getpass
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bench as bench_mod
from .backend import DirectoryBackend
from .config import OramConfig, ResizePolicy
from .crypto import SecretKey
from .errors import (
    NotFoundError,
    OblivStoreError,
    StashOverflowError,
    StorageError,
    StoreLockedError,
    StoreUninitializedError,
)
from .filestore import FileStore
from .session import DEFAULT_PAD_SIZE, login, logout

PASSPHRASE_ENV = "OBLIVSTORE_PASSPHRASE"
CONFIG_NAME = "store.conf"
LOCK_NAME = ".lock"


@dataclass
class CliConfig:
    """Plaintext store settings; never contains key material."""

    z: int = 3
    segment_size: int = 65536
    stash_max: int = 100
    group_size: int = 3
    shrink_threshold: float = 0.45
    target_utilization: float = 0.50
    grow_threshold: float = 0.55
    auto_resize: bool = True
    packing: bool = True
    pad_size: int = DEFAULT_PAD_SIZE
    key_source: str = "passphrase"
    scrypt_salt: str = ""
    key_file: str = ""

    def oram_config(self, rng_seed: int | None = None) -> OramConfig:
        return OramConfig(
            z=self.z,
            segment_size=self.segment_size,
            stash_max=self.stash_max,
            group_size=self.group_size,
            rng_seed=rng_seed,
        )

    def policy(self) -> ResizePolicy:
        return ResizePolicy(
            shrink_threshold=self.shrink_threshold,
            target=self.target_utilization,
            grow_threshold=self.grow_threshold,
        )

    def save(self, path: Path) -> None:
        lines = []
        for name, value in vars(self).items():
            if isinstance(value, bool):
                value = int(value)
            lines.append(f"{name}={value}")
        path.write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: Path) -> "CliConfig":
        if not path.is_file():
            raise StoreUninitializedError(
                f"no config at {path}; run `oblivstore --root <dir> init` first"
            )
        values: dict[str, str] = {}
        for line in path.read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, value = line.partition("=")
            values[name.strip()] = value.strip()
        cfg = cls()
        for name, raw in values.items():
            if not hasattr(cfg, name):
                continue
            current = getattr(cfg, name)
            if isinstance(current, bool):
                setattr(cfg, name, raw not in ("0", "false", "False", ""))
            elif isinstance(current, int):
                setattr(cfg, name, int(raw))
            elif isinstance(current, float):
                setattr(cfg, name, float(raw))
            else:
                setattr(cfg, name, raw)
        return cfg


def _config_path(args: argparse.Namespace) -> Path:
    if args.config:
        return Path(args.config)
    return Path(args.root) / CONFIG_NAME


def _resolve_key(cfg: CliConfig) -> SecretKey:
    if cfg.key_source == "keyfile":
        raw = Path(cfg.key_file).read_bytes().strip()
        if len(raw) == 32:  # hex-encoded
            raw = bytes.fromhex(raw.decode("ascii"))
        return SecretKey(raw)
    passphrase = os.environ.get(PASSPHRASE_ENV)
    if passphrase is None:
        passphrase = getpass.getpass("store passphrase: ")
    return SecretKey.from_passphrase(passphrase, bytes.fromhex(cfg.scrypt_salt))


@contextlib.contextmanager
def _root_lock(root: Path):
    lock = root / LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise StoreLockedError(f"{lock} exists; another process is using this store") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield
    finally:
        with contextlib.suppress(FileNotFoundError):
            lock.unlink()


@contextlib.contextmanager
def _open_store(args: argparse.Namespace, *, mutating: bool):
    root = Path(args.root)
    cfg = CliConfig.load(_config_path(args))
    key = _resolve_key(cfg)
    with _root_lock(root):
        store = login(
            DirectoryBackend(root),
            key,
            policy=cfg.policy(),
            packing=cfg.packing,
            auto_resize=cfg.auto_resize,
            rng_seed=args.seed,
        )
        yield store
        if mutating:
            logout(store, key, pad_size=cfg.pad_size)


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------


def cmd_init(args: argparse.Namespace) -> int:
    root = Path(args.root)
    root.mkdir(parents=True, exist_ok=True)
    config_path = _config_path(args)
    if config_path.exists():
        print(f"error: {config_path} already exists", file=sys.stderr)
        return 1

    cfg = CliConfig(
        z=args.z,
        segment_size=args.segment_size,
        stash_max=args.stash_max,
        group_size=args.group_size,
        shrink_threshold=args.shrink_threshold,
        target_utilization=args.target_utilization,
        grow_threshold=args.grow_threshold,
        auto_resize=not args.no_auto_resize,
        packing=not args.no_packing,
        pad_size=args.pad_size,
    )
    if args.key_file:
        cfg.key_source = "keyfile"
        cfg.key_file = str(Path(args.key_file).resolve())
    else:
        cfg.key_source = "passphrase"
        cfg.scrypt_salt = os.urandom(16).hex()
    key = _resolve_key(cfg)

    with _root_lock(root):
        store = FileStore.create(
            cfg.oram_config(args.seed),
            DirectoryBackend(root),
            key,
            policy=cfg.policy(),
            packing=cfg.packing,
            auto_resize=cfg.auto_resize,
        )
        checkpoint_bytes = logout(store, key, pad_size=cfg.pad_size)
    cfg.save(config_path)
    print(f"initialized store at {root} (checkpoint {checkpoint_bytes} bytes)")
    return 0


def cmd_put(args: argparse.Namespace) -> int:
    data = Path(args.local_path).read_bytes()
    with _open_store(args, mutating=True) as store:
        store.write_file(args.name, data)
    print(f"stored {args.name} ({len(data)} bytes)")
    return 0


def cmd_get(args: argparse.Namespace) -> int:
    with _open_store(args, mutating=True) as store:
        data = store.read_file(args.name)
    Path(args.local_path).write_bytes(data)
    print(f"retrieved {args.name} ({len(data)} bytes)")
    return 0


def cmd_rm(args: argparse.Namespace) -> int:
    with _open_store(args, mutating=True) as store:
        store.delete_file(args.name)
    print(f"removed {args.name}")
    return 0


def cmd_ls(args: argparse.Namespace) -> int:
    with _open_store(args, mutating=False) as store:
        for name in store.list_files():
            print(f"{store.files[name].total_bytes:>12}  {name}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    with _open_store(args, mutating=False) as store:
        engine = store.engine
        print(f"buckets (N):        {engine.n_buckets}")
        print(f"blocks per bucket:  {engine.config.z}")
        print(f"segment size:       {engine.config.segment_size}")
        print(f"live blocks:        {engine.live_blocks}")
        print(f"utilization:        {engine.utilization():.3f}")
        print(f"stash size:         {len(engine.stash)}")
        print(f"files:              {len(store.files)}")
        print(f"foreground paths:   {engine.counters.foreground_paths}")
        print(f"eviction paths:     {engine.counters.eviction_paths}")
    return 0


def cmd_login(args: argparse.Namespace) -> int:
    with _open_store(args, mutating=False) as store:
        print(
            f"session restored: {len(store.files)} files, "
            f"{store.engine.live_blocks} blocks, "
            f"utilization {store.utilization():.3f}"
        )
    return 0


def cmd_logout(args: argparse.Namespace) -> int:
    cfg = CliConfig.load(_config_path(args))
    with _open_store(args, mutating=True):
        pass
    print(f"checkpoint written ({cfg.pad_size + 16} bytes)")
    return 0


_BENCH_SUITES = ("distribution", "segment-sweep", "group-sweep", "packing", "resize", "baseline")


def cmd_bench(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dist = bench_mod.load_csv(args.dist) if args.dist else None
    seed = args.seed if args.seed is not None else 0
    suites = _BENCH_SUITES if args.suite == "all" else (args.suite,)

    reports = []
    for suite in suites:
        if suite == "distribution":
            reports.append(
                bench_mod.run_distribution_workload(args.files or 1000, dist, seed)
            )
        elif suite == "segment-sweep":
            reports.append(
                bench_mod.sweep_segment_size(
                    [16384, 32768, 65536, 131072, 262144],
                    n_files=args.files or 200,
                    dist=dist,
                    seed=seed,
                )
            )
        elif suite == "group-sweep":
            reports.append(
                bench_mod.sweep_group_size(
                    [1, 2, 3, 4, 6], n_files=args.files or 200, dist=dist, seed=seed
                )
            )
        elif suite == "packing":
            for size_kb in (16, 32, 70):
                reports.append(bench_mod.compare_packing(size_kb, args.files or 250, seed))
        elif suite == "resize":
            reports.append(bench_mod.resize_trace(32, seed))
        elif suite == "baseline":
            reports.append(bench_mod.baseline_compare(seed=seed))

    merged: dict[str, bench_mod.BenchReport] = {}
    for report in reports:
        if report.suite in merged:
            merged[report.suite].rows.extend(report.rows)
            merged[report.suite].series.extend(report.series)
        else:
            merged[report.suite] = report

    for suite, report in merged.items():
        csv_path = report.write_csv(out_dir / f"{suite}.csv")
        print(f"wrote {csv_path}")
        if not args.no_figures:
            fig_path = bench_mod.render_figure(report, out_dir)
            if fig_path:
                print(f"wrote {fig_path}")
    return 0


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oblivstore",
        description="File store that hides access patterns from an untrusted sync folder.",
    )
    parser.add_argument("--root", default="./oram_store", help="store root directory")
    parser.add_argument("--config", default=None, help="config file path (default <root>/store.conf)")
    parser.add_argument("--seed", type=int, default=None, help="seed the leaf-sampling RNG")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a new store")
    p.add_argument("--z", type=int, default=3)
    p.add_argument("--segment-size", type=int, default=65536)
    p.add_argument("--stash-max", type=int, default=100)
    p.add_argument("--group-size", type=int, default=3)
    p.add_argument("--shrink-threshold", type=float, default=0.45)
    p.add_argument("--target-utilization", type=float, default=0.50)
    p.add_argument("--grow-threshold", type=float, default=0.55)
    p.add_argument("--pad-size", type=int, default=DEFAULT_PAD_SIZE)
    p.add_argument("--no-auto-resize", action="store_true")
    p.add_argument("--no-packing", action="store_true")
    p.add_argument("--key-file", default=None, help="16 raw or 32 hex bytes; default: passphrase")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("put", help="store a local file")
    p.add_argument("name")
    p.add_argument("local_path")
    p.set_defaults(func=cmd_put)

    p = sub.add_parser("get", help="retrieve a file to a local path")
    p.add_argument("name")
    p.add_argument("local_path")
    p.set_defaults(func=cmd_get)

    p = sub.add_parser("rm", help="delete a file")
    p.add_argument("name")
    p.set_defaults(func=cmd_rm)

    p = sub.add_parser("ls", help="list stored files")
    p.set_defaults(func=cmd_ls)

    p = sub.add_parser("stats", help="print store statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("login", help="restore the session from the checkpoint")
    p.set_defaults(func=cmd_login)

    p = sub.add_parser("logout", help="seal the session back to the checkpoint")
    p.set_defaults(func=cmd_logout)

    p = sub.add_parser("bench", help="run benchmark suites")
    p.add_argument("suite", choices=_BENCH_SUITES + ("all",))
    p.add_argument("--out", default="./bench_out", help="output directory for CSVs and figures")
    p.add_argument("--files", type=int, default=None, help="workload file count override")
    p.add_argument("--dist", default=None, help="size distribution CSV (size_kb,cum_pct)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StoreUninitializedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (StashOverflowError, StorageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OblivStoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
