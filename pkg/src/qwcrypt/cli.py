"""Command-line front end: encrypt, decrypt, analyze, ablate, keystream, circuit-verify.

Exit codes: 0 success, 1 usage, 2 I/O, 3 format, 4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import metrics
from .cipher import CipherPackage, decrypt, encrypt
from .errors import CipherFormatError, DimensionError, KeyParamError, PgmError
from .image_io import GrayImage, read_pgm, write_pgm
from .keystream import DEFAULT_BURN_IN, DEFAULT_MU, KeyParams, generate
from .verify import run_verification

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT, EXIT_VERIFY = 0, 1, 2, 3, 4
KEYED = ("encrypt", "decrypt", "keystream")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    against: Path | None = None
    json_path: Path | None = None
    hist_path: Path | None = None
    fill: str = "zero"
    key: KeyParams | None = None
    length: int = 0
    hex: bool = False
    size: int = 4
    q: int = 2
    trials: int = 100
    seed: int = 0
    report: Path | None = None


def _add_key_flags(p):
    p.add_argument("--x0", type=float, help="logistic map seed in (0, 1); env QWC_X0")
    p.add_argument("--mu", type=float, help=f"map parameter in (3.57, 4]; env QWC_MU (default {DEFAULT_MU})")
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN, help="discarded iterations")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwcrypt", description="Wavelet low-band image encryption toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encrypt", help="encrypt a PGM image into a .qwc file")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    _add_key_flags(p)

    p = sub.add_parser("decrypt", help="decrypt a .qwc file into a PGM image")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)
    _add_key_flags(p)

    p = sub.add_parser("analyze", help="image statistics as JSON (and histogram CSV)")
    p.add_argument("--in", dest="input", type=Path, required=True, help="PGM image or .qwc cipher file")
    p.add_argument("--against", type=Path, help="reference PGM for PSNR")
    p.add_argument("--json", dest="json_path", type=Path, help="report path (default: stdout)")
    p.add_argument("--hist", dest="hist_path", type=Path, help="histogram CSV path")

    p = sub.add_parser("ablate", help="replace the LL band by 0 or its maximum")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--fill", choices=("zero", "max"), required=True)
    p.add_argument("--out", dest="output", type=Path, required=True)

    p = sub.add_parser("keystream", help="emit raw keystream bytes")
    _add_key_flags(p)
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--hex", action="store_true", help="lowercase hex, 32 bytes per line")

    p = sub.add_parser("circuit-verify", help="check circuits against classical operations")
    p.add_argument("--size", type=int, choices=(4, 8), default=4)
    p.add_argument("--q", type=int, choices=(2, 4), default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", type=Path, help="report path (default: stdout)")
    return parser


def _key_from(ns, environ) -> KeyParams:
    x0 = ns.x0 if ns.x0 is not None else environ.get("QWC_X0")
    mu = ns.mu if ns.mu is not None else environ.get("QWC_MU", DEFAULT_MU)
    if x0 is None:
        raise UsageError("a key is required: pass --x0 or set QWC_X0")
    try:
        return KeyParams(float(x0), float(mu), ns.burn_in)
    except (KeyParamError, ValueError) as exc:
        raise UsageError(f"invalid key: {exc}") from exc


def parse_args(argv, environ=None) -> RunConfig:
    """Parse and validate ``argv``; raises UsageError on bad input."""
    environ = os.environ if environ is None else environ
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    for name in ("input", "output", "against", "json_path", "hist_path", "fill",
                 "length", "hex", "size", "q", "trials", "seed", "report"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.command in KEYED:
        cfg.key = _key_from(ns, environ)
    if cfg.length < 0:
        raise UsageError("--len must be >= 0")
    if cfg.trials < 1:
        raise UsageError("--trials must be >= 1")
    return cfg


def write_atomic(path: Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _load_image(path: Path) -> GrayImage:
    data = Path(path).read_bytes()
    if data.startswith(b"QWC1"):
        return CipherPackage.from_bytes(data).payload_image()
    return read_pgm(data)


def _emit(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text.encode())


def _hex_lines(data: bytes) -> str:
    return "".join(data[i:i + 32].hex() + "\n" for i in range(0, len(data), 32))


def run(cfg: RunConfig) -> int:
    """Execute a parsed command and return its exit status."""
    try:
        if cfg.command == "encrypt":
            pkg = encrypt(read_pgm(cfg.input.read_bytes()), cfg.key)
            write_atomic(cfg.output, pkg.to_bytes())
        elif cfg.command == "decrypt":
            pkg = CipherPackage.from_bytes(cfg.input.read_bytes())
            write_atomic(cfg.output, write_pgm(decrypt(pkg, cfg.key)))
        elif cfg.command == "analyze":
            img = _load_image(cfg.input)
            ref = read_pgm(cfg.against.read_bytes()) if cfg.against else None
            report = metrics.analyze(img, ref)
            _emit(cfg.json_path, metrics.to_json(report.as_dict()))
            if cfg.hist_path:
                write_atomic(cfg.hist_path, metrics.histogram_csv(report.histogram).encode())
        elif cfg.command == "ablate":
            img = read_pgm(cfg.input.read_bytes())
            write_atomic(cfg.output, write_pgm(metrics.ablate_ll(img, cfg.fill)))
        elif cfg.command == "keystream":
            ks = generate(cfg.key, cfg.length)
            if cfg.hex:
                sys.stdout.write(_hex_lines(ks))
            else:
                sys.stdout.buffer.write(ks)
                sys.stdout.flush()
        elif cfg.command == "circuit-verify":
            report = run_verification(cfg.size, cfg.q, cfg.trials, cfg.seed)
            _emit(cfg.report, metrics.to_json(report))
            if not report["all_passed"]:
                return EXIT_VERIFY
        else:
            raise UsageError(f"unknown command {cfg.command!r}")
    except OSError as exc:
        print(f"qwcrypt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PgmError, CipherFormatError, DimensionError) as exc:
        print(f"qwcrypt: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
