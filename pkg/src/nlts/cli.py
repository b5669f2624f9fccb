"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 format/data error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import SweepSpec, run_sweep, verify_files
from .container import (
    CodecConfig,
    StreamHeader,
    compress_stream,
    decompress_to_tokens,
)
from .datasets import SKIP, WHITESPACE, DatasetSpec, ingest, packaged_spec
from .entropy import CODER_IDS, CODER_NAMES
from .errors import CodecError
from .quantizer import QuantizerConfig
from .transform import TransformConfig

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_FORMAT = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlts", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", help="compress a numeric text file")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--version", type=int, choices=(1, 2), default=2)
    c.add_argument(
        "--coder", choices=sorted(CODER_IDS), default="arithmetic",
        help="entropy coder (default: arithmetic)",
    )
    c.add_argument("--block", type=int, default=16, metavar="L")
    c.add_argument("--tau", type=int, default=9, metavar="N")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--digits", type=int, default=3, metavar="D",
                   help="fractional digits to keep (max error 10^-D)")
    g.add_argument("--lossless", action="store_true",
                   help="keep every digit (scale auto-detected)")
    c.add_argument("--column", default=None,
                   help="column index or header name (default: single column)")
    c.add_argument("--delimiter", default=None,
                   help="field delimiter, or 'whitespace' (default)")
    c.add_argument("--missing", choices=("skip", "forward-fill", "fail"),
                   default=SKIP, help="missing-value policy (default: skip)")

    d = sub.add_parser("decompress", help="decompress to numeric text")
    d.add_argument("input")
    d.add_argument("output")

    v = sub.add_parser("verify", help="check two value files against an error bound")
    v.add_argument("original")
    v.add_argument("decoded")
    v.add_argument("--epsilon", required=True,
                   help="maximum allowed absolute difference")

    b = sub.add_parser("bench", help="run a parameter sweep over a dataset")
    b.add_argument("dataset_spec",
                   help="packaged dataset name (bvp, eda, acm, gys, gas, gactive) "
                        "or a dataset spec JSON path")
    b.add_argument("sweep_spec", help="sweep spec JSON path")
    b.add_argument("--out", required=True, help="report CSV path")
    b.add_argument("--data-dir", default=None,
                   help="directory holding the dataset files "
                        "(default: $NLTS_DATA_DIR or cwd)")
    b.add_argument("--jobs", type=int, default=1,
                   help="worker processes for independent configs")

    s = sub.add_parser("stats", help="print a compressed file's header")
    s.add_argument("input")
    return p


def _read_samples(args) -> list:
    column = 0
    if args.column is not None:
        column = int(args.column) if args.column.lstrip("-").isdigit() else args.column
    delimiter = args.delimiter if args.delimiter is not None else WHITESPACE
    spec = DatasetSpec(
        name=Path(args.input).name,
        source_path=args.input,
        column=column,
        delimiter=delimiter,
        missing_policy=args.missing,
    )
    return ingest(spec)


def _cmd_compress(args) -> int:
    samples = _read_samples(args)
    if args.lossless:
        q = QuantizerConfig.lossless()
    else:
        q = QuantizerConfig(mode="rounding", decimal_digits=args.digits)
    cfg = CodecConfig(
        transform=TransformConfig(
            method_version=args.version, block_len=args.block, tau=args.tau
        ),
        quantizer=q,
        coder=CODER_IDS[args.coder],
    )
    blob, m = compress_stream(samples, cfg)
    Path(args.output).write_bytes(blob)
    print(
        f"{len(samples)} samples -> {m.output_bytes} bytes  "
        f"cr={m.cr:.2f}  encode={m.encode_rate:.2f} MB/s  "
        f"max_err={m.max_abs_error:g}"
    )
    return EXIT_OK


def _cmd_decompress(args) -> int:
    blob = Path(args.input).read_bytes()
    tokens, m = decompress_to_tokens(blob)
    with open(args.output, "w", encoding="utf-8") as f:
        for t in tokens:
            f.write(t)
            f.write("\n")
    print(
        f"{m.output_bytes} bytes -> {len(tokens)} samples  "
        f"cr={m.cr:.2f}  decode={m.decode_rate:.2f} MB/s"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    result = verify_files(args.original, args.decoded, args.epsilon)
    if result.ok:
        print(f"ok  max_abs_error={result.max_abs_error}")
        return EXIT_OK
    print(
        f"FAIL  max_abs_error={result.max_abs_error} "
        f"at index {result.argmax_index} (epsilon {args.epsilon})",
        file=sys.stderr,
    )
    return EXIT_VERIFY


def _cmd_bench(args) -> int:
    import os

    spec_arg = args.dataset_spec
    if Path(spec_arg).exists():
        dataset = DatasetSpec.from_json(spec_arg)
    else:
        dataset = packaged_spec(spec_arg)
    sweep = SweepSpec.from_json(args.sweep_spec)
    data_dir = args.data_dir or os.environ.get("NLTS_DATA_DIR") or "."
    rows = run_sweep(dataset, sweep, out_path=args.out, data_dir=data_dir, jobs=args.jobs)
    bad = [r for r in rows if r["error"]]
    print(f"{len(rows)} runs -> {args.out}  ({len(bad)} failed)")
    for r in bad:
        print(f"  {r['method_version']}/{r['coder']}/L{r['block_len']}"
              f"/t{r['tau']}/d{r['digits']}: {r['error']}", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_OK


def _cmd_stats(args) -> int:
    blob = Path(args.input).read_bytes()
    h = StreamHeader.parse(blob)
    scale = "lossless-integer" if h.scale_exp is None else h.scale_exp
    print(f"format_version:  {h.format_version}")
    print(f"method_version:  {h.method_version}")
    print(f"entropy_coder:   {CODER_NAMES[h.entropy_id]} ({h.entropy_id})")
    print(f"block_len:       {h.block_len}")
    print(f"tau:             {h.tau}")
    print(f"scale_exp:       {scale}")
    print(f"sample_count:    {h.sample_count}")
    print(f"payload_bytes:   {len(blob) - 24}")
    return EXIT_OK


_COMMANDS = {
    "compress": _cmd_compress,
    "decompress": _cmd_decompress,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "stats": _cmd_stats,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (CodecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
