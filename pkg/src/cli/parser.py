# src/cli/parser.py
"""argparse surface: global flags plus one subparser per command."""

import argparse
import sys

from schemas import ErrorDocument


class GvkitArgumentParser(argparse.ArgumentParser):
    """Usage errors are reported as a JSON error object, exit code 2."""

    def error(self, message: str):
        sys.stderr.write(ErrorDocument(error="UsageError", message=message).model_dump_json() + "\n")
        sys.exit(2)


def _int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_io(p: argparse.ArgumentParser, needs_input: bool) -> None:
    if needs_input:
        p.add_argument("--input", "-i", required=True, help="input JSON document ('-' for stdin)")
    p.add_argument("--output", "-o", default=None, help="write the JSON result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = GvkitArgumentParser(
        prog="gvkit",
        description="Exact Gopakumar-Vafa / BPS transforms and elementary-cluster series.",
    )
    parser.add_argument("--quiet", "-q", action="store_true", help="suppress reports on stdout")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default from GVKIT_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=GvkitArgumentParser)

    p = sub.add_parser("elem", help="elementary-cluster series Z^elem, GW^elem or local BPS numbers")
    p.add_argument("--genus", "-g", type=int, required=True)
    p.add_argument("--qdeg", "-D", type=int, required=True)
    p.add_argument("--backend", choices=["q", "t", "auto"], default="auto")
    p.add_argument("--trunc", "-T", type=int, default=None, help="t-order (exponents >= T unknown)")
    p.add_argument("--series", choices=["z", "gw", "local"], default="z")
    _add_io(p, needs_input=False)

    p = sub.add_parser("bps", help="forward BPS transform, or its inverse with --invert")
    p.add_argument("--invert", action="store_true", help="GW series in, BPS table out")
    p.add_argument("--trunc", "-T", type=int, default=None)
    p.add_argument("--energy", "-E", default=None, help="output energy bound (forward only)")
    p.add_argument("--genus-max", "-G", type=int, default=None, help="output genus bound (forward only)")
    _add_io(p, needs_input=True)

    p = sub.add_parser("solve", help="elementary counts, assembled BPS numbers and cross-check")
    p.add_argument("--trunc", "-T", type=int, default=None)
    _add_io(p, needs_input=True)

    p = sub.add_parser("check", help="integrality and vanishing of the local BPS numbers")
    p.add_argument("--genus", "-g", type=int, required=True)
    p.add_argument("--qdeg", "-D", type=int, required=True)
    p.add_argument("--h-max", type=int, default=None)
    _add_io(p, needs_input=False)

    p = sub.add_parser("fano", help="split by c1 and invert the Calabi-Yau and Fano parts")
    p.add_argument("--trunc", "-T", type=int, default=None)
    _add_io(p, needs_input=True)

    p = sub.add_parser("am", help="genus-0 transform: multiple covers for c1 = 0, identity for c1 > 0")
    p.add_argument("--insertions", "-k", type=int, default=None, help="insertion count (default: length of the document's insertion dims)")
    p.add_argument("--dim-x", type=int, default=6, help="real dimension of X, even and >= 6")
    _add_io(p, needs_input=True)

    p = sub.add_parser("dim", help="expected dimension of the moduli space")
    p.add_argument("--c1", type=int, required=True)
    p.add_argument("--dim-x", type=int, default=6)
    p.add_argument("--genus", "-g", type=int, required=True)
    p.add_argument("--insertion-dims", type=_int_list, default=[], help="comma-separated, e.g. 2,4")
    _add_io(p, needs_input=False)

    return parser
