"""``clovercalc`` command-line front end.

Exit codes: 0 success, 1 invalid input or usage error, 2 resource limit or
internal failure.
"""

from __future__ import annotations

import argparse
import sys

from clovercalc.clover import degree, reduce
from clovercalc.diagrams import DEFAULT_MAX_DEGREE, InvalidGraphError, ResourceLimitError, enumerate_diagrams
from clovercalc.formats import (
    FormatError,
    dump_dg_catalog,
    dump_linking,
    dump_matrix,
    dump_pd,
    dump_vector,
    parse_clv,
    parse_pd,
)
from clovercalc.lattice import build_relation_matrix, group_structure, reduce_to_basis
from clovercalc.surgery import (
    InvalidDiagramError,
    compile_surgery_link,
    linking_matrix,
    unimodularity_certificate,
)

EXIT_OK, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _degree(text):
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError("degree must be >= 0")
    return k


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clovercalc", description="Diagram spaces, clover reduction and surgery links.")
    parser.add_argument("--max-degree", type=_degree, default=DEFAULT_MAX_DEGREE,
                        help="largest degree any command may touch (default %(default)s)")
    parser.add_argument("--max-matrix", type=int, default=1_000_000,
                        help="largest relation matrix (rows x cols) to build (default %(default)s)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("enumerate", help="canonical diagrams of a degree, as a .dg catalog")
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--connected", action="store_true")

    p = sub.add_parser("structure", help="abelian-group structure of a diagram space")
    p.add_argument("--degree", type=_degree, required=True)
    p.add_argument("--ring", choices=("z", "z2inv"), default="z")
    p.add_argument("--dump-matrix", action="store_true", help="also print the relation matrix")

    p = sub.add_parser("reduce", help="reduce a .clv clover to a diagram vector")
    p.add_argument("file")
    p.add_argument("--basis", action="store_true", help="also print basis coordinates per degree")

    p = sub.add_parser("compile", help="compile a .clv clover to its surgery link")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="output .pd file (default: stdout)")

    p = sub.add_parser("lk", help="linking matrix and unimodularity of a .pd link")
    p.add_argument("file")
    return parser


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _check_matrix(k, args):
    # one torsion row per column plus two IHX rows per edge of each column, at most
    cols = len(enumerate_diagrams(k, max_degree=args.max_degree))
    if cols * cols * (1 + 6 * k) > args.max_matrix:
        raise ResourceLimitError(f"relation matrix for degree {k} may exceed {args.max_matrix} entries")


def run(argv, out=sys.stdout, err=sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    if args.command is None:
        err.write(parser.format_help())
        return EXIT_INVALID
    try:
        return _dispatch(args, out)
    except (InvalidGraphError, InvalidDiagramError) as exc:
        err.write("invalid input:\n")
        for v in exc.violations:
            err.write(f"  {v.kind}[{v.index}]: {v.detail}\n")
        return EXIT_INVALID
    except (FormatError, OSError, ValueError) as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except (ResourceLimitError, MemoryError, RecursionError) as exc:
        err.write(f"resource limit: {exc}\n")
        return EXIT_LIMIT
    except Exception as exc:  # pragma: no cover - last-resort guard
        err.write(f"internal error: {exc!r}\n")
        return EXIT_LIMIT


def _dispatch(args, out) -> int:
    if args.command == "enumerate":
        graphs = enumerate_diagrams(args.degree, connected_only=args.connected, max_degree=args.max_degree)
        out.write(dump_dg_catalog(graphs))
    elif args.command == "structure":
        _check_matrix(args.degree, args)
        out.write(f"{group_structure(args.degree, args.ring, max_degree=args.max_degree)}\n")
        if args.dump_matrix:
            out.write(dump_matrix(build_relation_matrix(args.degree, args.max_degree).rows))
    elif args.command == "reduce":
        c = parse_clv(_read(args.file))
        if degree(c) > args.max_degree:
            raise ResourceLimitError(f"clover degree {degree(c)} exceeds bound {args.max_degree}")
        v = reduce(c)
        basis = None
        if args.basis:
            basis = {}
            for k in sorted(v.degrees()):
                _check_matrix(k, args)
                part = {g: x for g, x in v.items() if g.vertex_count == 2 * k}
                basis[k] = reduce_to_basis(part, k, args.max_degree)
        out.write(dump_vector(v, basis))
    elif args.command == "compile":
        text = dump_pd(compile_surgery_link(parse_clv(_read(args.file))))
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
    elif args.command == "lk":
        d = parse_pd(_read(args.file))
        m = linking_matrix(d)
        det, ok = unimodularity_certificate(d)
        out.write(dump_linking(m.matrix, det, ok))
    return EXIT_OK


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
