"""Command-line front end.

Every command reads one characteristic pair in the shared JSON format
``{"dims": [...], "cut": true, "A": [[...], ...], "b": [...]}`` (columns of A
are the vectors a_j), from a file, from ``-`` (stdin) or inline.

Exit codes: 0 when the command ran and everything checked out, 1 when a
claimed identity failed to verify, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .charpair import pair_from_json
from .classify import classification_report, enumerate_pairs
from .cohomology import (
    ann_rank,
    betti,
    check_cut_relations,
    compare_with_display,
    full_presentation,
    h4_basis,
    reduced_presentation,
)
from .errors import InternalConsistencyError, QuasitoricError, TheoremViolation
from .isomorphism import iso_transfer_check
from .polytope import build_product, vertex_cut

OK, ALARM, INVALID = 0, 1, 2


class Alarm(Exception):
    """Raised by a command when a check it ran came out false."""

    def __init__(self, claim, report, lines=()):
        super().__init__(claim)
        self.claim = claim
        self.report = report
        self.lines = list(lines)


def load_pair(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    return pair_from_json(json.loads(text))


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# --- commands ------------------------------------------------------------------
# Each returns (report, text lines).

def cmd_validate(args):
    pair = load_pair(args.pair)
    if args.induced:
        pair = pair.induced_on_base()
    ok, failing = pair.is_characteristic()
    report = {
        "polytope": "base" if args.induced else ("cut" if pair.polytope.is_cut else "base"),
        "characteristic": ok,
        "failing_vertices": [u.to_json() for u in failing],
        "failing_determinants": [pair.vertex_matrix(u).det for u in failing],
        "det_hypothesis": pair.det_hypothesis() if ok else False,
    }
    lines = [f"characteristic: {'yes' if ok else 'no'}"]
    for u, d in zip(failing, report["failing_determinants"]):
        lines.append(f"  fails at {u!r}: det {d}")
    lines.append(f"alternating determinants: {'yes' if report['det_hypothesis'] else 'no'}")
    return report, lines


def cmd_classify(args):
    pair = load_pair(args.pair)
    report = classification_report(pair)
    lines = [f"case: {report['case']}", f"det A_tilde: {report['det']}", f"factor order: {report['sigma']}"]
    if report.get("cyclic_scalars"):
        lines.append(f"cyclic scalars: {report['cyclic_scalars']}")
    lines.append(f"b constraint: {json.dumps(report['b_constraint'])}")
    if not report["verified"]:
        raise Alarm("b is determined by A through the adjoint identity", report, lines)
    lines.append("b verified")
    return report, lines


def cmd_betti(args):
    pair = load_pair(args.pair)
    ranks = betti(pair, full=args.full)
    report = {"betti": ranks, "torsion": [], "h": pair.polytope.h_vector()}
    return report, [",".join(map(str, ranks))]


def cmd_present(args):
    pair = load_pair(args.pair)
    if args.form == "full":
        pres = full_presentation(pair)
        report = {"presentation": pres.to_json()}
    else:
        pres = reduced_presentation(pair)
        literal = compare_with_display(pair, literal=True)
        report = {"presentation": pres.to_json(), "literal_display": literal.to_json()}
    lines = [f"variables: {', '.join(pres.variables)}"]
    lines += [f"  [{g.source}] {g.poly}" for g in pres.generators]
    if args.form == "reduced":
        lines.append(f"literal far-face reading agrees: {'yes' if report['literal_display']['matches'] else 'no'}")
    return report, lines


def cmd_graded(args):
    if args.deg < 0 or args.deg % 2:
        raise argparse.ArgumentTypeError("--deg must be a nonnegative even cohomological degree")
    pair = load_pair(args.pair)
    pres = reduced_presentation(pair) if pair.polytope.is_cut else full_presentation(pair)
    piece = pres.piece(args.deg // 2)
    report = {"degree": args.deg, "rank": piece.rank, "torsion": list(piece.torsion)}
    lines = [f"H^{args.deg}: rank {piece.rank}, torsion {list(piece.torsion) or 'none'}"]
    return report, lines


def cmd_relations(args):
    pair = load_pair(args.pair)
    report = check_cut_relations(pair, strict=False)
    lines = [f"{k}: {'in ideal' if v else 'NOT in ideal'}" for k, v in report["equal_products"].items()]
    lines.append(f"y^2 relation: {'holds' if report['square'] else 'fails'}")
    if report["square_zero"] is not None:
        lines.append(f"y^2 = 0: {'holds' if report['square_zero'] else 'fails'}")
    if not report["verified"]:
        raise Alarm("degree-4 relations among y and the y_j", report, lines)
    return report, lines


def cmd_h4(args):
    pair = load_pair(args.pair)
    report = h4_basis(pair)
    lines = [f"expected size {report['formula']}, rank {report['rank']}",
             "basis: " + ", ".join(report["basis"])]
    if not report["verified"]:
        raise Alarm("degree-4 additive basis", report, lines)
    return report, lines


def cmd_ann(args):
    pair = load_pair(args.pair)
    z = args.z
    r = ann_rank(pair, z)
    m = pair.m
    on_y = not any(z[:m]) and any(z)
    report = {"z": z, "rank": r, "m": m, "multiple_of_y": on_y}
    lines = [f"rank of Ann(z): {r}"]
    if on_y and r != m:
        raise Alarm("the annihilator of a multiple of y has rank m", report, lines)
    if r == m and not on_y and pair.det_A_tilde == (-1) ** m:
        raise Alarm("rank-m annihilators come only from multiples of y", report, lines)
    return report, lines


def cmd_iso(args):
    pair = load_pair(args.pair)
    other = load_pair(args.other)
    report = iso_transfer_check(pair, other, args.bound)
    lines = [f"cut rings: {'isomorphism found' if report['cut_iso_found'] else 'none found'}",
             f"base rings: {'isomorphism found' if report['base_iso_found'] else 'none found'}",
             f"consistent: {'yes' if report['consistent'] else 'no'} ({report['note']})"]
    if report["cut"]["found"]:
        lines.append(f"cut map: {report['cut']['found']}")
    return report, lines


def cmd_enumerate(args):
    Q = vertex_cut(build_product(args.dims))
    pairs = [p.to_json() for p in enumerate_pairs(Q, args.bound)]
    report = {"dims": args.dims, "bound": args.bound, "count": len(pairs)}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(pairs, fh)
            fh.write("\n")
        report["out"] = args.out
    else:
        report["pairs"] = pairs
    lines = [f"{len(pairs)} pairs"]
    if not args.out:
        lines += [json.dumps(p) for p in pairs]
    return report, lines


def cmd_selftest(args):
    results = acceptance.run_all()
    report = {"criteria": [r.to_json() for r in results]}
    lines = [r.line() for r in results]
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise Alarm("; ".join(failed), report, lines)
    return report, lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasitoric", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_pair(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("pair", help="pair JSON: file path, '-' for stdin, or inline")
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    p = with_pair("validate", cmd_validate, "vertex determinants of the pair")
    p.add_argument("--induced", action="store_true", help="check the induced pair on the uncut product")
    with_pair("classify", cmd_classify, "normal form of A and the constraint on b")
    p = with_pair("betti", cmd_betti, "ranks of the graded pieces")
    p.add_argument("--full", action="store_true", help="use the presentation before elimination")
    p = with_pair("present", cmd_present, "ring presentation")
    p.add_argument("--form", choices=["full", "reduced"], default="reduced")
    p = with_pair("graded", cmd_graded, "one graded piece")
    p.add_argument("--deg", type=int, required=True, help="cohomological degree (even)")
    with_pair("relations", cmd_relations, "degree-4 relations involving y")
    with_pair("h4", cmd_h4, "degree-4 basis")
    p = with_pair("ann", cmd_ann, "rank of the annihilator of z in degree 2")
    p.add_argument("--z", type=parse_ints, required=True, help="coefficients c1,...,cm,c of y_1..y_m, y")
    p = with_pair("iso", cmd_iso, "bounded isomorphism search against another pair")
    p.add_argument("--other", required=True)
    p.add_argument("--bound", type=int, default=2)

    p = sub.add_parser("enumerate", help="list normalized pairs on a cut product")
    p.add_argument("--dims", type=parse_ints, required=True)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--out")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_selftest)
    return parser


def _emit(as_json, report, lines, out):
    if as_json:
        out.write(json.dumps(report, default=str) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else INVALID
    try:
        report, lines = args.fn(args)
    except Alarm as exc:
        exc.report["alarm"] = exc.claim
        _emit(args.json, exc.report, exc.lines + [f"ALARM: {exc.claim} did not verify"], out)
        return ALARM
    except (TheoremViolation, InternalConsistencyError) as exc:
        _emit(args.json, {"alarm": str(exc)}, [f"ALARM: {exc}"], out)
        return ALARM
    except (QuasitoricError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        err.write(f"error: {exc}\n")
        return INVALID
    _emit(args.json, report, lines, out)
    return OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
