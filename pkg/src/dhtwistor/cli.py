"""Command line front end.

Exit codes: 0 success, 1 verification failure (or an inconsistent
descriptor, or a path that cannot be refined), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import harmonic, lattice, tate, verify
from .descriptor_file import DescriptorParseError, load_descriptor
from .tate import InvariantSection

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt(z.real)
    if z.real == 0:
        return f"{fmt(z.imag)}j"
    im = fmt(z.imag)
    sign = "" if im.startswith("-") else "+"
    return f"{fmt(z.real)}{sign}{im}j"


def parse_complex(text: str) -> complex:
    """Accepts ``1.5``, ``2-3j``, ``2-3i`` and ``(1+2j)``."""
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


class UsageError(Exception):
    pass


# -- convert -----------------------------------------------------------------


def cmd_convert(args) -> int:
    forward = args.a is not None or args.alpha is not None
    inverse = args.from_weight is not None or args.from_residue is not None
    if forward == inverse:
        raise UsageError("give either --a/--alpha or --from-weight/--from-residue")
    if forward:
        s = InvariantSection(args.a or 0.0, args.alpha or 0.0)
        w, r = tate.coords_at(s, args.p)
        print(f"p = {fmt_complex(args.p)}")
        print(f"weight = {fmt(w)}")
        print(f"residue = {fmt_complex(r)}")
    else:
        s = tate.from_coords(args.from_weight or 0.0, args.from_residue or 0.0, args.p)
        print(f"p = {fmt_complex(args.p)}")
        print(f"a = {fmt(s.a)}")
        print(f"alpha = {fmt_complex(s.alpha)}")
    t = tate.embed_invariant(s)
    print("section = (" + ", ".join(fmt_complex(c) for c in t.coeffs) + ")")
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    suites = verify.SUITES if args.suite == "all" else (args.suite,)
    start = time.perf_counter()
    results = verify.run(suites, samples=args.samples, seed=args.seed, tol=args.tol)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} identities passed in {time.perf_counter() - start:.2f}s")
    for r in failed:
        print(f"FAILED: {r.name} (suite {r.suite}); reproduce with: "
              f"dhtwistor verify --suite {r.suite} --samples {r.samples} --seed {r.seed}")
    return EXIT_FAIL if failed else EXIT_OK


# -- lattice -----------------------------------------------------------------


def cmd_lattice(args) -> int:
    if args.list:
        for name in sorted(lattice.BUILTINS):
            print(f"@{name}")
        print("@curve-g<G>-k<K>")
        return EXIT_OK
    if args.descriptor is None:
        raise UsageError("--descriptor is required")
    try:
        d = load_descriptor(args.descriptor)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    except (DescriptorParseError, lattice.DescriptorError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    rep = lattice.analyze_descriptor(d)
    g = rep.grw2
    print(f"descriptor: {d.name}")
    print(f"k = {d.k}")
    print(f"H1(X) = {d.h1X}")
    print(f"H2(X) = {d.h2X}")
    print(f"NS(X,D) = {g.ns}")
    print(f"NS(X,D)^sat = {g.ns_sat}")
    print(f"NS(U)^tors = {g.ns_u_tors}")
    print(f"b = {g.b}")
    print(f"rank H1(U) = {g.h1U.rank}")
    print(f"H1(U) = {g.h1U} (extension of a free group, so it splits)")
    print("H2(U): undetermined by the descriptor")
    print("weight-two graded piece:")
    for line in g.lines():
        print(f"  {line}")
    print("exact sequences:")
    for seq, verdicts in rep.sequences:
        print(f"  {seq.name}: {seq}")
        for v in verdicts:
            print(f"    at {v.describe()}")
    print("checks:")
    for text, ok in rep.rank_checks:
        print(f"  [{'ok' if ok else 'FAILED'}] {text}")
    for issue in rep.issues:
        print(f"  [FAILED] {issue}")
    print("consistent" if rep.ok else "INCONSISTENT")
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- track -------------------------------------------------------------------


def read_path(path: str) -> list[complex]:
    """One sample per line: ``re,im``, ``re im`` or a single complex literal; ``#`` starts a comment."""
    out = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise UsageError(f"cannot read path file {path}: {e.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = next(csv.reader([line.replace(" ", ",")]))
        fields = [f for f in fields if f]
        try:
            if len(fields) == 1:
                out.append(parse_complex(fields[0]))
            elif len(fields) == 2:
                out.append(complex(float(fields[0]), float(fields[1])))
            else:
                raise ValueError
        except (ValueError, argparse.ArgumentTypeError):
            raise UsageError(f"{path}:{n}: cannot parse path sample {line!r}") from None
    if not out:
        raise UsageError(f"{path}: path has no samples")
    return out


def cmd_track(args) -> int:
    a_list = args.a or [0.0]
    alpha_list = args.alpha or [0.0] * len(a_list)
    if len(alpha_list) != len(a_list):
        raise UsageError("give the same number of --a and --alpha values")
    h = harmonic.HarmonicDatum(tuple(InvariantSection(a, al) for a, al in zip(a_list, alpha_list)))
    sources = sum(x is not None for x in (args.path, args.circle, args.line))
    if sources != 1:
        raise UsageError("give exactly one of --path, --circle, --line")
    if args.path is not None:
        path = read_path(args.path)
    elif args.circle is not None:
        if args.circle < 1:
            raise UsageError("--circle needs at least one segment")
        path = harmonic.circle_path(args.circle, args.radius, args.center)
    else:
        p, q, n = args.line
        try:
            p, q, n = parse_complex(p), parse_complex(q), int(n)
        except (argparse.ArgumentTypeError, ValueError):
            raise UsageError("--line takes P Q N") from None
        if n < 1:
            raise UsageError("--line needs at least one segment")
        path = harmonic.segment_path(p, q, n)
    base = args.chamber_base or [0.0]
    if len(base) == 1:
        base = base * h.k
    if len(base) != h.k:
        raise UsageError(f"--chamber-base needs 1 or {h.k} values")
    try:
        if args.max_refine > 0:
            path = harmonic.auto_refine(h, path, args.max_refine)
        trace = harmonic.track_chambers(h, path, base)
    except harmonic.RefinePathError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    summary = [f"# samples: {len(trace.states)}",
               "# final offsets: " + " ".join(str(n) for n in trace.final_offsets)]
    if abs(path[0] - path[-1]) <= harmonic.CLOSED_TOL:
        summary.append("# net offsets (closed path): " + " ".join(str(n) for n in trace.net_offsets))
    if trace.wall_hits:
        summary.append("# wall samples (sample:divisor): " + " ".join(f"{i}:{d}" for i, d in trace.wall_hits))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            harmonic.write_trace_csv(trace, f)
    else:
        harmonic.write_trace_csv(trace, sys.stdout)
    for line in summary:
        print(line)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dhtwistor", description="Rank-one Deligne-Hitchin twistor computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="(a, alpha) <-> (weight, residue) at lambda = p")
    c.add_argument("--a", type=parse_real)
    c.add_argument("--alpha", type=parse_complex)
    c.add_argument("--from-weight", type=parse_real)
    c.add_argument("--from-residue", type=parse_complex)
    c.add_argument("--p", type=parse_complex, required=True)
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="run seeded identity suites")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=parse_real, default=None, help="override every tolerance")
    v.set_defaults(func=cmd_verify)

    la = sub.add_parser("lattice", help="analyze a descriptor of (X, D)")
    la.add_argument("--descriptor", help="YAML file, or @name for a built-in")
    la.add_argument("--list", action="store_true", help="list built-in descriptors")
    la.set_defaults(func=cmd_lattice)

    t = sub.add_parser("track", help="follow KMS chambers along a path in lambda")
    t.add_argument("--a", type=parse_real, action="append", help="weight of a divisor (repeatable)")
    t.add_argument("--alpha", type=parse_complex, action="append", help="residue of a divisor (repeatable)")
    t.add_argument("--path", help="file of path samples")
    t.add_argument("--circle", type=int, metavar="N", help="closed circle with N segments")
    t.add_argument("--radius", type=parse_real, default=1.0)
    t.add_argument("--center", type=parse_complex, default=0j)
    t.add_argument("--line", nargs=3, metavar=("P", "Q", "N"), help="straight segment from P to Q in N steps")
    t.add_argument("--chamber-base", type=parse_real, action="append", help="window start c (repeatable)")
    t.add_argument("--max-refine", type=int, default=16, help="bisection depth cap; 0 disables refinement")
    t.add_argument("--output", help="write the CSV here instead of stdout")
    t.set_defaults(func=cmd_track)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        ap.error(str(e))


if __name__ == "__main__":
    sys.exit(main())
