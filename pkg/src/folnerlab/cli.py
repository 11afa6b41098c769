"""Command-line orchestration: construct sets, measure densities and
defects, run detectors, probe symbolic configurations, and run the check
suites.

Reports are JSON with rationals serialized as {num, den} pairs and keys
sorted, so equal configurations produce byte-identical output.  Exit
codes: 0 ok, 2 invalid configuration, 3 budget exhausted, 4 certificate
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
import tempfile
from fractions import Fraction

from . import constructions, folner, structures, subsets, symbolic
from .errors import BudgetExceededError, FolnerLabError
from .groups import Z, group_by_name, parse_cycles

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_CERTIFICATE = 4


class InvalidConfig(FolnerLabError):
    pass


class CertificateFailure(FolnerLabError):
    pass


def parse_int_range(text: str) -> list:
    """"a:b" inclusive; "a:b:sK" arithmetic step K; "a:b:xK" geometric."""
    parts = text.split(":")
    if len(parts) == 2:
        a, b = int(parts[0]), int(parts[1])
        return list(range(a, b + 1))
    if len(parts) == 3:
        a, b = int(parts[0]), int(parts[1])
        mod = parts[2]
        if mod.startswith("x"):
            factor = int(mod[1:])
            if factor < 2 or a < 1:
                raise InvalidConfig(f"bad geometric range: {text!r}")
            out = []
            n = a
            while n <= b:
                out.append(n)
                n *= factor
            return out
        step = int(mod[1:]) if mod.startswith("s") else int(mod)
        return list(range(a, b + 1, step))
    raise InvalidConfig(f"cannot parse range: {text!r}")


_MULT_RE = re.compile(r"(\d+)z([+-]\d+)?", re.IGNORECASE)


def parse_set(text: str, group):
    """Named set constructors: "full", "empty", "straus:eps=..",
    "<k>z[+r]" residue classes, "nonpws:eps=..,depth=..,window=..",
    or a .json file of run-length encoded members."""
    low = text.lower()
    if low in ("full", "g", group.name):
        return subsets.full_set(group)
    if low == "empty":
        return subsets.empty_set(group)
    if low.startswith("straus:"):
        kv = _parse_kv(low.split(":", 1)[1])
        return constructions.straus_set(Fraction(kv["eps"]))
    if low.startswith("nonpws:"):
        kv = _parse_kv(low.split(":", 1)[1])
        result = constructions.non_pws_large_set(
            group,
            folner.interval_sequence(group, start=1),
            Fraction(kv["eps"]),
            int(kv.get("depth", 8)),
            range(1, int(kv["window"]) + 1),
        )
        return result.q
    m = _MULT_RE.fullmatch(low)
    if m:
        return subsets.multiples(group, int(m.group(1)), int(m.group(2) or 0))
    if low.endswith(".json"):
        with open(text) as fh:
            payload = json.load(fh)
        return subsets.from_finite(
            group, subsets.rle_decode(payload["runs"]), name=payload.get("name")
        )
    raise InvalidConfig(f"unknown set spec: {text!r}")


def _parse_kv(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item:
            continue
        if "=" not in item:
            raise InvalidConfig(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_sequence(name: str, group):
    low = name.lower()
    if low == "interval":
        return folner.interval_sequence(group)
    if low == "interval1":
        return folner.interval_sequence(group, start=1)
    if low == "syminterval":
        return folner.symmetric_interval_sequence(group)
    if low == "alt":
        return folner.alt_sequence()
    raise InvalidConfig(f"unknown sequence id: {name!r}")


def parse_element(text: str, group):
    if group is Z or group.name.startswith("z"):
        if group is Z:
            return int(text)
        return tuple(int(tok) for tok in text.split(","))
    return parse_cycles(text)


def parse_cylinder(text: str) -> symbolic.Pattern:
    bits = {}
    for item in text.split(","):
        cell, bit = item.split(":")
        bits[int(cell)] = int(bit)
    return symbolic.pattern_from_bits(bits)


def json_ready(obj):
    """Recursively convert to JSON-serializable data; exact rationals
    become {num, den}."""
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        try:
            items = sorted(obj)
        except TypeError:
            items = sorted(obj, key=str)
        return [json_ready(v) for v in items]
    return str(obj)


def emit(text: str, out: str = None):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(config: dict, results, out: str = None):
    report = {"config": json_ready(config), "results": json_ready(results)}
    emit(json.dumps(report, sort_keys=True, indent=2) + "\n", out)


# ---------------------------------------------------------------- construct

def cmd_construct(args) -> int:
    group = group_by_name(args.group)
    if args.what == "straus":
        eps = Fraction(args.eps)
        lo, hi = (int(t) for t in args.emit_window.split(":"))
        mask = constructions.straus_interval_mask(eps, lo, hi)
        members = [lo + i for i in range(hi - lo + 1) if mask[i]]
        count = len(members)
        size = hi - lo + 1
        ratio = Fraction(count, size)
        if ratio < 1 - eps:
            raise CertificateFailure(
                f"window density {ratio} below the certified bound {1 - eps}"
            )
        params = constructions.StrausParams.from_epsilon(eps)
        emit_report(
            {"op": "construct.straus", "eps": eps, "window": [lo, hi]},
            {
                "params": {"epsilon": eps, "base": params.base},
                "members_rle": subsets.rle_encode(members),
                "certificates": {
                    "count": count,
                    "size": size,
                    "ratio": ratio,
                    "lower_bound": 1 - eps,
                },
            },
            args.out,
        )
        return EXIT_OK
    if args.what == "nonpws":
        eps = Fraction(args.eps)
        window = range(1, args.window + 1)
        result = constructions.non_pws_large_set(
            group, folner.interval_sequence(group, start=1), eps, args.depth, window
        )
        members = sorted(x for x in window if result.q.member(x))
        ratio = Fraction(len(members), args.window)
        emit_report(
            {
                "op": "construct.nonpws",
                "eps": eps,
                "depth": args.depth,
                "window": args.window,
            },
            {
                "members_rle": subsets.rle_encode(members),
                "certificates": {
                    "count": len(members),
                    "ratio": ratio,
                    "schedule_mass": result.schedule_mass,
                    "boundary": result.boundary,
                    "trim_cutoffs": list(result.trim_cutoffs),
                },
            },
            args.out,
        )
        return EXIT_OK
    if args.what == "double":
        base = parse_set(args.set, group)
        qp = constructions.doubling_example(base)
        lo, hi = (int(t) for t in args.emit_window.split(":"))
        members = [x for x in range(lo, hi + 1) if qp.member(x)]
        ok = symbolic.unique_pattern_check(qp, range(lo, hi + 1))
        emit_report(
            {"op": "construct.double", "set": args.set, "window": [lo, hi]},
            {
                "members_rle": subsets.rle_encode(members),
                "certificates": {"unique_isolated_member": ok},
            },
            args.out,
        )
        return EXIT_OK if ok else EXIT_CERTIFICATE
    raise InvalidConfig(f"unknown construction: {args.what!r}")


# ------------------------------------------------------------------ density

def cmd_density(args) -> int:
    group = group_by_name(args.group)
    e = parse_set(args.set, group)
    phi = parse_sequence(args.phi, group)
    indices = parse_int_range(args.range)
    report = subsets.density_along(e, phi, indices)
    lines = ["N,count,size,ratio"]
    for n, count, size, ratio in report.rows:
        lines.append(f"{n},{count},{size},{ratio.numerator}/{ratio.denominator}")
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------------- folner

def cmd_folner(args) -> int:
    group = group_by_name(args.group)
    phi = parse_sequence(args.phi, group)
    g = parse_element(args.g, group)
    lines = ["N,g,left_defect,right_defect"]
    for n in range(phi.min_index, args.n + 1):
        ld = folner.left_defect(phi, n, g)
        rd = folner.right_defect(phi, n, g)
        lines.append(
            f"{n},{args.g},{ld.numerator}/{ld.denominator},"
            f"{rd.numerator}/{rd.denominator}"
        )
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------------- detect

def cmd_detect(args) -> int:
    group = group_by_name(args.group)
    e = parse_set(args.set, group)
    if args.what == "fs":
        genb, shiftb = (int(t) for t in args.bounds.split(":"))
        witness = structures.shifted_fs_search(
            e, args.m, genb, shiftb, budget=args.budget
        )
        if witness.found:
            t = witness.data["t"]
            for s in witness.data["sums"]:
                if not e.member(s + t):
                    raise CertificateFailure("shifted finite-sums witness failed recheck")
        emit_report(
            {"op": "detect.fs", "set": args.set, "m": args.m, "bounds": [genb, shiftb]},
            {
                "found": witness.found,
                "witness": witness.data,
                "searched": witness.searched,
            },
            args.out,
        )
        return EXIT_OK
    k_set = parse_int_range(args.K)
    window = parse_int_range(args.window)
    if args.what == "syndetic":
        ok = structures.is_syndetic_window(e, k_set, window)
        emit_report(
            {"op": "detect.syndetic", "set": args.set, "K": args.K, "window": args.window},
            {"syndetic": ok},
            args.out,
        )
        return EXIT_OK
    if args.what == "thick":
        witness = structures.is_thick_window(e, k_set, window)
        emit_report(
            {"op": "detect.thick", "set": args.set, "K": args.K, "window": args.window},
            {"found": witness.found, "witness": witness.data, "searched": witness.searched},
            args.out,
        )
        return EXIT_OK
    if args.what == "pws":
        probe = parse_int_range(args.Kprime)
        witness = structures.is_pws_window(e, k_set, probe, window)
        if witness.found:
            dilated = structures.dilate_left(e, k_set)
            if not all(dilated.member(group.op(k, witness.data["g"])) for k in probe):
                raise CertificateFailure("piecewise-syndetic witness failed recheck")
        emit_report(
            {
                "op": "detect.pws",
                "set": args.set,
                "K": args.K,
                "Kprime": args.Kprime,
                "window": args.window,
            },
            {"found": witness.found, "witness": witness.data, "searched": witness.searched},
            args.out,
        )
        return EXIT_OK
    raise InvalidConfig(f"unknown detector: {args.what!r}")


# ----------------------------------------------------------------- symbolic

def cmd_symbolic(args) -> int:
    group = group_by_name(args.group)
    e = parse_set(args.set, group)
    if args.what == "measure":
        psi = parse_sequence(args.psi, group)
        cylinder = parse_cylinder(args.cylinder)
        measure = symbolic.empirical_measure(e, psi, args.n, cylinder)
        emit_report(
            {
                "op": "symbolic.measure",
                "set": args.set,
                "psi": args.psi,
                "n": args.n,
                "cylinder": args.cylinder,
            },
            {
                "N": args.n,
                "frequency_num": measure.frequency.numerator,
                "frequency_den": measure.frequency.denominator,
            },
            args.out,
        )
        return EXIT_OK
    if args.what == "unique":
        lo, hi = (int(t) for t in args.window.split(":"))
        ok = symbolic.unique_pattern_check(e, range(lo, hi + 1))
        emit_report(
            {"op": "symbolic.unique", "set": args.set, "window": args.window},
            {"unique_isolated_member": ok},
            args.out,
        )
        return EXIT_OK if ok else EXIT_CERTIFICATE
    raise InvalidConfig(f"unknown symbolic op: {args.what!r}")


# -------------------------------------------------------------------- suite

def _suite_checks(full: bool, seed: int, break_greedy: bool = False):
    """Yield (name, callable -> dict) pairs; callables return a result dict
    with a boolean "pass" entry."""
    rng = random.Random(seed)

    def straus_density_small():
        mask = constructions.straus_interval_mask(Fraction(1, 10), 1, 10 ** 4)
        ratio = Fraction(int(mask.sum()), 10 ** 4)
        return {"pass": ratio >= Fraction(9, 10), "ratio": ratio}

    def greedy_postconditions():
        failures = 0
        for _ in range(50):
            size_f = rng.randint(1, 4)
            f = sorted(rng.sample(range(-5, 6), size_f))
            s = sorted(rng.sample(range(0, 101), rng.randint(1, 40)))
            sp = constructions.greedy_disjoint_cover(Z, s, f)
            if break_greedy and sp:
                sp = sp | {max(s) + 1}
            translates = {}
            ok = True
            for x in sp:
                for g in f:
                    y = g + x
                    if y in translates:
                        ok = False
                    translates[y] = x
            ff = {b - a for a in f for b in f}
            cover = {d + x for d in ff for x in sp}
            if not set(s) <= cover:
                ok = False
            if not ok:
                failures += 1
        return {"pass": failures == 0, "failures": failures}

    def syndetic_thick_duality():
        failures = 0
        for _ in range(50):
            k = sorted(rng.sample(range(-6, 7), rng.randint(1, 5)))
            window = list(range(0, 60))
            members = {x for x in range(-10, 70) if rng.random() < 0.6}
            s = subsets.from_finite(Z, members)
            dom = frozenset(range(-10, 70))
            if not structures.is_syndetic_window(s, k, window, domain=dom):
                continue
            g = rng.choice(window)
            # K-syndetic S meets the fiber K^{-1} g of any covered point
            t = subsets.from_finite(Z, {g - ki for ki in k})
            hit = any(s.member(x) and t.member(x) for x in range(-20, 80))
            if not hit:
                failures += 1
        return {"pass": failures == 0, "failures": failures}

    def fs_pigeonhole():
        failures = 0
        for _ in range(100):
            t = rng.randint(1, 20)
            xs = [rng.randint(1, 50) for _ in range(t)]
            w = structures.fs_meets_multiples(xs, t)
            if not (w.found and w.data["sum"] % t == 0):
                failures += 1
        return {"pass": failures == 0, "failures": failures}

    def weights_roundtrip():
        failures = 0
        for _ in range(20):
            n = rng.randint(1, 30)
            raw = [rng.randint(1, 10) for _ in range(n)]
            total = sum(raw)
            weights = {i: Fraction(v, total) for i, v in enumerate(raw)}
            if not folner.unslice_check(folner.ReiterWeights(weights=weights)):
                failures += 1
        phi = folner.interval_sequence(Z)
        two = folner.two_sided_reiter(phi, 30)
        if not folner.unslice_check(two):
            failures += 1
        return {"pass": failures == 0, "failures": failures}

    def symbolic_frequency():
        q = subsets.multiples(Z, 2)
        cylinder = symbolic.pattern_from_bits({0: 1})
        series = symbolic.interval_frequency_series(q, cylinder, 200)
        half = all(f == Fraction(1, 2) for f in series)
        phi = folner.interval_sequence(Z)
        dist = symbolic.pattern_distribution(q, phi, 100, [0, 1, 2])
        normalized = sum(dist.values(), Fraction(0)) == 1
        return {"pass": half and normalized, "half": half, "normalized": normalized}

    def doubling_unique():
        failures = 0
        for _ in range(20):
            members = {x for x in range(2, 60) if rng.random() < 0.4}
            qp = constructions.doubling_example(subsets.from_finite(Z, members))
            if not symbolic.unique_pattern_check(qp, range(-5, 130)):
                failures += 1
        return {"pass": failures == 0, "failures": failures}

    def alt_small():
        phi, e = constructions.alt_group_example(6)
        ok = True
        seen = set()
        for n in (5, 6):
            level = phi.at(n)
            if any(sigma(1) != n for sigma in level):
                ok = False
            if seen & level:
                ok = False
            seen |= level
            if any(not e.member(sigma) for sigma in level):
                ok = False
        from .groups import ALT

        for g in ALT.supported_in(4):
            if folner.left_defect(phi, 5, g) != 0:
                ok = False
        return {"pass": ok}

    yield "straus-density-small", straus_density_small
    yield "greedy-postconditions", greedy_postconditions
    yield "syndetic-thick-duality", syndetic_thick_duality
    yield "fs-meets-multiples", fs_pigeonhole
    yield "weights-roundtrip", weights_roundtrip
    yield "symbolic-frequency", symbolic_frequency
    yield "doubling-unique", doubling_unique
    yield "alt-example-small", alt_small

    if not full:
        return

    def straus_density_full():
        mask = constructions.straus_interval_mask(Fraction(1, 10), 1, 10 ** 6)
        ratio = Fraction(int(mask.sum()), 10 ** 6)
        return {"pass": ratio >= Fraction(9, 10), "ratio": ratio}

    def straus_shift_fs():
        e = constructions.straus_set(Fraction(1, 10))
        witness = structures.shifted_fs_search(e, 4, 64, 1024)
        # the infinite set admits no shifted finite-sums set; the bounded
        # window is expected to agree, so a witness is a failure here
        return {
            "pass": not witness.found,
            "found": witness.found,
            "witness": witness.data,
        }

    def nonpws_full():
        group = Z
        phi = folner.interval_sequence(group, start=1)
        window = range(1, 10 ** 5 + 1)
        result = constructions.non_pws_large_set(group, phi, Fraction(1, 4), 11, window)
        members = sum(1 for x in window if result.q.member(x))
        ratio = Fraction(members, 10 ** 5)
        density_ok = ratio >= Fraction(74, 100) - result.boundary
        pws_hits = {}
        w = list(range(0, 5 * 10 ** 4))
        probe = list(range(-8, 9))
        for k in range(0, 6):
            kk = list(range(-k, k + 1))
            pws_hits[k] = structures.is_pws_window(result.q, kk, probe, w).found
        return {
            "pass": density_ok and not any(pws_hits.values()),
            "ratio": ratio,
            "pws_hits": pws_hits,
        }

    yield "straus-density-full", straus_density_full
    yield "straus-shift-fs-negative", straus_shift_fs
    yield "nonpws-full", nonpws_full


def cmd_suite(args) -> int:
    full = args.name == "full"
    results = []
    failed = []
    for name, check in _suite_checks(full, args.seed, getattr(args, "break_greedy", False)):
        outcome = check()
        outcome["name"] = name
        results.append(outcome)
        if not outcome["pass"]:
            failed.append(name)
    emit_report(
        {"op": "suite", "name": args.name, "seed": args.seed},
        {"checks": results, "failed": failed},
        args.out,
    )
    if failed:
        sys.stderr.write("failed checks: " + ", ".join(failed) + "\n")
        return EXIT_CERTIFICATE
    return EXIT_OK


# ------------------------------------------------------------------ parser

_GLOBAL_DEFAULTS = {"out": None, "seed": 0, "threads": 1, "budget": None}

# option values may start with "-" (e.g. --K -5:5); glue them to the flag
_VALUE_FLAGS = {
    "--K", "--Kprime", "--bounds", "--window", "--g", "--range", "--emit-window",
}


def _add_globals(parser):
    parser.add_argument(
        "--out", default=argparse.SUPPRESS, help="write the report to this path"
    )
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    parser.add_argument(
        "--threads",
        type=int,
        default=argparse.SUPPRESS,
        help="accepted; runs single-threaded",
    )
    parser.add_argument("--budget", type=int, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folnerlab",
        description="Window-scale experiments with Folner sequences, large "
        "structureless sets, and structure detectors.",
    )
    _add_globals(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a set and emit members + certificates")
    c.add_argument("what", choices=["straus", "nonpws", "double"])
    c.add_argument("--group", default="z")
    c.add_argument("--eps", default="0.1")
    c.add_argument("--emit-window", default="1:1000")
    c.add_argument("--depth", type=int, default=8)
    c.add_argument("--window", type=int, default=10 ** 5)
    c.add_argument("--set", default="empty")
    _add_globals(c)
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("density", help="exact density table along a sequence")
    d.add_argument("--group", default="z")
    d.add_argument("--set", required=True)
    d.add_argument("--phi", default="interval")
    d.add_argument("--range", required=True)
    _add_globals(d)
    d.set_defaults(func=cmd_density)

    f = sub.add_parser("folner", help="defect table for one group element")
    f.add_argument("what", choices=["defect"])
    f.add_argument("--group", default="z")
    f.add_argument("--phi", default="interval")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--g", required=True)
    _add_globals(f)
    f.set_defaults(func=cmd_folner)

    t = sub.add_parser("detect", help="structure detectors with scoped certificates")
    t.add_argument("what", choices=["fs", "syndetic", "thick", "pws"])
    t.add_argument("--group", default="z")
    t.add_argument("--set", required=True)
    t.add_argument("--m", type=int, default=2)
    t.add_argument("--bounds", default="4:4")
    t.add_argument("--K", default="-1:1")
    t.add_argument("--Kprime", default="-8:8")
    t.add_argument("--window", default="0:1000")
    _add_globals(t)
    t.set_defaults(func=cmd_detect)

    s = sub.add_parser("symbolic", help="orbit pattern frequencies")
    s.add_argument("what", choices=["measure", "unique"])
    s.add_argument("--group", default="z")
    s.add_argument("--set", required=True)
    s.add_argument("--psi", default="interval")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--cylinder", default="0:1")
    s.add_argument("--window", default="0:1000")
    _add_globals(s)
    s.set_defaults(func=cmd_symbolic)

    u = sub.add_parser("suite", help="run the bundled check suite")
    u.add_argument("name", choices=["fast", "full"])
    u.add_argument("--break-greedy", action="store_true", help=argparse.SUPPRESS)
    _add_globals(u)
    u.set_defaults(func=cmd_suite)

    return parser


def _glue_values(argv: list) -> list:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(argv)))
    for key, val in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except CertificateFailure as exc:
        sys.stderr.write(f"certificate failure: {exc}\n")
        return EXIT_CERTIFICATE
    except (InvalidConfig, FolnerLabError, ValueError, OSError) as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
