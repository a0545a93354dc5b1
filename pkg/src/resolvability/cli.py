"""Command-line front end: ``resolvability <command> --model FILE [flags]``.

Every command writes CSV (to stdout or ``--out``) with a fixed column set.
Quantities measured in information units carry a ``_nats`` or ``_bits``
suffix chosen by ``--units``; conversion happens only when printing.
Floats use 12 significant digits.  Exit status: 0 on success, 2 on invalid
input, 3 when an enumeration budget would be exceeded.

Lists (``--n``, ``--M``) are comma separated; ``a:b`` and ``a:b:step`` expand
to inclusive ranges, so ``--n 1:1023:2`` is every odd n below 1024.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .asymptotics import convergence_sweep, gaussian_approx_quantile
from .bounds import bound_points
from .codes import (
    DEFAULT_SEARCH_BUDGET,
    ResolvabilityCode,
    best_random_code,
    code_distance,
    code_info_spectrum,
    codewords_label,
    exhaustive_optimal_code,
    random_code,
)
from .errors import ParseError, ResourceError, ValidationError
from .modelfile import ModelFile, parse_model_file
from .probability import DEFAULT_BUDGET, output_distribution
from .single_letter import (
    alternating_resolvability,
    feasible_polytope_vertices,
    min_mutual_information,
    mutual_information,
)
from .spectrum import (
    Spectrum,
    info_density_spectrum,
    spectrum_mean_var,
    spectrum_memoryless_exact,
)
from .typicality import iid_product_distance

LN2 = math.log(2.0)

COLUMNS = {
    "distance": ["n", "M", "rate_{u}", "distance"],
    "spectrum": ["n", "value_{u}", "probability"],
    "bounds": ["bound", "n", "M", "rate_{u}", "c_{u}", "value", "raw", "optimal", "code_distance"],
    "code-search": ["n", "M", "rate_{u}", "distance", "codewords"],
    "code-random": ["n", "M", "seed", "trials", "rate_{u}", "distance", "codewords"],
    "optimize": ["component", "kind", "support", "q", "mutual_information_{u}"],
    "alt": ["S_{u}", "S_star_{u}", "I_odd_{u}", "I_even_{u}"],
    "second-order": [
        "n", "component", "first_order_{u}", "second_order_{u}",
        "mean_per_letter_{u}", "gaussian_{u}", "distance",
    ],
}

HELP = {
    "distance": "exact variational distance between a code's output and the target",
    "spectrum": "atoms of the per-letter information density spectrum",
    "bounds": "achievability and converse bounds over the threshold grid",
    "code-search": "globally optimal code by exhaustive multiset search",
    "code-random": "best of --trials seeded random codes",
    "optimize": "minimum mutual information over inputs matching the target output",
    "alt": "resolvability pair (S, S*) of an alternating model",
    "second-order": "first- and second-order quantiles over a range of n",
}

NOTES = {
    "distance": "needs --code FILE (JSON with keys n, M, seed, codewords).",
    "spectrum": "value is the per-letter density (sum over the block divided by n); "
                "+inf marks outputs the reference cannot produce.",
    "bounds": "achievability uses the model's own density; converse uses the density of "
              "--code, or of a random code drawn with --seed, against the target. "
              "Converse rows only appear where M <= exp(n c). optimal=1 marks the best c.",
    "optimize": "one 'vertex' row per vertex of the feasible input polytope, then the 'optimum'.",
    "second-order": "--rate defaults to each component's mutual information; distance is "
                    "filled when the model file carries a target.",
}


class UsageError(ValidationError):
    pass


def parse_int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                bits = [int(b) for b in part.split(":")]
                if len(bits) not in (2, 3) or (len(bits) == 3 and bits[2] < 1):
                    raise ValueError
                step = bits[2] if len(bits) == 3 else 1
                out.extend(range(bits[0], bits[1] + 1, step))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"cannot parse integer list {text!r}") from None
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return format(x, ".12g")


class Emitter:
    """Collects rows; converts information-valued columns to the chosen unit."""

    def __init__(self, command: str, units: str):
        self.units = units
        self.scale = 1.0 if units == "nats" else 1.0 / LN2
        self.header = [c.format(u=units) for c in COLUMNS[command]]
        self.info = [("{u}" in c) for c in COLUMNS[command]]
        self.rows: list[list[str]] = []

    def info_value(self, x):
        return None if x is None else x * self.scale

    def add(self, *values):
        if len(values) != len(self.header):
            raise AssertionError("row width does not match header")
        self.rows.append(
            [fmt(self.info_value(v) if is_info and not isinstance(v, str) else v)
             for v, is_info in zip(values, self.info)]
        )

    def render(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def _ordered_map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _n_list(args, model: ModelFile) -> list[int]:
    if args.n is None:
        return [model.n if model.mode == "explicit-n" else 1]
    ns = parse_int_list(args.n)
    if any(n < 1 for n in ns):
        raise UsageError("blocklengths must be >= 1")
    return ns


def _M_list(args) -> list[int]:
    Ms = parse_int_list(args.M or "1")
    if any(M < 1 for M in Ms):
        raise UsageError("code sizes must be >= 1")
    return Ms


def _budget(args, default: int) -> int:
    return default if args.budget is None else args.budget


def _rate(M: int, n: int) -> float:
    return math.log(M) / n


def true_spectrum(model: ModelFile, n: int, budget: int) -> Spectrum:
    """Spectrum of the model's own density against its own output, per n-letter block."""
    if model.mode == "explicit-n":
        model._check_n(n)
        P, W = model.sources[0], model.channels[0]
        return info_density_spectrum(P, W, output_distribution(P, W), n=n)
    letters = [info_density_spectrum(P, W, output_distribution(P, W)) for P, W in zip(model.sources, model.channels)]
    per_letter = letters[0] if model.mode == "iid" else letters
    return spectrum_memoryless_exact(per_letter, n, mode=model.mode, cap=max(budget, 1))


def _load_code(path: str) -> ResolvabilityCode:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read code file {path}: {exc.strerror}") from None
    return ResolvabilityCode.from_json(text)


def cmd_distance(args, model: ModelFile, out: Emitter):
    if not args.code:
        raise UsageError("distance needs --code FILE")
    code = _load_code(args.code)
    budget = _budget(args, DEFAULT_BUDGET)
    d = code_distance(code, model.channel_n(code.n, budget), model.target_n(code.n, budget))
    out.add(code.n, code.M, _rate(code.M, code.n), d)


def cmd_spectrum(args, model: ModelFile, out: Emitter):
    budget = _budget(args, DEFAULT_BUDGET)

    def one(n):
        return n, true_spectrum(model, n, budget).per_letter()

    for n, s in _ordered_map(one, _n_list(args, model), args.threads):
        for v, p in s.atoms():
            out.add(n, v, p)


def cmd_bounds(args, model: ModelFile, out: Emitter):
    budget = _budget(args, DEFAULT_BUDGET)
    c_grid = None
    if args.c is not None:
        try:
            c_grid = [float(c) / out.scale for c in args.c.split(",") if c.strip()]
        except ValueError:
            raise UsageError(f"cannot parse threshold list {args.c!r}") from None
    fixed = _load_code(args.code) if args.code else None
    jobs = [(n, M) for n in _n_list(args, model) for M in _M_list(args)]

    def one(job):
        n, M = job
        rows = []
        s = true_spectrum(model, n, budget)
        pts = bound_points(s, M, "achievability", n, c_grid)
        best = min(range(len(pts)), key=lambda i: (pts[i].raw, i)) if pts else -1
        for i, p in enumerate(pts):
            rows.append(("achievability", n, M, _rate(M, n), p.c, p.value, p.raw, int(i == best), None))
        if fixed is not None:
            code = fixed
            if code.n != n or code.M != M:
                return rows
        else:
            code = random_code(model.source_n(n, budget), M, args.seed, n=n)
        Wn = model.channel_n(n, budget)
        target = model.target_n(n, budget)
        s_code = code_info_spectrum(code, Wn, target, n)
        d = code_distance(code, Wn, target)
        pts = bound_points(s_code, M, "converse", n, c_grid)
        best = max(range(len(pts)), key=lambda i: (pts[i].raw, -i)) if pts else -1
        for i, p in enumerate(pts):
            rows.append(("converse", n, M, _rate(M, n), p.c, p.value, p.raw, int(i == best), d))
        return rows

    for rows in _ordered_map(one, jobs, args.threads):
        for r in rows:
            out.add(*r)


def cmd_code_search(args, model: ModelFile, out: Emitter):
    jobs = [(n, M) for n in _n_list(args, model) for M in _M_list(args)]

    def one(job):
        n, M = job
        Wn = model.channel_n(n, _budget(args, DEFAULT_BUDGET))
        target = model.target_n(n, _budget(args, DEFAULT_BUDGET))
        code, d = exhaustive_optimal_code(Wn, target, M, n, budget=_budget(args, DEFAULT_SEARCH_BUDGET))
        return n, M, _rate(M, n), d, codewords_label(code.codewords)

    for row in _ordered_map(one, jobs, args.threads):
        out.add(*row)


def cmd_code_random(args, model: ModelFile, out: Emitter):
    budget = _budget(args, DEFAULT_BUDGET)
    jobs = [(n, M) for n in _n_list(args, model) for M in _M_list(args)]

    def one(job):
        n, M = job
        code, d = best_random_code(
            model.source_n(n, budget), model.channel_n(n, budget), model.target_n(n, budget),
            M, args.trials, args.seed, n=n,
        )
        return n, M, args.seed, args.trials, _rate(M, n), d, codewords_label(code.codewords)

    for row in _ordered_map(one, jobs, args.threads):
        out.add(*row)


def _joined(values) -> str:
    return ";".join(fmt(v) for v in values)


def cmd_optimize(args, model: ModelFile, out: Emitter):
    targets = model.letter_targets()
    for j, (W, target) in enumerate(zip(model.channels, targets)):
        vs = feasible_polytope_vertices(W, target)
        for v in vs:
            support = ";".join(W.input_alphabet[i] for i in v.support)
            out.add(j, "vertex", support, _joined(v.q.pmf.tolist()), v.mutual_information)
        Q, I = min_mutual_information(W, target)
        support = ";".join(a for a, q in zip(W.input_alphabet, Q.pmf.tolist()) if q > 0)
        out.add(j, "optimum", support, _joined(Q.pmf.tolist()), I)


def cmd_alt(args, model: ModelFile, out: Emitter):
    pairs = list(zip(model.sources, model.channels))
    if model.mode == "alternating":
        r = alternating_resolvability(pairs)
        out.add(r.S, r.S_star, r.per_component[0], r.per_component[1])
    else:
        P, W = pairs[0]
        _, I = min_mutual_information(W, output_distribution(P, W))
        out.add(I, I, I, I)


def cmd_second_order(args, model: ModelFile, out: Emitter):
    mm = model.memoryless
    if args.rate is None:
        rates = [mutual_information(P, W) for P, W in mm.components]
    else:
        rates = [args.rate / out.scale] * len(mm.components)
    letter_vars = []
    for P, W in mm.components:
        s = info_density_spectrum(P, W, output_distribution(P, W))
        letter_vars.append(spectrum_mean_var(s)[1])
    reference = model.target
    ns = sorted(set(_n_list(args, model)))
    records = convergence_sweep(mm, ns, args.delta, R=rates, threads=args.threads)
    for r in records:
        dist = None
        if reference is not None:
            P, W = mm.components[r.component]
            dist = iid_product_distance(output_distribution(P, W), reference, r.n)
        gauss = gaussian_approx_quantile(letter_vars[r.component], args.delta)
        out.add(r.n, r.component, r.first_order_quantile, r.second_order_quantile,
                r.mean_per_letter, gauss, dist)


COMMANDS = {
    "distance": cmd_distance,
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "code-search": cmd_code_search,
    "code-random": cmd_code_random,
    "optimize": cmd_optimize,
    "alt": cmd_alt,
    "second-order": cmd_second_order,
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help="JSON model file")
    common.add_argument("--out", help="write CSV here instead of stdout")
    common.add_argument("--units", choices=("nats", "bits"), default="nats")
    common.add_argument("--n", help="blocklengths, e.g. 1,2,4 or 1:1023:2")
    common.add_argument("--M", help="code sizes, e.g. 1,2,4 or 1:8")
    common.add_argument("--delta", type=_probability, default=0.1, help="quantile level (default 0.1)")
    common.add_argument("--rate", type=float, help="first-order rate R, in --units")
    common.add_argument("--seed", type=int, default=0, help="PCG64 seed for random codes")
    common.add_argument("--trials", type=_positive_int, default=1)
    common.add_argument("--threads", type=_positive_int, default=1, help="worker cap; output order is fixed")
    common.add_argument("--budget", type=_positive_int, help="enumeration budget")
    common.add_argument("--code", help="JSON code file (distance, bounds)")
    common.add_argument("--c", help="threshold grid for bounds, comma separated, in --units")

    parser = argparse.ArgumentParser(
        prog="resolvability",
        description="Finite-length channel resolvability experiments.",
        epilog="Exit status: 0 success, 2 invalid input, 3 budget exceeded.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        cols = ", ".join(c.format(u="<units>") for c in COLUMNS[name])
        epilog = f"CSV columns: {cols}."
        if name in NOTES:
            epilog += " " + NOTES[name]
        sub.add_parser(name, parents=[common], help=HELP[name], description=HELP[name], epilog=epilog)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        model = parse_model_file(args.model)
        emitter = Emitter(args.command, args.units)
        COMMANDS[args.command](args, model, emitter)
        text = emitter.render()
        if args.out:
            Path(args.out).write_text(text)
        else:
            stdout.write(text)
    except ValidationError as exc:
        print(f"resolvability {args.command}: {exc}", file=stderr)
        return 2
    except ResourceError as exc:
        print(f"resolvability {args.command}: {exc}", file=stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())
