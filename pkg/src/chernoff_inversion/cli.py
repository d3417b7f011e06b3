"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 infeasible bound.
"""
import argparse
import csv
import io
import math
import sys

from .errors import DomainError, InfeasibleBoundError
from .exponents import ExponentKind, Method
from .intervals import BoundQuery, Mode, Side, confidence_interval, tail_bounds
from .inversion import beta_from, invert
from .oracle import TrialModel, check_conservative, simulate_tail_frequency
from .tables import FORMATS, OutputTable, format_sig

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INFEASIBLE = 0, 1, 2, 3

DEFAULT_GAMMAS = ("0.05", "0.01", "0.000000002", "5.421e-20")
CSV_HEADER = ("gamma", "mu", "method", "side", "delta", "endpoint", "residual", "status")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_gamma(text: str) -> float:
    """Decimal (``5.421e-20``) or power (``2^-64``, ``2**-64``) probability in (0, 1)."""
    s = text.strip().replace("**", "^")
    try:
        if "^" in s:
            base, exp = s.split("^", 1)
            value = float(base) ** float(exp)
        else:
            value = float(s)
    except (ValueError, OverflowError):
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"gamma must lie in (0, 1), got {text!r}")
    return value


def _gamma_list(text: str) -> list[tuple[str, float]]:
    return [(tok.strip(), parse_gamma(tok)) for tok in text.split(",") if tok.strip()]


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text!r}")
    return value


def _negative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value < 0):
        raise argparse.ArgumentTypeError(f"log-gamma must be negative, got {text!r}")
    return value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text!r}")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text!r}")
    return value


def _probs(text: str) -> list[float]:
    return [_probability(tok) for tok in text.split(",") if tok.strip()]


def _methods(values, default):
    names = []
    for v in values or default:
        names += [t.strip() for t in v.split(",") if t.strip()]
    return [Method(n) for n in names]


def _flatten_gammas(values, default):
    if values is None:
        return [(g, parse_gamma(g)) for g in default]
    return [pair for chunk in values for pair in chunk]


_METHOD_CHOICES = [m.value for m in Method]


def _method_list(text: str) -> str:
    for tok in text.split(","):
        if tok.strip() and tok.strip() not in _METHOD_CHOICES:
            raise argparse.ArgumentTypeError(
                f"unknown method {tok.strip()!r}; choose from {', '.join(_METHOD_CHOICES)}")
    return text


def _cell(kind, method, beta, digits):
    try:
        res = invert(kind, method, beta)
    except InfeasibleBoundError:
        return "infeasible"
    return format_sig(res.delta, digits) if res.in_domain else "infeasible"


def _delta_table(caption, gammas, mean, methods, prediction, digits):
    columns = [("gamma", "")]
    for m in methods:
        columns += [(f"{m.value} delta_U", ""), (f"{m.value} delta_L", "")]
    table = OutputTable(caption, columns)
    upper = ExponentKind.for_side(True, prediction)
    lower = ExponentKind.for_side(False, prediction)
    for label, gamma in gammas:
        beta = beta_from(mean, gamma)
        row = [label]
        for m in methods:
            row += [_cell(upper, m, beta, digits), _cell(lower, m, beta, digits)]
        table.add_row(row)
    return table


def cmd_table_tail(gammas, mu, methods, digits=4) -> OutputTable:
    """Deviation factors for tail bounds on a sum with known mean ``mu``."""
    caption = f"Tail-bound deviations, mu = {mu:g}"
    return _delta_table(caption, gammas, mu, methods, True, digits)


def cmd_table_ci(gammas, mu_hat, methods, digits=4) -> OutputTable:
    """Deviation factors for confidence intervals around an observed sum ``mu_hat``."""
    if Method.CLASSIC in methods:
        raise ValueError("the classic method exists only for tail tables")
    caption = f"Confidence-interval deviations, mu_hat = {mu_hat:g}"
    return _delta_table(caption, gammas, mu_hat, methods, False, digits)


def _table_main(args) -> int:
    methods = _methods(args.method, ["exact,classic,pade2"] if args.which == "tail" else ["exact,pade2"])
    gammas = _flatten_gammas(args.gamma, DEFAULT_GAMMAS)
    if args.which == "tail":
        table = cmd_table_tail(gammas, args.mu, methods, args.digits)
    else:
        if Method.CLASSIC in methods:
            raise _UsageError("--method: classic is not available for confidence intervals")
        table = cmd_table_ci(gammas, args.mu_hat, methods, args.digits)
    sys.stdout.write(table.render(args.format))
    return EXIT_OK


def cmd_invert(gamma, log_gamma, mu, mu_hat, method, side, digits=4):
    """One-shot inversion; returns ``(records, infeasible)``.

    Each record follows :data:`CSV_HEADER`. Sides are solved independently so
    an infeasible lower side still reports the upper one.
    """
    mean = mu if mu is not None else mu_hat
    gamma_value = gamma if gamma is not None else math.exp(log_gamma)
    if side is Side.TWO_SIDED:
        wanted = [Side.UPPER, Side.LOWER]
    elif side is Side.SYMMETRIC:
        wanted = [Side.UPPER]
    else:
        wanted = [side]
    solve = tail_bounds if mu is not None else confidence_interval
    records, infeasible = [], False
    for s in wanted:
        query = BoundQuery(gamma=gamma, log_gamma=log_gamma, mu=mu, mu_hat=mu_hat,
                           method=method, side=s)
        try:
            res = solve(query)
        except InfeasibleBoundError as exc:
            infeasible = True
            print(f"chernoff-inv: {exc}", file=sys.stderr)
            records.append([repr(gamma_value), repr(mean), method.value, s.value, "", "", "",
                            "infeasible"])
            continue
        if s is Side.UPPER:
            dr, endpoint = res.delta_u, res.upper_endpoint
        else:
            dr, endpoint = res.delta_l, res.lower_endpoint
        records.append([repr(gamma_value), repr(mean), method.value, s.value,
                        format_sig(dr.delta, digits), format_sig(endpoint, digits),
                        format_sig(dr.residual, 3), "ok"])
        if side is Side.SYMMETRIC:
            records.append([repr(gamma_value), repr(mean), method.value, "lower",
                            format_sig(dr.delta, digits),
                            format_sig((1.0 - dr.delta) * mean, digits),
                            format_sig(dr.residual, 3), "ok"])
    return records, infeasible


def _render_records(records, fmt, caption):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(records)
        return buf.getvalue()
    table = OutputTable(caption, [(h, "") for h in CSV_HEADER])
    for r in records:
        table.add_row(r)
    return table.render(fmt)


def _invert_main(args) -> int:
    if args.gamma is None and args.log_gamma is None:
        raise _UsageError("one of --gamma or --log-gamma is required")
    if (args.mu is None) == (args.mu_hat is None):
        raise _UsageError("supply exactly one of --mu (prediction) or --mu-hat (regression)")
    method = Method(args.method)
    if args.mu_hat is not None and method is Method.CLASSIC:
        raise _UsageError("--method: classic is only defined in prediction mode (--mu)")
    mode = Mode.PREDICTION if args.mu is not None else Mode.REGRESSION
    records, infeasible = cmd_invert(args.gamma, args.log_gamma, args.mu, args.mu_hat,
                                     method, Side(args.side), args.digits)
    sys.stdout.write(_render_records(records, args.format, f"{mode.value} inversion"))
    return EXIT_INFEASIBLE if infeasible else EXIT_OK


def cmd_verify(gammas, model, methods, sides, reps, seed, workers=1, simulate=False, digits=4):
    """Check every (gamma, method, side); returns ``(table, failed)``."""
    columns = [("gamma", ""), ("method", ""), ("side", ""), ("threshold", "count"),
               ("delta", ""), ("achieved", "prob"), ("std_error", ""), ("status", "")]
    table = OutputTable(f"Conservativeness check, n = {model.n}, mean = {model.mean:g}",
                        columns)
    failed = False
    for label, gamma in gammas:
        for method in methods:
            for side in sides:
                try:
                    rep = check_conservative(gamma, model, method, side, reps, seed, workers)
                except InfeasibleBoundError:
                    table.add_row([label, method.value, side.value, "", "", "", "", "infeasible"])
                    continue
                se = rep.std_error
                achieved = rep.achieved_probability
                if rep.exact:
                    ok = rep.conservative
                    if simulate:
                        freq, se = simulate_tail_frequency(model, rep.threshold, side, reps,
                                                           seed, workers)
                        achieved_txt = f"{format_sig(achieved, digits)} (mc {format_sig(freq, digits)})"
                    else:
                        achieved_txt = format_sig(achieved, digits)
                else:
                    ok = achieved <= gamma + 3.0 * se
                    achieved_txt = format_sig(achieved, digits)
                failed |= not ok
                table.add_row([label, method.value, side.value, str(rep.threshold),
                               format_sig(rep.delta, digits), achieved_txt,
                               "" if se is None else format_sig(se, 3),
                               "conservative" if ok else "VIOLATION"])
    return table, failed


def _verify_main(args) -> int:
    if args.probs is not None:
        if args.n is not None or args.p is not None:
            raise _UsageError("--probs replaces --n/--p")
        model = TrialModel.heterogeneous(args.probs)
    else:
        if args.n is None or args.p is None:
            raise _UsageError("--n and --p are required (or give --probs)")
        model = TrialModel.identical(args.n, args.p)
    if model.mean <= 0:
        raise _UsageError("--p: the model mean must be positive")
    gammas = _flatten_gammas(args.gamma, ("0.05",))
    methods = _methods(args.method, ["exact,classic,pade2"])
    sides = [Side.UPPER, Side.LOWER] if args.side == "both" else [Side(args.side)]
    table, failed = cmd_verify(gammas, model, methods, sides, args.reps, args.seed,
                               args.workers, args.simulate, args.digits)
    sys.stdout.write(table.render(args.format))
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chernoff-inv",
                     description="Invert Chernoff tail bounds for sums of Poisson trials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--digits", type=_count, default=4, help="significant figures (default 4)")

    table = sub.add_parser("table", help="reproduce deviation tables")
    tsub = table.add_subparsers(dest="which", required=True, parser_class=_Parser)
    tail = tsub.add_parser("tail", help="tail-bound deviations for known mean")
    tail.add_argument("--gamma", type=_gamma_list, action="append",
                      help="comma-separated tail probabilities; repeatable")
    tail.add_argument("--mu", type=_positive, default=200.0)
    tail.add_argument("--method", type=_method_list, action="append",
                      help="comma-separated methods (default exact,classic,pade2)")
    common(tail)
    ci = tsub.add_parser("ci", help="confidence-interval deviations for an observed sum")
    ci.add_argument("--gamma", type=_gamma_list, action="append")
    ci.add_argument("--mu-hat", type=_positive, default=212.0)
    ci.add_argument("--method", type=_method_list, action="append",
                    help="comma-separated methods (default exact,pade2)")
    common(ci)

    inv = sub.add_parser("invert", help="single inversion")
    g = inv.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=parse_gamma)
    g.add_argument("--log-gamma", type=_negative)
    inv.add_argument("--mu", type=_positive)
    inv.add_argument("--mu-hat", type=_positive)
    inv.add_argument("--method", choices=_METHOD_CHOICES, default="pade2")
    inv.add_argument("--side", choices=[s.value for s in Side], default="two-sided")
    common(inv)

    ver = sub.add_parser("verify", help="check conservativeness against the binomial oracle")
    ver.add_argument("--gamma", type=_gamma_list, action="append")
    ver.add_argument("--n", type=_count)
    ver.add_argument("--p", type=_probability)
    ver.add_argument("--probs", type=_probs, help="comma-separated heterogeneous probabilities")
    ver.add_argument("--method", type=_method_list, action="append")
    ver.add_argument("--side", choices=["upper", "lower", "both"], default="both")
    ver.add_argument("--reps", type=_count, default=100_000)
    ver.add_argument("--seed", type=_seed, default=0)
    ver.add_argument("--workers", type=_count, default=1)
    ver.add_argument("--simulate", action="store_true",
                     help="also run the Monte Carlo estimate for identical trials")
    common(ver)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"table": _table_main, "invert": _invert_main, "verify": _verify_main}
    try:
        return handlers[args.command](args)
    except (_UsageError, DomainError, ValueError) as exc:
        print(f"chernoff-inv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
