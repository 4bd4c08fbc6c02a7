"""Command-line pipeline: compile, train, simulate, wtd, forecast, evaluate.

Every command reads and writes plain files so runs compose in shell
scripts and stay reproducible. Exit codes: 0 success, 1 I/O failure,
2 validation or domain error.
"""

from __future__ import annotations

import argparse
import sys

from .automata import compile_pattern, load_dfa, save_dfa
from .engine import read_records, resolve_forecasts, run, write_records
from .errors import ValidationError
from .evaluation import evaluate, export_metrics
from .events import Alphabet, read_stream, write_stream
from .forecasting import waiting_times
from .markov import build_chain, load_model, save_model, train
from .patterns import parse_pattern
from .simulate import GeneratorSpec, generate

DEFAULT_HORIZON = 500
DEFAULT_ORDER = 1
DEFAULT_SMOOTHING = 1.0


def _check_theta(theta: float) -> float:
    if not 0.0 < theta <= 1.0:
        raise ValidationError("theta must be in (0,1]")
    return theta


def _check_horizon(horizon: int) -> int:
    if horizon < 1:
        raise ValidationError(f"horizon must be >= 1, got {horizon}")
    return horizon


def _cmd_compile(args) -> int:
    alphabet = Alphabet(name.strip() for name in args.alphabet.split(","))
    dfa = compile_pattern(parse_pattern(args.pattern, alphabet), alphabet)
    save_dfa(dfa, args.out)
    print(f"states={dfa.num_states} finals={sorted(dfa.finals)}")
    return 0


def _cmd_train(args) -> int:
    alphabet = Alphabet(args.alphabet.split(",")) if args.alphabet else "infer"
    stream = read_stream(args.input, alphabet)
    model = train(stream, args.order, args.alpha)
    save_model(model, args.out)
    print(f"events={len(stream)} contexts={model.n_contexts}")
    return 0


def _cmd_simulate(args) -> int:
    model = load_model(args.model)
    initial = tuple(args.initial_context.split(",")) if args.initial_context else None
    stream = generate(GeneratorSpec(model, args.length, args.seed, initial))
    write_stream(stream, args.out)
    print(f"events={len(stream)}")
    return 0


def _cmd_wtd(args) -> int:
    _check_horizon(args.horizon)
    dfa = load_dfa(args.dfa)
    model = load_model(args.model)
    table = waiting_times(build_chain(dfa, model), args.horizon)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("state,k,probability\n")
        for state in sorted(table.rows):
            for k, p in enumerate(table.rows[state], start=1):
                fh.write(f"{state},{k},{float(p)!r}\n")
    print(f"states={len(table.rows)} horizon={args.horizon}")
    return 0


def _cmd_forecast(args) -> int:
    _check_theta(args.theta)
    _check_horizon(args.horizon)
    model = load_model(args.model)
    if args.dfa:
        dfa = load_dfa(args.dfa)
    else:
        dfa = compile_pattern(parse_pattern(args.pattern, model.alphabet), model.alphabet)
    stream = read_stream(args.input, model.alphabet)
    chain = build_chain(dfa, model)
    table = waiting_times(chain, args.horizon)
    matches, forecasts = run(stream, dfa, chain, table, args.theta)
    forecasts = resolve_forecasts(forecasts, matches, len(stream))
    write_records(matches, forecasts, args.out)
    hits = sum(1 for f in forecasts if f.outcome == "hit")
    misses = sum(1 for f in forecasts if f.outcome == "miss")
    rate = f"{hits / (hits + misses):.6f}" if hits + misses else "n/a"
    print(f"matches={len(matches)} forecasts={len(forecasts)} hit_rate={rate}")
    return 0


def _cmd_evaluate(args) -> int:
    _, forecasts = read_records(args.input)
    export_metrics(evaluate(forecasts), args.out)
    print(f"forecasts={len(forecasts)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventcast",
        description="Detect event patterns in streams and forecast their completion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a pattern to an automaton file")
    p.add_argument("-p", "--pattern", required=True, help="pattern text, e.g. 'a;b;b;b'")
    p.add_argument("-A", "--alphabet", required=True, help="comma-separated event types")
    p.add_argument("-o", "--out", required=True, help="output automaton JSON")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("train", help="estimate a symbol model from a stream")
    p.add_argument("-i", "--input", required=True, help="stream file (CSV or JSON lines)")
    p.add_argument("-m", "--order", type=int, default=DEFAULT_ORDER,
                   help=f"model order (default: {DEFAULT_ORDER})")
    p.add_argument("-a", "--alpha", type=float, default=DEFAULT_SMOOTHING,
                   help=f"additive smoothing (default: {DEFAULT_SMOOTHING})")
    p.add_argument("-A", "--alphabet", default=None,
                   help="comma-separated event types (default: infer from the stream)")
    p.add_argument("-o", "--out", required=True, help="output model JSON")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("simulate", help="generate a stream from a model")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("-n", "--length", type=int, required=True, help="number of events")
    p.add_argument("-S", "--seed", type=int, default=0, help="generator seed (default: 0)")
    p.add_argument("--initial-context", default=None,
                   help="comma-separated context symbols (default: sampled uniformly)")
    p.add_argument("-o", "--out", required=True, help="output stream file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("wtd", help="export waiting-time distributions as CSV")
    p.add_argument("--dfa", required=True, help="automaton JSON")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("-H", "--horizon", type=int, default=DEFAULT_HORIZON,
                   help=f"max steps ahead (default: {DEFAULT_HORIZON})")
    p.add_argument("-o", "--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_wtd)

    p = sub.add_parser("forecast", help="run matching and forecasting over a stream")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dfa", help="automaton JSON")
    src.add_argument("-p", "--pattern", help="pattern text (compiled over the model's alphabet)")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("-t", "--theta", type=float, required=True, help="confidence threshold in (0,1]")
    p.add_argument("-H", "--horizon", type=int, default=DEFAULT_HORIZON,
                   help=f"max steps ahead (default: {DEFAULT_HORIZON})")
    p.add_argument("-i", "--input", required=True, help="stream file")
    p.add_argument("-o", "--out", required=True, help="output records (JSON lines)")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("evaluate", help="aggregate forecast records into per-state metrics")
    p.add_argument("-i", "--input", required=True, help="forecast records (JSON lines)")
    p.add_argument("-o", "--out", required=True, help="output metrics CSV")
    p.set_defaults(func=_cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
