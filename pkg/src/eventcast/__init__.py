"""Streaming event-pattern detection with probabilistic completion forecasts.

Pipeline: parse a pattern, compile it to a total deterministic automaton,
pair it with an order-m symbol model into a product Markov chain, derive
per-state first-passage (waiting-time) distributions, and stream events
through the runtime to obtain matches plus confidence intervals on when
the pattern will complete.
"""

from .automata import Dfa, compile_pattern, load_dfa, save_dfa
from .engine import (
    ForecastRecord,
    MatchRecord,
    read_records,
    resolve_forecasts,
    run,
    write_records,
)
from .errors import (
    CompileError,
    HorizonError,
    ModelError,
    PatternSyntaxError,
    StreamFormatError,
    ValidationError,
)
from .evaluation import StateMetrics, evaluate, export_metrics
from .events import Alphabet, Event, EventStream, read_stream, write_stream
from .forecasting import ForecastInterval, WaitingTimeTable, forecast_interval, waiting_times
from .kernels import BACKEND as kernel_backend
from .markov import (
    PatternMarkovChain,
    SymbolModel,
    build_chain,
    load_model,
    save_model,
    train,
)
from .patterns import Iter, Or, PatternExpr, Seq, Sym, format_pattern, matches_epsilon, parse_pattern
from .simulate import GeneratorSpec, generate

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CompileError",
    "Dfa",
    "Event",
    "EventStream",
    "ForecastInterval",
    "ForecastRecord",
    "GeneratorSpec",
    "HorizonError",
    "Iter",
    "MatchRecord",
    "ModelError",
    "Or",
    "PatternExpr",
    "PatternMarkovChain",
    "PatternSyntaxError",
    "Seq",
    "StateMetrics",
    "StreamFormatError",
    "Sym",
    "SymbolModel",
    "ValidationError",
    "WaitingTimeTable",
    "build_chain",
    "compile_pattern",
    "evaluate",
    "export_metrics",
    "forecast_interval",
    "format_pattern",
    "generate",
    "kernel_backend",
    "load_dfa",
    "load_model",
    "matches_epsilon",
    "parse_pattern",
    "read_records",
    "read_stream",
    "resolve_forecasts",
    "run",
    "save_dfa",
    "save_model",
    "train",
    "waiting_times",
    "write_records",
    "write_stream",
]
