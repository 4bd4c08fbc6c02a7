import csv

import pytest

from corpus import fixed_model
from eventcast import (
    ForecastInterval,
    ForecastRecord,
    GeneratorSpec,
    ValidationError,
    build_chain,
    compile_pattern,
    evaluate,
    export_metrics,
    generate,
    parse_pattern,
    resolve_forecasts,
    run,
    waiting_times,
)


def _record(state, outcome, start=1, end=1):
    iv = ForecastInterval(start, end, 0.5)
    return ForecastRecord(0, state, iv, outcome)


def test_precision_ratio():
    records = [_record(2, o) for o in ("hit", "hit", "miss", "hit")]
    (m,) = evaluate(records)
    assert m.state == 2
    assert m.n_forecasts == 4
    assert m.n_resolved == 4
    assert m.precision == pytest.approx(0.75)


def test_point_interval_spread_and_distance():
    (m,) = evaluate([_record(0, "hit", 1, 1)])
    assert m.mean_spread == 0.0
    assert m.mean_distance == 1.0


def test_unresolved_excluded_from_precision():
    records = [_record(1, "hit"), _record(1, "unresolved"), _record(1, "miss")]
    (m,) = evaluate(records)
    assert m.n_forecasts == 3
    assert m.n_resolved == 2
    assert m.precision == pytest.approx(0.5)


def test_precision_absent_when_nothing_resolved():
    (m,) = evaluate([_record(1, "unresolved")])
    assert m.precision is None
    assert m.n_resolved == 0


def test_interval_less_records_counted_but_contribute_no_geometry():
    records = [ForecastRecord(0, 3, None, "unresolved")]
    (m,) = evaluate(records)
    assert m.n_forecasts == 1
    assert m.mean_spread is None
    assert m.mean_distance is None


def test_unresolved_outcome_required():
    with pytest.raises(ValidationError, match="resolve"):
        evaluate([ForecastRecord(0, 1, ForecastInterval(1, 1, 0.5), None)])


def test_counting_conservation(ab):
    model = fixed_model(ab, 1)
    dfa = compile_pattern(parse_pattern("a;b;b;b", ab), ab)
    chain = build_chain(dfa, model)
    table = waiting_times(chain, 500)
    stream = generate(GeneratorSpec(model, 3000, seed=17))
    matches, forecasts = run(stream, dfa, chain, table, 0.5)
    metrics = evaluate(resolve_forecasts(forecasts, matches, len(stream)))
    assert sum(m.n_forecasts for m in metrics) == len(forecasts)
    # spread/distance recomputed from the records reproduce the means
    for m in metrics:
        mine = [f for f in forecasts if f.state == m.state and f.interval is not None]
        assert m.mean_spread == pytest.approx(sum(f.interval.spread for f in mine) / len(mine))
        assert m.mean_distance == pytest.approx(sum(f.interval.distance for f in mine) / len(mine))


def test_export_header_only_for_empty_metrics(tmp_path):
    path = tmp_path / "metrics.csv"
    export_metrics([], path)
    assert path.read_text() == "state,n_forecasts,n_resolved,precision,mean_spread,mean_distance\n"


def test_export_single_row(tmp_path):
    path = tmp_path / "metrics.csv"
    export_metrics(evaluate([_record(3, "hit", 2, 4)]), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1] == "3,1,1,1.0,2.0,2.0"


def test_export_round_trips_to_six_decimals(tmp_path, ab):
    model = fixed_model(ab, 1)
    dfa = compile_pattern(parse_pattern("a;b;b;b", ab), ab)
    chain = build_chain(dfa, model)
    table = waiting_times(chain, 500)
    stream = generate(GeneratorSpec(model, 5000, seed=23))
    matches, forecasts = run(stream, dfa, chain, table, 0.5)
    metrics = evaluate(resolve_forecasts(forecasts, matches, len(stream)))
    path = tmp_path / "metrics.csv"
    export_metrics(metrics, path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(metrics)
    for row, m in zip(rows, metrics):
        assert int(row["state"]) == m.state
        assert int(row["n_forecasts"]) == m.n_forecasts
        assert int(row["n_resolved"]) == m.n_resolved
        assert float(row["precision"]) == pytest.approx(m.precision, abs=5e-7)
        assert float(row["mean_spread"]) == pytest.approx(m.mean_spread, abs=5e-7)
        assert float(row["mean_distance"]) == pytest.approx(m.mean_distance, abs=5e-7)
