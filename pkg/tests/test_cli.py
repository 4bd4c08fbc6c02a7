import csv
import json

import numpy as np
import pytest

from eventcast import (
    Alphabet,
    GeneratorSpec,
    SymbolModel,
    build_chain,
    compile_pattern,
    generate,
    load_dfa,
    parse_pattern,
    read_stream,
    resolve_forecasts,
    run,
    save_model,
    waiting_times,
    write_records,
    write_stream,
)
from eventcast.cli import main


def _uniform_model_file(tmp_path, name="model.json"):
    model = SymbolModel(Alphabet(["a", "b"]), 0, 0.0, np.array([[0.5, 0.5]]))
    path = tmp_path / name
    save_model(model, path)
    return path, model


def test_compile_writes_expected_automaton(tmp_path, capsys):
    out = tmp_path / "dfa.json"
    assert main(["compile", "-p", "a;b;b;b", "-A", "a,b", "-o", str(out)]) == 0
    dfa = load_dfa(out)
    assert dfa.num_states == 5
    assert dfa.delta == ((1, 0), (1, 2), (1, 3), (1, 4), (1, 0))
    assert "states=5" in capsys.readouterr().out


def test_compile_rejects_epsilon_pattern(tmp_path, capsys):
    code = main(["compile", "-p", "a*", "-A", "a,b", "-o", str(tmp_path / "x.json")])
    assert code == 2
    assert "empty sequence" in capsys.readouterr().err


def test_compile_reports_syntax_position(tmp_path, capsys):
    code = main(["compile", "-p", "a;;b", "-A", "a,b", "-o", str(tmp_path / "x.json")])
    assert code == 2
    assert "position 2" in capsys.readouterr().err


def test_missing_input_maps_to_io_exit(tmp_path, capsys):
    code = main(["train", "-i", str(tmp_path / "absent.csv"), "-o", str(tmp_path / "m.json")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_forecast_rejects_out_of_range_theta(tmp_path, capsys):
    model_path, _ = _uniform_model_file(tmp_path)
    stream = tmp_path / "s.csv"
    stream.write_text("timestamp,type\n0,a\n")
    code = main(
        ["forecast", "-p", "a;b", "--model", str(model_path), "-t", "1.5",
         "-i", str(stream), "-o", str(tmp_path / "f.jsonl")]
    )
    assert code == 2
    assert "theta must be in (0,1]" in capsys.readouterr().err


def test_evaluate_empty_records_yields_header_only(tmp_path):
    records = tmp_path / "records.jsonl"
    records.write_text("")
    out = tmp_path / "metrics.csv"
    assert main(["evaluate", "-i", str(records), "-o", str(out)]) == 0
    assert out.read_text() == "state,n_forecasts,n_resolved,precision,mean_spread,mean_distance\n"


def test_train_then_simulate(tmp_path, capsys):
    stream_path = tmp_path / "train.csv"
    stream_path.write_text("timestamp,type\n" + "".join(f"{i},{t}\n" for i, t in enumerate("abbaabab")))
    model_path = tmp_path / "model.json"
    assert main(["train", "-i", str(stream_path), "-m", "1", "-a", "1.0", "-o", str(model_path)]) == 0
    sim_path = tmp_path / "sim.csv"
    assert main(["simulate", "--model", str(model_path), "-n", "100", "-S", "4", "-o", str(sim_path)]) == 0
    stream = read_stream(sim_path)
    assert len(stream) == 100


def test_wtd_csv_shape(tmp_path):
    model_path, _ = _uniform_model_file(tmp_path)
    dfa_path = tmp_path / "dfa.json"
    assert main(["compile", "-p", "a;b;b;b", "-A", "a,b", "-o", str(dfa_path)]) == 0
    out = tmp_path / "wtd.csv"
    assert main(["wtd", "--dfa", str(dfa_path), "--model", str(model_path), "-H", "12", "-o", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4 * 12  # four non-absorbing states
    first = rows[0]
    assert (first["state"], first["k"]) == ("0", "1")
    by_state_k = {(r["state"], r["k"]): float(r["probability"]) for r in rows}
    assert by_state_k[("3", "1")] == pytest.approx(0.5, abs=1e-12)
    assert by_state_k[("1", "3")] == pytest.approx(0.125, abs=1e-12)


def test_file_pipeline_matches_in_process_run(tmp_path):
    model_path, model = _uniform_model_file(tmp_path)
    stream = generate(GeneratorSpec(model, 400, seed=31))
    stream_path = tmp_path / "stream.csv"
    write_stream(stream, stream_path)

    dfa_path = tmp_path / "dfa.json"
    assert main(["compile", "-p", "a;b;b;b", "-A", "a,b", "-o", str(dfa_path)]) == 0
    out = tmp_path / "forecasts.jsonl"
    assert main(
        ["forecast", "--dfa", str(dfa_path), "--model", str(model_path), "-t", "0.5",
         "-H", "500", "-i", str(stream_path), "-o", str(out)]
    ) == 0

    dfa = compile_pattern(parse_pattern("a;b;b;b", model.alphabet), model.alphabet)
    chain = build_chain(dfa, model)
    table = waiting_times(chain, 500)
    matches, forecasts = run(stream, dfa, chain, table, 0.5)
    forecasts = resolve_forecasts(forecasts, matches, len(stream))
    expected = tmp_path / "expected.jsonl"
    write_records(matches, forecasts, expected)
    assert out.read_bytes() == expected.read_bytes()


def test_forecast_summary_line(tmp_path, capsys):
    model_path, model = _uniform_model_file(tmp_path)
    stream_path = tmp_path / "stream.csv"
    write_stream(generate(GeneratorSpec(model, 200, seed=8)), stream_path)
    out = tmp_path / "forecasts.jsonl"
    code = main(
        ["forecast", "-p", "a;b;b;b", "--model", str(model_path), "-t", "0.5",
         "-i", str(stream_path), "-o", str(out)]
    )
    assert code == 0
    summary = capsys.readouterr().out.strip().splitlines()[-1]
    assert summary.startswith("matches=") and "forecasts=" in summary and "hit_rate=" in summary


def test_full_pipeline_state3_geometry(tmp_path):
    model_path, model = _uniform_model_file(tmp_path)
    stream_path = tmp_path / "stream.csv"
    write_stream(generate(GeneratorSpec(model, 2000, seed=77)), stream_path)
    records = tmp_path / "records.jsonl"
    assert main(
        ["forecast", "-p", "a;b;b;b", "--model", str(model_path), "-t", "0.5",
         "-i", str(stream_path), "-o", str(records)]
    ) == 0
    metrics_path = tmp_path / "metrics.csv"
    assert main(["evaluate", "-i", str(records), "-o", str(metrics_path)]) == 0
    with open(metrics_path, newline="") as fh:
        rows = {r["state"]: r for r in csv.DictReader(fh)}
    assert rows["3"]["mean_distance"] == "1.0"
    assert rows["3"]["mean_spread"] == "0.0"


def test_forecast_records_are_valid_jsonl(tmp_path):
    model_path, model = _uniform_model_file(tmp_path)
    stream_path = tmp_path / "stream.csv"
    write_stream(generate(GeneratorSpec(model, 50, seed=2)), stream_path)
    out = tmp_path / "forecasts.jsonl"
    assert main(
        ["forecast", "-p", "a;b", "--model", str(model_path), "-t", "0.5",
         "-i", str(stream_path), "-o", str(out)]
    ) == 0
    kinds = set()
    for line in out.read_text().splitlines():
        obj = json.loads(line)
        kinds.add(obj["kind"])
        if obj["kind"] == "forecast":
            assert obj["outcome"] in ("hit", "miss", "unresolved")
    assert kinds == {"match", "forecast"}
