"""Command-line interface: outputs, exit codes and determinism."""

import csv
import json

import pytest

from helpers import make_melody
from melwave.cli import main
from melwave.corpus import synth_corpus, write_corpus
from melwave.midi_ingest import melody_to_midi_bytes


@pytest.fixture
def two_melody_corpus(tmp_path):
    directory = tmp_path / "two"
    directory.mkdir()
    melodies = [
        ("x.mid", "one", make_melody([60, 64, 67, 72], melody_id="x")),
        ("y.mid", "two", make_melody([72, 67, 64, 60], melody_id="y")),
    ]
    rows = ["filename,family"]
    for name, label, melody in melodies:
        (directory / name).write_bytes(melody_to_midi_bytes(melody))
        rows.append(f"{name},{label}")
    (directory / "labels.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return directory


@pytest.fixture
def duplicated_corpus(tmp_path):
    directory = tmp_path / "dup"
    base = synth_corpus(3, families=2, variants=1, ornament_prob=0.0)
    melodies = []
    for melody in base.melodies:
        for suffix in ("_1", "_2"):
            copy = make_melody(
                [n.pitch for n in melody.notes],
                durations=[n.duration for n in melody.notes],
                onsets=[n.onset for n in melody.notes],
                melody_id=melody.id + suffix,
                label=melody.label,
            )
            melodies.append(copy)
    from melwave.corpus import LabeledCorpus

    write_corpus(LabeledCorpus(melodies), directory)
    return directory


def read_sections(text):
    """Split a two-section CSV output on the blank line."""
    blocks = text.replace("\r\n", "\n").strip().split("\n\n")
    return [list(csv.reader(block.splitlines())) for block in blocks]


def test_segment_constant_single_segment(tmp_path, capsys):
    midi = tmp_path / "const.mid"
    midi.write_bytes(melody_to_midi_bytes(make_melody([60], durations=[4])))
    rc = main(["segment", str(midi), "--segmentation", "ws", "--scale", "3"])
    assert rc == 0
    boundaries, segments = read_sections(capsys.readouterr().out)
    assert boundaries[0] == ["melody_id", "cut_samples"]
    assert boundaries[1] == ["const", ""]
    assert segments[0] == ["melody_id", "start", "end", "values"]
    assert len(segments) == 2
    assert segments[1][1:3] == ["0", "32"]


def test_segment_two_plateau_one_cut(tmp_path, capsys):
    midi = tmp_path / "step.mid"
    midi.write_bytes(melody_to_midi_bytes(make_melody([72, 60])))
    rc = main(["segment", str(midi), "--segmentation", "ws", "--scale", "3"])
    assert rc == 0
    boundaries, segments = read_sections(capsys.readouterr().out)
    assert boundaries[1] == ["step", "4"]
    assert [row[1:3] for row in segments[1:]] == [["0", "4"], ["4", "16"]]


def test_segment_coeffs_dump(tmp_path):
    midi = tmp_path / "m.mid"
    midi.write_bytes(melody_to_midi_bytes(make_melody([60, 72, 64, 55])))
    out = tmp_path / "seg.csv"
    coeffs = tmp_path / "coeffs.csv"
    rc = main(
        [
            "segment", str(midi), "--segmentation", "ws", "--scale", "2",
            "--out", str(out), "--coeffs-out", str(coeffs),
        ]
    )
    assert rc == 0
    rows = list(csv.reader(coeffs.read_text().splitlines()))
    assert rows[0][0] == "scale"
    assert len(rows[0]) == 1 + 32  # 4 notes at rate 8
    scales = [row[0] for row in rows[1:]]
    assert scales == ["2", "4", "8", "16", "32"]


def test_segment_bad_flag_combination_exits_2(tmp_path):
    midi = tmp_path / "m.mid"
    midi.write_bytes(melody_to_midi_bytes(make_melody([60])))
    with pytest.raises(SystemExit) as exc:
        main(["segment", str(midi), "--segmentation", "ws", "--scale", "2",
              "--threshold", "0.4"])
    assert exc.value.code == 2


def test_segment_missing_scale_exits_2(tmp_path):
    midi = tmp_path / "m.mid"
    midi.write_bytes(melody_to_midi_bytes(make_melody([60])))
    with pytest.raises(SystemExit) as exc:
        main(["segment", str(midi), "--segmentation", "ws"])
    assert exc.value.code == 2


def test_evaluate_two_melody_accuracy_zero(two_melody_corpus, capsys):
    rc = main(
        [
            "evaluate", "--corpus", str(two_melody_corpus),
            "--segmentation", "ws", "--scale", "2", "--representation", "wr",
            "--k", "1",
        ]
    )
    assert rc == 0
    header_block, predictions = read_sections(capsys.readouterr().out)
    row = dict(zip(header_block[0], header_block[1]))
    assert row["accuracy"] == "0"
    assert predictions[0] == ["melody_id", "true_label", "predicted_label"]
    assert len(predictions) == 3


def test_evaluate_duplicated_corpus_accuracy_one(duplicated_corpus, capsys):
    rc = main(
        [
            "evaluate", "--corpus", str(duplicated_corpus),
            "--segmentation", "ws", "--scale", "3", "--representation", "wr",
            "--k", "1", "--json",
        ]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["accuracy"] == 1.0
    assert payload["config"]["metric"] == "cityblock"
    assert len(payload["predictions"]) == 4


def test_evaluate_single_label_corpus_exits_1(tmp_path, capsys):
    directory = tmp_path / "single"
    directory.mkdir()
    for name in ("a", "b"):
        (directory / f"{name}.mid").write_bytes(
            melody_to_midi_bytes(make_melody([60, 62], melody_id=name))
        )
    (directory / "labels.csv").write_text(
        "filename,family\na.mid,only\nb.mid,only\n", encoding="utf-8"
    )
    rc = main(
        [
            "evaluate", "--corpus", str(directory),
            "--segmentation", "ws", "--scale", "1",
        ]
    )
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_grid_outputs(tmp_path, capsys):
    directory = tmp_path / "corpus"
    write_corpus(synth_corpus(7, families=2, variants=3, ornament_prob=0.2), directory)
    results_path = tmp_path / "results.csv"
    summary_path = tmp_path / "summary.csv"
    rc = main(
        [
            "grid", "--corpus", str(directory),
            "--out", str(results_path), "--summary-out", str(summary_path),
        ]
    )
    assert rc == 0
    assert capsys.readouterr().out.startswith("best: ")

    rows = list(csv.reader(results_path.read_text().splitlines()))
    assert rows[0] == [
        "representation", "segmentation", "scale", "threshold", "k", "metric",
        "accuracy",
    ]
    assert len(rows) == 1 + 880

    summary_rows = list(csv.reader(summary_path.read_text().splitlines()))
    assert summary_rows[0] == [
        "metric", "representation", "segmentation", "value",
        "k1", "k2", "k3", "k4", "k5",
    ]
    assert len(summary_rows) == 1 + 16
    cells = [value for row in summary_rows[1:] for value in row[4:]]
    assert len(cells) == 80


def test_grid_missing_corpus_exits_1(tmp_path, capsys):
    rc = main(["grid", "--corpus", str(tmp_path / "nope")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_synth_writes_files(tmp_path, capsys):
    out = tmp_path / "synth"
    rc = main(
        [
            "synth", "--seed", "1", "--families", "5", "--variants", "10",
            "--out", str(out),
        ]
    )
    assert rc == 0
    files = sorted(p.name for p in out.iterdir())
    assert "labels.csv" in files
    assert sum(1 for f in files if f.endswith(".mid")) == 50
    rows = (out / "labels.csv").read_text().strip().splitlines()
    assert len(rows) == 51


def test_synth_deterministic_bytes(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        rc = main(
            [
                "synth", "--seed", "9", "--families", "2", "--variants", "2",
                "--out", str(out),
            ]
        )
        assert rc == 0
    for path in sorted(out_a.iterdir()):
        assert path.read_bytes() == (out_b / path.name).read_bytes()


def test_synth_zero_variants_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--seed", "1", "--families", "2", "--variants", "0",
              "--out", str(tmp_path / "x")])
    assert exc.value.code == 2
