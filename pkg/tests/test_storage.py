import json

import pytest

from gfinv import storage
from gfinv.commands import RunConfig, parse_modulus, resolve_field
from gfinv.errors import DegreeMismatch, NonPrime, ParseError, Reducible
from gfinv.scan import inverse_sbox
from gfinv.workers import partition, run_chunks


def _square(task):
    (x,) = task
    return x * x


# ── Field files ────────────────────────────────────────────────

def test_named_field_resolves_under_fields_dir(aes):
    assert storage.load_field("aes") == aes


def test_field_file_round_trip(tmp_path, gf27):
    path = tmp_path / "gf27.json"
    storage.save_field(path, gf27)
    assert json.loads(path.read_text())["modulus"] == list(gf27.modulus)
    assert storage.load_field(path) == gf27


def test_bad_field_files(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ParseError):
        storage.load_field(broken)
    with pytest.raises(ParseError):
        storage.field_from_json({"p": 2})
    with pytest.raises(ParseError):
        storage.field_from_json({"p": 2, "n": 4, "modulus": "x^4+x+1"})
    with pytest.raises(NonPrime):
        storage.field_from_json({"p": 4, "n": 2})
    with pytest.raises(ParseError):
        storage.load_field(tmp_path / "missing.json")


def test_run_defaults(tmp_path):
    assert storage.load_run_defaults(tmp_path / "absent.json") == {}
    path = tmp_path / "config.json"
    path.write_text('{"workers": 2}')
    assert storage.load_run_defaults(path) == {"workers": 2}
    path.write_text("[1, 2]")
    with pytest.raises(ParseError):
        storage.load_run_defaults(path)


def test_emit_writes_files(tmp_path, capsys):
    storage.emit("hello", None)
    assert capsys.readouterr().out == "hello\n"
    target = tmp_path / "out.txt"
    storage.emit("hello", target)
    assert target.read_text() == "hello\n"


def test_write_failures_become_parse_errors(tmp_path, gf9):
    missing = tmp_path / "absent"
    with pytest.raises(ParseError):
        storage.emit("hello", missing / "out.txt")
    with pytest.raises(ParseError):
        storage.save_field(missing / "gf9.json", gf9)
    with pytest.raises(ParseError):
        storage.save_sbox(missing / "inv.hex", inverse_sbox(gf9), fmt="hex-table")


# ── Moduli and run configuration ───────────────────────────────

def test_modulus_forms_agree(aes):
    expected = list(aes.modulus)
    assert parse_modulus("1,1,0,1,1,0,0,0,1", 2) == expected
    assert parse_modulus("x^8 + x^4 + x^3 + x + 1", 2) == expected
    assert parse_modulus("0x11B", 2) == expected
    assert parse_modulus("x^2 + 2x + 2", 3) == [2, 2, 1]
    with pytest.raises(ParseError):
        parse_modulus("0x7", 3)
    with pytest.raises(ParseError):
        parse_modulus("x^^2", 2)


def test_resolve_field(gf16, aes):
    spec, source = resolve_field(None, 2, 4, "x^4+x+1")
    assert (spec, source) == (gf16, "inline")
    assert resolve_field(None, None, None, None) == (aes, "aes")
    with pytest.raises(ParseError):
        resolve_field(None, 2, None, None)
    with pytest.raises(Reducible):
        resolve_field(None, 2, 4, "x^4+1")
    with pytest.raises(DegreeMismatch):
        resolve_field(None, 2, 4, "x^3+x+1")


def test_run_config_validation(aes, tmp_path):
    assert RunConfig(spec=aes).worker_count == 1
    with pytest.raises(ParseError):
        RunConfig(spec=aes, worker_count=0)
    with pytest.raises(ParseError):
        RunConfig(spec=aes, cap_override=0)
    with pytest.raises(ParseError):
        RunConfig(spec=aes, format="xml")
    with pytest.raises(ParseError):
        RunConfig(spec=aes, output=str(tmp_path / "absent" / "out.json"))
    assert RunConfig(spec=aes, output=str(tmp_path / "out.json")).output.endswith("out.json")


# ── Worker pool ────────────────────────────────────────────────

@pytest.mark.parametrize("total, workers", [(0, 4), (1, 4), (10, 1), (97, 3), (1000, 8)])
def test_partition_covers_the_range_in_order(total, workers):
    chunks = partition(total, workers)
    flat = [i for start, stop in chunks for i in range(start, stop)]
    assert flat == list(range(total))
    if workers == 1 and total:
        assert chunks == [(0, total)]


def test_run_chunks_keeps_task_order():
    tasks = [(i,) for i in range(12)]
    assert run_chunks(_square, tasks, 1) == run_chunks(_square, tasks, 3) == [i * i for i in range(12)]
