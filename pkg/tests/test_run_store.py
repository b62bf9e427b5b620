from run_store import LEDGER_NAME, RunStore


def test_ledger_lives_in_output_dir(tmp_path):
    store = RunStore(str(tmp_path / "nested" / "out"))
    assert (tmp_path / "nested" / "out" / LEDGER_NAME).exists()
    assert store.get_total_runs() == 0
    assert store.get_runs().empty


def test_record_and_read_back(tmp_path):
    store = RunStore(str(tmp_path))
    ok, message = store.record_run("mite", {"model": "g1", "n": 12}, 0, 0, "mite", ["out/mite.json"])
    assert ok
    assert message == "Run 1 recorded"
    store.record_run("spectrum", {"model": "g1", "n": 8}, 3, 4, "TooLargeError")
    runs = store.get_runs()
    assert runs["subcommand"].tolist() == ["spectrum", "mite"]
    first = store.get_run(1)
    assert first["config"] == {"model": "g1", "n": 12}
    assert first["artifacts"] == ["out/mite.json"]
    assert store.get_run(2)["artifacts"] == []
    assert store.get_run(99) is None


def test_non_json_values_are_stringified(tmp_path):
    from fractions import Fraction

    store = RunStore(str(tmp_path))
    ok, _ = store.record_run("verify", {"j": Fraction(1, 3)}, None, 0)
    assert ok
    assert store.get_run(1)["config"] == {"j": "1/3"}


def test_clear(tmp_path):
    store = RunStore(str(tmp_path))
    store.record_run("mite", {}, 0, 0)
    assert store.clear() == (True, "Run ledger cleared")
    assert store.get_total_runs() == 0
