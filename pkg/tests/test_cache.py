import json

from weylmod.cache import JsonCache, cache_key


def test_key_is_order_independent():
    assert cache_key("dims", {"a": 1, "b": 2}) == cache_key("dims", {"b": 2, "a": 1})
    assert cache_key("dims", {"a": 1}) != cache_key("weights", {"a": 1})


def test_roundtrip_and_fetch(tmp_path):
    cache = JsonCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"total": "16"}

    assert cache.fetch("dims", {"n": 3}, compute) == {"total": "16"}
    assert cache.fetch("dims", {"n": 3}, compute) == {"total": "16"}
    assert len(calls) == 1


def test_corrupt_entry_is_recomputed(tmp_path, caplog):
    cache = JsonCache(tmp_path)
    cache.put("dims", {"n": 3}, {"total": "16"})
    path = next(tmp_path.glob("*.json"))
    entry = json.loads(path.read_text())
    entry["payload"]["total"] = "17"
    path.write_text(json.dumps(entry))
    assert cache.get("dims", {"n": 3}) is None
    assert not path.exists()
    assert "corrupt" in caplog.text


def test_garbage_file_is_discarded(tmp_path):
    cache = JsonCache(tmp_path)
    (tmp_path / f"{cache_key('x', {})}.json").write_text("{not json")
    assert cache.fetch("x", {}, lambda: [1]) == [1]
    assert cache.get("x", {}) == [1]


def test_disabled_cache():
    cache = JsonCache(None)
    cache.put("x", {}, 1)
    assert cache.get("x", {}) is None
