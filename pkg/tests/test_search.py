import json

import pytest

from bentforge import search as S
from bentforge.gf import build_field


@pytest.fixture(scope="module")
def example3():
    g = S.golden("example3")
    return g.job, *S.run(g.job, workers=1)


@pytest.mark.parametrize("name,size", [("example1", 49), ("example2", 90), ("example3", 63), ("example4", 208)])
def test_grid_sizes(name, size):
    assert len(list(S.golden(name).job.points())) == size


def test_enumeration_order_is_by_discrete_log(example3):
    _, records, _ = example3
    assert [r.params["a"] for r in records] == list(range(63))
    assert [r.index for r in records] == list(range(63))


def test_example3_summary(example3):
    _, records, summary = example3
    assert (summary.total, summary.bent, summary.regular, summary.disagreements) == (63, 36, 36, 0)
    assert all(r.agreement for r in records)


def test_csv_round_trip(tmp_path, example3):
    job, records, summary = example3
    path = tmp_path / "out.csv"
    S.persist(records, summary, "csv", path, job)
    text = path.read_text()
    assert len(text.splitlines()) == len(records) + 1
    back, back_summary = S.load(path)
    assert back == records
    assert back_summary == summary


def test_json_round_trip(tmp_path, example3):
    job, records, summary = example3
    path = tmp_path / "out.json"
    S.persist(records, summary, "json", path, job)
    doc = json.loads(path.read_text())
    assert list(doc) == ["job", "records", "summary"]
    back, back_summary = S.load(path)
    assert back == records and back_summary == summary


def test_empty_stream(tmp_path):
    job = S.golden("example3").job
    path = tmp_path / "empty.csv"
    S.persist([], S.summarize([]), "csv", path, job)
    assert path.read_text().count("\n") == 1
    records, summary = S.load(path)
    assert records == [] and summary.total == summary.bent == 0


def test_persist_reports_path_on_failure(tmp_path, example3):
    job, records, summary = example3
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        S.persist(records, summary, "csv", bad, job)
    with pytest.raises(S.SearchError):
        S.persist(records, summary, "xml", tmp_path / "x", job)


def test_parallel_equals_serial():
    job = S.golden("example2").job
    serial = list(S.enumerate_job(job, workers=1))
    parallel = list(S.enumerate_job(job, workers=3))
    assert parallel == serial


def test_alt_exponent_only_for_p1():
    spec = build_field(2, 6).spec
    with pytest.raises(S.SearchError):
        S.SearchJob(spec, "B2", (("r", 3), ("s", 1)), (("a", S.Domain(6)),), alt_exponent=10)


def test_job_validation():
    spec = build_field(2, 6).spec
    with pytest.raises(S.SearchError, match="needs fixed"):
        S.SearchJob(spec, "B2", (("r", 3),), (("a", S.Domain(6)),))
    with pytest.raises(S.SearchError, match="no slot"):
        S.SearchJob(spec, "B2", (("r", 3), ("s", 1)), (("z", S.Domain(6)),))
    with pytest.raises(S.SearchError, match="unknown family"):
        S.SearchJob(spec, "B9", (), ())


def test_cap_rejects_large_grid():
    job = S.golden("example3").job
    with pytest.raises(S.SearchError, match="cap"):
        list(S.enumerate_job(job, cap=1000))


def test_dedupe_collapses_identical_functions():
    spec = build_field(2, 6).spec
    # B2 with r = 9 has no terms, so every a gives the zero function
    job = S.SearchJob(spec, "B2", (("r", 9), ("s", 1)), (("a", S.Domain(6)),), dedupe=True)
    assert len(list(S.enumerate_job(job, workers=1))) == 1


def test_threads_env(monkeypatch):
    monkeypatch.setenv(S.THREADS_ENV, "3")
    assert S.default_workers() == 3
    monkeypatch.setenv(S.THREADS_ENV, "x")
    with pytest.raises(S.SearchError):
        S.default_workers()


def test_summary_invariants():
    for name in ("example1", "example3"):
        _, summary = S.run(S.golden(name).job, workers=1)
        assert summary.bent == summary.regular
    _, summary = S.run(S.golden("example4").job, workers=1)
    assert summary.bent >= summary.regular
    assert summary.regular % 4 == 0


def test_golden_verdict_reports_variant():
    g = S.golden("example4")
    records, summary = S.run(g.job, workers=2)
    ok, lines = S.golden_verdict(g, records, summary)
    assert ok
    assert any("matched=x^104" in ln for ln in lines)


def test_unordered_pairs_counts_once():
    records = S.run(S.golden("example1").job, workers=1)[0]
    ordered = sum(r.bent for r in records)
    assert S.unordered_pairs(records, "a0", "a1") * 2 == ordered


def test_unknown_golden():
    with pytest.raises(S.SearchError):
        S.golden("example9")
