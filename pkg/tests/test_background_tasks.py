import asyncio

import pytest

from background_tasks import CorpusTasks, summarize
from config import LabConfig
from cremona import corpus
from cremona.errors import UsageError

SMALL = LabConfig(workers=2, corpus_word_length=6, rho_word_length=4, newton_level=2)


@pytest.fixture
def broken_entry(monkeypatch):
    def broken(config):
        raise RuntimeError("boom")

    monkeypatch.setitem(corpus.CORPUS, "zz_broken", broken)
    return "zz_broken"


def test_run_selected_entries():
    tasks = CorpusTasks(SMALL)
    results = asyncio.run(tasks.run(["sl2_projection", "pingpong"]))
    assert list(results) == ["pingpong", "sl2_projection"]
    assert all(payload["passed"] for payload in results.values())
    assert not tasks.is_running


def test_unknown_entry():
    with pytest.raises(UsageError):
        asyncio.run(CorpusTasks(SMALL).run(["nosuch"]))


def test_failing_entry_is_reported(broken_entry):
    results = asyncio.run(CorpusTasks(SMALL).run([broken_entry]))
    assert results[broken_entry] == {"passed": False, "error": "RuntimeError: boom"}
    summary = summarize(results)
    assert summary["failed"] == [broken_entry]
    assert summary["passed"] == 0


def test_status_after_run():
    async def scenario():
        tasks = CorpusTasks(SMALL)
        await tasks.run(["pingpong"])
        status = await tasks.get_status()
        await tasks.stop()
        return status, tasks.tasks

    status, remaining = asyncio.run(scenario())
    assert status["tasks"] == {"pingpong": "done"}
    assert status["completed"] == 1
    assert status["failed"] == []
    assert remaining == {}


def test_analytics_rows(tmp_path, broken_entry):
    tasks = CorpusTasks(SMALL, analytics_dir=str(tmp_path))
    asyncio.run(tasks.run(["pingpong", broken_entry]))
    stats = tasks.analytics_logger.get_corpus_statistics()
    assert stats["total_runs"] == 2
    assert stats["pass_rate"] == 0.5
    assert stats["failures"] == {broken_entry: 1}


def test_summarize():
    summary = summarize({"a": {"passed": True}, "b": {"passed": False}})
    assert summary["total"] == 2
    assert summary["passed"] == 1
    assert summary["failed"] == ["b"]
