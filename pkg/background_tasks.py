import asyncio
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from string import Template
from typing import Any, Dict, Iterable, List, Optional

from config import LabConfig
from cremona.corpus import entry_names, run_entry
from cremona.errors import UsageError
from utils.analytics_logger import AnalyticsLogger

logger = logging.getLogger(__name__)


class LogTemplates:
    TASK_STOPPED = Template("Task $task_name stopped")
    ENTRY_START = Template("Running corpus entry: $name")
    ENTRY_FAILED = Template("Corpus entry $name failed: $error")
    ENTRY_ERROR = Template("Error in corpus entry $name: $error")
    CYCLE_TIME = Template("Corpus run of $count entries completed in $time seconds")
    ANALYTICS_ERROR = Template("Error writing analytics row for $name: $error")
    STATUS_ERROR = Template("Error getting status: $error")


class CorpusTasks:
    def __init__(self, config: LabConfig, analytics_dir: str = ""):
        """
        Инициализация прогона корпуса
        Args:
            config: Параметры лаборатории (число потоков, длины слов, уровни)
            analytics_dir: Каталог CSV-аналитики, пустая строка отключает запись
        """
        self.config = config
        self.tasks: Dict[str, asyncio.Task] = {}
        self.results: Dict[str, Dict[str, Any]] = {}
        self.is_running = False
        self.executor: Optional[ThreadPoolExecutor] = None
        self.analytics_logger = AnalyticsLogger(analytics_dir) if analytics_dir else None

    def _run_entry(self, name: str) -> Dict[str, Any]:
        """Синхронный прогон одной записи в потоке исполнителя"""
        logger.debug(LogTemplates.ENTRY_START.substitute(name=name))
        started = time.perf_counter()
        error = ""
        try:
            payload = run_entry(name, self.config)
        except Exception as e:
            logger.error(LogTemplates.ENTRY_ERROR.substitute(name=name, error=str(e)), exc_info=True)
            error = f"{type(e).__name__}: {e}"
            payload = {"passed": False, "error": error}
        seconds = time.perf_counter() - started

        if not payload["passed"] and not error:
            logger.warning(LogTemplates.ENTRY_FAILED.substitute(name=name, error="property does not hold"))
        if self.analytics_logger is not None:
            try:
                self.analytics_logger.log_entry_run(name, payload["passed"], seconds, error)
            except OSError as e:
                logger.error(LogTemplates.ANALYTICS_ERROR.substitute(name=name, error=str(e)))
        return payload

    async def start(self, names: Optional[Iterable[str]] = None):
        """
        Запуск записей корпуса как задач asyncio
        Args:
            names: Имена записей; по умолчанию весь корпус
        """
        if self.is_running:
            return
        selected = sorted(set(names)) if names else entry_names()
        unknown = [name for name in selected if name not in entry_names()]
        if unknown:
            raise UsageError(f"unknown corpus entries: {', '.join(unknown)}")

        self.is_running = True
        self.results.clear()
        self.tasks.clear()
        self.executor = ThreadPoolExecutor(max_workers=self.config.workers)
        loop = asyncio.get_running_loop()
        for name in selected:
            self.tasks[name] = asyncio.ensure_future(
                loop.run_in_executor(self.executor, self._run_entry, name)
            )
        logger.info(f"Corpus tasks started: {len(selected)} entries, {self.config.workers} workers")

    async def wait(self) -> Dict[str, Dict[str, Any]]:
        """
        Ожидание всех задач
        Returns:
            Dict: Результаты в лексикографическом порядке имен
        """
        try:
            payloads = await asyncio.gather(*self.tasks.values())
            self.results = dict(sorted(zip(self.tasks.keys(), payloads)))
        finally:
            self.is_running = False
            if self.executor is not None:
                self.executor.shutdown(wait=True)
                self.executor = None
        return self.results

    async def run(self, names: Optional[Iterable[str]] = None) -> Dict[str, Dict[str, Any]]:
        """Полный прогон: start + wait"""
        started = time.perf_counter()
        await self.start(names)
        results = await self.wait()
        logger.info(LogTemplates.CYCLE_TIME.substitute(
            count=len(results),
            time=round(time.perf_counter() - started, 3)
        ))
        return results

    async def stop(self):
        """Остановка незавершенных задач"""
        self.is_running = False
        for task_name, task in self.tasks.items():
            if not task.done():
                task.cancel()
                try:
                    await task
                except asyncio.CancelledError:
                    pass
                logger.info(LogTemplates.TASK_STOPPED.substitute(task_name=task_name))
        if self.executor is not None:
            self.executor.shutdown(wait=False, cancel_futures=True)
            self.executor = None
        self.tasks.clear()
        logger.info("All corpus tasks stopped")

    async def get_status(self) -> Dict[str, Any]:
        """
        Получение статуса задач
        Returns:
            Dict: Статус каждой записи и счетчики
        """
        try:
            status = {
                name: "done" if task.done() and not task.cancelled() else
                ("cancelled" if task.cancelled() else "running")
                for name, task in sorted(self.tasks.items())
            }
            return {
                "is_running": self.is_running,
                "tasks": status,
                "completed": sum(1 for s in status.values() if s == "done"),
                "failed": sorted(name for name, payload in self.results.items() if not payload["passed"]),
            }
        except Exception as e:
            logger.error(LogTemplates.STATUS_ERROR.substitute(error=str(e)))
            return {"error": str(e)}


def summarize(results: Dict[str, Dict[str, Any]]) -> Dict[str, Any]:
    """Сводка прогона для отчета: без времени исполнения"""
    failed: List[str] = [name for name, payload in results.items() if not payload["passed"]]
    return {
        "entries": results,
        "total": len(results),
        "passed": len(results) - len(failed),
        "failed": failed,
    }
