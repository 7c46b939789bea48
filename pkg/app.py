import argparse
import asyncio
import logging
import sys
from string import Template
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from config import Config, load_config
from cremona.errors import LabError, ParseError, UsageError, VerificationError
from cremona.report_formatter import ReportTemplates, exit_code, format_report, inputs_digest
from handlers import LabHandlers
from utils.logger import setup_logger

# не попадают в отчет: от них не зависит результат
UNREPORTED_ARGS = ("command", "workers")


class LogTemplates:
    APP_START = Template("Command $name started")
    COMMAND_DONE = Template("Command $name finished with status $status")
    COMMAND_ERROR = Template("Command $name failed: $error")
    APP_CRASH = Template("Application crashed: $error")


class LabArgumentParser(argparse.ArgumentParser):
    """argparse без sys.exit на ошибке разбора: ошибка уходит в отчет"""

    def error(self, message: str):
        raise UsageError(message)


def positive_int(text: str) -> int:
    """Тип argparse для счетчиков: целое >= 1"""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> LabArgumentParser:
    """
    Описание подкоманд и флагов
    Returns:
        LabArgumentParser: Разборщик командной строки
    """
    parser = LabArgumentParser(prog="cremona-lab", description="Exact toolkit for Cremona group computations")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    def with_file(name: str, help_text: str, required: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("file", nargs=None if required else "?", help="map file")
        sub.add_argument("-m", "--map", action="append", help="map name (repeatable)")
        return sub

    sub = with_file("parse", "load a map file or a single polynomial", required=False)
    sub.add_argument("--poly")
    sub.add_argument("-n", type=int)

    sub = with_file("compose", "G∘F of two maps: -m G -m F")
    sub.add_argument("--normalize", action="store_true")

    sub = with_file("rho", "exponent matrix of a G-form map")
    sub.add_argument("--inverse", metavar="NAME")

    with_file("gform", "G-form data or null")

    sub = with_file("predict-leading", "leading pair of h(f) without expansion")
    sub.add_argument("--poly", required=True)

    sub = with_file("newton", "Newton body of the linear system of a map, or of --poly", required=False)
    sub.add_argument("--level", type=int)
    sub.add_argument("--reading", choices=("valuation", "span"), default="valuation")
    sub.add_argument("--poly")
    sub.add_argument("-n", type=int)

    sub = subparsers.add_parser("volume", help="normalized volume of the hull of --points")
    sub.add_argument("--points", required=True)

    sub = with_file("contracts", "image of the hyperplane X_i = 0 if it is a point")
    sub.add_argument("--hyperplane", type=int, required=True)
    sub.add_argument("--attempts", type=positive_int)

    sub = with_file("restrict", "components restricted to X_i = 0")
    sub.add_argument("--hyperplane", type=int, required=True)

    sub = with_file("jacobian", "Jacobian determinant of an affine map")
    sub.add_argument("--inverse", metavar="NAME")

    sub = subparsers.add_parser("freegroup", help="no-relation certificate for reduced words")
    sub.add_argument("--len", type=int)
    sub.add_argument("--gens", choices=("sl2", "rho"), default="sl2")
    sub.add_argument("-n", type=int)
    sub.add_argument("--workers", type=positive_int)

    sub = with_file("conjugate", "action of a word: W∘f∘W⁻¹")
    sub.add_argument("--word", required=True)

    sub = subparsers.add_parser("diag-classify", help="orbit of a diagonal map under words")
    sub.add_argument("--lambdas")
    sub.add_argument("--symbolic", choices=("all_equal", "generic"))
    sub.add_argument("-n", type=int)
    sub.add_argument("--len", type=int)

    sub = subparsers.add_parser("corpus", help="run the bundled witness corpus")
    sub.add_argument("--entry", action="append", help="entry name (repeatable)")
    sub.add_argument("--workers", type=positive_int)

    sub = subparsers.add_parser("analytics", help="history of corpus runs from ANALYTICS_DIR")
    sub.add_argument("--days", type=positive_int, default=7)
    sub.add_argument("--keep-days", type=positive_int, help="drop rows older than this first")

    return parser


def classify_error(error: LabError) -> str:
    """Статус отчета по типу исключения"""
    if isinstance(error, (ParseError, UsageError)):
        return ReportTemplates.STATUS_USAGE
    if isinstance(error, VerificationError):
        return ReportTemplates.STATUS_VERIFICATION
    return ReportTemplates.STATUS_PRECONDITION


def error_payload(error: LabError) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"error": str(error), "type": type(error).__name__}
    if isinstance(error, ParseError):
        payload["line"] = error.line
        payload["column"] = error.column
    return payload


class CremonaLabApp:
    def __init__(self, config: Optional[Config] = None, stdout: Optional[TextIO] = None):
        """
        Инициализация приложения
        Args:
            config: Конфигурация приложения. Если не указана, загружается из переменных окружения
            stdout: Поток для отчета (по умолчанию sys.stdout)
        """
        self.config = config or load_config()
        self.logger = setup_logger(self.config.logging)
        self.stdout = stdout
        self.parser = build_parser()
        self.handlers = LabHandlers(self.config)

    def _arguments(self, args: argparse.Namespace) -> Tuple[str, Dict[str, Any], List[str]]:
        values = vars(args)
        arguments = {k: v for k, v in sorted(values.items()) if k not in UNREPORTED_ARGS and v is not None}
        files = [values["file"]] if values.get("file") else []
        return values["command"], arguments, files

    async def run(self, argv: Sequence[str]) -> int:
        """
        Выполнение одной команды
        Args:
            argv: Аргументы командной строки без имени программы
        Returns:
            int: Код выхода (0, 1, 2, 3)
        """
        argv = list(argv)
        name, arguments, files = (argv[0] if argv else ""), {"argv": argv}, []
        try:
            args = self.parser.parse_args(argv)
            name, arguments, files = self._arguments(args)
            self.logger.info(LogTemplates.APP_START.substitute(name=name))
            outcome = await self.handlers.dispatch(args)
            result = outcome.payload
            status = ReportTemplates.STATUS_OK if outcome.passed else ReportTemplates.STATUS_VERIFICATION
        except LabError as e:
            status = classify_error(e)
            self.logger.warning(LogTemplates.COMMAND_ERROR.substitute(name=name, error=str(e)))
            result = error_payload(e)

        report = format_report(
            name, arguments, inputs_digest(arguments, files), result, status,
            indent=self.config.lab.report_indent,
        )
        stream = self.stdout or sys.stdout
        stream.write(report + "\n")
        stream.flush()
        self.logger.info(LogTemplates.COMMAND_DONE.substitute(name=name, status=status))
        return exit_code(status)


def main(argv: Optional[Sequence[str]] = None, config: Optional[Config] = None) -> int:
    app = CremonaLabApp(config)
    return asyncio.run(app.run(sys.argv[1:] if argv is None else argv))


if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.info("Application stopped by user")
        sys.exit(130)
    except Exception as e:
        logging.error(LogTemplates.APP_CRASH.substitute(error=str(e)), exc_info=True)
        sys.exit(4)
