from dataclasses import dataclass, field
from typing import Optional

from environs import Env


@dataclass
class LabConfig:
    workers: int = 4
    contraction_attempts: int = 1000
    corpus_word_length: int = 10
    rho_word_length: int = 8
    newton_level: int = 3
    classify_word_length: int = 2
    report_indent: int = 2

    def __post_init__(self):
        for name in ("workers", "contraction_attempts", "corpus_word_length",
                     "rho_word_length", "newton_level", "classify_word_length"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.report_indent < 0:
            raise ValueError(f"report_indent must be >= 0, got {self.report_indent}")


@dataclass
class LoggingConfig:
    level: str = "WARNING"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    date_format: str = "%Y-%m-%d %H:%M:%S"
    log_dir: str = ""
    analytics_dir: str = ""


@dataclass
class Config:
    lab: LabConfig = field(default_factory=LabConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)


def load_config(path: Optional[str] = None) -> Config:
    """
    Загрузка конфигурации из переменных окружения или .env файла
    Args:
        path: Путь к .env файлу
    Returns:
        Config: Объект конфигурации
    """
    env = Env()
    env.read_env(path)

    return Config(
        lab=LabConfig(
            workers=env.int("LAB_WORKERS", 4),
            contraction_attempts=env.int("LAB_CONTRACTION_ATTEMPTS", 1000),
            corpus_word_length=env.int("LAB_CORPUS_WORD_LENGTH", 10),
            rho_word_length=env.int("LAB_RHO_WORD_LENGTH", 8),
            newton_level=env.int("LAB_NEWTON_LEVEL", 3),
            classify_word_length=env.int("LAB_CLASSIFY_WORD_LENGTH", 2),
            report_indent=env.int("LAB_REPORT_INDENT", 2),
        ),
        logging=LoggingConfig(
            level=env("LOG_LEVEL", "WARNING"),
            format=env("LOG_FORMAT",
                       "%(asctime)s - %(name)s - %(levelname)s - %(message)s"),
            date_format=env("LOG_DATE_FORMAT", "%Y-%m-%d %H:%M:%S"),
            log_dir=env("LOG_DIR", ""),
            analytics_dir=env("ANALYTICS_DIR", ""),
        )
    )
