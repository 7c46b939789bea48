import logging
import os
import sys
from datetime import datetime

from config import LoggingConfig


def setup_logger(config: LoggingConfig) -> logging.Logger:
    """
    Настройка корневого логгера
    Отчеты идут в stdout, поэтому консольный вывод логов направлен в stderr
    Args:
        config: Конфигурация логирования
    Returns:
        Настроенный логгер
    """
    formatter = logging.Formatter(
        config.format,
        datefmt=config.date_format
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(config.level)

    logger = logging.getLogger()
    logger.setLevel(config.level)

    # Удаляем существующие обработчики если они есть
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    logger.addHandler(console_handler)

    if config.log_dir:
        os.makedirs(config.log_dir, exist_ok=True)
        current_date = datetime.now().strftime('%Y-%m-%d')
        log_file = os.path.join(config.log_dir, f'cremona_{current_date}.log')
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        file_handler.setLevel(config.level)
        logger.addHandler(file_handler)
        logger.info(f"Logger initialized. Log file: {log_file}")

    return logger

