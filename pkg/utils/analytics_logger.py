# utils/analytics_logger.py
import csv
import logging
import os
from datetime import datetime
from typing import Any, Dict

import pandas as pd

logger = logging.getLogger(__name__)

RUN_HEADERS = ['timestamp', 'entry', 'passed', 'seconds', 'error']


class AnalyticsLogger:
    def __init__(self, base_dir: str = "analytics"):
        self.base_dir = base_dir
        self.runs_file = os.path.join(base_dir, "corpus_runs.csv")

        # Создаем директорию если её нет
        os.makedirs(base_dir, exist_ok=True)
        self._init_files()

    def _init_files(self):
        """Инициализация файла с заголовками"""
        if not os.path.exists(self.runs_file):
            with open(self.runs_file, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(RUN_HEADERS)

    def log_entry_run(self, entry: str, passed: bool, seconds: float, error: str = ""):
        """Запись одного прогона записи корпуса"""
        row = {
            'timestamp': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
            'entry': entry,
            'passed': bool(passed),
            'seconds': round(seconds, 6),
            'error': error,
        }
        with open(self.runs_file, 'a', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=RUN_HEADERS)
            writer.writerow(row)

    def _recent(self, days: int) -> pd.DataFrame:
        df = pd.read_csv(self.runs_file, keep_default_na=False)
        df['timestamp'] = pd.to_datetime(df['timestamp'])
        df['passed'] = df['passed'].astype(str).str.lower() == 'true'
        return df[df['timestamp'] > pd.Timestamp.now() - pd.Timedelta(days=days)]

    def get_corpus_statistics(self, days: int = 7) -> Dict[str, Any]:
        """
        Статистика прогонов корпуса за период
        Args:
            days: Глубина истории в днях
        Returns:
            Dict: Число прогонов, доля успешных, среднее время по записям, провалы по записям
        """
        try:
            recent_df = self._recent(days)
            if recent_df.empty:
                return {'total_runs': 0, 'pass_rate': None, 'mean_seconds': {}, 'failures': {}}

            failures = recent_df[~recent_df['passed']]
            return {
                'total_runs': int(len(recent_df)),
                'pass_rate': float(recent_df['passed'].mean()),
                'mean_seconds': {str(k): float(v) for k, v in
                                 recent_df.groupby('entry')['seconds'].mean().round(6).items()},
                'failures': {str(k): int(v) for k, v in failures['entry'].value_counts().items()},
            }
        except Exception as e:
            logger.error(f"Error reading corpus statistics: {e}", exc_info=True)
            return {'error': str(e)}

    def cleanup_old_data(self, days_to_keep: int = 30):
        """Очистка старых записей"""
        try:
            df = pd.read_csv(self.runs_file, keep_default_na=False)
            df['timestamp'] = pd.to_datetime(df['timestamp'])
            df = df[df['timestamp'] > pd.Timestamp.now() - pd.Timedelta(days=days_to_keep)]
            df['timestamp'] = df['timestamp'].dt.strftime('%Y-%m-%d %H:%M:%S')
            df.to_csv(self.runs_file, index=False, columns=RUN_HEADERS)
        except Exception as e:
            logger.error(f"Error during cleanup: {e}", exc_info=True)
