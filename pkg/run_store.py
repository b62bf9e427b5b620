import json
import logging
import os
import sqlite3
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

logger = logging.getLogger(__name__)

LEDGER_NAME = "stabtherm_runs.db"


class RunStore:
    def __init__(self, output_dir: str):
        """Initialize the run ledger inside the output directory."""
        os.makedirs(output_dir, exist_ok=True)
        self.db_path = os.path.join(output_dir, LEDGER_NAME)
        self._init_database()

    def _init_database(self):
        """Create the runs table if it doesn't exist."""
        conn = sqlite3.connect(self.db_path)
        try:
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    subcommand TEXT,
                    config TEXT,
                    seed INTEGER,
                    exit_code INTEGER,
                    summary TEXT,
                    artifacts TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            ''')
            conn.commit()
        finally:
            conn.close()

    def _get_connection(self):
        """Get database connection."""
        return sqlite3.connect(self.db_path)

    def record_run(self, subcommand: str, config: Dict[str, Any], seed: Optional[int], exit_code: int,
                   summary: Any = None, artifacts: Optional[List[str]] = None) -> Tuple[bool, str]:
        """
        Append one CLI invocation to the ledger.

        Args:
            subcommand: CLI subcommand name
            config: Resolved run configuration
            seed: Seed used by randomized parts, if any
            exit_code: Process exit code
            summary: JSON-serializable result summary
            artifacts: Paths written by the run

        Returns:
            Tuple of (success: bool, message: str)
        """
        try:
            conn = self._get_connection()
            cursor = conn.cursor()
            cursor.execute('''
                INSERT INTO runs (subcommand, config, seed, exit_code, summary, artifacts)
                VALUES (?, ?, ?, ?, ?, ?)
            ''', (
                subcommand,
                json.dumps(config, sort_keys=True, default=str),
                seed,
                exit_code,
                json.dumps(summary, sort_keys=True, default=str),
                json.dumps(artifacts or []),
            ))
            run_id = cursor.lastrowid
            conn.commit()
            conn.close()
            return True, f"Run {run_id} recorded"
        except Exception as e:
            logger.warning("could not record run: %s", e)
            return False, f"Error recording run: {str(e)}"

    def get_runs(self) -> pd.DataFrame:
        """
        Get every recorded run, newest first.

        Returns:
            DataFrame of runs
        """
        try:
            conn = self._get_connection()
            df = pd.read_sql_query('''
                SELECT id, subcommand, seed, exit_code, config, artifacts, created_at
                FROM runs
                ORDER BY id DESC
            ''', conn)
            conn.close()
            return df
        except Exception as e:
            logger.warning("could not read the run ledger: %s", e)
            return pd.DataFrame()

    def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        """Get one run with its JSON columns decoded."""
        try:
            conn = self._get_connection()
            df = pd.read_sql_query('SELECT * FROM runs WHERE id = ?', conn, params=(run_id,))
            conn.close()
        except Exception as e:
            logger.warning("could not read run %s: %s", run_id, e)
            return None
        if df.empty:
            return None
        row = df.iloc[0].to_dict()
        for column in ("config", "summary", "artifacts"):
            row[column] = json.loads(row[column]) if row[column] else None
        return row

    def get_total_runs(self) -> int:
        try:
            conn = self._get_connection()
            cursor = conn.cursor()
            cursor.execute("SELECT COUNT(*) FROM runs")
            count = cursor.fetchone()[0]
            conn.close()
            return count
        except Exception:
            return 0

    def clear(self) -> Tuple[bool, str]:
        """Delete every recorded run."""
        try:
            conn = self._get_connection()
            cursor = conn.cursor()
            cursor.execute("DELETE FROM runs")
            conn.commit()
            conn.close()
            return True, "Run ledger cleared"
        except Exception as e:
            return False, f"Error clearing run ledger: {str(e)}"
