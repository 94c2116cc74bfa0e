import csv
from typing import List, Sequence

import pandas as pd

from edcert.models.bound_report import EdBoundReport
from edcert.utils.logger import get_logger
from edcert.utils.report import fraction_text

logger = get_logger(__name__)

BATCH_HEADER = ['instance', 'name', 'degree', 'kernel', 'lower', 'upper', 'exact', 'status']
WITNESS_HEADER = ['subvariety', 'dim', 'prime', 'rank_p', 'value']


def read_instance_paths(csv_path: str) -> List[str]:
    """Read instance file paths from CSV file.

    Expects a CSV with an 'instance' column.
    """
    try:
        df = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
        if 'instance' not in df.columns:
            raise ValueError("CSV must contain 'instance' column")

        paths = [path.strip() for path in df['instance'].tolist() if path.strip()]
        logger.info(f"Read {len(paths)} instance paths from {csv_path}")
        return paths

    except Exception as e:
        logger.error(f"Failed to read CSV {csv_path}: {e}")
        raise


def _cell(value) -> str:
    return '' if value is None else str(value)


def write_batch_results(rows: Sequence[dict], csv_path: str) -> None:
    """Write one row per evaluated instance."""
    try:
        with open(csv_path, 'w', newline='', encoding='utf-8') as csv_file:
            writer = csv.writer(csv_file, quoting=csv.QUOTE_ALL)
            writer.writerow(BATCH_HEADER)
            for row in rows:
                writer.writerow([_cell(row.get(column)).replace('\n', ' ') for column in BATCH_HEADER])

        logger.info(f"Wrote {len(rows)} batch results to {csv_path}")

    except Exception as e:
        logger.error(f"Failed to write CSV {csv_path}: {e}")
        raise


def write_witness_table(report: EdBoundReport, csv_path: str) -> None:
    """Write the per-(B, p) lower-bound table; empty body when the lower bound was refused."""
    try:
        with open(csv_path, 'w', newline='', encoding='utf-8') as csv_file:
            writer = csv.writer(csv_file, quoting=csv.QUOTE_ALL)
            writer.writerow(WITNESS_HEADER)
            for entry in report.lower_witness:
                writer.writerow([
                    entry.subvariety,
                    entry.dim,
                    _cell(entry.prime),
                    entry.rank_p,
                    fraction_text(entry.value),
                ])

        logger.info(
            f"Wrote {len(report.lower_witness)} witness rows to {csv_path}",
            extra={'instance': report.instance},
        )

    except Exception as e:
        logger.error(f"Failed to write CSV {csv_path}: {e}")
        raise
