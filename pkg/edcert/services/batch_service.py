from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from edcert.errors import EdCertError
from edcert.services.edim import DEFAULT_WORKERS, BoundService
from edcert.utils.instance_loader import load_instance
from edcert.utils.logger import get_logger

logger = get_logger(__name__)


class BatchService:
    """Evaluates bounds for many instance files; a failing file never aborts the batch."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, workers or DEFAULT_WORKERS)
        # rows run concurrently, so each row evaluates its subvarieties serially
        self.bound_service = BoundService(workers=1)

    @dataclass
    class _Outcome:
        index: int
        path: str
        row: Dict[str, object] = field(default_factory=dict)

    def _evaluate_single(self, index: int, path: str) -> "BatchService._Outcome":
        try:
            _, isogeny = load_instance(path)
            report = self.bound_service.report(isogeny)
            row = {
                'instance': path,
                'name': report.instance,
                'degree': report.degree,
                'kernel': str(report.kernel),
                'lower': report.lower,
                'upper': report.upper,
                'exact': report.exact,
                'status': 'ok',
            }
        except EdCertError as exc:
            logger.warning(f"Instance {path} failed: {exc}", extra={'instance': path})
            row = {'instance': path, 'status': f"error: {exc}"}
        except Exception as exc:
            logger.error(f"Instance {path} crashed: {exc}", extra={'instance': path}, exc_info=True)
            row = {'instance': path, 'status': f"error: internal {type(exc).__name__}: {exc}"}
        return self._Outcome(index=index, path=path, row=row)

    def evaluate(self, paths: Sequence[str]) -> List[Dict[str, object]]:
        """One result row per path, in input order."""
        outcomes: List[BatchService._Outcome] = []
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            future_map = {
                executor.submit(self._evaluate_single, idx, path): idx
                for idx, path in enumerate(paths)
            }
            for future in as_completed(future_map):
                outcomes.append(future.result())

        rows = [outcome.row for outcome in sorted(outcomes, key=lambda item: item.index)]
        failed = sum(1 for row in rows if row['status'] != 'ok')
        logger.info(f"Batch evaluated {len(rows)} instances, {failed} failed")
        return rows
