"""
Survey runner - batch execution of the finite-field torsion survey.

This module handles:
- Running trials in-process or in a process pool (seed + index per trial)
- CSV emission of the histogram and the per-trial outcomes
- Optional persistence of the run into the survey store
"""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import List, Optional, Tuple

from ..config import settings
from ..db import init_db, session_factory
from ..models.reports import SurveyHistogram
from ..models.survey import SurveyRun, SurveyTrial
from ..services.family_service import TrialOutcome, aggregate, evaluate_trial, validate_survey

__all__ = ["run_survey", "write_csv", "store_survey"]

log = logging.getLogger(__name__)


def _run_trials(k: int, p: int, n_max: int, trials: int, seed: int, sampler: str, workers: int) -> List[TrialOutcome]:
    if workers <= 1 or trials <= 1:
        return [evaluate_trial(k, p, n_max, seed + index, sampler, index) for index in range(trials)]
    outcomes: List[TrialOutcome] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(evaluate_trial, k, p, n_max, seed + index, sampler, index) for index in range(trials)
        ]
        for future in as_completed(futures):
            outcomes.append(future.result())
    # Completion order is arbitrary
    outcomes.sort(key=lambda outcome: outcome.index)
    return outcomes


def write_csv(path: str | Path, histogram: SurveyHistogram, outcomes: List[TrialOutcome]) -> None:
    """Two blocks: ``bucket,count`` rows, then one row per trial."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["bucket", "count"])
        for bucket, count in histogram.counts.items():
            w.writerow([bucket, count])
        w.writerow([])
        w.writerow(["index", "seed", "status", "order", "is_grid", "form"])
        for outcome in outcomes:
            w.writerow([
                outcome.index,
                outcome.seed,
                outcome.status,
                "" if outcome.order is None else outcome.order,
                "" if outcome.is_grid is None else int(outcome.is_grid),
                outcome.form,
            ])
    log.info("wrote survey CSV to %s", path)


def store_survey(url: str, histogram: SurveyHistogram, outcomes: List[TrialOutcome]) -> int:
    """Persist the run and its trials; returns the run id."""
    init_db(url)
    SessionLocal = session_factory(url)
    with SessionLocal() as db:
        run = SurveyRun(
            k=histogram.k,
            p=histogram.p,
            n_max=histogram.n_max,
            trials=histogram.trials,
            seed=histogram.seed,
            sampler=histogram.sampler,
            histogram=json.dumps(histogram.counts, sort_keys=True),
        )
        run.outcomes = [
            SurveyTrial(
                index=o.index,
                seed=o.seed,
                form=o.form,
                status=o.status,
                order=o.order,
                is_grid=o.is_grid,
                error=o.error[:512] if o.error else None,
            ) for o in outcomes
        ]
        db.add(run)
        db.commit()
        run_id = run.id
    log.info("stored survey run %d with %d trials", run_id, len(outcomes))
    return run_id


def run_survey(
    k: int,
    p: int,
    n_max: int,
    trials: int,
    seed: int = 0,
    sampler: str = "random",
    workers: Optional[int] = None,
    csv_path: Optional[str] = None,
    db_url: Optional[str] = None,
) -> Tuple[SurveyHistogram, List[TrialOutcome]]:
    validate_survey(k, p, n_max, trials)
    workers = settings.survey_workers if workers is None else workers
    log.info("survey k=%d p=%d n_max=%d trials=%d sampler=%s workers=%d", k, p, n_max, trials, sampler, workers)
    outcomes = _run_trials(k, p, n_max, trials, seed, sampler, workers)
    histogram = aggregate(k, p, n_max, seed, sampler, outcomes)
    if csv_path:
        write_csv(csv_path, histogram, outcomes)
    url = db_url if db_url is not None else settings.database_url
    if url:
        store_survey(url, histogram, outcomes)
    return histogram, outcomes
