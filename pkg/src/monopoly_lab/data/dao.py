from __future__ import annotations

import logging
from typing import Iterable

from sqlalchemy import select
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session

from .models import CheckOutcome, CheckRun, SolveRecord

logger = logging.getLogger(__name__)


def init_db(session: Session) -> None:
    """
    Create all tables if they do not exist.
    """
    from .models import Base

    Base.metadata.create_all(session.get_bind())


def find_solve(session: Session, fingerprint: str, kind: str) -> SolveRecord | None:
    stmt = select(SolveRecord).where(SolveRecord.fingerprint == fingerprint, SolveRecord.kind == kind)
    return session.scalar(stmt)


def save_solve(
    session: Session,
    fingerprint: str,
    kind: str,
    optimum: int,
    witness: Iterable[int],
    explored: int,
    elapsed: float,
    vertex_count: int,
    graph_name: str | None = None,
) -> SolveRecord:
    """
    Store a solved instance. An existing record for the same instance wins.
    """
    record = SolveRecord(
        fingerprint=fingerprint,
        kind=kind,
        graph_name=graph_name,
        vertex_count=vertex_count,
        status="solved",
        optimum=optimum,
        witness=",".join(str(v) for v in sorted(witness)),
        explored=explored,
        elapsed=elapsed,
    )
    session.add(record)
    try:
        session.commit()
    except IntegrityError:
        session.rollback()
        logger.debug("solve %s/%s already cached", fingerprint[:12], kind)
        record = find_solve(session, fingerprint, kind)
    return record


def list_solves(session: Session, limit: int = 100) -> list[SolveRecord]:
    stmt = select(SolveRecord).order_by(SolveRecord.created_at.desc(), SolveRecord.id.desc()).limit(limit)
    return list(session.scalars(stmt))


def record_check_run(
    session: Session,
    bundle: str,
    seed: int,
    outcomes: Iterable[tuple[str, bool, str]],
) -> CheckRun:
    run = CheckRun(bundle=bundle, seed=seed)
    for instance, passed, detail in outcomes:
        run.outcomes.append(CheckOutcome(instance=instance, passed=passed, detail=detail or None))
    run.passed = sum(1 for o in run.outcomes if o.passed)
    run.failed = len(run.outcomes) - run.passed
    session.add(run)
    session.commit()
    return run


def list_check_runs(session: Session, bundle: str | None = None, limit: int = 50) -> list[CheckRun]:
    stmt = select(CheckRun)
    if bundle:
        stmt = stmt.where(CheckRun.bundle == bundle)
    stmt = stmt.order_by(CheckRun.started_at.desc(), CheckRun.id.desc()).limit(limit)
    return list(session.scalars(stmt))


def outcomes_for_run(session: Session, run_id: int, failed_only: bool = False) -> list[CheckOutcome]:
    stmt = select(CheckOutcome).where(CheckOutcome.run_id == run_id)
    if failed_only:
        stmt = stmt.where(CheckOutcome.passed.is_(False))
    return list(session.scalars(stmt.order_by(CheckOutcome.id)))
