from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool


def get_engine(db_path: Path | str | None = None) -> Engine:
    """
    Create a SQLAlchemy engine for the local SQLite store. ":memory:" gives a throwaway database.
    """
    if str(db_path) == ":memory:":
        return create_engine(
            "sqlite://",
            echo=False,
            future=True,
            poolclass=StaticPool,
            connect_args={"check_same_thread": False},
        )
    uri = f"sqlite:///{Path(db_path or 'monopoly_lab.db').resolve()}"
    return create_engine(uri, echo=False, future=True)


def get_session(engine: Engine | None = None) -> Session:
    engine = engine or get_engine()
    SessionLocal = sessionmaker(bind=engine, autoflush=False, autocommit=False, future=True)
    return SessionLocal()


@contextmanager
def session_scope(engine: Engine | None = None) -> Iterator[Session]:
    """
    Commits on success, rolls back on error.
    """
    session = get_session(engine)
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
