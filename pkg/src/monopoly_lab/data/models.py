from __future__ import annotations

import datetime as dt
from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String, UniqueConstraint
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class SolveRecord(Base):
    __tablename__ = "solves"
    __table_args__ = (UniqueConstraint("fingerprint", "kind", name="uq_solve_instance"),)

    id = Column(Integer, primary_key=True)
    fingerprint = Column(String, nullable=False, index=True)
    kind = Column(String, nullable=False)  # monopoly | dynamo
    graph_name = Column(String, nullable=True)
    vertex_count = Column(Integer, nullable=False)
    status = Column(String, nullable=False, default="solved")
    optimum = Column(Integer, nullable=True)
    witness = Column(String, nullable=True)  # comma-separated vertex ids
    explored = Column(Integer, nullable=False, default=0)
    elapsed = Column(Float, nullable=False, default=0.0)
    created_at = Column(DateTime, default=dt.datetime.utcnow, nullable=False)

    @property
    def witness_ids(self) -> list[int]:
        return [int(v) for v in self.witness.split(",")] if self.witness else []


class CheckRun(Base):
    __tablename__ = "check_runs"

    id = Column(Integer, primary_key=True)
    bundle = Column(String, nullable=False, index=True)
    seed = Column(Integer, nullable=False)
    passed = Column(Integer, nullable=False, default=0)
    failed = Column(Integer, nullable=False, default=0)
    started_at = Column(DateTime, default=dt.datetime.utcnow, nullable=False)

    outcomes = relationship("CheckOutcome", back_populates="run", cascade="all, delete-orphan")


class CheckOutcome(Base):
    __tablename__ = "check_outcomes"

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("check_runs.id"), nullable=False, index=True)
    instance = Column(String, nullable=False)
    passed = Column(Boolean, nullable=False)
    detail = Column(String, nullable=True)

    run = relationship("CheckRun", back_populates="outcomes")
