from __future__ import annotations

from datetime import datetime, timezone

from sqlalchemy import Boolean, DateTime, ForeignKey, Integer, String, Text
from sqlalchemy.orm import Mapped, mapped_column, relationship

from ..db import Base


class SurveyRun(Base):
    __tablename__ = "survey_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    k: Mapped[int] = mapped_column(Integer, nullable=False)
    p: Mapped[int] = mapped_column(Integer, nullable=False)
    n_max: Mapped[int] = mapped_column(Integer, nullable=False)
    trials: Mapped[int] = mapped_column(Integer, nullable=False)
    seed: Mapped[int] = mapped_column(Integer, nullable=False)
    sampler: Mapped[str] = mapped_column(String(32), nullable=False)
    # JSON-encoded histogram, keys as in the report
    histogram: Mapped[str] = mapped_column(Text, nullable=False, default="{}")

    created_at: Mapped[datetime] = mapped_column(DateTime, default=lambda: datetime.now(timezone.utc))

    outcomes: Mapped[list["SurveyTrial"]] = relationship(back_populates="run", cascade="all, delete-orphan",
                                                         order_by="SurveyTrial.index")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "k": self.k,
            "p": self.p,
            "n_max": self.n_max,
            "trials": self.trials,
            "seed": self.seed,
            "sampler": self.sampler,
            "histogram": self.histogram,
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }


class SurveyTrial(Base):
    __tablename__ = "survey_trials"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("survey_runs.id"), nullable=False)
    index: Mapped[int] = mapped_column(Integer, nullable=False)
    seed: Mapped[int] = mapped_column(Integer, nullable=False)
    form: Mapped[str] = mapped_column(Text, nullable=False)
    status: Mapped[str] = mapped_column(String(16), nullable=False)
    order: Mapped[int | None] = mapped_column(Integer, nullable=True)
    is_grid: Mapped[bool | None] = mapped_column(Boolean, nullable=True)
    error: Mapped[str | None] = mapped_column(String(512), nullable=True)

    run: Mapped[SurveyRun] = relationship(back_populates="outcomes")
