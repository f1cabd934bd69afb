from __future__ import annotations

from functools import lru_cache

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker

from .config import settings

__all__ = ["Base", "get_engine", "session_factory", "init_db"]


class Base(DeclarativeBase):
    pass


@lru_cache(maxsize=None)
def get_engine(url: str) -> Engine:
    return create_engine(
        url,
        connect_args={"check_same_thread": False} if url.startswith("sqlite") else {},
    )


def session_factory(url: str | None = None) -> sessionmaker[Session]:
    """Session factory bound to ``url`` (``DATABASE_URL`` when omitted)."""
    resolved = url or settings.database_url
    if not resolved:
        raise ValueError("no database URL configured")
    return sessionmaker(bind=get_engine(resolved), autoflush=False, autocommit=False)


def init_db(url: str) -> None:
    # Import models so they register with Base before create_all
    from .models import survey  # noqa: F401
    Base.metadata.create_all(bind=get_engine(url))
