from datetime import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, Index, Integer, String, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from config import settings

Base = declarative_base()


class VerificationRun(Base):
    """One recorded self-check run"""
    __tablename__ = 'verification_runs'
    __table_args__ = (
        Index('ix_verification_runs_created_at', 'created_at'),
        Index('ix_verification_runs_passed', 'passed'),
    )

    id = Column(Integer, primary_key=True, autoincrement=True)
    source = Column(String(200), nullable=False)
    seed = Column(Integer, nullable=True)
    matrices_checked = Column(Integer, nullable=False, default=0)
    cells_checked = Column(Integer, nullable=False, default=0)
    discrepancies = Column(Integer, nullable=False, default=0)
    non_exact_divisions = Column(Integer, nullable=False, default=0)
    passed = Column(Boolean, nullable=False)
    duration_ms = Column(Float, nullable=False)
    created_at = Column(DateTime, default=datetime.now)


is_sqlite = settings.database_url.startswith('sqlite')
connect_args = {"check_same_thread": False} if is_sqlite else {}

# Connecting is lazy: nothing touches the database until a run is recorded.
engine = create_engine(settings.database_url, connect_args=connect_args)
SessionLocal = sessionmaker(bind=engine, autocommit=False, autoflush=False)


def init_db(bind=None):
    Base.metadata.create_all(bind or engine)
