"""Shared pytest fixtures."""
import os

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from matrix import Matrix
from models import Base

TESTDATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "testdata")


@pytest.fixture
def testdata():
    """Path builder for golden files"""
    return lambda *parts: os.path.join(TESTDATA_DIR, *parts)


@pytest.fixture
def worked_example():
    """The 2x3 matrix whose second step is [[1,0,3],[0,1,-1]]"""
    return Matrix([[2, 1, 5], [4, 5, 7]])


@pytest.fixture
def system_2x2():
    """A = [[2,1],[1,3]] with b = (5, 10), solved by x = (1, 3)"""
    return Matrix([[2, 1], [1, 3]]), [5, 10]


@pytest.fixture
def session_factory():
    """In-memory SQLite session factory, isolated per test"""
    engine = create_engine(
        'sqlite:///:memory:',
        connect_args={"check_same_thread": False},
    )
    Base.metadata.create_all(engine)
    factory = sessionmaker(bind=engine, autocommit=False, autoflush=False)
    yield factory
    engine.dispose()


@pytest.fixture
def test_db(session_factory):
    """Session on an empty in-memory database"""
    session = session_factory()
    yield session
    session.close()
