import pytest

from monopoly_lab.config import AppConfig
from monopoly_lab.data import dao
from monopoly_lab.data.db import get_engine, get_session
from monopoly_lab.domain.graph import cartesian_product, complete, cycle


@pytest.fixture
def engine():
    return get_engine(":memory:")


@pytest.fixture
def session(engine):
    session = get_session(engine)
    dao.init_db(session)
    yield session
    session.close()


@pytest.fixture
def config(tmp_path):
    return AppConfig(database_path=tmp_path / "lab.db", checks_random_graphs=3, checks_max_dimension=8)


@pytest.fixture
def c3k3():
    return cartesian_product(cycle(3), complete(3))


@pytest.fixture
def k3k3():
    return cartesian_product(complete(3), complete(3))
