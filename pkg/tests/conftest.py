import pytest

from stageseat.booking import BookingService
from stageseat.catalog import CatalogService
from stageseat.config import Policy
from stageseat.core import Money, Role
from stageseat.db import Database
from stageseat.auth import hash_password

NOW = 1_700_000_000_000  # fixed "current time" for deterministic tests
HOUR = 3_600_000
DAY = 24 * HOUR


@pytest.fixture
def db():
    d = Database(":memory:")
    yield d
    d.close()


@pytest.fixture
def svc(db):
    return BookingService(db, Policy())


@pytest.fixture
def catalog(db):
    return CatalogService(db)


@pytest.fixture
def user_id(db):
    return db.insert_user("alice", "alice@example.com",
                          hash_password("pw-eight-chars", 1000),
                          Role.USER, {}, NOW)


@pytest.fixture
def movie_id(db):
    return db.insert_movie({"title": "Test Movie", "genres": {"drama"},
                            "release_date": "2024-01-01"})


@pytest.fixture
def venue_id(db):
    # 5x10 grid, capacity 50
    return db.insert_venue({"name": "Main Hall", "rows": 5, "cols": 10})


@pytest.fixture
def show(db, svc, movie_id, venue_id):
    return svc.create_show(movie_id, venue_id, NOW + DAY, Money(25000), now=NOW)
