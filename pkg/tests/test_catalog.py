import datetime as dt
import random

import pytest

from stageseat.catalog import CatalogService, SearchQuery, RECOMMEND_WEIGHTS
from stageseat.core import CoinReason, Money, Role, SeatId
from stageseat.auth import hash_password
from stageseat.errors import InvalidQuery, UnknownShow, UnknownVenue
from conftest import DAY, NOW

GENRE_POOL = ["drama", "comedy", "thriller", "action", "romance"]
LANG_POOL = ["english", "hindi", "tamil"]


def seed_catalog(db, n_movies=100, seed=99):
    """Deterministic movie catalog with ratings and some bookings."""
    rng = random.Random(seed)
    uid = db.insert_user("critic", "critic@example.com",
                         hash_password("password-1", 500), Role.USER, {}, NOW)
    vid = db.insert_venue({"name": "Hall", "rows": 10, "cols": 10})
    movie_ids = []
    for i in range(n_movies):
        mid = db.insert_movie({
            "title": f"Movie {i} {'Godfather' if i % 17 == 0 else 'Story'}",
            "description": f"plot number {i}",
            "genres": set(rng.sample(GENRE_POOL, rng.randint(1, 3))),
            "director": f"Director {i % 7}",
            "cast": [f"Actor {i % 11}", f"Actor {i % 13}"],
            "language": rng.choice(LANG_POOL),
            "release_date": (dt.date(2020, 1, 1)
                             + dt.timedelta(days=rng.randrange(1500))).isoformat(),
        })
        movie_ids.append(mid)
    raters = [db.insert_user(f"r{i}", f"r{i}@example.com", "x", Role.USER, {}, NOW)
              for i in range(5)]
    for mid in movie_ids:
        if rng.random() < 0.7:
            for r in rng.sample(raters, rng.randint(1, 5)):
                with db.transaction() as conn:
                    db.insert_review(conn, r, mid, rng.randint(1, 5), "",
                                     rng.uniform(-1, 1), "neutral", NOW)
    return uid, vid, movie_ids


def brute_force_search(db, q: SearchQuery):
    """Separate filter+sort written straight from the matching rules."""
    from statistics import mean

    reviews = db.list_reviews()
    ratings = {}
    for r in reviews:
        ratings.setdefault(r.movie_id, []).append(r.rating)
    show_movie = {s.show_id: s.movie_id for s in db.list_shows()}
    popularity = {}
    for b in db.list_bookings():
        if b.status.value == "active" and b.show_id in show_movie:
            mid = show_movie[b.show_id]
            popularity[mid] = popularity.get(mid, 0) + 1

    result = []
    for m in db.list_movies():
        if q.text:
            fields = [m.title, m.director, m.description] + m.cast
            if not any(q.text.lower() in f.lower() for f in fields):
                continue
        if q.genre and q.genre not in m.genres:
            continue
        if q.language and m.language.lower() != q.language.lower():
            continue
        if q.date_from and m.release_date < q.date_from:
            continue
        if q.date_to and m.release_date > q.date_to:
            continue
        if q.min_rating is not None:
            if m.movie_id not in ratings:
                continue
            if mean(ratings[m.movie_id]) < q.min_rating:
                continue
        result.append(m)

    if q.sort == "popularity":
        result.sort(key=lambda m: (-popularity.get(m.movie_id, 0), m.movie_id))
    elif q.sort == "release_date":
        result.sort(key=lambda m: (m.release_date, -m.movie_id), reverse=True)
    elif q.sort == "rating":
        result.sort(key=lambda m: (
            -(mean(ratings[m.movie_id]) if m.movie_id in ratings else 0.0),
            m.movie_id))
    else:
        result.sort(key=lambda m: m.movie_id)
    return [m.movie_id for m in result]


class TestSearch:
    def test_match_all(self, db, catalog):
        seed_catalog(db, 10)
        assert len(catalog.search_movies(SearchQuery())) == 10

    def test_substring_case_insensitive(self, db, catalog):
        seed_catalog(db, 20)
        hits = catalog.search_movies(SearchQuery(text="god"))
        assert hits
        assert all("godfather" in m.title.lower() for m in hits)

    def test_bad_date_range(self, catalog):
        with pytest.raises(InvalidQuery):
            catalog.search_movies(SearchQuery(date_from="2024-01-02",
                                              date_to="2024-01-01"))

    def test_bad_min_rating(self, catalog):
        with pytest.raises(InvalidQuery):
            catalog.search_movies(SearchQuery(min_rating=6.0))

    def test_bad_sort(self, catalog):
        with pytest.raises(InvalidQuery):
            catalog.search_movies(SearchQuery(sort="alphabetical"))

    def test_oracle_equivalence_500_queries(self, db, catalog):
        seed_catalog(db, 100)
        rng = random.Random(2024)
        texts = [None, "", "god", "story", "actor 3", "director", "plot", "zzz"]
        for _ in range(500):
            d1 = (dt.date(2020, 1, 1)
                  + dt.timedelta(days=rng.randrange(1500))).isoformat()
            d2 = (dt.date(2020, 1, 1)
                  + dt.timedelta(days=rng.randrange(1500))).isoformat()
            lo, hi = min(d1, d2), max(d1, d2)
            q = SearchQuery(
                text=rng.choice(texts),
                genre=rng.choice([None] + GENRE_POOL),
                language=rng.choice([None] + LANG_POOL),
                date_from=lo if rng.random() < 0.4 else None,
                date_to=hi if rng.random() < 0.4 else None,
                min_rating=rng.choice([None, 1.0, 2.5, 4.0, 4.5]),
                sort=rng.choice(["relevance", "popularity", "release_date",
                                 "rating"]),
            )
            got = [m.movie_id for m in catalog.search_movies(q)]
            assert got == brute_force_search(db, q), q

    def test_repeat_calls_identical(self, db, catalog):
        seed_catalog(db, 30)
        q = SearchQuery(sort="rating")
        first = [m.movie_id for m in catalog.search_movies(q)]
        assert first == [m.movie_id for m in catalog.search_movies(q)]


class TestShowsAndSeats:
    def test_no_shows_that_date(self, db, catalog, venue_id):
        assert catalog.list_shows(venue_id=venue_id, date="2030-01-01") == []

    def test_seats_remaining(self, db, svc, catalog, show, user_id):
        svc.book_seats(user_id, show.show_id, {SeatId(0, 0), SeatId(0, 1)},
                       now=NOW)
        pairs = catalog.list_shows(venue_id=show.venue_id)
        assert pairs[0][1] == 48

    def test_unknown_venue(self, catalog):
        with pytest.raises(UnknownVenue):
            catalog.list_shows(venue_id=404)

    def test_fresh_grid_all_free(self, catalog, show):
        grid = catalog.seat_availability(show.show_id)
        assert all(cell == "free" for row in grid for cell in row)
        assert len(grid) == 5 and len(grid[0]) == 10

    def test_booked_cell_marked(self, svc, catalog, show, user_id):
        svc.book_seats(user_id, show.show_id, {SeatId(0, 0)}, now=NOW)
        grid = catalog.seat_availability(show.show_id)
        assert grid[0][0] == "sold"
        assert sum(cell == "sold" for row in grid for cell in row) == 1

    def test_houseful_all_sold(self, svc, catalog, show, user_id):
        svc.book_seats(user_id, show.show_id,
                       {SeatId(r, c) for r in range(5) for c in range(10)},
                       now=NOW)
        grid = catalog.seat_availability(show.show_id)
        assert all(cell == "sold" for row in grid for cell in row)

    def test_unknown_show(self, catalog):
        with pytest.raises(UnknownShow):
            catalog.seat_availability(404)

    def test_remaining_plus_sold_is_capacity(self, db, svc, catalog, show,
                                             user_id):
        svc.book_seats(user_id, show.show_id, {SeatId(1, 1)}, now=NOW)
        (s, remaining), = catalog.list_shows(venue_id=show.venue_id)
        assert remaining + len(s.sold) == 50


class TestCollections:
    def test_empty_catalog(self, catalog):
        cols = catalog.curated_collections(now=NOW)
        assert cols == {"Top Rated": [], "Audience Favourites": [],
                        "New Releases": []}

    def test_top_rated_mean_rule(self, db, catalog, movie_id):
        uids = [db.insert_user(f"u{i}", f"u{i}@e.com", "x", Role.USER, {}, NOW)
                for i in range(3)]
        for uid, rating in zip(uids, [5, 5, 4]):
            with db.transaction() as conn:
                db.insert_review(conn, uid, movie_id, rating, "", 0.0,
                                 "neutral", NOW)
        assert movie_id in catalog.curated_collections(now=NOW)["Top Rated"]

    def test_favourites_needs_three_reviews(self, db, catalog, movie_id):
        uids = [db.insert_user(f"u{i}", f"u{i}@e.com", "x", Role.USER, {}, NOW)
                for i in range(2)]
        for uid in uids:
            with db.transaction() as conn:
                db.insert_review(conn, uid, movie_id, 5, "", 0.9, "positive", NOW)
        cols = catalog.curated_collections(now=NOW)
        assert movie_id not in cols["Audience Favourites"]

    def test_new_release_window(self, db, catalog):
        today = dt.datetime.fromtimestamp(NOW / 1000, dt.timezone.utc).date()
        fresh = db.insert_movie({"title": "Fresh", "genres": {"drama"},
                                 "release_date": (today - dt.timedelta(days=10)).isoformat()})
        stale = db.insert_movie({"title": "Stale", "genres": {"drama"},
                                 "release_date": (today - dt.timedelta(days=40)).isoformat()})
        new = catalog.curated_collections(now=NOW)["New Releases"]
        assert fresh in new and stale not in new


class TestRecommend:
    def _setup_history(self, db, svc):
        uid = db.insert_user("viewer", "v@example.com", "x", Role.USER, {}, NOW)
        rater = db.insert_user("rater", "r@example.com", "x", Role.USER, {}, NOW)
        vid = db.insert_venue({"name": "V", "rows": 5, "cols": 10})
        liked = db.insert_movie({"title": "Liked Drama", "genres": {"drama"},
                                 "release_date": "2023-01-01"})
        target = db.insert_movie({"title": "Target", "genres": {"drama"},
                                  "release_date": "2023-06-01"})
        with db.transaction() as conn:
            db.insert_review(conn, uid, liked, 5, "", 0.8, "positive", NOW)
            db.insert_review(conn, rater, target, 4, "", 0.44, "positive", NOW)
        return uid, target

    def test_worked_example(self, db, svc, catalog):
        uid, target = self._setup_history(db, svc)
        recs = catalog.recommend(uid, k=10)
        rec = next(r for r in recs if r.movie_id == target)
        # genre match 1.0, mean rating 4.0 -> 0.8, compound 0.44 -> 0.72
        assert rec.score == pytest.approx(0.4 * 1.0 + 0.3 * 0.8 + 0.3 * 0.72,
                                          abs=1e-9)
        assert rec.score == pytest.approx(0.856, abs=1e-9)

    def test_weights_scale_invariance(self, db, svc, catalog):
        seed_catalog(db, 40)
        uid, _ = self._setup_history(db, svc)
        base = [r.movie_id for r in catalog.recommend(uid, k=40)]
        scaled = [r.movie_id for r in catalog.recommend(
            uid, k=40, weights=tuple(7.5 * w for w in RECOMMEND_WEIGHTS))]
        assert base == scaled

    def test_cold_start_popularity(self, db, svc, catalog):
        uid = db.insert_user("newbie", "n@example.com", "x", Role.USER, {}, NOW)
        buyer = db.insert_user("buyer", "b@example.com", "x", Role.USER, {}, NOW)
        vid = db.insert_venue({"name": "V", "rows": 5, "cols": 10})
        quiet = db.insert_movie({"title": "Quiet", "genres": {"drama"},
                                 "release_date": "2023-01-01"})
        popular = db.insert_movie({"title": "Popular", "genres": {"drama"},
                                   "release_date": "2023-01-01"})
        s = svc.create_show(popular, vid, NOW + DAY, Money(100), now=NOW)
        svc.book_seats(buyer, s.show_id, {SeatId(0, 0)}, now=NOW)
        recs = catalog.recommend(uid, k=2)
        assert [r.movie_id for r in recs] == [popular, quiet]

    def test_booked_movie_excluded(self, db, svc, catalog):
        uid, target = self._setup_history(db, svc)
        vid = db.insert_venue({"name": "W", "rows": 5, "cols": 10})
        s = svc.create_show(target, vid, NOW + DAY, Money(100), now=NOW)
        svc.book_seats(uid, s.show_id, {SeatId(0, 0)}, now=NOW)
        assert target not in [r.movie_id for r in catalog.recommend(uid, k=50)]
