"""Movie/venue/show discovery: search, filters, curated collections, seat
availability, and sentiment-aware recommendation scoring.

All orderings are total (ties broken by ascending movie_id), so repeated
calls on unchanged state return identical lists.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from statistics import mean

from .core import BookingStatus, Movie, SeatId, Show
from .db import Database
from .errors import InvalidQuery, UnknownMovie, UnknownShow, UnknownUser, UnknownVenue
from . import sentiment

RECOMMEND_WEIGHTS = (0.4, 0.3, 0.3)  # genre affinity, normalized rating, sentiment
TOP_RATED_MIN_MEAN = 4.0
TOP_RATED_MIN_COUNT = 3
FAVOURITES_MIN_COMPOUND = 0.3
FAVOURITES_MIN_REVIEWS = 3
NEW_RELEASE_DAYS = 30

SORTS = ("relevance", "popularity", "release_date", "rating")


@dataclass(frozen=True)
class SearchQuery:
    text: str | None = None
    genre: str | None = None
    language: str | None = None
    date_from: str | None = None   # ISO dates, inclusive
    date_to: str | None = None
    min_rating: float | None = None
    sort: str = "relevance"


@dataclass(frozen=True)
class RecommendationScore:
    movie_id: int
    score: float
    genre_affinity: float
    norm_rating: float
    sentiment_index: float


@dataclass
class _MovieStats:
    mean_rating: float | None = None     # None when unrated
    mean_compound: float | None = None   # None when unreviewed
    popularity: int = 0                  # active bookings across the movie's shows
    n_ratings: int = 0
    n_reviews: int = 0


class CatalogService:
    def __init__(self, db: Database):
        self.db = db

    # -- search ------------------------------------------------------------

    def search_movies(self, q: SearchQuery) -> list[Movie]:
        _validate_query(q)
        stats = self._stats_by_movie()
        out = [m for m in self.db.list_movies() if _matches(m, q, stats)]
        out.sort(key=lambda m: _sort_key(m, q.sort, stats))
        return out

    def search_venues(self, text: str = ""):
        needle = text.lower()
        return [v for v in self.db.list_venues()
                if needle in v.name.lower() or needle in v.address.lower()]

    # -- shows -------------------------------------------------------------

    def list_shows(self, venue_id: int | None = None,
                   movie_id: int | None = None,
                   date: str | None = None) -> list[tuple[Show, int]]:
        if venue_id is not None and self.db.get_venue(venue_id) is None:
            raise UnknownVenue(f"venue {venue_id}")
        if movie_id is not None and self.db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        out = []
        for show in self.db.list_shows():
            if venue_id is not None and show.venue_id != venue_id:
                continue
            if movie_id is not None and show.movie_id != movie_id:
                continue
            if date is not None and _show_date(show) != date:
                continue
            venue = self.db.get_venue(show.venue_id)
            out.append((show, venue.capacity - len(show.sold)))
        out.sort(key=lambda pair: (pair[0].starts_at, pair[0].show_id))
        return out

    def seat_availability(self, show_id: int) -> list[list[str]]:
        show = self.db.get_show(show_id)
        if show is None:
            raise UnknownShow(f"show {show_id}")
        venue = self.db.get_venue(show.venue_id)
        return [["sold" if SeatId(r, c) in show.sold else "free"
                 for c in range(venue.cols)]
                for r in range(venue.rows)]

    # -- collections ---------------------------------------------------------

    def curated_collections(self, now: int | None = None) -> dict[str, list[int]]:
        import time
        now = int(time.time() * 1000) if now is None else now
        stats = self._stats_by_movie()
        movies = self.db.list_movies()

        top_rated = [(stats[m.movie_id].mean_rating, m.movie_id)
                     for m in movies
                     if stats[m.movie_id].n_ratings >= TOP_RATED_MIN_COUNT
                     and stats[m.movie_id].mean_rating >= TOP_RATED_MIN_MEAN]
        top_rated.sort(key=lambda t: (-t[0], t[1]))

        favourites = [(stats[m.movie_id].mean_compound, m.movie_id)
                      for m in movies
                      if stats[m.movie_id].n_reviews >= FAVOURITES_MIN_REVIEWS
                      and stats[m.movie_id].mean_compound >= FAVOURITES_MIN_COMPOUND]
        favourites.sort(key=lambda t: (-t[0], t[1]))

        today = dt.datetime.fromtimestamp(now / 1000, dt.timezone.utc).date()
        new_releases = []
        for m in movies:
            try:
                rel = dt.date.fromisoformat(m.release_date)
            except ValueError:
                continue
            if 0 <= (today - rel).days <= NEW_RELEASE_DAYS:
                new_releases.append((rel, m.movie_id))
        new_releases.sort(key=lambda t: (-t[0].toordinal(), t[1]))

        return {
            "Top Rated": [mid for _, mid in top_rated],
            "Audience Favourites": [mid for _, mid in favourites],
            "New Releases": [mid for _, mid in new_releases],
        }

    # -- recommendations ----------------------------------------------------

    def recommend(self, user_id: int, k: int,
                  weights: tuple[float, float, float] = RECOMMEND_WEIGHTS
                  ) -> list[RecommendationScore]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if self.db.get_user(user_id) is None:
            raise UnknownUser(f"user {user_id}")
        stats = self._stats_by_movie()
        booked = self._booked_movie_ids(user_id)
        liked = self._liked_genres(user_id)

        candidates = [m for m in self.db.list_movies() if m.movie_id not in booked]
        if not liked and not self._has_history(user_id):
            # Cold start: popularity first, then rating, ties by movie_id.
            candidates.sort(key=lambda m: (
                -stats[m.movie_id].popularity,
                -(stats[m.movie_id].mean_rating or 0.0),
                m.movie_id))
            return [RecommendationScore(m.movie_id, 0.0, 0.0, 0.0, 0.5)
                    for m in candidates[:k]]

        wg, wr, ws = weights
        scored = []
        for m in candidates:
            st = stats[m.movie_id]
            affinity = len(m.genres & liked) / max(1, len(m.genres))
            norm_rating = (st.mean_rating / 5.0) if st.mean_rating is not None else 0.0
            sent = ((st.mean_compound + 1) / 2) if st.mean_compound is not None else 0.5
            score = wg * affinity + wr * norm_rating + ws * sent
            scored.append(RecommendationScore(
                movie_id=m.movie_id, score=score, genre_affinity=affinity,
                norm_rating=norm_rating, sentiment_index=sent))
        scored.sort(key=lambda r: (-r.score, r.movie_id))
        return scored[:k]

    # -- internals -----------------------------------------------------------

    def _stats_by_movie(self) -> dict[int, _MovieStats]:
        stats = {m.movie_id: _MovieStats() for m in self.db.list_movies()}
        ratings: dict[int, list[int]] = {}
        compounds: dict[int, list[float]] = {}
        for r in self.db.list_reviews():
            ratings.setdefault(r.movie_id, []).append(r.rating)
            compounds.setdefault(r.movie_id, []).append(r.compound)
        for mid, vals in ratings.items():
            if mid in stats:
                stats[mid].mean_rating = mean(vals)
                stats[mid].n_ratings = len(vals)
        for mid, vals in compounds.items():
            if mid in stats:
                stats[mid].mean_compound = mean(vals)
                stats[mid].n_reviews = len(vals)
        show_movie = {s.show_id: s.movie_id for s in self.db.list_shows()}
        for b in self.db.list_bookings():
            if b.status is BookingStatus.ACTIVE:
                mid = show_movie.get(b.show_id)
                if mid in stats:
                    stats[mid].popularity += 1
        return stats

    def _booked_movie_ids(self, user_id: int) -> set[int]:
        show_movie = {s.show_id: s.movie_id for s in self.db.list_shows()}
        return {show_movie[b.show_id] for b in self.db.list_bookings(user_id)
                if b.show_id in show_movie}

    def _liked_genres(self, user_id: int) -> set[int]:
        liked: set[str] = set()
        for r in self.db.list_reviews():
            if r.user_id != user_id:
                continue
            if r.rating >= 4 or r.label == "positive":
                movie = self.db.get_movie(r.movie_id)
                if movie:
                    liked |= movie.genres
        for mid in self._booked_movie_ids(user_id):
            movie = self.db.get_movie(mid)
            if movie:
                liked |= movie.genres
        return liked

    def _has_history(self, user_id: int) -> bool:
        if self.db.list_bookings(user_id):
            return True
        return any(r.user_id == user_id for r in self.db.list_reviews())

    def aggregate_sentiment(self, movie_id: int) -> sentiment.AggregateSentiment:
        if self.db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        scores = [sentiment.SentimentScore(0.0, r.compound, r.label, 0)
                  for r in self.db.list_reviews(movie_id)]
        return sentiment.aggregate_reviews(scores)


def _validate_query(q: SearchQuery):
    if q.date_from and q.date_to and q.date_from > q.date_to:
        raise InvalidQuery("date_from after date_to")
    if q.min_rating is not None and not (1.0 <= q.min_rating <= 5.0):
        raise InvalidQuery("min_rating outside [1, 5]")
    if q.sort not in SORTS:
        raise InvalidQuery(f"unknown sort {q.sort!r}")


def _matches(m: Movie, q: SearchQuery, stats: dict[int, _MovieStats]) -> bool:
    if q.text:
        needle = q.text.lower()
        haystacks = [m.title, m.director, m.description, *m.cast]
        if not any(needle in h.lower() for h in haystacks):
            return False
    if q.genre and q.genre not in m.genres:
        return False
    if q.language and q.language.lower() != m.language.lower():
        return False
    if q.date_from and m.release_date < q.date_from:
        return False
    if q.date_to and m.release_date > q.date_to:
        return False
    if q.min_rating is not None:
        mr = stats[m.movie_id].mean_rating
        if mr is None or mr < q.min_rating:
            return False
    return True


def _sort_key(m: Movie, sort: str, stats: dict[int, _MovieStats]):
    st = stats[m.movie_id]
    if sort == "popularity":
        return (-st.popularity, m.movie_id)
    if sort == "release_date":
        return (_neg_date(m.release_date), m.movie_id)
    if sort == "rating":
        return (-(st.mean_rating or 0.0), m.movie_id)
    return (m.movie_id,)  # relevance: stable catalog order


def _neg_date(iso: str):
    try:
        return -dt.date.fromisoformat(iso).toordinal()
    except ValueError:
        return 0


def _show_date(show: Show) -> str:
    return dt.datetime.fromtimestamp(show.starts_at / 1000,
                                     dt.timezone.utc).date().isoformat()
