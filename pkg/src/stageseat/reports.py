"""Admin reports: ticket sales, venue occupancy, user activity, and
per-movie sentiment breakdowns.

Reports are pure functions of committed state and serialize to JSON or
RFC-4180-style CSV with a mandatory header row.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass

from .catalog import CatalogService
from .core import BookingStatus, CoinReason
from .db import Database
from .errors import InvalidWindow, UnknownMovie, UnknownVenue

GROUP_BYS = ("movie", "venue", "day")
WORST_REVIEWS_CAP = 5


@dataclass(frozen=True)
class SalesRow:
    key: str
    tickets_sold: int
    gross_minor: int
    refunds_minor: int

    @property
    def net_minor(self) -> int:
        return self.gross_minor - self.refunds_minor


@dataclass(frozen=True)
class OccupancyRow:
    show_id: int
    capacity: int
    sold: int

    @property
    def occupancy_pct(self) -> float:
        return 100.0 * self.sold / self.capacity


@dataclass(frozen=True)
class ActivityRow:
    user_id: int
    username: str
    bookings: int
    cancellations: int
    reviews: int
    coins_earned: int
    coins_redeemed: int


class ReportService:
    def __init__(self, db: Database):
        self.db = db
        self.catalog = CatalogService(db)

    def sales_report(self, from_ms: int, to_ms: int, group_by: str) -> dict:
        if from_ms > to_ms:
            raise InvalidWindow("from after to")
        if group_by not in GROUP_BYS:
            raise InvalidWindow(f"unknown group_by {group_by!r}")
        shows = {s.show_id: s for s in self.db.list_shows()}
        movies = {m.movie_id: m for m in self.db.list_movies()}
        venues = {v.venue_id: v for v in self.db.list_venues()}
        acc: dict[str, list[int]] = {}  # key -> [tickets, gross, refunds]
        for b in self.db.list_bookings():
            if not (from_ms <= b.created_at <= to_ms):
                continue
            show = shows.get(b.show_id)
            if group_by == "movie":
                key = movies[show.movie_id].title if show else "?"
            elif group_by == "venue":
                key = venues[show.venue_id].name if show else "?"
            else:
                key = dt.datetime.fromtimestamp(
                    b.created_at / 1000, dt.timezone.utc).date().isoformat()
            row = acc.setdefault(key, [0, 0, 0])
            row[0] += len(b.seats)
            row[1] += b.paid.amount_minor
            if b.status is BookingStatus.CANCELLED:
                row[2] += b.paid.amount_minor  # full-refund policy
        rows = [SalesRow(k, *acc[k]) for k in sorted(acc)]
        return {
            "window": {"from": from_ms, "to": to_ms},
            "group_by": group_by,
            "rows": [
                {"key": r.key, "tickets_sold": r.tickets_sold,
                 "gross_minor": r.gross_minor, "refunds_minor": r.refunds_minor,
                 "net_minor": r.net_minor}
                for r in rows
            ],
            "totals": {
                "tickets_sold": sum(r.tickets_sold for r in rows),
                "gross_minor": sum(r.gross_minor for r in rows),
                "refunds_minor": sum(r.refunds_minor for r in rows),
                "net_minor": sum(r.net_minor for r in rows),
            },
        }

    def occupancy_report(self, venue_id: int, date: str | None = None) -> dict:
        venue = self.db.get_venue(venue_id)
        if venue is None:
            raise UnknownVenue(f"venue {venue_id}")
        rows = []
        for show in self.db.list_shows():
            if show.venue_id != venue_id:
                continue
            if date is not None:
                show_date = dt.datetime.fromtimestamp(
                    show.starts_at / 1000, dt.timezone.utc).date().isoformat()
                if show_date != date:
                    continue
            r = OccupancyRow(show.show_id, venue.capacity, len(show.sold))
            rows.append({"show_id": r.show_id, "capacity": r.capacity,
                         "sold": r.sold, "occupancy_pct": r.occupancy_pct})
        rows.sort(key=lambda r: r["show_id"])
        return {"venue_id": venue_id, "date": date, "rows": rows}

    def activity_report(self, from_ms: int, to_ms: int) -> dict:
        if from_ms > to_ms:
            raise InvalidWindow("from after to")
        per_user: dict[int, dict] = {}

        def bucket(uid: int) -> dict:
            return per_user.setdefault(uid, {
                "bookings": 0, "cancellations": 0, "reviews": 0,
                "coins_earned": 0, "coins_redeemed": 0})

        for b in self.db.list_bookings():
            if from_ms <= b.created_at <= to_ms:
                bucket(b.user_id)["bookings"] += 1
                if b.status is BookingStatus.CANCELLED:
                    bucket(b.user_id)["cancellations"] += 1
        for r in self.db.list_reviews():
            if from_ms <= r.created_at <= to_ms:
                bucket(r.user_id)["reviews"] += 1
        for t in self.db.list_ledger():
            if not (from_ms <= t.created_at <= to_ms):
                continue
            if t.reason in (CoinReason.BOOKING_EARN, CoinReason.REVIEW_EARN):
                bucket(t.user_id)["coins_earned"] += t.delta
            elif t.reason is CoinReason.REDEEM:
                bucket(t.user_id)["coins_redeemed"] += -t.delta
        users = {u.user_id: u.username for u in self.db.list_users()}
        rows = [{"user_id": uid, "username": users.get(uid, "?"), **counts}
                for uid, counts in sorted(per_user.items())]
        return {"window": {"from": from_ms, "to": to_ms}, "rows": rows}

    def sentiment_report(self, movie_id: int) -> dict:
        if self.db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        agg = self.catalog.aggregate_sentiment(movie_id)
        reviews = self.db.list_reviews(movie_id)
        worst = sorted(reviews, key=lambda r: (r.compound, r.review_id))
        return {
            "movie_id": movie_id,
            "aggregate": {
                "n_reviews": agg.n_reviews, "n_positive": agg.n_positive,
                "n_negative": agg.n_negative, "n_neutral": agg.n_neutral,
                "mean_compound": agg.mean_compound,
            },
            "most_negative": [
                {"review_id": r.review_id, "rating": r.rating,
                 "compound": r.compound, "label": r.label, "text": r.text}
                for r in worst[:WORST_REVIEWS_CAP]
            ],
        }


def to_csv(report: dict) -> str:
    """Flatten a report's row list to CSV with a header row."""
    rows = report.get("rows") or report.get("most_negative") or []
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()),
                            quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
