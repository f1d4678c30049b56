"""Deterministic demo dataset generator.

Same (movies, venues, seed) always produces the same store byte-for-byte,
so fixtures and report outputs are reproducible.
"""

from __future__ import annotations

import datetime as dt
import random

from .auth import hash_password
from .booking import BookingService
from .config import Policy
from .core import CoinReason, Money, Role, SeatId
from .db import Database
from . import sentiment

GENRES = ["drama", "comedy", "thriller", "action", "romance", "scifi",
          "horror", "documentary", "animation", "musical"]
LANGUAGES = ["english", "hindi", "tamil", "bengali", "telugu"]

_ADJ = ["Silent", "Crimson", "Endless", "Broken", "Golden", "Hidden",
        "Midnight", "Paper", "Electric", "Distant"]
_NOUN = ["River", "Harbor", "Empire", "Garden", "Signal", "Mirror",
         "Station", "Horizon", "Letter", "Winter"]

_REVIEW_SNIPPETS = [
    "great movie with a good story",
    "absolutely excellent performances",
    "terrible pacing and a boring plot",
    "somewhat mediocre but watchable",
    "not good at all",
    "a masterpiece of the genre",
    "hardly bad for a debut",
    "i love the soundtrack",
    "very good direction",
    "the projector broke twice",
]


def seed_database(db: Database, movies: int = 20, venues: int = 4,
                  seed: int = 42, users: int = 10, with_activity: bool = True,
                  policy: Policy | None = None) -> dict[str, int]:
    """Populate an empty store; returns per-kind record counts."""
    rng = random.Random(seed)
    policy = policy or Policy()
    now = 1_700_000_000_000  # fixed epoch so output is reproducible
    lexicon = sentiment.load_seed_lexicon()

    db.insert_user("admin", "admin@stageseat.local",
                   hash_password("admin-pass-change-me", 1000),
                   Role.ADMIN, {}, now)
    user_ids = []
    for i in range(users):
        uid = db.insert_user(f"user{i + 1}", f"user{i + 1}@example.com",
                             hash_password(f"password-{i + 1}", 1000),
                             Role.USER, {}, now)
        user_ids.append(uid)

    movie_ids = []
    for i in range(movies):
        title = f"{_ADJ[i % 10]} {_NOUN[(i // 10 + i) % 10]} {i + 1}"
        release = dt.date(2020, 1, 1) + dt.timedelta(days=rng.randrange(0, 2000))
        mid = db.insert_movie({
            "title": title,
            "description": f"The story of {title.lower()}.",
            "genres": set(rng.sample(GENRES, rng.randint(1, 3))),
            "director": f"Director {rng.randint(1, 8)}",
            "cast": [f"Actor {rng.randint(1, 30)}" for _ in range(3)],
            "language": rng.choice(LANGUAGES),
            "release_date": release.isoformat(),
        })
        movie_ids.append(mid)

    venue_ids = []
    for i in range(venues):
        vid = db.insert_venue({
            "name": f"Venue {i + 1}",
            "address": f"{10 * (i + 1)} Main Street",
            "amenities": ["parking", "snacks"],
            "accessibility": ["wheelchair"],
            "rows": rng.randint(5, 10),
            "cols": rng.randint(8, 12),
        })
        venue_ids.append(vid)

    show_ids = []
    for mid in movie_ids:
        for _ in range(rng.randint(1, 2)):
            starts = now + rng.randrange(24, 24 * 30) * 3_600_000
            sid = db.insert_show(mid, rng.choice(venue_ids), starts,
                                 Money(rng.choice([15000, 20000, 25000, 30000])))
            show_ids.append(sid)

    counts = {"bookings": 0, "reviews": 0}
    if with_activity:
        svc = BookingService(db, policy)
        for uid in user_ids:
            for _ in range(rng.randint(0, 3)):
                sid = rng.choice(show_ids)
                show = db.get_show(sid)
                venue = db.get_venue(show.venue_id)
                free = [SeatId(r, c) for r in range(venue.rows)
                        for c in range(venue.cols) if SeatId(r, c) not in show.sold]
                if not free:
                    continue
                picked = set(rng.sample(free, min(len(free), rng.randint(1, 3))))
                svc.book_seats(uid, sid, picked, 0, now=now)
                counts["bookings"] += 1
            reviewed = rng.sample(movie_ids, rng.randint(0, 4))
            for mid in reviewed:
                text = rng.choice(_REVIEW_SNIPPETS)
                score = sentiment.score_text(lexicon, text)
                with db.transaction() as conn:
                    rid = db.insert_review(conn, uid, mid, rng.randint(1, 5),
                                           text, score.compound, score.label,
                                           now)
                    db.ledger_append(conn, uid, policy.review_earn,
                                     CoinReason.REVIEW_EARN, rid, now)
                counts["reviews"] += 1

    return {
        "users": users + 1,
        "movies": movies,
        "venues": venues,
        "shows": len(show_ids),
        **counts,
    }
