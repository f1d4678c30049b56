"""Durable store for all domain records.

Backed by sqlite3 (stdlib) with one writer at a time: every transaction
takes a process-wide re-entrant lock, so all mutations are serialized
and trivially linearizable. Reads take the same lock briefly and see
only committed state.

Ids are positive integers in insertion order. Timestamps are UTC epoch
milliseconds, calendar dates ISO-8601 strings. Fixture files are UTF-8
JSON-lines, one `{"kind": ..., "data": {...}}` record per line.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from contextlib import contextmanager

from .core import (
    Booking,
    BookingStatus,
    CoinReason,
    CoinTransaction,
    Money,
    Movie,
    Review,
    Role,
    Show,
    UserAccount,
    Venue,
    seat_label_encode,
    seat_label_parse,
)
from .errors import (
    ConstraintViolation,
    ImportIntoNonEmptyStore,
    MalformedLine,
)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    user_id INTEGER PRIMARY KEY,
    username TEXT NOT NULL UNIQUE,
    email TEXT NOT NULL UNIQUE,
    password_digest TEXT NOT NULL,
    role TEXT NOT NULL CHECK (role IN ('user', 'admin')),
    preferences TEXT NOT NULL DEFAULT '{}',
    created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS movies (
    movie_id INTEGER PRIMARY KEY,
    title TEXT NOT NULL,
    description TEXT NOT NULL DEFAULT '',
    genres TEXT NOT NULL,
    director TEXT NOT NULL DEFAULT '',
    cast_names TEXT NOT NULL DEFAULT '[]',
    language TEXT NOT NULL DEFAULT '',
    release_date TEXT NOT NULL,
    poster_url TEXT,
    trailer_url TEXT,
    UNIQUE (title, release_date)
);
CREATE TABLE IF NOT EXISTS venues (
    venue_id INTEGER PRIMARY KEY,
    name TEXT NOT NULL,
    address TEXT NOT NULL DEFAULT '',
    amenities TEXT NOT NULL DEFAULT '[]',
    accessibility TEXT NOT NULL DEFAULT '[]',
    rows INTEGER NOT NULL CHECK (rows BETWEEN 1 AND 26),
    cols INTEGER NOT NULL CHECK (cols BETWEEN 1 AND 99)
);
CREATE TABLE IF NOT EXISTS shows (
    show_id INTEGER PRIMARY KEY,
    movie_id INTEGER NOT NULL REFERENCES movies (movie_id),
    venue_id INTEGER NOT NULL REFERENCES venues (venue_id),
    starts_at INTEGER NOT NULL,
    price_minor INTEGER NOT NULL CHECK (price_minor >= 0),
    currency TEXT NOT NULL DEFAULT 'INR',
    sold TEXT NOT NULL DEFAULT '[]'
);
CREATE TABLE IF NOT EXISTS bookings (
    booking_id INTEGER PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES users (user_id),
    show_id INTEGER NOT NULL REFERENCES shows (show_id),
    seats TEXT NOT NULL,
    paid_minor INTEGER NOT NULL CHECK (paid_minor >= 0),
    currency TEXT NOT NULL DEFAULT 'INR',
    coins_redeemed INTEGER NOT NULL DEFAULT 0 CHECK (coins_redeemed >= 0),
    status TEXT NOT NULL CHECK (status IN ('active', 'cancelled')),
    created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS reviews (
    review_id INTEGER PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES users (user_id),
    movie_id INTEGER NOT NULL REFERENCES movies (movie_id),
    rating INTEGER NOT NULL CHECK (rating BETWEEN 1 AND 5),
    text TEXT NOT NULL DEFAULT '',
    compound REAL NOT NULL DEFAULT 0,
    label TEXT NOT NULL DEFAULT 'neutral',
    created_at INTEGER NOT NULL,
    UNIQUE (user_id, movie_id)
);
CREATE TABLE IF NOT EXISTS coin_ledger (
    txn_id INTEGER PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES users (user_id),
    delta INTEGER NOT NULL,
    reason TEXT NOT NULL,
    ref_id INTEGER NOT NULL,
    created_at INTEGER NOT NULL
);
"""

FIXTURE_KINDS = ("user", "movie", "venue", "show", "booking", "review", "coin_txn")

_KIND_TABLE = {
    "user": "users",
    "movie": "movies",
    "venue": "venues",
    "show": "shows",
    "booking": "bookings",
    "review": "reviews",
    "coin_txn": "coin_ledger",
}


class Database:
    def __init__(self, path: str = ":memory:"):
        self.path = path
        self._conn = sqlite3.connect(path, check_same_thread=False,
                                     isolation_level=None)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.RLock()
        self._txn_depth = 0
        with self._lock:
            self._conn.execute("PRAGMA foreign_keys = ON")
            if path != ":memory:":
                self._conn.execute("PRAGMA journal_mode = WAL")
            self._conn.executescript(_SCHEMA)

    def close(self):
        with self._lock:
            self._conn.close()

    @contextmanager
    def transaction(self):
        """All-or-nothing mutation scope; nests (inner scopes join the outer)."""
        with self._lock:
            if self._txn_depth == 0:
                self._conn.execute("BEGIN IMMEDIATE")
            self._txn_depth += 1
            try:
                yield self._conn
            except sqlite3.IntegrityError as e:
                self._txn_depth -= 1
                if self._txn_depth == 0:
                    self._conn.execute("ROLLBACK")
                raise _to_constraint_violation(e) from e
            except BaseException:
                self._txn_depth -= 1
                if self._txn_depth == 0:
                    self._conn.execute("ROLLBACK")
                raise
            else:
                self._txn_depth -= 1
                if self._txn_depth == 0:
                    self._conn.execute("COMMIT")

    def _read(self, sql: str, params=()):
        with self._lock:
            return self._conn.execute(sql, params).fetchall()

    def _read_one(self, sql: str, params=()):
        with self._lock:
            return self._conn.execute(sql, params).fetchone()

    # -- generic transact -------------------------------------------------

    def transact(self, ops: list[dict]):
        """Apply a list of {"op": insert|update|delete, "kind": ..., ...}
        mutations atomically. Empty list commits as a no-op."""
        with self.transaction() as conn:
            for op in ops:
                table = _KIND_TABLE[op["kind"]]
                action = op["op"]
                if action == "insert":
                    data = dict(op["data"])
                    cols = ", ".join(data)
                    marks = ", ".join("?" for _ in data)
                    conn.execute(f"INSERT INTO {table} ({cols}) VALUES ({marks})",
                                 tuple(data.values()))
                elif action == "update":
                    data = dict(op["data"])
                    pk = op["id_column"], op["id"]
                    sets = ", ".join(f"{c} = ?" for c in data)
                    conn.execute(f"UPDATE {table} SET {sets} WHERE {pk[0]} = ?",
                                 (*data.values(), pk[1]))
                elif action == "delete":
                    conn.execute(f"DELETE FROM {table} WHERE {op['id_column']} = ?",
                                 (op["id"],))
                else:
                    raise ValueError(f"unknown op {action!r}")

    # -- users ------------------------------------------------------------

    def insert_user(self, username, email, password_digest, role, preferences,
                    created_at) -> int:
        with self.transaction() as conn:
            cur = conn.execute(
                "INSERT INTO users (username, email, password_digest, role,"
                " preferences, created_at) VALUES (?, ?, ?, ?, ?, ?)",
                (username, email, password_digest, role.value,
                 json.dumps(preferences), created_at))
            return cur.lastrowid

    def get_user(self, user_id: int) -> UserAccount | None:
        row = self._read_one("SELECT * FROM users WHERE user_id = ?", (user_id,))
        return _user(row) if row else None

    def get_user_by_username(self, username: str) -> UserAccount | None:
        row = self._read_one("SELECT * FROM users WHERE username = ?", (username,))
        return _user(row) if row else None

    def list_users(self) -> list[UserAccount]:
        return [_user(r) for r in self._read("SELECT * FROM users ORDER BY user_id")]

    def update_user(self, user_id: int, **fields):
        allowed = {"email", "role", "preferences"}
        sets, vals = [], []
        for k, v in fields.items():
            if k not in allowed:
                raise ValueError(f"cannot update {k}")
            if k == "preferences":
                v = json.dumps(v)
            if k == "role":
                v = v.value if isinstance(v, Role) else v
            sets.append(f"{k} = ?")
            vals.append(v)
        with self.transaction() as conn:
            conn.execute(f"UPDATE users SET {', '.join(sets)} WHERE user_id = ?",
                         (*vals, user_id))

    # -- movies -----------------------------------------------------------

    def insert_movie(self, m: dict) -> int:
        with self.transaction() as conn:
            cur = conn.execute(
                "INSERT INTO movies (title, description, genres, director,"
                " cast_names, language, release_date, poster_url, trailer_url)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (m["title"], m.get("description", ""),
                 json.dumps(sorted(m["genres"])), m.get("director", ""),
                 json.dumps(m.get("cast", [])), m.get("language", ""),
                 m["release_date"], m.get("poster_url"), m.get("trailer_url")))
            return cur.lastrowid

    def update_movie(self, movie_id: int, m: dict):
        with self.transaction() as conn:
            conn.execute(
                "UPDATE movies SET title = ?, description = ?, genres = ?,"
                " director = ?, cast_names = ?, language = ?, release_date = ?,"
                " poster_url = ?, trailer_url = ? WHERE movie_id = ?",
                (m["title"], m.get("description", ""),
                 json.dumps(sorted(m["genres"])), m.get("director", ""),
                 json.dumps(m.get("cast", [])), m.get("language", ""),
                 m["release_date"], m.get("poster_url"), m.get("trailer_url"),
                 movie_id))

    def delete_movie(self, movie_id: int):
        with self.transaction() as conn:
            conn.execute("DELETE FROM movies WHERE movie_id = ?", (movie_id,))

    def get_movie(self, movie_id: int) -> Movie | None:
        row = self._read_one("SELECT * FROM movies WHERE movie_id = ?", (movie_id,))
        return _movie(row) if row else None

    def list_movies(self) -> list[Movie]:
        return [_movie(r) for r in self._read("SELECT * FROM movies ORDER BY movie_id")]

    # -- venues -----------------------------------------------------------

    def insert_venue(self, v: dict) -> int:
        with self.transaction() as conn:
            cur = conn.execute(
                "INSERT INTO venues (name, address, amenities, accessibility,"
                " rows, cols) VALUES (?, ?, ?, ?, ?, ?)",
                (v["name"], v.get("address", ""),
                 json.dumps(v.get("amenities", [])),
                 json.dumps(v.get("accessibility", [])),
                 v["rows"], v["cols"]))
            return cur.lastrowid

    def update_venue(self, venue_id: int, v: dict):
        with self.transaction() as conn:
            conn.execute(
                "UPDATE venues SET name = ?, address = ?, amenities = ?,"
                " accessibility = ?, rows = ?, cols = ? WHERE venue_id = ?",
                (v["name"], v.get("address", ""),
                 json.dumps(v.get("amenities", [])),
                 json.dumps(v.get("accessibility", [])),
                 v["rows"], v["cols"], venue_id))

    def delete_venue(self, venue_id: int):
        with self.transaction() as conn:
            conn.execute("DELETE FROM venues WHERE venue_id = ?", (venue_id,))

    def get_venue(self, venue_id: int) -> Venue | None:
        row = self._read_one("SELECT * FROM venues WHERE venue_id = ?", (venue_id,))
        return _venue(row) if row else None

    def list_venues(self) -> list[Venue]:
        return [_venue(r) for r in self._read("SELECT * FROM venues ORDER BY venue_id")]

    # -- shows ------------------------------------------------------------

    def insert_show(self, movie_id, venue_id, starts_at, price: Money) -> int:
        with self.transaction() as conn:
            cur = conn.execute(
                "INSERT INTO shows (movie_id, venue_id, starts_at, price_minor,"
                " currency) VALUES (?, ?, ?, ?, ?)",
                (movie_id, venue_id, starts_at, price.amount_minor,
                 price.currency_code))
            return cur.lastrowid

    def update_show(self, show_id: int, starts_at: int, price: Money):
        with self.transaction() as conn:
            conn.execute(
                "UPDATE shows SET starts_at = ?, price_minor = ?, currency = ?"
                " WHERE show_id = ?",
                (starts_at, price.amount_minor, price.currency_code, show_id))

    def delete_show(self, show_id: int):
        with self.transaction() as conn:
            conn.execute("DELETE FROM shows WHERE show_id = ?", (show_id,))

    def get_show(self, show_id: int) -> Show | None:
        row = self._read_one("SELECT * FROM shows WHERE show_id = ?", (show_id,))
        return _show(row) if row else None

    def list_shows(self) -> list[Show]:
        return [_show(r) for r in self._read("SELECT * FROM shows ORDER BY show_id")]

    def set_show_sold(self, conn, show_id: int, sold: set):
        labels = sorted(seat_label_encode(s) for s in sold)
        conn.execute("UPDATE shows SET sold = ? WHERE show_id = ?",
                     (json.dumps(labels), show_id))

    # -- bookings ---------------------------------------------------------

    def insert_booking(self, conn, user_id, show_id, seats, paid: Money,
                       coins_redeemed, created_at) -> int:
        labels = sorted(seat_label_encode(s) for s in seats)
        cur = conn.execute(
            "INSERT INTO bookings (user_id, show_id, seats, paid_minor,"
            " currency, coins_redeemed, status, created_at)"
            " VALUES (?, ?, ?, ?, ?, ?, 'active', ?)",
            (user_id, show_id, json.dumps(labels), paid.amount_minor,
             paid.currency_code, coins_redeemed, created_at))
        return cur.lastrowid

    def set_booking_status(self, conn, booking_id: int, status: BookingStatus):
        conn.execute("UPDATE bookings SET status = ? WHERE booking_id = ?",
                     (status.value, booking_id))

    def get_booking(self, booking_id: int) -> Booking | None:
        row = self._read_one("SELECT * FROM bookings WHERE booking_id = ?",
                             (booking_id,))
        return _booking(row) if row else None

    def list_bookings(self, user_id: int | None = None) -> list[Booking]:
        if user_id is None:
            rows = self._read("SELECT * FROM bookings ORDER BY booking_id")
        else:
            rows = self._read(
                "SELECT * FROM bookings WHERE user_id = ? ORDER BY booking_id",
                (user_id,))
        return [_booking(r) for r in rows]

    def list_bookings_for_show(self, show_id: int) -> list[Booking]:
        rows = self._read(
            "SELECT * FROM bookings WHERE show_id = ? ORDER BY booking_id",
            (show_id,))
        return [_booking(r) for r in rows]

    # -- reviews ----------------------------------------------------------

    def insert_review(self, conn, user_id, movie_id, rating, text, compound,
                      label, created_at) -> int:
        cur = conn.execute(
            "INSERT INTO reviews (user_id, movie_id, rating, text, compound,"
            " label, created_at) VALUES (?, ?, ?, ?, ?, ?, ?)",
            (user_id, movie_id, rating, text, compound, label, created_at))
        return cur.lastrowid

    def get_review(self, review_id: int) -> Review | None:
        row = self._read_one("SELECT * FROM reviews WHERE review_id = ?",
                             (review_id,))
        return _review(row) if row else None

    def list_reviews(self, movie_id: int | None = None) -> list[Review]:
        if movie_id is None:
            rows = self._read("SELECT * FROM reviews ORDER BY review_id")
        else:
            rows = self._read(
                "SELECT * FROM reviews WHERE movie_id = ? ORDER BY review_id",
                (movie_id,))
        return [_review(r) for r in rows]

    # -- coin ledger ------------------------------------------------------

    def ledger_append(self, conn, user_id, delta, reason: CoinReason, ref_id,
                      created_at) -> int:
        cur = conn.execute(
            "INSERT INTO coin_ledger (user_id, delta, reason, ref_id,"
            " created_at) VALUES (?, ?, ?, ?, ?)",
            (user_id, delta, reason.value, ref_id, created_at))
        return cur.lastrowid

    def ledger_for_user(self, user_id: int) -> list[CoinTransaction]:
        rows = self._read(
            "SELECT * FROM coin_ledger WHERE user_id = ? ORDER BY txn_id",
            (user_id,))
        return [_coin_txn(r) for r in rows]

    def list_ledger(self) -> list[CoinTransaction]:
        return [_coin_txn(r)
                for r in self._read("SELECT * FROM coin_ledger ORDER BY txn_id")]

    def coin_balance(self, user_id: int) -> int:
        row = self._read_one(
            "SELECT COALESCE(SUM(delta), 0) AS bal FROM coin_ledger"
            " WHERE user_id = ?", (user_id,))
        return row["bal"]

    # -- fixtures ---------------------------------------------------------

    def is_empty(self) -> bool:
        return all(
            self._read_one(f"SELECT COUNT(*) AS n FROM {t}")["n"] == 0
            for t in _KIND_TABLE.values())

    def export_fixtures(self, path: str):
        with self._lock, open(path, "w", encoding="utf-8") as fh:
            for kind, table in _KIND_TABLE.items():
                pk = _PRIMARY_KEY[table]
                for row in self._conn.execute(
                        f"SELECT * FROM {table} ORDER BY {pk}"):
                    data = {k: row[k] for k in row.keys()}
                    fh.write(json.dumps({"kind": kind, "data": data},
                                        sort_keys=True) + "\n")

    def import_fixtures(self, path: str) -> dict[str, int]:
        if not self.is_empty():
            raise ImportIntoNonEmptyStore("store must be empty before import")
        counts = {k: 0 for k in FIXTURE_KINDS}
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
        with self.transaction() as conn:
            for line_no, line in enumerate(lines, start=1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    raise MalformedLine(line_no, f"line {line_no}: invalid JSON") from None
                kind = rec.get("kind")
                data = rec.get("data")
                if kind not in _KIND_TABLE or not isinstance(data, dict):
                    raise MalformedLine(line_no)
                table = _KIND_TABLE[kind]
                cols = ", ".join(data)
                marks = ", ".join("?" for _ in data)
                try:
                    conn.execute(
                        f"INSERT INTO {table} ({cols}) VALUES ({marks})",
                        tuple(data.values()))
                except sqlite3.OperationalError:
                    raise MalformedLine(line_no, f"line {line_no}: unknown fields") from None
                counts[kind] += 1
        return counts

    # -- integrity scanner ------------------------------------------------

    def integrity_scan(self) -> list[str]:
        """Raw referential scan, independent of sqlite FK enforcement.
        Returns human-readable violations; empty list means clean."""
        problems: list[str] = []
        with self._lock:
            ids = {
                t: {r[0] for r in self._conn.execute(
                    f"SELECT {pk} FROM {t}")}
                for t, pk in _PRIMARY_KEY.items()
            }
            for bid, uid, sid in self._conn.execute(
                    "SELECT booking_id, user_id, show_id FROM bookings"):
                if uid not in ids["users"]:
                    problems.append(f"booking {bid}: dangling user {uid}")
                if sid not in ids["shows"]:
                    problems.append(f"booking {bid}: dangling show {sid}")
            for sid, mid, vid in self._conn.execute(
                    "SELECT show_id, movie_id, venue_id FROM shows"):
                if mid not in ids["movies"]:
                    problems.append(f"show {sid}: dangling movie {mid}")
                if vid not in ids["venues"]:
                    problems.append(f"show {sid}: dangling venue {vid}")
            for rid, uid, mid in self._conn.execute(
                    "SELECT review_id, user_id, movie_id FROM reviews"):
                if uid not in ids["users"]:
                    problems.append(f"review {rid}: dangling user {uid}")
                if mid not in ids["movies"]:
                    problems.append(f"review {rid}: dangling movie {mid}")
            for tid, uid in self._conn.execute(
                    "SELECT txn_id, user_id FROM coin_ledger"):
                if uid not in ids["users"]:
                    problems.append(f"coin txn {tid}: dangling user {uid}")
            seen: dict[tuple, int] = {}
            for rid, uid, mid in self._conn.execute(
                    "SELECT review_id, user_id, movie_id FROM reviews"):
                key = (uid, mid)
                if key in seen:
                    problems.append(
                        f"reviews {seen[key]}/{rid}: duplicate (user, movie) {key}")
                seen[key] = rid
        return problems


_PRIMARY_KEY = {
    "users": "user_id",
    "movies": "movie_id",
    "venues": "venue_id",
    "shows": "show_id",
    "bookings": "booking_id",
    "reviews": "review_id",
    "coin_ledger": "txn_id",
}


def _to_constraint_violation(e: sqlite3.IntegrityError) -> ConstraintViolation:
    msg = str(e)
    if "UNIQUE constraint failed" in msg:
        cols = msg.split(":", 1)[1].strip()
        return ConstraintViolation(cols, msg)
    if "FOREIGN KEY" in msg:
        return ConstraintViolation("foreign_key", msg)
    return ConstraintViolation("check", msg)


def _user(row) -> UserAccount:
    return UserAccount(
        user_id=row["user_id"], username=row["username"], email=row["email"],
        password_digest=row["password_digest"], role=Role(row["role"]),
        preferences=json.loads(row["preferences"]),
        created_at=row["created_at"])


def _movie(row) -> Movie:
    return Movie(
        movie_id=row["movie_id"], title=row["title"],
        description=row["description"], genres=set(json.loads(row["genres"])),
        director=row["director"], cast=json.loads(row["cast_names"]),
        language=row["language"], release_date=row["release_date"],
        poster_url=row["poster_url"], trailer_url=row["trailer_url"])


def _venue(row) -> Venue:
    return Venue(
        venue_id=row["venue_id"], name=row["name"], address=row["address"],
        amenities=json.loads(row["amenities"]),
        accessibility=json.loads(row["accessibility"]),
        rows=row["rows"], cols=row["cols"])


def _show(row) -> Show:
    return Show(
        show_id=row["show_id"], movie_id=row["movie_id"],
        venue_id=row["venue_id"], starts_at=row["starts_at"],
        price_per_seat=Money(row["price_minor"], row["currency"]),
        sold={seat_label_parse(s) for s in json.loads(row["sold"])})


def _booking(row) -> Booking:
    return Booking(
        booking_id=row["booking_id"], user_id=row["user_id"],
        show_id=row["show_id"],
        seats={seat_label_parse(s) for s in json.loads(row["seats"])},
        paid=Money(row["paid_minor"], row["currency"]),
        coins_redeemed=row["coins_redeemed"],
        status=BookingStatus(row["status"]), created_at=row["created_at"])


def _review(row) -> Review:
    return Review(
        review_id=row["review_id"], user_id=row["user_id"],
        movie_id=row["movie_id"], rating=row["rating"], text=row["text"],
        compound=row["compound"], label=row["label"],
        created_at=row["created_at"])


def _coin_txn(row) -> CoinTransaction:
    return CoinTransaction(
        txn_id=row["txn_id"], user_id=row["user_id"], delta=row["delta"],
        reason=CoinReason(row["reason"]), ref_id=row["ref_id"],
        created_at=row["created_at"])
