"""Shared domain types: money, seat labels, and the record structs every
other module works with.

Money is exact integer minor units (paise); seat labels are letter+number
("C12" = row C, column 12) over a rectangular grid capped at 26 rows and
99 columns so the codec is unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import DiscountExceedsSubtotal, OutOfRange, ParseError

MAX_ROWS = 26
MAX_COLS = 99

# Policy defaults; overridable via config (see config.Policy).
COIN_VALUE_MINOR = 10       # 10 coins = 1.00 currency unit
EARN_PER_SEAT = 1
REVIEW_EARN = 5
REDEEM_CAP_PCT = 20
CANCEL_CUTOFF_HOURS = 2

_LABEL_RE = re.compile(r"^([A-Z])([1-9][0-9]?)$")


@dataclass(frozen=True)
class Money:
    amount_minor: int
    currency_code: str = "INR"

    def __post_init__(self):
        if self.amount_minor < 0:
            raise ValueError("stored money amounts must be non-negative")

    def __add__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount_minor + other.amount_minor, self.currency_code)

    def __sub__(self, other: "Money") -> "Money":
        self._check(other)
        return Money(self.amount_minor - other.amount_minor, self.currency_code)

    def scaled(self, n: int) -> "Money":
        return Money(self.amount_minor * n, self.currency_code)

    def _check(self, other: "Money"):
        if self.currency_code != other.currency_code:
            raise ValueError("currency mismatch")


@dataclass(frozen=True, order=True)
class SeatId:
    row: int  # 0-based
    col: int  # 0-based

    def label(self) -> str:
        return seat_label_encode(self)


def seat_label_encode(seat: SeatId) -> str:
    """Row letter (A=0) followed by the 1-based column number."""
    if not (0 <= seat.row < MAX_ROWS):
        raise OutOfRange(f"row {seat.row} outside A..Z")
    if not (0 <= seat.col < MAX_COLS):
        raise OutOfRange(f"col {seat.col} outside 1..99")
    return f"{chr(ord('A') + seat.row)}{seat.col + 1}"


def seat_label_parse(label: str) -> SeatId:
    m = _LABEL_RE.match(label)
    if not m:
        raise ParseError(f"bad seat label: {label!r}")
    return SeatId(row=ord(m.group(1)) - ord("A"), col=int(m.group(2)) - 1)


def apply_discount(subtotal: Money, coins_redeemed: int,
                   coin_value_minor: int = COIN_VALUE_MINOR) -> Money:
    if coins_redeemed < 0:
        raise ValueError("coins_redeemed must be >= 0")
    discount = coins_redeemed * coin_value_minor
    if discount > subtotal.amount_minor:
        raise DiscountExceedsSubtotal(
            f"discount {discount} exceeds subtotal {subtotal.amount_minor}")
    return Money(subtotal.amount_minor - discount, subtotal.currency_code)


class Role(str, Enum):
    USER = "user"
    ADMIN = "admin"


class BookingStatus(str, Enum):
    ACTIVE = "active"
    CANCELLED = "cancelled"


class CoinReason(str, Enum):
    BOOKING_EARN = "booking_earn"
    REVIEW_EARN = "review_earn"
    REDEEM = "redeem"
    REVOKE_ON_CANCEL = "revoke_on_cancel"
    REDEEM_RETURN = "redeem_return"


@dataclass
class UserAccount:
    user_id: int
    username: str
    email: str
    password_digest: str
    role: Role
    preferences: dict = field(default_factory=dict)
    created_at: int = 0  # epoch ms UTC


@dataclass
class Movie:
    movie_id: int
    title: str
    description: str
    genres: set[str]
    director: str
    cast: list[str]
    language: str
    release_date: str  # ISO calendar date
    poster_url: str | None = None
    trailer_url: str | None = None


@dataclass
class Venue:
    venue_id: int
    name: str
    address: str
    rows: int
    cols: int
    amenities: list[str] = field(default_factory=list)
    accessibility: list[str] = field(default_factory=list)

    @property
    def capacity(self) -> int:
        return self.rows * self.cols


@dataclass
class Show:
    show_id: int
    movie_id: int
    venue_id: int
    starts_at: int  # epoch ms UTC
    price_per_seat: Money
    sold: set[SeatId] = field(default_factory=set)


@dataclass
class Booking:
    booking_id: int
    user_id: int
    show_id: int
    seats: set[SeatId]
    paid: Money
    coins_redeemed: int
    status: BookingStatus
    created_at: int


@dataclass
class Review:
    review_id: int
    user_id: int
    movie_id: int
    rating: int  # 1..5
    text: str
    compound: float
    label: str
    created_at: int


@dataclass
class CoinTransaction:
    txn_id: int
    user_id: int
    delta: int
    reason: CoinReason
    ref_id: int
    created_at: int
