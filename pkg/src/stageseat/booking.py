"""Transactional seat reservation, cancellation/refunds, and the coin
ledger.

Every mutation runs inside a single database transaction, so a booking
(seat-map update + booking row + ledger rows) is all-or-nothing and all
writers are serialized: under concurrent fire exactly one request wins
each seat.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .config import Policy
from .core import (
    Booking,
    BookingStatus,
    CoinReason,
    Money,
    SeatId,
    Show,
)
from .db import Database
from .errors import (
    AlreadyCancelled,
    AlreadyRewarded,
    Houseful,
    InsufficientCoins,
    InvalidSeat,
    NotFound,
    NotOwner,
    PastShowtime,
    SeatTaken,
    ShowStarted,
    TooLateToCancel,
    UnknownMovie,
    UnknownShow,
    UnknownUser,
    UnknownVenue,
)


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class Quote:
    subtotal: Money
    max_redeemable_coins: int
    coins_redeemed: int
    discount: Money
    total: Money


@dataclass(frozen=True)
class Refund:
    booking_id: int
    amount: Money
    coins_returned: int
    coins_revoked: int


class BookingService:
    def __init__(self, db: Database, policy: Policy | None = None):
        self.db = db
        self.policy = policy or Policy()

    # -- shows -------------------------------------------------------------

    def create_show(self, movie_id: int, venue_id: int, starts_at: int,
                    price_per_seat: Money, now: int | None = None) -> Show:
        now = now_ms() if now is None else now
        if self.db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        if self.db.get_venue(venue_id) is None:
            raise UnknownVenue(f"venue {venue_id}")
        if starts_at <= now:
            raise PastShowtime(f"starts_at {starts_at} is not in the future")
        show_id = self.db.insert_show(movie_id, venue_id, starts_at, price_per_seat)
        return self.db.get_show(show_id)

    # -- quoting -----------------------------------------------------------

    def quote(self, show: Show, n_seats: int, coins_requested: int,
              user_balance: int) -> Quote:
        if n_seats < 1:
            raise ValueError("n_seats must be >= 1")
        subtotal = show.price_per_seat.scaled(n_seats)
        cap = (self.policy.redeem_cap_pct * subtotal.amount_minor
               // (100 * self.policy.coin_value_minor))
        max_redeemable = max(0, min(user_balance, cap))
        coins_redeemed = max(0, min(coins_requested, max_redeemable))
        discount = Money(coins_redeemed * self.policy.coin_value_minor,
                         subtotal.currency_code)
        return Quote(
            subtotal=subtotal,
            max_redeemable_coins=max_redeemable,
            coins_redeemed=coins_redeemed,
            discount=discount,
            total=subtotal - discount,
        )

    # -- booking -----------------------------------------------------------

    def book_seats(self, user_id: int, show_id: int, seats: set[SeatId],
                   coins_requested: int = 0, now: int | None = None) -> Booking:
        now = now_ms() if now is None else now
        if not seats:
            raise InvalidSeat("no seats requested")
        if coins_requested < 0:
            raise InsufficientCoins("negative coin request")
        if self.db.get_user(user_id) is None:
            raise UnknownUser(f"user {user_id}")
        with self.db.transaction() as conn:
            show = self.db.get_show(show_id)
            if show is None:
                raise UnknownShow(f"show {show_id}")
            venue = self.db.get_venue(show.venue_id)
            for s in seats:
                if not (0 <= s.row < venue.rows and 0 <= s.col < venue.cols):
                    raise InvalidSeat(f"seat {s.label()} outside {venue.rows}x{venue.cols} grid")
            if now >= show.starts_at:
                raise ShowStarted("show already started")
            if len(show.sold) >= venue.capacity:
                raise Houseful(f"show {show_id} is houseful")
            taken = sorted(seats & show.sold)
            if taken:
                raise SeatTaken(taken)
            balance = self.db.coin_balance(user_id)
            if coins_requested > balance:
                raise InsufficientCoins(
                    f"requested {coins_requested}, balance {balance}")
            q = self.quote(show, len(seats), coins_requested, balance)
            self.db.set_show_sold(conn, show_id, show.sold | seats)
            booking_id = self.db.insert_booking(
                conn, user_id, show_id, seats, q.total, q.coins_redeemed, now)
            if q.coins_redeemed > 0:
                self.db.ledger_append(conn, user_id, -q.coins_redeemed,
                                      CoinReason.REDEEM, booking_id, now)
            earned = self.policy.earn_per_seat * len(seats)
            if earned > 0:
                self.db.ledger_append(conn, user_id, earned,
                                      CoinReason.BOOKING_EARN, booking_id, now)
        return self.db.get_booking(booking_id)

    def cancel_booking(self, user_id: int, booking_id: int,
                       now: int | None = None, is_admin: bool = False) -> Refund:
        now = now_ms() if now is None else now
        with self.db.transaction() as conn:
            booking = self.db.get_booking(booking_id)
            if booking is None:
                raise NotFound(f"booking {booking_id}")
            if booking.user_id != user_id and not is_admin:
                raise NotOwner(f"booking {booking_id} belongs to another user")
            if booking.status is BookingStatus.CANCELLED:
                raise AlreadyCancelled(f"booking {booking_id}")
            show = self.db.get_show(booking.show_id)
            cutoff = show.starts_at - self.policy.cancel_cutoff_hours * 3_600_000
            if now > cutoff:
                raise TooLateToCancel(
                    f"within {self.policy.cancel_cutoff_hours}h of showtime")
            self.db.set_booking_status(conn, booking_id, BookingStatus.CANCELLED)
            self.db.set_show_sold(conn, booking.show_id,
                                  show.sold - booking.seats)
            if booking.coins_redeemed > 0:
                self.db.ledger_append(conn, booking.user_id,
                                      booking.coins_redeemed,
                                      CoinReason.REDEEM_RETURN, booking_id, now)
            earned = self.policy.earn_per_seat * len(booking.seats)
            if earned > 0:
                self.db.ledger_append(conn, booking.user_id, -earned,
                                      CoinReason.REVOKE_ON_CANCEL, booking_id,
                                      now)
        return Refund(booking_id=booking_id, amount=booking.paid,
                      coins_returned=booking.coins_redeemed,
                      coins_revoked=earned)

    # -- coins -------------------------------------------------------------

    def coin_balance(self, user_id: int) -> int:
        if self.db.get_user(user_id) is None:
            raise UnknownUser(f"user {user_id}")
        return self.db.coin_balance(user_id)

    def earn_review_coins(self, user_id: int, review_id: int,
                          now: int | None = None):
        """One +review_earn ledger entry per (user, movie); ref is the review."""
        now = now_ms() if now is None else now
        with self.db.transaction() as conn:
            review = self.db.get_review(review_id)
            if review is None:
                raise NotFound(f"review {review_id}")
            for txn in self.db.ledger_for_user(user_id):
                if txn.reason is CoinReason.REVIEW_EARN and txn.ref_id == review_id:
                    raise AlreadyRewarded(f"review {review_id}")
            txn_id = self.db.ledger_append(conn, user_id,
                                           self.policy.review_earn,
                                           CoinReason.REVIEW_EARN, review_id,
                                           now)
        for txn in self.db.ledger_for_user(user_id):
            if txn.txn_id == txn_id:
                return txn
