"""Exception taxonomy shared across the service.

Every error carries a stable machine `code` so the HTTP layer can map it
onto the documented JSON error shape without string matching.
"""

from __future__ import annotations


class StageSeatError(Exception):
    code = "internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# -- core-domain ----------------------------------------------------------

class OutOfRange(StageSeatError):
    code = "out_of_range"


class ParseError(StageSeatError):
    code = "parse_error"


class DiscountExceedsSubtotal(StageSeatError):
    code = "discount_exceeds_subtotal"


# -- lookups --------------------------------------------------------------

class UnknownMovie(StageSeatError):
    code = "unknown_movie"


class UnknownVenue(StageSeatError):
    code = "unknown_venue"


class UnknownShow(StageSeatError):
    code = "unknown_show"


class UnknownUser(StageSeatError):
    code = "unknown_user"


class NotFound(StageSeatError):
    code = "not_found"


# -- booking --------------------------------------------------------------

class PastShowtime(StageSeatError):
    code = "past_showtime"


class SeatTaken(StageSeatError):
    code = "seat_taken"

    def __init__(self, seats):
        self.seats = list(seats)
        labels = ",".join(sorted(s.label() for s in self.seats))
        super().__init__(f"seats already sold: {labels}")


class Houseful(StageSeatError):
    code = "houseful"


class ShowStarted(StageSeatError):
    code = "show_started"


class InvalidSeat(StageSeatError):
    code = "invalid_seat"


class InsufficientCoins(StageSeatError):
    code = "insufficient_coins"


class NotOwner(StageSeatError):
    code = "not_owner"


class AlreadyCancelled(StageSeatError):
    code = "already_cancelled"


class TooLateToCancel(StageSeatError):
    code = "too_late_to_cancel"


class AlreadyRewarded(StageSeatError):
    code = "already_rewarded"


# -- catalog / reports ----------------------------------------------------

class InvalidQuery(StageSeatError):
    code = "invalid_query"


class InvalidWindow(StageSeatError):
    code = "invalid_window"


# -- persistence ----------------------------------------------------------

class ConstraintViolation(StageSeatError):
    code = "constraint_violation"

    def __init__(self, constraint: str, message: str = ""):
        self.constraint = constraint
        super().__init__(message or f"constraint violated: {constraint}")


class Conflict(StageSeatError):
    code = "conflict"


class ImportIntoNonEmptyStore(StageSeatError):
    code = "import_into_non_empty_store"


class MalformedLine(StageSeatError):
    code = "malformed_line"

    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(message or f"malformed fixture line {line_no}")


# -- sentiment ------------------------------------------------------------

class FormatError(StageSeatError):
    code = "format_error"

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


# -- auth -----------------------------------------------------------------

class DuplicateUsername(StageSeatError):
    code = "duplicate_username"


class DuplicateEmail(StageSeatError):
    code = "duplicate_email"


class WeakPassword(StageSeatError):
    code = "weak_password"


class InvalidCredentials(StageSeatError):
    code = "invalid_credentials"


# -- bench ----------------------------------------------------------------

class ConfigError(StageSeatError):
    code = "config_error"


class TargetUnreachable(StageSeatError):
    code = "target_unreachable"


class EmptySample(StageSeatError):
    code = "empty_sample"
