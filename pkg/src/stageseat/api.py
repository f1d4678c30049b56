"""HTTP/JSON surface binding every service module.

Bearer tokens in the Authorization header; admin routes live under
/api/admin and require the admin role. Every error body is
`{"error": <code>, "message": <text>}`.
"""

from __future__ import annotations

import re
import time

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import sentiment
from .auth import SessionManager, Session, hash_password, verify_password
from .booking import BookingService, now_ms
from .catalog import CatalogService, SearchQuery
from .config import ServerConfig
from .core import CoinReason, Money, Role, seat_label_parse
from .db import Database
from .errors import (
    AlreadyCancelled,
    AlreadyRewarded,
    ConstraintViolation,
    DiscountExceedsSubtotal,
    DuplicateEmail,
    DuplicateUsername,
    Houseful,
    InsufficientCoins,
    InvalidCredentials,
    InvalidQuery,
    InvalidSeat,
    InvalidWindow,
    NotFound,
    NotOwner,
    OutOfRange,
    ParseError,
    PastShowtime,
    SeatTaken,
    ShowStarted,
    StageSeatError,
    TooLateToCancel,
    UnknownMovie,
    UnknownShow,
    UnknownUser,
    UnknownVenue,
    WeakPassword,
)
from .reports import ReportService, to_csv

_STATUS = {
    DuplicateUsername: 409,
    DuplicateEmail: 409,
    WeakPassword: 400,
    InvalidCredentials: 401,
    SeatTaken: 409,
    Houseful: 409,
    AlreadyCancelled: 409,
    AlreadyRewarded: 409,
    ConstraintViolation: 409,
    ShowStarted: 422,
    TooLateToCancel: 422,
    InsufficientCoins: 422,
    DiscountExceedsSubtotal: 422,
    InvalidSeat: 400,
    InvalidQuery: 400,
    InvalidWindow: 400,
    ParseError: 400,
    OutOfRange: 400,
    PastShowtime: 400,
    NotOwner: 403,
    NotFound: 404,
    UnknownMovie: 404,
    UnknownVenue: 404,
    UnknownShow: 404,
    UnknownUser: 404,
}

_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
MIN_PASSWORD_LEN = 8


class RegisterBody(BaseModel):
    username: str = Field(min_length=1)
    email: str
    password: str


class LoginBody(BaseModel):
    username: str
    password: str


class BookingBody(BaseModel):
    show_id: int
    seats: list[str] = Field(min_length=1)
    coins_redeemed: int = 0


class ReviewBody(BaseModel):
    rating: int = Field(ge=1, le=5)
    text: str = ""


class ProfileBody(BaseModel):
    email: str | None = None
    preferences: dict | None = None


class MovieBody(BaseModel):
    title: str = Field(min_length=1)
    description: str = ""
    genres: list[str] = Field(min_length=1)
    director: str = ""
    cast: list[str] = []
    language: str = ""
    release_date: str
    poster_url: str | None = None
    trailer_url: str | None = None


class VenueBody(BaseModel):
    name: str = Field(min_length=1)
    address: str = ""
    amenities: list[str] = []
    accessibility: list[str] = []
    rows: int = Field(ge=1, le=26)
    cols: int = Field(ge=1, le=99)


class ShowBody(BaseModel):
    movie_id: int
    venue_id: int
    starts_at: int
    price_minor: int = Field(ge=0)


class UserAdminBody(BaseModel):
    role: str | None = None
    email: str | None = None


def create_app(cfg: ServerConfig | None = None, db: Database | None = None) -> FastAPI:
    cfg = cfg or ServerConfig()
    db = db or Database(cfg.database_path)
    sessions = SessionManager(ttl_hours=cfg.session_ttl_hours)
    booking_svc = BookingService(db, cfg.policy)
    catalog_svc = CatalogService(db)
    report_svc = ReportService(db)
    if cfg.lexicon_path:
        with open(cfg.lexicon_path, "rb") as fh:
            lexicon = sentiment.load_lexicon(fh)
    else:
        lexicon = sentiment.load_seed_lexicon()

    _bootstrap_admin(db, cfg)

    app = FastAPI(title="stageseat", openapi_url=None)
    app.state.db = db
    app.state.sessions = sessions
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(StageSeatError)
    async def on_domain_error(_req: Request, exc: StageSeatError):
        status = _STATUS.get(type(exc), 500)
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": exc.message})

    def current_session(authorization: str | None = Header(default=None)) -> Session:
        if not authorization or not authorization.startswith("Bearer "):
            raise InvalidCredentials("missing bearer token")
        session = sessions.get(authorization[len("Bearer "):])
        if session is None:
            raise InvalidCredentials("invalid or expired token")
        return session

    def admin_session(session: Session = Depends(current_session)) -> Session:
        if session.role is not Role.ADMIN:
            raise NotOwner("admin role required")
        return session

    # -- auth -------------------------------------------------------------

    @app.post("/api/register", status_code=201)
    def register(body: RegisterBody):
        if len(body.password) < MIN_PASSWORD_LEN:
            raise WeakPassword(f"password must be at least {MIN_PASSWORD_LEN} characters")
        if not _EMAIL_RE.match(body.email):
            raise InvalidQuery("malformed email")
        if db.get_user_by_username(body.username):
            raise DuplicateUsername(body.username)
        if any(u.email == body.email for u in db.list_users()):
            raise DuplicateEmail(body.email)
        uid = db.insert_user(body.username, body.email,
                             hash_password(body.password, cfg.pbkdf2_iterations),
                             Role.USER, {}, now_ms())
        return _user_json(db.get_user(uid))

    @app.post("/api/login")
    def login(body: LoginBody):
        user = db.get_user_by_username(body.username)
        # Hash even for unknown users so timing does not leak existence.
        stored = user.password_digest if user else hash_password("x", 1000)
        if user is None or not verify_password(body.password, stored):
            raise InvalidCredentials("invalid username or password")
        session = sessions.create(user.user_id, user.role)
        return {"token": session.token, "user_id": user.user_id,
                "role": user.role.value, "expires_at": session.expires_at}

    @app.get("/api/policy")
    def policy():
        return cfg.policy.as_dict()

    # -- movies ------------------------------------------------------------

    @app.get("/api/movies")
    def movies(q: str | None = None, genre: str | None = None,
               language: str | None = None, date_from: str | None = None,
               date_to: str | None = None, min_rating: float | None = None,
               sort: str = "relevance"):
        query = SearchQuery(text=q, genre=genre, language=language,
                            date_from=date_from, date_to=date_to,
                            min_rating=min_rating, sort=sort)
        return [_movie_json(m) for m in catalog_svc.search_movies(query)]

    @app.get("/api/movies/{movie_id}")
    def movie_detail(movie_id: int):
        movie = db.get_movie(movie_id)
        if movie is None:
            raise UnknownMovie(f"movie {movie_id}")
        agg = catalog_svc.aggregate_sentiment(movie_id)
        ratings = [r.rating for r in db.list_reviews(movie_id)]
        return {**_movie_json(movie),
                "mean_rating": sum(ratings) / len(ratings) if ratings else None,
                "sentiment": {
                    "n_reviews": agg.n_reviews, "n_positive": agg.n_positive,
                    "n_negative": agg.n_negative, "n_neutral": agg.n_neutral,
                    "mean_compound": agg.mean_compound}}

    @app.get("/api/movies/{movie_id}/reviews")
    def movie_reviews(movie_id: int):
        if db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        return [_review_json(r) for r in db.list_reviews(movie_id)]

    @app.post("/api/movies/{movie_id}/reviews", status_code=201)
    def post_review(movie_id: int, body: ReviewBody,
                    session: Session = Depends(current_session)):
        if db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        score = sentiment.score_text(lexicon, body.text)
        now = now_ms()
        with db.transaction() as conn:
            review_id = db.insert_review(conn, session.user_id, movie_id,
                                         body.rating, body.text,
                                         score.compound, score.label, now)
            db.ledger_append(conn, session.user_id, cfg.policy.review_earn,
                             CoinReason.REVIEW_EARN, review_id, now)
        review = db.get_review(review_id)
        return {**_review_json(review),
                "coin_balance": db.coin_balance(session.user_id)}

    @app.get("/api/movies/{movie_id}/shows")
    def movie_shows(movie_id: int, date: str | None = None):
        pairs = catalog_svc.list_shows(movie_id=movie_id, date=date)
        return [_show_json(s, remaining, db) for s, remaining in pairs]

    @app.get("/api/collections")
    def collections():
        return catalog_svc.curated_collections()

    # -- venues / shows ----------------------------------------------------

    @app.get("/api/venues")
    def venues(q: str = ""):
        return [_venue_json(v) for v in catalog_svc.search_venues(q)]

    @app.get("/api/venues/{venue_id}")
    def venue_detail(venue_id: int):
        venue = db.get_venue(venue_id)
        if venue is None:
            raise UnknownVenue(f"venue {venue_id}")
        return _venue_json(venue)

    @app.get("/api/venues/{venue_id}/shows")
    def venue_shows(venue_id: int, date: str | None = None):
        pairs = catalog_svc.list_shows(venue_id=venue_id, date=date)
        return [_show_json(s, remaining, db) for s, remaining in pairs]

    @app.get("/api/shows/{show_id}")
    def show_detail(show_id: int):
        show = db.get_show(show_id)
        if show is None:
            raise UnknownShow(f"show {show_id}")
        venue = db.get_venue(show.venue_id)
        return _show_json(show, venue.capacity - len(show.sold), db)

    @app.get("/api/shows/{show_id}/seats")
    def show_seats(show_id: int):
        grid = catalog_svc.seat_availability(show_id)
        show = db.get_show(show_id)
        return {"show_id": show_id, "rows": len(grid),
                "cols": len(grid[0]) if grid else 0, "grid": grid,
                "price_minor": show.price_per_seat.amount_minor,
                "currency": show.price_per_seat.currency_code,
                "starts_at": show.starts_at}

    @app.get("/api/shows/{show_id}/quote")
    def show_quote(show_id: int, seats: int = Query(default=1, ge=1),
                   coins: int = Query(default=0, ge=0),
                   session: Session = Depends(current_session)):
        """Server-side price quote so clients never do discount math."""
        show = db.get_show(show_id)
        if show is None:
            raise UnknownShow(f"show {show_id}")
        q = booking_svc.quote(show, seats, coins,
                              db.coin_balance(session.user_id))
        return {"show_id": show_id, "n_seats": seats,
                "subtotal_minor": q.subtotal.amount_minor,
                "max_redeemable_coins": q.max_redeemable_coins,
                "coins_redeemed": q.coins_redeemed,
                "discount_minor": q.discount.amount_minor,
                "total_minor": q.total.amount_minor,
                "currency": q.total.currency_code}

    # -- bookings ----------------------------------------------------------

    @app.post("/api/bookings", status_code=201)
    def create_booking(body: BookingBody,
                       session: Session = Depends(current_session)):
        seats = {seat_label_parse(label) for label in body.seats}
        booking = booking_svc.book_seats(session.user_id, body.show_id, seats,
                                         body.coins_redeemed)
        return {**_booking_json(booking),
                "coin_balance": db.coin_balance(session.user_id)}

    @app.delete("/api/bookings/{booking_id}")
    def cancel_booking(booking_id: int,
                       session: Session = Depends(current_session)):
        refund = booking_svc.cancel_booking(
            session.user_id, booking_id, is_admin=session.role is Role.ADMIN)
        return {"booking_id": refund.booking_id,
                "refund_minor": refund.amount.amount_minor,
                "currency": refund.amount.currency_code,
                "coins_returned": refund.coins_returned,
                "coins_revoked": refund.coins_revoked,
                "coin_balance": db.coin_balance(session.user_id)}

    @app.get("/api/me/bookings")
    def my_bookings(session: Session = Depends(current_session)):
        return [_booking_json(b) for b in db.list_bookings(session.user_id)]

    @app.get("/api/me/profile")
    def my_profile(session: Session = Depends(current_session)):
        return _user_json(db.get_user(session.user_id))

    @app.put("/api/me/profile")
    def update_profile(body: ProfileBody,
                       session: Session = Depends(current_session)):
        fields = {}
        if body.email is not None:
            if not _EMAIL_RE.match(body.email):
                raise InvalidQuery("malformed email")
            fields["email"] = body.email
        if body.preferences is not None:
            fields["preferences"] = body.preferences
        if fields:
            db.update_user(session.user_id, **fields)
        return _user_json(db.get_user(session.user_id))

    @app.get("/api/me/coins")
    def my_coins(session: Session = Depends(current_session)):
        ledger = db.ledger_for_user(session.user_id)
        return {"balance": db.coin_balance(session.user_id),
                "ledger": [{"txn_id": t.txn_id, "delta": t.delta,
                            "reason": t.reason.value, "ref_id": t.ref_id,
                            "created_at": t.created_at} for t in ledger]}

    @app.get("/api/recommendations")
    def recommendations(k: int = Query(default=10, ge=1),
                        session: Session = Depends(current_session)):
        recs = catalog_svc.recommend(session.user_id, k)
        return [{"movie_id": r.movie_id, "score": r.score,
                 "components": {"genre_affinity": r.genre_affinity,
                                "norm_rating": r.norm_rating,
                                "sentiment_index": r.sentiment_index}}
                for r in recs]

    # -- admin: catalog CRUD ----------------------------------------------

    @app.post("/api/admin/movies", status_code=201)
    def admin_create_movie(body: MovieBody, _s: Session = Depends(admin_session)):
        mid = db.insert_movie({**body.model_dump(), "genres": set(body.genres)})
        return _movie_json(db.get_movie(mid))

    @app.put("/api/admin/movies/{movie_id}")
    def admin_update_movie(movie_id: int, body: MovieBody,
                           _s: Session = Depends(admin_session)):
        if db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        db.update_movie(movie_id, {**body.model_dump(), "genres": set(body.genres)})
        return _movie_json(db.get_movie(movie_id))

    @app.delete("/api/admin/movies/{movie_id}", status_code=204)
    def admin_delete_movie(movie_id: int, _s: Session = Depends(admin_session)):
        if db.get_movie(movie_id) is None:
            raise UnknownMovie(f"movie {movie_id}")
        db.delete_movie(movie_id)
        return Response(status_code=204)

    @app.post("/api/admin/venues", status_code=201)
    def admin_create_venue(body: VenueBody, _s: Session = Depends(admin_session)):
        vid = db.insert_venue(body.model_dump())
        return _venue_json(db.get_venue(vid))

    @app.put("/api/admin/venues/{venue_id}")
    def admin_update_venue(venue_id: int, body: VenueBody,
                           _s: Session = Depends(admin_session)):
        if db.get_venue(venue_id) is None:
            raise UnknownVenue(f"venue {venue_id}")
        db.update_venue(venue_id, body.model_dump())
        return _venue_json(db.get_venue(venue_id))

    @app.delete("/api/admin/venues/{venue_id}", status_code=204)
    def admin_delete_venue(venue_id: int, _s: Session = Depends(admin_session)):
        if db.get_venue(venue_id) is None:
            raise UnknownVenue(f"venue {venue_id}")
        db.delete_venue(venue_id)
        return Response(status_code=204)

    @app.post("/api/admin/shows", status_code=201)
    def admin_create_show(body: ShowBody, _s: Session = Depends(admin_session)):
        show = booking_svc.create_show(
            body.movie_id, body.venue_id, body.starts_at,
            Money(body.price_minor, cfg.policy.currency_code))
        venue = db.get_venue(show.venue_id)
        return _show_json(show, venue.capacity, db)

    @app.put("/api/admin/shows/{show_id}")
    def admin_update_show(show_id: int, body: ShowBody,
                          _s: Session = Depends(admin_session)):
        show = db.get_show(show_id)
        if show is None:
            raise UnknownShow(f"show {show_id}")
        db.update_show(show_id, body.starts_at,
                       Money(body.price_minor, cfg.policy.currency_code))
        show = db.get_show(show_id)
        venue = db.get_venue(show.venue_id)
        return _show_json(show, venue.capacity - len(show.sold), db)

    @app.delete("/api/admin/shows/{show_id}", status_code=204)
    def admin_delete_show(show_id: int, _s: Session = Depends(admin_session)):
        if db.get_show(show_id) is None:
            raise UnknownShow(f"show {show_id}")
        db.delete_show(show_id)
        return Response(status_code=204)

    # -- admin: users and reports -----------------------------------------

    @app.get("/api/admin/users")
    def admin_users(_s: Session = Depends(admin_session)):
        return [_user_json(u) for u in db.list_users()]

    @app.get("/api/admin/users/{user_id}")
    def admin_user(user_id: int, _s: Session = Depends(admin_session)):
        user = db.get_user(user_id)
        if user is None:
            raise UnknownUser(f"user {user_id}")
        return _user_json(user)

    @app.put("/api/admin/users/{user_id}")
    def admin_update_user(user_id: int, body: UserAdminBody,
                          _s: Session = Depends(admin_session)):
        if db.get_user(user_id) is None:
            raise UnknownUser(f"user {user_id}")
        fields = {}
        if body.role is not None:
            fields["role"] = Role(body.role)
        if body.email is not None:
            fields["email"] = body.email
        if fields:
            db.update_user(user_id, **fields)
        return _user_json(db.get_user(user_id))

    @app.get("/api/admin/reports/sales")
    def report_sales(from_ms: int = 0, to_ms: int | None = None,
                     group_by: str = "movie", format: str = "json",
                     _s: Session = Depends(admin_session)):
        report = report_svc.sales_report(
            from_ms, to_ms if to_ms is not None else now_ms(), group_by)
        return _maybe_csv(report, format)

    @app.get("/api/admin/reports/occupancy")
    def report_occupancy(venue_id: int, date: str | None = None,
                         format: str = "json",
                         _s: Session = Depends(admin_session)):
        return _maybe_csv(report_svc.occupancy_report(venue_id, date), format)

    @app.get("/api/admin/reports/activity")
    def report_activity(from_ms: int = 0, to_ms: int | None = None,
                        format: str = "json",
                        _s: Session = Depends(admin_session)):
        report = report_svc.activity_report(
            from_ms, to_ms if to_ms is not None else now_ms())
        return _maybe_csv(report, format)

    @app.get("/api/admin/reports/sentiment")
    def report_sentiment(movie_id: int, format: str = "json",
                         _s: Session = Depends(admin_session)):
        return _maybe_csv(report_svc.sentiment_report(movie_id), format)

    return app


def _maybe_csv(report: dict, fmt: str):
    if fmt == "csv":
        return PlainTextResponse(to_csv(report), media_type="text/csv")
    return report


def _bootstrap_admin(db: Database, cfg: ServerConfig):
    if db.get_user_by_username(cfg.admin_user) is None:
        db.insert_user(cfg.admin_user, f"{cfg.admin_user}@stageseat.local",
                       hash_password(cfg.admin_password, cfg.pbkdf2_iterations),
                       Role.ADMIN, {}, int(time.time() * 1000))


def _user_json(u) -> dict:
    return {"user_id": u.user_id, "username": u.username, "email": u.email,
            "role": u.role.value, "preferences": u.preferences,
            "created_at": u.created_at}


def _movie_json(m) -> dict:
    return {"movie_id": m.movie_id, "title": m.title,
            "description": m.description, "genres": sorted(m.genres),
            "director": m.director, "cast": m.cast, "language": m.language,
            "release_date": m.release_date, "poster_url": m.poster_url,
            "trailer_url": m.trailer_url}


def _venue_json(v) -> dict:
    return {"venue_id": v.venue_id, "name": v.name, "address": v.address,
            "amenities": v.amenities, "accessibility": v.accessibility,
            "rows": v.rows, "cols": v.cols, "capacity": v.capacity}


def _show_json(s, seats_remaining: int, db: Database) -> dict:
    movie = db.get_movie(s.movie_id)
    return {"show_id": s.show_id, "movie_id": s.movie_id,
            "movie_title": movie.title if movie else None,
            "venue_id": s.venue_id, "starts_at": s.starts_at,
            "price_minor": s.price_per_seat.amount_minor,
            "currency": s.price_per_seat.currency_code,
            "seats_remaining": seats_remaining}


def _booking_json(b) -> dict:
    return {"booking_id": b.booking_id, "user_id": b.user_id,
            "show_id": b.show_id,
            "seats": sorted(s.label() for s in b.seats),
            "paid_minor": b.paid.amount_minor,
            "currency": b.paid.currency_code,
            "coins_redeemed": b.coins_redeemed, "status": b.status.value,
            "created_at": b.created_at}


def _review_json(r) -> dict:
    return {"review_id": r.review_id, "user_id": r.user_id,
            "movie_id": r.movie_id, "rating": r.rating, "text": r.text,
            "sentiment": {"compound": r.compound, "label": r.label},
            "created_at": r.created_at}
