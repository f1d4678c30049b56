import threading

import pytest
from fastapi.testclient import TestClient

from stageseat.api import create_app
from stageseat.config import Policy, ServerConfig
from stageseat.db import Database
from conftest import DAY, NOW

import stageseat.booking as booking_mod


@pytest.fixture
def app():
    cfg = ServerConfig(database_path=":memory:", admin_user="admin",
                       admin_password="super-secret-pw", pbkdf2_iterations=500)
    return create_app(cfg, Database(":memory:"))


@pytest.fixture
def client(app):
    return TestClient(app)


def register_and_login(client, name="alice"):
    client.post("/api/register", json={
        "username": name, "email": f"{name}@example.com",
        "password": "password-123"})
    resp = client.post("/api/login", json={
        "username": name, "password": "password-123"})
    return {"Authorization": f"Bearer {resp.json()['token']}"}


def admin_login(client):
    resp = client.post("/api/login", json={
        "username": "admin", "password": "super-secret-pw"})
    return {"Authorization": f"Bearer {resp.json()['token']}"}


def make_show(client, admin, starts_at=NOW + 2000 * DAY, rows=5, cols=10,
              price=25000):
    movie = client.post("/api/admin/movies", headers=admin, json={
        "title": f"Movie {starts_at}", "genres": ["drama"],
        "release_date": "2024-01-01"}).json()
    venue = client.post("/api/admin/venues", headers=admin, json={
        "name": f"Venue {starts_at}", "rows": rows, "cols": cols}).json()
    show = client.post("/api/admin/shows", headers=admin, json={
        "movie_id": movie["movie_id"], "venue_id": venue["venue_id"],
        "starts_at": starts_at, "price_minor": price}).json()
    return movie, venue, show


class TestAuth:
    def test_register_ok(self, client):
        resp = client.post("/api/register", json={
            "username": "zed", "email": "zed@example.com",
            "password": "longenough"})
        assert resp.status_code == 201
        assert resp.json()["role"] == "user"
        assert "password" not in resp.text

    def test_duplicate_username(self, client):
        body = {"username": "dup", "email": "a@example.com",
                "password": "longenough"}
        client.post("/api/register", json=body)
        resp = client.post("/api/register",
                           json={**body, "email": "b@example.com"})
        assert resp.status_code == 409
        assert resp.json()["error"] == "duplicate_username"

    def test_weak_password(self, client):
        resp = client.post("/api/register", json={
            "username": "w", "email": "w@example.com", "password": "abc"})
        assert resp.status_code == 400
        assert resp.json()["error"] == "weak_password"

    def test_wrong_password_indistinct(self, client):
        register_and_login(client)
        bad_pw = client.post("/api/login", json={
            "username": "alice", "password": "wrong-password"})
        no_user = client.post("/api/login", json={
            "username": "ghost", "password": "wrong-password"})
        assert bad_pw.status_code == no_user.status_code == 401
        assert bad_pw.json() == no_user.json()

    def test_no_token_401(self, client):
        assert client.get("/api/me/bookings").status_code == 401

    def test_expired_token_401(self, app, client):
        headers = register_and_login(client)
        token = headers["Authorization"].split()[1]
        session = app.state.sessions._sessions[token]
        app.state.sessions._sessions[token] = type(session)(
            token=token, user_id=session.user_id, role=session.role,
            expires_at=0)
        assert client.get("/api/me/bookings", headers=headers).status_code == 401

    def test_user_token_on_admin_403(self, client):
        headers = register_and_login(client)
        resp = client.get("/api/admin/users", headers=headers)
        assert resp.status_code == 403

    def test_admin_passes_user_routes(self, client):
        admin = admin_login(client)
        assert client.get("/api/me/profile", headers=admin).status_code == 200

    def test_admin_route_walk(self, app, client):
        """Every /api/admin route: 403 for user tokens, 401 without."""
        user = register_and_login(client)
        admin_routes = [r for r in app.routes
                        if getattr(r, "path", "").startswith("/api/admin")]
        assert admin_routes
        for route in admin_routes:
            path = route.path
            for name in ("movie_id", "venue_id", "show_id", "user_id"):
                path = path.replace("{" + name + "}", "1")
            for method in route.methods - {"HEAD", "OPTIONS"}:
                r = client.request(method, path, headers=user)
                assert r.status_code == 403, (method, path, r.status_code)
                r = client.request(method, path)
                assert r.status_code == 401, (method, path, r.status_code)
                r = client.request(
                    method, path,
                    headers={"Authorization": "Bearer bogus-token"})
                assert r.status_code == 401, (method, path)

    def test_policy_echo(self, client):
        resp = client.get("/api/policy")
        assert resp.status_code == 200
        assert resp.json() == Policy().as_dict()


class TestBookingFlow:
    def test_end_to_end(self, client, monkeypatch):
        monkeypatch.setattr(booking_mod, "now_ms", lambda: NOW)
        admin = admin_login(client)
        user = register_and_login(client)
        movie, venue, show = make_show(client, admin)

        seats = client.get(f"/api/shows/{show['show_id']}/seats").json()
        assert seats["rows"] == 5 and seats["cols"] == 10
        assert all(c == "free" for row in seats["grid"] for c in row)

        resp = client.post("/api/bookings", headers=user, json={
            "show_id": show["show_id"], "seats": ["A1", "A2"],
            "coins_redeemed": 0})
        assert resp.status_code == 201
        body = resp.json()
        assert body["seats"] == ["A1", "A2"]
        assert body["paid_minor"] == 50000
        assert body["coin_balance"] == 2

        grid = client.get(f"/api/shows/{show['show_id']}/seats").json()["grid"]
        assert grid[0][0] == "sold" and grid[0][1] == "sold"

        taken = client.post("/api/bookings", headers=user, json={
            "show_id": show["show_id"], "seats": ["A1"], "coins_redeemed": 0})
        assert taken.status_code == 409
        assert taken.json()["error"] == "seat_taken"

        mine = client.get("/api/me/bookings", headers=user).json()
        assert len(mine) == 1

        cancel = client.delete(f"/api/bookings/{body['booking_id']}",
                               headers=user)
        assert cancel.status_code == 200
        assert cancel.json()["refund_minor"] == 50000
        assert cancel.json()["coin_balance"] == 0

    def test_quote_endpoint(self, client):
        admin = admin_login(client)
        user = register_and_login(client)
        _, _, show = make_show(client, admin)

        quote = client.get(f"/api/shows/{show['show_id']}/quote",
                           headers=user,
                           params={"seats": 2, "coins": 60}).json()
        assert quote["subtotal_minor"] == 50000
        assert quote["coins_redeemed"] == 0  # no balance yet
        assert quote["total_minor"] == 50000

        assert client.get(f"/api/shows/{show['show_id']}/quote"
                          ).status_code == 401
        missing = client.get("/api/shows/999999/quote", headers=user)
        assert missing.status_code == 404

    def test_review_flow(self, client):
        admin = admin_login(client)
        user = register_and_login(client)
        movie, _, _ = make_show(client, admin)
        resp = client.post(f"/api/movies/{movie['movie_id']}/reviews",
                           headers=user, json={"rating": 5,
                                               "text": "great movie"})
        assert resp.status_code == 201
        assert resp.json()["sentiment"]["label"] == "positive"
        assert resp.json()["coin_balance"] == 5

        dup = client.post(f"/api/movies/{movie['movie_id']}/reviews",
                          headers=user, json={"rating": 4, "text": "again"})
        assert dup.status_code == 409

        listed = client.get(f"/api/movies/{movie['movie_id']}/reviews").json()
        assert len(listed) == 1
        assert listed[0]["sentiment"]["label"] == "positive"

    def test_houseful_via_api(self, client, monkeypatch):
        monkeypatch.setattr(booking_mod, "now_ms", lambda: NOW)
        admin = admin_login(client)
        user = register_and_login(client)
        _, _, show = make_show(client, admin, rows=1, cols=2)
        ok = client.post("/api/bookings", headers=user, json={
            "show_id": show["show_id"], "seats": ["A1", "A2"],
            "coins_redeemed": 0})
        assert ok.status_code == 201
        full = client.post("/api/bookings", headers=user, json={
            "show_id": show["show_id"], "seats": ["A1"], "coins_redeemed": 0})
        assert full.status_code == 409
        assert full.json()["error"] == "houseful"

    def test_concurrent_bookings_no_500(self, client, monkeypatch):
        monkeypatch.setattr(booking_mod, "now_ms", lambda: NOW)
        admin = admin_login(client)
        _, _, show = make_show(client, admin, rows=2, cols=5)
        headers = [register_and_login(client, f"racer{i}") for i in range(10)]
        statuses = []
        lock = threading.Lock()

        def fire(i):
            resp = client.post("/api/bookings", headers=headers[i], json={
                "show_id": show["show_id"], "seats": ["A1", "A2"],
                "coins_redeemed": 0})
            with lock:
                statuses.append(resp.status_code)

        threads = [threading.Thread(target=fire, args=(i,)) for i in range(10)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert statuses.count(201) == 1
        assert statuses.count(409) == 9
        assert not any(s >= 500 for s in statuses)


class TestCatalogRoutes:
    def test_search_params(self, client):
        admin = admin_login(client)
        make_show(client, admin)
        resp = client.get("/api/movies", params={"q": "movie", "sort": "rating"})
        assert resp.status_code == 200
        assert len(resp.json()) == 1

    def test_movie_detail_includes_sentiment(self, client):
        admin = admin_login(client)
        user = register_and_login(client)
        movie, _, _ = make_show(client, admin)
        client.post(f"/api/movies/{movie['movie_id']}/reviews", headers=user,
                    json={"rating": 5, "text": "excellent"})
        detail = client.get(f"/api/movies/{movie['movie_id']}").json()
        assert detail["sentiment"]["n_positive"] == 1
        assert detail["mean_rating"] == 5

    def test_venue_search_and_shows(self, client):
        admin = admin_login(client)
        _, venue, show = make_show(client, admin)
        found = client.get("/api/venues", params={"q": "venue"}).json()
        assert found
        shows = client.get(f"/api/venues/{venue['venue_id']}/shows").json()
        assert shows[0]["show_id"] == show["show_id"]
        assert shows[0]["seats_remaining"] == 50

    def test_recommendations_need_auth(self, client):
        assert client.get("/api/recommendations").status_code == 401

    def test_recommendations(self, client):
        admin = admin_login(client)
        user = register_and_login(client)
        make_show(client, admin)
        resp = client.get("/api/recommendations", headers=user,
                          params={"k": 5})
        assert resp.status_code == 200

    def test_profile_update(self, client):
        user = register_and_login(client)
        resp = client.put("/api/me/profile", headers=user, json={
            "email": "new@example.com",
            "preferences": {"notify": True}})
        assert resp.json()["email"] == "new@example.com"
        assert resp.json()["preferences"] == {"notify": True}

    def test_coins_endpoint(self, client):
        user = register_and_login(client)
        resp = client.get("/api/me/coins", headers=user)
        assert resp.json() == {"balance": 0, "ledger": []}


class TestAdminRoutes:
    def test_crud_cycle(self, client):
        admin = admin_login(client)
        movie = client.post("/api/admin/movies", headers=admin, json={
            "title": "Edit Me", "genres": ["drama"],
            "release_date": "2024-05-01"}).json()
        updated = client.put(f"/api/admin/movies/{movie['movie_id']}",
                             headers=admin, json={
                                 "title": "Edited", "genres": ["drama"],
                                 "release_date": "2024-05-01"}).json()
        assert updated["title"] == "Edited"
        resp = client.delete(f"/api/admin/movies/{movie['movie_id']}",
                             headers=admin)
        assert resp.status_code == 204
        assert client.get(f"/api/movies/{movie['movie_id']}").status_code == 404

    def test_reports_json_and_csv(self, client, monkeypatch):
        monkeypatch.setattr(booking_mod, "now_ms", lambda: NOW)
        admin = admin_login(client)
        user = register_and_login(client)
        movie, venue, show = make_show(client, admin)
        client.post("/api/bookings", headers=user, json={
            "show_id": show["show_id"], "seats": ["B1"], "coins_redeemed": 0})

        sales = client.get("/api/admin/reports/sales", headers=admin,
                           params={"from_ms": 0, "to_ms": NOW + DAY})
        assert sales.json()["totals"]["tickets_sold"] == 1

        csv_resp = client.get("/api/admin/reports/sales", headers=admin,
                              params={"from_ms": 0, "to_ms": NOW + DAY,
                                      "format": "csv"})
        assert csv_resp.headers["content-type"].startswith("text/csv")
        assert csv_resp.text.splitlines()[0].startswith("key,")

        occ = client.get("/api/admin/reports/occupancy", headers=admin,
                         params={"venue_id": venue["venue_id"]})
        assert occ.json()["rows"][0]["sold"] == 1

        act = client.get("/api/admin/reports/activity", headers=admin,
                         params={"from_ms": 0, "to_ms": NOW + DAY})
        assert act.json()["rows"]

        sent = client.get("/api/admin/reports/sentiment", headers=admin,
                          params={"movie_id": movie["movie_id"]})
        assert sent.json()["aggregate"]["n_reviews"] == 0

    def test_user_management(self, client):
        admin = admin_login(client)
        register_and_login(client, "promote-me")
        users = client.get("/api/admin/users", headers=admin).json()
        target = next(u for u in users if u["username"] == "promote-me")
        resp = client.put(f"/api/admin/users/{target['user_id']}",
                          headers=admin, json={"role": "admin"})
        assert resp.json()["role"] == "admin"


class TestErrorShape:
    def test_error_body_schema(self, client):
        resp = client.get("/api/movies/9999")
        body = resp.json()
        assert set(body) == {"error", "message"}
        assert resp.status_code == 404

    def test_no_token_leak(self, client):
        user = register_and_login(client)
        profile = client.get("/api/me/profile", headers=user)
        assert "digest" not in profile.text
        assert "token" not in profile.text
