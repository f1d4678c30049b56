"""Password digests and bearer-token sessions.

Passwords are salted PBKDF2-HMAC-SHA256; verification is constant-time.
Session tokens are 256-bit URL-safe random strings held in memory and
checked against their expiry on every use.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import time
from dataclasses import dataclass

from .core import Role

DIGEST_SCHEME = "pbkdf2-sha256"


def hash_password(password: str, iterations: int = 60_000) -> str:
    salt = secrets.token_bytes(16)
    dk = hashlib.pbkdf2_hmac("sha256", password.encode(), salt, iterations)
    return f"{DIGEST_SCHEME}${iterations}${salt.hex()}${dk.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, iterations, salt_hex, digest_hex = stored.split("$")
        if scheme != DIGEST_SCHEME:
            return False
        dk = hashlib.pbkdf2_hmac("sha256", password.encode(),
                                 bytes.fromhex(salt_hex), int(iterations))
        return hmac.compare_digest(dk.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


@dataclass(frozen=True)
class Session:
    token: str
    user_id: int
    role: Role
    expires_at: int  # epoch ms


class SessionManager:
    def __init__(self, ttl_hours: int = 24):
        self.ttl_ms = ttl_hours * 3_600_000
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, user_id: int, role: Role, now: int | None = None) -> Session:
        now = int(time.time() * 1000) if now is None else now
        session = Session(token=secrets.token_urlsafe(32), user_id=user_id,
                          role=role, expires_at=now + self.ttl_ms)
        with self._lock:
            self._sessions[session.token] = session
        return session

    def get(self, token: str, now: int | None = None) -> Session | None:
        now = int(time.time() * 1000) if now is None else now
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                return None
            if now >= session.expires_at:
                del self._sessions[token]
                return None
            return session

    def revoke(self, token: str):
        with self._lock:
            self._sessions.pop(token, None)
