"""Service configuration: policy constants, listen address, paths.

Loaded from a JSON config file; every field has an env-var override
(STAGESEAT_<UPPER_NAME>). The policy block is echoed verbatim by
GET /api/policy so clients never hard-code discount math.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Policy:
    coin_value_minor: int = 10
    earn_per_seat: int = 1
    review_earn: int = 5
    redeem_cap_pct: int = 20
    cancel_cutoff_hours: int = 2
    currency_code: str = "INR"

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8008
    database_path: str = "stageseat.db"
    lexicon_path: str | None = None  # None -> packaged seed lexicon
    session_ttl_hours: int = 24
    pbkdf2_iterations: int = 60_000
    admin_user: str = "admin"
    admin_password: str = "admin-pass-change-me"
    policy: Policy = field(default_factory=Policy)

    @classmethod
    def load(cls, path: str | None = None, env: dict | None = None) -> "ServerConfig":
        env = os.environ if env is None else env
        raw: dict = {}
        if path:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        policy_raw = dict(raw.pop("policy", {}))
        cfg = cls(**{k: v for k, v in raw.items() if k in cls.__dataclass_fields__},
                  policy=Policy(**policy_raw))
        # Env overrides for the operational knobs.
        if env.get("STAGESEAT_HOST"):
            cfg.host = env["STAGESEAT_HOST"]
        if env.get("STAGESEAT_PORT"):
            cfg.port = int(env["STAGESEAT_PORT"])
        if env.get("STAGESEAT_DB"):
            cfg.database_path = env["STAGESEAT_DB"]
        if env.get("STAGESEAT_LEXICON"):
            cfg.lexicon_path = env["STAGESEAT_LEXICON"]
        if env.get("STAGESEAT_ADMIN_USER"):
            cfg.admin_user = env["STAGESEAT_ADMIN_USER"]
        if env.get("STAGESEAT_ADMIN_PASSWORD"):
            cfg.admin_password = env["STAGESEAT_ADMIN_PASSWORD"]
        return cfg
