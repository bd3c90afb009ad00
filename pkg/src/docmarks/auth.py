"""Token authentication and password storage.

Tokens are compact HS256 JWTs (header.payload.signature, base64url)
carrying the username, role, and expiry; the default lifetime is twelve
hours. Passwords are stored as salted PBKDF2-SHA256 hashes and never
appear in logs or storage in clear. Failed logins are indistinguishable
between unknown user and wrong password.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import secrets
import time
from typing import Callable

from .errors import InvalidToken, TokenExpired, ValidationError

DEFAULT_TTL_SECONDS = 12 * 60 * 60
ROLES = ("annotator", "admin")

_PBKDF2_ITERATIONS = 100_000


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(chunk: str) -> bytes:
    padding = "=" * (-len(chunk) % 4)
    return base64.urlsafe_b64decode(chunk + padding)


class AuthManager:
    """Issues and verifies signed expiring tokens. The clock is injectable
    so expiry behavior is testable without sleeping."""

    def __init__(self, secret, ttl_seconds: int = DEFAULT_TTL_SECONDS, clock: Callable = time.time):
        if isinstance(secret, str):
            secret = secret.encode("utf-8")
        if not secret:
            raise ValidationError("token secret must not be empty", field="token_secret")
        self._secret = secret
        self.ttl_seconds = ttl_seconds
        self._clock = clock

    def _sign(self, signing_input: bytes) -> str:
        return _b64url(hmac.new(self._secret, signing_input, hashlib.sha256).digest())

    def issue(self, username: str, role: str) -> str:
        now = int(self._clock())
        header = _b64url(json.dumps({"alg": "HS256", "typ": "JWT"}).encode())
        payload = _b64url(
            json.dumps(
                {"sub": username, "role": role, "iat": now, "exp": now + self.ttl_seconds}
            ).encode()
        )
        signing_input = f"{header}.{payload}".encode("ascii")
        return f"{header}.{payload}.{self._sign(signing_input)}"

    def verify(self, token: str) -> dict:
        """Claims for a valid token; TokenExpired past expiry, InvalidToken
        for anything tampered or malformed."""
        parts = token.split(".")
        if len(parts) != 3:
            raise InvalidToken("token must have three segments")
        signing_input = f"{parts[0]}.{parts[1]}".encode("ascii", errors="replace")
        if not hmac.compare_digest(self._sign(signing_input), parts[2]):
            raise InvalidToken("token signature mismatch")
        try:
            claims = json.loads(_b64url_decode(parts[1]))
        except (ValueError, json.JSONDecodeError) as exc:
            raise InvalidToken("token payload is not valid JSON") from exc
        if not isinstance(claims, dict) or "sub" not in claims or "exp" not in claims:
            raise InvalidToken("token payload is missing claims")
        if self._clock() >= claims["exp"]:
            raise TokenExpired("token has expired")
        return claims


def hash_password(password: str, salt: bytes = None, iterations: int = _PBKDF2_ITERATIONS) -> dict:
    if salt is None:
        salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return {
        "salt": salt.hex(),
        "hash": digest.hex(),
        "iterations": iterations,
        "algorithm": "pbkdf2_sha256",
    }


def verify_password(password: str, stored: dict) -> bool:
    digest = hashlib.pbkdf2_hmac(
        "sha256",
        password.encode("utf-8"),
        bytes.fromhex(stored["salt"]),
        int(stored["iterations"]),
    )
    return hmac.compare_digest(digest.hex(), stored["hash"])


def check_role(role: str) -> str:
    if role not in ROLES:
        raise ValidationError(f"role must be one of {ROLES}", field="role")
    return role
