"""Run-wide settings: Groebner resource caps and the default monomial order."""

from __future__ import annotations

import contextlib
import contextvars
import os
from dataclasses import dataclass, replace

from .errors import InvalidInput
from .poly import GREVLEX, MonomialOrder

CAPS_ENV = "PFAFF_GSV_CAPS"


@dataclass(frozen=True)
class Settings:
    max_pairs: int = 50_000
    max_degree: int = 60
    order: MonomialOrder = GREVLEX


def parse_caps(text: str, base: Settings | None = None) -> Settings:
    """Parse ``"max_pairs=1000,max_degree=40"`` (short keys ``pairs``/``degree`` too)."""
    base = base or Settings()
    values = {}
    for chunk in text.replace(";", ",").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, val = chunk.partition("=")
        key = key.strip().lower()
        key = {"pairs": "max_pairs", "degree": "max_degree"}.get(key, key)
        if not sep or key not in ("max_pairs", "max_degree"):
            raise InvalidInput(f"{CAPS_ENV}: cannot parse {chunk!r}")
        try:
            values[key] = int(val)
        except ValueError:
            raise InvalidInput(f"{CAPS_ENV}: {key} must be an integer") from None
        if values[key] <= 0:
            raise InvalidInput(f"{CAPS_ENV}: {key} must be positive")
    return replace(base, **values)


def _initial() -> Settings:
    env = os.environ.get(CAPS_ENV)
    return parse_caps(env) if env else Settings()


_current: contextvars.ContextVar[Settings] = contextvars.ContextVar("pfaff_gsv_settings")


def current() -> Settings:
    try:
        return _current.get()
    except LookupError:
        s = _initial()
        _current.set(s)
        return s


@contextlib.contextmanager
def using(**changes):
    """Temporarily override settings, e.g. ``with using(max_pairs=100): ...``."""
    token = _current.set(replace(current(), **changes))
    try:
        yield current()
    finally:
        _current.reset(token)
