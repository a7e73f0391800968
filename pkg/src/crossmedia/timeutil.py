"""UTC time helpers: integer epoch-second timestamps and RFC-3339 text."""

from __future__ import annotations

from datetime import datetime, timezone

MINUTE = 60
HOUR = 3600
DAY = 86400


def parse_rfc3339(text: str) -> int:
    """Parse an RFC-3339 timestamp to UTC epoch seconds (second precision)."""
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise ValueError(f"invalid RFC-3339 timestamp: {text!r}") from None
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks a UTC offset: {text!r}")
    return int(dt.astimezone(timezone.utc).timestamp())


def format_rfc3339(epoch: int) -> str:
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_date(text: str) -> int:
    """Parse an ISO date ('2020-01-05') to the epoch second of UTC midnight."""
    try:
        dt = datetime.strptime(text.strip(), "%Y-%m-%d")
    except ValueError:
        raise ValueError(f"invalid ISO date: {text!r}") from None
    return int(dt.replace(tzinfo=timezone.utc).timestamp())


def format_date(epoch: int) -> str:
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).strftime("%Y-%m-%d")


def floor_to_day(epoch: int) -> int:
    return (int(epoch) // DAY) * DAY


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)
