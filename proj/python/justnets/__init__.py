"""Python bindings for the justnets library."""

import json as _json

from ._core import (
    Error,
    Net,
    ParseError,
    check_corpus,
    compose,
    failures,
    hide,
    sched,
    test,
    universal_test,
)
from ._core import leq as _leq
from ._core import must_timed as _must_timed


def leq(n, n2, criterion="justness", blocked=None):
    """Bounded failure comparison of n below n2, as a dict."""
    return _json.loads(_leq(n, n2, criterion, blocked))


def must_timed(test, net, duration):
    """Timed must verdict with deadline `duration` ("p/q" or int), as a dict."""
    return _json.loads(_must_timed(test, net, str(duration)))


__all__ = [
    "Error",
    "Net",
    "ParseError",
    "check_corpus",
    "compose",
    "failures",
    "hide",
    "leq",
    "must_timed",
    "sched",
    "test",
    "universal_test",
]
