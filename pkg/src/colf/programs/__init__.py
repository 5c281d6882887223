"""The example programs, shipped as package data."""

from importlib import resources

NAMES = (
    "add",
    "mult",
    "streams",
    "up",
    "up_relation",
    "repeat_omega",
    "add_stream",
    "even",
    "fib",
    "integrate",
)


def path(name):
    return resources.files(__name__) / f"{name}.colf"


def source(name):
    return path(name).read_text(encoding="utf-8")
