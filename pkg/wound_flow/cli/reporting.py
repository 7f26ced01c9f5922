import json
import sys
from typing import TextIO


def render(payload: dict, lines: list[str], fmt: str) -> str:
    """JSON of the payload, or the text lines; both carry the same numbers."""
    if fmt == "json":
        return json.dumps(payload, indent=2)
    return "\n".join(lines)


def emit(payload: dict, lines: list[str], fmt: str, stream: TextIO | None = None) -> None:
    stream = stream or sys.stdout
    stream.write(render(payload, lines, fmt) + "\n")
    stream.flush()


def emit_error(error: BaseException, fmt: str, code: int, stream: TextIO | None = None) -> None:
    """Machine-readable errors go under "error"; text errors are one line on stderr."""
    if fmt == "json":
        payload = {"error": {"type": type(error).__name__, "message": str(error), "exitCode": code}}
        emit(payload, [], fmt, stream or sys.stdout)
    else:
        (stream or sys.stderr).write(f"error: {type(error).__name__}: {error}\n")
