import json
import logging
import sys
from pathlib import Path
from typing import Any, Union

from pinet_refine.exception import DataIOError

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def setup_logging(level: Union[str, int] = "INFO", quiet: bool = False) -> None:
    """Root handler on stderr; `quiet` raises the threshold to WARNING."""
    if quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def show_progress(quiet: bool) -> bool:
    return not quiet and sys.stderr.isatty()


class JsonLinesWriter:
    """Appends one JSON object per line and flushes, so the file can be tailed."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = self.path.open("w", encoding="utf-8")
        except OSError as e:
            raise DataIOError(self.path, str(e)) from e

    def write(self, record: dict[str, Any]) -> None:
        self._fh.write(json.dumps(record) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "JsonLinesWriter":
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()


__all__ = [
    "LOG_FORMAT",
    "setup_logging",
    "show_progress",
    "JsonLinesWriter",
]
