"""File handling utilities for run artifacts."""

import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def ensure_dir(dir_path: Path) -> Path:
    """Create a directory (and parents) if needed.

    Raises:
        OSError: If the directory cannot be created, with the path in the message
    """
    dir_path = Path(dir_path)
    try:
        dir_path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"Cannot create directory {dir_path}: {e}") from e
    return dir_path


def write_text_file(file_path: Path, text: str) -> Path:
    """Write text with ``\\n`` line endings, creating parent directories.

    Args:
        file_path: Destination path
        text: File contents

    Returns:
        The written path

    Raises:
        OSError: On any write failure, with the path in the message
    """
    file_path = Path(file_path)
    ensure_dir(file_path.parent)
    try:
        with file_path.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise OSError(f"Cannot write {file_path}: {e}") from e
    logger.debug(f"File written: {file_path}, size: {file_path.stat().st_size}")
    return file_path


def read_text_file(file_path: Path) -> str:
    """Read a UTF-8 text file.

    Raises:
        FileNotFoundError: If file doesn't exist
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    return file_path.read_text(encoding="utf-8")
