"""
Command-line input validation utilities for handlecert.
"""
import re
from pathlib import Path

from app.utils.config import ERROR_MESSAGES, MAX_JOBS, PIPELINE_MODES

ORDER_PATTERN = r'^\d+(,\d+)*$'
BASEPOINT_PATTERN = r'^(\d+):(\d+)$'


def validate_input_path(path) -> tuple:
    """
    Validate an input file path.

    Returns:
        (is_valid, error_message)
    """
    if not path:
        return False, "Input path is required."
    path = Path(path)
    if not path.is_file():
        return False, ERROR_MESSAGES['file_not_found'].format(path=path)
    return True, ""


def validate_mode(mode: str) -> tuple:
    if mode not in PIPELINE_MODES:
        return False, f"Mode must be one of {', '.join(PIPELINE_MODES)}."
    return True, ""


def validate_order(text: str) -> tuple:
    """
    Validate a loop order such as '2,1,3'.

    Rules:
        - Comma-separated positive integers
        - No repeats

    Returns:
        (is_valid, error_message)
    """
    if not text:
        return False, "Order is empty."
    text = text.strip()
    if not re.match(ORDER_PATTERN, text):
        return False, "Order must be comma-separated loop indices, e.g. 2,1."
    values = [int(v) for v in text.split(',')]
    if 0 in values:
        return False, "Loop indices start at 1."
    if len(set(values)) != len(values):
        return False, "Order repeats a loop."
    return True, ""


def parse_order(text: str) -> tuple:
    return tuple(int(v) for v in text.strip().split(','))


def validate_basepoint(text: str) -> tuple:
    """A basepoint is '<loop>:<crossing>': loop i starts just before crossing c."""
    match = re.match(BASEPOINT_PATTERN, (text or '').strip())
    if not match:
        return False, f"Basepoint {text!r} must look like <loop>:<crossing>, e.g. 1:3."
    if int(match.group(1)) < 1 or int(match.group(2)) < 1:
        return False, "Basepoint loop and crossing must be positive."
    return True, ""


def parse_basepoint(text: str) -> tuple:
    loop, crossing = text.strip().split(':')
    return int(loop), int(crossing)


def validate_basepoints(items) -> tuple:
    seen = set()
    for text in items or ():
        ok, message = validate_basepoint(text)
        if not ok:
            return False, message
        loop, _ = parse_basepoint(text)
        if loop in seen:
            return False, f"Loop {loop} has two basepoints."
        seen.add(loop)
    return True, ""


def validate_jobs(jobs: int) -> tuple:
    if jobs < 1:
        return False, "--jobs must be at least 1."
    if jobs > MAX_JOBS:
        return False, f"--jobs must be at most {MAX_JOBS}."
    return True, ""
