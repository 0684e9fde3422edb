"""
Application configuration constants for handlecert.
"""
import os
from pathlib import Path

# Application Info
APP_NAME = "handlecert"
APP_VERSION = "1.0.0"

# Paths
BASE_DIR = Path(__file__).resolve().parent.parent.parent
RESOURCES_DIR = Path(__file__).resolve().parent.parent / "resources"
DIAGRAMS_DIR = RESOURCES_DIR / "diagrams"

# Exit codes
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# Diagram file format
HEADER_SPINE = 'spine'
HEADER_LINK = 'link'
COMMENT_CHAR = '#'
OVER_SLOTS = ('b', 'd')          # over-strand may only enter on b or d
SLOT_NAMES = ('a', 'b', 'c', 'd')
ARC_SIDES = ('left', 'right')
DEFAULT_ARC_SIDE = 'left'

# Pipeline
MODE_PART1 = 'part1'
MODE_PART2 = 'part2'
PIPELINE_MODES = (MODE_PART1, MODE_PART2)
DEFAULT_MODE = MODE_PART1

# Move / surgery kinds as they appear in transcripts and certificates
KIND_BCC = 'bcc'
KIND_TWIST = 'twist'
KIND_EXCHANGE = 'exchange'
KIND_RELEASE = 'release'

# Longitude (a*mu + b*lambda) of a surgery torus; tubed disks shift it by their algebraic puncture count
SURGERY_LONGITUDE = (0, 1)

# Bundle layout
BUNDLE_SECTIONS = (
    'INPUT',
    'VALIDATION',
    'SURFACES',
    'TRANSCRIPT',
    'SURGERY',
    'HOMOLOGY',
    'BLOWDOWN',
    'CORE',
    'TUBING',
    'DELTA',
    'ATTESTATION',
    'RESULT',
)
BUNDLE_BANNER = f"# {APP_NAME} certificate bundle"

# Oracle search
TRIVIAL_SEARCH_MAX_STATES = 20000

# Concurrency
DEFAULT_JOBS = 1
MAX_JOBS = 32

# User-facing reasons
ERROR_MESSAGES = {
    'file_not_found': "Input file not found: {path}",
    'not_utf8': "{path}: not UTF-8 text (bad byte at offset {position})",
    'not_a_spine': "Expected a spine diagram, got a link diagram.",
    'not_a_link': "Expected a link diagram, got a spine diagram.",
    'normal_form': "Arc or wedge crossings present; exchange them before this step.",
    'shared_system': "Seifert surface system shares disks or bands between loops; part2 needs a completely disjoint system.",
    'non_unit_slope': "non-1/Z slope",
    'missing_attestation': "missing unlinked attestation",
    'knotted_kind': "component is not an unknotted construction circle",
    'not_descending': "loop diagram is not descending; release refused",
}

# Logging
LOG_FILE = BASE_DIR / "handlecert.log"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVEL = os.environ.get('HANDLECERT_LOG_LEVEL', 'WARNING').upper()
