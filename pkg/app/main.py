"""
handlecert: Main Application Entry Point
Certifying toolchain for handcuff spines: Seifert systems, unknotting
transcripts and 1/n surgery links with checkable certificates.
"""
import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

# Ensure the project root is on the path so "app.*" imports work ──
PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from app.utils.config import (
    APP_NAME, APP_VERSION, DEFAULT_JOBS, DEFAULT_MODE, EXIT_FAIL, EXIT_PASS,
    EXIT_USAGE, ERROR_MESSAGES, LOG_FILE, LOG_FORMAT, LOG_LEVEL, PIPELINE_MODES,
)
from app.utils.errors import DiagramSemanticError, DiagramSyntaxError, HandlecertError, PipelineRefusal
from app.utils import validators

from app.models.diagram import LinkDiagram, SpineDiagram
from app.models.run_config import RunConfig
from app.services import (
    diagram_service,
    homology_service,
    report_service,
    seifert_service,
    unknotting_service,
)

logger = logging.getLogger(__name__)


# ── Logging ──
def _configure_logging(verbosity: int, log_file: Optional[str]):
    if verbosity > 0:
        level = logging.DEBUG if verbosity > 1 else logging.INFO
    elif verbosity < 0:
        level = logging.ERROR
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    handlers = [logging.StreamHandler()]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file or str(LOG_FILE), encoding='utf-8'))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


# ── Argument parsing ──
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Certify 1/Z surgery unknotting of handcuff spines.",
    )
    parser.add_argument('--version', action='version', version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="more log output (repeatable)")
    parser.add_argument('-q', '--quiet', action='store_true', help="errors only")
    parser.add_argument('--log-file', nargs='?', const='', default=None,
                        help=f"also log to a file (default {LOG_FILE.name})")
    sub = parser.add_subparsers(dest='subcommand', required=True)

    p = sub.add_parser('validate', help="validate diagram files")
    p.add_argument('inputs', nargs='+')
    p.add_argument('--jobs', type=int, default=DEFAULT_JOBS)

    p = sub.add_parser('surface', help="Seifert surface system of a spine")
    p.add_argument('inputs', nargs=1)

    p = sub.add_parser('linking', help="linking numbers of a link or of a spine's loops")
    p.add_argument('inputs', nargs=1)

    for name, text in (('unknot', "run the pipeline and write a certificate bundle"),
                       ('dualize', "surgery link and delta record for the closed surface")):
        p = sub.add_parser(name, help=text)
        p.add_argument('inputs', nargs=1)
        p.add_argument('--order', help="loop traversal order, e.g. 2,1")
        p.add_argument('--basepoint', action='append', default=[],
                       help="<loop>:<crossing>; loop starts just before that crossing")
        p.add_argument('--out', help="write output here instead of stdout")
        if name == 'unknot':
            p.add_argument('--mode', default=DEFAULT_MODE, choices=PIPELINE_MODES)

    p = sub.add_parser('certify', help="re-check a certificate bundle")
    p.add_argument('inputs', nargs=1, help="bundle file")
    p.add_argument('--input', dest='spine_input', help="spine file the bundle was produced from")
    return parser


def _usage(message: str) -> int:
    sys.stderr.write(f"{APP_NAME}: {message}\n")
    return EXIT_USAGE


def build_config(args: argparse.Namespace) -> tuple:
    """(RunConfig, None) or (None, error message)."""
    data = {
        'subcommand': args.subcommand,
        'inputs': args.inputs,
        'verbosity': -1 if args.quiet else args.verbose,
        'mode': getattr(args, 'mode', DEFAULT_MODE),
        'out': getattr(args, 'out', None),
        'jobs': getattr(args, 'jobs', DEFAULT_JOBS),
        'spine_input': getattr(args, 'spine_input', None),
    }
    for path in list(args.inputs) + ([data['spine_input']] if data['spine_input'] else []):
        ok, message = validators.validate_input_path(path)
        if not ok:
            return None, message
    ok, message = validators.validate_mode(data['mode'])
    if not ok:
        return None, message
    ok, message = validators.validate_jobs(data['jobs'])
    if not ok:
        return None, message
    order = getattr(args, 'order', None)
    if order:
        ok, message = validators.validate_order(order)
        if not ok:
            return None, message
        data['order'] = validators.parse_order(order)
    basepoints = getattr(args, 'basepoint', None) or []
    ok, message = validators.validate_basepoints(basepoints)
    if not ok:
        return None, message
    data['basepoints'] = tuple(validators.parse_basepoint(b) for b in basepoints)
    return RunConfig.from_dict(data), None


# ── Output ──
def _write(lines: list, out: Optional[Path] = None):
    text = '\n'.join(lines) + '\n'
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding='utf-8', newline='\n')
        logger.info("Wrote %s", out)


def _read(path: Path) -> str:
    """File text; undecodable bytes are an I/O problem like a missing file."""
    try:
        return path.read_text(encoding='utf-8')
    except UnicodeDecodeError as exc:
        raise OSError(ERROR_MESSAGES['not_utf8'].format(path=path, position=exc.start)) from exc


def _load_spine(path: Path) -> tuple:
    """(SpineDiagram, None) or (None, exit code) after reporting the problem."""
    diagram = diagram_service.read_diagram(_read(path))
    if not isinstance(diagram, SpineDiagram):
        return None, _usage(ERROR_MESSAGES['not_a_spine'])
    report = diagram_service.validate(diagram)
    if not report.ok:
        _write(report.lines())
        return None, EXIT_FAIL
    return diagram, None


# ── Subcommands ──
def _validate_one(path: Path) -> tuple:
    try:
        diagram = diagram_service.read_diagram(_read(path))
    except OSError as exc:
        return EXIT_USAGE, [f"error: {exc}"]
    except DiagramSyntaxError as exc:
        return EXIT_FAIL, [f"validation: error syntax: {exc}"]
    report = diagram_service.validate(diagram)
    return (EXIT_PASS if report.ok else EXIT_FAIL), report.lines()


def cmd_validate(config: RunConfig) -> int:
    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = list(pool.map(_validate_one, config.inputs))
    lines = []
    for path, (_code, report) in zip(config.inputs, results):
        prefix = f"{path}: " if len(config.inputs) > 1 else ''
        lines.extend(prefix + line for line in report)
    _write(lines)
    codes = [code for code, _ in results]
    if EXIT_USAGE in codes:
        return EXIT_USAGE
    return EXIT_FAIL if EXIT_FAIL in codes else EXIT_PASS


def cmd_surface(config: RunConfig) -> int:
    spine, code = _load_spine(config.input)
    if spine is None:
        return code
    system = seifert_service.spine_seifert_system(spine)
    spanning = seifert_service.restrict_to_exterior(system, spine.genus)
    _write(system.lines() + spanning.lines())
    return EXIT_PASS


def cmd_linking(config: RunConfig) -> int:
    diagram = diagram_service.read_diagram(_read(config.input))
    report = diagram_service.validate(diagram)
    if not report.ok:
        _write(report.lines())
        return EXIT_FAIL
    link = diagram if isinstance(diagram, LinkDiagram) else diagram_service.loop_link(diagram)
    _write(homology_service.linking_table(link).lines() or ["lk: single component"])
    return EXIT_PASS


def cmd_unknot(config: RunConfig) -> int:
    spine, code = _load_spine(config.input)
    if spine is None:
        return code
    try:
        bundle = unknotting_service.run_theorem_main(
            spine, config.mode, order=config.order, basepoints=config.basepoint_map)
    except PipelineRefusal as exc:
        _write([f"error: refused: {exc.reason}"])
        return EXIT_FAIL
    text = report_service.bundle_to_text(bundle)
    _write(text.rstrip('\n').split('\n'), config.out)
    return EXIT_PASS if bundle.passes else EXIT_FAIL


def cmd_dualize(config: RunConfig) -> int:
    spine, code = _load_spine(config.input)
    if spine is None:
        return code
    result = unknotting_service.heegaard_dualize(
        spine, order=config.order, basepoints=config.basepoint_map)
    _write(report_service.dualize_lines(result), config.out)
    return EXIT_PASS if result.passes else EXIT_FAIL


def cmd_certify(config: RunConfig) -> int:
    spine = None
    if config.spine_input is not None:
        spine, code = _load_spine(config.spine_input)
        if spine is None:
            return code
    verdict = report_service.certify_text(_read(config.input), spine)
    lines = [f"certify: {'pass' if verdict['success'] else 'fail'}"]
    lines += [f"reason: {reason}" for reason in verdict['reasons']]
    _write(lines)
    return EXIT_PASS if verdict['success'] else EXIT_FAIL


COMMANDS = {
    'validate': cmd_validate,
    'surface': cmd_surface,
    'linking': cmd_linking,
    'unknot': cmd_unknot,
    'dualize': cmd_dualize,
    'certify': cmd_certify,
}


# Entry Point
def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    _configure_logging(-1 if args.quiet else args.verbose, args.log_file)
    config, message = build_config(args)
    if config is None:
        return _usage(message)

    logger.info("%s %s: %s", APP_NAME, config.subcommand, ', '.join(str(p) for p in config.inputs))
    try:
        return COMMANDS[config.subcommand](config)
    except OSError as exc:
        return _usage(str(exc))
    except DiagramSyntaxError as exc:
        _write([f"validation: error syntax: {exc}"])
        return EXIT_FAIL
    except DiagramSemanticError as exc:
        _write([issue.to_line() for issue in exc.issues])
        return EXIT_FAIL
    except HandlecertError as exc:
        logger.warning("%s failed: %s", config.subcommand, exc)
        _write([f"error: {exc}"])
        return EXIT_FAIL


if __name__ == '__main__':
    sys.exit(main())
