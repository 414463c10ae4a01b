"""
Utility functions for reading and writing state and report files.

A state file holds one or more records separated by a ``---`` line. Each
record is a block of ``key: value`` lines; ``#`` starts a comment::

    # |phi> and its Hadamard image
    name: phi
    format: asd
    lambda: 0.5 0 0.5 0.5 0.5
    phi: 0
    ---
    format: amplitudes
    amplitudes: [0.5, 0] [0, 0] [0, 0] [0, 0] [0, 0] [0.5, 0] [0.5, 0] [0.5, 0]

Numbers are written with 17 significant digits so doubles survive a
save/load cycle bit for bit.
"""
import os
import re
import json
import math
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from ghzlu.config import DEFAULT_TOLERANCES, Tolerances
from ghzlu.exceptions import InvalidInputError, StateFileError
from ghzlu.services.asd import ASDState, reconstruct
from ghzlu.services.qstate import PureState3Q

logger = logging.getLogger(__name__)

FORMATS = ('amplitudes', 'asd')
RECORD_SEPARATOR = '---'
KEYS = ('name', 'format', 'amplitudes', 'lambda', 'phi')

_TOKEN = re.compile(r'[^\s,\[\]()]+')


def format_number(x: float) -> str:
    """Shortest-safe text for a double: 17 significant digits."""
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class StateRecord:
    """One record of a state file: an amplitude vector or an ASD."""
    format: str
    state: Optional[PureState3Q] = None
    asd: Optional[ASDState] = None
    name: Optional[str] = None

    @classmethod
    def from_state(cls, state: PureState3Q, name=None):
        return cls('amplitudes', state=state, name=name)

    @classmethod
    def from_asd(cls, asd: ASDState, name=None):
        return cls('asd', asd=asd, name=name)

    def as_state(self) -> PureState3Q:
        return self.state if self.format == 'amplitudes' else reconstruct(self.asd)

    def as_dict(self):
        out = {'format': self.format}
        if self.name:
            out['name'] = self.name
        if self.format == 'amplitudes':
            out['amplitudes'] = [[z.real, z.imag] for z in self.state.amp]
        else:
            out['lambda'] = list(self.asd.lambdas)
            out['phi'] = self.asd.phi
        return out


def _numbers(raw_line: str, start: int, line_no: int, path, expected: int) -> List[float]:
    """Parse ``expected`` numbers from ``raw_line[start:]``; columns are 1-based."""
    values = []
    for match in _TOKEN.finditer(raw_line, start):
        token = match.group(0)
        try:
            value = float(token)
        except ValueError:
            raise StateFileError(f"not a number: {token!r}", line_no, match.start() + 1, path)
        if not math.isfinite(value):
            raise StateFileError(f"non-finite number: {token!r}", line_no, match.start() + 1, path)
        values.append(value)
    if len(values) != expected:
        raise StateFileError(f"expected {expected} numbers, found {len(values)}",
                             line_no, start + 1, path)
    return values


def _build_record(fields, start_line, path, tol: Tolerances) -> StateRecord:
    if 'format' not in fields:
        raise StateFileError("record has no 'format' line", start_line, None, path)
    fmt, fmt_line = fields['format']
    name = fields['name'][0] if 'name' in fields else None
    if fmt == 'amplitudes':
        if 'amplitudes' not in fields:
            raise StateFileError("amplitudes record has no 'amplitudes' line", fmt_line, None, path)
        values, line_no = fields['amplitudes']
        amp = np.array(values[0::2]) + 1j * np.array(values[1::2])
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > tol.file_norm:
            raise StateFileError(f"amplitudes have norm^2 {norm_sq!r}, not 1 within {tol.file_norm}",
                                 line_no, None, path)
        return StateRecord.from_state(
            PureState3Q.from_amplitudes(amp, renormalize=abs(norm_sq - 1.0) > tol.norm, tol=tol),
            name)
    if fmt == 'asd':
        if 'lambda' not in fields:
            raise StateFileError("asd record has no 'lambda' line", fmt_line, None, path)
        lam, line_no = fields['lambda']
        phi = fields['phi'][0][0] if 'phi' in fields else 0.0
        norm_sq = math.fsum(x * x for x in lam)
        if abs(norm_sq - 1.0) > tol.file_norm:
            raise StateFileError(f"lambda has norm^2 {norm_sq!r}, not 1 within {tol.file_norm}",
                                 line_no, None, path)
        if abs(norm_sq - 1.0) > tol.norm:
            lam = [x / math.sqrt(norm_sq) for x in lam]
        try:
            return StateRecord.from_asd(ASDState(tuple(lam), phi, tol), name)
        except InvalidInputError as e:
            raise StateFileError(str(e), line_no, None, path)
    raise StateFileError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}",
                         fmt_line, None, path)


def parse_state_text(text: str, path=None, tol: Tolerances = DEFAULT_TOLERANCES) -> List[StateRecord]:
    """
    Parse every record of a state file.

    Args:
        text: File contents
        path: Name used in error messages
        tol: Tolerances; amplitudes within ``tol.file_norm`` of unit norm are renormalized

    Returns:
        List of StateRecord in file order
    """
    records = []
    fields, start_line = {}, None

    def flush():
        if fields:
            records.append(_build_record(fields, start_line, path, tol))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0]
        if not line.strip():
            continue
        if line.strip() == RECORD_SEPARATOR:
            flush()
            fields, start_line = {}, None
            continue
        if ':' not in line:
            raise StateFileError("expected 'key: value'", line_no, len(line) - len(line.lstrip()) + 1, path)
        key, _ = line.split(':', 1)
        key_col = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        value_start = line.index(':') + 1
        if key not in KEYS:
            raise StateFileError(f"unknown key {key!r}", line_no, key_col, path)
        if key in fields:
            raise StateFileError(f"duplicate key {key!r}", line_no, key_col, path)
        if start_line is None:
            start_line = line_no

        if key in ('name', 'format'):
            fields[key] = (line[value_start:].strip(), line_no)
        elif key == 'amplitudes':
            fields[key] = (_numbers(line, value_start, line_no, path, 16), line_no)
        elif key == 'lambda':
            fields[key] = (_numbers(line, value_start, line_no, path, 5), line_no)
        else:
            fields[key] = (_numbers(line, value_start, line_no, path, 1), line_no)
    flush()

    if not records:
        raise StateFileError("no state records found", None, None, path)
    logger.debug(f"parsed {len(records)} record(s) from {path or '<input>'}")
    return records


def dump_state_records(records: Iterable[StateRecord]) -> str:
    """Text form of ``records``; inverse of parse_state_text."""
    blocks = []
    for record in records:
        lines = []
        if record.name:
            lines.append(f"name: {record.name}")
        lines.append(f"format: {record.format}")
        if record.format == 'amplitudes':
            pairs = ' '.join(f"[{format_number(z.real)}, {format_number(z.imag)}]"
                             for z in record.state.amp)
            lines.append(f"amplitudes: {pairs}")
        else:
            lines.append('lambda: ' + ' '.join(format_number(x) for x in record.asd.lambdas))
            lines.append(f"phi: {format_number(record.asd.phi)}")
        blocks.append('\n'.join(lines))
    return ('\n' + RECORD_SEPARATOR + '\n').join(blocks) + '\n'


def load_state_file(path, tol: Tolerances = DEFAULT_TOLERANCES) -> List[StateRecord]:
    """Read a state file from disk."""
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        logger.error(f"Error reading state file {path}: {e}")
        raise StateFileError(f"cannot read file: {e.strerror or e}", None, None, str(path))
    return parse_state_text(text, str(path), tol)


def save_state_file(path, records: Iterable[StateRecord]):
    """Write records to ``path``, creating the parent directory when needed."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(dump_state_records(records))
    logger.info(f"wrote state file {path}")


def jsonable(value):
    """Convert complex numbers, tuples and numpy scalars into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def report_to_json(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True)


def report_from_json(text: str, path=None) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise StateFileError(e.msg, e.lineno, e.colno, path)


def format_report_text(report: dict, indent: int = 0) -> str:
    """Human-readable ``key: value`` rendering of a report dictionary."""
    pad = ' ' * indent
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(format_report_text(value, indent + 2))
        elif isinstance(value, float):
            lines.append(f"{pad}{key}: {format_number(value)}")
        elif isinstance(value, (list, tuple)):
            lines.append(f"{pad}{key}: " + ' '.join(
                format_number(v) if isinstance(v, float) else str(v) for v in jsonable(value)))
        else:
            lines.append(f"{pad}{key}: {value}")
    return '\n'.join(lines)


def save_report(path, report: dict):
    """Write the JSON form of a report."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(report_to_json(report) + '\n')
    logger.info(f"wrote report {path}")


def load_report(path) -> dict:
    with open(path, encoding='utf-8') as fh:
        return report_from_json(fh.read(), str(path))
