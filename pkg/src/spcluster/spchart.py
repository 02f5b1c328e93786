"""S-P (student-problem) chart data model.

An S-P chart is an L x N binary matrix: row i holds student i's answers,
cell (i, j) is 1 if student i answered problem j correctly.  This module
covers parsing/serialization of the CSV form, rearrangement by totals,
the S- and P-curves, chart-type classification, and the caution index.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import numpy as np


class ChartError(ValueError):
    """Base class for chart construction and parse failures."""


class EmptyInput(ChartError):
    def __init__(self) -> None:
        super().__init__("input contains no data rows")


class NonBinaryCell(ChartError):
    """A data cell was something other than '0' or '1'.

    Coordinates are 1-based positions in the input file, counting any
    header row and label column.
    """

    def __init__(self, row: int, col: int, value: str = "") -> None:
        self.row = row
        self.col = col
        self.value = value
        shown = f" {value!r}" if value else ""
        super().__init__(f"non-binary cell{shown} at row {row}, column {col}")


class RaggedRows(ChartError):
    def __init__(self, expected: int, found: int, row: int | None = None) -> None:
        self.expected = expected
        self.found = found
        where = f" at row {row}" if row is not None else ""
        super().__init__(f"ragged rows{where}: expected {expected} cells, found {found}")


class LengthMismatch(ChartError):
    def __init__(self, expected: int, found: int) -> None:
        self.expected = expected
        self.found = found
        super().__init__(f"length mismatch: expected {expected}, found {found}")


class ChartType(Enum):
    """The three canonical chart shapes."""

    TEST = "test"
    DRILL = "drill"
    PRETEST = "pretest"


# Mean correct-rate cutoffs separating the three chart types.
DRILL_THRESHOLD = 0.65
PRETEST_THRESHOLD = 0.35


@dataclass(frozen=True)
class ScoreVector:
    """One student's row: a binary answer vector plus the student's label."""

    bits: tuple[int, ...]
    student_id: str

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ChartError(f"score vector for {self.student_id!r} has non-binary entries")


@dataclass(frozen=True, eq=False)
class SPChart:
    """Immutable L x N binary answer matrix with row/column labels."""

    bits: np.ndarray
    student_ids: tuple[str, ...]
    problem_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        raw = np.asarray(self.bits)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ChartError("chart must be a 2-D matrix with at least one row and column")
        if not np.isin(raw, (0, 1)).all():  # validate before the int8 cast truncates
            raise ChartError("chart entries must all be 0 or 1")
        bits = raw.astype(np.int8)
        if len(self.student_ids) != bits.shape[0]:
            raise LengthMismatch(bits.shape[0], len(self.student_ids))
        if len(self.problem_ids) != bits.shape[1]:
            raise LengthMismatch(bits.shape[1], len(self.problem_ids))
        if len(set(self.student_ids)) != len(self.student_ids):
            raise ChartError("student ids must be unique")
        if len(set(self.problem_ids)) != len(self.problem_ids):
            raise ChartError("problem ids must be unique")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "student_ids", tuple(self.student_ids))
        object.__setattr__(self, "problem_ids", tuple(self.problem_ids))

    @property
    def num_students(self) -> int:
        return self.bits.shape[0]

    @property
    def num_problems(self) -> int:
        return self.bits.shape[1]

    @property
    def rows(self) -> tuple[ScoreVector, ...]:
        return tuple(
            ScoreVector(tuple(int(b) for b in row), sid)
            for row, sid in zip(self.bits, self.student_ids)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SPChart):
            return NotImplemented
        return (
            self.student_ids == other.student_ids
            and self.problem_ids == other.problem_ids
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True, eq=False)
class RearrangedChart:
    """A chart sorted by row and column totals, with the applied permutations.

    ``chart`` row k is original row ``row_perm[k]``; likewise for columns.
    ``s_totals``/``p_totals`` are the row/column sums of the rearranged
    chart, both non-increasing.
    """

    chart: SPChart
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    s_totals: tuple[int, ...]
    p_totals: tuple[int, ...]


def _make_chart(bits: np.ndarray, student_ids, problem_ids) -> SPChart:
    if student_ids is None:
        student_ids = tuple(f"S{i + 1}" for i in range(bits.shape[0]))
    if problem_ids is None:
        problem_ids = tuple(f"P{j + 1}" for j in range(bits.shape[1]))
    return SPChart(bits, tuple(student_ids), tuple(problem_ids))


def _is_numeric(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_chart(data: str | bytes) -> SPChart:
    """Parse a chart from CSV text.

    Accepted layouts: bare 0/1 cells; an optional first row of problem
    labels; an optional first column of student labels.  A row or column
    is treated as labels when it contains at least one non-numeric token,
    so purely numeric labels are not supported: a numeric cell that is
    not 0 or 1 is always rejected as ``NonBinaryCell``.  Missing labels
    are generated as S1..SL and P1..PN.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ChartError(f"input is not valid UTF-8: {exc}") from exc
    rows = [
        [cell.strip() for cell in record]
        for record in csv.reader(io.StringIO(data))
        if record and any(cell.strip() for cell in record)
    ]
    if not rows:
        raise EmptyInput()

    # a non-numeric token in the first cell alone is explained by a label
    # column, so only tokens beyond position 0 mark the row as a header
    has_header = any(not _is_numeric(tok) for tok in rows[0][1:])
    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise EmptyInput()
    has_labels = any(not _is_numeric(r[0]) for r in data_rows if r)

    width = len(data_rows[0]) - (1 if has_labels else 0)
    if width < 1:
        raise EmptyInput()

    student_ids: list[str] | None = [] if has_labels else None
    bits = np.zeros((len(data_rows), width), dtype=np.int8)
    row_offset = 2 if has_header else 1
    col_offset = 2 if has_labels else 1
    for r, record in enumerate(data_rows):
        cells = record[1:] if has_labels else record
        if len(cells) != width:
            raise RaggedRows(width, len(cells), row=r + row_offset)
        if has_labels:
            assert student_ids is not None
            student_ids.append(record[0])
        for c, tok in enumerate(cells):
            if tok == "0":
                continue
            if tok == "1":
                bits[r, c] = 1
            else:
                raise NonBinaryCell(r + row_offset, c + col_offset, tok)

    problem_ids: list[str] | None = None
    if has_header:
        header = rows[0]
        if has_labels and len(header) == width + 1:
            header = header[1:]  # drop the corner cell above the label column
        if len(header) != width:
            raise RaggedRows(width, len(header), row=1)
        problem_ids = header

    return _make_chart(bits, student_ids, problem_ids)


def chart_to_csv(chart: SPChart) -> str:
    """Serialize to the canonical labeled CSV form.

    Writes a header row with a corner cell over the label column, so the
    result is unambiguous even for single-column charts.  Lossless only
    for non-numeric labels (which generated labels always are).
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", *chart.problem_ids])
    for sid, row in zip(chart.student_ids, chart.bits):
        writer.writerow([sid, *(int(b) for b in row)])
    return buf.getvalue()


def take_rows(chart: SPChart, indices) -> SPChart:
    """Sub-chart of the given student rows (all problems kept)."""
    idx = [int(i) for i in indices]
    return SPChart(
        chart.bits[idx],
        tuple(chart.student_ids[i] for i in idx),
        chart.problem_ids,
    )


def rearrange(chart: SPChart) -> RearrangedChart:
    """Sort rows by descending score and columns by descending correct count.

    Ties keep the original order, so the result is deterministic and
    re-rearranging an already rearranged chart is the identity.
    """
    s = chart.bits.sum(axis=1)
    p = chart.bits.sum(axis=0)
    row_perm = np.argsort(-s, kind="stable")
    col_perm = np.argsort(-p, kind="stable")
    bits = chart.bits[row_perm][:, col_perm]
    out = SPChart(
        bits,
        tuple(chart.student_ids[i] for i in row_perm),
        tuple(chart.problem_ids[j] for j in col_perm),
    )
    return RearrangedChart(
        chart=out,
        row_perm=tuple(int(i) for i in row_perm),
        col_perm=tuple(int(j) for j in col_perm),
        s_totals=tuple(int(v) for v in s[row_perm]),
        p_totals=tuple(int(v) for v in p[col_perm]),
    )


def curves(rc: RearrangedChart) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """The S-curve [(i, S(i))] and P-curve [(P(j), j)], indices 1-based."""
    s_curve = [(i + 1, s) for i, s in enumerate(rc.s_totals)]
    p_curve = [(p, j + 1) for j, p in enumerate(rc.p_totals)]
    return s_curve, p_curve


def correct_rates(chart: SPChart) -> np.ndarray:
    """Per-problem correct-answer rate: column sum / number of students."""
    return chart.bits.mean(axis=0)


def classify_type(
    chart: SPChart,
    *,
    drill_threshold: float = DRILL_THRESHOLD,
    pretest_threshold: float = PRETEST_THRESHOLD,
) -> ChartType:
    """Classify by the mean correct rate over all cells.

    Drill when the mean is at or above ``drill_threshold``, pre-test when
    at or below ``pretest_threshold``, test otherwise.
    """
    m = float(chart.bits.mean())
    if m >= drill_threshold:
        return ChartType.DRILL
    if m <= pretest_threshold:
        return ChartType.PRETEST
    return ChartType.TEST


def caution_index(row, rates) -> float:
    """Mean absolute deviation of one answer row from per-problem rates.

    Always in [0, 1]; zero when the row equals the rate vector, which
    happens for every member of a cluster of identical rows.
    """
    bits = np.asarray(row.bits if isinstance(row, ScoreVector) else row, dtype=float)
    mu = np.asarray(rates, dtype=float)
    if bits.shape != mu.shape:
        raise LengthMismatch(mu.shape[0] if mu.ndim else 0, bits.shape[0] if bits.ndim else 0)
    return float(np.abs(bits - mu).mean())


def average_caution(chart: SPChart) -> float:
    """Mean caution index over all rows, against the chart's own rates."""
    mu = correct_rates(chart)
    return float(np.abs(chart.bits - mu).mean())
