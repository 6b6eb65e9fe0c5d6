"""Validation-sample container and CSV ingestion.

Samples are stored columnar (one numpy array per feature) so scoring and
scope filtering stay fast, but the container still behaves like a sequence
of :class:`~gamedit.model.Sample` values.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Union

import numpy as np

from .errors import MissingColumn, RowParseError
from .model import MISSING, GamModel, LinkFunction, Sample, TermKind


@dataclass(frozen=True)
class Dataset:
    """Columnar samples aligned with a model's term order.

    ``columns`` maps term name to a float64 array (continuous) or an object
    array of label strings (categorical); ``labels`` holds the target value
    per sample.
    """

    columns: dict[str, np.ndarray]
    labels: np.ndarray
    term_order: tuple[str, ...]

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.float64)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        n = len(labels)
        for name, col in self.columns.items():
            if len(col) != n:
                raise ValueError(f"column {name!r} has {len(col)} rows, expected {n}")
            col.setflags(write=False)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, i: int) -> Sample:
        values = tuple(self.columns[name][i] for name in self.term_order)
        return Sample(values=values, label=float(self.labels[i]))

    def __iter__(self) -> Iterator[Sample]:
        for i in range(len(self)):
            yield self[i]

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            columns={name: col[indices] for name, col in self.columns.items()},
            labels=self.labels[indices],
            term_order=self.term_order,
        )

    @classmethod
    def from_samples(cls, samples, model: GamModel) -> "Dataset":
        rows = list(samples)
        columns: dict[str, np.ndarray] = {}
        for j, term in enumerate(model.terms):
            if term.kind is TermKind.CONTINUOUS:
                columns[term.name] = np.array([float(s.values[j]) for s in rows],
                                              dtype=np.float64)
            else:
                columns[term.name] = np.array([str(s.values[j]) for s in rows],
                                              dtype=object)
        labels = np.array([s.label for s in rows], dtype=np.float64)
        return cls(columns=columns, labels=labels,
                   term_order=tuple(t.name for t in model.terms))


def _as_text(source: Union[str, bytes, Path]) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, bytes):
        return source.decode("utf-8")
    return source


def load_dataset(source: Union[str, bytes, Path], model: GamModel, *,
                 label_column: str = "label",
                 strict: bool = True) -> tuple[Dataset, int]:
    """Parse CSV text into a validated Dataset.

    The header must contain every model feature name plus ``label_column``.
    Cell handling: whitespace is stripped; empty categorical cells become the
    MISSING label.  A row fails when a continuous cell does not parse as a
    finite number, a categorical cell names a label the term does not have,
    or the label cell is invalid (non-binary under the logit link).  In
    strict mode the first bad row raises :class:`RowParseError` with its
    1-based row number; in lenient mode bad rows are skipped and counted.

    Returns the dataset and the number of skipped rows (always 0 in strict
    mode).
    """
    reader = csv.reader(io.StringIO(_as_text(source)))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MissingColumn(label_column) from None

    positions: dict[str, int] = {}
    for name in [t.name for t in model.terms] + [label_column]:
        if name not in header:
            raise MissingColumn(name)
        positions[name] = header.index(name)

    label_sets = {t.name: set(t.bin_labels) for t in model.terms
                  if t.kind is TermKind.CATEGORICAL}
    width = max(positions.values()) + 1

    raw_columns: dict[str, list] = {t.name: [] for t in model.terms}
    labels: list[float] = []
    skipped = 0
    for row_number, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        try:
            if len(row) < width:
                raise RowParseError(row_number, f"expected at least {width} columns, got {len(row)}")
            parsed: dict[str, object] = {}
            for term in model.terms:
                cell = row[positions[term.name]].strip()
                if term.kind is TermKind.CONTINUOUS:
                    try:
                        value = float(cell)
                    except ValueError:
                        raise RowParseError(
                            row_number,
                            f"column {term.name!r}: {cell!r} is not a number") from None
                    if not math.isfinite(value):
                        raise RowParseError(
                            row_number, f"column {term.name!r}: value must be finite")
                    parsed[term.name] = value
                else:
                    label = cell if cell else MISSING
                    known = label_sets[term.name]
                    if label not in known:
                        # unknown levels collapse into the MISSING bin when
                        # the term has one, mirroring bin lookup
                        if MISSING not in known:
                            raise RowParseError(
                                row_number,
                                f"column {term.name!r}: unknown category {label!r}")
                        label = MISSING
                    parsed[term.name] = label
            cell = row[positions[label_column]].strip()
            try:
                target = float(cell)
            except ValueError:
                raise RowParseError(
                    row_number, f"column {label_column!r}: {cell!r} is not a number") from None
            if model.link is LinkFunction.LOGIT and target not in (0.0, 1.0):
                raise RowParseError(
                    row_number, f"column {label_column!r}: binary label must be 0 or 1")
        except RowParseError:
            if strict:
                raise
            skipped += 1
            continue
        for name, value in parsed.items():
            raw_columns[name].append(value)
        labels.append(target)

    columns: dict[str, np.ndarray] = {}
    for term in model.terms:
        if term.kind is TermKind.CONTINUOUS:
            columns[term.name] = np.array(raw_columns[term.name], dtype=np.float64)
        else:
            columns[term.name] = np.array(raw_columns[term.name], dtype=object)
    dataset = Dataset(columns=columns, labels=np.array(labels, dtype=np.float64),
                      term_order=tuple(t.name for t in model.terms))
    return dataset, skipped
