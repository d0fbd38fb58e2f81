"""
File formats.

- index sets: one multi-index per line, space-separated
- coefficient arrays: CSV `alpha_1,...,alpha_m,re,im`
- Hankel sequences: CSV `index,re,im`
- canonical problems: CSV `kind,index,re_1,im_1,...,re_m,im_m` with `point` and `coeff` rows

Floats are written with 17 significant digits so identical inputs give identical bytes.
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from slrc.core.errors import InvalidInputError
from slrc.structure.indexsets import IndexSet, dump_index_set, parse_index_set
from slrc.structure.quasi_hankel import CoefficientArray

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(x) -> str:
    return format(float(x), '.17g')


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format_float(x)
    return str(x)


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write a CSV with a header row; floats formatted deterministically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(x) for x in row])
    logger.info(f"Wrote {path}")
    return path


def read_rows(path: PathLike) -> List[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def save_index_set(path: PathLike, indices: IndexSet) -> Path:
    path = Path(path)
    path.write_text(dump_index_set(indices))
    return path


def load_index_set(path: PathLike) -> IndexSet:
    return parse_index_set(Path(path).read_text())


def save_coefficient_array(path: PathLike, h: CoefficientArray) -> Path:
    header = [f"alpha_{l + 1}" for l in range(h.m)] + ["re", "im"]
    rows = [list(alpha) + [v.real, v.imag] for alpha, v in zip(h.domain, h.values)]
    return write_rows(path, header, rows)


def load_coefficient_array(path: PathLike) -> CoefficientArray:
    records = read_rows(path)
    if not records:
        raise InvalidInputError(f"No rows in {path}")
    m = sum(1 for key in records[0] if key.startswith("alpha_"))
    mapping = {}
    for record in records:
        alpha = tuple(int(record[f"alpha_{l + 1}"]) for l in range(m))
        mapping[alpha] = complex(float(record["re"]), float(record["im"]))
    return CoefficientArray.from_mapping(IndexSet(m, mapping.keys()), mapping)


def save_sequence(path: PathLike, values, start: int = 0) -> Path:
    values = np.asarray(values, dtype=complex)
    rows = [[start + k, v.real, v.imag] for k, v in enumerate(values)]
    return write_rows(path, ["index", "re", "im"], rows)


def load_sequence(path: PathLike) -> np.ndarray:
    """Values ordered by their index column, which must be 0..d without gaps."""
    records = sorted(read_rows(path), key=lambda rec: int(rec["index"]))
    indices = [int(rec["index"]) for rec in records]
    if indices != list(range(len(indices))):
        raise InvalidInputError(f"Sequence indices in {path} must be 0..d without gaps")
    return np.array([complex(float(rec["re"]), float(rec["im"])) for rec in records])


def save_problem(path: PathLike, points, coeffs) -> Path:
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    m = points.shape[1]
    header = ["kind", "index"] + [name for l in range(m) for name in (f"re_{l + 1}", f"im_{l + 1}")]
    rows = []
    for k, z in enumerate(points):
        rows.append(["point", k] + [part for x in z for part in (x.real, x.imag)])
    for k, c in enumerate(coeffs):
        rows.append(["coeff", k, c.real, c.imag] + [0.0] * (2 * m - 2))
    return write_rows(path, header, rows)


def load_problem(path: PathLike):
    """Returns (points r x m, coeffs r)."""
    records = read_rows(path)
    m = sum(1 for key in records[0] if key.startswith("re_")) if records else 0
    points, coeffs = [], []
    for record in records:
        if record["kind"] == "point":
            points.append([complex(float(record[f"re_{l + 1}"]), float(record[f"im_{l + 1}"])) for l in range(m)])
        elif record["kind"] == "coeff":
            coeffs.append(complex(float(record["re_1"]), float(record["im_1"])))
        else:
            raise InvalidInputError(f"Unknown row kind {record['kind']!r} in {path}")
    return np.array(points, dtype=complex).reshape(-1, m), np.array(coeffs, dtype=complex)
