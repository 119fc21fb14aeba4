from __future__ import annotations

import os
from typing import List, Optional

import numpy as np
import pandas as pd

from .errors import GroupValidationError
from .groups import FiniteGroup, validate_group


def derive_label(path: str) -> str:
    base = os.path.basename(path)
    name, _ext = os.path.splitext(base)
    return name


def read_cayley_csv(path: str, label: str | None = None, encoding: str = "utf-8") -> FiniteGroup:
    """Cayley table as CSV: header row of element names, first column the left factor.

    Entries are element names. The identity is the element whose row and column reproduce the
    header; when no element does, the element named "1" (else the first) is tried and rejected
    by validation.
    """
    df = pd.read_csv(
        path,
        header=0,
        index_col=0,
        dtype=str,
        keep_default_na=False,
        na_values=[],
        encoding=encoding,
        sep=",",
        quotechar='"',
    )
    df.columns = [str(c).strip() for c in df.columns]
    df.index = [str(r).strip() for r in df.index]
    names: List[str] = list(df.columns)
    label = label or derive_label(path)
    if list(df.index) != names:
        raise GroupValidationError(
            f"{label}: row labels {list(df.index)} do not match column labels {names}", kind="malformed"
        )
    position = {n: i for i, n in enumerate(names)}
    table: List[List[int]] = []
    for r, row in enumerate(df.itertuples(index=False)):
        out: List[int] = []
        for c, value in enumerate(row):
            key = str(value).strip()
            if key not in position:
                raise GroupValidationError(
                    f"{label}: unknown element '{key}' at ({names[r]}, {names[c]})", kind="malformed", witness=(r, c)
                )
            out.append(position[key])
        table.append(out)
    return validate_group(table, names=names, identity=_identity_index(table), label=label)


def _identity_index(table: List[List[int]]) -> Optional[int]:
    if not table:
        return None
    mul = np.asarray(table, dtype=np.int64)
    arange = np.arange(len(table))
    units = np.nonzero(np.all(mul == arange, axis=1) & np.all(mul.T == arange, axis=1))[0]
    return int(units[0]) if units.size else None


def write_cayley_csv(path: str, G: FiniteGroup, encoding: str = "utf-8") -> None:
    names = list(G.names)
    df = pd.DataFrame([[names[v] for v in row] for row in G.mul], index=names, columns=names)
    df.to_csv(path, index=True, encoding=encoding)
