"""
Read group documents (JSON files) and catalog names into catalog entries.

Accepted documents:
    {"type": "cayley", "table": [[int]], "labels": [str]?, "complement": [int]?, "geometry": {...}?}
    {"type": "permgroup", "degree": int, "generators": [[int]], "complement_generators": [[int]]?, "geometry": {...}?}

Indices in "complement" and "geometry" refer to the input table; they are moved
along when the identity is relabelled to index 0.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from core.errors import InputError
from core.helper_functions.catalog import ActionGroup, CatalogEntry, build_catalog_entry
from core.helper_functions.finite_group import FiniteGroup, Subgroup, subgroup_closure
from core.helper_functions.frobenius import frobenius_pair


class GeometryInput(BaseModel):
    Q: list[int]
    lines: list[list[int]] = Field(default_factory=list)


class CayleyGroupInput(BaseModel):
    type: Literal["cayley"]
    table: list[list[int]]
    labels: Optional[list[str]] = None
    complement: Optional[list[int]] = None
    geometry: Optional[GeometryInput] = None


class PermGroupInput(BaseModel):
    type: Literal["permgroup"]
    degree: int = Field(gt=0)
    generators: list[list[int]] = Field(default_factory=list)
    complement_generators: Optional[list[list[int]]] = None
    geometry: Optional[GeometryInput] = None


GroupInput = Annotated[Union[CayleyGroupInput, PermGroupInput], Field(discriminator="type")]
_GROUP_ADAPTER = TypeAdapter(GroupInput)


@dataclass(frozen=True)
class LoadedInput:
    """A catalog entry plus the user-supplied line family, if the document carried one."""
    entry: CatalogEntry
    geometry: Optional[GeometryInput] = None


def _identity_relabelling(table: list[list[int]]) -> np.ndarray:
    """Input index -> index after the identity is moved to 0 (identity when none is found)."""
    arr = np.asarray(table, dtype=np.int64)
    n = arr.shape[0]
    ar = np.arange(n)
    found = np.flatnonzero((arr == ar[None, :]).all(axis=1) & (arr == ar[:, None]).all(axis=0))
    e = int(found[0]) if found.size else 0
    position = np.where(ar < e, ar + 1, ar)
    position[e] = 0
    return position


def _relabel_geometry(geometry: Optional[GeometryInput], position: np.ndarray) -> Optional[GeometryInput]:
    if geometry is None:
        return None
    return GeometryInput(
        Q=[int(position[x]) for x in geometry.Q],
        lines=[[int(position[x]) for x in line] for line in geometry.lines],
    )


def _from_document(document: Union[CayleyGroupInput, PermGroupInput], name: str) -> LoadedInput:
    if isinstance(document, CayleyGroupInput):
        group = FiniteGroup.from_cayley_table(document.table, labels=document.labels)
        position = _identity_relabelling(document.table)
        pair = None
        if document.complement is not None:
            pair = frobenius_pair(group, Subgroup.of(group, (int(position[x]) for x in document.complement)))
        entry = CatalogEntry(name=name, group=group, pair=pair)
        return LoadedInput(entry=entry, geometry=_relabel_geometry(document.geometry, position))

    group = FiniteGroup.from_permutation_generators(document.degree, document.generators)
    pair = None
    if document.complement_generators is not None:
        members = [group.index_of_permutation(perm) for perm in document.complement_generators]
        pair = frobenius_pair(group, subgroup_closure(group, members))
    entry = CatalogEntry(name=name, group=group, action=ActionGroup(group), pair=pair)
    return LoadedInput(entry=entry, geometry=document.geometry)


def load_group_file(path: str) -> LoadedInput:
    """
    Parse and validate a group document.

    Raises:
        InputError: If the file cannot be read, is not JSON, or does not match a
            group document shape.
        AlgebraError: If the table or generators do not describe a group.
    """
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read group file: {e}", source=path) from e
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"group file is not valid JSON: {e}", source=path) from e
    return load_group_document(data, name=Path(path).name, source=path)


def load_group_document(data: dict, name: str = "document", source: Optional[str] = None) -> LoadedInput:
    """Validate an already-parsed group document (used by the API for inline groups)."""
    try:
        document = _GROUP_ADAPTER.validate_python(data)
    except ValidationError as e:
        raise InputError(f"group document is malformed: {e.error_count()} error(s)", source=source) from e
    return _from_document(document, name=name)


def load_entry(source: str, allow_files: bool = True) -> LoadedInput:
    """
    A catalog name, or a path to a group document when `source` names a JSON file.

    With `allow_files=False` every source is parsed as a catalog name, so paths
    fail with InputError instead of being read.
    """
    if allow_files and (source.endswith(".json") or Path(source).is_file()):
        return load_group_file(source)
    return LoadedInput(entry=build_catalog_entry(source))
