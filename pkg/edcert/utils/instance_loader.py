import json
from pathlib import Path
from typing import Any, Mapping, Tuple, Union

from edcert.errors import MalformedSpec
from edcert.models.abelian_variety import AbelianVarietyInstance, Isogeny
from edcert.services import abvar
from edcert.utils.logger import get_logger

logger = get_logger(__name__)

INSTANCE_KEYS = {"name", "variety", "isogeny"}
MULT_KEYS = {"kind", "m"}
MATRIX_KEYS = {"kind", "entries"}


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _exact_keys(mapping: Mapping, allowed: set, where: str) -> None:
    if set(mapping) != allowed:
        unknown = sorted(set(mapping) - allowed)
        missing = sorted(allowed - set(mapping))
        raise MalformedSpec(f"{where}: unknown fields {unknown}, missing fields {missing}")


def _build_isogeny(instance: AbelianVarietyInstance, spec: Any) -> Isogeny:
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise MalformedSpec("isogeny must be an object with a 'kind'")

    if spec["kind"] == "mult":
        _exact_keys(spec, MULT_KEYS, "mult isogeny")
        return abvar.mult_by_m(instance, spec["m"])

    if spec["kind"] == "matrix":
        _exact_keys(spec, MATRIX_KEYS, "matrix isogeny")
        entries = spec["entries"]
        n = instance.ambient_rank
        if not isinstance(entries, list) or len(entries) != n or not all(
            isinstance(row, list) and len(row) == n and all(_is_int(x) for x in row)
            for row in entries
        ):
            raise MalformedSpec(f"'entries' must be a {n}x{n} list of integer rows")
        return abvar.isogeny_from_matrix(instance, entries)

    raise MalformedSpec(f"unknown isogeny kind {spec['kind']!r}")


def parse_instance(data: Any) -> Tuple[AbelianVarietyInstance, Isogeny]:
    """Validate an already-decoded instance document."""
    if not isinstance(data, Mapping):
        raise MalformedSpec("instance file must hold a JSON object")
    _exact_keys(data, INSTANCE_KEYS, "instance")
    name = data["name"]
    if not isinstance(name, str) or not name:
        raise MalformedSpec("'name' must be a non-empty string")
    instance = abvar.build_instance(name, data["variety"])
    return instance, _build_isogeny(instance, data["isogeny"])


def load_instance(path: Union[str, Path]) -> Tuple[AbelianVarietyInstance, Isogeny]:
    """Read and validate a UTF-8 JSON instance file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedSpec(f"cannot read instance file {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise MalformedSpec(f"{path} is not UTF-8 text: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedSpec(f"{path} is not valid JSON: {e}") from e

    instance, isogeny = parse_instance(data)
    logger.info(f"Loaded instance from {path}", extra={'instance': instance.label})
    return instance, isogeny
