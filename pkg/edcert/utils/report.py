"""Report rendering.

Every command builds one plain dict; `render` turns it into either the JSON
block or the text block, so the two can never disagree.
"""
import json
from fractions import Fraction
from typing import Any, Dict, List

from edcert import __version__
from edcert.models.abelian_variety import AbelianVarietyInstance, Subvariety
from edcert.models.bound_report import EdBoundReport
from edcert.models.finite_group import FiniteAbelianGroup


def fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, FiniteAbelianGroup):
        return list(value.invariant_factors)
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def envelope(command: str, **fields: Any) -> Dict[str, Any]:
    data = {'command': command, 'version': __version__}
    data.update(_plain(fields))
    return data


def group_block(group: FiniteAbelianGroup) -> Dict[str, Any]:
    return {'invariant_factors': list(group.invariant_factors), 'order': group.order, 'text': str(group)}


def bounds_data(report: EdBoundReport) -> Dict[str, Any]:
    return envelope(
        'bounds',
        instance=report.instance,
        isogeny=report.isogeny,
        dim=report.dim,
        degree=report.degree,
        kernel=group_block(report.kernel),
        lower=report.lower,
        upper=report.upper,
        exact=report.exact,
        incompressible=report.incompressible,
        coprimality=report.coprimality,
        enumeration_complete=report.enumeration_complete,
        upper_witness={
            'subvariety': report.upper_witness.subvariety,
            'dim': report.upper_witness.dim,
            'rank': report.upper_witness.rank,
            'value': report.upper_witness.value,
        },
        lower_witness=[
            {
                'subvariety': entry.subvariety,
                'dim': entry.dim,
                'prime': entry.prime,
                'rank_p': entry.rank_p,
                'value': entry.value,
            }
            for entry in report.lower_witness
        ],
        assumptions=list(report.assumptions),
    )


def subvarieties_data(
    instance: AbelianVarietyInstance, family: List[Subvariety], complete: bool
) -> Dict[str, Any]:
    return envelope(
        'subvarieties',
        instance=instance.label,
        dim=instance.dim,
        enumeration_complete=complete,
        subvarieties=[
            {
                'label': subvariety.label,
                'dim': subvariety.dim,
                'basis': [list(row) for row in subvariety.lattice.rows],
            }
            for subvariety in family
        ],
        assumptions=list(instance.assumptions),
    )


def to_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def _text_lines(data: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    for key in sorted(data):
        value = data[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text_lines(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(item, dict) for item in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                cells = ", ".join(f"{k}={_scalar_text(item[k])}" for k in sorted(item))
                lines.append(f"{pad}  - {cells}")
        else:
            lines.append(f"{pad}{key}: {_scalar_text(value)}")
    return lines


def _scalar_text(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return "[" + ", ".join(_scalar_text(item) for item in value) + "]"
    return str(value)


def _headline(data: Dict[str, Any]) -> List[str]:
    if data.get('command') != 'bounds':
        return []
    lower, upper, exact = data['lower'], data['upper'], data['exact']
    if lower is None:
        line = f"upper = {upper} (lower bound refused)"
    elif lower == upper:
        line = f"lower = upper = {upper}"
    else:
        line = f"{lower} <= ed <= {upper}"
    if exact is not None:
        line = f"exact = {exact}; {line}"
    if data.get('incompressible'):
        line += " (incompressible)"
    return [line]


def to_text(data: Dict[str, Any]) -> str:
    return "\n".join(_headline(data) + _text_lines(data))


def render(data: Dict[str, Any], as_json: bool = False) -> str:
    return to_json(data) if as_json else to_text(data)
