# cremona/report_formatter.py
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from cremona.group_lab import GroupWord
from cremona.lattice import LatticeMatrix
from cremona.polynomial import Polynomial
from cremona.projective import AffinePolyMap, ProjectiveMap, ProjectivePoint


class ReportTemplates:
    STATUS_OK = "ok"
    STATUS_USAGE = "usage_error"
    STATUS_PRECONDITION = "precondition_violation"
    STATUS_VERIFICATION = "verification_failure"

    EXIT_CODES = {
        STATUS_OK: 0,
        STATUS_USAGE: 1,
        STATUS_PRECONDITION: 2,
        STATUS_VERIFICATION: 3,
    }


def to_jsonable(value: Any) -> Any:
    """
    Приведение результата к детерминированному JSON-виду
    Целые числа пишутся десятичными строками, дроби как 'p/q'
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, ProjectiveMap):
        return [str(c) for c in value.components]
    if isinstance(value, AffinePolyMap):
        return [str(c) for c in value.components]
    if isinstance(value, ProjectivePoint):
        return [to_jsonable(c) for c in value.normalized()]
    if isinstance(value, LatticeMatrix):
        return [[str(x) for x in row] for row in value.rows]
    if isinstance(value, GroupWord):
        return str(value)
    if hasattr(value, "as_dict"):
        return to_jsonable(value.as_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, (set, frozenset)) else items
    raise TypeError(f"cannot serialize {type(value).__name__}")


def inputs_digest(arguments: Dict[str, Any], files: Iterable[str] = ()) -> str:
    """sha256 от аргументов команды и содержимого входных файлов"""
    digest = hashlib.sha256()
    digest.update(json.dumps(to_jsonable(arguments), sort_keys=True).encode("utf-8"))
    for name in sorted(set(files)):
        digest.update(b"\0")
        try:
            digest.update(Path(name).read_bytes())
        except OSError:
            digest.update(name.encode("utf-8"))
    return digest.hexdigest()


def format_report(name: str, arguments: Dict[str, Any], digest: str, result: Any,
                  status: str, indent: Optional[int] = 2) -> str:
    """Единый документ отчета: команда, digest, результат, статус"""
    report = {
        "command": {"name": name, "args": to_jsonable(arguments)},
        "inputs_digest": digest,
        "result": to_jsonable(result),
        "status": status,
    }
    return json.dumps(report, sort_keys=True, indent=indent or None, ensure_ascii=False)


def exit_code(status: str) -> int:
    return ReportTemplates.EXIT_CODES[status]
