"""
Formatadores de relatório da CLI.

Cada comando devolve um dicionário com pelo menos "command" e "ok";
emit_report acrescenta format_version e o renderiza como texto legível
ou JSON canônico (chaves ordenadas, listas vazias preservadas).
"""

import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any, Union

from gpdkit.config import FORMAT_VERSION, OutputFormat


def to_jsonable(value: Any) -> Any:
    """Converte valores de relatório em estruturas JSON deterministicamente.

    - objetos com to_dict() -> to_dict()
    - dataclasses -> asdict (recursivo)
    - Enum -> value
    - set/frozenset -> lista ordenada
    - tuple -> lista
    """
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    return str(value)


def emit_report(result: dict, fmt: Union[OutputFormat, str] = OutputFormat.TEXT) -> str:
    """Renderiza o relatório de um comando.

    Args:
        result: dicionário do comando (precisa de "command" e "ok")
        fmt: OutputFormat.TEXT ou OutputFormat.JSON

    Returns:
        Texto terminado em quebra de linha, pronto para stdout.

    Example:
        >>> print(emit_report({"command": "validate", "ok": True, "violations": []}, "json"))
    """
    report = to_jsonable({**result, "format_version": FORMAT_VERSION})
    if OutputFormat(fmt) is OutputFormat.JSON:
        return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return _render_text(report)


def _render_text(report: dict) -> str:
    status = "ok" if report.get("ok") else "FALHOU"
    lines = [f"{report.get('command', '?')}: {status}"]
    for key in sorted(report):
        if key in ("command", "ok", "format_version"):
            continue
        lines.extend(_render_value(key, report[key], indent=1))
    return "\n".join(lines) + "\n"


def _render_value(key: str, value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return [f"{pad}{key}: {{}}"]
        lines = [f"{pad}{key}:"]
        for k in sorted(value):
            lines.extend(_render_value(k, value[k], indent + 1))
        return lines
    if isinstance(value, list):
        if not value:
            return [f"{pad}{key}: []"]
        if all(not isinstance(v, (dict, list)) for v in value):
            return [f"{pad}{key}: {', '.join(map(_scalar, value))}"]
        lines = [f"{pad}{key}: ({len(value)})"]
        for item in value:
            lines.extend(_render_item(item, indent + 1))
        return lines
    return [f"{pad}{key}: {_scalar(value)}"]


def _render_item(item: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(item, dict) and "invariant" in item:
        subjects = ", ".join(item.get("subjects", []))
        return [f"{pad}- [{item['invariant']}] {item.get('message', '')} ({subjects})"]
    if isinstance(item, dict) and "law" in item:
        mark = "pass" if item.get("passed") else "FAIL"
        return [f"{pad}- {mark} {item['law']} ({item.get('checked', 0)} instâncias)"]
    if isinstance(item, dict):
        inner = [f"{k}={_scalar(item[k])}" for k in sorted(item) if not isinstance(item[k], (dict, list))]
        lines = [f"{pad}- {' '.join(inner)}".rstrip()]
        for k in sorted(item):
            if isinstance(item[k], (dict, list)):
                lines.extend(_render_value(k, item[k], indent + 1))
        return lines
    if isinstance(item, list):
        return [f"{pad}- {', '.join(map(_scalar, item))}"]
    return [f"{pad}- {_scalar(item)}"]


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "sim" if value else "não"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return str(value)
