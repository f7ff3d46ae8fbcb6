"""engine.parsing

Tolerant JSON parsing for hand-written run configurations.

Config files are edited by people, so a few deviations from strict JSON are
accepted. Nothing is executed; the text is only cleaned:
- // and # line comments and /* */ blocks outside strings are dropped
- typographic quotes, non-breaking spaces and the minus sign are normalized
- trailing commas before } or ] are removed
then read with json.loads, falling back to ast.literal_eval for Python-style
literals (single quotes, True/False/None).
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

_TYPOGRAPHIC = str.maketrans({
    "\u201c": "\"",
    "\u201d": "\"",
    "\u2018": "'",
    "\u2019": "'",
    "\u00a0": " ",
    "\u2212": "-",
})
_TRAILING_COMMA = re.compile(r",\s*([}\]])")
_JSON_WORDS = ((re.compile(r"\btrue\b"), "True"), (re.compile(r"\bfalse\b"), "False"), (re.compile(r"\bnull\b"), "None"))


@dataclass(frozen=True)
class ParseResult:
    data: Optional[Dict[str, Any]]
    source: str
    cleaned: str
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.data is not None


def normalize_typography(text: str) -> str:
    return (text or "").translate(_TYPOGRAPHIC)


def strip_comments(text: str) -> str:
    """Drop comments sitting outside quoted strings."""
    s = text or ""
    kept = []
    pos, end = 0, len(s)
    in_string = ""
    while pos < end:
        ch = s[pos]
        if in_string:
            if ch == "\\":
                kept.append(s[pos:pos + 2])
                pos += 2
                continue
            kept.append(ch)
            if ch == in_string:
                in_string = ""
            pos += 1
        elif ch in "\"'":
            in_string = ch
            kept.append(ch)
            pos += 1
        elif ch == "#" or s.startswith("//", pos):
            nl = s.find("\n", pos)
            pos = end if nl < 0 else nl
        elif s.startswith("/*", pos):
            close = s.find("*/", pos + 2)
            pos = end if close < 0 else close + 2
        else:
            kept.append(ch)
            pos += 1
    return "".join(kept)


def remove_trailing_commas(text: str) -> str:
    return _TRAILING_COMMA.sub(r"\1", text)


def clean_config_text(text: str) -> str:
    return remove_trailing_commas(strip_comments(normalize_typography(text))).strip()


def _python_literal(cleaned: str) -> Any:
    s = cleaned
    for pattern, word in _JSON_WORDS:
        s = pattern.sub(word, s)
    return ast.literal_eval(s)


def try_parse_json(text: str) -> ParseResult:
    """Best-effort parse of a config object; failures come back in `error`."""
    source = (text or "").strip()
    cleaned = clean_config_text(source)

    try:
        obj = json.loads(cleaned)
    except json.JSONDecodeError as e:
        json_error = f"line {e.lineno} col {e.colno}: {e.msg}"
    else:
        if isinstance(obj, dict):
            return ParseResult(obj, source, cleaned)
        return ParseResult(None, source, cleaned, f"top level must be an object, got {type(obj).__name__}")

    try:
        obj = _python_literal(cleaned)
    except (ValueError, SyntaxError, TypeError):
        return ParseResult(None, source, cleaned, json_error)
    if not isinstance(obj, dict):
        return ParseResult(None, source, cleaned, f"top level must be an object, got {type(obj).__name__}")
    # round-trip so tuples and the like come back as JSON types
    return ParseResult(json.loads(json.dumps(obj)), source, cleaned)


def must_parse_json(text: str) -> Dict[str, Any]:
    res = try_parse_json(text)
    if not res.ok:
        raise ValueError(res.error or "config text could not be parsed")
    return res.data  # type: ignore[return-value]


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"config file not found: {p}")
    return must_parse_json(p.read_text(encoding="utf-8"))
