"""Chat-completion backend: stateless requests, audited raw responses,
and tabular extraction from free-form model output.

The client is endpoint-shaped (OpenAI-style chat completions), not vendor
specific. Every request is a single-user-message payload with no carried
conversation state; the API key comes from an environment variable, never
from config files or argv.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import requests

from .data import Dataset, TableSchema, _parse_cell, rename_columns
from .errors import (
    AuthError,
    HeaderMismatch,
    NetworkError,
    NoTableFound,
    RefusalDetected,
    SynthtabError,
    Timeout,
)
from .llm_tables import extract_table
from .prompting import NameMap

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str
    model: str
    api_key_env: str = "LLM_API_KEY"
    timeout: float = 120.0
    max_retries: int = 2
    temperature: float | None = None
    stateless: bool = True


@dataclass(frozen=True)
class RawGeneration:
    """Verbatim record of one generation request, kept for audit."""

    prompt: str
    response_text: str
    timestamp: str
    model: str


def _build_payload(prompt: str, cfg: LlmConfig) -> dict:
    payload: dict = {
        "model": cfg.model,
        "messages": [{"role": "user", "content": prompt}],
    }
    if cfg.temperature is not None:
        payload["temperature"] = cfg.temperature
    return payload


def _post_once(prompt: str, cfg: LlmConfig, api_key: str) -> str:
    try:
        resp = requests.post(
            cfg.endpoint,
            json=_build_payload(prompt, cfg),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=cfg.timeout,
        )
    except requests.exceptions.Timeout as exc:
        raise Timeout(f"request to {cfg.endpoint} timed out") from exc
    except requests.exceptions.RequestException as exc:
        raise NetworkError(f"request to {cfg.endpoint} failed: {exc}") from exc
    if resp.status_code in (401, 403):
        raise AuthError(f"endpoint rejected credentials ({resp.status_code})")
    if resp.status_code != 200:
        raise NetworkError(f"endpoint returned status {resp.status_code}")
    try:
        body = resp.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise NetworkError("malformed chat-completion response body") from exc
    if not isinstance(content, str):
        raise NetworkError("chat-completion content is not text")
    return content


def _looks_tabular(text: str) -> bool:
    try:
        extract_table(text)
        return True
    except SynthtabError:
        return False


def llm_generate(prompt: str, cfg: LlmConfig,
                 audit_dir: str | Path | None = None) -> RawGeneration:
    """One stateless generation request, retried on failure.

    Raw response text is persisted to ``audit_dir`` before any parsing.
    Responses with no recognizable tabular content raise RefusalDetected
    (also retried: regeneration may succeed).
    """
    api_key = os.environ.get(cfg.api_key_env)
    if not api_key:
        raise AuthError(
            f"environment variable {cfg.api_key_env} is not set"
        )
    if not cfg.stateless:
        raise ValueError("stateful sessions are not supported; "
                         "set stateless=True")
    if audit_dir is not None:
        audit_dir = Path(audit_dir)
        audit_dir.mkdir(parents=True, exist_ok=True)

    attempts = cfg.max_retries + 1
    last_error: SynthtabError | None = None
    for attempt in range(1, attempts + 1):
        timestamp = datetime.now(timezone.utc).isoformat()
        if audit_dir is not None:
            request_path = audit_dir / f"request_{attempt:02d}.json"
            request_path.write_text(
                json.dumps(_build_payload(prompt, cfg), indent=2) + "\n",
                encoding="utf-8",
            )
        try:
            content = _post_once(prompt, cfg, api_key)
        except (NetworkError, AuthError, Timeout) as exc:
            last_error = exc
            log.warning("attempt %d/%d failed: %s", attempt, attempts, exc)
            if attempt < attempts:
                time.sleep(min(2.0 ** (attempt - 1), 8.0))
            continue
        if audit_dir is not None:
            (audit_dir / f"response_{attempt:02d}.txt").write_text(
                content, encoding="utf-8"
            )
        if not _looks_tabular(content):
            last_error = RefusalDetected(
                "response contains no tabular content"
            )
            log.warning("attempt %d/%d: %s", attempt, attempts, last_error)
            continue
        return RawGeneration(
            prompt=prompt,
            response_text=content,
            timestamp=timestamp,
            model=cfg.model,
        )
    assert last_error is not None
    raise last_error


def parse_tabular(raw: RawGeneration, schema: TableSchema, name_map: NameMap,
                  expected_rows: int | None = None
                  ) -> tuple[Dataset, list[str]]:
    """Extract the table from a raw response and validate it.

    The table header must be a permutation of the obfuscated names; columns
    are reordered, renamed back to the schema names, and validated (numeric,
    complete, ordinal levels). A row-count mismatch is returned as a warning
    rather than an error.
    """
    expected_names = [name_map.obfuscated(n) for n in schema.names]
    header, rows = extract_table(raw.response_text,
                                 expected_header=expected_names)

    order = [header.index(n) for n in expected_names]
    obf_schema = TableSchema(tuple(
        replace(schema.columns[i], name=expected_names[i])
        for i in range(len(expected_names))
    ))

    values = []
    for i, record in enumerate(rows, start=1):
        values.append([
            _parse_cell(record[j], i, expected_names[pos])
            for pos, j in enumerate(order)
        ])
    ds = Dataset.from_rows(obf_schema, values, check_levels=True)
    ds = rename_columns(ds, name_map.to_original)

    warnings = []
    if expected_rows is not None and ds.n_rows != expected_rows:
        warnings.append(
            f"row count mismatch: requested {expected_rows}, got {ds.n_rows}"
        )
    return ds, warnings
