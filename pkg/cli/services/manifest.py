import hashlib
import json
from pathlib import Path
from typing import Any

from cli.models import RunConfig, RunManifest
from src.utils.errors import ConfigError

"""
Manifest helpers - Content hashes, config loading and manifest files
"""

MANIFEST_NAME = "manifest.json"
CHUNK_SIZE = 1 << 20


"""
SHA-256 of a file's content, read in chunks
"""
def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(CHUNK_SIZE), b""):
            digest.update(block)
    return digest.hexdigest()


"""
Read a JSON document
Raises:
    ConfigError: The file is not valid JSON or not an object
"""
def read_json(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from e
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return document


"""
Load and validate an experiment config
Raises:
    ConfigError: Invalid JSON
    pydantic.ValidationError: Schema violation (names the field path)
"""
def load_run_config(path: str) -> RunConfig:
    return RunConfig.model_validate(read_json(path))


def write_json(document: Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


"""
Write a manifest into out_dir and return its path
"""
def write_manifest(manifest: RunManifest, out_dir: Path) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
