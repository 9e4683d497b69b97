"""
Provenance and report payload helpers
"""
from typing import Any, Dict, Optional
import hashlib
import json

from pexider_kit import __version__


def canonical_json(data: Dict[str, Any]) -> str:
    """Sorted-key, whitespace-free JSON used for hashing"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)


def hash_config(data: Dict[str, Any]) -> str:
    """SHA-256 of the canonical config JSON"""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def create_provenance(command: str, config: Dict[str, Any], family: Optional[str] = None, seed: int = 0) -> Dict[str, Any]:
    """Provenance block; no timestamps so identical runs give identical files"""
    return {
        "package": "pexider-kit",
        "version": __version__,
        "command": command,
        "family": family,
        "seed": seed,
        "config_sha256": hash_config(config),
    }


def create_verify_report(
    provenance: Dict[str, Any],
    artifact_family: str,
    residuals: Dict[str, Any],
    passed: bool,
) -> Dict[str, Any]:
    """Payload written by the verify command"""
    return {
        "type": "verify",
        "provenance": provenance,
        "data": {
            "family": artifact_family,
            "residuals": residuals,
            "passed": passed,
        },
    }


def create_classify_report(provenance: Dict[str, Any], report: Dict[str, Any]) -> Dict[str, Any]:
    """Payload written by the classify command"""
    return {
        "type": "classify",
        "provenance": provenance,
        "data": report,
    }


def create_geometry_report(provenance: Dict[str, Any], report: Dict[str, Any]) -> Dict[str, Any]:
    """Payload written by the geometry command"""
    return {
        "type": "geometry",
        "provenance": provenance,
        "data": report,
    }


def create_selftest_report(provenance: Dict[str, Any], report: Dict[str, Any]) -> Dict[str, Any]:
    """Payload written by the selftest command"""
    return {
        "type": "selftest",
        "provenance": provenance,
        "data": report,
    }
