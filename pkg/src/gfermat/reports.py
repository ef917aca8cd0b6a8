"""Deterministic report serialisation and run manifests."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import __version__

# Descriptive anchors attached to every reported result.
ANCHORS = {
    "modularity-scan": "conductor scan exceptions",
    "bounds": "subgroup norm bounds",
    "residual": "residual totally positive witnesses",
    "norms": "theta norms",
    "frey": "Frey curve conductor shape",
    "j-residue": "j-invariant residue above 2",
    "sieve": "eigenform elimination bound",
    "torsion": "f9 rational 7-torsion",
    "heuristic": "sieve success heuristic",
    "ingest": "eigenform data ingestion",
}


def canonical_json(obj):
    """Byte-stable JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def digest(text):
    if isinstance(text, str):
        text = text.encode()
    return hashlib.sha256(text).hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str = __version__
    seeds: dict | None = None  # nothing random is drawn
    wall_time: float = 0.0
    output_digest: str = ""
    outputs: list = dc_field(default_factory=list)

    def to_dict(self):
        return {
            "command": self.command,
            "parameters": self.parameters,
            "version": self.version,
            "seeds": self.seeds,
            "wall_time": round(self.wall_time, 3),
            "output_digest": self.output_digest,
            "outputs": self.outputs,
        }


def manifest_path(report_path):
    p = Path(report_path)
    return p.with_name(p.name + ".manifest.json")


def write_report(path, command, parameters, body, wall_time):
    """Write ``body`` as canonical JSON and a manifest next to it; returns the manifest.

    The report file carries no timing, so reruns are byte-identical.
    """
    text = canonical_json({"command": command, "anchor": ANCHORS.get(command, command), "result": body})
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    m = RunManifest(command, parameters, wall_time=wall_time, output_digest=digest(text), outputs=[str(path)])
    manifest_path(path).write_text(canonical_json(m.to_dict()))
    return m


def load_manifest(path):
    obj = json.loads(Path(path).read_text())
    return RunManifest(
        obj["command"],
        obj["parameters"],
        obj["version"],
        obj["seeds"],
        obj["wall_time"],
        obj["output_digest"],
        obj["outputs"],
    )
