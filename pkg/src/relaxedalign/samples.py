"""Write the bundled package-delivery sample documents.

Usage: python -m relaxedalign.samples OUTDIR
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from .delivery import scenario_log, scenario_model
from .documents import log_to_doc, model_to_doc


def write_samples(outdir: str | Path) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for n in (1, 2, 3, 4):
        model_path = out / f"delivery-model-{n}.json"
        log_path = out / f"delivery-log-{n}.json"
        model_path.write_text(json.dumps(model_to_doc(scenario_model(n)), indent=2, sort_keys=True))
        log_path.write_text(json.dumps(log_to_doc(scenario_log(n)), indent=2, sort_keys=True))
        written += [model_path, log_path]
    return written


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "samples"
    for path in write_samples(target):
        print(path)
