"""Run the CLI on every config in scripts/configs/ and tabulate exit code and timing.

    python3 scripts/run_configs.py [--out results/]
"""
import argparse
import contextlib
import io
import json
import time
from pathlib import Path

from padic_shalika.cli import main

HERE = Path(__file__).resolve().parent
COMMAND_BY_PREFIX = {"verify": "verify", "perturbed": "verify", "euler": "euler", "stab": "stab", "measure": "measure"}


def command_for(path: Path) -> str | None:
    return COMMAND_BY_PREFIX.get(path.stem.split("_")[0])


def run(path: Path, out_dir: Path | None) -> tuple[int, float, dict | None]:
    cmd = command_for(path)
    buf = io.StringIO()
    t0 = time.perf_counter()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main([cmd, "--config", str(path)])
    elapsed = time.perf_counter() - t0
    doc = json.loads(buf.getvalue()) if buf.getvalue().strip() else None
    if out_dir is not None and doc is not None:
        (out_dir / f"{path.stem}.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return code, elapsed, doc


def summary(doc: dict | None) -> str:
    if doc is None:
        return "-"
    if doc["command"] == "verify":
        return f"{doc['passed']}/{doc['total']}"
    if doc["command"] == "stab":
        return f"{doc['weakly_ordinary_count']}/{doc['count']} weakly ordinary"
    if doc["command"] == "measure":
        return f"floors {doc['diagnostic']['floors']} bounded={doc['diagnostic']['bounded']}"
    return f"{len(doc['rows'])} rows"


def main_cli():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, help="directory for the JSON outputs")
    args = ap.parse_args()
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'config':<28}{'command':<9}{'exit':<6}{'seconds':<9}summary")
    for path in sorted((HERE / "configs").glob("*.json")):
        if command_for(path) is None:
            continue  # provider tables are inputs, not runs
        code, elapsed, doc = run(path, args.out)
        print(f"{path.stem:<28}{command_for(path):<9}{code:<6}{elapsed:<9.2f}{summary(doc)}")


if __name__ == "__main__":
    main_cli()
