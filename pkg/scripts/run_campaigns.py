"""Run every verification campaign and write one JSON report per kind."""

import argparse
import os
from pathlib import Path

from realstack import specio
from realstack.search_harness import KINDS, Campaign, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out-dir", default="campaigns")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for kind in KINDS:
        max_order = 24 if kind == "bgamma" else 8
        campaign = Campaign(kind, args.seed, args.count, max_order=max_order,
                            workers=args.workers, out_dir=str(out / "replays"))
        summary = run(campaign).to_json()
        (out / f"{kind}.json").write_text(specio.dumps(summary))
        print(f"{kind:14s} checked {summary['checked']:6d}  unique {summary['unique']:6d}  "
              f"violations {len(summary['violations'])}  {summary['wall_time_ms'] / 1000:.1f}s")


if __name__ == "__main__":
    main()
