#!/usr/bin/env python3
"""Fetch the standard benchmark images into a corpus directory.

The classic 512x512 color test images are not vendored in this repository
(licensing); this script downloads them from the USC SIPI image database and
converts them to PPM. Requires network access and Pillow.

Usage:
    python scripts/fetch_corpus.py [--dest corpus]
"""

from __future__ import annotations

import argparse
import io
import sys
import urllib.request
from pathlib import Path

# USC SIPI "misc" volume, 512x512 color TIFFs.
SIPI_BASE = "https://sipi.usc.edu/database/download.php?vol=misc&img="
IMAGES = {
    "lenna": "4.2.04",
    "peppers": "4.2.07",
    "baboon": "4.2.03",
    "airplane": "4.2.05",
    "sailboat": "4.2.06",
}


def fetch(name: str, sipi_id: str, dest: Path) -> bool:
    from PIL import Image

    target = dest / f"{name}.ppm"
    if target.exists():
        print(f"{target} already present, skipping")
        return True
    url = SIPI_BASE + sipi_id
    print(f"fetching {name} from {url}")
    try:
        with urllib.request.urlopen(url, timeout=60) as response:
            payload = response.read()
        img = Image.open(io.BytesIO(payload)).convert("RGB")
        img.save(target, format="PPM")
    except Exception as exc:
        print(f"  failed: {exc}", file=sys.stderr)
        return False
    print(f"  wrote {target}")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", type=Path, default=Path("corpus"))
    args = parser.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)
    failures = [name for name, sipi_id in IMAGES.items() if not fetch(name, sipi_id, args.dest)]
    if failures:
        print(f"could not fetch: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
