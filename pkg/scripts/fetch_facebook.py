"""Download the SNAP Facebook ego-network data as an entropy-flow edge list.

By default this writes the combined network (all ten ego networks merged,
4039 vertices, 88234 edges) to ``datasets/facebook_combined.edges``. Which
ego network the original benchmark used is not known, so ``--ego ID``
extracts a single one instead: its edges plus the ego's links to every
member. Circles overlap and do not cover every member, so its label file
gives each vertex its first circle and ``none`` otherwise; treat it as a
rough reference, not ground truth.

    python scripts/fetch_facebook.py
    python scripts/fetch_facebook.py --ego 0
"""

from __future__ import annotations

import argparse
import gzip
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

SNAP = "https://snap.stanford.edu/data/"
EGOS = (0, 107, 348, 414, 686, 698, 1684, 1912, 3437, 3980)


def fetch(name: str) -> bytes:
    print(f"downloading {SNAP}{name}", file=sys.stderr)
    with urllib.request.urlopen(SNAP + name, timeout=120) as resp:
        return resp.read()


def combined(out: Path) -> None:
    text = gzip.decompress(fetch("facebook_combined.txt.gz")).decode()
    seen = set()
    lines = ["# SNAP ego-Facebook, combined network"]
    for row in text.splitlines():
        u, v = row.split()
        key = (min(u, v), max(u, v))
        if u != v and key not in seen:
            seen.add(key)
            lines.append(f"{u} {v}")
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(seen)} edges)", file=sys.stderr)


def single_ego(ego: int, out: Path) -> None:
    with tarfile.open(fileobj=io.BytesIO(fetch("facebook.tar.gz")), mode="r:gz") as tar:
        edges_txt = tar.extractfile(f"facebook/{ego}.edges").read().decode()
        circles_txt = tar.extractfile(f"facebook/{ego}.circles").read().decode()
    pairs = set()
    members = set()
    for row in edges_txt.splitlines():
        u, v = row.split()
        members.update((u, v))
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    ego_id = str(ego)
    for v in members:
        pairs.add((min(ego_id, v), max(ego_id, v)))
    members.add(ego_id)
    out.write_text(f"# SNAP ego-Facebook, ego network {ego}\n"
                   + "".join(f"{u} {v}\n" for u, v in sorted(pairs)))
    label = {}
    for row in circles_txt.splitlines():
        name, *ids = row.split()
        for v in ids:
            label.setdefault(v, name)
    labels = out.with_suffix(".labels")
    labels.write_text("".join(f"{v} {label.get(v, 'none')}\n" for v in sorted(members)))
    print(f"wrote {out} ({len(pairs)} edges) and {labels}", file=sys.stderr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ego", type=int, choices=EGOS, help="extract one ego network instead")
    parser.add_argument("--out-dir", default=str(Path(__file__).resolve().parents[1] / "datasets"))
    args = parser.parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.ego is None:
        combined(out_dir / "facebook_combined.edges")
    else:
        single_ego(args.ego, out_dir / f"facebook_{args.ego}.edges")
    return 0


if __name__ == "__main__":
    sys.exit(main())
