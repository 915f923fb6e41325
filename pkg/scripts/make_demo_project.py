#!/usr/bin/env python3
"""Build the synthetic two-scene demo into a directory and print the CLI
commands that run the full pipeline against it."""

import argparse
from pathlib import Path

from videofoley.synthetic import build_golden


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("out", nargs="?", default="demo", help="output directory")
    args = parser.parse_args()

    fx = build_golden(Path(args.out))
    project = fx.root / "project.json"
    print(f"demo inputs written to {fx.root}/")
    print("\nrun the pipeline:")
    print(
        f"  videofoley analyze --media {fx.media_dir} --catalog {fx.catalog_path} "
        f"--out {project} \\\n      --embed-backend {fx.embed_spec} --saliency-backend {fx.saliency_spec}"
    )
    print(f"  videofoley generate --project {project}")
    print(f"  videofoley export --project {project} --out {fx.root}/stems.zip")
    print(f"  videofoley serve --project {project} --port 8000")


if __name__ == "__main__":
    main()
