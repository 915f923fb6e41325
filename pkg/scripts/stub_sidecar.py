#!/usr/bin/env python3
"""Reference sidecar for the line-delimited JSON protocol.

Serves deterministic hash-derived embeddings and saliency maps, useful for
protocol tests and for trying the CLI without a real model. Speaks one JSON
object per line on stdio:

  {"id": n, "kind": "text", "text": ...}          -> {"id": n, "embedding": [...]}
  {"id": n, "kind": "image", "ppm_base64": ...}   -> {"id": n, "embedding": [...]}
  {"id": n, "kind": "saliency", "ppm_base64": ..., "text": ...}
                                                  -> {"id": n, "map": {"w","h","values"}}
"""

from __future__ import annotations

import argparse
import base64
import hashlib
import json
import math
import sys


def hash_vector(payload: bytes, dim: int) -> list[float]:
    values: list[float] = []
    counter = 0
    while len(values) < dim:
        digest = hashlib.sha256(payload + counter.to_bytes(4, "big")).digest()
        values.extend(b / 255.0 - 0.5 for b in digest)
        counter += 1
    values = values[:dim]
    norm = math.sqrt(sum(v * v for v in values)) or 1.0
    return [v / norm for v in values]


def hash_map(payload: bytes, w: int, h: int) -> dict:
    raw = hash_vector(payload, w * h)
    return {"w": w, "h": h, "values": [abs(v) for v in raw]}


def respond(msg: dict, dim: int, grid: int) -> dict:
    kind = msg.get("kind")
    if kind == "text":
        return {"id": msg["id"], "embedding": hash_vector(msg["text"].encode(), dim)}
    if kind == "image":
        return {"id": msg["id"], "embedding": hash_vector(base64.b64decode(msg["ppm_base64"]), dim)}
    if kind == "saliency":
        payload = base64.b64decode(msg["ppm_base64"]) + msg["text"].encode()
        return {"id": msg["id"], "map": hash_map(payload, grid, grid)}
    return {"id": msg.get("id", 0), "error": f"unknown kind {kind!r}"}


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--grid", type=int, default=7)
    parser.add_argument("--fail-on", default=None, help="text that triggers an error response")
    args = parser.parse_args()

    for line in sys.stdin:
        if not line.strip():
            continue
        msg = json.loads(line)
        if args.fail_on and msg.get("text") == args.fail_on:
            reply = {"id": msg["id"], "error": "induced failure"}
        else:
            reply = respond(msg, args.dim, args.grid)
        sys.stdout.write(json.dumps(reply) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
