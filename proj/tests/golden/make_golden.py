#!/usr/bin/env python3
"""Writes the retrieval-prompt golden files from the raw fixture lines.

Normalizes the record on its own (argument lists, nested performance trees)
and serializes with the json module, so the C++ serializer is not involved.
Run from the repository root: python3 tests/golden/make_golden.py
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = pathlib.Path(__file__).resolve().parent
MARKER = "Use this API documentation for reference: "
FIELDS = ["domain", "framework", "functionality", "api_name", "api_call", "api_arguments",
          "environment_requirements", "example_code", "performance", "description"]

CASES = [
    ("th-densenet121", "I want to classify images of birds with a pretrained model.", "prompt_densenet121.txt"),
    ("th-hybridnets", "Detect cars and lane lines in dashcam footage.", "prompt_hybridnets.txt"),
]


def flatten(tree, prefix, out):
    if isinstance(tree, dict):
        for k, v in tree.items():
            flatten(v, k if not prefix else prefix + " / " + k, out)
    else:
        value = float(tree)
        assert not (0 < value <= 1), "fractional metric would be rescaled"
        out[prefix] = value


def group(obj, dataset_key):
    g = {"dataset": "", "metrics": {}}
    for k, v in obj.items():
        if k == dataset_key and isinstance(v, str):
            g["dataset"] = v
        elif k == "metrics":
            flatten(v, "", g["metrics"])
        else:
            flatten(v, k, g["metrics"])
    return g


def performance(p):
    if isinstance(p, list):
        return [group(o, "dataset") for o in p]
    if isinstance(p, dict) and isinstance(p.get("dataset"), list):
        return [group(o, "name") for o in p["dataset"]]
    if isinstance(p, dict) and p:
        return [group(p, "dataset")]
    return []


def normalize(raw):
    rec = {"id": raw["id"]}
    for f in FIELDS:
        v = raw[f]
        if f == "api_arguments":
            v = [{"name": a, "optional": False} for a in v]
        elif f == "performance":
            v = performance(v)
        rec[f] = v
    return rec


def main():
    records = {}
    for line in (ROOT / "data" / "fixtures" / "torchhub.jsonl").read_text(encoding="utf-8").splitlines():
        if line.strip():
            raw = json.loads(line)
            records[raw["id"]] = raw
    for rid, instruction, name in CASES:
        doc = json.dumps(normalize(records[rid]), separators=(",", ":"), ensure_ascii=False)
        (OUT / name).write_text(instruction + " " + MARKER + doc, encoding="utf-8")


if __name__ == "__main__":
    main()
