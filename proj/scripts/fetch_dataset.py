#!/usr/bin/env python3
"""Fetch the published dataset and wordlists for the full-dataset acceptance run.

Downloads the lexeme-level dataset from the Hugging Face hub, converts it to
JSONL shards under --out, and (optionally) prepares the two comparison
wordlists. The converter owns all column-name mapping between the hub layout
and the canonical entry schema (schemas/lexeme_entry.schema.json); adjust
COLUMN_ALIASES if the hub card changes.

Usage:
    python3 scripts/fetch_dataset.py --out data/
    OPENGLOSS_DATASET_DIR=data/ ctest --test-dir build -R acceptance_fulldataset

Wordlists:
    - WordNet 3.0 lemmas: python3 -c "import nltk; nltk.download('wordnet')" then
      --wordnet to export every lemma name (underscored forms included; the
      comparison maps underscores to spaces).
    - wamerican: /usr/share/dict/american-english from the wamerican package
      (2020.12.07-4 was used for the documented counts).
"""

import argparse
import json
import os
import sys

COLUMN_ALIASES = {
    # hub column -> canonical field; identity entries listed for visibility
    "lemma": "lemma",
    "word": "lemma",
    "headword": "lemma",
    "pos_entries": "pos_entries",
    "entries": "pos_entries",
    "etymology": "etymology",
    "encyclopedia": "encyclopedia",
    "is_stopword": "is_stopword",
    "stopword_reason": "stopword_reason",
    "metadata": "metadata",
}

DATASET_ID = "mjbommar/opengloss-dictionary"


def convert_record(record):
    out = {}
    for key, value in record.items():
        target = COLUMN_ALIASES.get(key, key)
        if target in out and target != key:
            continue  # canonical name already present; keep it
        # Hub exports sometimes serialize nested structures as JSON strings.
        if target in ("pos_entries", "etymology", "encyclopedia", "metadata") and isinstance(
            value, str
        ):
            try:
                value = json.loads(value)
            except ValueError:
                pass
        out[target] = value
    return out


def fetch(out_dir, shard_size):
    try:
        from datasets import load_dataset
    except ImportError:
        sys.exit(
            "the 'datasets' package is required: pip install datasets\n"
            "(alternatively download the parquet files from the hub and convert manually)"
        )
    os.makedirs(out_dir, exist_ok=True)
    dataset = load_dataset(DATASET_ID, split="train")
    shard, written, index = None, 0, 0
    for record in dataset:
        if shard is None or written >= shard_size:
            if shard:
                shard.close()
            shard = open(os.path.join(out_dir, f"shard-{index:04d}.jsonl"), "w")
            index += 1
            written = 0
        shard.write(json.dumps(convert_record(record), ensure_ascii=False) + "\n")
        written += 1
    if shard:
        shard.close()
    print(f"wrote {index} shard(s) to {out_dir}")


def export_wordnet(path):
    try:
        from nltk.corpus import wordnet
    except ImportError:
        sys.exit("nltk with the wordnet corpus is required: pip install nltk")
    lemmas = set()
    for synset in wordnet.all_synsets():
        for lemma in synset.lemmas():
            lemmas.add(lemma.name())
    with open(path, "w") as fh:
        for lemma in sorted(lemmas):
            fh.write(lemma + "\n")
    print(f"wrote {len(lemmas)} WordNet lemmas to {path}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data", help="output directory for JSONL shards")
    parser.add_argument("--shard-size", type=int, default=25000, help="entries per shard")
    parser.add_argument("--wordnet", help="also export a WordNet lemma list to this path")
    parser.add_argument(
        "--skip-dataset", action="store_true", help="only export wordlists"
    )
    args = parser.parse_args()
    if not args.skip_dataset:
        fetch(args.out, args.shard_size)
    if args.wordnet:
        export_wordnet(args.wordnet)


if __name__ == "__main__":
    main()
