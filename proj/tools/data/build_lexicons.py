#!/usr/bin/env python3
"""Regenerates the bundled tagger and noun.attribute data files.

Inputs are third-party distributions, not shipped here:
  --brill-dir    directory holding en-lexicon.txt and en-context.txt
                 (Brill tagger v1.14 data as redistributed by the Pattern
                 library, BSD licensed)
  --wordnet-dir  WordNet 3.0 dict directory (index.noun, data.noun)

Usage:
  build_lexicons.py --brill-dir DIR --wordnet-dir DIR --out data/
"""

import argparse
import pathlib

PENN_TAGS = {
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",
    "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT",
    "WP", "WP$", "WRB", "#", "$", ".", ",", ":", "-LRB-", "-RRB-", "``", "''",
}
NOUN_ATTRIBUTE_LEXFILE = 7
# Rules that misfire on feedback text, e.g. "Good in customer handling" -> VBN.
DROPPED_CONTEXT_RULES = {"JJ VBN SURROUNDTAG STAART IN"}


def build_tag_lexicon(brill: pathlib.Path, out: pathlib.Path) -> int:
    seen = set()
    rows = []
    for line in (brill / "en-lexicon.txt").read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        tag = tag.split("|")[0]
        tag = {"(": "-LRB-", ")": "-RRB-", "NP": "NNP"}.get(tag, tag)
        if tag not in PENN_TAGS or word in seen:
            continue
        seen.add(word)
        rows.append(f"{word}\t{tag}")
    (out / "tag_lexicon.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return len(rows)


def build_context_rules(brill: pathlib.Path, out: pathlib.Path) -> int:
    rows = []
    for line in (brill / "en-context.txt").read_text(encoding="utf-8").splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        rule = " ".join(line.split())
        if rule not in DROPPED_CONTEXT_RULES:
            rows.append(rule)
    (out / "tag_context_rules.txt").write_text("\n".join(rows) + "\n", encoding="utf-8")
    return len(rows)


def build_noun_attribute(wordnet: pathlib.Path, out: pathlib.Path) -> int:
    lexfile = {}
    for line in (wordnet / "data.noun").open(encoding="latin-1"):
        if line.startswith("  "):
            continue
        parts = line.split()
        lexfile[parts[0]] = int(parts[1])
    lemmas = set()
    for line in (wordnet / "index.noun").open(encoding="latin-1"):
        if line.startswith("  "):
            continue
        parts = line.split()
        lemma, count = parts[0], int(parts[2])
        if "_" in lemma or "-" in lemma or not lemma.isalpha():
            continue
        # any sense counts: "sincerity" is listed first under noun.feeling
        if any(lexfile[o] == NOUN_ATTRIBUTE_LEXFILE for o in parts[-count:]):
            lemmas.add(lemma.lower())
    header = "# WordNet 3.0 nouns with at least one sense in noun.attribute\n"
    (out / "noun_attribute.txt").write_text(header + "\n".join(sorted(lemmas)) + "\n", encoding="utf-8")
    return len(lemmas)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--brill-dir", type=pathlib.Path, required=True)
    ap.add_argument("--wordnet-dir", type=pathlib.Path, required=True)
    ap.add_argument("--out", type=pathlib.Path, required=True)
    args = ap.parse_args()
    print("tag lexicon entries:", build_tag_lexicon(args.brill_dir, args.out))
    print("context rules:", build_context_rules(args.brill_dir, args.out))
    print("noun.attribute lemmas:", build_noun_attribute(args.wordnet_dir, args.out))


if __name__ == "__main__":
    main()
