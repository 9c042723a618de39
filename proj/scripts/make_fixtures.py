#!/usr/bin/env python3
"""Regenerates the committed test fixtures and their expected values.

Expected values are computed here without the C++ code, so the tests
compare two independent implementations.
"""
import json
import random
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
LETTERS = "abcdefghijklmnopqrstuvwxyz"


def random_tree(rng, n):
    heads = [0] * n
    order = list(range(n))
    rng.shuffle(order)
    root = order[0]
    heads[root] = -1
    placed = [root]
    for w in order[1:]:
        heads[w] = rng.choice(placed)
        placed.append(w)
    return heads


def conllu_fixture(rng):
    labels = ["nsubj", "obj", "amod", "det", "case", "obl", "advmod", "punct", "nmod"]
    blocks = []
    for s in range(50):
        n = rng.randint(2, 14)
        words = ["".join(rng.choice(LETTERS) for _ in range(rng.randint(1, 7))) for _ in range(n)]
        heads = random_tree(rng, n)
        lines = [f"# sent_id = s{s + 1}", f"# text = {' '.join(words)}"]
        for i in range(n):
            if s % 7 == 3 and i == 1:
                # Multiword token range and an empty node, both skipped.
                lines.append(f"{i + 1}-{i + 2}\t{words[i]}{words[i + 1] if i + 1 < n else ''}\t_\t_\t_\t_\t_\t_\t_\t_")
            h = heads[i] + 1
            label = "root" if h == 0 else rng.choice(labels)
            lines.append(f"{i + 1}\t{words[i]}\t{words[i]}\tX\t_\t_\t{h}\t{label}\t_\t_")
            if s % 11 == 5 and i == 0:
                lines.append(f"1.1\tghost\t_\t_\t_\t_\t_\t_\t1:dep\t_")
        blocks.append("\n".join(lines) + "\n")
    text = "\n".join(blocks)
    (OUT / "ud_50.conllu").write_text(text)

    # Independent line scan: token lines have an integer ID; edges are the
    # token lines whose HEAD is not 0.
    counts, current = [], None
    for line in text.split("\n"):
        if not line.strip():
            if current is not None:
                counts.append(current)
            current = None
            continue
        if line.startswith("#"):
            current = current or 0
            continue
        cols = line.split("\t")
        current = current or 0
        if cols[0].isdigit() and cols[6] != "0":
            current += 1
    if current is not None:
        counts.append(current)
    (OUT / "ud_50.edge_counts.txt").write_text("\n".join(map(str, counts)) + "\n")


def graphs_fixture(rng):
    lines = []
    for g in range(20):
        n = rng.randint(1, 9)
        words = ["".join(rng.choice(LETTERS) for _ in range(rng.randint(1, 5))) for _ in range(n)]
        fw = ["UD", "DEP", "DM", "SDP", "GENERIC"][g % 5]
        edges = []
        if fw in ("UD", "DEP"):
            heads = random_tree(rng, n)
            edges = [{"head": h, "dep": d, "label": "dep"} for d, h in enumerate(heads) if h >= 0]
        else:
            seen = set()
            for _ in range(rng.randint(0, 2 * n)):
                h, d = rng.randrange(n), rng.randrange(n)
                lab = rng.choice(["ARG1", "ARG2", "BV", "compound"])
                if h != d and (h, d, lab) not in seen:
                    seen.add((h, d, lab))
                    edges.append({"head": h, "dep": d, "label": lab})
        lines.append(json.dumps({"words": words, "edges": edges, "framework": fw}))
    (OUT / "graphs_20.jsonl").write_text("\n".join(lines) + "\n")


def vocab_fixture(rng):
    entries, seen = [], set()
    while len(entries) < 200:
        w = "".join(rng.choice(LETTERS) for _ in range(rng.randint(1, 6)))
        if rng.random() < 0.3:
            w = "##" + w
        if w not in seen:
            seen.add(w)
            entries.append(w)
    (OUT / "vocab_200.txt").write_text("\n".join(entries) + "\n")


def roundtrip_fixture(rng):
    stems = sorted({"".join(rng.choice(LETTERS) for _ in range(rng.randint(2, 5))) for _ in range(80)})
    suffixes = sorted({"".join(rng.choice(LETTERS) for _ in range(rng.randint(1, 3))) for _ in range(30)})
    vocab = stems + ["##" + s for s in suffixes] + list(LETTERS) + ["##" + c for c in LETTERS]
    vocab = list(dict.fromkeys(vocab))
    (OUT / "wordpiece_vocab.txt").write_text("\n".join(vocab) + "\n")
    words = []
    for _ in range(1000):
        w = rng.choice(stems) + "".join(rng.choice(suffixes) for _ in range(rng.randint(0, 2)))
        if rng.random() < 0.2:
            w = "".join(rng.choice(LETTERS) for _ in range(rng.randint(1, 8)))
        words.append(w)
    (OUT / "words_1000.txt").write_text("\n".join(words) + "\n")


def f1_fixture():
    labels = ["NA", "founded_by", "member_of", "located_in"]
    # (gold, pred)
    pairs = [
        ("founded_by", "founded_by"), ("founded_by", "member_of"), ("founded_by", "NA"),
        ("member_of", "member_of"), ("member_of", "member_of"), ("member_of", "located_in"),
        ("located_in", "located_in"), ("located_in", "NA"), ("NA", "NA"),
        ("NA", "founded_by"), ("NA", "located_in"), ("founded_by", "founded_by"),
    ]

    def f1(tp, p, g):
        prec = Fraction(tp, p) if p else Fraction(0)
        rec = Fraction(tp, g) if g else Fraction(0)
        return 2 * prec * rec / (prec + rec) if prec + rec else Fraction(0)

    tp = sum(1 for g, p in pairs if p == g and p != "NA")
    pred_pos = sum(1 for g, p in pairs if p != "NA")
    gold_pos = sum(1 for g, p in pairs if g != "NA")
    micro = f1(tp, pred_pos, gold_pos)
    per = []
    for r in labels[1:]:
        t = sum(1 for g, p in pairs if g == r and p == r)
        per.append(f1(t, sum(1 for g, p in pairs if p == r), sum(1 for g, p in pairs if g == r)))
    macro = sum(per) / len(per)
    doc = {
        "labels": labels,
        "na_label": "NA",
        "predictions": [{"gold": g, "pred": p} for g, p in pairs],
        "confusion": {"tp": tp, "predicted_positive": pred_pos, "gold_positive": gold_pos},
        "expected_micro_f1": float(micro),
        "expected_macro_f1": float(macro),
        "expected_micro_f1_fraction": str(micro),
        "expected_macro_f1_fraction": str(macro),
    }
    (OUT / "f1_12.json").write_text(json.dumps(doc, indent=2) + "\n")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240611)
    conllu_fixture(rng)
    graphs_fixture(rng)
    vocab_fixture(rng)
    roundtrip_fixture(rng)
    f1_fixture()


if __name__ == "__main__":
    main()
