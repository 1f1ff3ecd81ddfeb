#!/usr/bin/env python3
"""Independent oracle for the fixture corpus: normalization, sentence census,
and bigram counts. Values printed here get frozen into the Rust tests.

Implements the documented rules directly with Python's re module so the Rust
implementation (hand-rolled scanners) is checked against a second codebase.
"""
import math
import re
from collections import Counter

PAUSE_RE = re.compile(r"\.{2,}|-{2,}|…")
RUN_RE = re.compile(r"[A-Za-z'’]+")
UH_RE = re.compile(r"u+h+$")
UM_RE = re.compile(r"u+[hm]?m+$")


def normalize(line):
    """Return cleaned token list, or None if the line has no disfluency."""
    had = False
    # 1. pause variants -> (pause)
    line, n = PAUSE_RE.subn(" (pause) ", line)
    had |= n > 0

    # 2. filler variants -> (uh)/(um), whole alphabetic runs only
    def sub_filler(m):
        nonlocal had
        tok = m.group(0).replace("'", "").replace("’", "").lower()
        if UH_RE.fullmatch(tok):
            had = True
            return " (uh) "
        if UM_RE.fullmatch(tok):
            had = True
            return " (um) "
        return m.group(0)

    line = RUN_RE.sub(sub_filler, line)
    if not had:
        return None

    # 3+4. lowercase, strip punctuation/digits, tokenize.
    toks = []
    for piece in line.split():
        if piece in ("(pause)", "(uh)", "(um)"):
            toks.append(piece)
            continue
        for run in RUN_RE.findall(piece):
            w = run.replace("'", "").replace("’", "").lower()
            if w:
                toks.append(w)
    return toks


def main():
    with open("/root/crate/crates/disflow/tests/data/mini_corpus.txt", encoding="utf-8") as f:
        raw = [l.rstrip("\n") for l in f]

    sents = [normalize(l) for l in raw]
    sents = [s for s in sents if s is not None]
    print(f"sentences: {len(sents)}")

    fillers = {"(pause)", "(uh)", "(um)"}
    table = Counter()
    for s in sents:
        toks = ["<s>"] + s
        for a, b in zip(toks, toks[1:]):
            if b in fillers and a not in fillers:
                table[(a, b, "after")] += 1
            if a in fillers and b not in fillers:
                table[(a, b, "before")] += 1  # anchor listed first below

    # re-key before-entries as (anchor, filler, side)
    fixed = Counter()
    for (x, y, side), n in table.items():
        if side == "after":
            fixed[(x, y, "after")] += n
        else:
            fixed[(y, x, "before")] += n

    print(f"distinct entries: {len(fixed)}")
    print(f"total count mass: {sum(fixed.values())}")
    top = sorted(fixed.items(), key=lambda kv: (-kv[1], kv[0]))
    for (a, f_, s), n in top[:12]:
        print(f"  {a}\t{f_}\t{s}\t{n}")
    for probe in [("let", "(pause)", "after"), ("us", "(pause)", "after"),
                  ("i", "(um)", "after"), ("<s>", "(um)", "after"),
                  ("the", "(uh)", "after")]:
        print(f"probe {probe}: {fixed.get(probe, 0)}")

    # unigram counts over cleaned sentences (for select_representative)
    uni = Counter()
    for s in sents:
        uni.update(s)
    scored = []
    for idx, s in enumerate(sents):
        score = sum(math.log(uni[t]) for t in s) / len(s)
        scored.append((idx, score))
    scored.sort(key=lambda t: (-t[1], t[0]))
    print("top-3 representative (idx, score):")
    for idx, sc in scored[:3]:
        print(f"  {idx}\t{sc:.12f}\t{' '.join(sents[idx])}")


if __name__ == "__main__":
    main()
