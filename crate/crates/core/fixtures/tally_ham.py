#!/usr/bin/env python3
"""Independent reader for .ham coefficient files.

Prints one line per term (kind p q spin spin_q sx sy sz value) followed by
per-kind counts before and after the default thresholds. Used to freeze the
expected term multiset and counts of the bundled fixtures.
"""
import sys
from collections import Counter

KINDS = ["OnSiteEnergy", "Hopping", "CoulombOnSite", "CoulombOffSite",
         "ExchangeDensity", "ExchangeSpinFlip", "ExchangePairHop"]
FAMILY = {"OnSiteEnergy": "t", "Hopping": "t", "CoulombOnSite": "U",
          "CoulombOffSite": "U", "ExchangeDensity": "J",
          "ExchangeSpinFlip": "J", "ExchangePairHop": "J"}
THRESH = {"t": 0.01, "U": 0.20, "J": 0.20}


def spins(tag):
    return ["up", "down"] if tag == "both" else [tag]


def read(path):
    terms = []
    for raw in open(path):
        tok = raw.split("#")[0].split()
        if not tok or tok[0] == "norb":
            continue
        key = tok[0]
        if key == "e":
            p, sx, sy, sz, tag, v = tok[1:]
            for s in spins(tag):
                terms.append(("OnSiteEnergy", p, "-", s, "-", sx, sy, sz, v))
        elif key == "t":
            p, q, sx, sy, sz, tag, v = tok[1:]
            for s in spins(tag):
                terms.append(("Hopping", p, q, s, "-", sx, sy, sz, v))
        elif key == "U":
            p, q, sx, sy, sz, v = tok[1:]
            if p == q and (sx, sy, sz) == ("0", "0", "0"):
                terms.append(("CoulombOnSite", p, "-", "-", "-", sx, sy, sz, v))
            else:
                for s in ("up", "down"):
                    for s2 in ("up", "down"):
                        terms.append(("CoulombOffSite", p, q, s, s2, sx, sy, sz, v))
        elif key == "J":
            p, q, sx, sy, sz, v = tok[1:]
            for s in ("up", "down"):
                terms.append(("ExchangeDensity", p, q, s, "-", sx, sy, sz, v))
            terms.append(("ExchangeSpinFlip", p, q, "-", "-", sx, sy, sz, v))
            terms.append(("ExchangePairHop", p, q, "-", "-", sx, sy, sz, v))
        else:
            raise SystemExit(f"unsupported keyword {key}")
    return terms


def kept(t):
    return abs(float(t[-1])) >= THRESH[FAMILY[t[0]]]


def main():
    terms = read(sys.argv[1])
    for t in sorted(terms):
        print(" ".join(t))
    raw = Counter(t[0] for t in terms)
    thr = Counter(t[0] for t in terms if kept(t))
    print("counts", " ".join(str(raw[k]) for k in KINDS))
    print("thresholded", " ".join(str(thr[k]) for k in KINDS))


if __name__ == "__main__":
    main()
